"""Coefficient ring tags."""

from __future__ import annotations

import re
from dataclasses import dataclass

from sympy import GF, QQ, ZZ, isprime

_RING_PATTERN = re.compile(r"^(?:(Z)|(Q)|F(?:p=)?(\d+))$")


@dataclass(frozen=True)
class Ring:
    """Coefficient ring: the integers, the rationals or a prime field."""

    kind: str = "Z"   # "Z", "Q" or "Fp"
    p: int = 0        # characteristic, only for "Fp"

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Fp"):
            raise ValueError(f"Unknown ring kind: {self.kind}")
        if self.kind == "Fp" and not isprime(self.p):
            raise ValueError(f"F_p needs a prime characteristic, got p={self.p}")

    @classmethod
    def parse(cls, text: str) -> "Ring":
        """Parse ``Z``, ``Q``, ``F2`` or ``Fp=<p>``."""
        match = _RING_PATTERN.match(text.strip())
        if match is None:
            raise ValueError(f"Unknown coefficient ring '{text}' (use Z, Q, F2 or Fp=<p>)")
        if match.group(1):
            return cls("Z")
        if match.group(2):
            return cls("Q")
        return cls("Fp", int(match.group(3)))

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "Fp" else 0

    def domain(self):
        """The sympy domain for this ring."""
        if self.kind == "Z":
            return ZZ
        if self.kind == "Q":
            return QQ
        return GF(self.p)

    def reduce(self, value: int) -> int:
        """Canonical integer representative of ``value`` in this ring."""
        if self.kind == "Fp":
            return value % self.p
        return value

    def __str__(self) -> str:
        if self.kind == "Fp":
            return "F2" if self.p == 2 else f"Fp={self.p}"
        return self.kind


INTEGERS = Ring("Z")
RATIONALS = Ring("Q")
F2 = Ring("Fp", 2)
