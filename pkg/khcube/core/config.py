"""Run configuration for khcube computations."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Union

from khcube.core.cube import DEFAULT_MAX_CROSSINGS
from khcube.core.khcomplex import SignRule, normalize_direction
from khcube.homalg.rings import Ring

SUBCOMMANDS = ("kh", "khr", "z4", "triangle", "verify", "table", "bench", "oslemma")


@dataclass
class RunConfig:
    """Settings shared by every subcommand.

    The ring, variant, sign rule and direction select which complex is built;
    the caps bound the work a single request may trigger.
    """
    subcommand: str = "kh"

    # Complex
    ring: str = "Z"                     # Z, Q, F2 or Fp=<p>
    variant: str = "unreduced"          # unreduced or reduced
    signs: str = "tilde"                # tilde or delta
    direction: str = "inc"              # inc (d raises |v|) or dec

    # Caps
    max_crossings: int = DEFAULT_MAX_CROSSINGS   # cube size
    oracle_max_crossings: int = 14               # Jones state sum
    lemma_max_dim: int = 512                     # triangle lemma total dimension

    # Execution
    threads: int = 1                    # worker processes for blocks and table rows

    # Outputs
    output: Optional[str] = None        # JSON report path (stdout if None)
    dump_complex: Optional[str] = None  # JSON dump of the chain complex
    dump_cube: Optional[str] = None     # JSON dump of the cube descriptor

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ValueError(f"Unknown subcommand '{self.subcommand}'")
        for name in ("max_crossings", "oracle_max_crossings", "lemma_max_dim", "threads"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.variant not in ("unreduced", "reduced"):
            raise ValueError(f"Unknown variant '{self.variant}' (use unreduced or reduced)")
        if self.signs not in ("tilde", "tilde_delta", "delta"):
            raise ValueError(f"Unknown sign rule '{self.signs}' (use tilde or delta)")
        normalize_direction(self.direction)
        self.ring_tag()

    def ring_tag(self) -> Ring:
        """Parsed coefficient ring."""
        return Ring.parse(self.ring)

    def sign_rule(self) -> SignRule:
        return SignRule.from_flag(self.signs)

    @property
    def full_direction(self) -> str:
        return normalize_direction(self.direction)

    def to_dict(self) -> dict:
        """Complex-selecting settings only (no paths), as embedded in reports."""
        return {
            "ring": str(self.ring_tag()),
            "variant": self.variant,
            "signs": self.sign_rule().variant,
            "direction": self.full_direction,
        }

    def to_json(self, filepath: Union[str, Path]) -> Path:
        """Save configuration to JSON."""
        filepath = Path(filepath)
        with open(filepath, "w") as f:
            json.dump(asdict(self), f, indent=2, sort_keys=True)
        return filepath

    @classmethod
    def from_json(cls, filepath: Union[str, Path]) -> "RunConfig":
        """Load configuration from JSON."""
        with open(filepath, "r") as f:
            data = json.load(f)
        return cls(**data)


def set_config(**kwargs) -> RunConfig:
    """Create a run configuration with custom parameters.

    ``reduced=True`` is accepted as shorthand for ``variant="reduced"``.

    Example:
        config = set_config(ring="F2", reduced=True, threads=4)
    """
    reduced = kwargs.pop("reduced", False)
    config = RunConfig(**kwargs)
    if reduced:
        config.variant = "reduced"
    return config
