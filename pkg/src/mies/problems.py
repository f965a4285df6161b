"""Benchmark objectives on R^dco x Z^din and the no-worse ranking."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ContractError

__all__ = [
    "ProblemKind",
    "ProblemSpec",
    "MixedSolution",
    "sphere_int_value",
    "is_no_worse",
    "no_worse_from_norms",
    "integer_part_optimal",
]


class ProblemKind(str, enum.Enum):
    SPHERE_INT = "SphereInt"
    LEXICO_SPHERE_INT = "LexicoSphereInt"


@dataclass(frozen=True)
class ProblemSpec:
    kind: ProblemKind
    dco: int
    din: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", ProblemKind(self.kind))
        if int(self.dco) != self.dco or self.dco < 1:
            raise ContractError(f"dco must be a positive integer, got {self.dco!r}")
        if int(self.din) != self.din or self.din < 0:
            raise ContractError(f"din must be a nonnegative integer, got {self.din!r}")

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "dco": self.dco, "din": self.din}


@dataclass(frozen=True)
class MixedSolution:
    """A candidate ``(x, z)``; non-finite continuous parts are rejected."""

    x: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        z = np.atleast_1d(np.asarray(self.z))
        if z.size and not np.issubdtype(z.dtype, np.integer):
            if not np.all(z == np.round(z)):
                raise ContractError("z must be integer valued")
        z = z.astype(np.int64)
        if not np.all(np.isfinite(x)):
            raise ContractError("x must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)

    def check(self, spec: ProblemSpec) -> None:
        if self.x.shape != (spec.dco,) or self.z.shape != (spec.din,):
            raise ContractError(
                f"solution shape ({self.x.size}, {self.z.size}) does not match "
                f"problem ({spec.dco}, {spec.din})"
            )


def sphere_int_value(sol: MixedSolution, spec: ProblemSpec | None = None) -> float:
    """``||x||^2 + ||z||^2``."""
    if spec is not None:
        sol.check(spec)
    return float(sol.x @ sol.x) + float(sol.z @ sol.z)


def no_worse_from_norms(kind: ProblemKind, x_cand: float, z_cand: float,
                        x_inc: float, z_inc: float) -> bool:
    """Ranking on squared norms; ties accept the candidate."""
    if kind is ProblemKind.LEXICO_SPHERE_INT:
        return z_cand < z_inc or (z_cand == z_inc and x_cand <= x_inc)
    return x_cand + z_cand <= x_inc + z_inc


def is_no_worse(candidate: MixedSolution, incumbent: MixedSolution, spec: ProblemSpec) -> bool:
    """True when ``candidate`` ranks at least as well as ``incumbent``."""
    candidate.check(spec)
    incumbent.check(spec)
    return no_worse_from_norms(
        spec.kind,
        float(candidate.x @ candidate.x),
        float(candidate.z @ candidate.z),
        float(incumbent.x @ incumbent.x),
        float(incumbent.z @ incumbent.z),
    )


def integer_part_optimal(sol: MixedSolution) -> bool:
    return bool(np.all(sol.z == 0))
