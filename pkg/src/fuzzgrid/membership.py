"""Membership functions and uniform partitions.

A partition covers one variable's range [lo, hi] with n unit-height
membership functions on an evenly spaced grid of centers. Triangular
functions have half-base equal to the center spacing, so neighbours
cross at degree 0.5 and the family sums to one everywhere in range.
Gaussian functions get sigma = width_factor * spacing and never reach
zero, which trades the partition-of-unity property for global support.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TRIANGULAR = "triangular"
GAUSSIAN = "gaussian"
KINDS = (TRIANGULAR, GAUSSIAN)

DEFAULT_WIDTH_FACTOR = 0.5


@dataclass(frozen=True)
class MembershipFunction:
    """One fuzzy set: kind, center, and width.

    For triangular sets the width is the half-base (distance from the
    center to where the degree hits zero). For gaussian sets it is sigma.
    """

    kind: str
    center: float
    width: float


def membership(mf: MembershipFunction, x: float) -> float:
    """Degree of x in mf, in [0, 1]. Defined for every real x."""
    if mf.kind == TRIANGULAR:
        return max(0.0, 1.0 - abs(x - mf.center) / mf.width)
    d = (x - mf.center) / mf.width
    # np.exp, not math.exp: keeps this scalar form bit-identical to the
    # vectorized Partition.degrees, which the learners all go through
    return float(np.exp(-d * d))


class Partition:
    """Uniform family of membership functions over [lo, hi].

    Centers sit at lo + i * spacing with the last center pinned to hi
    exactly (guards against accumulated rounding when (hi - lo) / (n - 1)
    is not representable). Instances are immutable by convention; nothing
    mutates them after construction.
    """

    def __init__(self, lo, hi, n, kind, width_factor=DEFAULT_WIDTH_FACTOR):
        if lo >= hi:
            raise ValueError(f"invalid range: lo ({lo}) must be < hi ({hi})")
        if n < 2:
            raise ValueError(f"invalid count: need at least 2 sets, got {n}")
        if kind not in KINDS:
            raise ValueError(f"unknown membership kind {kind!r}")
        if width_factor <= 0:
            raise ValueError(f"invalid width factor: {width_factor} (must be > 0)")
        self.lo = float(lo)
        self.hi = float(hi)
        self.n = int(n)
        self.kind = kind
        self.width_factor = float(width_factor)
        self.spacing = (self.hi - self.lo) / (self.n - 1)
        centers = self.lo + self.spacing * np.arange(self.n, dtype=float)
        centers[-1] = self.hi
        self.centers = centers
        self.width = self.spacing if kind == TRIANGULAR else self.width_factor * self.spacing
        self.functions = tuple(
            MembershipFunction(kind, float(c), self.width) for c in centers
        )

    def degrees(self, x: float) -> np.ndarray:
        """Vector of membership degrees of x in every set, no clamping."""
        d = np.abs(x - self.centers) / self.width
        if self.kind == TRIANGULAR:
            return np.maximum(0.0, 1.0 - d)
        return np.exp(-d * d)

    def clamp(self, x: float) -> float:
        return min(max(x, self.lo), self.hi)

    def best(self, x: float) -> int:
        """Index of the maximum-degree set for x, clamped into range.

        Ties break toward the lower index (np.argmax takes the first
        maximum), which keeps results reproducible at exact midpoints.
        """
        return int(np.argmax(self.degrees(self.clamp(x))))

    def same_axis(self, other: "Partition") -> bool:
        """True when both partitions cover the same range."""
        return self.lo == other.lo and self.hi == other.hi

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return (
            self.lo == other.lo
            and self.hi == other.hi
            and self.n == other.n
            and self.kind == other.kind
            and self.width_factor == other.width_factor
        )

    def __hash__(self):
        return hash((self.lo, self.hi, self.n, self.kind, self.width_factor))

    def __repr__(self):
        return (
            f"Partition({self.lo}, {self.hi}, {self.n}, {self.kind!r}, "
            f"width_factor={self.width_factor})"
        )


def make_uniform_partition(lo, hi, n, kind, width_factor=DEFAULT_WIDTH_FACTOR) -> Partition:
    return Partition(lo, hi, n, kind, width_factor)


def best_set(p: Partition, x: float) -> int:
    return p.best(x)
