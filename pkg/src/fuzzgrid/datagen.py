"""Deterministic sample generation for the plane z = x + y.

Everything downstream of a seed is bit-exact: the generator is SplitMix64
with a documented draw order, so a (seed, spec) pair identifies a dataset
byte for byte across platforms. Noise is multiplicative and uniform,
each stored coordinate perturbed independently to v * (1 + u) with u in
[-p, p].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .learning import Example

MASK64 = (1 << 64) - 1

UNIFORM = "uniform"
CLUSTERED = "clustered"
DISTRIBUTIONS = (UNIFORM, CLUSTERED)

DEFAULT_DOMAIN = ((1.0, 11.0), (1.0, 11.0))

# Clustered sampling constants: half the mass is uniform background, the
# rest splits between two gaussian blobs on the domain diagonal.
BLOB_FRACTIONS = (0.3, 0.7)
BLOB_SIGMA_FRACTION = 0.08


class Rng:
    """SplitMix64 stream.

    state <- state + 0x9E3779B97F4A7C15
    t <- state
    t <- (t ^ (t >> 30)) * 0xBF58476D1CE4E5B9
    t <- (t ^ (t >> 27)) * 0x94D049BB133111EB
    out <- t ^ (t >> 31)

    All arithmetic mod 2^64. Uniform doubles take the top 53 bits.
    """

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        t = self.state
        t = ((t ^ (t >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        t = ((t ^ (t >> 27)) * 0x94D049BB133111EB) & MASK64
        return (t ^ (t >> 31)) & MASK64

    def uniform(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * 2.0**-53

    def gauss(self) -> float:
        """Standard normal via Box-Muller, first component only.

        Consumes exactly two uniform draws. u1 = 0 (possible since
        uniform() can return 0) is nudged to the smallest positive draw
        so the log stays finite.
        """
        u1 = self.uniform()
        u2 = self.uniform()
        if u1 == 0.0:
            u1 = 2.0**-53
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


@dataclass(frozen=True)
class DataSpec:
    """What to generate: size, ranges, sampling shape, noise, seed."""

    n: int
    domain: tuple = DEFAULT_DOMAIN
    distribution: str = UNIFORM
    noise_level: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one example, got n={self.n}")
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"unknown distribution {self.distribution!r}")
        if self.noise_level < 0:
            raise ValueError("noise level must be non-negative")
        for lo, hi in self.domain:
            if lo >= hi:
                raise ValueError(f"invalid domain range ({lo}, {hi})")


def _sample_inputs(spec: DataSpec, rng: Rng) -> list:
    """Input vectors in documented draw order.

    Uniform: one draw per coordinate, example-major. Clustered: per
    example one selector draw; below 0.5 the point is uniform (one draw
    per coordinate), otherwise one more draw picks the blob and each
    coordinate costs a gaussian (two draws), scaled to 8% of the range
    and clamped into the domain.
    """
    points = []
    if spec.distribution == UNIFORM:
        for _ in range(spec.n):
            points.append(
                tuple(lo + rng.uniform() * (hi - lo) for lo, hi in spec.domain)
            )
        return points
    for _ in range(spec.n):
        if rng.uniform() < 0.5:
            points.append(
                tuple(lo + rng.uniform() * (hi - lo) for lo, hi in spec.domain)
            )
            continue
        frac = BLOB_FRACTIONS[0] if rng.uniform() < 0.5 else BLOB_FRACTIONS[1]
        point = []
        for lo, hi in spec.domain:
            center = lo + frac * (hi - lo)
            value = center + rng.gauss() * BLOB_SIGMA_FRACTION * (hi - lo)
            point.append(min(max(value, lo), hi))
        points.append(tuple(point))
    return points


def sample_inputs(spec: DataSpec) -> list:
    return _sample_inputs(spec, Rng(spec.seed))


def make_plane_dataset(spec: DataSpec) -> list:
    """Examples of z = x + y under spec, noisy if requested.

    The clean inputs produce z first; only then are the stored x, y, z
    perturbed (three draws per example, in that order). noise_level 0
    consumes no noise draws at all, so a clean spec and a noisy spec with
    the same seed share identical underlying inputs.
    """
    if len(spec.domain) != 2:
        raise ValueError(
            f"plane data needs exactly 2 inputs, domain has {len(spec.domain)}"
        )
    rng = Rng(spec.seed)
    points = _sample_inputs(spec, rng)
    p = spec.noise_level
    data = []
    for x, y in points:
        z = x + y
        if p > 0:
            x = x * (1.0 + (2.0 * rng.uniform() - 1.0) * p)
            y = y * (1.0 + (2.0 * rng.uniform() - 1.0) * p)
            z = z * (1.0 + (2.0 * rng.uniform() - 1.0) * p)
        data.append(Example((x, y), z))
    return data


def write_dataset(path, data) -> None:
    """Dataset CSV: header x,y,z then one row per example, 17 digits."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("x,y,z\n")
        for ex in data:
            fh.write(f"{ex.x[0]:.17g},{ex.x[1]:.17g},{ex.z:.17g}\n")


def read_dataset(path) -> list:
    data = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "x,y,z":
            raise ValueError(f"unexpected dataset header {header!r}")
        for line_no, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ValueError(f"line {line_no}: expected 3 fields, got {len(parts)}")
            x, y, z = (float(v) for v in parts)
            data.append(Example((x, y), z))
    if not data:
        raise ValueError("dataset file contains no examples")
    return data
