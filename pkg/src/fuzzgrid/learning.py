"""Three ways to learn a rule grid from (x, z) examples.

wm_learn keeps, per cell, the single best example and quantizes its
output to the nearest output-set center. cluster_learn averages every
example into every cell it touches, weighted by membership. The
neuro-fuzzy learner starts from either of two initializations and tunes
the conclusions by per-example gradient descent while the membership
functions stay fixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .inference import FuzzyModel, NoActiveRuleError
from .membership import GAUSSIAN, TRIANGULAR, Partition

EMPTY_WEIGHT_THRESHOLD = 1e-12

INIT_ZERO = "zero"
INIT_CLUSTER = "cluster"


@dataclass(frozen=True)
class Example:
    """One observation: input vector x and measured output z."""

    x: tuple
    z: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in self.x) or not math.isfinite(self.z):
            raise ValueError("examples must contain finite values only")


@dataclass(frozen=True)
class NeuroFuzzyConfig:
    alpha: float = 0.1
    epochs: int = 50
    init: str = INIT_CLUSTER

    def __post_init__(self):
        # alpha = 0 is allowed so that "no learning" degenerates to the
        # initialization; only negative rates are rejected.
        if self.alpha < 0:
            raise ValueError(f"alpha must be non-negative, got {self.alpha}")
        if self.epochs < 0:
            raise ValueError(f"epochs must be non-negative, got {self.epochs}")
        if self.init not in (INIT_ZERO, INIT_CLUSTER):
            raise ValueError(f"unknown init mode {self.init!r}")


def _check_data(data):
    if not data:
        raise ValueError("cannot learn from an empty dataset")


def _check_kind(partitions, kind, what):
    for p in partitions:
        if p.kind != kind:
            raise ValueError(f"{what} requires {kind} partitions, got {p.kind}")


def wm_learn(data, inputs, output: Partition) -> FuzzyModel:
    """Best-example rule extraction on triangular partitions.

    Each example nominates the cell given by its per-variable
    maximum-membership sets, with an implication degree equal to the
    product of its input memberships in those sets. Within a cell the
    highest-degree example wins (earliest example on exact ties) and its
    output is quantized to the center of its best output set.
    """
    _check_data(data)
    _check_kind(list(inputs) + [output], TRIANGULAR, "wm_learn")
    best = {}  # cell -> (degree, arrival order, output set index)
    for order, ex in enumerate(data):
        idx = tuple(p.best(v) for p, v in zip(inputs, ex.x))
        degree = 1.0
        for p, v, i in zip(inputs, ex.x, idx):
            degree *= float(p.degrees(v)[i])
        out_idx = output.best(ex.z)
        cur = best.get(idx)
        if cur is None or degree > cur[0]:
            best[idx] = (degree, order, out_idx)
    shape = tuple(p.n for p in inputs)
    conclusions = np.full(shape, np.nan)
    degrees = np.full(shape, np.nan)
    for idx, (degree, _, out_idx) in best.items():
        conclusions[idx] = output.centers[out_idx]
        degrees[idx] = degree
    return FuzzyModel(inputs, output, conclusions, degrees)


def cluster_learn(data, inputs, output: Partition) -> FuzzyModel:
    """Membership-weighted averaging of all examples into each cell.

    With triangular partitions each example only reaches its local
    neighbourhood of cells; gaussian partitions give every example a
    nonzero weight everywhere, so no cell stays empty. Cells whose total
    weight never exceeds a small threshold are left empty rather than
    divided by almost-zero.
    """
    _check_data(data)
    kinds = {p.kind for p in inputs}
    if len(kinds) != 1:
        raise ValueError("input partitions must all share one membership kind")
    d = len(inputs)
    mats = [
        np.stack([p.degrees(ex.x[i]) for ex in data]) for i, p in enumerate(inputs)
    ]
    zs = np.array([ex.z for ex in data])
    letters = "abcdefghij"[:d]
    lhs = ",".join("k" + c for c in letters)
    den = np.einsum(f"{lhs}->{letters}", *mats)
    num = np.einsum(f"{lhs},k->{letters}", *mats, zs)
    conclusions = np.full(tuple(p.n for p in inputs), np.nan)
    ok = den > EMPTY_WEIGHT_THRESHOLD
    conclusions[ok] = num[ok] / den[ok]
    degrees = np.where(ok, 1.0, np.nan)
    return FuzzyModel(inputs, output, conclusions, degrees)


def conclusion_gradient(model: FuzzyModel, ex: Example):
    """Partials of E = (f(x) - z)^2 / 2 with respect to each conclusion.

    Returns (cell index, partial) pairs for the non-empty cells activated
    by ex.x. Raises NoActiveRuleError when the example falls into a
    coverage gap, since the error is undefined there.
    """
    w = model.weight_grid(ex.x)
    mask = model.filled_mask()
    den = float(w[mask].sum())
    if den <= 0.0:
        raise NoActiveRuleError(f"no active rule at {ex.x}")
    f = float((w[mask] * model.conclusions[mask]).sum()) / den
    residual = f - ex.z
    out = []
    for idx in np.ndindex(model.shape):
        if mask[idx] and w[idx] > 0.0:
            out.append((idx, residual * float(w[idx]) / den))
    return out


def neurofuzzy_learn(data, inputs, output: Partition, cfg: NeuroFuzzyConfig) -> FuzzyModel:
    """Gradient tuning of conclusions on gaussian partitions.

    Initialization is either the cluster model or a flat grid at the
    output midpoint. Then cfg.epochs passes run over the dataset in
    order, updating all conclusions after every single example:

        c_r <- c_r - alpha * (f(x) - z) * w_r / sum(w)

    The per-example scheduling is deliberate; it is what makes large
    learning rates chase individual noisy examples.
    """
    _check_data(data)
    _check_kind(inputs, GAUSSIAN, "neurofuzzy_learn")
    if cfg.init == INIT_CLUSTER:
        init = cluster_learn(data, inputs, output)
        conclusions = init.conclusions.copy()
    else:
        shape = tuple(p.n for p in inputs)
        conclusions = np.full(shape, (output.lo + output.hi) / 2.0)
    mask = ~np.isnan(conclusions)
    flat_idx = np.flatnonzero(mask.ravel())
    c = conclusions.ravel()[flat_idx]

    # Weights never change across epochs, so normalize them once.
    weights = []
    targets = []
    for ex in data:
        w = inputs[0].degrees(inputs[0].clamp(ex.x[0]))
        for p, v in zip(inputs[1:], ex.x[1:]):
            w = np.multiply.outer(w, p.degrees(p.clamp(v)))
        w = w.ravel()[flat_idx]
        s = w.sum()
        if s <= 0.0:
            continue
        weights.append(w / s)
        targets.append(ex.z)

    for _ in range(cfg.epochs):
        for w, z in zip(weights, targets):
            f = float(w @ c)
            c = c - cfg.alpha * (f - z) * w

    out = np.full(conclusions.size, np.nan)
    out[flat_idx] = c
    out = out.reshape(conclusions.shape)
    return FuzzyModel(inputs, output, out, np.where(mask, 1.0, np.nan))
