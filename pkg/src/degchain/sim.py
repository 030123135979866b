"""Monte Carlo growth of preferential-attachment networks.

Targets are drawn from a list holding every edge endpoint, so a uniform pick
from the list is a degree-proportional pick of a node.  Duplicates within a
step are rejected and redrawn against the list as it stood at the start of
the step, which is sampling without replacement with the chosen node's
weight removed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from degchain.errors import EmptyRange, InsufficientNodes, MismatchedRuns
from degchain.evolve import DegreeDistribution
from degchain.kernel import Family, GrowthModel, _floor_log, _floor_power

_CHUNK = 8192


@dataclass
class SimRun:
    """Final degrees of one replication.

    ``degrees[i - 1]`` is the degree at time ``t`` of the node added at step
    ``i``; seed nodes are kept apart in ``seed_degrees``.
    """

    model: GrowthModel
    t: int
    seed: int
    rep: int
    degrees: np.ndarray
    seed_degrees: np.ndarray
    edges: int

    @property
    def degree_sum(self) -> int:
        return int(self.degrees.sum() + self.seed_degrees.sum())


def links_at(model: GrowthModel, i: int) -> int:
    """Number of links brought by the node added at step ``i``."""
    if i < 1:
        raise ValueError(f"step must be >= 1, got {i}")
    if model.family is Family.CONSTANT:
        n = model.m
    elif model.family is Family.POWER:
        n = max(1, model.m * _floor_power(i, model.theta))
    else:
        n = max(1, model.m * _floor_log(i))
    return min(n, model.m0 + i - 1)


def _seed_ring(m0: int) -> list[tuple[int, int]]:
    if m0 < 2:
        return []
    if m0 == 2:
        return [(0, 1)]
    return [(j, (j + 1) % m0) for j in range(m0)]


class _Uniforms:
    """Buffered stream of uniforms from a numpy Generator."""

    def __init__(self, rng: np.random.Generator):
        self._rng = rng
        self._buf: list[float] = []
        self._pos = 0

    def next(self) -> float:
        if self._pos == len(self._buf):
            self._buf = self._rng.random(_CHUNK).tolist()
            self._pos = 0
        u = self._buf[self._pos]
        self._pos += 1
        return u


def simulate(model: GrowthModel, t: int, seed: int, rep: int = 0) -> SimRun:
    """Grow ``t`` nodes on top of a ring of ``model.m0`` seed nodes.

    The random stream is ``default_rng([seed, rep])``, so replications are
    independent and each is reproducible on its own.
    """
    if t < 1:
        raise EmptyRange(f"t must be >= 1, got {t}")
    m0 = model.m0
    rng = _Uniforms(np.random.default_rng([seed, rep]))
    degree = [0] * (m0 + t)
    ends: list[int] = []
    edges = 0
    for a, b in _seed_ring(m0):
        ends += (a, b)
        degree[a] += 1
        degree[b] += 1
        edges += 1
    # nodes with positive degree; only they can be drawn from ``ends``
    live = sum(1 for d in degree[:m0] if d > 0)

    for i in range(1, t + 1):
        new = m0 + i - 1
        n_links = links_at(model, i)
        if n_links > live:
            raise InsufficientNodes(
                f"step {i} needs {n_links} distinct targets but only {live} nodes have degree > 0"
            )
        n_ends = len(ends)
        if n_links == 1:
            targets = [ends[int(rng.next() * n_ends)]]
        else:
            chosen: set[int] = set()
            targets = []
            while len(targets) < n_links:
                v = ends[int(rng.next() * n_ends)]
                if v not in chosen:
                    chosen.add(v)
                    targets.append(v)
        for v in targets:
            degree[v] += 1
            ends.append(v)
        ends.extend([new] * n_links)
        degree[new] = n_links
        edges += n_links
        live += 1

    arr = np.asarray(degree, dtype=np.int64)
    return SimRun(model, t, seed, rep, arr[m0:], arr[:m0], edges)


def simulate_many(model: GrowthModel, t: int, seed: int, reps: int) -> list[SimRun]:
    return [simulate(model, t, seed, rep) for rep in range(reps)]


def _check_runs(runs: Sequence[SimRun], S: int) -> tuple[GrowthModel, int]:
    if not runs:
        raise MismatchedRuns("no runs given")
    model, t = runs[0].model, runs[0].t
    for run in runs[1:]:
        if run.model != model or run.t != t:
            raise MismatchedRuns("runs differ in model or t")
    if not 1 <= S <= t:
        raise EmptyRange(f"need 1 <= S <= t, got S={S}, t={t}")
    return model, t


def replicate_histograms(runs: Sequence[SimRun], S: int) -> tuple[np.ndarray, np.ndarray]:
    """Degrees ``k`` and a ``(reps, len(k))`` array of per-run fractions over nodes S..t."""
    _, t = _check_runs(runs, S)
    k_hi = max(int(run.degrees[S - 1 :].max()) for run in runs)
    counts = np.stack([np.bincount(run.degrees[S - 1 :], minlength=k_hi + 1) for run in runs])
    return np.arange(k_hi + 1), counts / (t - S + 1)


def empirical_distribution(runs: Sequence[SimRun], S: int = 1) -> DegreeDistribution:
    model, t = _check_runs(runs, S)
    k, frac = replicate_histograms(runs, S)
    p = frac.mean(axis=0)
    keep = p > 0
    return DegreeDistribution(k=k[keep], p=p[keep], t=t, S=S, model=model)


def empirical_stderr(runs: Sequence[SimRun], S: int = 1) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-degree mean fraction and its standard error across replications."""
    k, frac = replicate_histograms(runs, S)
    reps = frac.shape[0]
    se = frac.std(axis=0, ddof=1) / np.sqrt(reps) if reps > 1 else np.full(len(k), np.nan)
    return k, frac.mean(axis=0), se
