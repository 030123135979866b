"""Density evolution of the degree chains and assembly of P(k, t).

Every node's chain starts from the unit vector at its initial degree and is
pushed forward by bidiagonal transition matrices.  Within a segment of equal
initial degree the matrices of different nodes act identically on vectors
that start at the first state, so the sum over all nodes of a segment can be
carried in one vector: multiply by the step matrix, then add the unit vector
of the node that has just joined.

Truncation drops the trailing entries whose total mass falls below a per-step
budget; dropped mass is tracked, never renormalised away.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numba
import numpy as np

from degchain.errors import EmptyRange, OutOfRangeProbability
from degchain.kernel import (
    Family,
    GrowthModel,
    Segment,
    SegmentPlan,
    default_start,
    initial_degree,
    rate_slope,
    segment_plan,
)

DEFAULT_EPS = 1e-10


@dataclass
class ProbVector:
    """Mass over consecutive degrees ``offset, offset + 1, ...``."""

    offset: int
    values: np.ndarray
    dropped_mass: float = 0.0

    @property
    def degrees(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + len(self.values))

    @property
    def mass(self) -> float:
        return float(self.values.sum())

    @property
    def total_mass(self) -> float:
        """Explicit plus dropped mass."""
        return self.mass + self.dropped_mass

    def __len__(self) -> int:
        return len(self.values)


@dataclass
class DegreeDistribution:
    """P(k, t) over the nodes that joined at times ``S, ..., t``."""

    k: np.ndarray
    p: np.ndarray
    t: int
    S: int
    model: GrowthModel
    eps: float = 0.0
    dropped_mass_fraction: float = 0.0
    plan: SegmentPlan | None = field(default=None, repr=False)

    @property
    def nodes(self) -> int:
        return self.t - self.S + 1

    @property
    def entries(self) -> list[tuple[int, float]]:
        return list(zip(self.k.tolist(), self.p.tolist()))

    def __len__(self) -> int:
        return len(self.k)

    def prob(self, k: int) -> float:
        idx = np.searchsorted(self.k, k)
        if idx < len(self.k) and self.k[idx] == k:
            return float(self.p[idx])
        return 0.0

    def metadata(self) -> dict:
        meta = {
            "model": self.model.to_dict(),
            "t": self.t,
            "S": self.S,
            "eps": self.eps,
            "dropped_mass_fraction": self.dropped_mass_fraction,
        }
        if self.plan is not None:
            meta["segments"] = self.plan.to_list()
        return meta


@numba.njit(cache=True)
def _slope(code, theta, s):
    if code == 0:
        return 1.0 / (2.0 * s)
    if code == 1:
        return (theta + 1.0) / (2.0 * s)
    ls = math.log(s)
    return ls / (2.0 * s * (ls - 1.0))


@numba.njit(cache=True, nogil=True)
def _telescope(m_seg, a, b, t, code, theta, eps_step):
    # buf[j] holds the mass at degree m_seg + j
    buf = np.zeros(t - a + 2)
    buf[0] = 1.0
    n = 1
    dropped = 0.0
    for s in range(a, t):
        r = _slope(code, theta, s)
        # downward sweep so buf[j - 1] is still the old value when read
        for j in range(n, 0, -1):
            adv_hi = r * (m_seg + j)
            adv_lo = r * (m_seg + j - 1)
            buf[j] = buf[j] * (1.0 - adv_hi) + buf[j - 1] * adv_lo
        buf[0] = buf[0] * (1.0 - r * m_seg)
        n += 1
        if s + 1 <= b:
            buf[0] += 1.0
        tail = 0.0
        while n > 1 and tail + buf[n - 1] <= eps_step:
            tail += buf[n - 1]
            buf[n - 1] = 0.0
            n -= 1
        dropped += tail
    return buf[:n].copy(), dropped


def _slopes(model: GrowthModel, s: np.ndarray) -> np.ndarray:
    """Vectorised :func:`rate_slope` over step times ``s``."""
    if model.family is Family.CONSTANT:
        return 1.0 / (2.0 * s)
    if model.family is Family.POWER:
        return (model.theta + 1.0) / (2.0 * s)
    ls = np.log(s)
    bad = ls - 1.0 <= 0.0
    if bad.any():
        raise OutOfRangeProbability(
            f"logarithmic model needs ln t > 1 but the run steps through t={int(s[bad][0])}"
        )
    return ls / (2.0 * s * (ls - 1.0))


def _check_band(model: GrowthModel, m_start: int, a: int, t: int) -> None:
    """Raise unless every reachable state has a valid transition for s in [a, t - 1].

    The reachable band at step s tops out at degree ``m_start + s - a``.
    """
    if t <= a:
        return
    s = np.arange(a, t, dtype=float)
    adv = (m_start + (s - a)) * _slopes(model, s)
    over = adv > 1.0
    if over.any():
        j = int(np.argmax(over))
        raise OutOfRangeProbability(
            f"attachment probability {adv[j]:.6g} > 1 at t={a + j}, "
            f"k={m_start + j}; start the run later"
        )


def evolve_node(model: GrowthModel, i: int, t: int, eps: float = 0.0) -> ProbVector:
    """Distribution of the degree of node ``i`` at time ``t``.

    One numpy pass per step; this is the direct product of the one-step
    matrices and serves as the reference for :func:`accumulate_segment`.
    The per-step truncation budget is ``eps / (t - i + 1)``.
    """
    if i > t:
        raise EmptyRange(f"node {i} has not joined by time {t}")
    if eps < 0:
        raise ValueError("eps must be non-negative")
    offset = initial_degree(model, i)
    _check_band(model, offset, i, t)
    eps_step = eps / (t - i + 1)
    vals = np.ones(1)
    dropped = 0.0
    for s in range(i, t):
        adv = np.arange(offset, offset + len(vals)) * rate_slope(model, s)
        flow = vals * adv
        new = np.zeros(len(vals) + 1)
        new[:-1] = vals * (1.0 - adv)
        new[1:] += flow
        tail = np.cumsum(new[::-1])
        cut = int(np.searchsorted(tail, eps_step, side="right"))
        cut = min(cut, len(new) - 1)
        if cut:
            dropped += float(tail[cut - 1])
            new = new[:-cut]
        vals = new
    return ProbVector(offset, vals, dropped)


def accumulate_segment(
    model: GrowthModel,
    segment: Segment | tuple[int, int, int],
    t: int,
    eps: float = 0.0,
    run_nodes: int | None = None,
) -> ProbVector:
    """Sum of the degree distributions at time ``t`` of nodes ``a..b``.

    ``segment`` is ``(a, b, m_seg)``; every node in it must share initial
    degree ``m_seg``.  The truncation budget per step is ``eps / run_nodes``
    where ``run_nodes`` defaults to ``t - a + 1``.
    """
    a, b, m_seg = (
        (segment.start, segment.end, segment.initial_degree)
        if isinstance(segment, Segment)
        else segment
    )
    if not a <= b <= t:
        raise EmptyRange(f"segment ({a}, {b}) does not fit below t={t}")
    if eps < 0:
        raise ValueError("eps must be non-negative")
    _check_band(model, m_seg, a, t)
    n = run_nodes if run_nodes is not None else t - a + 1
    values, dropped = _telescope(m_seg, a, b, t, model.code, model.theta, eps / n)
    return ProbVector(m_seg, values, dropped)


def degree_distribution(
    model: GrowthModel,
    t: int,
    S: int | None = None,
    eps: float = DEFAULT_EPS,
    workers: int = 1,
) -> DegreeDistribution:
    """Assemble P(k, t) over nodes ``S..t`` from per-segment accumulators."""
    if S is None:
        S = default_start(model, t)
    if S > t:
        raise EmptyRange(f"empty node range: S={S} > t={t}")
    if S < t:
        # fail on an invalid first step before looking at segments
        rate_slope(model, S)
    plan = segment_plan(model, S, t)
    nodes = t - S + 1

    def run(seg):
        return accumulate_segment(model, seg, t, eps, run_nodes=nodes)

    if workers > 1 and len(plan) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            accs = list(pool.map(run, plan))
    else:
        accs = [run(seg) for seg in plan]

    k_lo = min(acc.offset for acc in accs)
    k_hi = max(acc.offset + len(acc) - 1 for acc in accs)
    total = np.zeros(k_hi - k_lo + 1)
    dropped = 0.0
    for acc in accs:
        lo = acc.offset - k_lo
        total[lo : lo + len(acc)] += acc.values
        dropped += acc.dropped_mass
    p = total / nodes
    keep = p > 0
    return DegreeDistribution(
        k=np.arange(k_lo, k_hi + 1)[keep],
        p=p[keep],
        t=t,
        S=S,
        model=model,
        eps=eps,
        dropped_mass_fraction=dropped / nodes,
        plan=plan,
    )


def expected_degree(model: GrowthModel, i: int, t: int) -> float:
    """Mean degree of node ``i`` at time ``t`` under the chain.

    Since the attachment probability is ``k * rate_slope(s)``, the mean obeys
    ``E(s + 1) = E(s) * (1 + rate_slope(s))``.
    """
    if i > t:
        raise EmptyRange(f"node {i} has not joined by time {t}")
    m_i = initial_degree(model, i)
    _check_band(model, m_i, i, t)
    if t == i:
        return float(m_i)
    slopes = _slopes(model, np.arange(i, t, dtype=float))
    return m_i * math.exp(math.fsum(np.log1p(slopes)))
