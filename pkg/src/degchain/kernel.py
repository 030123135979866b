"""Growth models and the transition structure of the per-node degree chains.

A node that joins at time ``i`` starts with degree ``m_i`` and, at every later
step ``t -> t + 1``, either keeps its degree or gains exactly one link.  The
probability of gaining a link is linear in the current degree ``k``::

    constant     k / (2 t)
    power        (theta + 1) k / (2 t)
    logarithmic  k ln t / (2 t (ln t - 1))

``rate_slope`` returns the coefficient of ``k`` in these expressions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator

from degchain.errors import DegenerateSegment, EmptyRange, OutOfRangeProbability


class Family(str, enum.Enum):
    CONSTANT = "constant"
    POWER = "power"
    LOGARITHMIC = "log"

    @classmethod
    def parse(cls, name: str) -> "Family":
        aliases = {
            "ba": cls.CONSTANT,
            "constant": cls.CONSTANT,
            "power": cls.POWER,
            "log": cls.LOGARITHMIC,
            "logarithmic": cls.LOGARITHMIC,
        }
        try:
            return aliases[name.lower()]
        except KeyError:
            raise ValueError(f"unknown model family {name!r}") from None


# Integer codes shared with the compiled evolution loop.
FAMILY_CODES = {Family.CONSTANT: 0, Family.POWER: 1, Family.LOGARITHMIC: 2}


@dataclass(frozen=True)
class GrowthModel:
    """A growth rule: which family, links-per-step base ``m``, exponent
    ``theta`` (power family only) and the seed-graph size ``m0`` used by the
    simulator."""

    family: Family
    m: int
    theta: float = 0.0
    m0: int | None = None

    def __post_init__(self):
        family = Family.parse(self.family) if isinstance(self.family, str) else self.family
        object.__setattr__(self, "family", Family(family))
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m}")
        object.__setattr__(self, "m", int(self.m))
        if self.family is Family.POWER:
            if not 0.0 <= self.theta < 1.0:
                raise ValueError(f"theta must lie in [0, 1), got {self.theta}")
            object.__setattr__(self, "theta", float(self.theta))
        else:
            object.__setattr__(self, "theta", 0.0)
        m0 = max(self.m + 1, 3) if self.m0 is None else int(self.m0)
        if m0 < self.m:
            raise ValueError(f"m0 must be at least m, got m0={m0}, m={self.m}")
        object.__setattr__(self, "m0", m0)

    @classmethod
    def constant(cls, m: int, m0: int | None = None) -> "GrowthModel":
        return cls(Family.CONSTANT, m, m0=m0)

    @classmethod
    def power(cls, m: int, theta: float, m0: int | None = None) -> "GrowthModel":
        return cls(Family.POWER, m, theta=theta, m0=m0)

    @classmethod
    def logarithmic(cls, m: int, m0: int | None = None) -> "GrowthModel":
        return cls(Family.LOGARITHMIC, m, m0=m0)

    @property
    def code(self) -> int:
        return FAMILY_CODES[self.family]

    def to_dict(self) -> dict:
        out = {"family": self.family.value, "m": self.m, "m0": self.m0}
        if self.family is Family.POWER:
            out["theta"] = self.theta
        return out


@dataclass(frozen=True)
class TransitionRow:
    stay: float
    advance: float

    def __post_init__(self):
        if not 0.0 <= self.advance <= 1.0:
            raise OutOfRangeProbability(f"advance probability {self.advance} outside [0, 1]")


@dataclass(frozen=True)
class Segment:
    start: int
    end: int
    initial_degree: int

    @property
    def size(self) -> int:
        return self.end - self.start + 1


@dataclass(frozen=True)
class SegmentPlan:
    segments: tuple[Segment, ...]

    def __iter__(self) -> Iterator[Segment]:
        return iter(self.segments)

    def __len__(self) -> int:
        return len(self.segments)

    @property
    def breakpoints(self) -> list[int]:
        return [seg.start for seg in self.segments]

    def to_list(self) -> list[dict]:
        return [
            {"start": s.start, "end": s.end, "initial_degree": s.initial_degree}
            for s in self.segments
        ]


def _power_at_most(v: int, i: int, theta: float) -> bool:
    """Whether ``v <= i ** theta``."""
    if v <= 1:
        return True
    lhs = math.log(v) / theta
    rhs = math.log(i)
    if abs(lhs - rhs) > 1e-9 * max(1.0, rhs):
        return lhs < rhs
    # near tie: v**(1/theta) is within rounding of i
    inv = 1.0 / theta
    n = round(inv)
    if abs(inv - n) < 1e-9:
        return v**n <= i
    return v**inv <= i


def _floor_power(i: int, theta: float) -> int:
    """Exact ``floor(i ** theta)`` for integer ``i >= 1``."""
    if theta == 0.0:
        return 1
    v = int(math.floor(math.exp(theta * math.log(i))))
    while _power_at_most(v + 1, i, theta):
        v += 1
    while v > 1 and not _power_at_most(v, i, theta):
        v -= 1
    return v


def _floor_log(i: int) -> int:
    """Exact ``floor(ln i)`` for integer ``i >= 1``."""
    v = int(math.floor(math.log(i)))
    # e**v is never an integer for v >= 1, so the float comparisons are safe
    while math.exp(v + 1) <= i:
        v += 1
    while v > 0 and math.exp(v) > i:
        v -= 1
    return v


def _step_value(model: GrowthModel, i: int) -> int:
    if model.family is Family.CONSTANT:
        return 1
    if model.family is Family.POWER:
        return _floor_power(i, model.theta)
    return _floor_log(i)


def initial_degree(model: GrowthModel, i: int) -> int:
    """Degree ``m_i`` with which node ``i`` enters the network."""
    if i < 1:
        raise ValueError(f"node time must be >= 1, got {i}")
    return model.m * _step_value(model, i)


def rate_slope(model: GrowthModel, t: float) -> float:
    """Coefficient of ``k`` in the attachment probability at step time ``t``.

    Raises OutOfRangeProbability when the denominator is non-positive.
    """
    if t <= 0:
        raise OutOfRangeProbability(f"step time must be positive, got {t}")
    if model.family is Family.CONSTANT:
        return 1.0 / (2.0 * t)
    if model.family is Family.POWER:
        return (model.theta + 1.0) / (2.0 * t)
    lt = math.log(t)
    if lt - 1.0 <= 0.0:
        raise OutOfRangeProbability(
            f"logarithmic model needs ln t > 1, got t={t} (ln t - 1 = {lt - 1.0:.4g})"
        )
    return lt / (2.0 * t * (lt - 1.0))


def attach_advance_probability(model: GrowthModel, k: int, t: float) -> float:
    """Probability that a node of degree ``k`` gains a link during step ``t -> t+1``."""
    if k < 1:
        raise ValueError(f"degree must be >= 1, got {k}")
    p = k * rate_slope(model, t)
    if p > 1.0:
        raise OutOfRangeProbability(
            f"attachment probability {p:.6g} > 1 for k={k}, t={t}; start the run later"
        )
    return p


def transition_row(model: GrowthModel, k: int, t: float) -> TransitionRow:
    advance = attach_advance_probability(model, k, t)
    return TransitionRow(stay=1.0 - advance, advance=advance)


def _next_breakpoint(model: GrowthModel, i: int, t: int) -> int:
    """Smallest node time > i whose step value exceeds that of i, or t + 1."""
    v = _step_value(model, i)
    if model.family is Family.CONSTANT or (model.family is Family.POWER and model.theta == 0.0):
        return t + 1
    log_jump = math.log(v + 1) / model.theta if model.family is Family.POWER else v + 1.0
    if log_jump > math.log(t + 1) + 1e-9:
        return t + 1
    guess = math.ceil(math.exp(log_jump))
    guess = max(guess, i + 1)
    while guess > i + 1 and _step_value(model, guess - 1) > v:
        guess -= 1
    while _step_value(model, guess) <= v:
        guess += 1
    return min(guess, t + 1)


def segment_plan(model: GrowthModel, S: int, t: int) -> SegmentPlan:
    """Split node times ``[S, t]`` into maximal runs of constant initial degree."""
    if S > t:
        raise EmptyRange(f"empty node range: S={S} > t={t}")
    if S < 1:
        raise ValueError(f"S must be >= 1, got {S}")
    segments = []
    start = S
    while start <= t:
        mi = initial_degree(model, start)
        if mi < 1:
            raise DegenerateSegment(f"node {start} has initial degree 0 under {model.family.value}")
        nxt = _next_breakpoint(model, start, t)
        segments.append(Segment(start, nxt - 1, mi))
        start = nxt
    return SegmentPlan(tuple(segments))


def _first_step_ok(model: GrowthModel, S: int) -> bool:
    m_s = initial_degree(model, S)
    if m_s < 1:
        return False
    try:
        attach_advance_probability(model, m_s, S)
    except OutOfRangeProbability:
        return False
    return True


def default_start(model: GrowthModel, t: int | None = None) -> int:
    """First node time included in a run when none is given.

    Anchors: 1 for the constant family, the first node of the second segment
    (floor(i**theta) = 2) for the power family, the first node of the third
    segment (floor(ln i) = 3) for the logarithmic family.  A power anchor
    beyond ``t`` falls back to 1.  From the anchor the start moves up until
    the newest node's first step is a valid probability (for the constant
    family this gives ``ceil(m / 2)``).
    """
    if model.family is Family.POWER and model.theta > 0.0:
        horizon = 2**62 if t is None else t
        S = _next_breakpoint(model, 1, horizon)
        if S > horizon:
            S = 1
    elif model.family is Family.LOGARITHMIC:
        S = _next_breakpoint(model, 8, 2**62)
    else:
        S = 1
    while not _first_step_ok(model, S):
        S += 1
    return S
