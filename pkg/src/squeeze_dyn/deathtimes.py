"""Sudden death, revival intervals, and final disappearance of squeezing
along an analytic curve t -> xi^2(t).

Boundaries are bracketed on a coarse uniform scan and refined by
bisection on the predicate xi^2 >= 1; divergence tags (+inf) count as
unsqueezed points, so depolarizing blow-ups terminate intervals cleanly.
Intervals narrower than two coarse steps can be missed: that is the
documented resolution limit of the scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from ._format import SCHEMA

__all__ = [
    "SqueezedInterval",
    "first_death_time",
    "squeezed_intervals",
    "final_death_time",
    "default_coarse_step",
    "death_report",
]

#: bisection boundary tolerance in time units
REFINE_TOL = 1e-6

Evaluator = Callable[[float], float]


@dataclass(frozen=True)
class SqueezedInterval:
    """Maximal interval with xi^2 < 1 strictly inside."""

    t_start: float
    t_end: float


def _refine(evaluator: Evaluator, lo: float, hi: float, tol: float = REFINE_TOL) -> float:
    """Boundary of {xi^2 >= 1} inside [lo, hi]; evaluator(lo) and
    evaluator(hi) must straddle 1."""
    above = evaluator(hi) >= 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (evaluator(mid) >= 1.0) == above:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def first_death_time(
    evaluator: Evaluator, horizon: float, coarse_step: float
) -> float | None:
    """Smallest t <= horizon with xi^2(t) >= 1; 0 if unsqueezed at t=0,
    None if squeezed throughout."""
    if not evaluator(0.0) < 1.0:
        return 0.0
    n_steps = int(math.ceil(horizon / coarse_step))
    prev = 0.0
    for k in range(1, n_steps + 1):
        t = min(k * coarse_step, horizon)
        if evaluator(t) >= 1.0:
            return _refine(evaluator, prev, t)
        prev = t
    return None


def squeezed_intervals(
    evaluator: Evaluator, horizon: float, coarse_step: float
) -> list[SqueezedInterval]:
    """All maximal squeezed intervals within [0, horizon], boundaries
    refined by bisection."""
    n_steps = int(math.ceil(horizon / coarse_step))
    ts = [min(k * coarse_step, horizon) for k in range(n_steps + 1)]
    flags = [evaluator(t) < 1.0 for t in ts]

    intervals: list[SqueezedInterval] = []
    i = 0
    while i <= n_steps:
        if flags[i]:
            j = i
            while j + 1 <= n_steps and flags[j + 1]:
                j += 1
            start = ts[i] if i == 0 else _refine(evaluator, ts[i - 1], ts[i])
            end = ts[j] if j == n_steps else _refine(evaluator, ts[j], ts[j + 1])
            intervals.append(SqueezedInterval(start, end))
            i = j + 1
        else:
            i += 1
    return intervals


def final_death_time(
    evaluator: Evaluator, horizon: float, coarse_step: float
) -> float | None:
    """Supremum of squeezed-interval right endpoints within the horizon;
    None if still squeezed at the horizon, 0 if never squeezed."""
    intervals = squeezed_intervals(evaluator, horizon, coarse_step)
    if not intervals:
        return 0.0
    last = intervals[-1]
    if last.t_end >= horizon:
        return None
    return last.t_end


def default_coarse_step(d: float | None = None) -> float:
    """min(0.05, pi/(10 d)) so no revival narrower than a tenth of the
    kappa half-period is missed; d is the oscillation frequency of the
    driving kappa, when there is one."""
    if d is None or d <= 0:
        return 0.05
    return min(0.05, math.pi / (10.0 * d))


def death_report(
    evaluator: Evaluator,
    horizon: float,
    coarse_step: float,
    params: dict[str, object] | None = None,
) -> dict[str, object]:
    """JSON-ready summary: interval list plus first/final death times."""
    intervals = squeezed_intervals(evaluator, horizon, coarse_step)
    return {
        "schema": SCHEMA,
        "kind": "death-times",
        "params": dict(params or {}),
        "horizon": horizon,
        "coarse_step": coarse_step,
        "intervals": [[iv.t_start, iv.t_end] for iv in intervals],
        "first_death": first_death_time(evaluator, horizon, coarse_step),
        "final_death": final_death_time(evaluator, horizon, coarse_step),
    }
