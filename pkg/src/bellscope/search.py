"""Derivative-free maximization by coordinate golden-section refinement.

Deliberately simple: random restarts, then repeated 1-D golden-section
sweeps over each coordinate inside a shrinking trust window.  Everything
is driven by one stdlib Random instance, so a seed fixes the whole run;
restart results merge by strict maximum, which keeps the earliest (and
therefore seed-ordered) winner on ties.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Sequence

_INV_PHI = (5 ** 0.5 - 1) / 2


@dataclass
class SearchResult:
    value: float
    point: tuple[float, ...]
    evals: int
    restarts: int


def _golden_max(f: Callable[[float], float], lo: float, hi: float, iters: int) -> tuple[float, float, int]:
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    for _ in range(iters):
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
        else:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        evals += 1
    return (c, fc, evals) if fc >= fd else (d, fd, evals)


def refine(
    objective: Callable[[Sequence[float]], float],
    start: Sequence[float],
    bounds: Sequence[tuple[float, float]],
    *,
    rounds: int,
    golden_iters: int,
    initial_step: float,
    shrink: float,
) -> tuple[float, list[float], int]:
    """Coordinate sweeps around `start`; returns (value, point, evals)."""
    x = list(start)
    best = objective(x)
    evals = 1
    step = initial_step
    for _ in range(rounds):
        for i, (lo, hi) in enumerate(bounds):
            window_lo = max(lo, x[i] - step)
            window_hi = min(hi, x[i] + step)
            if window_hi <= window_lo:
                continue

            def slice_obj(v: float, i=i) -> float:
                saved = x[i]
                x[i] = v
                out = objective(x)
                x[i] = saved
                return out

            xi, fi, used = _golden_max(slice_obj, window_lo, window_hi, golden_iters)
            evals += used
            if fi > best:
                best = fi
                x[i] = xi
        step *= shrink
    return best, x, evals


def maximize(
    objective: Callable[[Sequence[float]], float],
    bounds: Sequence[tuple[float, float]],
    *,
    restarts: int,
    rounds: int,
    golden_iters: int,
    initial_step: float,
    shrink: float,
    rng: random.Random,
) -> SearchResult:
    best_value = float("-inf")
    best_point: tuple[float, ...] = tuple(lo for lo, _ in bounds)
    total_evals = 0
    for _ in range(restarts):
        start = [rng.uniform(lo, hi) for lo, hi in bounds]
        value, point, evals = refine(
            objective,
            start,
            bounds,
            rounds=rounds,
            golden_iters=golden_iters,
            initial_step=initial_step,
            shrink=shrink,
        )
        total_evals += evals
        if value > best_value:
            best_value = value
            best_point = tuple(point)
    return SearchResult(best_value, best_point, total_evals, restarts)
