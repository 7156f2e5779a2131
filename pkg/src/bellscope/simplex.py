"""Dense two-phase simplex over exact rationals or floats.

Small, deterministic, and certificate-producing: phase 1 either finds a
feasible basis or returns the Farkas dual vector proving infeasibility.
Bland's rule (lowest eligible index everywhere) guarantees termination
and makes the pivot sequence, hence the dual, reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .jsonnum import Number

_FLOAT_TOL = 1e-9


@dataclass
class LpResult:
    feasible: bool
    objective: Number
    solution: list | None
    dual: list | None


class _Tableau:
    def __init__(self, rows, rhs, exact: bool):
        conv = Fraction if exact else float
        self.exact = exact
        self.tol = Fraction(0) if exact else _FLOAT_TOL
        self.m = len(rows)
        self.cols = len(rows[0])
        self.flips = [False] * self.m
        self.tab: list[list] = []
        self.rhs: list = []
        for r in range(self.m):
            row = [conv(v) for v in rows[r]]
            b = conv(rhs[r])
            if b < 0:
                row = [-v for v in row]
                b = -b
                self.flips[r] = True
            self.tab.append(row + [conv(0)] * self.m)
            self.tab[r][self.cols + r] = conv(1)
            self.rhs.append(b)
        self.basis = [self.cols + r for r in range(self.m)]
        self.width = self.cols + self.m

    def _pivot(self, r: int, c: int, obj: list) -> None:
        piv = self.tab[r][c]
        self.tab[r] = [v / piv for v in self.tab[r]]
        self.rhs[r] = self.rhs[r] / piv
        for r2 in range(self.m):
            if r2 == r:
                continue
            factor = self.tab[r2][c]
            if factor == 0:
                continue
            row_r = self.tab[r]
            self.tab[r2] = [v2 - factor * v1 for v2, v1 in zip(self.tab[r2], row_r)]
            self.rhs[r2] -= factor * self.rhs[r]
        factor = obj[c]
        if factor != 0:
            for j in range(self.width):
                obj[j] -= factor * self.tab[r][j]
        self.basis[r] = c

    def _minimize(self, obj: list, allowed_width: int) -> None:
        while True:
            entering = -1
            for j in range(allowed_width):
                if obj[j] < -self.tol:
                    entering = j
                    break
            if entering < 0:
                return
            leave = -1
            best_ratio = None
            for r in range(self.m):
                coeff = self.tab[r][entering]
                if coeff > self.tol:
                    ratio = self.rhs[r] / coeff
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and self.basis[r] < self.basis[leave])
                    ):
                        best_ratio = ratio
                        leave = r
            if leave < 0:
                raise RuntimeError("LP unbounded; malformed input")
            self._pivot(leave, entering, obj)

    def phase1(self) -> tuple[Number, list]:
        """Minimize the artificial sum; returns (value, reduced-cost row)."""
        obj = []
        for j in range(self.width):
            cost = 1 if j >= self.cols else 0
            obj.append(cost - sum(self.tab[r][j] for r in range(self.m)))
        obj = [Fraction(v) if self.exact else float(v) for v in obj]
        self._minimize(obj, self.width)
        value = sum(self.rhs[r] for r in range(self.m) if self.basis[r] >= self.cols)
        return value, obj

    def farkas_dual(self, obj: list) -> list:
        """y with y.A <= 0 and y.b > 0, from the phase-1 reduced costs."""
        dual = [1 - obj[self.cols + r] for r in range(self.m)]
        return [-y if flip else y for y, flip in zip(dual, self.flips)]

    def drop_artificials(self) -> None:
        """Pivot (or prune) any artificial still basic after phase 1."""
        r = 0
        while r < self.m:
            if self.basis[r] >= self.cols:
                pivot_col = -1
                for j in range(self.cols):
                    if abs(self.tab[r][j]) > self.tol:
                        pivot_col = j
                        break
                if pivot_col >= 0:
                    self._pivot(r, pivot_col, [0] * self.width)
                    r += 1
                else:
                    del self.tab[r], self.rhs[r], self.basis[r], self.flips[r]
                    self.m -= 1
            else:
                r += 1

    def phase2(self, costs: list) -> Number:
        """Minimize costs over structural columns; artificials stay barred."""
        conv = Fraction if self.exact else float
        costs = [conv(c) for c in costs]
        obj = []
        for j in range(self.width):
            c_j = costs[j] if j < self.cols else conv(0)
            reduced = c_j
            for r in range(self.m):
                base = self.basis[r]
                if base < self.cols and costs[base] != 0:
                    reduced -= costs[base] * self.tab[r][j]
            obj.append(reduced)
        self._minimize(obj, self.cols)
        return sum(
            costs[self.basis[r]] * self.rhs[r]
            for r in range(self.m)
            if self.basis[r] < self.cols
        )

    def primal_solution(self) -> list:
        conv = Fraction if self.exact else float
        out = [conv(0)] * self.cols
        for r in range(self.m):
            if self.basis[r] < self.cols:
                out[self.basis[r]] = self.rhs[r]
        return out


def solve_feasibility(rows, rhs, *, exact: bool) -> LpResult:
    """Find w >= 0 with rows . w = rhs, or a Farkas certificate of failure."""
    t = _Tableau(rows, rhs, exact)
    value, obj = t.phase1()
    feasible = value <= (Fraction(0) if exact else _FLOAT_TOL)
    if feasible:
        return LpResult(True, value, t.primal_solution(), None)
    return LpResult(False, value, None, t.farkas_dual(obj))


def solve_max(rows, rhs, objective, *, exact: bool) -> LpResult:
    """Maximize objective . w subject to rows . w = rhs, w >= 0."""
    t = _Tableau(rows, rhs, exact)
    value, _ = t.phase1()
    if value > (Fraction(0) if exact else _FLOAT_TOL):
        return LpResult(False, value, None, None)
    t.drop_artificials()
    neg = t.phase2([-c for c in objective])
    return LpResult(True, -neg, t.primal_solution(), None)
