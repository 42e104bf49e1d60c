"""Exact rational feasibility LPs (phase-1 revised simplex, Bland's rule).

Solves  { A w (>=|=) b,  w >= 0 }  with all arithmetic over Fraction; no
tolerances anywhere.  Infeasibility comes with a Farkas vector y with
y.A_j <= 0 for every column j, y_r >= 0 on inequality rows, and y.b > 0,
so verdicts can be re-verified without re-solving.

Columns may be added after a solve; the basis is warm-started, which is
what the column-generation path in the fractional solver relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class FeasibilityResult:
    feasible: bool
    weights: dict | None      # column index -> positive Fraction
    dual: tuple | None        # Farkas vector over rows when infeasible


class ExactFeasibilitySolver:
    """Incremental phase-1 solver for one constraint system.

    rows: rhs[r] with sense 'e' (equality) or 'g' (>=); rhs must be >= 0.
    Columns are sparse [(row, coeff), ...] lists.
    """

    def __init__(self, rhs, senses):
        self.m = len(rhs)
        self.rhs = [Fraction(x) for x in rhs]
        if any(x < 0 for x in self.rhs):
            raise ValueError("rhs entries must be non-negative")
        if len(senses) != self.m or any(s not in ("e", "g") for s in senses):
            raise ValueError("senses must be 'e'/'g' per row")
        self.senses = tuple(senses)
        self.columns: list = []
        # basis starts as the artificial identity
        self.basis = [("a", r) for r in range(self.m)]
        self.binv = [[ONE if i == j else ZERO for j in range(self.m)] for i in range(self.m)]
        self.xb = list(self.rhs)

    def add_column(self, entries) -> int:
        self.columns.append([(r, Fraction(v)) for r, v in entries])
        return len(self.columns) - 1

    # ---- internals ----

    def _entries(self, tag):
        kind, j = tag
        if kind == "c":
            return self.columns[j]
        if kind == "s":
            return [(j, -ONE)]
        return [(j, ONE)]

    def _order(self, tag):
        kind, j = tag
        return (0, j) if kind == "c" else ((1, j) if kind == "s" else (2, j))

    def solve(self) -> FeasibilityResult:
        """Run phase-1 to optimality from the current basis."""
        m = self.m
        while True:
            # phase-1 duals: cost is 1 exactly on artificial basis rows
            y = [ZERO] * m
            for i, tag in enumerate(self.basis):
                if tag[0] == "a":
                    row = self.binv[i]
                    for r in range(m):
                        if row[r]:
                            y[r] += row[r]
            in_basis = set(self.basis)
            enter = None
            for j in range(len(self.columns)):
                tag = ("c", j)
                if tag in in_basis:
                    continue
                red = -sum(y[r] * v for r, v in self.columns[j])
                if red < 0:
                    enter = tag
                    break
            if enter is None:
                for r in range(m):
                    if self.senses[r] == "g" and y[r] < 0 and ("s", r) not in in_basis:
                        enter = ("s", r)
                        break
            if enter is None:
                obj = sum(self.xb[i] for i, tag in enumerate(self.basis) if tag[0] == "a")
                if obj == 0:
                    weights: dict = {}
                    for i, tag in enumerate(self.basis):
                        if tag[0] == "c" and self.xb[i] != 0:
                            weights[tag[1]] = weights.get(tag[1], ZERO) + self.xb[i]
                    return FeasibilityResult(True, weights, None)
                return FeasibilityResult(False, None, tuple(y))
            d = [ZERO] * m
            for r, v in self._entries(enter):
                if v:
                    for i in range(m):
                        if self.binv[i][r]:
                            d[i] += self.binv[i][r] * v
            leave, ratio = -1, None
            for i in range(m):
                if d[i] > 0:
                    rt = self.xb[i] / d[i]
                    if (ratio is None or rt < ratio
                            or (rt == ratio
                                and self._order(self.basis[i]) < self._order(self.basis[leave]))):
                        ratio, leave = rt, i
            if leave < 0:
                raise RuntimeError("phase-1 cannot be unbounded")
            piv = d[leave]
            self.binv[leave] = [x / piv for x in self.binv[leave]]
            self.xb[leave] /= piv
            lrow = self.binv[leave]
            lx = self.xb[leave]
            for i in range(m):
                if i != leave and d[i]:
                    f = d[i]
                    row = self.binv[i]
                    self.binv[i] = [a - f * b for a, b in zip(row, lrow)]
                    self.xb[i] -= f * lx
            self.basis[leave] = enter


def solve_feasibility(columns, rhs, senses) -> FeasibilityResult:
    solver = ExactFeasibilitySolver(rhs, senses)
    for col in columns:
        solver.add_column(col)
    return solver.solve()


def weights_satisfy(columns, weights, rhs, senses) -> bool:
    """Independent exact re-check of a claimed feasible point."""
    m = len(rhs)
    total = [ZERO] * m
    for j, w in weights.items():
        if w < 0:
            return False
        for r, v in columns[j]:
            total[r] += Fraction(w) * Fraction(v)
    for r in range(m):
        want = Fraction(rhs[r])
        if senses[r] == "e" and total[r] != want:
            return False
        if senses[r] == "g" and total[r] < want:
            return False
    return True


def farkas_valid(columns, dual, rhs, senses) -> bool:
    """Exact re-check of an infeasibility certificate against every column."""
    y = [Fraction(v) for v in dual]
    for r, s in enumerate(senses):
        if s == "g" and y[r] < 0:
            return False
    for col in columns:
        if sum(y[r] * Fraction(v) for r, v in col) > 0:
            return False
    return sum(y[r] * Fraction(b) for r, b in zip(range(len(y)), rhs)) > 0
