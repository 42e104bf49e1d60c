"""Fractional packability of covers by exact rational LP over transversals.

A uniform k-fold cover is fractionally packable when exact rational
weights on independent transversals give every slot total weight exactly
1 (the weights then sum to k automatically).  Verdicts are produced three
ways, all certificate-backed:

  * an inflexible slot (contained in no transversal) is an immediate
    infeasibility certificate (the indicator dual vector);
  * an integral packing gives a feasible weighting of unit weights;
  * otherwise the equality LP is solved exactly, either over the full
    transversal enumeration or by column generation with an exact
    branch-and-bound pricer for covers past the enumeration cap.

Everything returned is re-verifiable: weightings by independent
summation, dual vectors by pricing against all transversals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import covers as cv
from . import lp
from .covers import CorrespondenceCover, ListAssignment, slot_offsets
from .errors import PreconditionError, ResourceCapError
from .graphs import Graph

FRACPACK_SCHEMA = "coverpack.fractional-packing/1"
CERT_SCHEMA = "coverpack.infeasibility/1"


# ---------------------------------------------------------------------------
# transversals
# ---------------------------------------------------------------------------

def _direction_maps(cover: CorrespondenceCover):
    return cover.maps


def enumerate_transversals(cover: CorrespondenceCover, cap: int = 10 ** 7):
    """All independent transversals (one slot per vertex, no matching edge
    between chosen slots), DFS in vertex order, deterministic."""
    g = cover.base
    n = g.n
    maps = cover.maps
    back = [[w for w in g.adj[v] if w < v] for v in range(n)]
    choice = [0] * n
    out = []

    def rec(v):
        if v == n:
            out.append(tuple(choice))
            if len(out) > cap:
                raise ResourceCapError(
                    f"more than {cap} transversals; use column generation")
            return
        for s in range(1, cover.fold[v] + 1):
            ok = True
            for w in back[v]:
                if maps[(w, v)][choice[w]] == s:
                    ok = False
                    break
            if ok:
                choice[v] = s
                rec(v + 1)
        choice[v] = 0

    rec(0)
    return out


def count_transversals(cover: CorrespondenceCover, at_least: int | None = None) -> int:
    """Exact number of transversals; with ``at_least`` the count stops as
    soon as the threshold is reached (early-exit counting)."""
    g = cover.base
    n = g.n
    maps = cover.maps
    back = [[w for w in g.adj[v] if w < v] for v in range(n)]
    choice = [0] * n
    count = 0

    def rec(v):
        nonlocal count
        if v == n:
            count += 1
            return at_least is not None and count >= at_least
        for s in range(1, cover.fold[v] + 1):
            ok = True
            for w in back[v]:
                if maps[(w, v)][choice[w]] == s:
                    ok = False
                    break
            if ok:
                choice[v] = s
                if rec(v + 1):
                    return True
        choice[v] = 0
        return False

    rec(0)
    return count


def find_transversal(cover: CorrespondenceCover, forced: dict | None = None):
    """One transversal honouring ``forced`` (vertex -> slot), or None."""
    g = cover.base
    n = g.n
    maps = cover.maps
    forced = forced or {}
    order = sorted(range(n), key=lambda v: (v not in forced, v))
    pos = {v: i for i, v in enumerate(order)}
    choice = {}

    def rec(i):
        if i == n:
            return True
        v = order[i]
        slots = [forced[v]] if v in forced else range(1, cover.fold[v] + 1)
        for s in slots:
            ok = True
            for w in g.adj[v]:
                if w in choice and maps[(w, v)][choice[w]] == s:
                    ok = False
                    break
            if ok:
                choice[v] = s
                if rec(i + 1):
                    return True
                del choice[v]
        return False

    if rec(0):
        return tuple(choice[v] for v in range(n))
    return None


def check_flexibility(cover: CorrespondenceCover) -> dict:
    """(vertex, slot) -> whether some transversal picks that slot.

    All-true is necessary (not sufficient) for fractional packability, so
    this doubles as a fast pre-filter.
    """
    out = {}
    for v in range(cover.base.n):
        for s in range(1, cover.fold[v] + 1):
            out[(v, s)] = find_transversal(cover, {v: s}) is not None
    return out


# ---------------------------------------------------------------------------
# results
# ---------------------------------------------------------------------------

@dataclass
class FractionalPacking:
    """Positive rational weights on transversals; every slot totals 1."""

    support: tuple               # ((transversal, Fraction), ...)

    def weight(self) -> Fraction:
        return sum(w for _, w in self.support)

    def to_json(self) -> dict:
        return {"schema": FRACPACK_SCHEMA,
                "support": [{"transversal": list(t), "weight": str(w)}
                            for t, w in self.support]}


@dataclass
class InfeasibilityCertificate:
    """Farkas vector over the slot rows: y.A_I <= 0 for every transversal I
    and y.1 > 0.  ``kind`` records how it was found."""

    dual: tuple                  # Fraction per slot (flat slot order)
    kind: str                    # "inflexible-slot" | "simplex" | "column-generation"

    def to_json(self) -> dict:
        return {"schema": CERT_SCHEMA, "kind": self.kind,
                "dual": [str(x) for x in self.dual]}


def verify_fractional_packing(cover: CorrespondenceCover,
                              fp: FractionalPacking) -> bool:
    """Independent summation: transversals valid, weights positive, every
    slot covered with total weight exactly 1."""
    off, nslots = slot_offsets(cover)
    total = [Fraction(0)] * nslots
    g = cover.base
    for t, w in fp.support:
        if w <= 0 or len(t) != g.n:
            return False
        for u, v in g.edges:
            if cover.maps[(u, v)][t[u]] == t[v]:
                return False
        for v in range(g.n):
            if not 1 <= t[v] <= cover.fold[v]:
                return False
            total[off[v] + t[v] - 1] += w
    return all(x == 1 for x in total)


def max_transversal_weight(cover: CorrespondenceCover, y):
    """Exact maximum of sum(y[slot]) over transversals, by branch and
    bound, with the maximising transversal (None when no transversal
    exists).  Used both as the column pricer and as the independent
    verifier of dual certificates."""
    g = cover.base
    n = g.n
    off, _ = slot_offsets(cover)
    maps = cover.maps
    back = [[w for w in g.adj[v] if w < v] for v in range(n)]
    vmax = [max(y[off[v] + s - 1] for s in range(1, cover.fold[v] + 1))
            for v in range(n)]
    suffix = [Fraction(0)] * (n + 1)
    for v in range(n - 1, -1, -1):
        suffix[v] = suffix[v + 1] + vmax[v]
    best_val = [None]
    best_t = [None]
    choice = [0] * n

    def rec(v, acc):
        if v == n:
            if best_val[0] is None or acc > best_val[0]:
                best_val[0] = acc
                best_t[0] = tuple(choice)
            return
        if best_val[0] is not None and acc + suffix[v] <= best_val[0]:
            return
        slots = sorted(range(1, cover.fold[v] + 1),
                       key=lambda s: -y[off[v] + s - 1])
        for s in slots:
            ok = True
            for w in back[v]:
                if maps[(w, v)][choice[w]] == s:
                    ok = False
                    break
            if ok:
                choice[v] = s
                rec(v + 1, acc + y[off[v] + s - 1])
        choice[v] = 0

    rec(0, Fraction(0))
    return best_val[0], best_t[0]


def verify_infeasibility(cover: CorrespondenceCover,
                         cert: InfeasibilityCertificate) -> bool:
    """y.1 > 0 and max over all transversals of y.A_I <= 0, priced exactly."""
    y = [Fraction(x) for x in cert.dual]
    if sum(y) <= 0:
        return False
    best, _ = max_transversal_weight(cover, y)
    return best is None or best <= 0


# ---------------------------------------------------------------------------
# the solver
# ---------------------------------------------------------------------------

def _packing_to_fractional(cover, packing) -> FractionalPacking:
    return FractionalPacking(tuple((tuple(c), Fraction(1)) for c in packing.colourings))


def fractional_packing(cover: CorrespondenceCover, column_cap: int = 10 ** 6,
                       fast_paths: bool = True, column_generation: bool = False,
                       seed_columns: int = 200):
    """Feasible FractionalPacking or an InfeasibilityCertificate."""
    cover.uniform_fold()
    off, nslots = slot_offsets(cover)
    if fast_paths:
        flex = check_flexibility(cover)
        for (v, s), ok in flex.items():
            if not ok:
                dual = [Fraction(0)] * nslots
                dual[off[v] + s - 1] = Fraction(1)
                return InfeasibilityCertificate(tuple(dual), "inflexible-slot")
        from . import packing as pk
        p = pk.find_packing(cover)
        if p is not None:
            return _packing_to_fractional(cover, p)
    rhs = [Fraction(1)] * nslots
    senses = ["e"] * nslots
    if not column_generation:
        ts = enumerate_transversals(cover, cap=column_cap)
        cols = [[(off[v] + t[v] - 1, 1) for v in range(cover.base.n)] for t in ts]
        res = lp.solve_feasibility(cols, rhs, senses)
        if res.feasible:
            return FractionalPacking(tuple(sorted(
                (ts[j], w) for j, w in res.weights.items())))
        return InfeasibilityCertificate(res.dual, "simplex")
    # column generation with exact pricing
    solver = lp.ExactFeasibilitySolver(rhs, senses)
    ts: list = []
    seen = set()

    def add(t):
        if t in seen:
            return
        seen.add(t)
        ts.append(t)
        solver.add_column([(off[v] + t[v] - 1, 1) for v in range(cover.base.n)])

    try:
        for t in enumerate_transversals(cover, cap=seed_columns):
            add(t)
    except ResourceCapError:
        pass
    while True:
        res = solver.solve()
        if res.feasible:
            return FractionalPacking(tuple(sorted(
                (ts[j], w) for j, w in res.weights.items())))
        best, t = max_transversal_weight(cover, res.dual)
        if best is None or best <= 0:
            return InfeasibilityCertificate(res.dual, "column-generation")
        add(t)


@dataclass
class FractionalSweepOutcome:
    k: int
    total: int
    all_feasible: bool
    failure_index: int | None
    failure_cover: CorrespondenceCover | None
    failure_certificate: InfeasibilityCertificate | None
    failure_assignment: ListAssignment | None = None


def fractional_feasible_at(g: Graph, k: int, mode: str, jobs: int = 1,
                           stop_on_failure: bool = True) -> FractionalSweepOutcome:
    """Are all k-fold covers of the given mode fractionally packable?"""
    if mode == "correspondence":
        if jobs > 1:
            from . import sweeps
            res = sweeps.sweep_covers(g, k, "fractional", jobs=jobs,
                                      stop_on_failure=stop_on_failure)
            idx = res.failures[0] if res.failures else None
            cover = cv.cover_at_index(g, k, idx) if idx is not None else None
            cert = None
            if cover is not None:
                maybe = fractional_packing(cover)
                cert = maybe if isinstance(maybe, InfeasibilityCertificate) else None
            return FractionalSweepOutcome(k, res.total, not res.failures, idx, cover, cert)
        total = cv.count_covers(g, k)
        for idx, cover in cv.enumerate_covers(g, k):
            res = fractional_packing(cover)
            if isinstance(res, InfeasibilityCertificate):
                return FractionalSweepOutcome(k, total, False, idx, cover, res)
        return FractionalSweepOutcome(k, total, True, None, None, None)
    if mode == "list":
        total = 0
        for idx, assignment, cover in cv.enumerate_list_covers(g, k):
            total += 1
            res = fractional_packing(cover)
            if isinstance(res, InfeasibilityCertificate):
                return FractionalSweepOutcome(k, total, False, idx, cover, res, assignment)
        return FractionalSweepOutcome(k, total, True, None, None, None)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass
class FractionalNumberResult:
    value: int | None
    lower_bound: int
    witness_cover: CorrespondenceCover | None
    witness_certificate: InfeasibilityCertificate | None
    sweeps: list


def fractional_packing_number(g: Graph, mode: str, k_max: int,
                              jobs: int = 1) -> FractionalNumberResult:
    """Least k <= k_max with every k-fold cover fractionally packable."""
    outcomes = []
    witness = None
    cert = None
    for k in range(1, k_max + 1):
        out = fractional_feasible_at(g, k, mode, jobs=jobs)
        outcomes.append(out)
        if out.all_feasible:
            return FractionalNumberResult(k, k, witness, cert, outcomes)
        witness, cert = out.failure_cover, out.failure_certificate
    return FractionalNumberResult(None, k_max + 1, witness, cert, outcomes)


# ---------------------------------------------------------------------------
# arbitrary list sizes: distributions with per-slot demands 1/|L(v)|
# ---------------------------------------------------------------------------

def enumerate_independent_sets(cover: CorrespondenceCover, cap: int = 10 ** 6):
    """All non-empty independent sets of the cover graph, as tuples with a
    0 entry for vertices left unchosen."""
    g = cover.base
    n = g.n
    maps = cover.maps
    back = [[w for w in g.adj[v] if w < v] for v in range(n)]
    choice = [0] * n
    out = []

    def rec(v):
        if v == n:
            if any(choice):
                out.append(tuple(choice))
                if len(out) > cap:
                    raise ResourceCapError(f"more than {cap} independent sets")
            return
        for s in range(0, cover.fold[v] + 1):
            if s:
                ok = True
                for w in back[v]:
                    if choice[w] and maps[(w, v)][choice[w]] == s:
                        ok = False
                        break
                if not ok:
                    continue
            choice[v] = s
            rec(v + 1)
        choice[v] = 0

    rec(0)
    return out


@dataclass
class DemandDistribution:
    """Probability distribution on independent sets meeting every slot's
    demand of 1/|L(v)|."""

    support: tuple               # ((choice tuple, Fraction), ...)

    def to_json(self) -> dict:
        return {"schema": FRACPACK_SCHEMA,
                "support": [{"choice": list(t), "weight": str(w)}
                            for t, w in self.support]}


@dataclass
class DemandInfeasibility:
    """Farkas certificate for the demand system: slot rows then the
    distribution row."""

    dual: tuple
    demands: tuple

    def to_json(self) -> dict:
        return {"schema": CERT_SCHEMA, "kind": "demand-lp",
                "dual": [str(x) for x in self.dual]}


def general_fractional_packing(g: Graph, assignment: ListAssignment,
                               cap: int = 10 ** 6):
    """Distribution on independent sets of the list cover with
    Pr(slot chosen) >= 1/|L(v)| for every slot, or an exact certificate
    that none exists.  Lists may have arbitrary sizes."""
    cover = cv.cover_from_lists(g, assignment)
    off, nslots = slot_offsets(cover)
    isets = enumerate_independent_sets(cover, cap=cap)
    rhs = []
    for v in range(g.n):
        rhs.extend([Fraction(1, cover.fold[v])] * cover.fold[v])
    rhs.append(Fraction(1))
    senses = ["g"] * nslots + ["e"]
    cols = []
    for t in isets:
        col = [(off[v] + s - 1, 1) for v, s in enumerate(t) if s]
        col.append((nslots, 1))
        cols.append(col)
    res = lp.solve_feasibility(cols, rhs, senses)
    if res.feasible:
        return DemandDistribution(tuple(sorted(
            (isets[j], w) for j, w in res.weights.items())))
    return DemandInfeasibility(res.dual, tuple(rhs[:-1]))


def fractional_colouring_weight_k(cover: CorrespondenceCover, k: int,
                                  cap: int = 10 ** 6):
    """Weights over ALL independent sets with per-slot coverage >= 1 and
    total weight exactly k (the fractional-chromatic-number system).
    Support of any solution lands on transversals only; kept as a test
    surface for that fact."""
    off, nslots = slot_offsets(cover)
    isets = enumerate_independent_sets(cover, cap=cap)
    rhs = [Fraction(1)] * nslots + [Fraction(k)]
    senses = ["g"] * nslots + ["e"]
    cols = []
    for t in isets:
        col = [(off[v] + s - 1, 1) for v, s in enumerate(t) if s]
        col.append((nslots, 1))
        cols.append(col)
    res = lp.solve_feasibility(cols, rhs, senses)
    if not res.feasible:
        return None
    return tuple(sorted((isets[j], w) for j, w in res.weights.items()))
