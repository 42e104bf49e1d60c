"""The reproduction suite: every pinned verdict as a named, timed check.

Each check re-derives one headline fact with the solvers and returns a
CheckResult whose ``observed`` field must equal ``expected``.  The CLI
``reproduce`` command runs these and writes a manifest; the acceptance
tests call the same functions, so the two surfaces cannot drift apart.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from . import covers as cv
from . import fractional as fr
from . import packing as pk
from . import randsuite as rs
from . import samplers as sm
from . import witnesses as wt
from .graphs import (Graph, complete, complete_bipartite, cycle, degeneracy,
                     diamond_necklace, fan7, latin_cell, latin_square, petersen)
from .smallgraphs import connected_graphs_max_degree


@dataclass
class CheckResult:
    name: str
    ok: bool
    expected: str
    observed: str
    seconds: float = 0.0
    certificate: object = None


def _result(name, expected, observed, t0, certificate=None) -> CheckResult:
    return CheckResult(name, expected == observed, expected, observed,
                       round(time.time() - t0, 3), certificate)


# --- cycles -----------------------------------------------------------------

def check_cycle_witnesses(jobs: int = 1) -> CheckResult:
    """Even-cycle bad lists and twisted covers admit no packing, n = 3..8."""
    t0 = time.time()
    bad = []
    for n in range(3, 9):
        if n % 2 == 0:
            ok, observed, _ = wt.verify_witness(wt.even_cycle_bad_lists(n))
            if not ok:
                bad.append(f"even-lists-{n}:{observed}")
        ok, observed, _ = wt.verify_witness(wt.twisted_cycle_cover(n))
        if not ok:
            bad.append(f"twisted-{n}:{observed}")
    return _result("cycle-witnesses", "all-no-packing",
                   "all-no-packing" if not bad else ";".join(bad), t0)


def check_cycle_monodromy(jobs: int = 1) -> CheckResult:
    """Full 3-fold cycle covers pack exactly when the cycle monodromy is
    even, n = 3..8."""
    t0 = time.time()
    bad = []
    for n in range(3, 9):
        g = cycle(n)
        walk = list(range(n)) + [0]
        for idx, cover in cv.enumerate_covers(g, 3):
            parity = cv.permutation_parity(cv.monodromy(cover, walk))
            packs = pk.find_packing(cover) is not None
            if packs != (parity == 0):
                bad.append(f"C{n}#{idx}")
    return _result("cycle-monodromy", "even-iff-packs",
                   "even-iff-packs" if not bad else ";".join(bad), t0)


def check_cycle_fold4(jobs: int = 1) -> CheckResult:
    """All 24 untwisted 4-fold covers of each cycle pack, n = 3..8."""
    t0 = time.time()
    bad = []
    for n in range(3, 9):
        out = pk.packs_at(cycle(n), 4, "correspondence", jobs=jobs)
        if not (out.total == 24 and out.all_pack):
            bad.append(f"C{n}:{out.total},{out.all_pack}")
    return _result("cycle-fold4", "24-covers-all-pack",
                   "24-covers-all-pack" if not bad else ";".join(bad), t0)


# --- K4 ---------------------------------------------------------------------

def check_k4(jobs: int = 1) -> CheckResult:
    """All 13824 untwisted 4-fold covers of K4 pack; some 3-fold cover
    (of 216) does not."""
    t0 = time.time()
    four = pk.packs_at(complete(4), 4, "correspondence", jobs=jobs)
    three = pk.packs_at(complete(4), 3, "correspondence", jobs=jobs)
    observed = (f"fold4:{four.total}covers,all={four.all_pack};"
                f"fold3:failure={three.failure_index is not None}")
    return _result("k4", "fold4:13824covers,all=True;fold3:failure=True",
                   observed, t0)


# --- the fold-4 extension table ----------------------------------------------

def check_delta3(jobs: int = 1) -> CheckResult:
    t0 = time.time()
    rep = pk.delta3_case_analysis()
    observed = (f"triples={rep.total_non_extendable};"
                f"excluded={sorted(rep.excluded)};"
                f"split={len(rep.excellent)}/{len(rep.good)}/{len(rep.bad)};"
                f"bad={sorted(rep.bad)};avoided={sorted(rep.avoided)};"
                f"avoided_sufficient={rep.avoided_sufficient}")
    expected = (f"triples=112;"
                f"excluded={sorted(((2, 3, 4, 1), (2, 4, 1, 3), (3, 1, 4, 2), (4, 1, 2, 3)))};"
                f"split=10/8/2;"
                f"bad={sorted(((3, 4, 2, 1), (4, 3, 1, 2)))};"
                f"avoided={sorted(((1, 3, 2, 4), (3, 2, 1, 4), (4, 2, 3, 1), (1, 4, 3, 2)))};"
                f"avoided_sufficient=True")
    return _result("delta3", expected, observed, t0, certificate={
        "counts_by_u2": {str(k): v for k, v in rep.counts_by_u2.items() if v},
        "problematic_pairs": {str(k): [list(map(list, pr)) for pr in v]
                              for k, v in rep.problematic_pairs.items()},
    })


# --- K5 at fold 6 -------------------------------------------------------------

def check_k5_extension(jobs: int = 1, trials: int = 1000) -> CheckResult:
    t0 = time.time()
    res = rs.extension_suite(complete(5), trials, seed=20240501)
    observed = f"trials={res.instances};failures={len(res.mismatches)}"
    return _result("k5-extension", f"trials={trials};failures=0", observed, t0,
                   certificate=res.mismatches[:5] or None)


def check_k5_direct(jobs: int = 1, trials: int = 10000) -> CheckResult:
    t0 = time.time()
    res = rs.direct_packing_suite(complete(5), 6, trials, seed=20240502)
    observed = f"trials={res.instances};failures={len(res.mismatches)}"
    return _result("k5-direct", f"trials={trials};failures=0", observed, t0)


# --- fractional sweeps --------------------------------------------------------

def check_f7(jobs: int = 1) -> CheckResult:
    """Fractional correspondence number of the 7-vertex fan is exactly 3."""
    t0 = time.time()
    res = fr.fractional_packing_number(fan7(), "correspondence", 3, jobs=jobs)
    k3 = res.sweeps[-1]
    observed = (f"value={res.value};fold3covers={k3.total};"
                f"fold2failure={res.witness_cover is not None}")
    return _result("f7-fractional", "value=3;fold3covers=7776;fold2failure=True",
                   observed, t0)


def check_k33(jobs: int = 1) -> CheckResult:
    """Every untwisted 3-fold cover of K33 has a transversal; at least one
    is fractionally infeasible."""
    t0 = time.time()
    g = complete_bipartite(3, 3)
    no_transversal = 0
    infeasible_at = None
    total = 0
    for idx, cover in cv.enumerate_covers(g, 3):
        total += 1
        if fr.find_transversal(cover) is None:
            no_transversal += 1
        if infeasible_at is None:
            res = fr.fractional_packing(cover)
            if isinstance(res, fr.InfeasibilityCertificate):
                if not fr.verify_infeasibility(cover, res):
                    return _result("k33", "certificate-valid", "certificate-invalid", t0)
                infeasible_at = idx
    observed = (f"covers={total};no_transversal={no_transversal};"
                f"some_infeasible={infeasible_at is not None}")
    return _result("k33", "covers=1296;no_transversal=0;some_infeasible=True",
                   observed, t0, certificate={"first_infeasible_index": infeasible_at})


def check_cycle_fractional(jobs: int = 1) -> CheckResult:
    """Fractional correspondence number of C_n is 3 for n = 3..6."""
    t0 = time.time()
    bad = []
    for n in range(3, 7):
        res = fr.fractional_packing_number(cycle(n), "correspondence", 3, jobs=jobs)
        if res.value != 3:
            bad.append(f"C{n}:{res.value}")
    return _result("cycle-fractional", "all-3",
                   "all-3" if not bad else ";".join(bad), t0)


# --- petersen ------------------------------------------------------------------

def check_petersen(jobs: int = 1) -> CheckResult:
    """Some untwisted 3-fold cover of the Petersen graph has no packing."""
    t0 = time.time()
    found = None
    for idx, cover in cv.enumerate_covers(petersen(), 3):
        if pk.find_packing(cover) is None:
            found = idx
            break
    return _result("petersen", "counterexample-found",
                   "counterexample-found" if found is not None else "none-found",
                   t0, certificate={"first_counterexample_index": found})


# --- necklace -------------------------------------------------------------------

def check_necklace(jobs: int = 1) -> CheckResult:
    t0 = time.time()
    w = wt.necklace_witness()
    ok, observed, cert = wt.verify_witness(w)
    flex = fr.check_flexibility(w.payload_cover())
    all_flex = all(flex.values())
    observed = f"{observed};flexible={all_flex}"
    payload = cert.to_json() if isinstance(cert, fr.InfeasibilityCertificate) else None
    return _result("necklace", "no_fractional_packing;flexible=True", observed,
                   t0, certificate=payload)


# --- degeneracy gap ----------------------------------------------------------------

def check_degeneracy_gap_2(jobs: int = 1) -> CheckResult:
    t0 = time.time()
    w, layer_lists = wt.degeneracy_gap(2)
    facts = []
    facts.append(f"n={w.graph.n}")
    facts.append(f"layers={[list(x) for x in layer_lists]}")
    facts.append(f"degeneracy={degeneracy(w.graph).degeneracy}")
    ok, observed, cert = wt.verify_witness(w)
    facts.append(observed)
    expected = ("n=13;layers=[[1, 2, 3], [2, 3, 4], [1, 3, 4], [1, 2, 3]];"
                "degeneracy=2;no_fractional_packing")
    payload = cert.to_json() if isinstance(cert, fr.InfeasibilityCertificate) else None
    return _result("degeneracy-gap-2", expected, ";".join(facts), t0,
                   certificate=payload)


def check_degeneracy_gap_3(jobs: int = 1) -> CheckResult:
    """Large LP; behind the slow flag.  Column generation with exact
    pricing keeps it tractable."""
    t0 = time.time()
    w, _ = wt.degeneracy_gap(3)
    facts = [f"n={w.graph.n}", f"degeneracy={degeneracy(w.graph).degeneracy}"]
    res = fr.fractional_packing(w.payload_cover(), column_generation=True)
    infeasible = isinstance(res, fr.InfeasibilityCertificate)
    if infeasible and not fr.verify_infeasibility(w.payload_cover(), res):
        facts.append("certificate-invalid")
    else:
        facts.append("no_fractional_packing" if infeasible else "feasible")
    return _result("degeneracy-gap-3", "n=53;degeneracy=3;no_fractional_packing",
                   ";".join(facts), t0,
                   certificate=res.to_json() if infeasible else None)


# --- latin squares -------------------------------------------------------------------

def check_latin(jobs: int = 1) -> CheckResult:
    """For n = 2..4: no colouring puts n+1 on cell (1,1), the lists are
    fractionally unpackable, and the colouring count clears the
    (n-1)/n * N(n) bound with N(n) re-derived by brute force."""
    t0 = time.time()
    expected_n = {2: 2, 3: 12, 4: 576}
    bad = []
    for n in (2, 3, 4):
        w = wt.latin_square_witness(n)
        cover = w.payload_cover()
        corner = latin_cell(n, 1, 1)
        top_slot = w.assignment.lists[corner].index(n + 1) + 1
        if fr.find_transversal(cover, {corner: top_slot}) is not None:
            bad.append(f"n={n}:corner-extends")
        ok, observed, _ = wt.verify_witness(w)
        if not ok:
            bad.append(f"n={n}:{observed}")
        plain = cv.identity_cover(latin_square(n), n)
        n_latin = fr.count_transversals(plain)
        if n_latin != expected_n[n]:
            bad.append(f"n={n}:N={n_latin}")
        threshold = Fraction(n - 1, n) * n_latin
        have = fr.count_transversals(cover, at_least=int(threshold))
        if have < threshold:
            bad.append(f"n={n}:count={have}<{threshold}")
    return _result("latin-squares", "all-verified",
                   "all-verified" if not bad else ";".join(bad), t0)


# --- greedy bound -----------------------------------------------------------------------

def check_greedy_cycles(jobs: int = 1) -> CheckResult:
    t0 = time.time()
    bad = []
    for n in range(3, 9):
        g = cycle(n)
        for idx, cover in cv.enumerate_covers(g, 4):
            try:
                p = pk.greedy_degenerate_packing(cover)
            except RuntimeError:
                bad.append(f"C{n}#{idx}")
                continue
            if pk.validate_packing(cover, p):
                bad.append(f"C{n}#{idx}:invalid")
    return _result("greedy-cycles", "zero-failures",
                   "zero-failures" if not bad else ";".join(bad), t0)


def check_greedy_random(jobs: int = 1, trials: int = 1000) -> CheckResult:
    t0 = time.time()
    bad = []
    for name, g in (("necklace", diamond_necklace()), ("petersen", petersen())):
        res = rs.greedy_random_suite(g, 6, trials, seed=20240503)
        if not res.ok:
            bad.append(f"{name}:{len(res.mismatches)}")
    return _result("greedy-random", "zero-failures",
                   "zero-failures" if not bad else ";".join(bad), t0)


# --- hall suites ------------------------------------------------------------------------

def check_hall_suites(jobs: int = 1, instances: int = 100_000) -> CheckResult:
    t0 = time.time()
    bad = []
    hits = {}
    for m in (2, 3):
        res = rs.lemma_odd_suite(m, instances, seed=911_000 + m)
        hits[f"odd-m{m}"] = res.hall_failures
        if not res.ok:
            bad.append(f"odd-m{m}:{len(res.mismatches)}")
    for m in (2, 3):
        res = rs.lemma_even_suite(m, instances, seed=912_000 + m)
        hits[f"even-m{m}"] = res.hall_failures
        if not res.ok:
            bad.append(f"even-m{m}:{len(res.mismatches)}")
    for m in (3, 4):
        res = rs.pinned_matching_suite(m, instances, seed=913_000 + m)
        hits[f"pinned-m{m}"] = res.hall_failures
        if not res.ok:
            bad.append(f"pinned-m{m}:{len(res.mismatches)}")
    return _result("hall-suites", "zero-mismatches",
                   "zero-mismatches" if not bad else ";".join(bad), t0,
                   certificate={"hall_failures_seen": hits, "instances_per_suite": instances})


# --- samplers ----------------------------------------------------------------------------

def _atlas_graphs_up_to_6():
    import networkx as nx
    from networkx.generators.atlas import graph_atlas_g
    out = []
    for ag in graph_atlas_g():
        if ag.number_of_nodes() == 0 or ag.number_of_nodes() > 6:
            continue
        mapping = {x: i for i, x in enumerate(sorted(ag.nodes()))}
        out.append(Graph(ag.number_of_nodes(),
                         [(mapping[u], mapping[v]) for u, v in ag.edges()]))
    return out


def check_samplers_greedy(jobs: int = 1) -> CheckResult:
    """Exact greedy-sampler marginals are >= 1/k on identity covers of
    fold maxdeg+1 for every graph on at most 6 vertices."""
    t0 = time.time()
    try:
        graphs = _atlas_graphs_up_to_6()
    except ImportError:
        return _result("samplers-greedy", "all-bounded",
                       "error:networkx-required", t0)
    bad = 0
    for g in graphs:
        k = max((g.degree(v) for v in range(g.n)), default=0) + 1
        cover = cv.identity_cover(g, k)
        table = sm.exact_marginals_greedy(cover)
        if not table.min_ratio_ok(cover.fold) or not table.verify_sums(cover.fold):
            bad += 1
    observed = f"graphs={len(graphs)};violations={bad}"
    return _result("samplers-greedy", f"graphs={len(graphs)};violations=0",
                   observed, t0)


def check_samplers_bipartite(jobs: int = 1) -> CheckResult:
    """Exact two-phase marginals equal 1/k on complete-bipartite identity
    and random full covers, sides up to 4."""
    t0 = time.time()
    import random as _random
    rng = _random.Random(20240504)
    bad = []
    for a in range(1, 5):
        for b in range(a, 5):
            g = complete_bipartite(a, b)
            k = min(a, b) + 1
            for trial in range(3):
                cover = (cv.identity_cover(g, k) if trial == 0
                         else cv.random_full_cover(g, k, rng))
                table = sm.exact_marginals_bipartite(cover)
                if any(wgt != Fraction(1, k) for wgt in table.entries.values()):
                    bad.append(f"K{a},{b}#{trial}")
    return _result("samplers-bipartite", "all-exactly-1/k",
                   "all-exactly-1/k" if not bad else ";".join(bad), t0)


# --- degree lists ---------------------------------------------------------------------------

def check_degree_lists(jobs: int = 1) -> CheckResult:
    t0 = time.time()
    bad = []
    for w in wt.degree_list_witnesses():
        ok, observed, _ = wt.verify_witness(w)
        if not ok:
            bad.append(f"{w.name}:{observed}")
    return _result("degree-lists", "both-infeasible",
                   "both-infeasible" if not bad else ";".join(bad), t0)


# --- small graphs at max degree 3 -------------------------------------------------------------

def check_small_cubic_bound(jobs: int = 1) -> CheckResult:
    """Every connected graph on <= 5 vertices with max degree <= 3 packs at
    fold 4 in both correspondence and list mode."""
    t0 = time.time()
    bad = []
    graphs = connected_graphs_max_degree(5, 3)
    for i, g in enumerate(graphs):
        corr = pk.packs_at(g, 4, "correspondence", jobs=jobs)
        if not corr.all_pack:
            bad.append(f"g{i}-corr")
        lst = pk.packs_at(g, 4, "list")
        if not lst.all_pack:
            bad.append(f"g{i}-list")
    observed = f"graphs={len(graphs)};failures={len(bad)}"
    return _result("small-cubic-bound", f"graphs={len(graphs)};failures=0",
                   observed, t0, certificate={"failing": bad} if bad else None)


CHECKS = {
    "cycle-witnesses": check_cycle_witnesses,
    "cycle-monodromy": check_cycle_monodromy,
    "cycle-fold4": check_cycle_fold4,
    "k4": check_k4,
    "delta3": check_delta3,
    "k5-extension": check_k5_extension,
    "k5-direct": check_k5_direct,
    "f7-fractional": check_f7,
    "k33": check_k33,
    "cycle-fractional": check_cycle_fractional,
    "petersen": check_petersen,
    "necklace": check_necklace,
    "degeneracy-gap-2": check_degeneracy_gap_2,
    "latin-squares": check_latin,
    "greedy-cycles": check_greedy_cycles,
    "greedy-random": check_greedy_random,
    "hall-suites": check_hall_suites,
    "samplers-greedy": check_samplers_greedy,
    "samplers-bipartite": check_samplers_bipartite,
    "degree-lists": check_degree_lists,
    "small-cubic-bound": check_small_cubic_bound,
}

SLOW_CHECKS = {
    "degeneracy-gap-3": check_degeneracy_gap_3,
}


def run_checks(only: str | None = None, jobs: int = 1,
               include_slow: bool = False) -> list:
    """Run the (filtered) suite and return CheckResults in order."""
    registry = dict(CHECKS)
    if include_slow:
        registry.update(SLOW_CHECKS)
    results = []
    for name, fn in registry.items():
        if only and only not in name:
            continue
        results.append(fn(jobs=jobs))
    return results
