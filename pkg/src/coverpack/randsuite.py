"""Randomized confirmation suites for the matching lemmas and the
extension machinery.

Each suite mixes planted near-counterexample structures with uniform
instances (planting keeps the Hall-failure branches exercised, which a
purely uniform sampler would almost never hit), runs the fast matching
verdict against the subset-scan oracle, and verifies the classified
block structure on every violating subset.  Zero mismatches is the
expected outcome; any mismatch is returned for inspection.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import hall
from .graphs import Graph
from .covers import random_full_cover
from . import packing as pk


@dataclass
class SuiteResult:
    instances: int = 0
    hall_failures: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _fix_min_degree(edges, na, nb, delta, rng):
    """Add random edges until both sides reach minimum degree delta."""
    es = set(edges)
    deg_a = [0] * na
    deg_b = [0] * nb
    for a, b in es:
        deg_a[a] += 1
        deg_b[b] += 1
    for a in range(na):
        while deg_a[a] < delta:
            b = rng.randrange(nb)
            if (a, b) not in es:
                es.add((a, b))
                deg_a[a] += 1
                deg_b[b] += 1
    for b in range(nb):
        while deg_b[b] < delta:
            a = rng.randrange(na)
            if (a, b) not in es:
                es.add((a, b))
                deg_a[a] += 1
                deg_b[b] += 1
    return es


def _random_bipartite(size, delta, rng, p=0.5):
    edges = {(a, b) for a in range(size) for b in range(size) if rng.random() < p}
    return hall.BipartiteGraph(size, size, _fix_min_degree(edges, size, size, delta, rng))


def _planted_odd(m, rng):
    """Sides 2m+1, min degree m, planted violator A1 of size m+1."""
    size = 2 * m + 1
    a1 = list(range(m + 1))
    a2 = list(range(m + 1, size))
    b1 = list(range(m))
    b2 = list(range(m, size))
    edges = {(a, b) for a in a1 for b in b1}
    edges |= {(a, b) for a in a2 for b in b2}
    # free block A2 x B1
    edges |= {(a, b) for a in a2 for b in b1 if rng.random() < 0.5}
    return hall.BipartiteGraph(size, size, edges)


def _scramble(bg, rng):
    pa = list(range(bg.na))
    pb = list(range(bg.nb))
    rng.shuffle(pa)
    rng.shuffle(pb)
    return hall.BipartiteGraph(
        bg.na, bg.nb,
        [(pa[a], pb[b]) for a in range(bg.na) for b in bg.adj_a[a]])


def _all_violators_classified_odd(bg, m):
    """Every violating subset has the unique allowed size pattern and the
    stated blocks."""
    for a1 in _violating_subsets(bg):
        nb = bin(bg.neighbourhood(a1)).count("1")
        if (len(a1), nb) != (m + 1, m):
            return f"violator sizes ({len(a1)},{nb})"
        if not _blocks_ok(bg, a1, complete_a2b2=True, complete_a1b1=True):
            return "block structure"
    return None


def _all_violators_classified_even(bg, m):
    allowed = {(m, m - 1): (True, False), (m + 1, m - 1): (True, True),
               (m + 1, m): (False, True)}
    for a1 in _violating_subsets(bg):
        nb = bin(bg.neighbourhood(a1)).count("1")
        key = (len(a1), nb)
        if key not in allowed:
            return f"violator sizes {key}"
        c11, c22 = allowed[key]
        if not _blocks_ok(bg, a1, complete_a1b1=c11, complete_a2b2=c22):
            return f"block structure for sizes {key}"
    return None


def _violating_subsets(bg):
    from itertools import combinations
    for r in range(1, bg.na + 1):
        for sub in combinations(range(bg.na), r):
            if bin(bg.neighbourhood(sub)).count("1") < r:
                yield sub


def _blocks_ok(bg, a1, complete_a1b1, complete_a2b2):
    b1_mask = bg.neighbourhood(a1)
    a1_set = set(a1)
    a2 = [a for a in range(bg.na) if a not in a1_set]
    b1 = [b for b in range(bg.nb) if b1_mask >> b & 1]
    b2 = [b for b in range(bg.nb) if not b1_mask >> b & 1]
    if complete_a1b1 and not all(bg.mask_a[a] & b1_mask == b1_mask for a in a1):
        return False
    if complete_a2b2:
        want = 0
        for b in b2:
            want |= 1 << b
        if not all(bg.mask_a[a] & want == want for a in a2):
            return False
    return True


def lemma_odd_suite(m: int, instances: int, seed: int) -> SuiteResult:
    """Balanced sides 2m+1 at minimum degree m: matching verdict against
    the subset oracle, plus block classification of every failure."""
    rng = random.Random(seed)
    res = SuiteResult()
    for _ in range(instances):
        if rng.random() < 0.5:
            bg = _scramble(_planted_odd(m, rng), rng)
        else:
            bg = _random_bipartite(2 * m + 1, m, rng)
        res.instances += 1
        fast = hall.saturating_matching(bg).saturating()
        slow = hall.find_violator_bruteforce(bg) is None
        if fast != slow:
            res.mismatches.append(("verdict", bg.adj_a))
            continue
        if not fast:
            res.hall_failures += 1
            problem = _all_violators_classified_odd(bg, m)
            if problem:
                res.mismatches.append((problem, bg.adj_a))
                continue
            blocks = hall.classify_deficiency_odd(bg, m)
            if blocks == "hall":
                res.mismatches.append(("classifier-said-hall", bg.adj_a))
    return res


def _planted_even(m, rng):
    size = 2 * m
    na1 = rng.choice([m, m + 1])
    a1 = list(range(na1))
    b1_size = rng.choice([x for x in (m - 1, m) if x < na1])
    b1 = list(range(b1_size))
    edges = set()
    for a in a1:
        nbrs = rng.sample(b1, min(len(b1), max(m - 1, 1)))
        edges |= {(a, b) for b in nbrs}
    a2 = [a for a in range(size) if a >= na1]
    b2 = [b for b in range(size) if b >= b1_size]
    # keep A1 x B2 empty; fix degrees using the free blocks only
    for b in b1:
        while sum(1 for (x, y) in edges if y == b) < m - 1:
            edges.add((rng.choice(a1 + a2), b))
    for b in b2:
        nbrs = rng.sample(a2, min(len(a2), m - 1))
        edges |= {(a, b) for a in nbrs}
    for a in a2:
        while sum(1 for (x, y) in edges if x == a) < m - 1:
            edges.add((a, rng.randrange(size)))
    return hall.BipartiteGraph(size, size, edges)


def lemma_even_suite(m: int, instances: int, seed: int) -> SuiteResult:
    """Balanced sides 2m at minimum degree m-1: verdict oracle comparison
    plus the three-case classification of every failure."""
    rng = random.Random(seed)
    res = SuiteResult()
    for _ in range(instances):
        if rng.random() < 0.5:
            bg = _scramble(_planted_even(m, rng), rng)
            if bg.min_degree() < m - 1:
                bg = hall.BipartiteGraph(
                    bg.na, bg.nb,
                    _fix_min_degree(
                        {(a, b) for a in range(bg.na) for b in bg.adj_a[a]},
                        bg.na, bg.nb, m - 1, rng))
        else:
            bg = _random_bipartite(2 * m, m - 1, rng)
        res.instances += 1
        fast = hall.saturating_matching(bg).saturating()
        slow = hall.find_violator_bruteforce(bg) is None
        if fast != slow:
            res.mismatches.append(("verdict", bg.adj_a))
            continue
        if not fast:
            res.hall_failures += 1
            problem = _all_violators_classified_even(bg, m)
            if problem:
                res.mismatches.append((problem, bg.adj_a))
                continue
            blocks = hall.classify_deficiency_even(bg, m)
            if blocks == "hall":
                res.mismatches.append(("classifier-said-hall", bg.adj_a))
    return res


def _planted_pinned(m, rng):
    """Instance meeting the robustness-check preconditions, plus a random
    admissible matching to delete."""
    size = 2 * m
    a1 = list(range(m))
    a2 = list(range(m, size))
    b1 = list(range(m - 1))
    b2 = list(range(m - 1, size))
    edges = {(a, b) for a in a1 for b in b1}
    partners = list(b2)
    rng.shuffle(partners)
    iso = partners[m]
    matched = partners[:m]
    edges |= {(a, b) for a, b in zip(a1, matched)}
    edges |= {(a, iso) for a in a2}
    for b in matched:
        nbrs = rng.sample(a2, m - 1)
        edges |= {(a, b) for a in nbrs}
    for a in a2:
        while sum(1 for (x, y) in edges if x == a) < m:
            edges.add((a, rng.randrange(size)))
    bg = hall.BipartiteGraph(size, size, edges)
    # random matching with at most m-2 pinned pairs
    npinned = rng.randint(0, m - 2)
    pairs = rng.sample(list(zip(a1, matched)), npinned)
    used_a = {a for a, _ in pairs}
    used_b = {b for _, b in pairs}
    extra = [(a, b) for a in range(size) for b in bg.adj_a[a]
             if a not in used_a and b not in used_b and not (a in a1 and b in b2)]
    rng.shuffle(extra)
    matching = list(pairs)
    for a, b in extra:
        if rng.random() < 0.3 and a not in used_a and b not in used_b:
            matching.append((a, b))
            used_a.add(a)
            used_b.add(b)
    partition = (tuple(a1), tuple(a2), tuple(b1), tuple(b2))
    return bg, partition, matching


def pinned_matching_suite(m: int, instances: int, seed: int) -> SuiteResult:
    """Randomized instances of the matching-robustness claim; a False
    verdict would be a counterexample and is recorded as a mismatch."""
    rng = random.Random(seed)
    res = SuiteResult()
    for _ in range(instances):
        bg, partition, matching = _planted_pinned(m, rng)
        res.instances += 1
        ok = hall.claim_matching_robust(bg, partition, matching)
        oracle = hall.find_violator_bruteforce(bg.without_matching(matching)) is None
        if ok != oracle:
            res.mismatches.append(("verdict", bg.adj_a, matching))
        elif not ok:
            res.hall_failures += 1
            res.mismatches.append(("claim-failed", bg.adj_a, matching))
    return res


def extension_suite(g: Graph, trials: int, seed: int) -> SuiteResult:
    """Random untwisted covers at fold 2*Delta-2 with the two-vertex
    extension; failures are counterexample certificates."""
    rng = random.Random(seed)
    res = SuiteResult()
    for _ in range(trials):
        res.instances += 1
        out = pk.random_regular_extension_trial(g, rng)
        if isinstance(out, pk.ExtensionFailure):
            res.mismatches.append((out.stage, out.detail))
    return res


def direct_packing_suite(g: Graph, k: int, trials: int, seed: int) -> SuiteResult:
    """Random untwisted k-fold covers that must all admit packings."""
    rng = random.Random(seed)
    res = SuiteResult()
    for _ in range(trials):
        res.instances += 1
        cover = random_full_cover(g, k, rng)
        if pk.find_packing(cover) is None:
            res.mismatches.append(("no-packing", cover.matchings))
    return res


def greedy_random_suite(g: Graph, k: int, trials: int, seed: int) -> SuiteResult:
    """Random untwisted covers at fold k >= 2*degeneracy run through the
    greedy packer; any raise is a bug certificate."""
    rng = random.Random(seed)
    res = SuiteResult()
    for _ in range(trials):
        res.instances += 1
        cover = random_full_cover(g, k, rng)
        try:
            packing = pk.greedy_degenerate_packing(cover)
        except RuntimeError as exc:
            res.mismatches.append(("greedy-failed", str(exc)))
            continue
        if pk.validate_packing(cover, packing):
            res.mismatches.append(("invalid-packing", cover.matchings))
    return res
