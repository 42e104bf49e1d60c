"""Bipartite matching with Hall certificates and deficiency classification.

Side A is matched into side B.  A failed matching always comes with a
violator set A1 with |N(A1)| < |A1| (the alternating-forest witness), and
for the balanced near-regular instances arising in the packing solver the
violator's block structure is classified and verified explicitly.

Adjacency is kept as bitmasks over B, so the subset-scan oracle used in
tests stays cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import PreconditionError


class BipartiteGraph:
    """Bipartite graph on sides A = 0..na-1, B = 0..nb-1."""

    __slots__ = ("na", "nb", "adj_a", "mask_a")

    def __init__(self, na: int, nb: int, edges):
        self.na = na
        self.nb = nb
        mask = [0] * na
        for a, b in edges:
            if not (0 <= a < na and 0 <= b < nb):
                raise ValueError(f"edge ({a},{b}) out of range")
            mask[a] |= 1 << b
        self.mask_a = tuple(mask)
        self.adj_a = tuple(tuple(b for b in range(nb) if m >> b & 1) for m in mask)

    def degree_a(self, a: int) -> int:
        return bin(self.mask_a[a]).count("1")

    def degree_b(self, b: int) -> int:
        return sum(1 for m in self.mask_a if m >> b & 1)

    def min_degree(self) -> int:
        degs = [self.degree_a(a) for a in range(self.na)]
        degs += [self.degree_b(b) for b in range(self.nb)]
        return min(degs) if degs else 0

    def neighbourhood(self, a_set) -> int:
        """Bitmask of N(a_set) in B."""
        m = 0
        for a in a_set:
            m |= self.mask_a[a]
        return m

    def without_matching(self, matching) -> "BipartiteGraph":
        """Copy with the edges of ``matching`` (pairs (a, b)) removed."""
        removed = set(matching)
        edges = [(a, b) for a in range(self.na) for b in self.adj_a[a]
                 if (a, b) not in removed]
        return BipartiteGraph(self.na, self.nb, edges)

    def transpose(self) -> "BipartiteGraph":
        return BipartiteGraph(self.nb, self.na,
                              [(b, a) for a in range(self.na) for b in self.adj_a[a]])


@dataclass(frozen=True)
class HallCertificate:
    """Either a matching saturating A, or a violator A1 with |N(A1)| < |A1|."""

    matching: tuple | None   # tuple over A of matched b (when saturating)
    violator: frozenset | None

    def saturating(self) -> bool:
        return self.matching is not None


def saturating_matching(bg: BipartiteGraph) -> HallCertificate:
    """Augmenting-path matching from A; on failure returns the standard
    alternating-forest violator."""
    match_a = [-1] * bg.na
    match_b = [-1] * bg.nb

    def augment(a, seen):
        for b in bg.adj_a[a]:
            if b in seen:
                continue
            seen.add(b)
            if match_b[b] < 0 or augment(match_b[b], seen):
                match_a[a] = b
                match_b[b] = a
                return True
        return False

    for a in range(bg.na):
        if not augment(a, set()):
            reach_a = {a}
            reach_b = set()
            frontier = [a]
            while frontier:
                x = frontier.pop()
                for b in bg.adj_a[x]:
                    if b not in reach_b:
                        reach_b.add(b)
                        if match_b[b] >= 0 and match_b[b] not in reach_a:
                            reach_a.add(match_b[b])
                            frontier.append(match_b[b])
            # every vertex of reach_b is matched into reach_a, and a is unmatched
            return HallCertificate(None, frozenset(reach_a))
    return HallCertificate(tuple(match_a), None)


def violator_is_genuine(bg: BipartiteGraph, violator) -> bool:
    nb = bin(bg.neighbourhood(violator)).count("1")
    return nb < len(violator)


def find_violator_bruteforce(bg: BipartiteGraph):
    """Subset-scan oracle (tests only): smallest violating subset of A or None."""
    for r in range(1, bg.na + 1):
        for sub in combinations(range(bg.na), r):
            if bin(bg.neighbourhood(sub)).count("1") < r:
                return frozenset(sub)
    return None


@dataclass(frozen=True)
class DeficiencyBlocks:
    """Block partition certifying a Hall failure in a balanced near-regular
    bipartite graph: A = A1 + A2, B = B1 + B2 with B1 = N(A1) and
    G[A1, B2] empty.  ``case`` records the (|A1|, |B1|) size class."""

    case: int
    a1: tuple
    a2: tuple
    b1: tuple
    b2: tuple


def _blocks_from_violator(bg: BipartiteGraph, a1_set) -> DeficiencyBlocks:
    a1 = tuple(sorted(a1_set))
    b1_mask = bg.neighbourhood(a1)
    b1 = tuple(b for b in range(bg.nb) if b1_mask >> b & 1)
    a2 = tuple(a for a in range(bg.na) if a not in a1_set)
    b2 = tuple(b for b in range(bg.nb) if not b1_mask >> b & 1)
    return DeficiencyBlocks(0, a1, a2, b1, b2)


def _is_complete_between(bg: BipartiteGraph, rows, cols) -> bool:
    want = 0
    for b in cols:
        want |= 1 << b
    return all(bg.mask_a[a] & want == want for a in rows)


def classify_deficiency_odd(bg: BipartiteGraph, m: int):
    """Balanced sides of size 2m+1, minimum degree >= m.

    Returns the string ``"hall"`` when every subset expands, else the
    unique possible failure: |A1| = m+1, |N(A1)| = m, with G[A1,B1] and
    G[A2,B2] complete and G[A1,B2] empty.  The structure is re-verified
    before returning.
    """
    if bg.na != 2 * m + 1 or bg.nb != 2 * m + 1:
        raise PreconditionError("size", f"sides must have size {2*m+1}")
    if bg.min_degree() < m:
        raise PreconditionError("min-degree", f"minimum degree must be >= {m}")
    cert = saturating_matching(bg)
    if cert.saturating():
        return "hall"
    blocks = _blocks_from_violator(bg, cert.violator)
    a1, a2, b1, b2 = blocks.a1, blocks.a2, blocks.b1, blocks.b2
    if not (len(a1) == m + 1 and len(b1) == m):
        raise RuntimeError(f"violator sizes ({len(a1)},{len(b1)}) outside the classification")
    if not _is_complete_between(bg, a1, b1):
        raise RuntimeError("G[A1,B1] not complete")
    tr = bg.transpose()
    if not _is_complete_between(tr, b2, a2):
        raise RuntimeError("G[A2,B2] not complete")
    return DeficiencyBlocks(1, a1, a2, b1, b2)


def classify_deficiency_even(bg: BipartiteGraph, m: int):
    """Balanced sides of size 2m, minimum degree >= m-1, m >= 2.

    Returns ``"hall"`` or blocks for one of the three possible failures:

      case 1: |A1| = m,   |B1| = m-1, G[A1,B1] complete
      case 2: |A1| = m+1, |B1| = m-1, G[A1,B1] and G[A2,B2] complete
      case 3: |A1| = m+1, |B1| = m,   G[A2,B2] complete

    G[A1,B2] is empty in all cases by construction (B1 = N(A1)).
    """
    if m < 2:
        raise PreconditionError("m", "m must be >= 2")
    if bg.na != 2 * m or bg.nb != 2 * m:
        raise PreconditionError("size", f"sides must have size {2*m}")
    if bg.min_degree() < m - 1:
        raise PreconditionError("min-degree", f"minimum degree must be >= {m-1}")
    cert = saturating_matching(bg)
    if cert.saturating():
        return "hall"
    blocks = _blocks_from_violator(bg, cert.violator)
    a1, a2, b1, b2 = blocks.a1, blocks.a2, blocks.b1, blocks.b2
    sizes = (len(a1), len(b1))
    tr = bg.transpose()
    if sizes == (m, m - 1):
        case = 1
        ok = _is_complete_between(bg, a1, b1)
    elif sizes == (m + 1, m - 1):
        case = 2
        ok = _is_complete_between(bg, a1, b1) and _is_complete_between(tr, b2, a2)
    elif sizes == (m + 1, m):
        case = 3
        ok = _is_complete_between(tr, b2, a2)
    else:
        raise RuntimeError(f"violator sizes {sizes} outside the classification")
    if not ok:
        raise RuntimeError(f"case {case} block structure failed verification")
    return DeficiencyBlocks(case, a1, a2, b1, b2)


def check_pinned_matching_structure(bg: BipartiteGraph, a1, a2, b1, b2) -> list:
    """Verify the robustness preconditions on (bg, partition):

    sides of size 2m with minimum degree >= m (m >= 3), |A1| = m,
    |B1| = m-1, G[A1,B1] complete, and G[A1,B2] a perfect matching on A1
    plus one isolated B2 vertex.  Returns a list of violated fields
    (empty when fine).
    """
    problems = []
    if bg.na != bg.nb or bg.na % 2:
        problems.append("sides must be balanced of even size")
        return problems
    m = bg.na // 2
    if m < 3:
        problems.append("m must be >= 3")
    if bg.min_degree() < m:
        problems.append(f"minimum degree must be >= {m}")
    if sorted(a1) + sorted(a2) != list(range(bg.na)) and sorted((*a1, *a2)) != list(range(bg.na)):
        problems.append("A1, A2 must partition A")
    if sorted((*b1, *b2)) != list(range(bg.nb)):
        problems.append("B1, B2 must partition B")
    if len(a1) != m:
        problems.append(f"|A1| must be {m}")
    if len(b1) != m - 1:
        problems.append(f"|B1| must be {m-1}")
    if problems:
        return problems
    if not _is_complete_between(bg, a1, b1):
        problems.append("G[A1,B1] must be complete")
    partners = []
    for a in a1:
        ns = [b for b in b2 if bg.mask_a[a] >> b & 1]
        if len(ns) != 1:
            problems.append(f"A1 vertex {a} must have exactly one B2 neighbour")
            return problems
        partners.append(ns[0])
    if len(set(partners)) != len(a1):
        problems.append("the A1-B2 edges must form a matching")
    if len(b2) != len(a1) + 1:
        problems.append("B2 must contain exactly one extra vertex")
    return problems


def claim_matching_robust(bg: BipartiteGraph, partition, matching) -> bool:
    """Whether bg minus ``matching`` still satisfies Hall's condition.

    ``partition`` is (A1, A2, B1, B2) as in
    :func:`check_pinned_matching_structure`; ``matching`` is a set of
    (a, b) edges of bg forming a matching with at most m-2 edges inside
    G[A1, B2].  Under these preconditions the answer is always True; a
    False would be a counterexample certificate.
    """
    a1, a2, b1, b2 = partition
    problems = check_pinned_matching_structure(bg, a1, a2, b1, b2)
    if problems:
        raise PreconditionError("structure", "; ".join(problems))
    m = bg.na // 2
    seen_a, seen_b = set(), set()
    inside = 0
    a1_set, b2_set = set(a1), set(b2)
    for a, b in matching:
        if not bg.mask_a[a] >> b & 1:
            raise PreconditionError("matching", f"({a},{b}) is not an edge")
        if a in seen_a or b in seen_b:
            raise PreconditionError("matching", "edge set is not a matching")
        seen_a.add(a)
        seen_b.add(b)
        if a in a1_set and b in b2_set:
            inside += 1
    if inside > m - 2:
        raise PreconditionError(
            "matching", f"matching uses {inside} > {m-2} edges of G[A1,B2]")
    reduced = bg.without_matching(matching)
    return saturating_matching(reduced).saturating()
