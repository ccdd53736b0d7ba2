"""
Finite lattices and the lattice-theoretic axioms of quantum structures.

A FiniteLattice is stored as a boolean ``leq`` matrix over labelled
elements together with brute-force meet and join tables (-1 where a
bound does not exist, so the same type also holds plain posets). The
checkers return a Verdict carrying a concrete witness on failure; ties
are broken by lowest element index so witnesses are reproducible.
"""
import enum
import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from networkx.algorithms.approximation import max_clique

from .constants import EXACT_CHAIN_CAP, ORTHO_SEARCH_CAP
from .exceptions import CapExceededError, DomainError, PreconditionError

logger = logging.getLogger(__name__)

BOTTOM_LABEL = "0"
TOP_LABEL = "I"


class Status(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    NOT_APPLICABLE = "not-applicable"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    """Outcome of one axiom or invariant check."""
    status: Status
    witness: Optional[Tuple] = None
    reason: Optional[str] = None
    capped: bool = False

    @classmethod
    def holding(cls, reason: str = None, capped: bool = False) -> "Verdict":
        return cls(Status.HOLDS, reason=reason, capped=capped)

    @classmethod
    def failing(cls, witness: Tuple, reason: str, capped: bool = False) -> "Verdict":
        return cls(Status.FAILS, witness=tuple(witness), reason=reason, capped=capped)

    @classmethod
    def not_applicable(cls, reason: str) -> "Verdict":
        return cls(Status.NOT_APPLICABLE, reason=reason)

    @classmethod
    def inconclusive(cls, reason: str) -> "Verdict":
        return cls(Status.INCONCLUSIVE, reason=reason)

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    def to_dict(self) -> dict:
        out = {"status": self.status.value}
        if self.witness is not None:
            out["witness"] = list(self.witness)
        if self.reason:
            out["reason"] = self.reason
        if self.capped:
            out["capped"] = True
        return out


def greatest_element(candidates: np.ndarray, leq: np.ndarray) -> int:
    """Index of the greatest element among ``candidates`` (a mask), or -1."""
    idx = np.flatnonzero(candidates)
    if idx.size == 0:
        return -1
    above_all = leq[np.ix_(idx, idx)].all(axis=0)
    hits = idx[above_all]
    return int(hits[0]) if hits.size else -1


def least_element(candidates: np.ndarray, leq: np.ndarray) -> int:
    idx = np.flatnonzero(candidates)
    if idx.size == 0:
        return -1
    below_all = leq[np.ix_(idx, idx)].all(axis=1)
    hits = idx[below_all]
    return int(hits[0]) if hits.size else -1


def atoms_of(leq: np.ndarray) -> List[int]:
    """Atoms of a finite preordered set.

    With a least class present these are the elements just above it;
    without one, the minimal elements.
    """
    leq = np.asarray(leq, dtype=bool)
    strictly_below = leq & ~leq.T  # [y, x]: y < x
    least = leq.all(axis=1)
    if least.any():
        return [x for x in range(len(leq))
                if not least[x] and np.all(least[strictly_below[:, x]])]
    return [x for x in range(len(leq)) if not strictly_below[:, x].any()]


def coatoms_of(leq: np.ndarray) -> List[int]:
    return atoms_of(np.asarray(leq, dtype=bool).T)


@dataclass(frozen=True)
class Quotient:
    """Classes of mutually implying elements and the induced partial order."""
    classes: Tuple[Tuple[int, ...], ...]
    membership: Tuple[int, ...]
    leq: np.ndarray

    def representatives(self) -> List[int]:
        return [members[0] for members in self.classes]


def quotient_to_poset(preorder: np.ndarray) -> Quotient:
    preorder = np.asarray(preorder, dtype=bool)
    equivalent = preorder & preorder.T
    membership = [-1] * len(preorder)
    classes = []
    for x in range(len(preorder)):
        if membership[x] >= 0:
            continue
        members = tuple(int(y) for y in np.flatnonzero(equivalent[x]))
        for y in members:
            membership[y] = len(classes)
        classes.append(members)
    reps = [members[0] for members in classes]
    leq = preorder[np.ix_(reps, reps)].copy()
    return Quotient(tuple(classes), tuple(membership), leq)


@dataclass(frozen=True, eq=False)
class FiniteLattice:
    elements: Tuple[str, ...]
    leq: np.ndarray
    meet_table: np.ndarray
    join_table: np.ndarray
    bottom: Optional[int]
    top: Optional[int]

    @classmethod
    def from_leq(cls, elements: Sequence[str], leq) -> "FiniteLattice":
        """Build from a partial order; meets and joins are computed from ``leq``."""
        leq = np.array(leq, dtype=bool)
        n = len(elements)
        if leq.shape != (n, n):
            raise DomainError("Order matrix does not match the elements", argument="leq",
                              value=leq.shape, expected=f"({n}, {n})")
        if len(set(elements)) != n:
            raise DomainError("Element labels must be unique", argument="elements")
        if not leq.diagonal().all():
            raise DomainError("Order is not reflexive", argument="leq")
        if np.any(leq & leq.T & ~np.eye(n, dtype=bool)):
            raise DomainError("Order is not antisymmetric", argument="leq")
        if np.any((leq.astype(int) @ leq.astype(int) > 0) & ~leq):
            raise DomainError("Order is not transitive", argument="leq")
        meet = np.full((n, n), -1, dtype=int)
        join = np.full((n, n), -1, dtype=int)
        for i in range(n):
            for j in range(i, n):
                meet[i, j] = meet[j, i] = greatest_element(leq[:, i] & leq[:, j], leq)
                join[i, j] = join[j, i] = least_element(leq[i, :] & leq[j, :], leq)
        everything = np.ones(n, dtype=bool)
        bottom, top = least_element(everything, leq), greatest_element(everything, leq)
        leq.setflags(write=False)
        return cls(tuple(elements), leq, meet, join,
                   bottom if bottom >= 0 else None, top if top >= 0 else None)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def is_lattice(self) -> bool:
        return (self.bottom is not None and self.top is not None
                and bool((self.meet_table >= 0).all()) and bool((self.join_table >= 0).all()))

    def missing_bound(self) -> Optional[Tuple[str, str]]:
        """First pair of elements lacking a meet or a join."""
        bad = np.argwhere((self.meet_table < 0) | (self.join_table < 0))
        if bad.size == 0:
            return None
        i, j = (int(k) for k in bad[0])
        return self.elements[i], self.elements[j]

    def index(self, label: str) -> int:
        try:
            return self.elements.index(label)
        except ValueError:
            raise DomainError("Unknown lattice element", argument="label", value=label)

    def label(self, i: int) -> str:
        return self.elements[i]

    def meet(self, i: int, j: int) -> int:
        m = int(self.meet_table[i, j])
        if m < 0:
            raise PreconditionError("Meet does not exist", operation="meet",
                                    witness=(self.elements[i], self.elements[j]))
        return m

    def join(self, i: int, j: int) -> int:
        m = int(self.join_table[i, j])
        if m < 0:
            raise PreconditionError("Join does not exist", operation="join",
                                    witness=(self.elements[i], self.elements[j]))
        return m

    def meet_all(self, indices: Iterable[int]) -> int:
        result = self.top
        for i in indices:
            result = self.meet(result, i)
        return result

    def join_all(self, indices: Iterable[int]) -> int:
        result = self.bottom
        for i in indices:
            result = self.join(result, i)
        return result

    def atoms(self) -> List[int]:
        return atoms_of(self.leq)

    def coatoms(self) -> List[int]:
        return coatoms_of(self.leq)

    def require_lattice(self, operation: str) -> None:
        if not self.is_lattice:
            raise PreconditionError("Structure is not a lattice", operation=operation,
                                    witness=self.missing_bound())


def _from_relation(elements: Sequence[str], relation) -> FiniteLattice:
    n = len(elements)
    leq = np.array([[relation(i, j) for j in range(n)] for i in range(n)], dtype=bool)
    return FiniteLattice.from_leq(elements, leq)


def chain(labels: Sequence[str]) -> FiniteLattice:
    """Totally ordered lattice, smallest label first."""
    return _from_relation(labels, lambda i, j: i <= j)


def mo_lattice(n: int) -> FiniteLattice:
    """{0, a1 .. an, I} with pairwise incomparable atoms."""
    labels = [BOTTOM_LABEL] + [f"a{k}" for k in range(1, n + 1)] + [TOP_LABEL]
    last = n + 1
    return _from_relation(labels, lambda i, j: i == j or i == 0 or j == last)


def boolean_lattice(k: int) -> FiniteLattice:
    """Subsets of {1..k} ordered by inclusion."""
    full = (1 << k) - 1

    def name(mask: int) -> str:
        if mask == 0:
            return BOTTOM_LABEL
        if mask == full:
            return TOP_LABEL
        return "{" + ",".join(str(b + 1) for b in range(k) if mask >> b & 1) + "}"

    masks = sorted(range(1 << k), key=lambda m: (bin(m).count("1"), m))
    return _from_relation([name(m) for m in masks],
                          lambda i, j: masks[i] & ~masks[j] == 0)


def hexagon() -> FiniteLattice:
    """0 < x < y < I and 0 < y' < x' < I: orthocomplemented but not orthomodular."""
    labels = [BOTTOM_LABEL, "x", "y", "y'", "x'", TOP_LABEL]
    pairs = {(1, 2), (3, 4)}
    return _from_relation(labels, lambda i, j: i == j or i == 0 or j == 5 or (i, j) in pairs)


def direct_product(first: FiniteLattice, second: FiniteLattice) -> FiniteLattice:
    """Cartesian product with the componentwise order."""
    pairs = list(itertools.product(range(len(first)), range(len(second))))
    labels = [f"({first.label(i)},{second.label(j)})" for i, j in pairs]
    return _from_relation(labels, lambda x, y: first.leq[pairs[x][0], pairs[y][0]]
                          and second.leq[pairs[x][1], pairs[y][1]])


@dataclass(frozen=True)
class OrthoMap:
    """Element-to-element map a -> a' on a FiniteLattice."""
    perm: Tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.perm[i]

    def pairs(self, lattice: FiniteLattice) -> List[Tuple[str, str]]:
        return [(lattice.label(i), lattice.label(j)) for i, j in enumerate(self.perm) if i <= j]

    @classmethod
    def from_pairs(cls, lattice: FiniteLattice, pairs: Iterable[Tuple[str, str]]) -> "OrthoMap":
        perm = [-1] * len(lattice)
        for a, b in pairs:
            i, j = lattice.index(a), lattice.index(b)
            for x, y in ((i, j), (j, i)):
                if perm[x] not in (-1, y):
                    raise PreconditionError("Orthocomplement assigned twice",
                                            operation="OrthoMap.from_pairs",
                                            witness=(lattice.label(x),))
                perm[x] = y
        if -1 in perm:
            raise PreconditionError("Orthocomplement missing for an element",
                                    operation="OrthoMap.from_pairs",
                                    witness=(lattice.label(perm.index(-1)),))
        return cls(tuple(perm))


def ortho_violation(lattice: FiniteLattice, perm: Sequence[int]) -> Optional[Tuple]:
    """First broken orthocomplementation condition as (condition, labels...), or None."""
    lattice.require_lattice("ortho_violation")
    n = len(lattice)
    if len(perm) != n:
        return ("size", len(perm))
    for a in range(n):
        if perm[perm[a]] != a:
            return ("involution", lattice.label(a))
        if lattice.meet(a, perm[a]) != lattice.bottom:
            return ("complement", lattice.label(a))
    for a in range(n):
        for b in range(n):
            if lattice.leq[a, b] and not lattice.leq[perm[b], perm[a]]:
                return ("order-reversing", lattice.label(a), lattice.label(b))
    return None


def validate_ortho(lattice: FiniteLattice, ortho: OrthoMap) -> OrthoMap:
    violation = ortho_violation(lattice, ortho.perm)
    if violation is not None:
        raise PreconditionError("Map is not an orthocomplementation", operation="validate_ortho",
                                witness=violation)
    return ortho


def mo_ortho(lattice: FiniteLattice) -> OrthoMap:
    """Pairs consecutive atoms a1<->a2, a3<->a4, ... of an MO lattice with an even atom count."""
    atoms = lattice.atoms()
    if len(atoms) % 2:
        raise DomainError("An orthocomplemented MO lattice needs an even number of atoms",
                          argument="lattice", value=len(atoms))
    perm = list(range(len(lattice)))
    perm[lattice.bottom], perm[lattice.top] = lattice.top, lattice.bottom
    for first, second in zip(atoms[::2], atoms[1::2]):
        perm[first], perm[second] = second, first
    return validate_ortho(lattice, OrthoMap(tuple(perm)))


def boolean_complement(lattice: FiniteLattice) -> OrthoMap:
    """Set complement on a Boolean lattice: the unique element meeting to 0 and joining to I."""
    perm = []
    for a in range(len(lattice)):
        perm.append(next(b for b in range(len(lattice))
                         if lattice.meet(a, b) == lattice.bottom
                         and lattice.join(a, b) == lattice.top))
    return validate_ortho(lattice, OrthoMap(tuple(perm)))


def hexagon_ortho(lattice: FiniteLattice) -> OrthoMap:
    return OrthoMap.from_pairs(lattice, [(BOTTOM_LABEL, TOP_LABEL), ("x", "x'"), ("y", "y'")])


def product_ortho(first: FiniteLattice, first_ortho: OrthoMap,
                  second: FiniteLattice, second_ortho: OrthoMap) -> OrthoMap:
    """Componentwise orthocomplement on direct_product(first, second)."""
    size = len(second)
    perm = [first_ortho(i) * size + second_ortho(j)
            for i in range(len(first)) for j in range(size)]
    return OrthoMap(tuple(perm))


def check_atomistic(lattice: FiniteLattice) -> Verdict:
    lattice.require_lattice("check_atomistic")
    atoms = lattice.atoms()
    for x in range(len(lattice)):
        below = [t for t in atoms if lattice.leq[t, x]]
        if lattice.join_all(below) != x:
            return Verdict.failing((lattice.label(x),),
                                   "element is not the join of the atoms below it")
    return Verdict.holding()


def covering_counterexample(lattice: FiniteLattice) -> Optional[Tuple[int, int, int]]:
    """(a, t, b) with t an atom, a ^ t = 0 and a < b < a v t, or None."""
    lattice.require_lattice("covering_counterexample")
    leq = lattice.leq
    atoms = lattice.atoms()
    for a in range(len(lattice)):
        for t in atoms:
            if lattice.meet(a, t) != lattice.bottom:
                continue
            top = lattice.join(a, t)
            for b in range(len(lattice)):
                if b not in (a, top) and leq[a, b] and leq[b, top]:
                    return a, t, b
    return None


def check_covering(lattice: FiniteLattice) -> Verdict:
    found = covering_counterexample(lattice)
    if found is None:
        return Verdict.holding()
    return Verdict.failing(tuple(lattice.label(i) for i in found),
                           "b lies strictly between a and a v t")


def refuted_by_counting(lattice: FiniteLattice) -> bool:
    """An orthocomplementation swaps atoms and coatoms, so their numbers must agree."""
    return len(lattice.atoms()) != len(lattice.coatoms())


def ortho_search(
    lattice: FiniteLattice,
    cap: int = ORTHO_SEARCH_CAP,
    use_counting: bool = True
) -> Optional[OrthoMap]:
    """Find an orthocomplementation by backtracking, or prove there is none."""
    lattice.require_lattice("ortho_search")
    if use_counting and refuted_by_counting(lattice):
        logger.debug(f"ortho_search: {len(lattice.atoms())} atoms vs "
                     f"{len(lattice.coatoms())} coatoms, no orthocomplementation")
        return None
    n = len(lattice)
    if n > cap:
        raise CapExceededError("Lattice too large for an orthocomplementation search",
                               size=n, cap=cap)
    leq = lattice.leq
    down = leq.sum(axis=0)  # |{y : y <= x}|
    up = leq.sum(axis=1)
    perm = [-1] * n
    bottom, top = lattice.bottom, lattice.top
    perm[bottom], perm[top] = top, bottom
    nodes = 0

    def compatible(x: int, y: int) -> bool:
        if down[x] != up[y] or up[x] != down[y]:
            return False
        if lattice.meet(x, y) != bottom or lattice.join(x, y) != top:
            return False
        for z in range(n):
            w = perm[z]
            if w < 0:
                continue
            # x' = y and y' = x must reverse the order against every assigned z' = w
            if leq[x, z] and not leq[w, y] or leq[z, x] and not leq[y, w]:
                return False
            if leq[y, z] and not leq[w, x] or leq[z, y] and not leq[x, w]:
                return False
        return True

    def extend() -> bool:
        nonlocal nodes
        nodes += 1
        try:
            x = perm.index(-1)
        except ValueError:
            return True
        for y in range(x + 1, n):
            if perm[y] >= 0 or not compatible(x, y):
                continue
            perm[x], perm[y] = y, x
            if extend():
                return True
            perm[x] = perm[y] = -1
        return False

    found = extend()
    logger.debug(f"ortho_search: explored {nodes} nodes over {n} elements, found={found}")
    if not found:
        return None
    return validate_ortho(lattice, OrthoMap(tuple(perm)))


def check_weak_modularity(lattice: FiniteLattice, ortho: OrthoMap) -> Verdict:
    """a <= b implies (a v b') ^ b = a."""
    lattice.require_lattice("check_weak_modularity")
    for a in range(len(lattice)):
        for b in range(len(lattice)):
            if lattice.leq[a, b] and lattice.meet(lattice.join(a, ortho(b)), b) != a:
                return Verdict.failing((lattice.label(a), lattice.label(b)),
                                       "(a v b') ^ b differs from a")
    return Verdict.holding()


def check_irreducible(lattice: FiniteLattice, ortho: OrthoMap) -> Verdict:
    """Only 0 and I are central, i.e. satisfy b = (b ^ a) v (b ^ a') for every a."""
    lattice.require_lattice("check_irreducible")
    n = len(lattice)
    for b in range(n):
        if b in (lattice.bottom, lattice.top):
            continue
        if all(lattice.join(lattice.meet(b, a), lattice.meet(b, ortho(a))) == b
               for a in range(n)):
            return Verdict.failing((lattice.label(b),), "b is a central element")
    return Verdict.holding()


def longest_orthogonal_chain(
    lattice: FiniteLattice,
    ortho: OrthoMap,
    exact_cap: int = EXACT_CHAIN_CAP
) -> int:
    """Largest set of pairwise orthogonal (a <= b') non-zero elements.

    Exact up to ``exact_cap`` elements, a clique-approximation lower bound above.
    """
    graph = nx.Graph()
    nonzero = [x for x in range(len(lattice)) if x != lattice.bottom]
    graph.add_nodes_from(nonzero)
    graph.add_edges_from((x, y) for x, y in itertools.combinations(nonzero, 2)
                         if lattice.leq[x, ortho(y)])
    if not nonzero:
        return 0
    if len(lattice) <= exact_cap:
        clique, _ = nx.max_weight_clique(graph, weight=None)
        return len(clique)
    logger.warning(f"longest_orthogonal_chain: {len(lattice)} elements above the exact cap "
                   f"{exact_cap}, returning a lower bound")
    return len(max_clique(graph))
