"""
Finite state property spaces.

A FiniteStatePropertySpace holds states, properties and the actuality
matrix ``xi[p, a]`` (property ``a`` is actual in state ``p``). The dual
map kappa is read off the columns, so ``a in xi(p) <=> p in kappa(a)``
holds by construction. Extents and actual sets are cached as int
bitsets; subset checks are then plain integer operations.

Example::

    from qmachine.geometry import Direction, Vec3
    from qmachine.machine import BallPoint
    from qmachine.spa import axiom_report, build_spin_sps

    dirs = [Direction(Vec3(1, 0, 0)), Direction(Vec3(-1, 0, 0)),
            Direction(Vec3(0, 0, 1)), Direction(Vec3(0, 0, -1))]
    sps = build_spin_sps(dirs, interior=[BallPoint.center()])
    report = axiom_report(sps)
    report.axioms["3"].holds   # True: the spin lattice obeys the covering law
"""
import itertools
import logging
from dataclasses import dataclass, field
from functools import reduce
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .constants import (CSV_FLOAT_FORMAT, EXACT_CHAIN_CAP, ORTHO_SEARCH_CAP,
                        SUBSET_ENUMERATION_CAP, TRIPLE_INTERSECTION_DEPTH, UNIT_TOLERANCE)
from .exceptions import (CapExceededError, DomainError, InvariantViolationError,
                         PreconditionError, QMachineError)
from .geometry import Direction
from .lattice import (BOTTOM_LABEL, TOP_LABEL, FiniteLattice, OrthoMap, Quotient, Status,
                      Verdict, atoms_of, check_atomistic, check_covering, check_irreducible,
                      check_weak_modularity, greatest_element, least_element,
                      longest_orthogonal_chain, ortho_search, ortho_violation, quotient_to_poset,
                      refuted_by_counting)
from .machine import BallPoint

logger = logging.getLogger(__name__)

OrthoPairs = Tuple[Tuple[str, str], ...]


def _mask(bits: Iterable[bool]) -> int:
    out = 0
    for k, bit in enumerate(bits):
        if bit:
            out |= 1 << k
    return out


def _members(mask: int, labels: Sequence[str]) -> Tuple[str, ...]:
    return tuple(label for k, label in enumerate(labels) if mask >> k & 1)


@dataclass(frozen=True, eq=False)
class FiniteStatePropertySpace:
    states: Tuple[str, ...]
    properties: Tuple[str, ...]
    xi: np.ndarray
    ortho: Optional[OrthoPairs] = None
    _kappa: Tuple[int, ...] = field(init=False, repr=False)
    _xi: Tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        states, properties = tuple(self.states), tuple(self.properties)
        xi = np.array(self.xi, dtype=bool).reshape(len(states), len(properties))
        for name, labels in (("states", states), ("properties", properties)):
            if len(set(labels)) != len(labels):
                raise DomainError("Labels must be unique", argument=name)
        if self.ortho is not None:
            ortho = tuple((str(a), str(b)) for a, b in self.ortho)
            unknown = [x for pair in ortho for x in pair if x not in properties]
            if unknown:
                raise DomainError("Orthocomplement names an unknown property",
                                  argument="ortho", value=unknown[0])
            object.__setattr__(self, "ortho", ortho)
        xi.setflags(write=False)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "properties", properties)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "_kappa", tuple(_mask(xi[:, a]) for a in range(len(properties))))
        object.__setattr__(self, "_xi", tuple(_mask(xi[p, :]) for p in range(len(states))))

    @classmethod
    def from_pairs(
        cls,
        states: Sequence[str],
        properties: Sequence[str],
        actual: Iterable[Tuple[str, str]],
        ortho: Optional[Iterable[Tuple[str, str]]] = None
    ) -> "FiniteStatePropertySpace":
        """Build from (state, property) actuality pairs."""
        state_index = {p: i for i, p in enumerate(states)}
        property_index = {a: i for i, a in enumerate(properties)}
        xi = np.zeros((len(states), len(properties)), dtype=bool)
        for p, a in actual:
            if p not in state_index:
                raise DomainError("Unknown state", argument="xi", value=p)
            if a not in property_index:
                raise DomainError("Unknown property", argument="xi", value=a)
            xi[state_index[p], property_index[a]] = True
        return cls(tuple(states), tuple(properties), xi,
                   tuple(ortho) if ortho is not None else None)

    @property
    def full_states(self) -> int:
        return (1 << len(self.states)) - 1

    def state_index(self, label: str) -> int:
        try:
            return self.states.index(label)
        except ValueError:
            raise DomainError("Unknown state", argument="state", value=label)

    def property_index(self, label: str) -> int:
        try:
            return self.properties.index(label)
        except ValueError:
            raise DomainError("Unknown property", argument="property", value=label)

    def kappa_mask(self, a: int) -> int:
        return self._kappa[a]

    def xi_mask(self, p: int) -> int:
        return self._xi[p]

    def kappa(self, label: str) -> frozenset:
        """States in which property ``label`` is actual."""
        return frozenset(_members(self._kappa[self.property_index(label)], self.states))

    def actual(self, label: str) -> frozenset:
        """Properties actual in state ``label``."""
        return frozenset(_members(self._xi[self.state_index(label)], self.properties))

    def actual_pairs(self) -> List[Tuple[str, str]]:
        return [(self.states[p], self.properties[a]) for p, a in np.argwhere(self.xi)]


def induced_orders(sps: FiniteStatePropertySpace) -> Tuple[np.ndarray, np.ndarray]:
    """(property_leq, state_leq): a <= b iff kappa(a) in kappa(b); p <= q iff xi(q) in xi(p)."""
    kappa, xi = sps._kappa, sps._xi
    property_leq = np.array([[k & ~l == 0 for l in kappa] for k in kappa], dtype=bool)
    state_leq = np.array([[y & ~x == 0 for y in xi] for x in xi], dtype=bool)
    return property_leq.reshape(len(kappa), len(kappa)), state_leq.reshape(len(xi), len(xi))


def check_duality(sps: FiniteStatePropertySpace) -> Verdict:
    for p in range(len(sps.states)):
        for a in range(len(sps.properties)):
            if bool(sps.xi_mask(p) >> a & 1) != bool(sps.kappa_mask(a) >> p & 1):
                return Verdict.failing((sps.states[p], sps.properties[a]),
                                       "xi and kappa disagree")
    return Verdict.holding()


def check_upward_closure(sps: FiniteStatePropertySpace) -> Verdict:
    """a actual in p and a <= b imply b actual in p."""
    property_leq, _ = induced_orders(sps)
    for p in range(len(sps.states)):
        for a in range(len(sps.properties)):
            if not sps.xi[p, a]:
                continue
            for b in np.flatnonzero(property_leq[a]):
                if not sps.xi[p, b]:
                    return Verdict.failing((sps.states[p], sps.properties[a],
                                            sps.properties[b]),
                                           "b is implied by a but not actual")
    return Verdict.holding()


def _families(n: int, cap: int, start: int):
    """Index families to intersect: all subsets up to ``cap`` elements, else up to triples."""
    exhaustive = n <= cap
    top = n if exhaustive else min(n, TRIPLE_INTERSECTION_DEPTH)
    families = itertools.chain.from_iterable(
        itertools.combinations(range(n), r) for r in range(start, top + 1))
    return families, exhaustive


def _closure_verdict(
    masks: Sequence[int],
    labels: Sequence[str],
    full: int,
    start: int,
    cap: int,
    strict: bool,
    what: str
) -> Verdict:
    targets = set(masks)
    families, exhaustive = _families(len(masks), cap, start)
    if not exhaustive:
        if strict:
            raise CapExceededError(f"Too many {what} for an exhaustive completeness check",
                                   size=len(masks), cap=cap)
        logger.info(f"completeness: {len(masks)} {what} above the cap {cap}, "
                    f"checking families of at most {TRIPLE_INTERSECTION_DEPTH}")
    for family in families:
        meet = reduce(lambda acc, k: acc & masks[k], family, full)
        if meet not in targets:
            return Verdict.failing(tuple(labels[k] for k in family),
                                   f"no element matches the intersection of these {what}",
                                   capped=not exhaustive)
    return Verdict.holding(capped=not exhaustive)


@dataclass(frozen=True)
class CompletenessReport:
    property_complete: Verdict
    state_complete: Verdict

    @property
    def complete(self) -> bool:
        return self.property_complete.holds and self.state_complete.holds


def property_completeness(
    sps: FiniteStatePropertySpace,
    cap: int = SUBSET_ENUMERATION_CAP,
    strict: bool = False
) -> Verdict:
    """Every family of properties has a meet: its extents intersect to some extent."""
    return _closure_verdict(sps._kappa, sps.properties, sps.full_states, 0, cap, strict,
                            "properties")


def completeness_report(
    sps: FiniteStatePropertySpace,
    cap: int = SUBSET_ENUMERATION_CAP,
    strict: bool = False
) -> CompletenessReport:
    full_properties = (1 << len(sps.properties)) - 1
    # the empty family of states has no join: it would need every property actual, 0 included
    states = _closure_verdict(sps._xi, sps.states, full_properties, 1, cap, strict, "states")
    return CompletenessReport(property_completeness(sps, cap, strict), states)


def property_meet(sps: FiniteStatePropertySpace, labels: Iterable[str]) -> Optional[str]:
    """Property whose extent is the intersection of the given extents (lowest index first)."""
    meet = reduce(lambda acc, a: acc & sps.kappa_mask(sps.property_index(a)), labels,
                  sps.full_states)
    return next((sps.properties[a] for a in range(len(sps.properties))
                 if sps.kappa_mask(a) == meet), None)


def state_join(sps: FiniteStatePropertySpace, labels: Iterable[str]) -> Optional[str]:
    """State whose actual properties are exactly those shared by the given states."""
    labels = list(labels)
    if not labels:
        return None
    common = reduce(lambda acc, p: acc & sps.xi_mask(sps.state_index(p)), labels,
                    (1 << len(sps.properties)) - 1)
    return next((sps.states[p] for p in range(len(sps.states)) if sps.xi_mask(p) == common),
                None)


@dataclass(frozen=True)
class PropertyStateMaps:
    s: Dict[str, str]
    t: Dict[str, Optional[str]]


def property_state_maps(sps: FiniteStatePropertySpace) -> PropertyStateMaps:
    """s(p): the strongest property of p; t(a): the join of the states making a actual."""
    report = completeness_report(sps)
    for verdict in (report.property_complete, report.state_complete):
        if not verdict.holds:
            raise PreconditionError("State property space is not complete",
                                    operation="property_state_maps", witness=verdict.witness)
    s = {p: property_meet(sps, sps.actual(p)) for p in sps.states}
    t = {a: state_join(sps, sorted(sps.kappa(a), key=sps.state_index)) if sps.kappa(a) else None
         for a in sps.properties}
    property_leq, state_leq = induced_orders(sps)
    for p in range(len(sps.states)):
        sp = sps.property_index(s[sps.states[p]])
        principal = _mask(property_leq[sp])
        if principal != sps.xi_mask(p):
            raise InvariantViolationError("Actual properties differ from the principal filter",
                                          invariant="xi(p) = [s(p), +inf]",
                                          observed=sps.states[p])
        for q in range(len(sps.states)):
            sq = sps.property_index(s[sps.states[q]])
            if state_leq[p, q] != property_leq[sp, sq]:
                raise InvariantViolationError("s does not preserve the state order",
                                              invariant="p <= q iff s(p) <= s(q)",
                                              observed=(sps.states[p], sps.states[q]))
    return PropertyStateMaps(s, t)


def check_adjunction(
    sps: FiniteStatePropertySpace,
    cap: int = SUBSET_ENUMERATION_CAP
) -> Verdict:
    """t(meet a_i) ~ meet t(a_i) and s(join p_j) ~ join s(p_j).

    Property families with the zero meet are skipped: t(0) is undefined.
    Families run exhaustively up to ``cap`` members, else up to triples.
    """
    maps = property_state_maps(sps)
    property_leq, state_leq = induced_orders(sps)
    families, exhaustive = _families(len(sps.properties), cap, 1)
    for family in families:
        labels = [sps.properties[a] for a in family]
        meet = property_meet(sps, labels)
        if meet is None:
            return Verdict.failing(labels, "family has no meet", capped=not exhaustive)
        if maps.t[meet] is None:
            continue
        images = [sps.state_index(maps.t[a]) for a in labels]
        lower = state_leq[:, images].all(axis=1)
        glb = greatest_element(lower, state_leq)
        expected = sps.xi_mask(sps.state_index(maps.t[meet]))
        if glb < 0 or sps.xi_mask(glb) != expected:
            return Verdict.failing(labels, "t does not preserve this meet",
                                   capped=not exhaustive)

    families, states_exhaustive = _families(len(sps.states), cap, 1)
    exhaustive = exhaustive and states_exhaustive
    for family in families:
        labels = [sps.states[p] for p in family]
        join = state_join(sps, labels)
        if join is None:
            return Verdict.failing(labels, "family has no join", capped=not exhaustive)
        images = [sps.property_index(maps.s[p]) for p in labels]
        upper = property_leq[images, :].all(axis=0)
        lub = least_element(upper, property_leq)
        expected = sps.kappa_mask(sps.property_index(maps.s[join]))
        if lub < 0 or sps.kappa_mask(lub) != expected:
            return Verdict.failing(labels, "s does not preserve this join",
                                   capped=not exhaustive)
    if not exhaustive:
        logger.info(f"adjunction: families above the cap {cap} checked up to "
                    f"{TRIPLE_INTERSECTION_DEPTH} members")
    return Verdict.holding(capped=not exhaustive)


def state_atoms(sps: FiniteStatePropertySpace) -> List[str]:
    _, state_leq = induced_orders(sps)
    return [sps.states[p] for p in atoms_of(state_leq)]


def _property_quotient(sps: FiniteStatePropertySpace) -> Tuple[FiniteLattice, Quotient]:
    property_leq, _ = induced_orders(sps)
    quotient = quotient_to_poset(property_leq)
    labels = [sps.properties[k] for k in quotient.representatives()]
    return FiniteLattice.from_leq(labels, quotient.leq), quotient


def property_lattice(sps: FiniteStatePropertySpace) -> Tuple[FiniteLattice, Quotient]:
    """Property order with equivalent properties merged, labelled by the first member."""
    lattice, quotient = _property_quotient(sps)
    lattice.require_lattice("property_lattice")
    return lattice, quotient


def check_axiom1(
    sps: FiniteStatePropertySpace,
    cap: int = SUBSET_ENUMERATION_CAP,
    strict: bool = False
) -> Verdict:
    """State property system: complete property lattice, I always and 0 never actual."""
    lattice, quotient = _property_quotient(sps)
    if not lattice.is_lattice:
        return Verdict.failing(lattice.missing_bound(), "property order is not a lattice")
    top_extent = sps.kappa_mask(quotient.classes[lattice.top][0])
    bottom_extent = sps.kappa_mask(quotient.classes[lattice.bottom][0])
    for p in range(len(sps.states)):
        if not top_extent >> p & 1:
            return Verdict.failing((sps.states[p],), "the top property is not actual")
        if bottom_extent >> p & 1:
            return Verdict.failing((sps.states[p],), "the bottom property is actual")
    return property_completeness(sps, cap, strict)


def _format_coordinate(x: float) -> str:
    # round-trip exact, so distinct coordinates never share a label
    return format(x + 0.0, CSV_FLOAT_FORMAT)


def _point_label(prefix: str, coords: Tuple[float, float, float]) -> str:
    return prefix + "(" + ",".join(_format_coordinate(x) for x in coords) + ")"


def build_spin_sps(
    directions: Sequence[Direction],
    interior: Sequence[BallPoint] = (),
    with_top_state: bool = False,
    require_negation_closed: bool = False
) -> FiniteStatePropertySpace:
    """Spin one-half system over finitely many directions.

    Property ``a(u)`` is actual in the surface state ``p(u)`` only; interior
    states make only ``I`` actual. With ``with_top_state`` a state ``p(I)``
    with the same actual set stands for the join of all states.
    """
    directions = list(directions)
    for i, j in itertools.combinations(range(len(directions)), 2):
        if (directions[i].v - directions[j].v).norm() <= UNIT_TOLERANCE:
            raise DomainError("Duplicate direction", argument="directions",
                              value=directions[i].v.as_tuple())
    for point in interior:
        if point.w.norm() >= 1.0:
            raise DomainError("Interior states lie strictly inside the ball",
                              argument="interior", value=point.w.as_tuple(), expected="|w| < 1")
    names = [_point_label("a", u.v.as_tuple()) for u in directions]
    properties = names + [BOTTOM_LABEL, TOP_LABEL]
    surface = [_point_label("p", u.v.as_tuple()) for u in directions]
    inside = [_point_label("p", w.w.as_tuple()) for w in interior]
    if len(set(inside)) != len(inside):
        repeated = next(label for label in inside if inside.count(label) > 1)
        raise DomainError("Duplicate interior state", argument="interior", value=repeated)
    states = surface + inside + (["p(I)"] if with_top_state else [])
    actual = [(p, a) for p, a in zip(surface, names)] + [(p, TOP_LABEL) for p in states]

    partner = {}
    for i, u in enumerate(directions):
        for j, v in enumerate(directions):
            if (u.v + v.v).norm() <= UNIT_TOLERANCE:
                partner[i] = j
    closed = len(partner) == len(directions)
    if require_negation_closed and not closed:
        missing = next(i for i in range(len(directions)) if i not in partner)
        raise DomainError("Direction set is not closed under negation", argument="directions",
                          value=directions[missing].v.as_tuple())
    ortho = None
    if closed:
        ortho = [(names[i], names[j]) for i, j in sorted(partner.items()) if i < j]
        ortho.append((BOTTOM_LABEL, TOP_LABEL))
    sps = FiniteStatePropertySpace.from_pairs(states, properties, actual, ortho)
    logger.debug(f"build_spin_sps: {len(directions)} directions, {len(interior)} interior "
                 f"states, negation closed={closed}")
    return sps


def sps_from_lattice(
    lattice: FiniteLattice,
    ortho: Optional[OrthoMap] = None
) -> FiniteStatePropertySpace:
    """Canonical system of a lattice: a state per non-zero element, actual above it."""
    lattice.require_lattice("sps_from_lattice")
    carriers = [x for x in range(len(lattice)) if x != lattice.bottom]
    states = [f"p[{lattice.label(x)}]" for x in carriers]
    xi = lattice.leq[carriers, :]
    pairs = tuple(ortho.pairs(lattice)) if ortho is not None else None
    return FiniteStatePropertySpace(tuple(states), lattice.elements, xi, pairs)


def _require_system(sps: FiniteStatePropertySpace, which: str) -> None:
    verdict = check_axiom1(sps)
    if not verdict.holds:
        raise PreconditionError(f"The {which} input is not a state property system",
                                operation="coproduct", witness=verdict.witness)


def _top_property(sps: FiniteStatePropertySpace) -> str:
    return next(sps.properties[a] for a in range(len(sps.properties))
                if sps.kappa_mask(a) == sps.full_states)


def _pair(x: str, y: str) -> str:
    return f"({x},{y})"


def coproduct(
    first: FiniteStatePropertySpace,
    second: FiniteStatePropertySpace
) -> FiniteStatePropertySpace:
    """Minimal compound system: product states, pairs of non-zero properties, and one 0."""
    _require_system(first, "first")
    _require_system(second, "second")
    nonzero_first = [a for a in range(len(first.properties)) if first.kappa_mask(a)]
    nonzero_second = [a for a in range(len(second.properties)) if second.kappa_mask(a)]
    pairs = list(itertools.product(nonzero_first, nonzero_second))
    properties = [_pair(first.properties[a], second.properties[b]) for a, b in pairs]
    properties.append(BOTTOM_LABEL)
    states = [_pair(p, q) for p in first.states for q in second.states]
    xi = np.zeros((len(states), len(properties)), dtype=bool)
    for (p, q), row in zip(itertools.product(range(len(first.states)),
                                             range(len(second.states))), xi):
        for k, (a, b) in enumerate(pairs):
            row[k] = first.xi[p, a] and second.xi[q, b]
    sps = FiniteStatePropertySpace(tuple(states), tuple(properties), xi)
    duality = check_duality(sps)
    if not duality.holds:
        raise InvariantViolationError("Coproduct breaks duality", invariant="duality",
                                      observed=duality.witness)
    logger.debug(f"coproduct: {len(states)} states, {len(properties)} properties")
    return sps


@dataclass(frozen=True)
class CoproductMaps:
    n1: Dict[str, str]
    n2: Dict[str, str]
    m1: Dict[str, str]
    m2: Dict[str, str]


def coproduct_embeddings(
    first: FiniteStatePropertySpace,
    second: FiniteStatePropertySpace
) -> CoproductMaps:
    """n1(a) = (a, I2), n2(b) = (I1, b) on properties; projections m1, m2 on product states."""
    top_first, top_second = _top_property(first), _top_property(second)
    n1 = {a: _pair(a, top_second) if first.kappa(a) else BOTTOM_LABEL for a in first.properties}
    n2 = {b: _pair(top_first, b) if second.kappa(b) else BOTTOM_LABEL
          for b in second.properties}
    m1, m2 = {}, {}
    for p in first.states:
        for q in second.states:
            m1[_pair(p, q)] = p
            m2[_pair(p, q)] = q
    return CoproductMaps(n1, n2, m1, m2)


@dataclass(frozen=True)
class AxiomReport:
    axioms: Dict[str, Verdict]
    invariants: Dict[str, Verdict]
    ortho: Optional[List[Tuple[str, str]]] = None
    ortho_source: str = "none"
    longest_orthogonal_chain: Optional[int] = None
    chain_exact: bool = True
    lattice_size: Optional[int] = None
    atoms: List[str] = field(default_factory=list)
    coatoms: List[str] = field(default_factory=list)

    @property
    def inconclusive(self) -> bool:
        return any(v.status is Status.INCONCLUSIVE for v in self.axioms.values())

    @property
    def violations(self) -> List[str]:
        return [name for name, v in self.invariants.items() if v.status is Status.FAILS]

    @property
    def capped(self) -> bool:
        """Some verdict holds only up to an enumeration cap."""
        verdicts = list(self.axioms.values()) + list(self.invariants.values())
        return any(v.holds and v.capped for v in verdicts)

    def to_dict(self) -> dict:
        return {
            "axioms": {name: verdict.to_dict() for name, verdict in self.axioms.items()},
            "invariants": {name: verdict.to_dict() for name, verdict in self.invariants.items()},
            "lattice_size": self.lattice_size,
            "atoms": list(self.atoms),
            "coatoms": list(self.coatoms),
            "ortho": [list(pair) for pair in self.ortho] if self.ortho is not None else None,
            "ortho_source": self.ortho_source,
            "longest_orthogonal_chain": self.longest_orthogonal_chain,
            "chain_exact": self.chain_exact,
            "capped": self.capped,
        }


_PLANE_TRANSITIVITY = ("plane transitivity needs a search over lattice automorphisms, "
                       "which is not implemented")


def _supplied_ortho(
    lattice: FiniteLattice,
    quotient: Quotient,
    sps: FiniteStatePropertySpace,
    pairs: Iterable[Tuple[str, str]]
) -> OrthoMap:
    def rep(label: str) -> str:
        return lattice.label(quotient.membership[sps.property_index(label)])

    return OrthoMap.from_pairs(lattice, [(rep(a), rep(b)) for a, b in pairs])


def _adjunction_verdict(sps: FiniteStatePropertySpace, cap: int) -> Verdict:
    completeness = completeness_report(sps, cap)
    if not completeness.complete:
        return Verdict.not_applicable("state property space is not complete")
    if completeness.property_complete.capped or completeness.state_complete.capped:
        return Verdict.not_applicable("completeness holds only up to the enumeration cap")
    return check_adjunction(sps, cap)


def axiom_report(
    sps: FiniteStatePropertySpace,
    ortho: Optional[Iterable[Tuple[str, str]]] = None,
    cap: int = SUBSET_ENUMERATION_CAP,
    search_cap: int = ORTHO_SEARCH_CAP,
    chain_cap: int = EXACT_CHAIN_CAP
) -> AxiomReport:
    """Run every applicable axiom check; orthocomplements are searched for when not supplied."""
    invariants = {"duality": check_duality(sps), "upward_closure": check_upward_closure(sps)}
    invariants["adjunction"] = _adjunction_verdict(sps, cap)
    axioms = {"1": check_axiom1(sps, cap)}
    lattice, quotient = _property_quotient(sps)
    if not lattice.is_lattice:
        reason = "property order is not a lattice"
        for name in ("2", "3", "4", "5", "7"):
            axioms[name] = Verdict.not_applicable(reason)
        axioms["6"] = Verdict.not_applicable(_PLANE_TRANSITIVITY)
        return AxiomReport(dict(sorted(axioms.items())), invariants, lattice_size=len(lattice))

    axioms["2"] = check_atomistic(lattice)
    axioms["3"] = check_covering(lattice)
    supplied = ortho if ortho is not None else sps.ortho
    found: Optional[OrthoMap] = None
    source = "none found"
    if supplied is not None:
        try:
            candidate = _supplied_ortho(lattice, quotient, sps, supplied)
            violation = ortho_violation(lattice, candidate.perm)
        except QMachineError as e:
            violation = ("malformed", str(e))
        if violation is None:
            found, source = candidate, "supplied"
            axioms["4"] = Verdict.holding("supplied orthocomplementation is valid")
        else:
            source = "supplied, invalid"
            axioms["4"] = Verdict.failing(violation, "supplied map is not an orthocomplementation")
    else:
        try:
            found = ortho_search(lattice, search_cap)
        except CapExceededError:
            source = "inconclusive"
            axioms["4"] = Verdict.inconclusive(
                f"lattice has {len(lattice)} elements, above the search cap {search_cap}")
        else:
            if found is not None:
                source = "found"
                axioms["4"] = Verdict.holding("orthocomplementation found by search")
            elif refuted_by_counting(lattice):
                axioms["4"] = Verdict.failing(
                    (len(lattice.atoms()), len(lattice.coatoms())),
                    "none found: atom and coatom counts differ")
            else:
                axioms["4"] = Verdict.failing(("exhaustive search", len(lattice)),
                                                "none found: exhaustive search")

    chain = None
    if found is not None:
        axioms["5"] = check_weak_modularity(lattice, found)
        axioms["7"] = check_irreducible(lattice, found)
        chain = longest_orthogonal_chain(lattice, found, chain_cap)
    else:
        for name in ("5", "7"):
            axioms[name] = Verdict.not_applicable("no orthocomplementation")
    axioms["6"] = Verdict.not_applicable(_PLANE_TRANSITIVITY)

    report = AxiomReport(
        axioms=dict(sorted(axioms.items())),
        invariants=invariants,
        ortho=found.pairs(lattice) if found is not None else None,
        ortho_source=source,
        longest_orthogonal_chain=chain,
        chain_exact=len(lattice) <= chain_cap,
        lattice_size=len(lattice),
        atoms=[lattice.label(x) for x in lattice.atoms()],
        coatoms=[lattice.label(x) for x in lattice.coatoms()]
    )
    logger.info("axiom_report: " + ", ".join(f"{name}={v.status.value}"
                                             for name, v in report.axioms.items()))
    return report
