"""
Rotation systems: a permutation group with marked generators sigma_1..sigma_{n-1}.

All verification questions about a chiral or directly regular polytope are
asked here through its rotation system: the standard relations, the
intersection property, reflexibility, self-duality and the face lattice.
"""

import logging
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from groups.conf import get_limit
from groups.exceptions import ConsistencyError, EnumerationLimitError, RelationViolationError
from groups.fp import ROTATION, STRING, Presentation, Word, coset_enumerate, evaluate, perm_rep
from groups.perm import PermGroup, Permutation, intersection, subgroup

logger = logging.getLogger(__name__)

GAMMA_UNION_NOTE = (
    "Face stabilizers use the subgroups generated by sigma_j (j != i, i+1) "
    "together with sigma_i sigma_{i+1} (union reading)."
)


@dataclass(frozen=True, eq=False)
class RotationSystem:
    """
    Gamma+ of a polytope: ``group`` is generated by ``sigma`` and the
    relations (sigma_i ... sigma_j)^2 = 1 hold for all i < j.
    """

    group: PermGroup
    sigma: Tuple[Permutation, ...]
    provenance: Optional[Presentation] = None
    name: Optional[str] = None
    full_order: Optional[int] = None
    notes: Tuple[str, ...] = ()
    metadata: Dict[str, object] = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return len(self.sigma) + 1

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def degree(self) -> int:
        return self.group.degree

    @property
    def type_vector(self) -> Tuple[int, ...]:
        return tuple(s.order() for s in self.sigma)

    def s(self, i: int) -> Permutation:
        """sigma_i, numbered from 1."""
        return self.sigma[i - 1]

    def kappa(self, i: int, j: int) -> Permutation:
        result = self.s(i)
        for k in range(i + 1, j + 1):
            result = result * self.s(k)
        return result

    def degenerate_indices(self) -> List[int]:
        """Generators whose order fell below the nominal type of the presentation."""
        if self.provenance is None or self.provenance.orders is None:
            return []
        return [
            i + 1
            for i, (actual, nominal) in enumerate(zip(self.type_vector, self.provenance.orders))
            if actual < nominal
        ]

    def sigma_subgroup(self, indices: Iterable[int]) -> PermGroup:
        return subgroup(self.group, [self.s(i) for i in sorted(set(indices))])

    def subsystem(self, indices: Sequence[int]) -> "RotationSystem":
        """The system on consecutive generators, e.g. (1, ..., n-2) for the facets."""
        indices = list(indices)
        if indices != list(range(indices[0], indices[0] + len(indices))):
            raise ValueError(f"Subsystem indices must be consecutive, got {indices}")
        sigma = [self.s(i) for i in indices]
        return RotationSystem(subgroup(self.group, sigma), tuple(sigma))

    def facet(self) -> "RotationSystem":
        return self.subsystem(range(1, self.rank - 1))

    def vertex_figure(self) -> "RotationSystem":
        return self.subsystem(range(2, self.rank))

    def with_name(self, name: str) -> "RotationSystem":
        return replace(self, name=name)

    def __repr__(self) -> str:
        label = self.name or "RotationSystem"
        return f"<{label} rank={self.rank} order={self.order} type={list(self.type_vector)}>"


def check_relations(sigma: Sequence[Permutation]):
    """Raise RelationViolationError unless every (sigma_i ... sigma_j)^2 is trivial."""
    m = len(sigma)
    for i in range(m):
        prod = sigma[i]
        for j in range(i + 1, m):
            prod = prod * sigma[j]
            if not (prod * prod).is_identity():
                raise RelationViolationError(
                    f"(s{i + 1} ... s{j + 1})^2 is not the identity",
                    {"i": i + 1, "j": j + 1},
                )


def system_from_generators(
    sigma: Sequence[Permutation],
    provenance: Optional[Presentation] = None,
    name: Optional[str] = None,
    order_hint: Optional[int] = None,
    **kwargs,
) -> RotationSystem:
    """
    Package marked generators as a RotationSystem after checking the relations.

    Args:
        sigma: sigma_1, ..., sigma_{n-1} as permutations of a common degree
        provenance: Presentation the permutations realize, if any
        name: Label used in reports
        order_hint: Known group order, shortens the chain construction

    Returns:
        RotationSystem
    """
    sigma = tuple(sigma)
    if not sigma:
        raise ValueError("A rotation system needs at least one generator")
    check_relations(sigma)
    group = PermGroup(sigma, order_hint=order_hint)
    return RotationSystem(group, sigma, provenance=provenance, name=name, **kwargs)


def rotation_system(p: Presentation, extra: Sequence[Word] = (), max_cosets: Optional[int] = None, name: Optional[str] = None) -> RotationSystem:
    """
    Realize a rotation presentation as the regular permutation action of its
    finite quotient.
    """
    if p.kind != ROTATION:
        raise ValueError("rotation_system needs a rotation presentation; use string_rotation_system")
    if extra:
        p = p.with_relators(extra)
    table = coset_enumerate(p, [], max_cosets=max_cosets)
    perms = perm_rep(table)
    sys = system_from_generators(perms, provenance=p, name=name, order_hint=table.index)
    if sys.order != table.index:
        raise ConsistencyError(
            "Regular representation has order different from the coset count",
            {"order": sys.order, "index": table.index},
        )
    degenerate = sys.degenerate_indices()
    if degenerate:
        note = f"degenerate type: nominal {list(p.orders)}, actual {list(sys.type_vector)}"
        logger.warning(f"{name or 'presentation'}: {note}")
        sys = replace(sys, notes=sys.notes + (note,))
    logger.info(f"Built rotation system {name or ''} of order {sys.order}, type {list(sys.type_vector)}")
    return sys


def string_rotation_system(p: Presentation, max_cosets: Optional[int] = None, name: Optional[str] = None) -> RotationSystem:
    """
    Enumerate a string group on involutions r0..r{n-1} and mark the rotations
    sigma_i = r_{i-1} r_i inside it.

    ``full_order`` records the order of the whole string group; the rotation
    subgroup has index 2 exactly when the quotient is directly regular.
    """
    if p.kind != STRING:
        raise ValueError("string_rotation_system needs a string presentation")
    table = coset_enumerate(p, [], max_cosets=max_cosets)
    rho = perm_rep(table)
    sigma = [rho[i - 1] * rho[i] for i in range(1, p.rank)]
    sys = system_from_generators(sigma, provenance=p, name=name, full_order=table.index)
    index = table.index // sys.order
    note = "rotation subgroup of index 2" if index == 2 else f"rotation subgroup of index {index}: not directly regular"
    logger.info(f"String group of order {table.index}; rotations generate order {sys.order}")
    return replace(sys, notes=sys.notes + (note,))


# -- subgroups and the intersection property --------------------------------


def gamma_I(sys: RotationSystem, I: Iterable[int]) -> PermGroup:
    """Subgroup generated by kappa_{i,j} for 1 <= i <= j <= n-1 with i-1 and j in I."""
    I = set(I)
    n = sys.rank
    if not I <= set(range(-1, n + 1)):
        raise ValueError(f"Index set {sorted(I)} outside -1..{n}")
    gens = [
        sys.kappa(i, j)
        for i in range(1, n)
        for j in range(i, n)
        if i - 1 in I and j in I
    ]
    return subgroup(sys.group, gens)


@dataclass(frozen=True)
class IntersectionCheck:
    left: Tuple[int, ...]
    right: Tuple[int, ...]
    left_order: int
    right_order: int
    intersection_order: int
    expected_order: int

    @property
    def holds(self) -> bool:
        return self.intersection_order == self.expected_order

    @property
    def orders(self) -> Tuple[int, int, int]:
        return (self.left_order, self.right_order, self.intersection_order)


@dataclass(frozen=True)
class IntersectionVerdict:
    holds: bool
    witness: Optional[IntersectionCheck] = None
    checks: Tuple[IntersectionCheck, ...] = ()


def intersection_conditions(rank: int) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """
    Pairs of generator index sets whose subgroups must meet in the subgroup
    of the common indices.

    Ranks 3 to 5 use the short lists; higher ranks reduce to the facet plus
    Gamma_{n-1} against <sigma_j, ..., sigma_{n-1}> for j = 2..n-1.
    """
    if rank <= 2:
        return []
    if rank == 3:
        return [((1,), (2,))]
    if rank == 4:
        return [((1,), (2,)), ((2,), (3,)), ((1, 2), (2, 3))]
    if rank == 5:
        return intersection_conditions(4) + [
            ((1, 2, 3), (2, 3, 4)),
            ((1, 2, 3), (3, 4)),
            ((1, 2, 3), (4,)),
        ]
    facet = tuple(range(1, rank - 1))
    return intersection_conditions(rank - 1) + [
        (facet, tuple(range(j, rank))) for j in range(2, rank)
    ]


def run_intersection_check(sys: RotationSystem, left: Sequence[int], right: Sequence[int]) -> IntersectionCheck:
    H = sys.sigma_subgroup(left)
    K = sys.sigma_subgroup(right)
    X = intersection(H, K)
    E = sys.sigma_subgroup(set(left) & set(right))
    return IntersectionCheck(tuple(left), tuple(right), H.order, K.order, X.order, E.order)


def intersection_property(sys: RotationSystem) -> IntersectionVerdict:
    """Check the intersection property, stopping at the first failing pair."""
    checks = []
    for left, right in intersection_conditions(sys.rank):
        check = run_intersection_check(sys, left, right)
        checks.append(check)
        if not check.holds:
            logger.info(
                f"Intersection property fails: <{left}> & <{right}> has order "
                f"{check.intersection_order}, expected {check.expected_order}"
            )
            return IntersectionVerdict(False, check, tuple(checks))
    return IntersectionVerdict(True, None, tuple(checks))


# -- equivalence of marked tuples -------------------------------------------


def graph_order(
    left: Sequence[Permutation],
    right: Sequence[Permutation],
    left_base: Sequence[int],
    right_base: Sequence[int],
    limit: Optional[int] = None,
) -> int:
    """
    Order of <(left_i, right_i)> acting on the disjoint union of both domains.

    An element fixing both bases is trivial, so the orbit of the concatenated
    base images is regular. Stops counting once ``limit`` is passed.
    """
    a0 = np.asarray(left_base, dtype=np.intp)
    b0 = np.asarray(right_base, dtype=np.intp)
    pairs = list(zip((g.images for g in left), (h.images for h in right)))
    seen = {a0.tobytes() + b"|" + b0.tobytes()}
    frontier = [(a0, b0)]
    while frontier:
        nxt = []
        for a, b in frontier:
            for g, h in pairs:
                na, nb = g[a], h[b]
                key = na.tobytes() + b"|" + nb.tobytes()
                if key not in seen:
                    seen.add(key)
                    nxt.append((na, nb))
                    if limit is not None and len(seen) > limit:
                        return len(seen)
        frontier = nxt
    return len(seen)


def is_equivalent(a: RotationSystem, b: RotationSystem) -> bool:
    """True iff sigma_i -> sigma'_i extends to an isomorphism of the groups."""
    if a.rank != b.rank or a.order != b.order:
        return False
    return graph_order(a.sigma, b.sigma, a.group.base, b.group.base, limit=a.order) == a.order


def covers(a: RotationSystem, b: RotationSystem) -> bool:
    """True iff sigma_i -> sigma'_i extends to a homomorphism from a onto b."""
    if a.rank != b.rank or a.order % b.order:
        return False
    return graph_order(a.sigma, b.sigma, a.group.base, b.group.base, limit=a.order) == a.order


def quotient_criterion(
    sys: RotationSystem,
    target: RotationSystem,
    side: str = "facet",
    require_target_property: bool = False,
) -> bool:
    """
    Decide whether the covering sys -> target is one-to-one on the facet
    (or vertex-figure) subgroup.

    With ``require_target_property`` the target's intersection property is
    checked too, so that True certifies the property for ``sys``.
    """
    if sys.rank != target.rank:
        raise ValueError(f"Rank mismatch: {sys.rank} vs {target.rank}")
    if not covers(sys, target):
        raise ValueError("The generator map does not extend to a homomorphism")
    if side == "facet":
        indices = range(1, sys.rank - 1)
    elif side == "vertex":
        indices = range(2, sys.rank)
    else:
        raise ValueError(f"side must be 'facet' or 'vertex', got {side!r}")
    injective = sys.sigma_subgroup(indices).order == target.sigma_subgroup(indices).order
    if injective and require_target_property:
        return intersection_property(target).holds
    return injective


# -- enantiomorphs and duals --------------------------------------------------


def enantiomorph_word(w: Word) -> Word:
    """Substitute s1 -> s1^-1 and s2 -> s1^2 s2, leaving s_j (j >= 3) alone."""
    return w.substitute({
        1: Word.generator(1, -1),
        2: Word(((1, 2), (2, 1))),
    })


def _transform_presentation(p: Optional[Presentation], transform) -> Optional[Presentation]:
    if p is None or p.kind != ROTATION:
        return None
    return Presentation(
        p.rank,
        tuple(transform(w) for w in p.relators),
        p.kind,
        p.orders,
        tuple(transform(w) for w in p.extra),
    )


def enantiomorph(sys: RotationSystem) -> RotationSystem:
    """The mirror image: marked generators (s1^-1, s1^2 s2, s3, ..., s_{n-1})."""
    if sys.rank < 3:
        raise ValueError("Enantiomorphs need rank at least 3")
    s1, s2 = sys.sigma[0], sys.sigma[1]
    sigma = (s1.inverse(), s1 * s1 * s2) + sys.sigma[2:]
    return RotationSystem(
        sys.group,
        sigma,
        provenance=_transform_presentation(sys.provenance, enantiomorph_word),
        name=f"{sys.name}~" if sys.name else None,
    )


def dual_word(w: Word, rank: int) -> Word:
    """Substitute s_j -> s_{n-j}^-1."""
    return w.substitute({j: Word.generator(rank - j, -1) for j in range(1, rank)})


def dual(sys: RotationSystem) -> RotationSystem:
    """Same group, generators (s_{n-1}^-1, ..., s_1^-1)."""
    sigma = tuple(s.inverse() for s in reversed(sys.sigma))
    orders = None
    provenance = _transform_presentation(sys.provenance, lambda w: dual_word(w, sys.rank))
    if provenance is not None and provenance.orders is not None:
        orders = tuple(reversed(provenance.orders))
        provenance = replace(provenance, orders=orders)
    return RotationSystem(
        sys.group,
        sigma,
        provenance=provenance,
        name=f"{sys.name}*" if sys.name else None,
    )


def transformed_relators_vanish(sys: RotationSystem) -> Optional[bool]:
    """
    Evaluate every mirrored relator of the provenance in ``sys``.

    None when there is no rotation presentation to evaluate.
    """
    p = sys.provenance
    if p is None or p.kind != ROTATION:
        return None
    return all(evaluate(enantiomorph_word(w), sys.sigma).is_identity() for w in p.all_relators)


def is_reflexible(sys: RotationSystem) -> bool:
    """
    True iff the mirror map on the generators extends to an automorphism.

    Decided by the order of the graph subgroup, cross-checked against the
    mirrored relators when a presentation is known.
    """
    verdict = is_equivalent(sys, enantiomorph(sys))
    oracle = transformed_relators_vanish(sys)
    if oracle is not None and oracle != verdict:
        raise ConsistencyError(
            "Reflexibility tests disagree",
            {"graph_subgroup": verdict, "relators": oracle, "order": sys.order, "name": sys.name},
        )
    return verdict


def is_self_dual(sys: RotationSystem) -> bool:
    return is_equivalent(sys, dual(sys))


def self_duality(sys: RotationSystem, reflexible: Optional[bool] = None) -> str:
    """One of ``none``, ``self-dual``, ``properly`` or ``improperly``."""
    if reflexible is None:
        reflexible = is_reflexible(sys)
    if sys.rank < 3:
        return "self-dual" if is_self_dual(sys) else "none"
    if is_self_dual(sys):
        return "self-dual" if reflexible else "properly"
    if not reflexible and is_equivalent(dual(sys), enantiomorph(sys)):
        return "improperly"
    return "none"


def word_period_pair(sys: RotationSystem, w: Word) -> Tuple[int, int]:
    """Periods of w and of its mirrored word; unequal periods certify chirality."""
    return (
        evaluate(w, sys.sigma).order(),
        evaluate(enantiomorph_word(w), sys.sigma).order(),
    )


def find_period_witness(sys: RotationSystem, max_length: int = 6) -> Optional[Word]:
    """Shortest word (shortlex) whose period differs from its mirror's, if any."""
    letters = [(g, e) for g in range(1, sys.rank) for e in (1, -1)]
    for length in range(1, max_length + 1):
        for combo in product(letters, repeat=length):
            if any(a[0] == b[0] and a[1] == -b[1] for a, b in zip(combo, combo[1:])):
                continue
            w = Word(combo)
            first, second = word_period_pair(sys, w)
            if first != second:
                return w
    return None


# -- face lattice ------------------------------------------------------------


@dataclass
class FaceLattice:
    """
    Ranked coset poset: i-faces are left cosets of Gamma^{I} with
    I = {-1..n} minus {i}, ordered by nonempty intersection.
    """

    rank: int
    counts: Tuple[int, ...]
    incidences: Dict[Tuple[int, int], Set[Tuple[int, int]]]
    flag_count: int
    diamond_ok: bool
    violations: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def f_vector(self) -> Tuple[int, ...]:
        return self.counts


def _element_graph(sys: RotationSystem) -> List[np.ndarray]:
    """Right multiplication by each sigma_i as a map on element indices."""
    base = np.asarray(sys.group.base, dtype=np.intp)
    start = base.copy()
    index = {start.tobytes(): 0}
    keys = [start]
    maps: List[List[int]] = [[] for _ in sys.sigma]
    k = 0
    while k < len(keys):
        x = keys[k]
        for gi, s in enumerate(sys.sigma):
            y = s.images[x]
            key = y.tobytes()
            if key not in index:
                index[key] = len(keys)
                keys.append(y)
            maps[gi].append(index[key])
        k += 1
    if len(keys) != sys.order:
        raise ConsistencyError("Element enumeration disagrees with the group order", {"found": len(keys), "order": sys.order})
    return [np.asarray(m, dtype=np.intp) for m in maps]


def _coset_labels(size: int, generators: List[np.ndarray]) -> Tuple[np.ndarray, int]:
    labels = np.full(size, -1, dtype=np.intp)
    count = 0
    for start in range(size):
        if labels[start] >= 0:
            continue
        labels[start] = count
        stack = [start]
        while stack:
            x = stack.pop()
            for h in generators:
                y = int(h[x])
                if labels[y] < 0:
                    labels[y] = count
                    stack.append(y)
        count += 1
    return labels, count


def coset_poset(sys: RotationSystem, limit: Optional[int] = None) -> FaceLattice:
    """Build the coset poset and test the diamond condition, without preconditions."""
    if limit is None:
        limit = get_limit("MAX_LATTICE")
    if sys.order > limit:
        raise EnumerationLimitError(
            f"Face lattice of a group of order {sys.order} exceeds cap {limit}",
            {"order": sys.order, "cap": limit},
        )
    n = sys.rank
    maps = _element_graph(sys)
    size = sys.order

    def kappa_map(i: int, j: int) -> np.ndarray:
        result = maps[i - 1]
        for k in range(i + 1, j + 1):
            result = maps[k - 1][result]
        return result

    labels, counts = [], []
    for face_rank in range(n):
        I = set(range(-1, n + 1)) - {face_rank}
        gens = [kappa_map(i, j) for i in range(1, n) for j in range(i, n) if i - 1 in I and j in I]
        lab, count = _coset_labels(size, gens)
        labels.append(lab)
        counts.append(count)

    incidences: Dict[Tuple[int, int], Set[Tuple[int, int]]] = {}
    for a in range(n):
        for b in range(a + 1, n):
            codes = np.unique(labels[a] * counts[b] + labels[b])
            incidences[(a, b)] = {(int(c // counts[b]), int(c % counts[b])) for c in codes}

    violations = []
    below: Dict[Tuple[int, int], Dict[int, Set[int]]] = {}
    for (a, b), pairs in incidences.items():
        table: Dict[int, Set[int]] = {}
        for x, y in pairs:
            table.setdefault(y, set()).add(x)
        below[(a, b)] = table
    for j in range(n):
        if j == 0:
            lower = [None]
        else:
            lower = range(counts[j - 1])
        upper = [None] if j == n - 1 else range(counts[j + 1])
        for z in upper:
            for x in lower:
                middle = set(range(counts[j]))
                if z is not None:
                    middle &= below[(j, j + 1)].get(z, set())
                if x is not None:
                    if z is not None and x not in below[(j - 1, j + 1)].get(z, set()):
                        continue
                    middle = {y for y in middle if x in below[(j - 1, j)].get(y, set())}
                if len(middle) != 2:
                    violations.append(f"rank {j}: {len(middle)} faces between {x} and {z}")
                    if len(violations) >= 20:
                        break
            if len(violations) >= 20:
                break

    ways = np.ones(counts[0], dtype=object)
    for r in range(1, n):
        nxt = np.zeros(counts[r], dtype=object)
        for x, y in incidences[(r - 1, r)]:
            nxt[y] += ways[x]
        ways = nxt
    flag_count = int(sum(ways))

    lattice = FaceLattice(
        rank=n,
        counts=tuple(counts),
        incidences=incidences,
        flag_count=flag_count,
        diamond_ok=not violations,
        violations=violations,
        notes=[GAMMA_UNION_NOTE],
    )
    logger.info(f"Face lattice f-vector {lattice.counts}, {flag_count} flags, diamond {'ok' if lattice.diamond_ok else 'violated'}")
    return lattice


def face_lattice(sys: RotationSystem, check_intersection: bool = True, limit: Optional[int] = None) -> FaceLattice:
    """
    Reconstruct the face lattice of a polytope from its rotation system.

    Raises ValueError when the intersection property fails and
    ConsistencyError when the diamond condition is violated.
    """
    if check_intersection:
        verdict = intersection_property(sys)
        if not verdict.holds:
            raise ValueError(f"Intersection property fails: {verdict.witness}")
    lattice = coset_poset(sys, limit=limit)
    if not lattice.diamond_ok:
        raise ConsistencyError("Diamond condition violated", {"violations": lattice.violations[:5]})
    return lattice
