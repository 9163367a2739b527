"""
Chirality groups, chirality index and the smallest reflexible cover.

The chirality group X of a system is computed twice: as the kernel of the
projection of mix(sys, enantiomorph(sys)) onto its first component, and,
when a rotation presentation is known, as the normal closure of the
mirrored relators. The two must give the same subgroup.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from groups.exceptions import ConsistencyError, EnumerationLimitError
from groups.fp import ROTATION, evaluate
from groups.perm import PermGroup, describe_group, normal_closure, pointwise_stabilizer

from .mix import MixSystem, mix
from .rotation import (
    FaceLattice,
    IntersectionVerdict,
    RotationSystem,
    coset_poset,
    enantiomorph,
    enantiomorph_word,
    find_period_witness,
    intersection_property,
    is_reflexible,
    self_duality,
)

logger = logging.getLogger(__name__)


def chirality_group_kernel(sys: RotationSystem) -> PermGroup:
    """X read off the smallest reflexible cover, on the domain of ``sys``."""
    cover = mix(sys, enantiomorph(sys))
    d = sys.degree
    kernel = pointwise_stabilizer(cover.base.group, range(d))
    gens = [g.restricted(d, 2 * d) for g in kernel.generators]
    return PermGroup(gens, degree=d)


def chirality_group_relators(sys: RotationSystem) -> Optional[PermGroup]:
    """Normal closure of the mirrored relators; None without a rotation presentation."""
    p = sys.provenance
    if p is None or p.kind != ROTATION:
        return None
    images = [evaluate(enantiomorph_word(w), sys.sigma) for w in p.all_relators]
    return normal_closure(sys.group, images)


def chirality_analysis(sys: RotationSystem) -> Tuple[PermGroup, Optional[bool]]:
    """
    Both chirality-group computations.

    Returns:
        (X, agreement) where agreement is None when only the kernel method applies

    Raises:
        ConsistencyError: the methods produce different subgroups
    """
    X = chirality_group_kernel(sys)
    oracle = chirality_group_relators(sys)
    if oracle is None:
        return X, None
    same = X.order == oracle.order and X.is_subgroup_of(oracle) and oracle.is_subgroup_of(X)
    if not same:
        raise ConsistencyError(
            "Chirality group methods disagree",
            {"kernel_order": X.order, "relator_order": oracle.order, "system": sys.name, "order": sys.order},
        )
    return X, True


def chirality_group(sys: RotationSystem) -> PermGroup:
    return chirality_analysis(sys)[0]


def chirality_index(sys: RotationSystem) -> int:
    return chirality_group(sys).order


def is_totally_chiral(sys: RotationSystem) -> bool:
    return chirality_index(sys) == sys.order


@dataclass(frozen=True, eq=False)
class CoverSystem:
    cover: MixSystem
    base: RotationSystem

    @property
    def order(self) -> int:
        return self.cover.order


def smallest_regular_cover(sys: RotationSystem) -> CoverSystem:
    """mix(sys, enantiomorph(sys)), checked against |Gamma| * kappa."""
    cover = mix(sys, enantiomorph(sys))
    kappa = chirality_index(sys)
    if cover.order != sys.order * kappa:
        raise ConsistencyError(
            "Cover order differs from |Gamma| * kappa",
            {"cover": cover.order, "order": sys.order, "kappa": kappa},
        )
    if kappa == sys.order and cover.order != sys.order ** 2:
        raise ConsistencyError("Totally chiral cover is not the full direct product", {"cover": cover.order})
    if not is_reflexible(cover.base):
        raise ConsistencyError("Smallest regular cover is not reflexible", {"cover": cover.order})
    return CoverSystem(cover, sys)


@dataclass(frozen=True)
class MixChiralityBound:
    kappa_mix: int
    kappa_left: int
    kappa_right: int
    right_reflexible: bool
    mix_reflexible: bool

    @property
    def divides_left(self) -> bool:
        return self.kappa_left % self.kappa_mix == 0

    @property
    def divides_product(self) -> bool:
        return (self.kappa_left * self.kappa_right) % self.kappa_mix == 0


def mix_chirality_bound(P: RotationSystem, Q: RotationSystem) -> MixChiralityBound:
    """
    Compare X(P # Q) with X(P) and X(Q).

    |X(P # Q)| always divides |X(P)| * |X(Q)|, and divides |X(P)| when Q is
    reflexible; either failure raises ConsistencyError.
    """
    m = mix(P, Q)
    bound = MixChiralityBound(
        kappa_mix=chirality_index(m.base),
        kappa_left=chirality_index(P),
        kappa_right=chirality_index(Q),
        right_reflexible=is_reflexible(Q),
        mix_reflexible=is_reflexible(m.base),
    )
    if not bound.divides_product:
        raise ConsistencyError("Chirality group of the mix exceeds the product bound", vars(bound))
    if bound.right_reflexible and not bound.divides_left:
        raise ConsistencyError("Chirality group of the mix is not a subgroup of X(P)", vars(bound))
    if bound.mix_reflexible != (bound.kappa_mix == 1):
        raise ConsistencyError("Mix reflexibility disagrees with its chirality index", vars(bound))
    return bound


@dataclass
class ChiralityReport:
    """Everything ``classify`` decides about one system."""

    name: Optional[str]
    rank: int
    order: int
    type_vector: Tuple[int, ...]
    status: str
    reflexible: bool
    self_duality: str
    intersection: IntersectionVerdict
    chirality_index: Optional[int] = None
    chirality_group: Optional[PermGroup] = None
    fingerprint: Optional[Dict[str, object]] = None
    totally_chiral: Optional[bool] = None
    method_agreement: Optional[bool] = None
    degenerate: List[int] = field(default_factory=list)
    direct_product: Optional[bool] = None
    components: Optional[Tuple[int, int]] = None
    lattice: Optional[FaceLattice] = None
    period_witness: Optional[str] = None
    full_order: Optional[int] = None
    notes: List[str] = field(default_factory=list)

    @property
    def polytopal(self) -> bool:
        return self.status in ("reflexible", "chiral")

    @property
    def self_dual(self) -> bool:
        return self.self_duality != "none"


def _polytopality(sys: RotationSystem, verdict: IntersectionVerdict, reflexible: bool, notes: List[str]) -> Tuple[str, Optional[FaceLattice]]:
    if verdict.holds:
        return ("reflexible" if reflexible else "chiral"), None
    try:
        lattice = coset_poset(sys)
    except EnumerationLimitError as e:
        notes.append(f"coset poset not built: {e}")
        return "not-polytopal", None
    return ("pre-polytopal" if lattice.diamond_ok else "not-polytopal"), lattice


def classify(sys: RotationSystem, with_chirality: bool = True, faces: bool = False, witness_length: int = 0) -> ChiralityReport:
    """
    Classify a rotation system.

    Args:
        sys: System to classify
        with_chirality: Compute the chirality group (both methods)
        faces: Build the face lattice when the system is polytopal
        witness_length: If positive, search words up to this length for a period witness

    Returns:
        ChiralityReport
    """
    notes = list(sys.notes)
    verdict = intersection_property(sys)
    reflexible = is_reflexible(sys)
    status, lattice = _polytopality(sys, verdict, reflexible, notes)
    report = ChiralityReport(
        name=sys.name,
        rank=sys.rank,
        order=sys.order,
        type_vector=sys.type_vector,
        status=status,
        reflexible=reflexible,
        self_duality=self_duality(sys, reflexible) if sys.rank >= 3 else "none",
        intersection=verdict,
        degenerate=sys.degenerate_indices(),
        full_order=sys.full_order,
        notes=notes,
    )
    if with_chirality:
        X, agreement = chirality_analysis(sys)
        report.chirality_group = X
        report.chirality_index = X.order
        report.fingerprint = describe_group(X)
        report.totally_chiral = X.order == sys.order
        report.method_agreement = agreement
        if (X.order == 1) != reflexible:
            raise ConsistencyError(
                "Chirality index disagrees with the reflexibility test",
                {"kappa": X.order, "reflexible": reflexible, "system": sys.name},
            )
    if faces and report.polytopal:
        lattice = coset_poset(sys)
        if not lattice.diamond_ok:
            raise ConsistencyError("Diamond condition violated for a polytopal system", {"violations": lattice.violations[:5]})
    if lattice is not None:
        report.lattice = lattice
        notes.extend(n for n in lattice.notes if n not in notes)
    if witness_length > 0 and not reflexible:
        w = find_period_witness(sys, witness_length)
        if w is not None:
            report.period_witness = str(w)
    logger.info(f"Classified {sys.name or 'system'}: {status}, order {sys.order}, kappa {report.chirality_index}")
    return report
