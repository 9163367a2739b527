"""
The mix of two rotation systems: the subgroup of the direct product
generated by the pairs tau_j = (sigma_j, sigma'_j), acting on the disjoint
union of both permutation domains.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from groups.exceptions import ConsistencyError
from groups.perm import Permutation

from .rotation import RotationSystem, system_from_generators

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MixSystem:
    base: RotationSystem
    left: RotationSystem
    right: RotationSystem

    @property
    def tau(self) -> Tuple[Permutation, ...]:
        return self.base.sigma

    @property
    def split(self) -> int:
        """Points below ``split`` belong to the left component."""
        return self.left.degree

    @property
    def order(self) -> int:
        return self.base.order


def _pair(a: Permutation, b: Permutation) -> Permutation:
    return Permutation._wrap(np.concatenate([a.images, b.images + a.degree]))


def _label(left: RotationSystem, right: RotationSystem) -> str:
    return f"{left.name or 'P'} # {right.name or 'Q'}"


def mix(left: RotationSystem, right: RotationSystem) -> MixSystem:
    """
    Mix two systems of equal rank.

    Args:
        left: First component
        right: Second component

    Returns:
        MixSystem whose ``base`` acts on left.degree + right.degree points
    """
    if left.rank != right.rank:
        raise ValueError(f"Rank mismatch: {left.rank} vs {right.rank}")
    tau = [_pair(a, b) for a, b in zip(left.sigma, right.sigma)]
    base = system_from_generators(tau, name=_label(left, right))
    if base.order % left.order or base.order % right.order:
        raise ConsistencyError(
            "Mix does not project onto its components",
            {"mix": base.order, "left": left.order, "right": right.order},
        )
    if (left.order * right.order) % base.order:
        raise ConsistencyError(
            "Mix order does not divide the direct product order",
            {"mix": base.order, "left": left.order, "right": right.order},
        )
    logger.info(f"Mix {base.name}: order {base.order} (components {left.order}, {right.order})")
    return MixSystem(base, left, right)


def is_direct_product(m: MixSystem) -> bool:
    return m.base.order == m.left.order * m.right.order


def mix_type(m: MixSystem) -> Tuple[int, ...]:
    return m.base.type_vector


def facet_subsystem(m: MixSystem) -> MixSystem:
    """Sub-mix on tau_1 .. tau_{n-2}."""
    if m.base.rank < 3:
        raise ValueError("Facets need rank at least 3")
    return MixSystem(m.base.facet(), m.left.facet(), m.right.facet())


def vertex_subsystem(m: MixSystem) -> MixSystem:
    """Sub-mix on tau_2 .. tau_{n-1}."""
    if m.base.rank < 3:
        raise ValueError("Vertex-figures need rank at least 3")
    return MixSystem(m.base.vertex_figure(), m.left.vertex_figure(), m.right.vertex_figure())


def classify_mix(m: MixSystem, with_chirality: bool = True, faces: bool = False):
    """Full report on the mix plus the direct-product verdict."""
    from .chirality import classify

    report = classify(m.base, with_chirality=with_chirality, faces=faces)
    report.direct_product = is_direct_product(m)
    report.components = (m.left.order, m.right.order)
    return report
