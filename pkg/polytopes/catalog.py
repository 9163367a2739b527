"""
Named constructions: toroidal maps, Platonic and universal string rotation
groups, the named example polytopes, L2(p) and generating-tuple search.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime, mod_inverse
from sympy.core.intfunc import igcdex
from tqdm import tqdm

from groups.conf import get_limit
from groups.exceptions import ConsistencyError
from groups.fp import ROTATION, STRING, Presentation, Word, parse_word
from groups.perm import PermGroup, Permutation, conjugacy_class_representatives

from .rotation import (
    RotationSystem,
    dual,
    enantiomorph,
    enantiomorph_word,
    intersection_property,
    is_equivalent,
    is_reflexible,
    rotation_system,
    string_rotation_system,
    system_from_generators,
)

logger = logging.getLogger(__name__)


# -- presentations ------------------------------------------------------------


def string_rotation(*orders: int, extra: Sequence[Word] = (), regular: bool = False) -> Presentation:
    """
    Rotation presentation [p1, ..., p_{n-1}]+ with optional extra relators.

    Args:
        orders: Schlaefli type p1, ..., p_{n-1}
        extra: Additional relators in s1..s_{n-1}
        regular: Also add the mirror image of every extra relator, as needed
            for the rotation subgroup of a string group quotient

    Returns:
        Presentation of kind ``rotation``
    """
    if not orders or any(p < 2 for p in orders):
        raise ValueError(f"Every p_i must be at least 2, got {list(orders)}")
    m = len(orders)
    relators = [Word.generator(i + 1, p) for i, p in enumerate(orders)]
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            relators.append(Word(tuple((k, 1) for k in range(i, j + 1))) ** 2)
    extra = list(extra)
    if regular:
        mirrored = [enantiomorph_word(w) for w in extra]
        extra += [w for w in mirrored if w not in extra]
    return Presentation(m + 1, tuple(relators), ROTATION, tuple(orders), tuple(extra))


def string_group(*orders: int, extra: Sequence[Word] = ()) -> Presentation:
    """Full string Coxeter presentation on involutions r0..r_{n-1}."""
    if not orders or any(p < 2 for p in orders):
        raise ValueError(f"Every p_i must be at least 2, got {list(orders)}")
    n = len(orders) + 1
    relators = [Word.generator(i, 2) for i in range(n)]
    relators += [Word(((i - 1, 1), (i, 1))) ** p for i, p in enumerate(orders, start=1)]
    relators += [Word(((i, 1), (j, 1))) ** 2 for i in range(n) for j in range(i + 2, n)]
    return Presentation(n, tuple(relators), STRING, tuple(orders), tuple(extra))


# -- toroidal maps ------------------------------------------------------------


class _Lattice:
    """Z^2 modulo the sublattice spanned by two vectors, in Hermite normal form."""

    def __init__(self, v1: Tuple[int, int], v2: Tuple[int, int]):
        u, w, g = (int(v) for v in igcdex(v1[0], v2[0]))
        if g == 0:
            raise ValueError(f"Degenerate lattice {v1}, {v2}")
        row1 = (g, u * v1[1] + w * v2[1])
        y2 = (v2[0] * v1[1] - v1[0] * v2[1]) // g
        if y2 == 0:
            raise ValueError(f"Degenerate lattice {v1}, {v2}")
        self.a = int(g)
        self.d = abs(int(y2))
        self.b = int(row1[1]) % self.d
        self.size = self.a * self.d

    def reduce(self, x: int, y: int) -> int:
        k = x // self.a
        x -= k * self.a
        y = (y - k * self.b) % self.d
        return x * self.d + y

    def points(self):
        for x in range(self.a):
            for y in range(self.d):
                yield x, y


def _lattice_system(
    lattice: _Lattice,
    turns: int,
    rotate: Callable[[int, int], Tuple[int, int]],
    moves: Sequence[Tuple[int, int, Tuple[int, int]]],
) -> List[Permutation]:
    """
    Permutations of darts (point, k mod turns).

    Each move is (power of the rotation, step in k, translation) and maps
    (z, k) to (rotate^power(z) + translation, k + step).
    """
    perms = []
    for power, step, shift in moves:
        images = np.empty(lattice.size * turns, dtype=np.intp)
        for x, y in lattice.points():
            px, py = x, y
            for _ in range(power):
                px, py = rotate(px, py)
            target = lattice.reduce(px + shift[0], py + shift[1])
            source = lattice.reduce(x, y)
            for k in range(turns):
                images[source * turns + k] = target * turns + (k + step) % turns
        perms.append(Permutation(images))
    return perms


def _times_i(x: int, y: int) -> Tuple[int, int]:
    return -y, x


def _times_zeta(x: int, y: int) -> Tuple[int, int]:
    # zeta = exp(i pi / 3) in the basis (1, zeta)
    return -y, x + y


def _cross_check(name: str, presented: RotationSystem, lattice: RotationSystem) -> str:
    if presented.order != lattice.order:
        raise ConsistencyError(
            f"{name}: presentation and lattice routes disagree",
            {"presentation": presented.order, "lattice": lattice.order},
        )
    if is_equivalent(presented, lattice):
        return "direct"
    if is_equivalent(presented, enantiomorph(lattice)):
        return "mirror"
    raise ConsistencyError(f"{name}: routes give inequivalent maps", {"order": presented.order})


def _check_torus_params(b: int, c: int):
    if b < 0 or c < 0 or (b, c) == (0, 0):
        raise ValueError(f"Torus parameters must be nonnegative and not both zero, got ({b}, {c})")


def torus_44_presentation(b: int, c: int) -> Presentation:
    """[4,4]+ / (T1^b T2^c) with the translations T1 = s2 s1^-1, T2 = s1 T1 s1^-1."""
    _check_torus_params(b, c)
    t1 = parse_word("s2 s1^-1", 3)
    t2 = parse_word("s1 s2 s1^-2", 3)
    return string_rotation(4, 4, extra=[t1 ** b * t2 ** c])


def torus_36_presentation(b: int, c: int) -> Presentation:
    """[3,6]+ / (T1^b T2^c) with T1 = s2^2 s1^-1 and T2 = s2^-1 T1 s2."""
    _check_torus_params(b, c)
    t1 = parse_word("s2^2 s1^-1", 3)
    t2 = parse_word("s2 s1^-1 s2", 3)
    return string_rotation(3, 6, extra=[t1 ** b * t2 ** c])


def torus_44(b: int, c: int) -> RotationSystem:
    """
    {4,4}_(b,c) of order 4(b^2 + c^2), built from the presentation
    [4,4]+ / (T1^b T2^c) with T1 = s2 s1^-1, T2 = s1 T1 s1^-1, and checked
    against the dart permutations of Z^2 / <(b,c), (-c,b)>.
    """
    name = f"{{4,4}}_({b},{c})"
    presented = rotation_system(torus_44_presentation(b, c), name=name)
    lattice = _Lattice((b, c), (-c, b))
    sigma = _lattice_system(lattice, 4, _times_i, [(1, 1, (0, 0)), (1, 1, (1, 0))])
    lattice_sys = system_from_generators(sigma, name=f"{name} lattice", order_hint=4 * lattice.size)
    handedness = _cross_check(name, presented, lattice_sys)
    presented.metadata.update({"handedness": handedness, "lattice": [b, c], "lattice_size": lattice.size})
    return presented


def torus_36(b: int, c: int) -> RotationSystem:
    """
    {3,6}_(b,c) of order 6(b^2 + bc + c^2): [3,6]+ / (T1^b T2^c) with
    T1 = s2^2 s1^-1 and T2 = s2^-1 T1 s2, checked against the darts of the
    triangular lattice modulo the ideal of b + c zeta.
    """
    name = f"{{3,6}}_({b},{c})"
    presented = rotation_system(torus_36_presentation(b, c), name=name)
    lattice = _Lattice((b, c), (-c, b + c))
    sigma = _lattice_system(lattice, 6, _times_zeta, [(2, 2, (1, 0)), (1, 1, (0, 0))])
    lattice_sys = system_from_generators(sigma, name=f"{name} lattice", order_hint=6 * lattice.size)
    handedness = _cross_check(name, presented, lattice_sys)
    presented.metadata.update({"handedness": handedness, "lattice": [b, c], "lattice_size": lattice.size})
    return presented


def torus_63(b: int, c: int) -> RotationSystem:
    """{6,3}_(b,c), the dual of {3,6}_(b,c)."""
    triangular = torus_36(b, c)
    hexagonal = dual(triangular)
    if hexagonal.type_vector != tuple(reversed(triangular.type_vector)) or hexagonal.order != triangular.order:
        raise ConsistencyError("Dual torus map has the wrong type or order", {"type": list(hexagonal.type_vector)})
    hexagonal = replace(hexagonal, name=f"{{6,3}}_({b},{c})", metadata=dict(triangular.metadata))
    return hexagonal


# -- L2(p) ---------------------------------------------------------------------


def _mobius(p: int, a: int, b: int, c: int, d: int) -> Permutation:
    """x -> (ax + b) / (cx + d) on GF(p) plus infinity (point p)."""
    images = np.empty(p + 1, dtype=np.intp)
    for x in range(p):
        den = (c * x + d) % p
        images[x] = p if den == 0 else (a * x + b) * int(mod_inverse(den, p)) % p
    images[p] = p if c % p == 0 else a * int(mod_inverse(c, p)) % p
    return Permutation(images)


def l2(p: int) -> PermGroup:
    """PSL(2, p) acting on the p + 1 points of the projective line."""
    if p < 3 or not isprime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    gens = [_mobius(p, 1, 1, 0, 1), _mobius(p, 0, p - 1, 1, 0)]
    G = PermGroup(gens)
    expected = p * (p * p - 1) // 2
    if G.order != expected:
        raise ConsistencyError(f"L2({p}) has order {G.order}, expected {expected}")
    return G


# -- tuple search --------------------------------------------------------------


def _tuple_key(sigma: Sequence[Permutation]) -> Tuple[Tuple[int, ...], ...]:
    return tuple(s.key() for s in sigma)


def search_tuples(
    G: PermGroup,
    type_vector: Sequence[int],
    limit: Optional[int] = None,
    progress: bool = False,
    label: str = "G",
) -> List[RotationSystem]:
    """
    Generating tuples (s1, ..., s_{n-1}) of G with the prescribed orders and
    every (s_i ... s_j)^2 trivial, with s1 running over conjugacy class
    representatives only.

    Args:
        G: Group to search
        type_vector: Orders p1, ..., p_{n-1}
        limit: Stop after this many tuples
        progress: Show a progress bar over class representatives
        label: Prefix for result names

    Returns:
        RotationSystems sorted by their image tuples
    """
    type_vector = list(type_vector)
    cap = get_limit("MAX_LATTICE")
    reps = conjugacy_class_representatives(G, order=type_vector[0], limit=cap)
    elements = sorted(G.elements(), key=Permutation.key)
    by_order: Dict[int, List[Permutation]] = {}
    for g in elements:
        by_order.setdefault(g.order(), []).append(g)

    found: List[Tuple[Permutation, ...]] = []

    def extend(partial: List[Permutation], suffixes: List[Permutation]):
        # suffixes[i] = partial[i] * ... * partial[-1]
        if limit is not None and len(found) >= limit:
            return
        k = len(partial)
        if k == len(type_vector):
            if PermGroup(partial, degree=G.degree).order == G.order:
                found.append(tuple(partial))
            return
        for s in by_order.get(type_vector[k], []):
            new_suffixes = [t * s for t in suffixes]
            if all((t * t).is_identity() for t in new_suffixes):
                extend(partial + [s], new_suffixes + [s])
            if limit is not None and len(found) >= limit:
                return

    for s1 in tqdm(reps, desc=f"search {label} {type_vector}", disable=not progress):
        extend([s1], [s1])
        if limit is not None and len(found) >= limit:
            break

    found.sort(key=_tuple_key)
    results = []
    for k, sigma in enumerate(found, start=1):
        sys = system_from_generators(sigma, name=f"{label} tuple {k}", order_hint=G.order)
        sys.metadata.update({
            "reflexible": is_reflexible(sys),
            "intersection_property": intersection_property(sys).holds,
        })
        results.append(sys)
    logger.info(f"Found {len(results)} generating tuples of type {type_vector} in a group of order {G.order}")
    return results


# -- named entries -------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    """
    A named construction with the invariants it must satisfy before it is served.

    ``expected`` maps the builder parameters to a dict with any of the keys
    ``order``, ``type`` and ``reflexible``.
    """

    name: str
    builder: Callable[..., RotationSystem]
    params: Tuple[str, ...] = ()
    description: str = ""
    expected: Callable[..., Dict[str, object]] = field(default=lambda *args: {})
    strict: bool = True
    presentation: Optional[Callable[..., Presentation]] = None

    def build(self, *args: int) -> RotationSystem:
        if len(args) != len(self.params):
            raise ValueError(f"{self.name} takes parameters {list(self.params)}, got {list(args)}")
        sys = self.builder(*args)
        if sys.name is None:
            sys = replace(sys, name=self.name)
        expected = self.expected(*args)
        failures = _metadata_failures(sys, expected)
        sys.metadata["expected"] = {k: list(v) if isinstance(v, tuple) else v for k, v in expected.items()}
        if failures:
            if self.strict:
                raise ConsistencyError(f"{self.name} failed its metadata checks", failures)
            logger.warning(f"{self.name} flagged: {failures}")
            sys.metadata["flagged"] = True
        else:
            logger.info(f"{self.name}{list(args) if args else ''} certified: order {sys.order}")
        return sys


def _metadata_failures(sys: RotationSystem, expected: Dict[str, object]) -> Dict[str, object]:
    failures = {}
    if "order" in expected and sys.order != expected["order"]:
        failures["order"] = {"expected": expected["order"], "actual": sys.order}
    if "type" in expected and sys.type_vector != tuple(expected["type"]):
        failures["type"] = {"expected": list(expected["type"]), "actual": list(sys.type_vector)}
    if "reflexible" in expected:
        actual = is_reflexible(sys)
        if actual != expected["reflexible"]:
            failures["reflexible"] = {"expected": expected["reflexible"], "actual": actual}
    return failures


S6_RELATOR = "(s2^-1 s3)^2 s2 s3^-1"


def s6_presentation() -> Presentation:
    return string_rotation(3, 4, 4, 3, extra=[parse_word(S6_RELATOR, 5)])


def eleven_cell_presentation() -> Presentation:
    petrie = [parse_word("(r0 r1 r2)^5", 4, STRING), parse_word("(r1 r2 r3)^5", 4, STRING)]
    return string_group(3, 5, 3, extra=petrie)


def star_535_presentation() -> Presentation:
    return string_rotation(5, 3, 5, extra=[parse_word("(s1 s3 s2^-1)^3", 4)], regular=True)


def univ_443_presentation() -> Presentation:
    return string_rotation(4, 4, 3, extra=[parse_word("(s2 s1^-1)^3", 4)], regular=True)


def _platonic(*orders: int) -> Callable[[], Presentation]:
    return lambda: string_rotation(*orders)


def _presented(presentation: Callable[..., Presentation]) -> Callable[..., RotationSystem]:
    def build(*args: int) -> RotationSystem:
        p = presentation(*args)
        if p.kind == STRING:
            return string_rotation_system(p)
        return rotation_system(p)

    return build


def _torus_expected(formula: Callable[[int, int], int], p1: int, p2: int):
    return lambda b, c: {
        "order": formula(b, c),
        "type": (p1, p2),
        "reflexible": b * c * (b - c) == 0,
    }


def _entry(
    name: str,
    presentation: Callable[[], Presentation],
    description: str,
    expected: Callable[[], Dict[str, object]],
    strict: bool = True,
) -> CatalogEntry:
    return CatalogEntry(name, _presented(presentation), (), description, expected, strict, presentation)


CATALOG: Dict[str, CatalogEntry] = {
    entry.name: entry
    for entry in [
        CatalogEntry("torus44", torus_44, ("b", "c"), "toroidal map {4,4}_(b,c)",
                     _torus_expected(lambda b, c: 4 * (b * b + c * c), 4, 4),
                     presentation=torus_44_presentation),
        CatalogEntry("torus36", torus_36, ("b", "c"), "toroidal map {3,6}_(b,c)",
                     _torus_expected(lambda b, c: 6 * (b * b + b * c + c * c), 3, 6),
                     presentation=torus_36_presentation),
        CatalogEntry("torus63", torus_63, ("b", "c"), "toroidal map {6,3}_(b,c)",
                     _torus_expected(lambda b, c: 6 * (b * b + b * c + c * c), 6, 3)),
        _entry("s6_rank5", s6_presentation, "chiral 5-polytope of type {3,4,4,3} with group S6",
               lambda: {"order": 720, "type": (3, 4, 4, 3), "reflexible": False}),
        _entry("eleven_cell", eleven_cell_presentation, "rotation tuple of the 11-cell inside L2(11)",
               lambda: {"order": 660, "type": (3, 5, 3)}),
        _entry("star_535", star_535_presentation, "rotation group of the {5,3,5} quotient by (r0 r1 r2 r3 r2 r1)^3",
               lambda: {"order": 7200, "type": (5, 3, 5), "reflexible": True}),
        _entry("univ_443_m3", univ_443_presentation, "universal {{4,4}_(3,0),{4,3}}",
               lambda: {"order": 720, "type": (4, 4, 3), "reflexible": True}, strict=False),
        _entry("tetrahedron", _platonic(3, 3), "[3,3]+",
               lambda: {"order": 12, "type": (3, 3), "reflexible": True}),
        _entry("cube", _platonic(4, 3), "[4,3]+",
               lambda: {"order": 24, "type": (4, 3), "reflexible": True}),
        _entry("octahedron", _platonic(3, 4), "[3,4]+",
               lambda: {"order": 24, "type": (3, 4), "reflexible": True}),
        _entry("dodecahedron", _platonic(5, 3), "[5,3]+",
               lambda: {"order": 60, "type": (5, 3), "reflexible": True}),
        _entry("icosahedron", _platonic(3, 5), "[3,5]+",
               lambda: {"order": 60, "type": (3, 5), "reflexible": True}),
        _entry("simplex4", _platonic(3, 3, 3), "[3,3,3]+",
               lambda: {"order": 60, "type": (3, 3, 3), "reflexible": True}),
        _entry("simplex5", _platonic(3, 3, 3, 3), "[3,3,3,3]+",
               lambda: {"order": 360, "type": (3, 3, 3, 3), "reflexible": True}),
    ]
}


def named(name: str, *params: int) -> RotationSystem:
    """Build a catalog entry and certify it against its expected invariants."""
    if name not in CATALOG:
        raise ValueError(f"Unknown catalog entry {name!r}; known: {', '.join(sorted(CATALOG))}")
    return CATALOG[name].build(*params)
