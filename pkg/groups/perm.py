"""
Finite permutation groups.

Permutations act on the right: the image of point x under g*h is (x^g)^h,
so ``(g * h).images == h.images[g.images]``. Groups carry a deterministic
Schreier-Sims stabilizer chain.
"""

import logging
from math import lcm
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint

from .conf import get_limit
from .exceptions import ConsistencyError, EnumerationLimitError

logger = logging.getLogger(__name__)


class Permutation:
    """A bijection of {0, ..., degree-1} stored as an image array."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int], check: bool = True):
        if check:
            arr = np.array(list(images), dtype=np.intp)
        else:
            arr = np.asarray(images, dtype=np.intp)
        if arr.ndim != 1:
            raise ValueError("Permutation images must be one-dimensional")
        if check:
            if arr.size == 0:
                raise ValueError("Permutation of degree 0")
            seen = np.zeros(arr.size, dtype=bool)
            if arr.min() < 0 or arr.max() >= arr.size:
                raise ValueError("Permutation images out of range")
            seen[arr] = True
            if not seen.all():
                raise ValueError("Permutation images are not a bijection")
        arr.setflags(write=False)
        self.images = arr
        self._hash = None

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "Permutation":
        return cls(arr, check=False)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        if degree < 1:
            raise ValueError("Permutation of degree 0")
        return cls._wrap(np.arange(degree, dtype=np.intp))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        """Build from disjoint cycles, e.g. ``[(0, 1, 2), (3, 4)]``."""
        images = np.arange(degree, dtype=np.intp)
        for cycle in cycles:
            for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
                images[a] = b
        return cls(images)

    @property
    def degree(self) -> int:
        return int(self.images.size)

    def __call__(self, point: int) -> int:
        return int(self.images[point])

    def __mul__(self, other: "Permutation") -> "Permutation":
        if not isinstance(other, Permutation):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError(f"Degree mismatch: {self.degree} vs {other.degree}")
        return Permutation._wrap(other.images[self.images])

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.degree, dtype=np.intp)
        return Permutation._wrap(inv)

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        result = np.arange(self.degree, dtype=np.intp)
        base = self.images
        while k:
            if k & 1:
                result = base[result]
            base = base[base]
            k >>= 1
        return Permutation._wrap(result)

    def is_identity(self) -> bool:
        return bool((self.images == np.arange(self.degree)).all())

    def moved_points(self) -> np.ndarray:
        return np.nonzero(self.images != np.arange(self.degree))[0]

    def cycles(self) -> List[Tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest point."""
        seen = np.zeros(self.degree, dtype=bool)
        result = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cycle = [start]
            seen[start] = True
            x = int(self.images[start])
            while x != start:
                cycle.append(x)
                seen[x] = True
                x = int(self.images[x])
            if len(cycle) > 1:
                result.append(tuple(cycle))
        return result

    def order(self) -> int:
        """Least k >= 1 with self**k the identity."""
        lengths = {len(c) for c in self.cycles()}
        return lcm(*lengths) if lengths else 1

    def key(self) -> Tuple[int, ...]:
        return tuple(int(x) for x in self.images)

    def restricted(self, start: int, stop: int) -> "Permutation":
        """Action on the invariant block [start, stop), relabelled from 0."""
        block = self.images[start:stop]
        if block.size and (block.min() < start or block.max() >= stop):
            raise ValueError(f"Block [{start}, {stop}) is not invariant")
        return Permutation._wrap(block - start)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.degree == other.degree and bool((self.images == other.images).all())

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.images.tobytes())
        return self._hash

    def __repr__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(str(x) for x in c) + ")" for c in cycles)


def element_order(g: Permutation) -> int:
    return g.order()


def _invert(arr: np.ndarray) -> np.ndarray:
    inv = np.empty_like(arr)
    inv[arr] = np.arange(arr.size, dtype=np.intp)
    return inv


class _Level:
    """One stabilizer-chain level: base point, strong generators, orbit tree."""

    def __init__(self, base: int, degree: int, cache_limit: int):
        self.base = base
        self.degree = degree
        self.cache_limit = cache_limit
        self.generators: List[np.ndarray] = []
        self.inverses: List[np.ndarray] = []
        self.parent = np.full(degree, -1, dtype=np.intp)
        self.via = np.full(degree, -1, dtype=np.intp)
        self.parent[base] = base
        self.orbit: List[int] = [base]
        identity = np.arange(degree, dtype=np.intp)
        self._u: Optional[Dict[int, np.ndarray]] = {base: identity}
        self._uinv: Optional[Dict[int, np.ndarray]] = {base: identity}
        # (orbit position, generator position) pairs already sifted
        self.checked = set()

    def __len__(self) -> int:
        return len(self.orbit)

    def _record(self, point: int, parent: int, gi: int):
        self.parent[point] = parent
        self.via[point] = gi
        self.orbit.append(point)
        if self._u is not None:
            if 2 * len(self.orbit) * self.degree > self.cache_limit:
                self._u = None
                self._uinv = None
            else:
                self._u[point] = self.generators[gi][self._u[parent]]
                self._uinv[point] = self._uinv[parent][self.inverses[gi]]

    def add_generator(self, g: np.ndarray):
        self.generators.append(g)
        self.inverses.append(_invert(g))
        gi = len(self.generators) - 1
        fresh = []
        for p in list(self.orbit):
            q = int(g[p])
            if self.parent[q] < 0:
                self._record(q, p, gi)
                fresh.append(q)
        i = 0
        while i < len(fresh):
            p = fresh[i]
            for hi, h in enumerate(self.generators):
                q = int(h[p])
                if self.parent[q] < 0:
                    self._record(q, p, hi)
                    fresh.append(q)
            i += 1

    def contains(self, point: int) -> bool:
        return self.parent[point] >= 0

    def transversal(self, point: int) -> np.ndarray:
        """u with base^u == point."""
        if self._u is not None:
            return self._u[point]
        path = []
        while point != self.base:
            path.append(int(self.via[point]))
            point = int(self.parent[point])
        result = np.arange(self.degree, dtype=np.intp)
        for gi in reversed(path):
            result = self.generators[gi][result]
        return result

    def divide(self, h: np.ndarray, point: int) -> np.ndarray:
        """h * u_point^-1, which fixes the base point."""
        if self._uinv is not None:
            return self._uinv[point][h]
        while point != self.base:
            gi = int(self.via[point])
            h = self.inverses[gi][h]
            point = int(self.parent[point])
        return h


class PermGroup:
    """
    A permutation group given by generators, with a stabilizer chain.

    Immutable after construction. Base points are taken from ``base_prefix``
    first, then the smallest point moved by the generator that needs one.
    """

    def __init__(
        self,
        generators: Sequence[Permutation],
        degree: Optional[int] = None,
        base_prefix: Sequence[int] = (),
        order_hint: Optional[int] = None,
    ):
        generators = list(generators)
        if degree is None:
            if not generators:
                raise ValueError("Cannot infer degree without generators")
            degree = generators[0].degree
        if degree < 1:
            raise ValueError("Permutation group of degree 0")
        for g in generators:
            if g.degree != degree:
                raise ValueError(f"Degree mismatch: generator of degree {g.degree} in group of degree {degree}")
        self.degree = degree
        self.generators: Tuple[Permutation, ...] = tuple(generators)
        self._levels: List[_Level] = []
        self._identity = np.arange(degree, dtype=np.intp)
        self._build(list(base_prefix), order_hint)
        self.order = 1
        for level in self._levels:
            self.order *= len(level)
        self._verify()
        logger.debug(f"Built group of degree {degree}, order {self.order}, base length {len(self._levels)}")

    # -- chain construction --------------------------------------------

    def _new_level(self, point: int) -> _Level:
        level = _Level(point, self.degree, get_limit("TRANSVERSAL_CACHE_LIMIT"))
        self._levels.append(level)
        return level

    def _strip(self, h: np.ndarray, start: int) -> Tuple[np.ndarray, int]:
        for j in range(start, len(self._levels)):
            level = self._levels[j]
            beta = int(h[level.base])
            if not level.contains(beta):
                return h, j
            h = level.divide(h, beta)
        return h, len(self._levels)

    def _is_identity(self, h: np.ndarray) -> bool:
        return bool((h == self._identity).all())

    def _chain_order(self) -> int:
        order = 1
        for level in self._levels:
            order *= len(level)
        return order

    def _build(self, prefix: List[int], order_hint: Optional[int]):
        gens = [g.images for g in self.generators if not g.is_identity()]
        for point in prefix:
            if not 0 <= point < self.degree:
                raise ValueError(f"Base point {point} outside degree {self.degree}")
            if any(lv.base == point for lv in self._levels):
                continue
            self._new_level(point)
        for g in gens:
            if all(g[lv.base] == lv.base for lv in self._levels):
                self._new_level(int(np.nonzero(g != self._identity)[0][0]))
        for l, level in enumerate(self._levels):
            fixed = [lv.base for lv in self._levels[:l]]
            for g in gens:
                if all(g[b] == b for b in fixed):
                    level.add_generator(g)

        i = len(self._levels) - 1
        while i >= 0:
            if order_hint is not None and self._chain_order() == order_hint:
                break
            level = self._levels[i]
            found = None
            for pi in range(len(level.orbit)):
                beta = level.orbit[pi]
                for xi in range(len(level.generators)):
                    if (pi, xi) in level.checked:
                        continue
                    level.checked.add((pi, xi))
                    h = level.generators[xi][level.transversal(beta)]
                    residue, j = self._strip(h, i)
                    if j < len(self._levels) or not self._is_identity(residue):
                        found = (residue, j)
                        break
                if found:
                    break
            if found is None:
                i -= 1
                continue
            residue, j = found
            if j == len(self._levels):
                self._new_level(int(np.nonzero(residue != self._identity)[0][0]))
            for l in range(i + 1, j + 1):
                self._levels[l].add_generator(residue)
            i = j

    def _verify(self):
        for g in self.generators:
            if not self.contains(g):
                raise ConsistencyError(
                    "Generator failed membership against its own chain",
                    {"generator": repr(g), "order": self.order},
                )

    # -- queries --------------------------------------------------------

    @property
    def base(self) -> List[int]:
        return [level.base for level in self._levels]

    @property
    def basic_orbit_sizes(self) -> List[int]:
        return [len(level) for level in self._levels]

    def strong_generators(self, level: int = 0) -> List[Permutation]:
        """Strong generators fixing the first ``level`` base points."""
        if level >= len(self._levels):
            return []
        return [Permutation._wrap(g) for g in self._levels[level].generators]

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def contains(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            return False
        residue, j = self._strip(g.images, 0)
        return j == len(self._levels) and self._is_identity(residue)

    __contains__ = contains

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return all(other.contains(g) for g in self.generators)

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(a * b == b * a for i, a in enumerate(gens) for b in gens[i + 1:])

    def is_normal_in(self, G: "PermGroup") -> bool:
        return all(self.contains(x.inverse() * n * x) for n in self.generators for x in G.generators)

    def elements(self) -> Iterator[Permutation]:
        """
        Every element exactly once, as products of coset representatives.

        Deterministic order. Callers are expected to check ``order`` against
        their own cap before exhausting the iterator.
        """
        transversals = [[level.transversal(b) for b in level.orbit] for level in self._levels]

        def walk(depth: int, acc: np.ndarray) -> Iterator[np.ndarray]:
            if depth < 0:
                yield acc
                return
            for u in transversals[depth]:
                yield from walk(depth - 1, u[acc])

        for arr in walk(len(transversals) - 1, self._identity):
            yield Permutation._wrap(arr)

    def element_keys(self) -> Iterator[Tuple[int, ...]]:
        """Elements identified by the images of the base points."""
        base = np.asarray(self.base, dtype=np.intp)
        for g in self.elements():
            yield tuple(int(x) for x in g.images[base])

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, order={self.order}, generators={len(self.generators)})"


def group_from_generators(gens: Sequence[Permutation], order_hint: Optional[int] = None) -> PermGroup:
    """
    Build a group from a nonempty list of equal-degree permutations.

    Args:
        gens: Generators
        order_hint: Known group order; lets the chain stop as soon as it is complete

    Returns:
        PermGroup with a verified stabilizer chain
    """
    if not gens:
        raise ValueError("At least one generator is required")
    return PermGroup(gens, order_hint=order_hint)


def subgroup(parent: PermGroup, gens: Sequence[Permutation]) -> PermGroup:
    """Subgroup of ``parent`` generated by ``gens`` (trivial when empty)."""
    H = PermGroup(gens, degree=parent.degree)
    if parent.order % H.order:
        raise ConsistencyError(
            "Subgroup order does not divide parent order",
            {"subgroup": H.order, "parent": parent.order},
        )
    return H


def trivial_group(degree: int) -> PermGroup:
    return PermGroup([], degree=degree)


def intersection(H: PermGroup, K: PermGroup, limit: Optional[int] = None) -> PermGroup:
    """
    Exact intersection of two groups of the same degree.

    Enumerates the smaller group and tests membership in the larger one.
    Raises EnumerationLimitError instead of answering when the smaller
    group exceeds the cap.
    """
    if H.degree != K.degree:
        raise ValueError(f"Degree mismatch: {H.degree} vs {K.degree}")
    if limit is None:
        limit = get_limit("MAX_ENUM")
    small, large = (H, K) if H.order <= K.order else (K, H)
    if small.order > limit:
        raise EnumerationLimitError(
            f"Intersection needs {small.order} elements, cap is {limit}",
            {"smaller_order": small.order, "larger_order": large.order, "cap": limit},
        )
    if small.is_subgroup_of(large):
        return small
    found: List[Permutation] = []
    result = trivial_group(H.degree)
    for g in small.elements():
        if g in result or g not in large:
            continue
        found.append(g)
        result = PermGroup(found, degree=H.degree)
        if result.order == small.order:
            break
    return result


def normal_closure(G: PermGroup, gens: Sequence[Permutation]) -> PermGroup:
    """Smallest normal subgroup of G containing ``gens``."""
    closure = [g for g in gens if not g.is_identity()]
    N = PermGroup(closure, degree=G.degree)
    queue = list(closure)
    while queue:
        n = queue.pop(0)
        for x in G.generators:
            c = x.inverse() * n * x
            if c not in N:
                closure.append(c)
                queue.append(c)
                N = PermGroup(closure, degree=G.degree)
    if not N.is_normal_in(G):
        raise ConsistencyError("Normal closure is not normal", {"order": N.order})
    if G.order % N.order:
        raise ConsistencyError("Normal closure order does not divide group order", {"closure": N.order, "group": G.order})
    return N


def commutator_subgroup(G: PermGroup) -> PermGroup:
    gens = G.generators
    commutators = [
        a.inverse() * b.inverse() * a * b
        for i, a in enumerate(gens)
        for b in gens[i + 1:]
    ]
    return normal_closure(G, commutators)


def is_perfect(G: PermGroup) -> bool:
    return commutator_subgroup(G).order == G.order


def pointwise_stabilizer(G: PermGroup, points: Iterable[int]) -> PermGroup:
    """
    Elements of G fixing every point in ``points``.

    When ``points`` is a union of G-orbits only a base of the restricted
    action is needed as chain prefix, which keeps the chain short.
    """
    points = sorted(set(int(p) for p in points))
    if not points:
        return G
    prefix = points
    point_set = set(points)
    if all(int(g.images[p]) in point_set for g in G.generators for p in points) and G.generators:
        index = {p: k for k, p in enumerate(points)}
        restricted = [
            Permutation._wrap(np.array([index[int(g.images[p])] for p in points], dtype=np.intp))
            for g in G.generators
        ]
        action = PermGroup(restricted, degree=len(points))
        prefix = [points[b] for b in action.base]
    chain = PermGroup(G.generators, degree=G.degree, base_prefix=prefix)
    if chain.order != G.order:
        raise ConsistencyError("Rebased chain changed the group order", {"before": G.order, "after": chain.order})
    stabilizer = PermGroup(chain.strong_generators(len(prefix)), degree=G.degree)
    expected = G.order
    for size in chain.basic_orbit_sizes[:len(prefix)]:
        expected //= size
    if stabilizer.order != expected:
        raise ConsistencyError(
            "Pointwise stabilizer order disagrees with the chain",
            {"stabilizer": stabilizer.order, "expected": expected},
        )
    return stabilizer


def conjugacy_class_representatives(G: PermGroup, order: Optional[int] = None, limit: Optional[int] = None) -> List[Permutation]:
    """
    One element per conjugacy class, smallest image tuple first.

    Only classes of elements of the given order when ``order`` is set.
    """
    if limit is None:
        limit = get_limit("MAX_LATTICE")
    if G.order > limit:
        raise EnumerationLimitError(
            f"Conjugacy classes need {G.order} elements, cap is {limit}",
            {"order": G.order, "cap": limit},
        )
    candidates = sorted(
        (g for g in G.elements() if order is None or g.order() == order),
        key=Permutation.key,
    )
    seen = set()
    reps = []
    for g in candidates:
        if g in seen:
            continue
        reps.append(g)
        orbit = [g]
        seen.add(g)
        while orbit:
            h = orbit.pop()
            for x in G.generators:
                c = x.inverse() * h * x
                if c not in seen:
                    seen.add(c)
                    orbit.append(c)
    return reps


def abelian_invariants(G: PermGroup) -> List[int]:
    """
    Invariant factors d1 | d2 | ... of an abelian group, read off the number
    of elements whose order divides each prime power.
    """
    counts: Dict[int, int] = {}
    for g in G.elements():
        o = g.order()
        counts[o] = counts.get(o, 0) + 1
    primary: List[List[int]] = []
    for p, e in sorted(factorint(G.order).items()):
        ranks = []
        previous = 1
        for k in range(1, e + 1):
            size = sum(c for o, c in counts.items() if p ** k % o == 0)
            ratio, r = size // previous, 0
            while ratio > 1:
                ratio //= p
                r += 1
            ranks.append(r)
            previous = size
        # ranks[k-1] counts the cyclic p-factors of exponent at least k
        parts = []
        for k, r in enumerate(ranks, start=1):
            following = ranks[k] if k < len(ranks) else 0
            parts += [p ** k] * (r - following)
        primary.append(sorted(parts, reverse=True))
    width = max((len(parts) for parts in primary), default=0)
    factors = []
    for j in range(width):
        d = 1
        for parts in primary:
            if j < len(parts):
                d *= parts[j]
        factors.append(d)
    return sorted(factors)


def describe_group(G: PermGroup) -> Dict[str, object]:
    """
    Fingerprint (order, abelian, perfect, name).

    Abelian groups up to the MAX_LATTICE cap are named by their invariant
    factors, e.g. ``C2xC6``; other groups get no name.
    """
    abelian = G.is_abelian()
    perfect = is_perfect(G)
    name = None
    if G.order == 1:
        name = "1"
    elif abelian and G.order <= get_limit("MAX_LATTICE"):
        name = "x".join(f"C{d}" for d in abelian_invariants(G))
    return {"order": G.order, "abelian": abelian, "perfect": perfect, "name": name}
