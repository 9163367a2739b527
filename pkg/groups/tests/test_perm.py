import random

import pytest
from sympy.combinatorics import Permutation as SympyPermutation
from sympy.combinatorics import PermutationGroup as SympyGroup

from groups.conf import override_limits
from groups.exceptions import EnumerationLimitError
from groups.perm import (
    PermGroup,
    Permutation,
    abelian_invariants,
    commutator_subgroup,
    conjugacy_class_representatives,
    describe_group,
    group_from_generators,
    intersection,
    is_perfect,
    normal_closure,
    pointwise_stabilizer,
    subgroup,
)


def cyc(degree, *cycles):
    return Permutation.from_cycles(cycles, degree)


@pytest.fixture
def s4():
    return PermGroup([cyc(4, (0, 1, 2, 3)), cyc(4, (0, 1))])


@pytest.fixture
def a5():
    return PermGroup([cyc(5, (0, 1, 2)), cyc(5, (0, 1, 2, 3, 4))])


def test_product_acts_on_the_right():
    """Test that g * h applies g first"""
    g = cyc(3, (0, 1))
    h = cyc(3, (1, 2))
    assert (g * h)(0) == 2
    assert (h * g)(0) == 1


def test_cycles_order_and_inverse():
    """Test cycle decomposition, order and inverse"""
    g = cyc(6, (0, 1, 2), (3, 4))
    assert g.cycles() == [(0, 1, 2), (3, 4)]
    assert g.order() == 6
    assert (g * g.inverse()).is_identity()
    assert g ** -1 == g.inverse()
    assert (g ** 6).is_identity()
    assert repr(g) == "(0 1 2)(3 4)"
    assert repr(Permutation.identity(3)) == "()"


def test_invalid_images_rejected():
    """Test that non-bijections are refused"""
    with pytest.raises(ValueError):
        Permutation([0, 0, 1])
    with pytest.raises(ValueError):
        Permutation([0, 3, 1])


def test_restricted_block():
    """Test restriction to an invariant block"""
    g = Permutation([1, 0, 3, 4, 2])
    assert g.restricted(2, 5) == Permutation([1, 2, 0])
    with pytest.raises(ValueError):
        Permutation([2, 1, 0]).restricted(0, 2)


def test_group_orders(s4, a5):
    """Test orders of small symmetric and alternating groups"""
    assert s4.order == 24
    assert a5.order == 60
    assert len(a5) == 60


def test_order_matches_sympy():
    """Test chain order against an independent implementation"""
    gens = [[1, 2, 0, 4, 3, 5, 6, 7, 9, 8], [0, 1, 3, 2, 5, 6, 7, 8, 4, 9], [9, 1, 2, 3, 4, 5, 6, 7, 8, 0]]
    ours = PermGroup([Permutation(g) for g in gens])
    theirs = SympyGroup([SympyPermutation(g) for g in gens])
    assert ours.order == theirs.order()


def test_schreier_vectors_without_cached_transversals():
    """Test that the order is unchanged when no transversal is stored"""
    gens = [cyc(8, (0, 1, 2, 3, 4, 5, 6, 7)), cyc(8, (0, 1))]
    with override_limits(TRANSVERSAL_CACHE_LIMIT=1):
        G = PermGroup(gens)
        assert G.order == 40320
        assert cyc(8, (2, 5)) in G


def test_membership(a5):
    """Test membership of even and odd permutations"""
    assert cyc(5, (0, 1), (2, 3)) in a5
    assert cyc(5, (0, 1)) not in a5
    assert cyc(4, (0, 1)) not in a5


def test_elements_are_distinct(s4):
    """Test that element enumeration lists every element once"""
    keys = list(s4.element_keys())
    assert len(keys) == 24
    assert len(set(keys)) == 24
    assert len({g for g in s4.elements()}) == 24


def test_order_hint_and_base_prefix():
    """Test early stop and a prescribed base"""
    gens = [cyc(5, (0, 1, 2, 3, 4)), cyc(5, (0, 1))]
    assert group_from_generators(gens, order_hint=120).order == 120
    G = PermGroup(gens, base_prefix=[4, 3])
    assert G.base[:2] == [4, 3]
    assert G.order == 120


def test_subgroup_and_degree_mismatch(s4):
    """Test subgroup construction and degree checks"""
    H = subgroup(s4, [cyc(4, (0, 1, 2))])
    assert H.order == 3
    assert H.is_subgroup_of(s4)
    with pytest.raises(ValueError):
        PermGroup([cyc(4, (0, 1)), cyc(5, (0, 1))])


def test_intersection(s4):
    """Test intersection of a cyclic and a Klein subgroup"""
    H = subgroup(s4, [cyc(4, (0, 1, 2, 3))])
    K = subgroup(s4, [cyc(4, (0, 2)), cyc(4, (1, 3))])
    X = intersection(H, K)
    assert X.order == 2
    assert cyc(4, (0, 2), (1, 3)) in X


def test_intersection_limit(s4):
    """Test that the enumeration cap is enforced"""
    H = subgroup(s4, [cyc(4, (0, 1, 2, 3))])
    K = subgroup(s4, [cyc(4, (0, 1))])
    with pytest.raises(EnumerationLimitError) as excinfo:
        intersection(H, K, limit=1)
    assert excinfo.value.stats["cap"] == 1


def test_normal_closure_and_commutators(s4, a5):
    """Test normal closure, derived subgroup and perfection"""
    assert normal_closure(s4, [cyc(4, (0, 1, 2))]).order == 12
    assert commutator_subgroup(s4).order == 12
    assert is_perfect(a5)
    assert not is_perfect(s4)


def test_pointwise_stabilizer(s4):
    """Test stabilizers of points and of invariant sets"""
    assert pointwise_stabilizer(s4, [0]).order == 6
    assert pointwise_stabilizer(s4, [0, 1]).order == 2
    G = PermGroup([Permutation([1, 0, 3, 2]), Permutation([0, 1, 3, 2])])
    stab = pointwise_stabilizer(G, [0, 1])
    assert stab.order == 2
    assert all(g(0) == 0 and g(1) == 1 for g in stab.elements())


def test_conjugacy_classes(s4):
    """Test class representatives of S4"""
    assert len(conjugacy_class_representatives(s4)) == 5
    involutions = conjugacy_class_representatives(s4, order=2)
    assert len(involutions) == 2
    assert all(g.order() == 2 for g in involutions)


def test_describe_group(a5):
    """Test group fingerprints"""
    c4 = PermGroup([cyc(4, (0, 1, 2, 3))])
    klein = PermGroup([cyc(4, (0, 1), (2, 3)), cyc(4, (0, 2), (1, 3))])
    assert describe_group(c4) == {"order": 4, "abelian": True, "perfect": False, "name": "C4"}
    assert describe_group(klein)["name"] == "C2xC2"
    assert describe_group(PermGroup([], degree=3))["name"] == "1"
    assert describe_group(a5) == {"order": 60, "abelian": False, "perfect": True, "name": None}


@pytest.mark.parametrize(
    "gens, invariants",
    [
        ([cyc(7, (0, 1)), cyc(7, (2, 3, 4), (5, 6))], [2, 6]),
        ([cyc(9, (0, 1, 2)), cyc(9, (3, 4, 5)), cyc(9, (6, 7, 8))], [3, 3, 3]),
        ([cyc(6, (0, 1, 2, 3)), cyc(6, (4, 5))], [2, 4]),
        ([cyc(8, (0, 1, 2, 3, 4)), cyc(8, (5, 6, 7))], [15]),
    ],
)
def test_abelian_invariants(gens, invariants):
    """Test invariant factors of small abelian groups"""
    G = PermGroup(gens)
    assert abelian_invariants(G) == invariants
    assert describe_group(G)["name"] == "x".join(f"C{d}" for d in invariants)


@pytest.fixture
def random_groups():
    rng = random.Random(20)
    groups = []
    for degree in (5, 6, 7):
        gens = []
        for _ in range(2):
            images = list(range(degree))
            rng.shuffle(images)
            gens.append(Permutation(images))
        groups.append(PermGroup(gens))
    return groups


def test_order_counts_distinct_elements(random_groups, s4, a5):
    """Test that the chain order equals the number of distinct elements"""
    for G in random_groups + [s4, a5]:
        assert G.order <= 10 ** 4
        assert len(set(G.element_keys())) == G.order


def test_random_words_are_members(random_groups):
    """Test membership of random products of generators"""
    rng = random.Random(21)
    for G in random_groups:
        for _ in range(50):
            g = G.identity()
            for _ in range(rng.randint(1, 15)):
                x = rng.choice(G.generators)
                g = g * (x if rng.random() < 0.5 else x.inverse())
            assert g in G


def test_intersection_matches_exhaustive_search(s4):
    """Test intersections against element sets"""
    subgroups = [
        subgroup(s4, [cyc(4, (0, 1, 2, 3))]),
        subgroup(s4, [cyc(4, (0, 1, 2)), cyc(4, (0, 1))]),
        subgroup(s4, [cyc(4, (0, 1), (2, 3)), cyc(4, (0, 2), (1, 3))]),
        subgroup(s4, [cyc(4, (0, 2)), cyc(4, (0, 1, 2, 3))]),
        subgroup(s4, [cyc(4, (1, 2, 3))]),
    ]
    for H in subgroups:
        for K in subgroups:
            expected = set(H.element_keys()) & set(K.element_keys())
            assert set(intersection(H, K).element_keys()) == expected


def test_stabilizer_of_whole_domain_is_trivial(s4, a5, random_groups):
    """Test that fixing every point leaves only the identity"""
    for G in random_groups + [s4, a5]:
        assert pointwise_stabilizer(G, range(G.degree)).order == 1
