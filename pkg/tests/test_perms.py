import random

import pytest
from hypothesis import given, strategies as st
from sympy.combinatorics import Permutation, PermutationGroup

from sdcodes import perms
from sdcodes.perms import PermGroup

from conftest import random_perm


def sympy_order(gens, n):
    return PermutationGroup([Permutation(list(g), size=n) for g in gens]).order()


def test_compose_applies_first_argument_first():
    a = (1, 0, 2)
    b = (0, 2, 1)
    # 0 -a-> 1 -b-> 2
    assert perms.compose(a, b)[0] == 2


def test_inverse_and_power():
    rng = random.Random(4)
    for _ in range(200):
        p = random_perm(rng, 9)
        assert perms.is_identity(perms.compose(p, perms.inverse(p)))
        order = perms.perm_order(p)
        assert perms.is_identity(perms.power(p, order))
        assert perms.power(p, -1) == perms.inverse(p)


def test_cycle_notation_round_trip():
    p = perms.parse_cycles("(1,3,5)(2,4)", 6)
    assert p == (2, 3, 4, 1, 0, 5)
    assert perms.format_cycles(p) == "(1,3,5)(2,4)"
    assert perms.parse_cycles("id", 4) == perms.identity(4)
    assert perms.format_cycles(perms.identity(3)) == "()"


@pytest.mark.parametrize("text", ["(1,2", "(1,1)", "(0,2)", "(1,9)", "x(1,2)"])
def test_cycle_notation_rejects(text):
    with pytest.raises(ValueError):
        perms.parse_cycles(text, 4)


def test_restrict_and_from_images():
    p = perms.parse_cycles("(1,2)(3,4)", 5)
    assert perms.restrict(p, [2, 3]) == (1, 0)
    with pytest.raises(ValueError):
        perms.restrict(p, [0, 2])
    with pytest.raises(ValueError):
        perms.from_images([0, 0, 1])


def test_orbits():
    gens = [perms.parse_cycles("(1,2)", 6), perms.parse_cycles("(3,4,5)", 6)]
    assert sorted(map(sorted, perms.orbits(gens, 6))) == [[0, 1], [2, 3, 4], [5]]
    assert sorted(perms.orbit_of(2, gens)) == [2, 3, 4]


@pytest.mark.parametrize("n", [1, 2, 5, 8, 12])
def test_symmetric_and_alternating_orders(n):
    from math import factorial
    transposition = tuple([1, 0] + list(range(2, n))) if n > 1 else (0,)
    long_cycle = tuple(list(range(1, n)) + [0])
    assert perms.group_order([transposition, long_cycle], n) == factorial(n)
    if n >= 3:
        three = tuple([1, 2, 0] + list(range(3, n)))
        gens = [three] + ([perms.compose(long_cycle, long_cycle)] if n % 2 == 0 else [long_cycle])
        # cross-check odd/even generator sets against sympy
        assert perms.group_order(gens, n) == sympy_order(gens, n)


@given(st.integers(2, 14), st.integers(1, 3), st.integers(0, 2**32))
def test_group_order_matches_sympy(n, ngens, seed):
    rng = random.Random(seed)
    gens = [random_perm(rng, n) for _ in range(ngens)]
    assert perms.group_order(gens, n) == sympy_order(gens, n)


@given(st.integers(2, 9), st.integers(0, 2**32))
def test_membership_agrees_with_sympy(n, seed):
    rng = random.Random(seed)
    gens = [random_perm(rng, n) for _ in range(rng.randint(1, 2))]
    group = PermGroup(n, gens)
    ref = PermutationGroup([Permutation(list(g)) for g in gens])
    for _ in range(10):
        x = random_perm(rng, n)
        assert (x in group) == ref.contains(Permutation(list(x)))


def test_elements_enumeration_small():
    gens = [perms.parse_cycles("(1,2,3,4)", 4), perms.parse_cycles("(1,3)", 4)]
    group = PermGroup(4, gens)
    elems = set(group.elements())
    assert len(elems) == group.order() == 8
    assert all(e in group for e in elems)
    for a in elems:
        for b in elems:
            assert perms.compose(a, b) in elems


def test_add_reports_redundant_generators():
    group = PermGroup(5)
    g = perms.parse_cycles("(1,2,3,4,5)", 5)
    assert group.add(g)
    assert not group.add(perms.power(g, 2))
    assert group.order() == 5
    assert sorted(map(sorted, group.orbits())) == [[0, 1, 2, 3, 4]]


def test_stabilizer_chain_orders_multiply():
    rng = random.Random(17)
    gens = [random_perm(rng, 8) for _ in range(2)]
    group = PermGroup(8, gens)
    product = 1
    for i in range(len(group.base)):
        product *= len(group.basic_orbit(i))
    assert product == group.order()
