from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from ordspace.corpus import fan, four_fan, sap, six_point_connected
from ordspace.spaces import OrderingSpace
from ordspace.witt import (
    Lattice,
    QuadraticForm,
    WittElement,
    congruence_lattice,
    hyperbolic,
    ideal_generators,
    ideal_lattice,
    in_ideal_power,
    intersect,
    isometric,
    lam_b_equivalence,
    naive_in_ideal_power,
    parse_form,
    pfister,
    random_form,
    signature_vector,
    witt_element,
    witt_equivalent,
)

SPACES = [four_fan(), sap(3), six_point_connected(), fan(1)]


def test_signature_examples():
    S = four_fan()
    a = S.gens[1]
    assert signature_vector(S, hyperbolic(S)) == (0,) * 4
    assert signature_vector(S, QuadraticForm((0, a))) == tuple(0 if (a >> i) & 1 else 2 for i in range(4))
    assert signature_vector(S, QuadraticForm((0, 0))) == (2,) * 4


def test_isometry_and_witt_equivalence():
    S = four_fan()
    a, b = S.gens[1], S.gens[2]
    assert isometric(S, QuadraticForm((a, b)), QuadraticForm((b, a)))
    assert witt_equivalent(S, hyperbolic(S), QuadraticForm(()))
    assert witt_equivalent(S, QuadraticForm((0, a, S.minus_one ^ a)), QuadraticForm((0,)))
    assert not isometric(S, QuadraticForm((0, a, S.minus_one ^ a)), QuadraticForm((0,)))


def test_witt_element_parity_invariant():
    with pytest.raises(Exception):
        WittElement((1, 2), 1)


def test_pfister():
    S = four_fan()
    a, b = S.gens[1], S.gens[2]
    assert pfister(S, [a]).entries == (0, a)
    assert set(signature_vector(S, pfister(S, [a, b]))) <= {0, 4}
    assert set(signature_vector(S, pfister(S, [S.minus_one]))) == {0}


def test_in_ideal_power_examples():
    S = fan(3)
    assert in_ideal_power(S, QuadraticForm((0, 0)), 1)
    assert not in_ideal_power(S, QuadraticForm((0,)), 1)
    c = S.gens[3]
    phi = pfister(S, [S.gens[1], S.gens[2]]).scaled(c)
    assert in_ideal_power(S, phi, 2)
    assert in_ideal_power(S, pfister(S, [S.gens[1], S.gens[2], S.gens[3]]), 3)


def test_parse_form():
    S = four_fan()
    S = OrderingSpace(S.labels, S.gens, (("g1", S.gens[1]), ("g2", S.gens[2])))
    phi = parse_form(S, "1,g1,-g1*g2")
    assert phi.entries == (0, S.gens[1], S.minus_one ^ S.gens[1] ^ S.gens[2])
    assert parse_form(S, "").dimension == 0


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SPACES), st.integers(0, 10**6))
def test_ring_laws(S, seed):
    rng = random.Random(seed)
    phi, psi = random_form(S, rng, 5), random_form(S, rng, 5)
    s1, s2 = signature_vector(S, phi), signature_vector(S, psi)
    assert signature_vector(S, phi + psi) == tuple(x + y for x, y in zip(s1, s2))
    assert signature_vector(S, phi * psi) == tuple(x * y for x, y in zip(s1, s2))
    assert witt_element(S, phi + hyperbolic(S, 2)) == witt_element(S, phi)


@pytest.mark.parametrize("S", SPACES)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_generators_have_divisible_signatures(S, n):
    for g in ideal_generators(S, n):
        assert all(v % (1 << n) == 0 for v in g)
    assert ideal_lattice(S, n) <= congruence_lattice(S, n)


@pytest.mark.parametrize("S", SPACES)
def test_lam_b_small(S):
    assert all(lam_b_equivalence(S, n) for n in (1, 2, 3, 4))


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([four_fan(), sap(3), sap(4), fan(1)]), st.integers(0, 10**6), st.integers(2, 3))
def test_lattice_membership_matches_naive(S, seed, n):
    phi = random_form(S, random.Random(seed), 10)
    assert in_ideal_power(S, phi, n) == naive_in_ideal_power(S, phi, n)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), max_size=5),
       st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), max_size=5))
def test_lattice_ops(a, b):
    L1, L2 = Lattice(3, a), Lattice(3, b)
    for v in a:
        assert tuple(v) in L1
    assert Lattice(3, a + b) == Lattice(3, b + a)
    M = intersect(L1, L2)
    assert M <= L1 and M <= L2
    # sums of members of both are in the intersection
    for v in a:
        w = [2 * x for x in v]
        if tuple(w) in L2:
            assert tuple(w) in M
