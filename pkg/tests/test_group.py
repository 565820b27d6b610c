import itertools
from math import prod

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy.combinatorics import Permutation, PermutationGroup

from compgroups import perm as P
from compgroups.bsgs import BSGS, BudgetExceeded
from compgroups.catalog import involution_rep, sylow_subgroup
from compgroups.group import FiniteGroup, OrbitIndex

from conftest import group


def sl_order(n, q):
    return q ** (n * (n - 1) // 2) * prod(q**i - 1 for i in range(2, n + 1))


def test_orders_against_classical_formulas():
    assert group("SL(2,4)").order() == 4 * (16 - 1) == 60
    assert group("Sp(6,2)").order() == 2**9 * (4 - 1) * (16 - 1) * (64 - 1)
    q = 8
    assert group("Sz(8)").order() == q * q * (q * q + 1) * (q - 1)
    assert group("SL(2,4)").degree == 5 and group("Sp(6,2)").degree == 63


def test_deterministic_schreier_sims_agrees():
    for text in ("SL(3,2)", "Sp(4,2)", "SU(3,3)", "Sz(8)"):
        G = group(text)
        H = FiniteGroup(G.gens, G.degree, verify=True)
        assert H.order() == G.order()


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 9).flatmap(
    lambda d: st.lists(st.permutations(range(d)), min_size=1, max_size=3)))
def test_bsgs_order_matches_sympy(gens):
    d = len(gens[0])
    G = FiniteGroup([P.as_perm(list(g)) for g in gens], d)
    S = PermutationGroup([Permutation(list(g)) for g in gens])
    assert G.order() == S.order()


def test_membership_against_enumeration():
    rng = np.random.default_rng(3)
    G = FiniteGroup([P.from_cycles([[0, 1, 2, 3, 4]], 7), P.from_cycles([[0, 1], [2, 3]], 7)])
    elements = {x.tobytes() for x in G.elements()}
    assert len(elements) == G.order() == 60
    for _ in range(1000):
        x = P.as_perm(rng.permutation(7))
        assert G.contains(x) == (x.tobytes() in elements)
    S = group("Sp(6,2)")
    r = np.random.default_rng(0)
    assert all(S.contains(S.uniform_random(r)) for _ in range(1000))


def test_random_stream_is_deterministic():
    G = group("Sp(6,2)")
    a = G.random_stream(42)
    b = G.random_stream(42)
    for _ in range(20):
        x, y = a.next(), b.next()
        assert P.equal(x, y) and G.contains(x)


def test_involution_fraction_of_random_stream():
    G = group("Sp(6,2)")
    census = 63 + 315 + 945 + 3780  # class sizes found by conjugation orbits, see test_catalog
    frac = census / G.order()
    stream = G.random_stream(7)
    n = 10**4
    hits = sum(P.order(stream.next()) == 2 for _ in range(n))
    sigma = (n * frac * (1 - frac)) ** 0.5
    assert abs(hits - n * frac) <= 3 * sigma


@pytest.mark.parametrize("text,label,size", [("SL(3,2)", "J2", 21), ("SL(2,4)", "J2", 15)])
def test_orbit_sizes(text, label, size):
    G = group(text)
    t = involution_rep(G, label)
    o = G.conjugacy_orbit(t)
    assert o.size == size
    assert G.centralizer(t).order() * size == G.order()
    # exhaustive centralizer count
    E = G.elements()
    assert int(np.sum(np.all(E[:, t] == t[E], axis=1))) == G.order() // size


def test_transversal_words_replay():
    G = group("Sp(6,2)")
    o = G.conjugacy_orbit(involution_rep(G, "W2+V2"))
    rng = np.random.default_rng(0)
    for i in rng.integers(o.size, size=200):
        assert o.replay(int(i)).tobytes() == o.element(int(i)).tobytes()
        assert o.index(o.element(int(i))) == i


def _gf2_invertible_count(basis):
    """Number of invertible matrices in the GF(2)-span of ``basis`` (vectorized elimination)."""
    k = len(basis)
    n = basis.shape[1]
    coeffs = np.array(list(itertools.product([0, 1], repeat=k)), dtype=np.uint8)
    M = (np.tensordot(coeffs, basis, axes=1) % 2).astype(np.uint8)
    ok = np.ones(len(M), dtype=bool)
    for c in range(n):
        rows = M[:, c:, c]
        has = rows.any(axis=1)
        ok &= has
        piv = c + np.argmax(rows, axis=1)
        idx = np.arange(len(M))
        top = M[idx, piv].copy()
        M[idx, piv] = M[idx, c]
        M[idx, c] = top
        mask = M[:, :, c].copy()
        mask[:, c] = 0
        M ^= mask[:, :, None] * M[:, c][:, None, :]
    return int(ok.sum())


def test_centralizer_of_j2_cubed_in_sl62():
    G = group("SL(6,2)")
    t = involution_rep(G, "J2^3")
    C = G.centralizer(t)
    assert C.order() == 86016 == 2**9 * 168
    assert G.conjugacy_orbit(t).size * C.order() == G.order()
    # oracle: solve X T = T X for the matrix T of t, count invertible solutions
    T = G.involution_matrix(t).a % 2
    eqs = []
    for i, j in itertools.product(range(6), repeat=2):
        row = np.zeros((6, 6), dtype=np.int64)
        # (X T)_{ij} - (T X)_{ij} = sum_k X_ik T_kj - T_ik X_kj
        row[i, :] ^= T[:, j]
        row[:, j] ^= T[i, :]
        eqs.append(row.reshape(-1) % 2)
    A = np.array(eqs)
    from compgroups.fields import GF
    from compgroups.matrices import nullspace_left
    basis = nullspace_left(GF(2), A.T).reshape(-1, 6, 6).astype(np.uint8)
    assert _gf2_invertible_count(basis) == 86016


def test_centralizer_of_central_element():
    G = group("SL(2,3)", action="vectors")
    z = G.perm(G.matrix_gens[0].scale(2) @ G.matrix_gens[0].inverse())
    assert G.centralizer(z).order() == G.order() == 24


def test_closures():
    G = group("A5")
    assert G.subgroup([]).order() == 1
    a = P.from_cycles([[0, 1], [2, 3]], 5)
    b = P.from_cycles([[0, 2], [1, 3]], 5)
    assert G.subgroup([a, b, P.mul(a, b)]).order() == 4
    S = group("SL(2,4)")
    P1 = sylow_subgroup(S, 2)
    g = next(x for x in S.elements() if not all(P1.contains(P.conj(h, x)) for h in P1.gens))
    P2 = S.subgroup([P.conj(h, g) for h in P1.gens])
    assert S.subgroup(P1.gens + P2.gens).order() == 60


def test_orbit_budget_is_resumable_failure():
    G = group("Sp(6,2)")
    t = involution_rep(G, "W2+V2")
    with pytest.raises(BudgetExceeded) as err:
        OrbitIndex(G, t, budget=1000)
    assert err.value.reached > 1000


def test_enumeration_bound():
    with pytest.raises(BudgetExceeded):
        group("Sp(6,2)").elements(10**5)


def test_base_prefix_and_add_generators():
    G = group("SL(3,2)")
    B = BSGS(G.gens, G.degree, base_prefix=(5, 3), verify=True)
    assert B.base[:2] == [5, 3] and B.order() == 168
    H = FiniteGroup(G.gens[:1], G.degree)
    small = H.order()
    H.bsgs.add_generators(G.gens[1:])
    assert H.order() == 168 > small
