import itertools
import json
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from compgroups import perm as P
from compgroups.binary import (CosetAction, Transporter, UsageError, binary_bounded,
                               certificate_json, element_json, fixity, max_p_fixity,
                               nonbinary_witness, r_related, stabilizer_filter, ti_binary_criterion,
                               ti_check)
from compgroups.catalog import root_subgroup, sylow_subgroup
from compgroups.group import FiniteGroup

from conftest import group


def _cyc(cycles, d):
    return P.from_cycles([[x - 1 for x in c] for c in cycles], d)


def _brute_binary(A, max_n):
    """Brute force over all elements: is every 2-related pair of n-tuples n-related?"""
    E = A.elements()
    d = A.degree
    for n in range(3, max_n + 1):
        tuples = list(itertools.permutations(range(d), n))
        orbit = {}
        for I in tuples:
            if I in orbit:
                continue
            imgs = {tuple(int(v) for v in row) for row in E[:, list(I)]}
            for J in imgs:
                orbit[J] = I
        pairs = {}
        for I in tuples:
            key = tuple(orbit[(I[a], I[b])] if n == 2 else _pair_orbit(E, I[a], I[b])
                        for a in range(n) for b in range(n) if a != b)
            pairs.setdefault(key, set()).add(orbit[I])
        if any(len(v) > 1 for v in pairs.values()):
            return False
    return True


def _pair_orbit(E, x, y):
    col = E[:, [x, y]]
    return min(map(tuple, col.tolist()))


@lru_cache(maxsize=None)
def _small_groups():
    d6 = [_cyc([[1, 2, 3, 4, 5, 6]], 6), _cyc([[2, 6], [3, 5]], 6)]
    return {
        "S5": FiniteGroup([_cyc([[1, 2, 3, 4, 5]], 5), _cyc([[1, 2]], 5)]),
        "A5": FiniteGroup([_cyc([[1, 2, 3, 4, 5]], 5), _cyc([[1, 2, 3]], 5)]),
        "A4": FiniteGroup([_cyc([[1, 2, 3]], 4), _cyc([[1, 2], [3, 4]], 4)]),
        "C5": FiniteGroup([_cyc([[1, 2, 3, 4, 5]], 5)]),
        "D6": FiniteGroup(d6),
        "S3xS3": FiniteGroup([_cyc([[1, 2, 3]], 6), _cyc([[1, 2]], 6), _cyc([[4, 5, 6]], 6),
                              _cyc([[4, 5]], 6)]),
        "A6": FiniteGroup([_cyc([[1, 2, 3, 4, 5]], 6), _cyc([[4, 5, 6]], 6)]),
        "PGL25": FiniteGroup([_cyc([[1, 2, 3, 4, 5]], 6), _cyc([[1, 2, 4, 3]], 6),
                              _cyc([[1, 6], [2, 5], [3, 4]], 6)]),
    }


@pytest.mark.parametrize("name", sorted(_small_groups()))
def test_bounded_search_matches_brute_force(name):
    A = _small_groups()[name]
    res = binary_bounded(A)
    assert (res["verdict"] == "no-violation") == _brute_binary(A, A.degree)
    if res["verdict"] == "violation":
        I, J, n = res["I"], res["J"], res["r"]
        assert r_related(A, I, J, 2) and not r_related(A, I, J, n)


def test_a6_examples():
    A = _small_groups()["A6"]
    g1, g2 = _cyc([[1, 2], [3, 4]], 6), _cyc([[1, 2], [5, 6]], 6)
    w = nonbinary_witness(A, g1, g2)
    assert w.verdict == "none-exists"
    assert len(w.F1) == len(w.F2) == len(w.F3) == 2
    res = binary_bounded(A, 6, min_n=6)
    assert res["verdict"] == "violation" and res["r"] == 6
    I, J = res["I"], res["J"]
    assert r_related(A, I, J, 2) and not r_related(A, I, J, 6)
    # oracle over all 360 elements
    E = A.elements()
    assert not np.any(np.all(E[:, I] == J, axis=1))
    for a, b in itertools.combinations(range(6), 2):
        assert np.any(np.all(E[:, [I[a], I[b]]] == [J[a], J[b]], axis=1))
    S = group("S6")
    w = nonbinary_witness(S, g1, g2)
    assert w.verdict == "extending-h-found"
    assert S.contains(w.extending) and list(w.extending[w.I]) == w.J


def test_witness_preconditions():
    A = _small_groups()["A6"]
    g1 = _cyc([[1, 2], [3, 4]], 6)
    with pytest.raises(UsageError):
        nonbinary_witness(A, g1, g1)
    with pytest.raises(UsageError):
        nonbinary_witness(A, g1, _cyc([[1, 3], [2, 5]], 6))  # does not commute
    with pytest.raises(UsageError):
        nonbinary_witness(A, g1, _cyc([[3, 4], [1, 2]], 6))  # same element


@lru_cache(maxsize=None)
def _transporter(A):
    return Transporter(A)


@settings(max_examples=1000, deadline=None)
@given(st.data())
def test_relatedness_is_downward_monotone(data):
    A = _small_groups()[data.draw(st.sampled_from(["A6", "PGL25", "S3xS3", "D6"]))]
    n = data.draw(st.integers(2, 6))
    I = data.draw(st.permutations(range(6)))[:n]
    J = data.draw(st.permutations(range(6)))[:n]
    tr = _transporter(A)
    rel = [r_related(A, I, J, r, tr) for r in range(1, n + 1)]
    for r in range(1, n):
        assert rel[r - 1] or not rel[r]


def test_transporter_finds_mapping_elements():
    A = group("Sp(6,2)")
    tr = Transporter(A)
    rng = np.random.default_rng(0)
    for _ in range(50):
        g = A.uniform_random(rng)
        I = list(rng.choice(A.degree, 4, replace=False))
        h = tr.find(I, [int(g[i]) for i in I])
        assert h is not None and A.contains(h) and list(h[I]) == [int(g[i]) for i in I]


@pytest.mark.parametrize("text,sub", [("A5", "C5"), ("A5", "V4"), ("SL(2,8)", "sylow"),
                                      ("Sp(4,2)", "sylow")])
def test_burnside_on_coset_actions(text, sub):
    G = group(text)
    if sub == "C5":
        H = G.subgroup([_cyc([[1, 2, 3, 4, 5]], 5)])
    elif sub == "V4":
        H = G.subgroup([_cyc([[1, 2], [3, 4]], 5), _cyc([[1, 3], [2, 4]], 5)])
    elif sub == "sylow":
        H = sylow_subgroup(G, 2)
    else:
        H = root_subgroup(G)
    A = CosetAction(G, H)
    assert A.degree == G.order() // H.order()
    E = G.elements()
    total = sum(A.fixity(g) for g in E)
    assert total == G.order()  # one orbit
    for g in E[:: max(1, len(E) // 50)]:
        assert A.fixity(g) == len(P.fixed_points(A.act(g)))


def test_sz8_centre_fixity():
    G = group("Sz(8)")
    A = CosetAction(G, root_subgroup(G))
    rep = max_p_fixity(A)
    assert A.degree == 3640
    # direct count on the induced permutation agrees with the class formula
    assert rep.max_fixity == len(P.fixed_points(A.act(rep.classes.reps[0]))) == 56


def test_a5_klein_fixity():
    G = group("A5")
    H = G.subgroup([_cyc([[1, 2], [3, 4]], 5), _cyc([[1, 3], [2, 4]], 5)])
    A = CosetAction(G, H)
    assert A.degree == 15 and max_p_fixity(A).max_fixity == 3


TI_CASES = [("A4", "C3"), ("S4", "C3"), ("A5", "C5"), ("SL(2,4)", "sylow")]


def _ti_case(text, sub):
    if text in ("A4", "S4"):
        G = _small_groups()["A4"] if text == "A4" else group("S4")
        return G, G.subgroup([_cyc([[1, 2, 3]], 4)])
    G = group(text)
    if sub == "C5":
        return G, G.subgroup([_cyc([[1, 2, 3, 4, 5]], 5)])
    if sub == "C3":
        return G, G.subgroup([_cyc([[1, 2, 3]], 5)])
    return G, sylow_subgroup(G, 2)


@pytest.mark.parametrize("text,sub", TI_CASES)
def test_ti_criterion_agrees_with_bounded_search(text, sub):
    G, H = _ti_case(text, sub)
    assert ti_check(G, H)
    A = CosetAction(G, H)
    assert A.degree <= 16
    ti = ti_binary_criterion(G, H).verdict
    bounded = binary_bounded(A.group, min(A.degree, 5))["verdict"]
    # a violation of small arity is found whenever the criterion says not binary
    assert (ti == "binary") == (bounded == "no-violation")


def test_ti_not_binary_certificate_checks_out():
    G, H = _ti_case("A5", "C5")
    res = ti_binary_criterion(G, H)
    assert res.verdict == "not-binary"
    w = res.witness
    y = np.frombuffer(bytes.fromhex(w["product"]["encoding"]), dtype=P.dtype_for(G.degree))
    h2 = np.frombuffer(bytes.fromhex(w["h2"]["encoding"]), dtype=P.dtype_for(G.degree))
    h3 = np.frombuffer(bytes.fromhex(w["h3"]["encoding"]), dtype=P.dtype_for(G.degree))
    assert P.equal(P.mul(h2, h3), y) and not P.is_identity(y)
    assert H.contains(h2)


def test_non_ti_subgroup_rejected():
    G = group("A6")
    S = sylow_subgroup(G, 2)
    assert not ti_check(G, S)
    with pytest.raises(UsageError):
        ti_binary_criterion(G, S)


@pytest.mark.parametrize("text,sub", [("SL(2,4)", "sylow"), ("SL(2,8)", "sylow"), ("Sz(8)", "root"),
                                      ("SU(3,3)", "root")])
def test_filter_passes_when_ti_says_binary(text, sub):
    G = group(text)
    H = sylow_subgroup(G, 2) if sub == "sylow" else root_subgroup(G)
    assert ti_binary_criterion(G, H).verdict == "binary"
    p = G.field.p
    assert stabilizer_filter(G, H, p=p).verdict == "pass"


def test_filter_fails_for_sl32_borel():
    G = group("SL(3,2)")
    assert stabilizer_filter(G, sylow_subgroup(G, 2)).verdict == "fail"


def test_certificates_are_json():
    g = _cyc([[1, 2, 3], [4, 5]], 6)
    e = element_json(g)
    assert np.array_equal(np.frombuffer(bytes.fromhex(e["encoding"]), dtype=np.uint8), g)
    assert e["cycles"] == P.cycle_string(g)
    A = _small_groups()["A6"]
    w = nonbinary_witness(A, _cyc([[1, 2], [3, 4]], 6), _cyc([[1, 2], [5, 6]], 6))
    d = json.loads(certificate_json(w))
    assert d["verdict"] == "none-exists" and d["I"] == w.I


def test_bounded_degree_limit():
    with pytest.raises(UsageError):
        binary_bounded(group("Sp(6,2)"))


def test_fixity_on_points():
    assert fixity(group("S6"), _cyc([[1, 2]], 6)) == 4
