from collections import Counter

import numpy as np
import pytest

from compgroups import perm as P
from compgroups.catalog import (UnsupportedGroup, class_key, involution_labels, involution_rep,
                                long_root_label, matrix_group_order, parse_label, parse_spec,
                                quadratic_check, root_subgroup, same_class_fast, suzuki_ovoid,
                                sylow_subgroup)
from compgroups.forms import isometry_check
from compgroups.matrices import vecmat

from conftest import group

# orders computed by hand from the classical order formulas
KNOWN = {
    "SL(2,4)": 60, "SL(3,2)": 168, "SL(2,8)": 504, "SL(4,2)": 20160, "Sp(4,2)": 720,
    "Sp(6,2)": 1451520, "Sp(4,4)": 979200, "SU(3,3)": 6048, "SU(4,2)": 25920,
    "O+(6,2)": 20160, "O-(6,2)": 25920, "Sz(8)": 29120, "A5": 60, "S6": 720,
}
SMALL = ["SL(2,4)", "SL(3,2)", "SL(2,8)", "SL(2,5)", "SL(2,7)", "SL(3,3)", "SL(4,2)", "Sp(4,2)", "SU(3,3)", "SU(4,2)",
         "O+(6,2)", "O-(6,2)", "Sz(8)", "A6", "S6"]
PROPERTY = SMALL + ["Sp(6,2)", "Sp(4,4)", "SL(3,4)", "SL(5,2)", "SU(4,3)"]


@pytest.mark.parametrize("text,order", sorted(KNOWN.items()))
def test_group_orders(text, order):
    assert group(text).order() == order


def test_spec_parsing():
    assert str(parse_spec("Omega+(8,2)")) == "O+(8,2)"
    assert parse_spec("Sz(32)").q == 32
    for bad in ("Sp(5,2)", "Sz(4)", "SL(3,6)", "O+(6,3)", "foo"):
        with pytest.raises(ValueError):
            parse_spec(bad)
    for ex in ("E8(2)", "G2(3)", "2F4(2)"):
        with pytest.raises(UnsupportedGroup):
            parse_spec(ex)


@pytest.mark.parametrize("text", ["Sp(4,4)", "SU(3,3)", "SU(4,2)", "O+(6,2)", "O-(6,2)", "Sz(8)"])
def test_generators_are_isometries(text):
    G = group(text)
    for M in G.matrix_gens:
        assert isometry_check(G.form, M)
    assert quadratic_check(G)


def test_suzuki_generators_preserve_ovoid():
    G = group("Sz(8)")
    F = G.field
    O = suzuki_ovoid(F)
    assert len(O) == 65
    idx = set(G.point_index(O).tolist())
    for M in G.matrix_gens:
        assert set(G.point_index(vecmat(F, O, M.a)).tolist()) == idx


def _involutions(G):
    E = G.elements(10**6)
    return E[P.orders_batch(E) == 2]


@pytest.mark.parametrize("text", SMALL)
def test_invariants_partition_like_orbits(text):
    G = group(text)
    inv = _involutions(G)
    labels = involution_labels(G)
    keys = Counter(class_key(G, t) for t in inv)
    assert len(keys) == len(labels)
    total = 0
    for L in labels:
        t = involution_rep(G, L)
        assert P.order(t) == 2
        o = G.conjugacy_orbit(t)
        assert keys[class_key(G, t)] == o.size
        total += o.size
    assert total == len(inv)


def test_omega_plus_split_needs_orbit_test():
    G = group("O+(8,2)")
    a, b = (involution_rep(G, L) for L in involution_labels(G) if L.tag)
    assert same_class_fast(G, a, b) is None
    assert class_key(G, a) != class_key(G, b)
    assert G.conjugacy_orbit(a).index(b) == -1


def test_same_class_fast_undecided_for_split_sp12_class():
    G = group("O+(12,2)")
    t = involution_rep(G, "W2^3#1")
    assert same_class_fast(G, t, t) is None


def test_sp_labels():
    G = group("Sp(6,2)")
    assert [str(L) for L in involution_labels(G)] == ["V2+W1^2", "W2+W1", "V2^2+W1", "W2+V2"]
    assert str(parse_label("W2+V2", G.spec)) == "W2+V2"
    with pytest.raises(ValueError):
        involution_rep(G, "V2^3")


@pytest.mark.parametrize("text,kind,size", [
    ("SL(2,4)", "long", 4), ("SL(2,8)", "long", 8), ("Sp(4,4)", "long", 4),
    ("Sp(4,4)", "short", 4), ("SU(4,2)", "long", 2), ("SU(3,3)", "long", 3), ("Sz(8)", "long", 8),
])
def test_root_subgroups(text, kind, size):
    G = group(text)
    R = root_subgroup(G, kind)
    assert R.order() == size and R.is_elementary_abelian()


def test_long_root_elements_have_long_root_label():
    for text in ("SL(3,2)", "Sp(4,4)", "SU(4,2)", "O-(6,2)"):
        G = group(text)
        R = root_subgroup(G, "long")
        L = long_root_label(G)
        rep = involution_rep(G, L)
        for g in R.gens:
            if P.order(g) == 2:
                assert class_key(G, g) == class_key(G, rep)


def test_sylow_subgroups():
    for text, p, n in (("SL(2,4)", 2, 4), ("SL(3,2)", 2, 8), ("Sz(8)", 2, 64), ("A5", 3, 3),
                       ("SL(2,5)", 5, 5)):
        G = group(text, action="vectors") if text == "SL(2,5)" else group(text)
        S = sylow_subgroup(G, p)
        assert S.order() == n


def test_vector_action_order():
    G = group("SL(2,3)", action="vectors")
    assert G.order() == matrix_group_order(G.spec) == 24


@pytest.mark.parametrize("text", PROPERTY)
def test_orbit_stabilizer_every_label(text):
    G = group(text)
    assert G.order() <= 10**7
    for L in involution_labels(G):
        t = involution_rep(G, L)
        assert G.conjugacy_orbit(t).size * G.centralizer(t).order() == G.order()


def test_unfaithful_action_is_refused():
    from compgroups.catalog import LieGroup
    from compgroups.fields import GF
    from compgroups.matrices import Matrix
    F = GF(4)
    x = int(F.gen)
    # a torus element fixes the only point <e_1> of its orbit but is not scalar
    D = Matrix(F, np.array([[x, 0], [0, int(F.inv(x))]], dtype=np.int64))
    with pytest.raises(ValueError):
        LieGroup(parse_spec("SL(2,4)"), F, None, [D])
