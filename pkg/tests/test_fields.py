import itertools

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from compgroups.fields import (GF, PRIMITIVE_POLYNOMIALS, FieldError, field_arith, parse_element,
                               parse_field)

SMALL = [(p, a) for (p, a) in PRIMITIVE_POLYNOMIALS if p**a <= 512]


# plain coefficient-list polynomials over GF(p), constant term first


def _trim(f):
    while len(f) > 1 and f[-1] == 0:
        f = f[:-1]
    return f


def _polymod(f, m, p):
    f = _trim(list(f))
    inv = pow(m[-1], p - 2, p)
    while len(f) >= len(m) and any(f):
        c = f[-1] * inv % p
        shift = len(f) - len(m)
        for i, mi in enumerate(m):
            f[shift + i] = (f[shift + i] - c * mi) % p
        f = _trim(f[:-1]) if len(f) > 1 else [0]
    return _trim(f)


def _polymulmod(f, g, m, p):
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x:
            for j, y in enumerate(g):
                out[i + j] = (out[i + j] + x * y) % p
    return _polymod(out, m, p)


def _polypow(f, e, m, p):
    out = [1]
    while e:
        if e & 1:
            out = _polymulmod(out, f, m, p)
        f = _polymulmod(f, f, m, p)
        e >>= 1
    return out


def _polygcd(f, g, p):
    f, g = _trim(f), _trim(g)
    while any(g):
        f, g = g, _polymod(f, g, p)
    return f


def _sub(f, g, p):
    n = max(len(f), len(g))
    f, g = f + [0] * (n - len(f)), g + [0] * (n - len(g))
    return _trim([(x - y) % p for x, y in zip(f, g)])


def test_polynomial_helpers():
    # (x + 1)^2 = x^2 + 1 over GF(2), reduced mod x^2 + x + 1 gives x
    assert _polymulmod([1, 1], [1, 1], [1, 1, 1], 2) == [0, 1]
    assert _polygcd([1, 0, 1], [1, 1], 2) == [1, 1]


@pytest.mark.parametrize("p,a", sorted(PRIMITIVE_POLYNOMIALS))
def test_table_polynomials_are_primitive(p, a):
    f = list(PRIMITIVE_POLYNOMIALS[p, a])
    assert f[-1] == 1 and len(f) == a + 1
    x = _polymod([0, 1], f, p)
    # Rabin: x^(p^a) = x mod f, and gcd(x^(p^(a/r)) - x, f) = 1 for primes r | a
    assert _sub(_polypow(x, p**a, f, p), x, p) == [0]
    for r in sympy.primefactors(a):
        assert len(_polygcd(_sub(_polypow(x, p ** (a // r), f, p), x, p), f, p)) == 1
    q = p**a
    assert _polypow(x, q - 1, f, p) == [1]
    for r in sympy.primefactors(q - 1):
        assert _polypow(x, (q - 1) // r, f, p) != [1]


@pytest.mark.parametrize("p,a", [pa for pa in SMALL if pa[0] ** pa[1] <= 64])
def test_multiplication_matches_polynomial_oracle(p, a):
    F = GF(p, a)
    f = list(F.poly)
    for x, y in itertools.product(range(F.q), repeat=2):
        prod = _polymulmod(F.digits(x), F.digits(y), f, p)
        assert int(F.mul(x, y)) == sum(c * p**k for k, c in enumerate(prod))
        assert F.digits(int(F.add(x, y))) == [(u + v) % p for u, v in zip(F.digits(x), F.digits(y))]


@pytest.mark.parametrize("p,a", SMALL)
def test_field_axioms_exhaustive(p, a):
    F = GF(p, a)
    xs = F.elements
    A, B = np.meshgrid(xs, xs, indexing="ij")
    for z in xs[:: max(1, F.q // 16)]:
        assert np.array_equal(F.add(F.add(A, B), z), F.add(A, F.add(B, z)))
        assert np.array_equal(F.mul(F.mul(A, B), z), F.mul(A, F.mul(B, z)))
    nz = xs[1:]
    assert np.all(F.mul(nz, F.inv(nz)) == 1)
    y = xs
    for _ in range(a):
        y = F.frobenius(y)
    assert np.array_equal(y, xs)
    assert len({int(F.pow(F.gen, k)) for k in range(F.q - 1)}) == F.q - 1


def test_spec_examples():
    assert field_arith(GF(2), "add", 1, 1) == 0
    F4 = GF(4)
    x = parse_element(F4, "x")
    assert field_arith(F4, "mul", x, x) == parse_element(F4, "x+1")
    F8 = parse_field("GF(2,3)")
    assert field_arith(F8, "pow", parse_element(F8, "x"), 3) == parse_element(F8, "x+1")
    assert field_arith(F8, "frobenius", 2) == int(F8.pow(2, 2))


def test_inverse_of_zero_is_a_domain_error():
    with pytest.raises(FieldError):
        GF(9).inv(0)
    with pytest.raises(FieldError):
        field_arith(GF(9), "inv", 0)


def test_oversized_field_is_refused():
    with pytest.raises(ValueError):
        GF(7, 12)


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_field("GF(6)")
    with pytest.raises(ValueError):
        parse_element(GF(4), "y+1")


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_distributive(pa, data):
    F = GF(*pa)
    x, y, z = (data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))
    assert F.sub(F.add(x, y), y) == x
