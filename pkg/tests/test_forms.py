import numpy as np
import pytest

from compgroups.fields import GF
from compgroups.forms import (alternating_form, e_pos, f_pos, form_eval, hermitian_form,
                              isometry_check, quadratic_form, quadratic_values)
from compgroups.matrices import Matrix, jordan_profile


def unit(n, i):
    v = np.zeros(n, dtype=np.int64)
    v[i] = 1
    return v


def test_alternating_gram_entries():
    form = alternating_form(GF(3), 4)
    assert form_eval(form, unit(4, e_pos(1, 4)), unit(4, f_pos(1, 4))) == 1
    assert form_eval(form, unit(4, f_pos(1, 4)), unit(4, e_pos(1, 4))) == 2
    G = form.gram.a
    assert np.all(np.diag(G) == 0)
    assert np.array_equal((G + G.T) % 3, np.zeros((4, 4)))
    assert isometry_check(form, Matrix.identity(GF(3), 4))


@pytest.mark.parametrize("q,n", [(4, 3), (4, 4), (9, 3), (16, 2)])
def test_hermitian_root_element(q, n):
    F = GF(q)
    form = hermitian_form(F, n)
    G = form.gram.a
    assert np.array_equal(G, F.pow(G.T, form.sigma))
    lam = int(next(c for c in F.trace_zero_elements(form.sigma) if c))
    # f_1 -> f_1 + lam e_1 in the basis e_1, ..., f_1
    A = np.eye(n, dtype=np.int64)
    A[n - 1, 0] = lam
    x = Matrix(F, A)
    assert isometry_check(form, x)
    if F.p == 2:
        assert jordan_profile(x) == [(2, 1)] + ([(1, n - 2)] if n > 2 else [])
    B = np.eye(n, dtype=np.int64)
    B[n - 1, 0] = 1 if F.add(1, F.pow(1, form.sigma)) else int(F.gen)
    assert not isometry_check(form, Matrix(F, B))


@pytest.mark.parametrize("sign", [1, -1])
@pytest.mark.parametrize("q", [2, 4])
def test_quadratic_forms(q, sign):
    F = GF(q)
    form = quadratic_form(F, 6, sign)
    V = np.array(np.meshgrid(*[np.arange(q)] * 6, indexing="ij")).reshape(6, -1).T
    Qv = quadratic_values(form, V)
    zeros = int(np.sum(Qv == 0)) - 1  # nonzero singular vectors
    # (q^3 - e)(q^2 + e) singular nonzero vectors in dimension 6
    assert zeros == (q**3 - sign) * (q**2 + sign)
    u, v = V[7], V[-5]
    pol = F.add(F.add(form_eval(form, F.add(u, v)), form_eval(form, u)), form_eval(form, v))
    assert int(pol) == form_eval(form, u, v)


def test_isometries_compose():
    from compgroups.catalog import make_group, parse_spec
    G = make_group(parse_spec("Sp(4,4)"), reduce_generators=False)
    mats = G.matrix_gens
    rng = np.random.default_rng(0)
    for _ in range(20):
        a, b = (mats[int(k)] for k in rng.integers(len(mats), size=2))
        assert isometry_check(G.form, a) and isometry_check(G.form, b)
        assert isometry_check(G.form, a @ b)


def test_dimension_mismatch():
    form = alternating_form(GF(2), 4)
    with pytest.raises(ValueError):
        form_eval(form, [1, 0], [0, 1])
