"""
Sesquilinear and quadratic forms, in the hyperbolic basis
e_1, ..., e_n, (w), f_n, ..., f_1 with Gram matrix on the reverse diagonal.
"""

from dataclasses import dataclass

import numpy as np

from .matrices import Matrix, matmul

KINDS = ("alternating", "quadratic-plus", "quadratic-minus", "hermitian")


@dataclass(frozen=True)
class FormSpec:
    kind: str
    gram: Matrix
    # upper triangular Q with Q(v) = v Q v^T, for the quadratic kinds
    quad: Matrix = None
    # x -> x^sigma is the involutory field automorphism (hermitian only)
    sigma: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown form kind {self.kind!r}")

    @property
    def field(self):
        return self.gram.field

    @property
    def dim(self):
        return self.gram.nrows


def e_pos(i, dim):
    """0-based position of e_i (i from 1)."""
    return i - 1


def f_pos(i, dim):
    return dim - i


def alternating_form(F, dim):
    if dim % 2:
        raise ValueError("alternating forms need even dimension")
    G = np.zeros((dim, dim), dtype=np.int64)
    one, minus = 1, int(F.neg(1))
    for i in range(dim // 2):
        G[i, dim - 1 - i] = one
        G[dim - 1 - i, i] = minus
    return FormSpec("alternating", Matrix(F, G))


def hermitian_form(F, dim):
    """Hermitian form over F = GF(q^2), sigma: x -> x^q."""
    if F.a % 2:
        raise ValueError("hermitian forms need a field of square order")
    G = np.zeros((dim, dim), dtype=np.int64)
    for i in range(dim):
        G[i, dim - 1 - i] = 1
    return FormSpec("hermitian", Matrix(F, G), sigma=int(round(F.q ** 0.5)))


def anisotropic_constant(F):
    """Least alpha with x^2 + x + alpha irreducible over F (characteristic 2)."""
    squares_plus = {int(F.add(F.mul(y, y), y)) for y in range(F.q)}
    return next(a for a in range(F.q) if a not in squares_plus)


def quadratic_form(F, dim, sign):
    """Quadratic form of +/- type in characteristic 2.

    Q(v) = sum_i v(e_i) v(f_i), plus for the minus type the anisotropic
    summand x^2 + xy + alpha y^2 on the innermost pair (e_n, f_n).
    """
    if F.p != 2:
        raise ValueError("quadratic forms are only supported in characteristic 2")
    if dim % 2:
        raise ValueError("quadratic forms need even dimension here")
    n = dim // 2
    Q = np.zeros((dim, dim), dtype=np.int64)
    for i in range(n):
        Q[i, dim - 1 - i] = 1
    kind = "quadratic-plus"
    if sign < 0:
        kind = "quadratic-minus"
        Q[n - 1, n - 1] = 1
        Q[n, n] = anisotropic_constant(F)
    Qm = Matrix(F, Q)
    gram = Matrix(F, F.add(Q, Q.T))
    return FormSpec(kind, gram, quad=Qm)


def _conj(form, v):
    if form.kind == "hermitian":
        return form.field.pow(v, form.sigma)
    return v


def form_eval(form, u, v=None):
    """phi(u, v); with v omitted and a quadratic kind, the value Q(u)."""
    F = form.field
    u = np.asarray(u, dtype=np.int64)
    if u.shape[-1] != form.dim:
        raise ValueError("vector dimension does not match the form")
    if v is None:
        if form.quad is None:
            raise ValueError("single-argument evaluation needs a quadratic form")
        uq = matmul(F, u.reshape(1, -1), form.quad.a)
        return int(matmul(F, uq, u.reshape(-1, 1))[0, 0])
    v = np.asarray(v, dtype=np.int64)
    if v.shape[-1] != form.dim:
        raise ValueError("vector dimension does not match the form")
    ug = matmul(F, u.reshape(1, -1), form.gram.a)
    return int(matmul(F, ug, _conj(form, v).reshape(-1, 1))[0, 0])


def quadratic_values(form, V):
    """Q(v) for every row of V."""
    F = form.field
    VQ = matmul(F, V, form.quad.a)
    out = np.zeros(len(V), dtype=np.int64)
    for k in range(form.dim):
        out = F.add(out, F.mul(VQ[:, k], V[:, k]))
    return out


def _fold_upper(F, A):
    """Upper-triangular representative of the quadratic form v A v^T."""
    U = np.triu(A)
    low = np.tril(A, -1).T
    return F.add(U, low)


def isometry_check(form, g):
    """Whether g preserves the form (and Q, for the quadratic kinds)."""
    F = form.field
    if g.shape != (form.dim, form.dim):
        raise ValueError("matrix dimension does not match the form")
    gt = _conj(form, g.a).T
    lhs = matmul(F, matmul(F, g.a, form.gram.a), gt)
    if not np.array_equal(lhs, form.gram.a):
        return False
    if form.quad is not None:
        gq = matmul(F, matmul(F, g.a, form.quad.a), g.a.T)
        if not np.array_equal(_fold_upper(F, gq), form.quad.a):
            return False
    return True
