"""
Concrete groups of Lie type as permutation groups on points, their
involution class representatives, and linear-algebra class invariants.

Matrices act on row vectors in the basis e_1, ..., e_n, (w), f_n, ..., f_1.
A group acts on the orbit of <e_1> (projective points), which realizes the
simple quotient; ``action="vectors"`` keeps vectors instead (honest SL_2(q)
for odd q).
"""

import re
from dataclasses import dataclass, field as dc_field
from math import gcd, prod

import numpy as np

from . import perm as P
from .fields import GF, POLY_TABLE_VERSION, FieldError, _factor_prime_power
from .forms import (alternating_form, form_eval, hermitian_form, isometry_check,
                    quadratic_form, quadratic_values)
from .group import FiniteGroup
from .matrices import Matrix, nullspace_left, inverse, jordan_profile, matmul, rank, vecmat

DOMAIN_BOUND = 2**20
FAMILIES = ("SL", "Sp", "SU", "OmegaPlus", "OmegaMinus", "Sz", "Alt", "Sym")
_EXCEPTIONAL = re.compile(r"^\s*(\d?)(E6|E7|E8|F4|G2|D4|B2|Ree|R)\b", re.I)


class UnsupportedGroup(ValueError):
    pass


# -- specs -------------------------------------------------------------------


@dataclass(frozen=True)
class GroupSpec:
    family: str
    n: int
    q: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        f, n, q = self.family, self.n, self.q
        if f in ("Alt", "Sym"):
            if n < 2:
                raise ValueError("need at least two points")
            return
        _factor_prime_power(q)
        if f == "Sz":
            a = q.bit_length() - 1
            if q != 2**a or a % 2 == 0 or a < 3:
                raise ValueError("Sz(q) needs q = 2^(2m+1) with m >= 1")
            return
        if n < 2:
            raise ValueError("dimension must be at least 2")
        if f == "Sp" and n % 2:
            raise ValueError("Sp needs even dimension")
        if f.startswith("Omega"):
            if q % 2:
                raise ValueError("orthogonal groups are only supported in characteristic 2")
            if n % 2 or n < 4:
                raise ValueError("orthogonal groups need even dimension at least 4")

    def __str__(self):
        f = self.family
        if f == "OmegaPlus":
            return f"O+({self.n},{self.q})"
        if f == "OmegaMinus":
            return f"O-({self.n},{self.q})"
        if f == "Sz":
            return f"Sz({self.q})"
        if f in ("Alt", "Sym"):
            return f"{f[0]}{self.n}"
        return f"{f}({self.n},{self.q})"

    @property
    def p(self):
        return _factor_prime_power(self.q)[0] if self.q else None

    @property
    def rank(self):
        """Number of hyperbolic pairs (Sp and orthogonal)."""
        return self.n // 2


_SPEC_RE = re.compile(r"^\s*(SL|Sp|SU|O\+|O-|Omega\+|Omega-)\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")
_SZ_RE = re.compile(r"^\s*Sz\s*\(\s*(\d+)\s*\)\s*$")
_PERM_RE = re.compile(r"^\s*(A|S|Alt|Sym)\s*\(?\s*(\d+)\s*\)?\s*$")


def parse_spec(text):
    if isinstance(text, GroupSpec):
        return text
    m = _SPEC_RE.match(text)
    if m:
        fam = {"O+": "OmegaPlus", "O-": "OmegaMinus", "Omega+": "OmegaPlus",
               "Omega-": "OmegaMinus"}.get(m.group(1), m.group(1))
        return GroupSpec(fam, int(m.group(2)), int(m.group(3)))
    m = _SZ_RE.match(text)
    if m:
        return GroupSpec("Sz", 4, int(m.group(1)))
    m = _PERM_RE.match(text)
    if m:
        return GroupSpec("Alt" if m.group(1).startswith("A") else "Sym", int(m.group(2)))
    if _EXCEPTIONAL.match(text):
        raise UnsupportedGroup(f"exceptional groups are not supported: {text!r}")
    raise ValueError(f"cannot parse group spec {text!r}")


# -- orders ------------------------------------------------------------------


def matrix_group_order(spec):
    """Order of the matrix group (before factoring out scalars)."""
    f, n, q = spec.family, spec.n, spec.q
    if f == "SL":
        return q ** (n * (n - 1) // 2) * prod(q**i - 1 for i in range(2, n + 1))
    if f == "Sp":
        m = n // 2
        return q ** (m * m) * prod(q ** (2 * i) - 1 for i in range(1, m + 1))
    if f == "SU":
        return q ** (n * (n - 1) // 2) * prod(q**i - (-1) ** i for i in range(2, n + 1))
    if f in ("OmegaPlus", "OmegaMinus"):
        m = n // 2
        eps = 1 if f == "OmegaPlus" else -1
        # characteristic 2: Omega has index 2 in O
        return q ** (m * (m - 1)) * (q**m - eps) * prod(q ** (2 * i) - 1 for i in range(1, m))
    if f == "Sz":
        return q * q * (q * q + 1) * (q - 1)
    if f == "Sym":
        return prod(range(1, n + 1))
    if f == "Alt":
        return prod(range(1, n + 1)) // 2
    raise ValueError(f)


def centre_order(spec):
    f, n, q = spec.family, spec.n, spec.q
    if f == "SL":
        return gcd(n, q - 1)
    if f == "SU":
        return gcd(n, q + 1)
    if f == "Sp":
        return gcd(2, q - 1)
    return 1


def simple_order(spec):
    return matrix_group_order(spec) // centre_order(spec)


# -- matrices ----------------------------------------------------------------


def _normalize(F, V):
    """Scale each nonzero row so its first nonzero entry is 1."""
    nz = V != 0
    first = np.argmax(nz, axis=1)
    lead = V[np.arange(len(V)), first]
    return F.mul(V, F.inv(lead)[:, None])


def _codes(q, V):
    w = q ** np.arange(V.shape[1], dtype=np.int64)
    return V @ w


def _field_basis(F):
    """An F_p-basis of F as field elements."""
    return [int(F.from_poly([0] * k + [1])) for k in range(F.a)]


def _elementary(F, n, i, j, c):
    A = np.eye(n, dtype=np.int64)
    A[i, j] = c
    return Matrix(F, A)


def _outer(F, u, v):
    return F.mul(np.asarray(u)[:, None], np.asarray(v)[None, :])


def _transvection(F, form, w, c):
    """v -> v + c phi(v, w) w  (unitary: phi(v, w) uses w^sigma)."""
    G = form.gram.a
    wc = F.pow(w, form.sigma) if form.kind == "hermitian" else w
    col = matmul(F, G, np.asarray(wc).reshape(-1, 1)).ravel()
    return Matrix(F, F.add(np.eye(len(w), dtype=np.int64), F.mul(c, _outer(F, col, w))))


def _siegel(F, form, u, w):
    """Siegel map v -> v + B(v,w)u + B(v,u)w + Q(w)B(v,u)u for singular u, B(u,w)=0."""
    G = form.gram.a
    gw = matmul(F, G, np.asarray(w).reshape(-1, 1)).ravel()
    gu = matmul(F, G, np.asarray(u).reshape(-1, 1)).ravel()
    qw = form_eval(form, w)
    A = np.eye(len(u), dtype=np.int64)
    A = F.add(A, _outer(F, gw, u))
    A = F.add(A, _outer(F, gu, w))
    A = F.add(A, F.mul(qw, _outer(F, gu, u)))
    return Matrix(F, A)


def suzuki_matrices(F):
    """Standard generators of Sz(q) < Sp_4(q): S(a, b), the torus and the antidiagonal."""
    q = F.q
    m = (F.a - 1) // 2
    th = 2 ** (m + 1)
    tm = 2**m

    def tpow(x, e):
        return int(F.pow(x, e))

    def S(a, b):
        r3 = [int(F.add(F.add(tpow(a, 2 + th), F.smul(a, b)), tpow(b, th))),
              int(F.add(tpow(a, 1 + th), b)), a, 1]
        return Matrix(F, [[1, 0, 0, 0], [a, 1, 0, 0], [b, tpow(a, th), 1, 0], r3])

    def M(lam):
        return Matrix(F, np.diag([tpow(lam, 1 + tm), tpow(lam, tm), tpow(lam, q - 1 - tm),
                                  tpow(lam, (q - 1) - (1 + tm) % (q - 1))]))

    T = Matrix(F, np.eye(4, dtype=np.int64)[::-1])
    basis = _field_basis(F)
    gens = [S(a, 0) for a in basis] + [S(0, b) for b in basis] + [M(F.gen), T]
    return gens, S, M, T


def suzuki_ovoid(F):
    """The q^2+1 points {<e_1>} u {<e_4 S(a,b)>}, computed from the formula."""
    _, S, _, _ = suzuki_matrices(F)
    pts = [[1, 0, 0, 0]]
    for a in range(F.q):
        for b in range(F.q):
            pts.append(list(S(a, b).a[3]))
    return np.array(pts, dtype=np.int64)


# -- the group object --------------------------------------------------------


class LieGroup(FiniteGroup):
    """A FiniteGroup built from matrices acting on an orbit of points."""

    def __init__(self, spec, F, form, matrices, action="points", seed=0, verify=False,
                 reduce_generators=True):
        self.spec = spec
        self.field = F
        self.form = form
        self.action = action
        self.dim = matrices[0].nrows
        self.matrix_gens = matrices
        self._build_domain(matrices)
        gens = [self.perm(M) for M in matrices]
        if self._faithful_check(matrices, gens):
            raise ValueError("action is not faithful on the chosen domain; use projective points")
        order = simple_order(spec) if action == "points" else matrix_group_order(spec)
        meta = {"spec": str(spec), "field_poly_table": POLY_TABLE_VERSION, "action": action}
        super().__init__(gens, len(self.points), order=None if verify else order, name=str(spec),
                         seed=seed, verify=True, meta=meta)
        self.expected_order = order
        if not verify and reduce_generators:
            self._reduce_generators(order)
        self._lift_setup()

    # domain

    def _build_domain(self, matrices):
        F, n = self.field, matrices[0].nrows
        q = F.q
        start = np.zeros((1, n), dtype=np.int64)
        start[0, 0] = 1
        norm = (lambda V: _normalize(F, V)) if self.action == "points" else (lambda V: V)
        seen = {1}
        pts = [start]
        frontier = start
        count = 1
        while len(frontier):
            new = []
            for M in matrices:
                Y = norm(vecmat(F, frontier, M.a))
                c = _codes(q, Y)
                _, first = np.unique(c, return_index=True)
                for k in first:
                    ck = int(c[k])
                    if ck not in seen:
                        seen.add(ck)
                        new.append(Y[k])
                count = len(seen)
                if count > DOMAIN_BOUND:
                    raise ValueError(f"point domain exceeds {DOMAIN_BOUND} points")
            frontier = np.array(new, dtype=np.int64).reshape(-1, n)
            pts.append(frontier)
        V = np.concatenate(pts)
        codes = _codes(q, V)
        order = np.argsort(codes)
        self.points = V[order]
        self.codes = codes[order]
        self._norm = norm

    def point_index(self, V):
        V = self._norm(np.atleast_2d(np.asarray(V, dtype=np.int64)))
        c = _codes(self.field.q, V)
        idx = np.searchsorted(self.codes, c)
        idx = np.minimum(idx, len(self.codes) - 1)
        if not np.array_equal(self.codes[idx], c):
            raise ValueError("vector is not in the point domain")
        return idx

    def perm(self, M):
        """Permutation induced by matrix M on the domain."""
        imgs = self.point_index(vecmat(self.field, self.points, M.a))
        return imgs.astype(P.dtype_for(len(self.points)))

    def _faithful_check(self, matrices, gens):
        # a nonscalar generator acting trivially would be invisible
        for M, g in zip(matrices, gens):
            if P.is_identity(g) and not M.is_scalar() and self.action == "points":
                return True
        return False

    def _reduce_generators(self, order, tries=6):
        """Replace the generators by two random elements generating the same group."""
        from .bsgs import BSGS
        if len(self.gens) <= 2:
            return
        full = self.bsgs
        rng = np.random.default_rng(self.seed)
        for _ in range(tries):
            a, b = full.random_element(rng), full.random_element(rng)
            B = BSGS([a, b], self.degree, rng=np.random.default_rng(self.seed), known_order=order,
                     verify=False, random_rounds=40)
            if B.order() == order:
                self.gens = [a, b]
                self._bsgs = B
                B.complete = True
                self.meta["generators"] = "two random elements"
                return
        self.meta["generators"] = "standard"

    # lifting permutations back to matrices

    def _lift_setup(self):
        F, n = self.field, self.dim
        rows, idx = [], []
        for i, v in enumerate(self.points):
            if rank(F, np.array(rows + [v])) == len(rows) + 1:
                rows.append(v)
                idx.append(i)
                if len(rows) == n:
                    break
        if len(rows) < n:
            raise ValueError("domain does not span the natural module")
        self._basis_idx = np.array(idx)
        self._basis = np.array(rows, dtype=np.int64)
        self._basis_inv = inverse(F, self._basis)
        rng = np.random.default_rng(12345)
        extra = rng.choice(len(self.points), size=min(len(self.points), n + 2), replace=False)
        extra = [int(e) for e in extra if int(e) not in idx][: n + 1]
        self._extra_idx = np.array(extra, dtype=np.int64)
        self._extra_coords = matmul(F, self.points[self._extra_idx], self._basis_inv)

    def to_matrix(self, g):
        """A matrix inducing the permutation g (unique up to scalars)."""
        F, n = self.field, self.dim
        W = self.points[g[self._basis_idx]]
        if self.action == "vectors" or F.q == 2:
            # over GF(2) a point is a single vector, so no scalars to recover
            return Matrix(F, matmul(F, self._basis_inv, W))
        Y = self.points[g[self._extra_idx]]
        k = len(self._extra_idx)
        E = np.zeros((n + k, n * k), dtype=np.int64)
        for j in range(k):
            blk = slice(j * n, (j + 1) * n)
            for i in range(n):
                E[i, blk] = F.mul(self._extra_coords[j, i], W[i])
            E[n + j, blk] = F.neg(Y[j])
        N = nullspace_left(F, E)
        if len(N) != 1:
            raise ValueError("could not lift permutation to a matrix")
        c = N[0, :n]
        M = matmul(F, self._basis_inv, F.mul(c[:, None], W))
        return Matrix(F, M)

    def involution_matrix(self, t):
        """Lift of an involution normalized so that M^2 = I (characteristic 2)."""
        M = self.to_matrix(t)
        M2 = M @ M
        if not M2.is_scalar():
            raise FieldError("element is not an involution modulo scalars")
        mu = int(M2.a[0, 0])
        if self.field.p == 2 and mu != 1:
            M = M.scale(int(self.field.inv(self.field.sqrt(mu))))
        return M


def _random_vectors(F, n, rng, count, cond=None):
    out = []
    while len(out) < count:
        v = rng.integers(F.q, size=n).astype(np.int64)
        if not v.any():
            continue
        if cond is None or cond(v):
            out.append(v)
    return out


def _generators(spec, F, form, rng):
    f, n = spec.family, spec.n
    basis = _field_basis(F)
    if f == "SL":
        gens = []
        for i in range(n - 1):
            for c in basis:
                gens.append(_elementary(F, n, i, i + 1, c))
                gens.append(_elementary(F, n, i + 1, i, c))
        if F.q > 3:
            d = np.ones(n, dtype=np.int64)
            d[0], d[1] = F.gen, int(F.inv(F.gen))
            gens.append(Matrix(F, np.diag(d)))
        return gens
    if f == "Sp":
        ws = [np.eye(n, dtype=np.int64)[i] for i in range(n)]
        ws += _random_vectors(F, n, rng, n + 2)
        return [_transvection(F, form, w, c) for w in ws for c in basis]
    if f == "SU":
        sub = form.sigma
        cs = [int(c) for c in F.trace_zero_elements(sub) if c]
        herm = lambda v: form_eval(form, v, v) == 0  # noqa: E731
        ws = [np.eye(n, dtype=np.int64)[i] for i in range(n) if herm(np.eye(n, dtype=np.int64)[i])]
        ws += _random_vectors(F, n, rng, 2 * n + 2, herm)
        gens = []
        for w in ws:
            for c in cs[: max(1, F.a)]:
                M = _transvection(F, form, w, c)
                if isometry_check(form, M):
                    gens.append(M)
        if F.q > 4 or n > 3:
            t = np.ones(n, dtype=np.int64)
            lam = int(F.gen)
            t[0] = lam
            t[-1] = int(F.inv(F.pow(lam, sub)))
            D = Matrix(F, np.diag(t))
            if isometry_check(form, D) and D.det() == 1:
                gens.append(D)
        return gens
    if f in ("OmegaPlus", "OmegaMinus"):
        sing = lambda v: form_eval(form, v) == 0  # noqa: E731
        us = _random_vectors(F, n, rng, 3 * n, sing)
        gens = []
        for u in us:
            for _ in range(3):
                w = _random_vectors(F, n, rng, 1, lambda v: form_eval(form, u, v) == 0)[0]
                M = _siegel(F, form, u, w)
                if not M.is_identity() and isometry_check(form, M):
                    gens.append(M)
        return gens
    if f == "Sz":
        return suzuki_matrices(F)[0]
    raise ValueError(f)


def _form_for(spec, F):
    f, n = spec.family, spec.n
    if f == "SL":
        return None
    if f in ("Sp", "Sz"):
        return alternating_form(F, n)
    if f == "SU":
        return hermitian_form(F, n)
    if f == "OmegaPlus":
        return quadratic_form(F, n, +1)
    if f == "OmegaMinus":
        return quadratic_form(F, n, -1)
    raise ValueError(f)


def make_group(spec, seed=0, action="points", verify=False, reduce_generators=True):
    """Construct the group named by ``spec`` (a GroupSpec or string like "Sp(6,2)")."""
    spec = parse_spec(spec)
    if spec.family in ("Alt", "Sym"):
        return _perm_family(spec, seed, verify)
    q = spec.q * spec.q if spec.family == "SU" else spec.q
    F = GF(q)
    form = _form_for(spec, F)
    rng = np.random.default_rng(seed)
    mats = _generators(spec, F, form, rng)
    if form is not None:
        for M in mats:
            if not isometry_check(form, M):
                raise AssertionError("generator does not preserve the form")
    return LieGroup(spec, F, form, mats, action=action, seed=seed, verify=verify,
                    reduce_generators=reduce_generators)


def _perm_family(spec, seed, verify):
    n = spec.n
    if spec.family == "Sym":
        gens = [P.from_cycles([[0, 1]], n), P.from_cycles([list(range(n))], n)]
    else:
        if n < 3:
            return FiniteGroup([], n, order=1, name=str(spec), seed=seed, meta={"spec": str(spec)})
        cyc = list(range(n)) if n % 2 else list(range(1, n))
        gens = [P.from_cycles([[0, 1, 2]], n), P.from_cycles([cyc], n)]
    G = FiniteGroup(gens, n, order=None if verify else matrix_group_order(spec), name=str(spec),
                    seed=seed, meta={"spec": str(spec)})
    G.spec = spec
    return G


# -- labels ------------------------------------------------------------------


@dataclass(frozen=True)
class InvolutionLabel:
    kind: str  # "jordan", "wv", "inv", "cycle", "eigen"
    a: int = 0
    b: int = 0
    c: int = 0
    tag: int = 0  # 1 or 2 for the split orthogonal class

    def __str__(self):
        s = _format_label(self)
        return s + (f"#{self.tag}" if self.tag else "")


def _term(name, k):
    return "" if k == 0 else (name if k == 1 else f"{name}^{k}")


def _format_label(L):
    if L.kind == "jordan":
        return " ".join(t for t in (_term("J2", L.a), _term("J1", L.b)) if t)
    if L.kind == "wv":
        return "+".join(t for t in (_term("W2", L.b), _term("V2", L.c), _term("W1", L.a)) if t)
    if L.kind == "cycle":
        return f"2^{L.a}"
    if L.kind == "eigen":
        return f"-1^{L.a}"
    return "inv"


_LABEL_TERM = re.compile(r"^(J1|J2|W1|W2|V2)(?:\^(\d+))?$")


def parse_label(text, spec=None):
    spec = parse_spec(spec) if isinstance(spec, str) else spec
    s = text.strip()
    tag = 0
    m = re.search(r"#([12])$", s)
    if m:
        tag = int(m.group(1))
        s = s[: m.start()].strip()
    s = s.replace("(", "").replace(")", "").replace("{", "").replace("}", "")
    if s == "inv":
        return InvolutionLabel("inv", tag=tag)
    m = re.match(r"^2\^(\d+)$", s)
    if m:
        return InvolutionLabel("cycle", a=int(m.group(1)))
    m = re.match(r"^-1\^(\d+)$", s)
    if m:
        return InvolutionLabel("eigen", a=int(m.group(1)))
    counts = {}
    for tok in re.split(r"[\s+]+", s):
        if not tok:
            continue
        mt = _LABEL_TERM.match(tok)
        if not mt:
            raise ValueError(f"cannot parse involution label {text!r}")
        counts[mt.group(1)] = counts.get(mt.group(1), 0) + int(mt.group(2) or 1)
    if not counts:
        raise ValueError(f"empty involution label {text!r}")
    jordan = {"J1", "J2"} & counts.keys()
    wv = {"W1", "W2", "V2"} & counts.keys()
    if jordan and wv:
        raise ValueError("label mixes Jordan and W/V notation")
    if jordan:
        a = counts.get("J2", 0)
        b = counts.get("J1")
        if b is None:
            b = spec.n - 2 * a if spec is not None else 0
        return InvolutionLabel("jordan", a=a, b=b, tag=tag)
    b, c = counts.get("W2", 0), counts.get("V2", 0)
    a = counts.get("W1")
    if a is None:
        a = spec.rank - 2 * b - c if spec is not None else 0
    return InvolutionLabel("wv", a=a, b=b, c=c, tag=tag)


def involution_labels(G):
    """All involution class labels of G, in a fixed order."""
    spec = G.spec
    f = spec.family
    if f in ("SL", "SU") and spec.p != 2:
        return _odd_labels(G)
    if f in ("SL", "SU"):
        return [InvolutionLabel("jordan", a=a, b=spec.n - 2 * a) for a in range(1, spec.n // 2 + 1)]
    if f == "Sz":
        return [InvolutionLabel("inv")]
    if f in ("Alt", "Sym"):
        ks = range(1, spec.n // 2 + 1)
        if f == "Alt":
            ks = [k for k in ks if k % 2 == 0]
        return [InvolutionLabel("cycle", a=k) for k in ks]
    m = spec.rank
    out = []
    if f == "Sp":
        for r in range(1, m + 1):
            if r % 2:
                out.append(InvolutionLabel("wv", a=m - r, b=(r - 1) // 2, c=1))
            else:
                out.append(InvolutionLabel("wv", a=m - r, b=r // 2, c=0))
                out.append(InvolutionLabel("wv", a=m - r, b=(r - 2) // 2, c=2))
        return out
    plus = f == "OmegaPlus"
    for r in range(2, m + 1, 2):
        b = r // 2
        if plus or 2 * b <= m - 1:
            if plus and r == m:
                out.append(InvolutionLabel("wv", a=0, b=b, c=0, tag=1))
                out.append(InvolutionLabel("wv", a=0, b=b, c=0, tag=2))
            else:
                out.append(InvolutionLabel("wv", a=m - r, b=b, c=0))
        out.append(InvolutionLabel("wv", a=m - r, b=b - 1, c=2))
    return out


def _odd_positions(spec, a):
    """Coordinates carrying -1: whole hyperbolic pairs, plus the middle one when n is odd."""
    n = spec.n
    if spec.family == "SL":
        return list(range(a))
    if a % 2 and n % 2 == 0:
        return None
    pos = [k for i in range(a // 2) for k in (i, n - 1 - i)]
    return pos + [n // 2] if a % 2 else pos


def _odd_diagonal(G, a):
    """A group element inducing -1 on an a-dimensional nondegenerate subspace, or None."""
    spec, F = G.spec, G.field
    pos = _odd_positions(spec, a)
    if pos is None:
        return None
    D = np.eye(spec.n, dtype=np.int64)
    D[pos, pos] = int(F.neg(1))
    sign = int(F.neg(1)) if a % 2 else 1
    scalars = [1] if G.action == "vectors" else range(1, F.q)
    for c in scalars:
        if int(F.mul(F.pow(c, spec.n), sign)) != 1:
            continue
        if spec.family == "SU" and int(F.mul(c, F.pow(c, G.form.sigma))) != 1:
            continue
        return Matrix(F, F.mul(c, D))
    return None


def _odd_labels(G):
    n = G.spec.n
    top = n if G.action == "vectors" else n // 2
    out = [InvolutionLabel("eigen", a=a) for a in range(1, top + 1)
           if _odd_diagonal(G, a) is not None]
    if G.action == "points" and n == 2 and G.field.q % 4 == 3:
        out.append(InvolutionLabel("inv"))
    return out


def long_root_label(G):
    spec = G.spec
    f = spec.family
    if f in ("SL", "SU"):
        return InvolutionLabel("jordan", a=1, b=spec.n - 2)
    if f == "Sp":
        return InvolutionLabel("wv", a=spec.rank - 1, b=0, c=1)
    if f.startswith("Omega"):
        return InvolutionLabel("wv", a=spec.rank - 2, b=1, c=0)
    if f == "Sz":
        return InvolutionLabel("inv")
    raise ValueError(f"no root subgroups for {spec}")


def _pair_swap(F, n, i):
    """Matrix exchanging e_i and f_i (pairs numbered from 1)."""
    A = np.eye(n, dtype=np.int64)
    e, f = i - 1, n - i
    A[[e, f]] = A[[f, e]]
    return A


def _wv_matrix(spec, F, L):
    n = spec.n
    m = spec.rank
    A = np.eye(n, dtype=np.int64)
    sp = spec.family == "Sp"
    minus = spec.family == "OmegaMinus"
    # W(2) blocks on pairs (1,2), (3,4), ...
    for k in range(L.b):
        i, j = 2 * k + 1, 2 * k + 2
        A[n - i, j - 1] = 1  # f_i -> f_i + e_j
        A[n - j, i - 1] = 1  # f_j -> f_j + e_i
    nxt = 2 * L.b + 1
    if sp:
        for k in range(L.c):
            i = nxt + k
            A[i - 1, n - i] = 1  # e_i -> e_i + f_i
    elif L.c:
        if L.c != 2:
            raise ValueError("orthogonal involutions need an even number of V(2) blocks")
        if minus:
            # V(2) + V_alpha(2), the second block on the anisotropic pair
            A = matmul(F, A, _pair_swap(F, n, nxt))
            A[n - m, m - 1] = 1  # f_m -> f_m + e_m
        else:
            for i in (nxt, nxt + 1):
                A = matmul(F, A, _pair_swap(F, n, i))
    M = Matrix(F, A)
    return M


def involution_matrix_rep(G, label):
    spec = G.spec
    F = G.field
    L = parse_label(label, spec) if isinstance(label, str) else label
    f = spec.family
    if L.kind == "jordan":
        if f not in ("SL", "SU"):
            raise ValueError(f"Jordan labels apply to SL and SU, not {spec}")
        if L.a == 0:
            raise ValueError("label describes the identity, not an involution")
        if 2 * L.a + L.b != spec.n or L.b < 0:
            raise ValueError(f"label {L} does not fit dimension {spec.n}")
        # in odd characteristic this is the unipotent element of order p
        A = np.eye(spec.n, dtype=np.int64)
        lam = 1
        if f == "SU":
            lam = min(int(c) for c in F.trace_zero_elements(G.form.sigma) if c)
        for i in range(L.a):
            if f == "SL":
                A[2 * i, 2 * i + 1] = 1
            else:
                A[i, spec.n - 1 - i] = lam  # e_i -> e_i + lam f_i with lam + lam^q = 0
        return Matrix(F, A)
    if L.kind == "wv":
        if f not in ("Sp", "OmegaPlus", "OmegaMinus"):
            raise ValueError(f"W/V labels apply to Sp and orthogonal groups, not {spec}")
        if L.b == 0 and L.c == 0:
            raise ValueError("label describes the identity, not an involution")
        if L.a < 0 or L.a + 2 * L.b + L.c != spec.rank or L.c > 2:
            raise ValueError(f"label {L} does not fit {spec}")
        if f != "Sp" and L.c == 1:
            raise ValueError("a single V(2) block only occurs in Sp")
        M = _wv_matrix(spec, F, L)
        if L.tag == 2:
            if not (f == "OmegaPlus" and L.c == 0 and 2 * L.b == spec.rank):
                raise ValueError("the #2 class only exists for split W(2)^b in O+")
            S = Matrix(F, _pair_swap(F, spec.n, spec.rank))
            M = S @ M @ S
        return M
    if L.kind == "eigen":
        if f not in ("SL", "SU") or spec.p == 2:
            raise ValueError("eigenspace labels apply to SL and SU in odd characteristic")
        M = _odd_diagonal(G, L.a) if 0 < L.a <= spec.n else None
        if M is None:
            raise ValueError(f"no involution with label {L} in {spec}")
        return M
    if L.kind == "inv" and f == "SL" and spec.n == 2 and spec.p != 2:
        return Matrix(F, np.array([[0, 1], [int(F.neg(1)), 0]], dtype=np.int64))
    if L.kind == "inv" and f == "Sz":
        _, S, _, _ = suzuki_matrices(F)
        return S(0, 1)
    raise ValueError(f"label {L} does not apply to {spec}")


def involution_rep(G, label):
    """Permutation of a representative involution with the given label."""
    spec = G.spec
    L = parse_label(label, spec) if isinstance(label, str) else label
    if spec.family in ("Alt", "Sym"):
        if L.kind != "cycle" and not (L.kind == "inv"):
            raise ValueError(f"label {L} does not apply to {spec}")
        k = L.a if L.kind == "cycle" else 2
        if k == 0 or 2 * k > spec.n or (spec.family == "Alt" and k % 2):
            raise ValueError(f"no involution with label {L} in {spec}")
        return P.from_cycles([[2 * i, 2 * i + 1] for i in range(k)], spec.n)
    M = involution_matrix_rep(G, L)
    if G.form is not None and not isometry_check(G.form, M):
        raise AssertionError("representative does not preserve the form")
    t = G.perm(M)
    if P.is_identity(t):
        raise ValueError("label describes the identity, not an involution")
    return t


# -- invariants --------------------------------------------------------------


@dataclass(frozen=True)
class ClassInvariant:
    family: str
    r: int
    beta: str = ""  # "a", "b" or "c" for Sp/orthogonal
    profile: tuple = ()
    extra: tuple = dc_field(default=())

    def label(self, spec=None):
        if self.profile:
            a = dict(self.profile).get(2, 0)
            b = dict(self.profile).get(1, 0)
            return str(InvolutionLabel("jordan", a=a, b=b))
        if self.beta:
            m = spec.rank if spec is not None else 0
            if self.beta == "a":
                b, c = self.r // 2, 0
            elif self.beta == "b":
                b, c = (self.r - 1) // 2, 1
            else:
                b, c = (self.r - 2) // 2, 2
            return str(InvolutionLabel("wv", a=max(m - self.r, 0), b=b, c=c))
        if self.family in ("Alt", "Sym"):
            return f"2^{self.r}"
        return "inv"


def class_invariant(G, t):
    if not P.is_identity(P.mul(t, t)):
        raise FieldError("class invariants are only defined for involutions")
    spec = G.spec
    f = spec.family
    if P.is_identity(t):
        if f in ("SL", "SU"):
            return ClassInvariant(f, 0, profile=((1, spec.n),))
        return ClassInvariant(f, 0, beta="a" if f not in ("Sz", "Alt", "Sym") else "")
    if f in ("Alt", "Sym"):
        return ClassInvariant(f, len(P.cycles(t)) and sum(1 for c in P.cycles(t) if len(c) == 2))
    if f == "Sz":
        return ClassInvariant(f, 2)
    if G.field.p != 2:
        return _odd_invariant(G, t)
    M = G.involution_matrix(t)
    if f in ("SL", "SU"):
        prof = tuple(jordan_profile(M))
        a = dict(prof).get(2, 0)
        return ClassInvariant(f, a, profile=prof)
    F = G.field
    N = M + Matrix.identity(F, M.nrows)
    r = N.rank()
    NG = matmul(F, N.a, G.form.gram.a)
    if not np.any(np.diag(NG)):
        beta = "a"
    else:
        beta = "b" if r % 2 else "c"
    return ClassInvariant(f, r, beta=beta)


def _odd_invariant(G, t):
    """Odd characteristic: the smaller eigenspace dimension of a lift squaring to 1.

    When no lift squares to the identity (M^2 a nonsquare scalar) the class
    is recorded as non-split.
    """
    F = G.field
    M = G.to_matrix(t)
    mu = int((M @ M).a[0, 0])
    roots = [c for c in range(1, F.q) if int(F.mul(F.mul(c, c), mu)) == 1]
    if not roots:
        return ClassInvariant(G.spec.family, 0, extra=("nonsplit",))
    n = M.nrows
    r = (M.scale(roots[0]) - Matrix.identity(F, n)).rank()
    if G.action == "vectors":
        return ClassInvariant(G.spec.family, r, extra=("eigen",))
    return ClassInvariant(G.spec.family, min(r, n - r), extra=("eigen",))


def same_class_fast(G, t, u):
    """True/False when invariants decide, None when an orbit test is needed."""
    it, iu = class_invariant(G, t), class_invariant(G, u)
    if it != iu:
        return False
    spec = G.spec
    if (spec.family == "OmegaPlus" and it.beta == "a" and it.r == spec.rank):
        return None
    return True


def invariant_key(G, t):
    """Hashable invariant usable for bucketing (None when it cannot decide)."""
    inv = class_invariant(G, t)
    if G.spec.family == "OmegaPlus" and inv.beta == "a" and inv.r == G.spec.rank:
        return None
    return inv


# -- subgroups ---------------------------------------------------------------


def _mat_subgroup(G, mats, order=None, name=None):
    gens = [G.perm(M) for M in mats]
    H = G.subgroup(gens, order=order, name=name)
    return H


def root_subgroup(G, kind="long"):
    spec = G.spec
    f = spec.family
    F = G.field
    n = spec.n
    if f == "Sz":
        if kind not in ("long", "centre"):
            raise ValueError("Sz only has the Sylow centre")
        _, S, _, _ = suzuki_matrices(F)
        return _mat_subgroup(G, [S(0, b) for b in _field_basis(F)], order=F.q, name="Z(P)")
    if kind == "short":
        if f != "Sp" or n != 4:
            raise ValueError("short root subgroups are only provided for Sp_4(q)")
        mats = []
        for c in _field_basis(F):
            A = np.eye(4, dtype=np.int64)
            A[3, 1] = c  # f_1 -> f_1 + c e_2
            A[2, 0] = c  # f_2 -> f_2 + c e_1
            mats.append(Matrix(F, A))
        return _mat_subgroup(G, mats, order=F.q, name="short root")
    if kind != "long":
        raise ValueError(f"unknown root subgroup kind {kind!r}")
    mats = []
    if f == "SL":
        for c in _field_basis(F):
            mats.append(_elementary(F, n, 0, 1, c))
        size = F.q
    elif f == "Sp":
        for c in _field_basis(F):
            mats.append(_elementary(F, n, 0, n - 1, c))
        size = F.q
    elif f == "SU":
        sub = G.form.sigma
        cs = [int(c) for c in F.trace_zero_elements(sub)]
        # an F_p-basis of the trace-zero set
        basis = _additive_basis(F, cs)
        for c in basis:
            mats.append(_elementary(F, n, 0, n - 1, c))
        size = len(cs)
    elif f.startswith("Omega"):
        for c in _field_basis(F):
            A = np.eye(n, dtype=np.int64)
            A[n - 1, 1] = c
            A[n - 2, 0] = c
            mats.append(Matrix(F, A))
        size = F.q
    else:
        raise ValueError(f"no root subgroups for {spec}")
    return _mat_subgroup(G, mats, order=size, name="long root")


def _additive_basis(F, elems):
    basis = []
    span = {0}
    for x in elems:
        if x in span:
            continue
        basis.append(x)
        new = set(span)
        for s in span:
            y = s
            for _ in range(F.p - 1):
                y = int(F.add(y, x))
                new.add(y)
        span = new
    return basis


def sylow_subgroup(G, p):
    """A Sylow p-subgroup; defining characteristic for SL/Sz, brute force for small groups."""
    spec = getattr(G, "spec", None)
    if spec is not None and spec.family in ("SL", "Sz") and p == spec.p:
        F = G.field
        if spec.family == "Sz":
            _, S, _, _ = suzuki_matrices(F)
            basis = _field_basis(F)
            mats = [S(a, 0) for a in basis] + [S(0, b) for b in basis]
            return _mat_subgroup(G, mats, order=F.q**2, name=f"Sylow {p}")
        n = spec.n
        mats = [_elementary(F, n, i, i + 1, c) for i in range(n - 1) for c in _field_basis(F)]
        return _mat_subgroup(G, mats, order=F.q ** (n * (n - 1) // 2), name=f"Sylow {p}")
    return sylow_small(G, p)


def sylow_small(G, p, bound=10**5):
    n = G.order()
    target = 1
    while n % p == 0:
        n //= p
        target *= p
    if target == 1:
        return G.subgroup([])
    E = G.elements(bound)
    orders = P.orders_batch(E)
    ppow = [E[i] for i in range(len(E)) if orders[i] > 1 and _is_power(orders[i], p)]
    H = G.subgroup([ppow[0]])
    while H.order() < target:
        hg = H.gens
        grown = False
        for x in ppow:
            if H.contains(x):
                continue
            xi = P.inv(x)
            if all(H.contains(x[h[xi]]) for h in hg):
                H = G.subgroup(list(H.gens) + [x])
                grown = True
                break
        if not grown:
            raise AssertionError("Sylow search stalled")
    return H


def _is_power(k, p):
    while k % p == 0:
        k //= p
    return k == 1


def set_stabilizer(G, points, budget=10**6):
    """Setwise stabilizer of a point set, via the orbit of the set and Schreier generators."""
    start = tuple(sorted(int(x) for x in points))
    index = {start: 0}
    sets = [start]
    conj = [G.identity()]
    k = 0
    while k < len(sets):
        S = np.array(sets[k])
        for g in G.gens:
            T = tuple(sorted(g[S].tolist()))
            if T not in index:
                index[T] = len(sets)
                sets.append(T)
                conj.append(g[conj[k]])
                if len(sets) > budget:
                    raise ValueError("set orbit exceeds the budget")
        k += 1
    target = G.order() // len(sets)
    rng = np.random.default_rng(G.seed)
    H = None
    while H is None or H.order() < target:
        i = int(rng.integers(len(sets)))
        g = G.gens[int(rng.integers(len(G.gens)))]
        T = tuple(sorted(g[np.array(sets[i])].tolist()))
        w = P.inv(conj[index[T]])[g[conj[i]]]
        if P.is_identity(w):
            continue
        H = G.subgroup([w] if H is None else list(H.gens) + [w], order=target)
    return H


def subspace_points(G, vectors):
    """Indices of the domain points lying in the span of the given vectors."""
    F = G.field
    B = np.array(vectors, dtype=np.int64)
    r = rank(F, B)
    out = []
    for i, v in enumerate(G.points):
        if rank(F, np.vstack([B, v])) == r:
            out.append(i)
    return out


def subspace_stabilizer(G, vectors):
    return set_stabilizer(G, subspace_points(G, vectors))


def quadratic_check(G):
    """Q is preserved by every matrix generator (orthogonal groups)."""
    if G.form is None or G.form.quad is None:
        return True
    V = G.points
    for M in G.matrix_gens:
        if not np.array_equal(quadratic_values(G.form, vecmat(G.field, V, M.a)),
                              quadratic_values(G.form, V)):
            return False
    return True


def split_parity(G, t):
    """Which family of maximal totally singular subspaces contains [V, t].

    Only meaningful for the split W(2)^b classes of O+; two such spaces lie
    in the same family iff their intersection has dimension congruent to the
    rank mod 2, measured here against <e_1, ..., e_m>.
    """
    F = G.field
    m = G.spec.rank
    M = G.involution_matrix(t)
    N = (M + Matrix.identity(F, M.nrows)).a
    U0 = np.eye(G.spec.n, dtype=np.int64)[:m]
    r = rank(F, N)
    meet = r + m - rank(F, np.vstack([N, U0]))
    return (m - meet) % 2


def class_key(G, t):
    """Complete class invariant for involutions of a catalog group."""
    inv = class_invariant(G, t)
    spec = G.spec
    if spec.family == "OmegaPlus" and inv.beta == "a" and inv.r == spec.rank:
        return (inv, split_parity(G, t))
    return (inv, None)
