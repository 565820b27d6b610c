"""
Dense matrices over GF(q).

Entries are stored as an immutable int64 numpy array of integer-coded field
elements.  Over GF(2) rank computations go through bit-packed rows (one
python int per row, XOR row operations).
"""

import re

import numpy as np

from .fields import FieldError, parse_element


class Matrix:
    """Immutable matrix over a finite field, vectors act on the left (v @ M)."""

    __slots__ = ("field", "a", "_key")

    def __init__(self, field, entries):
        a = np.array(entries, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError("matrix entries must be two dimensional")
        if a.size and (a.min() < 0 or a.max() >= field.q):
            raise ValueError("entry outside the field")
        a.setflags(write=False)
        self.field = field
        self.a = a
        self._key = None

    @classmethod
    def identity(cls, field, n):
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, field, n, m=None):
        return cls(field, np.zeros((n, n if m is None else m), dtype=np.int64))

    @property
    def shape(self):
        return self.a.shape

    @property
    def nrows(self):
        return self.a.shape[0]

    @property
    def ncols(self):
        return self.a.shape[1]

    def __repr__(self):
        rows = ", ".join(
            "[" + ",".join(self.field.format(x) for x in row) + "]" for row in self.a
        )
        return f"Matrix({self.field}, [{rows}])"

    def encode(self):
        """Canonical bytes: dimensions then row-major entries."""
        if self._key is None:
            n, m = self.a.shape
            dt = np.uint8 if self.field.q <= 256 else np.uint16
            self._key = n.to_bytes(2, "little") + m.to_bytes(2, "little") + self.a.astype(dt).tobytes()
        return self._key

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.field == other.field and self.encode() == other.encode()

    def __hash__(self):
        return hash(self.encode())

    def __getitem__(self, idx):
        return self.a[idx]

    # -- arithmetic -------------------------------------------------------

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"dimension mismatch {self.shape} @ {other.shape}")
            return Matrix(self.field, matmul(self.field, self.a, other.a))
        return NotImplemented

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("dimension mismatch in addition")
        return Matrix(self.field, self.field.add(self.a, other.a))

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ValueError("dimension mismatch in subtraction")
        return Matrix(self.field, self.field.sub(self.a, other.a))

    def scale(self, c):
        return Matrix(self.field, self.field.mul(self.a, c))

    @property
    def T(self):
        return Matrix(self.field, self.a.T)

    def frobenius(self, k=1):
        return Matrix(self.field, self.field.frobenius(self.a, k))

    def power_map(self, e):
        """Apply x -> x^e entrywise (field automorphisms for e = p^k)."""
        return Matrix(self.field, self.field.pow(self.a, e))

    def inverse(self):
        n, m = self.shape
        if n != m:
            raise ValueError("inverse of a non-square matrix")
        return Matrix(self.field, inverse(self.field, self.a))

    def rank(self):
        return rank(self.field, self.a)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = Matrix.identity(self.field, self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_identity(self):
        return self.shape[0] == self.shape[1] and np.array_equal(self.a, np.eye(self.nrows, dtype=np.int64))

    def is_scalar(self):
        d = self.a[0, 0]
        return d != 0 and np.array_equal(self.a, d * np.eye(self.nrows, dtype=np.int64))

    def det(self):
        return determinant(self.field, self.a)


def matmul(F, A, B):
    if F.a == 1:
        return (A @ B) % F.p
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(A.shape[1]):
        out = F.add(out, F.mul(A[:, k : k + 1], B[k : k + 1, :]))
    return out


def vecmat(F, V, M):
    """Rows of V times M, for a batch of row vectors V (N x n)."""
    return matmul(F, np.asarray(V, dtype=np.int64), np.asarray(M, dtype=np.int64))


def _pack_gf2(A):
    return [int("".join(str(int(b)) for b in row[::-1]), 2) if len(row) else 0 for row in A]


def gf2_rank(rows):
    """Rank of bit-packed GF(2) rows (python ints)."""
    rows = [r for r in rows if r]
    rank = 0
    while rows:
        pivot = rows.pop()
        if not pivot:
            continue
        rank += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
        rows = [r for r in rows if r]
    return rank


def row_reduce(F, A):
    """Reduced row echelon form; returns (R, pivot columns)."""
    R = [list(map(int, row)) for row in np.asarray(A)]
    n = len(R)
    m = len(R[0]) if n else 0
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if R[i][c]), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = F.sinv(R[r][c])
        R[r] = [F.smul(x, inv) for x in R[r]]
        for i in range(n):
            if i != r and R[i][c]:
                f = R[i][c]
                row_r = R[r]
                R[i] = [int(F.add(x, F.neg(F.smul(f, y)))) if y else x for x, y in zip(R[i], row_r)]
        pivots.append(c)
        r += 1
        if r == n:
            break
    return np.array(R, dtype=np.int64).reshape(n, m), pivots


def rank(F, A):
    A = np.asarray(A)
    if A.size == 0:
        return 0
    if F.q == 2:
        return gf2_rank(_pack_gf2(A))
    return len(row_reduce(F, A)[1])


def inverse(F, A):
    n = A.shape[0]
    aug = np.concatenate([np.asarray(A, dtype=np.int64), np.eye(n, dtype=np.int64)], axis=1)
    R, pivots = row_reduce(F, aug)
    if pivots[:n] != list(range(n)):
        raise FieldError("singular matrix has no inverse")
    return R[:, n:]


def determinant(F, A):
    R = [list(map(int, row)) for row in np.asarray(A)]
    n = len(R)
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if R[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            R[c], R[piv] = R[piv], R[c]
            det = int(F.neg(det))
        det = F.smul(det, R[c][c])
        inv = F.sinv(R[c][c])
        for i in range(c + 1, n):
            if R[i][c]:
                f = F.smul(R[i][c], inv)
                R[i] = [int(F.sub(x, F.smul(f, y))) for x, y in zip(R[i], R[c])]
    return det


def solve_left(F, B, W):
    """Coordinates X with X @ B = W (B square invertible, W rows)."""
    return matmul(F, np.atleast_2d(W), inverse(F, np.asarray(B)))


def nullspace_left(F, A):
    """Basis (rows) of {v : v @ A = 0}."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    R, pivots = row_reduce(F, A.T)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        v = np.zeros(n, dtype=np.int64)
        v[fcol] = 1
        for row, pc in enumerate(pivots):
            v[pc] = F.neg(R[row, fcol])
        basis.append(v)
    return np.array(basis, dtype=np.int64).reshape(len(basis), n)


def jordan_profile(t):
    """Jordan block sizes of a unipotent matrix as [(size, multiplicity), ...].

    Sizes are listed in decreasing order; for an involution in characteristic
    two this is [(2, a), (1, b)] with a = rank(t - 1) and 2a + b = n.
    """
    F = t.field
    n = t.nrows
    N = t - Matrix.identity(F, n)
    ranks = [n]
    P = N
    for _ in range(n):
        r = P.rank()
        ranks.append(r)
        if r == 0:
            break
        P = P @ N
    if ranks[-1] != 0:
        raise FieldError("matrix is not unipotent")
    # at_least[k] = number of blocks of size >= k
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    profile = []
    for k in range(len(at_least), 0, -1):
        exact = at_least[k - 1] - (at_least[k] if k < len(at_least) else 0)
        if exact:
            profile.append((k, exact))
    return profile


def format_profile(profile):
    return " ".join(f"J{size}^{mult}" for size, mult in profile)


def block_diag(F, blocks):
    n = sum(b.nrows for b in blocks)
    out = np.zeros((n, n), dtype=np.int64)
    i = 0
    for b in blocks:
        k = b.nrows
        out[i : i + k, i : i + k] = b.a
        i += k
    return Matrix(F, out)


_ROW_SPLIT = re.compile(r"\]\s*,\s*\[")


def parse_matrix(field, text):
    """Parse "[[1,0],[x,1]]" with entries written as polynomials in x."""
    s = text.strip()
    if not (s.startswith("[[") and s.endswith("]]")):
        raise ValueError(f"cannot parse matrix literal {text!r}")
    rows = _ROW_SPLIT.split(s[2:-2])
    entries = [[parse_element(field, e) for e in row.split(",")] for row in rows]
    if len({len(r) for r in entries}) != 1:
        raise ValueError("ragged matrix literal")
    return Matrix(field, entries)


def matrix_ops(op, *operands):
    """Dispatch helper: op is one of mul, inverse, rank, transpose."""
    if op == "mul":
        A, B = operands
        return A @ B
    if op == "inverse":
        (A,) = operands
        return A.inverse()
    if op == "rank":
        (A,) = operands
        return A.rank()
    if op == "transpose":
        (A,) = operands
        return A.T
    raise ValueError(f"unknown matrix operation {op!r}")
