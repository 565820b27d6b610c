"""
Permutations as numpy image arrays.

A permutation g of {0, ..., d-1} is stored as an array ``img`` with
``img[x] = x^g``.  Groups act on the right: the product ``g*h`` applies g
first, so ``mul(g, h) = h[g]``, and conjugation is ``x^g = g^-1 x g``.
"""

from math import gcd

import numpy as np


def dtype_for(degree):
    if degree <= 256:
        return np.uint8
    if degree <= 65536:
        return np.uint16
    return np.int32


def identity(degree):
    return np.arange(degree, dtype=dtype_for(degree))


def as_perm(images, degree=None):
    a = np.asarray(images)
    d = len(a) if degree is None else degree
    if len(a) != d:
        raise ValueError("image list has the wrong degree")
    if not np.array_equal(np.sort(a), np.arange(d)):
        raise ValueError("not a permutation")
    return a.astype(dtype_for(d))


def mul(g, h):
    """g then h."""
    return h[g]


def inv(g):
    out = np.empty_like(g)
    out[g] = np.arange(len(g), dtype=g.dtype)
    return out


def conj(x, g):
    """x^g = g^-1 x g."""
    return g[x[inv(g)]]


def conj_batch(X, g, ginv=None):
    """Conjugate every row of X by g."""
    if ginv is None:
        ginv = inv(g)
    return g[X[:, ginv]]


def mul_batch(X, g):
    """Every row of X followed by g."""
    return g[X]


def power(g, k):
    if k < 0:
        g = inv(g)
        k = -k
    result = np.arange(len(g), dtype=g.dtype)
    base = g
    while k:
        if k & 1:
            result = base[result]
        base = base[base]
        k >>= 1
    return result


def is_identity(g):
    return bool(np.array_equal(g, np.arange(len(g))))


def equal(g, h):
    return bool(np.array_equal(g, h))


def key(g):
    return g.tobytes()


def cycles(g):
    d = len(g)
    seen = np.zeros(d, dtype=bool)
    out = []
    gl = g.tolist()
    for start in range(d):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        x = gl[start]
        while x != start:
            cyc.append(x)
            seen[x] = True
            x = gl[x]
        out.append(cyc)
    return out


def order(g):
    result = 1
    for c in cycles(g):
        result = result * len(c) // gcd(result, len(c))
    return result


def orders_batch(X, max_order=None):
    """Element orders of all rows, by repeated composition (small orders)."""
    n, d = X.shape
    ident = np.arange(d)
    out = np.zeros(n, dtype=np.int64)
    cur = X.copy()
    k = 1
    limit = max_order or d * d
    while k <= limit:
        done = (out == 0) & np.all(cur == ident, axis=1)
        out[done] = k
        if np.all(out > 0):
            break
        cur = np.take_along_axis(X, cur.astype(np.int64), axis=1)
        k += 1
    return out


def involution_mask(X):
    """Rows of X that square to the identity but are not the identity."""
    d = X.shape[1]
    ident = np.arange(d)
    sq = np.take_along_axis(X, X.astype(np.int64), axis=1)
    return np.all(sq == ident, axis=1) & ~np.all(X == ident, axis=1)


def order_p_mask(X, p):
    """Rows of X of order exactly p (p prime)."""
    if p == 2:
        return involution_mask(X)
    d = X.shape[1]
    ident = np.arange(d)
    cur = X.astype(np.int64)
    for _ in range(p - 1):
        cur = np.take_along_axis(X, cur, axis=1)
    return np.all(cur == ident, axis=1) & ~np.all(X == ident, axis=1)


def fixed_points(g):
    return np.flatnonzero(g == np.arange(len(g)))


def first_moved_point(g):
    moved = np.flatnonzero(g != np.arange(len(g)))
    return int(moved[0]) if len(moved) else None


def from_cycles(cyc, degree, one_based=False):
    img = list(range(degree))
    for c in cyc:
        c = [x - 1 for x in c] if one_based else list(c)
        for i, x in enumerate(c):
            img[x] = c[(i + 1) % len(c)]
    return as_perm(img)


def cycle_string(g, one_based=True):
    parts = []
    for c in cycles(g):
        if len(c) > 1:
            parts.append("(" + ",".join(str(x + 1 if one_based else x) for x in c) + ")")
    return "".join(parts) if parts else "()"


def parse_cycles(text, degree):
    """Parse "(1,2)(3,4)" (1-based points)."""
    cyc = []
    for chunk in text.replace(" ", "").split(")"):
        if not chunk:
            continue
        if not chunk.startswith("("):
            raise ValueError(f"cannot parse cycle notation {text!r}")
        body = chunk[1:]
        if body:
            cyc.append([int(x) for x in body.split(",")])
    return from_cycles(cyc, degree, one_based=True)
