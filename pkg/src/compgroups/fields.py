"""
Small finite fields GF(p^a).

Elements are plain integers 0 <= x < q holding the polynomial-basis
coefficients as base-p digits (digit i is the coefficient of x^i), so that
numpy integer arrays of field elements can be pushed through the table based
arithmetic below without any boxing.  The generator symbol ``x`` is a root of
the defining polynomial, which is always primitive.
"""

import re
from functools import lru_cache

import numpy as np

# Lexicographically least primitive polynomial for each (p, a): the first
# monic primitive polynomial when c_0 + c_1 p + ... + c_{a-1} p^{a-1} is
# counted upward.  Coefficients are listed from the constant term up.
POLY_TABLE_VERSION = "lexmin-primitive-1"
PRIMITIVE_POLYNOMIALS = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 0, 0, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (2, 9): (1, 0, 0, 0, 1, 0, 0, 0, 0, 1),
    (2, 10): (1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1),
    (2, 11): (1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 12): (1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 1, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 1, 0, 0, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (3, 6): (2, 1, 0, 0, 0, 0, 1),
    (3, 7): (1, 2, 1, 0, 0, 0, 0, 1),
    (3, 8): (2, 0, 0, 1, 0, 0, 0, 0, 1),
    (3, 9): (1, 0, 1, 2, 0, 0, 0, 0, 0, 1),
    (3, 10): (2, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1),
    (3, 11): (1, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (3, 12): (2, 2, 2, 1, 2, 0, 0, 0, 0, 0, 0, 0, 1),
    (5, 1): (2, 1),
    (5, 2): (2, 1, 1),
    (5, 3): (2, 3, 0, 1),
    (5, 4): (2, 2, 1, 0, 1),
    (5, 5): (2, 4, 0, 0, 0, 1),
    (5, 6): (2, 1, 0, 0, 0, 0, 1),
    (5, 7): (2, 3, 0, 0, 0, 0, 0, 1),
    (5, 8): (3, 2, 1, 0, 0, 0, 0, 0, 1),
    (5, 9): (3, 2, 1, 0, 0, 0, 0, 0, 0, 1),
    (5, 10): (3, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1),
    (5, 11): (2, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (5, 12): (3, 2, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (7, 1): (2, 1),
    (7, 2): (3, 1, 1),
    (7, 3): (2, 3, 0, 1),
    (7, 4): (5, 3, 1, 0, 1),
    (7, 5): (4, 1, 0, 0, 0, 1),
    (7, 6): (5, 1, 3, 0, 0, 0, 1),
    (7, 7): (2, 6, 0, 0, 0, 0, 0, 1),
    (7, 8): (3, 1, 0, 0, 0, 0, 0, 0, 1),
    (7, 9): (2, 1, 1, 0, 0, 0, 0, 0, 0, 1),
    (7, 10): (5, 1, 5, 0, 0, 0, 0, 0, 0, 0, 1),
    (7, 11): (4, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (7, 12): (3, 2, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
}

# exp/log tables are built eagerly, which bounds the usable field size
FIELD_BOUND = 1 << 20

# additive tables are q*q entries; beyond this we add digit by digit
_ADD_TABLE_LIMIT = 2401


class FieldError(ArithmeticError):
    """Domain error in field arithmetic (e.g. inverting zero)."""


def _factor_prime_power(q):
    for p in range(2, q + 1):
        if q % p == 0:
            a = 0
            while q % p == 0:
                q //= p
                a += 1
            if q != 1:
                raise ValueError("not a prime power")
            return p, a
    raise ValueError("not a prime power")


class Field:
    """The field GF(p^a) with integer-coded elements.

    All arithmetic methods accept python ints or numpy integer arrays and
    broadcast like numpy ufuncs.
    """

    def __init__(self, p, a=1):
        if (p, a) not in PRIMITIVE_POLYNOMIALS:
            raise ValueError(f"GF({p},{a}) is outside the polynomial table")
        if p**a > FIELD_BOUND:
            raise ValueError(f"GF({p}^{a}) exceeds the table bound of {FIELD_BOUND} elements")
        self.p = p
        self.a = a
        self.q = p ** a
        self.poly = PRIMITIVE_POLYNOMIALS[p, a]
        self._build_tables()

    def _build_tables(self):
        p, a, q = self.p, self.a, self.q
        weights = p ** np.arange(a)
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        digits = [1] + [0] * (a - 1)
        for k in range(q - 1):
            val = int(np.dot(digits, weights))
            exp[k] = val
            log[val] = k
            # multiply by the root x of poly
            if a == 1:
                digits = [(digits[0] * (-self.poly[0])) % p]
            else:
                top = digits[-1]
                digits = [0] + digits[:-1]
                digits = [(d - top * c) % p for d, c in zip(digits, self.poly[:a])]
        exp[q - 1:] = exp[: q - 1]
        if np.any(log[1:] < 0):
            raise FieldError("defining polynomial is not primitive")
        self.exp = exp
        self.log = log
        # python-int lookups are faster than numpy scalars in tight loops
        self._exp_list = exp.tolist()
        self._log_list = log.tolist()
        self.gen = int(exp[1]) if q > 2 else 1
        self._neg = np.array([self._neg_digits(x) for x in range(q)], dtype=np.int64)
        self._add_table = None
        if p != 2 and q <= _ADD_TABLE_LIMIT:
            xs = np.arange(q)
            self._add_table = self._add_digits(xs[:, None], xs[None, :])

    def _neg_digits(self, x):
        out, w = 0, 1
        for _ in range(self.a):
            out += ((-(x % self.p)) % self.p) * w
            x //= self.p
            w *= self.p
        return out

    def _add_digits(self, x, y):
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        out = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
        w = 1
        for _ in range(self.a):
            out += ((x % self.p + y % self.p) % self.p) * w
            x = x // self.p
            y = y // self.p
            w *= self.p
        return out

    def __repr__(self):
        return f"GF({self.p},{self.a})"

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.a) == (other.p, other.a)

    def __hash__(self):
        return hash((self.p, self.a))

    def __iter__(self):
        return iter(range(self.q))

    @property
    def elements(self):
        return np.arange(self.q, dtype=np.int64)

    @property
    def polynomial_string(self):
        return format_poly(self.poly)

    # -- arithmetic -------------------------------------------------------

    def add(self, x, y):
        if self.p == 2:
            return np.bitwise_xor(x, y)
        if self.a == 1:
            return (np.asarray(x) + y) % self.p
        if self._add_table is not None:
            return self._add_table[x, y]
        return self._add_digits(x, y)

    def neg(self, x):
        if self.p == 2:
            return x
        return self._neg[x]

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        if self.a == 1:
            return (np.asarray(x) * y) % self.p
        x = np.asarray(x)
        y = np.asarray(y)
        res = self.exp[self.log[x] + self.log[y]]
        return np.where((x == 0) | (y == 0), 0, res)

    def inv(self, x):
        x = np.asarray(x)
        if np.any(x == 0):
            raise FieldError("inverse of zero")
        return self.exp[(self.q - 1 - self.log[x]) % (self.q - 1)]

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def pow(self, x, k):
        x = np.asarray(x)
        if k == 0:
            return np.ones_like(x)
        if k < 0:
            x = self.inv(x)
            k = -k
        res = self.exp[(self.log[x] * k) % (self.q - 1)]
        return np.where(x == 0, 0, res)

    def frobenius(self, x, k=1):
        """x -> x^(p^k)."""
        return self.pow(x, self.p ** (k % self.a) if self.a > 1 else 1)

    def sqrt(self, x):
        """Square root in characteristic 2 (inverse Frobenius)."""
        if self.p != 2:
            raise FieldError("sqrt only implemented for characteristic 2")
        return self.pow(x, self.q // 2) if self.q > 2 else x

    def order(self, x):
        """Multiplicative order of a nonzero element."""
        x = int(x)
        if x == 0:
            raise FieldError("zero has no multiplicative order")
        k = self._log_list[x]
        from math import gcd
        return (self.q - 1) // gcd(k, self.q - 1)

    # scalar fast paths used by the row reducers
    def smul(self, x, y):
        if x == 0 or y == 0:
            return 0
        if self.a == 1:
            return (x * y) % self.p
        return self._exp_list[self._log_list[x] + self._log_list[y]]

    def sinv(self, x):
        if x == 0:
            raise FieldError("inverse of zero")
        if self.a == 1:
            return pow(x, self.p - 2, self.p)
        return self._exp_list[(self.q - 1 - self._log_list[x]) % (self.q - 1)]

    # -- conversions ------------------------------------------------------

    def digits(self, x):
        x = int(x)
        out = []
        for _ in range(self.a):
            out.append(x % self.p)
            x //= self.p
        return out

    def from_poly(self, coeffs):
        """Element sum c_k x^k for integer coefficients c_k."""
        acc = 0
        xk = 1
        for c in coeffs:
            c = int(c) % self.p
            if c:
                acc = int(self.add(acc, self.smul(self._int(c), xk)))
            xk = self.smul(xk, self.gen)
        return acc

    def _int(self, c):
        # integer c embedded via the prime subfield (digit 0)
        return c % self.p

    def format(self, x):
        x = int(x)
        if self.a == 1:
            return str(x)
        # express in the generator x: polynomial basis coefficients
        return format_poly(self.digits(x), zero="0")

    def trace_zero_elements(self, sub_q):
        """Elements c with c + c^sub_q = 0 (sub_q^2 == q)."""
        xs = self.elements
        return xs[self.add(xs, self.pow(xs, sub_q)) == 0]

    def subfield_basis(self):
        """An F_p-basis of the additive group: 1, x, ..., x^(a-1)."""
        return [self.p ** k for k in range(self.a)] if self.a > 1 else [1]


def format_poly(coeffs, zero="0"):
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = int(coeffs[k])
        if c == 0:
            continue
        if k == 0:
            terms.append(str(c))
        else:
            mono = "x" if k == 1 else f"x^{k}"
            terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(terms) if terms else zero


@lru_cache(maxsize=None)
def GF(q_or_p, a=None):
    """Cached field constructor: GF(8), GF(2, 3) and GF(9) all work."""
    if a is None:
        p, a = _factor_prime_power(q_or_p)
    else:
        p = q_or_p
    return Field(p, a)


_FIELD_RE = re.compile(r"^\s*GF\(\s*(\d+)\s*(?:,\s*(\d+)\s*)?\)\s*$")


def parse_field(text):
    """Parse "GF(2,3)" (characteristic, degree) or "GF(8)" (order)."""
    m = _FIELD_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse field literal {text!r}")
    if m.group(2) is None:
        return GF(int(m.group(1)))
    return GF(int(m.group(1)), int(m.group(2)))


_TERM_RE = re.compile(r"^([+-]?\d*)\*?(x(?:\^(\d+))?)?$")


def parse_element(field, text):
    """Parse a polynomial in the generator ``x`` such as "x^2+x+1" or "2x"."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty field element")
    s = s.replace("-", "+-")
    coeffs = {}
    for term in s.split("+"):
        if not term:
            continue
        m = _TERM_RE.match(term)
        if not m:
            raise ValueError(f"bad term {term!r} in {text!r}")
        cstr, xpart, kstr = m.groups()
        if cstr in ("", "+"):
            c = 1
        elif cstr == "-":
            c = -1
        else:
            c = int(cstr)
        k = 0 if not xpart else (int(kstr) if kstr else 1)
        if not xpart and cstr in ("", "+", "-"):
            raise ValueError(f"bad term {term!r}")
        coeffs[k] = coeffs.get(k, 0) + c
    top = max(coeffs)
    return field.from_poly([coeffs.get(k, 0) for k in range(top + 1)])


def field_arith(field, op, *operands):
    """Dispatch helper: op is one of add, mul, inv, pow, frobenius."""
    if op == "add":
        x, y = operands
        return int(field.add(x, y))
    if op == "mul":
        x, y = operands
        return int(field.mul(x, y))
    if op == "inv":
        (x,) = operands
        return int(field.inv(x))
    if op == "pow":
        x, k = operands
        return int(field.pow(x, k))
    if op == "frobenius":
        (x,) = operands
        return int(field.frobenius(x))
    raise ValueError(f"unknown field operation {op!r}")
