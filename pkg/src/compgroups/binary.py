"""
Binary actions: tuple relatedness, bounded searches for violations, the
commuting-pair witness, fixity, the stabilizer filter and the TI triple
criterion.

An action is a FiniteGroup on its points.  Coset actions are built
explicitly from (G, H) with canonical coset representatives.
"""

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from . import perm as P
from .bsgs import BSGS, BudgetExceeded
from .components import (ClassSpec, classes_of_order, delta_infinity, involution_classes,
                         transport_group)
from .group import FiniteGroup

DEGREE_BOUND = 10**6


class UsageError(ValueError):
    pass


# -- coset actions ---------------------------------------------------------------


class CosetAction:
    """G acting on right cosets Hx; a coset is named by its least element."""

    def __init__(self, G, H, bound=DEGREE_BOUND, h_bound=10**6):
        n = G.order() // H.order()
        if n > bound:
            raise BudgetExceeded(f"index {n} exceeds the degree bound {bound}", n)
        self.G = G
        self.H = H
        self.degree = n
        self._Hel = H.elements(h_bound)
        start = self.canonical(G.identity())
        reps = [start]
        index = {start.tobytes(): 0}
        images = [[] for _ in G.gens]
        k = 0
        while k < len(reps):
            x = reps[k]
            for gi, g in enumerate(G.gens):
                y = self.canonical(g[x])
                key = y.tobytes()
                j = index.get(key)
                if j is None:
                    j = len(reps)
                    index[key] = j
                    reps.append(y)
                images[gi].append(j)
            k += 1
        if len(reps) != n:
            raise AssertionError("coset enumeration disagrees with the index")
        self.reps = np.array(reps)
        self._index = index
        gens = [np.array(im) for im in images]
        self.group = FiniteGroup(gens, n, order=None, name=f"{G.name}:cosets", seed=G.seed)
        self._H_bsgs = H.bsgs

    def canonical(self, x):
        """Lexicographically least image array in the coset Hx."""
        C = x[self._Hel]
        return C[np.lexsort(C.T[::-1])[0]] if len(C) > 1 else C[0]

    def point_of(self, x):
        return self._index[self.canonical(np.asarray(x)).tobytes()]

    def act(self, g):
        """The permutation of cosets induced by g in G."""
        g = np.asarray(g)
        return np.array([self.point_of(g[r]) for r in self.reps],
                        dtype=P.dtype_for(self.degree))

    def fixity(self, g):
        """Number of cosets Hx with Hxg = Hx, i.e. x g x^-1 in H."""
        g = np.asarray(g)
        count = 0
        for r in self.reps:
            ri = P.inv(r)
            if self._H_bsgs.contains(ri[g[r]]):
                count += 1
        return count


def fixity(action, g):
    if isinstance(action, CosetAction):
        return action.fixity(g)
    return len(P.fixed_points(np.asarray(g)))


@dataclass
class FixityReport:
    classes: ClassSpec
    fixities: list
    max_fixity: int
    D: ClassSpec
    labels: list


def max_p_fixity(action, p=2, classes=None):
    """Union D of the order-p classes of G attaining the largest fixity."""
    G = action.G if isinstance(action, CosetAction) else action
    if classes is None:
        classes = involution_classes(G) if p == 2 else classes_of_order(G, p)
    fix = [fixity_of_class(action, classes, k) for k in range(len(classes))]
    best = max(fix) if fix else 0
    keep = [k for k, f in enumerate(fix) if f == best]
    D = classes.subset(keep)
    return FixityReport(classes, fix, best, D, [classes.labels[k] for k in keep])


def fixity_of_class(action, classes, k):
    """Fixity of class k, counted through |C_G(x)| |x^G n H| / |H| when H is enumerable."""
    x = classes.reps[k]
    if isinstance(action, CosetAction):
        sizes = classes.sizes()
        if sizes is not None:
            Hel = action._Hel
            mask = P.order_p_mask(Hel, classes.p)
            hits = int(np.sum(classes.class_of_batch(Hel[mask]) == k))
            G = action.G
            return G.order() // sizes[k] * hits // action.H.order()
    return fixity(action, x)


# -- relatedness -----------------------------------------------------------------


class Transporter:
    """Decides whether some g in A maps a tuple I to a tuple J pointwise.

    A BSGS with the points of I as base prefix reduces this to one sift:
    the coset representative at each level is forced by the target point.
    """

    def __init__(self, A):
        self.A = A
        self._chains = {}

    def chain(self, base):
        B = self._chains.get(base)
        if B is None:
            B = BSGS(self.A.gens, self.A.degree, base_prefix=base,
                     rng=np.random.default_rng(self.A.seed), known_order=self.A.order(), verify=False)
            self._chains[base] = B
        return B

    def find(self, I, J):
        pairs = {}
        for a, b in zip(I, J):
            a, b = int(a), int(b)
            if pairs.setdefault(a, b) != b:
                return None
        if len(set(pairs.values())) != len(pairs):
            return None
        base = tuple(pairs)
        B = self.chain(base)
        acc = P.identity(self.A.degree)  # g so far, maps base[:j] correctly
        for j, a in enumerate(base):
            lv = B.levels[j]
            y = int(P.inv(acc)[pairs[a]])
            if lv.pos[y] < 0:
                return None
            acc = acc[lv.rep(y)]
        return acc


def r_related(A, I, J, r, transporter=None):
    """Every r-subset of positions of I can be mapped onto J by one element of A."""
    if len(I) != len(J):
        raise UsageError("tuples must have equal length")
    if r > len(I) or r < 1:
        raise UsageError("arity must satisfy 1 <= r <= len(I)")
    tr = transporter or Transporter(A)
    for S in itertools.combinations(range(len(I)), r):
        if tr.find([I[k] for k in S], [J[k] for k in S]) is None:
            return False
    return True


def _orbitals(A):
    """Orbit ids of points and of ordered pairs of distinct points."""
    d = A.degree
    pt = -np.ones(d, dtype=np.int64)
    nid = 0
    for x in range(d):
        if pt[x] < 0:
            stack = [x]
            pt[x] = nid
            while stack:
                y = stack.pop()
                for g in A.gens:
                    z = int(g[y])
                    if pt[z] < 0:
                        pt[z] = nid
                        stack.append(z)
            nid += 1
    pair = -np.ones((d, d), dtype=np.int64)
    nid = 0
    for x in range(d):
        for y in range(d):
            if x == y or pair[x, y] >= 0:
                continue
            pair[x, y] = nid
            stack = [(x, y)]
            while stack:
                a, b = stack.pop()
                for g in A.gens:
                    c, e = int(g[a]), int(g[b])
                    if pair[c, e] < 0:
                        pair[c, e] = nid
                        stack.append((c, e))
            nid += 1
    return pt, pair


def _tuple_orbit_reps(A, n, budget):
    """Representatives of A-orbits on n-tuples of distinct points, via stabilizer chains."""
    d = A.degree
    counter = [0]
    out = []

    def stab_orbit_reps(prefix):
        B = BSGS(A.gens, d, base_prefix=tuple(prefix), rng=np.random.default_rng(A.seed),
                 known_order=A.order(), verify=False)
        k = len(prefix)
        gens = B.levels[k].gens if k < len(B.levels) else []
        seen = np.zeros(d, dtype=bool)
        seen[list(prefix)] = True
        reps = []
        for x in range(d):
            if seen[x]:
                continue
            reps.append(x)
            seen[x] = True
            stack = [x]
            while stack:
                y = stack.pop()
                for g in gens:
                    z = int(g[y])
                    if not seen[z]:
                        seen[z] = True
                        stack.append(z)
        return reps

    def dfs(prefix):
        counter[0] += 1
        if counter[0] > budget:
            raise BudgetExceeded("tuple search budget exhausted", counter[0])
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for x in stab_orbit_reps(prefix):
            dfs(prefix + [x])

    dfs([])
    return out


def binary_bounded(A, max_n=None, budget=10**5, min_n=3):
    """Search for tuples that are 2-related but not n-related, for min_n <= n <= max_n."""
    d = A.degree
    if d > 16:
        raise UsageError("bounded search is limited to degree 16")
    max_n = d if max_n is None else max_n
    if max_n > d:
        raise UsageError("max_n cannot exceed the degree")
    pt, pair = _orbitals(A)
    try:
        for n in range(max(min_n, 2), max_n + 1):
            reps = _tuple_orbit_reps(A, n, budget)
            buckets = {}
            for I in reps:
                sig = (tuple(pt[list(I)]),
                       tuple(pair[I[a], I[b]] for a in range(n) for b in range(n) if a != b))
                buckets.setdefault(sig, []).append(I)
            for group in buckets.values():
                if len(group) > 1:
                    I, J = group[0], group[1]
                    return {"verdict": "violation", "I": list(I), "J": list(J), "r": n}
    except BudgetExceeded as exc:
        return {"verdict": "inconclusive", "reason": str(exc)}
    return {"verdict": "no-violation", "max_n": max_n}


# -- the commuting-pair witness ------------------------------------------------------


@dataclass
class WitnessReport:
    g1: np.ndarray
    g2: np.ndarray
    F1: list
    F2: list
    F3: list
    tau: np.ndarray
    I: list
    J: list
    extending: np.ndarray = None

    @property
    def verdict(self):
        return "extending-h-found" if self.extending is not None else "none-exists"

    def as_dict(self):
        out = {
            "g1": element_json(self.g1), "g2": element_json(self.g2),
            "F1": self.F1, "F2": self.F2, "F3": self.F3,
            "tau": element_json(self.tau), "I": self.I, "J": self.J,
            "verdict": self.verdict,
        }
        if self.extending is not None:
            out["h"] = element_json(self.extending)
        return out


def nonbinary_witness(A, g1, g2):
    g1 = np.asarray(g1).astype(P.dtype_for(A.degree))
    g2 = np.asarray(g2).astype(P.dtype_for(A.degree))
    if P.equal(g1, g2):
        raise UsageError("g1 and g2 must be distinct")
    if not P.equal(g1[g2], g2[g1]):
        raise UsageError("g1 and g2 must commute")
    p = P.order(g1)
    if P.order(g2) != p or any(p % k == 0 for k in range(2, int(p**0.5) + 1)):
        raise UsageError("g1 and g2 must have the same prime order")
    if not (A.contains(g1) and A.contains(g2)):
        raise UsageError("g1 and g2 must lie in the group")
    g3 = P.mul(g1, P.inv(g2))
    F1, F2, F3 = (sorted(P.fixed_points(g).tolist()) for g in (g1, g2, g3))
    if not (len(F1) == len(F2) == len(F3) >= 1):
        raise UsageError("fixed sets must have equal nonzero size")
    if F1 == F2:
        raise UsageError("fixed sets of g1 and g2 must differ")
    F = sorted(set(F1) | set(F2) | set(F3))
    tau = P.identity(A.degree)
    for x in F3:
        tau[x] = g1[x]
    I = F
    J = [int(tau[x]) for x in F]
    h = Transporter(A).find(I, J)
    return WitnessReport(g1, g2, F1, F2, F3, tau, I, J, h)


# -- stabilizer filter -------------------------------------------------------------


@dataclass
class FilterResult:
    verdict: str  # "pass", "fail" or "inconclusive"
    reason: str
    D_labels: list = field(default_factory=list)
    max_fixity: int = 0
    delta_order: int = None
    delta_inf_order: int = None
    chain: list = field(default_factory=list)

    def as_dict(self):
        return dict(self.__dict__)


def stabilizer_filter(G, H, p=2, action=None, classes=None, seed=0):
    """Necessary condition for binarity of G on the cosets of H (maximal fixity classes)."""
    if H.order() % p:
        return FilterResult("inconclusive", f"|H| is not divisible by {p}")
    action = CosetAction(G, H) if action is None else action
    classes = (involution_classes(G) if p == 2 else classes_of_order(G, p)) if classes is None \
        else classes
    rep = max_p_fixity(action, p, classes)
    D = rep.D
    g = None
    Hel = action._Hel
    mask = P.order_p_mask(Hel, p)
    cand = Hel[mask]
    ks = D.class_of_batch(cand)
    hit = np.flatnonzero(ks >= 0)
    if not len(hit):
        return FilterResult("inconclusive", "H meets no class of maximal fixity",
                            rep.labels, rep.max_fixity)
    g = cand[hit[0]]
    res = transport_group(G, g, D, seed=seed)
    out = FilterResult("pass", "", rep.labels, rep.max_fixity, res.delta.order())
    chain = delta_infinity(G, g, D1=D, classes=classes, seed=seed)
    out.delta_inf_order = chain.final.order()
    out.chain = chain.orders()
    if not res.delta.is_subgroup_of(H):
        out.verdict = "fail"
        out.reason = f"Delta(g, D) of order {res.delta.order()} is not contained in H"
    elif not chain.final.is_subgroup_of(H):
        out.verdict = "fail"
        out.reason = f"Delta_infinity(g, D) of order {chain.final.order()} is not contained in H"
    return out


# -- TI subgroups ----------------------------------------------------------------


class ConjugateIndex:
    """The conjugates of H, with a map from non-identity elements to their conjugate."""

    def __init__(self, G, H, bound=10**4):
        self.G = G
        Hel = H.elements()
        self.H_elements = Hel
        base = frozenset(x.tobytes() for x in Hel)
        self.conjugates = [Hel]
        self.conjugators = [G.identity()]
        index = {base: 0}
        k = 0
        while k < len(self.conjugates):
            X = self.conjugates[k]
            for g in G.gens:
                Y = P.conj_batch(X, g)
                key = frozenset(y.tobytes() for y in Y)
                if key not in index:
                    index[key] = len(self.conjugates)
                    self.conjugates.append(Y)
                    self.conjugators.append(g[self.conjugators[k]])
                    if len(self.conjugates) > bound:
                        raise BudgetExceeded(f"more than {bound} conjugates", len(self.conjugates))
            k += 1
        self.count = len(self.conjugates)
        ident = G.identity().tobytes()
        self.owner = {}
        self.ti = True
        for i, X in enumerate(self.conjugates):
            for x in X:
                b = x.tobytes()
                if b == ident:
                    continue
                if b in self.owner:
                    self.ti = False
                else:
                    self.owner[b] = i


def ti_check(G, H, bound=10**4):
    return ConjugateIndex(G, H, bound).ti


@dataclass
class TIResult:
    verdict: str  # "binary", "not-binary", "inconclusive"
    conjugates: int
    triples_checked: int
    witness: dict = None
    reason: str = ""

    def as_dict(self):
        return dict(self.__dict__)


def ti_binary_criterion(G, H, bound=10**4, product_bound=10**8):
    """For TI H: binary iff H_1 n H_2 H_3 = 1 for all distinct conjugates (H_2 = H fixed)."""
    try:
        idx = ConjugateIndex(G, H, bound)
    except BudgetExceeded as exc:
        return TIResult("inconclusive", 0, 0, reason=str(exc))
    if not idx.ti:
        raise UsageError("H is not a TI subgroup")
    Hel = idx.H_elements
    n = len(Hel)
    if idx.count * n * n > product_bound:
        return TIResult("inconclusive", idx.count, 0, reason="product sets too large")
    ident = G.identity().tobytes()
    checked = 0
    for j in range(1, idx.count):
        H3 = idx.conjugates[j]
        checked += 1
        for h2 in Hel:
            prods = H3[:, h2]  # each row is h2 followed by h3
            for h3, y in zip(H3, prods):
                b = y.tobytes()
                if b == ident:
                    continue
                i = idx.owner.get(b)
                if i is not None and i != 0 and i != j:
                    w = {"H1": i, "H2": 0, "H3": j,
                         "H1_conjugator": element_json(idx.conjugators[i]),
                         "H3_conjugator": element_json(idx.conjugators[j]),
                         "h2": element_json(h2), "h3": element_json(h3),
                         "product": element_json(y)}
                    return TIResult("not-binary", idx.count, checked, w)
    return TIResult("binary", idx.count, checked)


# -- certificates ------------------------------------------------------------------


def element_json(g):
    g = np.asarray(g)
    return {"encoding": g.astype(P.dtype_for(len(g))).tobytes().hex(),
            "cycles": P.cycle_string(g)}


def certificate_json(obj):
    d = obj.as_dict() if hasattr(obj, "as_dict") else obj
    return json.dumps(d, indent=2, sort_keys=True, default=_default)


def _default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(type(o))
