"""
Finite permutation groups with a lazily built stabilizer chain.

Elements are permutation image arrays (see ``perm``).  Matrix groups from
the catalog are FiniteGroups whose generators are the permutations induced
on a point domain; the matrices live in ``meta``.
"""

import numpy as np

from . import perm as P
from .bsgs import BSGS, BudgetExceeded, _ProductReplacement

ORBIT_BUDGET = 10**7
ORBIT_MEMORY = 1 << 30  # bytes of stored orbit rows and keys
ENUM_BOUND = 10**6


class UnfaithfulAction(ValueError):
    pass


class RandomStream:
    """Seeded product-replacement stream of random elements of G."""

    def __init__(self, group, seed=0):
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        gens = group.gens or [P.identity(group.degree)]
        self._pr = _ProductReplacement(gens, self.rng)

    def next(self):
        return self._pr.next().copy()

    def __iter__(self):
        while True:
            yield self.next()


class FiniteGroup:
    """Group generated by permutations of {0, ..., degree-1}."""

    def __init__(self, gens, degree=None, order=None, name=None, seed=0, verify=True,
                 meta=None, base_prefix=()):
        if degree is None:
            if not gens:
                raise ValueError("degree is required for an empty generator list")
            degree = len(gens[0])
        dt = P.dtype_for(degree)
        self.degree = degree
        self.gens = [np.asarray(g).astype(dt) for g in gens]
        for g in self.gens:
            if len(g) != degree:
                raise ValueError("generator of the wrong degree")
        self.gens = [g for g in self.gens if not P.is_identity(g)]
        self.name = name
        self.seed = seed
        self.verify = verify
        self.meta = dict(meta or {})
        self._known_order = order
        self._base_prefix = tuple(base_prefix)
        self._bsgs = None

    def __repr__(self):
        label = self.name or f"<{len(self.gens)} generators>"
        return f"FiniteGroup({label}, degree={self.degree})"

    # -- chain -------------------------------------------------------------

    @property
    def bsgs(self):
        if self._bsgs is None:
            self._bsgs = BSGS(self.gens, self.degree, base_prefix=self._base_prefix,
                              rng=np.random.default_rng(self.seed),
                              known_order=self._known_order, verify=self.verify)
        return self._bsgs

    @property
    def exact(self):
        """Whether the order is proven (verified chain or known order reached)."""
        return self.bsgs.complete

    def order(self):
        return self.bsgs.order()

    def contains(self, x):
        return self.bsgs.contains(x)

    def identity(self):
        return P.identity(self.degree)

    def random_stream(self, seed=None):
        return RandomStream(self, self.seed if seed is None else seed)

    def uniform_random(self, rng):
        return self.bsgs.random_element(rng)

    def elements(self, bound=ENUM_BOUND):
        return self.bsgs.elements(bound)

    def is_trivial(self):
        return not self.gens

    def is_abelian(self):
        gs = self.gens
        return all(P.equal(a[b], b[a]) for i, a in enumerate(gs) for b in gs[i + 1:])

    def is_elementary_abelian(self, p=None):
        if not self.gens:
            return True
        if not self.is_abelian():
            return False
        orders = {P.order(g) for g in self.gens}
        if len(orders) != 1:
            return False
        (o,) = orders
        return p is None or o == p

    def is_subgroup_of(self, other):
        return all(other.contains(g) for g in self.gens)

    def same_group(self, other):
        return self.is_subgroup_of(other) and other.is_subgroup_of(self)

    def centre(self, bound=ENUM_BOUND):
        """Z(G) by enumeration."""
        E = self.elements(bound)
        keep = np.ones(len(E), dtype=bool)
        for g in self.gens:
            keep &= np.all(E[:, g] == g[E], axis=1)
        Z = E[keep]
        return self.subgroup([z for z in Z if not P.is_identity(z)], order=len(Z))

    def describe(self):
        n = self.order()
        if self.is_elementary_abelian():
            if n == 1:
                return "trivial"
            p = P.order(self.gens[0])
            k = round(np.log(n) / np.log(p))
            return f"elementary abelian {p}^{k}"
        return ("abelian" if self.is_abelian() else "nonabelian") + f" of order {n}"

    # -- subgroups ---------------------------------------------------------

    def subgroup(self, gens, order=None, name=None, verify=None):
        return FiniteGroup(list(gens), self.degree, order=order, name=name, seed=self.seed,
                           verify=self.verify if verify is None else verify)

    def closure(self, elements, verify=None):
        return self.subgroup(elements, verify=verify)

    def normal_closure(self, elements, within=None, verify=None):
        """Smallest subgroup containing ``elements`` normalized by ``within`` (default self)."""
        within = self if within is None else within
        verify = self.verify if verify is None else verify
        N = self.subgroup(elements, verify=verify)
        conj_by = [(g, P.inv(g)) for g in within.gens]
        pending = list(N.gens)
        while pending:
            x = pending.pop()
            fresh = []
            for g, gi in conj_by:
                y = g[x[gi]]
                if not N.contains(y):
                    fresh.append(y)
            if fresh:
                N.bsgs.add_generators(fresh, rng=np.random.default_rng(self.seed), verify=verify)
                N.gens.extend(fresh)
                pending.extend(fresh)
        return N

    def centralizer(self, s, budget=ORBIT_BUDGET, known_order=None, rng=None):
        """C_G(s).  Exact via the conjugation orbit when it fits the budget."""
        s = np.asarray(s).astype(P.dtype_for(self.degree))
        if all(P.equal(s[g], g[s]) for g in self.gens):
            return self.subgroup(self.gens, order=self.order())
        try:
            orbit = self.conjugacy_orbit(s, budget=budget)
        except BudgetExceeded:
            return centralizer_random(self, s, known_order=known_order, rng=rng)
        target = self.order() // orbit.size
        return centralizer_from_orbit(self, orbit, target, rng=rng)

    def conjugacy_orbit(self, s, budget=ORBIT_BUDGET):
        return OrbitIndex(self, s, budget=budget)

    def conjugates(self, x, rng):
        """A random conjugate x^g together with g."""
        g = self.uniform_random(rng)
        return P.conj(x, g), g


def centralizer_from_orbit(G, orbit, target, rng=None, batch=8):
    rng = np.random.default_rng(G.seed) if rng is None else rng
    C = None
    gens = []
    while C is None or C.order() < target:
        new = []
        for _ in range(batch):
            i = int(rng.integers(orbit.size))
            k = int(rng.integers(len(G.gens)))
            g = G.gens[k]
            u = orbit.conjugator(i)
            y = g[orbit.element(i)[P.inv(g)]]
            j = orbit.index(y)
            w = P.inv(orbit.conjugator(j))[g[u]]
            if not P.is_identity(w):
                new.append(w)
        if not new:
            if target == 1:
                break
            continue
        if C is None:
            gens = new
            C = FiniteGroup(gens, G.degree, order=target, seed=G.seed, verify=False)
            C._bsgs = BSGS(gens, G.degree, rng=rng, known_order=target, verify=False)
        else:
            C.gens.extend(new)
            C.bsgs.add_generators(new, rng=rng, known_order=target, verify=False)
    if C is None:
        return FiniteGroup([], G.degree, order=1, seed=G.seed)
    if C.order() != target:
        raise AssertionError("centralizer order disagrees with the orbit-stabilizer count")
    C.bsgs.complete = True
    C.gens = _thin(C)
    return C


def _thin(C, limit=20):
    """Keep a generating subset of at most ``limit`` elements when possible."""
    if len(C.gens) <= limit:
        return C.gens
    keep = []
    B = None
    for g in C.gens:
        if B is None:
            keep.append(g)
            B = BSGS(keep, C.degree, known_order=None, verify=False, rng=np.random.default_rng(0))
            continue
        if not B.contains(g):
            keep.append(g)
            B.add_generators([g], verify=False)
        if B.order() == C.order():
            break
    return keep if B is not None and B.order() == C.order() else C.gens


def commutes(a, b):
    return P.equal(a[b], b[a])


def centralizing_elements(G, s, rng, count):
    """Random elements of C_G(s) by the commutator trick (Bray's method)."""
    out = []
    si = P.inv(s)
    tries = 0
    while len(out) < count and tries < 50 * count:
        tries += 1
        g = G.uniform_random(rng)
        gi = P.inv(g)
        c = g[s[gi[si]]]  # s^-1 g^-1 s g
        m = P.order(c)
        cands = []
        if m % 2:
            cands.append(P.power(c, (m + 1) // 2)[g])
            cands.append(P.power(c, (m - 1) // 2)[g])
        else:
            cands.append(P.power(c, m // 2))
            h = g[s]
            cands.append(P.power(h, P.order(h) // 2) if P.order(h) % 2 == 0 else h)
        for w in cands:
            if not P.is_identity(w) and commutes(w, s):
                out.append(w)
                break
    return out


def centralizer_random(G, s, known_order=None, rng=None, rounds=40):
    """Centralizer from random centralizing elements; exact only if known_order is reached."""
    rng = np.random.default_rng(G.seed) if rng is None else rng
    gens = [s] + centralizing_elements(G, s, rng, 8)
    C = FiniteGroup(gens, G.degree, seed=G.seed, verify=False)
    C._bsgs = BSGS(gens, G.degree, rng=rng, verify=False)
    quiet = 0
    while quiet < rounds:
        if known_order is not None and C.order() >= known_order:
            break
        new = centralizing_elements(G, s, rng, 4)
        before = C.order()
        C.gens.extend(new)
        C.bsgs.add_generators(new, rng=rng, verify=False)
        quiet = quiet + 1 if C.order() == before else 0
    C.bsgs.complete = known_order is not None and C.order() == known_order
    return C


class OrbitIndex:
    """Conjugation orbit s^G, breadth first, with conjugator words.

    ``parent[i]`` and ``via[i]`` record that element i is element parent[i]
    conjugated by generator via[i]; replaying the word from the seed
    reproduces element i exactly.
    """

    CHECK_EVERY = 10**5

    def __init__(self, G, s, budget=ORBIT_BUDGET):
        d = G.degree
        self.group = G
        self.seed = np.asarray(s).astype(P.dtype_for(d))
        budget = min(budget, ORBIT_MEMORY // (2 * d * self.seed.itemsize + 120))
        self.degree = d
        self._void = np.dtype((np.void, d * self.seed.itemsize))
        gens = G.gens
        ginv = [P.inv(g) for g in gens]
        index = {self._key(self.seed): 0}
        chunks = [self.seed[None, :]]
        parents = [np.array([-1])]
        vias = [np.array([-1])]
        frontier = self.seed[None, :]
        front_idx = np.array([0])
        n = 1
        next_check = self.CHECK_EVERY
        while len(frontier):
            new_rows, new_par, new_via = [], [], []
            for k, (g, gi) in enumerate(zip(gens, ginv)):
                Y = g[frontier[:, gi]]
                keys = np.ascontiguousarray(Y).view(self._void).ravel().tolist()
                for r, key in enumerate(keys):
                    if key in index:
                        continue
                    index[key] = n
                    n += 1
                    new_rows.append(Y[r])
                    new_par.append(front_idx[r])
                    new_via.append(k)
                if n > budget:
                    raise BudgetExceeded(f"conjugacy orbit exceeded the budget of {budget} at size {n}", n)
                if n >= next_check:
                    next_check += self.CHECK_EVERY
            if not new_rows:
                break
            frontier = np.array(new_rows)
            front_idx = np.arange(n - len(new_rows), n)
            chunks.append(frontier)
            parents.append(np.array(new_par))
            vias.append(np.array(new_via))
        self._index = index
        self.elements = np.concatenate(chunks)
        self.parent = np.concatenate(parents)
        self.via = np.concatenate(vias)
        self.size = n

    def _key(self, x):
        return np.ascontiguousarray(x).view(self._void)[0].tobytes() if x.ndim == 1 else None

    def __len__(self):
        return self.size

    def index(self, x):
        x = np.asarray(x).astype(self.seed.dtype)
        return self._index.get(x.tobytes(), -1)

    def index_batch(self, X):
        X = np.ascontiguousarray(np.asarray(X).astype(self.seed.dtype))
        keys = X.view(self._void).ravel().tolist()
        get = self._index.get
        return np.array([get(k, -1) for k in keys], dtype=np.int64)

    def __contains__(self, x):
        return self.index(x) >= 0

    def element(self, i):
        return self.elements[i]

    def word(self, i):
        w = []
        while i > 0:
            w.append(int(self.via[i]))
            i = int(self.parent[i])
        return w[::-1]

    def conjugator(self, i):
        """g with seed^g = element i."""
        u = P.identity(self.degree)
        for k in self.word(i):
            u = self.group.gens[k][u]
        return u

    def replay(self, i):
        return P.conj(self.seed, self.conjugator(i))
