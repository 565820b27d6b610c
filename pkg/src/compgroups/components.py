"""
Class graphs Gamma(D), component groups Delta(s, D), transport groups and
terminal component groups.

D is a union of conjugacy classes of elements of prime order p.  Two
distinct elements g, h of D are adjacent when they commute and g h^-1 or
h g^-1 lies in D.  Delta(s, D) is generated by the connected component X of
s; the transport group T (centralizers of component representatives plus
conjugators between adjacent representatives) acts on X with one orbit per
class, which is how X and Delta are computed without walking the graph.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from . import perm as P
from .bsgs import BudgetExceeded
from .group import ENUM_BOUND, ORBIT_BUDGET, FiniteGroup, OrbitIndex, commutes

log = logging.getLogger(__name__)

EXACT = "exact"
LOWER_BOUND = "randomized-lower-bound"
EXACT_G = "exact-G"


# -- unions of classes ---------------------------------------------------------


class ClassSpec:
    """A union D of classes of order-p elements of G, one representative per class.

    ``strategy`` is "orbit" (stored conjugation orbits), "invariant"
    (catalog class keys) or "auto" (orbits while they fit the budget).
    """

    def __init__(self, G, reps, p=2, labels=None, strategy="auto", budget=ORBIT_BUDGET):
        self.group = G
        self.p = p
        self.reps = [np.asarray(r).astype(P.dtype_for(G.degree)) for r in reps]
        for r in self.reps:
            if P.order(r) != p:
                raise ValueError(f"class representative does not have order {p}")
        self.labels = list(labels) if labels is not None else [f"class{k}" for k in range(len(reps))]
        self.budget = budget
        self._orbits = None
        self._keys = None
        has_keys = hasattr(G, "spec") and p == 2
        if strategy == "auto":
            strategy = "orbit"
            if has_keys:
                try:
                    self._build_orbits()
                except BudgetExceeded:
                    strategy = "invariant"
        self.strategy = strategy
        if strategy == "orbit":
            self._build_orbits()
        elif strategy == "invariant":
            if not has_keys:
                raise ValueError("invariant membership needs a catalog group and p = 2")
            self._build_keys()
        else:
            raise ValueError(f"unknown membership strategy {strategy!r}")
        if self._orbits is not None:
            for k, o in enumerate(self._orbits):
                if any(o.index(r) >= 0 for j, r in enumerate(self.reps) if j != k):
                    raise ValueError("class representatives are conjugate")

    def __len__(self):
        return len(self.reps)

    def _build_orbits(self):
        if self._orbits is None:
            total = 0
            orbits = []
            for r in self.reps:
                o = OrbitIndex(self.group, r, budget=self.budget - total)
                total += o.size
                orbits.append(o)
            self._orbits = orbits

    def _build_keys(self):
        from .catalog import class_key
        self._class_key = class_key
        self._keys = {}
        for k, r in enumerate(self.reps):
            key = class_key(self.group, r)
            if key in self._keys:
                raise ValueError("class representatives are conjugate")
            self._keys[key] = k

    def sizes(self):
        if self._orbits is None:
            return None
        return [o.size for o in self._orbits]

    def size(self):
        s = self.sizes()
        return None if s is None else sum(s)

    def subset(self, indices):
        out = object.__new__(ClassSpec)
        out.__dict__.update(self.__dict__)
        out.reps = [self.reps[k] for k in indices]
        out.labels = [self.labels[k] for k in indices]
        if self._orbits is not None:
            out._orbits = [self._orbits[k] for k in indices]
        if self._keys is not None:
            inv = {k: i for i, k in enumerate(indices)}
            out._keys = {key: inv[k] for key, k in self._keys.items() if k in inv}
        return out

    def class_of(self, x):
        """Index of the class containing x, or -1."""
        x = np.asarray(x)
        if P.is_identity(x):
            return -1
        if self._orbits is not None:
            for k, o in enumerate(self._orbits):
                if o.index(x) >= 0:
                    return k
            return -1
        if P.order(x) != self.p:
            return -1
        return self._keys.get(self._class_key(self.group, x), -1)

    def class_of_batch(self, X):
        X = np.asarray(X)
        out = np.full(len(X), -1, dtype=np.int64)
        if not len(X):
            return out
        if self._orbits is not None:
            for k, o in enumerate(self._orbits):
                hit = (out < 0) & (o.index_batch(X) >= 0)
                out[hit] = k
            return out
        mask = P.order_p_mask(X, self.p)
        for i in np.flatnonzero(mask):
            out[i] = self._keys.get(self._class_key(self.group, X[i]), -1)
        return out

    def __contains__(self, x):
        return self.class_of(x) >= 0

    def conjugator(self, k, x, rng=None, tries=2000):
        """c with reps[k]^c = x (x must lie in class k)."""
        if self._orbits is not None:
            i = self._orbits[k].index(x)
            if i < 0:
                raise ValueError("element is not in the requested class")
            return self._orbits[k].conjugator(i)
        return random_conjugator(self.group, self.reps[k], x, rng=rng, tries=tries)

    def elements(self, k):
        self._build_orbits()
        return self._orbits[k].elements


def random_conjugator(G, a, b, rng=None, tries=2000):
    """Random search for c with a^c = b; uses the dihedral trick for involutions."""
    rng = np.random.default_rng(G.seed) if rng is None else rng
    if P.equal(a, b):
        return G.identity()
    inv_case = P.is_identity(P.mul(a, a))
    for _ in range(tries):
        g = G.uniform_random(rng)
        y = P.conj(a, g)
        if P.equal(y, b):
            return g
        if inv_case:
            z = P.mul(y, b)
            m = P.order(z)
            if m % 2:
                c = P.power(z, (m + 1) // 2)
                for cand in (c, P.inv(c)):
                    if P.equal(P.conj(y, cand), b):
                        return P.mul(g, cand)
    raise BudgetExceeded("no conjugating element found", tries)


def involution_classes(G, strategy="auto", budget=ORBIT_BUDGET):
    """All involution classes of G as a ClassSpec, labelled."""
    if hasattr(G, "spec"):
        from .catalog import involution_labels, involution_rep
        labels = involution_labels(G)
        reps = [involution_rep(G, L) for L in labels]
        return ClassSpec(G, reps, 2, [str(L) for L in labels], strategy=strategy, budget=budget)
    return classes_of_order(G, 2)


def classes_of_order(G, p, bound=ENUM_BOUND):
    """Exhaustive classing of the order-p elements of a small group."""
    E = G.elements(bound)
    X = E[P.order_p_mask(E, p)]
    keys = {x.tobytes(): i for i, x in enumerate(X)}
    done = np.zeros(len(X), dtype=bool)
    reps = []
    for i in range(len(X)):
        if done[i]:
            continue
        o = OrbitIndex(G, X[i])
        for y in o.elements:
            done[keys[y.tobytes()]] = True
        reps.append(X[i])
    reps.sort(key=lambda r: r.tobytes())
    return ClassSpec(G, reps, p, [f"{p}{chr(ord('A') + k)}" for k in range(len(reps))],
                     strategy="orbit")


def class_spec_for(G, s, p=2, strategy="auto", budget=ORBIT_BUDGET, label=None):
    """The single class of s."""
    return ClassSpec(G, [s], p, [label or "s"], strategy=strategy, budget=budget)


# -- the graph -----------------------------------------------------------------


def _inv_rows(X):
    out = np.empty_like(X)
    rows = np.arange(len(X))[:, None]
    out[rows, X] = np.arange(X.shape[1], dtype=X.dtype)
    return out


def gamma_adjacent(g, h, D):
    """Adjacency in Gamma(D) for distinct g, h in D."""
    if P.equal(g, h):
        raise ValueError("adjacency is only defined for distinct elements")
    if not commutes(g, h):
        return False
    if D.class_of(P.mul(g, P.inv(h))) >= 0:
        return True
    return D.p != 2 and D.class_of(P.mul(h, P.inv(g))) >= 0


def adjacent_mask(r, X, D):
    """Which rows of X are adjacent to r (rows assumed to lie in D)."""
    X = np.asarray(X)
    if not len(X):
        return np.zeros(0, dtype=bool)
    comm = np.all(X[:, r] == r[X], axis=1)
    same = np.all(X == r, axis=1)
    ok = comm & ~same
    idx = np.flatnonzero(ok)
    if not len(idx):
        return ok
    Y = X[idx]
    Yinv = _inv_rows(Y)
    hit = D.class_of_batch(Yinv[:, r]) >= 0  # r * x^-1
    if D.p != 2:
        rinv = P.inv(r)
        hit |= D.class_of_batch(rinv[Y]) >= 0  # x * r^-1
    out = np.zeros(len(X), dtype=bool)
    out[idx[hit]] = True
    return out


def component_bfs(G, s, D, budget=10**5):
    """Connected component of s in Gamma(D), by breadth-first search.

    The neighbourhood of each class representative is found by scanning D
    once; the neighbourhood of y = rep^c is then the conjugate by c.
    """
    sizes = D.sizes()
    if sizes is None or sum(sizes) > budget:
        raise BudgetExceeded(f"class union too large for breadth-first search (budget {budget})",
                             None if sizes is None else sum(sizes))
    allX = np.concatenate([D.elements(k) for k in range(len(D))])
    nbrs = [allX[adjacent_mask(D.reps[k], allX, D)] for k in range(len(D))]
    k0 = D.class_of(s)
    if k0 < 0:
        raise ValueError("s is not in D")
    seen = {s.tobytes()}
    out = [s]
    queue = [s]
    while queue:
        y = queue.pop()
        k = D.class_of(y)
        c = D.conjugator(k, y)
        Ny = P.conj_batch(nbrs[k], c)
        for z in Ny:
            kz = z.tobytes()
            if kz not in seen:
                seen.add(kz)
                out.append(z)
                queue.append(z)
        if len(seen) > budget:
            raise BudgetExceeded("component exceeds the budget", len(seen))
    return np.array(out)


# -- transport -----------------------------------------------------------------


@dataclass
class TransportResult:
    T: FiniteGroup
    delta: FiniteGroup
    component_size: int
    centralizer: FiniteGroup
    reps: list
    rep_classes: list
    provenance: list = field(default_factory=list)
    flag: str = EXACT
    notes: list = field(default_factory=list)

    def delta_order(self):
        return self.delta.order()

    def summary(self):
        d = self.delta
        return {
            "delta_order": d.order(),
            "delta_structure": d.describe(),
            "elementary_abelian": d.is_elementary_abelian(),
            "transport_order": self.T.order(),
            "component_size": self.component_size,
            "centralizer_order": self.centralizer.order(),
            "component_classes": self.rep_classes,
            "flag": self.flag,
            "notes": list(self.notes),
        }


def _centralizer(G, r, budget, rng):
    C = G.centralizer(r, budget=budget, rng=rng)
    return C


def _adjacent_in_centralizer(Z, r, D, rng, enum_bound, samples):
    """Elements of C(r) adjacent to r, exhaustively when C(r) is small."""
    try:
        E = Z.elements(enum_bound)
        exhaustive = True
    except BudgetExceeded:
        E = np.array([Z.uniform_random(rng) for _ in range(samples)])
        exhaustive = False
    X = E[P.order_p_mask(E, D.p)]
    inD = D.class_of_batch(X) >= 0
    X = X[inD]
    return X[adjacent_mask(r, X, D)], exhaustive


def _z_classes(Z, X):
    """Representatives of the Z-conjugacy classes among the rows of X (closed set)."""
    index = {x.tobytes(): i for i, x in enumerate(X)}
    done = np.zeros(len(X), dtype=bool)
    reps = []
    gens = [(g, P.inv(g)) for g in Z.gens]
    for i in range(len(X)):
        if done[i]:
            continue
        reps.append(X[i])
        done[i] = True
        frontier = [X[i]]
        while frontier:
            nxt = []
            for y in frontier:
                for g, gi in gens:
                    z = g[y[gi]]
                    j = index.get(z.tobytes())
                    if j is None:
                        raise AssertionError("adjacent set is not closed under the centralizer")
                    if not done[j]:
                        done[j] = True
                        nxt.append(z)
            frontier = nxt
    return reps


def transport_group(G, s, D, budget=ORBIT_BUDGET, enum_bound=ENUM_BOUND, samples=2000, seed=None):
    """Deterministic transport computation of the component of s in Gamma(D)."""
    seed = G.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    s = np.asarray(s).astype(P.dtype_for(G.degree))
    k0 = D.class_of(s)
    if k0 < 0:
        raise ValueError("s does not lie in D")
    reps = [s]
    rep_class = [k0]
    conj = {k0: D.conjugator(k0, s, rng=rng)}
    rep_of = {k0: 0}
    gens, prov, notes = [], [], []
    flag = EXACT
    centralizers = []
    i = 0
    while i < len(reps):
        r = reps[i]
        Z = _centralizer(G, r, budget, rng)
        if not Z.exact:
            flag = LOWER_BOUND
            notes.append(f"centralizer of representative {i} is a random lower bound")
        centralizers.append(Z)
        for z in Z.gens:
            gens.append(z)
            prov.append(("centralizer", i))
        adj, exhaustive = _adjacent_in_centralizer(Z, r, D, rng, enum_bound, samples)
        if not exhaustive:
            flag = LOWER_BOUND
            notes.append(f"centralizer of representative {i} sampled, not enumerated")
        for x in _z_classes(Z, adj) if exhaustive else _dedup(adj):
            k = D.class_of(x)
            if k in rep_of:
                j = rep_of[k]
                try:
                    cx = D.conjugator(k, x, rng=rng)
                except BudgetExceeded:
                    flag = LOWER_BOUND
                    notes.append("conjugator search failed; class skipped")
                    continue
                t = cx[P.inv(conj[k])]  # reps[j]^t = x
                if not P.is_identity(t):
                    gens.append(t)
                    prov.append(("conjugator", j))
            else:
                rep_of[k] = len(reps)
                reps.append(x)
                rep_class.append(k)
                conj[k] = D.conjugator(k, x, rng=rng)
                prov.append(("new-representative", len(reps) - 1))
        i += 1
    T = G.subgroup(gens, name="T")
    delta = G.normal_closure(reps, within=T)
    size = sum(T.order() // Z.order() for Z in centralizers)
    return TransportResult(T, delta, size, centralizers[0], reps,
                           [D.labels[k] for k in rep_class], prov, flag, notes)


def _dedup(X):
    seen = {}
    for x in X:
        seen.setdefault(x.tobytes(), x)
    return list(seen.values())


def _p_part(z, p):
    m = P.order(z)
    return P.power(z, m // p) if m % p == 0 else None


def transport_randomized(G, s, D, samples=500, seed=0, budget=ORBIT_BUDGET, check_every=50):
    """Randomized transport: a lower bound Delta' <= Delta(s, D).

    Neighbours of a representative r commute with r, so candidates are drawn
    as p-parts of random elements of C_G(r) rather than from all of D.
    """
    rng = np.random.default_rng(seed)
    s = np.asarray(s).astype(P.dtype_for(G.degree))
    k0 = D.class_of(s)
    if k0 < 0:
        raise ValueError("s does not lie in D")
    big = G.order()
    notes = []
    reps, rep_class, cents = [], [], []
    gens, prov = [], []
    conj = {}

    def add_rep(x, k, c, origin):
        Z = G.centralizer(x, budget=budget, rng=rng)
        if not Z.exact:
            notes.append(f"centralizer of representative {len(reps)} is a random lower bound")
        reps.append(x)
        rep_class.append(k)
        cents.append(Z)
        conj[k] = c
        gens.extend(Z.gens)
        prov.extend([("centralizer", len(reps) - 1)] * len(Z.gens))
        prov.append(origin)

    add_rep(s, k0, D.conjugator(k0, s, rng=rng), ("seed", 0))
    flag = LOWER_BOUND
    checked = len(gens)
    sample_rng = np.random.default_rng([seed, 1])
    for n in range(samples):
        i = n % len(reps)
        r = reps[i]
        y = _p_part(cents[i].uniform_random(sample_rng), D.p)
        if y is None or P.equal(y, r):
            continue
        k = D.class_of(y)
        if k < 0 or not gamma_adjacent(r, y, D):
            continue
        try:
            c = D.conjugator(k, y, rng=rng)  # D.reps[k]^c = y
        except BudgetExceeded:
            notes.append(f"sample {n}: conjugator search failed")
            continue
        if k in conj:
            t = c[P.inv(conj[k])]
            if not P.is_identity(t):
                gens.append(t)
                prov.append(("conjugator", n))
        else:
            add_rep(y, k, c, ("new-representative", n))
        if (n + 1) % check_every == 0 and len(gens) > checked:
            checked = len(gens)
            if _reaches(G, gens, big, seed):
                flag = EXACT_G
                break
    if flag != EXACT_G and len(gens) > checked and _reaches(G, gens, big, seed):
        flag = EXACT_G
    verify = G.exact and G.degree <= 1024
    if flag == EXACT_G:
        T = G.subgroup(gens, order=big, name="T'")
        delta = G.normal_closure(reps, within=G)
    else:
        T = G.subgroup(gens, name="T'", verify=verify)
        delta = G.normal_closure(reps, within=T, verify=verify)
    size = sum(T.order() // Z.order() for Z in cents)
    return TransportResult(T, delta, size, cents[0], reps, [D.labels[k] for k in rep_class], prov,
                           flag, notes)


def _reaches(G, gens, order, seed):
    from .bsgs import BSGS
    B = BSGS(gens, G.degree, rng=np.random.default_rng(seed), known_order=order, verify=False)
    return B.order() == order


# -- terminal components ---------------------------------------------------------


@dataclass
class DeltaChain:
    groups: list
    class_sets: list
    final: FiniteGroup
    complete_index: int
    flags: list
    notes: list = field(default_factory=list)

    def orders(self):
        return [H.order() for H in self.groups]


def classes_meeting(H, classes, p=2, enum_bound=ENUM_BOUND, samples=3000, rng=None):
    """Indices of classes in ``classes`` that meet the subgroup H (exhaustive when small)."""
    found = set()
    try:
        E = H.elements(enum_bound)
        exhaustive = True
    except BudgetExceeded:
        rng = np.random.default_rng(H.seed) if rng is None else rng
        E = np.array([H.uniform_random(rng) for _ in range(samples)] + list(H.gens))
        exhaustive = False
    X = E[P.order_p_mask(E, p)]
    ks = classes.class_of_batch(X)
    found.update(int(k) for k in ks if k >= 0)
    return sorted(found), exhaustive


def delta_infinity(G, s, D1=None, classes=None, mode="deterministic", seed=0, samples=500,
                   budget=ORBIT_BUDGET, max_stages=20):
    """The chain Delta_1 <= Delta_2 <= ... and its limit Delta_infinity(s)."""
    classes = involution_classes(G, budget=budget) if classes is None else classes
    k0 = classes.class_of(s)
    if k0 < 0:
        raise ValueError("s is not in any listed class")
    current = [k0] if D1 is None else sorted(classes.class_of(r) for r in D1.reps)
    groups, class_sets, flags, notes = [], [], [], []
    order_G = G.order()
    complete = -1
    for stage in range(max_stages):
        D = classes.subset(current)
        try:
            if mode == "deterministic":
                res = transport_group(G, s, D, budget=budget, seed=seed)
            else:
                res = transport_randomized(G, s, D, samples=samples, seed=seed, budget=budget)
        except BudgetExceeded as exc:
            notes.append(f"stage {stage + 1}: {exc}")
            break
        groups.append(res.delta)
        class_sets.append([classes.labels[k] for k in current])
        flags.append(res.flag)
        complete = stage
        if res.delta.order() == order_G:
            break
        nxt, exhaustive = classes_meeting(res.delta, classes, classes.p,
                                          rng=np.random.default_rng(seed))
        if not exhaustive:
            notes.append(f"stage {stage + 1}: classes found by sampling")
        if set(nxt) == set(current):
            break
        current = sorted(set(nxt))
    final = groups[-1] if groups else None
    return DeltaChain(groups, class_sets, final, complete, flags, notes)


# -- class graph -----------------------------------------------------------------


@dataclass
class ClassGraphReport:
    group: str
    labels: list
    black: list
    delta_orders: list
    edges: list
    flags: list
    annotations: dict = field(default_factory=dict)

    def to_dot(self):
        lines = ["digraph classes {", "  node [style=filled];"]
        for i, lab in enumerate(self.labels):
            colour = "black" if self.black[i] else "white"
            font = "white" if self.black[i] else "black"
            text = f"{lab}\\n|Δ|={self.delta_orders[i]}"
            lines.append(f'  v{i} [label="{text}", fillcolor={colour}, fontcolor={font}];')
        for a, b in self.edges:
            lines.append(f"  v{a} -> v{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def reaches_black(self, i):
        seen, stack = {i}, [i]
        while stack:
            v = stack.pop()
            if self.black[v]:
                return True
            for a, b in self.edges:
                if a == v and b not in seen:
                    seen.add(b)
                    stack.append(b)
        return False

    def as_dict(self):
        return {
            "group": self.group,
            "vertices": [{"label": lab, "black": b, "delta_order": o, "flag": f}
                         for lab, b, o, f in zip(self.labels, self.black, self.delta_orders, self.flags)],
            "edges": [[self.labels[a], self.labels[b]] for a, b in self.edges],
            "annotations": self.annotations,
        }


def class_graph(G, mode="deterministic", seed=0, samples=500, budget=ORBIT_BUDGET, classes=None):
    classes = involution_classes(G, budget=budget) if classes is None else classes
    order_G = G.order()
    black, orders, flags, edges = [], [], [], set()
    notes = {}
    for k in range(len(classes)):
        D = classes.subset([k])
        s = classes.reps[k]
        try:
            if mode == "deterministic":
                res = transport_group(G, s, D, budget=budget, seed=seed)
            else:
                res = transport_randomized(G, s, D, samples=samples, seed=seed, budget=budget)
        except BudgetExceeded as exc:
            black.append(False)
            orders.append(None)
            flags.append("failed")
            notes[classes.labels[k]] = str(exc)
            continue
        n = res.delta.order()
        orders.append(n)
        flags.append(res.flag)
        black.append(n == order_G)
        if n != order_G:
            met, _ = classes_meeting(res.delta, classes, classes.p, rng=np.random.default_rng(seed))
            for j in met:
                if j != k:
                    edges.add((k, j))
    return ClassGraphReport(G.name or "G", list(classes.labels), black, orders,
                            sorted(edges, key=lambda e: (e[0], classes.reps[e[1]].tobytes())),
                            flags, notes)
