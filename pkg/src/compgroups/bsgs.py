"""
Base and strong generating set for a permutation group (Schreier-Sims).

Each level keeps a Schreier tree: for every orbit point b other than the
base point, ``edge[b]`` names the generator s with ``parent^s = b``.  Coset
representatives are recovered by walking the tree, so memory stays linear
in the degree even for groups on a few thousand points.
"""

import numpy as np

from . import perm as P


class _Level:
    __slots__ = ("point", "gens", "gens_inv", "orbit", "pos", "edge", "parent", "_trans")

    def __init__(self, point, degree):
        self.point = point
        self.gens = []
        self.gens_inv = []
        self.orbit = [point]
        self.pos = np.full(degree, -1, dtype=np.int64)
        self.pos[point] = 0
        self.edge = np.full(degree, -1, dtype=np.int64)
        self.parent = np.full(degree, -1, dtype=np.int64)
        self._trans = None

    def add_gen(self, g):
        """Add a generator and extend the orbit (old tree edges stay valid)."""
        k = len(self.gens)
        self.gens.append(g)
        self.gens_inv.append(P.inv(g))
        self._trans = None
        pos = self.pos
        new = []
        for b in list(self.orbit):
            c = int(g[b])
            if pos[c] < 0:
                pos[c] = len(self.orbit)
                self.orbit.append(c)
                self.edge[c] = k
                self.parent[c] = b
                new.append(c)
        self._grow(new)

    def _grow(self, frontier):
        pos = self.pos
        while frontier:
            nxt = []
            for k, g in enumerate(self.gens):
                imgs = g[np.asarray(frontier)]
                for b, c in zip(frontier, imgs.tolist()):
                    if pos[c] < 0:
                        pos[c] = len(self.orbit)
                        self.orbit.append(c)
                        self.edge[c] = k
                        self.parent[c] = b
                        nxt.append(c)
            frontier = nxt

    def strip(self, g, b):
        """g * u_b^-1, where b = point^g lies in the orbit."""
        edge, parent = self.edge, self.parent
        while b != self.point:
            k = edge[b]
            g = self.gens_inv[k][g]
            b = int(parent[b])
        return g

    def rep(self, b):
        """Coset representative u_b with point^u_b = b."""
        word = []
        while b != self.point:
            word.append(int(self.edge[b]))
            b = int(self.parent[b])
        u = P.identity(len(self.pos))
        for k in reversed(word):
            u = self.gens[k][u]
        return u

    def transversal(self):
        """All coset representatives as a (len(orbit), degree) array."""
        if self._trans is None:
            d = len(self.pos)
            T = np.empty((len(self.orbit), d), dtype=P.dtype_for(d))
            T[0] = np.arange(d)
            for i, b in enumerate(self.orbit[1:], 1):
                pa = self.pos[self.parent[b]]
                T[i] = self.gens[self.edge[b]][T[pa]]
            self._trans = T
        return self._trans


class BSGS:
    """Stabilizer chain of the group generated by ``gens``.

    ``base_prefix`` forces the first base points (used for transporter
    searches).  With ``known_order`` the random phase stops as soon as that
    order is reached; otherwise a deterministic Schreier generator check
    proves completeness unless ``verify`` is False.
    """

    def __init__(self, gens, degree, base_prefix=(), rng=None, known_order=None,
                 verify=True, random_rounds=30):
        self.degree = degree
        self.levels = []
        self._checked = []
        self.complete = False
        gens = [np.asarray(g, dtype=P.dtype_for(degree)) for g in gens]
        gens = [g for g in gens if not P.is_identity(g)]
        self.gens = gens
        for b in base_prefix:
            self._new_level(int(b))
        if gens and not self.levels:
            self._new_level(P.first_moved_point(gens[0]))
        for g in gens:
            self._absorb(g)
        if gens:
            self._close(rng, known_order, verify, random_rounds)
        else:
            self.complete = True

    # -- basic structure ---------------------------------------------------

    @property
    def base(self):
        return [lv.point for lv in self.levels]

    def order(self):
        n = 1
        for lv in self.levels:
            n *= len(lv.orbit)
        return n

    def orbit_lengths(self):
        return [len(lv.orbit) for lv in self.levels]

    def strong_generators(self):
        seen = {}
        for lv in self.levels:
            for g in lv.gens:
                seen.setdefault(P.key(g), g)
        return list(seen.values())

    def _new_level(self, point):
        self.levels.append(_Level(point, self.degree))
        self._checked.append(set())

    def sift(self, g, start=0):
        """Return (residue, level index where sifting stopped)."""
        for j in range(start, len(self.levels)):
            lv = self.levels[j]
            b = int(g[lv.point])
            if lv.pos[b] < 0:
                return g, j
            g = lv.strip(g, b)
        return g, len(self.levels)

    def contains(self, g):
        g = np.asarray(g)
        if len(g) != self.degree:
            return False
        h, j = self.sift(g.astype(P.dtype_for(self.degree)))
        return j == len(self.levels) and P.is_identity(h)

    def _add_strong(self, h, lo, hi):
        """Add h to levels lo..hi, extending the base if hi is past the end."""
        if hi == len(self.levels):
            fixed = set(self.base)
            moved = np.flatnonzero(h != np.arange(self.degree))
            point = next(int(x) for x in moved if int(x) not in fixed)
            self._new_level(point)
        for i in range(lo, hi + 1):
            self.levels[i].add_gen(h)

    def _absorb(self, g, lo=0):
        """Sift g from level lo and add the residue; True if the group grew."""
        h, j = self.sift(g, lo)
        if j == len(self.levels) and P.is_identity(h):
            return False
        self._add_strong(h, lo, j)
        return True

    # -- construction ------------------------------------------------------

    def _close(self, rng, known_order, verify, rounds):
        if rng is None:
            rng = np.random.default_rng(0)
        if known_order is not None or not verify:
            stream = _ProductReplacement(self.gens, rng)
            quiet = 0
            while quiet < rounds:
                if known_order is not None and self.order() >= known_order:
                    break
                quiet = 0 if self._absorb(stream.next()) else quiet + 1
            if known_order is not None and self.order() == known_order:
                self.complete = True
                return
            if known_order is not None and self.order() > known_order:
                raise ValueError("group is larger than the declared order")
        if verify:
            self._schreier_sims()
            self.complete = True

    def _schreier_sims(self):
        i = len(self.levels) - 1
        while i >= 0:
            lv = self.levels[i]
            checked = self._checked[i]
            grew = False
            for b in list(lv.orbit):
                ub = None
                for k in range(len(lv.gens)):
                    if (b, k) in checked:
                        continue
                    checked.add((b, k))
                    if ub is None:
                        ub = lv.rep(b)
                    s = lv.gens[k]
                    c = int(s[b])
                    g = lv.strip(s[ub], c)
                    h, j = self.sift(g, i + 1)
                    if j == len(self.levels) and P.is_identity(h):
                        continue
                    self._add_strong(h, i + 1, j)
                    i = j
                    grew = True
                    break
                if grew:
                    break
            if not grew:
                i -= 1

    def add_generators(self, gens, rng=None, known_order=None, verify=True):
        """Enlarge the group; returns True if the order changed."""
        before = self.order()
        gens = [np.asarray(g, dtype=P.dtype_for(self.degree)) for g in gens]
        gens = [g for g in gens if not P.is_identity(g)]
        if not gens:
            return False
        if not self.levels:
            self._new_level(P.first_moved_point(gens[0]))
        for g in gens:
            if not self.contains(g):
                self.gens.append(g)
                self.levels[0].add_gen(g)
        if self.order() == before and all(self.contains(g) for g in gens):
            return False
        self._close(rng, known_order, verify, 30)
        return self.order() != before

    # -- element access ----------------------------------------------------

    def random_element(self, rng):
        """Uniform random element, as a product of random coset reps."""
        g = P.identity(self.degree)
        for lv in reversed(self.levels):
            b = lv.orbit[int(rng.integers(len(lv.orbit)))]
            g = lv.rep(b)[g]
        return g

    def elements(self, bound=10**6):
        n = self.order()
        if n > bound:
            raise BudgetExceeded(f"group order {n} exceeds the enumeration bound {bound}", n)
        E = P.identity(self.degree)[None, :]
        for lv in reversed(self.levels):
            T = lv.transversal()
            E = T[:, E].reshape(-1, self.degree)
        return E


class BudgetExceeded(RuntimeError):
    """A size or time bound was hit; ``reached`` records how far we got."""

    def __init__(self, message, reached=None):
        super().__init__(message)
        self.reached = reached


class _ProductReplacement:
    """Product replacement walk: 10 slots plus an accumulator, 50 burn-in steps."""

    SLOTS = 10
    BURN_IN = 50

    def __init__(self, gens, rng):
        self.rng = rng
        d = len(gens[0])
        slots = [np.asarray(g) for g in gens]
        while len(slots) < self.SLOTS:
            slots.append(slots[len(slots) % len(gens)])
        self.slots = [s.copy() for s in slots]
        self.acc = P.identity(d)
        for _ in range(self.BURN_IN):
            self.next()

    def next(self):
        n = len(self.slots)
        i = int(self.rng.integers(n))
        j = int(self.rng.integers(n - 1))
        if j >= i:
            j += 1
        a = self.slots[i]
        b = self.slots[j]
        if self.rng.integers(2):
            b = P.inv(b)
        self.slots[i] = b[a] if self.rng.integers(2) else a[b]
        self.acc = self.slots[i][self.acc]
        return self.acc
