"""Brute-force references for small algebras, independent of the package's solvers.

Elements of (F_p G)^<x> are enumerated as coefficient tuples constant on the
orbits of conjugation by x; products use only the Cayley table.
"""
import itertools


class SmallFixedRing:
    def __init__(self, G, p, x):
        n = G.order
        t = [list(map(int, row)) for row in G.table]
        e = next(i for i in range(n) if t[i] == list(range(n)))
        inv = [next(j for j in range(n) if t[i][j] == e) for i in range(n)]
        xi = inv[x]
        seen, orbits = set(), []
        for g in range(n):
            if g in seen:
                continue
            orb, h = [], g
            while h not in orb:
                orb.append(h)
                h = t[t[xi][h]][x]
            seen.update(orb)
            orbits.append(orb)
        self.n, self.p, self.t, self.identity = n, p, t, e
        self.orbits = orbits
        self.dim = len(orbits)
        self.one = self._vec([1 if e in o else 0 for o in orbits])
        self.zero = (0,) * n
        self.elements = [self._vec(c) for c in itertools.product(range(p), repeat=self.dim)]

    def _vec(self, coords):
        v = [0] * self.n
        for c, orb in zip(coords, self.orbits):
            for g in orb:
                v[g] = c % self.p
        return tuple(v)

    def mul(self, a, b):
        out = [0] * self.n
        for i, ai in enumerate(a):
            if ai:
                row = self.t[i]
                for j, bj in enumerate(b):
                    if bj:
                        out[row[j]] += ai * bj
        return tuple(v % self.p for v in out)

    def add(self, a, b):
        return tuple((u + v) % self.p for u, v in zip(a, b))

    def sub(self, a, b):
        return tuple((u - v) % self.p for u, v in zip(a, b))

    def idempotents(self):
        return [e for e in self.elements if self.mul(e, e) == e]

    def units(self):
        out = {}
        for u in self.elements:
            for v in self.elements:
                if self.mul(u, v) == self.one:
                    out[u] = v
                    break
        return out

    def radical(self):
        """a with ab nilpotent for every b."""
        def nilpotent(a):
            c = a
            for _ in range(self.dim + 1):
                if c == self.zero:
                    return True
                c = self.mul(c, a)
            return c == self.zero
        return [a for a in self.elements if all(nilpotent(self.mul(a, b)) for b in self.elements)]

    def primitive_idempotents(self):
        idem = self.idempotents()
        return [e for e in idem if e != self.zero and not any(
            f not in (self.zero, e) and self.mul(e, f) == f and self.mul(f, e) == f for f in idem)]

    def conjugacy_orbits(self, idems):
        units = self.units()
        orbit_of = {}
        orbits = []
        for e in idems:
            if e in orbit_of:
                continue
            orb = {self.mul(self.mul(v, e), u) for u, v in units.items()}
            for f in orb:
                orbit_of[f] = len(orbits)
            orbits.append(orb)
        return orbit_of, orbits

    def primitive_decomposition(self):
        """Some orthogonal primitive decomposition of 1, by depth-first search."""
        prims = self.primitive_idempotents()

        def search(rest, chosen):
            if rest == self.zero:
                return chosen
            for e in prims:
                if self.mul(rest, e) == e and self.mul(e, rest) == e:
                    got = search(self.sub(rest, e), chosen + [e])
                    if got is not None:
                        return got
            return None
        return search(self.one, [])
