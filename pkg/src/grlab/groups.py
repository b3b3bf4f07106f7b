"""Finite groups stored as multiplication tables."""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

MAX_ORDER = 1024
_FULL_ASSOC_LIMIT = 64


class GroupError(ValueError):
    """Raised for malformed group data or invalid subgroup requests."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while n > 1:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    return out


class FiniteGroup:
    """A finite group given by its Cayley table.

    ``table[i, j]`` is the index of the product of elements ``i`` and ``j``.
    Instances are immutable after construction; derived data is cached lazily.
    """

    def __init__(self, table, name: str = "G", identity: int | None = None,
                 labels: list[str] | None = None, validate: bool = True):
        table = np.asarray(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise GroupError("table must be a non-empty square array")
        n = table.shape[0]
        if n > MAX_ORDER:
            raise GroupError(f"group order {n} exceeds maximum {MAX_ORDER}")
        if table.min() < 0 or table.max() >= n:
            raise GroupError("table entries out of range")
        ar = np.arange(n)
        if identity is None:
            hits = [e for e in range(n) if np.array_equal(table[e], ar)]
            if not hits:
                raise GroupError("table has no identity row")
            identity = hits[0]
        self.name = name
        self.order = n
        self.table = table
        self.table.setflags(write=False)
        self.identity = int(identity)
        self.labels = labels
        if validate:
            self._validate()

    def _validate(self):
        n, t = self.order, self.table
        ar = np.arange(n)
        e = self.identity
        if not (np.array_equal(t[e], ar) and np.array_equal(t[:, e], ar)):
            raise GroupError("identity row/column is not the identity permutation")
        srt = np.sort(t, axis=1)
        if not (srt == ar).all() or not (np.sort(t, axis=0) == ar[:, None]).all():
            raise GroupError("table is not a Latin square")
        if n <= _FULL_ASSOC_LIMIT:
            lhs = t[t]
            rhs = t[ar[:, None, None], t[None, :, :]]
            ok = np.array_equal(lhs, rhs)
        else:
            rng = np.random.default_rng(0)
            a, b, c = rng.integers(0, n, size=(3, 4096))
            ok = np.array_equal(t[t[a, b], c], t[a, t[b, c]])
        if not ok:
            raise GroupError("table is not associative")

    # -- element arithmetic ---------------------------------------------------

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"

    def __len__(self):
        return self.order

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    @cached_property
    def inverses(self) -> np.ndarray:
        inv = np.argmax(self.table == self.identity, axis=1)
        inv.setflags(write=False)
        return inv

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def power(self, g: int, n: int) -> int:
        if n < 0:
            g, n = self.inv(g), -n
        out, base = self.identity, g
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def conj(self, g: int, h: int) -> int:
        """Return h^-1 g h."""
        return int(self.table[self.inverses[h], self.table[g, h]])

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        ar = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        cur = ar.copy()
        for k in range(1, n + 1):
            hit = (cur == self.identity) & (orders == 0)
            orders[hit] = k
            if (orders > 0).all():
                break
            cur = self.table[cur, ar]
        orders.setflags(write=False)
        return orders

    def element_order(self, g: int) -> int:
        return int(self.element_orders[g])

    def label(self, g: int) -> str:
        return self.labels[g] if self.labels else str(g)

    # -- conjugacy ------------------------------------------------------------

    @cached_property
    def conjugacy_classes(self) -> tuple[tuple[int, ...], ...]:
        """Classes as sorted index tuples, ordered by their minimal element."""
        n = self.order
        ar = np.arange(n)
        seen = np.full(n, -1)
        classes = []
        for g in range(n):
            if seen[g] >= 0:
                continue
            orbit = np.unique(self.table[self.table[self.inverses, g], ar])
            seen[orbit] = len(classes)
            classes.append(tuple(int(x) for x in orbit))
        return tuple(classes)

    @cached_property
    def class_index(self) -> np.ndarray:
        idx = np.zeros(self.order, dtype=np.int64)
        for c, cls in enumerate(self.conjugacy_classes):
            idx[list(cls)] = c
        idx.setflags(write=False)
        return idx

    def class_of(self, g: int) -> int:
        return int(self.class_index[g])

    def centralizer(self, g: int) -> "Subgroup":
        elems = np.nonzero(self.table[:, g] == self.table[g, :])[0]
        return Subgroup(self, tuple(int(x) for x in elems))

    def centralizer_order(self, g: int) -> int:
        return int((self.table[:, g] == self.table[g, :]).sum())

    def center(self) -> "Subgroup":
        elems = [g for g in range(self.order) if len(self.conjugacy_classes[self.class_of(g)]) == 1]
        return Subgroup(self, tuple(elems))

    def p_regular_classes(self, p: int) -> list[int]:
        """Indices of classes whose elements have order prime to p."""
        if not is_prime(p):
            raise GroupError(f"{p} is not prime")
        return [c for c, cls in enumerate(self.conjugacy_classes)
                if self.element_order(cls[0]) % p != 0]

    def p_singular_classes(self, p: int) -> list[int]:
        reg = set(self.p_regular_classes(p))
        return [c for c in range(len(self.conjugacy_classes)) if c not in reg]

    def p_decomposition(self, g: int, p: int) -> tuple[int, int]:
        """Split g into commuting p-part and p'-part via exponent CRT."""
        if not is_prime(p):
            raise GroupError(f"{p} is not prime")
        n = self.element_order(g)
        q = 1
        while n % (q * p) == 0:
            q *= p
        m = n // q
        # s*m + t*q == 1
        s = pow(m, -1, q) if q > 1 else 0
        t = (1 - s * m) // q
        return self.power(g, s * m), self.power(g, t * q)

    def is_p_element(self, g: int, p: int) -> bool:
        n = self.element_order(g)
        while n % p == 0:
            n //= p
        return n == 1

    # -- subgroups ------------------------------------------------------------

    def subgroup(self, elements) -> "Subgroup":
        return Subgroup(self, tuple(sorted({int(x) for x in elements})))

    def generated_subgroup(self, gens) -> "Subgroup":
        elems = {self.identity}
        frontier = deque([self.identity])
        gens = [int(g) for g in gens]
        while frontier:
            a = frontier.popleft()
            for g in gens:
                b = self.mul(a, g)
                if b not in elems:
                    elems.add(b)
                    frontier.append(b)
        return Subgroup(self, tuple(sorted(elems)))

    def cyclic_subgroup(self, g: int) -> "Subgroup":
        return self.generated_subgroup([g])

    def normal_closure(self, gens) -> "Subgroup":
        conj = {self.conj(g, h) for g in gens for h in range(self.order)}
        return self.generated_subgroup(sorted(conj))

    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)))

    def trivial(self) -> "Subgroup":
        return Subgroup(self, (self.identity,))

    def p_core(self, p: int) -> "Subgroup":
        """Largest normal p-subgroup O_p(G)."""
        elems = []
        for g in range(self.order):
            if not self.is_p_element(g, p):
                continue
            n = len(self.normal_closure([g]))
            while n % p == 0:
                n //= p
            if n == 1:
                elems.append(g)
        return self.subgroup(elems)

    def right_transversal(self, K: "Subgroup", H: "Subgroup") -> list[int]:
        """One representative per right coset Kg of K in H; the first lies in K."""
        if not set(K.elements) <= set(H.elements):
            raise GroupError("K is not contained in H")
        covered, reps = set(), []
        for g in H.elements:
            if g in covered:
                continue
            reps.append(g)
            covered.update(self.mul(k, g) for k in K.elements)
        return reps

    def quotient(self, N: "Subgroup") -> tuple["FiniteGroup", np.ndarray]:
        if not N.normal:
            raise GroupError("subgroup is not normal")
        proj = np.full(self.order, -1, dtype=np.int64)
        reps = []
        for g in range(self.order):
            if proj[g] >= 0:
                continue
            proj[[self.mul(g, x) for x in N.elements]] = len(reps)
            reps.append(g)
        table = np.array([[proj[self.mul(a, b)] for b in reps] for a in reps], dtype=np.int64)
        name = f"{self.name}/{N.label()}"
        return FiniteGroup(table, name=name, identity=int(proj[self.identity])), proj

    def describe(self) -> dict:
        return {
            "name": self.name,
            "order": self.order,
            "classes": [list(c) for c in self.conjugacy_classes],
            "class_sizes": [len(c) for c in self.conjugacy_classes],
            "element_orders": [int(x) for x in self.element_orders],
        }


@dataclass(frozen=True)
class Subgroup:
    group: FiniteGroup
    elements: tuple[int, ...]

    def __post_init__(self):
        g, s = self.group, set(self.elements)
        if g.identity not in s:
            raise GroupError("subgroup must contain the identity")
        for a in self.elements:
            if g.inv(a) not in s or any(g.mul(a, b) not in s for b in self.elements):
                raise GroupError("element set is not closed under products and inverses")

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g):
        return g in self._set

    @cached_property
    def _set(self):
        return frozenset(self.elements)

    @cached_property
    def normal(self) -> bool:
        g = self.group
        return all(g.conj(a, h) in self._set for a in self.elements for h in range(g.order))

    def as_group(self) -> tuple[FiniteGroup, list[int]]:
        """Return the subgroup as a standalone FiniteGroup plus the embedding."""
        pos = {a: i for i, a in enumerate(self.elements)}
        g = self.group
        table = [[pos[g.mul(a, b)] for b in self.elements] for a in self.elements]
        sub = FiniteGroup(table, name=f"{g.name}[{len(self)}]",
                          identity=pos[g.identity], validate=False)
        return sub, list(self.elements)

    def label(self) -> str:
        return "{" + ",".join(str(x) for x in self.elements) + "}"


# -- construction -------------------------------------------------------------

def _perm_mul(a: tuple, b: tuple) -> tuple:
    # apply a first, then b
    return tuple(b[i] for i in a)


def from_permutations(generators, degree: int | None = None, name: str = "G",
                      max_order: int = MAX_ORDER) -> FiniteGroup:
    """Close a list of permutations (images of 0..d-1) breadth first."""
    gens = [tuple(int(x) for x in g) for g in generators]
    if degree is None:
        degree = len(gens[0]) if gens else 1
    for g in gens:
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise GroupError(f"generator {list(g)} is not a permutation of 0..{degree - 1}")
    ident = tuple(range(degree))
    index = {ident: 0}
    elems = [ident]
    queue = deque([ident])
    while queue:
        a = queue.popleft()
        for g in gens:
            b = _perm_mul(a, g)
            if b not in index:
                if len(elems) >= max_order:
                    raise GroupError(f"closure exceeds maximum order {max_order}")
                index[b] = len(elems)
                elems.append(b)
                queue.append(b)
    table = np.array([[index[_perm_mul(a, b)] for b in elems] for a in elems], dtype=np.int64)
    labels = [perm_label(e) for e in elems]
    grp = FiniteGroup(table, name=name, identity=0, labels=labels)
    grp.permutations = elems
    return grp


def perm_label(perm: tuple) -> str:
    seen, cycles = set(), []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = perm[j]
        cycles.append("(" + " ".join(str(c) for c in cyc) + ")")
    return "".join(cycles) or "()"


def from_table(table, name: str = "G") -> FiniteGroup:
    return FiniteGroup(table, name=name)


def load_group(data) -> FiniteGroup:
    """Build a group from a JSON file path or an already-parsed dict."""
    if isinstance(data, (str, Path)):
        data = json.loads(Path(data).read_text())
    if not isinstance(data, dict):
        raise GroupError("group spec must be a JSON object")
    name = data.get("name", "G")
    if "table" in data:
        grp = FiniteGroup(data["table"], name=name)
        if "order" in data and data["order"] != grp.order:
            raise GroupError("declared order does not match table")
        return grp
    if "generators" in data:
        return from_permutations(data["generators"], data.get("degree"), name=name)
    raise GroupError("group spec needs 'table' or 'generators'")


def orbit_stabilizer_ok(G: FiniteGroup) -> bool:
    return all(G.centralizer_order(g) * len(G.conjugacy_classes[G.class_of(g)]) == G.order
               for g in range(G.order))

