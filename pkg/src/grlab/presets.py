"""Built-in groups used by the verification corpus."""
from __future__ import annotations

import itertools
from functools import lru_cache

from .groups import FiniteGroup, GroupError, Subgroup, from_permutations, prime_divisors


def _cycle(n):
    return list(range(1, n)) + [0]


def _q8_generators():
    # quaternion units as (sign, axis) with axis in 1,i,j,k; regular action by right mult
    table = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    elems = [(s, a) for s in (1, -1) for a in range(4)]
    pos = {e: i for i, e in enumerate(elems)}

    def right(g):
        out = []
        for s, a in elems:
            t, b = table[(a, g[1])]
            out.append(pos[(s * g[0] * t, b)])
        return out

    return [right((1, 1)), right((1, 2))]


def _sl23_generators():
    vecs = [v for v in itertools.product(range(3), repeat=2) if v != (0, 0)]
    pos = {v: i for i, v in enumerate(vecs)}

    def act(m):
        return [pos[((m[0][0] * x + m[0][1] * y) % 3, (m[1][0] * x + m[1][1] * y) % 3)]
                for x, y in vecs]

    return [act(((1, 1), (0, 1))), act(((0, 2), (1, 0)))]


_PRESETS = {
    "C2": lambda: [[1, 0]],
    "C3": lambda: [_cycle(3)],
    "C4": lambda: [_cycle(4)],
    "C2xC2": lambda: [[1, 0, 2, 3], [0, 1, 3, 2]],
    "S3": lambda: [[1, 0, 2], [1, 2, 0]],
    "D4": lambda: [_cycle(4), [0, 3, 2, 1]],
    "Q8": _q8_generators,
    "C3:C4": lambda: [[1, 2, 0, 3, 4, 5, 6], [0, 2, 1, 4, 5, 6, 3]],
    "A4": lambda: [[1, 2, 0, 3], [1, 0, 3, 2]],
    "D6": lambda: [_cycle(6), [0, 5, 4, 3, 2, 1]],
    "S4": lambda: [[1, 0, 2, 3], _cycle(4)],
    "SL(2,3)": _sl23_generators,
}

_ALIASES = {"C2×C2": "C2xC2", "C3⋊C4": "C3:C4", "SL23": "SL(2,3)", "Dic3": "C3:C4"}

PRESET_NAMES = tuple(_PRESETS)


def resolve_name(name: str) -> str:
    name = _ALIASES.get(name, name)
    if name not in _PRESETS:
        raise GroupError(f"unknown preset group {name!r}")
    return name


def preset(name: str) -> FiniteGroup:
    return _build(resolve_name(name))


@lru_cache(maxsize=None)
def _build(name: str) -> FiniteGroup:
    return from_permutations(_PRESETS[name](), name=name)


def designated_normal_subgroups(G: FiniteGroup) -> dict[int, Subgroup]:
    """Nontrivial O_p(G) per prime dividing |G|; the centre when G is a p-group."""
    out = {}
    for p in prime_divisors(G.order):
        N = G.p_core(p)
        if len(N) == G.order:
            N = G.center()
        if len(N) > 1:
            out[p] = N
    return out
