"""Built-in p-groups, each realized by its left regular representation."""
from __future__ import annotations

import itertools
from typing import Callable, Hashable

from .perm import Perm, PermGroup, close_generators


def regular_group(elements: list[Hashable], mul: Callable, gens: list[Hashable]) -> PermGroup:
    """Left regular representation of an abstract group given by a multiplication."""
    pos = {x: i for i, x in enumerate(elements)}
    perms = [Perm(tuple(pos[mul(g, x)] for x in elements)) for g in gens]
    return close_generators(len(elements), perms)


def cyclic(n: int) -> PermGroup:
    return regular_group(list(range(n)), lambda a, b: (a + b) % n, [1])


def abelian(moduli: tuple[int, ...]) -> PermGroup:
    # first coordinate varies fastest, so klein4's a acts as (1 2)(3 4)
    els = [t[::-1] for t in itertools.product(*[range(m) for m in reversed(moduli)])]
    gens = [tuple(int(i == k) for i in range(len(moduli))) for k in range(len(moduli))]

    def mul(a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, moduli))

    return regular_group(els, mul, gens)


def dihedral8() -> PermGroup:
    # (k, f) stands for r^k s^f with s r s = r^-1
    els = [(k, f) for f in (0, 1) for k in range(4)]

    def mul(a, b):
        k1, f1 = a
        k2, f2 = b
        return ((k1 + (-k2 if f1 else k2)) % 4, f1 ^ f2)

    return regular_group(els, mul, [(1, 0), (0, 1)])


def quaternion8() -> PermGroup:
    # unit quaternions ±1, ±i, ±j, ±k as (sign, axis)
    prod = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    els = [(s, a) for s in (1, -1) for a in range(4)]

    def mul(x, y):
        s, a = prod[(x[1], y[1])]
        return (x[0] * y[0] * s, a)

    return regular_group(els, mul, [(1, 1), (1, 2)])


# name -> (builder, natural prime)
CATALOG: dict[str, tuple[Callable[[], PermGroup], int]] = {
    "z2": (lambda: cyclic(2), 2),
    "z4": (lambda: cyclic(4), 2),
    "z8": (lambda: cyclic(8), 2),
    "z16": (lambda: cyclic(16), 2),
    "z3": (lambda: cyclic(3), 3),
    "z9": (lambda: cyclic(9), 3),
    "z5": (lambda: cyclic(5), 5),
    "z7": (lambda: cyclic(7), 7),
    "klein4": (lambda: abelian((2, 2)), 2),
    "e2_3": (lambda: abelian((2, 2, 2)), 2),
    "e2_4": (lambda: abelian((2, 2, 2, 2)), 2),
    "e3_2": (lambda: abelian((3, 3)), 3),
    "z4xz2": (lambda: abelian((4, 2)), 2),
    "d8": (dihedral8, 2),
    "q8": (quaternion8, 2),
}

ALIASES = {"e2_2": "klein4", "c2": "z2", "c4": "z4", "q_8": "q8", "d_8": "d8"}

_cache: dict[str, PermGroup] = {}


def group(name: str) -> PermGroup:
    key = ALIASES.get(name.lower(), name.lower())
    if key not in CATALOG:
        raise KeyError(f"unknown group {name!r}; known: {', '.join(sorted(CATALOG))}")
    if key not in _cache:
        _cache[key] = CATALOG[key][0]()
    return _cache[key]


def natural_prime(name: str) -> int:
    key = ALIASES.get(name.lower(), name.lower())
    return CATALOG[key][1]


def elementary_abelian(n: int) -> PermGroup:
    return abelian((2,) * n)


def generator_names(G: PermGroup) -> list[str]:
    """Letters a, b, c, ... for the generators of G."""
    if len(G.generators) > 26:
        raise ValueError("too many generators to name")
    return [chr(ord("a") + i) for i in range(len(G.generators))]
