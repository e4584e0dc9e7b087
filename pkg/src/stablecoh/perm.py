"""Small permutation groups carried with their full element lists.

Permutations act on the left and compose right-to-left: ``(s * t)(x) = s(t(x))``.
Points are 1-indexed in the cycle notation and 0-indexed internally.
"""
from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

DEFAULT_ORDER_CAP = 20160


class GroupError(ValueError):
    pass


class OrderCapExceeded(GroupError):
    pass


@dataclass(frozen=True, order=True)
class Perm:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise GroupError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(tuple(range(degree)))

    @classmethod
    def from_images(cls, images_1: list[int]) -> "Perm":
        return cls(tuple(i - 1 for i in images_1))

    @classmethod
    def parse(cls, text: str, degree: int) -> "Perm":
        """Parse disjoint-cycle notation such as ``"(1 2)(3 4)"``; ``"()"`` is the identity."""
        text = text.strip()
        if not re.fullmatch(r"(\(\s*(\d+(\s*,?\s*\d+)*)?\s*\))*", text) or not text:
            raise GroupError(f"cannot parse permutation {text!r}")
        img = list(range(degree))
        seen: set[int] = set()
        for cyc in re.findall(r"\(([^)]*)\)", text):
            pts = [int(t) - 1 for t in re.split(r"[\s,]+", cyc.strip()) if t]
            for x in pts:
                if not 0 <= x < degree:
                    raise GroupError(f"point {x + 1} out of range for degree {degree}")
                if x in seen:
                    raise GroupError(f"point {x + 1} repeated in {text!r}")
                seen.add(x)
            for a, b in zip(pts, pts[1:] + pts[:1]):
                img[a] = b
        return cls(tuple(img))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Perm") -> "Perm":
        if other.degree != self.degree:
            raise GroupError("degrees differ")
        s = self.images
        return Perm(tuple(s[i] for i in other.images))

    def inverse(self) -> "Perm":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for start in range(self.degree):
            if start in seen or self.images[start] == start:
                continue
            cyc, x = [], start
            while x not in seen:
                seen.add(x)
                cyc.append(x)
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cs = self.cycles()
        if not cs:
            return "()"
        return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cs)

    def order(self) -> int:
        o, q = 1, self
        while not q.is_identity():
            q = q * self
            o += 1
        return o


class PermGroup:
    """A finite permutation group with a complete, duplicate-free element list.

    ``elements[0]`` is the identity; the remaining order is the breadth-first
    order of closure from the generators, so it is deterministic.
    """

    def __init__(self, degree: int, generators, elements):
        self.degree = degree
        self.generators = tuple(generators)
        self.elements = tuple(elements)
        self.index = {g: i for i, g in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise GroupError("duplicate elements")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g: Perm) -> bool:
        return g in self.index

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators)
        return f"PermGroup(order={self.order}, gens=[{gens}])"

    @cached_property
    def key(self) -> frozenset:
        return frozenset(self.elements)

    @cached_property
    def table(self) -> list[list[int]]:
        """``table[i][j]`` is the index of ``elements[i] * elements[j]``."""
        idx, el = self.index, self.elements
        return [[idx[a * b] for b in el] for a in el]

    @cached_property
    def inverses(self) -> list[int]:
        t = self.table
        return [row.index(0) for row in t]

    @cached_property
    def generator_indices(self) -> list[int]:
        return [self.index[g] for g in self.generators]

    def is_p_group(self, p: int) -> bool:
        n = self.order
        while n % p == 0:
            n //= p
        return n == 1

    def words(self) -> list[list[int]]:
        """A breadth-first normal-form word (generator positions) for every element."""
        out: list[list[int] | None] = [None] * self.order
        out[0] = []
        t, gi = self.table, self.generator_indices
        q = deque([0])
        while q:
            x = q.popleft()
            for k, g in enumerate(gi):
                y = t[x][g]
                if out[y] is None:
                    out[y] = out[x] + [k]
                    q.append(y)
        return out  # type: ignore[return-value]


def close_generators(degree: int, gens, cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    """Breadth-first closure of ``gens`` inside Sym(degree)."""
    gens = [g if isinstance(g, Perm) else Perm(tuple(g)) for g in gens]
    for g in gens:
        if g.degree != degree:
            raise GroupError(f"generator {g} has degree {g.degree}, expected {degree}")
    e = Perm.identity(degree)
    elements, seen = [e], {e}
    q = deque([e])
    while q:
        x = q.popleft()
        for g in gens:
            y = x * g
            if y not in seen:
                seen.add(y)
                elements.append(y)
                if len(elements) > cap:
                    raise OrderCapExceeded(f"group order exceeds cap {cap}")
                q.append(y)
    return PermGroup(degree, gens, elements)


def subgroup_from_indices(G: PermGroup, idx) -> PermGroup:
    """The subgroup of G with the given element indices, generated minimally-ish."""
    idx = sorted(idx)
    gens = _greedy_generators(G, idx)
    return close_generators(G.degree, [G.elements[i] for i in gens])


def _closure_indices(G: PermGroup, seed) -> frozenset[int]:
    t = G.table
    have = {0}
    frontier = list(seed)
    gens = list(seed)
    have.update(seed)
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = t[x][g]
                if y not in have:
                    have.add(y)
                    new.append(y)
        frontier = new
    return frozenset(have)


def _greedy_generators(G: PermGroup, idx) -> list[int]:
    gens: list[int] = []
    cur = frozenset([0])
    target = frozenset(idx)
    for i in sorted(idx):
        if i not in cur:
            gens.append(i)
            cur = _closure_indices(G, gens)
    assert cur == target
    return gens


def subgroups(G: PermGroup, cap: int = 64) -> list[PermGroup]:
    """Every subgroup of G exactly once, ordered by (order, element indices)."""
    if G.order > cap:
        raise OrderCapExceeded(f"subgroup enumeration limited to order {cap}")
    start = frozenset([0])
    found = {start}
    q = deque([start])
    while q:
        h = q.popleft()
        for g in range(G.order):
            if g in h:
                continue
            k = _closure_indices(G, sorted(h | {g}))
            if k not in found:
                found.add(k)
                q.append(k)
    ordered = sorted(found, key=lambda s: (len(s), sorted(s)))
    return [subgroup_from_indices(G, s) for s in ordered]


@dataclass(frozen=True)
class GroupHom:
    """A homomorphism given by the images of the domain's generators."""

    domain: PermGroup
    codomain: PermGroup
    generator_images: tuple[Perm, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if len(self.generator_images) != len(self.domain.generators):
            raise GroupError("need one image per domain generator")
        for g in self.generator_images:
            if g not in self.codomain:
                raise GroupError(f"image {g} is not in the codomain")

    @cached_property
    def element_map(self) -> tuple[int, ...]:
        """Index map domain.elements -> codomain.elements; raises if not a homomorphism."""
        D, C = self.domain, self.codomain
        img = [-1] * D.order
        img[0] = 0
        gi = D.generator_indices
        gimg = [C.index[g] for g in self.generator_images]
        q = deque([0])
        while q:
            x = q.popleft()
            for k, g in enumerate(gi):
                y = D.table[x][g]
                v = C.table[img[x]][gimg[k]]
                if img[y] == -1:
                    img[y] = v
                    q.append(y)
                elif img[y] != v:
                    raise GroupError("generator images do not extend to a homomorphism")
        for a in range(D.order):
            for b in range(D.order):
                if img[D.table[a][b]] != C.table[img[a]][img[b]]:
                    raise GroupError("generator images do not extend to a homomorphism")
        return tuple(img)

    def is_homomorphism(self) -> bool:
        try:
            self.element_map
        except GroupError:
            return False
        return True

    def is_injective(self) -> bool:
        m = self.element_map
        return len(set(m)) == len(m)

    def __call__(self, g: Perm) -> Perm:
        return self.codomain.elements[self.element_map[self.domain.index[g]]]

    def compose(self, first: "GroupHom") -> "GroupHom":
        """``self ∘ first``."""
        if first.codomain.key != self.domain.key:
            raise GroupError("morphisms are not composable")
        imgs = tuple(self(first(g)) for g in first.domain.generators)
        return GroupHom(first.domain, self.codomain, imgs)

    def image(self) -> PermGroup:
        return subgroup_from_indices(self.codomain, set(self.element_map))


def identity_hom(G: PermGroup) -> GroupHom:
    return GroupHom(G, G, G.generators)


def inclusion(Q: PermGroup, P: PermGroup) -> GroupHom:
    """The inclusion of a subgroup Q (same degree, elements inside P)."""
    if Q.degree != P.degree or not Q.key <= P.key:
        raise GroupError("not a subgroup of the ambient group")
    return GroupHom(Q, P, Q.generators)


def _element_orders(G: PermGroup) -> list[int]:
    return [g.order() for g in G.elements]


def injections(Q: PermGroup, P: PermGroup, cap: int = 64) -> list[GroupHom]:
    """All injective homomorphisms Q -> P, ordered by the images of Q's generators."""
    if max(Q.order, P.order) > cap:
        raise OrderCapExceeded(f"injection enumeration limited to order {cap}")
    if Q.order > P.order or P.order % Q.order:
        return []
    qord = [Q.elements[i].order() for i in Q.generator_indices]
    pord = _element_orders(P)
    cands = [[j for j in range(P.order) if pord[j] == o] for o in qord]
    out, seen = [], set()
    for choice in itertools.product(*cands):
        h = GroupHom(Q, P, tuple(P.elements[j] for j in choice))
        try:
            m = h.element_map
        except GroupError:
            continue
        if len(set(m)) != len(m) or m in seen:
            continue
        seen.add(m)
        out.append(h)
    return out


def automorphisms(P: PermGroup) -> list[GroupHom]:
    return injections(P, P)


def cayley_embedding(P: PermGroup) -> GroupHom:
    """Left-translation embedding of P into Sym(|P|) on the element list."""
    n = P.order
    t = P.table
    images = [Perm(tuple(t[g][x] for x in range(n))) for g in P.generator_indices]
    S = close_generators(n, images, cap=max(n, 1))
    return GroupHom(P, S, tuple(images))


@dataclass(frozen=True)
class ConjugatorWitness:
    hom: GroupHom
    conjugator: Perm
    embedding: GroupHom

    def verify(self) -> bool:
        """Check g·λ(q)·g⁻¹ = λ(φ(q)) for every q in Q."""
        P = self.hom.codomain
        lam = _translations(P)
        g, gi = self.conjugator, self.conjugator.inverse()
        Q = self.hom.domain
        for q in Q.elements:
            if g * lam[P.index[q]] * gi != lam[P.index[self.hom(q)]]:
                return False
        return True


def _translations(P: PermGroup) -> list[Perm]:
    t = P.table
    n = P.order
    return [Perm(tuple(t[g][x] for x in range(n))) for g in range(n)]


def find_conjugator(phi: GroupHom) -> ConjugatorWitness:
    """Build g in Sym(|P|) with g λ(q) g⁻¹ = λ(φ(q)) for all q in Q.

    Q acts freely on the set P in two ways, by q·x = qx and by q·x = φ(q)x.
    Both have |P:Q| orbits; matching the orbits through their least
    representatives and setting g(q r) = φ(q) s gives an equivariant bijection.
    """
    Q, P = phi.domain, phi.codomain
    if Q.degree != P.degree or not Q.key <= P.key:
        raise GroupError("domain must be a subgroup of the codomain")
    if not phi.is_injective():
        raise GroupError("φ is not injective")
    t = P.table
    qidx = [P.index[q] for q in Q.elements]
    fidx = [P.index[phi(q)] for q in Q.elements]

    def orbit_reps(acting):
        reps, covered = [], set()
        for x in range(P.order):
            if x not in covered:
                reps.append(x)
                covered.update(t[a][x] for a in acting)
        return reps

    rs, ss = orbit_reps(qidx), orbit_reps(fidx)
    assert len(rs) == len(ss) == P.order // Q.order
    img = [-1] * P.order
    for r, s in zip(rs, ss):
        for a, b in zip(qidx, fidx):
            img[t[a][r]] = t[b][s]
    g = Perm(tuple(img))
    w = ConjugatorWitness(phi, g, cayley_embedding(P))
    assert w.verify()
    return w


def brute_force_conjugators(phi: GroupHom) -> list[Perm]:
    """Every g in Sym(|P|) realizing φ by conjugation (test oracle, |P| <= 8)."""
    P = phi.codomain
    if P.order > 8:
        raise OrderCapExceeded("exhaustive search limited to |P| <= 8")
    lam = _translations(P)
    pairs = [(lam[P.index[q]], lam[P.index[phi(q)]]) for q in phi.domain.generators]
    out = []
    for imgs in itertools.permutations(range(P.order)):
        g = Perm(imgs)
        if all(g * a == b * g for a, b in pairs):
            out.append(g)
    return out
