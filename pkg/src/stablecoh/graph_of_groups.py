"""Presentations of the fundamental group Γ of the category's graph of groups,
and its finite quotient in Sym(|P|) built from translation conjugators.
"""
from __future__ import annotations

from dataclasses import dataclass

import sympy.combinatorics as sc

from .catalog import generator_names
from .perm import Perm, PermGroup, cayley_embedding, find_conjugator, inclusion
from .stable import ABSTRACT, AMBIENT, SUBGROUP, CategoryError, CategorySpec, require_valid

# a word is a list of (generator name, exponent ±1)
Word = list[tuple[str, int]]


def free_reduce(w: Word) -> Word:
    out: Word = []
    for x in w:
        if out and out[-1][0] == x[0] and out[-1][1] == -x[1]:
            out.pop()
        else:
            out.append(x)
    return out


def invert(w: Word) -> Word:
    return [(g, -e) for g, e in reversed(w)]


def _cyclic_key(w: Word) -> tuple:
    w = free_reduce(w)
    while len(w) > 1 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    if not w:
        return ()
    rots = [tuple(w[i:] + w[:i]) for i in range(len(w))]
    inv = invert(w)
    rots += [tuple(inv[i:] + inv[:i]) for i in range(len(inv))]
    return min(rots)


def format_word(w: Word) -> str:
    return " ".join(g + ("'" if e < 0 else "") for g, e in w)


def parse_word(text: str) -> Word:
    out: Word = []
    for tok in text.split():
        if tok.endswith("'"):
            out.append((tok[:-1], -1))
        else:
            out.append((tok, 1))
    return out


@dataclass
class GammaPresentation:
    generators: list[str]
    relations: list[Word]
    vertex_relation_count: int = 0

    def to_text(self) -> str:
        lines = [f"gen {g}" for g in self.generators]
        lines += [f"rel {format_word(r)}" for r in self.relations]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "GammaPresentation":
        gens, rels = [], []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            kind, _, rest = line.partition(" ")
            if kind == "gen":
                gens.append(rest.strip())
            elif kind == "rel":
                rels.append(parse_word(rest))
            else:
                raise ValueError(f"bad presentation line {line!r}")
        for r in rels:
            for g, _ in r:
                if g not in gens:
                    raise ValueError(f"relation uses undeclared generator {g!r}")
        return cls(gens, rels)

    def __eq__(self, other):
        return (isinstance(other, GammaPresentation) and self.generators == other.generators
                and self.relations == other.relations)


class _Namer:
    """Generator names and normal-form words for one vertex group."""

    def __init__(self, G: PermGroup, prefix: str = ""):
        self.G = G
        self.names = [prefix + x for x in generator_names(G)]
        self._words = G.words()

    def word(self, g: Perm) -> Word:
        return [(self.names[k], 1) for k in self._words[self.G.index[g]]]

    def table_relations(self) -> list[Word]:
        """Relations from the non-tree edges of the Cayley graph, up to cyclic equivalence."""
        G, t = self.G, self.G.table
        seen, rels = set(), []
        for x in range(G.order):
            for k, s in enumerate(G.generator_indices):
                y = t[x][s]
                w = ([(self.names[j], 1) for j in self._words[x]] + [(self.names[k], 1)]
                     + invert([(self.names[j], 1) for j in self._words[y]]))
                key = _cyclic_key(w)
                if not key or key in seen:
                    continue
                seen.add(key)
                rels.append(free_reduce(w))
        return rels


def _check_single(names: list[str]):
    if len(set(names)) != len(names):
        raise CategoryError("generator names collide")


def gamma_presentation(C: CategorySpec) -> GammaPresentation:
    """Generators of the vertex groups plus stable letters t1..tN, with their relations."""
    rep = require_valid(C)
    if C.mode == SUBGROUP:
        P = C.ambient
        nm = _Namer(P)
        gens = list(nm.names)
        rels = nm.table_relations()
        vrel = len(rels)
        for i, m in enumerate(C.morphisms, 1):
            t = f"t{i}"
            gens.append(t)
            to_p = inclusion(C.objects[m.target], P).compose(m.hom)
            for q in m.hom.domain.generators:
                rels.append([(t, 1)] + nm.word(q) + [(t, -1)] + invert(nm.word(to_p(q))))
        _check_single(gens)
        return GammaPresentation(gens, rels, vrel)
    if not rep.connected:
        raise CategoryError("abstract category is not connected; no single Γ exists")
    namers = {o: _Namer(G, f"{o}.") for o, G in C.objects.items()}
    gens, rels = [], []
    for nm in namers.values():
        gens += nm.names
        rels += nm.table_relations()
    vrel = len(rels)
    # spanning tree over objects in morphism order; the rest become stable letters
    parent = {o: o for o in C.objects}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    k = 0
    for m in C.morphisms:
        src, tgt = namers[m.source], namers[m.target]
        a, b = find(m.source), find(m.target)
        if a != b:
            parent[a] = b
            for q in m.hom.domain.generators:
                rels.append(src.word(q) + invert(tgt.word(m.hom(q))))
        else:
            k += 1
            t = f"t{k}"
            gens.append(t)
            for q in m.hom.domain.generators:
                rels.append([(t, 1)] + src.word(q) + [(t, -1)] + invert(tgt.word(m.hom(q))))
    _check_single(gens)
    return GammaPresentation(gens, rels, vrel)


@dataclass
class FiniteQuotientReport:
    images: dict[str, Perm]
    image_order: int
    bound_factorial_of: int
    relations_ok: bool
    injective_on_P: bool
    conjugation_ok: bool

    @property
    def divides_bound(self) -> bool:
        import math
        return math.factorial(self.bound_factorial_of) % self.image_order == 0

    @property
    def ok(self) -> bool:
        return self.relations_ok and self.injective_on_P and self.conjugation_ok and self.divides_bound

    def as_dict(self) -> dict:
        return {"images": {k: str(v) for k, v in self.images.items()},
                "image_order": self.image_order, "M": self.bound_factorial_of,
                "divides_M_factorial": self.divides_bound, "relations_ok": self.relations_ok,
                "injective_on_P": self.injective_on_P, "conjugation_ok": self.conjugation_ok}


def evaluate(word: Word, images: dict[str, Perm], degree: int) -> Perm:
    out = Perm.identity(degree)
    for g, e in word:
        x = images[g]
        out = out * (x if e > 0 else x.inverse())
    return out


def perm_group_order(degree: int, gens: list[Perm]) -> int:
    """Order of the permutation group generated by ``gens`` (Schreier-Sims via sympy)."""
    if not gens:
        return 1
    return int(sc.PermutationGroup([sc.Permutation(list(g.images)) for g in gens]).order())


def finite_quotient(C: CategorySpec, presentation: GammaPresentation | None = None) -> FiniteQuotientReport:
    """Map Γ to Sym(|P|): P by left translation, each t_i to a conjugator realizing φ_i."""
    if C.mode != SUBGROUP:
        raise CategoryError("the finite quotient is built in subgroup mode only")
    require_valid(C)
    pres = presentation or gamma_presentation(C)
    P = C.ambient
    M = P.order
    cay = cayley_embedding(P)
    names = generator_names(P)
    images = {nm: img for nm, img in zip(names, cay.generator_images)}
    conj_ok = True
    lam = {g: cay(g) for g in P.elements}
    for i, m in enumerate(C.morphisms, 1):
        to_p = inclusion(C.objects[m.target], P).compose(m.hom)
        w = find_conjugator(to_p)
        images[f"t{i}"] = w.conjugator
        g, gi = w.conjugator, w.conjugator.inverse()
        conj_ok &= all(g * lam[q] * gi == lam[to_p(q)] for q in m.hom.domain.elements)
    rel_ok = all(evaluate(r, images, M).is_identity() for r in pres.relations)
    inj = len({lam[g] for g in P.elements}) == P.order
    order = perm_group_order(M, list(images.values()))
    return FiniteQuotientReport(images, order, M, rel_ok, inj, conj_ok)
