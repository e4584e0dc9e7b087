"""Limits of mod-p cohomology over categories of p-groups.

A category is given literally: named objects and a list of injective
morphisms.  In subgroup mode every object is a subgroup of the ambient group
``P`` and the limit is computed inside H*(P) as the joint kernel of the maps
Res^P_Q - (ι∘φ)^*.  In abstract mode the objects are unrelated groups and the
limit is the space of compatible tuples in ⊕_Q H*(Q).
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .linalg import FpMatrix, Subspace, kernel_basis, mat_mul, rank
from .perm import (GroupError, GroupHom, Perm, PermGroup, close_generators, identity_hom,
                   inclusion, injections, subgroups)
from .resolution import Resolution, induced_maps, resolution_for, cup_matrix, CohomClass

SUBGROUP = "subgroup"
ABSTRACT = "abstract"
AMBIENT = "P"


class CategoryError(ValueError):
    pass


@dataclass(frozen=True)
class Morphism:
    source: str
    target: str
    hom: GroupHom


@dataclass
class CategorySpec:
    prime: int
    mode: str
    objects: dict[str, PermGroup]
    morphisms: list[Morphism]
    label: str = ""

    @property
    def ambient(self) -> PermGroup:
        return self.objects[AMBIENT]

    def restricted(self, keep) -> "CategorySpec":
        """Same objects, morphisms filtered by ``keep``."""
        return CategorySpec(self.prime, self.mode, dict(self.objects),
                            [m for m in self.morphisms if keep(m)], self.label)

    def __repr__(self):
        return (f"CategorySpec({self.label or self.mode}, p={self.prime}, "
                f"{len(self.objects)} objects, {len(self.morphisms)} morphisms)")


def threads() -> int | None:
    """Worker cap from STABLECOH_THREADS; None means let the pool decide."""
    v = int(os.environ.get("STABLECOH_THREADS", "0") or 0)
    return v if v > 0 else None


# ---------------------------------------------------------------- validation

@dataclass
class ValidationReport:
    valid: bool
    problems: list[str]
    components: list[list[str]]
    completion: CategorySpec | None = None

    @property
    def connected(self) -> bool:
        return len(self.components) == 1


def _components(C: CategorySpec) -> list[list[str]]:
    parent = {o: o for o in C.objects}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for m in C.morphisms:
        if m.source in parent and m.target in parent:
            parent[find(m.source)] = find(m.target)
    groups: dict[str, list[str]] = {}
    for o in C.objects:
        groups.setdefault(find(o), []).append(o)
    return list(groups.values())


def trivial_group() -> PermGroup:
    return close_generators(1, [])


def plus_completion(C: CategorySpec) -> CategorySpec:
    """Adjoin a trivial group as an initial object."""
    T = trivial_group()
    name = "1"
    while name in C.objects:
        name += "'"
    objs = {name: T, **C.objects}
    morphs = [Morphism(name, o, GroupHom(T, G, ())) for o, G in C.objects.items()]
    return CategorySpec(C.prime, ABSTRACT, objs, morphs + list(C.morphisms), C.label + "+")


def validate_category(C: CategorySpec) -> ValidationReport:
    problems: list[str] = []
    if C.mode not in (SUBGROUP, ABSTRACT):
        problems.append(f"unknown mode {C.mode!r}")
    for i, m in enumerate(C.morphisms):
        tag = f"morphism #{i} {m.source}->{m.target}"
        if m.source not in C.objects or m.target not in C.objects:
            problems.append(f"{tag} connects an unlisted object")
            continue
        if m.hom.domain.key != C.objects[m.source].key or m.hom.codomain.key != C.objects[m.target].key:
            problems.append(f"{tag} has domain/codomain different from its objects")
            continue
        try:
            if not m.hom.is_injective():
                problems.append(f"{tag} is not injective")
        except GroupError as e:
            problems.append(f"{tag}: {e}")
    for name, G in C.objects.items():
        if not G.is_p_group(C.prime):
            problems.append(f"object {name} is not a {C.prime}-group")
    if C.mode == SUBGROUP:
        if AMBIENT not in C.objects:
            problems.append("subgroup mode needs the ambient object P")
        else:
            P = C.ambient
            for name, Q in C.objects.items():
                if Q.degree != P.degree or not Q.key <= P.key:
                    problems.append(f"object {name} is not a subgroup of P")
                    continue
                incl = inclusion(Q, P).element_map
                has = any(m.source == name and m.target == AMBIENT and not _broken(m)
                          and m.hom.element_map == incl for m in C.morphisms)
                if not has:
                    problems.append(f"object {name}: inclusion into P is not a listed morphism")
    comps = _components(C)
    completion = plus_completion(C) if C.mode == ABSTRACT and len(comps) > 1 else None
    return ValidationReport(not problems, problems, comps, completion)


def _broken(m: Morphism) -> bool:
    return not m.hom.is_homomorphism()


def require_valid(C: CategorySpec) -> ValidationReport:
    rep = validate_category(C)
    if not rep.valid:
        raise CategoryError("; ".join(rep.problems))
    return rep


# ---------------------------------------------------------------- presets

def identity_category(P: PermGroup, p: int) -> CategorySpec:
    return CategorySpec(p, SUBGROUP, {AMBIENT: P}, [Morphism(AMBIENT, AMBIENT, identity_hom(P))],
                        "identity")


def aut_category(P: PermGroup, p: int, homs: list[GroupHom] | None = None) -> CategorySpec:
    """One object P with the given automorphisms (default: all of Aut(P))."""
    homs = injections(P, P) if homs is None else homs
    return CategorySpec(p, SUBGROUP, {AMBIENT: P}, [Morphism(AMBIENT, AMBIENT, h) for h in homs],
                        "aut")


def cu_category(P: PermGroup, p: int) -> CategorySpec:
    """All subgroups of P with all injective homomorphisms between them."""
    objs: dict[str, PermGroup] = {}
    k = 0
    for Q in subgroups(P):
        if Q.key == P.key:
            continue
        k += 1
        objs[f"Q{k}"] = Q
    objs[AMBIENT] = P
    morphs = []
    for s, Qs in objs.items():
        for t, Qt in objs.items():
            for h in injections(Qs, Qt):
                morphs.append(Morphism(s, t, h))
    return CategorySpec(p, SUBGROUP, objs, morphs, "cu")


def as_abstract(C: CategorySpec) -> CategorySpec:
    """The same category with the ambient structure forgotten."""
    return CategorySpec(C.prime, ABSTRACT, dict(C.objects), list(C.morphisms), C.label + "/abstract")


# ---------------------------------------------------------------- file format

def _group_from_json(d: dict) -> PermGroup:
    deg = int(d["degree"])
    return close_generators(deg, [Perm.parse(g, deg) for g in d.get("generators", [])])


def category_from_json(data: dict) -> CategorySpec:
    try:
        p = int(data["prime"])
        mode = data.get("mode", SUBGROUP)
        objs: dict[str, PermGroup] = {}
        if mode == SUBGROUP:
            amb = data["ambient"]
            P = _group_from_json(amb)
            for o in data.get("objects", []):
                if o["name"] == AMBIENT:
                    continue
                objs[o["name"]] = close_generators(P.degree, [Perm.parse(g, P.degree) for g in o["generators"]])
            objs[AMBIENT] = P
        else:
            for o in data["objects"]:
                objs[o["name"]] = _group_from_json(o)
        morphs = []
        for i, m in enumerate(data.get("morphisms", [])):
            s, t = m["from"], m["to"]
            if s not in objs or t not in objs:
                raise CategoryError(f"morphism #{i} refers to unknown object {s if s not in objs else t!r}")
            D, T = objs[s], objs[t]
            imgs = tuple(Perm.parse(x, T.degree) for x in m["images"])
            morphs.append(Morphism(s, t, GroupHom(D, T, imgs)))
    except KeyError as e:
        raise CategoryError(f"missing field {e}") from None
    except GroupError as e:
        raise CategoryError(str(e)) from None
    return CategorySpec(p, mode, objs, morphs, data.get("label", "user"))


def category_to_json(C: CategorySpec) -> dict:
    def gens(G):
        return [str(g) for g in G.generators]

    out: dict = {"prime": C.prime, "mode": C.mode}
    if C.label:
        out["label"] = C.label
    if C.mode == SUBGROUP:
        out["ambient"] = {"degree": C.ambient.degree, "generators": gens(C.ambient)}
        out["objects"] = [{"name": n, "generators": gens(G)} for n, G in C.objects.items() if n != AMBIENT]
    else:
        out["objects"] = [{"name": n, "degree": G.degree, "generators": gens(G)} for n, G in C.objects.items()]
    out["morphisms"] = [{"from": m.source, "to": m.target, "images": [str(x) for x in m.hom.generator_images]}
                        for m in C.morphisms]
    return out


def load_category(path: str) -> CategorySpec:
    with open(path) as fh:
        return category_from_json(json.load(fh))


# ---------------------------------------------------------------- engine

class StableEngine:
    """Resolutions and induced maps for one category, computed through degree N."""

    def __init__(self, C: CategorySpec, N: int):
        self.C = C
        self.N = N
        p = C.prime
        self.res: dict[str, Resolution] = {n: resolution_for(G, p, N) for n, G in C.objects.items()}
        for R in self.res.values():
            for k in range(min(N, R.max_degree) + 1):
                R.right_inverse(k)
        self._ind: dict[int, list[FpMatrix]] = {}
        self._incl: dict[str, list[FpMatrix]] = {}
        self._fill()

    def _fill(self):
        C, N = self.C, self.N
        jobs: list[tuple[object, GroupHom, str]] = []
        if C.mode == SUBGROUP:
            P = C.ambient
            for name, Q in C.objects.items():
                jobs.append((("incl", name), inclusion(Q, P), name))
            for i, m in enumerate(C.morphisms):
                to_p = inclusion(C.objects[m.target], P).compose(m.hom)
                jobs.append((i, to_p, m.source))
        else:
            for i, m in enumerate(C.morphisms):
                jobs.append((i, m.hom, m.source))

        def run(job):
            key, hom, src = job
            tgt = AMBIENT if C.mode == SUBGROUP else self.C.morphisms[key].target
            return key, induced_maps(hom, self.res[tgt], self.res[src], N)

        with ThreadPoolExecutor(max_workers=threads()) as pool:
            results = list(pool.map(run, jobs))
        for key, mats in results:
            if isinstance(key, tuple):
                self._incl[key[1]] = mats
            else:
                self._ind[key] = mats

    def dim(self, name: str, n: int) -> int:
        return self.res[name].ranks[n]

    def source_dim(self, n: int) -> int:
        if self.C.mode == SUBGROUP:
            return self.dim(AMBIENT, n)
        return sum(self.dim(o, n) for o in self.C.objects)

    def target_dim(self, n: int) -> int:
        return sum(self.dim(m.source, n) for m in self.C.morphisms)

    def offsets(self, n: int) -> dict[str, int]:
        off, k = {}, 0
        for o in self.C.objects:
            off[o] = k
            k += self.dim(o, n)
        return off

    def condition_map(self, n: int) -> FpMatrix:
        if not 0 <= n <= self.N:
            raise ValueError(f"degree {n} out of range 0..{self.N}")
        C, p = self.C, self.C.prime
        rows = self.target_dim(n)
        cols = self.source_dim(n)
        M = np.zeros((rows, cols), dtype=np.int16)
        r = 0
        off = self.offsets(n) if C.mode == ABSTRACT else None
        for i, m in enumerate(C.morphisms):
            b = self.dim(m.source, n)
            phi_star = self._ind[i][n].a
            if C.mode == SUBGROUP:
                M[r:r + b] += self._incl[m.source][n].a
                M[r:r + b] -= phi_star
            else:
                t0, s0 = off[m.target], off[m.source]
                M[r:r + b, t0:t0 + self.dim(m.target, n)] += phi_star
                M[r:r + b, s0:s0 + b] -= np.eye(b, dtype=np.int16)
            r += b
        return FpMatrix(np.mod(M, p), p)

    def limit(self, n: int) -> Subspace:
        M = self.condition_map(n)
        if M.rows == 0:
            return Subspace.full(M.cols, self.C.prime)
        return kernel_basis(M)


def condition_map(C: CategorySpec, n: int, engine: StableEngine | None = None) -> FpMatrix:
    return (engine or StableEngine(C, n)).condition_map(n)


def limit_basis(C: CategorySpec, n: int, engine: StableEngine | None = None) -> Subspace:
    return (engine or StableEngine(C, n)).limit(n)


# ---------------------------------------------------------------- reports

@dataclass
class DegreeData:
    degree: int
    source_dim: int
    target_dim: int
    rank: int
    limit: Subspace

    @property
    def limit_dim(self) -> int:
        return self.limit.dim

    @property
    def coker_dim(self) -> int:
        return self.target_dim - self.rank


@dataclass
class StableReport:
    category: CategorySpec
    max_degree: int
    degrees: list[DegreeData]

    def limit_dims(self) -> list[int]:
        return [d.limit_dim for d in self.degrees]

    def as_dict(self) -> dict:
        return {
            "mode": self.category.mode,
            "prime": self.category.prime,
            "objects": list(self.category.objects),
            "edge_count": len(self.category.morphisms),
            "max_degree": self.max_degree,
            "limit_dims": self.limit_dims(),
            "cohomology_dims": [d.source_dim for d in self.degrees],
            "condition_ranks": [d.rank for d in self.degrees],
            "kernel_dims": [d.limit_dim for d in self.degrees],
            "coker_dims": [d.coker_dim for d in self.degrees],
            "bases": [d.limit.basis.tolist() for d in self.degrees],
        }


def stable_report(C: CategorySpec, N: int, engine: StableEngine | None = None,
                  progress=None) -> StableReport:
    require_valid(C)
    eng = engine or StableEngine(C, N)
    out = []
    for n in range(N + 1):
        M = eng.condition_map(n)
        r = rank(M) if M.rows and M.cols else 0
        lim = eng.limit(n)
        out.append(DegreeData(n, M.cols, M.rows, r, lim))
        if progress:
            progress(f"degree {n}: dim H = {M.cols}, dim I = {lim.dim}, rank d1 = {r}")
    return StableReport(C, N, out)


@dataclass
class GammaReport:
    category: CategorySpec
    max_degree: int
    edge_count: int
    limit_dims: list[int]
    coker_dims: list[int]
    gamma_dims: list[int]

    def as_dict(self) -> dict:
        return {"edge_count": self.edge_count, "max_degree": self.max_degree,
                "limit_dims": self.limit_dims, "coker_dims": self.coker_dims,
                "gamma_dims": self.gamma_dims}


def gamma_dims(C: CategorySpec, N: int, engine: StableEngine | None = None,
               report: StableReport | None = None) -> GammaReport:
    """dim H^n(Γ) = dim I^n + dim coker d_1^(n-1), from the two-row collapse."""
    rep = require_valid(C)
    if C.mode == ABSTRACT and not rep.connected:
        raise CategoryError(f"category has {len(rep.components)} components; no single Γ exists")
    sr = report or stable_report(C, N, engine)
    lim = sr.limit_dims()
    cok = [d.coker_dim for d in sr.degrees]
    dims = [lim[n] + (cok[n - 1] if n else 0) for n in range(N + 1)]
    return GammaReport(C, N, len(C.morphisms), lim, cok, dims)


@dataclass
class ClosureReport:
    checked: int
    violations: list[tuple[int, int, int, int]] = field(default_factory=list)

    @property
    def closed(self) -> bool:
        return not self.violations


def ring_closure_check(C: CategorySpec, N: int, engine: StableEngine | None = None) -> ClosureReport:
    """Check that products of basis elements of I^a and I^b land in I^(a+b)."""
    if C.mode != SUBGROUP:
        raise CategoryError("ring closure is checked in subgroup mode")
    eng = engine or StableEngine(C, N)
    R = eng.res[AMBIENT]
    lims = [eng.limit(n) for n in range(N + 1)]
    checked, bad = 0, []
    for a in range(N + 1):
        for i, x in enumerate(lims[a].basis.a):
            cx = CohomClass(R, a, tuple(int(v) for v in x))
            for b in range(N + 1 - a):
                if not lims[b].dim:
                    continue
                prods = mat_mul(cup_matrix(R, cx, b), lims[b].basis.a.T, C.prime).T
                checked += prods.shape[0]
                for j, v in enumerate(prods):
                    if not lims[a + b].contains(v):
                        bad.append((a, i, b, j))
    return ClosureReport(checked, bad)


@dataclass
class FinitenessReport:
    max_degree: int
    generator_degrees: list[int]
    generators: list[list[int]]
    window: int

    @property
    def late_generators(self) -> bool:
        """True when some generator appeared in the top ``window`` degrees."""
        return any(d > self.max_degree - self.window for d in self.generator_degrees)

    def as_dict(self) -> dict:
        return {"max_degree": self.max_degree, "generator_degrees": self.generator_degrees,
                "generator_count": len(self.generator_degrees), "window": self.window,
                "new_generators_in_window": self.late_generators}


def module_finiteness(C: CategorySpec, N: int, window: int = 3,
                      engine: StableEngine | None = None) -> FinitenessReport:
    """Greedy module generators of ∏ H*(Q) (or H*(P)) over the limit ring, through degree N.

    Reports an empirical signal only: no degree bound is known in general.
    """
    eng = engine or StableEngine(C, N)
    p = C.prime
    names = [AMBIENT] if C.mode == SUBGROUP else list(C.objects)
    lims = [eng.limit(n) for n in range(N + 1)]

    def blocks(n):
        off, k = [], 0
        for o in names:
            off.append((o, k, k + eng.dim(o, n)))
            k += eng.dim(o, n)
        return off, k

    gens: list[tuple[int, np.ndarray]] = []
    for n in range(N + 1):
        off_n, total = blocks(n)
        spans = []
        for e, h in gens:
            d = n - e
            if d < 1 or not lims[d].dim:
                continue
            off_d, _ = blocks(d)
            off_e, _ = blocks(e)
            prod = np.zeros((lims[d].dim, total), dtype=np.uint8)
            for (o, a0, a1), (_, i0, i1), (_, h0, h1) in zip(off_n, off_d, off_e):
                R = eng.res[o]
                hv = h[h0:h1]
                if not hv.any() or a1 == a0:
                    continue
                hc = CohomClass(R, e, tuple(int(v) for v in hv))
                cm = cup_matrix(R, hc, d)  # H^d(o) -> H^n(o)
                prod[:, a0:a1] = mat_mul(lims[d].basis.a[:, i0:i1], cm.T, p)
            spans.append(prod)
        S = Subspace.span(FpMatrix._wrap(np.concatenate(spans), p)) if spans else Subspace.zero(total, p)
        for v in S.complement_in(Subspace.full(total, p)).a:
            gens.append((n, v))
    return FinitenessReport(N, [e for e, _ in gens], [v.astype(int).tolist() for _, v in gens], window)
