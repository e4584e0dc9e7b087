"""Modular invariants of F_2[x_1..x_n] and the bridge to resolution cohomology.

H*((Z/2)^n; F_2) is polynomial on the degree-one classes; ``PolynomialModel``
makes that identification explicit degree by degree so limits computed from
resolutions can be compared with invariant subspaces computed from polynomials.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .catalog import elementary_abelian
from .linalg import FpMatrix, Subspace, intersect, kernel_basis, mat_mul, solve
from .perm import GroupHom, PermGroup
from .resolution import (CohomClass, Resolution, basis_classes, cup_matrix,
                         degree_one_homomorphisms, induced_map, resolution_for)
from .stable import StableEngine, aut_category

MAX_DEGREE = 12


class Poly2:
    """A polynomial over F_2, stored as the set of its monomials (exponent tuples)."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=()):
        self.n = n
        acc: set[tuple[int, ...]] = set()
        for t in terms:
            t = tuple(t)
            if len(t) != n:
                raise ValueError("monomial has the wrong number of variables")
            acc ^= {t}
        self.terms = frozenset(acc)

    @classmethod
    def var(cls, n: int, i: int) -> "Poly2":
        return cls(n, [tuple(int(j == i) for j in range(n))])

    @classmethod
    def one(cls, n: int) -> "Poly2":
        return cls(n, [(0,) * n])

    def __add__(self, other: "Poly2") -> "Poly2":
        p = Poly2(self.n)
        p.terms = self.terms ^ other.terms
        return p

    def __mul__(self, other: "Poly2") -> "Poly2":
        acc: set = set()
        for a in self.terms:
            for b in other.terms:
                acc ^= {tuple(x + y for x, y in zip(a, b))}
        p = Poly2(self.n)
        p.terms = frozenset(acc)
        return p

    def __pow__(self, k: int) -> "Poly2":
        out = Poly2.one(self.n)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly2) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(t) for t in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(t) for t in self.terms}) <= 1

    def vector(self, d: int) -> np.ndarray:
        """Coordinates in the degree-d monomial basis."""
        idx = monomial_index(self.n, d)
        v = np.zeros(len(idx), dtype=np.uint8)
        for t in self.terms:
            if sum(t) != d:
                raise ValueError(f"term {t} is not of degree {d}")
            v[idx[t]] = 1
        return v

    @classmethod
    def from_vector(cls, n: int, d: int, v) -> "Poly2":
        mons = monomials(n, d)
        return cls(n, [mons[i] for i, c in enumerate(v) if int(c) % 2])

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for t in sorted(self.terms, reverse=True):
            fac = [f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(t) if e]
            parts.append("*".join(fac) if fac else "1")
        return " + ".join(parts)

    __repr__ = __str__


@lru_cache(maxsize=None)
def monomials(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Degree-d exponent tuples in decreasing lexicographic order."""
    out = [t for t in itertools.product(range(d + 1), repeat=n) if sum(t) == d]
    return tuple(sorted(out, reverse=True))


@lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> dict:
    return {m: i for i, m in enumerate(monomials(n, d))}


# ---------------------------------------------------------------- matrix groups

def _key(g: np.ndarray) -> bytes:
    return np.asarray(g, dtype=np.uint8).tobytes()


@dataclass
class MatrixGroup2:
    n: int
    elements: list[np.ndarray]

    @classmethod
    def generated_by(cls, n: int, gens) -> "MatrixGroup2":
        gens = [np.asarray(g, dtype=np.uint8) % 2 for g in gens]
        e = np.eye(n, dtype=np.uint8)
        out, seen = [e], {_key(e)}
        frontier = [e]
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = mat_mul(x, g, 2)
                    if _key(y) not in seen:
                        seen.add(_key(y))
                        out.append(y)
                        new.append(y)
            frontier = new
        return cls(n, out)

    @classmethod
    def gl(cls, n: int) -> "MatrixGroup2":
        out = []
        for bits in itertools.product((0, 1), repeat=n * n):
            g = np.array(bits, dtype=np.uint8).reshape(n, n)
            if _det2(g):
                out.append(g)
        return cls(n, out)

    @classmethod
    def trivial(cls, n: int) -> "MatrixGroup2":
        return cls(n, [np.eye(n, dtype=np.uint8)])

    @property
    def order(self) -> int:
        return len(self.elements)

    def is_closed(self) -> bool:
        keys = {_key(g) for g in self.elements}
        return all(_key(mat_mul(a, b, 2)) in keys for a in self.elements for b in self.elements)


def _det2(g: np.ndarray) -> int:
    from .linalg import rank
    return int(rank(FpMatrix(g, 2)) == g.shape[0])


def swap_group() -> MatrixGroup2:
    return MatrixGroup2.generated_by(2, [[[0, 1], [1, 0]]])


def action_matrix(g: np.ndarray, d: int) -> FpMatrix:
    """Matrix of x_j ↦ Σ_i g[i, j] x_i on degree-d polynomials (columns = images of monomials)."""
    if d > MAX_DEGREE:
        raise ValueError(f"degree cap {MAX_DEGREE}")
    g = np.asarray(g, dtype=np.uint8) % 2
    n = g.shape[0]
    lin = [Poly2(n, [tuple(int(k == i) for k in range(n)) for i in range(n) if g[i, j]]) for j in range(n)]
    mons = monomials(n, d)
    cols = []
    for m in mons:
        img = Poly2.one(n)
        for j, e in enumerate(m):
            img = img * lin[j] ** e
        cols.append(img.vector(d) if not img.is_zero() else np.zeros(len(mons), np.uint8))
    return FpMatrix(np.array(cols, dtype=np.uint8).T.reshape(len(mons), len(mons)), 2)


def invariant_basis(H: MatrixGroup2, d: int) -> Subspace:
    """Fixed subspace of H on degree-d polynomials (monomial coordinates)."""
    m = len(monomials(H.n, d))
    I = FpMatrix.identity(m, 2)
    return intersect([kernel_basis(action_matrix(g, d) - I) for g in H.elements])


# ---------------------------------------------------------------- Dickson

def dickson_generators(n: int) -> list[tuple[Poly2, int]]:
    """Coefficients of X^(2^i) in ∏_v (X + v) over all linear forms v, with degrees 2^n - 2^i."""
    if n > 4:
        raise ValueError("Dickson generators are supported for n <= 4")
    # polynomials in X with Poly2 coefficients: list indexed by the power of X
    f: list[Poly2] = [Poly2.one(n)]
    zero = Poly2(n)
    for bits in itertools.product((0, 1), repeat=n):
        v = zero
        for i, b in enumerate(bits):
            if b:
                v = v + Poly2.var(n, i)
        nf = [zero] * (len(f) + 1)
        for k, c in enumerate(f):
            nf[k + 1] = nf[k + 1] + c
            nf[k] = nf[k] + c * v
        f = nf
    out = []
    for i in range(n):
        c = f[2 ** i]
        out.append((c, 2 ** n - 2 ** i))
    out.sort(key=lambda t: t[1])
    return out


def polys_in_degree(gens: list[tuple[Poly2, int]], d: int) -> list[Poly2]:
    """All monomials in the given generators that have total degree d."""
    degs = [g[1] for g in gens]
    out = []

    def rec(i, left, acc):
        if i == len(gens):
            if left == 0:
                out.append(acc)
            return
        k = 0
        while k * degs[i] <= left:
            rec(i + 1, left - k * degs[i], acc * gens[i][0] ** k)
            k += 1

    rec(0, d, Poly2.one(gens[0][0].n) if gens else None)
    return out


# ---------------------------------------------------------------- polynomial model

def matrix_to_automorphism(P: PermGroup, g: np.ndarray) -> GroupHom:
    """Automorphism of (Z/2)^n whose induced map acts on polynomials as action_matrix(g).

    Generator i goes to the product of the generators j with g[i, j] = 1.
    """
    g = np.asarray(g, dtype=np.uint8) % 2
    n = len(P.generators)
    imgs = []
    for i in range(n):
        x = P.elements[0]
        for j in range(n):
            if g[i, j]:
                x = x * P.generators[j]
        imgs.append(x)
    return GroupHom(P, P, tuple(imgs))


@dataclass
class PolynomialModel:
    """Per-degree matrices whose columns are the classes of the monomials."""

    group: PermGroup
    resolution: Resolution
    n: int
    max_degree: int
    change_of_basis: list[FpMatrix]

    def to_monomials(self, d: int, vectors: np.ndarray) -> np.ndarray:
        """Convert resolution-basis row vectors in degree d to monomial coordinates."""
        x = solve(self.change_of_basis[d], FpMatrix(np.atleast_2d(vectors).T, 2))
        assert x is not None
        return x.a.T

    def transport(self, d: int, A: FpMatrix) -> FpMatrix:
        """B⁻¹ A B for an endomorphism A of H^d in the resolution basis."""
        B = self.change_of_basis[d]
        x = solve(B, A @ B)
        assert x is not None
        return x


def polynomial_model(P: PermGroup, R: Resolution, N: int) -> PolynomialModel:
    """Identify H^d(P) with degree-d polynomials, x_i dual to the i-th generator of P."""
    n = len(P.generators)
    if P.order != 2 ** n or R.p != 2 or not all(g.order() == 2 for g in P.generators):
        raise ValueError("polynomial model needs (Z/2)^n with its n standard generators")
    if R.max_degree < N:
        raise ValueError("resolution too short")
    homs = degree_one_homomorphisms(R)  # b_1 x |P|
    gi = P.generator_indices
    # column j of E is the class evaluating to 1 on generator j only
    vals = FpMatrix(homs[:, gi].T, 2)  # (n, b_1): evaluation of basis classes on generators
    E = solve(vals, FpMatrix.identity(n, 2))
    if E is None:
        raise ArithmeticError("degree-one classes do not separate the generators")
    xs = [CohomClass(R, 1, tuple(int(v) for v in E.a[:, j])) for j in range(n)]
    mats: list[FpMatrix] = [FpMatrix.identity(1, 2)]
    # classes of monomials, built as x_i ⌣ (monomial of degree d-1) for the first i in use
    cls: dict[tuple[int, ...], np.ndarray] = {(0,) * n: np.array([1], dtype=np.uint8)}
    for d in range(1, N + 1):
        cols = []
        cups = [cup_matrix(R, x, d - 1) for x in xs]
        for m in monomials(n, d):
            i = next(k for k, e in enumerate(m) if e)
            prev = tuple(e - (k == i) for k, e in enumerate(m))
            v = mat_mul(cups[i], cls[prev][:, None], 2)[:, 0]
            cls[m] = v
            cols.append(v)
        B = FpMatrix(np.array(cols, dtype=np.uint8).T.reshape(R.ranks[d], len(cols)), 2)
        from .linalg import rank
        if B.rows != B.cols or rank(B) != B.cols:
            raise ArithmeticError(f"monomials do not form a basis of H^{d}")
        mats.append(B)
    return PolynomialModel(P, R, n, N, mats)


@dataclass
class ComparisonReport:
    n: int
    max_degree: int
    limit_dims: list[int]
    invariant_dims: list[int]
    equal: list[bool]

    @property
    def ok(self) -> bool:
        return all(self.equal)

    def as_dict(self) -> dict:
        return {"n": self.n, "max_degree": self.max_degree, "limit_dims": self.limit_dims,
                "invariant_dims": self.invariant_dims, "subspaces_equal": self.equal}


def invariant_category(n: int, H: MatrixGroup2):
    P = elementary_abelian(n)
    return aut_category(P, 2, [matrix_to_automorphism(P, g) for g in H.elements])


def compare_invariants_vs_limit(n: int, H: MatrixGroup2, N: int) -> ComparisonReport:
    """Limit of the one-object category (P, H) against polynomial invariants, degree by degree."""
    if n > 3 or N > 8:
        raise ValueError("comparison limited to n <= 3, N <= 8")
    C = invariant_category(n, H)
    P = C.ambient
    eng = StableEngine(C, N)
    model = polynomial_model(P, eng.res["P"], N)
    ld, idims, eq = [], [], []
    for d in range(N + 1):
        lim = eng.limit(d)
        inv = invariant_basis(H, d)
        mono = model.to_monomials(d, lim.basis.a) if lim.dim else np.zeros((0, inv.ambient_dim), np.uint8)
        transported = Subspace.from_rows(mono, inv.ambient_dim, 2) if lim.dim else Subspace.zero(inv.ambient_dim, 2)
        ld.append(lim.dim)
        idims.append(inv.dim)
        eq.append(transported == inv)
    return ComparisonReport(n, N, ld, idims, eq)
