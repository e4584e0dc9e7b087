"""Minimal free resolutions of F_p over F_p[G] for p-groups G.

Free modules are expanded to F_p coordinates: the rank-b module F_p[G]^b has
coordinates ``k * |G| + h`` for basis vector k and group element h.  A module
map is stored by the images of the free generators (``gens``, one column per
generator) and expanded on demand by left translation.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import FpMatrix, RightInverse, Subspace, kernel_basis, mat_mul, rank
from .perm import GroupError, GroupHom, PermGroup

MAX_GROUP_ORDER = 16
MAX_DEGREE = 12


class GroupAlgebra:
    """F_p[G] with the element order of ``group.elements``."""

    def __init__(self, group: PermGroup, p: int):
        self.group = group
        self.p = p
        self.n = group.order
        self.table = np.array(group.table, dtype=np.int64)
        inv = np.array(group.inverses, dtype=np.int64)
        # left translation by g sends coordinate h to g*h; as a gather: new[h] = old[g^-1 h]
        self._gather = self.table[inv]

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Product of two algebra elements given as coefficient vectors."""
        out = np.zeros(self.n, dtype=np.int64)
        for g in np.flatnonzero(x):
            out[self.table[g]] += int(x[g]) * y.astype(np.int64)
        return (out % self.p).astype(np.uint8)

    def gather_index(self, g: int, rank: int) -> np.ndarray:
        """Row gather realizing left translation by g on F_p[G]^rank."""
        base = np.arange(rank, dtype=np.int64)[:, None] * self.n
        return (base + self._gather[g][None, :]).reshape(-1)

    def translate(self, vectors: np.ndarray, g: int) -> np.ndarray:
        rank = vectors.shape[0] // self.n
        return vectors[self.gather_index(g, rank)]

    def augmentation_ideal_power_dims(self) -> list[int]:
        """dim J, dim J^2, ... until J^k = 0 (only meaningful for p-groups)."""
        n, p = self.n, self.p
        jb = np.zeros((n - 1, n), dtype=np.uint8)
        for g in range(1, n):
            jb[g - 1, g] = 1
            jb[g - 1, 0] = p - 1
        cur = Subspace.span(FpMatrix(jb, p)) if n > 1 else Subspace.zero(n, p)
        dims = [cur.dim]
        while cur.dim and len(dims) <= n:
            prods = [self.multiply(a, b) for a in cur.basis.a for b in jb]
            cur = Subspace.span(FpMatrix(np.array(prods), p))
            dims.append(cur.dim)
        return dims


@dataclass
class AlgebraMap:
    """F_p[G]-linear map F_p[G]^a -> F_p[G]^b given by generator images."""

    algebra: GroupAlgebra
    source_rank: int
    target_rank: int
    gens: np.ndarray  # (target_rank * |G|, source_rank)
    _full: np.ndarray | None = field(default=None, repr=False)

    def entry(self, i: int, j: int) -> np.ndarray:
        """The algebra element in row i (target), column j (source)."""
        n = self.algebra.n
        return self.gens[i * n:(i + 1) * n, j]

    def expand(self) -> np.ndarray:
        if self._full is None:
            self._full = expand_gens(self.algebra, self.gens, self.source_rank)
        return self._full

    def compose(self, first: "AlgebraMap") -> "AlgebraMap":
        """``self ∘ first``."""
        if first.target_rank != self.source_rank:
            raise ValueError("ranks do not match")
        g = mat_mul(self.expand(), first.gens, self.algebra.p)
        return AlgebraMap(self.algebra, first.source_rank, self.target_rank, g)


def expand_gens(alg: GroupAlgebra, gens: np.ndarray, source_rank: int,
                elem_map: np.ndarray | None = None, target: GroupAlgebra | None = None) -> np.ndarray:
    """Full F_p matrix of the map sending generator j to column j of ``gens``.

    With ``elem_map`` the map is twisted: source element g acts on the target
    through ``elem_map[g]``.
    """
    tgt = target or alg
    n_src = alg.n
    rows = gens.shape[0]
    rank_t = rows // tgt.n
    full = np.zeros((rows, source_rank * n_src), dtype=np.uint8)
    for g in range(n_src):
        tg = g if elem_map is None else int(elem_map[g])
        full[:, g::n_src] = gens[tgt.gather_index(tg, rank_t)]
    return full


class Resolution:
    """A minimal free resolution, computed through ``max_degree``."""

    def __init__(self, algebra: GroupAlgebra):
        self.algebra = algebra
        self.ranks: list[int] = [1]
        self.differentials: list[AlgebraMap | None] = [None]
        n = algebra.n
        self.augmentation = np.ones((1, n), dtype=np.uint8)
        self._inverses: dict[int, RightInverse] = {}
        self._lifts: dict = {}

    @property
    def group(self) -> PermGroup:
        return self.algebra.group

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def max_degree(self) -> int:
        return len(self.ranks) - 1

    def boundary(self, k: int) -> np.ndarray:
        """Expanded matrix of d_k (k >= 1) or of the augmentation (k = 0)."""
        if k == 0:
            return self.augmentation
        return self.differentials[k].expand()

    def right_inverse(self, k: int) -> RightInverse:
        if k not in self._inverses:
            self._inverses[k] = RightInverse(FpMatrix._wrap(self.boundary(k), self.p))
        return self._inverses[k]

    def extend(self) -> None:
        """Compute one more degree: generators of ker d_n modulo J·ker d_n."""
        alg, p = self.algebra, self.p
        n = self.max_degree
        K = kernel_basis(FpMatrix._wrap(self.boundary(n), p))
        if K.dim:
            moved = []
            for g in self.group.generator_indices:
                tk = alg.translate(K.basis.a.T, g).T
                moved.append((tk.astype(np.int16) - K.basis.a) % p)
            JK = Subspace.span(FpMatrix(np.concatenate(moved).astype(np.uint8), p))
            new = JK.complement_in(K).a
        else:
            new = np.zeros((0, K.ambient_dim), dtype=np.uint8)
        b = new.shape[0]
        self.ranks.append(b)
        self.differentials.append(AlgebraMap(alg, b, self.ranks[n], np.ascontiguousarray(new.T)))

    def betti(self) -> list[int]:
        return list(self.ranks)

    def functional(self, k: int, c) -> np.ndarray:
        """Row vector evaluating the degree-k cochain c on expanded chains."""
        return np.repeat(np.asarray(c, dtype=np.uint8), self.algebra.n)[None, :]

    def check(self) -> list[str]:
        """Return violated invariants (empty when the resolution is sound)."""
        p, n = self.p, self.algebra.n
        problems = []
        if self.ranks[0] != 1:
            problems.append("b_0 != 1")
        for k in range(1, self.max_degree + 1):
            D = self.boundary(k)
            prev = self.boundary(k - 1)
            if mat_mul(prev, D, p).any():
                problems.append(f"d_{k - 1} ∘ d_{k} != 0")
            g = self.differentials[k].gens
            sums = g.reshape(g.shape[0] // n, n, g.shape[1]).astype(np.int64).sum(axis=1) % p
            if sums.any():
                problems.append(f"d_{k} has an entry outside the augmentation ideal")
        for k in range(0, self.max_degree):
            D = FpMatrix._wrap(self.boundary(k), p)
            nxt = FpMatrix._wrap(self.boundary(k + 1), p)
            if D.cols - rank(D) != rank(nxt):
                problems.append(f"not exact at degree {k}")
        return problems

    def report(self) -> str:
        """Ranks and the supports of the differential entries, for debugging."""
        lines = [f"resolution of {self.group!r} over F_{self.p}",
                 "ranks: " + " ".join(map(str, self.ranks))]
        for k in range(1, self.max_degree + 1):
            d = self.differentials[k]
            for j in range(d.source_rank):
                for i in range(d.target_rank):
                    e = d.entry(i, j)
                    if e.any():
                        sup = ",".join(str(int(x)) for x in np.flatnonzero(e))
                        lines.append(f"d{k}[{i},{j}] support {{{sup}}}")
        return "\n".join(lines)


def minimal_resolution(G: PermGroup, p: int, N: int, enforce_caps: bool = True) -> Resolution:
    """Minimal resolution of the trivial module F_p over F_p[G] through degree N."""
    if not G.is_p_group(p):
        raise GroupError(f"group of order {G.order} is not a {p}-group")
    if enforce_caps and (G.order > MAX_GROUP_ORDER or N > MAX_DEGREE):
        raise ValueError(f"caps exceeded: |G| <= {MAX_GROUP_ORDER}, N <= {MAX_DEGREE}")
    if N < 0:
        raise ValueError("negative degree")
    R = Resolution(GroupAlgebra(G, p))
    while R.max_degree < N:
        R.extend()
    return R


def betti(R: Resolution) -> list[int]:
    return R.betti()


_resolution_cache: dict = {}


def resolution_for(G: PermGroup, p: int, N: int) -> Resolution:
    """Cached minimal resolution, extended in place when a higher degree is asked for."""
    key = (G.key, tuple(G.elements), p)
    R = _resolution_cache.get(key)
    if R is None:
        R = minimal_resolution(G, p, N)
        _resolution_cache[key] = R
    while R.max_degree < N:
        R.extend()
    return R


@dataclass(frozen=True, eq=False)
class CohomClass:
    resolution: Resolution
    degree: int
    vector: tuple[int, ...]

    def __post_init__(self):
        if self.degree > self.resolution.max_degree:
            raise ValueError("degree beyond the computed range")
        if len(self.vector) != self.resolution.ranks[self.degree]:
            raise ValueError("vector length does not match b_n")

    def __eq__(self, other):
        return (isinstance(other, CohomClass) and other.resolution is self.resolution
                and other.degree == self.degree and other.vector == self.vector)

    def __hash__(self):
        return hash((id(self.resolution), self.degree, self.vector))

    def is_zero(self) -> bool:
        return not any(self.vector)

    def __add__(self, other: "CohomClass") -> "CohomClass":
        p = self.resolution.p
        return CohomClass(self.resolution, self.degree,
                          tuple((a + b) % p for a, b in zip(self.vector, other.vector)))

    def scale(self, c: int) -> "CohomClass":
        p = self.resolution.p
        return CohomClass(self.resolution, self.degree, tuple(c * a % p for a in self.vector))


def basis_classes(R: Resolution, n: int) -> list[CohomClass]:
    b = R.ranks[n]
    return [CohomClass(R, n, tuple(int(i == j) for i in range(b))) for j in range(b)]


def unit(R: Resolution) -> CohomClass:
    return CohomClass(R, 0, (1,))


def lift_chain_map(src: Resolution, tgt: Resolution, u0: np.ndarray, shift: int, depth: int,
                   elem_map: np.ndarray | None = None, perturb: bool = False) -> list[np.ndarray]:
    """Lift a map R^src_shift -> R^tgt_0 to a chain map through ``depth`` steps.

    Returns generator images U[i] : R^src_{shift+i} -> R^tgt_i.  ``elem_map``
    twists the source action (src group index -> tgt group index).  With
    ``perturb`` each lift is shifted by a boundary, which must not change any
    cohomology-level answer.
    """
    p = tgt.p
    if shift + depth > src.max_degree or depth > tgt.max_degree:
        raise ValueError("resolution too short for the requested lift")
    U = [np.asarray(u0, dtype=np.uint8)]
    for i in range(1, depth + 1):
        prev_full = expand_gens(src.algebra, U[i - 1], src.ranks[shift + i - 1],
                                elem_map, tgt.algebra)
        y = mat_mul(prev_full, src.differentials[shift + i].gens, p)
        x = tgt.right_inverse(i)(y)
        if perturb and i < tgt.max_degree and tgt.ranks[i + 1]:
            bnd = tgt.differentials[i + 1].gens[:, :1]
            x = ((x.astype(np.int16) + bnd) % p).astype(np.uint8)
        U.append(x)
    return U


def _class_lifts(R: Resolution, x: CohomClass, depth: int) -> list[np.ndarray]:
    key = ("cup", x.degree, x.vector)
    got = R._lifts.get(key)
    if got is None or len(got) <= depth:
        u0 = np.zeros((R.algebra.n, R.ranks[x.degree]), dtype=np.uint8)
        u0[0] = x.vector
        got = lift_chain_map(R, R, u0, x.degree, depth)
        R._lifts[key] = got
    return got


def cup(R: Resolution, x: CohomClass, y: CohomClass) -> CohomClass:
    """Cup product, read off as y ∘ (chain-map lift of x)."""
    if x.resolution is not R or y.resolution is not R:
        raise ValueError("classes belong to another resolution")
    m, k = x.degree, y.degree
    if m + k > R.max_degree:
        raise ValueError(f"degree {m + k} beyond the computed range {R.max_degree}")
    U = _class_lifts(R, x, k)
    vec = mat_mul(R.functional(k, y.vector), U[k], R.p)[0]
    return CohomClass(R, m + k, tuple(int(v) for v in vec))


def cup_matrix(R: Resolution, x: CohomClass, k: int) -> np.ndarray:
    """Matrix of y ↦ x ⌣ y from H^k to H^{k + deg x} (columns indexed by y)."""
    U = _class_lifts(R, x, k)
    n = R.algebra.n
    # evaluating basis cochain e_j on U[k] sums the j-th block of rows
    blocks = U[k].reshape(R.ranks[k], n, U[k].shape[1]).astype(np.int64).sum(axis=1) % R.p
    return blocks.T.astype(np.uint8)


def induced_maps(phi: GroupHom, RP: Resolution, RQ: Resolution, N: int,
                 perturb: bool = False) -> list[FpMatrix]:
    """Matrices of φ*: H^n(P) -> H^n(Q) for n = 0..N, in the dual bases."""
    if RP.p != RQ.p:
        raise ValueError("prime mismatch")
    if phi.domain.key != RQ.group.key or phi.codomain.key != RP.group.key:
        raise GroupError("resolutions do not match the morphism's groups")
    if not phi.is_injective():
        raise GroupError("φ is not injective")
    # element maps in terms of the resolutions' own element orders
    emap = np.array([RP.group.index[phi(g)] for g in RQ.group.elements], dtype=np.int64)
    key = ("ind", id(RP), tuple(emap.tolist()), perturb)
    U = RQ._lifts.get(key)
    if U is None or len(U) <= N:
        u0 = np.zeros((RP.algebra.n, 1), dtype=np.uint8)
        u0[0, 0] = 1
        U = lift_chain_map(RQ, RP, u0, 0, N, emap, perturb)
        RQ._lifts[key] = U
    out = []
    nP = RP.algebra.n
    for k in range(N + 1):
        blocks = U[k].reshape(RP.ranks[k], nP, U[k].shape[1]).astype(np.int64).sum(axis=1) % RP.p
        out.append(FpMatrix._wrap(np.ascontiguousarray(blocks.T.astype(np.uint8)), RP.p))
    return out


def induced_map(phi: GroupHom, RP: Resolution, RQ: Resolution, n: int) -> FpMatrix:
    """Matrix of φ*: H^n(P) -> H^n(Q)."""
    return induced_maps(phi, RP, RQ, n)[n]


def degree_one_homomorphisms(R: Resolution) -> np.ndarray:
    """Row j gives the homomorphism G -> F_p corresponding to the j-th basis class of H^1.

    Evaluates the cocycle on a chain s(g) with d_1 s(g) = g - e.
    """
    n, p = R.algebra.n, R.p
    rhs = np.zeros((n, n), dtype=np.uint8)
    for g in range(n):
        rhs[g, g] = (rhs[g, g] + 1) % p
        rhs[0, g] = (rhs[0, g] + p - 1) % p
    s = R.right_inverse(1)(rhs)  # (b_1 * n, n)
    vals = s.reshape(R.ranks[1], n, n).astype(np.int64).sum(axis=1) % p
    return vals.astype(np.uint8)
