"""Exact dense linear algebra over a prime field F_p.

Matrices are numpy ``uint8`` arrays of residues.  Every basis that leaves this
module is in reduced row-echelon form, so bases compare by literal equality.
Over F_2 the elimination runs on bit-packed rows; otherwise on small ints.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SUPPORTED_PRIMES = (2, 3, 5, 7)


class DimensionError(ValueError):
    """Shapes or moduli of the operands do not fit together."""


def _check_prime(p: int) -> int:
    if p not in SUPPORTED_PRIMES:
        raise ValueError(f"unsupported modulus {p}; expected one of {SUPPORTED_PRIMES}")
    return p


class FpMatrix:
    """An immutable matrix over F_p."""

    __slots__ = ("a", "p")

    def __init__(self, entries, p: int):
        _check_prime(p)
        a = np.array(entries, dtype=np.int64, ndmin=2) if not isinstance(entries, np.ndarray) \
            else np.asarray(entries)
        if a.ndim == 1:
            a = a.reshape(1, -1)
        if a.ndim != 2:
            raise DimensionError("FpMatrix needs a 2-d array")
        a = np.mod(a, p).astype(np.uint8)
        a.setflags(write=False)
        self.a = a
        self.p = p

    @classmethod
    def _wrap(cls, a: np.ndarray, p: int) -> "FpMatrix":
        # trusted path: a is already reduced uint8
        m = cls.__new__(cls)
        a.setflags(write=False)
        m.a = a
        m.p = p
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "FpMatrix":
        return cls._wrap(np.zeros((rows, cols), dtype=np.uint8), _check_prime(p))

    @classmethod
    def identity(cls, n: int, p: int) -> "FpMatrix":
        return cls._wrap(np.eye(n, dtype=np.uint8), _check_prime(p))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    def tolist(self) -> list[list[int]]:
        return self.a.astype(int).tolist()

    def _same(self, other: "FpMatrix") -> None:
        if not isinstance(other, FpMatrix) or other.p != self.p:
            raise DimensionError("moduli differ")

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        self._same(other)
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        return FpMatrix._wrap(mat_mul(self.a, other.a, self.p), self.p)

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._same(other)
        if self.shape != other.shape:
            raise DimensionError("shape mismatch")
        s = (self.a.astype(np.int16) + other.a) % self.p
        return FpMatrix._wrap(s.astype(np.uint8), self.p)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        self._same(other)
        if self.shape != other.shape:
            raise DimensionError("shape mismatch")
        s = (self.a.astype(np.int16) - other.a) % self.p
        return FpMatrix._wrap(s.astype(np.uint8), self.p)

    def __neg__(self) -> "FpMatrix":
        return FpMatrix._wrap(((self.p - self.a.astype(np.int16)) % self.p).astype(np.uint8), self.p)

    @property
    def T(self) -> "FpMatrix":
        return FpMatrix._wrap(np.ascontiguousarray(self.a.T), self.p)

    def __eq__(self, other) -> bool:
        return (isinstance(other, FpMatrix) and other.p == self.p
                and other.shape == self.shape and bool(np.array_equal(self.a, other.a)))

    def __hash__(self):
        return hash((self.p, self.shape, self.a.tobytes()))

    def is_zero(self) -> bool:
        return not self.a.any()

    def __repr__(self) -> str:
        return f"FpMatrix({self.tolist()}, p={self.p})"


def mat_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Product of two residue arrays, reduced mod p."""
    k = a.shape[1]
    if k == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.uint8)
    # float64 products are exact while every dot product stays below 2**53
    assert k * (p - 1) ** 2 < 2 ** 53
    c = a.astype(np.float64) @ b.astype(np.float64)
    return np.mod(c, p).astype(np.uint8)


def _inverse_table(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for x in range(1, p):
        inv[x] = pow(x, p - 2, p)
    return inv


def _rref_gf2(a: np.ndarray, full: bool = True) -> tuple[np.ndarray, list[int]]:
    rows, cols = a.shape
    nwords = (cols + 63) // 64
    packed = np.packbits(a.astype(np.uint8), axis=1, bitorder="little")
    buf = np.zeros((rows, nwords * 8), dtype=np.uint8)
    buf[:, : packed.shape[1]] = packed
    w = buf.view(np.uint64).copy()
    pivots: list[int] = []
    k = 0
    for c in range(cols):
        if k == rows:
            break
        word, bit = divmod(c, 64)
        colbits = (w[k:, word] >> np.uint64(bit)) & np.uint64(1)
        nz = np.flatnonzero(colbits)
        if nz.size == 0:
            continue
        r = k + int(nz[0])
        if r != k:
            w[[k, r]] = w[[r, k]]
        lo = 0 if full else k + 1
        hits = lo + np.flatnonzero((w[lo:, word] >> np.uint64(bit)) & np.uint64(1))
        hits = hits[hits != k]
        if hits.size:
            w[hits, word:] ^= w[k, word:]
        pivots.append(c)
        k += 1
    out = np.unpackbits(w[:k].view(np.uint8), axis=1, count=cols, bitorder="little")
    return out.astype(np.uint8), pivots


def _rref_odd(a: np.ndarray, p: int, full: bool = True) -> tuple[np.ndarray, list[int]]:
    m = a.astype(np.int16)
    rows, cols = m.shape
    inv = _inverse_table(p)
    pivots: list[int] = []
    k = 0
    for c in range(cols):
        if k == rows:
            break
        nz = np.flatnonzero(m[k:, c])
        if nz.size == 0:
            continue
        r = k + int(nz[0])
        if r != k:
            m[[k, r]] = m[[r, k]]
        lead = int(m[k, c])
        if lead != 1:
            m[k, c:] = (m[k, c:] * int(inv[lead])) % p
        lo = 0 if full else k + 1
        hits = lo + np.flatnonzero(m[lo:, c])
        hits = hits[hits != k]
        if hits.size:
            f = m[hits, c][:, None]
            m[hits, c:] = (m[hits, c:] - f * m[k, c:]) % p
        pivots.append(c)
        k += 1
    return m[:k].astype(np.uint8), pivots


def rref_array(a: np.ndarray, p: int, full: bool = True) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form of ``a`` with zero rows dropped, plus pivot columns.

    With ``full=False`` only the rows below each pivot are cleared (row-echelon
    form); enough for ranks and pivot positions.
    """
    if a.shape[0] == 0 or a.shape[1] == 0:
        return np.zeros((0, a.shape[1]), dtype=np.uint8), []
    if p == 2:
        return _rref_gf2(a, full)
    return _rref_odd(a, p, full)


def rref(A: FpMatrix) -> tuple[FpMatrix, list[int]]:
    r, piv = rref_array(A.a, A.p)
    return FpMatrix._wrap(r, A.p), piv


def rank(A: FpMatrix) -> int:
    """Rank of ``A`` over F_p."""
    # fewer rows means fewer pivot sweeps
    a = A.a if A.rows <= A.cols else A.a.T
    return len(rref_array(np.ascontiguousarray(a), A.p, full=False)[1])


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of F_p^ambient_dim, stored as an RREF basis without zero rows."""

    ambient_dim: int
    basis: FpMatrix
    pivots: tuple[int, ...]

    @classmethod
    def span(cls, vectors: FpMatrix) -> "Subspace":
        r, piv = rref(vectors)
        return cls(vectors.cols, r, tuple(piv))

    @classmethod
    def from_rows(cls, rows, ambient_dim: int, p: int) -> "Subspace":
        rows = list(rows)
        if not rows:
            return cls.zero(ambient_dim, p)
        return cls.span(FpMatrix(np.array(rows, dtype=np.int64).reshape(len(rows), ambient_dim), p))

    @classmethod
    def full(cls, n: int, p: int) -> "Subspace":
        return cls(n, FpMatrix.identity(n, p), tuple(range(n)))

    @classmethod
    def zero(cls, n: int, p: int) -> "Subspace":
        return cls(n, FpMatrix.zeros(0, n, p), ())

    @property
    def p(self) -> int:
        return self.basis.p

    @property
    def dim(self) -> int:
        return self.basis.rows

    def reduce(self, vectors: np.ndarray) -> np.ndarray:
        """Residues of the rows of ``vectors`` after clearing this space's pivots."""
        v = np.atleast_2d(np.asarray(vectors, dtype=np.uint8))
        if self.dim == 0:
            return v.copy()
        coeff = v[:, list(self.pivots)]
        sub = mat_mul(coeff, self.basis.a, self.p)
        return ((v.astype(np.int16) - sub) % self.p).astype(np.uint8)

    def contains(self, vectors) -> bool:
        v = np.atleast_2d(np.asarray(vectors, dtype=np.int64) % self.p).astype(np.uint8)
        if v.shape[1] != self.ambient_dim:
            raise DimensionError("vector length does not match the ambient dimension")
        return not self.reduce(v).any()

    def is_subspace_of(self, other: "Subspace") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise DimensionError("ambient dimensions differ")
        return self.dim == 0 or other.contains(self.basis.a)

    def complement_in(self, bigger: "Subspace") -> FpMatrix:
        """Rows of ``bigger`` spanning a complement of ``self`` inside it (RREF residues)."""
        res = self.reduce(bigger.basis.a) if bigger.dim else np.zeros((0, self.ambient_dim), np.uint8)
        r, _ = rref_array(res, self.p)
        return FpMatrix._wrap(r, self.p)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}/{self.ambient_dim}, p={self.p})"


def kernel_basis(A: FpMatrix) -> Subspace:
    """RREF basis of {x : A x = 0}."""
    p, n = A.p, A.cols
    r, piv = rref_array(A.a, p)
    free = [c for c in range(n) if c not in set(piv)]
    k = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        k[i, f] = 1
        # x_pivot = -R[row, f]
        k[i, piv] = (-r[:, f].astype(np.int64)) % p
    if not free:
        return Subspace.zero(n, p)
    return Subspace.span(FpMatrix(k, p))


def solve(A: FpMatrix, B: FpMatrix) -> FpMatrix | None:
    """Some X with A X = B, or None if the system is inconsistent."""
    if A.p != B.p:
        raise DimensionError("moduli differ")
    if A.rows != B.rows:
        raise DimensionError(f"A has {A.rows} rows but B has {B.rows}")
    p, n = A.p, A.cols
    aug = np.concatenate([A.a, B.a], axis=1)
    r, piv = rref_array(aug, p)
    if piv and piv[-1] >= n:
        return None
    x = np.zeros((n, B.cols), dtype=np.uint8)
    for i, c in enumerate(piv):
        x[c] = r[i, n:]
    return FpMatrix._wrap(x, p)


def intersect(spaces: list[Subspace]) -> Subspace:
    """Intersection of subspaces of a common ambient space."""
    if not spaces:
        raise DimensionError("intersect needs at least one subspace")
    n, p = spaces[0].ambient_dim, spaces[0].p
    for s in spaces:
        if s.ambient_dim != n or s.p != p:
            raise DimensionError("subspaces live in different ambient spaces")
    # the intersection is the kernel of the stacked annihilator conditions
    conds = []
    for s in spaces:
        ann = kernel_basis(s.basis) if s.dim else Subspace.full(n, p)
        if ann.dim:
            conds.append(ann.basis.a)
    if not conds:
        return Subspace.full(n, p)
    return kernel_basis(FpMatrix._wrap(np.concatenate(conds, axis=0), p))


class RightInverse:
    """Precomputed solver for A x = y with y in the column space of A.

    Rows of ``A`` may number in the thousands; the elimination is done once and
    every later solve is a single matrix product.
    """

    def __init__(self, A: FpMatrix):
        p = A.p
        m, n = A.shape
        aug = np.concatenate([A.a, np.eye(m, dtype=np.uint8)], axis=1)
        r, piv = rref_array(aug, p)
        piv_a = [c for c in piv if c < n]
        k = len(piv_a)
        self.p = p
        self.A = A
        self.rank = k
        # rows k.. of the transform annihilate the column space
        e = r[:, n:]
        self._check = e[k:]
        s = np.zeros((n, m), dtype=np.uint8)
        if k:
            s[piv_a] = e[:k]
        self._s = s

    def __call__(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=np.uint8)
        if self._check.shape[0] and mat_mul(self._check, y, self.p).any():
            raise ArithmeticError("right-hand side is not in the column space")
        return mat_mul(self._s, y, self.p)
