"""Cohomology dimensions from the normalized bar complex.

Used only as an independent check on the minimal resolutions: nothing here
touches the resolution code.
"""
from __future__ import annotations

import numpy as np

from .linalg import FpMatrix, rank
from .perm import OrderCapExceeded, PermGroup

MAX_ORDER = 8
MAX_DEGREE = 4


def _tuples(m: int, k: int) -> np.ndarray:
    """All k-tuples over {0..m-1} in lexicographic order, shape (m**k, k)."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((m,) * k).reshape(k, -1).T
    return grids.astype(np.int64)


def coboundary(G: PermGroup, p: int, n: int) -> FpMatrix:
    """δ: C^n -> C^(n+1) with rows indexed by basis cochains of C^n.

    Cochains are functions on n-tuples of non-identity elements.  For trivial
    coefficients
        δf(g1..g_{n+1}) = f(g2..) + Σ (-1)^i f(.., g_i g_{i+1}, ..) + (-1)^{n+1} f(..g_n),
    and faces containing the identity vanish.
    """
    m = G.order - 1
    table = np.array(G.table, dtype=np.int64)
    taus = _tuples(m, n + 1) + 1  # element indices, identity excluded
    cols = np.arange(taus.shape[0])
    weights = m ** np.arange(n - 1, -1, -1, dtype=np.int64) if n else np.zeros(0, np.int64)
    mat = np.zeros((m ** n, m ** (n + 1)), dtype=np.int8)

    def add(faces: np.ndarray, ok: np.ndarray, sign: int):
        idx = (faces[ok] - 1) @ weights if n else np.zeros(int(ok.sum()), np.int64)
        np.add.at(mat, (idx, cols[ok]), sign)

    everything = np.ones(taus.shape[0], dtype=bool)
    add(taus[:, 1:], everything, 1)
    for i in range(n):
        prod = table[taus[:, i], taus[:, i + 1]]
        face = np.concatenate([taus[:, :i], prod[:, None], taus[:, i + 2:]], axis=1)
        add(face, prod != 0, -1 if (i + 1) % 2 else 1)
    add(taus[:, :n], everything, -1 if (n + 1) % 2 else 1)
    return FpMatrix(np.mod(mat, p), p)


def bar_betti_oracle(G: PermGroup, p: int, n: int) -> int:
    """dim H^n(G; F_p) = dim C^n - rank δ^n - rank δ^(n-1)."""
    if G.order > MAX_ORDER or n > MAX_DEGREE:
        raise OrderCapExceeded(f"bar oracle limited to |G| <= {MAX_ORDER}, n <= {MAX_DEGREE}")
    m = G.order - 1
    dim_cn = m ** n
    r_out = rank(coboundary(G, p, n)) if m else 0
    r_in = rank(coboundary(G, p, n - 1)) if n >= 1 and m else 0
    return dim_cn - r_out - r_in
