"""
Dense linear algebra over GF(2).

Matrices are carried around as 2D ``numpy.uint8`` arrays holding 0/1
entries. Elimination packs rows into 64-bit words and runs a compiled
kernel, since rank and nullspace computations dominate the runtime of
the distance searches.

All vectors are row vectors unless stated otherwise; ``m @ v`` style
products treat ``v`` as a column.
"""

from __future__ import annotations

import numba
import numpy as np

__all__ = [
    "as_bits",
    "pack_rows",
    "unpack_rows",
    "rref",
    "rank",
    "nullspace",
    "row_space_contains",
    "row_spaces_equal",
    "solve",
    "complement_basis",
    "random_invertible",
    "random_matrix",
    "kron",
    "block_diag",
    "circulant_lift",
    "ring_transpose",
    "poly_mul",
    "lift_matrix",
    "mat_mul",
]


def as_bits(m, ncols: int | None = None) -> np.ndarray:
    """Coerce ``m`` to a 2D uint8 array with entries reduced mod 2.

    ``ncols`` is used to shape empty inputs (``[]`` has no column count).
    """
    a = np.asarray(m)
    if a.size == 0:
        cols = ncols if ncols is not None else (a.shape[-1] if a.ndim == 2 else 0)
        return np.zeros((0 if a.ndim < 2 else a.shape[0], cols), dtype=np.uint8)
    if a.ndim == 1:
        a = a[None, :]
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {a.shape}")
    return (a.astype(np.int64) & 1).astype(np.uint8)


def _as_vector(v) -> np.ndarray:
    a = np.asarray(v)
    if a.ndim == 2 and 1 in a.shape:
        a = a.reshape(-1)
    if a.ndim != 1:
        raise ValueError(f"expected a bit vector, got shape {a.shape}")
    return (a.astype(np.int64) & 1).astype(np.uint8)


def pack_rows(m: np.ndarray) -> np.ndarray:
    """Pack a 0/1 matrix into little-endian uint64 words, one row per row."""
    m = as_bits(m)
    rows, cols = m.shape
    nwords = max(1, (cols + 63) // 64)
    padded = np.zeros((rows, nwords * 64), dtype=np.uint8)
    padded[:, :cols] = m
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view(np.uint64).reshape(rows, nwords)


def unpack_rows(words: np.ndarray, ncols: int) -> np.ndarray:
    words = np.ascontiguousarray(words, dtype=np.uint64)
    bits = np.unpackbits(words.view(np.uint8), axis=1, bitorder="little")
    return bits[:, :ncols].astype(np.uint8)


@numba.njit(cache=True)
def _eliminate(rows, order, full):
    """In-place Gaussian elimination on packed rows.

    Pivot columns are searched in the sequence given by ``order``. With
    ``full`` the result is reduced (pivot columns are unit vectors),
    otherwise only rows below each pivot are cleared. Returns the pivot
    columns; the first ``len(pivots)`` rows hold the echelon form.
    """
    nrows, nwords = rows.shape
    pivots = np.empty(min(nrows, order.size), dtype=np.int64)
    prow = 0
    for idx in range(order.size):
        if prow == nrows:
            break
        c = order[idx]
        w = c >> 6
        b = np.uint64(1) << np.uint64(c & 63)
        sel = -1
        for i in range(prow, nrows):
            if rows[i, w] & b:
                sel = i
                break
        if sel < 0:
            continue
        if sel != prow:
            for k in range(nwords):
                t = rows[sel, k]
                rows[sel, k] = rows[prow, k]
                rows[prow, k] = t
        start = 0 if full else prow + 1
        for i in range(start, nrows):
            if i != prow and rows[i, w] & b:
                for k in range(nwords):
                    rows[i, k] ^= rows[prow, k]
        pivots[prow] = c
        prow += 1
    return pivots[:prow]


def rref(m) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form.

    Returns
    -------
    (R, pivots)
        ``R`` has the same shape as ``m``; its first ``len(pivots)`` rows
        are the nonzero rows of the reduced form, the rest are zero.
    """
    m = as_bits(m)
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return m.copy(), []
    packed = pack_rows(m)
    pivots = _eliminate(packed, np.arange(cols, dtype=np.int64), True)
    return unpack_rows(packed, cols), [int(p) for p in pivots]


def rank(m) -> int:
    """Rank over GF(2)."""
    m = as_bits(m)
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return 0
    packed = pack_rows(m)
    return int(_eliminate(packed, np.arange(cols, dtype=np.int64), False).size)


def nullspace(m) -> np.ndarray:
    """Basis of ``{v : m v = 0}``, one vector per row.

    The basis has ``cols - rank(m)`` rows and is in the standard form
    read off the reduced echelon form (one row per free column).
    """
    m = as_bits(m)
    cols = m.shape[1]
    R, pivots = rref(m)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    if not free:
        return basis
    r = len(pivots)
    piv = np.array(pivots, dtype=np.int64)
    for i, c in enumerate(free):
        basis[i, c] = 1
        if r:
            basis[i, piv] = R[:r, c]
    return basis


def row_space_contains(m, v) -> bool:
    """True iff ``v`` is a GF(2) combination of the rows of ``m``."""
    v = _as_vector(v)
    m = as_bits(m, ncols=v.size)
    if m.shape[1] != v.size:
        raise ValueError(f"vector length {v.size} does not match {m.shape[1]} columns")
    if not v.any():
        return True
    if m.shape[0] == 0:
        return False
    return rank(np.vstack([m, v])) == rank(m)


def row_spaces_equal(a, b) -> bool:
    a = as_bits(a)
    b = as_bits(b, ncols=a.shape[1])
    if a.shape[1] != b.shape[1]:
        return False
    ra, rb = rank(a), rank(b)
    return ra == rb and rank(np.vstack([a, b])) == ra


def solve(m, b) -> np.ndarray | None:
    """Solve ``m x = b``; returns ``None`` when the system is inconsistent."""
    b = _as_vector(b)
    m = as_bits(m)
    if m.shape[0] != b.size:
        raise ValueError(f"right-hand side has length {b.size}, expected {m.shape[0]}")
    cols = m.shape[1]
    if not b.any():
        return np.zeros(cols, dtype=np.uint8)
    aug = np.hstack([m, b[:, None]])
    R, pivots = rref(aug)
    if pivots and pivots[-1] == cols:
        return None
    x = np.zeros(cols, dtype=np.uint8)
    for i, p in enumerate(pivots):
        x[p] = R[i, cols]
    return x


def complement_basis(sub, space) -> np.ndarray:
    """Rows of ``space`` extending a basis of ``rowspace(sub)``.

    Returns a subset of the rows of ``space`` (in order) such that together
    with ``sub`` they span ``rowspace(sub) + rowspace(space)``, and none of
    them is redundant. When ``rowspace(sub)`` lies inside
    ``rowspace(space)`` this is a basis of the quotient.
    """
    space = as_bits(space)
    sub = as_bits(sub, ncols=space.shape[1])
    # stored rows keyed by their lowest set bit; sums of stored rows then
    # have the smallest key of the summands as lowest bit
    span: dict[int, int] = {}

    def insert(x: int) -> bool:
        while x:
            low = x & -x
            p = span.get(low)
            if p is None:
                span[low] = x
                return True
            x ^= p
        return False

    for row in sub:
        insert(_to_int(row))
    keep = [i for i, row in enumerate(space) if insert(_to_int(row))]
    return space[keep].copy()


def _to_int(row: np.ndarray) -> int:
    return int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")


def random_matrix(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, 2, size=(rows, cols), dtype=np.uint8)


def random_invertible(n: int, seed) -> np.ndarray:
    """Uniformly random invertible ``n x n`` matrix.

    ``seed`` may be an int or a ``numpy.random.Generator``; for an int the
    output is deterministic. Sampling is by rejection, which needs about
    3.5 draws on average over GF(2).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    while True:
        a = random_matrix(n, n, rng)
        if rank(a) == n:
            return a


def mat_mul(a, b) -> np.ndarray:
    """Matrix product over GF(2)."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    return ((a @ b) & 1).astype(np.uint8)


def kron(a, b) -> np.ndarray:
    return (np.kron(as_bits(a), as_bits(b)) & 1).astype(np.uint8)


def block_diag(*blocks) -> np.ndarray:
    blocks = [as_bits(b) for b in blocks]
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = np.zeros((rows, cols), dtype=np.uint8)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


# --- polynomials over F2[x]/(x^ell - 1) ------------------------------------


def _poly(poly, ell: int) -> np.ndarray:
    p = np.asarray(poly, dtype=np.int64).reshape(-1) & 1
    nz = np.flatnonzero(p)
    if nz.size and nz[-1] >= ell:
        raise ValueError(f"polynomial of degree {nz[-1]} does not fit lift size {ell}")
    out = np.zeros(ell, dtype=np.uint8)
    out[: min(p.size, ell)] = p[:ell]
    return out


def circulant_lift(poly, ell: int) -> np.ndarray:
    """The ``ell x ell`` circulant whose column ``i`` holds ``x^i g(x)``."""
    g = _poly(poly, ell)
    r = np.arange(ell)[:, None]
    c = np.arange(ell)[None, :]
    return g[(r - c) % ell].astype(np.uint8)


def ring_transpose(poly, ell: int) -> np.ndarray:
    """``g(x) -> g(x^-1)``, whose lift is the transpose of the lift of g."""
    g = _poly(poly, ell)
    return g[(-np.arange(ell)) % ell].astype(np.uint8)


def poly_mul(a, b, ell: int) -> np.ndarray:
    a = _poly(a, ell).astype(np.int64)
    b = _poly(b, ell).astype(np.int64)
    out = np.zeros(ell, dtype=np.int64)
    for i in np.flatnonzero(a):
        out += np.roll(b, i)
    return (out & 1).astype(np.uint8)


def lift_matrix(a, ell: int) -> np.ndarray:
    """Lift a matrix over the ring, given as an ``(m, n, ell)`` coefficient array."""
    a = np.asarray(a)
    if a.ndim != 3:
        raise ValueError("ring matrices are (rows, cols, ell) coefficient arrays")
    m, n = a.shape[:2]
    out = np.zeros((m * ell, n * ell), dtype=np.uint8)
    for i in range(m):
        for j in range(n):
            out[i * ell:(i + 1) * ell, j * ell:(j + 1) * ell] = circulant_lift(a[i, j], ell)
    return out
