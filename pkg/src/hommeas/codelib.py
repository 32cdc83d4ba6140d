"""
Code constructors: repetition, surface, toric, Steane, quantum Hamming,
hypergraph product and quasi-cyclic lifted product codes, plus the
benchmark instances shipped in ``hommeas/data``.

Qubit ordering of product codes
-------------------------------
For ``hgp(h1, h2)`` with ``h1`` of shape ``(m1, n1)`` and ``h2`` of shape
``(m2, n2)`` the first ``n1 * n2`` qubits are the bit-bit sector, qubit
``i * n2 + j`` pairing bit ``i`` of the first code with bit ``j`` of the
second; the remaining ``m1 * m2`` qubits are the check-check sector in the
same row-major order. Lifted products follow the same block layout with
every entry expanded to an ``ell x ell`` circulant.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import numpy as np

from . import f2la
from .css import CssCode, PauliOperator
from .f2la import as_bits

__all__ = [
    "repetition",
    "cyclic_repetition",
    "hgp",
    "surface",
    "toric",
    "steane",
    "hamming15",
    "ring_matrix",
    "ring_transpose_matrix",
    "ring_kron",
    "lifted_product",
    "benchmark_code",
    "benchmark_operator",
    "BENCHMARKS",
    "fixture_checksums",
]

BENCHMARKS = ("LP1", "LP2", "HGP1", "HGP2")


def repetition(r: int) -> np.ndarray:
    """``(r-1) x r`` parity checks of the length-``r`` repetition code."""
    if r < 2:
        raise ValueError("the repetition code needs r >= 2")
    h = np.zeros((r - 1, r), np.uint8)
    idx = np.arange(r - 1)
    h[idx, idx] = 1
    h[idx, idx + 1] = 1
    return h


def cyclic_repetition(r: int) -> np.ndarray:
    """``r x r`` cyclic checks ``x_i + x_{i+1 mod r}``."""
    if r < 2:
        raise ValueError("the cyclic repetition code needs r >= 2")
    h = np.zeros((r, r), np.uint8)
    idx = np.arange(r)
    h[idx, idx] = 1
    h[idx, (idx + 1) % r] ^= 1
    return h


def hgp(h1, h2) -> CssCode:
    """Hypergraph product ``HX = (h1 x I | I x h2^T)``, ``HZ = (I x h2 | h1^T x I)``."""
    h1 = as_bits(h1)
    h2 = as_bits(h2)
    m1, n1 = h1.shape
    m2, n2 = h2.shape
    hx = np.hstack([f2la.kron(h1, np.eye(n2, dtype=np.uint8)),
                    f2la.kron(np.eye(m1, dtype=np.uint8), h2.T)])
    hz = np.hstack([f2la.kron(np.eye(n1, dtype=np.uint8), h2),
                    f2la.kron(h1.T, np.eye(m2, dtype=np.uint8))])
    return CssCode(hx, hz)


def surface(d: int) -> CssCode:
    """Planar surface code ``[[d^2 + (d-1)^2, 1, d]]``."""
    if d < 2:
        raise ValueError("d must be at least 2")
    h = repetition(d)
    return hgp(h, h)


def toric(d: int) -> CssCode:
    """Toric code ``[[2 d^2, 2, d]]``.

    Qubit ``i * d + j`` (``i, j < d``) is the first sector; the X logical
    supported on ``{i * d + j : j < d}`` restricts the Z checks to a
    ``d``-cycle.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    h = cyclic_repetition(d)
    return hgp(h, h)


_HAMMING = np.array([
    [0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1],
    [0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 1, 1, 1, 1],
    [0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1],
    [1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1],
], dtype=np.uint8)


def steane() -> CssCode:
    """The ``[[7, 1, 3]]`` code with ``HX = HZ`` the Hamming(7,4) checks."""
    h = np.array([
        [0, 0, 0, 1, 1, 1, 1],
        [0, 1, 1, 0, 0, 1, 1],
        [1, 0, 1, 0, 1, 0, 1],
    ], dtype=np.uint8)
    return CssCode(h, h.copy())


def hamming15() -> CssCode:
    """The ``[[15, 7, 3]]`` quantum Hamming code, ``HX = HZ``."""
    return CssCode(_HAMMING.copy(), _HAMMING.copy())


# --- matrices over F2[x]/(x^ell - 1) ----------------------------------------
# A ring matrix is an (rows, cols, ell) uint8 array of coefficients.


def ring_matrix(exponents, ell: int) -> np.ndarray:
    """Ring matrix from entries given as monomial exponents.

    Each entry is an int (the monomial ``x^e``), ``None`` (zero), or a list
    of exponents (their sum).
    """
    rows = len(exponents)
    cols = len(exponents[0]) if rows else 0
    out = np.zeros((rows, cols, ell), np.uint8)
    for i, row in enumerate(exponents):
        for j, e in enumerate(row):
            terms = [] if e is None else ([e] if isinstance(e, int) else list(e))
            for t in terms:
                if not 0 <= t < ell:
                    raise ValueError(f"exponent {t} outside 0..{ell - 1}")
                out[i, j, t] ^= 1
    return out


def ring_transpose_matrix(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose: transpose and send each ``g(x)`` to ``g(x^-1)``."""
    a = np.asarray(a, np.uint8)
    ell = a.shape[2]
    return a.transpose(1, 0, 2)[:, :, (-np.arange(ell)) % ell].copy()


def ring_identity(n: int, ell: int) -> np.ndarray:
    out = np.zeros((n, n, ell), np.uint8)
    out[np.arange(n), np.arange(n), 0] = 1
    return out


def ring_kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, np.uint8)
    b = np.asarray(b, np.uint8)
    ell = a.shape[2]
    ma, na = a.shape[:2]
    mb, nb = b.shape[:2]
    out = np.zeros((ma * mb, na * nb, ell), np.uint8)
    for i in range(ma):
        for j in range(na):
            if not a[i, j].any():
                continue
            for k in range(mb):
                for l in range(nb):
                    if b[k, l].any():
                        out[i * mb + k, j * nb + l] = f2la.poly_mul(a[i, j], b[k, l], ell)
    return out


def lifted_product(a1, a2, ell: int | None = None) -> CssCode:
    """Quasi-cyclic lifted product ``LP(a1, a2)``.

    ``HX = B([a1 x I, I x a2])`` and ``HZ = B([I x a2^T, a1^T x I])`` where
    ``B`` replaces each ring element by its circulant lift and ``^T`` is
    the ring conjugate transpose.
    """
    a1 = np.asarray(a1, np.uint8)
    a2 = np.asarray(a2, np.uint8)
    if a1.ndim == 2:
        a1 = a1[:, :, None]
    if a2.ndim == 2:
        a2 = a2[:, :, None]
    ell = a1.shape[2] if ell is None else ell
    if a1.shape[2] != ell or a2.shape[2] != ell:
        raise ValueError("ring matrices must use the lift size ell")
    m1, n1 = a1.shape[:2]
    m2, n2 = a2.shape[:2]
    hx = np.concatenate([ring_kron(a1, ring_identity(m2, ell)),
                         ring_kron(ring_identity(m1, ell), a2)], axis=1)
    hz = np.concatenate([ring_kron(ring_identity(n1, ell), ring_transpose_matrix(a2)),
                         ring_kron(ring_transpose_matrix(a1), ring_identity(n2, ell))], axis=1)
    return CssCode(f2la.lift_matrix(hx, ell), f2la.lift_matrix(hz, ell))


# --- shipped benchmark instances -------------------------------------------

_FIXTURE_FILES = ("lifted_product.json", "hgp1.txt", "hgp2.txt", "operators.json")


def _data_text(name: str) -> str:
    return resources.files("hommeas").joinpath("data", name).read_text()


def fixture_checksums() -> dict[str, str]:
    """Recorded SHA-256 digests of the data files."""
    return json.loads(_data_text("checksums.json"))


def _verify(name: str) -> str:
    import hashlib

    text = _data_text(name)
    digest = hashlib.sha256(text.encode()).hexdigest()
    expected = fixture_checksums().get(name)
    if expected != digest:
        raise RuntimeError(f"data file {name} does not match its recorded checksum")
    return text


@lru_cache(maxsize=None)
def benchmark_code(name: str) -> CssCode:
    """One of ``LP1``, ``LP2``, ``HGP1``, ``HGP2``.

    The lifted product instances use ``a1 = a`` and ``a2 = a^T`` (ring
    conjugate transpose) for the stored ring matrix ``a``; the hypergraph
    product instances use the stored check matrix for both factors.
    """
    from .fileio import parse_matrix_text

    key = name.upper()
    if key in ("LP1", "LP2"):
        entry = json.loads(_verify("lifted_product.json"))[key]
        a = ring_matrix(entry["exponents"], entry["ell"])
        return lifted_product(a, ring_transpose_matrix(a), entry["ell"])
    if key in ("HGP1", "HGP2"):
        h = parse_matrix_text(_verify(f"{key.lower()}.txt"))
        return hgp(h, h)
    raise KeyError(f"unknown benchmark {name!r}; choose from {BENCHMARKS}")


def benchmark_operator_string(name: str) -> str:
    return json.loads(_verify("operators.json"))[name.upper()]


def benchmark_operator(name: str) -> PauliOperator:
    """The X logical measured on a benchmark code (1-based string in the data)."""
    from .fileio import parse_operator

    code = benchmark_code(name)
    return parse_operator(benchmark_operator_string(name), code.n)
