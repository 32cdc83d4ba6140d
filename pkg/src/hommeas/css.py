"""
Stabilizer codes: CSS pairs, symplectic (non-CSS) codes and Pauli operators,
with parameter, weight and distance computations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np

from . import f2la
from .f2la import as_bits

__all__ = [
    "INFINITE",
    "CssCode",
    "SymplecticCode",
    "PauliOperator",
    "WeightProfile",
    "DistanceCapExceeded",
    "params",
    "weight_profile",
    "logical_basis",
    "is_logical",
    "exact_distance",
    "distance_upper_bound",
    "symplectic_commutes",
]

#: Distance of a code without nontrivial logicals in the requested sector.
INFINITE = math.inf


class DistanceCapExceeded(RuntimeError):
    """The exhaustive search space is larger than the configured cap."""


def _sector(sector: str) -> str:
    s = str(sector).upper()
    if s not in ("X", "Z"):
        raise ValueError(f"sector must be 'X' or 'Z', got {sector!r}")
    return s


@dataclass(frozen=True, eq=False)
class CssCode:
    """CSS code ``CSS(hx, hz)``; rows of ``hx`` are X checks, rows of ``hz`` Z checks."""

    hx: np.ndarray
    hz: np.ndarray

    def __post_init__(self):
        hx = np.asarray(self.hx)
        hz = np.asarray(self.hz)
        n = hx.shape[1] if hx.ndim == 2 else (hz.shape[1] if hz.ndim == 2 else 0)
        hx = as_bits(hx, ncols=n)
        hz = as_bits(hz, ncols=n)
        if hx.shape[1] != hz.shape[1]:
            raise ValueError(f"hx has {hx.shape[1]} columns but hz has {hz.shape[1]}")
        if f2la.mat_mul(hz, hx.T).any():
            raise ValueError("hz . hx^T != 0: the checks do not commute")
        hx.setflags(write=False)
        hz.setflags(write=False)
        object.__setattr__(self, "hx", hx)
        object.__setattr__(self, "hz", hz)

    @property
    def n(self) -> int:
        return self.hx.shape[1]

    @property
    def k(self) -> int:
        return self.n - f2la.rank(self.hx) - f2la.rank(self.hz)

    def checks(self, sector: str) -> np.ndarray:
        return self.hx if _sector(sector) == "X" else self.hz

    def dual(self) -> "CssCode":
        """The same code with the roles of X and Z exchanged."""
        return CssCode(self.hz, self.hx)

    def independent(self) -> "CssCode":
        """Same stabilizer group with redundant checks dropped.

        Rows are kept greedily in order, so a check is removed only when
        it is a sum of earlier ones.
        """
        empty = np.zeros((0, self.n), np.uint8)
        return CssCode(f2la.complement_basis(empty, self.hx), f2la.complement_basis(empty, self.hz))

    def to_symplectic(self) -> "SymplecticCode":
        n = self.n
        stab = np.vstack([
            np.hstack([self.hx, np.zeros((self.hx.shape[0], n), np.uint8)]),
            np.hstack([np.zeros((self.hz.shape[0], n), np.uint8), self.hz]),
        ])
        return SymplecticCode(stab)

    def __eq__(self, other):
        if not isinstance(other, CssCode):
            return NotImplemented
        return (self.hx.shape == other.hx.shape and self.hz.shape == other.hz.shape
                and np.array_equal(self.hx, other.hx) and np.array_equal(self.hz, other.hz))

    def __hash__(self):
        return hash((self.hx.tobytes(), self.hz.tobytes(), self.hx.shape, self.hz.shape))

    def __repr__(self):
        return f"CssCode(n={self.n}, n_x={self.hx.shape[0]}, n_z={self.hz.shape[0]})"


def _symplectic_form(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a.shape[1] // 2
    return (f2la.mat_mul(a[:, :n], b[:, n:].T) + f2la.mat_mul(a[:, n:], b[:, :n].T)) & 1


@dataclass(frozen=True, eq=False)
class SymplecticCode:
    """Stabilizer code given by generators in ``(X | Z)`` form.

    ``signs`` holds one bit per generator (1 for a -1 eigenvalue).
    """

    stab: np.ndarray
    signs: np.ndarray | None = None

    def __post_init__(self):
        stab = as_bits(self.stab)
        if stab.shape[1] % 2:
            raise ValueError("symplectic generators need an even number of columns")
        signs = (np.zeros(stab.shape[0], np.uint8) if self.signs is None
                 else np.asarray(self.signs, dtype=np.uint8).reshape(-1) & 1)
        if signs.size != stab.shape[0]:
            raise ValueError("one sign bit per generator is required")
        if _symplectic_form(stab, stab).any():
            raise ValueError("generators do not commute")
        stab.setflags(write=False)
        object.__setattr__(self, "stab", stab)
        object.__setattr__(self, "signs", signs)

    @property
    def n(self) -> int:
        return self.stab.shape[1] // 2

    @property
    def k(self) -> int:
        return self.n - f2la.rank(self.stab)

    def generator(self, i: int) -> "PauliOperator":
        n = self.n
        row = self.stab[i]
        return PauliOperator(row[:n], row[n:], 2 * int(self.signs[i]))

    def __repr__(self):
        return f"SymplecticCode(n={self.n}, generators={self.stab.shape[0]})"


_PHASE_NAMES = {0: "+", 1: "+i", 2: "-", 3: "-i"}


@dataclass(frozen=True, eq=False)
class PauliOperator:
    """``i^phase`` times a tensor product of I, X, Y, Z.

    Qubit ``q`` carries X if only ``x[q]`` is set, Z if only ``z[q]`` is set
    and Y if both are set.
    """

    x: np.ndarray
    z: np.ndarray
    phase: int = 0

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.uint8).reshape(-1) & 1
        z = np.asarray(self.z, dtype=np.uint8).reshape(-1) & 1
        if x.size != z.size:
            raise ValueError("x and z parts must have equal length")
        x.setflags(write=False)
        z.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "phase", int(self.phase) % 4)

    @classmethod
    def from_x(cls, support, n: int | None = None, phase: int = 0) -> "PauliOperator":
        v = _support_vector(support, n)
        return cls(v, np.zeros_like(v), phase)

    @classmethod
    def from_z(cls, support, n: int | None = None, phase: int = 0) -> "PauliOperator":
        v = _support_vector(support, n)
        return cls(np.zeros_like(v), v, phase)

    @property
    def n(self) -> int:
        return self.x.size

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.x | self.z))

    @property
    def is_x_type(self) -> bool:
        return not self.z.any()

    @property
    def is_z_type(self) -> bool:
        return not self.x.any()

    @property
    def symplectic(self) -> np.ndarray:
        return np.concatenate([self.x, self.z])

    def padded(self, extra: int) -> "PauliOperator":
        """Extend with ``extra`` identity qubits."""
        pad = np.zeros(extra, np.uint8)
        return PauliOperator(np.concatenate([self.x, pad]), np.concatenate([self.z, pad]), self.phase)

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        # s = i^{|x&z|} X^x Z^z for a tensor product s, and Z^z X^x' = (-1)^{z.x'} X^x' Z^z
        e = (self.phase + other.phase
             + _dot(self.x, self.z) + _dot(other.x, other.z)
             + 2 * _dot(self.z, other.x))
        x = self.x ^ other.x
        z = self.z ^ other.z
        e -= _dot(x, z)
        return PauliOperator(x, z, e)

    def __eq__(self, other):
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return (self.phase == other.phase and np.array_equal(self.x, other.x)
                and np.array_equal(self.z, other.z))

    def __hash__(self):
        return hash((self.x.tobytes(), self.z.tobytes(), self.phase))

    def __str__(self):
        letters = {(1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
        toks = [f"{letters[(int(a), int(b))]}{q + 1}"
                for q, (a, b) in enumerate(zip(self.x, self.z)) if a or b]
        body = " ".join(toks) if toks else "I"
        sign = _PHASE_NAMES[self.phase]
        return body if sign == "+" else f"{sign} {body}"

    def __repr__(self):
        return f"PauliOperator({str(self)!r}, n={self.n})"


def _dot(a: np.ndarray, b: np.ndarray) -> int:
    return int(np.count_nonzero(a & b))


def _support_vector(support, n: int | None) -> np.ndarray:
    s = np.asarray(support)
    if n is None:
        return s.astype(np.uint8) & 1
    v = np.zeros(n, dtype=np.uint8)
    v[np.asarray(list(support), dtype=np.int64)] = 1
    return v


def symplectic_commutes(a: PauliOperator, b: PauliOperator) -> bool:
    if a.n != b.n:
        raise ValueError(f"operators act on {a.n} and {b.n} qubits")
    return (_dot(a.x, b.z) + _dot(a.z, b.x)) % 2 == 0


def params(code: CssCode) -> tuple[int, int]:
    """``(n, k)`` with ``k = n - rank hx - rank hz``."""
    return code.n, code.k


@dataclass(frozen=True)
class WeightProfile:
    """Maximum and mean row (w) and column (q) weights per check type."""

    q_x: int
    w_x: int
    q_z: int
    w_z: int
    q: int
    w: int
    q_x_avg: float
    w_x_avg: float
    q_z_avg: float
    w_z_avg: float
    q_avg: float
    w_avg: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _row_col_weights(m: np.ndarray) -> tuple[int, int, float, float]:
    if m.size == 0:
        return 0, 0, 0.0, 0.0
    rows = m.sum(axis=1)
    cols = m.sum(axis=0)
    return int(cols.max()), int(rows.max()), float(cols.mean()), float(rows.mean())


def _stabilizer_blocks(code) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(code, CssCode):
        return code.hx, code.hz
    n = code.n
    stab = code.stab
    return stab[:, :n], stab[:, n:]


def weight_profile(code) -> WeightProfile:
    """Row and column weights of the X and Z parts of the check matrices.

    For a :class:`SymplecticCode` the X and Z halves of the generator
    matrix play the roles of ``hx`` and ``hz``; rows that vanish in a
    half are dropped from that half's statistics.
    """
    hx, hz = _stabilizer_blocks(code)
    if not isinstance(code, CssCode):
        hx = hx[hx.any(axis=1)]
        hz = hz[hz.any(axis=1)]
    qx, wx, qxa, wxa = _row_col_weights(hx)
    qz, wz, qza, wza = _row_col_weights(hz)
    if isinstance(code, CssCode):
        both = np.vstack([hx, hz]) if hx.size + hz.size else np.zeros((0, code.n), np.uint8)
        row_w = both.sum(axis=1) if both.size else np.zeros(0)
    else:
        s = code.stab
        n = code.n
        support = s[:, :n] | s[:, n:]
        both = np.vstack([hx, hz])
        row_w = support.sum(axis=1)
    col_w = both.sum(axis=0) if both.size else np.zeros(0)
    q = int(col_w.max()) if col_w.size else 0
    w = int(row_w.max()) if row_w.size else 0
    return WeightProfile(
        qx, wx, qz, wz, q, w, qxa, wxa, qza, wza,
        float(col_w.mean()) if col_w.size else 0.0,
        float(row_w.mean()) if row_w.size else 0.0,
    )


def logical_basis(code: CssCode, sector: str) -> np.ndarray:
    """Coset representatives of the nontrivial logicals of one type.

    X sector: ``ker hz / rowspace hx``; Z sector: ``ker hx / rowspace hz``.
    """
    s = _sector(sector)
    same, opp = (code.hx, code.hz) if s == "X" else (code.hz, code.hx)
    return f2la.complement_basis(same, f2la.nullspace(opp))


def is_logical(code: CssCode, vec, sector: str) -> bool:
    """True iff ``vec`` (a support vector) is a nontrivial logical of ``sector`` type."""
    s = _sector(sector)
    v = np.asarray(vec, dtype=np.uint8).reshape(-1) & 1
    same, opp = (code.hx, code.hz) if s == "X" else (code.hz, code.hx)
    if f2la.mat_mul(opp, v[:, None]).any():
        return False
    return not f2la.row_space_contains(same, v)


def _dressed_rows(code: CssCode, s: str, gauge_rows) -> tuple[np.ndarray, np.ndarray]:
    same, opp = (code.hx, code.hz) if s == "X" else (code.hz, code.hx)
    if gauge_rows is not None:
        g = as_bits(gauge_rows, ncols=code.n)
        if g.shape[1] != code.n:
            raise ValueError("gauge rows must act on all code qubits")
        if f2la.mat_mul(opp, g.T).any():
            raise ValueError("gauge rows must commute with the opposite checks")
        same = np.vstack([same, g])
    return same, opp


def _coset_test_matrix(same: np.ndarray, opp: np.ndarray) -> np.ndarray:
    """Rows ``N`` with ``v in rowspace(same) <=> N v = 0`` for every ``v in ker opp``."""
    return f2la.complement_basis(opp, f2la.nullspace(same))


def exact_distance(code: CssCode, sector: str, gauge_rows=None, cap: int = 26) -> int | float:
    """Minimum weight of a nontrivial logical of the given type, by enumeration.

    With ``gauge_rows`` the gauge operators are added to the stabilizers
    before the triviality test, giving the dressed distance. Returns
    :data:`INFINITE` when every element of the kernel is trivial.

    Raises
    ------
    DistanceCapExceeded
        When ``dim ker`` of the opposite check matrix is above ``cap``.
    """
    s = _sector(sector)
    same, opp = _dressed_rows(code, s, gauge_rows)
    kernel_dim = code.n - f2la.rank(opp)
    if kernel_dim > cap:
        raise DistanceCapExceeded(f"kernel dimension {kernel_dim} exceeds cap {cap}")
    trivial = f2la.complement_basis(np.zeros((0, code.n), np.uint8), same)
    logical = f2la.complement_basis(trivial, f2la.nullspace(opp))
    if logical.shape[0] == 0:
        return INFINITE
    return _min_weight_nontrivial(logical, trivial)


def _min_weight_nontrivial(logical: np.ndarray, trivial: np.ndarray, table_bits: int = 16) -> int:
    """Minimum weight over ``span(logical) + span(trivial)`` with a nonzero logical part."""
    basis = np.vstack([logical, trivial])
    nl = logical.shape[0]
    dim = basis.shape[0]
    packed = f2la.pack_rows(basis)
    b = min(dim, table_bits)
    # table of all combinations of the first b basis vectors
    table = np.zeros((1 << b, packed.shape[1]), dtype=np.uint64)
    for i in range(b):
        table[1 << i: 1 << (i + 1)] = table[: 1 << i] ^ packed[i]
    idx = np.arange(1 << b)
    table_nontrivial = (idx & ((1 << min(nl, b)) - 1)) != 0
    outer_logical_mask = (1 << max(nl - b, 0)) - 1
    best = None
    offset = np.zeros(packed.shape[1], dtype=np.uint64)
    prev = 0
    for i in range(1 << (dim - b)):
        gray = i ^ (i >> 1)
        flip = gray ^ prev
        if flip:
            offset ^= packed[b + flip.bit_length() - 1]
        prev = gray
        weights = np.bitwise_count(table ^ offset).sum(axis=1, dtype=np.int64)
        if not (gray & outer_logical_mask):
            weights = weights[table_nontrivial]
            if weights.size == 0:
                continue
        m = int(weights.min())
        if best is None or m < best:
            best = m
            if best == 1:
                break
    return best


@numba.njit(cache=True)
def _isd_batch(h_packed, test_packed, ncols, perms, best):
    """Information-set trials: returns the best weight and a witness vector."""
    nrows, nwords = h_packed.shape
    work = np.empty_like(h_packed)
    is_pivot = np.zeros(ncols, dtype=np.bool_)
    witness = np.zeros(nwords, dtype=np.uint64)
    found = False
    vec = np.zeros(nwords, dtype=np.uint64)
    for t in range(perms.shape[0]):
        work[:, :] = h_packed
        pivots = _eliminate_inline(work, perms[t])
        r = pivots.size
        is_pivot[:] = False
        for i in range(r):
            is_pivot[pivots[i]] = True
        for j in range(ncols):
            if is_pivot[j]:
                continue
            w = j >> 6
            bj = np.uint64(1) << np.uint64(j & 63)
            wt = 1
            for i in range(r):
                if work[i, w] & bj:
                    wt += 1
            if wt >= best:
                continue
            vec[:] = 0
            vec[w] |= bj
            for i in range(r):
                if work[i, w] & bj:
                    p = pivots[i]
                    vec[p >> 6] |= np.uint64(1) << np.uint64(p & 63)
            nontrivial = False
            for s in range(test_packed.shape[0]):
                acc = np.uint64(0)
                for k in range(nwords):
                    acc ^= test_packed[s, k] & vec[k]
                # parity of acc
                acc ^= acc >> np.uint64(32)
                acc ^= acc >> np.uint64(16)
                acc ^= acc >> np.uint64(8)
                acc ^= acc >> np.uint64(4)
                acc ^= acc >> np.uint64(2)
                acc ^= acc >> np.uint64(1)
                if acc & np.uint64(1):
                    nontrivial = True
                    break
            if nontrivial:
                best = wt
                witness[:] = vec
                found = True
    return best, witness, found


@numba.njit(cache=True)
def _eliminate_inline(rows, order):
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
        for i in range(nrows):
            if i != prow and rows[i, w] & b:
                for k in range(nwords):
                    rows[i, k] ^= rows[prow, k]
        pivots[prow] = c
        prow += 1
    return pivots[:prow]


@dataclass
class DistanceSearch:
    """Outcome of :func:`distance_search`."""

    bound: int | float
    witness: np.ndarray | None
    trials: int
    seed: int
    workers: int = 1
    history: list = field(default_factory=list)


def distance_search(code: CssCode, sector: str, trials: int = 1000, seed: int = 0,
                    gauge_rows=None, workers: int = 1, batch: int = 256) -> DistanceSearch:
    """Randomized information-set search for low-weight logicals.

    Each trial permutes the columns, row-reduces the opposite check matrix
    and inspects the kernel vector attached to every non-pivot column.
    Trials are split into ``workers`` streams spawned from ``seed``; the
    result depends on ``(seed, workers)`` only.
    """
    s = _sector(sector)
    same, opp = _dressed_rows(code, s, gauge_rows)
    test = _coset_test_matrix(same, opp)
    n = code.n
    if test.shape[0] == 0:
        return DistanceSearch(INFINITE, None, trials, seed, workers)
    h = opp[opp.any(axis=1)] if opp.size else np.zeros((0, n), np.uint8)
    h_packed = f2la.pack_rows(h) if h.shape[0] else np.zeros((0, max(1, (n + 63) // 64)), np.uint64)
    test_packed = f2la.pack_rows(test)
    best = n + 1
    witness = None
    history = []
    streams = np.random.SeedSequence(seed).spawn(max(1, workers))
    per_stream = [trials // len(streams) + (1 if i < trials % len(streams) else 0)
                  for i in range(len(streams))]
    for ss, count in zip(streams, per_stream):
        rng = np.random.default_rng(ss)
        done = 0
        while done < count:
            m = min(batch, count - done)
            perms = np.argsort(rng.random((m, n)), axis=1).astype(np.int64)
            b, wvec, found = _isd_batch(h_packed, test_packed, n, perms, best)
            if found:
                best = int(b)
                witness = f2la.unpack_rows(wvec[None, :], n)[0]
            done += m
            history.append(best)
    return DistanceSearch(best if witness is not None else INFINITE, witness, trials, seed, workers, history)


def distance_upper_bound(code: CssCode, sector: str, trials: int = 1000, seed: int = 0,
                         gauge_rows=None, workers: int = 1) -> int | float:
    """Best upper bound on the distance found by :func:`distance_search`."""
    return distance_search(code, sector, trials, seed, gauge_rows, workers).bound
