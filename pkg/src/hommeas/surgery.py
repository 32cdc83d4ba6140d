"""
Measurement constructions built from mapping cones.

Every construction here produces a :class:`MeasurementArtifact`. Its
``f1``, ``f0``, ``d1`` and ``d0`` describe a chain map from a three-term
ancilla complex into the code complex, and ``merged`` is the cone code

::

    HX~ = [[HX,    0  ],      HZ~ = [[HZ, f0],
           [f1^T, d1^T]]             [0,  d0]]

``d1`` is an edge-vertex incidence matrix, so the ancilla qubits are the
graph edges and every vertex (a qubit of the measured operator) becomes a
new X check. Z-type operators are handled by running the same steps on
the dual code and swapping the two sectors of the result.

Besides the main construction (``algorithm3_measure``) the module offers
joint measurements of mixed X/Y/Z operators, parallel measurements, and
three reference schemes: lattice surgery of two codes, generalized
lattice surgery with ``r`` layers, and the mapping-cylinder variant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import f2la
from .css import CssCode, PauliOperator, SymplecticCode, _sector, is_logical, weight_profile
from .f2la import as_bits
from .homology import LogicalGaugeCounts, ancilla_chain, code_chain_map, logical_gauge_counts
from .hypergraph import (
    DEFAULT_CHEEGER_CAP,
    Hypergraph,
    cellulate,
    cheeger,
    cycle_basis,
    expand_edges,
    expand_hyperedges,
)

__all__ = [
    "NotALogicalError",
    "MeasurementOptions",
    "MeasurementArtifact",
    "ParallelMeasurement",
    "cone_code",
    "restriction_maps",
    "restriction_maps_by_deletion",
    "algorithm2_low_weight_d0",
    "algorithm3_measure",
    "mixed_measure",
    "parallel_measure",
    "extend_operator",
    "scheme_lattice_surgery",
    "scheme_generalized_lattice_surgery",
    "scheme_cylinder",
    "direct_sum",
]

DEFAULT_SAMPLES = 1000

# Row tags. "new-X" rows are the vertex checks of an X measurement; the
# product of their outcomes is the measured logical value.
ORIGINAL_X = "original-X"
ORIGINAL_Z = "original-Z"
NEW_X = "new-X"
NEW_Z = "new-Z"
NEW_Y = "new-Y"
NEW_X_CYCLE = "new-X-cycle"
NEW_Z_CYCLE = "new-Z-cycle"
NEW_CYCLE = "new-cycle"
CYLINDER_LINK = "cylinder-link"


class NotALogicalError(ValueError):
    """The operator to measure is not a nontrivial logical of the code."""


@dataclass(frozen=True)
class MeasurementOptions:
    """Knobs of the edge expanded construction.

    Parameters
    ----------
    seed : int
        Seed of the random search for ``d0``.
    samples : int
        Random candidates tried when looking for a sparse ``d0``.
    expand : bool
        Run the greedy edge expansion. Turning it off reproduces the bare
        restriction cone, which may lose distance.
    cellulation : bool
        Allow the fallback branch (hyperedge splitting plus chords) when
        ``d0`` is too heavy.
    threshold : int, optional
        Largest acceptable ``d0`` row weight. Defaults to
        ``max(w_X, w_Z) + 2`` of the input code.
    max_cycle_weight : int, optional
        Cycles of at least this weight are split by chords. Defaults to
        ``threshold + 1``; giving it also forces the fallback branch to run
        whenever some ``d0`` row reaches it.
    max_degree : int, optional
        Vertex degree limit while adding chords. Defaults to
        ``threshold - 1``.
    cheeger_cap : int
        Largest vertex count for exact Cheeger computations.
    """

    seed: int = 0
    samples: int = DEFAULT_SAMPLES
    expand: bool = True
    cellulation: bool = True
    threshold: int | None = None
    max_cycle_weight: int | None = None
    max_degree: int | None = None
    cheeger_cap: int = DEFAULT_CHEEGER_CAP


@dataclass(frozen=True, eq=False)
class MeasurementArtifact:
    """Everything produced by one measurement construction.

    Attributes
    ----------
    code : CssCode
        The input code.
    measured_operator : PauliOperator
        The logical being measured, on the input qubits.
    sector : str
        ``"X"``, ``"Z"`` or ``"Y"`` (mixed). For ``"Z"`` the four maps
        refer to the dual code.
    f1, f0, d1, d0 : ndarray
        Chain map and ancilla complex, ``d1`` of shape ``(edges, vertices)``.
    merged : CssCode or SymplecticCode
        The code after the measurement.
    row_provenance : tuple of str
        One tag per stabilizer row of ``merged``, X rows first for CSS
        results and in generator order for symplectic ones.
    scheme : str
        Name of the construction.
    sign : int
        ``+1`` or ``-1``; the logical eigenvalue equals ``sign`` times the
        product of the new-row outcomes.
    """

    code: CssCode
    measured_operator: PauliOperator
    sector: str
    f1: np.ndarray
    f0: np.ndarray
    d1: np.ndarray
    d0: np.ndarray
    merged: CssCode | SymplecticCode
    row_provenance: tuple
    scheme: str = "eehm"
    seed: int | None = None
    samples: int | None = None
    cheeger_trace: tuple = ()
    added_edges: tuple = ()
    chords: tuple = ()
    flags: frozenset = frozenset()
    sign: int = 1
    extras: dict = field(default_factory=dict)

    @property
    def ancilla_count(self) -> int:
        """Number of ancilla qubits added to the code."""
        return self.merged.n - self.code.n

    @property
    def vertex_count(self) -> int:
        return self.d1.shape[1]

    @property
    def is_css(self) -> bool:
        return isinstance(self.merged, CssCode)

    def rows_with(self, tag: str) -> np.ndarray:
        """Stabilizer rows carrying ``tag`` in symplectic ``(x | z)`` form."""
        stab = _symplectic_rows(self.merged)
        idx = [i for i, t in enumerate(self.row_provenance) if t == tag]
        return stab[idx]

    def counts(self) -> LogicalGaugeCounts:
        """Logical and gauge counts of the cone, from the stored maps."""
        base = self.code if self.sector != "Z" else self.code.dual()
        anc = ancilla_chain(self.d1, self.d0)
        f = code_chain_map(base, anc, self.f1, self.f0)
        return logical_gauge_counts(base, anc, f)

    def cheeger(self, cap: int = DEFAULT_CHEEGER_CAP) -> Fraction:
        return cheeger(Hypergraph(self.d1, self.d1.shape[1]), cap)

    def summary(self) -> dict:
        """Plain-data description used by the command-line reports."""
        prof = weight_profile(self.merged).as_dict()
        return {
            "scheme": self.scheme,
            "sector": self.sector,
            "n": int(self.merged.n),
            "k": int(self.merged.k),
            "n_anc": int(self.ancilla_count),
            "weights": prof,
            "added_edges": [list(e) for e in self.added_edges],
            "chords": [list(e) for e in self.chords],
            "cheeger_trace": [str(h) for h in self.cheeger_trace],
            "seed": self.seed,
            "samples": self.samples,
            "flags": sorted(self.flags),
            "sign": self.sign,
        }


def _symplectic_rows(code) -> np.ndarray:
    if isinstance(code, CssCode):
        return code.to_symplectic().stab
    return code.stab


# --- building blocks ---------------------------------------------------------


def cone_code(code: CssCode, f1, f0, d1, d0) -> CssCode:
    """The cone code of a chain map ``(f1, f0)`` from ``A_1 -d1-> A_0 -d0-> A_-1``."""
    f1 = as_bits(f1)
    f0 = as_bits(f0)
    d1 = as_bits(d1)
    e, w = d1.shape
    d0 = as_bits(d0, ncols=e)
    n = code.n
    nx = code.hx.shape[0]
    hx = np.block([
        [code.hx, np.zeros((nx, e), np.uint8)],
        [f1.T.reshape(w, n), d1.T],
    ]).astype(np.uint8)
    hz = np.block([
        [code.hz, f0.reshape(code.hz.shape[0], e)],
        [np.zeros((d0.shape[0], n), np.uint8), d0],
    ]).astype(np.uint8)
    return CssCode(hx, hz)


def _css_tags(nx, w, nz, c, sector: str) -> tuple:
    if sector == "Z":
        return (ORIGINAL_X,) * nz + (NEW_X_CYCLE,) * c + (ORIGINAL_Z,) * nx + (NEW_Z,) * w
    return (ORIGINAL_X,) * nx + (NEW_X,) * w + (ORIGINAL_Z,) * nz + (NEW_Z_CYCLE,) * c


def _sector_view(code: CssCode, sector: str) -> CssCode:
    return code if sector == "X" else code.dual()


def _support(vec) -> np.ndarray:
    return np.flatnonzero(np.asarray(vec, dtype=np.uint8) & 1)


def _check_support(support, n: int) -> np.ndarray:
    q = np.asarray(list(support), dtype=np.int64).reshape(-1)
    if q.size == 0:
        raise ValueError("the support is empty")
    if (np.diff(q) <= 0).any():
        raise ValueError("support indices must be strictly increasing")
    if q[0] < 0 or q[-1] >= n:
        raise ValueError(f"support index outside 0..{n - 1}")
    return q


def restriction_maps(code: CssCode, support, sector: str = "X"):
    """Restriction of the opposite check matrix to an operator's support.

    For an X operator on qubits ``q_0 < ... < q_{w-1}`` the Z checks are
    cut down to those columns. Checks touching the support become edges
    of a hypergraph on ``w`` vertices.

    Returns
    -------
    f1 : ndarray, shape (n, w)
        ``f1[i, j] = 1`` iff ``i == q_j``.
    d1_star : ndarray, shape (n_Z', w)
        Nonzero rows of ``HZ[:, q]``.
    f0_star : ndarray, shape (n_Z, n_Z')
        ``f0_star[i, j] = 1`` iff check ``i`` is the ``j``-th nonzero row.

    Raises
    ------
    ValueError
        If the support is unsorted, has repeats, or is not annihilated by
        the opposite checks.
    """
    s = _sector(sector)
    opp = code.hz if s == "X" else code.hx
    n = code.n
    q = _check_support(support, n)
    ind = np.zeros(n, np.uint8)
    ind[q] = 1
    if f2la.mat_mul(opp, ind[:, None]).any():
        raise ValueError(f"the support does not commute with the {'Z' if s == 'X' else 'X'} checks")
    w = q.size
    f1 = np.zeros((n, w), np.uint8)
    f1[q, np.arange(w)] = 1
    restricted = opp[:, q]
    h = np.flatnonzero(restricted.any(axis=1))
    d1_star = restricted[h].copy()
    f0_star = np.zeros((opp.shape[0], h.size), np.uint8)
    f0_star[h, np.arange(h.size)] = 1
    return f1, d1_star, f0_star


def restriction_maps_by_deletion(code: CssCode, support, sector: str = "X"):
    """Same maps as :func:`restriction_maps`, by deleting rows and columns.

    Start from ``f1 = I_n``, ``d1 = HZ`` and ``f0 = I_{n_Z}``; delete the
    qubit columns outside the support from ``f1`` and ``d1``, then delete
    every zero row of ``d1`` together with the matching column of ``f0``.
    """
    s = _sector(sector)
    opp = code.hz if s == "X" else code.hx
    n = code.n
    q = _check_support(support, n)
    f1 = np.eye(n, dtype=np.uint8)
    d1 = opp.copy()
    f0 = np.eye(opp.shape[0], dtype=np.uint8)
    keep_cols = np.isin(np.arange(n), q)
    f1 = np.delete(f1, np.flatnonzero(~keep_cols), axis=1)
    d1 = np.delete(d1, np.flatnonzero(~keep_cols), axis=1)
    if f2la.mat_mul(d1, np.ones((d1.shape[1], 1), np.uint8)).any():
        raise ValueError("the support does not commute with the opposite checks")
    zero_rows = np.flatnonzero(~d1.any(axis=1))
    d1 = np.delete(d1, zero_rows, axis=0)
    f0 = np.delete(f0, zero_rows, axis=1)
    return f1, d1, f0


def _max_row_weight(m: np.ndarray) -> int:
    return int(m.sum(axis=1).max()) if m.shape[0] else 0


def algorithm2_low_weight_d0(d1, hz, f0, samples: int = DEFAULT_SAMPLES, seed=0) -> np.ndarray:
    """Random search for a sparse set of cycle rows ``d0``.

    Cycles of the form ``v^T f0`` with ``v^T hz = 0`` already lie in the
    merged Z stabilizer group. They span ``V``; the returned rows span a
    complement ``W`` of ``V`` inside the cycle space of ``d1``. Starting
    from a reduced echelon basis of ``W``, each sample draws an invertible
    ``A`` and an arbitrary ``B`` and keeps ``A W + B V`` or ``A W`` when
    its largest row weight is strictly smaller than the current best.

    Parameters
    ----------
    d1 : ndarray, shape (E, w)
        Edge-vertex incidence matrix.
    hz : ndarray, shape (m, n)
        Checks whose left kernel produces ``V``. An empty matrix gives
        ``V = 0``.
    f0 : ndarray, shape (m, E)
    samples : int
    seed : int or numpy Generator

    Returns
    -------
    ndarray, shape (dim W, E)
    """
    d1 = as_bits(d1)
    e = d1.shape[0]
    hz = as_bits(hz)
    f0 = as_bits(f0, ncols=e)
    if hz.shape[0] != f0.shape[0]:
        raise ValueError("hz and f0 must have the same number of rows")
    cycles = f2la.nullspace(d1.T)
    if hz.shape[0]:
        left = f2la.nullspace(hz.T)
        v_raw = f2la.mat_mul(left, f0) if left.shape[0] else np.zeros((0, e), np.uint8)
    else:
        v_raw = np.zeros((0, e), np.uint8)
    v, pivots = f2la.rref(v_raw)
    v = v[: len(pivots)]
    w_mat = cycles.copy()
    for r, p in enumerate(pivots):
        hit = w_mat[:, p] == 1
        w_mat[hit] ^= v[r]
    w_mat, wp = f2la.rref(w_mat)
    w_mat = w_mat[: len(wp)]
    best = w_mat
    if w_mat.shape[0] == 0:
        return best.copy()
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    best_w = _max_row_weight(best)
    k, dv = w_mat.shape[0], v.shape[0]
    for _ in range(samples):
        a = f2la.random_invertible(k, rng)
        b = f2la.random_matrix(k, dv, rng) if dv else None
        aw = f2la.mat_mul(a, w_mat)
        if b is not None:
            cand = aw ^ f2la.mat_mul(b, v)
            cw = _max_row_weight(cand)
            if cw < best_w:
                best, best_w = cand, cw
        cw = _max_row_weight(aw)
        if cw < best_w:
            best, best_w = aw, cw
    return best.copy()


def _require_logical(code: CssCode, op: PauliOperator) -> str:
    if op.n != code.n:
        raise ValueError(f"operator acts on {op.n} qubits, the code has {code.n}")
    if op.is_x_type and op.weight:
        sector, vec = "X", op.x
    elif op.is_z_type and op.weight:
        sector, vec = "Z", op.z
    else:
        raise ValueError("expected a nonidentity pure X or pure Z operator")
    if not is_logical(code, vec, sector):
        raise NotALogicalError(f"the operator is not a nontrivial {sector} logical of the code")
    return sector


def _acceptable_threshold(code: CssCode, opts: MeasurementOptions) -> int:
    if opts.threshold is not None:
        return opts.threshold
    prof = weight_profile(code)
    return max(prof.w_x, prof.w_z) + 2


def _measure_sector(code: CssCode, vec: np.ndarray, opts: MeasurementOptions) -> dict:
    """Edge expanded construction for an X operator ``vec`` of ``code``."""
    support = _support(vec)
    f1, d1_star, f0_star = restriction_maps(code, support, "X")
    w = support.size
    base = Hypergraph(d1_star, w)
    trace: list = []
    added: list = []
    graph = base
    if opts.expand:
        graph, added = expand_edges(base, opts.cheeger_cap, trace)
    f0 = np.hstack([f0_star, np.zeros((f0_star.shape[0], len(added)), np.uint8)])
    d1 = graph.incidence
    rng = np.random.default_rng(opts.seed)
    d0 = algorithm2_low_weight_d0(d1, code.hz, f0, opts.samples, rng)
    threshold = _acceptable_threshold(code, opts)
    trigger = opts.max_cycle_weight if opts.max_cycle_weight is not None else threshold + 1
    max_degree = opts.max_degree if opts.max_degree is not None else threshold - 1
    flags = set()
    chords: list = []
    hyper_split = False
    if opts.cellulation and _max_row_weight(d0) >= trigger:
        flags.add("fallback")
        graph, origin = expand_hyperedges(base, opts.cheeger_cap)
        hyper_split = graph.n_edges != base.n_edges
        f0 = f0_star[:, origin]
        added = []
        trace = []
        if opts.expand:
            graph, added = expand_edges(graph, opts.cheeger_cap, trace)
        f0 = np.hstack([f0, np.zeros((f0.shape[0], len(added)), np.uint8)])
        d0 = algorithm2_low_weight_d0(graph.incidence, code.hz, f0, opts.samples, rng)
        cell = cellulate(graph, d0, trigger, max_degree)
        chords = list(cell.added)
        graph = cell.graph
        d0 = cell.cycles
        f0 = np.hstack([f0, np.zeros((f0.shape[0], len(chords)), np.uint8)])
        if not cell.complete:
            flags.add("cellulation-incomplete")
        d1 = graph.incidence
    if _max_row_weight(d0) > threshold:
        flags.add("heavy-d0")
    if hyper_split:
        flags.add("hyperedges-split")
    return {
        "f1": f1, "f0": f0, "d1": d1, "d0": d0,
        "trace": tuple(trace), "added": tuple(added), "chords": tuple(chords),
        "flags": flags,
    }


def algorithm3_measure(code: CssCode, op: PauliOperator,
                       options: MeasurementOptions | None = None) -> MeasurementArtifact:
    """Edge expanded homological measurement of a pure X or pure Z logical.

    Steps: restrict the opposite checks to the support, add edges until
    the Cheeger constant is at least 1, pick sparse cycle rows, and if
    they are heavier than the acceptance threshold redo the graph with
    hyperedges split into pairs and cellulate heavy cycles.

    Raises
    ------
    NotALogicalError
        If ``op`` is not a nontrivial logical.
    CheegerCapExceeded
        If the support is larger than ``options.cheeger_cap``.
    """
    opts = options or MeasurementOptions()
    sector = _require_logical(code, op)
    view = _sector_view(code, sector)
    vec = op.x if sector == "X" else op.z
    parts = _measure_sector(view, vec, opts)
    merged = cone_code(view, parts["f1"], parts["f0"], parts["d1"], parts["d0"])
    if sector == "Z":
        merged = merged.dual()
    tags = _css_tags(view.hx.shape[0], parts["d1"].shape[1], view.hz.shape[0],
                     parts["d0"].shape[0], sector)
    return MeasurementArtifact(
        code=code, measured_operator=op, sector=sector,
        f1=parts["f1"], f0=parts["f0"], d1=parts["d1"], d0=parts["d0"],
        merged=merged, row_provenance=tags, scheme="eehm",
        seed=opts.seed, samples=opts.samples,
        cheeger_trace=parts["trace"], added_edges=parts["added"], chords=parts["chords"],
        flags=frozenset(parts["flags"]),
    )


def direct_sum(*codes: CssCode) -> CssCode:
    """Block-diagonal union of codes, qubits numbered code by code."""
    return CssCode(f2la.block_diag(*(c.hx for c in codes)), f2la.block_diag(*(c.hz for c in codes)))


# --- mixed X/Y/Z operators ---------------------------------------------------


def _expanded_graph(code: CssCode, vec, opts: MeasurementOptions):
    support = _support(vec)
    f1, d1_star, f0_star = restriction_maps(code, support, "X")
    g = Hypergraph(d1_star, support.size)
    added: list = []
    trace: list = []
    if opts.expand:
        g, added = expand_edges(g, opts.cheeger_cap, trace)
    f0 = np.hstack([f0_star, np.zeros((f0_star.shape[0], len(added)), np.uint8)])
    return support, f1, g.incidence, f0, added, trace


def mixed_measure(code: CssCode, op: PauliOperator,
                  options: MeasurementOptions | None = None) -> MeasurementArtifact:
    """Joint measurement of a logical with both X and Z parts.

    The operator is split as ``X^x Z^z`` and each part gets its own
    expanded graph. New X and Z vertex checks sharing a qubit are merged
    into one generator; if no such pair exists, the pair of lightest
    generators is merged instead. Cycles of the union graph (merged
    vertices identified) give the final generators. Ancilla qubits are
    numbered with the X graph's edges first.

    The result is a :class:`SymplecticCode`. ``sign`` relates the
    product of the new generators' outcomes to the eigenvalue of ``op``.
    Pure operators are passed on to :func:`algorithm3_measure`.
    """
    opts = options or MeasurementOptions()
    if op.n != code.n:
        raise ValueError(f"operator acts on {op.n} qubits, the code has {code.n}")
    if not op.x.any() or not op.z.any():
        return algorithm3_measure(code, op, opts)
    if op.phase % 2:
        raise ValueError("the operator is not Hermitian")
    if f2la.mat_mul(code.hz, op.x[:, None]).any() or f2la.mat_mul(code.hx, op.z[:, None]).any():
        raise NotALogicalError("the X and Z parts must each commute with the checks")
    if f2la.row_space_contains(code.to_symplectic().stab, op.symplectic):
        raise NotALogicalError("the operator is a stabilizer")

    n = code.n
    nx, nz = code.hx.shape[0], code.hz.shape[0]
    qx, f1x, d1x, f0x, added_x, trace_x = _expanded_graph(code, op.x, opts)
    qz, f1z, d1z, f0z, added_z, trace_z = _expanded_graph(code.dual(), op.z, opts)
    ex, wx = d1x.shape
    ez, wz = d1z.shape
    ntot = n + ex + ez

    def xrow(u):
        row = np.zeros(2 * ntot, np.uint8)
        row[qx[u]] = 1
        row[n: n + ex] = d1x[:, u]
        return row

    def zrow(v):
        row = np.zeros(2 * ntot, np.uint8)
        row[ntot + qz[v]] = 1
        row[ntot + n + ex: ntot + n + ex + ez] = d1z[:, v]
        return row

    shared = sorted(set(qx.tolist()) & set(qz.tolist()))
    pos_x = {int(q): i for i, q in enumerate(qx)}
    pos_z = {int(q): i for i, q in enumerate(qz)}
    if shared:
        pairs = [(pos_x[q], pos_z[q]) for q in shared]
        flags = {"anticommuting-parts"}
    else:
        weights_x = [int(xrow(u).sum()) for u in range(wx)]
        weights_z = [int(zrow(v).sum()) for v in range(wz)]
        u = int(np.argmin(weights_x))
        v = int(np.argmin(weights_z))
        pairs = [(u, v)]
        flags = {"commuting-parts"}
    merged_x = {u for u, _ in pairs}
    merged_z = {v for _, v in pairs}
    only_x = [u for u in range(wx) if u not in merged_x]
    only_z = [v for v in range(wz) if v not in merged_z]

    # union graph: vertices [X only, merged, Z only], edges [X edges, Z edges]
    inc = np.zeros((ex + ez, len(only_x) + len(pairs) + len(only_z)), np.uint8)
    for c, u in enumerate(only_x):
        inc[:ex, c] = d1x[:, u]
    for c, (u, v) in enumerate(pairs):
        inc[:ex, len(only_x) + c] = d1x[:, u]
        inc[ex:, len(only_x) + c] = d1z[:, v]
    for c, v in enumerate(only_z):
        inc[ex:, len(only_x) + len(pairs) + c] = d1z[:, v]

    f0_all = f2la.block_diag(f0x, f0z)
    hz_all = f2la.block_diag(code.hz, code.hx)
    d0 = algorithm2_low_weight_d0(inc, hz_all, f0_all, opts.samples, np.random.default_rng(opts.seed))
    d0x, d0z = d0[:, :ex], d0[:, ex:]

    rows: list[np.ndarray] = []
    tags: list[str] = []
    for r in range(nx):
        row = np.zeros(2 * ntot, np.uint8)
        row[:n] = code.hx[r]
        row[n + ex: ntot] = f0z[r]
        rows.append(row)
        tags.append(ORIGINAL_X)
    for u in only_x:
        rows.append(xrow(u))
        tags.append(NEW_X)
    for u, v in pairs:
        rows.append(xrow(u) ^ zrow(v))
        tags.append(NEW_Y)
    for r in range(nz):
        row = np.zeros(2 * ntot, np.uint8)
        row[ntot: ntot + n] = code.hz[r]
        row[ntot + n: ntot + n + ex] = f0x[r]
        rows.append(row)
        tags.append(ORIGINAL_Z)
    for v in only_z:
        rows.append(zrow(v))
        tags.append(NEW_Z)
    for c in range(d0.shape[0]):
        row = np.zeros(2 * ntot, np.uint8)
        row[n + ex: ntot] = d0z[c]
        row[ntot + n: ntot + n + ex] = d0x[c]
        rows.append(row)
        tags.append(NEW_CYCLE)
    stab = np.array(rows, dtype=np.uint8).reshape(-1, 2 * ntot)
    merged = SymplecticCode(stab)

    product = PauliOperator(np.zeros(ntot, np.uint8), np.zeros(ntot, np.uint8), 0)
    for row, tag in zip(stab, tags):
        if tag in (NEW_X, NEW_Y, NEW_Z):
            x, z = row[:ntot], row[ntot:]
            product = product * PauliOperator(x, z, 0)
    target = op.padded(ex + ez)
    if not (np.array_equal(product.x, target.x) and np.array_equal(product.z, target.z)):
        raise RuntimeError("new generators do not multiply to the measured operator")
    rel = (op.phase - product.phase) % 4
    if rel % 2:
        raise RuntimeError("phase bookkeeping failed")
    sign = 1 if rel == 0 else -1

    return MeasurementArtifact(
        code=code, measured_operator=op, sector="Y",
        f1=np.hstack([f1x, f1z]),
        f0=f0_all, d1=inc, d0=d0, merged=merged, row_provenance=tuple(tags),
        scheme="eehm-mixed", seed=opts.seed, samples=opts.samples,
        cheeger_trace=tuple(trace_x) + tuple(trace_z),
        added_edges=tuple(added_x) + tuple(added_z),
        flags=frozenset(flags), sign=sign,
        extras={"pairs": tuple((int(qx[u]), int(qz[v])) for u, v in pairs),
                "x_edges": ex, "z_edges": ez},
    )


# --- parallel measurement ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class ParallelMeasurement:
    """Result of measuring several commuting logicals one after another.

    ``steps[i]`` measured ``operators[i]``, extended to the qubits present
    at that point. ``merged`` is the final code.
    """

    code: CssCode
    merged: CssCode
    steps: tuple
    operators: tuple

    @property
    def ancilla_count(self) -> int:
        return self.merged.n - self.code.n


def extend_operator(artifact: MeasurementArtifact, op: PauliOperator) -> PauliOperator:
    """Carry a pure logical across one CSS measurement onto the merged qubits.

    An operator of the measured type is padded with identities. One of
    the opposite type needs a correction ``y`` on the ancillas solving
    ``d1^T y = f1^T z`` so that it commutes with the new vertex checks.

    Raises
    ------
    RuntimeError
        If the system has no solution, which happens only when ``op``
        anticommutes with the measured operator.
    """
    if not artifact.is_css:
        raise ValueError("only CSS measurements can be extended through")
    extra = artifact.ancilla_count
    same = op.is_x_type if artifact.sector == "X" else op.is_z_type
    if same:
        return op.padded(extra)
    vec = op.z if artifact.sector == "X" else op.x
    rhs = f2la.mat_mul(artifact.f1.T, vec[:, None])[:, 0]
    y = f2la.solve(artifact.d1.T, rhs)
    if y is None:
        raise RuntimeError("no ancilla extension exists; the operators anticommute")
    full = np.concatenate([vec, y]).astype(np.uint8)
    zero = np.zeros_like(full)
    return PauliOperator(zero, full, op.phase) if artifact.sector == "X" else PauliOperator(full, zero, op.phase)


def parallel_measure(code: CssCode, ops, options: MeasurementOptions | None = None) -> ParallelMeasurement:
    """Measure pairwise commuting pure logicals one after another."""
    ops = list(ops)
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            a, b = ops[i], ops[j]
            if (int(a.x @ b.z) + int(a.z @ b.x)) % 2:
                raise ValueError(f"operators {i} and {j} do not commute")
    current = code
    steps = []
    for op in ops:
        ext = op
        for st in steps:
            ext = extend_operator(st, ext)
        art = algorithm3_measure(current, ext, options)
        steps.append(art)
        current = art.merged
    return ParallelMeasurement(code, current, tuple(steps), tuple(ops))


# --- reference schemes -------------------------------------------------------


def _logical_support(code: CssCode, op: PauliOperator) -> tuple[str, np.ndarray, CssCode]:
    sector = _require_logical(code, op)
    view = _sector_view(code, sector)
    return sector, _support(op.x if sector == "X" else op.z), view


def scheme_lattice_surgery(code1: CssCode, code2: CssCode, x1: PauliOperator,
                           x2: PauliOperator) -> MeasurementArtifact:
    """Joint ``X1 X2`` measurement by a line of ``d - 1`` ancillas.

    Both operators must have weight ``d`` and consecutive support qubits
    ``q_j, q_{j+1}`` of each code must share exactly the Z checks that the
    repetition ancilla needs. The merged code lives on
    ``code1 (+) code2`` plus ``d - 1`` ancillas.

    Raises
    ------
    ValueError
        When the weights differ or the checks do not have the expected
        repetition structure.
    """
    if _require_logical(code1, x1) != "X" or _require_logical(code2, x2) != "X":
        raise ValueError("lattice surgery here joins two X logicals")
    s1, s2 = _support(x1.x), _support(x2.x)
    d = s1.size
    if s2.size != d or d < 2:
        raise ValueError("both logicals need the same weight d >= 2")
    code = direct_sum(code1, code2)
    n1 = code1.n
    f1 = np.zeros((code.n, d), np.uint8)
    f1[s1, np.arange(d)] = 1
    f1[n1 + s2, np.arange(d)] = 1
    d1 = np.zeros((d - 1, d), np.uint8)
    d1[np.arange(d - 1), np.arange(d - 1)] = 1
    d1[np.arange(d - 1), np.arange(1, d)] = 1
    nz1 = code1.hz.shape[0]
    f0 = np.zeros((code.hz.shape[0], d - 1), np.uint8)
    for j in range(d - 1):
        f0[:nz1, j] = code1.hz[:, s1[j]] & code1.hz[:, s1[j + 1]]
        f0[nz1:, j] = code2.hz[:, s2[j]] & code2.hz[:, s2[j + 1]]
    if not np.array_equal(f2la.mat_mul(code.hz, f1), f2la.mat_mul(f0, d1)):
        raise ValueError("the Z checks on the supports do not form the repetition structure")
    d0 = np.zeros((0, d - 1), np.uint8)
    merged = cone_code(code, f1, f0, d1, d0)
    op = PauliOperator(np.concatenate([x1.x, x2.x]), np.zeros(code.n, np.uint8))
    return MeasurementArtifact(
        code=code, measured_operator=op, sector="X", f1=f1, f0=f0, d1=d1, d0=d0,
        merged=merged, row_provenance=_css_tags(code.hx.shape[0], d, code.hz.shape[0], 0, "X"),
        scheme="lattice-surgery",
    )


def scheme_generalized_lattice_surgery(code: CssCode, op: PauliOperator, r: int) -> MeasurementArtifact:
    """Ancilla system made of ``r`` stacked copies of the restricted graph.

    The ancilla complex is the product of the restriction ``d1*`` with the
    ``(r - 1) x r`` repetition checks ``H_r``::

        d1 = [[I_r (x) d1*], [H_r (x) I_w]]
        d0 = [H_r (x) I_m, I_{r-1} (x) d1*]

    with ``m`` the number of restricted checks. Only the first layer is
    attached to the code. For ``r = 1`` this is the bare restriction cone.
    """
    if r < 1:
        raise ValueError("r must be at least 1")
    sector, support, view = _logical_support(code, op)
    f1s, d1s, f0s = restriction_maps(view, support, "X")
    m, w = d1s.shape
    n = view.n
    eye = lambda k: np.eye(k, dtype=np.uint8)  # noqa: E731
    if r == 1:
        d1 = d1s.copy()
        d0 = np.zeros((0, m), np.uint8)
    else:
        from .codelib import repetition

        hr = repetition(r)
        d1 = np.vstack([f2la.kron(eye(r), d1s), f2la.kron(hr, eye(w))])
        d0 = np.hstack([f2la.kron(hr, eye(m)), f2la.kron(eye(r - 1), d1s)])
    e = d1.shape[0]
    f1 = np.zeros((n, r * w), np.uint8)
    f1[:, :w] = f1s
    f0 = np.zeros((view.hz.shape[0], e), np.uint8)
    f0[:, :m] = f0s
    merged = cone_code(view, f1, f0, d1, d0)
    if sector == "Z":
        merged = merged.dual()
    tags = _css_tags(view.hx.shape[0], r * w, view.hz.shape[0], d0.shape[0], sector)
    return MeasurementArtifact(
        code=code, measured_operator=op, sector=sector, f1=f1, f0=f0, d1=d1, d0=d0,
        merged=merged, row_provenance=tags, scheme="gls", extras={"r": r},
    )


def scheme_cylinder(code: CssCode, op: PauliOperator, d2: str = "zero") -> MeasurementArtifact:
    """The mapping-cylinder code built on the bare restriction maps.

    Qubits are ordered as original, edges ``A_0`` and vertices ``A_1``.
    The result keeps the X-distance but does not measure ``op``: the
    operator is not in the X row space, which is recorded by the flag
    ``"not-a-measurement"``.

    Parameters
    ----------
    d2 : {"zero", "ones"}
        Map from ``A_2``. ``"ones"`` would add a check equal to the
        operator itself on the vertex copy, which is as heavy as the
        logical, so it is refused.
    """
    if d2 == "ones":
        raise ValueError("a d2 of all ones gives a check as heavy as the logical itself; "
                         "use d2='zero'")
    if d2 != "zero":
        raise ValueError("d2 must be 'zero' or 'ones'")
    sector, support, view = _logical_support(code, op)
    f1, d1, f0 = restriction_maps(view, support, "X")
    e, w = d1.shape
    n = view.n
    nx, nz = view.hx.shape[0], view.hz.shape[0]
    z = lambda a, b: np.zeros((a, b), np.uint8)  # noqa: E731
    hx = np.block([
        [view.hx, z(nx, e), z(nx, w)],
        [f1.T, d1.T, np.eye(w, dtype=np.uint8)],
    ]).astype(np.uint8)
    hz = np.block([
        [view.hz, f0, z(nz, w)],
        [z(e, n), np.eye(e, dtype=np.uint8), d1],
    ]).astype(np.uint8)
    merged = CssCode(hx, hz)
    if sector == "Z":
        merged = merged.dual()
        tags = (ORIGINAL_X,) * nz + (CYLINDER_LINK,) * e + (ORIGINAL_Z,) * nx + (NEW_Z,) * w
    else:
        tags = (ORIGINAL_X,) * nx + (NEW_X,) * w + (ORIGINAL_Z,) * nz + (CYLINDER_LINK,) * e
    return MeasurementArtifact(
        code=code, measured_operator=op, sector=sector, f1=f1, f0=f0, d1=d1,
        d0=np.zeros((0, e), np.uint8), merged=merged, row_provenance=tags,
        scheme="cylinder", flags=frozenset({"not-a-measurement"}),
    )
