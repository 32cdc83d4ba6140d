"""End-to-end acceptance checks.

Each test prints one line ``criterion N: PASS|FAIL ...`` and then asserts,
so ``pytest -s -k acceptance`` (or the ``-v`` log) shows the full report.
The distance search in criterion 6 runs 10^5 trials per sector and takes
a few minutes.
"""

from __future__ import annotations

import itertools
import time
from pathlib import Path

import numpy as np
import pytest

from hommeas import codelib, css, f2la, homology, hypergraph, protocol, surgery
from hommeas.css import PauliOperator
from hommeas.surgery import MeasurementOptions

from conftest import (
    HAMMING_XBAR,
    STEANE_XBAR,
    SURFACE_PAIR_XBAR,
    indicator,
    random_chain_map,
    random_complex,
    x_op,
    z_op,
)

pytestmark = pytest.mark.acceptance

README = Path(__file__).resolve().parents[1] / "README.md"


def report(capsys, number, ok, detail, elapsed=None):
    timing = "" if elapsed is None else f" [{elapsed:.1f} s]"
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}{timing}"
    with capsys.disabled():
        print("\n" + line)
    return line


def _rows(n, rows):
    m = np.zeros((len(rows), n), np.uint8)
    for i, r in enumerate(rows):
        m[i, r] = 1
    return m


# --- 1 ----------------------------------------------------------------------

STEANE_MERGED_HX = _rows(9, [[3, 4, 5, 6], [1, 2, 5, 6], [0, 2, 4, 6], [0, 8], [1, 7], [2, 7, 8]])
STEANE_MERGED_HZ = _rows(9, [[3, 4, 5, 6], [1, 2, 5, 6, 7], [0, 2, 4, 6, 8]])


def test_criterion_01_steane_end_to_end(capsys, steane):
    t0 = time.perf_counter()
    art = surgery.algorithm3_measure(steane, x_op(STEANE_XBAR, 7))
    elapsed = time.perf_counter() - t0
    m = art.merged
    ok = (f2la.row_spaces_equal(m.hx, STEANE_MERGED_HX)
          and f2la.row_spaces_equal(m.hz, STEANE_MERGED_HZ)
          and (m.n, m.k) == (9, 0) and elapsed < 1.0)
    report(capsys, 1, ok, f"steane merged ({m.n}, {m.k}), row spaces match", elapsed)
    assert ok


# --- 2 ----------------------------------------------------------------------

HAMMING_WEIGHT_TWO = [(0, 18), (1, 17), (7, 15)]


def test_criterion_02_hamming_negative_control(capsys, hamming):
    t0 = time.perf_counter()
    op = x_op(HAMMING_XBAR, 15)
    bare = surgery.algorithm3_measure(hamming, op, MeasurementOptions(expand=False))
    m = bare.merged
    d_bare = css.exact_distance(m, "X")
    found = [c for c in itertools.combinations(range(m.n), 2)
             if css.is_logical(m, indicator(c, m.n), "X")]
    full = surgery.algorithm3_measure(hamming, op)
    d_full = css.exact_distance(full.merged, "X")
    elapsed = time.perf_counter() - t0
    ok = ((m.n, m.k) == (19, 6) and d_bare == 2 and found == HAMMING_WEIGHT_TWO
          and len(full.added_edges) == 2 and full.cheeger() >= 1 and d_full >= 3
          and elapsed < 10)
    report(capsys, 2, ok,
           f"no expansion ({m.n}, {m.k}, {d_bare}) with weight-2 logicals {found}; "
           f"expansion adds {len(full.added_edges)} edges, h={full.cheeger()}, d_X={d_full}",
           elapsed)
    assert ok


# --- 3 ----------------------------------------------------------------------


def test_criterion_03_cheeger_fixtures(capsys, surface3):
    t0 = time.perf_counter()
    c8 = hypergraph.Hypergraph.from_edges(8, [(i, (i + 1) % 8) for i in range(8)])
    six = hypergraph.Hypergraph.from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
    h_c8 = hypergraph.cheeger(c8)
    h_six = hypergraph.cheeger(six)
    g8, add8 = hypergraph.expand_edges(c8)
    g6, add6 = hypergraph.expand_edges(six)
    pair = surgery.direct_sum(surface3, surface3)
    joint = surgery.algorithm3_measure(pair, x_op(SURFACE_PAIR_XBAR, pair.n))
    elapsed = time.perf_counter() - t0
    ok = (h_c8 == 0.5 and h_six == 0 and len(add6) == 3 and len(add8) == 2
          and hypergraph.cheeger(g8) == 1 and hypergraph.cheeger(g6) == 1
          and joint.ancilla_count == 7 and elapsed < 5)
    report(capsys, 3, ok,
           f"C8 h={h_c8} (+{len(add8)} edges), six-vertex h={h_six} (+{len(add6)} edges), "
           f"surface pair ancillas={joint.ancilla_count}", elapsed)
    assert ok


# --- 4 ----------------------------------------------------------------------


def test_criterion_04_cellulation_fixture(capsys, toric8):
    t0 = time.perf_counter()
    op = x_op(range(8), toric8.n)
    plain = surgery.algorithm3_measure(toric8, op)
    cell = surgery.algorithm3_measure(toric8, op, MeasurementOptions(max_cycle_weight=5, max_degree=3))
    new_rows = np.vstack([cell.rows_with("new-X"), cell.rows_with("new-Z-cycle")])
    gls = surgery.scheme_generalized_lattice_surgery(codelib.toric(8), op, 8)
    elapsed = time.perf_counter() - t0
    d0_max = int(plain.d0.sum(axis=1).max())
    new_max = int(new_rows.sum(axis=1).max())
    ok = (plain.ancilla_count == 10 and d0_max == 5 and cell.ancilla_count == 12
          and new_max == 5 and gls.ancilla_count == 120 and elapsed < 30)
    report(capsys, 4, ok,
           f"toric d=8: {plain.ancilla_count} ancillas (d0 weight {d0_max}), cellulated "
           f"{cell.ancilla_count} (max new weight {new_max}), r=8 surgery {gls.ancilla_count}",
           elapsed)
    assert ok


# --- 5 ----------------------------------------------------------------------

BENCHMARK_PARAMS = {"LP1": (175, 19), "LP2": (225, 21), "HGP1": (625, 25), "HGP2": (900, 36)}


def test_criterion_05_benchmark_parameters(capsys):
    t0 = time.perf_counter()
    rows = []
    ok = True
    for name, nk in BENCHMARK_PARAMS.items():
        code = codelib.benchmark_code(name)
        p = css.weight_profile(code)
        good = ((code.n, code.k) == nk
                and (p.q_x, p.w_x, p.q_z, p.w_z) == (4, 7, 4, 7) and (p.q, p.w) == (8, 7)
                and abs(p.q_x_avg - 3.36) <= 0.01 and abs(p.q_z_avg - 3.36) <= 0.01
                and abs(p.w_x_avg - 7) <= 0.01 and abs(p.w_z_avg - 7) <= 0.01)
        ok &= good
        rows.append(f"{name}=({code.n},{code.k})")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 30
    report(capsys, 5, ok, " ".join(rows) + ", profile (4,7,4,7), (8,7), avg (3.36,7)", elapsed)
    assert ok


# --- 6 ----------------------------------------------------------------------

MERGED_EXPECTED = {  # merged (n, k), ancillas, max (q_X, w_X, q_Z, w_Z), original distance
    "LP1": ((191, 18), 16, (4, 7, 6, 9), 10),
    "LP2": ((245, 20), 20, (4, 7, 7, 12), 12),
    "HGP1": ((638, 24), 13, (4, 7, 5, 8), 8),
    "HGP2": ((917, 35), 17, (4, 7, 7, 11), 10),
}
SEARCH_TRIALS = 100_000


def test_criterion_06_benchmark_measurements(capsys):
    t0 = time.perf_counter()
    parts = []
    ok = True
    for name, (nk, n_anc, weights, d) in MERGED_EXPECTED.items():
        code = codelib.benchmark_code(name)
        op = codelib.benchmark_operator(name)
        art = surgery.algorithm3_measure(code, op)
        m = art.merged
        p = css.weight_profile(m)
        ours = (p.q_x, p.w_x, p.q_z, p.w_z)
        xbar = np.concatenate([op.x, np.zeros(art.ancilla_count, np.uint8)])
        bounds = [css.distance_search(m, s, trials=SEARCH_TRIALS, seed=2024).bound for s in "XZ"]
        exact_when_equal = art.ancilla_count != n_anc or (m.n, m.k) == nk
        good = (exact_when_equal and m.k == code.k - 1 and abs(art.ancilla_count - n_anc) <= 3
                and art.cheeger() >= 1 and art.counts().r == 0
                and f2la.row_space_contains(m.hx, xbar)
                and all(a <= b + 1 for a, b in zip(ours, weights))
                and min(bounds) >= d)
        ok &= good
        parts.append(f"{name}=({m.n},{m.k}) anc={art.ancilla_count} w={ours} "
                     f"lightest logical found {min(bounds)}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 600
    report(capsys, 6, ok, "; ".join(parts), elapsed)
    assert ok


# --- 7 ----------------------------------------------------------------------


def _random_hgp_cases(count, seed=7):
    rng = np.random.default_rng(seed)
    cases = []
    while len(cases) < count:
        h1 = rng.integers(0, 2, (rng.integers(2, 4), rng.integers(3, 5))).astype(np.uint8)
        h2 = rng.integers(0, 2, (rng.integers(2, 4), rng.integers(3, 5))).astype(np.uint8)
        code = codelib.hgp(h1, h2)
        if code.k == 0 or code.n > 26:
            continue
        if css.exact_distance(code, "X") < 2 or css.exact_distance(code, "Z") < 2:
            continue
        sector = "XZ"[len(cases) % 2]
        vec = css.logical_basis(code, sector)[0]
        cases.append((code, vec, sector))
    return cases


def _distance_bounds_hold(code, op):
    art = surgery.algorithm3_measure(code, op)
    m = art.merged
    d_x, d_z = css.exact_distance(code, "X"), css.exact_distance(code, "Z")
    if art.sector == "Z":
        # the roles of the two sectors swap for a Z measurement
        d_x, d_z = d_z, d_x
        same, opp = "Z", "X"
    else:
        same, opp = "X", "Z"
    # r = 0 here, so the dressed distance equals the plain one
    dressed_opp = css.exact_distance(m, opp)
    kept_same = css.exact_distance(m, same)
    return art.counts().r == 0 and dressed_opp >= d_z and (art.cheeger() < 1 or kept_same >= d_x)


def test_criterion_07_distance_bounds(capsys, surface3, steane, hamming):
    t0 = time.perf_counter()
    fixed = [
        (surface3, x_op([0, 1, 2], surface3.n)),
        (surface3, z_op(np.flatnonzero(css.logical_basis(surface3, "Z")[0]), surface3.n)),
        (steane, x_op(STEANE_XBAR, 7)),
        (steane, z_op(STEANE_XBAR, 7)),
        (hamming, x_op(HAMMING_XBAR, 15)),
    ]
    results = [_distance_bounds_hold(c, op) for c, op in fixed]
    for code, vec, sector in _random_hgp_cases(20):
        op = x_op(np.flatnonzero(vec), code.n) if sector == "X" else z_op(np.flatnonzero(vec), code.n)
        results.append(_distance_bounds_hold(code, op))
    elapsed = time.perf_counter() - t0
    ok = all(results) and elapsed < 600
    report(capsys, 7, ok, f"{sum(results)}/{len(results)} merged codes keep both distances", elapsed)
    assert ok


# --- 8 ----------------------------------------------------------------------

GLS_EXPECTED = {"LP1": (10, 230), "LP2": (12, 348), "HGP1": (8, 144), "HGP2": (10, 240)}


def test_criterion_08_generalized_surgery_counts(capsys):
    t0 = time.perf_counter()
    got = {}
    for name, (d, _) in GLS_EXPECTED.items():
        art = surgery.scheme_generalized_lattice_surgery(
            codelib.benchmark_code(name), codelib.benchmark_operator(name), d)
        got[name] = art.ancilla_count
    elapsed = time.perf_counter() - t0
    ok = all(got[k] == v for k, (_, v) in GLS_EXPECTED.items()) and elapsed < 60
    report(capsys, 8, ok, f"r=d ancillas {got}", elapsed)
    assert ok


# --- 9 ----------------------------------------------------------------------


def _protocol_fixtures():
    steane = codelib.steane()
    hamming = codelib.hamming15()
    s3 = codelib.surface(3)
    pair = surgery.direct_sum(s3, s3)
    toric = codelib.toric(8).independent()
    lp1 = codelib.benchmark_code("LP1")
    return {
        "steane-X": surgery.algorithm3_measure(steane, x_op(STEANE_XBAR, 7)),
        "steane-Z": surgery.algorithm3_measure(steane, z_op(STEANE_XBAR, 7)),
        "hamming": surgery.algorithm3_measure(hamming, x_op(HAMMING_XBAR, 15)),
        "surface-pair": surgery.algorithm3_measure(pair, x_op(SURFACE_PAIR_XBAR, pair.n)),
        "toric-cellulated": surgery.algorithm3_measure(
            toric, x_op(range(8), toric.n), MeasurementOptions(max_cycle_weight=5, max_degree=3)),
        "LP1": surgery.algorithm3_measure(lp1, codelib.benchmark_operator("LP1")),
    }


RUNS = 100


def test_criterion_09_protocol(capsys):
    t0 = time.perf_counter()
    tallies = {}
    for name, art in _protocol_fixtures().items():
        good = 0
        for ev in (1, -1):
            for run in range(RUNS):
                rep = protocol.run_protocol(art, ev, rounds=1, seed=run)
                good += rep.inferred == ev and rep.final_group_restored and rep.success
        tallies[name] = good
    elapsed = time.perf_counter() - t0
    ok = all(v == 2 * RUNS for v in tallies.values()) and elapsed < 120
    report(capsys, 9, ok, f"correct runs out of {2 * RUNS}: {tallies}", elapsed)
    assert ok


# --- 10 ---------------------------------------------------------------------


def _homology_les_sum(f, cone):
    """Alternating dimension sum along the long exact homology sequence of the cone."""
    A, C = f.source, f.target
    grades = sorted(set(A.grades) | set(C.grades) | set(cone.grades))
    top = max(grades) + 1
    total = 0
    for k in range(min(grades) - 1, top + 1):
        base = 3 * (top - k)
        total += (-1) ** base * homology.homology_dim(A, k)
        total += (-1) ** (base + 1) * homology.homology_dim(C, k)
        total += (-1) ** (base + 2) * homology.homology_dim(cone, k)
    return total


def _ses_exact(f, cone):
    """Check ``0 -> C_k -> cone_k -> A_{k-1} -> 0`` is exact in every grade."""
    A, C = f.source, f.target
    for k in cone.grades:
        c, a = C.dim(k), A.dim(k - 1)
        inc = np.vstack([np.eye(c, dtype=np.uint8), np.zeros((a, c), np.uint8)])
        proj = np.hstack([np.zeros((a, c), np.uint8), np.eye(a, dtype=np.uint8)])
        if f2la.rank(inc) != c or f2la.rank(proj) != a:
            return False
        if f2la.mat_mul(proj, inc).any() or cone.dim(k) != c + a:
            return False
        if c - cone.dim(k) + a != 0:
            return False
    return True


def _kernel_split_by_enumeration(code, ancilla, f):
    d1 = ancilla.boundary(1)
    f1 = f.component(1)
    kernel = f2la.nullspace(d1)
    dim = kernel.shape[0]
    if dim > 12:
        return None
    stabilizer_part = 0
    classes = set()
    test = f2la.complement_basis(code.hz, f2la.nullspace(code.hx))
    for bits in itertools.product((0, 1), repeat=dim):
        v = f2la.mat_mul(np.array(bits, np.uint8)[None, :], kernel)[0] if dim else np.zeros(d1.shape[1], np.uint8)
        image = f2la.mat_mul(f1, v[:, None])[:, 0]
        if f2la.mat_mul(code.hz, image[:, None]).any():
            return False
        if f2la.row_space_contains(code.hx, image):
            stabilizer_part += 1
        classes.add(f2la.mat_mul(test, image[:, None])[:, 0].tobytes())
    # |ker| = |stabilizer part| * |logical classes|, and each class is one lost logical
    s_dim = stabilizer_part.bit_length() - 1
    l_dim = len(classes).bit_length() - 1
    merged = homology.chain_to_css(homology.mapping_cone(f))
    counts = homology.logical_gauge_counts(code, ancilla, f)
    h1 = homology.homology_dim(homology.mapping_cone(f), 1)
    return (2 ** s_dim == stabilizer_part and 2 ** l_dim == len(classes)
            and s_dim + l_dim == dim and code.k - counts.k == l_dim
            and counts.k + counts.r == h1 and merged.n == code.n + ancilla.dim(0))


def test_criterion_10_homological_identities(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(10)
    checks = 0
    failures = 0
    split_checks = 0
    for trial in range(100):
        A = random_complex(rng, [int(x) for x in rng.integers(0, 4, 4)])
        C = random_complex(rng, [int(x) for x in rng.integers(0, 4, 4)])
        f = random_chain_map(rng, A, C)
        cone = homology.mapping_cone(f)
        cyl = homology.mapping_cylinder(f)
        g = homology.cylinder_auxiliary(f)
        identity = homology.ChainMap(A, A, {i: np.eye(A.dim(i), dtype=np.uint8) for i in A.grades})
        conds = [
            all(not f2la.mat_mul(cone.boundary(i), cone.boundary(i + 1)).any() for i in cone.grades),
            all(not f2la.mat_mul(cyl.boundary(i), cyl.boundary(i + 1)).any() for i in cyl.grades),
            homology.mapping_cone(g) == cyl,
            _ses_exact(f, cone),
            _homology_les_sum(f, cone) == 0,
            homology.alternating_dim_sum(homology.mapping_cone(identity)) == 0,
            homology.is_exact(homology.mapping_cone(identity)),
        ]
        # the kernel decomposition, on a random code and ancilla complex
        hx = rng.integers(0, 2, (2, 6)).astype(np.uint8)
        hz = f2la.nullspace(hx)[: rng.integers(1, 4)]
        code = css.CssCode(hx, hz)
        anc = random_complex(rng, [int(rng.integers(0, 4)), int(rng.integers(1, 5)), int(rng.integers(1, 5))])
        anc = homology.ChainComplex({1: anc.boundary(2), 0: anc.boundary(1)},
                                    dims={1: anc.dim(2), 0: anc.dim(1), -1: anc.dim(0)})
        fmap = random_chain_map(rng, anc, homology.css_to_chain(code))
        split = _kernel_split_by_enumeration(code, anc, fmap)
        if split is not None:
            conds.append(split)
            split_checks += 1
        checks += len(conds)
        failures += sum(not c for c in conds)
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and split_checks == 100 and elapsed < 60
    report(capsys, 10, ok, f"{checks - failures}/{checks} identities over 100 random chain maps", elapsed)
    assert ok


# --- 11 ---------------------------------------------------------------------


def test_criterion_11_out_of_scope_disclosure(capsys):
    text = README.read_text()
    ok = "## Not reproduced" in text and "GKP" in text
    report(capsys, 11, ok,
           "logical error rate curves for GKP qubits are out of scope; README states this")
    assert ok
