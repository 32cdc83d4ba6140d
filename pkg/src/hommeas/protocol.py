"""
Noiseless execution of the measurement protocol on a stabilizer tableau.

:class:`StabilizerState` is an Aaronson-Gottesman tableau (stabilizers plus
destabilizers) whose rows are Python integers used as bitsets. Phases
follow the same convention as :class:`~hommeas.css.PauliOperator`: a row
``(x, z, p)`` is ``i^p`` times the tensor product with a ``Y`` wherever
both bits are set.

:func:`run_protocol` walks through the five protocol steps for a CSS
measurement artifact: ancillas start in ``|0>``, the new vertex checks
are measured (their product reveals the logical), the modified Z checks
and then every merged check are measured, and finally the ancillas are
read out in the Z basis and a Pauli frame restores the original code.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import f2la
from .css import CssCode, PauliOperator

__all__ = [
    "StabilizerState",
    "ProtocolError",
    "ProtocolReport",
    "measure_pauli",
    "prepare_code_state",
    "run_protocol",
]


class ProtocolError(RuntimeError):
    """The simulated state disagrees with what the construction promises."""


def _to_int(bits) -> int:
    arr = np.asarray(bits, dtype=np.uint8) & 1
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


def _to_bits(value: int, n: int) -> np.ndarray:
    raw = value.to_bytes((n + 7) // 8 or 1, "little")
    return np.unpackbits(np.frombuffer(raw, np.uint8), bitorder="little")[:n].copy()


def _anticommute(ax: int, az: int, bx: int, bz: int) -> bool:
    return ((ax & bz).bit_count() + (az & bx).bit_count()) & 1 == 1


def _mul(a: tuple[int, int, int], b: tuple[int, int, int]) -> tuple[int, int, int]:
    ax, az, ap = a
    bx, bz, bp = b
    x, z = ax ^ bx, az ^ bz
    phase = (ap + bp + (ax & az).bit_count() + (bx & bz).bit_count()
             + 2 * (az & bx).bit_count() - (x & z).bit_count())
    return x, z, phase % 4


class StabilizerState:
    """Pure stabilizer state on ``n`` qubits, starting in ``|0...0>``.

    Parameters
    ----------
    n : int
        Number of qubits.
    seed : int or numpy Generator, optional
        Source of the random outcomes.
    """

    def __init__(self, n: int, seed=None):
        self.n = n
        self.rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        self._stab = [(0, 1 << q, 0) for q in range(n)]
        self._destab = [(1 << q, 0, 0) for q in range(n)]

    def generators(self) -> list[PauliOperator]:
        """Current stabilizer generators."""
        return [PauliOperator(_to_bits(x, self.n), _to_bits(z, self.n), p) for x, z, p in self._stab]

    def symplectic(self) -> np.ndarray:
        """Generators as an ``(n, 2n)`` bit matrix without signs."""
        rows = [np.concatenate([_to_bits(x, self.n), _to_bits(z, self.n)]) for x, z, _ in self._stab]
        return np.array(rows, dtype=np.uint8).reshape(self.n, 2 * self.n)

    def _row(self, p: PauliOperator) -> tuple[int, int, int]:
        if p.n != self.n:
            raise ValueError(f"operator on {p.n} qubits, state has {self.n}")
        if p.phase % 2:
            raise ValueError("only Hermitian Paulis (phase +1 or -1) can be measured")
        return _to_int(p.x), _to_int(p.z), p.phase % 4

    def peek(self, p: PauliOperator) -> int:
        """Eigenvalue of ``p`` if it is determined, else 0. The state is untouched."""
        px, pz, pp = self._row(p)
        if any(_anticommute(x, z, px, pz) for x, z, _ in self._stab):
            return 0
        return self._deterministic(px, pz, pp)

    def _deterministic(self, px: int, pz: int, pp: int) -> int:
        acc = (0, 0, 0)
        for (dx, dz, _), s in zip(self._destab, self._stab):
            if _anticommute(dx, dz, px, pz):
                acc = _mul(acc, s)
        if acc[0] != px or acc[1] != pz:
            raise ProtocolError("tableau lost track of the stabilizer group")
        rel = (pp - acc[2]) % 4
        if rel % 2:
            raise ProtocolError("non-Hermitian product in the stabilizer group")
        return 1 if rel == 0 else -1

    def measure(self, p: PauliOperator) -> tuple[int, bool]:
        """Measure ``p``; returns ``(outcome, deterministic)`` with outcome ``+1`` or ``-1``."""
        px, pz, pp = self._row(p)
        hits = [i for i, (x, z, _) in enumerate(self._stab) if _anticommute(x, z, px, pz)]
        if not hits:
            return self._deterministic(px, pz, pp), True
        k = hits[0]
        pivot = self._stab[k]
        for i in hits[1:]:
            self._stab[i] = _mul(self._stab[i], pivot)
        for i, (x, z, _) in enumerate(self._destab):
            if i != k and _anticommute(x, z, px, pz):
                self._destab[i] = _mul(self._destab[i], pivot)
        bit = int(self.rng.integers(2))
        self._destab[k] = pivot
        self._stab[k] = (px, pz, (pp + 2 * bit) % 4)
        return (-1 if bit else 1), False

    def apply(self, p: PauliOperator) -> None:
        """Apply the Pauli ``p`` (conjugation flips anticommuting signs)."""
        px, pz, _ = self._row(p)
        self._stab = [(x, z, (ph + 2) % 4) if _anticommute(x, z, px, pz) else (x, z, ph)
                      for x, z, ph in self._stab]


def measure_pauli(state: StabilizerState, p: PauliOperator) -> tuple[int, bool]:
    """Functional form of :meth:`StabilizerState.measure`."""
    return state.measure(p)


def _x_op(vec, n) -> PauliOperator:
    v = np.zeros(n, np.uint8)
    v[: len(vec)] = vec
    return PauliOperator(v, np.zeros(n, np.uint8))


def _z_op(vec, n) -> PauliOperator:
    v = np.zeros(n, np.uint8)
    v[: len(vec)] = vec
    return PauliOperator(np.zeros(n, np.uint8), v)


def _independent(rows: np.ndarray) -> np.ndarray:
    return f2la.complement_basis(np.zeros((0, rows.shape[1]), np.uint8), rows)


def _fixed_z_logicals(code: CssCode, xbar: np.ndarray) -> np.ndarray:
    """Z logicals (mod stabilizers) commuting with ``xbar``; ``k - 1`` rows."""
    lz = f2la.complement_basis(code.hz, f2la.nullspace(code.hx))
    t = f2la.mat_mul(lz, xbar[:, None]).T
    combos = f2la.nullspace(t)
    return f2la.mat_mul(combos, lz) if combos.shape[0] else np.zeros((0, code.n), np.uint8)


def prepare_code_state(code: CssCode, xbar, eigenvalue: int, total_qubits: int | None = None,
                       seed=None) -> StabilizerState:
    """Code state with ``xbar`` fixed to ``eigenvalue`` and every other logical in ``Z = +1``.

    Extra qubits beyond ``code.n`` are left in ``|0>``. The state is made
    by measuring the X checks and ``xbar`` on ``|0...0>`` and then
    applying a Z frame that sets all their signs.
    """
    if eigenvalue not in (1, -1):
        raise ValueError("eigenvalue must be +1 or -1")
    n = code.n
    total = n if total_qubits is None else total_qubits
    xbar = np.asarray(xbar, np.uint8) & 1
    state = StabilizerState(total, seed)
    xgens = np.vstack([_independent(code.hx), xbar[None, :]])
    wanted = np.zeros(xgens.shape[0], np.uint8)
    wanted[-1] = 1 if eigenvalue == -1 else 0
    got = np.zeros_like(wanted)
    for i, row in enumerate(xgens):
        out, _ = state.measure(_x_op(row, total))
        got[i] = 1 if out == -1 else 0
    flip = got ^ wanted
    if flip.any():
        frame = f2la.solve(xgens, flip)
        if frame is None:
            raise ProtocolError("could not fix the signs of the X generators")
        state.apply(_z_op(frame, total))
    return state


@dataclass
class ProtocolReport:
    """Record of one noiseless protocol run.

    ``inferred`` is the product of the step-2 outcomes. ``rounds`` holds
    the outcomes of every merged check in every repetition, in the row
    order of the merged code.
    """

    prepared: int
    inferred: int
    step2_outcomes: list
    step3_outcomes: list
    rounds: list
    ancilla_outcomes: list
    correction: list
    z_group_after_step2: bool
    fixed_gauges: int
    final_group_restored: bool
    rounds_deterministic: bool
    seed: object = None
    notes: list = field(default_factory=list)

    @property
    def success(self) -> bool:
        return (self.inferred == self.prepared and self.final_group_restored
                and self.z_group_after_step2 and self.rounds_deterministic)


def _outcome_bits(values) -> np.ndarray:
    return np.array([1 if v == -1 else 0 for v in values], np.uint8)


def run_protocol(artifact, prepared_eigenvalue: int = 1, rounds: int = 1, seed=None) -> ProtocolReport:
    """Simulate the five protocol steps for a CSS measurement artifact.

    Z-sector artifacts are simulated on the dual code, which is the same
    circuit up to a global Hadamard.

    Raises
    ------
    ValueError
        For a non-CSS artifact or ``rounds < 1``.
    ProtocolError
        If any intermediate stabilizer group or sign disagrees with the
        construction.
    """
    if not artifact.is_css:
        raise ValueError("the protocol is defined for CSS artifacts only")
    if rounds < 1:
        raise ValueError("rounds must be at least 1")
    code = artifact.code if artifact.sector == "X" else artifact.code.dual()
    op = artifact.measured_operator
    xbar = (op.x if artifact.sector == "X" else op.z).astype(np.uint8)
    f1, f0, d1, d0 = artifact.f1, artifact.f0, artifact.d1, artifact.d0
    n = code.n
    e, w = d1.shape
    total = n + e
    merged = artifact.merged if artifact.sector == "X" else artifact.merged.dual()
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    # step 1: code state with the logical fixed, ancillas in |0>
    state = prepare_code_state(code, xbar, prepared_eigenvalue, total, rng)
    zlog = _fixed_z_logicals(code, xbar)

    # step 2: new X checks, one per vertex
    new_x = np.hstack([f1.T, d1.T])
    step2 = [state.measure(_x_op(row, total))[0] for row in new_x]
    inferred = int(np.prod(step2))

    g = f2la.nullspace(d1.T)
    ext = []
    for z in zlog:
        y = f2la.solve(d1.T, f2la.mat_mul(f1.T, z[:, None])[:, 0])
        if y is None:
            raise ProtocolError("a fixed Z logical cannot be extended across the ancillas")
        ext.append(np.concatenate([z, y]))
    expected_z = np.vstack([
        np.hstack([code.hz, f0]),
        np.hstack([np.zeros((g.shape[0], n), np.uint8), g]),
        np.array(ext, np.uint8).reshape(-1, total),
    ])
    sym = state.symplectic()
    z_only = sym[~sym[:, :total].any(axis=1)][:, total:]
    z_ok = f2la.row_spaces_equal(z_only, expected_z)

    # step 3: modified Z checks (already fixed in the noiseless setting)
    step3 = [state.measure(_z_op(row, total))[0] for row in np.hstack([code.hz, f0])]
    left = f2la.nullspace(code.hz.T)
    v = f2la.mat_mul(left, f0) if left.shape[0] else np.zeros((0, e), np.uint8)
    fixed_gauges = f2la.rank(g) - f2la.rank(np.vstack([d0.reshape(-1, e), v]))

    # step 4: every merged check, repeated
    checks = [_x_op(r, total) for r in merged.hx] + [_z_op(r, total) for r in merged.hz]
    record = []
    deterministic = True
    for _ in range(rounds):
        outs = []
        for c in checks:
            o, det = state.measure(c)
            deterministic &= det
            outs.append(o)
        record.append(outs)
    if any(r != record[0] for r in record[1:]):
        deterministic = False

    # step 5: read out the ancillas and undo the sign changes
    anc = []
    for a in range(e):
        vec = np.zeros(total, np.uint8)
        vec[n + a] = 1
        anc.append(state.measure(PauliOperator(np.zeros(total, np.uint8), vec))[0])
    m = _outcome_bits(anc)
    u = f2la.solve(d1, m)
    if u is None:
        raise ProtocolError("ancilla outcomes are not a boundary of the graph")
    frame = f2la.mat_mul(f1, u[:, None])[:, 0]
    if frame.any():
        state.apply(_x_op(frame, total))

    restored = True
    expect = ([(_x_op(r, total), 1) for r in code.hx] + [(_z_op(r, total), 1) for r in code.hz]
              + [(_x_op(xbar, total), inferred)] + [(_z_op(r, total), 1) for r in zlog])
    for a in range(e):
        vec = np.zeros(total, np.uint8)
        vec[n + a] = 1
        expect.append((PauliOperator(np.zeros(total, np.uint8), vec), anc[a]))
    for p, sign in expect:
        if state.peek(p) != sign:
            restored = False
            break

    return ProtocolReport(
        prepared=prepared_eigenvalue, inferred=inferred, step2_outcomes=step2,
        step3_outcomes=step3, rounds=record, ancilla_outcomes=anc,
        correction=[int(q) for q in np.flatnonzero(frame)],
        z_group_after_step2=bool(z_ok), fixed_gauges=int(fixed_gauges),
        final_group_restored=restored, rounds_deterministic=bool(deterministic), seed=seed,
    )
