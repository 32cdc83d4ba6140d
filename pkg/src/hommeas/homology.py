"""
Chain complexes over F2, chain maps, mapping cones and cylinders.

A complex stores its boundary maps in a dict keyed by grade: ``maps[i]``
is the matrix of ``d_i : C_i -> C_{i-1}``, so it has shape
``(dim C_{i-1}, dim C_i)``. Grades that are not mentioned have
dimension zero. Signs are irrelevant over F2 and are never tracked.
"""

from __future__ import annotations

from typing import Mapping, NamedTuple

import numpy as np

from . import f2la
from .css import CssCode
from .f2la import as_bits

__all__ = [
    "ChainComplex",
    "ChainMap",
    "css_to_chain",
    "chain_to_css",
    "homology_dim",
    "mapping_cone",
    "mapping_cylinder",
    "cylinder_auxiliary",
    "alternating_dim_sum",
    "is_exact",
    "ancilla_chain",
    "code_chain_map",
    "LogicalGaugeCounts",
    "logical_gauge_counts",
]


def _block(rows: list[list[np.ndarray]]) -> np.ndarray:
    return np.vstack([np.hstack(r) for r in rows]).astype(np.uint8)


class ChainComplex:
    """Finite chain complex ``... -> C_i --d_i--> C_{i-1} -> ...`` over F2.

    Parameters
    ----------
    maps : mapping of int to matrix
        ``maps[i]`` is ``d_i`` with shape ``(dim C_{i-1}, dim C_i)``.
    dims : mapping of int to int, optional
        Dimensions of spaces with no adjacent map, or to pin the shape of
        empty maps. Dimensions implied by ``maps`` must agree.

    Raises
    ------
    ValueError
        If map shapes disagree or some ``d_i d_{i+1}`` is nonzero.
    """

    def __init__(self, maps: Mapping[int, np.ndarray], dims: Mapping[int, int] | None = None):
        d: dict[int, int] = {int(k): int(v) for k, v in (dims or {}).items()}
        bm: dict[int, np.ndarray] = {}
        for i, m in maps.items():
            i = int(i)
            a = np.asarray(m)
            if a.ndim != 2:
                if a.size:
                    raise ValueError(f"map d_{i} must be a matrix")
                a = np.zeros((d.get(i - 1, 0), d.get(i, 0)), np.uint8)
            a = (a.astype(np.int64) & 1).astype(np.uint8)
            for grade, size in ((i, a.shape[1]), (i - 1, a.shape[0])):
                if d.setdefault(grade, size) != size:
                    raise ValueError(
                        f"dimension of grade {grade} is {d[grade]} but d_{i} implies {size}")
            a.setflags(write=False)
            bm[i] = a
        for i in bm:
            if i + 1 in bm and f2la.mat_mul(bm[i], bm[i + 1]).any():
                raise ValueError(f"d_{i} d_{i + 1} != 0")
        self._dims = d
        self._maps = bm

    @property
    def grades(self) -> list[int]:
        return sorted(self._dims)

    def dim(self, i: int) -> int:
        return self._dims.get(i, 0)

    def boundary(self, i: int) -> np.ndarray:
        """``d_i``; a zero matrix of the right shape if the map was not given."""
        m = self._maps.get(i)
        if m is None:
            return np.zeros((self.dim(i - 1), self.dim(i)), np.uint8)
        return m

    def __getitem__(self, i: int) -> np.ndarray:
        return self.boundary(i)

    def dims(self) -> dict[int, int]:
        return dict(sorted(self._dims.items()))

    def map_grades(self) -> list[int]:
        """Grades ``i`` for which ``d_i`` can be nonzero."""
        g = self.grades
        return [i for i in g if i - 1 in self._dims]

    def __eq__(self, other):
        if not isinstance(other, ChainComplex):
            return NotImplemented
        grades = set(self.grades) | set(other.grades)
        if any(self.dim(i) != other.dim(i) for i in grades):
            return False
        return all(np.array_equal(self.boundary(i), other.boundary(i)) for i in grades)

    def __repr__(self):
        return f"ChainComplex(dims={self.dims()})"


class ChainMap:
    """Collection of maps ``f_i : A_i -> C_i`` commuting with the boundaries.

    ``maps[i]`` has shape ``(target.dim(i), source.dim(i))``; absent
    grades are zero maps. Validation happens on construction.
    """

    def __init__(self, source: ChainComplex, target: ChainComplex, maps: Mapping[int, np.ndarray]):
        fm: dict[int, np.ndarray] = {}
        for i, m in maps.items():
            i = int(i)
            shape = (target.dim(i), source.dim(i))
            a = np.asarray(m)
            a = np.zeros(shape, np.uint8) if a.size == 0 else as_bits(a)
            if a.shape != shape:
                raise ValueError(f"f_{i} has shape {a.shape}, expected {shape}")
            a.setflags(write=False)
            fm[i] = a
        self.source = source
        self.target = target
        self._maps = fm
        grades = set(source.grades) | set(target.grades)
        for i in grades:
            lhs = f2la.mat_mul(target.boundary(i), self.component(i))
            rhs = f2la.mat_mul(self.component(i - 1), source.boundary(i))
            if lhs.shape != rhs.shape or not np.array_equal(lhs, rhs):
                raise ValueError(f"chain map law fails at grade {i}")

    def component(self, i: int) -> np.ndarray:
        m = self._maps.get(i)
        if m is None:
            return np.zeros((self.target.dim(i), self.source.dim(i)), np.uint8)
        return m

    def __getitem__(self, i: int) -> np.ndarray:
        return self.component(i)

    def __repr__(self):
        return f"ChainMap({self.source!r} -> {self.target!r})"


def css_to_chain(code: CssCode) -> ChainComplex:
    """``C_2 --hx^T--> C_1 --hz--> C_0`` with the qubits at grade 1."""
    nx, nz = code.hx.shape[0], code.hz.shape[0]
    return ChainComplex({2: code.hx.T, 1: code.hz}, dims={2: nx, 1: code.n, 0: nz})


def chain_to_css(chain: ChainComplex, qubit_grade: int = 1) -> CssCode:
    """Read a CSS code off two consecutive maps around ``qubit_grade``."""
    q = qubit_grade
    return CssCode(chain.boundary(q + 1).T.copy(), chain.boundary(q).copy())


def homology_dim(chain: ChainComplex, i: int) -> int:
    """``dim ker d_i - rank d_{i+1}``."""
    return chain.dim(i) - f2la.rank(chain.boundary(i)) - f2la.rank(chain.boundary(i + 1))


def _all_grades(*complexes_and_shifts: tuple[ChainComplex, int]) -> list[int]:
    g: set[int] = set()
    for c, s in complexes_and_shifts:
        g.update(x + s for x in c.grades)
    return sorted(g)


def mapping_cone(f: ChainMap) -> ChainComplex:
    """``cone(f)_i = C_i + A_{i-1}`` with ``d_i = [[dC_i, f_{i-1}], [0, dA_{i-1}]]``."""
    A, C = f.source, f.target
    grades = _all_grades((C, 0), (A, 1))
    dims = {i: C.dim(i) + A.dim(i - 1) for i in grades}
    maps = {}
    for i in grades:
        if i - 1 not in dims:
            continue
        maps[i] = _block([
            [C.boundary(i), f.component(i - 1)],
            [np.zeros((A.dim(i - 2), C.dim(i)), np.uint8), A.boundary(i - 1)],
        ])
    return ChainComplex(maps, dims)


def mapping_cylinder(f: ChainMap) -> ChainComplex:
    """``cyl(f)_i = C_i + A_{i-1} + A_i`` with the identity linking the two copies of A."""
    A, C = f.source, f.target
    grades = _all_grades((C, 0), (A, 1), (A, 0))
    dims = {i: C.dim(i) + A.dim(i - 1) + A.dim(i) for i in grades}
    maps = {}
    for i in grades:
        if i - 1 not in dims:
            continue
        z = lambda r, c: np.zeros((r, c), np.uint8)  # noqa: E731
        maps[i] = _block([
            [C.boundary(i), f.component(i - 1), z(C.dim(i - 1), A.dim(i))],
            [z(A.dim(i - 2), C.dim(i)), A.boundary(i - 1), z(A.dim(i - 2), A.dim(i))],
            [z(A.dim(i - 1), C.dim(i)), np.eye(A.dim(i - 1), dtype=np.uint8), A.boundary(i)],
        ])
    return ChainComplex(maps, dims)


def cylinder_auxiliary(f: ChainMap) -> ChainMap:
    """The map ``g : B -> C`` with ``B_i = A_i + A_{i+1}`` and ``cone(g) = cyl(f)``."""
    A, C = f.source, f.target
    grades = _all_grades((A, 0), (A, -1))
    dims = {i: A.dim(i) + A.dim(i + 1) for i in grades}
    maps = {}
    for i in grades:
        if i - 1 not in dims:
            continue
        maps[i] = _block([
            [A.boundary(i), np.zeros((A.dim(i - 1), A.dim(i + 1)), np.uint8)],
            [np.eye(A.dim(i), dtype=np.uint8), A.boundary(i + 1)],
        ])
    B = ChainComplex(maps, dims)
    g = {i: np.hstack([f.component(i), np.zeros((C.dim(i), A.dim(i + 1)), np.uint8)])
         for i in grades}
    return ChainMap(B, C, g)


def alternating_dim_sum(chain: ChainComplex) -> int:
    """``sum_i (-1)^i dim C_i``; zero whenever the complex is exact."""
    return sum((-1) ** i * chain.dim(i) for i in chain.grades)


def is_exact(chain: ChainComplex) -> bool:
    return all(homology_dim(chain, i) == 0 for i in chain.grades)


def ancilla_chain(d1: np.ndarray, d0: np.ndarray | None = None) -> ChainComplex:
    """``A_1 --d1--> A_0 --d0--> A_{-1}``; ``d1`` is the edge-vertex incidence matrix."""
    d1 = as_bits(d1)
    e, w = d1.shape
    if d0 is None:
        d0 = np.zeros((0, e), np.uint8)
    d0 = as_bits(d0, ncols=e)
    return ChainComplex({1: d1, 0: d0}, dims={1: w, 0: e, -1: d0.shape[0]})


def code_chain_map(code: CssCode, ancilla: ChainComplex, f1: np.ndarray, f0: np.ndarray) -> ChainMap:
    """Chain map from a three-term ancilla complex into ``css_to_chain(code)``."""
    return ChainMap(ancilla, css_to_chain(code), {1: f1, 0: f0})


class LogicalGaugeCounts(NamedTuple):
    k: int
    r: int


def _left_kernel_dim(m: np.ndarray) -> int:
    return m.shape[0] - f2la.rank(m)


def logical_gauge_counts(code: CssCode, ancilla: ChainComplex, f: ChainMap) -> LogicalGaugeCounts:
    """Logical and gauge qubit counts of the cone code.

    Every homology class of the cone that comes from the ancilla complex
    is counted as a gauge. The two counts always add up to the first
    homology dimension of the cone.
    """
    if f.source is not ancilla and f.source != ancilla:
        raise ValueError("the chain map must start at the ancilla complex")
    target = f.target
    if target.dim(1) != code.n or target.dim(2) != code.hx.shape[0] or target.dim(0) != code.hz.shape[0]:
        raise ValueError("the chain map must end at the code complex")
    cone = mapping_cone(f)
    merged = chain_to_css(cone)
    d1 = ancilla.boundary(1)
    d0 = ancilla.boundary(0)
    k = code.k
    ker_d1 = ancilla.dim(1) - f2la.rank(d1)
    k_new = k + (_left_kernel_dim(merged.hx) - _left_kernel_dim(code.hx)) - ker_d1
    anc_logicals = ancilla.dim(0) - f2la.rank(d0) - f2la.rank(d1)
    r_new = (anc_logicals + (_left_kernel_dim(merged.hz) - _left_kernel_dim(d0))
             - _left_kernel_dim(code.hz))
    return LogicalGaugeCounts(k_new, r_new)
