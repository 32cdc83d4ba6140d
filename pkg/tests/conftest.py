"""Shared fixtures and helpers for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from hommeas import codelib, f2la
from hommeas.css import PauliOperator
from hommeas.homology import ChainComplex, ChainMap

# 0-based supports used throughout the tests
STEANE_XBAR = [0, 1, 2]
HAMMING_XBAR = [2, 3, 4, 11, 13]
SURFACE_PAIR_XBAR = [0, 1, 2, 13, 14, 15]


@pytest.fixture(scope="session")
def steane():
    return codelib.steane()


@pytest.fixture(scope="session")
def hamming():
    return codelib.hamming15()


@pytest.fixture(scope="session")
def surface3():
    return codelib.surface(3)


@pytest.fixture(scope="session")
def toric8():
    """Distance-8 toric code with one redundant check of each type removed."""
    return codelib.toric(8).independent()


def x_op(support, n):
    return PauliOperator.from_x(support, n)


def z_op(support, n):
    return PauliOperator.from_z(support, n)


def indicator(support, n):
    v = np.zeros(n, np.uint8)
    v[list(support)] = 1
    return v


def random_complex(rng, dims):
    """Random complex with ``dims[i]`` at grade ``i`` (grades ``0..len-1``).

    Each map is drawn from the left kernel of the one above it, so
    ``d d = 0`` holds by construction.
    """
    maps = {}
    top = len(dims) - 1
    above = None
    for i in range(top, 0, -1):
        rows, cols = dims[i - 1], dims[i]
        if above is None:
            d = rng.integers(0, 2, (rows, cols)).astype(np.uint8)
        else:
            left = f2la.nullspace(above.T)
            if left.shape[0] == 0:
                d = np.zeros((rows, cols), np.uint8)
            else:
                coeff = rng.integers(0, 2, (rows, left.shape[0])).astype(np.uint8)
                d = f2la.mat_mul(coeff, left)
        maps[i] = d
        above = d
    return ChainComplex(maps, dims=dict(enumerate(dims)))


def random_chain_map(rng, source, target):
    """Uniformly random element of the space of chain maps ``source -> target``.

    The chain-map law is linear in the entries of the components, so the
    space is the null space of one linear system; a random combination of
    its basis is returned.
    """
    grades = sorted(set(source.grades) & set(target.grades))
    slots = []
    for i in grades:
        for r in range(target.dim(i)):
            for c in range(source.dim(i)):
                slots.append((i, r, c))
    if not slots:
        return ChainMap(source, target, {})
    columns = []
    for i, r, c in slots:
        unit = {i: np.zeros((target.dim(i), source.dim(i)), np.uint8)}
        unit[i][r, c] = 1
        blocks = []
        for j in sorted(set(source.grades) | set(target.grades)):
            fj = unit.get(j, np.zeros((target.dim(j), source.dim(j)), np.uint8))
            fj1 = unit.get(j - 1, np.zeros((target.dim(j - 1), source.dim(j - 1)), np.uint8))
            lhs = f2la.mat_mul(target.boundary(j), fj)
            rhs = f2la.mat_mul(fj1, source.boundary(j))
            blocks.append(((lhs ^ rhs) & 1).reshape(-1))
        columns.append(np.concatenate(blocks) if blocks else np.zeros(0, np.uint8))
    system = np.array(columns, np.uint8).T
    basis = f2la.nullspace(system) if system.size else np.eye(len(slots), dtype=np.uint8)
    if basis.shape[0] == 0:
        vec = np.zeros(len(slots), np.uint8)
    else:
        coeff = rng.integers(0, 2, basis.shape[0]).astype(np.uint8)
        vec = f2la.mat_mul(coeff[None, :], basis)[0]
    comps = {i: np.zeros((target.dim(i), source.dim(i)), np.uint8) for i in grades}
    for bit, (i, r, c) in zip(vec, slots):
        comps[i][r, c] = bit
    return ChainMap(source, target, comps)
