"""
Reading and writing codes, matrices and Pauli operator strings.

Supported formats:

* JSON with fields ``"hx"`` and ``"hz"``, each a list of 0/1 rows.
* Plain matrix text: a ``rows cols`` header then one row of
  space-separated bits per line.
* alist, the usual sparse format for LDPC parity-check matrices.

Operator strings are whitespace-separated tokens such as ``X3`` or
``Y12``; qubit numbers in strings are 1-based.
"""

from __future__ import annotations

import hashlib
import json
import re
from pathlib import Path

import numpy as np

from .css import CssCode, PauliOperator
from .f2la import as_bits

__all__ = [
    "ParseError",
    "read_matrix",
    "write_matrix",
    "read_alist",
    "write_alist",
    "read_code",
    "write_code_json",
    "parse_operator",
    "format_operator",
    "sha256_file",
]


class ParseError(ValueError):
    """Malformed input file or operator string."""


def _rows_to_matrix(rows: list[list[int]], ncols: int | None = None) -> np.ndarray:
    if not rows:
        return np.zeros((0, ncols or 0), np.uint8)
    lens = {len(r) for r in rows}
    if len(lens) != 1:
        raise ParseError("rows have different lengths")
    m = np.array(rows, dtype=np.int64)
    if ((m != 0) & (m != 1)).any():
        raise ParseError("matrix entries must be 0 or 1")
    return m.astype(np.uint8)


def parse_matrix_text(text: str) -> np.ndarray:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError("empty matrix file")
    try:
        rows, cols = (int(x) for x in lines[0].split())
        body = [[int(x) for x in ln.split()] for ln in lines[1:]]
    except ValueError as exc:
        raise ParseError(f"bad matrix file: {exc}") from None
    if len(body) != rows or any(len(r) != cols for r in body):
        raise ParseError(f"header says {rows}x{cols} but the body does not match")
    return _rows_to_matrix(body, cols)


def read_matrix(path) -> np.ndarray:
    """Read the plain ``rows cols`` matrix format."""
    return parse_matrix_text(Path(path).read_text())


def format_matrix(m) -> str:
    m = as_bits(m)
    lines = [f"{m.shape[0]} {m.shape[1]}"]
    lines += [" ".join(str(int(x)) for x in row) for row in m]
    return "\n".join(lines) + "\n"


def write_matrix(path, m) -> None:
    Path(path).write_text(format_matrix(m))


def parse_alist(text: str) -> np.ndarray:
    """Parse alist text into an ``M x N`` parity-check matrix.

    Only the column-wise adjacency lists are used; the row lists are
    checked for consistency. Zero entries used as padding are skipped.
    """
    try:
        nums = [[int(x) for x in ln.split()] for ln in text.splitlines() if ln.strip()]
        n, m = nums[0][:2]
        col_deg = nums[2]
        row_deg = nums[3]
        col_lists = nums[4:4 + n]
        row_lists = nums[4 + n:4 + n + m]
    except (ValueError, IndexError) as exc:
        raise ParseError(f"bad alist file: {exc}") from None
    if len(col_lists) != n or len(col_deg) != n or len(row_deg) != m:
        raise ParseError("alist dimensions do not match the header")
    h = np.zeros((m, n), np.uint8)
    for j, lst in enumerate(col_lists):
        entries = [i for i in lst if i != 0]
        if len(entries) != col_deg[j]:
            raise ParseError(f"column {j + 1} lists {len(entries)} entries, degree {col_deg[j]}")
        for i in entries:
            if not 1 <= i <= m:
                raise ParseError(f"row index {i} out of range")
            h[i - 1, j] = 1
    if row_lists:
        for i, lst in enumerate(row_lists):
            cols = sorted(j for j in lst if j != 0)
            if cols != [int(c) + 1 for c in np.flatnonzero(h[i])]:
                raise ParseError(f"row {i + 1} disagrees with the column lists")
    return h


def format_alist(h) -> str:
    h = as_bits(h)
    m, n = h.shape
    col = [list(np.flatnonzero(h[:, j]) + 1) for j in range(n)]
    row = [list(np.flatnonzero(h[i]) + 1) for i in range(m)]
    max_c = max((len(c) for c in col), default=0)
    max_r = max((len(r) for r in row), default=0)
    out = [f"{n} {m}", f"{max_c} {max_r}",
           " ".join(str(len(c)) for c in col), " ".join(str(len(r)) for r in row)]
    out += [" ".join(str(int(x)) for x in c + [0] * (max_c - len(c))) for c in col]
    out += [" ".join(str(int(x)) for x in r + [0] * (max_r - len(r))) for r in row]
    return "\n".join(out) + "\n"


def read_alist(path) -> np.ndarray:
    return parse_alist(Path(path).read_text())


def write_alist(path, h) -> None:
    Path(path).write_text(format_alist(h))


def _read_any_matrix(path: Path) -> np.ndarray:
    text = path.read_text()
    if path.suffix == ".alist":
        return parse_alist(text)
    return parse_matrix_text(text)


def read_code(path, hz_path=None) -> CssCode:
    """Load a CSS code.

    ``path`` is a JSON file with ``hx`` and ``hz`` fields, or the X check
    matrix in plain or alist format, in which case ``hz_path`` gives the
    Z check matrix.
    """
    p = Path(path)
    if hz_path is None:
        try:
            data = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise ParseError(f"{p}: not valid JSON ({exc})") from None
        if not isinstance(data, dict) or "hx" not in data or "hz" not in data:
            raise ParseError(f"{p}: expected fields 'hx' and 'hz'")
        hx, hz = data["hx"], data["hz"]
        n = len(hx[0]) if hx else (len(hz[0]) if hz else int(data.get("n", 0)))
        hx = _rows_to_matrix(hx, n)
        hz = _rows_to_matrix(hz, n)
    else:
        hx = _read_any_matrix(p)
        hz = _read_any_matrix(Path(hz_path))
    try:
        return CssCode(hx, hz)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def write_code_json(path, code: CssCode) -> None:
    data = {"n": code.n, "hx": code.hx.tolist(), "hz": code.hz.tolist()}
    Path(path).write_text(json.dumps(data))


_TOKEN = re.compile(r"^([XYZ])(\d+)$")


def parse_operator(text: str, n: int) -> PauliOperator:
    """Parse ``"X1 Y4 Z7"`` (1-based qubits) into an operator on ``n`` qubits.

    Y is taken as the Hermitian ``Y = iXZ``, so the result has phase +1.
    Repeating a qubit is an error.
    """
    toks = text.split()
    if not toks:
        raise ParseError("empty operator string")
    x = np.zeros(n, np.uint8)
    z = np.zeros(n, np.uint8)
    seen = set()
    for t in toks:
        m = _TOKEN.match(t)
        if not m:
            raise ParseError(f"bad operator token {t!r}")
        q = int(m.group(2))
        if not 1 <= q <= n:
            raise ParseError(f"qubit {q} out of range 1..{n} in token {t!r}")
        if q in seen:
            raise ParseError(f"qubit {q} appears twice")
        seen.add(q)
        p = m.group(1)
        x[q - 1] = p in "XY"
        z[q - 1] = p in "ZY"
    return PauliOperator(x, z, 0)


def format_operator(op: PauliOperator) -> str:
    return str(op)


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
