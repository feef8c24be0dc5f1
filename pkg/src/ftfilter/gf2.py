"""Dense GF(2) linear algebra on numpy uint8 arrays.

Bit vectors are 1-D arrays and bit matrices 2-D arrays with entries in {0, 1}.
Everything here is a pure function; inputs are never modified.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

MAX_COLS = 256


def as_bits(M) -> np.ndarray:
    """Coerce a sequence, string or array into a uint8 0/1 array.

    Strings are read as bit strings (``"10110"``); nested sequences of strings
    become matrices.
    """
    if isinstance(M, str):
        return np.array([int(ch) for ch in M if ch in "01"], dtype=np.uint8)
    if isinstance(M, (list, tuple)) and M and isinstance(M[0], str):
        return np.array([as_bits(row) for row in M], dtype=np.uint8)
    return (np.asarray(M).astype(np.int64) & 1).astype(np.uint8)


def weight(v) -> int:
    return int(np.count_nonzero(v))


def bitstring(v) -> str:
    return "".join(str(int(b)) for b in np.asarray(v).reshape(-1))


def rref(M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2).

    Args:
        M: Binary matrix (m x n).

    Returns:
        (R, pivots): R has the zero rows removed, so it is rank x n;
        pivots are the strictly increasing pivot column indices.
    """
    R = as_bits(M).copy()
    if R.ndim != 2:
        raise ValueError("rref expects a 2-D matrix")
    m, n = R.shape
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row == m:
            break
        hits = np.flatnonzero(R[row:, col])
        if hits.size == 0:
            continue
        p = row + int(hits[0])
        if p != row:
            R[[row, p]] = R[[p, row]]
        others = np.flatnonzero(R[:, col])
        others = others[others != row]
        R[others] ^= R[row]
        pivots.append(col)
        row += 1
    return R[:row].copy(), pivots


def rank(M) -> int:
    M = as_bits(M)
    if M.size == 0:
        return 0
    return len(rref(M)[1])


def row_space_contains(M, v) -> bool:
    """True iff v lies in the GF(2) row space of M."""
    M = as_bits(M)
    v = as_bits(v).reshape(1, -1)
    if M.size == 0:
        return not v.any()
    return rank(np.vstack([M, v])) == rank(M)


def same_row_space(M1, M2) -> bool:
    M1, M2 = as_bits(M1), as_bits(M2)
    r = rank(M1)
    return r == rank(M2) and rank(np.vstack([M1, M2])) == r


def syndrome(H, e) -> np.ndarray:
    """Return H e^T mod 2.

    ``e`` may also be a 2-D batch of error rows, in which case one syndrome row
    per error is returned.
    """
    H = as_bits(H)
    e = as_bits(e)
    if e.shape[-1] != H.shape[1]:
        raise ValueError(
            f"error length {e.shape[-1]} does not match {H.shape[1]} check matrix columns"
        )
    return ((e.astype(np.int64) @ H.T.astype(np.int64)) & 1).astype(np.uint8)


def nullspace(H) -> list[np.ndarray]:
    """Basis of {v : H v^T = 0}, one vector per free column of rref(H)."""
    H = as_bits(H)
    n = H.shape[1]
    if H.shape[0] == 0 or not H.any():
        return [np.eye(n, dtype=np.uint8)[j] for j in range(n)]
    R, pivots = rref(H)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.uint8)
        v[f] = 1
        for i, p in enumerate(pivots):
            v[p] = R[i, f]
        basis.append(v)
    return basis


@dataclass(frozen=True)
class StandardForm:
    """Row-reduced, column-permuted check matrix ``(A | I_r)``.

    ``perm[j]`` is the original column placed at position j, so
    ``H_reduced[:, perm] == hstack([A, I_r])``.
    """

    A: np.ndarray
    perm: tuple[int, ...]
    r: int
    n: int
    H_reduced: np.ndarray
    rank_deficient: bool = False

    @property
    def matrix(self) -> np.ndarray:
        return np.hstack([self.A, np.eye(self.r, dtype=np.uint8)])

    @property
    def is_identity_perm(self) -> bool:
        return self.perm == tuple(range(self.n))


def to_standard_form(H) -> StandardForm:
    """Bring a check matrix to the form (A | I).

    Pivots are chosen greedily from the rightmost columns, so any H whose
    trailing r columns are already independent keeps the identity
    permutation. The pivot columns are moved, in increasing order, to the end.
    Rank-deficient input is reduced to an independent spanning set and
    flagged rather than rejected.
    """
    H = as_bits(H)
    if H.ndim != 2:
        raise ValueError("check matrix must be 2-D")
    n = H.shape[1]
    if n > MAX_COLS:
        raise ValueError(f"at most {MAX_COLS} columns supported, got {n}")
    if H.shape[0] == 0 or not H.any():
        R = np.zeros((0, n), dtype=np.uint8)
        pivots: list[int] = []
    else:
        R_rev, piv_rev = rref(H[:, ::-1])
        R = R_rev[:, ::-1]
        pivots = sorted(n - 1 - p for p in piv_rev)
        # each row of R carries exactly one pivot; order rows by it
        row_pivot = [int(np.flatnonzero(R[i, pivots])[0]) for i in range(R.shape[0])]
        R = R[np.argsort(row_pivot)]
    r = len(pivots)
    deficient = r < H.shape[0]
    if deficient:
        warnings.warn(
            f"check matrix has {H.shape[0]} rows but rank {r}; using {r} independent checks",
            stacklevel=2,
        )
    pivot_set = set(pivots)
    nonpivots = [c for c in range(n) if c not in pivot_set]
    perm = tuple(nonpivots + pivots)
    A = R[:, nonpivots].copy()
    return StandardForm(A=A, perm=perm, r=r, n=n, H_reduced=R, rank_deficient=deficient)


# -- shared matrix text format ------------------------------------------------


def parse_matrix_lines(lines) -> np.ndarray:
    """Parse rows of '0'/'1' characters; blanks and '#' comments are skipped."""
    rows = []
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        bits = line.replace(" ", "").replace("\t", "")
        if set(bits) - {"0", "1"}:
            raise ValueError(f"bad matrix row {raw!r}")
        rows.append([int(ch) for ch in bits])
    if not rows:
        return np.zeros((0, 0), dtype=np.uint8)
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValueError(f"ragged matrix rows (widths {sorted(widths)})")
    return np.array(rows, dtype=np.uint8)


def parse_matrix(text: str) -> np.ndarray:
    return parse_matrix_lines(text.splitlines())


def format_matrix(M) -> str:
    M = as_bits(M)
    return "".join(bitstring(row) + "\n" for row in M)


def load_matrix(path) -> np.ndarray:
    return parse_matrix(Path(path).read_text())
