"""Latin-rectangle scheduling of the nonzero entries of a binary matrix.

Each nonzero A[i, j] is a gate between row-qubit i and column-qubit j. Giving
every entry a time label in 1..N so that no label repeats in a row or column is
a proper edge coloring of the bipartite row/column graph, and N = w_max is
always reachable (König's edge-coloring theorem).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2


@dataclass(frozen=True)
class Schedule:
    shape: tuple[int, int]
    entries: tuple[tuple[int, int, int], ...]  # (row, col, time), row-major
    N: int

    def time_of(self, row: int, col: int) -> int:
        for i, j, t in self.entries:
            if i == row and j == col:
                return t
        raise KeyError((row, col))

    def as_array(self) -> np.ndarray:
        """Integer matrix of time labels with 0 where A is zero."""
        out = np.zeros(self.shape, dtype=np.int64)
        for i, j, t in self.entries:
            out[i, j] = t
        return out

    def render(self) -> str:
        """Text rectangle with blanks at zeros, one row per line."""
        arr = self.as_array()
        width = max(1, len(str(self.N)))
        lines = []
        for row in arr:
            cells = [(str(v) if v else "").rjust(width) for v in row]
            lines.append(" ".join(cells).rstrip())
        return "\n".join(lines) + ("\n" if lines else "")


def w_max(A) -> int:
    A = gf2.as_bits(A)
    if A.size == 0:
        return 0
    return int(max(A.sum(axis=1).max(), A.sum(axis=0).max()))


def schedule(A) -> Schedule:
    """Minimal latin-rectangle labeling of A's nonzero entries.

    Edges are processed row-major. If the two endpoints share a free color the
    smallest one is used; otherwise, with a free at the row and b free at the
    column, the a/b alternating path starting at the column is swapped, which
    frees a at the column.
    """
    A = gf2.as_bits(A)
    if A.ndim != 2:
        raise ValueError("A must be 2-D")
    r, c = A.shape
    N = w_max(A)
    # row_at[i][k]: column joined to row i by color k; col_at[j][k]: the row
    row_at: list[dict[int, int]] = [{} for _ in range(r)]
    col_at: list[dict[int, int]] = [{} for _ in range(c)]
    colors = range(1, N + 1)

    for i, j in zip(*np.nonzero(A)):
        i, j = int(i), int(j)
        common = [k for k in colors if k not in row_at[i] and k not in col_at[j]]
        if common:
            k = common[0]
        else:
            a = next(k for k in colors if k not in row_at[i])
            b = next(k for k in colors if k not in col_at[j])
            _swap_path(row_at, col_at, j, a, b)
            k = a
        row_at[i][k] = j
        col_at[j][k] = i

    entries = sorted((i, j, k) for i in range(r) for k, j in row_at[i].items())
    return Schedule(shape=(r, c), entries=tuple(entries), N=N)


def _swap_path(row_at, col_at, start_col: int, a: int, b: int) -> None:
    # Walk col -a-> row -b-> col -a-> ... and exchange a and b along it. In a
    # bipartite graph this path never returns to the row that is missing a.
    path = []  # (row, col, color)
    on_col, node, color = True, start_col, a
    while True:
        table = col_at if on_col else row_at
        nxt = table[node].get(color)
        if nxt is None:
            break
        path.append((nxt, node, color) if on_col else (node, nxt, color))
        on_col, node = not on_col, nxt
        color = b if color == a else a
    for i, j, k in path:
        del row_at[i][k]
        del col_at[j][k]
    for i, j, k in path:
        k2 = b if k == a else a
        row_at[i][k2] = j
        col_at[j][k2] = i


def validate(sched: Schedule, A) -> bool:
    A = gf2.as_bits(A)
    if tuple(A.shape) != tuple(sched.shape):
        return False
    seen = set()
    row_times: set[tuple[int, int]] = set()
    col_times: set[tuple[int, int]] = set()
    for i, j, t in sched.entries:
        if not (0 <= i < A.shape[0] and 0 <= j < A.shape[1]) or not A[i, j]:
            return False
        if not 1 <= t <= sched.N or (i, j) in seen:
            return False
        if (i, t) in row_times or (j, t) in col_times:
            return False
        seen.add((i, j))
        row_times.add((i, t))
        col_times.add((j, t))
    return len(seen) == int(A.sum()) and sched.N == w_max(A)

