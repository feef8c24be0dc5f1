"""Brute-force oracles, deliberately independent of the package internals."""

import itertools


def bits(s):
    return tuple(int(c) for c in s)


def span(rows):
    """Every GF(2) combination of rows, as a set of tuples."""
    rows = [tuple(r) for r in rows]
    if not rows:
        return set()
    n = len(rows[0])
    out = set()
    for coeffs in itertools.product((0, 1), repeat=len(rows)):
        v = [0] * n
        for c, r in zip(coeffs, rows):
            if c:
                v = [a ^ b for a, b in zip(v, r)]
        out.add(tuple(v))
    return out


def brute_rank(rows):
    size = len(span(rows)) if rows else 1
    return size.bit_length() - 1


def mod2_product(H, e):
    return tuple(sum(h * x for h, x in zip(row, e)) % 2 for row in H)


def kernel(H, n):
    return {v for v in itertools.product((0, 1), repeat=n) if not any(mod2_product(H, v))}


def coset_leaders(H, n):
    """syndrome -> (leader, weight) over all 2^n errors.

    Ties: smaller weight first, then lexicographically smallest sorted support.
    """
    best = {}
    for e in itertools.product((0, 1), repeat=n):
        s = mod2_product(H, e)
        support = tuple(i for i, b in enumerate(e) if b)
        key = (len(support), support)
        if s not in best or key < best[s][0]:
            best[s] = (key, e)
    return {s: (e, key[0]) for s, (key, e) in best.items()}


def latin_labeling_exists(A, N):
    """Backtracking search for a labeling of A's ones with symbols 1..N."""
    cells = [(i, j) for i, row in enumerate(A) for j, v in enumerate(row) if v]
    rows_used = {}
    cols_used = {}

    def place(k):
        if k == len(cells):
            return True
        i, j = cells[k]
        for s in range(1, N + 1):
            if s in rows_used.get(i, ()) or s in cols_used.get(j, ()):
                continue
            rows_used.setdefault(i, set()).add(s)
            cols_used.setdefault(j, set()).add(s)
            if place(k + 1):
                return True
            rows_used[i].discard(s)
            cols_used[j].discard(s)
        return False

    return place(0)
