"""Brute-force coset analysis over GF(2).

Errors are enumerated in order of increasing weight, and within a weight in
lexicographic order of their sorted support, so the first error seen for a
syndrome is its coset leader.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import gf2
from .codes import CodeSpec, codewords

MAX_ENUMERATION = 10**7


class EnumerationBoundError(ValueError):
    """Raised when a brute-force enumeration would exceed its budget."""


def _pack_columns(H: np.ndarray) -> np.ndarray:
    # bit (r-1-i) of the packed value holds row i, so int order == string order
    r = H.shape[0]
    shifts = np.arange(r - 1, -1, -1, dtype=np.int64)
    return (H.astype(np.int64) << shifts[:, None]).sum(axis=0)


def _unpack(value: int, length: int) -> tuple[int, ...]:
    return tuple((value >> (length - 1 - i)) & 1 for i in range(length))


def enumeration_count(n: int, w_max: int) -> int:
    return sum(comb(n, w) for w in range(min(w_max, n) + 1))


@dataclass(frozen=True)
class CosetTable:
    """Coset leaders keyed by syndrome tuple.

    Syndromes with no error of weight <= ``w_max`` are absent; treat absence
    as "leader weight exceeds w_max".
    """

    H: np.ndarray
    w_max: int
    entries: dict[tuple[int, ...], tuple[np.ndarray, int]] = field(repr=False)

    def lookup(self, s) -> tuple[np.ndarray, int] | None:
        return self.entries.get(tuple(int(b) for b in np.asarray(s).reshape(-1)))

    def leader_weight(self, s) -> int | None:
        hit = self.lookup(s)
        return None if hit is None else hit[1]

    def __len__(self) -> int:
        return len(self.entries)


def build_coset_table(H, w_max: int) -> CosetTable:
    H = gf2.as_bits(H)
    r, n = H.shape
    count = enumeration_count(n, w_max)
    if count > MAX_ENUMERATION:
        raise EnumerationBoundError(
            f"coset table needs {count} errors (n={n}, w_max={w_max}); bound is {MAX_ENUMERATION}"
        )
    cols = _pack_columns(H) if r else np.zeros(n, dtype=np.int64)
    found: dict[int, tuple[tuple[int, ...], int]] = {}
    for w in range(min(w_max, n) + 1):
        if len(found) == 2**r:
            break
        if w == 0:
            found.setdefault(0, ((), 0))
            continue
        supports = np.array(list(itertools.combinations(range(n), w)), dtype=np.int64)
        synd = np.bitwise_xor.reduce(cols[supports], axis=1)
        # np.unique returns the first occurrence, i.e. the lexicographic minimum
        values, first = np.unique(synd, return_index=True)
        for s, idx in zip(values.tolist(), first.tolist()):
            if s not in found:
                found[s] = (tuple(supports[idx].tolist()), w)
    entries = {}
    for s, (support, w) in found.items():
        leader = np.zeros(n, dtype=np.uint8)
        leader[list(support)] = 1
        entries[_unpack(s, r)] = (leader, w)
    return CosetTable(H=H, w_max=w_max, entries=entries)


@dataclass(frozen=True)
class Violation:
    syndrome: tuple[int, ...]
    syndrome_weight: int
    leader_weight: int | None  # None: no leader of weight <= t exists
    leader: np.ndarray | None = field(default=None, compare=False)


@dataclass(frozen=True)
class FtReport:
    t: int
    passed: bool
    violations: list[Violation]
    checked: int = 0

    def to_records(self) -> list[str]:
        lines = [f"ft_condition\tt={self.t}\tchecked={self.checked}\tverdict={'pass' if self.passed else 'fail'}"]
        for v in self.violations:
            lw = ">t" if v.leader_weight is None else str(v.leader_weight)
            leader = "-" if v.leader is None else gf2.bitstring(v.leader)
            lines.append(
                f"violation\tsyndrome={''.join(map(str, v.syndrome))}\tsyndrome_weight={v.syndrome_weight}"
                f"\tleader_weight={lw}\tleader={leader}"
            )
        return lines


def check_ft_condition(H, t: int) -> FtReport:
    """Check that every syndrome of weight w <= t has a coset leader of weight <= w."""
    H = gf2.as_bits(H)
    r = H.shape[0]
    table = build_coset_table(H, t)
    violations = []
    checked = 0
    for ws in range(min(t, r) + 1):
        for support in itertools.combinations(range(r), ws):
            s = [0] * r
            for i in support:
                s[i] = 1
            checked += 1
            hit = table.entries.get(tuple(s))
            if hit is None:
                violations.append(Violation(tuple(s), ws, None))
            elif hit[1] > ws:
                violations.append(Violation(tuple(s), ws, hit[1], hit[0]))
    return FtReport(t=t, passed=not violations, violations=violations, checked=checked)


def effective_weight(e, spec: CodeSpec) -> int:
    """Weight of an X error's action on the codeword state: min_c wt(e + c)."""
    e = gf2.as_bits(e)
    if e.shape[-1] != spec.n:
        raise ValueError(f"error length {e.shape[-1]} != n = {spec.n}")
    words = codewords(spec)
    return int(((words ^ e) != 0).sum(axis=1).min())


def effective_weight_table(spec: CodeSpec) -> np.ndarray:
    """Effective weight of every X error, indexed by its packed integer value.

    Bit (n-1-j) of the index is qubit j.
    """
    n = spec.n
    if n > 24:
        raise EnumerationBoundError(f"table over 2^{n} errors is too large")
    words = codewords(spec)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    packed_words = (words.astype(np.int64) << shifts).sum(axis=1)
    idx = np.arange(2**n, dtype=np.int64)
    best = np.full(2**n, n, dtype=np.int64)
    for c in packed_words:
        best = np.minimum(best, _popcount(idx ^ c))
    return best


def _popcount(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint64)
    out = np.zeros(x.shape, dtype=np.int64)
    while x.any():
        out += (x & np.uint64(1)).astype(np.int64)
        x >>= np.uint64(1)
    return out
