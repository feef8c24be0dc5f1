"""Codeword-state specifications.

A :class:`CodeSpec` describes the ancilla state to be filtered: the classical
code ``C_w`` whose equal superposition is the logical zero, together with the
full check matrix ``H`` of ``C_w`` (so ker H == C_w).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import gf2

MAX_ENUM_DIM = 20


class CodeFormatError(ValueError):
    """Raised for unreadable or inconsistent code files."""


@dataclass(frozen=True, eq=False)
class CodeSpec:
    name: str
    Gw: np.ndarray
    H: np.ndarray
    t: int
    notes: tuple[str, ...] = field(default=())

    @property
    def n(self) -> int:
        return int(self.H.shape[1])

    @property
    def k_w(self) -> int:
        return int(self.Gw.shape[0])

    @property
    def r(self) -> int:
        return int(self.H.shape[0])

    def __eq__(self, other):
        if not isinstance(other, CodeSpec):
            return NotImplemented
        return (
            self.name == other.name
            and self.t == other.t
            and np.array_equal(self.Gw, other.Gw)
            and np.array_equal(self.H, other.H)
        )

    def __hash__(self):
        return hash((self.name, self.t, self.Gw.tobytes(), self.H.tobytes()))


def make_code(name: str, Gw, H, t: int, *, allow_redundant: bool = False) -> CodeSpec:
    """Validate and build a CodeSpec.

    Raises:
        CodeFormatError: if ``Gw H^T != 0``, if the dimensions do not add up
            to n, or if either matrix has dependent rows (unless
            ``allow_redundant``, in which case dependent rows are dropped).
    """
    Gw = gf2.as_bits(Gw)
    H = gf2.as_bits(H)
    if Gw.ndim != 2 or H.ndim != 2:
        raise CodeFormatError("Gw and H must be matrices")
    if Gw.shape[1] != H.shape[1]:
        raise CodeFormatError(f"Gw has {Gw.shape[1]} columns but H has {H.shape[1]}")
    if t < 0:
        raise CodeFormatError("t must be non-negative")
    if Gw.shape[0] and H.shape[0] and gf2.syndrome(H, Gw).any():
        raise CodeFormatError("inconsistent code: Gw H^T != 0")
    notes = []
    for label, M in (("Gw", Gw), ("H", H)):
        rk = gf2.rank(M) if M.shape[0] else 0
        if rk < M.shape[0]:
            if not allow_redundant:
                raise CodeFormatError(f"redundant generators: {label} has rank {rk} < {M.shape[0]} rows")
            notes.append(f"redundant rows dropped from {label}")
    if allow_redundant:
        Gw = gf2.rref(Gw)[0] if Gw.shape[0] else Gw
        H = gf2.rref(H)[0] if H.shape[0] else H
    if Gw.shape[0] + H.shape[0] != H.shape[1]:
        raise CodeFormatError(
            f"k_w + r = {Gw.shape[0]} + {H.shape[0]} != n = {H.shape[1]}; H is not the full check matrix"
        )
    return CodeSpec(name=name, Gw=Gw, H=H, t=int(t), notes=tuple(notes))


def repetition(n: int, t: int | None = None, *, chain: bool = False) -> CodeSpec:
    """Repetition codeword |0...0> + |1...1>.

    With ``chain=True`` the checks are the nearest-neighbour parities
    q_i q_{i+1}; otherwise the standard form q_1 q_j, j = 2..n.
    """
    if n < 2:
        raise ValueError("repetition code needs n >= 2")
    H = np.zeros((n - 1, n), dtype=np.uint8)
    for i in range(n - 1):
        if chain:
            H[i, i] = H[i, i + 1] = 1
        else:
            H[i, 0] = H[i, i + 1] = 1
    name = f"rep{n}" + ("_chain" if chain else "")
    return make_code(name, np.ones((1, n), dtype=np.uint8), H, (n - 1) // 2 if t is None else t)


# Hamming check matrix (columns binary 1..7) with columns 3 and 4 exchanged so
# that both Gw = (I|B) and H = (A|I) hold without relabeling qubits.
_STEANE_GW = ["1001101", "0101011", "0010111"]
_STEANE_H = ["1101000", "1010100", "0110010", "1110001"]


def builtin(name: str) -> CodeSpec:
    if name == "rep5":
        return make_code("rep5", ["11111"], ["11000", "10100", "10010", "10001"], 2)
    if name == "steane7":
        return make_code("steane7", _STEANE_GW, _STEANE_H, 1)
    raise KeyError(f"unknown builtin code {name!r} (choose from rep5, steane7)")


BUILTIN_NAMES = ("rep5", "steane7")


def codewords(spec: CodeSpec) -> np.ndarray:
    """All 2^k_w words of C_w as rows, ordered by the binary message index."""
    k = spec.k_w
    if k > MAX_ENUM_DIM:
        raise ValueError(f"k_w = {k} exceeds the enumeration bound {MAX_ENUM_DIM}")
    if k == 0:
        return np.zeros((1, spec.n), dtype=np.uint8)
    msgs = np.array(list(itertools.product((0, 1), repeat=k)), dtype=np.int64)
    return ((msgs @ spec.Gw.astype(np.int64)) & 1).astype(np.uint8)


# -- file format ----------------------------------------------------------------


def format_code(spec: CodeSpec) -> str:
    return (
        f"name {spec.name}\n"
        f"t {spec.t}\n"
        "G:\n" + gf2.format_matrix(spec.Gw) + "H:\n" + gf2.format_matrix(spec.H)
    )


def parse_code(text: str, *, allow_redundant: bool = False) -> CodeSpec:
    name = None
    t = None
    blocks: dict[str, list[str]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line in ("G:", "H:"):
            current = line[0]
            blocks[current] = []
        elif line.startswith("name "):
            name = line[5:].strip()
        elif line.startswith("t "):
            try:
                t = int(line[2:])
            except ValueError:
                raise CodeFormatError(f"line {lineno}: bad t value {line[2:]!r}") from None
        elif current is not None:
            blocks[current].append(line)
        else:
            raise CodeFormatError(f"line {lineno}: unexpected content {raw!r}")
    if name is None or t is None:
        raise CodeFormatError("missing 'name' or 't' header")
    if "G" not in blocks or "H" not in blocks:
        raise CodeFormatError("missing G: or H: block")
    try:
        Gw = gf2.parse_matrix_lines(blocks["G"])
        H = gf2.parse_matrix_lines(blocks["H"])
    except ValueError as exc:
        raise CodeFormatError(str(exc)) from None
    if H.size == 0 and Gw.size == 0:
        raise CodeFormatError("empty G and H blocks")
    n = H.shape[1] if H.size else Gw.shape[1]
    if Gw.size == 0:
        Gw = np.zeros((0, n), dtype=np.uint8)
    if H.size == 0:
        H = np.zeros((0, n), dtype=np.uint8)
    return make_code(name, Gw, H, t, allow_redundant=allow_redundant)


def load_code(path, *, allow_redundant: bool = False) -> CodeSpec:
    return parse_code(Path(path).read_text(), allow_redundant=allow_redundant)


def save_code(spec: CodeSpec, path) -> None:
    Path(path).write_text(format_code(spec))
