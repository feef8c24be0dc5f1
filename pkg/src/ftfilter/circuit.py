"""Timed circuit IR and the emitters for preparation and verification networks.

Qubits are numbered globally: ancilla (codeword) qubits are ``0..n_ancilla-1``
and verification qubits follow them. Verifier i therefore has global index
``n_ancilla + i``. Serialized circuits label them ``a<j>`` and ``v<i>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import gf2
from .codes import CodeSpec
from .scheduler import Schedule, schedule, validate

KINDS = ("PrepZero", "PrepPlus", "CX", "CZ", "MeasX")
ARITY = {"PrepZero": 1, "PrepPlus": 1, "CX": 2, "CZ": 2, "MeasX": 1, "Idle": 1}
FORMAT_HEADER = "# ftfilter circuit v1"


class CircuitError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Gate:
    time: int
    kind: str
    qubits: tuple[int, ...]


@dataclass(frozen=True)
class Circuit:
    n_ancilla: int
    n_verifier: int
    gates: tuple[Gate, ...]
    duration: int
    meas_time: int = 1
    label: str = ""
    # ancilla qubit carrying each column of the (A|I) or (I|B) standard form
    qubit_map: tuple[int, ...] | None = None

    @property
    def n_qubits(self) -> int:
        return self.n_ancilla + self.n_verifier

    def verifier(self, i: int) -> int:
        return self.n_ancilla + i

    def is_verifier(self, q: int) -> bool:
        return q >= self.n_ancilla

    def busy(self, gate: Gate) -> range:
        span = self.meas_time if gate.kind == "MeasX" else 1
        return range(gate.time, gate.time + span)

    def count(self, kind: str) -> int:
        return sum(g.kind == kind for g in self.gates)

    def check(self) -> None:
        """Raise CircuitError if any structural invariant is broken."""
        used: set[tuple[int, int]] = set()
        measured_at: dict[int, int] = {}
        for g in self.gates:
            if g.kind not in KINDS:
                raise CircuitError(f"unknown gate kind {g.kind!r}")
            if len(g.qubits) != ARITY[g.kind] or len(set(g.qubits)) != len(g.qubits):
                raise CircuitError(f"bad qubits for {g}")
            if any(not 0 <= q < self.n_qubits for q in g.qubits):
                raise CircuitError(f"qubit out of range in {g}")
            for t in self.busy(g):
                if not 0 <= t <= self.duration:
                    raise CircuitError(f"{g} lies outside [0, {self.duration}]")
                for q in g.qubits:
                    if (q, t) in used:
                        raise CircuitError(f"qubit {q} used twice at time {t}")
                    used.add((q, t))
            if g.kind == "MeasX":
                measured_at[g.qubits[0]] = g.time
        for g in self.gates:
            for q in g.qubits:
                if q in measured_at and g.time > measured_at[q]:
                    raise CircuitError(f"qubit {q} used after its measurement")

    def lifetime(self, q: int) -> range:
        """Time steps (>= 1) during which qubit q is alive and can idle."""
        end = self.duration
        for g in self.gates:
            if g.kind == "MeasX" and g.qubits[0] == q:
                end = g.time + self.meas_time - 1
        return range(1, end + 1)


@dataclass(frozen=True)
class Location:
    index: int
    time: int
    kind: str  # a gate kind or "Idle"
    qubits: tuple[int, ...]


def locations(c: Circuit) -> list[Location]:
    """Every gate event plus every idle (qubit, time) slot, in time order.

    Within a time step gates come before idles; ties break by qubit index.
    """
    busy: set[tuple[int, int]] = set()
    raw = []
    for g in c.gates:
        for t in c.busy(g):
            busy.update((q, t) for q in g.qubits)
        raw.append((g.time, 0, g.qubits, g.kind))
    for q in range(c.n_qubits):
        for t in c.lifetime(q):
            if (q, t) not in busy:
                raw.append((t, 1, (q,), "Idle"))
    raw.sort()
    return [Location(i, t, kind, qs) for i, (t, _, qs, kind) in enumerate(raw)]


# -- emitters -------------------------------------------------------------------


def emit_verification(spec: CodeSpec, sched: Schedule | None = None, T_m: int = 1) -> Circuit:
    """Filter network measuring each check of the standard-form H once.

    Verifier i is prepared in |+> at time 0, coupled by CZ to the A-part of
    its row at the scheduled times 1..N, to its identity-block qubit at time
    N+1, and measured in the X basis for T_m steps, so duration = N+1+T_m.
    """
    if T_m < 1:
        raise ValueError("T_m must be >= 1")
    n = spec.n
    if spec.r == 0:
        return Circuit(n, 0, (), 0, T_m, "verification", tuple(range(n)))
    sf = gf2.to_standard_form(spec.H)
    if sched is None:
        sched = schedule(sf.A)
    elif not validate(sched, sf.A):
        raise CircuitError("schedule does not match the standard-form A of this code")
    r, N, perm = sf.r, sched.N, sf.perm
    gates = [Gate(0, "PrepPlus", (n + i,)) for i in range(r)]
    for i, j, t in sched.entries:
        gates.append(Gate(t, "CZ", (n + i, perm[j])))
    for i in range(r):
        gates.append(Gate(N + 1, "CZ", (n + i, perm[n - r + i])))
        gates.append(Gate(N + 2, "MeasX", (n + i,)))
    c = Circuit(n, r, tuple(sorted(gates)), N + 1 + T_m, T_m, "verification", perm)
    c.check()
    return c


def emit_preparation(spec: CodeSpec) -> Circuit:
    """CX network preparing the equal superposition over C_w.

    Gw is row-reduced to (I | B) up to column order; information qubits start
    in |+>, the rest in |0>, and CX gates copy onto the B support on the
    latin-rectangle schedule of B, so the depth is w_max(B).
    """
    n, k = spec.n, spec.k_w
    if k == 0:
        gates = tuple(Gate(0, "PrepZero", (q,)) for q in range(n))
        return Circuit(n, 0, gates, 0, 1, "preparation", tuple(range(n)))
    R, pivots = gf2.rref(spec.Gw)
    if len(pivots) < k:
        raise CircuitError(f"Gw has rank {len(pivots)} < {k} rows")
    pivot_set = set(pivots)
    others = [q for q in range(n) if q not in pivot_set]
    B = R[:, others]
    sched = schedule(B)
    gates = [Gate(0, "PrepPlus" if q in pivot_set else "PrepZero", (q,)) for q in range(n)]
    for i, j, t in sched.entries:
        gates.append(Gate(t, "CX", (pivots[i], others[j])))
    c = Circuit(n, 0, tuple(sorted(gates)), sched.N, 1, "preparation", tuple(pivots + others))
    c.check()
    return c


def emit_naive_verification(H, T_m: int = 1) -> Circuit:
    """Checks of H measured as given, without standard form.

    Each row's CZ gates run in column order; rows are packed greedily, each
    gate at the earliest step after its row's previous gate where the ancilla
    qubit is free. All verifiers are measured together after the last CZ.
    """
    if T_m < 1:
        raise ValueError("T_m must be >= 1")
    H = gf2.as_bits(H)
    if H.ndim != 2:
        raise ValueError("H must be 2-D")
    r, n = H.shape
    if r == 0:
        return Circuit(n, 0, (), 0, T_m, "naive")
    ancilla_busy: set[tuple[int, int]] = set()
    gates = [Gate(0, "PrepPlus", (n + i,)) for i in range(r)]
    last = 0
    for i in range(r):
        t = 0
        for j in np.flatnonzero(H[i]).tolist():
            t += 1
            while (j, t) in ancilla_busy:
                t += 1
            ancilla_busy.add((j, t))
            gates.append(Gate(t, "CZ", (n + i, j)))
        last = max(last, t)
    for i in range(r):
        gates.append(Gate(last + 1, "MeasX", (n + i,)))
    c = Circuit(n, r, tuple(sorted(gates)), last + T_m, T_m, "naive")
    c.check()
    return c


# -- serialization -----------------------------------------------------------------


def _label(c: Circuit, q: int) -> str:
    return f"v{q - c.n_ancilla}" if c.is_verifier(q) else f"a{q}"


def format_circuit(c: Circuit) -> str:
    lines = [
        FORMAT_HEADER,
        f"label {c.label or '-'}",
        f"n_ancilla {c.n_ancilla}",
        f"n_verifier {c.n_verifier}",
        f"duration {c.duration}",
        f"meas_time {c.meas_time}",
    ]
    if c.qubit_map is not None:
        lines.append("qubit_map " + " ".join(map(str, c.qubit_map)))
    for g in c.gates:
        lines.append(" ".join([str(g.time), g.kind, *(_label(c, q) for q in g.qubits)]))
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> Circuit:
    lines = [ln.strip() for ln in text.splitlines()]
    if not lines or lines[0] != FORMAT_HEADER:
        raise CircuitError("missing circuit header")
    header: dict[str, str] = {}
    gate_lines = []
    for ln in lines[1:]:
        if not ln or ln.startswith("#"):
            continue
        head = ln.split()[0]
        if head.isdigit():
            gate_lines.append(ln.split())
        else:
            header[head] = ln[len(head):].strip()
    try:
        n_a = int(header["n_ancilla"])
        n_v = int(header["n_verifier"])
        duration = int(header["duration"])
        meas_time = int(header["meas_time"])
    except (KeyError, ValueError) as exc:
        raise CircuitError(f"bad circuit header: {exc}") from None
    label = header.get("label", "-")
    qmap = tuple(int(x) for x in header["qubit_map"].split()) if "qubit_map" in header else None

    def qubit(tok: str) -> int:
        if tok[0] == "a":
            return int(tok[1:])
        if tok[0] == "v":
            return n_a + int(tok[1:])
        raise CircuitError(f"bad qubit label {tok!r}")

    gates = tuple(Gate(int(p[0]), p[1], tuple(qubit(t) for t in p[2:])) for p in gate_lines)
    c = Circuit(n_a, n_v, gates, duration, meas_time, "" if label == "-" else label, qmap)
    c.check()
    return c


def save_circuit(c: Circuit, path) -> None:
    Path(path).write_text(format_circuit(c))


def load_circuit(path) -> Circuit:
    return parse_circuit(Path(path).read_text())

