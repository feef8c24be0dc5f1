"""Dense statevector simulation of small circuits (<= 12 qubits).

Used as the ground-truth oracle for the Pauli-frame machinery. Qubit 0 is the
most significant bit of the basis index, so the amplitude of ``|u>`` sits at
index ``int(u, 2)`` when u is written as a bit string over qubits 0..n-1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, locations
from .codes import CodeSpec, codewords

MAX_QUBITS = 12
NORM_TOL = 1e-10
STATE_TOL = 1e-8


@dataclass(frozen=True)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n_qubits)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def dump(self, tol: float = 1e-12) -> list[tuple[int, float, float]]:
        """(index, real, imag) for amplitudes above tol."""
        if self.n_qubits > 10:
            raise ValueError("amplitude dumps are limited to 10 qubits")
        return [
            (i, float(a.real), float(a.imag))
            for i, a in enumerate(self.amplitudes)
            if abs(a) > tol
        ]


@dataclass(frozen=True)
class Outcome:
    """X-basis measurement of one verifier, reported rather than sampled."""

    expectation: float  # <X>
    p_plus: float

    @property
    def deterministic(self) -> bool:
        return abs(abs(self.expectation) - 1.0) < STATE_TOL

    @property
    def parity(self) -> int | None:
        """+1 / -1 when deterministic, else None."""
        if not self.deterministic:
            return None
        return 1 if self.expectation > 0 else -1


def basis_state(n: int, index: int = 0) -> StateVector:
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(n, amps)


def reference_codeword(spec: CodeSpec) -> StateVector:
    """Equal superposition over the words of C_w."""
    if spec.n > MAX_QUBITS or spec.k_w > MAX_QUBITS:
        raise ValueError(f"reference state limited to {MAX_QUBITS} qubits")
    words = codewords(spec)
    idx = words.astype(np.int64) @ (1 << np.arange(spec.n - 1, -1, -1, dtype=np.int64))
    amps = np.zeros(2**spec.n, dtype=np.complex128)
    amps[idx] = 1.0 / np.sqrt(len(words))
    return StateVector(spec.n, amps)


# -- in-place gate kernels on an n-axis tensor ---------------------------------------


def _sl(n: int, assign: dict[int, int]):
    return tuple(assign.get(ax, slice(None)) for ax in range(n))


def _x(psi: np.ndarray, q: int) -> np.ndarray:
    return np.flip(psi, axis=q).copy()


def _z(psi: np.ndarray, q: int) -> np.ndarray:
    psi[_sl(psi.ndim, {q: 1})] *= -1
    return psi


def _h(psi: np.ndarray, q: int) -> np.ndarray:
    a0 = psi[_sl(psi.ndim, {q: 0})].copy()
    a1 = psi[_sl(psi.ndim, {q: 1})].copy()
    psi[_sl(psi.ndim, {q: 0})] = (a0 + a1) / np.sqrt(2)
    psi[_sl(psi.ndim, {q: 1})] = (a0 - a1) / np.sqrt(2)
    return psi


def _cx(psi: np.ndarray, c: int, t: int) -> np.ndarray:
    n = psi.ndim
    sub = psi[_sl(n, {c: 1})]
    # axis t shifts down by one in the sub-array if it comes after c
    psi[_sl(n, {c: 1})] = np.flip(sub, axis=t - (t > c)).copy()
    return psi


def _cz(psi: np.ndarray, a: int, b: int) -> np.ndarray:
    psi[_sl(psi.ndim, {a: 1, b: 1})] *= -1
    return psi


def apply_pauli(psi: np.ndarray, q: int, p: str) -> np.ndarray:
    if p in ("X", "Y"):
        psi = _x(psi, q)
    if p in ("Z", "Y"):
        psi = _z(psi, q)
    return psi


def apply_x_error(state: StateVector, e) -> StateVector:
    psi = state.tensor().copy()
    for q in np.flatnonzero(np.asarray(e)):
        psi = _x(psi, int(q))
    return StateVector(state.n_qubits, psi.reshape(-1))


def apply_frame(state: StateVector, x, z) -> StateVector:
    psi = state.tensor().copy()
    for q in np.flatnonzero(np.asarray(x)):
        psi = _x(psi, int(q))
    for q in np.flatnonzero(np.asarray(z)):
        psi = _z(psi, int(q))
    return StateVector(state.n_qubits, psi.reshape(-1))


def x_expectation(state: StateVector, q: int) -> float:
    psi = state.tensor()
    n = psi.ndim
    a0 = psi[_sl(n, {q: 0})]
    a1 = psi[_sl(n, {q: 1})]
    return float(2 * np.real(np.vdot(a0, a1)))


def run_state(c: Circuit, faults=(), initial: StateVector | None = None):
    """Simulate a circuit, inserting fault Paulis after their locations.

    Args:
        c: circuit on at most 12 qubits.
        faults: iterable of (location index, pattern) pairs; a pattern has
            one of I/X/Y/Z per qubit of the location. A MeasX location only
            takes "Z", which flips the reported outcome.
        initial: ancilla input state; defaults to |0...0>. Verifiers always
            start in |0>.

    Returns:
        (state, outcomes): the final state, with measured verifiers left
        unmeasured, and one :class:`Outcome` per verifier (None for verifiers
        without a MeasX).
    """
    n = c.n_qubits
    if n > MAX_QUBITS:
        raise ValueError(f"statevector simulation limited to {MAX_QUBITS} qubits, got {n}")
    if initial is None:
        initial = basis_state(c.n_ancilla)
    if initial.n_qubits != c.n_ancilla:
        raise ValueError("initial state must cover exactly the ancilla register")
    full = np.zeros(2**n, dtype=np.complex128)
    full[:: 2**c.n_verifier] = initial.amplitudes
    psi = full.reshape((2,) * n)

    locs = locations(c)
    by_time: dict[int, list] = {}
    for loc_index, pattern in faults:
        loc = locs[loc_index]
        by_time.setdefault(loc.time, []).append((loc, pattern))
    gates_at: dict[int, list] = {}
    for g in c.gates:
        gates_at.setdefault(g.time, []).append(g)
    measured = []

    for t in range(0, c.duration + 1):
        for g in gates_at.get(t, ()):
            q = g.qubits
            if g.kind in ("PrepZero", "PrepPlus"):
                if np.linalg.norm(psi[_sl(n, {q[0]: 1})]) > NORM_TOL:
                    raise ValueError(f"preparation on qubit {q[0]} which is not fresh")
                if g.kind == "PrepPlus":
                    psi = _h(psi, q[0])
            elif g.kind == "CX":
                psi = _cx(psi, *q)
            elif g.kind == "CZ":
                psi = _cz(psi, *q)
            elif g.kind == "MeasX":
                measured.append(q[0])
        for loc, pattern in by_time.get(t, ()):
            if len(pattern) != len(loc.qubits):
                raise ValueError(f"pattern {pattern!r} does not fit location {loc}")
            if loc.kind == "MeasX" and pattern != "Z":
                raise ValueError("measurement faults are outcome flips (pattern 'Z')")
            for q, p in zip(loc.qubits, pattern):
                psi = apply_pauli(psi, q, p)

    state = StateVector(n, psi.reshape(-1))
    if abs(state.norm() - 1.0) > NORM_TOL:
        raise AssertionError("norm drifted during simulation")
    outcomes: list[Outcome | None] = [None] * c.n_verifier
    for q in measured:
        ex = x_expectation(state, q)
        outcomes[q - c.n_ancilla] = Outcome(ex, (1 + ex) / 2)
    return state, outcomes


def ancilla_state(state: StateVector, c: Circuit) -> StateVector:
    """Ancilla register after post-selecting every verifier on its '+' branch."""
    psi = state.tensor()
    for i in range(c.n_verifier - 1, -1, -1):
        q = c.n_ancilla + i
        psi = (psi[_sl(psi.ndim, {q: 0})] + psi[_sl(psi.ndim, {q: 1})]) / np.sqrt(2)
    amps = psi.reshape(-1)
    nrm = np.linalg.norm(amps)
    if nrm < NORM_TOL:
        raise ValueError("the all-plus branch has zero probability")
    return StateVector(c.n_ancilla, amps / nrm)


def equal_up_to_global_phase(a: StateVector, b: StateVector, tol: float = STATE_TOL) -> bool:
    if a.n_qubits != b.n_qubits:
        raise ValueError("states have different qubit counts")
    overlap = np.vdot(b.amplitudes, a.amplitudes)
    if abs(overlap) < tol:
        return bool(np.allclose(a.amplitudes, 0, atol=tol) and np.allclose(b.amplitudes, 0, atol=tol))
    phase = overlap / abs(overlap)
    return bool(np.max(np.abs(a.amplitudes - phase * b.amplitudes)) <= tol)
