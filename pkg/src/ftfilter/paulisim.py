"""Pauli-frame fault propagation, exhaustive fault scans and Monte Carlo.

A fault is a (location index, pattern) pair, where the pattern holds one of
``I/X/Y/Z`` per qubit of the location and is applied right after the
location's gate. A MeasX location only takes ``"Z"``, a flip of the classical
outcome. Frames compose additively through Clifford circuits, so every
multi-fault effect is the XOR of single-fault effects; the scan and the
sampler both rely on that and the test-suite checks it against
:func:`propagate` and the statevector oracle.

Bit packing used by the vectorised paths: an ancilla X mask is an int with
qubit j at bit ``n-1-j``; an *effect* is ``(flips << n) | residual_x`` with
verifier i at bit ``r-1-i`` of ``flips``.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from math import prod

import numpy as np

from .circuit import ARITY, Circuit, Location, locations
from .codes import CodeSpec
from .cosets import EnumerationBoundError, effective_weight_table

logger = logging.getLogger(__name__)

MAX_SCAN_EVENTS = 10**8
CHUNK_TRIALS = 1 << 16

_TWO_QUBIT = tuple(a + b for a, b in itertools.product("IXYZ", repeat=2) if a + b != "II")


def location_class(loc: Location) -> str:
    if loc.kind in ("CX", "CZ"):
        return "gate"
    if loc.kind in ("PrepZero", "PrepPlus"):
        return "prep"
    if loc.kind == "MeasX":
        return "meas"
    return "idle"


def fault_patterns(loc: Location) -> tuple[str, ...]:
    if loc.kind == "MeasX":
        return ("Z",)
    if ARITY[loc.kind] == 2:
        return _TWO_QUBIT
    return ("X", "Y", "Z")


@dataclass
class PauliFrame:
    x: np.ndarray
    z: np.ndarray

    @classmethod
    def zeros(cls, n: int) -> PauliFrame:
        return cls(np.zeros(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8))

    def __add__(self, other: PauliFrame) -> PauliFrame:
        return PauliFrame(self.x ^ other.x, self.z ^ other.z)

    def apply(self, q: int, p: str) -> None:
        if p in ("X", "Y"):
            self.x[q] ^= 1
        if p in ("Z", "Y"):
            self.z[q] ^= 1


def _as_faults(faults) -> list[tuple[int, str]]:
    return [(int(i), str(p)) for i, p in faults]


def propagate(c: Circuit, faults=(), injected=None, *, locs: list[Location] | None = None):
    """Push a Pauli frame through the circuit.

    Args:
        c: circuit.
        faults: iterable of (location index, pattern).
        injected: optional X error on the ancilla register at the input.
        locs: precomputed ``locations(c)``, to avoid recomputation in loops.

    Returns:
        (flips, frame): flips is a 0/1 array over verifiers (1 = outcome '-'),
        frame the final PauliFrame over all qubits. The ancilla part of the
        frame is the residual error; the verifier part is frozen at
        measurement, because nothing acts on a verifier afterwards.
    """
    if locs is None:
        locs = locations(c)
    frame = PauliFrame.zeros(c.n_qubits)
    if injected is not None:
        injected = np.asarray(injected, dtype=np.uint8)
        if injected.shape != (c.n_ancilla,):
            raise ValueError(f"injected error must have length {c.n_ancilla}")
        frame.x[: c.n_ancilla] ^= injected
    at_time: dict[int, list] = {}
    for i, p in _as_faults(faults):
        if not 0 <= i < len(locs):
            raise IndexError(f"fault location {i} out of range ({len(locs)} locations)")
        loc = locs[i]
        if p not in fault_patterns(loc):
            raise ValueError(f"pattern {p!r} not allowed at {loc}")
        at_time.setdefault(loc.time, []).append((loc, p))
    gates_at: dict[int, list] = {}
    for g in c.gates:
        gates_at.setdefault(g.time, []).append(g)

    x, z = frame.x, frame.z
    for t in range(c.duration + 1):
        for g in gates_at.get(t, ()):
            q = g.qubits
            if g.kind in ("PrepZero", "PrepPlus"):
                x[q[0]] = z[q[0]] = 0
            elif g.kind == "CX":
                x[q[1]] ^= x[q[0]]
                z[q[0]] ^= z[q[1]]
            elif g.kind == "CZ":
                z[q[1]] ^= x[q[0]]
                z[q[0]] ^= x[q[1]]
        for loc, p in at_time.get(t, ()):
            for q, pq in zip(loc.qubits, p):
                frame.apply(q, pq)
    flips = z[c.n_ancilla :].copy()
    return flips, frame


# -- packed single-fault effects -------------------------------------------------------


def _pack(bits: np.ndarray) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | int(b)
    return out


@dataclass(frozen=True)
class FaultTable:
    """Packed effect of every single fault, grouped by location."""

    circuit: Circuit
    locs: list[Location]
    patterns: list[tuple[str, ...]]
    effects: list[np.ndarray]  # per location, one packed effect per pattern
    injection: np.ndarray  # packed effect of every input X error

    @property
    def n(self) -> int:
        return self.circuit.n_ancilla

    @property
    def residual_mask(self) -> int:
        return (1 << self.n) - 1


def fault_table(c: Circuit) -> FaultTable:
    locs = locations(c)
    n = c.n_ancilla

    def effect(faults=(), injected=None) -> int:
        flips, frame = propagate(c, faults, injected, locs=locs)
        return (_pack(flips) << n) | _pack(frame.x[:n])

    patterns = [fault_patterns(loc) for loc in locs]
    effects = [np.array([effect([(loc.index, p)]) for p in pats], dtype=np.int64) for loc, pats in zip(locs, patterns)]
    unit = [effect(injected=np.eye(n, dtype=np.uint8)[j]) for j in range(n)]
    if n > 24:
        raise EnumerationBoundError("input-error table limited to 24 ancilla qubits")
    injection = np.zeros(2**n, dtype=np.int64)
    for j, u in enumerate(unit):
        bit = 1 << (n - 1 - j)
        block = np.arange(2**n, dtype=np.int64) & bit
        injection ^= np.where(block != 0, u, 0)
    return FaultTable(c, locs, patterns, effects, injection)


# -- exhaustive scan ------------------------------------------------------------------------


def _elementary_symmetric(values: list[int], k: int) -> int:
    e = [1] + [0] * k
    for v in values:
        for j in range(k, 0, -1):
            e[j] += e[j - 1] * v
    return e[k]


def scan_size(c: Circuit, k_max: int, inject_arbitrary: bool) -> int:
    counts = [len(fault_patterns(loc)) for loc in locations(c)]
    per_input = 2**c.n_ancilla if inject_arbitrary else 1
    return sum(_elementary_symmetric(counts, k) for k in range(k_max + 1)) * per_input


@dataclass
class ScanResult:
    """All events with exactly k circuit faults (optionally times every input error).

    Row i of the arrays is one event: ``faults[i]`` are location indices and
    ``patterns[i]`` pattern indices into ``table.patterns``; ``injected[i]``
    is the packed input error (0 = none).
    """

    k: int
    table: FaultTable = field(repr=False)
    faults: np.ndarray
    patterns: np.ndarray
    injected: np.ndarray
    accepted: np.ndarray
    residual: np.ndarray
    effective_weight: np.ndarray

    def __len__(self) -> int:
        return len(self.accepted)

    @property
    def total_faults(self) -> np.ndarray:
        # an injected error of any weight counts as a single preparation failure
        return self.k + (self.injected != 0)

    @property
    def violations(self) -> np.ndarray:
        """Accepted events whose effective weight exceeds the total fault count."""
        return np.flatnonzero(self.accepted & (self.effective_weight > self.total_faults))

    @property
    def strict_violations(self) -> np.ndarray:
        """Accepted events whose effective weight exceeds the circuit fault count alone."""
        return np.flatnonzero(self.accepted & (self.effective_weight > self.k))

    def histogram(self) -> Counter:
        """Counts keyed by (injected?, accepted, effective weight)."""
        keys = zip((self.injected != 0).tolist(), self.accepted.tolist(), self.effective_weight.tolist())
        return Counter(keys)

    def describe(self, i: int) -> dict:
        n = self.table.n
        faults = [
            (int(li), self.table.locs[li].kind, self.table.locs[li].time, self.table.locs[li].qubits,
             self.table.patterns[li][pi])
            for li, pi in zip(self.faults[i], self.patterns[i])
        ]
        return {
            "k": self.k,
            "faults": faults,
            "injected": format(int(self.injected[i]), f"0{n}b") if n else "",
            "accepted": bool(self.accepted[i]),
            "residual": format(int(self.residual[i]), f"0{n}b") if n else "",
            "effective_weight": int(self.effective_weight[i]),
        }


def _combos(table: FaultTable, k: int):
    """Yield (loc tuple, pattern-index grid, packed effect) blocks for k faults."""
    L = len(table.locs)
    for combo in itertools.combinations(range(L), k):
        if k == 0:
            yield combo, np.zeros((1, 0), dtype=np.int64), np.zeros(1, dtype=np.int64)
            continue
        sizes = [len(table.patterns[i]) for i in combo]
        grid = np.indices(sizes).reshape(k, -1).T
        eff = np.zeros(len(grid), dtype=np.int64)
        for col, li in enumerate(combo):
            eff ^= table.effects[li][grid[:, col]]
        yield combo, grid, eff


def exhaustive_scan(c: Circuit, spec: CodeSpec, k_max: int, inject_arbitrary: bool = False) -> list[ScanResult]:
    """Enumerate every assignment of exactly k <= k_max faults.

    With ``inject_arbitrary`` each assignment is combined with every X error on
    the ancilla input (including none), modelling a preparation failure that
    leaves an error of any weight. An event is accepted iff no verifier flips.
    """
    if spec.n != c.n_ancilla:
        raise ValueError("code and circuit disagree on the number of ancilla qubits")
    need = scan_size(c, k_max, inject_arbitrary)
    if need > MAX_SCAN_EVENTS:
        raise EnumerationBoundError(
            f"exhaustive scan needs {need} events (k_max={k_max}); bound is {MAX_SCAN_EVENTS}"
        )
    table = fault_table(c)
    eff_w = effective_weight_table(spec)
    n = table.n
    inputs = np.arange(2**n, dtype=np.int64) if inject_arbitrary else np.zeros(1, dtype=np.int64)
    results = []
    for k in range(k_max + 1):
        loc_rows, pat_rows, effs = [], [], []
        for combo, grid, eff in _combos(table, k):
            loc_rows.append(np.broadcast_to(np.array(combo, dtype=np.int64), (len(grid), k)))
            pat_rows.append(grid)
            effs.append(eff)
        locs_k = np.concatenate(loc_rows) if loc_rows else np.zeros((0, k), dtype=np.int64)
        pats_k = np.concatenate(pat_rows) if pat_rows else np.zeros((0, k), dtype=np.int64)
        eff_k = np.concatenate(effs) if effs else np.zeros(0, dtype=np.int64)
        m = len(eff_k)
        combined = (eff_k[:, None] ^ table.injection[inputs][None, :]).reshape(-1)
        residual = combined & table.residual_mask
        results.append(
            ScanResult(
                k=k,
                table=table,
                faults=np.repeat(locs_k, len(inputs), axis=0),
                patterns=np.repeat(pats_k, len(inputs), axis=0),
                injected=np.tile(inputs, m),
                accepted=(combined >> n) == 0,
                residual=residual,
                effective_weight=eff_w[residual],
            )
        )
        logger.info("k=%d: %d events, %d violations", k, len(results[-1]), len(results[-1].violations))
    return results


# -- Monte Carlo ---------------------------------------------------------------------------------


def _uniform(patterns) -> dict[str, float]:
    return {p: 1.0 / len(patterns) for p in patterns}


@dataclass(frozen=True)
class NoiseModel:
    """Independent failures with probability epsilon per enabled location.

    ``inject`` adds one extra failure site per trial: with probability
    epsilon the ancilla arrives carrying a uniformly random non-zero X error
    (the worst-case preparation). ``distributions`` maps a location class
    (gate, prep, meas, idle) to a pattern distribution; classes not listed use
    the uniform distribution over non-identity Paulis.
    """

    epsilon: float
    gates: bool = True
    preps: bool = True
    meas: bool = True
    idles: bool = True
    inject: bool = False
    distributions: dict[str, dict[str, float]] | None = None

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError("epsilon must lie in [0, 1]")
        for cls, dist in (self.distributions or {}).items():
            if abs(sum(dist.values()) - 1.0) > 1e-9 or min(dist.values()) < 0:
                raise ValueError(f"distribution for {cls!r} must be non-negative and sum to 1")

    def enabled(self, cls: str) -> bool:
        return {"gate": self.gates, "prep": self.preps, "meas": self.meas, "idle": self.idles}[cls]

    def distribution(self, loc: Location) -> dict[str, float]:
        allowed = fault_patterns(loc)
        dist = (self.distributions or {}).get(location_class(loc))
        if dist is None:
            return _uniform(allowed)
        bad = set(dist) - set(allowed)
        if bad:
            raise ValueError(f"patterns {sorted(bad)} not allowed at {loc.kind} locations")
        return dist


@dataclass(frozen=True)
class MonteCarloResult:
    epsilon: float
    trials: int
    counts: dict[tuple[bool, int], int]

    def count(self, accepted: bool, weight: int) -> int:
        return self.counts.get((accepted, weight), 0)

    def probability(self, accepted: bool = True, weight: int = 0) -> float:
        return self.count(accepted, weight) / self.trials

    def interval(self, accepted: bool = True, weight: int = 0, alpha: float = 0.05) -> tuple[float, float]:
        """Wilson score interval for the probability of (accepted, weight)."""
        from statsmodels.stats.proportion import proportion_confint

        lo, hi = proportion_confint(self.count(accepted, weight), self.trials, alpha=alpha, method="wilson")
        return float(lo), float(hi)

    @property
    def acceptance_rate(self) -> float:
        return sum(v for (acc, _), v in self.counts.items() if acc) / self.trials

    def to_records(self) -> list[str]:
        lines = []
        for (acc, w), cnt in sorted(self.counts.items()):
            lo, hi = self.interval(acc, w)
            lines.append(
                f"mc\tepsilon={self.epsilon:.6g}\ttrials={self.trials}\taccepted={int(acc)}\tweight={w}"
                f"\tcount={cnt}\tp={cnt / self.trials:.6e}\tlo={lo:.6e}\thi={hi:.6e}"
            )
        return lines


def monte_carlo(c: Circuit, spec: CodeSpec, model: NoiseModel, trials: int, seed: int = 0) -> MonteCarloResult:
    """Sample independent trials and histogram (accepted, effective residual weight).

    Trials are drawn in fixed-size chunks; chunk i uses the random stream
    ``SeedSequence([seed, i])``, so the result depends only on the inputs and
    the seed.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if spec.n != c.n_ancilla:
        raise ValueError("code and circuit disagree on the number of ancilla qubits")
    table = fault_table(c)
    eff_w = effective_weight_table(spec)
    n, eps = table.n, model.epsilon

    active = [loc for loc in table.locs if model.enabled(location_class(loc))]
    width = max((len(table.patterns[loc.index]) for loc in active), default=1)
    # per active location: cumulative pattern distribution and packed effects
    cum = np.ones((len(active), width))
    eff = np.zeros((len(active), width), dtype=np.int64)
    for row, loc in enumerate(active):
        dist = model.distribution(loc)
        pats = table.patterns[loc.index]
        probs = np.array([dist.get(p, 0.0) for p in pats])
        cum[row, : len(pats)] = np.cumsum(probs)
        cum[row, len(pats) - 1 :] = 1.0
        eff[row, : len(pats)] = table.effects[loc.index]
    rows = np.arange(len(active))

    counts: Counter = Counter()
    n_chunks = -(-trials // CHUNK_TRIALS)
    for chunk in range(n_chunks):
        size = min(CHUNK_TRIALS, trials - chunk * CHUNK_TRIALS)
        rng = np.random.default_rng(np.random.SeedSequence([seed, chunk]))
        combined = np.zeros(size, dtype=np.int64)
        if active:
            fail = rng.random((size, len(active))) < eps
            u = rng.random((size, len(active)))
            choice = (u[:, :, None] >= cum[None, :, :]).sum(axis=2)
            np.minimum(choice, width - 1, out=choice)
            picked = eff[rows[None, :], choice]
            combined = np.bitwise_xor.reduce(np.where(fail, picked, 0), axis=1)
        if model.inject and n:
            hit = rng.random(size) < eps
            errs = rng.integers(1, 2**n, size=size)
            combined ^= np.where(hit, table.injection[errs], 0)
        accepted = (combined >> n) == 0
        weights = eff_w[combined & table.residual_mask]
        keys, cnt = np.unique(accepted.astype(np.int64) * 1024 + weights, return_counts=True)
        for key, v in zip(keys.tolist(), cnt.tolist()):
            counts[(bool(key >= 1024), key % 1024)] += v
    return MonteCarloResult(eps, trials, dict(counts))


# -- scaling fits --------------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightFit:
    weight: int
    points: tuple[tuple[float, float, float | None, float | None], ...]  # (eps, p, lo, hi)
    exponent: float | None
    prefactor: float | None

    @property
    def indeterminate(self) -> bool:
        return self.exponent is None

    @property
    def correlated(self) -> bool:
        """Fitted exponent below the weight: the error is not uncorrelated."""
        return self.exponent is not None and self.exponent < self.weight


@dataclass(frozen=True)
class ScalingReport:
    fits: dict[int, WeightFit]

    def to_records(self) -> list[str]:
        lines = []
        for w, fit in sorted(self.fits.items()):
            for eps, p, lo, hi in fit.points:
                ci = "" if lo is None else f"\tlo={lo:.6e}\thi={hi:.6e}"
                lines.append(f"point\tweight={w}\tepsilon={eps:.6g}\tp={p:.6e}{ci}")
            if fit.indeterminate:
                lines.append(f"fit\tweight={w}\tindeterminate")
            else:
                lines.append(
                    f"fit\tweight={w}\texponent={fit.exponent:.4f}\tprefactor={fit.prefactor:.6g}"
                    f"\tcorrelated={int(fit.correlated)}"
                )
        return lines


def fit_scaling(points) -> ScalingReport:
    """Least-squares fit of log p = log a + s log eps, per residual weight.

    Args:
        points: iterable of (eps, p, w) or (eps, p, w, lo, hi).

    Weights with fewer than two distinct eps having p > 0 are marked
    indeterminate instead of raising.
    """
    by_w: dict[int, list] = {}
    for pt in points:
        eps, p, w = pt[:3]
        lo, hi = (pt[3], pt[4]) if len(pt) >= 5 else (None, None)
        by_w.setdefault(int(w), []).append((float(eps), float(p), lo, hi))
    fits = {}
    for w, pts in by_w.items():
        pts.sort()
        usable = [(e, p) for e, p, _, _ in pts if p > 0 and e > 0]
        if len({e for e, _ in usable}) < 2:
            fits[w] = WeightFit(w, tuple(pts), None, None)
            continue
        le = np.log([e for e, _ in usable])
        lp = np.log([p for _, p in usable])
        slope, intercept = np.polyfit(le, lp, 1)
        fits[w] = WeightFit(w, tuple(pts), float(slope), float(np.exp(intercept)))
    return ScalingReport(fits)


def scaling_points(results: list[MonteCarloResult], weights, accepted: bool = True) -> list[tuple]:
    """(eps, p, w, lo, hi) rows for fit_scaling from a sweep of MC results."""
    out = []
    for res in results:
        for w in weights:
            lo, hi = res.interval(accepted, w)
            out.append((res.epsilon, res.probability(accepted, w), w, lo, hi))
    return out


def exact_probability(table_or_scan: list[ScanResult], model: NoiseModel, accepted: bool, weight: int) -> float:
    """Probability of (accepted, weight) summed over the enumerated events.

    Each event with k circuit faults is weighted by the exact probability that
    precisely those locations fail with those patterns and no other enabled
    location fails. Events with more faults than were scanned are missing, so
    this is a lower-order truncation of the true probability.
    """
    eps = model.epsilon
    total = 0.0
    for res in table_or_scan:
        table = res.table
        active = [loc for loc in table.locs if model.enabled(location_class(loc))]
        active_set = {loc.index for loc in active}
        n_active = len(active)
        dists = {loc.index: model.distribution(loc) for loc in active}
        mask = res.accepted == accepted
        mask &= res.effective_weight == weight
        n = table.n
        for i in np.flatnonzero(mask):
            locs_i = res.faults[i]
            if any(int(li) not in active_set for li in locs_i):
                continue
            p = prod(dists[int(li)].get(table.patterns[int(li)][int(pi)], 0.0) for li, pi in zip(locs_i, res.patterns[i]))
            p *= eps**res.k * (1 - eps) ** (n_active - res.k)
            inj = int(res.injected[i])
            if model.inject and n:
                p *= eps / (2**n - 1) if inj else (1 - eps)
            elif inj:
                continue
            total += p
    return total
