import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import frame_matches_state, random_faults

from ftfilter.circuit import Circuit, Gate, emit_verification, locations
from ftfilter.codes import builtin, make_code
from ftfilter.cosets import EnumerationBoundError, effective_weight
from ftfilter.paulisim import (
    NoiseModel,
    PauliFrame,
    exact_probability,
    exhaustive_scan,
    fault_patterns,
    fault_table,
    fit_scaling,
    location_class,
    monte_carlo,
    propagate,
    scan_size,
    scaling_points,
)
from ftfilter.statesim import reference_codeword


def _loc(c, kind, time, qubits):
    for loc in locations(c):
        if (loc.kind, loc.time, loc.qubits) == (kind, time, qubits):
            return loc.index
    raise LookupError((kind, time, qubits))


def test_no_faults(good_rep5):
    flips, frame = propagate(good_rep5)
    assert not flips.any() and not frame.x.any() and not frame.z.any()


def test_idle_x_before_cz_flips_its_check(good_rep5):
    # a2 idles at t=1 and meets only verifier 1 (row 10100) at t=5
    i = _loc(good_rep5, "Idle", 1, (2,))
    flips, frame = propagate(good_rep5, [(i, "X")])
    assert flips.tolist() == [0, 1, 0, 0]
    assert frame.x[:5].tolist() == [0, 0, 1, 0, 0]


def test_injected_a0_flips_every_check(good_rep5):
    flips, frame = propagate(good_rep5, injected=[1, 0, 0, 0, 0])
    assert flips.tolist() == [1, 1, 1, 1]
    assert frame.x[:5].tolist() == [1, 0, 0, 0, 0]


def test_hand_propagation_cx():
    c = Circuit(2, 0, (Gate(0, "PrepZero", (0,)), Gate(0, "PrepZero", (1,)), Gate(1, "CX", (0, 1))), 1)
    prep0 = _loc(c, "PrepZero", 0, (0,))
    _, frame = propagate(c, [(prep0, "X")])
    assert frame.x.tolist() == [1, 1] and frame.z.tolist() == [0, 0]
    prep1 = _loc(c, "PrepZero", 0, (1,))
    _, frame = propagate(c, [(prep1, "Z")])
    assert frame.z.tolist() == [1, 1] and frame.x.tolist() == [0, 0]


def test_hand_propagation_cz():
    c = Circuit(2, 0, (Gate(0, "PrepZero", (0,)), Gate(0, "PrepPlus", (1,)), Gate(1, "CZ", (1, 0))), 1)
    _, frame = propagate(c, [(_loc(c, "PrepPlus", 0, (1,)), "Y")])
    # Y on b: X part maps to Z on a, Z part stays
    assert frame.x.tolist() == [0, 1] and frame.z.tolist() == [1, 1]


def test_preparation_resets_frame():
    c = Circuit(1, 0, (Gate(1, "PrepZero", (0,)),), 1)
    _, frame = propagate(c, injected=[1])
    assert frame.x.tolist() == [0]


def test_invalid_faults(good_rep5):
    with pytest.raises(IndexError):
        propagate(good_rep5, [(10_000, "X")])
    meas = _loc(good_rep5, "MeasX", 6, (5,))
    with pytest.raises(ValueError):
        propagate(good_rep5, [(meas, "X")])
    with pytest.raises(ValueError):
        propagate(good_rep5, injected=[1, 0])


def test_fault_patterns_and_classes(good_rep5):
    kinds = {loc.kind: loc for loc in locations(good_rep5)}
    assert len(fault_patterns(kinds["CZ"])) == 15 and "II" not in fault_patterns(kinds["CZ"])
    assert fault_patterns(kinds["MeasX"]) == ("Z",)
    assert fault_patterns(kinds["Idle"]) == ("X", "Y", "Z")
    assert [location_class(kinds[k]) for k in ("CZ", "PrepPlus", "MeasX", "Idle")] == ["gate", "prep", "meas", "idle"]


def test_frame_add():
    a = PauliFrame(np.array([1, 0], dtype=np.uint8), np.array([0, 1], dtype=np.uint8))
    s = a + a
    assert not s.x.any() and not s.z.any()


@pytest.mark.parametrize("name", ["rep5", "steane7"])
def test_condition_one_verifier_faults(name):
    c = emit_verification(builtin(name))
    n = c.n_ancilla
    for loc in locations(c):
        for p in fault_patterns(loc):
            if any(pq != "I" and not c.is_verifier(q) for q, pq in zip(loc.qubits, p)):
                continue
            _, frame = propagate(c, [(loc.index, p)])
            assert not frame.x[:n].any(), (loc, p)


def test_linearity(all_circuits):
    rng = np.random.default_rng(1)
    for c in all_circuits.values():
        for _ in range(30):
            f = random_faults(rng, c, 4)
            a, b = f[:2], f[2:]
            inj = rng.integers(0, 2, c.n_ancilla, dtype=np.uint8)
            fl, fr = propagate(c, f, inj)
            fa, ra = propagate(c, a, inj)
            fb, rb = propagate(c, b)
            assert np.array_equal(fl, fa ^ fb)
            both = ra + rb
            assert np.array_equal(fr.x, both.x) and np.array_equal(fr.z, both.z)


@pytest.mark.parametrize("name", ["rep5_verify", "rep5_prep", "rep5_naive", "steane7_verify", "steane7_prep"])
def test_oracle_equivalence_sample(all_circuits, rep5, steane7, name):
    c = all_circuits[name]
    spec = steane7 if name.startswith("steane7") else rep5
    verify = "verify" in name or "naive" in name
    initial = reference_codeword(spec) if verify else None
    rng = np.random.default_rng(7)
    for _ in range(40):
        inj = rng.integers(0, 2, c.n_ancilla, dtype=np.uint8) if verify else None
        frame_matches_state(c, random_faults(rng, c, int(rng.integers(1, 4))), inj, initial)


def test_fault_table_matches_propagate(good_rep5):
    table = fault_table(good_rep5)
    n = 5
    for loc in table.locs[:20]:
        for p, eff in zip(table.patterns[loc.index], table.effects[loc.index]):
            flips, frame = propagate(good_rep5, [(loc.index, p)])
            packed = int("".join(map(str, flips.tolist() + frame.x[:n].tolist())), 2)
            assert int(eff) == packed
    flips, _ = propagate(good_rep5, injected=[0, 1, 1, 0, 0])
    assert int(table.injection[0b01100]) >> n == int("".join(map(str, flips)), 2)


def test_scan_size_formula(good_rep5):
    assert scan_size(good_rep5, 1, False) == 1 + 238
    assert scan_size(good_rep5, 1, True) == 32 * 239
    res = exhaustive_scan(good_rep5, builtin("rep5"), 1, inject_arbitrary=True)
    assert sum(len(r) for r in res) == 32 * 239


def test_scan_bound(good_rep5, rep5):
    with pytest.raises(EnumerationBoundError, match="needs"):
        exhaustive_scan(good_rep5, rep5, 4, inject_arbitrary=True)


def test_good_rep5_k1_no_violations(good_rep5, rep5):
    res = exhaustive_scan(good_rep5, rep5, 1, inject_arbitrary=True)
    assert all(len(r.violations) == 0 for r in res)
    # hook errors: an X on a0 between its CZs, combined with an input error
    assert len(res[1].strict_violations) == 32
    one_fault = res[1].accepted & (res[1].injected == 0)
    assert res[1].effective_weight[one_fault].max() <= 1


def test_naive_chain_single_fault_violation(naive_rep5, rep5):
    res = exhaustive_scan(naive_rep5, rep5, 1, inject_arbitrary=True)
    assert len(res[0].violations) == 0
    k1 = res[1]
    # without an input error a single fault never leaves weight 2 behind
    assert not (k1.accepted & (k1.injected == 0) & (k1.effective_weight == 2)).any()
    # but one measurement flip hides the two-bit input error 11000, whose
    # only failed chain check is a1a2 (verifier 1)
    events = [k1.describe(int(i)) for i in k1.strict_violations]
    masked = [e for e in events if e["faults"][0][1] == "MeasX"]
    assert {"injected": "11000", "residual": "11000", "qubits": (6,)} in [
        {"injected": e["injected"], "residual": e["residual"], "qubits": e["faults"][0][3]} for e in masked
    ]
    assert all(e["effective_weight"] == 2 for e in events)


@pytest.mark.parametrize("fixture", ["good_rep5", "naive_rep5"])
def test_k0_acceptance_is_zero_syndrome(request, rep5, fixture):
    c = request.getfixturevalue(fixture)
    (r0,) = exhaustive_scan(c, rep5, 0, inject_arbitrary=True)
    assert len(r0) == 32
    assert np.array_equal(r0.accepted, r0.effective_weight == 0)
    assert r0.accepted.sum() == 2


def test_scan_effective_weight_consistent(good_rep5, rep5):
    res = exhaustive_scan(good_rep5, rep5, 1)
    r = res[1]
    for i in range(0, len(r), 17):
        e = [int(b) for b in format(int(r.residual[i]), "05b")]
        assert r.effective_weight[i] == effective_weight(e, rep5)
    assert sum(r.histogram().values()) == len(r)


def test_scan_code_mismatch(good_rep5, steane7):
    with pytest.raises(ValueError):
        exhaustive_scan(good_rep5, steane7, 0)


def test_mc_eps_zero(good_rep5, rep5):
    res = monte_carlo(good_rep5, rep5, NoiseModel(0.0), 5000, seed=1)
    assert res.counts == {(True, 0): 5000}
    assert res.acceptance_rate == 1.0


def _toy():
    spec = make_code("toy", np.zeros((0, 1), dtype=np.uint8), [[1]], 1)
    return spec, emit_verification(spec)


def test_toy_circuit_shape():
    _, c = _toy()
    assert [loc.kind for loc in locations(c)] == ["PrepPlus", "CZ", "MeasX", "Idle"]


def test_mc_eps_one_toy_closed_form():
    spec, c = _toy()
    x_only = {"prep": {"X": 1.0, "Y": 0.0, "Z": 0.0}, "idle": {"X": 1.0, "Y": 0.0, "Z": 0.0}}
    # X on the |+> verifier is harmless; the idle X lands on the ancilla after the check
    res = monte_carlo(c, spec, NoiseModel(1.0, gates=False, meas=False, distributions=x_only), 1000)
    assert res.counts == {(True, 1): 1000}
    # adding the always-failing measurement flips the outcome
    res = monte_carlo(c, spec, NoiseModel(1.0, gates=False, distributions=x_only), 1000)
    assert res.counts == {(False, 1): 1000}


def test_mc_toy_partial_rate():
    spec, c = _toy()
    eps = 0.3
    model = NoiseModel(eps, gates=False, preps=False, idles=False)
    res = monte_carlo(c, spec, model, 20000, seed=4)
    lo, hi = res.interval(True, 0, alpha=1e-4)
    assert lo <= 1 - eps <= hi


def test_mc_deterministic(good_rep5, rep5):
    a = monte_carlo(good_rep5, rep5, NoiseModel(0.02, inject=True), 70_000, seed=9)
    b = monte_carlo(good_rep5, rep5, NoiseModel(0.02, inject=True), 70_000, seed=9)
    c = monte_carlo(good_rep5, rep5, NoiseModel(0.02, inject=True), 70_000, seed=10)
    assert a == b and a != c
    assert sum(a.counts.values()) == 70_000


def test_mc_records(good_rep5, rep5):
    res = monte_carlo(good_rep5, rep5, NoiseModel(0.01), 1000)
    lines = res.to_records()
    assert all(ln.startswith("mc\tepsilon=0.01\ttrials=1000") for ln in lines)


def test_noise_model_validation(good_rep5):
    with pytest.raises(ValueError):
        NoiseModel(1.5)
    with pytest.raises(ValueError):
        NoiseModel(0.1, distributions={"idle": {"X": 0.5}})
    bad = NoiseModel(0.1, distributions={"idle": {"XX": 1.0}})
    idle = next(loc for loc in locations(good_rep5) if loc.kind == "Idle")
    with pytest.raises(ValueError):
        bad.distribution(idle)


@pytest.fixture(scope="module")
def rep5_scan3():
    spec = builtin("rep5")
    return exhaustive_scan(emit_verification(spec), spec, 3)


def test_exact_probability_zero_order(rep5_scan3, good_rep5):
    model = NoiseModel(1e-3)
    n_loc = len(locations(good_rep5))
    assert math.isclose(exact_probability(rep5_scan3[:1], model, True, 0), (1 - 1e-3) ** n_loc)


@pytest.mark.slow
@pytest.mark.parametrize("eps,k", [(3e-3, 2), (3e-3, 3), (1e-2, 3)])
def test_mc_matches_exhaustive_coefficient(rep5_scan3, good_rep5, rep5, eps, k):
    model = NoiseModel(eps)
    expected = exact_probability(rep5_scan3[: k + 1], model, True, 2) * 10**6
    res = monte_carlo(good_rep5, rep5, model, 10**6, seed=0)
    observed = res.count(True, 2)
    assert abs(observed - expected) <= 3 * math.sqrt(expected)


def test_fit_exact_power_laws():
    eps = [1e-3, 1e-2, 1e-1]
    rep = fit_scaling([(e, e**2, 2) for e in eps] + [(e, 3 * e, 1) for e in eps])
    assert math.isclose(rep.fits[2].exponent, 2.0, abs_tol=1e-9)
    assert math.isclose(rep.fits[1].exponent, 1.0, abs_tol=1e-9)
    assert math.isclose(rep.fits[1].prefactor, 3.0, rel_tol=1e-9)
    assert not rep.fits[2].correlated
    assert rep.fits[1].weight == 1 and not rep.fits[1].correlated


def test_fit_flags_correlated_and_indeterminate():
    rep = fit_scaling([(1e-3, 5e-3, 2), (1e-2, 5e-2, 2), (1e-3, 0.0, 3), (1e-2, 1e-5, 3)])
    assert rep.fits[2].correlated
    assert rep.fits[3].indeterminate
    lines = rep.to_records()
    assert "fit\tweight=3\tindeterminate" in lines
    assert any(ln.startswith("fit\tweight=2\texponent=1.0000") for ln in lines)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.5, 3.0), st.floats(0.1, 10.0))
def test_fit_recovers_exponent(s, a):
    eps = [3e-3, 1e-2, 3e-2]
    rep = fit_scaling([(e, a * e**s, 1) for e in eps])
    assert math.isclose(rep.fits[1].exponent, s, rel_tol=1e-6)
    assert math.isclose(rep.fits[1].prefactor, a, rel_tol=1e-6)


def test_scaling_points(good_rep5, rep5):
    res = [monte_carlo(good_rep5, rep5, NoiseModel(e), 2000) for e in (0.01, 0.03)]
    pts = scaling_points(res, [0, 1])
    assert len(pts) == 4
    for eps, p, w, lo, hi in pts:
        assert lo <= p <= hi
