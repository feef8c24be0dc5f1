import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ftfilter.circuit import emit_naive_verification, emit_preparation, emit_verification  # noqa: E402
from ftfilter.codes import builtin, repetition  # noqa: E402

DATA = Path(__file__).parents[1] / "src" / "ftfilter" / "data"

CHAIN5 = ["11000", "01100", "00110", "00011"]
HAMMING_CHECK = ["0001111", "0110011", "1010101"]


@pytest.fixture
def rep5():
    return builtin("rep5")


@pytest.fixture
def steane7():
    return builtin("steane7")


@pytest.fixture
def chain5():
    return repetition(5, chain=True)


@pytest.fixture
def good_rep5(rep5):
    return emit_verification(rep5)


@pytest.fixture
def naive_rep5(chain5):
    return emit_naive_verification(chain5.H)


@pytest.fixture
def all_circuits(rep5, steane7, chain5):
    return {
        "rep5_verify": emit_verification(rep5),
        "rep5_prep": emit_preparation(rep5),
        "rep5_naive": emit_naive_verification(chain5.H),
        "steane7_verify": emit_verification(steane7),
        "steane7_prep": emit_preparation(steane7),
    }


def random_full_rank(rng, r, n):
    from ftfilter.gf2 import rank

    while True:
        H = rng.integers(0, 2, size=(r, n), dtype=np.uint8)
        if rank(H) == r:
            return H


def frame_matches_state(c, faults=(), injected=None, initial=None, tol=1e-8):
    """Cross-check propagate against the statevector oracle for one assignment.

    Returns (flips, frame) after asserting that the faulty statevector equals
    the clean one with the final frame applied, and that every verifier parity
    is the clean parity times (-1)^flip.
    """
    from ftfilter.paulisim import propagate
    from ftfilter.statesim import apply_frame, apply_x_error, basis_state, equal_up_to_global_phase, run_state

    if initial is None:
        initial = basis_state(c.n_ancilla)
    clean, clean_out = run_state(c, initial=initial)
    start = initial if injected is None else apply_x_error(initial, injected)
    faulty, faulty_out = run_state(c, faults, initial=start)
    flips, frame = propagate(c, faults, injected)
    assert equal_up_to_global_phase(apply_frame(clean, frame.x, frame.z), faulty, tol)
    for i, (a, b) in enumerate(zip(clean_out, faulty_out)):
        assert abs(b.expectation - (-1) ** int(flips[i]) * a.expectation) <= tol
    return flips, frame


def random_faults(rng, c, k):
    from ftfilter.circuit import locations
    from ftfilter.paulisim import fault_patterns

    locs = locations(c)
    chosen = rng.choice(len(locs), size=min(k, len(locs)), replace=False)
    out = []
    for i in sorted(chosen.tolist()):
        pats = fault_patterns(locs[i])
        out.append((i, pats[int(rng.integers(len(pats)))]))
    return out
