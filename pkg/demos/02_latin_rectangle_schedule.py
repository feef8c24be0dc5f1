# coding: utf-8

# # Scheduling the controlled-Z gates
#
# Every 1 in A stands for a gate between a verification qubit (its row) and
# an ancilla qubit (its column). Gates that share a row or a column cannot
# run together, so a schedule labels the 1s with time steps that never
# repeat along a row or column: a latin rectangle. The smallest alphabet is
# the heaviest row or column, w_max.

# %%

import numpy as np

from ftfilter import gf2
from ftfilter.circuit import emit_preparation, emit_verification, format_circuit
from ftfilter.codes import builtin
from ftfilter.scheduler import schedule, validate, w_max

A = np.array([[1, 1, 0], [1, 0, 1]], dtype=np.uint8)
s = schedule(A)
print(s.render())
print("N =", s.N, " w_max =", w_max(A), " valid =", validate(s, A))

# %% [markdown]
# A denser random block. The schedule still needs only w_max steps.

# %%

rng = np.random.default_rng(0)
A = rng.integers(0, 2, size=(7, 9), dtype=np.uint8)
s = schedule(A)
print(s.render())
print("N =", s.N, " w_max =", w_max(A))

# %% [markdown]
# For the seven-bit code the verification network takes N steps for A,
# one step for the identity block, and T_m steps to measure.

# %%

steane = builtin("steane7")
A = gf2.to_standard_form(steane.H).A
print(schedule(A).render())
for tm in (1, 2, 3):
    c = emit_verification(steane, T_m=tm)
    print(f"T_m={tm}: duration {c.duration} = {w_max(A)} + 1 + {tm}")

# %% [markdown]
# The preparation network copies the information qubits onto the rest with
# CX gates, scheduled the same way.

# %%

print(format_circuit(emit_preparation(steane)))
