# coding: utf-8

# # Check matrices, standard form and coset leaders
#
# The repetition code on five bits has a single codeword pair, 00000 and
# 11111. Two check matrices describe it equally well: a "chain" of
# neighbouring pairs and a "star" where bit 0 appears in every check. Only
# one of them lets every syndrome be explained by an error no heavier than
# the number of checks it trips.

# %%

import numpy as np

from ftfilter import gf2
from ftfilter.codes import builtin, codewords, repetition
from ftfilter.cosets import build_coset_table, check_ft_condition

chain = repetition(5, chain=True)
print(chain.H)

# %% [markdown]
# Row reduction keeps the row space. Choosing pivots from the right end puts
# an identity block on the last four columns, so the reduced matrix reads
# (A | I) without any column swap.

# %%

sf = gf2.to_standard_form(chain.H)
print("A =", sf.A.ravel(), " perm =", sf.perm)
print(sf.matrix)

# %% [markdown]
# Coset leaders: for each syndrome, the lightest error producing it.

# %%

for name, H in [("chain", chain.H), ("standard", sf.matrix)]:
    table = build_coset_table(H, 2)
    print(f"\n{name} checks")
    for s, (leader, w) in sorted(table.entries.items(), key=lambda kv: (sum(kv[0]), kv[0])):
        if sum(s) == 1:
            print("  syndrome", gf2.bitstring(np.array(s)), "leader", gf2.bitstring(leader), "weight", w)

# %% [markdown]
# The chain has weight-one syndromes whose lightest cause weighs two: if
# that single check is silenced, a two-bit error slips through. The
# standard form never does this.

# %%

for name, H in [("chain", chain.H), ("standard", sf.matrix)]:
    rep = check_ft_condition(H, 2)
    print(f"{name:9s} passed={rep.passed}  violations={len(rep.violations)}")

# %% [markdown]
# The same holds for the larger builtin code with four checks on seven bits.

# %%

steane = builtin("steane7")
print(codewords(steane))
print(check_ft_condition(gf2.to_standard_form(steane.H).matrix, steane.r).passed)
