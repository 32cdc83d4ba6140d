# %% [markdown]
# # Measuring logicals of small codes
#
# What the construction does on the Steane code and on the 15-qubit
# Hamming code. The second one needs extra edges before its support graph
# expands well enough.

# %%
import numpy as np

from hommeas import codelib, css, hypergraph, protocol, surgery
from hommeas.css import PauliOperator

np.set_printoptions(linewidth=120)

# %% [markdown]
# ## Steane code, X on the first three qubits

# %%
steane = codelib.steane()
art = surgery.algorithm3_measure(steane, PauliOperator.from_x([0, 1, 2], 7))
print("ancillas:", art.ancilla_count)
print("merged (n, k):", art.merged.n, art.merged.k)
print("d1 (edges x vertices):\n", art.d1)

# %%
for tag, row in zip(art.row_provenance, np.vstack([art.merged.hx, art.merged.hz])):
    print(f"{tag:12s}", row)

# %% [markdown]
# The same operator measured through a Y-type product mixes both sectors.

# %%
mixed = surgery.mixed_measure(steane, PauliOperator((1, 1, 1, 0, 0, 0, 0), (1, 1, 1, 0, 0, 0, 0)))
print(mixed.merged.n, mixed.merged.k, mixed.sign)
print(sorted(set(mixed.row_provenance)))

# %% [markdown]
# ## Hamming code
#
# With expansion switched on, the support graph gets extra edges until its
# Cheeger constant reaches 1.

# %%
ham = codelib.hamming15()
op = PauliOperator.from_x([2, 3, 4, 11, 13], ham.n)
g = hypergraph.Hypergraph(surgery.restriction_maps(ham, np.flatnonzero(op.x))[1])
print("support graph Cheeger constant:", hypergraph.cheeger(g))

# %%
art = surgery.algorithm3_measure(ham, op)
print("added edges:", art.added_edges)
print("Cheeger constants per round:", [str(h) for h in art.cheeger_trace])
print("merged (n, k):", art.merged.n, art.merged.k)
print("X distance upper bound:", css.distance_search(art.merged, "X", trials=300, seed=1).bound)

# %% [markdown]
# ## A noiseless run
#
# Prepare the +1 eigenstate of the measured logical, run the merge with two
# repetitions and check that the inferred eigenvalue matches.

# %%
rep = protocol.run_protocol(art, prepared_eigenvalue=1, rounds=2, seed=5)
print("prepared", rep.prepared, "inferred", rep.inferred)
