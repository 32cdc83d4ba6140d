# %% [markdown]
# # Benchmark codes
#
# Ancilla counts and check weights for the four shipped benchmarks, set
# against generalized lattice surgery with `r = d` layers.

# %%
import time

import numpy as np

from hommeas import codelib, css, surgery

DISTANCES = {"LP1": 10, "LP2": 12, "HGP1": 8, "HGP2": 10}

# %%
rows = []
for name, d in DISTANCES.items():
    code = codelib.benchmark_code(name)
    op = codelib.benchmark_operator(name)
    t0 = time.perf_counter()
    art = surgery.algorithm3_measure(code, op)
    gls = surgery.scheme_generalized_lattice_surgery(code, op, d)
    p = css.weight_profile(art.merged)
    rows.append((name, code.n, code.k, art.merged.n, art.merged.k, art.ancilla_count,
                 gls.ancilla_count, (p.q_x, p.w_x, p.q_z, p.w_z), time.perf_counter() - t0))

print(f"{'code':5s} {'[n,k]':>9s} {'merged':>9s} {'anc':>4s} {'gls':>4s}  weights         seconds")
for name, n, k, mn, mk, anc, g, w, sec in rows:
    print(f"{name:5s} {f'[{n},{k}]':>9s} {f'[{mn},{mk}]':>9s} {anc:4d} {g:4d}  {str(w):15s} {sec:6.1f}")

# %% [markdown]
# The ratio of the two ancilla counts:

# %%
ratio = np.array([g / anc for *_, anc, g, _w, _s in rows])
print({k: round(float(r), 1) for k, r in zip(DISTANCES, ratio)})

# %% [markdown]
# A quick randomized search on the merged LP1 code. The acceptance suite
# runs far more trials; a few hundred already land on weight 10 here.

# %%
merged = surgery.algorithm3_measure(codelib.benchmark_code("LP1"), codelib.benchmark_operator("LP1")).merged
for sector in "XZ":
    print(sector, css.distance_search(merged, sector, trials=500, seed=7).bound)
