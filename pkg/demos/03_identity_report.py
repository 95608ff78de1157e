# %% [markdown]
# # Running the identity registry
#
# Every identity evaluates both of its sides by separate routes over a
# parameter grid. Reports carry the worst absolute and relative residual.

# %%
from __future__ import annotations

from qfrac import run_identity_suite

for report in run_identity_suite(q=0.5, p=1.0):
    status = "ok  " if report.passed else "FAIL"
    print(f"{status} {report.identity_name:22s} cells={len(report.grid):4d}  max rel err {report.max_rel_err:.2e}  (<= {report.threshold:g})")

# %% [markdown]
# ## The Heine-type sum off its lattice
#
# The summation holds for ``mu = 0`` and for ``mu`` on the lattice ``Q^k``.
# The default grid stays on the lattice. Off it, the two sides separate.

# %%
from qfrac import QContext, heine_type_sum

ctx = QContext(0.5, 0.0)
for mu in (0.0, 0.125, 0.25, 0.3, 0.5, 0.7):
    lhs, rhs = heine_type_sum(mu, 1.5, 0.5, ctx)
    print(f"mu={mu:5}:  lhs {lhs:.12f}  rhs {rhs:.12f}  rel diff {abs(lhs / rhs - 1):.1e}")
