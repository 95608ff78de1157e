# %% [markdown]
# # Classical limits
#
# As ``q -> 1`` the operator approaches the classical operator with kernel
# ``(x^{p+1} - w^{p+1})^{alpha-1}``, computed here by adaptive quadrature.
# Convergence is only first order in ``1 - q`` and the series needs many
# terms, so the cap is raised.

# %%
from __future__ import annotations

import math

from qfrac import Integrand, OperatorSpec, QContext, Truncation, classical_reference, frac_integral

f = Integrand.power(2.0)
alpha, p = 0.5, 1.0
reference = classical_reference(f, 1.0, alpha, p)
print(f"classical value {reference:.12f}")

for eps in (1e-1, 1e-2, 1e-3):
    spec = OperatorSpec(alpha, QContext(1.0 - eps, p), trunc=Truncation(1e-12, 200_000))
    r = frac_integral(f, 1.0, spec)
    print(f"q = 1 - {eps:g}:  {r.value:.12f}  rel err {abs(r.value / reference - 1):.2e}  terms {r.terms_used}")

# %% [markdown]
# ## Logarithmic kernel
#
# Letting ``p -> -1`` as well turns the normalized power kernel into
# ``log(t/a)^lambda``. This is the kernel of the Hadamard integral.

# %%
from qfrac import hadamard_kernel_limit_check

for t, a, lam in [(2.0, 1.0, 1.0), (2.0, 1.0, 2.0), (math.e, 1.0, 1.0), (3.0, 1.5, 1.5)]:
    q_side, log_side = hadamard_kernel_limit_check(t, a, lam, 1e-3, 1e-2)
    print(f"t={t:.4f} a={a} lambda={lam}:  q-kernel {q_side:.6f}  log kernel {log_side:.6f}")
