# %% [markdown]
# # The generalized q-fractional integral
#
# The operator works on the Jackson grid ``x q^i``. Its order ``alpha`` can
# be any positive real, and ``p`` interpolates between the q-Riemann-Liouville
# integral (``p = 0``) and operators built on ``t^{p+1}``.

# %%
from __future__ import annotations

from qfrac import Integrand, OperatorSpec, QContext, frac_integral, frac_integral_kernel, power_rule_closed_form

ctx = QContext(q=0.5, p=1.0)
f = Integrand.power(2.0)  # t^{p+1} with p = 1

# %% [markdown]
# Two independent routes give the same number: the grid series with
# finite Pochhammer weights, and the literal kernel integral.

# %%
for alpha in (0.25, 0.5, 1.0, 1.7):
    spec = OperatorSpec(alpha, ctx)
    series = frac_integral(f, 1.0, spec)
    kernel = frac_integral_kernel(f, 1.0, spec)
    closed = power_rule_closed_form(1.0, alpha, 1.0, ctx)
    print(f"alpha={alpha:4}  series={series.value:.15f}  kernel={kernel.value:.15f}  closed={closed:.15f}  terms={series.terms_used}")

# %% [markdown]
# ## Semigroup
#
# Applying ``J^beta`` and then ``J^alpha`` is the same as ``J^{alpha+beta}``.
# The inner operator is evaluated at every outer grid point, so it is wrapped
# in a memoizing integrand.

# %%
from qfrac.operators import as_operator_integrand

g = Integrand.polynomial([1.0, -1.0, 0.5])
for alpha, beta in [(0.5, 0.5), (0.3, 1.2), (1.5, 0.25)]:
    inner = as_operator_integrand(g, OperatorSpec(beta, ctx))
    twice = frac_integral(inner, 0.8, OperatorSpec(alpha, ctx)).value
    once = frac_integral(g, 0.8, OperatorSpec(alpha + beta, ctx)).value
    print(f"({alpha}, {beta}):  {twice:.15f}  {once:.15f}  rel diff {abs(twice / once - 1):.1e}")

# %% [markdown]
# ## Derivative as a left inverse
#
# ``D^alpha = (x^{-p} D_q)^n J^{n - alpha}`` with ``n = floor(alpha) + 1``
# undoes ``J^alpha``.

# %%
from qfrac import frac_derivative

for alpha in (0.25, 0.5, 0.75):
    spec = OperatorSpec(alpha, ctx)
    back = frac_derivative(as_operator_integrand(g, spec), 0.8, spec)
    print(f"alpha={alpha}:  D J g = {back:.15f}   g = {g(0.8):.15f}")
