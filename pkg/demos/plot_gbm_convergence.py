"""
Spectral convergence for geometric Brownian motion
==================================================

Project the terminal value of a gBm onto Hermite chaos of growing degree
and compare mean and variance with the lognormal law.
"""

# %%
import matplotlib.pyplot as plt

from pce_sde.models import Gbm, analytic_law
from pce_sde.nisp import project
from pce_sde.ode import STANDARD, TIGHT

model = Gbm(r=0.03, sigma=0.15, s0=100.0, T=1.0)
law = analytic_law(model)
degrees = range(1, 13)

# %%
# Errors fall spectrally until the integrator's own error takes over.
fig, ax = plt.subplots()
for tol in (STANDARD, TIGHT):
    exps = [project(model, p, tol) for p in degrees]
    ax.semilogy(degrees, [abs(e.mean() - law.mean) for e in exps], "o-", label=f"mean, {tol.name}")
    ax.semilogy(degrees, [abs(e.variance() - law.variance) for e in exps], "s--", label=f"variance, {tol.name}")
ax.set_xlabel("degree p")
ax.set_ylabel("absolute error")
ax.legend()

# %%
# The expansion is a cheap surrogate: evaluating it at any germ value is a
# polynomial evaluation.
exp = project(model, 8)
print(exp(0.0), law.quantile(0.5))

plt.show()
