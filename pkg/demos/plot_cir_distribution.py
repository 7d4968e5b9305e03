"""
CIR terminal distribution
=========================

The scaled terminal CIR rate is noncentral chi-squared. A degree-15
expansion sampled with Latin hypercube draws reproduces its density.
"""

# %%
import matplotlib.pyplot as plt
import numpy as np
import scipy.stats as st

from pce_sde.models import Cir, analytic_law
from pce_sde.nisp import pce_sample, project
from pce_sde.sampling import SamplingPlan

model = Cir.with_dof(3, beta=0.2, sigma=0.15, r0=110.0, T=2.0)
law = analytic_law(model)
sample = pce_sample(project(model, 15), SamplingPlan(5000, seed=1))
print(st.kstest(sample, law.cdf))

# %%
x = np.linspace(sample.min(), sample.max(), 300)
fig, ax = plt.subplots()
ax.hist(sample, bins=60, density=True, alpha=0.5, label="PCE sample")
ax.plot(x, law.pdf(x), "k", label="noncentral chi-squared")
ax.set_xlabel("R_T")
ax.legend()

plt.show()
