"""
Hermite basis and Gauss-Hermite rule
====================================

The germ is a centred Gaussian with variance 1/2, so the physicists'
Hermite polynomials are orthogonal for it. We plot the first few basis
functions and check orthogonality with the matching quadrature rule.
"""

# %%
import matplotlib.pyplot as plt
import numpy as np

from pce_sde.chaos import HermiteBasis, gauss_hermite_rule

basis = HermiteBasis(4)
x = np.linspace(-2.5, 2.5, 400)
fig, ax = plt.subplots()
for i in range(basis.size):
    ax.plot(x, basis.eval(i, x), label=f"H_{i}")
ax.set_ylim(-30, 30)
ax.set_xlabel("xi")
ax.legend()

# %%
# A rule with ``n`` nodes integrates polynomials up to degree ``2n - 1``
# exactly, so with 5 nodes the Gram matrix of ``H_0 .. H_4`` is diagonal
# with entries ``2**i i!``.
rule = gauss_hermite_rule(5)
values = basis.eval_all(np.asarray(rule.nodes))
gram = np.array([[rule.expect(values[i] * values[j]) for j in range(5)] for i in range(5)])
print(np.round(gram, 10))
print(basis.norms_sq)

plt.show()
