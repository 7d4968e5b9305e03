"""
PCE against Monte Carlo and quasi-Monte Carlo
=============================================

Run the bundled gBm comparison for one volatility and plot accuracy
against relative cost.
"""

# %%
from dataclasses import replace

import matplotlib.pyplot as plt

from pce_sde.bench.config import resolve_config
from pce_sde.bench.runner import plateau_relative_time, run_experiment
from pce_sde.models import Gbm

cfg = resolve_config("gbm_comparison")
cfg = replace(cfg, models=(Gbm(0.03, 0.15, 100.0, 1.0),))
report = run_experiment(cfg)
rel = report.relative_times()

# %%
# MC shows its ``M**-1/2`` standard error, QMC does better, and PCE hits
# its plateau at a small fraction of the cost.
fig, ax = plt.subplots()
for method, metric in (("pce", "mean_abs_err"), ("mc", "se_mean"), ("qmc", "err_mean")):
    rows = sorted(report.select(method=method, metric=metric), key=lambda r: r.param)
    ax.loglog([max(rel[id(r)], 1e-6) for r in rows], [r.value for r in rows], "o-", label=method)
ax.set_xlabel("relative time")
ax.set_ylabel("mean error")
ax.legend()
print(plateau_relative_time(report, "gbm", 0.15))

plt.show()
