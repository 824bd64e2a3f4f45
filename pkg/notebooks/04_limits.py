# %% [markdown]
# # Long-run behaviour of time-changed processes
#
# Run on an inverse stable clock, a renewal process and a subordinator both
# grow like `t**alpha`. After rescaling, their limits are random multiples
# of `E_alpha(1)`.

# %%
from invsub import Gamma, WaitingTime
from invsub import verify

# %% [markdown]
# ## Renewal counts
#
# With exponential waiting times of rate 2 the renewal count on the clock,
# divided by `t**alpha`, should look like `2 E_alpha(1)` once `t` is large.

# %%
for alpha in (0.5, 0.8):
    res = verify.renewal_limit(alpha, WaitingTime.exponential(2.0), t=1e4, n=10_000, seed=1)
    for r in res.reports:
        print(f"{r.test:45s} D={r.statistic:.4f} p={r.p_value:.3f}")

# %% [markdown]
# Counts live on a lattice, and at moderate `t` that shows up as a KS
# distance of order `1/t**alpha` even when the limit holds.

# %%
for t in (1e2, 1e3, 1e4):
    rep = verify.renewal_limit(0.5, WaitingTime.exponential(1.0), t=t, n=10_000, seed=2, fractional_poisson=False).reports[0]
    print(f"t={t:8g}: D={rep.statistic:.4f}")

# %% [markdown]
# ## A subordinator on the clock
#
# For a gamma subordinator with unit mean the rescaled process tends to
# `E_alpha(1)` itself.

# %%
for alpha in (0.5, 0.8):
    r = verify.timechange_limit(alpha, Gamma(1.0, 1.0), t=1e4, seed=3).reports[0]
    print(f"alpha={alpha}: D={r.statistic:.4f} p={r.p_value:.3f}")
