# %% [markdown]
# # Sampling inverse subordinators
#
# Every generator is keyed by a `(seed, stream)` pair, so any draw below can
# be reproduced exactly.

# %%
from math import gamma as gamma_fn

import numpy as np
from scipy import stats

from invsub import (
    Gamma,
    InverseGaussian,
    RngStream,
    Stable,
    ks_two_sample,
    sample_composed_iss,
    sample_fractional_poisson,
    sample_increment,
    sample_inverse_stable_exact,
    sample_inverse_subordinator,
)


def gen(stream, seed=0):
    return RngStream(seed, stream).generator()


# %% [markdown]
# ## Stable clocks
#
# The one-sided stable variate with Laplace transform `exp(-u**alpha)` comes
# from the uniform-plus-exponential construction. For `alpha = 1/2` it has
# the law of `1 / (2 Z**2)` with `Z` standard normal.

# %%
s = sample_increment(Stable(0.5), 1.0, gen(0), 100_000)
levy = 1 / (2 * gen(1).standard_normal(100_000) ** 2)
print(ks_two_sample(s, levy))

# %% [markdown]
# Its inverse has an exact representation `E(t) = (t / S)**alpha`. At
# `alpha = 1/2` this is a folded normal with variance `2t`.

# %%
e = sample_inverse_stable_exact(0.5, 1.0, gen(2), 100_000)
print("KS vs |N(0,2)|:", stats.kstest(e, stats.halfnorm(scale=np.sqrt(2)).cdf).pvalue)

# %% [markdown]
# ## First passage on a grid
#
# Other families have no such shortcut. The sampler walks a path on a grid of
# step `dt`, doubling the horizon until it crosses `t`, and returns the
# bracket that holds the crossing time.

# %%
br = sample_inverse_subordinator(Gamma(1.0, 1.0), 1.0, 1e-3, gen(3), 5)
print(np.column_stack([br.lower, br.upper]))

# %% [markdown]
# The inverse Gaussian clock with `gamma = 0` has a folded normal inverse
# as well, which makes a good check on the bracket midpoints.

# %%
mid = sample_inverse_subordinator(InverseGaussian(1.0, 0.0), 1.0, 1e-3, gen(4), 20_000).midpoint
print("KS vs |N(0,1)|:", stats.kstest(mid, stats.halfnorm().cdf).pvalue)

# %% [markdown]
# ## Composition
#
# Nesting two inverse stable clocks gives another one whose index is the
# product of the two.

# %%
nested = sample_composed_iss([0.8, 0.75], 1.0, gen(5), 100_000)
single = sample_inverse_stable_exact(0.6, 1.0, gen(6), 100_000)
print(ks_two_sample(nested, single))

# %% [markdown]
# ## Fractional Poisson counts
#
# Running a Poisson process on the clock `E_alpha` gives the fractional
# Poisson process. Its mean is `lam t**alpha / Gamma(1 + alpha)`.

# %%
lam, alpha, t = 2.0, 0.6, 5.0
m = sample_fractional_poisson(lam, alpha, t, gen(7), 200_000)
print("sample mean", m.mean(), "exact", lam * t**alpha / gamma_fn(1 + alpha))
