# %% [markdown]
# # Densities by Laplace inversion
#
# In `t` the density of `E(t)` at level `x` has Laplace transform
# `psi(s) / s * exp(-x psi(s))`. Inverting it numerically gives the density
# for any family with a known exponent.

# %%
import numpy as np

from invsub import Gamma, LTInversionConfig, RngStream, Stable, inverse_subordinator_density, sample_inverse_stable_exact

# %% [markdown]
# ## Checking against a known answer
#
# For `alpha = 1/2` the density is `exp(-x**2 / (4t)) / sqrt(pi t)`.

# %%
spec = Stable(0.5)
for x, t in [(0.5, 1.0), (1.0, 1.0), (2.0, 0.5)]:
    num = inverse_subordinator_density(spec, x, t)
    ref = np.exp(-x * x / (4 * t)) / np.sqrt(np.pi * t)
    print(f"x={x} t={t}: {num:.12f} vs {ref:.12f}")

# %% [markdown]
# ## Two inversion methods
#
# Talbot's contour runs in double precision. The Gaver functionals are
# accelerated with Wynn's rho and need extended precision, which `mpmath`
# supplies. Agreement between the two is a cheap accuracy check.

# %%
gaver = LTInversionConfig("gaver", 14)
for s in (Stable(0.3), Gamma(1.0, 1.0)):
    a = inverse_subordinator_density(s, 1.0, 1.0)
    b = inverse_subordinator_density(s, 1.0, 1.0, gaver)
    print(f"{s}: talbot {a:.10f} gaver {b:.10f}")

# %% [markdown]
# Gaver degrades as `alpha` approaches one, where the density turns into a
# sharp peak. Extra terms help, though not monotonically.

# %%
ref = inverse_subordinator_density(Stable(0.7), 1.0, 1.0)
for terms in (14, 16, 18):
    v = inverse_subordinator_density(Stable(0.7), 1.0, 1.0, LTInversionConfig("gaver", terms))
    print(terms, "terms: error", abs(v - ref))

# %% [markdown]
# ## Against a histogram

# %%
draws = sample_inverse_stable_exact(0.5, 1.0, RngStream(0).generator(), 10**6)
edges = np.linspace(0.0, 4.0, 9)
hist = np.histogram(draws, edges, density=True)[0]
mids = 0.5 * (edges[1:] + edges[:-1])
for m, h in zip(mids, hist):
    print(f"{m:4.2f}  hist {h:.4f}  density {inverse_subordinator_density(spec, m, 1.0):.4f}")
