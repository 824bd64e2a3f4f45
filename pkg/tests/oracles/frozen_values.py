"""Reference values produced by ``frozen.py`` (50-digit mpmath)."""

# (family, params, t, x, log of the optimized Chernoff bound)
LOG_BOUNDS = [
    ("stable", (0.5,), 1, 2, -1.0),
    ("stable", (0.3,), 2, 5, -3.0940182533526452602),
    ("stable", (0.8,), 0.5, 3, -318.50496000000055468),
    ("tempered", (0.5, 1.0), 1, 4, -1.0),
    ("tempered", (0.7, 2.0), 3, 10, -11.418707982533414449),
    ("ig", (1.0, 0.0), 1, 2, -2.0),
    ("ig", (2.0, 0.5), 1, 3, -15.125),
    ("gamma", (1.0, 1.0), 1, 2, -0.38629436111989061883),
    ("gamma", (2.0, 3.0), 5, 7, 0.0),
]

# (x, t, density of E(t)) for stable index 1/2, by de Hoog inversion
ISS_HALF_DENSITY = [
    (1, 1, 0.43939128946772239705),
    (0.5, 2, 0.38666811680284920694),
    (2, 0.7, 0.16160520899628142737),
]

# same for the gamma(1, 1) subordinator
GAMMA11_DENSITY = [
    (1, 1, 0.43172971063489869613),
    (0.5, 2, 0.13561933520399724326),
    (2, 3, 0.19742541957920246938),
]
