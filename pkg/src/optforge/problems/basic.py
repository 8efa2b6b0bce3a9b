"""Library of basic test functions for synthetic problem construction.

Each function is vectorized over rows: it maps an ``(n, d)`` array of
points to an ``(n,)`` array of values.  All functions attain their
global minimum value 0 at ``x = x_opt * ones(d)`` on the canonical
domain ``[lo, hi]^d`` (Schwefel up to a small numerical constant).

The registry :data:`BASIC_FUNCTIONS` indexes functions by name; the
ordered tuple :data:`BASIC_NAMES` fixes the integer ids used when
sampling functions during synthesis.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = ["BasicFunction", "BASIC_FUNCTIONS", "BASIC_NAMES"]


def sphere(z):
    """Sum of squares.

    f(z) = sum_i z_i^2
    """
    z = np.asarray(z, dtype=float)
    return np.sum(z**2, axis=-1)


def rastrigin(z):
    """Highly multimodal with a regular grid of local minima.

    f(z) = sum_i (z_i^2 - 10 cos(2 pi z_i) + 10)
    """
    z = np.asarray(z, dtype=float)
    return np.sum(z**2 - 10.0 * np.cos(2.0 * np.pi * z) + 10.0, axis=-1)


def ackley(z):
    """Nearly flat outer region with a central funnel.

    f(z) = -20 exp(-0.2 sqrt(mean(z^2))) - exp(mean(cos(2 pi z))) + 20 + e
    """
    z = np.asarray(z, dtype=float)
    d = z.shape[-1]
    a = -20.0 * np.exp(-0.2 * np.sqrt(np.sum(z**2, axis=-1) / d))
    b = -np.exp(np.sum(np.cos(2.0 * np.pi * z), axis=-1) / d)
    return a + b + 20.0 + np.e


def rosenbrock(z):
    """Curved narrow valley; optimum at all-ones.

    f(z) = sum_{i<d} (100 (z_{i+1} - z_i^2)^2 + (1 - z_i)^2)

    For d = 1 the sum is empty and the function is identically 0.
    """
    z = np.asarray(z, dtype=float)
    a = z[..., :-1]
    b = z[..., 1:]
    return np.sum(100.0 * (b - a**2) ** 2 + (1.0 - a) ** 2, axis=-1)


def griewank(z):
    """Many widespread local minima on a quadratic bowl.

    f(z) = 1 + sum_i z_i^2 / 4000 - prod_i cos(z_i / sqrt(i))
    """
    z = np.asarray(z, dtype=float)
    i = np.arange(1, z.shape[-1] + 1, dtype=float)
    return (
        1.0
        + np.sum(z**2, axis=-1) / 4000.0
        - np.prod(np.cos(z / np.sqrt(i)), axis=-1)
    )


_SCHWEFEL_C = 418.9828872724339
_SCHWEFEL_X = 420.9687474737558


def schwefel(z):
    """Deceptive landscape whose optimum sits far from the origin.

    f(z) = 418.9828872724339 d - sum_i z_i sin(sqrt(|z_i|))

    Minimum at z_i = 420.9687474737558 (value 0 up to ~1e-12 per dim).
    """
    z = np.asarray(z, dtype=float)
    d = z.shape[-1]
    return _SCHWEFEL_C * d - np.sum(z * np.sin(np.sqrt(np.abs(z))), axis=-1)


def bent_cigar(z):
    """Smooth ridge: one sensitive direction, the rest scaled by 1e6.

    f(z) = z_1^2 + 1e6 sum_{i>1} z_i^2
    """
    z = np.asarray(z, dtype=float)
    return z[..., 0] ** 2 + 1.0e6 * np.sum(z[..., 1:] ** 2, axis=-1)


def levy(z):
    """Multimodal with sinusoidal ripples; optimum at all-ones.

    With w_i = 1 + (z_i - 1)/4:
    f(z) = sin^2(pi w_1)
           + sum_{i<d} (w_i - 1)^2 (1 + 10 sin^2(pi w_i + 1))
           + (w_d - 1)^2 (1 + sin^2(2 pi w_d))
    """
    z = np.asarray(z, dtype=float)
    w = 1.0 + (z - 1.0) / 4.0
    head = np.sin(np.pi * w[..., 0]) ** 2
    mid = np.sum(
        (w[..., :-1] - 1.0) ** 2
        * (1.0 + 10.0 * np.sin(np.pi * w[..., :-1] + 1.0) ** 2),
        axis=-1,
    )
    tail = (w[..., -1] - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * w[..., -1]) ** 2)
    return head + mid + tail


def katsuura(z):
    """Rugged fractal-like surface, non-separable product form.

    f(z) = (10 / d^2) prod_i (1 + i sum_{j=1}^{32} |2^j z_i - round(2^j z_i)| / 2^j)^(10 / d^1.2)
           - 10 / d^2
    """
    z = np.asarray(z, dtype=float)
    d = z.shape[-1]
    j = np.arange(1, 33, dtype=float)
    pow2 = 2.0**j
    # (..., d, 32) grid of |2^j z - round(2^j z)| / 2^j
    t = z[..., :, None] * pow2
    frac = np.abs(t - np.round(t)) / pow2
    s = np.sum(frac, axis=-1)
    i = np.arange(1, d + 1, dtype=float)
    prod = np.prod((1.0 + i * s) ** (10.0 / d**1.2), axis=-1)
    return (10.0 / d**2) * prod - 10.0 / d**2


def happycat(z):
    """Ridge between sphere-like and linear terms; optimum at all-minus-ones.

    f(z) = |sum(z^2) - d|^(1/4) + (0.5 sum(z^2) + sum(z)) / d + 0.5
    """
    z = np.asarray(z, dtype=float)
    d = z.shape[-1]
    r2 = np.sum(z**2, axis=-1)
    return (
        np.abs(r2 - d) ** 0.25 + (0.5 * r2 + np.sum(z, axis=-1)) / d + 0.5
    )


def discus(z):
    """Smooth ridge, transposed sensitivity of the cigar.

    f(z) = 1e6 z_1^2 + sum_{i>1} z_i^2
    """
    z = np.asarray(z, dtype=float)
    return 1.0e6 * z[..., 0] ** 2 + np.sum(z[..., 1:] ** 2, axis=-1)


_W_A = 0.5
_W_B = 3.0
_W_KMAX = 20


def weierstrass(z):
    """Continuous everywhere, differentiable nowhere.

    With a = 0.5, b = 3, kmax = 20:
    f(z) = sum_i sum_k a^k cos(2 pi b^k (z_i + 0.5))
           - d sum_k a^k cos(pi b^k)
    """
    z = np.asarray(z, dtype=float)
    d = z.shape[-1]
    k = np.arange(_W_KMAX + 1, dtype=float)
    ak = _W_A**k
    bk = _W_B**k
    inner = np.sum(ak * np.cos(2.0 * np.pi * bk * (z[..., :, None] + 0.5)), axis=-1)
    const = np.sum(ak * np.cos(np.pi * bk))
    return np.sum(inner, axis=-1) - d * const


@dataclass(frozen=True)
class BasicFunction:
    """A basic test function plus the metadata synthesis needs.

    Attributes
    ----------
    name : str
        Registry key.
    fn : callable
        Vectorized evaluator mapping ``(n, d) -> (n,)``.
    domain : tuple of float
        Canonical per-dimension bounds ``(lo, hi)``.
    x_opt : float
        Coordinate of the global minimizer (same in every dimension).
    f_opt : float
        Global minimum value (0 for every function here).
    tags : frozenset of str
        Landscape descriptors used for corpus stratification.
    """

    name: str
    fn: callable
    domain: tuple
    x_opt: float
    f_opt: float = 0.0
    tags: frozenset = field(default_factory=frozenset)

    def __call__(self, z):
        return self.fn(z)


def _bf(name, fn, lo, hi, x_opt, *tags):
    return BasicFunction(name, fn, (float(lo), float(hi)), float(x_opt),
                         tags=frozenset(tags))


BASIC_FUNCTIONS = {
    b.name: b
    for b in [
        _bf("sphere", sphere, -100, 100, 0.0,
            "unimodal", "separable", "symmetric"),
        _bf("rastrigin", rastrigin, -5.12, 5.12, 0.0,
            "multimodal", "separable", "symmetric"),
        _bf("ackley", ackley, -32.768, 32.768, 0.0,
            "multimodal", "nonseparable", "symmetric"),
        _bf("rosenbrock", rosenbrock, -30, 30, 1.0,
            "unimodal", "nonseparable", "asymmetric"),
        _bf("griewank", griewank, -600, 600, 0.0,
            "multimodal", "nonseparable", "symmetric"),
        _bf("schwefel", schwefel, -500, 500, _SCHWEFEL_X,
            "multimodal", "separable", "asymmetric"),
        _bf("bent_cigar", bent_cigar, -100, 100, 0.0,
            "unimodal", "separable", "symmetric"),
        _bf("levy", levy, -10, 10, 1.0,
            "multimodal", "separable", "asymmetric"),
        _bf("katsuura", katsuura, -100, 100, 0.0,
            "multimodal", "nonseparable", "symmetric"),
        _bf("happycat", happycat, -2, 2, -1.0,
            "multimodal", "nonseparable", "asymmetric"),
        _bf("discus", discus, -100, 100, 0.0,
            "unimodal", "separable", "symmetric"),
        _bf("weierstrass", weierstrass, -0.5, 0.5, 0.0,
            "multimodal", "separable", "symmetric"),
    ]
}

# fixed ordering: integer function ids drawn during synthesis index this
BASIC_NAMES = tuple(BASIC_FUNCTIONS)
