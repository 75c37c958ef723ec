"""Local height machinery of a multiplicative-reduction (Tate) elliptic
curve, in both evaluation models.

Archimedean model: the curve is C*/q^Z with modulus 0 < |q| < 1, and the
canonical local height of a point with lift z is

    lambda(z) = (l/2) B2( log|z| / log|q| ) - log|theta(z)|,
    theta(z)  = (1 - z) prod_{n>=1} (1 - q^n z)(1 - q^n / z),
    B2(t)     = t^2 - t + 1/6   (second Bernoulli polynomial),

with l = -log|q|.  The quasi-periodicity theta(qz) = -theta(z)/z makes
lambda invariant under z -> qz.  The normalization matches Tate's
classical tables (the constant shift l/12 is built into B2's constant
term).

Valuation model: only the tropicalization nu = -log|z| matters, and the
height of the canonical-metric section restricted to the skeleton circle
of circumference sqrt(l) is the exact rational

    nu (nu - l) / (2 l),   0 <= nu <= l.

This equals the origin-based norm-modified tropical theta of the rank-1
lattice [[l]] shifted by half a period, an identity asserted against
:mod:`tropmoment.troptheta` in the tests.  At integer nu = i it gives the
multiplicity i (i - l) / (2 l) of a theta section along component i of
the special fiber.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

__all__ = [
    "AtDivisorError",
    "BadModulusError",
    "OutOfRangeError",
    "TateSeriesValue",
    "b2",
    "tate_theta_log_abs",
    "tate_local_height",
    "tate_local_height_tropical",
    "component_multiplicity",
]

DEFAULT_TERMS = 64
_TAIL_TARGET = 1e-15
_DIVISOR_TOL = 1e-9


class AtDivisorError(ValueError):
    """z is (numerically) on the divisor q^Z where theta vanishes."""


class BadModulusError(ValueError):
    pass


class OutOfRangeError(ValueError):
    pass


class TateSeriesValue(NamedTuple):
    value: float
    tail_bound: float


def b2(t):
    """Second Bernoulli polynomial t^2 - t + 1/6.

    Exact on Fraction input, float on float input.
    """
    return t * t - t + Fraction(1, 6)


def _check_modulus(q: complex) -> complex:
    q = complex(q)
    if not 0.0 < abs(q) < 1.0:
        raise BadModulusError(f"|q| must lie in (0, 1), got |q| = {abs(q)!r}")
    return q


def _check_off_divisor(q: complex, z: complex):
    """Reject z within relative distance 1e-9 of some q^n."""
    if z == 0:
        raise AtDivisorError("z must be nonzero")
    n0 = round(math.log(abs(z)) / math.log(abs(q)))
    for n in (n0 - 1, n0, n0 + 1):
        if abs(z / q**n - 1.0) < _DIVISOR_TOL:
            raise AtDivisorError(
                f"z is within relative tolerance {_DIVISOR_TOL} of q^{n}"
            )


def tate_theta_log_abs(
    q: complex, z: complex, n_terms: int = DEFAULT_TERMS
) -> TateSeriesValue:
    """log|theta(z)| for theta(z) = (1-z) prod (1 - q^n z)(1 - q^n / z).

    The truncation tail bound is reported; the series stops early once it
    falls below 1e-15.  In log form the product satisfies
    log|theta(qz)| = log|theta(z)| - log|z|.
    """
    q = _check_modulus(q)
    z = complex(z)
    _check_off_divisor(q, z)
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    abs_q = abs(q)
    big = max(abs(z), 1.0 / abs(z))
    total = math.log(abs(1.0 - z))
    q_pow = complex(1.0)
    z_inv = 1.0 / z
    tail = math.inf
    for n in range(1, n_terms + 1):
        q_pow *= q
        total += math.log(abs(1.0 - q_pow * z))
        total += math.log(abs(1.0 - q_pow * z_inv))
        head = abs_q ** (n + 1) * big
        if head < 1.0:
            tail = (abs_q ** (n + 1) * (abs(z) + abs(z_inv))) / (
                (1.0 - abs_q) * (1.0 - head)
            )
            if tail < _TAIL_TARGET:
                break
    return TateSeriesValue(total, tail)


def tate_local_height(q: complex, z: complex, n_terms: int = DEFAULT_TERMS) -> float:
    """Tate's absolute local height (l/2) B2(log|z|/log|q|) - log|theta(z)|.

    Invariant under z -> qz: the B2 step (l/2)(B2(t+1) - B2(t)) = -log|z|
    cancels the quasi-periodicity of theta exactly.
    """
    q = _check_modulus(q)
    z = complex(z)
    ell = -math.log(abs(q))
    t = math.log(abs(z)) / math.log(abs(q))
    theta = tate_theta_log_abs(q, z, n_terms)
    return (ell / 2.0) * float(b2(t)) - theta.value


def tate_local_height_tropical(ell, nu) -> Fraction:
    """Skeleton value nu (nu - l) / (2 l) for 0 <= nu <= l, exact."""
    ell = Fraction(ell)
    nu = Fraction(nu)
    if ell <= 0:
        raise BadModulusError("l must be positive")
    if not 0 <= nu <= ell:
        raise OutOfRangeError(f"nu must lie in [0, {ell}], got {nu}")
    return nu * (nu - ell) / (2 * ell)


def component_multiplicity(i: int, ell: int) -> Fraction:
    """Multiplicity i (i - l) / (2 l) of the theta section along special
    fiber component i; zero at i = 0, symmetric under i -> l - i."""
    if ell < 1:
        raise BadModulusError("l must be a positive integer")
    if not 0 <= i < ell:
        raise OutOfRangeError(f"component index must lie in [0, {ell}), got {i}")
    return Fraction(i * (i - ell), 2 * ell)
