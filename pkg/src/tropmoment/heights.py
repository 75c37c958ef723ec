"""Archimedean elliptic invariants and the assembled height identities.

The discriminant modular form is evaluated through its q-product,

    log|delta(tau)| = log|q| + 24 * sum_{n>=1} log|1 - q^n|,
    q = exp(2 pi i tau),   Im tau > 0,

with a reported truncation bound.  The archimedean local invariant of an
elliptic curve with period tau is

    -(1/24) * ( log|delta(tau)| + 6 log(2 Im tau) )

and is strictly positive on the upper half plane; the non-archimedean
local invariant at a place with minimal-discriminant valuation n is the
exact rational n/12.

Two closed forms of the stable height of a semistable elliptic curve are
assembled here: the classical per-place formula

    12 [k:Q] h = sum_v ord_v log Nv
                 - sum_sigma log( (2 pi)^12 |delta(tau_sigma)| (Im tau_sigma)^6 )

and the local-invariant form 2g*h' - kappa0*g + (sum I_v log Nv +
2 sum I_sigma)/[k:Q] with kappa0 = log(pi*sqrt(2)) and h' = 0 for
elliptic curves (the theta divisor is 2-torsion).  Their difference is an
algebraic identity per archimedean embedding; the report helper returns
both sides and the residual.

Convention: the archimedean places are the complex embeddings of the
field, each of the [k:Q] embeddings listed separately (so a conjugate
pair appears twice).  Some references index by places instead; inputs
here must follow the embedding convention, hence #arch == degree.

Archimedean quantities are binary64 floats; non-archimedean ones are
exact rationals.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

__all__ = [
    "KAPPA0",
    "SeriesValue",
    "NonArchPlace",
    "EllipticPlaces",
    "HeightReport",
    "NonPositiveImaginaryPartError",
    "NegativeOrderError",
    "log_abs_delta",
    "arch_local_invariant",
    "nonarch_local_invariant",
    "faltings_height_elliptic",
    "height_identity_rhs",
    "function_field_height",
    "height_identity_report",
]

KAPPA0 = math.log(math.pi * math.sqrt(2.0))

DEFAULT_TERMS = 64
_TAIL_TARGET = 1e-15


class NonPositiveImaginaryPartError(ValueError):
    pass


class NegativeOrderError(ValueError):
    pass


class SeriesValue(NamedTuple):
    """A truncated-series value together with its truncation tail bound."""

    value: float
    tail_bound: float


@dataclass(frozen=True)
class NonArchPlace:
    """Non-archimedean local data: discriminant valuation and log Nv."""

    ord_delta: int
    log_nv: float

    def __post_init__(self):
        if self.ord_delta < 0:
            raise NegativeOrderError("ord_delta must be >= 0")
        if not self.log_nv > 0:
            raise ValueError("log_nv must be positive")


@dataclass(frozen=True)
class EllipticPlaces:
    """Per-place data of a semistable elliptic curve over a degree-d field.

    ``arch`` lists the period tau of every complex embedding, so it must
    have exactly ``degree`` entries.
    """

    degree: int
    nonarch: tuple[NonArchPlace, ...]
    arch: tuple[complex, ...]

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be >= 1")
        if len(self.arch) != self.degree:
            raise ValueError(
                f"{len(self.arch)} archimedean embeddings given, "
                f"degree is {self.degree}"
            )
        for tau in self.arch:
            _check_tau(tau)


@dataclass(frozen=True)
class HeightReport:
    lhs: float
    rhs: float
    residual: float
    terms: dict = field(compare=False)


def _check_tau(tau: complex) -> complex:
    tau = complex(tau)
    if not tau.imag > 0:
        raise NonPositiveImaginaryPartError(
            f"period must lie in the upper half plane, got {tau!r}"
        )
    if tau.imag < 0.1:
        warnings.warn(
            "Im tau < 0.1: no modular reduction is applied; the series "
            "needs many terms and the input may be a mistake",
            stacklevel=3,
        )
    return tau


def log_abs_delta(tau: complex, n_terms: int = DEFAULT_TERMS) -> SeriesValue:
    """log|delta(tau)| by the truncated q-product.

    Stops early once the running tail bound 48 |q|^(n+1) / (1-|q|)^2 drops
    below 1e-15; the bound actually achieved is returned alongside.
    """
    tau = _check_tau(tau)
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    q = _cexp_2pii(tau)
    abs_q = abs(q)
    total = math.log(abs_q)  # = -2 pi Im tau
    q_pow = complex(1.0)
    tail = math.inf
    for n in range(1, n_terms + 1):
        q_pow *= q
        total += 24.0 * math.log(abs(1.0 - q_pow))
        tail = 48.0 * abs_q ** (n + 1) / (1.0 - abs_q) ** 2
        if tail < _TAIL_TARGET:
            break
    return SeriesValue(total, tail)


def _cexp_2pii(tau: complex) -> complex:
    # exp(2 pi i tau); Re tau is reduced mod 1 first so that tau and
    # tau + 1 produce the same q bit for bit
    r = math.exp(-2.0 * math.pi * tau.imag)
    angle = 2.0 * math.pi * (tau.real - math.floor(tau.real))
    return complex(r * math.cos(angle), r * math.sin(angle))


def arch_local_invariant(tau: complex, n_terms: int = DEFAULT_TERMS) -> float:
    """-(1/24) ( log|delta(tau)| + 6 log(2 Im tau) ); strictly positive."""
    tau = _check_tau(tau)
    log_delta = log_abs_delta(tau, n_terms).value
    return -(log_delta + 6.0 * math.log(2.0 * tau.imag)) / 24.0


def nonarch_local_invariant(ord_delta: int) -> Fraction:
    """ord_delta / 12, exactly; zero iff good reduction."""
    if ord_delta < 0:
        raise NegativeOrderError("ord_delta must be >= 0")
    return Fraction(ord_delta, 12)


def faltings_height_elliptic(
    places: EllipticPlaces, n_terms: int = DEFAULT_TERMS
) -> float:
    """Stable height from the classical per-place closed form.

    Sums are accumulated left to right in input order for reproducibility.
    """
    nonarch_sum = 0.0
    for place in places.nonarch:
        nonarch_sum += place.ord_delta * place.log_nv
    arch_sum = 0.0
    for tau in places.arch:
        log_delta = log_abs_delta(tau, n_terms).value
        arch_sum += (
            12.0 * math.log(2.0 * math.pi)
            + log_delta
            + 6.0 * math.log(tau.imag)
        )
    return (nonarch_sum - arch_sum) / (12.0 * places.degree)


def height_identity_rhs(
    g: int,
    h_nt_theta: float,
    nonarch,
    arch,
    degree: int,
) -> float:
    """Right-hand side of the height identity.

    ``nonarch`` holds (moment, log_nv) pairs with exact rational moments;
    ``arch`` holds the archimedean invariants.  Assembles

        2 g h' - kappa0 g + ( sum moment * log Nv + 2 sum I ) / degree.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if g < 1:
        raise ValueError("g must be >= 1")
    local = 0.0
    for moment, log_nv in nonarch:
        local += float(moment) * log_nv
    for inv in arch:
        local += 2.0 * inv
    return 2.0 * g * h_nt_theta - KAPPA0 * g + local / degree


def function_field_height(g: int, h_nt_theta, moments) -> Fraction:
    """Function-field height: 2 g h' + sum of the local moments, exact."""
    if g < 1:
        raise ValueError("g must be >= 1")
    total = 2 * g * Fraction(h_nt_theta)
    for m in moments:
        total += Fraction(m)
    return total


def height_identity_report(
    places: EllipticPlaces, n_terms: int = DEFAULT_TERMS
) -> HeightReport:
    """Both sides of the g = 1 height identity and their residual.

    LHS is the classical per-place formula; RHS is the local-invariant
    assembly with h' = 0 and non-archimedean moments ord/12.  The residual
    vanishes up to series truncation and float rounding.
    """
    lhs = faltings_height_elliptic(places, n_terms)
    nonarch_terms = []
    for place in places.nonarch:
        moment = nonarch_local_invariant(place.ord_delta)
        nonarch_terms.append(
            {
                "ord_delta": place.ord_delta,
                "log_nv": place.log_nv,
                "moment": moment,
            }
        )
    arch_terms = []
    for tau in places.arch:
        arch_terms.append({"tau": tau, "invariant": arch_local_invariant(tau, n_terms)})
    rhs = height_identity_rhs(
        g=1,
        h_nt_theta=0.0,
        nonarch=[(t["moment"], t["log_nv"]) for t in nonarch_terms],
        arch=[t["invariant"] for t in arch_terms],
        degree=places.degree,
    )
    return HeightReport(
        lhs=lhs,
        rhs=rhs,
        residual=lhs - rhs,
        terms={
            "degree": places.degree,
            "nonarch": nonarch_terms,
            "arch": arch_terms,
        },
    )
