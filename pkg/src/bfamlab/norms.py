"""Discrete Sobolev, Gevrey, Himonas-Misiolek, and Kato-Masuda functionals.

All norms discretize frequency integrals as L-weighted sums over grid modes,
consistent with the series-coefficient transform convention:

    sobolev_norm(u, s)        = ( L sum_k (1+xi^2)^s |u_hat|^2 )^{1/2}
    gevrey_norm(u, sigma, s)  = ( L sum_k e^{2 sigma |xi|} (1+xi^2)^s |u_hat|^2 )^{1/2}
    hm_norm(u, sigma, m)      = sup_j sigma^j (j+1)^2 / j! * |d^j u|_{H^{2m}}
    km_phi(u, sigma, m)       = 1/2 sum_{j=0}^m e^{2 sigma j} / (j!)^2 * |d^j u|^2_{H^2}

Factorially weighted sums are evaluated in log space (j! overflows doubles at
j = 171). Modes whose amplitude sits below the round-off floor, |u_hat| below
1e-13 * max|u_hat|, are excluded from the weighted sums: high-order spectral
derivatives amplify round-off by |xi|^j and would otherwise masquerade as
norm growth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import logsumexp

from .errors import ConfigurationError, TruncationError
from .grid import RealField, dft

ROUNDOFF_FLOOR = 1e-13
TAIL_RTOL = 1e-16
_LOG_TAIL = math.log(TAIL_RTOL)
DEFAULT_J_MAX = 200


@dataclass(frozen=True)
class NormParams:
    """Bundle of norm parameters: strip width sigma, Sobolev index s,
    derivative-count index m, and the truncation budget j_max."""

    sigma: float
    s: float = 2.0
    m: int = 2
    j_max: int = DEFAULT_J_MAX

    def __post_init__(self):
        if self.j_max < 1:
            raise ConfigurationError(f"j_max must be >= 1, got {self.j_max}")
        if self.m < 0:
            raise ConfigurationError(f"m must be >= 0, got {self.m}")


class GevreyNorm(NamedTuple):
    """Truncated Gevrey norm plus a structural divergence verdict."""

    value: float
    diverged: bool


def _log_spectrum(u: RealField):
    """(xi, log|u_hat|) over modes above the round-off floor; None if u == 0."""
    amp = np.abs(dft(u).coeffs)
    peak = float(amp.max())
    if peak == 0.0:
        return None
    usable = amp > ROUNDOFF_FLOOR * peak
    return u.grid.xi[usable], np.log(amp[usable])


def sobolev_norm(u: RealField, s: float) -> float:
    """H^s norm, ( L sum_k (1+xi^2)^s |u_hat|^2 )^{1/2}."""
    u_hat = dft(u)
    weights = (1.0 + u.grid.xi**2) ** s
    return float(
        np.sqrt(u.grid.box_length * np.sum(weights * np.abs(u_hat.coeffs) ** 2))
    )


def gevrey_norm(u: RealField, sigma: float, s: float) -> GevreyNorm:
    """Gevrey norm with weight e^{2 sigma |xi|}; sigma = 0 recovers sobolev_norm.

    A truncated mode sum is always finite, so divergence (sigma beyond the
    field's resolvable decay rate) is inferred structurally: the flag is set
    when the weighted per-|k| terms grow over the last quarter of the
    above-floor spectrum.
    """
    if sigma < 0:
        raise ConfigurationError(f"sigma must be >= 0, got {sigma}")
    spectrum = _log_spectrum(u)
    if spectrum is None:
        return GevreyNorm(0.0, False)
    xi, log_amp = spectrum
    log_terms = 2.0 * sigma * np.abs(xi) + s * np.log1p(xi**2) + 2.0 * log_amp
    total = logsumexp(log_terms) + math.log(u.grid.box_length)
    with np.errstate(over="ignore"):
        value = float(np.exp(0.5 * total))
    return GevreyNorm(value, _tail_growing(xi, log_terms))


def _tail_growing(xi: np.ndarray, log_terms: np.ndarray) -> bool:
    """Least-squares slope of log term vs |xi| over the last quarter of the
    distinct resolved |k| values is positive."""
    abs_xi = np.abs(xi)
    positive = abs_xi > 0
    if not np.any(positive):
        return False
    # combine the +-k contributions of each distinct |xi|
    distinct, inverse = np.unique(abs_xi[positive], return_inverse=True)
    combined = np.full(distinct.size, -math.inf)
    for idx, term in zip(inverse, log_terms[positive]):
        combined[idx] = np.logaddexp(combined[idx], term)
    n = distinct.size
    if n < 8:
        return False
    start = (3 * n) // 4
    if n - start < 4:
        return False
    slope = np.polyfit(distinct[start:], combined[start:], 1)[0]
    return bool(slope > 0)


def _log_derivative_norm(base: np.ndarray, log_abs_xi: np.ndarray, j: int) -> float:
    """log of ( sum over modes of base-weight * |xi|^{2j} )^{1/2}.

    `base` already carries log L, the Sobolev weight, and 2 log|u_hat|;
    entries with xi = 0 must be removed from `base` for j >= 1 (their
    log|xi| is -inf).
    """
    if base.size == 0:
        return -math.inf
    if j == 0:
        return 0.5 * float(logsumexp(base))
    return 0.5 * float(logsumexp(base + 2.0 * j * log_abs_xi))


def hm_norm(u: RealField, sigma: float, m: int, j_max: int = DEFAULT_J_MAX) -> float:
    """sup over j of sigma^j (j+1)^2 / j! * |d^j u|_{H^{2m}}, in log space.

    The sup is truncated once three consecutive terms fall below 1e-16 of
    the running sup; if that never happens within j_max terms the norm is
    not resolvable at this resolution and a TruncationError is raised.
    """
    if sigma <= 0:
        raise ConfigurationError(f"sigma must be > 0, got {sigma}")
    if m < 2:
        raise ConfigurationError(f"m must be an integer >= 2, got {m}")
    if j_max < 1:
        raise ConfigurationError(f"j_max must be >= 1, got {j_max}")
    spectrum = _log_spectrum(u)
    if spectrum is None:
        return 0.0
    xi, log_amp = spectrum
    log_l = math.log(u.grid.box_length)
    base = log_l + 2.0 * m * np.log1p(xi**2) + 2.0 * log_amp
    nonzero = xi != 0
    base_nz = base[nonzero]
    log_abs_xi = np.log(np.abs(xi[nonzero]))
    log_sigma = math.log(sigma)

    log_sup = -math.inf
    below = 0
    for j in range(j_max + 1):
        log_norm_j = _log_derivative_norm(base if j == 0 else base_nz, log_abs_xi, j)
        log_term = j * log_sigma + 2.0 * math.log(j + 1) - math.lgamma(j + 1) + log_norm_j
        log_sup = max(log_sup, log_term)
        if log_term < log_sup + _LOG_TAIL:
            below += 1
            if below == 3:
                return math.exp(log_sup)
        else:
            below = 0
    raise TruncationError(
        f"hm_norm terms have not decayed below {TAIL_RTOL:g} of the sup by j = {j_max}; "
        "sigma exceeds the decay rate resolvable on this grid"
    )


def km_phi(u: RealField, sigma: float, m: int) -> float:
    """Kato-Masuda functional, 1/2 sum_{j<=m} e^{2 sigma j}/(j!)^2 |d^j u|^2_{H^2}.

    Any real sigma is admitted. m = 0 reduces to half the squared H^2 norm.
    """
    if m < 0:
        raise ConfigurationError(f"m must be a non-negative integer, got {m}")
    spectrum = _log_spectrum(u)
    if spectrum is None:
        return 0.0
    xi, log_amp = spectrum
    base = math.log(u.grid.box_length) + 2.0 * np.log1p(xi**2) + 2.0 * log_amp
    nonzero = xi != 0
    base_nz = base[nonzero]
    log_abs_xi = np.log(np.abs(xi[nonzero]))
    log_terms = [
        2.0 * sigma * j
        - 2.0 * math.lgamma(j + 1)
        + 2.0 * _log_derivative_norm(base if j == 0 else base_nz, log_abs_xi, j)
        for j in range(m + 1)
    ]
    return 0.5 * float(np.exp(logsumexp(log_terms)))


def km_radius_norm(u: RealField, sigma: float, j_max: int = DEFAULT_J_MAX) -> float:
    """The m -> infinity limit norm ( 2 * km_phi )^{1/2}.

    The factorial weights guarantee eventual convergence; the sum stops when
    three consecutive terms fall below 1e-16 of the running total, and raises
    TruncationError if that does not happen within j_max terms (the field is
    not in the strip class at this sigma and resolution).
    """
    if j_max < 1:
        raise ConfigurationError(f"j_max must be >= 1, got {j_max}")
    spectrum = _log_spectrum(u)
    if spectrum is None:
        return 0.0
    xi, log_amp = spectrum
    base = math.log(u.grid.box_length) + 2.0 * np.log1p(xi**2) + 2.0 * log_amp
    nonzero = xi != 0
    base_nz = base[nonzero]
    log_abs_xi = np.log(np.abs(xi[nonzero]))

    total = -math.inf
    below = 0
    for j in range(j_max + 1):
        log_term = (
            2.0 * sigma * j
            - 2.0 * math.lgamma(j + 1)
            + 2.0 * _log_derivative_norm(base if j == 0 else base_nz, log_abs_xi, j)
        )
        total = np.logaddexp(total, log_term)
        if log_term - total < _LOG_TAIL:
            below += 1
            if below == 3:
                return float(np.exp(0.5 * total))
        else:
            below = 0
    raise TruncationError(
        f"km_radius_norm tail has not fallen below {TAIL_RTOL:g} by j = {j_max}"
    )
