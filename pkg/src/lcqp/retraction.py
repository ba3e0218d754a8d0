"""Softplus retraction onto the relaxed-complementarity curve s*t = kappa.

For a relaxation parameter kappa > 0, the curve {(s, t) : s > 0, t > 0,
s*t = kappa} is parameterized by a single scalar sigma through

    s = softplus(sigma, kappa),   t = softplus(-sigma, kappa),

where softplus(sigma, kappa) = (sqrt(kappa)/2) * (u + sqrt(u^2 + 4)) with
u = sigma / sqrt(kappa).  Two exact identities make this parameterization
cheap to differentiate and robust at extreme arguments:

    softplus(sigma) * softplus(-sigma) = kappa
    softplus(sigma) - softplus(-sigma) = sigma

Unlike the exponential parameterization s = sqrt(kappa)*exp(sigma), the
gradient of softplus is bounded in (0, 1) and the value grows linearly, so
no overflow occurs for large |sigma|.
"""

import numpy as np

__all__ = [
    "softplus",
    "softplus_deriv",
    "softplus_second_deriv",
    "retract_pair",
    "group_compose",
]

# Above this |sigma|/sqrt(kappa), sqrt(u^2 + 4) == |u| + 2/|u| to full double
# precision and u*u may overflow, so switch to the series form.
_U_LARGE = 1e8

_ONE_MINUS = np.nextafter(1.0, 0.0)
_TINY = np.finfo(float).tiny


def _check_args(sigma, kappa):
    if not np.isscalar(kappa) or not np.isfinite(kappa) or kappa <= 0.0:
        raise ValueError(f"kappa must be a finite positive scalar, got {kappa!r}")
    arr = np.atleast_1d(np.asarray(sigma, dtype=float))
    if not np.all(np.isfinite(arr)):
        raise ValueError("sigma must be finite")
    return arr, np.isscalar(sigma) or np.ndim(sigma) == 0


def softplus(sigma, kappa):
    """Evaluate the scaled softplus p(sigma) = (sqrt(k)/2)(u + sqrt(u^2+4)).

    Accepts scalars or arrays; always returns strictly positive values.
    The u < 0 branch is evaluated in the algebraically equivalent form
    2*sqrt(k) / (-u + sqrt(u^2+4)) to avoid catastrophic cancellation, which
    preserves the product identity p(sigma)*p(-sigma) = kappa out to extreme
    arguments.
    """
    arr, scalar = _check_args(sigma, kappa)
    rk = np.sqrt(kappa)
    u = arr / rk
    au = np.abs(u)
    out = np.empty_like(u)

    small = au < _U_LARGE
    us = u[small]
    root = np.sqrt(us * us + 4.0)
    pos = us >= 0.0
    vals = np.empty_like(us)
    vals[pos] = 0.5 * rk * (us[pos] + root[pos])
    vals[~pos] = 2.0 * rk / (root[~pos] - us[~pos])
    out[small] = vals

    # |u| >= 1e8: sqrt(u^2+4) == |u| + 2/|u| in doubles.
    ul = u[~small]
    aul = np.abs(ul)
    out[~small] = np.where(ul >= 0.0, rk * (aul + 1.0 / aul), rk / (aul + 1.0 / aul))

    return float(out[0]) if scalar else out


def softplus_deriv(sigma, kappa):
    """First derivative p'(sigma) = (1 + u/sqrt(u^2+4))/2, strictly in (0, 1).

    Computed from the cancellation-free factored form on both branches; the
    result is clipped to the nearest representable doubles inside the open
    interval (mathematically it never attains 0 or 1).
    """
    arr, scalar = _check_args(sigma, kappa)
    u = arr / np.sqrt(kappa)
    au = np.abs(u)
    out = np.empty_like(u)

    small = au < _U_LARGE
    us = u[small]
    root = np.sqrt(us * us + 4.0)
    # p' = (root + u) / (2 root); for u < 0 use (root + u)(root - u) = 4.
    pos = us >= 0.0
    vals = np.empty_like(us)
    vals[pos] = 0.5 * (root[pos] + us[pos]) / root[pos]
    vals[~pos] = 2.0 / ((root[~pos] - us[~pos]) * root[~pos])
    out[small] = vals

    ul = u[~small]
    aul = np.abs(ul)
    out[~small] = np.where(ul >= 0.0, 1.0 - 1.0 / (aul * aul), 1.0 / (aul * aul))

    out = np.clip(out, _TINY, _ONE_MINUS)
    return float(out[0]) if scalar else out


def softplus_second_deriv(sigma, kappa):
    """Second derivative p''(sigma) = 2 / (sqrt(k) (u^2+4)^(3/2)).

    Strictly positive and even in sigma.
    """
    arr, scalar = _check_args(sigma, kappa)
    u = arr / np.sqrt(kappa)
    au = np.abs(u)
    out = np.empty_like(u)

    small = au < _U_LARGE
    us = u[small]
    out[small] = 2.0 / (np.sqrt(kappa) * (us * us + 4.0) ** 1.5)
    # Large |u|: (u^2+4)^(3/2) ~= |u|^3; avoid overflow of u*u for huge u.
    aul = au[~small]
    out[~small] = (2.0 / np.sqrt(kappa)) / (aul * aul * aul)

    return float(out[0]) if scalar else out


def retract_pair(sigma, kappa):
    """Map sigma (elementwise) onto the curve: (s, t) with s*t = kappa.

    Returns (softplus(sigma, kappa), softplus(-sigma, kappa)).  The product
    s_i * t_i = kappa and difference s_i - t_i = sigma_i hold to relative
    rounding error.
    """
    arr, _ = _check_args(sigma, kappa)
    return softplus(arr, kappa), softplus(-arr, kappa)


def group_compose(a, b, kappa, rtol=1e-6):
    """Compose two on-curve pairs by scaled elementwise multiplication.

    (s_a, t_a) o (s_b, t_b) = (s_a*s_b/sqrt(k), t_a*t_b/sqrt(k)).  Both
    inputs must satisfy s*t = kappa to relative tolerance ``rtol``; the
    result then lies on the curve again.  The identity element is
    (sqrt(k), sqrt(k)) and the inverse of (s, t) is (t, s).
    """
    if not np.isscalar(kappa) or not np.isfinite(kappa) or kappa <= 0.0:
        raise ValueError(f"kappa must be a finite positive scalar, got {kappa!r}")
    for pair in (a, b):
        s, t = pair
        if abs(s * t - kappa) > rtol * kappa:
            raise ValueError(f"pair {pair!r} is off the manifold s*t = {kappa}")
    rk = np.sqrt(kappa)
    return (a[0] * b[0] / rk, a[1] * b[1] / rk)
