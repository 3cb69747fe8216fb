"""Scalar special functions: log-gamma, the Binet remainder, Beta and its
normalized variant, the Lambert W function, and the logarithm-power ratio.

All closed-form constants in this package reduce to these primitives, so
they are implemented from scratch and cross-checked in the test suite
against independent references.

Conventions
-----------
ln_gamma(x)   log Gamma(x) for x > 0.

theta(x)      remainder in Binet's formula,
                  log Gamma(x) = (x - 1/2) log x - x + (1/2) log(2 pi) + theta(x),
              which is positive, convex and decreasing, with theta(x) -> 0
              as x -> infinity.

beta_tilde    B~(a, b) = B(a, b) (a+b)^(a+b) a^(-a) b^(-b).

kappa(t)      sup_{u > 0} log(1 + u) / u^t for t in (0, 1], attained at the
              unique positive fixed point of u = t (1 + u) log(1 + u).
"""

import math

from .errors import DomainError

LOG_2PI = math.log(2.0 * math.pi)

# Lanczos coefficients, g = 7, 9 terms (Godfrey).  Relative accuracy of the
# resulting gamma approximation is ~1e-14 on the positive axis.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# Stirling / Binet series coefficients B_{2n} / ((2n)(2n-1)), used as
# theta(x) ~ sum c_n / x^(2n-1).  Nine terms keep the truncation error
# below 1e-17 for x >= 10.
_BINET_COEF = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
)


def _theta_series(x: float) -> float:
    """Binet remainder from the asymptotic series; accurate for x >= 10."""
    inv2 = 1.0 / (x * x)
    acc = 0.0
    term = 1.0 / x
    for c in _BINET_COEF:
        acc += c * term
        term *= inv2
    return acc


def _ln_gamma_lanczos(x: float) -> float:
    """Lanczos evaluation for 0.5 <= x < 10."""
    acc = _LANCZOS[0]
    for k in range(1, len(_LANCZOS)):
        acc += _LANCZOS[k] / (x - 1.0 + k)
    t = x + _LANCZOS_G - 0.5
    return 0.5 * LOG_2PI + (x - 0.5) * math.log(t) - t + math.log(acc)


def ln_gamma(x: float) -> float:
    """log Gamma(x) for x > 0.

    Uses a Lanczos rational approximation below 10 (with Euler's reflection
    formula below 1/2) and the Stirling series with Bernoulli-number
    corrections at and above 10.

    Raises DomainError for x <= 0 or non-finite x.
    """
    x = float(x)
    if not x > 0.0 or math.isinf(x):
        raise DomainError(f"ln_gamma requires finite x > 0, got {x!r}")
    if x >= 10.0:
        return (x - 0.5) * math.log(x) - x + 0.5 * LOG_2PI + _theta_series(x)
    if x < 0.5:
        # log Gamma(x) = log(pi / sin(pi x)) - log Gamma(1 - x)
        return math.log(math.pi / math.sin(math.pi * x)) - _ln_gamma_lanczos(1.0 - x)
    return _ln_gamma_lanczos(x)


def theta(x: float) -> float:
    """Remainder theta(x) in Binet's formula for log Gamma.

    For x >= 10 the asymptotic series is used directly; subtracting the
    Stirling main term from ln_gamma would cancel nearly all significant
    digits there (theta(1e6) ~ 8e-8 against terms of size 1e7).
    """
    x = float(x)
    if not x > 0.0 or math.isinf(x):
        raise DomainError(f"theta requires finite x > 0, got {x!r}")
    if x >= 10.0:
        return _theta_series(x)
    return ln_gamma(x) - (x - 0.5) * math.log(x) + x - 0.5 * LOG_2PI


def log_beta(x: float, y: float) -> float:
    """log B(x, y) = log Gamma(x) + log Gamma(y) - log Gamma(x + y)."""
    if not (x > 0.0 and y > 0.0):
        raise DomainError(f"log_beta requires x, y > 0, got ({x!r}, {y!r})")
    return ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y)


def beta(x: float, y: float) -> float:
    """Beta function B(x, y) for x, y > 0."""
    return math.exp(log_beta(x, y))


def log_beta_tilde(x: float, y: float) -> float:
    """log of B~(x, y) = B(x, y) (x+y)^(x+y) x^(-x) y^(-y), in log space."""
    if not (x > 0.0 and y > 0.0):
        raise DomainError(f"log_beta_tilde requires x, y > 0, got ({x!r}, {y!r})")
    s = x + y
    return log_beta(x, y) + s * math.log(s) - x * math.log(x) - y * math.log(y)


def beta_tilde(x: float, y: float) -> float:
    """Normalized Beta function B~(x, y); satisfies B~(x, y) >= (x+y)/(x y)."""
    return math.exp(log_beta_tilde(x, y))


# ---------------------------------------------------------------------------
# Lambert W, principal branch
# ---------------------------------------------------------------------------

# Taylor coefficients of W around the branch point in p = sqrt(2 (1 + e z)).
_BRANCH_SERIES = (-1.0, 1.0, -1.0 / 3.0, 11.0 / 72.0, -43.0 / 540.0,
                  769.0 / 17280.0, -221.0 / 8505.0)


def lambert_w0(z: float) -> float:
    """Principal branch W_0 of the Lambert W function for z >= -1/e.

    Returns the solution w >= -1 of w exp(w) = z.  Halley iteration from a
    piecewise initial guess; near the branch point the series in
    p = sqrt(2 (1 + e z)) is used, both as the guess and (for tiny p) as
    the result, since the iteration loses its footing where W'(z) blows up.

    The residual satisfies |w exp(w) - z| <= 1e-12 * max(1, |z|).
    """
    z = float(z)
    if math.isnan(z):
        raise DomainError("lambert_w0 requires z >= -1/e, got nan")
    ez1 = 1.0 + math.e * z        # >= 0 on the domain, up to rounding
    if ez1 < 0.0:
        if ez1 > -1e-12:
            ez1 = 0.0
        else:
            raise DomainError(f"lambert_w0 requires z >= -1/e, got {z!r}")
    if ez1 == 0.0:
        return -1.0

    p = math.sqrt(2.0 * ez1)
    if p < 1e-4:
        # So close to the branch point that the series is already at
        # full double precision.
        w = 0.0
        for c in reversed(_BRANCH_SERIES):
            w = w * p + c
        return w

    # Initial guess.
    if z < -0.25:
        w = 0.0
        for c in reversed(_BRANCH_SERIES):
            w = w * p + c
    elif z < 1.0:
        # Pade-flavoured guess, good to a few percent on (-0.25, 1).
        w = z * (1.0 - z * (1.0 - 1.5 * z) / (1.0 + z))
    else:
        lz = math.log(z)
        llz = math.log(lz) if lz > 1.0 else 0.0
        w = lz - llz

    for _ in range(64):
        ew = math.exp(w)
        f = w * ew - z
        w1 = w + 1.0
        # Halley step: f / (f' - f f'' / (2 f'))
        denom = ew * w1 - (w + 2.0) * f / (2.0 * w1)
        step = f / denom
        w -= step
        if abs(step) <= 1e-14 * max(1.0, abs(w)):
            break
    return w


# ---------------------------------------------------------------------------
# Logarithm-power ratio kappa(t)
# ---------------------------------------------------------------------------


def _fixed_point_v(t: float) -> float:
    """Solve exp(-v) = 1 - t v for the positive root v in (0, 1/t).

    Substituting v = log(1 + u) turns the maximizer equation
    u = t (1 + u) log(1 + u) into this form, which stays well inside
    double range even as t -> 0 where u itself overflows (u ~ e^(1/t)).

    F(v) = exp(-v) - 1 + t v is convex with F(1/t) > 0, so Newton from
    v = 1/t decreases monotonically to the root; a bisection safeguard
    keeps the iterate inside the bracket regardless.
    """
    lo, hi = 0.0, 1.0 / t
    v = hi
    for _ in range(200):
        f = math.exp(-v) - 1.0 + t * v
        if f > 0.0:
            hi = v
        else:
            lo = v
        df = t - math.exp(-v)
        step = f / df
        v_new = v - step
        if not (lo < v_new < hi):
            v_new = 0.5 * (lo + hi)
        if abs(v_new - v) <= 1e-16 * max(1.0, v):
            v = v_new
            break
        v = v_new
    return v


def _check_t(t: float) -> float:
    t = float(t)
    if not (0.0 < t <= 1.0):
        raise DomainError(f"kappa requires t in (0, 1], got {t!r}")
    return t


def kappa_fixed_point(t: float) -> float:
    """The maximizer u*_t of log(1 + u) / u^t, for t in (0, 1).

    Solves u = t (1 + u) log(1 + u).  Returns inf when u*_t ~ e^(1/t)
    exceeds double range (t below roughly 1.4e-3); kappa(t) itself stays
    finite and is computed from log(1 + u*) instead.
    """
    t = _check_t(t)
    if t == 1.0:
        raise DomainError("the fixed point diverges to 0/0 at t = 1")
    v = _fixed_point_v(t)
    return math.expm1(v) if v < 709.0 else math.inf


def kappa(t: float) -> float:
    """kappa(t) = sup_{u > 0} log(1 + u) / u^t on (0, 1]; kappa(1) = 1.

    At the fixed point, with v = log(1 + u*), the value simplifies to
    v exp(-t v) (t v)^(-t) because 1 - exp(-v) = t v there.  Satisfies
    1/(e t) < kappa(t) <= 1/t, and t kappa(t) is nondecreasing from 1/e
    to 1.
    """
    t = _check_t(t)
    if t == 1.0:
        return 1.0
    v = _fixed_point_v(t)
    return v * math.exp(-t * v - t * math.log(t * v))


def kappa_via_lambert(t: float) -> float:
    """kappa(t) through the closed form u*_t = exp(W(-(1/t) e^(-1/t)) + 1/t) - 1.

    Independent of the Newton route in kappa(); used as a cross-check.
    Loses accuracy as t -> 1 (the W argument approaches the branch point)
    and overflows for t small enough that u*_t does; prefer kappa().
    """
    t = _check_t(t)
    if t == 1.0:
        return 1.0
    arg = -(1.0 / t) * math.exp(-1.0 / t)
    u = math.expm1(lambert_w0(arg) + 1.0 / t)
    return math.log1p(u) / u**t
