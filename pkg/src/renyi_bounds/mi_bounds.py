"""Mutual-information upper bounds from the variance of the conditional
density.

For a pair (X, Y) whose conditional law has density f(y|x), the bounds
are driven by

    var(f(y|X)) = E[(f(y|X) - f(y))^2],
    V_s(Y|X)    = int |y|^s var(f(y|X)) dy,

and the kernel K_s(x1, x2) = int |y|^s f(y|x1) f(y|x2) dy, through which
V_s(Y|X) = E[K_s(X, X) - K_s(X1, X2)] for independent copies X1, X2.

Two channel shapes are implemented, both with unit Gaussian noise W:

    AwgnChannel:          Y = X + W
    ScaleMixtureChannel:  X = A sqrt(U), A ~ N(0,1), U >= 0,  Y = X + W

For the scale mixture everything reduces to expectations over U (or
pairs U1, U2), evaluated as exact finite sums for atomic mixing laws --
the figure-3 sweep is therefore free of Monte Carlo noise -- and by
seeded Monte Carlo otherwise.  Densities enter the quadrature integrands
only through their logarithms, clipped at the exp underflow boundary, so
the heavy-tailed ratios in the chi-square and small-t bounds cannot
produce NaNs.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .distributions import GenericPdf, ScalarDistribution, iid_pair_sampler
from .errors import DomainError, InvalidMomentOrder, RenyiBoundsError, UnsupportedOperation
from .moment_core import Support, log_omega, psi_half_closed
from .quadrature import Domain, NumericsConfig, integrate, mc_expect
from .specfun import LOG_2PI, kappa, ln_gamma

__all__ = [
    "AwgnChannel",
    "ScaleMixtureChannel",
    "VsValue",
    "kernel_Ks",
    "V_s",
    "V_s_quadrature",
    "chi2_divergence",
    "chi2_mi_bound",
    "prop7_bound",
    "prop8_bound",
    "prop9_bound",
    "prop9_constant",
    "mi_oracle",
    "vs_upper_bound_check",
    "variance_model",
    "marginal_renyi_entropy",
]

_FULL = Domain.full_line()
_EXP_CLIP = -745.0  # exp() underflows to 0 below this
_LOG_2SQRTPI = math.log(2.0) + 0.5 * math.log(math.pi)


def _log_npdf(y, var):
    return -0.5 * y * y / var - 0.5 * (LOG_2PI + np.log(var))


@dataclass(frozen=True)
class AwgnChannel:
    """Y = X + W with W ~ N(0, 1) independent of the input X."""

    input: ScalarDistribution
    kind = "awgn"
    n = 1

    def support_y(self) -> Support:
        return Support.real_line()


@dataclass(frozen=True)
class ScaleMixtureChannel:
    """Y = X + W with X = A sqrt(U): a Gaussian scalar mixture input.

    U -> X -> Y is a Markov chain, so bounds can target either I(X; Y)
    (given="X") or I(U; Y) (given="U")."""

    mixing: ScalarDistribution
    kind = "scale_mixture"
    n = 1

    def support_y(self) -> Support:
        return Support.real_line()


@dataclass(frozen=True)
class VsValue:
    """One V_s evaluation; standard_error only for Monte Carlo results."""

    s: float
    value: float
    method: str  # closed_form | quadrature | monte_carlo
    standard_error: Optional[float] = None


# ---------------------------------------------------------------------------
# Conditional-variance models: log f(y), log var(f(y|W)) pointwise
# ---------------------------------------------------------------------------


class _AtomicConditionals:
    """Finite mixture of Gaussian conditionals N(mu_i, var_i) with weights."""

    def __init__(self, probs, means, variances):
        self.probs = np.asarray(probs, dtype=float)
        self.means = np.asarray(means, dtype=float)
        self.vars = np.asarray(variances, dtype=float)
        self.log_probs = np.log(self.probs)

    def log_cond(self, y):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        return _log_npdf(y[None, :] - self.means[:, None], self.vars[:, None])

    def log_marginal(self, y):
        lc = self.log_cond(y) + self.log_probs[:, None]
        m = lc.max(axis=0)
        return m + np.log(np.exp(lc - m).sum(axis=0))

    def log_var(self, y):
        # Scaled mixture variance: factor out the largest conditional so
        # the squared deviations never underflow prematurely.
        lc = self.log_cond(y)
        m = lc.max(axis=0)
        scaled = np.exp(lc - m)
        mean = self.probs @ scaled
        var = self.probs @ (scaled - mean) ** 2
        with np.errstate(divide="ignore"):
            return 2.0 * m + np.log(var)


class _ScaleMixtureGivenX:
    """var(f(y|X)) for X = A sqrt(U) with atomic U, via the closed forms

        f(y)          = E_U N(y; 0, 1 + U)
        E[f(y|X)^2]   = (2 sqrt(pi))^-1 E_U N(y; 0, 1/2 + U).
    """

    def __init__(self, probs, us):
        self.probs = np.asarray(probs, dtype=float)
        self.us = np.asarray(us, dtype=float)
        self.log_probs = np.log(self.probs)

    def _log_mix(self, y, variances):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        lc = _log_npdf(y[None, :], variances[:, None]) + self.log_probs[:, None]
        m = lc.max(axis=0)
        return m + np.log(np.exp(lc - m).sum(axis=0))

    def log_marginal(self, y):
        return self._log_mix(y, 1.0 + self.us)

    def log_var(self, y):
        lm2 = self._log_mix(y, 0.5 + self.us) - _LOG_2SQRTPI
        diff = 2.0 * self.log_marginal(y) - lm2  # <= 0 by Jensen
        with np.errstate(divide="ignore", invalid="ignore"):
            out = lm2 + np.log1p(-np.exp(np.minimum(diff, 0.0)))
        return np.where(diff >= -1e-15, -np.inf, out)


class _GenericAwgnConditionals:
    """Marginal and second moment of f(y|X) by inner quadrature, for a
    generic (non-atomic) input density.  Slow path: one adaptive inner
    integral per requested y."""

    def __init__(self, pdf_dist: GenericPdf, cfg: NumericsConfig):
        self.dist = pdf_dist
        self.cfg = cfg

    def _log_inner(self, y, power):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        out = np.empty_like(y)
        for i, yi in enumerate(y):
            def f(x):
                return np.exp(
                    np.maximum(power * _log_npdf(yi - x, 1.0), _EXP_CLIP)
                ) * self.dist.pdf(x)

            val = integrate(f, self.dist.domain, self.cfg).value
            out[i] = math.log(val) if val > 0.0 else -math.inf
        return out

    def log_marginal(self, y):
        return self._log_inner(y, 1.0)

    def log_var(self, y):
        lm2 = self._log_inner(y, 2.0)
        lm = self.log_marginal(y)
        out = np.full_like(lm2, -np.inf)
        with np.errstate(invalid="ignore"):
            diff = 2.0 * lm - lm2
            ok = np.isfinite(lm2) & (diff < -1e-13)
        out[ok] = lm2[ok] + np.log1p(-np.exp(diff[ok]))
        return out


def _given(ch, given: str) -> str:
    if given not in ("X", "U"):
        raise DomainError(f"given must be 'X' or 'U', got {given!r}")
    if ch.kind == "awgn" and given != "X":
        raise UnsupportedOperation("an AWGN channel has no mixing variable U")
    return given


def variance_model(ch, given: str = "X", cfg: NumericsConfig = NumericsConfig()):
    """Pointwise model of (log f(y), log var(f(y|W))) for W = X or U."""
    given = _given(ch, given)
    if ch.kind == "awgn":
        if ch.input.is_discrete:
            atoms, probs = ch.input.atoms_and_probs()
            return _AtomicConditionals(probs, atoms, np.ones_like(atoms))
        if isinstance(ch.input, GenericPdf):
            return _GenericAwgnConditionals(ch.input, cfg)
        raise UnsupportedOperation(
            f"AWGN input family {type(ch.input).__name__} has no variance model"
        )
    if not ch.mixing.is_discrete:
        raise UnsupportedOperation(
            "pointwise variance needs an atomic mixing law; "
            "use V_s with Monte Carlo for continuous U"
        )
    us, probs = ch.mixing.atoms_and_probs()
    if given == "U":
        return _AtomicConditionals(probs, np.zeros_like(us), 1.0 + us)
    return _ScaleMixtureGivenX(probs, us)


# ---------------------------------------------------------------------------
# Kernel and V_s
# ---------------------------------------------------------------------------


def _abs_moment_shifted_normal(s: float, m: float, cfg: NumericsConfig) -> float:
    """E|W + m|^s for W ~ N(0,1), by quadrature against the normal density."""

    def f(t):
        if s == 0.0:
            amp = 0.0
        else:
            with np.errstate(divide="ignore"):
                amp = np.where(t != 0.0, s * np.log(np.abs(t)), -np.inf)
        return np.exp(np.maximum(amp + _log_npdf(t - m, 1.0), _EXP_CLIP))

    return integrate(f, _FULL, cfg).value


def kernel_Ks(ch, x1: float, x2: float, s: float, cfg: NumericsConfig = NumericsConfig()) -> float:
    """Expected-likelihood-style kernel K_s(x1, x2) = int |y|^s f(y|x1) f(y|x2) dy
    for the AWGN channel, via the factorization

        K_s = 2^(-(1+s)/2) E|W + (x1+x2)/sqrt(2)|^s * phi((x1-x2)/sqrt(2)).

    The absolute moment is evaluated by quadrature rather than through
    confluent-hypergeometric closed forms; one oracle path, no formula
    transcription to get wrong.
    """
    if ch.kind != "awgn":
        raise UnsupportedOperation("K_s applies to the AWGN channel")
    if s < 0.0:
        raise DomainError(f"s must be nonnegative, got {s!r}")
    mom = _abs_moment_shifted_normal(s, (x1 + x2) / math.sqrt(2.0), cfg)
    log_phi = _log_npdf((x1 - x2) / math.sqrt(2.0), 1.0)
    return math.exp(-0.5 * (1.0 + s) * math.log(2.0) + math.log(mom) + log_phi)


def _clip_negative(value: float, scale: float, se: Optional[float]) -> float:
    if value >= 0.0:
        return value
    tol = 4.0 * se if se else 1e-13 * max(scale, 1e-300)
    if -value <= tol:
        return 0.0
    raise RenyiBoundsError(f"V_s produced a negative value {value!r} beyond noise")


def _vs_scale_mixture(mixing, s, given, cfg, stream):
    coef = math.exp(ln_gamma(0.5 * (1.0 + s))) / (2.0 * math.pi)

    def first(u):
        if given == "U":
            return (1.0 + u) ** (0.5 * (s - 1.0))
        return (1.0 + 2.0 * u) ** (0.5 * s)

    def cross(u1, u2):
        num = (1.0 + u1) ** (0.5 * s) * (1.0 + u2) ** (0.5 * s)
        return num / (1.0 + 0.5 * (u1 + u2)) ** (0.5 * (s + 1.0))

    if mixing.is_discrete:
        us, probs = mixing.atoms_and_probs()
        t1 = float(probs @ first(us))
        t2 = float(probs @ (cross(us[:, None], us[None, :]) @ probs))
        value = _clip_negative(coef * (t1 - t2), coef * t1, None)
        return VsValue(s, value, "closed_form")

    res = mc_expect(
        lambda uu: first(uu[0]) - cross(uu[0], uu[1]),
        iid_pair_sampler(mixing),
        cfg,
        stream=stream,
    )
    value = _clip_negative(coef * res.value, coef, coef * res.standard_error)
    return VsValue(s, value, "monte_carlo", coef * res.standard_error)


def _vs_awgn(input_dist, s, cfg, stream):
    if s == 0.0:
        coef = 1.0 / (2.0 * math.sqrt(math.pi))
        if input_dist.is_discrete:
            xs, probs = input_dist.atoms_and_probs()
            e = float(probs @ (np.exp(-0.25 * (xs[:, None] - xs[None, :]) ** 2) @ probs))
            value = _clip_negative(coef * (1.0 - e), coef, None)
            return VsValue(s, value, "closed_form")
        res = mc_expect(
            lambda xx: 1.0 - np.exp(-0.25 * (xx[0] - xx[1]) ** 2),
            iid_pair_sampler(input_dist),
            cfg,
            stream=stream,
        )
        value = _clip_negative(coef * res.value, coef, coef * res.standard_error)
        return VsValue(s, value, "monte_carlo", coef * res.standard_error)

    if not input_dist.is_discrete:
        raise UnsupportedOperation("AWGN V_s with s > 0 needs an atomic input law")
    xs, probs = input_dist.atoms_and_probs()
    ch = AwgnChannel(input_dist)
    k_diag = sum(p * kernel_Ks(ch, x, x, s, cfg) for x, p in zip(xs, probs))
    k_cross = sum(
        p1 * p2 * kernel_Ks(ch, x1, x2, s, cfg)
        for x1, p1 in zip(xs, probs)
        for x2, p2 in zip(xs, probs)
    )
    value = _clip_negative(k_diag - k_cross, k_diag, None)
    return VsValue(s, value, "quadrature")


def V_s(
    ch,
    s: float,
    given: str = "X",
    cfg: NumericsConfig = NumericsConfig(),
    stream: int = 0,
) -> VsValue:
    """The s-th moment of the variance of the conditional density.

    Scale mixtures use the explicit U-expectations

      given X: G((1+s)/2)/(2 pi) E[(1+2U)^(s/2) - cross(U1, U2)]
      given U: G((1+s)/2)/(2 pi) E[(1+U)^((s-1)/2) - cross(U1, U2)]
      cross   = (1+U1)^(s/2) (1+U2)^(s/2) / (1 + (U1+U2)/2)^((s+1)/2),

    exactly for atomic U and by seeded Monte Carlo (with standard error)
    otherwise.  The AWGN channel uses the s = 0 closed form
    (2 sqrt(pi))^-1 [1 - E exp(-(X1-X2)^2 / 4)], or kernel sums for
    s > 0 over atomic inputs.
    """
    if s < 0.0:
        raise DomainError(f"s must be nonnegative, got {s!r}")
    given = _given(ch, given)
    if ch.kind == "scale_mixture":
        return _vs_scale_mixture(ch.mixing, s, given, cfg, stream)
    return _vs_awgn(ch.input, s, cfg, stream)


def V_s_quadrature(
    ch,
    s: float,
    given: str = "X",
    cfg: NumericsConfig = NumericsConfig(),
    scale: float = 1.0,
) -> float:
    """Direct integral int |y|^s var(f(y|W)) dy for the (optionally scaled)
    output scale * Y; the independent route used to validate the kernel
    decomposition and the |a|^(s-n) scaling law."""
    if scale == 0.0:
        raise DomainError("scale must be nonzero")
    model = variance_model(ch, given, cfg)
    a = abs(scale)

    def integrand(y):
        lv = model.log_var(np.asarray(y) / a) - 2.0 * math.log(a)
        if s == 0.0:
            amp = 0.0
        else:
            with np.errstate(divide="ignore"):
                amp = np.where(y != 0.0, s * np.log(np.abs(y)), -np.inf)
        return np.exp(np.maximum(amp + lv, _EXP_CLIP))

    return integrate(integrand, _FULL, cfg).value


# ---------------------------------------------------------------------------
# Bounds and the oracle
# ---------------------------------------------------------------------------


def chi2_divergence(ch, given: str = "X", cfg: NumericsConfig = NumericsConfig()) -> float:
    """chi^2(P_{W,Y}, P_W x P_Y) = int var(f(y|W)) / f(y) dy."""
    model = variance_model(ch, given, cfg)

    def integrand(y):
        lv = model.log_var(y)
        with np.errstate(invalid="ignore"):
            z = np.where(lv == -np.inf, -np.inf, lv - model.log_marginal(y))
        return np.exp(np.maximum(z, _EXP_CLIP))

    return integrate(integrand, _FULL, cfg).value


def chi2_mi_bound(ch, given: str = "X", cfg: NumericsConfig = NumericsConfig()) -> float:
    """I(W; Y) <= log(1 + chi^2): the baseline every other bound competes with."""
    return math.log1p(chi2_divergence(ch, given, cfg))


def prop7_bound(
    ch, t: float, given: str = "X", cfg: NumericsConfig = NumericsConfig()
) -> float:
    """kappa(t) int f(y)^(1-2t) var(f(y|W))^t dy for t in (0, 1].

    t = 1 reproduces the chi-square integral (kappa(1) = 1); t = 1/2 is
    the integral of sqrt(var) that feeds the two-moment MI bound.  The
    integrand is assembled in log space: f(y)^(1-2t) alone overflows in
    the tails for t > 1/2 while the variance factor vanishes faster.
    """
    if not 0.0 < t <= 1.0:
        raise DomainError(f"t must lie in (0, 1], got {t!r}")
    model = variance_model(ch, given, cfg)

    def integrand(y):
        lv = model.log_var(y)
        with np.errstate(invalid="ignore"):
            z = np.where(
                lv == -np.inf, -np.inf, (1.0 - 2.0 * t) * model.log_marginal(y) + t * lv
            )
        return np.exp(np.maximum(z, _EXP_CLIP))

    return kappa(t) * integrate(integrand, _FULL, cfg).value


def marginal_renyi_entropy(ch, r: float, cfg: NumericsConfig = NumericsConfig()) -> float:
    """h_r(Y) of the channel output, by quadrature of f(y)^r."""
    if not 0.0 < r < 1.0:
        raise DomainError(f"r must lie in (0, 1), got {r!r}")
    model = variance_model(ch, "X", cfg)

    def integrand(y):
        return np.exp(np.maximum(r * model.log_marginal(y), _EXP_CLIP))

    val = integrate(integrand, _FULL, cfg).value
    return math.log(val) / (1.0 - r)


def prop8_bound(
    ch, r: float, given: str = "X", cfg: NumericsConfig = NumericsConfig()
) -> float:
    """kappa(t) (e^{h_r(Y)} V_0(Y|W))^t with t = (1-r)/(2-r), r in (0, 1)."""
    if not 0.0 < r < 1.0:
        raise DomainError(f"r must lie in (0, 1), got {r!r}")
    t = (1.0 - r) / (2.0 - r)
    v0 = V_s(ch, 0.0, given, cfg).value
    if v0 == 0.0:
        return 0.0
    hr = marginal_renyi_entropy(ch, r, cfg)
    return kappa(t) * math.exp(t * (hr + math.log(v0)))


def prop9_constant(lam: float) -> float:
    """C(lam) = kappa(1/2) sqrt(pi lam^-lam (1-lam)^-(1-lam) / sin(pi lam))."""
    if not 0.0 < lam < 1.0:
        raise DomainError(f"lam must lie in (0, 1), got {lam!r}")
    inner = (
        math.log(math.pi)
        - lam * math.log(lam)
        - (1.0 - lam) * math.log1p(-lam)
        - math.log(math.sin(math.pi * lam))
    )
    return kappa(0.5) * math.exp(0.5 * inner)


def prop9_bound(
    ch,
    p: float,
    q: float,
    given: str = "X",
    cfg: NumericsConfig = NumericsConfig(),
) -> float:
    """Two-moment MI bound

        I(W; Y) <= C(lam) sqrt(omega(S_Y) V_np^lam V_nq^(1-lam) / (q - p)),

    lam = (q-1)/(q-p), built from two V_s evaluations.  Requires
    0 <= p < 1 < q (the V_s orders must be nonnegative).
    """
    if not p < 1.0 < q:
        raise InvalidMomentOrder(f"need p < 1 < q, got ({p!r}, {q!r})")
    if p < 0.0:
        raise InvalidMomentOrder("p must be nonnegative (V_s orders are)")
    n = ch.n
    vp = V_s(ch, n * p, given, cfg, stream=1).value
    vq = V_s(ch, n * q, given, cfg, stream=2).value
    if vp == 0.0 or vq == 0.0:
        return 0.0
    lam = (q - 1.0) / (q - p)
    log_psi = math.log(psi_half_closed(p, q))
    inner = (
        log_omega(ch.support_y())
        + log_psi
        + lam * math.log(vp)
        + (1.0 - lam) * math.log(vq)
    )
    return kappa(0.5) * math.exp(0.5 * inner)


def _mi_discrete(weights, model, cfg):
    """Sum over conditioning atoms of int f(y|w) log(f(y|w)/f(y)) dy."""
    total = 0.0
    for i, w in enumerate(weights):
        def integrand(y, i=i):
            lc = model.log_cond(y)[i]
            lm = model.log_marginal(y)
            return np.where(lc > _EXP_CLIP, np.exp(lc) * (lc - lm), 0.0)

        total += w * integrate(integrand, _FULL, cfg).value
    return total


def mi_oracle(ch, given: str = "X", cfg: NumericsConfig = NumericsConfig()) -> float:
    """I(W; Y) computed from the definition.

    Atomic conditioning variables use the exact outer sum with a y-
    quadrature per atom.  Continuous X reduces to h(Y) - h(W), valid
    because the noise is additive: h(Y|X) = h(W) = (1/2) log(2 pi e).
    """
    given = _given(ch, given)
    model = variance_model(ch, given, cfg)
    if isinstance(model, _AtomicConditionals):
        return _mi_discrete(model.probs, model, cfg)

    def integrand(y):
        lm = model.log_marginal(y)
        with np.errstate(invalid="ignore"):
            return np.where(lm > _EXP_CLIP, -np.exp(lm) * lm, 0.0)

    h_y = integrate(integrand, _FULL, cfg).value
    return h_y - 0.5 * (LOG_2PI + 1.0)


def vs_upper_bound_check(ch, s: float, cfg: NumericsConfig = NumericsConfig()) -> float:
    """Residual of V_s(Y|U) <= G((1+s)/2)/(2 pi) P(U1 != U2) E(1+U)^((s-1)/2),
    both sides as exact sums over an atomic mixing law.

    The product-form bound holds when the weight profile and
    (1+u)^((s-1)/2) are similarly ordered across the atoms (in
    particular: heavy atom rare and s <= 1, the regime of the vanishing-
    mixture experiments); the residual can be negative outside it, so it
    is returned rather than asserted.
    """
    if ch.kind != "scale_mixture" or not ch.mixing.is_discrete:
        raise UnsupportedOperation("the V_s upper bound check needs atomic mixing")
    us, probs = ch.mixing.atoms_and_probs()
    coef = math.exp(ln_gamma(0.5 * (1.0 + s))) / (2.0 * math.pi)
    p_neq = 1.0 - float(probs @ probs)
    bound = coef * p_neq * float(probs @ (1.0 + us) ** (0.5 * (s - 1.0)))
    return bound - V_s(ch, s, "U", cfg).value
