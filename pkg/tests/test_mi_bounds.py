"""Mutual-information layer: the kernel, V_s identities, the bound
ordering against the exact-mixture oracle, and the scale-mixture
phenomenology."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from renyi_bounds.distributions import (
    GenericPdf,
    Lognormal,
    PointMass,
    TwoPoint,
    iid_pair_sampler,
)
from renyi_bounds.errors import (
    DomainError,
    InvalidMomentOrder,
    UnsupportedOperation,
)
from renyi_bounds.mi_bounds import (
    AwgnChannel,
    ScaleMixtureChannel,
    V_s,
    V_s_quadrature,
    chi2_divergence,
    chi2_mi_bound,
    kernel_Ks,
    marginal_renyi_entropy,
    mi_oracle,
    prop7_bound,
    prop8_bound,
    prop9_bound,
    prop9_constant,
    variance_model,
    vs_upper_bound_check,
)
from renyi_bounds.quadrature import Domain, NumericsConfig, integrate, mc_expect
from renyi_bounds.specfun import kappa

CFG = NumericsConfig()
INV_2SQRTPI = 1.0 / (2.0 * math.sqrt(math.pi))
V2_POINT_U1 = 0.22367104746010087624  # V_2(Y|X) at U = 1 (mpmath exact sums)


def _phi(x):
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


class TestKernel:
    def test_diagonal_s0(self):
        ch = AwgnChannel(TwoPoint(0.5, 2.0))
        assert kernel_Ks(ch, 1.0, 1.0, 0.0, CFG) == pytest.approx(INV_2SQRTPI, rel=1e-10)

    def test_offdiagonal_s0(self):
        ch = AwgnChannel(TwoPoint(0.5, 2.0))
        expect = 2.0**-0.5 * _phi(2.0 / math.sqrt(2.0))
        assert kernel_Ks(ch, 2.0, 0.0, 0.0, CFG) == pytest.approx(expect, rel=1e-10)

    def test_s0_equals_product_density_integral(self):
        # K_0(x1, x2) = int f(y|x1) f(y|x2) dy, checked by quadrature
        ch = AwgnChannel(PointMass(1.0))
        x1, x2 = 0.7, -0.4
        direct = integrate(
            lambda y: np.exp(-0.5 * ((y - x1) ** 2 + (y - x2) ** 2)) / (2 * math.pi),
            Domain.full_line(),
            CFG,
        ).value
        assert kernel_Ks(ch, x1, x2, 0.0, CFG) == pytest.approx(direct, rel=1e-9)

    def test_s2_shifted_second_moment(self):
        # E|W + m|^2 = 1 + m^2 makes K_2 elementary.
        ch = AwgnChannel(PointMass(1.0))
        x1, x2 = 1.2, 0.4
        m = (x1 + x2) / math.sqrt(2.0)
        expect = 2.0 ** (-1.5) * (1.0 + m * m) * _phi((x1 - x2) / math.sqrt(2.0))
        assert kernel_Ks(ch, x1, x2, 2.0, CFG) == pytest.approx(expect, rel=1e-9)

    def test_gram_matrix_positive_semidefinite(self):
        ch = AwgnChannel(PointMass(1.0))
        xs = [-1.0, 0.0, 1.0]
        gram = np.array([[kernel_Ks(ch, a, b, 0.0, CFG) for b in xs] for a in xs])
        assert np.linalg.eigvalsh(gram).min() >= -1e-12

    def test_mixture_channel_rejected(self):
        with pytest.raises(UnsupportedOperation):
            kernel_Ks(ScaleMixtureChannel(PointMass(1.0)), 0.0, 1.0, 0.0, CFG)
        ch = AwgnChannel(PointMass(1.0))
        with pytest.raises(DomainError):
            kernel_Ks(ch, 0.0, 1.0, -1.0, CFG)


class TestVs:
    def test_point_input_is_zero(self):
        ch = AwgnChannel(PointMass(2.0))
        for s in (0.0, 2.0):
            assert V_s(ch, s, "X", CFG).value == 0.0

    def test_constant_mixing_given_u_is_zero(self):
        ch = ScaleMixtureChannel(PointMass(2.0))
        for s in (0.0, 1.0, 2.0):
            assert V_s(ch, s, "U", CFG).value == pytest.approx(0.0, abs=1e-15)

    def test_constant_mixing_given_x_matches_awgn_closed_form(self):
        # two code paths: the scale-mixture pair expectation vs the
        # Gaussian identity E exp(-(X1-X2)^2/4) = (1+c)^(-1/2), X ~ N(0,c)
        for c in (0.5, 1.0, 4.0):
            ch = ScaleMixtureChannel(PointMass(c))
            closed = V_s(ch, 0.0, "X", CFG)
            expect = INV_2SQRTPI * (1.0 - (1.0 + c) ** -0.5)
            assert closed.method == "closed_form"
            assert closed.value == pytest.approx(expect, abs=1e-9)

    def test_reference_value_v2(self):
        ch = ScaleMixtureChannel(PointMass(1.0))
        assert V_s(ch, 2.0, "X", CFG).value == pytest.approx(V2_POINT_U1, rel=1e-12)

    def test_kernel_decomposition_exact_sums(self):
        # direct integral of |y|^s var(f(y|X)) vs E[K_s(X,X) - K_s(X1,X2)]
        ch = AwgnChannel(TwoPoint(0.3, 2.5))
        for s in (0.0, 2.0):
            kernel_route = V_s(ch, s, "X", CFG).value
            direct = V_s_quadrature(ch, s, "X", CFG)
            assert kernel_route == pytest.approx(direct, rel=1e-6)

    def test_kernel_decomposition_monte_carlo(self):
        ch = AwgnChannel(TwoPoint(0.3, 2.5))
        direct = V_s_quadrature(ch, 0.0, "X", CFG)

        def g(pair):
            x1, x2 = pair
            return INV_2SQRTPI * (1.0 - np.exp(-0.25 * (x1 - x2) ** 2))

        res = mc_expect(g, iid_pair_sampler(TwoPoint(0.3, 2.5)), CFG)
        assert abs(direct - res.value) <= 4.0 * res.standard_error

    def test_scaling_law(self):
        ch = ScaleMixtureChannel(TwoPoint(0.4, 3.0))
        for s in (0.0, 2.0):
            base = V_s_quadrature(ch, s, "U", CFG)
            for a in (0.5, 2.0, 3.0):
                scaled = V_s_quadrature(ch, s, "U", CFG, scale=a)
                assert scaled == pytest.approx(a ** (s - 1.0) * base, rel=1e-8)

    def test_monte_carlo_mixing(self):
        ch = ScaleMixtureChannel(Lognormal(0.0, 0.25))
        res = V_s(ch, 0.0, "U", CFG)
        assert res.method == "monte_carlo"
        assert res.standard_error > 0.0
        assert res.value > 0.0

    def test_given_u_upper_bound_residuals(self):
        for eps, a in ((0.5, 3.0), (0.1, 11.0)):
            ch = ScaleMixtureChannel(TwoPoint(eps, a))
            for s in (0.0, 2.0):
                assert vs_upper_bound_check(ch, s, CFG) >= -1e-12

    def test_given_u_upper_bound_degenerate(self):
        ch = ScaleMixtureChannel(PointMass(1.5))
        assert vs_upper_bound_check(ch, 0.0, CFG) == pytest.approx(0.0, abs=1e-15)

    def test_unsupported_combinations(self):
        with pytest.raises(UnsupportedOperation):
            V_s(AwgnChannel(PointMass(1.0)), 0.0, "U", CFG)
        with pytest.raises(UnsupportedOperation):
            V_s(AwgnChannel(Lognormal(0.0, 1.0)), 2.0, "X", CFG)  # s>0 needs atoms
        with pytest.raises(DomainError):
            V_s(AwgnChannel(PointMass(1.0)), -0.5, "X", CFG)


@given(
    st.floats(min_value=0.001, max_value=0.999),
    st.floats(min_value=0.01, max_value=200.0),
    st.floats(min_value=0.0, max_value=4.0),
)
@settings(max_examples=300)
def test_vs_nonnegative_property(eps, a, s):
    """V_s(Y|U) >= 0 for random two-point mixing laws (exact sums)."""
    ch = ScaleMixtureChannel(TwoPoint(eps, a))
    assert V_s(ch, s, "U", CFG).value >= 0.0


@given(
    st.floats(min_value=0.001, max_value=0.5),
    st.floats(min_value=1.0, max_value=200.0),
    st.floats(min_value=0.0, max_value=1.0),
)
@settings(max_examples=300)
def test_vs_upper_bound_property_in_its_regime(eps, a, s):
    """The product-form upper bound on V_s(Y|U) holds whenever the atom
    weights and (1+u)^((s-1)/2) are similarly ordered: here the heavy
    atom is the rare one (eps <= 1/2, a >= 1) and s <= 1 makes the weight
    function nonincreasing.  Outside this regime the bound can genuinely
    fail, e.g. (eps, a, s) = (0.4, 100, 2) gives a residual of -0.021."""
    ch = ScaleMixtureChannel(TwoPoint(eps, a))
    assert vs_upper_bound_check(ch, s, CFG) >= -1e-12


class TestChiSquare:
    def test_degenerate_is_zero(self):
        assert chi2_mi_bound(AwgnChannel(PointMass(2.0)), "X", CFG) == pytest.approx(0.0, abs=1e-12)

    def test_gaussian_input_identity(self):
        # bivariate-normal identity: chi^2 = rho^2/(1 - rho^2) = sigma^2
        for s2 in (0.5, 1.0, 4.0):
            ch = ScaleMixtureChannel(PointMass(s2))
            assert chi2_divergence(ch, "X", CFG) == pytest.approx(s2, rel=1e-8)

    def test_prop7_at_t1_equals_chi2_integral(self):
        ch = ScaleMixtureChannel(TwoPoint(0.1, 2.0))
        assert prop7_bound(ch, 1.0, "U", CFG) == pytest.approx(
            chi2_divergence(ch, "U", CFG), rel=1e-9
        )

    def test_fig3_channel_chi2_bounded_below(self):
        vals = []
        for eps in (0.01, 0.001):
            ch = ScaleMixtureChannel(TwoPoint(eps, 1.0 + 1.0 / math.sqrt(eps)))
            vals.append(chi2_mi_bound(ch, "U", CFG))
        assert min(vals) > 0.1  # stays away from zero as eps -> 0


class TestProp7:
    def test_degenerate(self):
        ch = AwgnChannel(PointMass(1.0))
        for t in (0.3, 0.5, 1.0):
            assert prop7_bound(ch, t, "X", CFG) == pytest.approx(0.0, abs=1e-12)

    def test_half_t_is_kappa_times_sqrt_var_integral(self):
        ch = ScaleMixtureChannel(TwoPoint(0.2, 3.0))
        model = variance_model(ch, "U", CFG)

        def sqrt_var(y):
            return np.exp(0.5 * model.log_var(y))

        direct = kappa(0.5) * integrate(sqrt_var, Domain.full_line(), CFG).value
        assert prop7_bound(ch, 0.5, "U", CFG) == pytest.approx(direct, rel=1e-9)

    def test_t_validation(self):
        ch = AwgnChannel(PointMass(1.0))
        for t in (0.0, 1.2):
            with pytest.raises(DomainError):
                prop7_bound(ch, t, "X", CFG)


class TestProp8:
    def test_degenerate(self):
        assert prop8_bound(AwgnChannel(PointMass(1.0)), 0.5, "X", CFG) == 0.0

    def test_dominates_gaussian_capacity(self):
        ch = ScaleMixtureChannel(PointMass(1.0))
        assert prop8_bound(ch, 0.5, "X", CFG) >= 0.5 * math.log(2.0)

    def test_composite_criterion_scale_invariant(self):
        # e^{h_r(aY)} V_0(aY|X) is invariant in a: h_r shifts by log a
        # while V_0 scales by 1/a.
        ch = ScaleMixtureChannel(TwoPoint(0.3, 2.0))
        r = 0.5
        hr = marginal_renyi_entropy(ch, r, CFG)
        v0 = V_s_quadrature(ch, 0.0, "X", CFG)
        base = math.exp(hr) * v0
        for a in (0.5, 2.0, 3.0):
            scaled = math.exp(hr + math.log(a)) * V_s_quadrature(ch, 0.0, "X", CFG, scale=a)
            assert scaled == pytest.approx(base, rel=1e-9)


class TestProp9:
    def test_degenerate(self):
        assert prop9_bound(AwgnChannel(PointMass(1.0)), 0.0, 2.0, "X", CFG) == 0.0

    def test_constant_at_half(self):
        assert prop9_constant(0.5) == pytest.approx(
            kappa(0.5) * math.sqrt(2.0 * math.pi), rel=1e-12
        )

    def test_validation(self):
        ch = ScaleMixtureChannel(PointMass(1.0))
        with pytest.raises(InvalidMomentOrder):
            prop9_bound(ch, 0.0, 0.9, "X", CFG)
        with pytest.raises(InvalidMomentOrder):
            prop9_bound(ch, -0.5, 2.0, "X", CFG)


class TestOracle:
    def test_degenerate(self):
        assert mi_oracle(AwgnChannel(PointMass(1.0)), "X", CFG) == pytest.approx(0.0, abs=1e-12)

    def test_gaussian_capacity(self):
        for s2 in (0.5, 1.0, 4.0):
            ch = ScaleMixtureChannel(PointMass(s2))
            assert mi_oracle(ch, "X", CFG) == pytest.approx(
                0.5 * math.log1p(s2), abs=1e-6
            )

    def test_all_bounds_dominate_oracle(self):
        ch = ScaleMixtureChannel(TwoPoint(0.1, 1.0 + 1.0 / math.sqrt(0.1)))
        val = mi_oracle(ch, "U", CFG)
        bounds = [prop7_bound(ch, t, "U", CFG) for t in (0.3, 0.5, 0.8, 1.0)]
        bounds += [prop8_bound(ch, r, "U", CFG) for r in (0.3, 0.5, 0.8)]
        bounds.append(prop9_bound(ch, 0.0, 2.0, "U", CFG))
        bounds.append(chi2_mi_bound(ch, "U", CFG))
        assert val <= min(bounds) + 1e-9

    def test_data_processing(self):
        ch = ScaleMixtureChannel(TwoPoint(0.4, 3.0))
        assert mi_oracle(ch, "U", CFG) <= mi_oracle(ch, "X", CFG) + 1e-8

    def test_generic_input_matches_mixture_route(self):
        # AWGN with X ~ N(0,1) two ways: nested quadrature over a generic
        # density vs the exact point-mass mixture marginal.
        loose = NumericsConfig(rel_tol=1e-7, abs_tol=1e-10)
        gauss = GenericPdf(
            lambda x: np.exp(-0.5 * x * x) / math.sqrt(2 * math.pi),
            Domain.full_line(),
            loose,
        )
        via_generic = mi_oracle(AwgnChannel(gauss), "X", loose)
        via_mixture = mi_oracle(ScaleMixtureChannel(PointMass(1.0)), "X", CFG)
        assert via_generic == pytest.approx(via_mixture, abs=1e-5)


class TestMarginals:
    def test_normalization(self):
        channels = [
            (AwgnChannel(TwoPoint(0.25, 4.0)), "X"),
            (ScaleMixtureChannel(TwoPoint(0.01, 11.0)), "U"),
            (ScaleMixtureChannel(PointMass(2.0)), "X"),
        ]
        for ch, given in channels:
            model = variance_model(ch, given, CFG)
            mass = integrate(
                lambda y: np.exp(model.log_marginal(y)), Domain.full_line(), CFG
            ).value
            assert mass == pytest.approx(1.0, abs=1e-8)

    def test_small_variation_uniform_bound(self):
        # 1 - E exp(-(X1-X2)^2/4) <= eps^2 + 2 P(|X - x0| >= eps)
        for w, atom in ((0.05, 1.3), (0.2, 2.0)):
            d = TwoPoint(w, atom)
            xs, ps = d.atoms_and_probs()
            e = float(ps @ (np.exp(-0.25 * (xs[:, None] - xs[None, :]) ** 2) @ ps))
            lhs = 1.0 - e
            x0 = 1.0
            for eps in (0.05, 0.1, 0.5, 1.0):
                tail = float(ps[np.abs(xs - x0) >= eps].sum())
                assert lhs <= eps * eps + 2.0 * tail + 1e-12


class TestVarianceModels:
    def test_continuous_mixing_pointwise_unsupported(self):
        ch = ScaleMixtureChannel(Lognormal(0.0, 1.0))
        with pytest.raises(UnsupportedOperation):
            variance_model(ch, "U", CFG)

    def test_given_validation(self):
        ch = AwgnChannel(PointMass(1.0))
        with pytest.raises(UnsupportedOperation):
            variance_model(ch, "U", CFG)
        with pytest.raises(DomainError):
            variance_model(ch, "Z", CFG)
