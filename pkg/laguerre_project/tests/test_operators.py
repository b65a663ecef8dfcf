import numpy as np
import pytest

from laguerre_project.src.kernels.family import KernelFamily
from laguerre_project.src.kernels.heat import heat_kernel
from laguerre_project.src.kernels.singular import laplace_symbol
from laguerre_project.src.operators.functions import (
    SampledFunction,
    SpectralFunction,
    expand,
    synthesize,
)
from laguerre_project.src.operators.handles import (
    fractional_operator,
    maximal_operator,
    multiplier_operator,
    riesz_operator,
)
from laguerre_project.src.operators.kernel_path import (
    check_proximity,
    kernel_apply,
    riesz_kernel_apply,
)
from laguerre_project.src.operators.spectral import (
    apply_semigroup,
    frac_integral,
    gfunction,
    gfunction_gram,
    imaginary_power_phi,
    laplace_multiplier,
    maximal,
    riesz_spectral,
    riesz_spectral_abel,
    variation_operator,
    variation_upper_bound,
)
from laguerre_project.src.operators.timegrid import TimeGrid
from laguerre_project.src.operators.variation import (
    rho_variation,
    rho_variation_batch,
    turning_points,
)
from laguerre_project.src.setting.quad import gamma_alpha_rule, interval_gamma_rule
from laguerre_project.src.setting.specfun import laguerre_normalized
from laguerre_project.src.utils.errors import (
    CapacityError,
    DomainError,
    ProximityError,
)
from laguerre_project.tests.base_test import BaseTest

SUPPORT = (0.5, 1.0)


def bump(x):
    u = (np.asarray(x, dtype=float) - 0.75) / 0.25
    inside = np.abs(u) < 1
    out = np.zeros_like(u)
    out[inside] = np.exp(-1 / (1 - u[inside] ** 2))
    return out


def sampled_bump(alpha):
    lo, hi = SUPPORT
    rule = interval_gamma_rule(lo, hi, alpha, 16, breakpoints=np.linspace(lo, hi, 17)[1:-1])
    return SampledFunction.from_callable(bump, alpha, rule, support=SUPPORT)


class TestFunctions(BaseTest):
    def test_basis_synthesis(self, alpha_half):
        x = np.array([0.3, 1.0, 2.2])
        f = SpectralFunction.basis(3, alpha_half, scale=2.0)
        np.testing.assert_allclose(
            synthesize(f, x), 2.0 * laguerre_normalized(3, alpha_half, x), rtol=1e-12
        )
        assert f.l2_norm == pytest.approx(2.0)

    def test_combination(self):
        f = SpectralFunction.combination({0: 1.0, 2: 0.25}, 0.0)
        np.testing.assert_allclose(f.coeffs, [1.0, 0.0, 0.25])

    def test_expand_recovers_coefficients(self, alpha_half):
        target = SpectralFunction.combination({0: 0.5, 1: -1.0, 4: 2.0}, alpha_half)
        sampled = SampledFunction.from_callable(lambda x: synthesize(target, x), alpha_half)
        coeffs = expand(sampled, 6).coeffs
        np.testing.assert_allclose(coeffs, [0.5, -1.0, 0, 0, 2.0, 0, 0], atol=1e-9)

    def test_expand_flags_aliasing(self):
        sampled = SampledFunction.from_callable(np.cos, 0.0, gamma_alpha_rule(0.0, 10))
        with pytest.warns(UserWarning, match="aliases high modes"):
            result = expand(sampled, 8)
        assert result.metadata["aliasing"]

    def test_expand_degree_capacity(self):
        sampled = SampledFunction.from_callable(np.cos, 0.0)
        with pytest.raises(CapacityError):
            expand(sampled, 300)

    def test_sampled_support_is_checked(self):
        rule = gamma_alpha_rule(0.0, 16)
        with pytest.raises(DomainError, match="outside its support"):
            SampledFunction(rule, np.ones(16), 0.0, support=(0.5, 1.0))
        with pytest.raises(DomainError):
            SampledFunction(rule, np.ones(15), 0.0)

    def test_lp_norms(self):
        f = SampledFunction.from_callable(lambda x: np.full_like(x, -2.0), 0.0)
        assert f.lp_norm(1) == pytest.approx(2.0)
        assert f.lp_norm(2) == pytest.approx(2.0)
        assert f.lp_norm(np.inf) == 2.0
        assert f.integral() == pytest.approx(-2.0)


class TestTimeGrid(BaseTest):
    def test_refined_keeps_times(self, coarse_grid):
        refined = coarse_grid.refined()
        assert refined.count == 2 * coarse_grid.count - 1
        np.testing.assert_allclose(refined.times[::2], coarse_grid.times)

    def test_log_weights(self, coarse_grid):
        assert np.sum(coarse_grid.log_weights()) == pytest.approx(np.log(1e5))

    @pytest.mark.parametrize(
        "params", [(0.0, 1.0, 10), (1.0, 0.5, 10), (1e-3, 1.0, 1), (1e-3, 1.0, 2.5)]
    )
    def test_bad_grid(self, params):
        with pytest.raises(DomainError):
            TimeGrid(*params)


class TestVariation(BaseTest):
    def test_known_value(self):
        assert rho_variation(3, [3, 1, 2, 0]) == pytest.approx(3.0)

    def test_monotone_sequence(self):
        samples = np.linspace(2.0, -1.0, 50)
        assert rho_variation(2.5, samples) == pytest.approx(3.0)

    def test_turning_points(self):
        np.testing.assert_allclose(turning_points([0, 1, 1, 2, 0]), [0, 2, 0])
        np.testing.assert_allclose(turning_points([1.0, 1.0]), [1.0, 1.0])

    def test_bounded_by_total_variation(self, rng):
        samples = rng.normal(size=40)
        total = np.sum(np.abs(np.diff(samples)))
        value = rho_variation(3, samples)
        assert np.max(samples) - np.min(samples) <= value + 1e-12
        assert value <= total + 1e-12

    def test_reversal_invariant(self, rng):
        samples = rng.normal(size=25)
        assert rho_variation(4, samples) == pytest.approx(rho_variation(4, samples[::-1]))

    def test_batch(self, rng):
        batch = rng.normal(size=(3, 20))
        expected = [rho_variation(3, row) for row in batch]
        np.testing.assert_allclose(rho_variation_batch(3, batch), expected)

    def test_rho_must_exceed_two(self):
        with pytest.raises(DomainError, match=r"Passed \'rho\' value"):
            rho_variation(2, [0, 1])


class TestSpectral(BaseTest):
    def test_semigroups(self, alpha_half):
        f = SpectralFunction.combination({0: 1.0, 1: 1.0, 4: 1.0}, alpha_half)
        np.testing.assert_allclose(
            apply_semigroup("heat", 0.5, f).coeffs, [1, np.exp(-0.5), 0, 0, np.exp(-2.0)]
        )
        np.testing.assert_allclose(
            apply_semigroup("poisson", 0.5, f).coeffs, [1, np.exp(-0.5), 0, 0, np.exp(-1.0)]
        )
        with pytest.raises(DomainError):
            apply_semigroup("heat", 0.0, f)
        with pytest.raises(ValueError, match="Unexpected semigroup kind"):
            apply_semigroup("wave", 1.0, f)

    def test_heat_composition(self, alpha_half):
        f = SpectralFunction.combination({1: 1.0, 3: -0.4, 7: 0.25}, alpha_half)
        twice = apply_semigroup("heat", 0.4, apply_semigroup("heat", 0.3, f))
        np.testing.assert_allclose(
            twice.coeffs, apply_semigroup("heat", 0.7, f).coeffs, rtol=1e-14, atol=1e-16
        )

    def test_heat_kernel_path(self):
        f = SpectralFunction.combination({2: 1.0, 5: 1.0}, 0.0)
        x = np.array([0.4, 0.9, 1.4, 1.9])
        rule = gamma_alpha_rule(0.0, 128)
        values = synthesize(f, rule.nodes)
        kernel = np.array(
            [np.dot(rule.weights, heat_kernel(0.5, point, rule.nodes, 0.0) * values) for point in x]
        )
        spectral = synthesize(apply_semigroup("heat", 0.5, f), x)
        assert np.max(np.abs(kernel - spectral)) < 1e-7

    def test_maximal_of_constant(self):
        assert float(maximal(0, SpectralFunction.basis(0, 0.0), 1.0)) == pytest.approx(1.0)

    def test_maximal_of_mode(self, coarse_grid):
        f = SpectralFunction.basis(2, 0.0)
        x = 0.4
        expected = abs(float(laguerre_normalized(2, 0.0, x))) * np.exp(-np.sqrt(2) * 1e-3)
        assert float(maximal(0, f, x, coarse_grid)) == pytest.approx(expected, rel=1e-12)

    def test_gfunction_forms_agree(self, alpha_half):
        f = SpectralFunction.combination({1: 1.0, 3: -0.5, 5: 0.2}, alpha_half)
        for n, k in ((0, 1), (1, 0), (1, 1)):
            assert gfunction(n, k, f, 1.2) == pytest.approx(
                float(gfunction_gram(n, k, f, 1.2)), rel=1e-7
            )

    def test_gfunction_of_mode(self):
        # int_0^inf t e^(-2 sqrt(k) t) dt = 1 / (4k)
        k = 3
        f = SpectralFunction.basis(k, 0.0)
        value = float(gfunction_gram(0, 1, f, 0.9))
        expected = abs(float(laguerre_normalized(k, 0.0, 0.9))) * np.sqrt(k / (4 * k))
        assert value == pytest.approx(expected, rel=1e-12)

    def test_gfunction_orders(self):
        f = SpectralFunction.basis(1, 0.0)
        with pytest.raises(DomainError):
            gfunction_gram(0, 0, f, 1.0)
        with pytest.raises(CapacityError):
            gfunction_gram(2, 2, f, 1.0)

    def test_riesz_abel_extrapolation(self):
        f = SpectralFunction.combination({1: 1.0, 2: -0.5, 6: 0.3}, 0.0)
        x = np.array([0.4, 1.1])
        np.testing.assert_allclose(
            riesz_spectral_abel(1, f, x), riesz_spectral(1, f)(x), rtol=1e-4, atol=1e-8
        )

    def test_riesz_kills_constants(self):
        f = SpectralFunction.basis(0, 0.0, scale=5.0)
        assert float(riesz_spectral(1, f)(1.0)) == 0.0

    def test_frac_integral(self):
        f = SpectralFunction.combination({0: 1.0, 3: 1.0}, 0.0)
        np.testing.assert_allclose(frac_integral(1.0, f).coeffs, [0, 0, 0, 1 / 3])
        with pytest.raises(DomainError):
            frac_integral(0.0, f)

    def test_multiplier_of_one(self):
        f = SpectralFunction.combination({0: 2.0, 1: 1.0, 2: -1.0}, 0.0)
        np.testing.assert_allclose(
            laplace_multiplier(lambda t: 1.0, f).coeffs, [0.0, 1.0, -1.0], atol=1e-9
        )

    def test_imaginary_power_symbol(self):
        beta = 0.5
        phi = imaginary_power_phi(beta)
        for z in (0.5, 2.0, 4.0):
            assert laplace_symbol(phi, z) == pytest.approx(np.cos(2 * beta * np.log(z)), abs=1e-7)
        np.testing.assert_allclose(imaginary_power_phi(0.0)(np.array([0.1, 3.0])), 1.0)

    def test_variation_of_single_mode(self, coarse_grid):
        f = SpectralFunction.basis(2, 0.0)
        x = 1.3
        value = float(variation_operator(3.0, 0, f, x, coarse_grid))
        bound = variation_upper_bound(0, f, x)
        assert bound == pytest.approx(abs(float(laguerre_normalized(2, 0.0, x))), rel=1e-8)
        assert value == pytest.approx(bound, rel=1e-2)
        assert value <= bound * (1 + 1e-9)

    def test_variation_below_upper_bound(self, coarse_grid):
        f = SpectralFunction.combination({1: 1.0, 2: -1.5, 4: 0.7}, 0.0)
        for k in (0, 1):
            value = float(variation_operator(3.0, k, f, 0.8, coarse_grid))
            assert value <= variation_upper_bound(k, f, 0.8) * (1 + 1e-8)


class TestKernelPath(BaseTest):
    def test_proximity(self):
        f = sampled_bump(0.0)
        with pytest.raises(ProximityError):
            check_proximity(f, 1.0005)
        with pytest.raises(ProximityError, match="declared support"):
            check_proximity(SampledFunction.from_callable(np.cos, 0.0), 3.0)
        check_proximity(f, [0.2, 2.0])

    def test_fractional_paths_agree(self):
        f = sampled_bump(0.0)
        x = np.array([2.0, 2.5])
        operator = fractional_operator(0.0, 1.0)
        kernel = operator.apply_kernel(f, x)
        spectral = operator.apply_spectral(expand(f, 96), x)
        np.testing.assert_allclose(kernel, spectral, rtol=5e-3)

    def test_riesz_paths_agree(self):
        f = sampled_bump(0.0)
        x = 2.5
        family = riesz_operator(0.0, 1).family
        through_family = float(kernel_apply(family, f, x))
        assert riesz_kernel_apply(1, f, x) == pytest.approx(through_family, rel=1e-10)

    def test_maximal_paths_agree(self, coarse_grid):
        f = sampled_bump(0.0)
        operator = maximal_operator(0.0, 0, coarse_grid)
        x = np.array([2.5])
        kernel = operator.apply_kernel(f, x)
        spectral = operator.apply_spectral(expand(f, 96), x)
        assert np.all(kernel >= 0)
        np.testing.assert_allclose(kernel, spectral, rtol=1e-2)

    def test_multiplier_of_zero(self):
        f = sampled_bump(0.0)
        operator = multiplier_operator(0.0, lambda t: 0.0 * np.asarray(t), "zero")
        np.testing.assert_allclose(operator.apply_kernel(f, np.array([2.5])), 0.0, atol=1e-14)
        assert operator.name == "multiplier_zero"

    def test_handle_names(self):
        assert maximal_operator(0.0, 1).name == "maximal_k1"
        assert not maximal_operator(0.0).linear
        assert riesz_operator(0.0, 2).linear
        assert KernelFamily("riesz", 0.0, n=2) == riesz_operator(0.0, 2).family
