import numpy as np
import pytest

from laguerre_project.src.setting.measure_geom import (
    AdmissibleInterval,
    AlphaParam,
    admissibility_scale,
    doubling_constant,
    doubling_ratio,
    gamma_mass,
    interval_family,
    is_admissible,
    tail_cutoff,
)
from laguerre_project.src.utils.errors import DomainError
from laguerre_project.tests.base_test import BaseTest


class TestMeasureGeom(BaseTest):
    def test_alpha_constants(self, alpha_zero, alpha_half):
        assert alpha_zero.gamma_alpha_norm == pytest.approx(2.0)
        assert alpha_zero.pi_alpha_const == pytest.approx(1 / np.pi)
        assert alpha_half.gamma_alpha_norm == pytest.approx(4 / np.sqrt(np.pi))
        assert alpha_half.pi_alpha_const == pytest.approx(0.5)

    @pytest.mark.parametrize("alpha", [-0.5, -0.6, np.nan])
    def test_alpha_out_of_domain(self, alpha):
        with pytest.raises(DomainError, match=r"Passed \'alpha\' value"):
            AlphaParam(alpha)

    def test_reduced_accuracy_warns(self):
        with pytest.warns(UserWarning, match="relaxed tenfold"):
            alpha = AlphaParam(-0.48)
        assert alpha.reduced_accuracy

    @pytest.mark.parametrize("x, expected", [(0.5, 1.0), (1.0, 1.0), (2.0, 0.5)])
    def test_admissibility_scale(self, x, expected):
        assert admissibility_scale(x) == expected

    @pytest.mark.parametrize(
        "c, r, a, expected",
        [(1.0, 0.5, 1.0, True), (4.0, 0.5, 1.0, False), (4.0, 0.25, 1.0, True)],
    )
    def test_is_admissible(self, c, r, a, expected):
        assert is_admissible(c, r, a) is expected

    def test_inadmissible_interval(self):
        with pytest.raises(DomainError, match="not admissible"):
            AdmissibleInterval(4.0, 0.5)

    @pytest.mark.parametrize("alpha", [0.0, 0.5, 2.0])
    def test_gamma_mass_total(self, alpha):
        assert gamma_mass(0.0, np.inf, alpha) == pytest.approx(1.0, abs=1e-14)
        for c in (0.3, 1.0, 3.5):
            total = gamma_mass(0.0, c, alpha) + gamma_mass(c, np.inf, alpha)
            assert total == pytest.approx(1.0, abs=1e-14)

    def test_gamma_mass_closed_form(self):
        assert gamma_mass(0.0, 1.0, 0.0) == pytest.approx(1 - np.exp(-1), abs=1e-12)

    def test_gamma_mass_bad_endpoints(self):
        with pytest.raises(DomainError):
            gamma_mass(2.0, 1.0, 0.0)

    def test_doubling_ratio(self):
        family = interval_family(1.0, 0)
        constant = doubling_constant(family, 0.0)
        ratio = doubling_ratio(AdmissibleInterval(1.0, 0.25), 0.0)
        assert 1.0 <= ratio <= constant
        for interval in family:
            assert doubling_ratio(interval, 0.5) >= 1.0

    @pytest.mark.parametrize("radius", [0.01, 1e-3, 1e-4])
    def test_doubling_small_intervals(self, radius):
        assert doubling_ratio(AdmissibleInterval(1.0, radius), 0.0) <= 8.0

    def test_dilate_is_clipped(self):
        lo, hi = AdmissibleInterval(0.5, 0.5).dilate(2.0)
        assert lo == 0.0
        assert hi == pytest.approx(1.5)

    def test_interior_points(self):
        interval = AdmissibleInterval(1.0, 0.25)
        points = interval.interior_points(9)
        assert points.size == 9
        assert np.all((points > interval.lo) & (points < interval.hi))
        assert points[4] == pytest.approx(1.0)

    def test_interval_family_levels(self):
        coarse = interval_family(1.0, 0)
        fine = interval_family(1.0, 1)
        assert len(fine) > len(coarse)
        for interval in coarse + fine:
            assert is_admissible(interval.center, interval.radius / (1 + 1e-12), 1.0)
        smallest = min(interval.radius for interval in coarse)
        assert min(interval.radius for interval in fine) == pytest.approx(smallest / 2)
        keys = [(interval.center, interval.radius) for interval in coarse]
        assert len(set(keys)) == len(keys)

    def test_interval_family_negative_level(self):
        with pytest.raises(DomainError, match=r"Passed \'level\' value"):
            interval_family(1.0, -1)

    def test_tail_cutoff(self):
        x_max = tail_cutoff(0.0)
        assert x_max == pytest.approx(np.sqrt(2) + 8)
        assert gamma_mass(x_max, np.inf, 0.0) < 1e-12
