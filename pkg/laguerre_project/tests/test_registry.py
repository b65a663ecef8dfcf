"""Test file to ensure that operators and multipliers load by name."""
import numpy as np
import pytest

from laguerre_project.src.operators.handles import EndpointOperator
from laguerre_project.src.operators.timegrid import TimeGrid
from laguerre_project.src.utils.registry import OPERATOR_NAMES, load_operator, load_phi
from laguerre_project.tests.base_test import BaseTest


class TestRegistry(BaseTest):
    def test_incorrect_operator(self):
        with pytest.raises(ValueError, match=r"Unexpected operator name"):
            load_operator("foo", 0.0)

    @pytest.mark.parametrize("name", OPERATOR_NAMES)
    def test_correct_operator_names(self, name):
        operator = load_operator(name, 0.5, k=1, grid=TimeGrid(1e-2, 1e1, 10))
        assert isinstance(operator, EndpointOperator)
        assert operator.family.alpha.alpha == 0.5

    def test_operator_parameters(self):
        assert load_operator("riesz", 0.0, n=2).family.n == 2
        assert load_operator("frac", 0.0, omega=0.75).family.omega == 0.75
        assert load_operator("variation", 0.0, rho=4.0).family.rho == 4.0
        assert load_operator("multiplier", 0.0, phi="texp").name == "multiplier_texp"

    def test_incorrect_phi(self):
        with pytest.raises(ValueError, match=r"Unexpected multiplier name"):
            load_phi("foo")

    def test_phi_values(self):
        t = np.array([0.5, 1.0, 2.0])
        np.testing.assert_allclose(load_phi("one")(t), 1.0)
        np.testing.assert_allclose(load_phi("zero")(t), 0.0)
        np.testing.assert_allclose(load_phi("cos")(t), np.cos(t))
        np.testing.assert_allclose(load_phi("texp")(t), t * np.exp(-t))
        assert np.all(np.abs(load_phi("imaginary", beta=1.0)(t)) < 10)
