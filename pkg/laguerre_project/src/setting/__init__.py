"""The measure, special functions and quadrature rules."""
