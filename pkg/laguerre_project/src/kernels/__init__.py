"""Kernel evaluation for the heat, Poisson, Riesz, fractional and multiplier families."""
