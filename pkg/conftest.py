"""Test wiring: render NumPy scalars as in NumPy 1.x so doctest outputs match."""
import numpy as np

try:
    np.set_printoptions(legacy="1.25")
except (TypeError, ValueError):
    pass
