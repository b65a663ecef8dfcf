"""Atoms, atomic decompositions and BMO estimates."""
