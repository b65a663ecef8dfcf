"""Spectral and kernel application of the operator families."""
