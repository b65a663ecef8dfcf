"""Endpoint-estimate sweeps, refinement gates and reports."""
