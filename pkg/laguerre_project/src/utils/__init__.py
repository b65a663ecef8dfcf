"""Errors, configuration and registry helpers."""
