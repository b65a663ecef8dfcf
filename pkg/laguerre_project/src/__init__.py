"""Module containing all library code of the Laguerre endpoint study."""
