"""Upper level module containing the Laguerre endpoint study."""

__version__ = "0.1.0"
