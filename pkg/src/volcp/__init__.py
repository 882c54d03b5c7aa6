"""Detection and localization of volatility changes in high-frequency log prices."""

__version__ = "0.1.0"
