"""Spectral certificates, barrier games and real-rooted polynomial tools for Ramanujan-type bounds."""

__version__ = "0.1.0"
