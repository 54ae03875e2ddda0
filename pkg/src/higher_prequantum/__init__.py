"""Exact higher prequantum geometry: higher Poisson brackets, L-infinity extensions
and Cech-Deligne prequantization on flat charts, circles and tori."""

__version__ = "0.1.0"
