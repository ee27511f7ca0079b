"""Desk-scale experiments on QBF elimination growth and well-chained devices for bounded machines."""

__version__ = "0.1.0"
