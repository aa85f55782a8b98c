"""Hotspot and entropy based routing for delay tolerant networks."""

__version__ = "0.1.0"
