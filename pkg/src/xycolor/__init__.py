"""Exact QAOA simulation for max-kappa-colorable-subgraph with XY mixers."""

__version__ = "0.1.0"
