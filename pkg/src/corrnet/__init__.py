"""Correlation-network analysis of daily industry-index returns.

Monthly rolling Pearson matrices, planar maximally filtered graphs,
map-equation communities, graph-metric series, month-by-month similarity
matrices and eigenvalue dynamics.
"""

__version__ = "0.1.0"
