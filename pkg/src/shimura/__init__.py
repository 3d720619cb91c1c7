"""
Exact arithmetic for genus-one Shimura curves X0(D, N): quartic models,
2-descent, Atkin-Lehner involutions, CM points and their fields of definition.
"""

__version__ = "1.0.0"
