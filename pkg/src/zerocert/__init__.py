"""Numerical certification of a log-free exceptional-set exponent.

Modules, in dependency order: ``kernel`` (the weight and its Laplace
transform), ``cond2`` (grid certification of a kernel inequality),
``density`` (zero-density bounds), ``extremal`` (budget-constrained
maximization), ``cases`` (the case analysis) and ``runner`` (reports).
"""

__version__ = "0.1.0"
