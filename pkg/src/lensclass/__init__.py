"""Exact invariants for free cyclic group actions on S^1 x S^n."""

__version__ = "0.1.0"
