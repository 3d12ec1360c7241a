"""Exact algebraic models behind the oracle."""
