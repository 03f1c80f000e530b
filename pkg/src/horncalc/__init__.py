"""Exact computations for bivariate Horn hypergeometric systems."""
