"""Exact enumeration and verification of outcome-agnostic identification results
for discrete instrumental-variable selection models."""
__version__ = "0.1.0"
