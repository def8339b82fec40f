"""
Utilities module for mvrisk.

Contains componentwise vector helpers shared by the core computations and services.
"""
