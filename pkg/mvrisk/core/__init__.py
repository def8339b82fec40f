"""
Core module for mvrisk.

Contains the data models, the error hierarchy and the pure risk computations.
"""
