"""
mvrisk package.

Multivariate Value-at-Risk and vector-valued multivariate CVaR of finite discrete
distributions, with the competing conditional measures, property checks and a
mixed-integer program exporter.
"""
