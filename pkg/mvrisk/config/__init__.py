"""
Configuration module for mvrisk.

Handles loading and accessing tolerances and defaults from configuration files.
"""
