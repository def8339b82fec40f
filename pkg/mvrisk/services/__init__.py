"""
Services module for mvrisk.

Contains everything that reads or writes an external format:
- Scenario files in CSV and JSON
- Mixed-integer program export in CPLEX LP format
- Desirable-region plot data
- JSON and CSV documents of the command line
"""
