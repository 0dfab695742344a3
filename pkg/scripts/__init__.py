"""
Scripts Package
Holds the test suite for the spatial attachment toolkit.
"""

__version__ = "1.0.0"
