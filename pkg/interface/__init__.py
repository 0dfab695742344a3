"""
Interface Package - command-line interface for the spatial attachment toolkit
"""

__version__ = "1.0.0"
