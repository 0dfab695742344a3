#!/usr/bin/env python3
"""
Spatial preferential attachment with choice

Usage: python app.py <simulate|solve|classify|replicas|verify|plot> [flags]
Run ``python app.py <subcommand> --help`` for the flags of each subcommand.
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from interface.cli.app import main

if __name__ == "__main__":
    sys.exit(main())
