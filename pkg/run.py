#!/usr/bin/env python3
"""
Standalone runner script for swarmkit.
"""

import sys
from swarmkit.__main__ import main

if __name__ == "__main__":
    sys.exit(main())
