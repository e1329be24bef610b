"""
swarmkit - A simulator for swarms of anonymous oblivious mobile robots.
"""

__version__ = "1.0.0"
