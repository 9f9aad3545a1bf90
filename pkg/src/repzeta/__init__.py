"""Representation zeta functions of finite matrix groups over truncated rings."""

__version__ = "0.1.0"
