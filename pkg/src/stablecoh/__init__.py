"""Stable elements and cohomology of finite p-groups over F_p."""

__version__ = "0.1.0"
