"""Network-based candidate forwarding set optimization for opportunistic routing."""

__version__ = "0.1.0"
