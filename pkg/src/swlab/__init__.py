"""Conservative finite-difference schemes for the 1D shallow water equations."""

__version__ = "0.1.0"
