"""wrapmap: layout and projection toolkit for data on surfaces that wrap around."""

__version__ = "0.1.0"
