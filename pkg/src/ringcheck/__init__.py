"""Round-bounded verification of distributed algorithms on rings."""

__version__ = "0.1.0"
