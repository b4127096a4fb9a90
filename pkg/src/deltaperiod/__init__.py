"""Period invariant of the Ramanujan cusp form Delta and the local computations behind it."""

__version__ = "0.1.0"
