"""Scattering resonances of the unit disk with a delta shell potential."""

from .potential import PotentialSpec

__version__ = "0.1.0"

__all__ = ["PotentialSpec", "__version__"]
