"""Quantization of semisimple coadjoint orbits via generalized Verma modules."""

__version__ = "0.1.0"
