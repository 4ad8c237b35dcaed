"""Certified checks for small-entropy pseudo-Anosov maps on punctured spheres."""
__version__ = "0.1.0"
