"""Max-norm radial functions: transforms, positive definiteness and Wiener-algebra criteria."""

__version__ = "0.1.0"
