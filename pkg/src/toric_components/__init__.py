"""Count irreducible components of general complete intersections of
equivariant linear systems on toric varieties."""

__version__ = "0.1.0"
