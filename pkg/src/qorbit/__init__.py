"""Unitary orbit space of density matrices."""
