"""Labeled-map counting from the t-coupling Taylor expansion of F^(k)."""
