"""Finite-N orthogonal-polynomial numerics checked against the large-N expansions."""
