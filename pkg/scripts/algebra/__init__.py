"""Exact scalars, rational functions, truncated series and the T-derivation."""
