"""String equation: W, the resolvent U-table and the r_k / deformed r_k solvers."""
