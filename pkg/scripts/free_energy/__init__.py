"""Free-energy integrands, genus-k closed forms and their total-derivative certificates."""
