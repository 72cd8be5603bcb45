"""Phase regions, criticality and the triple-scaling limit."""
