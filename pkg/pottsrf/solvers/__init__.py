"""Potts solvers for pottsrf."""
