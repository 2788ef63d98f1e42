"""Measurement simulation and density-matrix reconstruction from MUB statistics."""
