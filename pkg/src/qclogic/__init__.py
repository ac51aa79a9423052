"""Quantum combinational logic synthesis: f-C-NOT and f-C-PS circuits from truth tables."""
