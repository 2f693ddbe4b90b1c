"""Stochastic Decomposition tests."""
