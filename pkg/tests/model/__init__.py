"""Stochastic program model tests."""
