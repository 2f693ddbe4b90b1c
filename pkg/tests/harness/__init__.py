"""Experiment harness tests."""
