"""Cutting-plane tests."""
