"""Replicated SAA and compromise tests."""
