"""Reliability lab tests."""
