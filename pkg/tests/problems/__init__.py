"""Tests for desk problems, problem documents and ground truth."""
