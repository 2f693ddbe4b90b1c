"""QP kernel tests."""
