"""Run ``harness.main`` from the repository root."""

from harness.main import main

if __name__ == "__main__":
    raise SystemExit(main())
