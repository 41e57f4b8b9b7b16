"""
Scenario runner entry point.

Thin wrapper around the package CLI for running from a source checkout
without installing the console script.

Usage::

    uv run main.py run scenarios/optimal.json
    uv run main.py run scenarios/attractor.json --t-final 30 --dt 0.01
    uv run main.py validate scenarios/isoenergetic.json
    uv run main.py list-scenarios
"""
import sys

sys.path.append("src")

from qmexchange.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
