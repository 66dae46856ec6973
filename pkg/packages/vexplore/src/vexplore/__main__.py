"""Entry point for python -m vexplore."""

from vexplore.cli.main import app

if __name__ == "__main__":
    app()
