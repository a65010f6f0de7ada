"""Entry point for python -m dglm."""

from dglm.cli import app

if __name__ == "__main__":
    app()
