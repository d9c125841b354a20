"""FastAPI service exposing the model checker over HTTP."""

from .app import app, create_app

__all__ = ["app", "create_app"]
