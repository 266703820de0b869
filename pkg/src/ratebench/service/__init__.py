"""HTTP service exposing the workbench."""

from .app import app, create_app

__all__ = ["app", "create_app"]
