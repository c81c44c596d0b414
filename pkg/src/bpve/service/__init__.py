"""Service layer: pydantic-typed handlers and the FastAPI application."""

from . import handlers
from .app import app

__all__ = ["app", "handlers"]
