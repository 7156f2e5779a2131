"""HTTP transport layer: pydantic schemas and the FastAPI application."""

from .app import app

__all__ = ["app"]
