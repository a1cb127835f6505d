"""HTTP front end: pydantic envelopes around the shared handlers."""

from .app import create_app

__all__ = ["create_app"]
