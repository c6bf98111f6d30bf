"""HTTP layer: FastAPI app, serializers, wire schemas."""

from chemserve.service.app import create_app

__all__ = ["create_app"]
