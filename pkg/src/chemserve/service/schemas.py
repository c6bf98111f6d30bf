"""Pydantic models for the wire envelopes and error bodies."""

from __future__ import annotations

from pydantic import BaseModel


class PageMeta(BaseModel):
    limit: int
    offset: int
    total_count: int
    next: str | None = None
    previous: str | None = None


class ErrorBody(BaseModel):
    reason: str
    status: int
    errors: list[dict] | None = None  # per-line reports from utils handlers


class DescriptorModel(BaseModel):
    molecular_weight: float
    heavy_atom_count: int
    ring_count: int
    rotatable_bonds: int
    hbd: int
    hba: int
