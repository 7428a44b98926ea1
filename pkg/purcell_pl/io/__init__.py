"""Artefact emission: CSV tables, SVG plots and atomic writes."""

from .csv_adapter import SpectrumCSVAdapter, SpectrumTable, SweepCSVAdapter
from .files import atomic_write_bytes, atomic_write_text

__all__ = [
    "SpectrumCSVAdapter",
    "SpectrumTable",
    "SweepCSVAdapter",
    "atomic_write_bytes",
    "atomic_write_text",
]
