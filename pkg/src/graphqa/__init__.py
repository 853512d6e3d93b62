"""Grounded question answering over an in-memory biomedical knowledge graph."""

__version__ = "0.1.0"
