"""Deterministic critic and evaluation toolkit for Cipai-constrained verse."""

__version__ = "0.1.0"
