"""Computation services: ingestion, fitting, diagnostics and reporting."""
