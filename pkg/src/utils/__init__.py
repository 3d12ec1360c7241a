"""Shared utilities for the Cremona prime-order oracle."""
