"""Test suite for the Cremona prime-order oracle."""
