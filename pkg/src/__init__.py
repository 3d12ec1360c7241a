"""Cremona prime-order oracle: exact arithmetic for plane Cremona groups."""
