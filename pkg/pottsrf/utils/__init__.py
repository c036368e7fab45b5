"""Utility modules for pottsrf."""
