"""Core module for pottsrf."""
