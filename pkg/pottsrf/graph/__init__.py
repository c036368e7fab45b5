"""Graph construction and discrete calculus for pottsrf."""
