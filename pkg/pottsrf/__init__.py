"""pottsrf - Convex-relaxed Potts model with Bernoulli region forces."""

__version__ = "0.1.0"
