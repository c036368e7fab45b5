"""Class probabilities, region forces and centroid initialization."""
