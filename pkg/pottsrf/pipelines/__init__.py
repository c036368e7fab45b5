"""End-to-end segmentation and clustering pipelines."""
