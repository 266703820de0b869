"""ratebench: benchmark review-rating pipelines and score their interpretability."""

__version__ = "0.1.0"
