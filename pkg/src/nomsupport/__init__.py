"""Support-verb discovery for nominalizations from raw text corpora."""

__version__ = "0.1.0"
