"""Multi-version transcript alignment, WER decomposition and difference attribution."""

__version__ = "0.1.0"
