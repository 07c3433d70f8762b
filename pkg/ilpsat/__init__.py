"""ILP presolve as a preprocessor for weighted partial MaxSAT."""

__version__ = "0.1.0"
