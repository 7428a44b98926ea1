"""purcell-pl: photoluminescence of quantum-dot ensembles in Purcell microcavities."""

__all__ = ["cli"]
__version__ = "0.1.0"
