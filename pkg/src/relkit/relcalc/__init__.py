from .calculus import FactorizationError, RelCalc, symbols

__all__ = ["FactorizationError", "RelCalc", "symbols"]
