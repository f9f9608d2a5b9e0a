"""Worm epidemics in wireless sensor networks.

Simulate SEIRV dynamics (deterministic ODE and stochastic agents on a 2-D
grid), sweep configurations into synthetic datasets, preprocess them, and
benchmark regression algorithms at predicting compartment counts.
"""

__version__ = "0.1.0"

from .core import CompartmentState, EpidemicParams, effective_contact_rate, validate

__all__ = [
    "CompartmentState",
    "EpidemicParams",
    "effective_contact_rate",
    "validate",
    "__version__",
]
