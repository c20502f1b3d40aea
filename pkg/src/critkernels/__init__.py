"""Critical eigenvalue-correlation kernels of the quartic/quadratic two-matrix model."""

__version__ = "0.1.0"
