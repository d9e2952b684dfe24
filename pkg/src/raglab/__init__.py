"""Random algebraic graphs over finite groups: samplers, exact Boolean-Fourier
quantities, indistinguishability bounds and detection experiments."""

__version__ = "0.1.0"
