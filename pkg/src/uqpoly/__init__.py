"""Polynomial realizations of U_q(sl(n)) by q-difference operators."""

__version__ = "0.1.0"
