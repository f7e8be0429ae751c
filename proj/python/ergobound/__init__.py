"""Computable geometric-ergodicity bounds for Markov chains."""

from ._core import (  # noqa: F401
    Error,
    InvalidInput,
    atomic_certificate,
    contracting_exact_tv,
    d_alpha,
    derive_model,
    kendall_bound,
    reproduce_table,
    split_certificate,
)

__all__ = [
    "Error",
    "InvalidInput",
    "atomic_certificate",
    "contracting_exact_tv",
    "d_alpha",
    "derive_model",
    "kendall_bound",
    "reproduce_table",
    "split_certificate",
]
