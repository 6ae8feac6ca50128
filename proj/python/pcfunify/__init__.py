"""Polynomial continued fraction canonicalization and coboundary matching."""

from ._pcfunify import (  # noqa: F401
    InputError,
    MathError,
    PrecisionError,
    canonicalize,
    cluster,
    delta,
    fold,
    guess_series,
    identify,
    limit,
    match,
    pi_cmf_is_conserving,
    rate,
    trajectory,
    verify,
)
