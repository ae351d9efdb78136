"""Shared result container for the transform and integration routes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .exact import ExactValue


@dataclass(frozen=True)
class TransformResult:
    """Outcome of a route: optional exact value, numeric shadow, provenance.

    When ``exact`` is present, ``approx`` is its numeric shadow evaluated
    to well past double precision; routes without a closed form fill only
    ``approx``.  ``diagnostics`` carries truncation orders, regularization
    parameters, convergence verdicts and the attempted-route log.
    """

    approx: float
    method: str
    formula: str
    exact: Optional[ExactValue] = None
    diagnostics: dict = field(default_factory=dict)

    @staticmethod
    def from_exact(value: ExactValue, method: str, formula: str,
                   diagnostics: Optional[dict] = None) -> "TransformResult":
        return TransformResult(float(value), method, formula, value,
                               dict(diagnostics or {}))
