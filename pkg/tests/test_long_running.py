"""Flagged long-running jobs, opt-in via DTOWER_LONG=1.

These are not part of the acceptance gate; they take tens of minutes of
exact arithmetic.
"""

import os

import pytest

from dtower.diagonal import diag_series_expand, guess_operator, required_terms
from dtower.diffop import apply_to_series
from dtower.fixtures import load

LONG = os.environ.get("DTOWER_LONG") == "1"


@pytest.mark.skipif(not LONG, reason="set DTOWER_LONG=1 to run")
def test_minimal_operator_order6_degree55():
    """The diagonal of the bundled trivariate rational function satisfies
    a minimal-order ODE of order 6 with degree-55 coefficients; recover it
    from the series and verify it on held-out terms."""
    req = required_terms(6, 55)
    s = diag_series_expand(load("generic").payload, req + 30)
    L = guess_operator(s.truncate(req + 10), 6, 55)
    assert L is not None and not L.is_zero()
    assert L.order == 6
    res = apply_to_series(L, s)
    assert res.is_zero()
