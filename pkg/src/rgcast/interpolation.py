"""Exact polynomial interpolation of past histories in the monomial basis.

The constant term is pinned to the anchor value (it is an identity of the
backward-recursion layout, not an unknown), and the remaining coefficients
come from Newton divided differences of the reduced problem
g(t) = (f(t) - f0) / t on the non-anchor nodes, expanded to monomials.
For orders up to ~6 with small-integer abscissae this is well conditioned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .series import PastHistory

# Relative residual allowed at the interpolation nodes; at order <= 6 a
# violation signals a bug, not conditioning.
NODE_TOLERANCE = 1e-9


class InterpolationError(ValueError):
    """The solved coefficients fail to reproduce the history nodes."""


@dataclass(frozen=True)
class PolynomialFit:
    """Monomial coefficients a_0..a_k interpolating a past history."""

    coefficients: tuple[float, ...]
    history: PastHistory

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1


def evaluate(fit: PolynomialFit, t: float) -> float:
    """Evaluate the fitted polynomial at t (Horner recurrence)."""
    acc = 0.0
    for coefficient in reversed(fit.coefficients):
        acc = acc * t + coefficient
    return acc


def fit(history: PastHistory) -> PolynomialFit:
    """Interpolate a past history exactly with k+1 monomial coefficients."""
    f0 = history.values[0]
    k = history.order
    if k == 0:
        return PolynomialFit(coefficients=(f0,), history=history)

    # Reduced problem: with a0 pinned to f0, f(t) = f0 + t*g(t) where g has
    # degree k-1 and g(t_n) = (f_n - f0) / t_n on the non-anchor nodes.
    nodes = history.times[1:]
    diffs = [(f - f0) / t for t, f in zip(nodes, history.values[1:])]

    # Newton divided differences in place: diffs[j] becomes g[t_1..t_{j+1}].
    for j in range(1, k):
        for i in range(k - 1, j - 1, -1):
            diffs[i] = (diffs[i] - diffs[i - 1]) / (nodes[i] - nodes[i - j])

    # Expand the Newton form to monomial coefficients of g.
    mono = [diffs[k - 1]]
    for j in range(k - 2, -1, -1):
        shifted = [0.0] * (len(mono) + 1)
        for power, coefficient in enumerate(mono):
            shifted[power + 1] += coefficient
            shifted[power] -= coefficient * nodes[j]
        shifted[0] += diffs[j]
        mono = shifted

    coefficients = (f0, *mono)
    result = PolynomialFit(coefficients=coefficients, history=history)

    # Distinct nodes make a singular system impossible; guard regardless.
    for t, f in history.points:
        residual = evaluate(result, t) - f
        if not math.isfinite(residual) or abs(residual) > NODE_TOLERANCE * abs(f):
            raise InterpolationError(
                f"node residual {residual:.3e} at t={t} exceeds tolerance "
                f"(history at anchor {history.anchor_index})"
            )
    return result
