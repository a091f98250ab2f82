"""Numerical kernels: Gaussian Q, erf, Marcum Q of order 1/2, Gauss-Chebyshev
quadrature, and a generic adaptive quadrature used as the brute-force oracle.

Everything here is pure and reentrant.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable

import numpy as np
from scipy import integrate as _integrate
from scipy import special as _special

__all__ = [
    "GcqRule",
    "QuadResult",
    "NumericalError",
    "q_func",
    "erf",
    "marcum_q_half",
    "gcq_rule",
    "gcq_integrate",
    "adaptive_quad",
]


class NumericalError(RuntimeError):
    """Raised when a quadrature fails to converge; carries the best estimate."""

    def __init__(self, message: str, best_estimate: float | None = None):
        super().__init__(message)
        self.best_estimate = best_estimate


_SQRT2 = math.sqrt(2.0)


def q_func(x):
    """Gaussian tail probability Q(x) = 0.5*erfc(x/sqrt(2)).

    Accepts scalars or arrays; monotone decreasing with range (0, 1).
    """
    return 0.5 * _special.erfc(np.asarray(x, dtype=float) / _SQRT2)


def erf(x):
    """Error function; odd, bounded by 1, and erf(x) = 1 - 2*Q(sqrt(2)*x)."""
    return _special.erf(np.asarray(x, dtype=float))


def marcum_q_half(a: float, b: float) -> float:
    """Marcum Q of order 1/2 through the identity Q_{1/2}(a,b) = Q(b-a) + Q(b+a).

    Both arguments must be nonnegative.  At b = 0 the value is exactly 1.
    """
    if a < 0 or b < 0:
        raise ValueError(f"marcum_q_half requires a >= 0 and b >= 0, got a={a}, b={b}")
    return float(q_func(b - a) + q_func(b + a))


@dataclasses.dataclass(frozen=True)
class GcqRule:
    """Gauss-Chebyshev quadrature rule of the first kind on (-1, 1).

    ``nodes`` are cos((2q-1)*pi/(2*order)) for q = 1..order, strictly
    decreasing.  The de-weighted (unit-weight) quadrature uses the
    interpolatory weights belonging to these abscissae, which behave like
    (pi/order)*sqrt(1 - node_q**2) for large order but integrate every
    polynomial of degree < order exactly; constants give 2 at any order.
    """

    order: int
    nodes: np.ndarray

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"order must be a positive integer, got {self.order}")
        expected = np.cos((2 * np.arange(1, self.order + 1) - 1) * np.pi / (2 * self.order))
        if self.nodes.shape != (self.order,) or not np.allclose(self.nodes, expected, rtol=0, atol=1e-15):
            raise ValueError("nodes must be the Chebyshev abscissae for this order")

    @property
    def weights(self) -> np.ndarray:
        """Interpolatory quadrature weights for the Chebyshev abscissae,
        asymptotically (pi/order)*sqrt(1 - x^2)."""
        n = self.order
        theta = (2 * np.arange(1, n + 1) - 1) * np.pi / (2 * n)
        m = np.arange(1, n // 2 + 1)
        if m.size:
            corr = (np.cos(2.0 * np.outer(theta, m)) / (4.0 * m * m - 1.0)).sum(axis=1)
        else:
            corr = 0.0
        return (2.0 / n) * (1.0 - 2.0 * corr)


def gcq_rule(order: int) -> GcqRule:
    """Build the Gauss-Chebyshev rule with the given number of nodes."""
    if order < 1:
        raise ValueError(f"order must be a positive integer, got {order}")
    nodes = np.cos((2 * np.arange(1, order + 1) - 1) * np.pi / (2 * order))
    return GcqRule(order=order, nodes=nodes)


def gcq_integrate(f: Callable[[np.ndarray], np.ndarray], rule: GcqRule) -> float:
    """Integrate f over [-1, 1] with the Gauss-Chebyshev rule.

    ``f`` is evaluated on the node vector at once and must return finite
    values at every node.  The quadrature error term is not estimated.
    """
    values = np.asarray(f(rule.nodes), dtype=float)
    if values.shape != rule.nodes.shape:
        values = np.broadcast_to(values, rule.nodes.shape)
    bad = ~np.isfinite(values)
    if bad.any():
        node = rule.nodes[bad][0]
        raise NumericalError(f"integrand is not finite at node {node!r}")
    return float(np.sum(rule.weights * values))


@dataclasses.dataclass(frozen=True)
class QuadResult:
    """Adaptive quadrature outcome: value, error bound, evaluation count."""

    value: float
    abs_error_estimate: float
    evaluations: int

    def __post_init__(self):
        if self.abs_error_estimate < 0:
            raise ValueError("abs_error_estimate must be nonnegative")
        if self.evaluations < 1:
            raise ValueError("evaluations must be at least 1")


def adaptive_quad(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-10,
    rel_tol: float = 1e-12,
    limit: int = 400,
) -> QuadResult:
    """Adaptively integrate f on [lo, hi] to absolute tolerance ``tol``.

    Infinite integrands must be truncated by the caller (integrands in this
    repo are Gaussian-tailed, so a cutoff where the integrand falls below
    1e-16 of its peak is standard).  Convergence means the reported error
    bound satisfies ``abs_error_estimate <= max(tol, rel_tol*|value|)``;
    otherwise a :class:`NumericalError` carrying the best estimate is raised.
    """
    if not lo < hi:
        raise ValueError(f"adaptive_quad requires lo < hi, got [{lo}, {hi}]")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    value, abserr, info = _integrate.quad(
        f, lo, hi, epsabs=tol, epsrel=rel_tol, limit=limit, full_output=True
    )[:3]
    evaluations = int(info["neval"])
    if abserr > max(tol, rel_tol * abs(value)) * 1.0000001:
        raise NumericalError(
            f"quadrature did not converge: error estimate {abserr:.3e} above tolerance {tol:.3e}",
            best_estimate=float(value),
        )
    return QuadResult(value=float(value), abs_error_estimate=float(abserr), evaluations=evaluations)
