"""Adaptive panel quadrature with endpoint-singularity substitution.

Panels are certified by comparing a low-order and a high-order Gauss-Legendre
rule; an interval is accepted once the pair agrees within its share of the
tolerance, otherwise it is bisected.  Endpoints flagged as algebraically
singular are tamed first with the substitution t = a + u^kappa (kappa >= 2),
which turns t^(-q)-type behaviour into a C^1 integrand.

Integrands must be pure and vectorized over numpy arrays; panels are evaluated
in batches and accumulated in position order, so results do not depend on
evaluation order.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable

import numpy as np

from .errors import QuadratureFailure

_GL_LO = np.polynomial.legendre.leggauss(15)
_GL_HI = np.polynomial.legendre.leggauss(31)
_MAX_PANELS = 400_000
_BATCH_PANELS = 64


def _panel_nodes(lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, int, int]:
    """Concatenated low/high rule nodes for a batch of panels."""
    mid = 0.5 * (lo + hi)[:, None]
    half = 0.5 * (hi - lo)[:, None]
    x_lo = mid + half * _GL_LO[0][None, :]
    x_hi = mid + half * _GL_HI[0][None, :]
    return np.concatenate([x_lo, x_hi], axis=1), x_lo.shape[1], x_hi.shape[1]


def _integrate_plain(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float,
    max_depth: int,
) -> tuple[float, float]:
    if not (b > a):
        raise QuadratureFailure(f"empty interval [{a}, {b}]")
    length = b - a
    pending: list[tuple[float, float, int]] = [(a, b, 0)]
    accepted: list[tuple[float, float, float]] = []  # (lo, value, err)
    n_panels = 0
    while pending:
        batch = [pending.pop() for _ in range(min(_BATCH_PANELS, len(pending)))]
        n_panels += len(batch)
        if n_panels > _MAX_PANELS:
            raise QuadratureFailure("panel budget exhausted")
        lo = np.array([p[0] for p in batch])
        hi = np.array([p[1] for p in batch])
        xs, n_lo, n_hi = _panel_nodes(lo, hi)
        ys = np.asarray(f(xs.ravel()), dtype=float).reshape(xs.shape)
        if not np.all(np.isfinite(ys)):
            raise QuadratureFailure("integrand returned non-finite values")
        half = 0.5 * (hi - lo)
        q_lo = half * (ys[:, :n_lo] @ _GL_LO[1])
        q_hi = half * (ys[:, n_lo:] @ _GL_HI[1])
        err = np.abs(q_hi - q_lo)
        for i, (plo, phi, depth) in enumerate(batch):
            share = 0.5 * tol * (phi - plo) / length
            if err[i] <= share or err[i] <= 1e-300:
                accepted.append((plo, float(q_hi[i]), float(err[i])))
            elif depth >= max_depth:
                raise QuadratureFailure(
                    f"max depth {max_depth} reached on [{plo}, {phi}] "
                    f"(err~{err[i]:.3e} > {share:.3e})"
                )
            else:
                mid = 0.5 * (plo + phi)
                pending.append((plo, mid, depth + 1))
                pending.append((mid, phi, depth + 1))
    accepted.sort(key=lambda rec: rec[0])
    value = math.fsum(rec[1] for rec in accepted)
    err_total = math.fsum(rec[2] for rec in accepted)
    return value, err_total


def _substituted(f, a: float, sign: float, kappa: int):
    """Integrand after t = a + sign*u^kappa (sign=+1 for a left endpoint)."""

    def g(u: np.ndarray) -> np.ndarray:
        t = a + sign * u**kappa
        return np.asarray(f(t)) * (kappa * u ** (kappa - 1))

    return g


def integrate_adaptive(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float,
    singular_endpoints: Iterable[str] = (),
    kappa: int = 3,
    max_depth: int = 48,
) -> float:
    """Integral of f over [a, b] certified to absolute error <= tol.

    `singular_endpoints` may contain "a" and/or "b" to request the u^kappa
    substitution at that end; the integrand is then never evaluated at the
    endpoint itself (Gauss nodes are interior).
    """
    value, _ = integrate_adaptive_err(f, a, b, tol, singular_endpoints, kappa, max_depth)
    return value


def integrate_adaptive_err(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float,
    singular_endpoints: Iterable[str] = (),
    kappa: int = 3,
    max_depth: int = 48,
) -> tuple[float, float]:
    """As integrate_adaptive, also returning the accumulated error estimate."""
    sing = set(singular_endpoints)
    if kappa < 2:
        raise ValueError("kappa must be >= 2")
    if not sing:
        return _integrate_plain(f, a, b, tol, max_depth)
    if sing == {"a"}:
        g = _substituted(f, a, +1.0, kappa)
        return _integrate_plain(g, 0.0, (b - a) ** (1.0 / kappa), tol, max_depth)
    if sing == {"b"}:
        g = _substituted(f, b, -1.0, kappa)
        return _integrate_plain(g, 0.0, (b - a) ** (1.0 / kappa), tol, max_depth)
    if sing == {"a", "b"}:
        mid = 0.5 * (a + b)
        v1, e1 = integrate_adaptive_err(f, a, mid, tol / 2, {"a"}, kappa, max_depth)
        v2, e2 = integrate_adaptive_err(f, mid, b, tol / 2, {"b"}, kappa, max_depth)
        return v1 + v2, e1 + e2
    raise ValueError(f"unknown singular endpoint flags {sing!r}")
