"""Triangular kernel, its iterated self-convolutions, and Fourier transforms.

theta(x) = max(0, 1-|x|) and theta_n = theta_{n-1} * theta (n-fold
self-convolution) form the B-spline family: theta_n is an even, continuous
piecewise polynomial of degree 2n-1 supported on [-n, n] with unit mass, and

    theta_hat_n(t) = (sin(pi t) / (pi t))^(2n)  >=  0.

The nonnegativity of the transform is what every sup/recurrence argument in
the moment experiments leans on, so kernels are kept as exact rational
piecewise polynomials: normalization and continuity are certified in exact
arithmetic, and only evaluation converts to float64.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .errors import OrderTooLarge, QuadratureFailure
from .quad import integrate_adaptive_err

MAX_ORDER = 8

Poly = tuple[Fraction, ...]  # ascending coefficients


def _padd(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return tuple(
        (a[i] if i < len(a) else Fraction(0)) + (b[i] if i < len(b) else Fraction(0))
        for i in range(n)
    )


def _pscale(a: Poly, c: Fraction) -> Poly:
    return tuple(c * x for x in a)


def _pmul(a: Poly, b: Poly) -> Poly:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _pshift(a: Poly, c: int) -> Poly:
    """q with q(x) = a(x + c)."""
    out = [Fraction(0)] * len(a)
    for k, coef in enumerate(a):
        if coef:
            for j in range(k + 1):
                out[j] += coef * comb(k, j) * Fraction(c) ** (k - j)
    return tuple(out)


def _pantideriv(a: Poly) -> Poly:
    return (Fraction(0),) + tuple(coef / (k + 1) for k, coef in enumerate(a))


def _peval(a: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for coef in reversed(a):
        acc = acc * x + coef
    return acc


def theta(x):
    """Triangular kernel max(0, 1 - |x|); scalar or numpy array."""
    x = np.asarray(x, dtype=float)
    out = np.maximum(0.0, 1.0 - np.abs(x))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class PiecewiseKernel:
    """Exact piecewise-polynomial representation of theta_n.

    pieces[m] holds ascending rational coefficients valid on [m, m+1],
    for integer m in [-n, n-1].
    """

    n: int
    pieces: dict[int, Poly]

    def eval_exact(self, x: Fraction) -> Fraction:
        x = Fraction(x)
        if x <= -self.n or x >= self.n:
            return Fraction(0)
        m = x.numerator // x.denominator  # floor
        m = min(max(m, -self.n), self.n - 1)
        return _peval(self.pieces[m], x)

    def __call__(self, x):
        """float64 evaluation, vectorized."""
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        m = np.clip(np.floor(x).astype(int), -self.n, self.n - 1)
        out = np.zeros_like(x)
        inside = np.abs(x) < self.n
        coeffs = self._coeff_matrix()
        idx = m[inside] + self.n
        xv = x[inside]
        acc = np.zeros_like(xv)
        for k in range(coeffs.shape[1] - 1, -1, -1):
            acc = acc * xv + coeffs[idx, k]
        out[inside] = acc
        return float(out[0]) if scalar else out

    def _coeff_matrix(self) -> np.ndarray:
        cached = getattr(self, "_floats", None)
        if cached is None:
            deg = max(len(c) for c in self.pieces.values())
            cached = np.zeros((2 * self.n, deg))
            for m, poly in self.pieces.items():
                for k, coef in enumerate(poly):
                    cached[m + self.n, k] = float(coef)
            object.__setattr__(self, "_floats", cached)
        return cached

    def integral_exact(self) -> Fraction:
        total = Fraction(0)
        for m, poly in self.pieces.items():
            anti = _pantideriv(poly)
            total += _peval(anti, Fraction(m + 1)) - _peval(anti, Fraction(m))
        return total

    def continuity_defects(self) -> list[Fraction]:
        """Exact jump at every interior breakpoint (all zero for theta_n)."""
        out = []
        for m in range(-self.n + 1, self.n):
            left = self.pieces.get(m - 1)
            right = self.pieces.get(m)
            lval = _peval(left, Fraction(m)) if left else Fraction(0)
            rval = _peval(right, Fraction(m)) if right else Fraction(0)
            out.append(rval - lval)
        # support endpoints must close to zero as well
        out.append(_peval(self.pieces[-self.n], Fraction(-self.n)))
        out.append(_peval(self.pieces[self.n - 1], Fraction(self.n)))
        return out


def _convolve_with_triangle(n_old: int, pieces: dict[int, Poly]) -> dict[int, Poly]:
    """Exact (f * theta)(x) for f given piecewise on [-n_old, n_old]."""
    zero: Poly = (Fraction(0),)

    # cumulative antiderivatives F0 = int f, F1 = int t f(t) dt
    a0: dict[int, Poly] = {}
    a1: dict[int, Poly] = {}
    c0 = Fraction(0)
    c1 = Fraction(0)
    for m in range(-n_old, n_old):
        poly = pieces[m]
        anti0 = _pantideriv(poly)
        anti1 = _pantideriv(_pmul((Fraction(0), Fraction(1)), poly))
        off0 = c0 - _peval(anti0, Fraction(m))
        off1 = c1 - _peval(anti1, Fraction(m))
        a0[m] = _padd(anti0, (off0,))
        a1[m] = _padd(anti1, (off1,))
        c0 = _peval(a0[m], Fraction(m + 1))
        c1 = _peval(a1[m], Fraction(m + 1))
    total0, total1 = c0, c1

    def f0(m: int) -> Poly:
        if m < -n_old:
            return zero
        if m >= n_old:
            return (total0,)
        return a0[m]

    def f1(m: int) -> Poly:
        if m < -n_old:
            return zero
        if m >= n_old:
            return (total1,)
        return a1[m]

    one_minus_x: Poly = (Fraction(1), Fraction(-1))
    one_plus_x: Poly = (Fraction(1), Fraction(1))
    out: dict[int, Poly] = {}
    for m in range(-n_old - 1, n_old + 1):
        # (f*theta)(x) = (1-x)[F0(x)-F0(x-1)] + [F1(x)-F1(x-1)]
        #              + (1+x)[F0(x+1)-F0(x)] - [F1(x+1)-F1(x)]
        f0_here = f0(m)
        d_lo0 = _padd(f0_here, _pscale(_pshift(f0(m - 1), -1), Fraction(-1)))
        d_lo1 = _padd(f1(m), _pscale(_pshift(f1(m - 1), -1), Fraction(-1)))
        d_hi0 = _padd(_pshift(f0(m + 1), +1), _pscale(f0_here, Fraction(-1)))
        d_hi1 = _padd(_pshift(f1(m + 1), +1), _pscale(f1(m), Fraction(-1)))
        poly = _padd(
            _padd(_pmul(one_minus_x, d_lo0), d_lo1),
            _padd(_pmul(one_plus_x, d_hi0), _pscale(d_hi1, Fraction(-1))),
        )
        out[m] = poly
    return out


_KERNEL_CACHE: dict[int, PiecewiseKernel] = {}


def build_theta_n(n: int) -> PiecewiseKernel:
    """Exact theta_n by repeated symbolic convolution with the triangle."""
    if not (1 <= n <= MAX_ORDER):
        raise OrderTooLarge(f"kernel order {n} outside [1, {MAX_ORDER}]")
    if n in _KERNEL_CACHE:
        return _KERNEL_CACHE[n]
    pieces: dict[int, Poly] = {
        -1: (Fraction(1), Fraction(1)),
        0: (Fraction(1), Fraction(-1)),
    }
    order = 1
    while order < n:
        pieces = _convolve_with_triangle(order, pieces)
        order += 1
    kern = PiecewiseKernel(n=n, pieces=pieces)
    _KERNEL_CACHE[n] = kern
    return kern


def bspline_closed_form(n: int, x: Fraction) -> Fraction:
    """Independent truncated-power formula for theta_n (centered 2n-fold
    convolution of the unit-interval indicator):

        theta_n(x) = 1/(2n-1)! * sum_j (-1)^j C(2n, j) (x + n - j)_+^(2n-1)
    """
    x = Fraction(x)
    acc = Fraction(0)
    for j in range(2 * n + 1):
        base = x + n - j
        if base > 0:
            acc += (-1) ** j * comb(2 * n, j) * base ** (2 * n - 1)
    return acc / factorial(2 * n - 1)


def theta_hat_n(t, n: int):
    """Fourier transform (sin(pi t)/(pi t))^(2n) with a series branch near 0.

    The removable singularity returns exactly 1 at t = 0; for |t| < 1e-4 a
    truncated even series of the 2n-th sinc power avoids cancellation noise.
    """
    if n < 1:
        raise OrderTooLarge("kernel order must be >= 1")
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    out = np.empty_like(t)
    small = np.abs(t) < 1e-4
    if np.any(small):
        u = (np.pi * t[small]) ** 2
        # sinc^2 = 1 - v with v = u/3 - 2u^2/45 + O(u^3); expand (1-v)^n
        v = u / 3.0 - 2.0 * u**2 / 45.0
        out[small] = 1.0 - n * v + 0.5 * n * (n - 1) * v**2
    big = ~small
    if np.any(big):
        out[big] = np.sinc(t[big]) ** (2 * n)
    return float(out[0]) if scalar else out


def fourier_cross_check(
    n: int, t_grid, quad_tol: float = 1e-9, max_depth: int = 40
) -> float:
    """Max deviation between the numeric Fourier transform of theta_n and the
    closed form theta_hat_n over the grid.

    The transform integral reduces by evenness to 2 * int_0^n cos(2 pi t x)
    theta_n(x) dx, evaluated by certified adaptive quadrature.
    """
    kern = build_theta_n(n)
    worst = 0.0
    for t in np.atleast_1d(np.asarray(t_grid, dtype=float)):

        def f(x, _t=t):
            return np.cos(2.0 * np.pi * _t * x) * kern(x)

        val, err = integrate_adaptive_err(f, 0.0, float(n), quad_tol / 2, max_depth=max_depth)
        if err > quad_tol:
            raise QuadratureFailure(f"could not certify tol {quad_tol} at t={t}")
        dev = abs(2.0 * val - theta_hat_n(float(t), n))
        worst = max(worst, dev)
    return worst
