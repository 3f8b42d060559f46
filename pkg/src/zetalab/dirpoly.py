"""Smoothed Dirichlet polynomials and their growth/stability checks.

For exponent p, kernel order n and scale N, the smoothed polynomial has
coefficients

    c_j = d_p(j) * [lambda(j) if signed] * theta_n(log j / N),   1 <= j <= exp(nN),

so its value at 1 + it is a finite, entire trigonometric sum.  On Re(s) > 1 it
equals the kernel-convolution of zeta(s)^p (signed: of (zeta(2s)/zeta(s))^p)
against theta_hat_n, which is what convolution_repr_check verifies by
independent quadrature.

The unsigned p >= 1 polynomials reproduce the pole profile t^-p in the window
1/N << t << 1, which makes int_0^delta |...| dt grow like log N (p = 1) or
N^(p-1) (p > 1): the growth engine behind the unboundedness experiments.
Shift stability against diophantine shifts is evaluated through exact per-j
phases, so shifts far beyond float range remain usable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CapacityError, DomainError
from .kernels import build_theta_n, theta_hat_n
from .quad import integrate_adaptive_err
from .sieve import SpfTable, cached_coefficient_table
from .zeta import DEFAULT_CONFIG, ComplexValue, EvalConfig, zeta_batch, zeta_pow

DEFAULT_COEFF_BUDGET = 100_000_000


@dataclass(frozen=True)
class SmoothedPolynomial:
    p: float
    n: int
    N: float
    signed: bool
    cutoff: int
    coeffs: np.ndarray  # c_j at index j; index 0 unused
    log_table: np.ndarray  # log j at index j; log_table[0] = 0

    @property
    def weights(self) -> np.ndarray:
        """c_j / j for j >= 1 (the 1-line amplitudes)."""
        w = getattr(self, "_w", None)
        if w is None:
            w = self.coeffs[1:] / np.arange(1, self.cutoff + 1)
            object.__setattr__(self, "_w", w)
        return w

    @property
    def abs_weight_sum(self) -> float:
        return float(np.sum(np.abs(self.weights)))


def build_smoothed(
    p: float,
    n: int,
    N: float,
    signed: bool,
    spf: SpfTable,
    budget: int = DEFAULT_COEFF_BUDGET,
    cache_dir: Path | None = None,
) -> SmoothedPolynomial:
    """Materialize the coefficient array c_j up to cutoff = floor(exp(nN))."""
    if n < 1:
        raise DomainError("kernel order n must be >= 1")
    cutoff = int(math.floor(math.exp(n * N)))
    if cutoff > budget:
        raise CapacityError(f"cutoff {cutoff} exceeds coefficient budget {budget}")
    if cutoff > spf.limit:
        raise CapacityError(f"cutoff {cutoff} exceeds sieve limit {spf.limit}")
    tab = cached_coefficient_table(cutoff, p, signed, spf, cache_dir)
    kern = build_theta_n(n)
    logs = np.zeros(cutoff + 1)
    logs[1:] = np.log(np.arange(1, cutoff + 1, dtype=float))
    coeffs = tab.values * kern(logs / N)
    coeffs[0] = 0.0
    return SmoothedPolynomial(
        p=p, n=n, N=N, signed=signed, cutoff=cutoff, coeffs=coeffs, log_table=logs
    )


_CHUNK = 1 << 17


def eval_grid(poly: SmoothedPolynomial, ts: np.ndarray, phase_shift: np.ndarray | None = None) -> np.ndarray:
    """sum_j c_j j^-1 e^{-i t log j} over an array of t.

    phase_shift, when given, multiplies term j by e^{-2 pi i phase_shift[j-1]}
    (the exact-phase route for huge diophantine shifts).  Chunked with
    compensated combination of partial sums.
    """
    ts = np.asarray(ts, dtype=float)
    w = poly.weights.astype(complex)
    if phase_shift is not None:
        w = w * np.exp(-2j * np.pi * np.asarray(phase_shift))
    logs = poly.log_table[1:]
    parts_re = [np.zeros_like(ts)]
    parts_im = [np.zeros_like(ts)]
    for lo in range(0, poly.cutoff, _CHUNK):
        hi = min(poly.cutoff, lo + _CHUNK)
        ph = np.multiply.outer(ts, logs[lo:hi])
        cos = np.cos(ph)
        sin = np.sin(ph, out=ph)
        wr, wi = w[lo:hi].real, w[lo:hi].imag
        # (cos - i sin)(wr + i wi)
        parts_re.append(cos @ wr + sin @ wi)
        parts_im.append(cos @ wi - sin @ wr)
    re = np.sum(np.stack(parts_re), axis=0)
    im = np.sum(np.stack(parts_im), axis=0)
    return re + 1j * im


def eval_smoothed(poly: SmoothedPolynomial, t: float) -> ComplexValue:
    """Single-point evaluation with a reported rounding bound."""
    v = complex(eval_grid(poly, np.array([float(t)]))[0])
    err = poly.cutoff * float(np.finfo(float).eps) * poly.abs_weight_sum
    return ComplexValue(re=v.real, im=v.imag, abs_err=err)


def convolution_values(
    p: float,
    n: int,
    N: float,
    s: complex,
    tol: float,
    cfg: EvalConfig = DEFAULT_CONFIG,
    signed: bool = False,
) -> tuple[float, float]:
    """Quadrature of the kernel convolution

        int f(s + 2 pi i x / N)^p theta_hat_n(x) dx

    with f = zeta (unsigned) or zeta(2s)/zeta(s) (signed), on Re(s) > 1.
    With the e^(-2 pi i tau x) transform convention this is the exact partner
    of the coefficient stream d_p(j) theta_n(log j / N): the inverse transform
    of theta_hat_n lands on theta_n(log j / N) only with the 2 pi in the
    frequency shift.

    Returns (real, imag).  The integration range is truncated where the
    transform tail is below tol/4.
    """
    s = complex(s)
    if s.real <= 1.0:
        raise DomainError("convolution representation requires Re(s) > 1")
    from .zeta import zeta as zeta_scalar

    def x_for(tail_scale: float) -> float:
        return max(
            float(n),
            (2.0 * tail_scale / ((2 * n - 1) * math.pi ** (2 * n) * (tol / 4.0)))
            ** (1.0 / (2 * n - 1)),
        )

    scale = abs(zeta_scalar(complex(s.real, 0.0), cfg).z) ** abs(p)
    x_cut = x_for(scale)
    # With the slowly decaying first-order transform, handle the head of the
    # Dirichlet series in closed form (exact single-frequency transform values
    # theta_n(log j / N)) and integrate only zeta - head, whose uniform bound
    # sum_{j>J} j^-sigma <= J^(1-sigma)/(sigma-1) shrinks the range.  Only the
    # p = 1 unsigned case both needs this and has an exact coefficient tail.
    head_j = 0
    if x_cut > 200.0 and p == 1.0 and not signed:
        kern = build_theta_n(n)
        for cand in (64, 512, 4096):
            eps_j = cand ** (1.0 - s.real) / (s.real - 1.0)
            if x_for(eps_j) <= 200.0 or cand == 4096:
                head_j = cand
                x_cut = x_for(eps_j)
                break
        js = np.arange(2, head_j + 1, dtype=float)
        head_logs = np.log(js)
        head_exact = complex(
            np.sum(np.exp(-s * head_logs) * kern(head_logs / N))
        ) + kern(0.0)
    int_p = p == int(p)

    def f_complex(xs: np.ndarray) -> np.ndarray:
        ts = s.imag + 2.0 * math.pi * xs / N
        if signed:
            num, _ = zeta_batch(2.0 * s.real, 2.0 * ts, cfg, tol * 1e-3)
            den, _ = zeta_batch(s.real, ts, cfg, tol * 1e-3)
            base = num / den
        else:
            base, _ = zeta_batch(s.real, ts, cfg, tol * 1e-3)
        if int_p:
            vals = base ** int(p)
        else:
            from .zeta import log_zeta_full

            def one(t: float) -> complex:
                lz = log_zeta_full(complex(s.real, t), cfg).z
                if signed:
                    lz = log_zeta_full(complex(2 * s.real, 2 * t), cfg).z - lz
                return complex(np.exp(p * lz))

            vals = np.array([one(float(t)) for t in ts])
        if head_j:
            sv = s.real + 1j * ts
            head = np.ones_like(vals)
            for lo in range(0, head_j - 1, 4096):
                js = np.arange(2 + lo, min(head_j + 1, 2 + lo + 4096), dtype=float)
                head += np.exp(-np.multiply.outer(sv, np.log(js))) @ np.ones(len(js))
            vals = vals - head
        return vals * theta_hat_n(xs, n)

    re, _ = integrate_adaptive_err(lambda x: f_complex(x).real, -x_cut, x_cut, tol / 4)
    im, _ = integrate_adaptive_err(lambda x: f_complex(x).imag, -x_cut, x_cut, tol / 4)
    if head_j:
        return re + head_exact.real, im + head_exact.imag
    return re, im


@dataclass(frozen=True)
class ConvCheckResult:
    deviation: float
    sum_value: complex
    quad_value: complex
    sum_err: float
    quad_err: float


def convolution_repr_check(
    p: float,
    n: int,
    N: float,
    s: complex,
    tol: float,
    spf: SpfTable,
    cfg: EvalConfig = DEFAULT_CONFIG,
    signed: bool = False,
) -> ConvCheckResult:
    """Deviation between the Dirichlet-sum and kernel-convolution values of the
    same smoothed object at Re(s) > 1, with both error bounds reported."""
    s = complex(s)
    poly = build_smoothed(p, n, N, signed, spf)
    js = np.arange(1, poly.cutoff + 1, dtype=float)
    sum_val = complex(np.sum(poly.coeffs[1:] * np.exp(-s * np.log(js))))
    sum_err = poly.cutoff * float(np.finfo(float).eps) * float(
        np.sum(np.abs(poly.coeffs[1:]) * js**-s.real)
    )
    re, im = convolution_values(p, n, N, s, tol, cfg, signed)
    quad = complex(re, im)
    return ConvCheckResult(
        deviation=abs(sum_val - quad),
        sum_value=sum_val,
        quad_value=quad,
        sum_err=sum_err,
        quad_err=tol,
    )


def pole_window_profile(
    poly: SmoothedPolynomial, t_grid: np.ndarray
) -> list[tuple[float, float]]:
    """(t, |value at 1+it| * t^p) over the grid; flat near 1 in the window
    1/N << t << 1 for unsigned p >= 1 with n > p/2."""
    if poly.signed or poly.p < 1.0:
        raise DomainError("profile applies to unsigned polynomials with p >= 1")
    if not poly.n > poly.p / 2.0:
        raise DomainError("profile requires n > p/2")
    ts = np.asarray(t_grid, dtype=float)
    vals = np.abs(eval_grid(poly, ts)) * ts**poly.p
    return list(zip(ts.tolist(), vals.tolist()))


def lower_bound_integral(
    poly: SmoothedPolynomial, delta: float, tol: float = 1e-6
) -> float:
    """int_0^delta |value at 1+it| dt by quadrature (entire integrand)."""

    def f(ts: np.ndarray) -> np.ndarray:
        return np.abs(eval_grid(poly, ts))

    val, _ = integrate_adaptive_err(f, 0.0, delta, tol)
    return val


def shift_stability(
    poly: SmoothedPolynomial,
    phase_shift: np.ndarray,
    t_grid: np.ndarray,
    unsigned_ref: SmoothedPolynomial | None = None,
) -> float:
    """Max over the grid of |Z(1 + iT + it) - Zref(1 + it)|.

    phase_shift carries the exact fractional parts of T log j / 2pi.  By
    default the reference is the polynomial itself; for the sign-flip route
    pass the unsigned reference polynomial.
    """
    ts = np.asarray(t_grid, dtype=float)
    ref = poly if unsigned_ref is None else unsigned_ref
    shifted = eval_grid(poly, ts, phase_shift=phase_shift)
    base = eval_grid(ref, ts)
    return float(np.max(np.abs(shifted - base)))
