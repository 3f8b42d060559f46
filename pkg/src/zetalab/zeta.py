"""Riemann zeta evaluation on the closed half-plane Re(s) >= 1.

The workhorse is Euler-Maclaurin summation

    zeta(s) = sum_{n<N} n^-s + N^(1-s)/(s-1) + N^-s/2
            + sum_{k=1..K} B_2k/(2k)! * (s)(s+1)...(s+2k-2) * N^(-s-2k+1) + R_K,

with the classical remainder bound |R_K| <= |T_{K+1}| * |s+2K+1| / (sigma+2K+1).
The cutoff N scales with |Im s| so the Bernoulli tail stays geometric, and the
cutoff is escalated automatically until the requested absolute error is
certified (or PrecisionUnreachable is raised).  Everything is vectorized over
batches of imaginary parts sharing one real part, which is what the moment
quadratures feed.

All operations are pure; binary64 throughout, with oversampled parameters (not
extended precision) used for oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import DomainError, PoleProximity, PrecisionUnreachable
from .sieve import sieve_spf

EULER_GAMMA = 0.5772156649015329

# |zeta(s) - 1/(s-1) - gamma| <= LAURENT_SLOPE * |s-1| on |s-1| <= 1/4
# (Stieltjes tail: |g1| + |g2|/2! * 1/4 + |g3|/3! * 1/16 + ... < 0.0741)
LAURENT_SLOPE = 0.08
LAURENT_RADIUS = 0.25


@dataclass(frozen=True)
class ComplexValue:
    """A complex result with the absolute error bound of its producer."""

    re: float
    im: float
    abs_err: float

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise PrecisionUnreachable("non-finite value produced")

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)

    def __complex__(self) -> complex:
        return self.z


@dataclass(frozen=True)
class EvalConfig:
    target_abs_err: float = 1e-12
    euler_maclaurin_cutoff: int = 30
    bernoulli_terms: int = 24
    pole_radius: float = 1e-3

    def __post_init__(self):
        if self.target_abs_err <= 0:
            raise ValueError("target_abs_err must be > 0")
        if self.euler_maclaurin_cutoff < 10:
            raise ValueError("euler_maclaurin_cutoff must be >= 10")
        if self.bernoulli_terms < 2:
            raise ValueError("bernoulli_terms must be >= 2")
        if self.pole_radius <= 0:
            raise ValueError("pole_radius must be > 0")


DEFAULT_CONFIG = EvalConfig()

_N_CHUNK = 1 << 16
_WORK_LIMIT = 600_000_000  # total n-terms across escalations per batch call

_bern_fac: list[float] = []  # B_{2k}/(2k)! for k = 0, 1, 2, ...


def _bern_over_fact(k: int) -> float:
    while len(_bern_fac) <= k:
        j = len(_bern_fac)
        _bern_fac.append(float(mpmath.bernoulli(2 * j) / mpmath.factorial(2 * j)))
    return _bern_fac[k]


def _em_cutoff(t_max: float, cfg: EvalConfig) -> int:
    # |t|/4 keeps the Bernoulli term ratio ~ (4/(2 pi))^2 ~ 0.41 per step
    return max(cfg.euler_maclaurin_cutoff, int(math.ceil(2.0 + t_max / 4.0)))


def zeta_batch(
    sigma: float,
    ts: np.ndarray,
    cfg: EvalConfig = DEFAULT_CONFIG,
    target_abs_err: float | None = None,
) -> tuple[np.ndarray, float]:
    """zeta(sigma + i t) for an array of t sharing one sigma >= 1.

    Returns (values, certified absolute error bound).  No pole guard: callers
    integrating across the pole handle the 1/(s-1) blowup themselves; the
    formula itself is exact arbitrarily close to s = 1.
    """
    if sigma < 1.0 - 1e-12:
        raise DomainError(f"Re(s) = {sigma} < 1 unsupported")
    ts = np.asarray(ts, dtype=float)
    if ts.size == 0:
        return np.zeros(0, dtype=complex), 0.0
    target = cfg.target_abs_err if target_abs_err is None else target_abs_err
    t_max = float(np.max(np.abs(ts)))
    n_cut = _em_cutoff(t_max, cfg)
    work = 0
    while True:
        work += n_cut * ts.size
        if work > _WORK_LIMIT:
            raise PrecisionUnreachable(
                f"term budget exhausted before certifying {target:.2e}"
            )
        vals, rem_bound, rounding = _em_eval(sigma, ts, n_cut, cfg.bernoulli_terms, target)
        # escalation is driven by the analytic remainder; the float-rounding
        # floor is irreducible and is reported, not retried against
        if rem_bound <= 0.5 * target:
            return vals, rem_bound + rounding
        n_cut = int(n_cut * 1.8) + 16


_term_cache: dict[float, tuple[np.ndarray, np.ndarray]] = {}


def _terms(sigma: float, n_cut: int) -> tuple[np.ndarray, np.ndarray]:
    """Cached (n^-sigma, log n) for n = 1..n_cut-1, grown geometrically."""
    amps, logs = _term_cache.get(sigma, (np.empty(0), np.empty(0)))
    if amps.size < n_cut - 1:
        grow = max(n_cut - 1, 2 * amps.size, 4096)
        ns = np.arange(1, grow + 1, dtype=float)
        amps, logs = ns**-sigma, np.log(ns)
        if len(_term_cache) > 12:
            _term_cache.clear()
        _term_cache[sigma] = (amps, logs)
    return amps[: n_cut - 1], logs[: n_cut - 1]


def _em_eval(
    sigma: float, ts: np.ndarray, n_cut: int, k_max: int, target: float
) -> tuple[np.ndarray, float, float]:
    s = sigma + 1j * ts
    total = np.zeros(ts.shape, dtype=complex)
    m = ts.size
    amps, logs = _terms(sigma, n_cut)
    abs_partial = float(np.sum(amps))
    n_chunk = max(4096, min(_N_CHUNK, int(6_000_000 / max(m, 1)) + 1))
    for lo in range(0, amps.size, n_chunk):
        hi = min(amps.size, lo + n_chunk)
        ph = np.multiply.outer(ts, logs[lo:hi])
        cos = np.cos(ph)
        sin = np.sin(ph, out=ph)
        total += (cos @ amps[lo:hi]) - 1j * (sin @ amps[lo:hi])

    nf = float(n_cut)
    sm1 = s - 1.0
    # N^(1-s)/(s-1) + N^(-s)/2, via exp to avoid complex pow cost
    corr = np.exp(-sm1 * math.log(nf)) / sm1 + 0.5 * np.exp(-s * math.log(nf))
    total += corr

    # Bernoulli correction terms, updated incrementally to dodge overflow
    term = _bern_over_fact(1) * s * np.exp(-(s + 1.0) * math.log(nf))
    bern_sum = np.zeros_like(total)
    k = 1
    rem_bound = math.inf
    smax = math.hypot(sigma, float(np.max(np.abs(ts))))
    while True:
        bern_sum += term
        nxt = term * (s + (2 * k - 1)) * (s + 2 * k) / (nf * nf)
        nxt *= _bern_over_fact(k + 1) / _bern_over_fact(k)
        rem_bound = float(np.max(np.abs(nxt))) * (smax + 2 * k + 1) / (sigma + 2 * k + 1)
        k += 1
        if rem_bound <= target / 8.0 or k > k_max:
            break
        term = nxt
    total += bern_sum

    # pairwise-summation rounding for the main sum plus a few ulps on the
    # explicit pole/boundary terms (dominant when |s-1| is small)
    eps = float(np.finfo(float).eps)
    corr_abs = float(np.max(np.abs(corr)))
    rounding = eps * ((2.0 * math.log2(max(nf, 2.0)) + 8.0) * abs_partial + 8.0 * corr_abs + 8.0)
    return total, rem_bound, rounding


def zeta(s: complex, cfg: EvalConfig = DEFAULT_CONFIG) -> ComplexValue:
    """zeta(s) on Re(s) >= 1 with certified absolute error <= target_abs_err."""
    s = complex(s)
    if s.real < 1.0 - 1e-12:
        raise DomainError(f"Re(s) = {s.real} < 1 unsupported")
    if abs(s - 1.0) <= cfg.pole_radius:
        raise PoleProximity(f"|s-1| = {abs(s - 1.0):.3e} within pole radius")
    vals, bound = zeta_batch(s.real, np.array([s.imag]), cfg)
    if bound > cfg.target_abs_err:
        raise PrecisionUnreachable(
            f"certified bound {bound:.2e} exceeds target {cfg.target_abs_err:.2e}"
        )
    v = vals[0]
    return ComplexValue(re=v.real, im=v.imag, abs_err=bound)


def zeta_laurent(s: complex) -> ComplexValue:
    """Two-term Laurent value 1/(s-1) + gamma near the pole.

    Valid on 0 < |s-1| <= 1/4; the discarded Stieltjes tail is reported as
    the error bound LAURENT_SLOPE * |s-1|, never silently absorbed.
    """
    s = complex(s)
    r = abs(s - 1.0)
    if r == 0.0 or r > LAURENT_RADIUS:
        from .errors import OutOfRange

        raise OutOfRange(f"|s-1| = {r} outside (0, {LAURENT_RADIUS}]")
    v = 1.0 / (s - 1.0) + EULER_GAMMA
    return ComplexValue(re=v.real, im=v.imag, abs_err=LAURENT_SLOPE * r)


_PRIME_CACHE: dict[int, np.ndarray] = {}


def primes_upto(limit: int) -> np.ndarray:
    primes = _PRIME_CACHE.get(limit)
    if primes is None:
        primes = sieve_spf(limit).primes()
        if len(_PRIME_CACHE) > 8:
            _PRIME_CACHE.clear()
        _PRIME_CACHE[limit] = primes
    return primes


def _euler_tail_bound(sigma: float, limit: float) -> float:
    # |sum_{P>limit} sum_k P^(-ks)/k| <= sum_{n>limit} n^-sigma * (1 + small)
    if sigma <= 1.0:
        return math.inf
    tail = limit ** (1.0 - sigma) / (sigma - 1.0) + limit**-sigma
    return tail / max(1.0 - limit**-sigma, 0.5)


def log_zeta_euler(s: complex, prime_limit: int) -> ComplexValue:
    """-sum_{P <= prime_limit} log(1 - P^-s), principal branch per factor.

    Converges to the canonical (Euler-product) branch of log zeta on
    Re(s) > 1; the reported error is the absolute tail bound over n > limit.
    """
    s = complex(s)
    if s.real <= 1.0:
        raise DomainError("log_zeta_euler requires Re(s) > 1")
    ps = primes_upto(prime_limit).astype(float)
    val = -np.sum(np.log1p(-np.exp(-s * np.log(ps))))
    return ComplexValue(re=val.real, im=val.imag, abs_err=_euler_tail_bound(s.real, prime_limit))


def log_zeta_full(s: complex, cfg: EvalConfig = DEFAULT_CONFIG) -> ComplexValue:
    """Canonical branch of log zeta(s) on Re(s) > 1 to near target accuracy.

    Euler factors over a modest prime set put the partial sum on the right
    branch; the remaining factor zeta(s) * prod(1 - P^-s) is then so close to
    1 that its principal log is unambiguous.
    """
    s = complex(s)
    if s.real <= 1.0:
        raise DomainError("log_zeta_full requires Re(s) > 1")
    limit = None
    for cand in (100, 1_000, 10_000, 100_000, 1_000_000):
        if _euler_tail_bound(s.real, cand) < 0.3:
            limit = cand
            break
    if limit is None:
        raise DomainError(f"Re(s) = {s.real} too close to 1 for branch-safe log")
    ps = primes_upto(limit).astype(float)
    factors = -np.expm1(-s * np.log(ps))  # 1 - P^-s
    partial = -np.sum(np.log(factors))
    z = zeta(s, cfg)
    residual = z.z * np.prod(factors)
    val = partial + np.log(residual)
    err = z.abs_err / abs(z.z) * 1.5 + 1e-14 * len(ps)
    return ComplexValue(re=val.real, im=val.imag, abs_err=err)


def zeta_pow(s: complex, p: float, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """zeta(s)^p on Re(s) > 1, branch-matched at the real axis.

    Integer exponents use plain powers; real exponents go through the
    canonical log so no branch tracking is ever needed on the 1-line.
    """
    if p == int(p):
        return complex(zeta(s, cfg).z) ** int(p)
    return complex(np.exp(p * log_zeta_full(s, cfg).z))


def abs_zeta_pow_batch(
    sigma: float,
    ts: np.ndarray,
    p: float,
    cfg: EvalConfig = DEFAULT_CONFIG,
    target_abs_err: float | None = None,
) -> np.ndarray:
    """|zeta(sigma + it)|^p over an array of t (modulus only, no branches)."""
    ts = np.asarray(ts, dtype=float)
    if p == 0.0:
        return np.ones_like(ts)
    if sigma == 1.0 and np.any(ts == 0.0):
        if p > 0:
            raise PoleProximity("|zeta(1)|^p requested at the pole")
        out = np.empty_like(ts)
        nz = ts != 0.0
        out[~nz] = 0.0
        out[nz] = abs_zeta_pow_batch(sigma, ts[nz], p, cfg, target_abs_err)
        return out
    vals, _ = zeta_batch(sigma, ts, cfg, target_abs_err)
    with np.errstate(over="raise"):
        try:
            out = np.abs(vals) ** p
        except FloatingPointError as exc:
            raise PoleProximity("|zeta|^p overflows float range") from exc
    return out


def abs_zeta_pow(t: float, p: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """|zeta(1 + it)|^p; nonnegative real, exp(p ln|zeta|) convention."""
    return float(abs_zeta_pow_batch(1.0, np.array([t]), p, cfg)[0])


def ratio_abs_pow_batch(
    ts: np.ndarray,
    p: float,
    cfg: EvalConfig = DEFAULT_CONFIG,
    sigma: float = 1.0,
    target_abs_err: float | None = None,
) -> np.ndarray:
    """|zeta(2 sigma + 2it) / zeta(sigma + it)|^p over an array of t.

    At sigma = 1 the denominator pole makes the ratio vanish like |t| as
    t -> 0 (for p > 0), which is handled exactly by the explicit pole term of
    the Euler-Maclaurin formula.
    """
    ts = np.asarray(ts, dtype=float)
    if p == 0.0:
        return np.ones_like(ts)
    out = np.empty_like(ts)
    at_pole = (sigma == 1.0) & (ts == 0.0)
    if np.any(at_pole):
        if p < 0:
            raise PoleProximity("inverse ratio diverges at t = 0")
        out[at_pole] = 0.0
    rest = ~at_pole
    if np.any(rest):
        tr = ts[rest]
        num, _ = zeta_batch(2.0 * sigma, 2.0 * tr, cfg, target_abs_err)
        den, _ = zeta_batch(sigma, tr, cfg, target_abs_err)
        out[rest] = (np.abs(num) / np.abs(den)) ** p
    return out


def ratio_abs_pow(t: float, p: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """|zeta(2 + 2it)/zeta(1 + it)|^p at a single point."""
    return float(ratio_abs_pow_batch(np.array([t]), p, cfg)[0])


def zeta_many(
    sigma: float,
    ts: np.ndarray,
    cfg: EvalConfig = DEFAULT_CONFIG,
    target_abs_err: float | None = None,
) -> np.ndarray:
    """zeta(sigma + it) over a grid with heterogeneous |t| magnitudes.

    Groups points into octave buckets so small-|t| points do not pay the
    Euler-Maclaurin cutoff of the largest.
    """
    ts = np.asarray(ts, dtype=float)
    out = np.empty(ts.shape, dtype=complex)
    mags = np.abs(ts)
    edges = [0.0]
    top = max(float(np.max(mags)), 1.0)
    e = 64.0
    while e < top:
        edges.append(e)
        e *= 2.0
    edges.append(math.inf)
    for lo, hi in zip(edges[:-1], edges[1:]):
        mask = (mags >= lo) & (mags < hi)
        if np.any(mask):
            out[mask] = zeta_batch(sigma, ts[mask], cfg, target_abs_err)[0]
    return out
