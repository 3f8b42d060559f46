"""Smallest-prime-factor sieve and bulk multiplicative coefficient tables.

The generalized divisor function d_p(n) gives the Dirichlet coefficients of
zeta(s)^p; at a prime power it depends only on the exponent,

    d_p(P^k) = prod_{j=1}^{k} (p + j - 1) / j,

and extends multiplicatively.  The Liouville function lambda(n) = (-1)^Omega(n)
(Omega counting prime factors with multiplicity) is completely multiplicative;
lambda(n) d_p(n) gives the coefficients of (zeta(2s)/zeta(s))^p.

Tables are built off a smallest-prime-factor array so that bulk coefficient
fills are O(limit) vector work rather than per-n factorizations.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CacheFormatError, CapacityError, OutOfRange

# Generous default: a float64 table of this size is ~800 MB, past desk scale.
DEFAULT_SIEVE_BUDGET = 100_000_000

_MAX_PRIME_POWER = 64  # 2^64 > any supported limit


@dataclass(frozen=True)
class SpfTable:
    """spf[n] = smallest prime factor of n for 2 <= n <= limit (spf[0:2] = 0)."""

    limit: int
    spf: np.ndarray

    def primes(self) -> np.ndarray:
        """All primes up to limit, ascending."""
        n = np.arange(self.limit + 1)
        return n[2:][self.spf[2:] == n[2:]]

    def is_prime(self, n: int) -> bool:
        self._check(n)
        return int(self.spf[n]) == n

    def _check(self, n: int) -> None:
        if not (1 <= n <= self.limit):
            raise OutOfRange(f"n={n} outside sieve range [1, {self.limit}]")


def sieve_spf(limit: int, budget: int = DEFAULT_SIEVE_BUDGET) -> SpfTable:
    """Build the smallest-prime-factor table up to `limit`.

    Vectorized masked sieve: for each prime p <= sqrt(limit), unset multiples
    starting at p^2 get spf = p; survivors are prime.
    """
    if limit < 2 or limit > 2**31:
        raise OutOfRange(f"sieve limit {limit} outside [2, 2^31]")
    if limit > budget:
        raise CapacityError(f"sieve limit {limit} exceeds budget {budget}")
    spf = np.zeros(limit + 1, dtype=np.int64)
    p = 2
    while p * p <= limit:
        if spf[p] == 0:
            idx = np.arange(p * p, limit + 1, p)
            sub = spf[idx]
            spf[idx[sub == 0]] = p
        p += 1
    unset = np.nonzero(spf[2:] == 0)[0] + 2
    spf[unset] = unset
    return SpfTable(limit=limit, spf=spf)


def factorize(n: int, table: SpfTable) -> list[tuple[int, int]]:
    """Prime factorization [(P, k), ...] via repeated spf division."""
    table._check(n)
    out: list[tuple[int, int]] = []
    while n > 1:
        p = int(table.spf[n])
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        out.append((p, k))
    return out


def d_p_prime_power(p: float, k: int) -> float:
    """d_p(P^k) = prod_{j=1}^{k} (p+j-1)/j, independent of the prime P."""
    v = 1.0
    for j in range(1, k + 1):
        v *= (p + j - 1) / j
    return v


def d_p(n: int, p: float, table: SpfTable) -> float:
    """Generalized divisor function d_p(n), multiplicative evaluation."""
    table._check(n)
    v = 1.0
    for _, k in factorize(n, table):
        v *= d_p_prime_power(p, k)
    return v


def liouville(n: int, table: SpfTable) -> int:
    """lambda(n) = (-1)^Omega(n)."""
    table._check(n)
    omega = sum(k for _, k in factorize(n, table))
    return -1 if omega & 1 else 1


@dataclass(frozen=True)
class CoefficientTable:
    """values[n] = d_p(n), optionally with the lambda(n) sign folded in."""

    p: float
    limit: int
    signed: bool
    values: np.ndarray  # float64, index 0 unused, values[0] = 0

    def __post_init__(self):
        if self.values.shape != (self.limit + 1,):
            raise ValueError("values length must be limit+1")


def coefficient_table(
    limit: int,
    p: float,
    signed: bool,
    table: SpfTable,
    budget: int = DEFAULT_SIEVE_BUDGET,
) -> CoefficientTable:
    """Bulk d_p (or lambda*d_p) table for 1 <= n <= limit.

    Single multiplicative pass: write n = P^k * m with P = spf(n), gcd(P, m)=1;
    then values[n] = values[m] * d_p(P^k).  The recursion index m is always
    <= n/2, so filling in doubling blocks keeps every step a pure numpy gather.
    """
    if limit > table.limit:
        raise CapacityError(f"limit {limit} exceeds sieve limit {table.limit}")
    if limit > budget:
        raise CapacityError(f"coefficient limit {limit} exceeds budget {budget}")

    ppv = np.array([d_p_prime_power(p, k) for k in range(_MAX_PRIME_POWER)])
    if signed:
        ppv = ppv * np.where(np.arange(_MAX_PRIME_POWER) & 1, -1.0, 1.0)

    n = np.arange(limit + 1)
    spf = table.spf[: limit + 1]
    values = np.zeros(limit + 1)
    if limit >= 1:
        values[1] = 1.0
    if limit >= 2:
        q = np.zeros(limit + 1, dtype=np.int64)
        q[2:] = n[2:] // spf[2:]
        rest = np.zeros(limit + 1, dtype=np.int64)
        kexp = np.zeros(limit + 1, dtype=np.int64)
        rest[1] = 1
        lo = 2
        while lo <= limit:
            hi = min(limit, 2 * lo - 1)
            blk = np.arange(lo, hi + 1)
            qb = q[blk]
            same = spf[qb] == spf[blk]
            # q < n, so rest/kexp of q are final from earlier blocks
            rest[blk] = np.where(same, rest[qb], qb)
            kexp[blk] = np.where(same, kexp[qb] + 1, 1)
            values[blk] = values[rest[blk]] * ppv[kexp[blk]]
            lo = hi + 1
    return CoefficientTable(p=p, limit=limit, signed=signed, values=values)


# --- binary cache -----------------------------------------------------------
#
# Layout: magic "ZLCT", u32 version, f64 p, i64 limit, u8 signed, then the raw
# float64 value array (limit+1 entries, native little-endian).

_MAGIC = b"ZLCT"
_VERSION = 1
_HEADER = struct.Struct("<4sIdqB")


def dump_table(tab: CoefficientTable, path: str | Path) -> None:
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, _VERSION, tab.p, tab.limit, int(tab.signed)))
        fh.write(np.ascontiguousarray(tab.values, dtype="<f8").tobytes())


def load_table(path: str | Path) -> CoefficientTable:
    path = Path(path)
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise CacheFormatError(f"{path}: truncated header")
        magic, version, p, limit, signed = _HEADER.unpack(head)
        if magic != _MAGIC:
            raise CacheFormatError(f"{path}: bad magic {magic!r}")
        if version != _VERSION:
            raise CacheFormatError(f"{path}: unsupported version {version}")
        data = np.frombuffer(fh.read(), dtype="<f8")
    if data.size != limit + 1:
        raise CacheFormatError(f"{path}: expected {limit + 1} values, got {data.size}")
    return CoefficientTable(p=p, limit=limit, signed=bool(signed), values=data.copy())


def cached_coefficient_table(
    limit: int,
    p: float,
    signed: bool,
    table: SpfTable,
    directory: Path | None = None,
    budget: int = DEFAULT_SIEVE_BUDGET,
) -> CoefficientTable:
    """coefficient_table with a transparent on-disk cache for large limits."""
    if directory is None or limit < 1_000_000:
        return coefficient_table(limit, p, signed, table, budget)
    name = f"coeff_p{p!r}_L{limit}_{'s' if signed else 'u'}.bin"
    path = Path(directory) / name
    if path.exists():
        try:
            tab = load_table(path)
            if tab.limit == limit and tab.p == p and tab.signed == signed:
                return tab
        except CacheFormatError:
            pass  # fall through and rebuild
    tab = coefficient_table(limit, p, signed, table, budget)
    dump_table(tab, path)
    return tab
