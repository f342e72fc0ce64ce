"""Partitions, generalized Pochhammer symbols, and Jack polynomials.

The Jack values produced here are in the C normalization, pinned operationally
by the sum rule

    sum_{|kappa| = k} C_kappa(x_1, ..., x_r) = (x_1 + ... + x_r)^k,

which is the property the multivariate hypergeometric series is built on.
Evaluation is recurrence-based: the variable-by-variable branching rule with
hook-product coefficients, applied at a numeric point.  Polynomials are never
expanded symbolically, so degrees of 30+ stay cheap.

For one and two variables there are closed coefficient formulas (a single
monomial, resp. ultraspherical-type coefficients), used by :func:`jack_C_all`
to build whole tables of values quickly for the series engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from types import MappingProxyType

from .errors import InvalidArgumentError

__all__ = [
    "Partition",
    "JackParameter",
    "enumerate_partitions",
    "gen_pochhammer",
    "gen_pochhammer_factor",
    "jack_C",
    "jack_C_all",
]

# Degree bounds keeping every intermediate inside double-precision range:
# the rank <= 2 closed forms divide factors out as they go, the general
# branching path accumulates hook products whose headroom runs out sooner.
_MAX_WEIGHT = 200
_MAX_WEIGHT_GENERAL = 100


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing tuple of nonnegative integers, trailing zeros removed."""

    parts: tuple[int, ...]

    def __init__(self, parts=()):
        parts = tuple(int(p) for p in parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(p < 0 for p in parts):
            raise InvalidArgumentError(f"negative part in partition {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise InvalidArgumentError(f"parts not weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def conjugate(self) -> tuple[int, ...]:
        return _conjugate(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __repr__(self) -> str:
        return f"Partition{self.parts}"


@dataclass(frozen=True)
class JackParameter:
    """Jack parameter alpha > 0; for root multiplicity m use alpha = 2/m."""

    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise InvalidArgumentError(f"Jack parameter must be positive, got {self.alpha}")

    @classmethod
    def from_multiplicity(cls, m: float) -> "JackParameter":
        if not m > 0:
            raise InvalidArgumentError(f"multiplicity must be positive, got {m}")
        return cls(2.0 / m)


def _alpha_value(alpha) -> float:
    if isinstance(alpha, JackParameter):
        return alpha.alpha
    a = float(alpha)
    if not a > 0:
        raise InvalidArgumentError(f"Jack parameter must be positive, got {alpha}")
    return a


def enumerate_partitions(k: int, max_length: int) -> list[Partition]:
    """All partitions of weight exactly ``k`` with at most ``max_length`` parts.

    Ordered reverse-lexicographically, so series partial sums assembled in
    this order are reproducible bit for bit.
    """
    if k < 0:
        raise InvalidArgumentError(f"weight must be nonnegative, got {k}")
    if max_length < 1:
        raise InvalidArgumentError(f"max_length must be >= 1, got {max_length}")
    out: list[Partition] = []
    for parts in _partition_tuples(k, max_length):
        out.append(Partition(parts))
    return out


def _partition_tuples(k: int, max_length: int, max_part: int | None = None):
    """Yield weakly decreasing tuples summing to k, reverse-lex order."""
    if k == 0:
        yield ()
        return
    if max_length == 0:
        return
    top = k if max_part is None else min(k, max_part)
    for first in range(top, 0, -1):
        if first * max_length < k:
            break
        for rest in _partition_tuples(k - first, max_length - 1, first):
            yield (first,) + rest


def gen_pochhammer_factor(a, row: int, col: int, alpha) -> complex:
    """The single-box factor ``a - (row - 1)/alpha + col - 1`` (1-based box)."""
    al = _alpha_value(alpha)
    return a - (row - 1) / al + (col - 1)


def gen_pochhammer(a, kappa: Partition, alpha):
    """Generalized Pochhammer symbol (a)_kappa for Jack parameter alpha.

    (a)_kappa = prod_i prod_{j=1..kappa_i} (a - (i-1)/alpha + j - 1); the empty
    partition gives 1.  Total function: no poles, zeros allowed.
    """
    al = _alpha_value(alpha)
    out = 1.0
    for i, part in enumerate(kappa.parts):
        base = a - i / al
        for j in range(part):
            out = out * (base + j)
    return out


# ---------------------------------------------------------------------------
# Hook products and the branching rule
# ---------------------------------------------------------------------------


def _conjugate(parts: tuple[int, ...]) -> tuple[int, ...]:
    if not parts:
        return ()
    out = [0] * parts[0]
    for p in parts:
        for j in range(p):
            out[j] += 1
    return tuple(out)


def _column_hooks(parts: tuple[int, ...], al: float) -> tuple[list[float], list[float]]:
    """Per-column products of upper and lower hook lengths.

    upper(i,j) = kappa'_j - i + al*(kappa_i - j + 1)
    lower(i,j) = kappa'_j - i + 1 + al*(kappa_i - j)
    """
    conj = _conjugate(parts)
    ncols = len(conj)
    upper = [1.0] * ncols
    lower = [1.0] * ncols
    for j in range(1, ncols + 1):
        height = conj[j - 1]
        u = 1.0
        lo = 1.0
        for i in range(1, height + 1):
            u *= height - i + al * (parts[i - 1] - j + 1)
            lo *= height - i + 1 + al * (parts[i - 1] - j)
        upper[j - 1] = u
        lower[j - 1] = lo
    return upper, lower


def _branch_beta(kappa, mu, al, colmemo) -> float:
    """Branching coefficient for J-normalized Jack, kappa/mu a horizontal strip.

    Columns where the two conjugates agree use upper hooks, others lower ones;
    numerator runs over kappa's columns, denominator over mu's.
    """
    kc = _conjugate(kappa)
    mc = _conjugate(mu)
    if kappa not in colmemo:
        colmemo[kappa] = _column_hooks(kappa, al)
    if mu not in colmemo:
        colmemo[mu] = _column_hooks(mu, al)
    ku, kl = colmemo[kappa]
    mu_u, mu_l = colmemo[mu]
    num = 1.0
    for j in range(len(kc)):
        same = j < len(mc) and kc[j] == mc[j]
        num *= ku[j] if same else kl[j]
    den = 1.0
    for j in range(len(mc)):
        same = kc[j] == mc[j]
        den *= mu_u[j] if same else mu_l[j]
    return num / den


def _horizontal_strips(parts: tuple[int, ...]):
    """All mu with kappa/mu a horizontal strip: kappa_{i+1} <= mu_i <= kappa_i."""
    ell = len(parts)

    def rec(i: int):
        if i == ell:
            yield ()
            return
        lo = parts[i + 1] if i + 1 < ell else 0
        for v in range(parts[i], lo - 1, -1):
            for rest in rec(i + 1):
                yield (v,) + rest

    for mu in rec(0):
        while mu and mu[-1] == 0:
            mu = mu[:-1]
        yield mu


def _jack_J(parts, n, al, x, jmemo, colmemo) -> float:
    """J-normalized Jack polynomial at (x_1, ..., x_n), by branching on x_n."""
    if not parts:
        return 1.0
    if len(parts) > n:
        return 0.0
    key = (parts, n)
    cached = jmemo.get(key)
    if cached is not None:
        return cached
    if n == 1:
        k = parts[0]
        val = x[0] ** k
        for j in range(k):
            val *= 1.0 + j * al
        jmemo[key] = val
        return val
    total = 0.0
    w = sum(parts)
    xn = x[n - 1]
    for mu in _horizontal_strips(parts):
        if len(mu) > n - 1:
            continue
        skip = w - sum(mu)
        if skip > 0 and xn == 0.0:
            continue
        sub = _jack_J(mu, n - 1, al, x, jmemo, colmemo)
        if sub == 0.0:
            continue
        total += sub * xn**skip * _branch_beta(parts, mu, al, colmemo)
    jmemo[key] = total
    return total


def _c_norm(parts: tuple[int, ...], al: float) -> float:
    """Factor turning J into C: alpha^|kappa| |kappa|! / (c_kappa c'_kappa).

    Fused as a per-box product (one factor alpha*m per box against that box's
    two hooks) so no intermediate outgrows double precision.
    """
    conj = _conjugate(parts)
    out = 1.0
    m = 0
    for i, p in enumerate(parts, start=1):
        for j in range(1, p + 1):
            m += 1
            arm = p - j
            leg = conj[j - 1] - i
            out *= al * m / ((leg + al * (arm + 1)) * (leg + 1 + al * arm))
    return out


def jack_C(kappa: Partition, alpha, x) -> float:
    """C-normalized Jack polynomial at a real point x of length r.

    Vanishes identically when kappa has more parts than x has entries.
    Degrees are bounded (100 through the branching recursion, 200 for the
    single-variable monomial) to stay within double-precision range; the
    table builder :func:`jack_C_all` goes deeper in one and two variables.
    """
    al = _alpha_value(alpha)
    parts = kappa.parts
    xs = tuple(float(v) for v in x)
    r = len(xs)
    if len(parts) > r:
        return 0.0
    if not parts:
        return 1.0
    bound = _MAX_WEIGHT if r == 1 else _MAX_WEIGHT_GENERAL
    if kappa.weight > bound:
        raise InvalidArgumentError(f"degree {kappa.weight} exceeds supported maximum {bound}")
    if r == 1:
        return xs[0] ** parts[0]
    jmemo: dict = {}
    colmemo: dict = {}
    j_val = _jack_J(parts, r, al, xs, jmemo, colmemo)
    return _c_norm(parts, al) * j_val


# ---------------------------------------------------------------------------
# Whole-table evaluation for the series engine
# ---------------------------------------------------------------------------


def _rank2_table(al: float, x1: float, x2: float, kmax: int) -> dict[tuple[int, ...], float]:
    """C_kappa values for all kappa with |kappa| <= kmax in two variables.

    Uses the ultraspherical-type coefficients of the one-row polynomial,
    P_(d)(x, y) = sum_i g_i g_{d-i} x^(d-i) y^i / g_d with g_i = (1/al)_i / i!,
    and the column-strip identity P_(k1,k2) = (x y)^k2 P_(k1-k2).
    """
    beta = 1.0 / al
    g = [1.0] * (kmax + 1)
    for i in range(1, kmax + 1):
        g[i] = g[i - 1] * (beta + i - 1) / i
    xp = [1.0] * (kmax + 1)
    yp = [1.0] * (kmax + 1)
    for i in range(1, kmax + 1):
        xp[i] = xp[i - 1] * x1
        yp[i] = yp[i - 1] * x2
    p_one_row = [0.0] * (kmax + 1)
    for d in range(kmax + 1):
        s = 0.0
        for i in range(d + 1):
            s += g[i] * g[d - i] * xp[d - i] * yp[i]
        p_one_row[d] = s / g[d]
    table: dict[tuple[int, ...], float] = {(): 1.0}
    for k2 in range(kmax // 2 + 1):
        e2 = (x1 * x2) ** k2
        for k1 in range(max(k2, 1), kmax - k2 + 1):
            k = k1 + k2
            # norm = al^|kappa| |kappa|! / c'_kappa, reduced to safe factors
            a_prod = 1.0
            for j in range(1, k2 + 1):
                a_prod *= al * (k1 - j + 1) + 1.0
            norm = al**k2 * math.comb(k, k2) / a_prod
            for j in range(k2):
                norm *= k1 - j
            key = (k1, k2) if k2 else (k1,)
            table[key] = norm * e2 * p_one_row[k1 - k2]
    return table


def jack_C_all(alpha, x, kmax: int):
    """Read-only table of C_kappa(x) for every |kappa| <= kmax, length <= len(x).

    Keys are part tuples (trailing zeros stripped).  Fast closed forms cover
    one and two variables; higher ranks fall back to the branching recursion.
    Tables are cached per (alpha, x, kmax); the returned mapping must not be
    mutated (it is a shared read-only view).
    """
    al = _alpha_value(alpha)
    xs = tuple(float(v) for v in x)
    if kmax < 0:
        raise InvalidArgumentError(f"kmax must be nonnegative, got {kmax}")
    if kmax > _MAX_WEIGHT:
        raise InvalidArgumentError(f"kmax {kmax} exceeds supported maximum {_MAX_WEIGHT}")
    return _jack_table_cached(al, xs, kmax)


@lru_cache(maxsize=48)
def _jack_table_cached(al: float, xs: tuple[float, ...], kmax: int):
    r = len(xs)
    if r == 0:
        return MappingProxyType({(): 1.0})
    if r == 1:
        table = {(): 1.0}
        v = 1.0
        for k in range(1, kmax + 1):
            v *= xs[0]
            table[(k,)] = v
        return MappingProxyType(table)
    if r == 2:
        return MappingProxyType(_rank2_table(al, xs[0], xs[1], kmax))
    if kmax > _MAX_WEIGHT_GENERAL:
        raise InvalidArgumentError(
            f"kmax {kmax} exceeds the branching-path maximum {_MAX_WEIGHT_GENERAL} for rank {r}"
        )
    table = {(): 1.0}
    jmemo: dict = {}
    colmemo: dict = {}
    for k in range(1, kmax + 1):
        for parts in _partition_tuples(k, r):
            table[parts] = _c_norm(parts, al) * _jack_J(parts, r, al, xs, jmemo, colmemo)
    return MappingProxyType(table)
