"""Moment-based lower bounds on the largest eigenvalue of a Fourier block.

With ``f(x) = exp(a x)`` and moments ``N_k = u^T M^k u`` (``u`` the all-ones
vector) the largest eigenvalue of ``M`` is at least

    (t / a) * ln( (1/m) * sum_k  a^k N_k / (k! t^k) ),

for any series scale ``t`` large enough for the series to converge.  This
module evaluates that bound, its three-term expansion, closed forms for the
first three normalized moments, the Taylor coefficients of the bound in
``1/t`` and a priori estimates of their size.

Row ``a`` of a block carries the phase ``w_m^a`` (``a = 0..m-1``), matching
:func:`metacyclic.spectral.fourier_block`.
"""

from __future__ import annotations

import io
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError, ParameterError
from .group import GroupParams
from .spectral import HermitianBlock, omega_matrices, omega_matrix

# 2cos(2 pi / 400) = 1.99975326..., rounded down
COS_FLOOR_400 = 1.9997533
DEFAULT_TRUNCATION = 12


@dataclass(frozen=True)
class BoundConfig:
    a: float = 127.5
    series_t: float = 1000.0
    epsilon: int = 2
    truncation_k: int = DEFAULT_TRUNCATION
    n_min: int = 400

    def __post_init__(self):
        if not self.a > 0:
            raise ParameterError("invalid-config", f"a must be positive, got {self.a}")
        if self.epsilon not in (2, 3):
            raise ParameterError("invalid-config", f"epsilon must be 2 or 3, got {self.epsilon}")
        if self.truncation_k < 3:
            raise ParameterError("invalid-config", f"truncation K must be >= 3, got {self.truncation_k}")
        # spectrum radius is 4 for a 4-regular graph
        if not self.series_t > 4.0 * self.a / math.log(2.0):
            raise ParameterError(
                "invalid-config",
                f"series t = {self.series_t} must exceed 4a/ln 2 = {4 * self.a / math.log(2):.6g}",
            )


@dataclass(frozen=True)
class MomentSet:
    i: int
    N1_over_m: float
    N2_over_m: float
    N3_over_m: float


def _c(num, den) -> float:
    return 2.0 * math.cos(2.0 * math.pi * (num % den) / den)


def omega_sum(i: int, a: int, b: int, p: GroupParams) -> complex:
    """Single entry ``Omega(i, a, b)``; for ``a == b`` this is the real scalar ``Omega_i``."""
    return complex(omega_matrix(i, p)[a % p.m, b % p.m])


def moments_closed_form(i: int, p: GroupParams, as_printed: bool = False) -> MomentSet:
    """``N_1/m``, ``N_2/m``, ``N_3/m`` of block ``i`` without forming the block.

    The third moment is

        2cos(2 pi i k/n) + 2cos(2 pi i k^(alpha-1)/n) + 14cos(2 pi i/n) + 2cos(6 pi i/n)

    plus 2 when ``m = 3`` (the row phases then satisfy ``w^(3a) = 1``).  The
    first term is present for irregular ``k`` too.  ``as_printed=True``
    drops it for irregular ``k`` and omits the ``m = 3`` correction; that
    variant disagrees with the matrix powers and is kept for comparison.
    """
    n = p.n
    n1 = _c(i, n)
    n2 = 4.0 + _c(2 * i, n)
    n3 = _c(i * p.twist_power(p.alpha - 1), n) + 7.0 * _c(i, n) + _c(3 * i, n)
    if as_printed:
        if p.regular:
            n3 += _c(i * p.k, n)
    else:
        n3 += _c(i * p.k, n)
        if p.m == 3:
            n3 += 2.0
    return MomentSet(i, n1, n2, n3)


def moment_oracle(block: HermitianBlock | np.ndarray, k: int) -> float:
    """``u^T M^k u`` by repeated matrix-vector products."""
    return moment_sequence(block, k)[k]


def moment_sequence(block: HermitianBlock | np.ndarray, k_max: int) -> list[float]:
    """``[N_0, ..., N_kmax]`` for one block."""
    if k_max < 0:
        raise ParameterError("invalid-moment", f"moment index must be >= 0, got {k_max}")
    mat = block.entries if isinstance(block, HermitianBlock) else np.asarray(block)
    ones = np.ones(mat.shape[0])
    vec = ones.astype(complex)
    out = [float(mat.shape[0])]
    for _ in range(k_max):
        vec = mat @ vec
        out.append(float(np.real(ones @ vec)))
    return out


def mii_power_entries(i: int, a: int, b: int, power: int, p: GroupParams) -> complex:
    """Closed-form entry ``(a, b)`` of ``M_i^2`` (power 2) or ``M_i^3`` (power 3)."""
    if power not in (2, 3):
        raise ParameterError("invalid-power", f"power must be 2 or 3, got {power}")
    m, n = p.m, p.n
    a %= m
    b %= m
    if (a - b) % (p.delta * p.t_period):
        return 0j
    kinv = p.k_inverse
    idx = [i, 2 * i, 3 * i, i * (1 + kinv), i * (1 - kinv), i * (1 + p.k), i * (1 - p.k)]
    om = omega_matrices([j % n for j in idx], p)[:, a, b]
    o1, o2, o3, o_pinv, o_minv, o_pk, o_mk = om
    ca = _c(a, m)
    cb = _c(b, m)

    if power == 2:
        if a != b:
            return o1 * (ca + cb) + o2
        return ca * ca + 2.0 + 2.0 * o1 * ca + o2

    w_b = np.exp(2j * np.pi * b / m)
    tail = w_b * (o_pinv + o_minv) + np.conj(w_b) * (o_pk + o_mk)
    if a != b:
        return o1 * (ca * ca + cb * cb + ca * cb + 3.0) + o2 * (ca + cb) + o3 + tail
    return ca**3 + 4.0 * ca + 3.0 * o1 * (ca * ca + 1.0) + 2.0 * o2 * ca + o3 + tail


# -- the lower bound ---------------------------------------------------------

def wm_lower_bound_exact(moments, m: int, config: BoundConfig, truncation_k: int | None = None) -> float:
    """Truncated series bound ``(t/a) ln((1/m) sum_{k<=K} a^k N_k / (k! t^k))``."""
    K = config.truncation_k if truncation_k is None else truncation_k
    moments = list(moments)
    if len(moments) < K + 1:
        raise ParameterError("insufficient-moments", f"need N_0..N_{K}, got {len(moments)} values")
    x = config.a / config.series_t
    total = math.fsum(moments[k] * x**k / math.factorial(k) for k in range(K + 1)) / m
    if not total > 0.0:
        raise DomainError(f"logarithm argument {total!r} is not positive")
    return config.series_t / config.a * math.log(total)


def block_lower_bound(block: HermitianBlock | np.ndarray, config: BoundConfig) -> float:
    mat = block.entries if isinstance(block, HermitianBlock) else np.asarray(block)
    return wm_lower_bound_exact(moment_sequence(mat, config.truncation_k), mat.shape[0], config)


def b_expansion(n: int, config: BoundConfig) -> float:
    """First three terms of the expansion of the bound in ``1/t``."""
    if n < 3:
        raise ParameterError("invalid-size", f"n must be >= 3, got {n}")
    c1 = 2.0 * math.cos(2.0 * math.pi / n)
    a, t = config.a, config.series_t
    return c1 + a / t + (config.epsilon * a / 3.0 - 2.0) * c1 * a * a / (2.0 * t * t)


# -- exact combinatorics -----------------------------------------------------

@lru_cache(maxsize=None)
def surjection_count(n_total: int, j: int) -> int:
    """Maps from an ``n_total``-set onto a ``j``-set with every fibre of size >= 2."""
    if n_total < 0 or j < 1:
        raise ParameterError("invalid-size", f"need n_total >= 0 and j >= 1, got ({n_total}, {j})")
    if n_total < 2 * j:
        return 0
    if j == 1:
        return 1
    # choose the first fibre, recurse on the rest
    return sum(math.comb(n_total, first) * surjection_count(n_total - first, j - 1)
               for first in range(2, n_total - 2 * (j - 1) + 1))


def s_n(n: int) -> Fraction:
    """``(1/n!) sum_{j=2}^{n} (-1)^j M(n+j, j) / j!`` as an exact rational."""
    if n < 2:
        raise ParameterError("invalid-size", f"n must be >= 2, got {n}")
    total = sum(Fraction((-1) ** j * surjection_count(n + j, j), math.factorial(j)) for j in range(2, n + 1))
    return total / math.factorial(n)


def compositions(total: int, parts: int):
    """Ordered tuples of ``parts`` positive integers summing to ``total``."""
    if parts < 1 or total < parts:
        return
    for cuts in itertools.combinations(range(1, total), parts - 1):
        edges = (0, *cuts, total)
        yield tuple(edges[r + 1] - edges[r] for r in range(parts))


def _normalized(moments, m: int, k: int) -> list[float]:
    moments = list(moments)
    if len(moments) < k + 1:
        raise ParameterError("insufficient-moments", f"need N_0..N_{k}, got {len(moments)} values")
    return [x / m for x in moments[: k + 1]]


def ck_terms(k: int, moments, m: int, config: BoundConfig, printed_r3: bool = False) -> tuple[float, float, float]:
    """Three pieces of the ``k``-th Taylor coefficient of ``(1/a) ln h(z)``.

    ``R1`` is the single-part term adjusted by ``x_1^k/k!``, ``R2`` carries
    the ``k``-part term plus that adjustment and ``R3`` gathers the
    compositions of ``k`` into ``2 .. k-1`` parts, each part ``t`` weighted by
    ``x_t / t!`` (``x_t = N_t/m``).  ``printed_r3=True`` drops the ``1/t!``
    weights.
    """
    if k < 2:
        raise ParameterError("invalid-order", f"k must be >= 2, got {k}")
    x = _normalized(moments, m, k)
    a = config.a
    r1 = a ** (k - 1) / math.factorial(k) * (x[k] - x[1] ** k)
    r2 = a ** (k - 1) / k * x[1] ** k * ((-1) ** (k - 1) + 1.0 / math.factorial(k - 1))

    weight = (lambda t: x[t]) if printed_r3 else (lambda t: x[t] / math.factorial(t))
    r3 = 0.0
    for parts in range(2, k):
        inner = math.fsum(math.prod(weight(t) for t in comp) for comp in compositions(k, parts))
        r3 += (-1) ** (parts - 1) / parts * inner
    return r1, r2, a ** (k - 1) * r3


def r2k_direct(k: int, moments, m: int, config: BoundConfig) -> float:
    """``R2`` from its defining inner sum over compositions of ``k - 1``.

    Uses ``f_t = a^t / t!`` and sums
    ``(1/k) x_1^k sum_{j=2}^{k-1} (-1)^j C(k+j-1, j) f_1^(-j) s*[j, k-1]``
    with ``s*[j, k-1] = sum prod f_{t_r + 1}`` over compositions of ``k-1``
    into ``j`` parts, exactly in rationals before the final float.
    """
    if k < 2:
        raise ParameterError("invalid-order", f"k must be >= 2, got {k}")
    x = _normalized(moments, m, 1)
    a = Fraction(config.a)
    f = lambda t: a**t / math.factorial(t)  # noqa: E731
    total = Fraction(0)
    for j in range(2, k):
        star = sum((math.prod(f(t + 1) for t in comp) for comp in compositions(k - 1, j)), Fraction(0))
        total += (-1) ** j * math.comb(k + j - 1, j) * star / f(1) ** j
    return float(total) * x[1] ** k / k


def series_coefficients(moments, m: int, a: float, k_max: int) -> list[float]:
    """``[c_1, ..., c_kmax]``: Taylor coefficients of ``(1/a) ln h(z)``.

    ``h(z) = sum_j a^j (N_j/m) z^j / j!``; the log series comes from the
    recurrence ``L_k = h_k - (1/k) sum_{j<k} j L_j h_{k-j}``.
    """
    x = _normalized(moments, m, k_max)
    h = [a**j * x[j] / math.factorial(j) for j in range(k_max + 1)]
    if abs(h[0] - 1.0) > 1e-12:
        raise ParameterError("invalid-moment", f"N_0/m must be 1, got {h[0]}")
    logs = [0.0] * (k_max + 1)
    for k in range(1, k_max + 1):
        logs[k] = h[k] - math.fsum(j * logs[j] * h[k - j] for j in range(1, k)) / k
    return [logs[k] / a for k in range(1, k_max + 1)]


# -- a priori error estimates ------------------------------------------------

def rik_bounds(k: int, config: BoundConfig, s2_form: str = "table") -> tuple[float, float, float]:
    """Upper estimates of ``|R_i,k| / t^k`` valid for ``n >= n_min``.

    ``s2_form="table"`` gives ``(k/a)(a/t)^k c^k``, the values used in the
    reference table; ``"corollary"`` gives ``(2/(a k))(a/t)^k c^k``.
    """
    if k < 2:
        raise ParameterError("invalid-order", f"k must be >= 2, got {k}")
    if config.n_min < 400:
        raise ParameterError("invalid-config", f"estimates need n_min >= 400, got {config.n_min}")
    a, t, c = config.a, config.series_t, COS_FLOOR_400
    r = (a / t) ** k
    s1 = r * (4.0**k - c**k) / (a * math.factorial(k))
    if s2_form == "table":
        s2 = k / a * r * c**k
    elif s2_form == "corollary":
        s2 = 2.0 / (a * k) * r * c**k
    else:
        raise ParameterError("invalid-config", f"unknown S2 form {s2_form!r}")
    s3 = (math.log(2.0) + 1.0) / a * r * c**k * 4.0 ** (k - 1)
    return s1, s2, s3


def bound_table(config: BoundConfig, k_min: int = 4, k_max: int = 10, s2_form: str = "table"):
    return [(k, *rik_bounds(k, config, s2_form)) for k in range(k_min, k_max + 1)]


def write_bound_table(rows, fh: io.TextIOBase):
    fh.write("k,S1k,S2k,S3k\n")
    for k, *vals in rows:
        fh.write(f"{k}," + ",".join(f"{v:.9e}" for v in vals) + "\n")
