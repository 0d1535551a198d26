"""Arithmetic of the split metacyclic group Z_m x|_k Z_n and its vertex labeling.

Group elements are pairs ``(a, b)`` standing for ``x^a y^b`` with
``x^m = y^n = 1`` and ``x^-1 y x = y^k``, so that ``y^b x^c = x^c y^(b k^c)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import gcd

from .errors import ParameterError

MAX_N = 2**32


class Regularity(enum.Enum):
    REGULAR = "regular"
    IRREGULAR = "irregular"


def unit_order(k: int, n: int) -> int:
    """Multiplicative order of ``k`` modulo ``n``."""
    if n < 2:
        raise ParameterError("invalid-size", f"modulus must be >= 2, got {n}")
    if gcd(k, n) != 1:
        raise ParameterError("non-unit", f"gcd({k}, {n}) != 1")
    k %= n
    alpha, power = 1, k
    while power != 1 % n:
        power = power * k % n
        alpha += 1
    return alpha


@dataclass(frozen=True)
class GroupParams:
    m: int
    n: int
    k: int
    alpha: int
    t_period: int
    regularity: Regularity

    @property
    def regular(self) -> bool:
        return self.regularity is Regularity.REGULAR

    @property
    def delta(self) -> int:
        return 1 if self.regular else 2

    @property
    def epsilon(self) -> int:
        return 2 if self.regular else 3

    @property
    def is_torus(self) -> bool:
        # k = 1 gives the direct product C_m x C_n
        return self.alpha == 1

    @property
    def order(self) -> int:
        return self.m * self.n

    @property
    def k_inverse(self) -> int:
        return pow(self.k, -1, self.n)

    def twist_power(self, e: int) -> int:
        """``k^e mod n`` for any integer ``e`` (negative allowed)."""
        return pow(self.k, e % self.alpha, self.n)

    def __str__(self):
        return f"T({self.m},{self.n},{self.k})"


def validate_params(m: int, n: int, k: int) -> GroupParams:
    """Check ``(m, n, k)`` and derive the order, period and regularity of ``k``."""
    if m < 3 or n < 3:
        raise ParameterError("invalid-size", f"need m, n >= 3, got m={m}, n={n}")
    if n >= MAX_N:
        raise ParameterError("invalid-size", f"n must be < 2**32, got {n}")
    if not 1 <= k <= n - 1:
        raise ParameterError("invalid-twist", f"k must lie in [1, n-1], got {k}")
    if gcd(k, n) != 1:
        raise ParameterError("non-unit", f"k={k} is not a unit modulo n={n}")
    if pow(k, m, n) != 1:
        raise ParameterError("relation-violated", f"{k}^{m} = {pow(k, m, n)} != 1 (mod {n})")

    alpha = unit_order(k, n)
    # alpha | m because k^m = 1
    irregular = alpha % 2 == 0 and pow(k, alpha // 2, n) == n - 1
    return GroupParams(
        m=m,
        n=n,
        k=k,
        alpha=alpha,
        t_period=m // alpha,
        regularity=Regularity.IRREGULAR if irregular else Regularity.REGULAR,
    )


def multiply(p: GroupParams, g: tuple[int, int], h: tuple[int, int]) -> tuple[int, int]:
    """Product ``(x^a y^b)(x^c y^d) = x^(a+c) y^(b k^c + d)``."""
    a, b = g
    c, d = h
    return (a + c) % p.m, (b * pow(p.k, c, p.n) + d) % p.n


@dataclass(frozen=True)
class VertexLabel:
    """Vertex ``x^(tau*alpha + xi) y^(packet_i * k^xi)`` of the packet labeling."""

    packet_i: int
    tau: int
    xi: int

    def element(self, p: GroupParams) -> tuple[int, int]:
        return self.tau * p.alpha + self.xi, self.packet_i * pow(p.k, self.xi, p.n) % p.n


def vertex_label_to_index(label: VertexLabel, p: GroupParams) -> int:
    if not (0 <= label.packet_i < p.n and 0 <= label.tau < p.t_period and 0 <= label.xi < p.alpha):
        raise ParameterError("label-range", f"{label} out of range for {p}")
    return label.packet_i * p.m + label.tau * p.alpha + label.xi


def index_to_vertex_label(index: int, p: GroupParams) -> VertexLabel:
    if not 0 <= index < p.order:
        raise ParameterError("label-range", f"index {index} out of range [0, {p.order})")
    packet_i, pos = divmod(index, p.m)
    tau, xi = divmod(pos, p.alpha)
    return VertexLabel(packet_i, tau, xi)


def element_to_label(g: tuple[int, int], p: GroupParams) -> VertexLabel:
    """Inverse of :meth:`VertexLabel.element`."""
    a, b = g[0] % p.m, g[1] % p.n
    tau, xi = divmod(a, p.alpha)
    return VertexLabel(b * pow(p.k, -xi, p.n) % p.n, tau, xi)
