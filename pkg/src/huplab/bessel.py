"""Bessel functions J_nu for integer and half-integer orders, and their zeros.

Evaluation strategy: the ascending power series (summed with ``math.fsum``)
for x <= max(12, nu); for larger x, a normalized downward (Miller)
recurrence at integer orders and the spherical-function downward recursion,
anchored to the closed forms of j_0/j_1, at half-integer orders.  Targets
1e-12 accuracy relative to max(1, |J|) for x <= 50, nu <= 40.

Zeros are bracketed by a pi/4 scan starting at max(nu, 0.5) and bisected to
1e-13.  The finiteness of the all-orders nonvanishing check rests on the
classical bound j_{nu,1} > nu: orders above x cannot vanish at x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

__all__ = [
    "Order",
    "AllIntegers",
    "EvenHalfIntegers",
    "bessel_j",
    "bessel_zero",
    "all_orders_nonzero",
    "BesselError",
]

_SERIES_MAX_TERMS = 400
_ZERO_SCAN_STEP = math.pi / 4.0
_ZERO_BISECT_TOL = 1e-13
NONZERO_THRESHOLD = 1e-9


class BesselError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Order:
    """Integer or half-integer order, stored as twice its value."""

    twice_nu: int

    def __post_init__(self):
        if self.twice_nu < 0:
            raise ValueError("order must be nonnegative")

    @property
    def nu(self) -> float:
        return self.twice_nu / 2.0

    @property
    def is_integer(self) -> bool:
        return self.twice_nu % 2 == 0

    @staticmethod
    def of(value: Union["Order", int, float, str, Fraction]) -> "Order":
        if isinstance(value, Order):
            return value
        if isinstance(value, str):
            value = Fraction(value)
        frac = Fraction(value).limit_denominator(2)
        if frac != Fraction(value) or frac.denominator not in (1, 2):
            raise ValueError(f"order must be an integer or half-integer, got {value}")
        return Order(int(frac * 2))

    def __str__(self) -> str:
        return str(self.twice_nu // 2) if self.is_integer else f"{self.twice_nu}/2"


@dataclass(frozen=True)
class AllIntegers:
    """Check every integer order 0, 1, 2, ..."""


@dataclass(frozen=True)
class EvenHalfIntegers:
    """Orders (n + 2k - 2)/2 for k = 0, 1, 2, ... (ambient dimension n >= 2)."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("ambient dimension must be >= 2")


def _series(twice_nu: int, x: float) -> float:
    nu = twice_nu / 2.0
    if x == 0.0:
        return 1.0 if twice_nu == 0 else 0.0
    if twice_nu % 2 == 0 and twice_nu <= 300:
        term = (0.5 * x) ** (twice_nu // 2) / math.factorial(twice_nu // 2)
    else:
        term = math.exp(nu * math.log(x / 2.0) - math.lgamma(nu + 1.0))
    q = 0.25 * x * x
    terms = [term]
    for k in range(1, _SERIES_MAX_TERMS):
        term = -term * q / (k * (k + nu))
        terms.append(term)
        if abs(term) < 1e-20 * max(1.0, abs(terms[0])) and k > 4:
            break
    return math.fsum(terms)


def _miller_integer(n: int, x: float) -> float:
    # downward recurrence normalized by J_0 + 2*sum J_{2k} = 1
    m = int(max(x, n)) + 22 + int(1.3 * math.sqrt(x))
    if m % 2:
        m += 1
    jp1, j = 0.0, 1e-300
    wanted = 0.0
    norm_terms = []
    for k in range(m, 0, -1):
        jm1 = (2.0 * k / x) * j - jp1
        jp1, j = j, jm1
        if k - 1 == n:
            wanted = j
        if (k - 1) % 2 == 0:
            norm_terms.append(j if k - 1 == 0 else 2.0 * j)
        if abs(j) > 1e280:
            j *= 1e-280
            jp1 *= 1e-280
            wanted *= 1e-280
            norm_terms = [v * 1e-280 for v in norm_terms]
    norm = math.fsum(norm_terms)
    if norm == 0.0:  # pragma: no cover
        raise BesselError(f"Miller normalization vanished at x={x}")
    return wanted / norm


def _spherical_half(twice_nu: int, x: float) -> float:
    # J_{n+1/2}(x) = sqrt(2x/pi) j_n(x); downward recursion anchored to j_0/j_1
    n = (twice_nu - 1) // 2
    m = n + 22 + int(x) + int(1.3 * math.sqrt(x))
    sp1, s = 0.0, 1e-300
    keep = [0.0, 0.0]
    wanted = 0.0
    for k in range(m, 0, -1):
        sm1 = ((2.0 * k + 1.0) / x) * s - sp1
        sp1, s = s, sm1
        if k - 1 == n:
            wanted = s
        if k - 1 <= 1:
            keep[k - 1] = s
        if abs(s) > 1e280:
            s *= 1e-280
            sp1 *= 1e-280
            wanted *= 1e-280
            keep = [v * 1e-280 for v in keep]
    j0 = math.sin(x) / x
    j1 = math.sin(x) / (x * x) - math.cos(x) / x
    if abs(j0) >= abs(j1):
        scale = j0 / keep[0]
    else:
        scale = j1 / keep[1]
    return math.sqrt(2.0 * x / math.pi) * wanted * scale


def bessel_j(order: Union[Order, int, float, str], x: float) -> float:
    """J_nu(x) for x >= 0 and nu a nonnegative integer or half-integer."""
    o = Order.of(order)
    if x < 0:
        raise ValueError(f"x must be nonnegative, got {x}")
    if x == 0.0:
        return 1.0 if o.twice_nu == 0 else 0.0
    if x <= max(12.0, o.nu):
        return _series(o.twice_nu, x)
    if o.is_integer:
        return _miller_integer(o.twice_nu // 2, x)
    return _spherical_half(o.twice_nu, x)


def bessel_zero(order: Union[Order, int, float, str], n: int) -> float:
    """The n-th positive zero j_{nu,n} (n >= 1), accurate to ~1e-13."""
    o = Order.of(order)
    if n < 1:
        raise ValueError("n must be >= 1")
    f = lambda x: bessel_j(o, x)
    x_prev = max(o.nu, 0.5)
    f_prev = f(x_prev)
    found = 0
    # J_nu > 0 on (0, j_{nu,1}), so the scan starts strictly before the first zero
    max_steps = int((n * math.pi + o.nu + 40.0) / _ZERO_SCAN_STEP) + 8
    for _ in range(max_steps):
        x_next = x_prev + _ZERO_SCAN_STEP
        f_next = f(x_next)
        if f_prev == 0.0:
            found += 1
            if found == n:
                return x_prev
        elif f_prev * f_next < 0.0:
            found += 1
            if found == n:
                lo, hi = x_prev, x_next
                f_lo = f_prev
                while hi - lo > _ZERO_BISECT_TOL:
                    mid = 0.5 * (lo + hi)
                    f_mid = f(mid)
                    if f_mid == 0.0:
                        return mid
                    if f_lo * f_mid < 0.0:
                        hi = mid
                    else:
                        lo, f_lo = mid, f_mid
                root = 0.5 * (lo + hi)
                if abs(f(root)) >= 1e-11:
                    raise BesselError(f"zero refinement stalled at x={root} for order {o}")
                return root
        x_prev, f_prev = x_next, f_next
    raise BesselError(f"could not bracket zero #{n} of J_{o}")


def all_orders_nonzero(x: float, parity: Union[AllIntegers, EvenHalfIntegers]) -> bool:
    """True iff J_nu(x) is bounded away from zero for every required order.

    Only orders nu <= ceil(x) are evaluated: the first positive zero of
    J_nu exceeds nu, so larger orders cannot vanish at x.
    """
    if x <= 0:
        raise ValueError("x must be positive")
    bound = math.ceil(x)
    if isinstance(parity, AllIntegers):
        orders = [Order(2 * k) for k in range(bound + 1)]
    else:
        orders = []
        twice = parity.n - 2  # twice the starting order (n + 2k - 2)/2 at k=0
        while twice <= 2 * bound:
            orders.append(Order(twice))
            twice += 2
    for o in orders:
        if abs(bessel_j(o, x)) <= NONZERO_THRESHOLD:
            return False
    return True
