"""Shared independent oracles for the test suite.

These deliberately avoid the library's own code paths: the Bessel oracle is
a plain ascending series, and the integration oracle is composite Simpson
with Richardson refinement.
"""

import math

import pytest


def bessel_series(k: int, x: float, terms: int = 120) -> float:
    """Ascending power series for integer-order J_k, summed with fsum."""
    if x == 0.0:
        return 1.0 if k == 0 else 0.0
    out = []
    term = (x / 2.0) ** k / math.factorial(k)
    q = x * x / 4.0
    for m in range(terms):
        out.append(term)
        term = -term * q / ((m + 1) * (m + 1 + k))
    return math.fsum(out)


def simpson(f, a: float, b: float, n: int = 2048) -> complex:
    """Composite Simpson on n subintervals (n even)."""
    if n % 2:
        n += 1
    h = (b - a) / n
    acc = f(a) + f(b)
    for i in range(1, n):
        acc += f(a + i * h) * (4 if i % 2 else 2)
    return acc * h / 3.0


@pytest.fixture
def bessel_oracle():
    return bessel_series


@pytest.fixture
def simpson_oracle():
    return simpson
