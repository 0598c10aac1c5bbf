"""Reference values computed by means independent of the package.

Constants are frozen literals; the helpers use plain power series or
Euler-Maclaurin tail sums so a regression in the package cannot hide
behind a regression in the oracle.
"""

import math

# zeta(2) = pi^2/6, zeta(3), log 2, and Li_2(1/2) = pi^2/12 - (log 2)^2/2
ZETA2 = 1.6449340668482264
ZETA3 = 1.2020569031595943
LOG2 = 0.6931471805599453
LI2_HALF = 0.5822405264650125


def zeta(s: int, terms: int = 200_000) -> float:
    """Partial sum with an Euler-Maclaurin tail, good to ~1e-14 for s >= 2."""
    acc = math.fsum(n ** -float(s) for n in range(terms, 0, -1))
    n = float(terms)
    tail = n ** (1 - s) / (s - 1) - 0.5 * n ** -s + s * n ** (-s - 1) / 12.0
    return acc + tail


def li2(z: complex, terms: int = 400) -> complex:
    """Dilogarithm power series; accurate for |z| <= 0.7."""
    z = complex(z)
    if abs(z) > 0.75:
        raise ValueError("series oracle needs |z| well inside the unit disk")
    acc = 0j
    for n in range(terms, 0, -1):
        acc += z ** n / n ** 2
    return acc


def li3(z: complex, terms: int = 400) -> complex:
    z = complex(z)
    if abs(z) > 0.75:
        raise ValueError("series oracle needs |z| well inside the unit disk")
    acc = 0j
    for n in range(terms, 0, -1):
        acc += z ** n / n ** 3
    return acc
