"""The oracles themselves get cross-checked against an unrelated library,
so a typo in a frozen literal cannot silently validate the package."""

import math

import mpmath
import pytest

from oracles import LI2_HALF, LOG2, ZETA2, ZETA3, li2, li3, zeta


def test_frozen_constants_against_mpmath():
    assert abs(ZETA2 - float(mpmath.zeta(2))) < 1e-15
    assert abs(ZETA3 - float(mpmath.zeta(3))) < 1e-15
    assert abs(LOG2 - float(mpmath.log(2))) < 1e-15
    assert abs(LI2_HALF - float(mpmath.polylog(2, 0.5))) < 1e-15
    assert abs(ZETA2 - math.pi ** 2 / 6) < 1e-15


def test_series_helpers_agree_with_the_constants():
    assert abs(zeta(2) - ZETA2) < 1e-13
    assert abs(zeta(3) - ZETA3) < 1e-13
    assert abs(li2(0.5) - LI2_HALF) < 1e-15
    z = 0.3 - 0.4j
    assert abs(li2(z) - complex(mpmath.polylog(2, mpmath.mpc(z)))) < 1e-13
    assert abs(li3(z) - complex(mpmath.polylog(3, mpmath.mpc(z)))) < 1e-13


def test_series_helpers_refuse_slow_regions():
    with pytest.raises(ValueError):
        li2(0.9)
    with pytest.raises(ValueError):
        li3(1.0 + 0j)
