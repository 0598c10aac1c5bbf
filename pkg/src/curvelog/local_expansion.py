"""Local expansions of hyperlogarithms around exact points.

Around any exact center the value of a label word is a polynomial in the
local logarithm with meromorphic-free coefficients: a finite double sum of
x^j log(x)^k over j at least zero.  The coefficients come from termwise
integration of the letter series; integration constants are exact zeros at
the origin and are matched numerically against the continued function at
other centers.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property

from .curve_genus0 import PoleSet
from .errors import DomainError, NumericError
from .iterint import IntegratorConfig
from .scalars import QI

_CHECK_TOL = 1e-6


@dataclass(frozen=True)
class LogLaurentExpansion:
    """A finite double series sum of c[j,k] x^j log(x)^k on a punctured disk.

    x is the displacement from the center and the logarithm is principal.
    The series is guaranteed faithful for |x| below the stored radius.
    """

    word: tuple
    center: complex
    radius: float
    order: int
    terms: tuple  # pairs ((j, k), complex), canonically sorted

    @cached_property
    def coeffs(self) -> dict:
        return dict(self.terms)

    def coeff(self, j: int, k: int) -> complex:
        return self.coeffs.get((j, k), 0j)

    @property
    def log_degree(self) -> int:
        return max((k for (_, k) in self.coeffs), default=0)

    def evaluate(self, z: complex) -> complex:
        x = complex(z) - self.center
        if x == 0:
            raise DomainError("the expansion lives on the punctured disk; "
                              "its center is excluded")
        if abs(x) >= self.radius:
            raise DomainError(
                f"point lies outside the disk of radius {self.radius:.3g} "
                f"around {self.center}")
        lx = cmath.log(x)
        acc = 0j
        for (j, k), c in self.coeffs.items():
            acc += c * x ** j * lx ** k
        return acc

    def substitute_log_shift(self, delta: complex) -> "LogLaurentExpansion":
        """Replace log(x) by log(x) + delta and re-expand binomially."""
        out: dict = {}
        for (j, k), c in self.coeffs.items():
            for m in range(k + 1):
                key = (j, m)
                out[key] = out.get(key, 0j) + c * math.comb(k, m) * delta ** (k - m)
        terms = tuple(sorted((jk, v) for jk, v in out.items() if v != 0))
        return LogLaurentExpansion(self.word, self.center, self.radius,
                                   self.order, terms)

    def to_json(self):
        return {
            "word": list(self.word),
            "center": [self.center.real, self.center.imag],
            "radius": self.radius,
            "order": self.order,
            "terms": [{"j": j, "k": k, "coeff": [c.real, c.imag]}
                      for (j, k), c in sorted(self.coeffs.items())],
        }


def monodromy_substitution(exp: LogLaurentExpansion) -> LogLaurentExpansion:
    """The effect of one counterclockwise turn around the center."""
    return exp.substitute_log_shift(2j * math.pi)


def _letter_series(ps: PoleSet, lab: str, center: QI, order: int):
    """Coefficients of 1/(z - pole) in the local variable, as a j-indexed
    map; the jump to j = -1 happens only for the letter at the center."""
    p = ps.points[ps.index(lab)]
    if p == center:
        return {-1: 1.0 + 0j}
    u = complex(center - p)
    inv = 1.0 / u
    return {n: -((-inv) ** (n + 1)) for n in range(order + 1)}


def _multiply(cur: dict, letter: dict, order: int) -> dict:
    out: dict = {}
    for (j, k), c in cur.items():
        for n, g in letter.items():
            jj = j + n
            if jj > order:
                continue
            key = (jj, k)
            out[key] = out.get(key, 0j) + c * g
    return out


def _integrate(cur: dict, order: int) -> dict:
    out: dict = {}

    def add(key, v):
        if v != 0:
            out[key] = out.get(key, 0j) + v

    for (j, k), c in cur.items():
        if j == -1:
            add((0, k + 1), c / (k + 1))
            continue
        if j + 1 > order:
            continue
        fall = 1.0
        for m in range(k + 1):
            if m > 0:
                fall *= (k - m + 1)
            add((j + 1, k - m), c * (-1) ** m * fall / (j + 1) ** (m + 1))
    return out


def _series_value(coeffs: dict, x: complex) -> complex:
    lx = cmath.log(x)
    acc = 0j
    for (j, k), c in coeffs.items():
        acc += c * x ** j * lx ** k
    return acc


def expand_at(word, poles, center, order: int = 24,
              log_order: int | None = None, section=None, check: bool = True,
              cfg: IntegratorConfig | None = None) -> LogLaurentExpansion:
    """Expand a label word around an exact center.

    At the origin every integration constant vanishes by the regularization
    convention, so the result is exact up to rounding.  At any other center
    the constants are matched against the function continued to the point
    half a radius to the right of the center, and a second in-disk point
    cross-checks the match.
    """
    from .hyperlog import eval_batch, zero_label

    ps = PoleSet.of(poles)
    word = tuple(word)
    for lab in word:
        ps.index(lab)
    if order < 1:
        raise DomainError("expansion order must be at least one")
    if section is not None and not getattr(section, "is_standard", False):
        raise DomainError("expansions are tied to the dlog representatives; "
                          "corrected sections are not supported")
    if log_order is not None and log_order < len(word):
        raise DomainError(
            f"the word needs logarithm degree up to {len(word)}, above the "
            f"requested bound {log_order}")
    c_exact = QI.of(center)
    c_num = complex(c_exact)
    zero_label(ps)  # regularization needs the origin among the poles
    dists = [abs(c_num - p) for p in ps.as_complex if abs(c_num - p) > 0]
    radius = 0.5 * min(dists) if dists else 1.0

    at_origin = c_exact == QI.of(0)
    prefixes = [word[:k] for k in range(1, len(word) + 1)]
    vals_ref = vals_chk = None
    x_ref = radius / 2.0
    if not at_origin and prefixes:
        z_ref = c_num + x_ref
        z_chk = c_num + 0.45 * radius * cmath.exp(0.25j * math.pi)
        rows = eval_batch(prefixes, [z_ref, z_chk], ps, cfg)
        vals_ref, vals_chk = rows[0], rows[1]

    cur = {(0, 0): 1.0 + 0j}
    for n, lab in enumerate(word):
        prefix = word[:n + 1]
        letter = _letter_series(ps, lab, c_exact, order)
        cur = _integrate(_multiply(cur, letter, order), order)
        if at_origin:
            continue
        const = vals_ref[prefix] - _series_value(cur, x_ref)
        if const != 0:
            cur[(0, 0)] = cur.get((0, 0), 0j) + const
    exp = LogLaurentExpansion(
        word, c_num, radius, order,
        tuple(sorted((jk, v) for jk, v in cur.items() if v != 0)))
    if check and not at_origin and word:
        z_chk = c_num + 0.45 * radius * cmath.exp(0.25j * math.pi)
        got = exp.evaluate(z_chk)
        want = vals_chk[word]
        if abs(got - want) > _CHECK_TOL * max(1.0, abs(want)):
            raise NumericError(
                "local expansion disagrees with the continued function at a "
                f"control point (difference {abs(got - want):.3g})")
    return exp


def evaluate_expansion(exp: LogLaurentExpansion, z: complex) -> complex:
    """Value of a stored expansion inside its disk of validity."""
    return exp.evaluate(z)
