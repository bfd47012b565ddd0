"""Exact linear constraint systems with coefficients affine in a parameter ``r``.

Feasibility over nonnegative variables is decided by Fourier-Motzkin
elimination in rationals.  Intended for the handful of small systems the
bound programs need (at most 8 variables, 16 constraints).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Mapping, Sequence

MAX_VARIABLES = 8
MAX_CONSTRAINTS = 16

Affine = tuple  # (constant, coefficient of r)


def _aff(v) -> tuple[Fraction, Fraction]:
    if isinstance(v, tuple):
        c, cr = v
        return Fraction(c), Fraction(cr)
    return Fraction(v), Fraction(0)


def R(c=1) -> tuple[Fraction, Fraction]:
    """Coefficient ``c * r``."""
    return Fraction(0), Fraction(c)


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple  # ((name, (const, r_coeff)), ...)
    sense: str  # "<=", ">=" or "=="
    rhs: tuple
    label: str = ""

    @classmethod
    def make(cls, coeffs: Mapping[str, object], sense: str, rhs=0, label: str = ""):
        if sense not in ("<=", ">=", "=="):
            raise ValueError(f"bad sense {sense!r}")
        return cls(tuple((v, _aff(c)) for v, c in coeffs.items()), sense, _aff(rhs), label)

    def evaluate(self, r: Fraction) -> tuple[dict[str, Fraction], Fraction]:
        lhs = {v: c + cr * r for v, (c, cr) in self.coeffs}
        c, cr = self.rhs
        return lhs, c + cr * r

    def holds(self, point: Mapping[str, Fraction], r) -> bool:
        lhs, rhs = self.evaluate(Fraction(r))
        value = sum(a * Fraction(point[v]) for v, a in lhs.items())
        if self.sense == "<=":
            return value <= rhs
        if self.sense == ">=":
            return value >= rhs
        return value == rhs


@dataclass(frozen=True)
class LinearSystem:
    variables: tuple[str, ...]
    constraints: tuple[Constraint, ...]
    name: str = ""

    def __post_init__(self):
        known = set(self.variables)
        for con in self.constraints:
            for v, _ in con.coeffs:
                if v not in known:
                    raise ValueError(f"constraint {con.label!r} uses unknown variable {v!r}")

    def rows(self, r) -> list[tuple[tuple[Fraction, ...], Fraction]]:
        """All constraints at fixed ``r`` as ``a . x <= b`` rows."""
        r = Fraction(r)
        idx = {v: i for i, v in enumerate(self.variables)}
        out = []
        for con in self.constraints:
            lhs, rhs = con.evaluate(r)
            a = [Fraction(0)] * len(self.variables)
            for v, c in lhs.items():
                a[idx[v]] += c
            if con.sense in ("<=", "=="):
                out.append((tuple(a), rhs))
            if con.sense in (">=", "=="):
                out.append((tuple(-x for x in a), -rhs))
        return out

    def satisfied_by(self, point: Mapping[str, Fraction], r) -> bool:
        if any(Fraction(point[v]) < 0 for v in self.variables):
            return False
        return all(con.holds(point, r) for con in self.constraints)


class DimensionError(ValueError):
    pass


def _normalize(a: Sequence[Fraction], b: Fraction) -> tuple[tuple[int, ...], Fraction] | None:
    """Scale a row to coprime integer coefficients (None for all-zero rows)."""
    nz = [x for x in a if x]
    if not nz:
        return None
    den = 1
    for x in nz:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in a]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints), b * den / g


def fm_feasible(rows: Sequence[tuple[Sequence[Fraction], Fraction]], n: int) -> bool:
    """Is ``{x >= 0 : a.x <= b for all rows}`` nonempty?  Exact."""
    system: dict[tuple[int, ...], Fraction] = {}

    def add(a, b) -> bool:
        norm = _normalize(a, b)
        if norm is None:
            return b >= 0
        key, bb = norm
        old = system.get(key)
        if old is None or bb < old:
            system[key] = bb
        return True

    for a, b in rows:
        if len(a) != n:
            raise ValueError("row length does not match variable count")
        if not add([Fraction(x) for x in a], Fraction(b)):
            return False
    for j in range(n):
        e = [Fraction(0)] * n
        e[j] = Fraction(-1)
        add(e, Fraction(0))

    remaining = list(range(n))
    while remaining:
        def cost(j):
            p = sum(1 for key in system if key[j] > 0)
            m = sum(1 for key in system if key[j] < 0)
            return p * m - p - m
        j = min(remaining, key=cost)
        remaining.remove(j)
        pos, neg, rest = [], [], {}
        for key, b in system.items():
            if key[j] > 0:
                pos.append((key, b))
            elif key[j] < 0:
                neg.append((key, b))
            else:
                rest[key] = b
        system = rest
        for kp, bp in pos:
            for kn, bn in neg:
                cp, cn = kp[j], -kn[j]
                a = [Fraction(cn * x + cp * y) for x, y in zip(kp, kn)]
                if not add(a, cn * bp + cp * bn):
                    return False
    return all(b >= 0 for b in system.values())


def lp_feasible(system: LinearSystem, r) -> bool:
    """Exact feasibility of ``system`` at parameter value ``r`` (variables >= 0)."""
    n = len(system.variables)
    if n > MAX_VARIABLES or len(system.constraints) > MAX_CONSTRAINTS:
        raise DimensionError(
            f"system too large: {n} variables, {len(system.constraints)} constraints")
    return fm_feasible(system.rows(r), n)
