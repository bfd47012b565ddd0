"""Lower-bound values: the closed-form root and the parametric programs.

Every program here has the shape ``LHS <= r * RHS`` with ``RHS >= 0``, so its
feasible set only grows with ``r``.  The bound is the smallest feasible ``r``;
it is bracketed by bisection where ``lo`` is always an infeasible probe and
``hi`` a feasible one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from .linear import Constraint, LinearSystem, R, lp_feasible

__all__ = [
    "BoundResult",
    "closed_form",
    "closed_form_admits",
    "general_limit",
    "k3_system",
    "k5plus_systems",
    "mp_k3",
    "mp_k5plus",
    "ten_sevenths",
    "bound_for",
    "bisect_min_r",
    "bound_table",
    "PUBLISHED_BOUNDS",
    "CLOSED_FORM_PUBLISHED",
    "DEFAULT_TOL",
]

DEFAULT_TOL = Fraction(1, 10 ** 7)

# reference decimals (truncated to five places) for the strongest bound and the closed form
PUBLISHED_BOUNDS = {
    2: "1.42857", 3: "1.55642", 4: "1.63330", 5: "1.69776", 6: "1.74093",
    7: "1.77223", 8: "1.79634", 9: "1.81563", 10: "1.83148", 200000: "1.99999",
}
CLOSED_FORM_PUBLISHED = {
    3: "1.54983", 4: "1.63330", 5: "1.69047", 6: "1.73214", 7: "1.76388",
    8: "1.78888", 9: "1.80909", 10: "1.82575",
}


@dataclass(frozen=True)
class BoundResult:
    k: int
    lo: Fraction
    hi: Fraction
    method: str  # closed-form | mp-k3 | mp-k5plus | ten-sevenths
    probes: int = field(default=0, compare=False)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def decimal(self, places: int = 5) -> str:
        """Truncation of the lower end of the bracket."""
        scaled = self.lo.numerator * 10 ** places // self.lo.denominator
        s = str(scaled).rjust(places + 1, "0")
        return f"{s[:-places]}.{s[-places:]}"

    def __float__(self):
        return float((self.lo + self.hi) / 2)

    def admits(self, ratio) -> bool:
        """Exact test ``ratio >= bound`` (no tolerance)."""
        ratio = Fraction(ratio)
        if self.method == "closed-form":
            return closed_form_admits(self.k, ratio)
        if self.method == "ten-sevenths":
            return ratio >= Fraction(10, 7)
        if self.method == "mp-k3":
            return lp_feasible(k3_system(), ratio)
        if self.method == "mp-k5plus":
            return any(lp_feasible(s, ratio) for s in k5plus_systems(self.k))
        raise ValueError(f"unknown method {self.method!r}")

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "method": self.method,
            "lo": f"{self.lo.numerator}/{self.lo.denominator}",
            "hi": f"{self.hi.numerator}/{self.hi.denominator}",
            "width": float(self.width),
            "decimal": self.decimal(),
        }


def _quadratic(k: int) -> tuple[int, int]:
    b = k ** 3 - k ** 2 - 2 * k
    c = 2 * k ** 3 - 4 * k ** 2 + k
    return b, c


def closed_form_admits(k: int, r: Fraction) -> bool:
    """``r`` is at least the positive root of ``r^2 + b r - c``."""
    b, c = _quadratic(k)
    return r >= 0 and r * r + b * r - c >= 0


def closed_form(k: int, places: int = 12) -> BoundResult:
    """Positive root of ``r^2 + (k^3-k^2-2k) r - (2k^3-4k^2+k)``, bracketed by
    integer square roots to ``10**-places``."""
    if k < 2:
        raise ValueError("k must be >= 2")
    b, c = _quadratic(k)
    disc = b * b + 4 * c
    scale = 10 ** places
    s = isqrt(disc * scale * scale)  # floor(sqrt(disc) * scale)
    lo = Fraction(s - b * scale, 2 * scale)
    hi = lo if s * s == disc * scale * scale else Fraction(s + 1 - b * scale, 2 * scale)
    assert closed_form_admits(k, hi) and (lo == hi or not closed_form_admits(k, lo))
    return BoundResult(k, lo, hi, "closed-form")


def general_limit(k: int) -> Fraction:
    if k < 2:
        raise ValueError("k must be >= 2")
    return Fraction(2 * k, k + 1)


def ten_sevenths() -> BoundResult:
    return BoundResult(2, Fraction(10, 7), Fraction(10, 7), "ten-sevenths")


def k3_system() -> LinearSystem:
    """Four-continuation program for k=3, normalized to X1 + 2 X2 + 3 X3 = 1."""
    c = Constraint.make
    cons = (
        c({"X1": 1, "X2": 2, "X3": 3}, "==", 1, "normalization"),
        # X1+X2+X3 <= r (X1+2X2+3X3)/3
        c({"X1": (1, Fraction(-1, 3)), "X2": (1, Fraction(-2, 3)), "X3": (1, -1)}, "<=", 0, "J1"),
        # X1+2X2+5X3 <= r (X1+2X2+3X3)
        c({"X1": (1, -1), "X2": (2, -2), "X3": (5, -3)}, "<=", 0, "J2"),
        # 6X1+9X2+12X3 <= r (2X1+5X2+8X3)
        c({"X1": (6, -2), "X2": (9, -5), "X3": (12, -8)}, "<=", 0, "J3"),
        # 5X1+10X2+15X3+6d <= r (3X1+6X2+9X3+6d)
        c({"X1": (5, -3), "X2": (10, -6), "X3": (15, -9), "d": (6, -6)}, "<=", 0, "J4"),
        c({"d": 1, "X1": -1, "X2": -1}, "<=", 0, "d<=X1+X2"),
    )
    return LinearSystem(("X1", "X2", "X3", "d"), cons, "mp-k3")


def k5plus_systems(k: int) -> tuple[LinearSystem, LinearSystem]:
    """The two case programs for k >= 5, normalized to N = 1."""
    if k < 5:
        raise ValueError("the third-phase construction needs k >= 5")
    c = Constraint.make
    F = Fraction
    shared = (
        c({"Y": 1, "Xk1": -1, "Yp": -1}, "==", 0, "Y=Xk1+Y'"),
        c({"Xk": k, "Xk1": k - 1, "Yp": k - 2}, ">=", 1, "N<=kXk+(k-1)Xk1+(k-2)Y'"),
        c({"l1": 1}, ">=", F(1, k - 1), "lambda1"),
        c({"l2": k - 1, "Xk": 1, "Y": 1}, ">=", 1, "lambda2"),
        c({"l3": k - 2, "Yp": -2, "Xk1": -2, "Xk": -2}, ">=", 0, "lambda3"),
        # Xk + l1 <= r (1 + l1)/k
        c({"Xk": 1, "l1": (1, F(-1, k))}, "<=", R(F(1, k)), "I1"),
        # Xk + Y + l2 <= r (1 + l2)/k
        c({"Xk": 1, "Y": 1, "l2": (1, F(-1, k))}, "<=", R(F(1, k)), "I2"),
    )
    names = ("Xk", "Xk1", "Yp", "Y", "l1", "l2", "l3")
    case1 = shared + (c({"l3": 1, "Xk1": -1, "Yp": -2}, "<=", 0, "case1"),)
    case2 = shared + (
        c({"l3": 1, "Xk1": -1, "Yp": -2}, ">=", 0, "case2"),
        # Xk + Xk1/2 + l2 + l3/2 <= r (1 + l2 + l3)/k
        c({"Xk": 1, "Xk1": F(1, 2), "l2": (1, F(-1, k)), "l3": (F(1, 2), F(-1, k))},
          "<=", R(F(1, k)), "I3"),
    )
    return (LinearSystem(names, case1, f"mp-k5plus-case1-k{k}"),
            LinearSystem(names, case2, f"mp-k5plus-case2-k{k}"))


def bisect_min_r(feasible, lo=Fraction(1), hi=Fraction(2), tol=DEFAULT_TOL) -> tuple[Fraction, Fraction, int]:
    """Bracket the least ``r`` with ``feasible(r)`` (monotone predicate)."""
    lo, hi = Fraction(lo), Fraction(hi)
    probes = 2
    if feasible(lo):
        raise ValueError(f"lower end {lo} is already feasible")
    while not feasible(hi):
        lo, hi = hi, 2 * hi
        probes += 1
    while hi - lo > tol:
        mid = (lo + hi) / 2
        probes += 1
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return lo, hi, probes


def mp_k3(tol=DEFAULT_TOL) -> BoundResult:
    system = k3_system()
    lo, hi, probes = bisect_min_r(lambda r: lp_feasible(system, r), tol=tol)
    return BoundResult(3, lo, hi, "mp-k3", probes)


def mp_k5plus(k: int, tol=DEFAULT_TOL) -> BoundResult:
    if k < 5:
        raise ValueError("mp_k5plus needs k >= 5")
    results = []
    for system in k5plus_systems(k):
        results.append(bisect_min_r(lambda r, s=system: lp_feasible(s, r), tol=tol))
    lo = min(r[0] for r in results)
    hi = min(r[1] for r in results)
    return BoundResult(k, lo, hi, "mp-k5plus", sum(r[2] for r in results))


def bound_for(k: int, tol=DEFAULT_TOL) -> BoundResult:
    """The strongest bound available for ``k`` (the table's right column)."""
    if k == 2:
        return ten_sevenths()
    if k == 3:
        return mp_k3(tol)
    if k == 4:
        return closed_form(4)
    if 5 <= k <= 10:
        return mp_k5plus(k, tol)
    return closed_form(k)


def bound_table(ks=range(2, 11), tol=DEFAULT_TOL) -> dict[int, BoundResult]:
    return {k: bound_for(k, tol) for k in ks}
