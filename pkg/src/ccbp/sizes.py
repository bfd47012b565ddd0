"""Exact item sizes of the form ``base + sum(c_j * k**-e_j)``.

The adversaries emit sizes such as ``k**-x`` and ``1 - k**-x`` where ``x``
is a multiple of a gap multiplier and can be astronomically large
(``8 * 2**300`` is routine).  Such values are never materialized; signs are
decided by grouping terms into clusters of nearby exponents, evaluating each
cluster exactly, and bounding everything after it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "GapConfig",
    "DEFAULT_GAP",
    "DominanceError",
    "MaterializationError",
    "SymbolicSize",
    "sym",
    "power",
    "one_minus_power",
    "sym_add",
    "sym_sign",
    "sym_cmp",
    "sym_sum",
    "fits_in_bin",
    "to_exact_rational",
]


class DominanceError(ArithmeticError):
    """A sign could not be decided from exponent gaps and coefficient mass."""


class MaterializationError(ValueError):
    pass


@dataclass(frozen=True)
class GapConfig:
    """Scaling and safety limits for symbolic sizes.

    ``B`` scales every procedure exponent; ``exact_exponent_limit`` caps the
    exponents :func:`to_exact_rational` will expand.  ``cluster_gap`` is the
    exponent distance beyond which two terms are no longer evaluated jointly.
    """

    B: int = 8
    exact_exponent_limit: int = 2 ** 13
    cluster_gap: int = 64
    coeff_factor: int = 4  # coefficients bounded by coeff_factor * k**2

    def coeff_bound(self, k: int) -> int:
        return self.coeff_factor * k * k


DEFAULT_GAP = GapConfig()

# beyond this exponent distance k**d is not formed; the smaller power is
# already a valid (weaker) bound
_MAX_POWER = 2048


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return Fraction(v)
    return Fraction(v)


class SymbolicSize:
    """Immutable exact value ``base + sum(coeff * k**-exp for coeff, exp in terms)``.

    Terms are kept canonical: exponents strictly increasing and positive,
    zero coefficients dropped.  ``==`` and ``hash`` are structural; order
    comparisons (``<``, ``<=`` ...) compare exact values.
    """

    __slots__ = ("k", "base", "terms", "_hash")

    def __init__(self, k: int, base=0, terms: Iterable[tuple] = ()):
        if k < 2:
            raise ValueError(f"radix must be >= 2, got {k}")
        merged: dict[int, Fraction] = {}
        base = _frac(base)
        for c, e in terms:
            e = int(e)
            c = _frac(c)
            if e < 0:
                raise ValueError(f"negative exponent {e}")
            if e == 0:
                base += c
                continue
            merged[e] = merged.get(e, Fraction(0)) + c
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "base", base)
        object.__setattr__(
            self, "terms", tuple((merged[e], e) for e in sorted(merged) if merged[e])
        )
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("SymbolicSize is immutable")

    @classmethod
    def _raw(cls, k: int, base: Fraction, terms: tuple) -> "SymbolicSize":
        # trusted constructor: terms already canonical
        obj = object.__new__(cls)
        object.__setattr__(obj, "k", k)
        object.__setattr__(obj, "base", base)
        object.__setattr__(obj, "terms", terms)
        object.__setattr__(obj, "_hash", None)
        return obj

    # structural identity
    def __eq__(self, other):
        if not isinstance(other, SymbolicSize):
            return NotImplemented
        return self.k == other.k and self.base == other.base and self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.k, self.base, self.terms))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        parts = [str(self.base)] if self.base or not self.terms else []
        for c, e in self.terms:
            parts.append(f"{c}*{self.k}^-{e}")
        return f"SymbolicSize({' + '.join(parts)})"

    # arithmetic
    def __add__(self, other):
        if not isinstance(other, SymbolicSize):
            other = SymbolicSize(self.k, other)
        return sym_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return SymbolicSize._raw(self.k, -self.base, tuple((-c, e) for c, e in self.terms))

    def __sub__(self, other):
        if not isinstance(other, SymbolicSize):
            other = SymbolicSize(self.k, other)
        return sym_add(self, -other, check=False)

    def __rsub__(self, other):
        return SymbolicSize(self.k, other) - self

    def scale(self, factor) -> "SymbolicSize":
        factor = _frac(factor)
        return SymbolicSize(self.k, self.base * factor, ((c * factor, e) for c, e in self.terms))

    # value order
    def __lt__(self, other):
        return sym_cmp(self, other) < 0

    def __le__(self, other):
        return sym_cmp(self, other) <= 0

    def __gt__(self, other):
        return sym_cmp(self, other) > 0

    def __ge__(self, other):
        return sym_cmp(self, other) >= 0

    @property
    def min_exponent(self) -> int | None:
        return self.terms[0][1] if self.terms else None

    def to_json(self) -> dict:
        return {
            "base": _fmt(self.base),
            "k": self.k,
            "terms": [[_fmt(c), str(e)] for c, e in self.terms],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SymbolicSize":
        return cls(int(data["k"]), Fraction(data["base"]),
                   ((Fraction(c), int(e)) for c, e in data["terms"]))


def _fmt(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def sym(k: int, base=0, terms: Iterable[tuple] = ()) -> SymbolicSize:
    return SymbolicSize(k, base, terms)


def power(k: int, exponent: int, coeff=1) -> SymbolicSize:
    """``coeff * k**-exponent``."""
    return SymbolicSize(k, 0, [(coeff, exponent)])


def one_minus_power(k: int, exponent: int, coeff=1) -> SymbolicSize:
    """``1 - coeff * k**-exponent``."""
    return SymbolicSize(k, 1, [(-_frac(coeff), exponent)])


def _merge(a: tuple, b: tuple) -> tuple:
    out = []
    i = j = 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        ca, ea = a[i]
        cb, eb = b[j]
        if ea < eb:
            out.append(a[i])
            i += 1
        elif eb < ea:
            out.append(b[j])
            j += 1
        else:
            c = ca + cb
            if c:
                out.append((c, ea))
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def sym_add(a: SymbolicSize, b: SymbolicSize, *, gap: GapConfig = DEFAULT_GAP,
            check: bool = True) -> SymbolicSize:
    """Canonical sum.  With ``check`` the merged coefficients must stay within
    the bound that keeps sign decisions cheap (``4 k**2`` by default)."""
    if a.k != b.k:
        raise ValueError(f"radix mismatch: {a.k} vs {b.k}")
    terms = _merge(a.terms, b.terms)
    if check:
        bound = gap.coeff_bound(a.k)
        for c, e in terms:
            if abs(c.numerator) > bound or c.denominator > bound:
                raise DominanceError(
                    f"dominance precondition broken: coefficient {c} at exponent {e}")
    return SymbolicSize._raw(a.k, a.base + b.base, terms)


def sym_sum(values: Sequence[SymbolicSize], k: int | None = None) -> SymbolicSize:
    if not values:
        if k is None:
            raise ValueError("empty sum needs an explicit radix")
        return SymbolicSize(k)
    total = values[0]
    for v in values[1:]:
        total = sym_add(total, v, check=False)
    return total


def _sign(q) -> int:
    return (q > 0) - (q < 0)


def sym_sign(s: SymbolicSize, *, gap: GapConfig = DEFAULT_GAP) -> int:
    """Sign (-1, 0, 1) of the exact value of ``s``.

    Terms (with ``base`` at exponent 0) are split into clusters whose internal
    exponent steps are below ``gap.cluster_gap``.  The leading cluster is
    evaluated exactly; if it is nonzero and its magnitude beats the total
    coefficient mass of everything after it, scaled by the exponent distance,
    its sign is the answer.  A cluster summing to exactly zero is dropped.
    """
    k = s.k
    seq = list(s.terms)
    if s.base:
        seq.insert(0, (s.base, 0))
    n = len(seq)
    i = 0
    while i < n:
        j = i + 1
        while j < n and seq[j][1] - seq[j - 1][1] < gap.cluster_gap:
            j += 1
        last = seq[j - 1][1]
        # cluster value times k**(last - lead); same sign as the cluster
        w = Fraction(0)
        for c, e in seq[i:j]:
            w += c * k ** (last - e)
        if j == n:
            return _sign(w)
        if w == 0:
            i = j
            continue
        tail_mass = sum(abs(c) for c, _ in seq[j:])
        dist = min(seq[j][1] - last, _MAX_POWER)
        if abs(w) * k ** dist > tail_mass:
            return _sign(w)
        raise DominanceError(
            f"cannot decide sign: leading cluster {w} vs tail mass {tail_mass} "
            f"at distance {seq[j][1] - last}")
    return 0


def sym_cmp(a: SymbolicSize, b: SymbolicSize, *, gap: GapConfig = DEFAULT_GAP) -> int:
    if a.k != b.k:
        raise ValueError(f"radix mismatch: {a.k} vs {b.k}")
    return sym_sign(sym_add(a, -b, check=False), gap=gap)


def fits_in_bin(sizes: Sequence[SymbolicSize], k: int) -> bool:
    if not sizes:
        raise ValueError("fits_in_bin needs at least one size")
    if len(sizes) > k:
        return False
    total = sym_sum(list(sizes))
    return sym_sign(total - 1) <= 0


def to_exact_rational(s: SymbolicSize, *, gap: GapConfig = DEFAULT_GAP) -> Fraction:
    value = s.base
    for c, e in s.terms:
        if e > gap.exact_exponent_limit:
            raise MaterializationError(
                f"materialization too large: exponent {e} > {gap.exact_exponent_limit}")
        value += c / Fraction(s.k ** e)
    return value
