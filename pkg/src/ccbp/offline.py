"""Offline side of a certificate: modified ratios and an exact small-instance solver."""

from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key
from typing import Sequence

from .sizes import SymbolicSize, sym_add, sym_cmp, sym_sign

__all__ = ["modified_ratio", "brute_force_opt", "chunks", "TooManyItems"]


class TooManyItems(ValueError):
    pass


def modified_ratio(alg_cost: int, opt_ub: int, ca: int = 0, cb: int = 0) -> Fraction:
    """``(ALG + Ca) / (OPT_ub - Cb)`` as an exact rational."""
    den = opt_ub - cb
    if den <= 0:
        raise ZeroDivisionError(f"nonpositive denominator: OPT_ub={opt_ub}, Cb={cb}")
    return Fraction(alg_cost + ca, den)


def chunks(seq: Sequence, size: int) -> list[list]:
    return [list(seq[i:i + size]) for i in range(0, len(seq), size)]


def brute_force_opt(sizes: Sequence[SymbolicSize], k: int, max_items: int = 16) -> int:
    """Minimum number of bins (capacity 1, at most ``k`` items each).

    Depth-first enumeration of set partitions: each item goes into one of the
    open bins or opens exactly one new bin, bins with identical (load, count)
    are tried once, and branches that cannot beat the incumbent are cut.
    """
    n = len(sizes)
    if n > max_items:
        raise TooManyItems(f"{n} items exceed the limit of {max_items}")
    if n == 0:
        return 0
    order = sorted(sizes, key=cmp_to_key(sym_cmp), reverse=True)
    half = SymbolicSize(order[0].k, Fraction(1, 2))
    big = sum(1 for s in order if sym_cmp(s, half) > 0)
    lower = max(-(-n // k), big)

    def fits(load, count, s):
        return count < k and sym_sign(sym_add(load, s, check=False) - 1) <= 0

    # incumbent from first fit decreasing
    ffd: list[list] = []
    for s in order:
        for b in ffd:
            if fits(b[0], b[1], s):
                b[0] = sym_add(b[0], s, check=False)
                b[1] += 1
                break
        else:
            ffd.append([s, 1])
    best = len(ffd)
    if best == lower:
        return best

    # items larger than 1/2 come first in ``order``; each needs its own bin
    loads: list[SymbolicSize] = []
    counts: list[int] = []

    def search(i: int) -> None:
        nonlocal best
        used = len(loads)
        if i == n:
            best = min(best, used)
            return
        free = sum(k - c for c in counts)
        rest = n - i
        need = used + max(0, -(-(rest - free) // k))
        big_left = max(0, big - i)
        if max(need, big_left + (used if i < big else 0), lower) >= best:
            return
        s = order[i]
        seen = set()
        for j in range(used):
            key = (loads[j], counts[j])
            if key in seen or not fits(loads[j], counts[j], s):
                continue
            seen.add(key)
            old = loads[j]
            loads[j] = sym_add(old, s, check=False)
            counts[j] += 1
            search(i + 1)
            loads[j] = old
            counts[j] -= 1
            if best == lower:
                return
        if used + 1 < best:
            loads.append(s)
            counts.append(1)
            search(i + 1)
            loads.pop()
            counts.pop()

    search(0)
    return best
