"""Items, bins and the online packing game."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Optional, Sequence

from .sizes import SymbolicSize, sym_add, sym_sign

if TYPE_CHECKING:
    from .algorithms import OnlineAlgorithm

__all__ = [
    "Item",
    "Bin",
    "PackingState",
    "Placement",
    "IllegalPlacement",
    "Violation",
    "BinProfile",
    "apply_placement",
    "verify_packing",
    "profile",
    "run_online",
]

#: A placement decision: index of an existing bin, or ``None`` for a new bin.
Decision = Optional[int]


@dataclass(frozen=True)
class Item:
    id: int
    size: SymbolicSize
    phase: str = ""


class IllegalPlacement(Exception):
    """An algorithm asked for a placement that breaks capacity or cardinality."""

    def __init__(self, item_id: int, bin_index, kind: str):
        self.item_id = item_id
        self.bin_index = bin_index
        self.kind = kind
        super().__init__(f"item {item_id} cannot go into bin {bin_index}: {kind} violated")


class Bin:
    __slots__ = ("index", "items", "load")

    def __init__(self, index: int, items=None, load: SymbolicSize | None = None):
        self.index = index
        self.items: list[Item] = list(items or [])
        self.load = load

    def __len__(self):
        return len(self.items)

    def copy(self) -> "Bin":
        return Bin(self.index, self.items, self.load)


class PackingState:
    """Bins in creation order; each bin caches its exact load.

    Algorithms receive the live state and must treat it as read-only.
    """

    def __init__(self, k: int):
        if k < 2:
            raise ValueError(f"cardinality bound must be >= 2, got {k}")
        self.k = k
        self.bins: list[Bin] = []

    def __len__(self):
        return len(self.bins)

    def copy(self) -> "PackingState":
        st = PackingState(self.k)
        st.bins = [b.copy() for b in self.bins]
        return st

    def check(self, index: int, size: SymbolicSize) -> str | None:
        """Return the violated constraint (``"capacity"``/``"cardinality"``) or None."""
        b = self.bins[index]
        if len(b.items) >= self.k:
            return "cardinality"
        if sym_sign(sym_add(b.load, size, check=False) - 1) > 0:
            return "capacity"
        return None

    def fits(self, index: int, size: SymbolicSize) -> bool:
        return self.check(index, size) is None

    def feasible_bins(self, size: SymbolicSize) -> list[int]:
        return [b.index for b in self.bins if len(b.items) < self.k and self.fits(b.index, size)]

    def bin_of(self) -> dict[int, int]:
        return {it.id: b.index for b in self.bins for it in b.items}

    @property
    def items(self) -> list[Item]:
        return [it for b in self.bins for it in b.items]


@dataclass(frozen=True)
class Placement:
    item_id: int
    bin_index: int
    new_bin: bool

    def to_json(self) -> dict:
        return {"item_id": self.item_id, "bin_index": self.bin_index, "new_bin": self.new_bin}


def apply_placement(state: PackingState, item: Item, decision: Decision) -> Placement:
    """Place ``item`` in ``state`` (mutating it) and return the placement record."""
    if decision is None:
        if sym_sign(item.size - 1) > 0 or sym_sign(item.size) <= 0:
            raise IllegalPlacement(item.id, "new", "capacity")
        idx = len(state.bins)
        state.bins.append(Bin(idx, [item], item.size))
        return Placement(item.id, idx, True)
    if not isinstance(decision, int) or not 0 <= decision < len(state.bins):
        raise IllegalPlacement(item.id, decision, "bin index")
    kind = state.check(decision, item.size)
    if kind is not None:
        raise IllegalPlacement(item.id, decision, kind)
    b = state.bins[decision]
    b.items.append(item)
    b.load = sym_add(b.load, item.size, check=False)
    return Placement(item.id, decision, False)


@dataclass(frozen=True)
class Violation:
    kind: str  # capacity | cardinality | duplicate | missing | unknown | empty
    bin_index: int | None = None
    item_id: int | None = None

    def __str__(self):
        where = []
        if self.bin_index is not None:
            where.append(f"bin {self.bin_index}")
        if self.item_id is not None:
            where.append(f"item {self.item_id}")
        return f"{self.kind} violation ({', '.join(where)})"


def verify_packing(items: Sequence[Item], bins: Sequence[Sequence[int]], k: int) -> list[Violation]:
    """Check a packing given as bins of item ids.  Returns all violations."""
    by_id = {it.id: it for it in items}
    seen: set[int] = set()
    out: list[Violation] = []
    for bi, ids in enumerate(bins):
        if not ids:
            out.append(Violation("empty", bi))
            continue
        sizes = []
        for iid in ids:
            if iid not in by_id:
                out.append(Violation("unknown", bi, iid))
                continue
            if iid in seen:
                out.append(Violation("duplicate", bi, iid))
            seen.add(iid)
            sizes.append(by_id[iid].size)
        if len(ids) > k:
            out.append(Violation("cardinality", bi))
        if sizes:
            total = sizes[0]
            for s in sizes[1:]:
                total = sym_add(total, s, check=False)
            if sym_sign(total - 1) > 0:
                out.append(Violation("capacity", bi))
    for it in items:
        if it.id not in seen:
            out.append(Violation("missing", None, it.id))
    return out


@dataclass(frozen=True)
class BinProfile:
    """``counts[l-1]`` is the number of bins holding exactly ``l`` items."""

    k: int
    counts: tuple[int, ...]

    def __getitem__(self, level: int) -> int:
        if not 1 <= level <= self.k:
            raise IndexError(level)
        return self.counts[level - 1]

    @property
    def items(self) -> int:
        return sum(l * c for l, c in enumerate(self.counts, start=1))

    @property
    def bins(self) -> int:
        return sum(self.counts)


def profile(state: PackingState) -> BinProfile:
    counts = [0] * state.k
    for b in state.bins:
        counts[len(b.items) - 1] += 1
    return BinProfile(state.k, tuple(counts))


def run_online(algorithm: "OnlineAlgorithm", items: Iterable[Item], k: int,
               state: PackingState | None = None) -> tuple[PackingState, list[Placement]]:
    """Feed ``items`` one at a time; abort on the first illegal decision."""
    state = PackingState(k) if state is None else state
    trace = []
    for it in items:
        trace.append(apply_placement(state, it, algorithm.decide(it, state)))
    return state, trace
