"""One adaptive run: the adversary presents items, the algorithm places them."""

from __future__ import annotations

from contextlib import contextmanager
from typing import Iterator

from .algorithms import OnlineAlgorithm
from .packing import Item, PackingState, Placement, apply_placement
from .sizes import SymbolicSize


class Game:
    def __init__(self, k: int, algorithm: OnlineAlgorithm):
        self.k = k
        self.algorithm = algorithm
        self.state = PackingState(k)
        self.items: list[Item] = []
        self.trace: list[Placement] = []

    @property
    def cost(self) -> int:
        return len(self.state.bins)

    def present(self, size: SymbolicSize, phase: str = "") -> tuple[Item, Placement]:
        item = Item(len(self.items), size, phase)
        decision = self.algorithm.decide(item, self.state)
        placement = apply_placement(self.state, item, decision)
        self.items.append(item)
        self.trace.append(placement)
        return item, placement

    @contextmanager
    def branch(self) -> Iterator["Game"]:
        """Yield an independent continuation; the algorithm is restored afterwards."""
        token = self.algorithm.snapshot()
        child = Game.__new__(Game)
        child.k = self.k
        child.algorithm = self.algorithm
        child.state = self.state.copy()
        child.items = list(self.items)
        child.trace = list(self.trace)
        try:
            yield child
        finally:
            self.algorithm.restore(token)
