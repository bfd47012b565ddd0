"""Online opponents for the adversaries.

Every algorithm is a deterministic function of its seed and of the items it
has seen, and can snapshot/restore its internal state so that several
adversary continuations can be played from one shared prefix.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .packing import Item, PackingState
from .sizes import sym_cmp

__all__ = [
    "OnlineAlgorithm",
    "FirstFit",
    "BestFit",
    "WorstFit",
    "NextFit",
    "RandomFit",
    "AlwaysNewBin",
    "AlgorithmSpec",
    "REGISTRY",
    "parse_algorithm",
    "make_algorithm",
    "BUILTIN_SPECS",
]


class OnlineAlgorithm:
    name = "abstract"

    def decide(self, item: Item, state: PackingState) -> Optional[int]:
        """Return the index of the bin for ``item`` or ``None`` for a new bin."""
        raise NotImplementedError

    def snapshot(self):
        return None

    def restore(self, token) -> None:
        pass

    @property
    def label(self) -> str:
        return self.name


class FirstFit(OnlineAlgorithm):
    name = "first-fit"

    def decide(self, item, state):
        for b in state.bins:
            if len(b.items) < state.k and state.fits(b.index, item.size):
                return b.index
        return None


class BestFit(OnlineAlgorithm):
    """Fullest feasible bin; ties go to the lowest index."""

    name = "best-fit"

    def decide(self, item, state):
        best = None
        for b in state.bins:
            if len(b.items) < state.k and state.fits(b.index, item.size):
                if best is None or sym_cmp(b.load, best.load) > 0:
                    best = b
        return None if best is None else best.index


class WorstFit(OnlineAlgorithm):
    name = "worst-fit"

    def decide(self, item, state):
        best = None
        for b in state.bins:
            if len(b.items) < state.k and state.fits(b.index, item.size):
                if best is None or sym_cmp(b.load, best.load) < 0:
                    best = b
        return None if best is None else best.index


class NextFit(OnlineAlgorithm):
    """Only the most recently opened bin is ever considered."""

    name = "next-fit"

    def __init__(self):
        self.current: int | None = None

    def decide(self, item, state):
        c = self.current
        if c is not None and c < len(state.bins) and state.fits(c, item.size):
            return c
        self.current = len(state.bins)
        return None

    def snapshot(self):
        return self.current

    def restore(self, token):
        self.current = token


class RandomFit(OnlineAlgorithm):
    """Uniform choice among the feasible bins plus a new bin."""

    name = "random-fit"

    def __init__(self, seed: int):
        self.seed = seed
        self.rng = random.Random(seed)

    @property
    def label(self):
        return f"{self.name}:{self.seed}"

    def decide(self, item, state):
        options: list[Optional[int]] = state.feasible_bins(item.size)
        options.append(None)
        return options[self.rng.randrange(len(options))]

    def snapshot(self):
        return self.rng.getstate()

    def restore(self, token):
        self.rng.setstate(token)


class AlwaysNewBin(OnlineAlgorithm):
    name = "always-new-bin"

    def decide(self, item, state):
        return None


REGISTRY: dict[str, Callable[..., OnlineAlgorithm]] = {
    "first-fit": FirstFit,
    "best-fit": BestFit,
    "next-fit": NextFit,
    "worst-fit": WorstFit,
    "random-fit": RandomFit,
    "always-new-bin": AlwaysNewBin,
}
RANDOMIZED = {"random-fit"}


@dataclass(frozen=True)
class AlgorithmSpec:
    name: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in REGISTRY:
            raise ValueError(f"unknown algorithm {self.name!r}; known: {sorted(REGISTRY)}")
        if (self.name in RANDOMIZED) != ("seed" in self.params):
            raise ValueError(f"seed must be given iff {self.name!r} is randomized")

    def build(self) -> OnlineAlgorithm:
        return REGISTRY[self.name](**self.params)

    def __str__(self):
        if "seed" in self.params:
            return f"{self.name}:{self.params['seed']}"
        return self.name


def parse_algorithm(text: str) -> AlgorithmSpec:
    """Parse CLI selectors like ``first-fit`` or ``random-fit:17``."""
    name, _, arg = text.strip().partition(":")
    if name in RANDOMIZED:
        if not arg:
            raise ValueError(f"{name} needs a seed, e.g. {name}:1")
        return AlgorithmSpec(name, {"seed": int(arg)})
    if arg:
        raise ValueError(f"{name} takes no parameter")
    return AlgorithmSpec(name)


def make_algorithm(text: str) -> OnlineAlgorithm:
    return parse_algorithm(text).build()


BUILTIN_SPECS = ["first-fit", "best-fit", "next-fit", "worst-fit", "always-new-bin"]
