"""Adaptive binary-search item generators (SMALL, LARGE, SMALLandLARGE).

Each emitted item has ``a = k**-(E + x)`` where ``x`` bisects the current
exponent window ``(tau, rho)``.  When the placement is classified C1 the
window's upper end moves down to ``x`` (every later item is larger than this
one); on C2 the lower end moves up.  All exponents are scaled by the gap
multiplier ``B`` so C1 and C2 sizes end up separated by a factor of at least
``k**(4B)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .game import Game
from .packing import Item, Placement
from .sizes import DEFAULT_GAP, GapConfig, SymbolicSize, one_minus_power, power

SMALL = "SMALL"
LARGE = "LARGE"
SMALL_AND_LARGE = "SMALLandLARGE"
MODES = (SMALL, LARGE, SMALL_AND_LARGE)

C1 = "C1"
C2 = "C2"

FORM_A = "a"
FORM_ONE_MINUS_A = "one-minus-a"


class ProcedureError(RuntimeError):
    pass


class ProcedureState:
    """Binary-search state of one procedure invocation.

    ``cap`` is the item bound N of the invocation, ``emitted`` the number of
    items produced so far.
    """

    def __init__(self, mode: str, cap: int, k: int, eps_exponent: int = 0,
                 gap: GapConfig = DEFAULT_GAP):
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        if cap < 1:
            raise ValueError("cap must be positive")
        self.mode = mode
        self.cap = cap
        self.k = k
        self.B = gap.B
        self.eps_exponent = eps_exponent
        self.tau0 = self.tau = self.B * 2 ** (cap + 2)
        self.rho0 = self.rho = self.B * 2 ** (cap + 3)
        self.emitted = 0
        self.part = 1
        self.pending: int | None = None
        self.history: list[tuple[int, str, str]] = []  # (x, form, class)
        self._max_c2 = None
        self._min_c1 = None

    def copy(self) -> "ProcedureState":
        other = object.__new__(ProcedureState)
        other.__dict__.update(self.__dict__)
        other.history = list(self.history)
        return other

    @property
    def window(self) -> int:
        return self.rho - self.tau

    def form(self, part: int | None = None) -> str:
        if self.mode == SMALL:
            return FORM_A
        if self.mode == LARGE:
            return FORM_ONE_MINUS_A
        part = self.part if part is None else part
        return FORM_ONE_MINUS_A if part % 2 else FORM_A

    def next_exponent(self) -> int:
        if self.pending is not None:
            raise ProcedureError("previous item has no recorded outcome")
        if self.emitted >= self.cap:
            raise ProcedureError("cap reached")
        x = (self.tau + self.rho) // 2
        self.pending = x
        self.emitted += 1
        return x

    def size_of(self, x: int, form: str) -> SymbolicSize:
        e = self.eps_exponent + x
        return power(self.k, e) if form == FORM_A else one_minus_power(self.k, e)

    def next_size(self) -> tuple[int, str, SymbolicSize]:
        x = self.next_exponent()
        form = self.form()
        return x, form, self.size_of(x, form)

    def record_outcome(self, cls: str) -> None:
        x = self.pending
        if x is None:
            raise ProcedureError("no item awaiting an outcome")
        if cls == C1:
            self.rho = x
            self._min_c1 = x if self._min_c1 is None else min(self._min_c1, x)
        elif cls == C2:
            self.tau = x
            self._max_c2 = x if self._max_c2 is None else max(self._max_c2, x)
        else:
            raise ValueError(f"unknown class {cls!r}")
        self.pending = None
        self.history.append((x, self.form(), cls))
        self.check_invariants()

    def check_invariants(self) -> None:
        i = self.emitted
        expected = self.B * 2 ** (self.cap + 2 - i)
        if self.rho - self.tau != expected:
            raise ProcedureError(f"window {self.rho - self.tau} != {expected} after {i} items")
        if not (self.tau0 <= self.tau < self.rho <= self.rho0):
            raise ProcedureError("window escaped its initial interval")
        x = self.history[-1][0] if self.history else None
        if x is not None and (x % self.B or not self.tau0 < x < self.rho0):
            raise ProcedureError(f"exponent {x} is not a multiple of B inside the window")
        if self._min_c1 is not None and self._min_c1 < self.rho:
            raise ProcedureError("a C1 exponent fell below rho")
        if self._max_c2 is not None and self._max_c2 > self.tau:
            raise ProcedureError("a C2 exponent rose above tau")

    def class_gap(self) -> int | None:
        """Smallest C1 exponent minus largest C2 exponent (None if a class is empty)."""
        if self._min_c1 is None or self._max_c2 is None:
            return None
        return self._min_c1 - self._max_c2


@dataclass
class TranscriptEntry:
    item: Item
    x: int
    form: str
    cls: str
    part: int
    placement: Placement

    def to_json(self) -> dict:
        return {"id": self.item.id, "x": str(self.x), "form": self.form,
                "class": self.cls, "part": self.part}


class ConditionSpec:
    """Classification (C1/C2), stop rule (C3) and part control for a run.

    The default classifies a placement into a new bin as C2 and never stops.
    """

    def classify(self, placement: Placement, part: int) -> str:
        return C2 if placement.new_bin else C1

    def observe(self, entry: TranscriptEntry) -> None:
        pass

    def should_stop(self, transcript: list[TranscriptEntry]) -> bool:
        return False

    @property
    def part(self) -> int:
        return 1


class NewBinIsC1(ConditionSpec):
    def classify(self, placement, part):
        return C1 if placement.new_bin else C2


class StopAfterC1(NewBinIsC1):
    """New bin is C1; stop once ``target`` C1 items have been presented."""

    def __init__(self, target: int):
        self.target = target
        self.count = 0

    def observe(self, entry):
        self.count += entry.cls == C1

    def should_stop(self, transcript):
        return self.count >= self.target


def run_procedure(proc: ProcedureState, conditions: ConditionSpec, game: Game, *,
                  phase: str = "", require_stop: bool = False) -> list[TranscriptEntry]:
    """Play one procedure against ``game.algorithm`` until C3 or the cap."""
    transcript: list[TranscriptEntry] = []
    while not conditions.should_stop(transcript):
        if proc.emitted >= proc.cap:
            if require_stop:
                raise ProcedureError(f"cap exhausted: {proc.cap} items without meeting the stop rule")
            break
        part = conditions.part
        proc.part = part
        x, form, size = proc.next_size()
        tag = f"{phase}.p{part}" if proc.mode == SMALL_AND_LARGE else phase
        item, placement = game.present(size, tag)
        cls = conditions.classify(placement, part)
        proc.record_outcome(cls)
        entry = TranscriptEntry(item, x, form, cls, part, placement)
        transcript.append(entry)
        conditions.observe(entry)
    _check_separation(proc)
    return transcript


def _check_separation(proc: ProcedureState) -> None:
    gap = proc.class_gap()
    if gap is not None and gap < 4 * proc.B:
        raise ProcedureError(f"class separation {gap} below {4 * proc.B}")
