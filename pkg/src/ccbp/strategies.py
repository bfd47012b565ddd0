"""Complete adversaries and the certificates they produce.

A strategy plays its first phase(s) against the algorithm, snapshots the
algorithm, then plays every continuation (branch) from that snapshot.  For
each branch it builds an explicit offline packing, verifies it, and records
the modified ratio ``(ALG + Ca) / (OPT_ub - Cb)``.  The certificate reports
the largest of these and checks it against the strategy's guaranteed bound
with exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from . import bounds
from .algorithms import OnlineAlgorithm
from .game import Game
from .offline import chunks, modified_ratio
from .packing import Item, Placement, profile, verify_packing
from .procedures import (
    C1,
    C2,
    LARGE,
    SMALL,
    SMALL_AND_LARGE,
    ConditionSpec,
    ProcedureState,
    StopAfterC1,
    TranscriptEntry,
    run_procedure,
)
from .sizes import DEFAULT_GAP, GapConfig, SymbolicSize, power, sym_cmp, sym_sign

__all__ = [
    "Certificate",
    "BranchRecord",
    "InvariantError",
    "VerificationError",
    "run_general",
    "run_k3",
    "run_k5plus",
    "run_k2",
    "run_strategy",
    "STRATEGIES",
    "auto_strategy",
    "n_min",
    "compatible",
    "guaranteed_bound",
]

SCHEMA = "ccbp-certificate/1"


class InvariantError(AssertionError):
    """A structural property the construction relies on did not hold."""


class VerificationError(RuntimeError):
    """A constructed offline packing failed verification."""


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise InvariantError(msg)


def _ceil(a: int, b: int) -> int:
    return -(-a // b)


def _q(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass
class BranchRecord:
    label: str
    items: list[Item]
    trace: list[Placement]
    alg_cost: int
    packing: list[list[int]]
    ca: int
    cb: int
    ratio: Fraction
    transcript: list[TranscriptEntry] = field(default_factory=list)

    @property
    def opt_ub(self) -> int:
        return len(self.packing)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "alg_cost": self.alg_cost,
            "opt_ub": self.opt_ub,
            "ca": self.ca,
            "cb": self.cb,
            "ratio": _q(self.ratio),
            "ratio_decimal": f"{float(self.ratio):.6f}",
            "items": [_item_json(it) for it in self.items],
            "trace": [p.to_json() for p in self.trace],
            "transcript": [e.to_json() for e in self.transcript],
            "packing": self.packing,
        }


def _item_json(it: Item) -> dict:
    return {"id": it.id, "phase": it.phase, "size": it.size.to_json()}


@dataclass
class Certificate:
    k: int
    N: int
    strategy: str
    algorithm: str
    bound: bounds.BoundResult
    prefix_items: list[Item]
    prefix_trace: list[Placement]
    prefix_transcripts: dict[str, list[TranscriptEntry]]
    branches: list[BranchRecord]
    accounting: dict
    gap_B: int = DEFAULT_GAP.B

    @property
    def chosen(self) -> BranchRecord:
        best = self.branches[0]
        for b in self.branches[1:]:
            if b.ratio > best.ratio:
                best = b
        return best

    @property
    def ratio(self) -> Fraction:
        return self.chosen.ratio

    @property
    def meets_bound(self) -> bool:
        return self.ratio >= self.bound.lo and self.bound.admits(self.ratio)

    @property
    def margin(self) -> float:
        return float(self.ratio - self.bound.hi)

    def branch(self, label: str) -> BranchRecord:
        for b in self.branches:
            if b.label == label:
                return b
        raise KeyError(label)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "meta": {
                "k": self.k,
                "N": self.N,
                "strategy": self.strategy,
                "algorithm": self.algorithm,
                "gap_B": self.gap_B,
            },
            "bound": self.bound.to_json(),
            "chosen": self.chosen.label,
            "ratio": _q(self.ratio),
            "ratio_decimal": f"{float(self.ratio):.6f}",
            "meets_bound": self.meets_bound,
            "accounting": self.accounting,
            "transcripts": {
                "prefix_items": [_item_json(it) for it in self.prefix_items],
                "prefix_trace": [p.to_json() for p in self.prefix_trace],
                "procedures": {name: [e.to_json() for e in t]
                               for name, t in self.prefix_transcripts.items()},
            },
            "branches": [b.to_json() for b in self.branches],
        }


def _record(game: Game, label: str, prefix_len: int, packing: list[list[int]],
            ca: int, cb: int, transcript=()) -> BranchRecord:
    violations = verify_packing(game.items, packing, game.k)
    if violations:
        raise VerificationError(
            f"branch {label}: offline packing invalid: {', '.join(map(str, violations[:5]))}")
    ratio = modified_ratio(game.cost, len(packing), ca, cb)
    return BranchRecord(label, game.items[prefix_len:], game.trace[prefix_len:],
                        game.cost, packing, ca, cb, ratio, list(transcript))


def _present_many(game: Game, size: SymbolicSize, count: int, phase: str) -> list[int]:
    return [game.present(size, phase)[0].id for _ in range(count)]


def _max_size(sizes: list[SymbolicSize]) -> SymbolicSize:
    best = sizes[0]
    for s in sizes[1:]:
        if sym_cmp(s, best) > 0:
            best = s
    return best


def _min_size(sizes: list[SymbolicSize]) -> SymbolicSize:
    best = sizes[0]
    for s in sizes[1:]:
        if sym_cmp(s, best) < 0:
            best = s
    return best


def _sizes(items: list[Item]) -> list[SymbolicSize]:
    return [it.size for it in items]


def _one_minus(k: int, s: SymbolicSize, factor=1) -> SymbolicSize:
    """``1 - factor * s``."""
    return SymbolicSize(k, 1) - s.scale(factor)


def _sym_json(s: SymbolicSize | None):
    return None if s is None else s.to_json()


def n_min(strategy: str, k: int) -> int:
    if strategy in ("general", "k5plus"):
        return 3 * k * (k - 1)
    if strategy == "k3":
        return 12
    if strategy == "k2":
        return 10
    raise ValueError(f"unknown strategy {strategy!r}")


def compatible(strategy: str, k: int) -> bool:
    return {"k2": k == 2, "k3": k == 3, "k5plus": k >= 5, "general": k >= 3}[strategy]


def auto_strategy(k: int) -> str:
    if k == 2:
        return "k2"
    if k == 3:
        return "k3"
    if k == 4:
        return "general"
    return "k5plus"


# first phase shared by the general and k >= 5 adversaries

def _first_phase_small(game: Game, N: int, gap: GapConfig):
    proc = ProcedureState(SMALL, N, game.k, 0, gap)
    transcript = run_procedure(proc, ConditionSpec(), game, phase="phase1")
    small = [e.item for e in transcript if e.cls == C1]
    large = [e.item for e in transcript if e.cls == C2]
    k = game.k
    delta = _max_size(_sizes(small)) if small else None
    Delta = _max_size([e.item.size for e in transcript])
    _require(sym_cmp(Delta, power(k, 3)) < 0, "largest first-phase item is not below k^-3")
    if delta is not None:
        alpha = delta.scale(k)
        _require(sym_cmp(alpha, _min_size(_sizes(large))) < 0,
                 "a bin-opening first-phase item is not above k * delta")
    prof = profile(game.state)
    Xk = prof[k]
    Y = prof.bins - Xk
    _require(prof.items == N, "profile does not count every first-phase item")
    _require(len(large) == prof.bins, "every bin must be opened by exactly one C2 item")
    _require(N <= k * Xk + (k - 1) * Y, "N <= k X_k + (k-1) Y")
    return transcript, small, large, delta, Delta, prof


def _branch_i1(game: Game, N: int, Delta: SymbolicSize, prefix: int, first_ids: list[int]):
    k = game.k
    lam1 = _ceil(N, k - 1)
    with game.branch() as g:
        big = _present_many(g, _one_minus(k, Delta, k), lam1, "phase2:I1")
        groups = chunks(first_ids, k - 1)
        packing = [[b] + (groups[i] if i < len(groups) else []) for i, b in enumerate(big)]
        rec = _record(g, "I1", prefix, packing, 0, 1)
    return rec, lam1


def _phase2_i2(g: Game, N: int, Z: int, delta, label: str) -> list[int]:
    k = g.k
    lam2 = _ceil(N - Z, k - 1)
    if lam2 == 0:
        return []
    _require(delta is not None, "second-phase items of I2 need a small first-phase item")
    return _present_many(g, _one_minus(k, delta, k), lam2, f"phase2:{label}")


def run_general(k: int, N: int, algorithm: OnlineAlgorithm, *,
                gap: GapConfig = DEFAULT_GAP) -> Certificate:
    """Two-branch adversary (I1/I2) certified against the closed-form root."""
    if k < 3:
        raise ValueError("the general adversary needs k >= 3")
    if N < 1 or N % k:
        raise ValueError("N must be a positive multiple of k")
    game = Game(k, algorithm)
    transcript, small, large, delta, Delta, prof = _first_phase_small(game, N, gap)
    Xk = prof[k]
    Y = prof.bins - Xk
    Z = Xk + Y
    prefix = len(game.items)
    first_ids = [it.id for it in game.items]
    small_ids = [it.id for it in small]
    large_ids = [it.id for it in large]

    i1, lam1 = _branch_i1(game, N, Delta, prefix, first_ids)
    with game.branch() as g:
        big = _phase2_i2(g, N, Z, delta, "I2")
        packing = [[b] + grp for b, grp in zip(big, chunks(small_ids, k - 1))]
        packing += chunks(large_ids, k)
        i2 = _record(g, "I2", prefix, packing, 0, 2)

    cert = Certificate(
        k, N, "general", algorithm.label, guaranteed_bound("general", k),
        game.items, game.trace, {"phase1": transcript}, [i1, i2], {})
    r = cert.ratio
    _require((k - 1) * Xk <= (r - 1) * N, "(k-1) X_k <= (r-1) N")
    _require(Z * (k * k - 2 * k + r) <= k * N * (r - 1), "Z (k^2-2k+r) <= kN(r-1)")
    cert.accounting = {
        "delta": _sym_json(delta),
        "Delta": Delta.to_json(),
        "alpha": _sym_json(delta.scale(k) if delta is not None else None),
        "X_k": Xk,
        "Y": Y,
        "Z": Z,
        "lambda1": lam1,
        "lambda2": len(i2.items),
        "limit_2k_over_k_plus_1": _q(bounds.general_limit(k)),
    }
    return cert


def run_k5plus(k: int, N: int, algorithm: OnlineAlgorithm, *,
               gap: GapConfig = DEFAULT_GAP) -> Certificate:
    """I1/I2 plus a third continuation of 0.35-items (k >= 5)."""
    if k < 5:
        raise ValueError("the k >= 5 adversary needs k >= 5")
    if N < 1:
        raise ValueError("N must be positive")
    game = Game(k, algorithm)
    transcript, small, large, delta, Delta, prof = _first_phase_small(game, N, gap)
    Xk, Xk1 = prof[k], prof[k - 1]
    Yp = prof.bins - Xk - Xk1
    Y = Xk1 + Yp
    Z = Xk + Y
    _require(N <= k * Xk + (k - 1) * Xk1 + (k - 2) * Yp, "N <= kX_k+(k-1)X_{k-1}+(k-2)Y'")
    prefix = len(game.items)
    first_ids = [it.id for it in game.items]
    small_ids = [it.id for it in small]
    large_ids = [it.id for it in large]

    third = SymbolicSize(k, Fraction(7, 20))
    _require(sym_sign(Delta.scale(k - 2) - Fraction(3, 10)) < 0,
             "k-2 first-phase items must total below 0.3")
    i1, lam1 = _branch_i1(game, N, Delta, prefix, first_ids)
    lam3 = 2 * _ceil(Z, k - 2)
    with game.branch() as g2:
        big = _phase2_i2(g2, N, Z, delta, "I2")
        for it in g2.items[prefix:]:
            _require(sym_sign(it.size - Fraction(13, 20)) > 0, "second-phase size must exceed 0.65")
        base_packing = [[b] + grp for b, grp in zip(big, chunks(small_ids, k - 1))]
        i2 = _record(g2, "I2", prefix, base_packing + chunks(large_ids, k), 0, 2)
        with g2.branch() as g3:
            extra = _present_many(g3, third, lam3, "phase3:I3")
            packing = list(base_packing)
            for j, grp in enumerate(chunks(large_ids, k - 2)):
                packing.append(grp + extra[2 * j:2 * j + 2])
            _require(2 * len(chunks(large_ids, k - 2)) == lam3, "third-phase pairing mismatch")
            i3 = _record(g3, "I3", prefix, packing, 0, 2)
            _require(i3.alg_cost >= i2.alg_cost + max(0, _ceil(lam3 - Xk1 - 2 * Yp, 2)),
                     "third-phase items must open the predicted number of bins")

    cert = Certificate(
        k, N, "k5plus", algorithm.label, guaranteed_bound("k5plus", k),
        game.items, game.trace, {"phase1": transcript}, [i1, i2, i3], {})
    case = 1 if lam3 <= Xk1 + 2 * Yp else 2
    lam2 = len(i2.items)
    point = {"Xk": Fraction(Xk, N), "Xk1": Fraction(Xk1, N), "Yp": Fraction(Yp, N),
             "Y": Fraction(Y, N), "l1": Fraction(lam1, N), "l2": Fraction(lam2, N),
             "l3": Fraction(lam3, N)}
    system = bounds.k5plus_systems(k)[case - 1]
    _require(system.satisfied_by(point, cert.ratio),
             f"realized counts violate the case-{case} program at the certified ratio")
    cert.accounting = {
        "delta": _sym_json(delta),
        "Delta": Delta.to_json(),
        "X_k": Xk,
        "X_k_minus_1": Xk1,
        "Y_prime": Yp,
        "Y": Y,
        "lambda1": lam1,
        "lambda2": lam2,
        "lambda3": lam3,
        "case": case,
    }
    return cert


@lru_cache(maxsize=None)
def guaranteed_bound(strategy: str, k: int) -> bounds.BoundResult:
    if strategy == "general":
        return bounds.closed_form(k)
    if strategy == "k5plus":
        return bounds.mp_k5plus(k)
    if strategy == "k3":
        return bounds.mp_k3()
    if strategy == "k2":
        return bounds.ten_sevenths()
    raise ValueError(f"unknown strategy {strategy!r}")


def run_k3(N: int, algorithm: OnlineAlgorithm, *, gap: GapConfig = DEFAULT_GAP) -> Certificate:
    """Four continuations J1..J4 for k = 3."""
    k = 3
    if N < 1:
        raise ValueError("N must be positive")
    B = gap.B
    eps_exp = B * 2 ** (2 * N + 4)
    eps = power(k, eps_exp)
    game = Game(k, algorithm)
    proc = ProcedureState(SMALL, N, k, eps_exp, gap)
    transcript = run_procedure(proc, ConditionSpec(), game, phase="phase1")
    small = [e.item for e in transcript if e.cls == C1]
    large = [e.item for e in transcript if e.cls == C2]
    u1 = _max_size(_sizes(small)) if small else None
    u2 = _min_size(_sizes(large))
    if u1 is not None:
        _require(sym_cmp(u2, u1.scale(k)) > 0, "u2 > k u1")
    prof = profile(game.state)
    X1, X2, X3 = prof[1], prof[2], prof[3]
    S = X1 + X2 + X3
    prefix = len(game.items)
    first_ids = [it.id for it in game.items]
    small_ids = [it.id for it in small]
    large_ids = [it.id for it in large]
    _require(len(large_ids) == S and len(small_ids) == N - S, "one C2 item per bin")

    # J1: stop
    j1 = _record(game, "J1", prefix, chunks(first_ids, 3), 0, 1)

    # J2: ceil(N/2) items of size 1 - 2 eps
    with game.branch() as g:
        big = _present_many(g, _one_minus(k, eps, 2), _ceil(N, 2), "phase2:J2")
        packing = [[b] + grp for b, grp in zip(big, chunks(first_ids, 2))]
        j2 = _record(g, "J2", prefix, packing, 0, 1)
        _require(j2.alg_cost >= X3 + _ceil(N, 2), "ALG(J2) >= X3 + ceil(N/2)")

    # J3: ceil((N - S)/2) items of size 1 - 2 u1
    with game.branch() as g:
        lam = _ceil(N - S, 2)
        big = _present_many(g, _one_minus(k, u1, 2), lam, "phase2:J3") if lam else []
        packing = chunks(large_ids, 3) + [[b] + grp for b, grp in zip(big, chunks(small_ids, 2))]
        j3 = _record(g, "J3", prefix, packing, 0, 2)
        _require(j3.alg_cost == S + lam, "every J3 second-phase item opens a new bin")

    # J4: adaptive large items, then 2d items of size zeta2/2
    with game.branch() as g:
        target = _ceil(N, 2)
        proc2 = ProcedureState(LARGE, 2 * N, k, 0, gap)
        t2 = run_procedure(proc2, StopAfterC1(target), g, phase="phase2:J4", require_stop=True)
        c1 = [e for e in t2 if e.cls == C1]
        c2 = [e for e in t2 if e.cls == C2]
        d = len(c2)
        _require(len(c1) == target, "LARGE phase must stop at ceil(N/2) new-bin items")
        _require(d <= X1 + X2, "d <= X1 + X2")
        zeta1 = _max_size([_a_of(e) for e in c1])
        zeta2 = _min_size([_a_of(e) for e in c2]) if c2 else None
        extra: list[int] = []
        if d:
            _require(sym_cmp(zeta2, zeta1.scale(3)) > 0, "zeta2 > 3 zeta1")
            extra = _present_many(g, zeta2.scale(Fraction(1, 2)), 2 * d, "phase3:J4")
        packing = [[e.item.id] + grp for e, grp in zip(c1, chunks(first_ids, 2))]
        packing += [[e.item.id] + extra[2 * j:2 * j + 2] for j, e in enumerate(c2)]
        j4 = _record(g, "J4", prefix, packing, 0, 1, t2)
        _require(3 * (j4.alg_cost - target) >= N + 3 * d, "ALG(J4) >= ceil(N/2) + (N+3d)/3")

    cert = Certificate(
        k, N, "k3", algorithm.label, guaranteed_bound("k3", 3),
        game.items, game.trace, {"phase1": transcript}, [j1, j2, j3, j4], {})
    point = {"X1": Fraction(X1, N), "X2": Fraction(X2, N), "X3": Fraction(X3, N),
             "d": Fraction(d, N)}
    _require(bounds.k3_system().satisfied_by(point, cert.ratio),
             "realized counts violate the k=3 program at the certified ratio")
    cert.accounting = {
        "X1": X1, "X2": X2, "X3": X3,
        "u1": _sym_json(u1), "u2": u2.to_json(),
        "d": d,
        "zeta1": zeta1.to_json(), "zeta2": _sym_json(zeta2),
        "eps_exponent": str(eps_exp),
    }
    return cert


def _a_of(entry: TranscriptEntry) -> SymbolicSize:
    """Distance from 1 of a LARGE-procedure item."""
    return _one_minus(entry.item.size.k, entry.item.size)


class _K2Parts(ConditionSpec):
    """Part bookkeeping for the k = 2 third phase.

    Odd parts present ``1 - a`` items (new bin: b+ / C1, otherwise b- / C2);
    even parts present ``a`` items (new bin: s+ / C2, otherwise s- / C1).
    Part z ends once ``nu_z`` items went into new bins; the next part needs as
    many new-bin items as part z had items in non-empty bins.
    """

    def __init__(self, nu1: int):
        self.z = 1
        self.nu = {1: nu1}
        self.nu_prime: dict[int, int] = {}
        self.opened = 0
        self.joined = 0
        self.stopped = nu1 == 0

    def classify(self, placement, part):
        if part % 2:
            return C1 if placement.new_bin else C2
        return C2 if placement.new_bin else C1

    def observe(self, entry):
        if entry.placement.new_bin:
            self.opened += 1
        else:
            self.joined += 1
        if self.opened == self.nu[self.z]:
            self.nu_prime[self.z] = self.joined
            if self.joined == 0:
                self.stopped = True
            else:
                self.z += 1
                self.nu[self.z] = self.joined
                self.opened = self.joined = 0

    def should_stop(self, transcript):
        return self.stopped

    @property
    def part(self):
        return self.z


def _k2_tag(entry: TranscriptEntry) -> str:
    if entry.part % 2:
        return "b+" if entry.cls == C1 else "b-"
    return "s-" if entry.cls == C1 else "s+"


def run_k2(N: int, algorithm: OnlineAlgorithm, *, gap: GapConfig = DEFAULT_GAP) -> Certificate:
    """Three-phase adversary for k = 2 with a multi-part third phase."""
    k = 2
    if N < 1:
        raise ValueError("N must be positive")
    B = gap.B
    eps_exp = B * 2 ** (5 * N + 4)
    game = Game(k, algorithm)
    proc = ProcedureState(SMALL, N, k, eps_exp, gap)
    t1 = run_procedure(proc, ConditionSpec(), game, phase="phase1")
    t_minus = [e.item for e in t1 if e.cls == C1]
    t_plus = [e.item for e in t1 if e.cls == C2]
    prof = profile(game.state)
    X1, X2 = prof[1], prof[2]
    _require(len(t_minus) == X2 and len(t_plus) == X1 + X2, "first-phase class counts")

    u = None
    second: list[int] = []
    if X2:
        u1, u2 = _max_size(_sizes(t_minus)), _min_size(_sizes(t_plus))
        _require(sym_cmp(u2, u1.scale(k)) > 0, "u2 > k u1")
        u = (u1 + u2).scale(Fraction(1, 2))
        second = _present_many(game, SymbolicSize(k, 1) - u, X2, "phase2")
        for p in game.trace[-X2:]:
            _require(p.new_bin, "a second-phase item must open a new bin")
    prefix = len(game.items)

    # J1: stop after the second phase
    packing = [[a.id, b] for a, b in zip(t_minus, second)]
    packing += chunks([it.id for it in t_plus], 2)
    j1 = _record(game, "J1", prefix, packing, 0, 1)

    # J2: the third phase
    with game.branch() as g:
        parts = _K2Parts(X1 + X2)
        proc3 = ProcedureState(SMALL_AND_LARGE, 5 * N, k, 0, gap)
        t3 = run_procedure(proc3, parts, g, phase="phase3", require_stop=True)
        n_parts = parts.z
        _require(n_parts <= 2 * N + 1, "at most 2N+1 parts")
        tags = {e.item.id: _k2_tag(e) for e in t3}
        for it in t_minus:
            tags[it.id] = "t-"
        for it in t_plus:
            tags[it.id] = "t+"
        for i in second:
            tags[i] = "second"
        by_part: dict[tuple[int, str], list[int]] = {}
        for e in t3:
            by_part.setdefault((e.part, tags[e.item.id]), []).append(e.item.id)

        # offline packing
        packing = [[a.id, b] for a, b in zip(t_minus, second)]
        b_plus_1 = by_part.get((1, "b+"), [])
        _require(len(b_plus_1) == len(t_plus), "part 1 pairs every t+ item with a b+ item")
        packing += [[a.id, b] for a, b in zip(t_plus, b_plus_1)]
        for z in range(1, n_parts):
            if z % 2:
                lo, hi = by_part.get((z, "b-"), []), by_part.get((z + 1, "s+"), [])
            else:
                lo, hi = by_part.get((z, "s-"), []), by_part.get((z + 1, "b+"), [])
            _require(len(lo) == len(hi), f"part {z} -> {z + 1} pairing mismatch")
            packing += [[a, b] for a, b in zip(lo, hi)]

        acct = _k2_accounting(g, tags, X1, X2)
        opt = X2 + acct["z1"] + acct["y1"]
        _require(len(packing) == opt, "OPT_ub(J2) = x/2 + y1 + z1")
        j2 = _record(g, "J2", prefix, packing, 0, 0, t3)
        _require(j2.alg_cost == acct["x"] + acct["y"] + acct["z"], "ALG(J2) = x + y + z")
        n3 = len(t3)
        _require(n3 <= 5 * acct["y"] + acct["x"] // 2 and n3 <= 5 * N, "third phase <= 5y + x/2 <= 5N")
        _require(sum(1 for t in tags.values() if t == "b-") <= acct["y"], "b- items <= y")

    cert = Certificate(
        k, N, "k2", algorithm.label, guaranteed_bound("k2", 2),
        game.items, game.trace, {"phase1": t1}, [j1, j2], {})
    acct.update({
        "X1": X1, "X2": X2,
        "u": _sym_json(u),
        "parts": n_parts,
        "nu": {str(z): v for z, v in parts.nu.items()},
        "nu_prime": {str(z): v for z, v in parts.nu_prime.items()},
        "third_phase_items": n3,
        "eps_exponent": str(eps_exp),
        "case": "X2<=2N/5" if 5 * X2 <= 2 * N else "X2>=2N/5",
    })
    cert.accounting = acct
    return cert


def _k2_accounting(g: Game, tags: dict[int, str], X1: int, X2: int) -> dict:
    c = dict.fromkeys(("z1", "z2", "z3", "y1", "y2", "y3", "full", "second"), 0)
    for b in g.state.bins:
        kinds = [tags[it.id] for it in b.items]
        first = kinds[0]
        if first == "t+":
            rest = kinds[1:]
            if rest == ["t-"]:
                c["full"] += 1
            elif rest == ["b-"]:
                c["y1"] += 1
            elif rest == ["s-"]:
                c["y2"] += 1
            elif not rest:
                c["y3"] += 1
            else:
                raise InvariantError(f"unexpected t+ bin contents {kinds}")
        elif first == "second":
            _require(len(kinds) == 1, "second-phase bins stay singletons")
            c["second"] += 1
        elif kinds == ["b+"]:
            c["z1"] += 1
        elif kinds == ["s+", "s-"]:
            c["z2"] += 1
        elif kinds == ["s+"]:
            c["z3"] += 1
        else:
            raise InvariantError(f"unexpected bin contents {kinds}")
    _require(c["full"] == X2 and c["second"] == X2, "X2 full bins and X2 second-phase bins")
    y = c["y1"] + c["y2"] + c["y3"]
    _require(y == X1, "y = X1")
    out = {"x": 2 * X2, "y": y, "z": c["z1"] + c["z2"] + c["z3"]}
    out.update({key: c[key] for key in ("y1", "y2", "y3", "z1", "z2", "z3")})
    return out


STRATEGIES: dict[str, Callable] = {
    "general": run_general,
    "k5plus": run_k5plus,
    "k3": lambda k, N, alg, **kw: run_k3(N, alg, **kw),
    "k2": lambda k, N, alg, **kw: run_k2(N, alg, **kw),
}


def run_strategy(k: int, N: int, algorithm: OnlineAlgorithm, strategy: str | None = None,
                 **kw) -> Certificate:
    strategy = strategy or auto_strategy(k)
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if not compatible(strategy, k):
        raise ValueError(f"strategy {strategy!r} does not apply to k={k}")
    if N < n_min(strategy, k):
        raise ValueError(f"N={N} is below the minimum {n_min(strategy, k)} for {strategy}")
    return STRATEGIES[strategy](k, N, algorithm, **kw)
