"""Independent re-check of a serialized certificate.

Only the JSON document is trusted as input: sizes are parsed back into
symbolic form, the online trace is replayed against fresh bins, each offline
packing is verified again and the ratios and bound test are recomputed.
"""

from __future__ import annotations

import json
from fractions import Fraction

from . import bounds
from .offline import modified_ratio
from .packing import IllegalPlacement, Item, PackingState, apply_placement, verify_packing
from .sizes import SymbolicSize
from .strategies import guaranteed_bound

__all__ = ["check_certificate", "load_certificate"]


def load_certificate(text: str) -> dict:
    doc = json.loads(text)
    if doc.get("schema") != "ccbp-certificate/1":
        raise ValueError(f"unsupported certificate schema {doc.get('schema')!r}")
    return doc


def _items(rows: list[dict]) -> list[Item]:
    return [Item(r["id"], SymbolicSize.from_json(r["size"]), r["phase"]) for r in rows]


def _replay(items: list[Item], trace: list[dict], k: int) -> int:
    if [p["item_id"] for p in trace] != [it.id for it in items]:
        raise ValueError("trace does not follow the item order")
    state = PackingState(k)
    for it, p in zip(items, trace):
        placed = apply_placement(state, it, None if p["new_bin"] else p["bin_index"])
        if placed.bin_index != p["bin_index"]:
            raise ValueError(f"item {it.id}: recorded bin {p['bin_index']}, replay gives {placed.bin_index}")
    return len(state.bins)


def _bound(meta: dict, data: dict) -> bounds.BoundResult:
    return bounds.BoundResult(meta["k"], Fraction(data["lo"]), Fraction(data["hi"]), data["method"])


def check_certificate(doc: dict) -> list[str]:
    """Problems found in ``doc`` (empty when the certificate holds up)."""
    problems: list[str] = []
    meta = doc["meta"]
    k = meta["k"]
    prefix = _items(doc["transcripts"]["prefix_items"])
    prefix_trace = doc["transcripts"]["prefix_trace"]
    ratios = {}
    for br in doc["branches"]:
        label = br["label"]
        items = prefix + _items(br["items"])
        try:
            cost = _replay(items, prefix_trace + br["trace"], k)
        except (ValueError, IllegalPlacement) as exc:
            problems.append(f"{label}: online replay failed: {exc}")
            continue
        if cost != br["alg_cost"]:
            problems.append(f"{label}: ALG recorded {br['alg_cost']}, replay gives {cost}")
        for v in verify_packing(items, br["packing"], k):
            problems.append(f"{label}: offline packing: {v}")
        try:
            r = modified_ratio(cost, len(br["packing"]), br["ca"], br["cb"])
        except ZeroDivisionError as exc:
            problems.append(f"{label}: {exc}")
            continue
        if r != Fraction(br["ratio"]):
            problems.append(f"{label}: ratio recorded {br['ratio']}, recomputed {r}")
        ratios[label] = r
    if not ratios:
        return problems + ["no usable branch"]
    best = max(ratios.values())
    if Fraction(doc["ratio"]) != best:
        problems.append(f"certified ratio {doc['ratio']} is not the branch maximum {best}")
    bound = _bound(meta, doc["bound"])
    expected = guaranteed_bound(meta["strategy"], k)
    if (bound.method, bound.lo, bound.hi) != (expected.method, expected.lo, expected.hi):
        problems.append("bound bracket does not match the recomputed bound")
    holds = best >= bound.lo and bound.admits(best)
    if holds != doc["meets_bound"]:
        problems.append(f"meets_bound recorded {doc['meets_bound']}, recomputed {holds}")
    return problems
