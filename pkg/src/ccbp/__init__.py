"""Adaptive adversaries and certified lower bounds for online bin packing
with at most ``k`` items per bin."""

from .algorithms import BUILTIN_SPECS, OnlineAlgorithm, make_algorithm, parse_algorithm
from .bounds import BoundResult, bound_for, bound_table, closed_form
from .checker import check_certificate, load_certificate
from .game import Game
from .packing import IllegalPlacement, Item, PackingState, run_online, verify_packing
from .sizes import SymbolicSize, fits_in_bin, power, sym, sym_cmp, to_exact_rational
from .strategies import Certificate, auto_strategy, n_min, run_strategy

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_SPECS", "OnlineAlgorithm", "make_algorithm", "parse_algorithm",
    "BoundResult", "bound_for", "bound_table", "closed_form",
    "check_certificate", "load_certificate", "Game",
    "IllegalPlacement", "Item", "PackingState", "run_online", "verify_packing",
    "SymbolicSize", "fits_in_bin", "power", "sym", "sym_cmp", "to_exact_rational",
    "Certificate", "auto_strategy", "n_min", "run_strategy",
]
