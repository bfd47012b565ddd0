import random
from fractions import Fraction

import pytest

from ccbp.algorithms import (
    BUILTIN_SPECS,
    BestFit,
    FirstFit,
    OnlineAlgorithm,
    RandomFit,
    WorstFit,
    make_algorithm,
    parse_algorithm,
)
from ccbp.game import Game
from ccbp.packing import IllegalPlacement, Item, PackingState, run_online
from ccbp.sizes import sym

F = Fraction
ALL = BUILTIN_SPECS + ["random-fit:3"]


def stream(k, values):
    return [Item(i, sym(k, F(v))) for i, v in enumerate(values)]


def decisions(alg, k, values):
    _, trace = run_online(alg, stream(k, values), k)
    return [None if p.new_bin else p.bin_index for p in trace]


def test_first_fit_decisions():
    assert decisions(FirstFit(), 2, [F(6, 10), F(6, 10), F(3, 10)]) == [None, None, 0]


def test_best_fit_decisions():
    assert decisions(BestFit(), 3, [F(3, 10), F(5, 10), F(4, 10)]) == [None, 0, None]


def test_best_fit_prefers_fuller_bin_and_low_index_on_ties():
    assert decisions(BestFit(), 3, [F(1, 2), F(6, 10), F(1, 10)]) == [None, None, 1]
    assert decisions(BestFit(), 3, [F(6, 10), F(6, 10), F(1, 10)]) == [None, None, 0]


def test_worst_fit_picks_emptiest():
    assert decisions(WorstFit(), 3, [F(6, 10), F(1, 2), F(1, 10)]) == [None, None, 1]


def test_worst_fit_on_singleton_matches_first_fit():
    assert decisions(WorstFit(), 3, [F(1, 2)]) == decisions(FirstFit(), 3, [F(1, 2)])


def test_always_new_bin():
    assert decisions(make_algorithm("always-new-bin"), 2, [F(1, 10)] * 3) == [None] * 3


def test_parse_and_labels():
    assert str(parse_algorithm("random-fit:17")) == "random-fit:17"
    assert make_algorithm("random-fit:17").label == "random-fit:17"
    assert make_algorithm("next-fit").label == "next-fit"
    for bad in ("random-fit", "first-fit:2", "any-fit", "random-fit:x"):
        with pytest.raises(ValueError):
            parse_algorithm(bad)


def test_random_fit_is_seeded():
    vals = [F(random.Random(1).randint(1, 9), 20) for _ in range(40)]
    a = decisions(RandomFit(5), 4, vals)
    assert a == decisions(RandomFit(5), 4, vals)


@pytest.mark.parametrize("name", ALL)
def test_snapshot_restore(name):
    alg = make_algorithm(name)
    k = 3
    g = Game(k, alg)
    for v in [F(1, 3), F(1, 5), F(2, 3)]:
        g.present(sym(k, v))
    follow = [F(1, 7), F(1, 2), F(1, 9), F(3, 10), F(1, 4)]
    runs = []
    for _ in range(2):
        with g.branch() as child:
            runs.append([child.present(sym(k, v))[1] for v in follow])
    assert runs[0] == runs[1]
    assert len(g.items) == 3 and len(g.state.bins) <= 3


@pytest.mark.parametrize("name", ALL)
def test_fuzz_legality(name):
    rng = random.Random(hash(name) % 1000)
    for _ in range(30):
        k = rng.randint(2, 5)
        vals = [F(rng.randint(1, 20), 20) for _ in range(rng.randint(0, 25))]
        state, trace = run_online(make_algorithm(name), stream(k, vals), k)
        assert len(trace) == len(vals)
        for b in state.bins:
            assert len(b.items) <= k
            assert sum(F(it.size.base) for it in b.items) <= 1


def test_illegal_move_detected():
    class Stubborn(OnlineAlgorithm):
        name = "stubborn"

        def decide(self, item, state):
            return 0 if state.bins else None

    with pytest.raises(IllegalPlacement):
        run_online(Stubborn(), stream(2, [F(1, 10)] * 3), 2)


def test_game_branch_does_not_leak():
    g = Game(2, FirstFit())
    g.present(sym(2, F(1, 2)))
    with g.branch() as child:
        child.present(sym(2, F(1, 2)))
        with child.branch() as grand:
            grand.present(sym(2, F(1, 3)))
            assert grand.cost == 2
        assert child.cost == 1 and len(child.items) == 2
    assert g.cost == 1 and len(g.items) == 1 and len(g.state.bins[0]) == 1
    assert isinstance(g.state, PackingState)
