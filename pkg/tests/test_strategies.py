import json
from fractions import Fraction

import pytest

from ccbp.algorithms import make_algorithm
from ccbp.checker import check_certificate
from ccbp.game import Game
from ccbp.offline import brute_force_opt, modified_ratio
from ccbp.packing import verify_packing
from ccbp.strategies import (
    auto_strategy,
    compatible,
    guaranteed_bound,
    n_min,
    run_general,
    run_k2,
    run_k3,
    run_k5plus,
    run_strategy,
)

F = Fraction
ALGS = ["first-fit", "best-fit", "next-fit", "worst-fit", "always-new-bin", "random-fit:2"]


def A(name):
    return make_algorithm(name)


class TestHandExamples:
    def test_general_always_new_bin(self):
        cert = run_general(10, 100, A("always-new-bin"))
        i2 = cert.branch("I2")
        assert cert.accounting["X_k"] == 0 and cert.accounting["Y"] == 100
        assert len(i2.items) == 0
        assert (i2.alg_cost, i2.opt_ub, i2.cb) == (100, 10, 2)
        assert i2.ratio == F(25, 2) == cert.ratio
        assert cert.meets_bound

    def test_k3_always_new_bin(self):
        cert = run_k3(12, A("always-new-bin"))
        assert cert.accounting["X1"] == 12
        assert cert.branch("J1").ratio == F(12, 3)  # 12 / (4 - 1)
        assert len(cert.branch("J3").items) == 0
        assert cert.branch("J3").ratio == F(12, 2)  # 12 / (4 - 2)
        assert cert.chosen.label == "J3"

    def test_k2_always_new_bin(self):
        N = 20
        cert = run_k2(N, A("always-new-bin"))
        assert cert.accounting["X2"] == 0
        assert cert.branch("J1").ratio == F(N, N // 2 - 1)
        assert cert.chosen.label == "J1"

    def test_k2_first_fit_fixture(self):
        cert = run_k2(10, A("first-fit"))
        assert cert.ratio == F(3, 2)
        assert cert.chosen.label == "J2"

    def test_k5_always_new_bin(self):
        N = 60
        cert = run_k5plus(5, N, A("always-new-bin"))
        assert cert.accounting["Y_prime"] == N and cert.accounting["case"] == 1
        assert cert.branch("I2").ratio == F(N, N // 5 - 2)
        assert cert.chosen.label == "I2"

    def test_k5_best_fit(self):
        cert = run_k5plus(5, 200, A("best-fit"))
        assert cert.meets_bound and cert.ratio >= F(169776, 100000)


@pytest.mark.parametrize("k", [2, 3, 4, 5, 7])
@pytest.mark.parametrize("alg", ALGS)
def test_certificate_is_sound(k, alg):
    s = auto_strategy(k)
    N = max(n_min(s, k), 6 * k) if s != "general" else n_min(s, k)
    cert = run_strategy(k, N, A(alg))
    assert cert.meets_bound
    assert cert.ratio >= guaranteed_bound(s, k).hi
    for b in cert.branches:
        assert verify_packing(cert.prefix_items + b.items, b.packing, k) == []
        assert b.ratio == modified_ratio(b.alg_cost, b.opt_ub, b.ca, b.cb)
    assert cert.ratio == max(b.ratio for b in cert.branches)
    doc = json.loads(json.dumps(cert.to_json()))
    assert check_certificate(doc) == []


@pytest.mark.parametrize("k", [2, 3, 4, 6])
@pytest.mark.parametrize("alg", ["first-fit", "next-fit", "random-fit:4"])
def test_branch_equals_fresh_replay(k, alg):
    """Every branch, played from a snapshot, matches a fresh algorithm fed the same items."""
    s = auto_strategy(k)
    cert = run_strategy(k, max(n_min(s, k), 12), A(alg))
    for b in cert.branches:
        g = Game(k, A(alg))
        replay = [g.present(it.size, it.phase)[1] for it in cert.prefix_items + b.items]
        assert replay == cert.prefix_trace + b.trace
        assert g.cost == b.alg_cost


@pytest.mark.parametrize("k, N", [(2, 10), (2, 11), (2, 12), (3, 12)])
@pytest.mark.parametrize("alg", ALGS)
def test_brute_force_against_construction(k, N, alg):
    cert = run_strategy(k, N, A(alg))
    for b in cert.branches:
        opt = brute_force_opt([it.size for it in cert.prefix_items + b.items], k, max_items=64)
        assert opt <= b.opt_ub
        if opt > b.cb:
            # true optima can only raise the ratio
            assert modified_ratio(b.alg_cost, opt, b.ca, b.cb) >= b.ratio


def test_strategy_selection():
    assert [auto_strategy(k) for k in (2, 3, 4, 5, 11)] == ["k2", "k3", "general", "k5plus", "k5plus"]
    assert compatible("general", 3) and not compatible("general", 2)
    assert not compatible("k5plus", 4)
    assert n_min("general", 4) == 36
    with pytest.raises(ValueError):
        run_strategy(4, 12, A("first-fit"))  # below the minimum
    with pytest.raises(ValueError):
        run_strategy(2, 20, A("first-fit"), "k3")
    with pytest.raises(ValueError):
        run_general(4, 37, A("first-fit"))


def test_general_on_k5_matches_closed_form_bound():
    cert = run_strategy(5, 60, A("first-fit"), "general")
    assert cert.bound.method == "closed-form" and cert.meets_bound


def test_certificate_json_keys():
    doc = run_strategy(3, 12, A("first-fit")).to_json()
    assert set(doc) == {"schema", "meta", "bound", "chosen", "ratio", "ratio_decimal",
                        "meets_bound", "accounting", "transcripts", "branches"}
    assert doc["meta"] == {"k": 3, "N": 12, "strategy": "k3", "algorithm": "first-fit", "gap_B": 8}


def test_tampered_certificate_is_caught():
    doc = json.loads(json.dumps(run_strategy(3, 12, A("first-fit")).to_json()))
    doc["branches"][0]["packing"] = doc["branches"][0]["packing"][1:]
    assert any("missing" in p for p in check_certificate(doc))
    doc = json.loads(json.dumps(run_strategy(3, 12, A("first-fit")).to_json()))
    doc["branches"][1]["alg_cost"] += 1
    assert check_certificate(doc)
