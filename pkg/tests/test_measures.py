"""CHSH values, signal/indeterminacy, and their entropic counterparts."""

import math

import numpy as np
import pytest

import boxcomp as bc
from _helpers import pair_box, pair_spec, tsirelson_box

# frozen oracle: -0.25*log2(0.25) - 0.75*log2(0.75)
H_QUARTER = 0.8112781244591328


def test_binary_entropy_edges_and_values():
    assert bc.binary_entropy(0.0) == 0.0
    assert bc.binary_entropy(1.0) == 0.0
    assert bc.binary_entropy(0.5) == 1.0
    assert abs(bc.binary_entropy(0.25) - H_QUARTER) <= 1e-15
    arr = bc.binary_entropy(np.array([0.0, 0.5, 1.0]))
    assert np.array_equal(arr, [0.0, 1.0, 0.0])
    with pytest.raises(bc.DomainError):
        bc.binary_entropy(1.5)
    with pytest.raises(bc.DomainError):
        bc.binary_entropy(-0.2)


def test_chsh_values():
    assert bc.chsh(bc.pr_box()) == 4.0
    assert bc.chsh_max(bc.pr_box()) == 4.0
    # constant-output local box: E = 1 everywhere
    zero = bc.DeterministicStrategy((0, 0, 0, 0), (0, 0, 0, 0))
    assert bc.chsh(bc.strategy_box(zero)) == 2.0
    assert bc.chsh_max(bc.strategy_box(zero)) == 2.0
    assert abs(bc.chsh(tsirelson_box()) - 2.0 * math.sqrt(2.0)) <= 1e-12
    assert abs(bc.chsh_max(tsirelson_box()) - 2.0 * math.sqrt(2.0)) <= 1e-12


def test_chsh_max_over_all_sign_variants():
    # every local deterministic box sits on the |CHSH| = 2 shell
    for s in bc.enumerate_deterministic("local"):
        box = bc.strategy_box(s)
        assert bc.chsh_max(box) == 2.0
        assert abs(bc.chsh(box)) == 2.0
    # relabelling the PR box moves the violated combination, chsh_max finds it
    for scope in bc.all_scopes():
        assert bc.chsh_max(bc.pr_box(scope)) == 4.0


def test_correlators_table():
    e = bc.correlators(bc.pr_box())
    assert np.array_equal(e, [[1.0, 1.0], [1.0, -1.0]])


def test_signal_of_nonsignaling_boxes_is_exactly_zero():
    assert bc.signal(bc.pr_box()).S == 0.0
    uni = bc.mix([1.0 / 16.0] * 16, [bc.strategy_box(s) for s in bc.scope_strategies()])
    assert bc.signal(uni).S == 0.0
    for s in bc.enumerate_deterministic("local")[:4]:
        assert bc.signal(bc.strategy_box(s)).S == 0.0


def test_signal_direction_split_for_catalogue_anchor():
    # b = x*y: flipping x moves B's marginal at y=1 by 1, nothing else moves
    rep = bc.signal(bc.strategy_box(bc.scope_strategies()[0]))
    assert rep.s_A_to_B_per_y == (0.0, 1.0)
    assert rep.s_B_to_A_per_x == (0.0, 0.0)
    assert rep.S_A_to_B == 1.0
    assert rep.S_B_to_A == 0.0
    assert rep.S == 1.0


def test_signal_of_pair_mixture():
    box = pair_box(1, 0.75)
    rep = bc.signal(box)
    assert rep.S == 0.5
    assert rep.s_A_to_B_per_y == (0.0, 0.5)
    assert rep.s_B_to_A_per_x == (0.0, 0.0)


def test_indeterminacy_values():
    zero = bc.DeterministicStrategy((0, 0, 0, 0), (0, 0, 0, 0))
    assert bc.indeterminacy(bc.strategy_box(zero)) == 0.0
    assert bc.indeterminacy(bc.pr_box()) == 0.5
    assert bc.indeterminacy(pair_box(1, 0.75)) == 0.25
    per = bc.indeterminacy_per_setting(pair_box(1, 0.75))
    assert np.array_equal(per, np.full((2, 2), 0.25))


def test_signal_zero_iff_nonsignaling():
    rng = np.random.default_rng(21)
    for _ in range(200):
        box, _ = bc.random_feasible_box(rng)
        assert (bc.signal(box).S <= 1e-12) == bc.is_nonsignaling(box, 1e-12)
    for s in bc.enumerate_deterministic("all_one_bit"):
        box = bc.strategy_box(s)
        assert bc.signal(box).S == 1.0
        assert not bc.is_nonsignaling(box)


def test_entropic_signal_values():
    assert bc.entropic_signal(bc.pr_box()) == 0.0
    assert bc.entropic_signal(bc.strategy_box(bc.scope_strategies()[0])) == 1.0
    expected = 1.0 - H_QUARTER
    assert abs(bc.entropic_signal(pair_box(1, 0.75)) - expected) <= 1e-12
    with pytest.raises(bc.DomainError):
        bc.entropic_signal(bc.pr_box(), prior=(0.7, 0.7))


def test_entropic_signal_with_biased_prior():
    # one party learns the other's input bit perfectly: H_S equals the prior entropy
    box = bc.strategy_box(bc.scope_strategies()[0])
    assert abs(bc.entropic_signal(box, prior=(0.9, 0.1)) - bc.binary_entropy(0.9)) <= 1e-12


def test_entropic_indeterminacy_values():
    zero = bc.DeterministicStrategy((0, 0, 0, 0), (0, 0, 0, 0))
    assert bc.entropic_indeterminacy(bc.strategy_box(zero)) == 0.0
    assert bc.entropic_indeterminacy(bc.pr_box()) == 1.0
    assert abs(bc.entropic_indeterminacy(pair_box(1, 0.75)) - H_QUARTER) <= 1e-15


def test_entropic_indeterminacy_equals_entropy_of_indeterminacy_for_pair_mixtures():
    for k in range(0, 101, 7):
        p = k / 100.0
        box = pair_box(2, p)
        ind = bc.indeterminacy(box)
        assert bc.entropic_indeterminacy(box) == bc.binary_entropy(ind)


def test_entropic_signal_lower_bound():
    assert bc.entropic_signal_lower_bound(0.0) == 0.0
    assert bc.entropic_signal_lower_bound(1.0) == 1.0
    assert abs(bc.entropic_signal_lower_bound(0.5) - (1.0 - H_QUARTER)) <= 1e-15
    with pytest.raises(bc.DomainError):
        bc.entropic_signal_lower_bound(-0.1)
    with pytest.raises(bc.DomainError):
        bc.entropic_signal_lower_bound(1.1)


def test_entropic_signal_meets_floor_on_random_and_pair_boxes():
    rng = np.random.default_rng(22)
    for _ in range(300):
        box, _ = bc.random_feasible_box(rng)
        s = bc.signal(box).S
        assert bc.entropic_signal(box) >= bc.entropic_signal_lower_bound(s) - 1e-9
    for k in range(0, 1001, 13):
        box = pair_box(1, k / 1000.0)
        s = bc.signal(box).S
        assert bc.entropic_signal(box) >= bc.entropic_signal_lower_bound(s) - 1e-9


def test_two_point_mutual_information_matches_pair_mixture():
    for p in (0.0, 0.1, 0.25, 0.4):
        # marginal sits at p or p + (1 - 2p) depending on the flipped input
        shift = 1.0 - 2.0 * p
        direct = float(bc.two_point_mutual_information(p, shift))
        assert abs(direct - bc.entropic_signal(pair_box(1, p))) <= 1e-12


def test_measure_ranges_on_random_boxes():
    rng = np.random.default_rng(23)
    for _ in range(200):
        box, _ = bc.random_feasible_box(rng)
        assert abs(bc.chsh(box)) <= 4.0 + 1e-12
        assert 0.0 <= bc.chsh_max(box) <= 4.0 + 1e-12
        assert bc.chsh_max(box) >= abs(bc.chsh(box)) - 1e-12
        assert 0.0 <= bc.indeterminacy(box) <= 0.5 + 1e-12
        assert 0.0 <= bc.signal(box).S <= 1.0 + 1e-12
        assert 0.0 <= bc.entropic_indeterminacy(box) <= 1.0 + 1e-12
        assert 0.0 <= bc.entropic_signal(box) <= 1.0 + 1e-12


def test_measure_report_json_keys():
    report = bc.measure_report(pair_box(1, 0.75))
    data = report.to_json()
    assert data["lambda"] == bc.chsh(pair_box(1, 0.75))
    assert data["S"] == 0.5
    assert data["S_AtoB"] == 0.5
    assert data["S_BtoA"] == 0.0
    assert data["I"] == 0.25
    assert set(data) >= {"lambda", "lambda_max", "S", "S_AtoB", "S_BtoA", "I",
                         "H_S", "H_I", "s_A_to_B_per_y", "s_B_to_A_per_x",
                         "I_per_setting"}
