"""Certificates, entropic complementarity, and the property suites."""

import math

import numpy as np
import pytest

import boxcomp as bc
from _helpers import pair_box, pair_spec, tsirelson_box

SQRT2 = math.sqrt(2.0)
H_QUARTER = 0.8112781244591328


def test_certified_indeterminacy_bound_values():
    assert bc.certified_indeterminacy_bound(4.0, 0.0) == 0.5
    assert bc.certified_indeterminacy_bound(2.0, 0.0) == 0.0
    assert bc.certified_indeterminacy_bound(0.0, 1.0) == 0.0
    assert abs(bc.certified_indeterminacy_bound(2.0 * SQRT2, 0.0)
               - (SQRT2 - 1.0) / 2.0) <= 1e-12
    # signaling eats into the certificate linearly
    assert bc.certified_indeterminacy_bound(4.0, 1.0) == 0.0
    assert abs(bc.certified_indeterminacy_bound(4.0, 0.5) - 0.25) <= 1e-15
    with pytest.raises(bc.DomainError):
        bc.certified_indeterminacy_bound(4.5, 0.0)
    with pytest.raises(bc.DomainError):
        bc.certified_indeterminacy_bound(4.0, -0.5)


def test_certified_bound_is_respected_by_boxes():
    rng = np.random.default_rng(61)
    for _ in range(300):
        box, _ = bc.random_feasible_box(rng)
        bound = bc.certified_indeterminacy_bound(bc.chsh_max(box), bc.signal(box).S)
        assert bc.indeterminacy(box) >= bound - 1e-9


def test_relaxed_bell_check():
    lhs, rhs, holds = bc.relaxed_bell_check(bc.pr_box())
    assert (lhs, rhs, holds) == (2.0, 2.0, True)
    # deterministic signaling box: maximal CHSH but the signal term covers it
    tb = bc.strategy_box(bc.scope_strategies()[0])
    lhs, rhs, holds = bc.relaxed_bell_check(tb)
    assert lhs == 2.0 and rhs == 2.0 and holds
    zero = bc.DeterministicStrategy((0, 0, 0, 0), (0, 0, 0, 0))
    lhs, rhs, holds = bc.relaxed_bell_check(bc.strategy_box(zero))
    assert lhs == 0.0 and rhs == 0.0 and holds


def test_complementarity_report_pr_box():
    cert = bc.complementarity_report(bc.pr_box())
    assert cert.feasible
    assert cert.C_min == 1.0
    assert cert.S == 0.0 and cert.I == 0.5
    assert cert.thm1_slack == 0.0
    assert cert.H_S == 0.0 and cert.H_I == 1.0
    assert cert.passed
    data = cert.to_json()
    assert data["lambda"] == 4.0
    assert data["infeasible"] is False
    assert "FAIL" not in cert.render_text()


def test_complementarity_report_pair_mixture():
    cert = bc.complementarity_report(pair_box(1, 0.75))
    assert cert.S == 0.5 and cert.I == 0.25
    assert abs(cert.C_min - 1.0) <= 1e-9
    assert abs(cert.thm1_slack) <= 1e-9
    assert cert.passed


def test_complementarity_report_local_mixture():
    locals_ = bc.enumerate_deterministic("local")
    box = bc.mix([1.0 / 16.0] * 16, [bc.strategy_box(s) for s in locals_])
    cert = bc.complementarity_report(box)
    assert cert.lambda_max <= 2.0 + 1e-12
    assert cert.C_min == 0.0
    assert cert.passed


def test_complementarity_report_infeasible_box():
    cert = bc.complementarity_report(bc.strategy_box(bc.scope_strategies()[8]))
    assert not cert.feasible
    assert cert.C_min is None and cert.thm1_slack is None
    assert "cost_complementarity" not in cert.flags
    assert cert.flags["relaxed_bell"] and cert.flags["operational_bell"]
    assert cert.to_json()["infeasible"] is True
    assert "infeasible" in cert.render_text()


def test_entropic_complementarity_examples():
    h_s, h_i, holds = bc.entropic_complementarity(pair_spec(1, 0.5))
    assert (h_s, h_i, holds) == (0.0, 1.0, True)
    h_s, h_i, holds = bc.entropic_complementarity(bc.ResourceSpec.from_mapping({"S1+": 1.0}))
    assert (h_s, h_i, holds) == (1.0, 0.0, True)
    h_s, h_i, holds = bc.entropic_complementarity(pair_spec(1, 0.75))
    assert abs(h_s - (1.0 - H_QUARTER)) <= 1e-12
    assert abs(h_i - H_QUARTER) <= 1e-12
    assert holds
    # a box works too
    h_s, h_i, holds = bc.entropic_complementarity(bc.pr_box())
    assert (h_s, h_i, holds) == (0.0, 1.0, True)


def test_entropic_complementarity_on_random_one_way_specs():
    rng = np.random.default_rng(62)
    for _ in range(200):
        w8 = rng.dirichlet(np.ones(8))
        weights = tuple(w8) + (0.0,) * 8
        spec = bc.ResourceSpec(scope=bc.PRScope(), weights=weights)
        h_s, h_i, holds = bc.entropic_complementarity(spec)
        assert holds
        assert h_s + h_i >= 1.0 - 1e-9


def test_scalar_complementarity_on_random_specs():
    rng = np.random.default_rng(63)
    for _ in range(300):
        spec = bc.random_resource_spec(rng)
        box = bc.resource_box(spec)
        assert bc.signal(box).S + 2.0 * bc.indeterminacy(box) >= 1.0 - 1e-9


def test_zero_signal_forces_unbiased_marginals():
    assert bc.max_marginal_bias_zero_signal() <= 1e-9
    assert bc.max_marginal_bias_zero_signal(bc.PRScope(1, 1, 1)) <= 1e-9


def test_property_suite_passes_and_is_seeded():
    report = bc.run_property_suite(seed=17, instances=40)
    assert report.passed
    names = [c.name for c in report.checks]
    assert "cost-complementarity" in names
    assert "signed-signal-consistency" in names
    assert "zero-signal-bias" in names
    again = bc.run_property_suite(seed=17, instances=40)
    assert [c.worst for c in report.checks] == [c.worst for c in again.checks]
    text = report.render_text()
    assert "PASS overall" in text
    data = report.to_json()
    assert data["passed"] is True
    assert len(data["checks"]) == len(report.checks)


def test_property_suite_detects_corrupted_catalogue():
    table = bc.scope_strategies()
    s0 = table[0]
    table[0] = bc.DeterministicStrategy(s0.fa, (s0.fb[0], s0.fb[1], s0.fb[2], s0.fb[3] ^ 1))
    report = bc.run_property_suite(seed=17, instances=30, strategies=table)
    assert not report.passed
    failed = {c.name for c in report.checks if not c.passed}
    assert "catalogue-structure" in failed
    assert "signed-signal-consistency" in failed
    assert "FAIL overall" in report.render_text()


def test_property_suite_validation():
    with pytest.raises(bc.DomainError):
        bc.run_property_suite(instances=0)
