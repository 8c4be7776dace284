"""Complementarity certificates and randomized property suites.

The central trade-off: any 1-bit decomposable box satisfies S + 2I >= C,
so observing a CHSH value certifies indeterminacy even against signaling
models.  This module packages the scalar checks (per box) and seeded
randomized suites over the whole polytope, which double as the `verify`
CLI backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .boxcore import (
    INPUT_PAIRS,
    PRScope,
    STRATEGY_NAMES,
    enumerate_deterministic,
    mix,
    scope_strategies,
    strategy_box,
)
from .decompose import (
    ResourceSpec,
    _SIGNED_TERMS,
    conditional_lower_bounds,
    min_comm_cost,
    pironio_bound,
    random_feasible_box,
    resource_box,
    signed_signals,
)
from .errors import DomainError, Infeasible
from .measures import (
    chsh,
    chsh_max,
    entropic_indeterminacy,
    entropic_signal,
    entropic_signal_lower_bound,
    indeterminacy,
    signal,
    two_point_mutual_information,
)
from .simplex import solve_lp


def certified_indeterminacy_bound(lam, s):
    """Indeterminacy certified by a CHSH value under signal strength s.

    Returns max(lam/4 - (1 + s)/2, 0); lam is the sign-maximized CHSH value
    in [0, 4] and s the observed signal strength in [0, 1].
    """
    lam = float(lam)
    s = float(s)
    if lam < 0.0 or lam > 4.0 + 1e-12:
        raise DomainError(f"CHSH value outside [0,4]: {lam!r}")
    if s < 0.0 or s > 1.0 + 1e-12:
        raise DomainError(f"signal strength outside [0,1]: {s!r}")
    return max(lam / 4.0 - (1.0 + s) / 2.0, 0.0)


def relaxed_bell_check(box, tol=1e-9):
    """Check chsh_max - 2 <= 2 S + 4 I; returns (lhs, rhs, holds)."""
    lhs = chsh_max(box) - 2.0
    sig = signal(box)
    rhs = 2.0 * sig.S + 4.0 * indeterminacy(box)
    return lhs, rhs, bool(lhs <= rhs + tol)


@dataclass(frozen=True)
class Certificate:
    """Scalar complementarity audit of one box."""

    lambda_fixed: float
    lambda_max: float
    S: float
    I: float
    H_S: float
    H_I: float
    C_min: float | None
    cert_I_bound: float
    relax_lhs: float
    relax_rhs: float
    thm1_slack: float | None
    feasible: bool
    flags: dict
    tol: float

    @property
    def passed(self):
        return all(self.flags.values())

    def to_json(self):
        return {
            "lambda": self.lambda_fixed,
            "lambda_max": self.lambda_max,
            "S": self.S,
            "I": self.I,
            "H_S": self.H_S,
            "H_I": self.H_I,
            "C_min": self.C_min,
            "feasible": self.feasible,
            "infeasible": not self.feasible,
            "cert_I_bound": self.cert_I_bound,
            "relax_lhs": self.relax_lhs,
            "relax_rhs": self.relax_rhs,
            "thm1_slack": self.thm1_slack,
            "flags": dict(self.flags),
            "passed": self.passed,
            "tol": self.tol,
        }

    def render_text(self):
        lines = [
            f"lambda       = {self.lambda_fixed!r}",
            f"lambda_max   = {self.lambda_max!r}",
            f"S            = {self.S!r}",
            f"I            = {self.I!r}",
            f"H_S          = {self.H_S!r}",
            f"H_I          = {self.H_I!r}",
        ]
        if self.feasible:
            lines.append(f"C_min        = {self.C_min!r}")
            lines.append(f"S + 2I - C   = {self.thm1_slack!r}")
        else:
            lines.append("C_min        = infeasible (outside the 1-bit polytope)")
        lines.append(f"cert I bound = {self.cert_I_bound!r}")
        lines.append(f"relaxed Bell = lhs {self.relax_lhs!r} vs rhs {self.relax_rhs!r}")
        for name, ok in self.flags.items():
            lines.append(f"{'PASS' if ok else 'FAIL'} {name}")
        return "\n".join(lines)


def complementarity_report(box, tol=1e-9):
    """Measure a box and audit every complementarity relation that applies.

    Boxes outside the local + one-way polytope skip the cost-based checks;
    the signal/indeterminacy relations are checked regardless.
    """
    if not tol > 0.0:
        raise DomainError(f"tolerance must be positive, got {tol!r}")
    lam = chsh(box)
    lam_max = chsh_max(box)
    sig = signal(box)
    ind = indeterminacy(box)
    try:
        dec = min_comm_cost(box, tol=max(tol, 1e-9))
        c_min = dec.C
        feasible = True
    except Infeasible:
        c_min = None
        feasible = False
    bound = certified_indeterminacy_bound(lam_max, sig.S)
    lhs, rhs, relax_ok = relaxed_bell_check(box, tol=tol)
    flags = {
        "relaxed_bell": relax_ok,
        "operational_bell": bool(not lam_max > 2.0 + tol or sig.S + 2.0 * ind > 0.0),
        "certified_I": bool(ind >= bound - tol),
    }
    thm1_slack = None
    if feasible:
        thm1_slack = sig.S + 2.0 * ind - c_min
        flags["cost_complementarity"] = bool(thm1_slack >= -tol)
        flags["pironio"] = bool(c_min >= pironio_bound(box) - tol)
    return Certificate(
        lambda_fixed=lam,
        lambda_max=lam_max,
        S=sig.S,
        I=ind,
        H_S=entropic_signal(box),
        H_I=entropic_indeterminacy(box),
        C_min=c_min,
        cert_I_bound=bound,
        relax_lhs=lhs,
        relax_rhs=rhs,
        thm1_slack=thm1_slack,
        feasible=feasible,
        flags=flags,
        tol=tol,
    )


def entropic_complementarity(spec_or_box, tol=1e-9, prior=(0.5, 0.5)):
    """(H_S, H_I, holds) where holds checks H_S + H_I >= 1 - tol."""
    box = resource_box(spec_or_box) if isinstance(spec_or_box, ResourceSpec) else spec_or_box
    h_s = entropic_signal(box, prior)
    h_i = entropic_indeterminacy(box)
    return h_s, h_i, bool(h_s + h_i >= 1.0 - tol)


def _signal_coefficients():
    """(4, 16) matrix mapping catalogue weights to the four signed signals."""
    idx = {name: i for i, name in enumerate(STRATEGY_NAMES)}
    coeff = np.zeros((4, 16))
    for row, (plus, minus) in enumerate(_SIGNED_TERMS):
        for name in plus:
            coeff[row, idx[name]] = 1.0
        for name in minus:
            coeff[row, idx[name]] = -1.0
    return coeff


def max_marginal_bias_zero_signal(scope=PRScope(), tol=1e-9):
    """Largest |marginal - 1/2| reachable by a zero-signal mixture of the catalogue.

    Optimizes each outcome marginal over all weight vectors with every signed
    signal pinned to zero.  The result is 0: unbiased marginals (I = 1/2) are
    forced, which is why no nonsignaling catalogue mixture can be sharper.
    """
    strategies = scope_strategies(scope)
    a_eq = np.vstack([np.ones((1, 16)), _signal_coefficients()])
    b_eq = np.array([1.0, 0.0, 0.0, 0.0, 0.0])
    worst = 0.0
    for x, y in INPUT_PAIRS:
        for party in ("a", "b"):
            c = np.array([float(getattr(s, party)(x, y)) for s in strategies])
            for sign in (1.0, -1.0):
                _, value = solve_lp(sign * c, a_eq, b_eq, tol=tol)
                worst = max(worst, abs(sign * value - 0.5))
    return worst


@dataclass(frozen=True)
class SuiteCheck:
    name: str
    passed: bool
    worst: float
    note: str

    def to_json(self):
        return {"name": self.name, "passed": self.passed,
                "worst": self.worst, "note": self.note}


@dataclass(frozen=True)
class SuiteReport:
    seed: int
    instances: int
    tol: float
    checks: tuple

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def to_json(self):
        return {
            "seed": self.seed,
            "instances": self.instances,
            "tol": self.tol,
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
        }

    def render_text(self):
        lines = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(f"{status} {c.name}: worst {c.worst:.3e} ({c.note})")
        lines.append(f"{'PASS' if self.passed else 'FAIL'} overall "
                     f"(seed={self.seed}, instances={self.instances}, tol={self.tol:g})")
        return "\n".join(lines)


def _check_catalogue(strategies, scope):
    bad = 0
    for i, s in enumerate(strategies):
        if not scope.holds_for(s):
            bad += 1
        want_two_way = i >= 8
        if (s.kind == "two_way") != want_two_way:
            bad += 1
    for i in range(0, 16, 2):
        plus, minus = strategies[i], strategies[i + 1]
        if any(pa == ma for pa, ma in zip(plus.fa, minus.fa)):
            bad += 1
        if any(pb == mb for pb, mb in zip(plus.fb, minus.fb)):
            bad += 1
    return bad


def _suite_feasible_boxes(rng, instances, tol):
    worst_thm1 = worst_pir = worst_relax = worst_cert = math.inf
    for _ in range(instances):
        box, _ = random_feasible_box(rng)
        dec = min_comm_cost(box)
        sig = signal(box)
        ind = indeterminacy(box)
        worst_thm1 = min(worst_thm1, sig.S + 2.0 * ind - dec.C)
        worst_pir = min(worst_pir, dec.C - pironio_bound(box))
        lhs, rhs, _ = relaxed_bell_check(box, tol)
        worst_relax = min(worst_relax, rhs - lhs)
        worst_cert = min(worst_cert, ind - certified_indeterminacy_bound(chsh_max(box), sig.S))
    return worst_thm1, worst_pir, worst_relax, worst_cert


def _suite_specs(rng, instances, strategies, scope, tol):
    locals_ = enumerate_deterministic("local")
    worst_signed = 0.0
    worst_cond = math.inf
    worst_sat = math.inf
    for _ in range(instances):
        weights = rng.dirichlet(np.ones(16))
        spec = ResourceSpec(scope=scope, weights=tuple(weights))
        box = mix(weights, [strategy_box(s) for s in strategies])
        sig = signal(box)
        ss = signed_signals(spec)
        measured = (sig.s_A_to_B_per_y[0], sig.s_A_to_B_per_y[1],
                    sig.s_B_to_A_per_x[0], sig.s_B_to_A_per_x[1])
        for s_signed, s_measured in zip(ss.as_tuple(), measured):
            worst_signed = max(worst_signed, abs(abs(s_signed) - s_measured))
        worst_sat = min(worst_sat, sig.S + 2.0 * indeterminacy(box) - 1.0)
        c = float(rng.uniform(0.2, 1.0))
        noise = strategy_box(locals_[int(rng.integers(len(locals_)))])
        mixed = mix((c, 1.0 - c), (box, noise))
        for x, y, a, b, bound in conditional_lower_bounds(spec, nonlocal_weight=c):
            worst_cond = min(worst_cond, mixed.prob(a, b, x, y) - bound)
    return worst_signed, worst_cond, worst_sat


def _suite_single_pairs(scope):
    table = scope_strategies(scope)
    worst_sat = 0.0
    worst_ent = 0.0
    for j in range(4):
        plus, minus = table[2 * j], table[2 * j + 1]
        for k in range(101):
            p = k / 100.0
            box = mix((p, 1.0 - p), (strategy_box(plus), strategy_box(minus)))
            sig_s = signal(box).S
            ind = indeterminacy(box)
            worst_sat = max(worst_sat, abs(sig_s + 2.0 * ind - 1.0))
            h_s = entropic_signal(box)
            h_i = entropic_indeterminacy(box)
            worst_ent = max(worst_ent, abs(h_s + h_i - 1.0))
    return worst_sat, worst_ent


def _suite_entropic_floor():
    worst_slack = math.inf
    worst_eq = 0.0
    for k in range(101):
        s = k / 100.0
        bound = entropic_signal_lower_bound(s)
        p = np.arange(0.0, 1.0 - s + 1e-12, 1e-3)
        info = two_point_mutual_information(p, s)
        worst_slack = min(worst_slack, float((info - bound).min()))
        opt = two_point_mutual_information((1.0 - s) / 2.0, s)
        worst_eq = max(worst_eq, abs(float(opt) - bound))
    return worst_slack, worst_eq


def run_property_suite(seed=0, instances=1000, tol=1e-9, strategies=None, scope=PRScope()):
    """Randomized + exhaustive grid checks of every certified relation.

    `strategies` overrides the scope catalogue (used as a corruption hook by
    the negative-control test and CLI flag); everything is driven by `seed`.
    """
    if instances < 1:
        raise DomainError(f"need at least one instance, got {instances!r}")
    if strategies is None:
        strategies = scope_strategies(scope)
    rng = np.random.default_rng(np.random.SeedSequence(int(seed)))
    checks = []

    bad = _check_catalogue(strategies, scope)
    checks.append(SuiteCheck("catalogue-structure", bad == 0, float(bad),
                             "scope relation, kind split, +/- complements"))

    thm1, pir, relax, cert = _suite_feasible_boxes(rng, instances, tol)
    checks.append(SuiteCheck("cost-complementarity", thm1 >= -tol, thm1,
                             f"min S + 2I - C over {instances} random 1-bit boxes"))
    checks.append(SuiteCheck("pironio-floor", pir >= -tol, pir,
                             f"min C - (chsh_max/2 - 1) over {instances} boxes"))
    checks.append(SuiteCheck("relaxed-bell", relax >= -tol, relax,
                             f"min rhs - lhs over {instances} boxes"))
    checks.append(SuiteCheck("certified-indeterminacy", cert >= -tol, cert,
                             f"min I - bound over {instances} boxes"))

    signed, cond, sat = _suite_specs(rng, instances, strategies, scope, tol)
    checks.append(SuiteCheck("signed-signal-consistency", signed <= 1e-12, signed,
                             f"max ||s_k| - measured| over {instances} specs"))
    checks.append(SuiteCheck("conditional-bounds", cond >= -1e-12, cond,
                             f"min P(cell) - bound over {instances} noisy specs"))
    checks.append(SuiteCheck("spec-complementarity", sat >= -tol, sat,
                             f"min S + 2I - 1 over {instances} catalogue mixtures"))

    sat_pair, ent_pair = _suite_single_pairs(scope)
    checks.append(SuiteCheck("single-pair-saturation", sat_pair <= tol, sat_pair,
                             "max |S + 2I - 1| over +/- pair mixtures, 0.01 grid"))
    checks.append(SuiteCheck("entropic-pair-saturation", ent_pair <= tol, ent_pair,
                             "max |H_S + H_I - 1| over +/- pair mixtures, 0.01 grid"))

    floor_slack, floor_eq = _suite_entropic_floor()
    checks.append(SuiteCheck("entropic-signal-floor", floor_slack >= -tol, floor_slack,
                             "min H_S(p) - (1 - H((1-S)/2)) over S, p grids"))
    checks.append(SuiteCheck("entropic-floor-equality", floor_eq <= tol, floor_eq,
                             "bound attained at p = (1-S)/2"))

    bias = max_marginal_bias_zero_signal(scope, tol)
    checks.append(SuiteCheck("zero-signal-bias", bias <= tol, bias,
                             "max |marginal - 1/2| with all signed signals pinned to 0"))

    return SuiteReport(seed=int(seed), instances=int(instances), tol=float(tol),
                       checks=tuple(checks))
