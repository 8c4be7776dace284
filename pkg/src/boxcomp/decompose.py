"""Decomposing boxes over deterministic strategies and bounding their cost.

A box is representable with at most one bit of communication when it is a
convex mixture of the 16 local and 96 strictly one-way deterministic
vertices.  `min_comm_cost` finds such a mixture minimizing the total weight
on one-way vertices (the communication cost C) by linear programming, and
raises Infeasible outside that polytope (e.g. for two-way deterministic
boxes).

`ResourceSpec` fixes a scope and distributes weight over its 16 catalogued
strategies; `signed_signals` evaluates the four directed marginal shifts
such a mixture produces, whose alternating-sum structure yields certified
per-cell lower bounds via `conditional_lower_bounds`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .boxcore import (
    INPUT_PAIRS,
    CorrelationBox,
    PRScope,
    STRATEGY_NAMES,
    DeterministicStrategy,
    enumerate_deterministic,
    infer_scope,
    mix,
    scope_strategies,
    strategy_box,
    strategy_name,
)
from .errors import DomainError, NumericalError, WeightError
from .measures import chsh_max
from .simplex import solve_lp

SUPPORT_EPS = 1e-12
WEIGHT_TOL = 1e-9

_VERTEX_CACHE = None


def lp_vertices():
    """(strategies, cell matrix, one-way mask) for the 112-vertex polytope.

    The matrix has one row per box cell in [x,y,a,b] C order and one column
    per vertex; the mask is 1.0 on strictly one-way columns.
    """
    global _VERTEX_CACHE
    if _VERTEX_CACHE is None:
        strategies = enumerate_deterministic("local") + enumerate_deterministic("all_one_bit")
        columns = np.stack([strategy_box(s).p.ravel() for s in strategies], axis=1)
        oneway = np.array([0.0 if s.kind == "local" else 1.0 for s in strategies])
        _VERTEX_CACHE = (strategies, columns, oneway)
    return _VERTEX_CACHE


@dataclass(frozen=True)
class Decomposition:
    """Convex decomposition over local + one-way vertices with cost C."""

    weights: dict
    C: float

    def reconstruct(self):
        items = list(self.weights.items())
        return mix([w for _, w in items], [strategy_box(s) for s, _ in items])

    def to_json(self):
        rows = []
        for s, w in self.weights.items():
            # names are only unambiguous for the canonical scope; raw tables otherwise
            name = strategy_name(s, scope=PRScope())
            rows.append({
                "strategy": name if name is not None else s.table_str(),
                "kind": s.kind,
                "w": w,
            })
        rows.sort(key=lambda r: (-r["w"], r["strategy"]))
        return {"C": self.C, "weights": rows}


def min_comm_cost(box, tol=WEIGHT_TOL):
    """Cheapest 1-bit decomposition of a box.

    Minimizes total one-way weight over all convex decompositions into local
    and one-way deterministic vertices.  Raises Infeasible when the box needs
    two-way communication and NumericalError if the solution fails to
    reproduce the box within tol.
    """
    if not tol > 0.0:
        raise DomainError(f"tolerance must be positive, got {tol!r}")
    strategies, columns, oneway = lp_vertices()
    nrows, ncols = columns.shape
    a_eq = np.vstack([columns, np.ones((1, ncols))])
    b_eq = np.append(box.p.ravel(), 1.0)
    x, value = solve_lp(oneway, a_eq, b_eq, tol=tol)
    residual = float(np.abs(columns @ x - box.p.ravel()).max())
    if residual > tol:
        raise NumericalError(f"decomposition reproduces the box only to {residual:.3e}")
    weights = {strategies[i]: float(x[i]) for i in range(ncols) if x[i] > SUPPORT_EPS}
    return Decomposition(weights=weights, C=float(min(max(value, 0.0), 1.0)))


def pironio_bound(box):
    """Communication lower bound from CHSH violation: max(chsh_max/2 - 1, 0)."""
    return max(chsh_max(box) / 2.0 - 1.0, 0.0)


@dataclass(frozen=True)
class ResourceSpec:
    """Weights over the 16 catalogued strategies of one scope.

    `weights` aligns with STRATEGY_NAMES order for the scope's catalogue.
    """

    scope: PRScope
    weights: tuple

    def __post_init__(self):
        w = tuple(float(v) for v in self.weights)
        if len(w) != 16:
            raise WeightError(f"expected 16 weights, got {len(w)}")
        if any(v < 0.0 for v in w):
            raise WeightError(f"negative weight {min(w)}")
        total = math.fsum(w)
        if abs(total - 1.0) > WEIGHT_TOL:
            raise WeightError(f"weights sum to {total!r}, not 1")
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_mapping(cls, mapping, scope=PRScope()):
        unknown = sorted(set(mapping) - set(STRATEGY_NAMES))
        if unknown:
            raise WeightError(f"unknown strategy names {unknown}")
        w = tuple(float(mapping.get(name, 0.0)) for name in STRATEGY_NAMES)
        return cls(scope=scope, weights=w)

    @classmethod
    def from_strategies(cls, mapping):
        """Build from {DeterministicStrategy: weight}; infers the common scope."""
        scope = infer_scope(mapping.keys())
        table = scope_strategies(scope)
        w = [0.0] * 16
        for s, v in mapping.items():
            w[table.index(s)] += float(v)
        return cls(scope=scope, weights=tuple(w))

    @classmethod
    def parse(cls, text):
        """Parse the compact form "scope=000;S1+:0.75,S1-:0.25"."""
        text = text.strip()
        scope = PRScope()
        weights_part = text
        if ";" in text:
            head, weights_part = text.split(";", 1)
            head = head.strip()
            if not head.startswith("scope="):
                raise WeightError(f"expected scope=<bits> before ';' in {text!r}")
            scope = PRScope.from_label(head[len("scope="):])
        elif text.startswith("scope="):
            raise WeightError("resource spec lists no strategy weights")
        mapping = {}
        for item in weights_part.split(","):
            item = item.strip()
            if not item:
                continue
            if ":" not in item:
                raise WeightError(f"expected NAME:WEIGHT, got {item!r}")
            name, _, val = item.partition(":")
            name = name.strip()
            if name in mapping:
                raise WeightError(f"duplicate strategy {name!r}")
            try:
                mapping[name] = float(val)
            except ValueError:
                raise WeightError(f"bad weight {val!r} for {name!r}") from None
        if not mapping:
            raise WeightError("resource spec lists no strategy weights")
        return cls.from_mapping(mapping, scope=scope)

    def format(self):
        """Compact string form; inverse of parse() for the supported weights."""
        parts = [f"{name}:{w!r}" for name, w in zip(STRATEGY_NAMES, self.weights)
                 if w > 0.0]
        return f"scope={self.scope.label};" + ",".join(parts)

    def weight(self, name):
        return self.weights[STRATEGY_NAMES.index(name)]

    def as_mapping(self):
        return {name: w for name, w in zip(STRATEGY_NAMES, self.weights) if w > 0.0}

    def strategies(self):
        return scope_strategies(self.scope)

    @property
    def one_way_support(self):
        """True when all weight sits on the one-way half of the catalogue."""
        return all(w <= SUPPORT_EPS for w in self.weights[8:])

    def to_json(self):
        return {"scope": self.scope.label, "weights": self.as_mapping()}


def resource_box(spec, label=None):
    """The box realized by mixing the spec's strategies with its weights."""
    return mix(spec.weights, [strategy_box(s) for s in spec.strategies()], label=label)


def random_resource_spec(rng, scope=PRScope()):
    """Dirichlet-uniform weights over the scope's 16 strategies."""
    return ResourceSpec(scope=scope, weights=tuple(rng.dirichlet(np.ones(16))))


def random_feasible_box(rng):
    """Random mixture of the 112 local + one-way vertices.

    Returns (box, one-way weight of the generating mixture); the latter upper
    bounds the box's min_comm_cost.
    """
    _, columns, oneway = lp_vertices()
    w = rng.dirichlet(np.ones(columns.shape[1]))
    box = CorrelationBox((columns @ w).reshape(2, 2, 2, 2))
    return box, float(oneway @ w)


@dataclass(frozen=True)
class SignedSignals:
    """Directed marginal shifts of a 16-strategy mixture, with sign.

    s1, s2: shift of B's outcome-1 marginal at y = 0, 1 when x flips 0 -> 1;
    s3, s4: shift of A's outcome-1 marginal at x = 0, 1 when y flips 0 -> 1.
    """

    s1: float
    s2: float
    s3: float
    s4: float

    def as_tuple(self):
        return (self.s1, self.s2, self.s3, self.s4)

    def to_json(self):
        return {"s1": self.s1, "s2": self.s2, "s3": self.s3, "s4": self.s4}


# weight index sets whose alternating sums give each signed signal, by name
_SIGNED_TERMS = (
    (("S3+", "S6+", "S7+", "S8+"), ("S3-", "S6-", "S7-", "S8-")),  # s1
    (("S1+", "S5-", "S6+", "S8-"), ("S1-", "S5+", "S6-", "S8+")),  # s2
    (("S4+", "S5+", "S7+", "S8+"), ("S4-", "S5-", "S7-", "S8-")),  # s3
    (("S2+", "S5+", "S6-", "S7-"), ("S2-", "S5-", "S6+", "S7+")),  # s4
)


def signed_signals(spec):
    """The four signed marginal shifts produced by a resource spec.

    Each equals a difference of two four-weight sums; their absolute values
    match the per-setting directed signals of the mixed box.
    """
    idx = {name: i for i, name in enumerate(STRATEGY_NAMES)}
    vals = []
    for plus, minus in _SIGNED_TERMS:
        vals.append(math.fsum([spec.weights[idx[n]] for n in plus])
                    - math.fsum([spec.weights[idx[n]] for n in minus]))
    return SignedSignals(*vals)


def conditional_lower_bounds(spec, nonlocal_weight=1.0):
    """Certified per-setting lower bounds on two output-pair probabilities.

    For a box carrying the spec's mixture with total weight `nonlocal_weight`
    (the rest arbitrary local noise), returns 8 rows (x, y, a, b, bound):
    at each setting the two output pairs allowed by the scope relation are
    guaranteed at least (nonlocal_weight +/- T)/2 where T is the setting's
    alternating sum of signed signals scaled by nonlocal_weight.
    """
    c = float(nonlocal_weight)
    if c < 0.0 or c > 1.0 + SUPPORT_EPS:
        raise DomainError(f"nonlocal weight outside [0,1]: {nonlocal_weight!r}")
    s = signed_signals(spec)
    t_by_setting = {
        (0, 0): s.s1 + s.s2 + s.s3 + s.s4,
        (0, 1): s.s1 + s.s2 - s.s3 + s.s4,
        (1, 0): -s.s1 + s.s2 + s.s3 + s.s4,
        (1, 1): -s.s1 + s.s2 + s.s3 - s.s4,
    }
    anchor = spec.strategies()[0]  # the catalogue's first strategy fixes the cell pairing
    rows = []
    for x, y in INPUT_PAIRS:
        a0, b0 = anchor.a(x, y), anchor.b(x, y)
        t = c * t_by_setting[(x, y)]
        rows.append((x, y, a0, b0, (c + t) / 2.0))
        rows.append((x, y, 1 ^ a0, 1 ^ b0, (c - t) / 2.0))
    return rows
