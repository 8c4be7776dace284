"""Bipartite correlation boxes with binary inputs and outputs.

A box is the conditional distribution P(a,b|x,y) for inputs x,y in {0,1}
(party A receives x, party B receives y) and outputs a,b in {0,1}.  It is
stored as a read-only float64 array of shape (2,2,2,2) indexed [x,y,a,b]
and normalized per input pair.

Deterministic strategies are pairs of response functions a = fA(x,y),
b = fB(x,y); they are classified as local (each output ignores the remote
input), one-way signaling (exactly one output reads the remote input), or
two-way.  The sixteen strategies whose outputs satisfy the PR-type relation

    a xor b = x*y xor mu1*x xor mu2*y xor mu3

for a fixed scope (mu1,mu2,mu3) are catalogued by `scope_strategies`; their
uniform mixture is the PR box of that scope.  Local reversible relabellings
(input flips plus input-conditioned output flips) form a group of 64
elements acting on boxes and strategies.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .errors import BoxFormatError, BoxInvariantError, DomainError, ScopeError, WeightError

NORM_TOL = 1e-12

# input pairs (x, y) in storage order; flat index is 2*x + y
INPUT_PAIRS = ((0, 0), (0, 1), (1, 0), (1, 1))

STRATEGY_KINDS = ("local", "signal_A_to_B", "signal_B_to_A", "two_way")


class CorrelationBox:
    """Conditional distribution P(a,b|x,y), immutable after construction."""

    __slots__ = ("p", "label")

    def __init__(self, p, label=None):
        try:
            arr = np.asarray(p, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise BoxFormatError(f"box entries are not numeric: {exc}") from None
        if arr.shape != (2, 2, 2, 2):
            raise BoxFormatError(f"expected probabilities of shape (2,2,2,2), got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise BoxInvariantError("box entries must be finite")
        lo = float(arr.min())
        if lo < -NORM_TOL:
            raise BoxInvariantError(f"negative probability {lo}")
        if lo < 0.0:
            arr = np.where(arr < 0.0, 0.0, arr)  # clear sub-tolerance float dust
        totals = arr.sum(axis=(2, 3))
        err = float(np.abs(totals - 1.0).max())
        if err > NORM_TOL:
            raise BoxInvariantError(f"per-setting normalization off by {err}")
        arr = np.ascontiguousarray(arr)
        arr.flags.writeable = False
        self.p = arr
        self.label = label

    def prob(self, a, b, x, y):
        return float(self.p[x, y, a, b])

    def marginal_a(self, x, y):
        """(P(a=0|x,y), P(a=1|x,y)) as cell sums."""
        return (float(self.p[x, y, 0, 0] + self.p[x, y, 0, 1]),
                float(self.p[x, y, 1, 0] + self.p[x, y, 1, 1]))

    def marginal_b(self, x, y):
        """(P(b=0|x,y), P(b=1|x,y)) as cell sums."""
        return (float(self.p[x, y, 0, 0] + self.p[x, y, 1, 0]),
                float(self.p[x, y, 0, 1] + self.p[x, y, 1, 1]))

    def cells(self):
        """Flat copy of the 16 probabilities in [x,y,a,b] C order."""
        return self.p.ravel().copy()

    def allclose(self, other, tol=NORM_TOL):
        return bool(np.abs(self.p - other.p).max() <= tol)

    def __eq__(self, other):
        if not isinstance(other, CorrelationBox):
            return NotImplemented
        return bool(np.array_equal(self.p, other.p))

    __hash__ = None

    def relabel(self, label):
        box = CorrelationBox(self.p, label=label)
        return box

    def __repr__(self):
        tag = f" {self.label!r}" if self.label else ""
        return f"<CorrelationBox{tag}>"

    def to_json(self):
        data = {"P": self.p.tolist()}
        if self.label is not None:
            data["label"] = self.label
        return data

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict):
            raise BoxFormatError("box JSON must be an object")
        if "P" not in data:
            raise BoxFormatError('box JSON is missing the "P" key')
        label = data.get("label")
        if label is not None and not isinstance(label, str):
            raise BoxFormatError('"label" must be a string')
        return cls(data["P"], label=label)


def load_box(path):
    """Read a box from a JSON file ({"P": nested [x][y][a][b] lists, "label": optional})."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise BoxFormatError(f"invalid JSON: {exc}") from None
    return CorrelationBox.from_json(data)


def dump_box(box, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(box.to_json(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _check_bit(value, name):
    if value not in (0, 1):
        raise DomainError(f"{name} must be 0 or 1, got {value!r}")
    return int(value)


def _check_bit_table(table, name):
    if len(table) != 4:
        raise DomainError(f"{name} must list outputs for the 4 input pairs")
    return tuple(_check_bit(v, name) for v in table)


@dataclass(frozen=True)
class DeterministicStrategy:
    """Response functions a = fA(x,y), b = fB(x,y), tabulated in INPUT_PAIRS order."""

    fa: tuple
    fb: tuple

    def __post_init__(self):
        object.__setattr__(self, "fa", _check_bit_table(self.fa, "fa"))
        object.__setattr__(self, "fb", _check_bit_table(self.fb, "fb"))

    def a(self, x, y):
        return self.fa[2 * x + y]

    def b(self, x, y):
        return self.fb[2 * x + y]

    @property
    def kind(self):
        a_reads_y = self.fa[0] != self.fa[1] or self.fa[2] != self.fa[3]
        b_reads_x = self.fb[0] != self.fb[2] or self.fb[1] != self.fb[3]
        if a_reads_y and b_reads_x:
            return "two_way"
        if a_reads_y:
            return "signal_B_to_A"
        if b_reads_x:
            return "signal_A_to_B"
        return "local"

    def table_str(self):
        """Output pairs "ab" per input pair, e.g. "00,00,00,01"."""
        return ",".join(f"{self.fa[i]}{self.fb[i]}" for i in range(4))

    @classmethod
    def from_table_str(cls, text):
        parts = [part.strip() for part in text.split(",")]
        if len(parts) != 4 or any(len(p) != 2 or set(p) - {"0", "1"} for p in parts):
            raise BoxFormatError(f"strategy table must be 4 comma-separated bit pairs, got {text!r}")
        fa = tuple(int(p[0]) for p in parts)
        fb = tuple(int(p[1]) for p in parts)
        return cls(fa, fb)


def strategy_box(strategy, label=None):
    """Deterministic box with all weight on the strategy's outputs."""
    p = np.zeros((2, 2, 2, 2))
    for x, y in INPUT_PAIRS:
        p[x, y, strategy.a(x, y), strategy.b(x, y)] = 1.0
    return CorrelationBox(p, label=label)


def mix(weights, boxes, label=None):
    """Convex mixture of boxes; raises WeightError on bad weights."""
    w = [float(v) for v in weights]
    if len(w) != len(boxes):
        raise WeightError(f"{len(w)} weights for {len(boxes)} boxes")
    if not w:
        raise WeightError("empty mixture")
    if any(v < 0.0 for v in w):
        raise WeightError(f"negative weight {min(w)}")
    import math
    total = math.fsum(w)
    if abs(total - 1.0) > NORM_TOL:
        raise WeightError(f"weights sum to {total!r}, not 1")
    acc = np.zeros((2, 2, 2, 2))
    for wi, box in zip(w, boxes):
        acc += wi * box.p
    return CorrelationBox(acc, label=label)


def is_nonsignaling(box, tol=NORM_TOL):
    """True when each party's marginals are independent of the other's input."""
    if not tol > 0.0:
        raise DomainError(f"tolerance must be positive, got {tol!r}")
    for z in (0, 1):
        ma0 = box.marginal_a(z, 0)
        ma1 = box.marginal_a(z, 1)
        mb0 = box.marginal_b(0, z)
        mb1 = box.marginal_b(1, z)
        if abs(ma0[1] - ma1[1]) > tol or abs(ma0[0] - ma1[0]) > tol:
            return False
        if abs(mb0[1] - mb1[1]) > tol or abs(mb0[0] - mb1[0]) > tol:
            return False
    return True


@dataclass(frozen=True)
class PRScope:
    """Parity relation a xor b = x*y xor mu1*x xor mu2*y xor mu3."""

    mu1: int = 0
    mu2: int = 0
    mu3: int = 0

    def __post_init__(self):
        for name in ("mu1", "mu2", "mu3"):
            object.__setattr__(self, name, _check_bit(getattr(self, name), name))

    def relation(self, x, y):
        """Required output parity a xor b at inputs (x, y)."""
        return (x & y) ^ (self.mu1 & x) ^ (self.mu2 & y) ^ self.mu3

    def holds_for(self, strategy):
        return all(strategy.a(x, y) ^ strategy.b(x, y) == self.relation(x, y)
                   for x, y in INPUT_PAIRS)

    @property
    def label(self):
        return f"{self.mu1}{self.mu2}{self.mu3}"

    @classmethod
    def from_label(cls, text):
        text = text.strip()
        if len(text) != 3 or set(text) - {"0", "1"}:
            raise DomainError(f"scope label must be 3 bits, got {text!r}")
        return cls(int(text[0]), int(text[1]), int(text[2]))


def all_scopes():
    return [PRScope(m1, m2, m3) for m1, m2, m3 in itertools.product((0, 1), repeat=3)]


def pr_box(scope=PRScope(), label=None):
    """Maximally nonlocal box: weight 1/2 on each output pair obeying the scope relation."""
    p = np.zeros((2, 2, 2, 2))
    for x, y in INPUT_PAIRS:
        r = scope.relation(x, y)
        p[x, y, 0, r] = 0.5
        p[x, y, 1, 1 ^ r] = 0.5
    return CorrelationBox(p, label=label)


@dataclass(frozen=True)
class Relabelling:
    """Reversible local symmetry: flip inputs, flip outputs conditioned on own input.

    Acting on a box, Q(a,b|x,y) = P(a ^ a_offset[x], b ^ b_offset[y] | x ^ flip_x, y ^ flip_y).
    """

    flip_x: int = 0
    flip_y: int = 0
    a_offset: tuple = (0, 0)
    b_offset: tuple = (0, 0)

    def __post_init__(self):
        object.__setattr__(self, "flip_x", _check_bit(self.flip_x, "flip_x"))
        object.__setattr__(self, "flip_y", _check_bit(self.flip_y, "flip_y"))
        for name in ("a_offset", "b_offset"):
            off = getattr(self, name)
            if len(off) != 2:
                raise DomainError(f"{name} must have one bit per own input")
            object.__setattr__(self, name, tuple(_check_bit(v, name) for v in off))

    @classmethod
    def identity(cls):
        return cls()

    def after(self, inner):
        """Composite relabelling: apply `inner` first, then this one."""
        return Relabelling(
            flip_x=self.flip_x ^ inner.flip_x,
            flip_y=self.flip_y ^ inner.flip_y,
            a_offset=tuple(self.a_offset[x] ^ inner.a_offset[x ^ self.flip_x] for x in (0, 1)),
            b_offset=tuple(self.b_offset[y] ^ inner.b_offset[y ^ self.flip_y] for y in (0, 1)),
        )

    def inverse(self):
        return Relabelling(
            flip_x=self.flip_x,
            flip_y=self.flip_y,
            a_offset=tuple(self.a_offset[x ^ self.flip_x] for x in (0, 1)),
            b_offset=tuple(self.b_offset[y ^ self.flip_y] for y in (0, 1)),
        )


def all_relabellings():
    """The full group of 64 local reversible relabellings."""
    out = []
    for fx, fy in itertools.product((0, 1), repeat=2):
        for ao in itertools.product((0, 1), repeat=2):
            for bo in itertools.product((0, 1), repeat=2):
                out.append(Relabelling(fx, fy, ao, bo))
    return out


def apply_relabelling(box, rel, label=None):
    p = np.empty((2, 2, 2, 2))
    for x, y in INPUT_PAIRS:
        for a in (0, 1):
            for b in (0, 1):
                p[x, y, a, b] = box.p[x ^ rel.flip_x, y ^ rel.flip_y,
                                      a ^ rel.a_offset[x], b ^ rel.b_offset[y]]
    return CorrelationBox(p, label=label)


def relabel_strategy(strategy, rel):
    """Strategy whose box is apply_relabelling(strategy_box(s), rel); preserves kind."""
    fa = []
    fb = []
    for x, y in INPUT_PAIRS:
        fa.append(strategy.a(x ^ rel.flip_x, y ^ rel.flip_y) ^ rel.a_offset[x])
        fb.append(strategy.b(x ^ rel.flip_x, y ^ rel.flip_y) ^ rel.b_offset[y])
    return DeterministicStrategy(tuple(fa), tuple(fb))


def enumerate_deterministic(kind_filter):
    """Deterministic strategies of one class, deduplicated, in a fixed order.

    Filters: "local" (16), "signal_A_to_B" (48), "signal_B_to_A" (48),
    "all_one_bit" (96, the union of both strictly one-way families).
    """
    if kind_filter == "local":
        out = []
        for f0, f1 in itertools.product((0, 1), repeat=2):
            for g0, g1 in itertools.product((0, 1), repeat=2):
                out.append(DeterministicStrategy((f0, f0, f1, f1), (g0, g1, g0, g1)))
        return out
    if kind_filter == "signal_A_to_B":
        out = []
        for f0, f1 in itertools.product((0, 1), repeat=2):
            fa = (f0, f0, f1, f1)
            for fb in itertools.product((0, 1), repeat=4):
                if fb[0] == fb[2] and fb[1] == fb[3]:
                    continue  # fB ignores x: that strategy is local
                out.append(DeterministicStrategy(fa, fb))
        return out
    if kind_filter == "signal_B_to_A":
        out = []
        for fa in itertools.product((0, 1), repeat=4):
            if fa[0] == fa[1] and fa[2] == fa[3]:
                continue  # fA ignores y: local
            for g0, g1 in itertools.product((0, 1), repeat=2):
                out.append(DeterministicStrategy(fa, (g0, g1, g0, g1)))
        return out
    if kind_filter == "all_one_bit":
        return enumerate_deterministic("signal_A_to_B") + enumerate_deterministic("signal_B_to_A")
    raise DomainError(f"unknown strategy filter {kind_filter!r}")


# The sixteen deterministic strategies of the canonical scope (0,0,0), as
# output pairs "ab" per input row.  Names pair each strategy with its
# output-complemented partner ("+"/"-"); S1..S4 are one-way, S5..S8 two-way.
STRATEGY_NAMES = ("S1+", "S1-", "S2+", "S2-", "S3+", "S3-", "S4+", "S4-",
                  "S5+", "S5-", "S6+", "S6-", "S7+", "S7-", "S8+", "S8-")

_CANONICAL_ROWS = (
    # inputs (x,y) = (0,0), (0,1), (1,0), (1,1); columns follow STRATEGY_NAMES
    "00 11 00 11 00 11 00 11 00 11 00 11 00 11 00 11",
    "00 11 00 11 00 11 11 00 11 00 00 11 11 00 11 00",
    "00 11 00 11 11 00 00 11 00 11 11 00 11 00 11 00",
    "01 10 10 01 10 01 01 10 10 01 01 10 01 10 10 01",
)


def _build_canonical_table():
    rows = [row.split() for row in _CANONICAL_ROWS]
    table = []
    for k in range(16):
        fa = tuple(int(rows[i][k][0]) for i in range(4))
        fb = tuple(int(rows[i][k][1]) for i in range(4))
        table.append(DeterministicStrategy(fa, fb))
    return tuple(table)


_CANONICAL_TABLE = _build_canonical_table()


def scope_relabelling(scope):
    """Relabelling carrying the canonical scope (0,0,0) onto `scope`."""
    return Relabelling(flip_x=0, flip_y=0,
                       a_offset=(scope.mu3, scope.mu1 ^ scope.mu3),
                       b_offset=(0, scope.mu2))


def scope_strategies(scope=PRScope()):
    """The 16 deterministic strategies satisfying the scope's parity relation.

    Ordered and named per STRATEGY_NAMES; the first 8 are one-way, the last 8
    two-way, and consecutive +/- entries are output complements.
    """
    if (scope.mu1, scope.mu2, scope.mu3) == (0, 0, 0):
        return list(_CANONICAL_TABLE)
    rel = scope_relabelling(scope)
    return [relabel_strategy(s, rel) for s in _CANONICAL_TABLE]


def strategy_name(strategy, scope=None):
    """Name of a strategy within its scope's catalogue, or None if unnamed."""
    if scope is None:
        try:
            scope = infer_scope([strategy])
        except ScopeError:
            return None
    for name, member in zip(STRATEGY_NAMES, scope_strategies(scope)):
        if member == strategy:
            return name
    return None


def infer_scope(strategies):
    """The unique scope all strategies satisfy; raises ScopeError otherwise."""
    strategies = list(strategies)
    if not strategies:
        raise ScopeError("no strategies given")
    scopes = set()
    for s in strategies:
        h = [s.a(x, y) ^ s.b(x, y) for x, y in INPUT_PAIRS]
        mu3 = h[0]
        mu2 = h[1] ^ mu3
        mu1 = h[2] ^ mu3
        if h[3] != 1 ^ mu1 ^ mu2 ^ mu3:
            raise ScopeError(f"strategy {s.table_str()} satisfies no PR-type relation")
        scopes.add((mu1, mu2, mu3))
    if len(scopes) > 1:
        labels = sorted("".join(map(str, t)) for t in scopes)
        raise ScopeError(f"strategies span multiple scopes: {labels}")
    mu1, mu2, mu3 = scopes.pop()
    return PRScope(mu1, mu2, mu3)
