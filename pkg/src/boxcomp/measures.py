"""Statistical and entropic measures on correlation boxes.

Correlators are E(x,y) = P(a=b|x,y) - P(a!=b|x,y).  The fixed CHSH value is
E(0,0) + E(0,1) + E(1,0) - E(1,1); `chsh_max` maximizes over the position of
the minus sign and an overall sign.

Signal strength S is the largest shift of one party's outcome marginal when
the remote input flips, maximized over direction, own input, and outcome.
Indeterminacy I is the sup over settings of the smallest outcome-marginal
probability, so I = 0 marks a deterministic box and I = 1/2 an unbiased one.
H_S and H_I are their entropic counterparts: the best mutual information a
remote party can extract about the flipped input under a chosen prior, and
the largest output Shannon entropy over settings and parties.

Marginals are always computed as cell sums (never as 1 - x), which keeps
every measure exact on exactly-normalized dyadic tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .boxcore import INPUT_PAIRS
from .errors import DomainError

_ENTROPY_SLACK = 1e-12


def binary_entropy(p):
    """H(p) = -p log2 p - (1-p) log2 (1-p), elementwise, with H(0) = H(1) = 0."""
    arr = np.asarray(p, dtype=np.float64)
    if arr.size and (arr.min() < -_ENTROPY_SLACK or arr.max() > 1.0 + _ENTROPY_SLACK):
        raise DomainError(f"probability outside [0,1]: {arr.min()}..{arr.max()}")
    arr = np.clip(arr, 0.0, 1.0)
    out = np.zeros_like(arr)
    interior = (arr > 0.0) & (arr < 1.0)
    q = arr[interior]
    out[interior] = -q * np.log2(q) - (1.0 - q) * np.log2(1.0 - q)
    return float(out) if np.isscalar(p) or out.ndim == 0 else out


def _entropy_pair(p0, p1):
    """Shannon entropy (bits) of a two-outcome distribution given as cell sums."""
    h = 0.0
    for v in (p0, p1):
        if v > 0.0:
            h -= v * math.log2(v)
    return h


def correlators(box):
    """E(x,y) matrix indexed [x][y]."""
    p = box.p
    e = np.empty((2, 2))
    for x, y in INPUT_PAIRS:
        e[x, y] = (p[x, y, 0, 0] + p[x, y, 1, 1]) - (p[x, y, 0, 1] + p[x, y, 1, 0])
    return e


def chsh(box):
    """Fixed-form CHSH value E(0,0) + E(0,1) + E(1,0) - E(1,1)."""
    e = correlators(box)
    return float(e[0, 0] + e[0, 1] + e[1, 0] - e[1, 1])


def chsh_max(box):
    """CHSH maximized over the 8 sign choices (minus-sign position and global sign)."""
    e = correlators(box)
    total = e.sum()
    return float(max(abs(total - 2.0 * e[x, y]) for x, y in INPUT_PAIRS))


@dataclass(frozen=True)
class SignalReport:
    """Directed marginal shifts: per remote-facing setting and their maxima."""

    s_A_to_B_per_y: tuple  # shift of B's marginal at y when x flips, y = 0, 1
    s_B_to_A_per_x: tuple  # shift of A's marginal at x when y flips, x = 0, 1
    S_A_to_B: float
    S_B_to_A: float
    S: float

    def to_json(self):
        return {
            "s_A_to_B_per_y": list(self.s_A_to_B_per_y),
            "s_B_to_A_per_x": list(self.s_B_to_A_per_x),
            "S_A_to_B": self.S_A_to_B,
            "S_B_to_A": self.S_B_to_A,
            "S": self.S,
        }


def signal(box):
    """Marginal-shift signal strengths in both directions."""
    s_ab = []
    for y in (0, 1):
        m0 = box.marginal_b(0, y)
        m1 = box.marginal_b(1, y)
        s_ab.append(max(abs(m1[0] - m0[0]), abs(m1[1] - m0[1])))
    s_ba = []
    for x in (0, 1):
        m0 = box.marginal_a(x, 0)
        m1 = box.marginal_a(x, 1)
        s_ba.append(max(abs(m1[0] - m0[0]), abs(m1[1] - m0[1])))
    s_a_to_b = max(s_ab)
    s_b_to_a = max(s_ba)
    return SignalReport(
        s_A_to_B_per_y=tuple(s_ab),
        s_B_to_A_per_x=tuple(s_ba),
        S_A_to_B=s_a_to_b,
        S_B_to_A=s_b_to_a,
        S=max(s_a_to_b, s_b_to_a),
    )


def indeterminacy_per_setting(box):
    """Smallest outcome-marginal probability at each setting, indexed [x][y]."""
    out = np.empty((2, 2))
    for x, y in INPUT_PAIRS:
        ma = box.marginal_a(x, y)
        mb = box.marginal_b(x, y)
        out[x, y] = min(ma[0], ma[1], mb[0], mb[1])
    return out


def indeterminacy(box):
    """Sup over settings of the per-setting indeterminacy; 0 deterministic, 1/2 unbiased."""
    return float(indeterminacy_per_setting(box).max())


def entropic_indeterminacy_per_setting(box):
    """Largest output Shannon entropy (bits) over the two parties, per setting."""
    out = np.empty((2, 2))
    for x, y in INPUT_PAIRS:
        ma = box.marginal_a(x, y)
        mb = box.marginal_b(x, y)
        out[x, y] = max(_entropy_pair(*ma), _entropy_pair(*mb))
    return out


def entropic_indeterminacy(box):
    """H_I: sup over settings and parties of the output Shannon entropy."""
    return float(entropic_indeterminacy_per_setting(box).max())


def _mutual_information_rows(row0, row1, prior):
    """I(input; output) for a binary channel with outcome rows row0, row1."""
    pi0, pi1 = prior
    m0 = pi0 * row0[0] + pi1 * row1[0]
    m1 = pi0 * row0[1] + pi1 * row1[1]
    return (_entropy_pair(m0, m1)
            - pi0 * _entropy_pair(*row0) - pi1 * _entropy_pair(*row1))


def entropic_signal(box, prior=(0.5, 0.5)):
    """H_S: best extractable information (bits) about the remote input flip.

    The remote input is drawn with the given prior; the value is maximized
    over direction and the receiving party's own setting.
    """
    pi0, pi1 = float(prior[0]), float(prior[1])
    if pi0 < 0.0 or pi1 < 0.0 or abs(pi0 + pi1 - 1.0) > _ENTROPY_SLACK:
        raise DomainError(f"prior must be a distribution, got {prior!r}")
    best = 0.0
    for y in (0, 1):
        best = max(best, _mutual_information_rows(
            box.marginal_b(0, y), box.marginal_b(1, y), (pi0, pi1)))
    for x in (0, 1):
        best = max(best, _mutual_information_rows(
            box.marginal_a(x, 0), box.marginal_a(x, 1), (pi0, pi1)))
    return float(best)


def two_point_mutual_information(p, shift, prior=0.5):
    """Information carried by a marginal sitting at p or p + shift.

    Vectorized over p: the receiver sees outcome probability p with weight
    1 - prior (remote bit 0) or p + shift with weight prior (remote bit 1).
    """
    p = np.asarray(p, dtype=np.float64)
    mixed = binary_entropy(p + prior * np.asarray(shift))
    return mixed - (1.0 - prior) * binary_entropy(p) - prior * binary_entropy(p + shift)


def entropic_signal_lower_bound(s):
    """Least H_S compatible with signal strength s: 1 - H((1 - s)/2)."""
    s = float(s)
    if s < -_ENTROPY_SLACK or s > 1.0 + _ENTROPY_SLACK:
        raise DomainError(f"signal strength outside [0,1]: {s!r}")
    s = min(max(s, 0.0), 1.0)
    return 1.0 - binary_entropy((1.0 - s) / 2.0)


@dataclass(frozen=True)
class MeasureReport:
    """All scalar measures of one box."""

    lambda_: float
    lambda_max: float
    signal: SignalReport
    I: float
    I_per_setting: tuple
    H_S: float
    H_I: float

    def to_json(self):
        data = {
            "lambda": self.lambda_,
            "lambda_max": self.lambda_max,
            "S": self.signal.S,
            "S_AtoB": self.signal.S_A_to_B,
            "S_BtoA": self.signal.S_B_to_A,
            "I": self.I,
            "H_S": self.H_S,
            "H_I": self.H_I,
            "s_A_to_B_per_y": list(self.signal.s_A_to_B_per_y),
            "s_B_to_A_per_x": list(self.signal.s_B_to_A_per_x),
            "I_per_setting": [list(row) for row in self.I_per_setting],
        }
        return data


def measure_report(box, prior=(0.5, 0.5)):
    sig = signal(box)
    per = indeterminacy_per_setting(box)
    return MeasureReport(
        lambda_=chsh(box),
        lambda_max=chsh_max(box),
        signal=sig,
        I=float(per.max()),
        I_per_setting=tuple(tuple(float(v) for v in row) for row in per),
        H_S=entropic_signal(box, prior),
        H_I=entropic_indeterminacy(box),
    )
