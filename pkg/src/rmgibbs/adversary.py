"""Worst-case received sequences that trap the sampler at the zero message.

The construction evaluates f_y(z) = (z_1 ... z_{q-1} + 1)(z_m + 1), so y has a
one exactly at the points with z_m = 0 where not all of z_1 .. z_{q-1} equal
1. Its weight is 2^(m-1) - 2^(m-q), the degree-1 codeword c = Eval(z_m + 1)
sits at distance 2^(m-q), and adding any generator row to y increases the
weight by at least 2^(m-r-q+1). The per-row increase has a closed form split
by whether the row's monomial contains z_m:

    z_m in the support (size t):      2^(m-t)
    z_m absent, I = support cap [q-1]: 2^(m-t-(q-1-|I|))

verify_lemma4 checks all of that exhaustively: each direct per-row delta must
equal its closed form, the supporting intersection counts must match, the
distance and weight identities must hold, and the zero message must carry at
most half the posterior mass (exactly when 2^k is enumerable, otherwise by
the two-mass comparison against c's message).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .channel import DEFAULT_K_CAP, BscParams, PosteriorModel, is_typical
from .errors import ParameterError
from .gf2 import BitVector
from .rmcode import DEFAULT_N_CAP, Monomial, RmCode, build, eval_monomial

__all__ = [
    "AdversarialInstance",
    "Lemma4Report",
    "build_y",
    "nearest_codeword",
    "closed_form_delta",
    "expected_intersection",
    "build_instance",
    "verify_lemma4",
    "grid_cells",
    "verify_grid",
    "GRID_P_VALUES",
    "GRID_M_MAX",
]

GRID_P_VALUES = (0.4, 0.25, 0.11, 0.05)
GRID_M_MAX = 12


def _check_mq(m: int, q: int) -> None:
    if q < 2:
        raise ParameterError(f"need q >= 2 (i.e. p < 1/2), got q = {q}")
    if m < q:
        raise ParameterError(f"construction needs m >= q, got m = {m}, q = {q}")


def build_y(m: int, q: int, cap_n: int = DEFAULT_N_CAP) -> BitVector:
    """Eval of (z_1 ... z_{q-1} + 1)(z_m + 1); weight 2^(m-1) - 2^(m-q)."""
    _check_mq(m, q)
    if (1 << m) > cap_n:
        raise ParameterError(f"n = 2^{m} exceeds cap {cap_n}")
    # Under the coordinate convention, z_m = 0 means bit 0 of j is 1, and
    # "some z_i = 0 for i < q" means some of the top q-1 bits of j is 1.
    n = 1 << m
    idx = np.arange(n, dtype=np.uint64)
    ones = ((idx & np.uint64(1)) == 1) & ((idx >> np.uint64(m - q + 1)) != 0)
    return BitVector.from_array(ones.astype(np.uint8))


def nearest_codeword(m: int, r: int) -> tuple[BitVector, BitVector]:
    """The codeword c = Eval(z_m + 1) and its message u (rows z_m and 1).

    c is a codeword of RM(r, m) only for r >= 1.
    """
    if r < 1:
        raise ParameterError("c has degree 1, so the order must satisfy r >= 1")
    code = build(r, m)
    c = eval_monomial(Monomial((m,)), m) ^ eval_monomial(Monomial(()), m)
    u_bits = 0
    u_bits |= 1 << code.row_index(Monomial((m,)))
    u_bits |= 1 << code.row_index(Monomial(()))
    u = BitVector(code.k, u_bits)
    return c, u


def closed_form_delta(mono: Monomial, m: int, q: int) -> int:
    """wt(y + Eval(mono)) - wt(y) from the two-case closed form."""
    _check_mq(m, q)
    if mono.support and mono.support[-1] > m:
        raise ParameterError(f"support {mono.support} not contained in 1..{m}")
    t = mono.degree
    if m in mono.support:
        return 1 << (m - t)
    overlap = sum(1 for i in mono.support if i <= q - 1)
    return 1 << (m - t - (q - 1 - overlap))


def expected_intersection(mono: Monomial, m: int, q: int) -> int:
    """|S(f) cap S(f_y)|: 0 when z_m divides f, else 2^(m-t-1) - 2^(m-t-q+|I|)."""
    _check_mq(m, q)
    t = mono.degree
    if m in mono.support:
        return 0
    overlap = sum(1 for i in mono.support if i <= q - 1)
    return (1 << (m - t - 1)) - (1 << (m - t - q + overlap))


@dataclass(frozen=True)
class AdversarialInstance:
    """The constructed tuple for RM(r, m) at bottleneck exponent q."""

    m: int
    r: int
    q: int
    p: Optional[float]
    code: RmCode
    y: BitVector
    c: BitVector
    u: BitVector
    wt_y: int
    d_cy: int
    delta_bound: int
    per_row_deltas: tuple[int, ...]

    def model(self) -> PosteriorModel:
        if self.p is None:
            raise ParameterError("instance was built from an explicit q; no channel attached")
        return PosteriorModel(self.code, self.y, BscParams(self.p))


def build_instance(m: int, r: int, p: Optional[float] = None, q: Optional[int] = None) -> AdversarialInstance:
    """Construct the worst-case instance; q is derived from p unless overridden."""
    if q is None:
        if p is None:
            raise ParameterError("provide a crossover probability p or an explicit q")
        q = BscParams(p).q
    _check_mq(m, q)
    if not 1 <= r <= m:
        raise ParameterError(f"need 1 <= r <= m, got r = {r}, m = {m}")
    code = build(r, m)
    y = build_y(m, q)
    c, u = nearest_codeword(m, r)
    y_int = y.bits
    wt_y = y.weight()
    deltas = tuple((row ^ y_int).bit_count() - wt_y for row in code.G.row_ints())
    return AdversarialInstance(
        m=m,
        r=r,
        q=q,
        p=p,
        code=code,
        y=y,
        c=c,
        u=u,
        wt_y=wt_y,
        d_cy=(c.bits ^ y_int).bit_count(),
        delta_bound=_delta_bound(m, r, q),
        per_row_deltas=deltas,
    )


def _delta_bound(m: int, r: int, q: int) -> int:
    # 2^(m-r-q+1); the exponent can go negative at high order, where the
    # bound is vacuous for integer weight increases.
    e = m - r - q + 1
    return 1 << e if e >= 0 else 0


@dataclass
class Lemma4Report:
    """Exhaustive verification record for one (m, r, q[, p]) instance."""

    m: int
    r: int
    q: int
    p: Optional[float]
    k: int
    n: int
    wt_y: int
    d_cy: int
    delta_bound: int
    per_row_deltas: tuple[int, ...]
    y_nonzero: bool
    weight_identity: bool  # wt(y) == 2^(m-1) - 2^(m-q)
    statement1: bool  # d_H(c, y) == 2^(m-q)
    statement2: bool  # mu(0) <= 1/2
    statement2_method: str  # "exact" or "witness"
    mu_zero: Optional[float]
    statement3: bool  # every per-row delta >= 2^(m-r-q+1)
    closed_form_match: bool  # direct deltas == closed-form deltas, row by row
    case_counts_match: bool  # |S(f) cap S(f_y)| identities, both cases
    min_delta: int
    typical: Optional[bool]  # is_typical(c, y, 1/2, p); None without a channel
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        out = {
            "m": self.m,
            "r": self.r,
            "q": self.q,
            "p": self.p,
            "k": self.k,
            "n": self.n,
            "wt_y": self.wt_y,
            "d_cy": self.d_cy,
            "delta_bound": self.delta_bound,
            "min_delta": self.min_delta,
            "y_nonzero": self.y_nonzero,
            "weight_identity": self.weight_identity,
            "statement1": self.statement1,
            "statement2": self.statement2,
            "statement2_method": self.statement2_method,
            "mu_zero": self.mu_zero,
            "statement3": self.statement3,
            "closed_form_match": self.closed_form_match,
            "case_counts_match": self.case_counts_match,
            "typical": self.typical,
            "passed": self.passed,
            "failures": list(self.failures),
        }
        if self.k <= 64:
            out["per_row_deltas"] = list(self.per_row_deltas)
        return out


def verify_lemma4(
    m: int,
    r: int,
    p: Optional[float] = None,
    q: Optional[int] = None,
    k_cap: int = DEFAULT_K_CAP,
) -> Lemma4Report:
    """Verify all three lemma statements plus the proof's counting identities.

    mu(0) is checked exactly via the full posterior while k <= k_cap and by
    the two-mass witness comparison otherwise. Any failed check lands in the
    report's failure list; nothing is silently ignored.
    """
    inst = build_instance(m, r, p=p, q=q)
    failures: list[str] = []
    y_int = inst.y.bits

    y_nonzero = y_int != 0
    if not y_nonzero:
        failures.append("y is the zero vector")

    weight_identity = inst.wt_y == (1 << (m - 1)) - (1 << (m - inst.q))
    if not weight_identity:
        failures.append(f"wt(y) = {inst.wt_y} != 2^(m-1) - 2^(m-q)")

    statement1 = inst.d_cy == 1 << (m - inst.q)
    if not statement1:
        failures.append(f"d_H(c, y) = {inst.d_cy} != 2^(m-q)")

    mu_zero: Optional[float] = None
    if inst.p is not None and inst.code.k <= k_cap:
        method = "exact"
        posterior = inst.model().exact_posterior(cap=k_cap)
        mu_zero = float(posterior[0])
        statement2 = mu_zero <= 0.5
    else:
        # Two-mass argument: wt(y) >= d_H(c, y) gives mu(0) <= mu(u), and the
        # two masses cannot both exceed 1/2.
        method = "witness"
        statement2 = inst.wt_y >= inst.d_cy and inst.u.bits != 0
    if not statement2:
        failures.append("posterior mass of the zero message exceeds 1/2")

    statement3 = all(d >= inst.delta_bound for d in inst.per_row_deltas)
    if not statement3:
        failures.append("some per-row delta falls below 2^(m-r-q+1)")

    closed_form_match = True
    case_counts_match = True
    for mono, row, direct in zip(inst.code.monomials, inst.code.G.rows, inst.per_row_deltas):
        cf = closed_form_delta(mono, m, inst.q)
        if cf != direct:
            closed_form_match = False
            failures.append(f"row {mono}: direct delta {direct} != closed form {cf}")
        inter = (row.bits & y_int).bit_count()
        if inter != expected_intersection(mono, m, inst.q):
            case_counts_match = False
            failures.append(f"row {mono}: intersection count {inter} mismatches the case formula")

    typical = None
    if inst.p is not None:
        typical = is_typical(inst.c, inst.y, 0.5, inst.p)

    return Lemma4Report(
        m=m,
        r=r,
        q=inst.q,
        p=inst.p,
        k=inst.code.k,
        n=inst.code.n,
        wt_y=inst.wt_y,
        d_cy=inst.d_cy,
        delta_bound=inst.delta_bound,
        per_row_deltas=inst.per_row_deltas,
        y_nonzero=y_nonzero,
        weight_identity=weight_identity,
        statement1=statement1,
        statement2=statement2,
        statement2_method=method,
        mu_zero=mu_zero,
        statement3=statement3,
        closed_form_match=closed_form_match,
        case_counts_match=case_counts_match,
        min_delta=min(inst.per_row_deltas),
        typical=typical,
        failures=failures,
    )


def grid_cells(
    p_values: Iterable[float] = GRID_P_VALUES, m_max: int = GRID_M_MAX
) -> list[tuple[int, int, float]]:
    """All (m, r, p) cells of the verification grid: m in q(p)..m_max, r in 1..m."""
    cells = []
    for p in p_values:
        q = BscParams(p).q
        for m in range(q, m_max + 1):
            for r in range(1, m + 1):
                cells.append((m, r, p))
    return cells


def verify_grid(
    p_values: Iterable[float] = GRID_P_VALUES,
    m_max: int = GRID_M_MAX,
    k_cap: int = DEFAULT_K_CAP,
) -> list[Lemma4Report]:
    """Run verify_lemma4 on every grid cell, sorted by (p, m, r)."""
    return [verify_lemma4(m, r, p=p, k_cap=k_cap) for m, r, p in grid_cells(p_values, m_max)]
