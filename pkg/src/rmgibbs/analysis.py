"""Mixing-time diagnostics: bottleneck ratios, exact TV curves, decoder error.

The chain's escape probability from a singleton {m0} is

    Phi({m0}) = 1 - P(m0 -> m0) = (1/k) sum_i theta^delta_i / (1 + theta^delta_i),

which lower-bounds the mixing time via T_mix >= 1/(4 Phi(P)) and
Phi(P) <= Phi({m0}) whenever mu(m0) <= 1/2. Everything here is exact
arithmetic over enumerable state spaces plus closed-form bound evaluation;
astronomically large bounds are reported as natural logs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

import numpy as np
from scipy.special import logsumexp

from .adversary import closed_form_delta
from .channel import (
    DEFAULT_K_CAP,
    BscParams,
    PosteriorModel,
    _lex_smallest,
    _sigmoid,
)
from .errors import ParameterError, ResourceLimitError
from .gf2 import BitVector
from .gibbs import apply_kernel, transition_prob
from .rmcode import RmCode, enumerate_monomials

__all__ = [
    "BottleneckReport",
    "MixingReport",
    "SandwichReport",
    "Theorem3Report",
    "singleton_bottleneck",
    "exact_bottleneck",
    "exact_tv_curve",
    "map_decode",
    "sandwich_check",
    "theorem3_bound",
    "tv_distance",
]

# Row-by-row bound evaluation keeps float summation identical to the direct
# route; beyond this many generator rows the grouped closed form takes over.
ROW_ENUM_CAP = 1 << 16


def tv_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Total variation distance: half the L1 distance."""
    return 0.5 * float(np.abs(np.asarray(a) - np.asarray(b)).sum())


def _dlt(delta: int, log_theta: float) -> float:
    """delta * log_theta, saturating instead of overflowing on huge deltas."""
    try:
        return delta * log_theta
    except OverflowError:
        return -math.inf if (delta > 0) == (log_theta < 0) else math.inf


def _phi_from_deltas(deltas: Sequence[int], log_theta: float) -> float:
    """Exact Phi({m}) from the distance increments, fixed summation order.

    Shared by the direct route (measured deltas) and the closed-form route so
    that equal integer deltas give bitwise-equal floats.
    """
    total = 0.0
    for d in deltas:
        total += _sigmoid(_dlt(d, log_theta))
    return total / len(deltas)


def _log_sigmoid(x: float) -> float:
    if x >= 0.0:
        return -math.log1p(math.exp(-x))
    return x - math.log1p(math.exp(x))


def _log_phi_from_terms(log_terms: Sequence[float], log_counts: Optional[Sequence[float]], k: int) -> float:
    vals = np.asarray(log_terms, dtype=np.float64)
    if log_counts is not None:
        vals = vals + np.asarray(log_counts, dtype=np.float64)
    return float(logsumexp(vals)) - math.log(k)


@dataclass
class BottleneckReport:
    """Singleton bottleneck Phi({m0}) and the mixing bound it implies."""

    m0_index: int
    k: int
    deltas: tuple[int, ...]
    per_coordinate_terms: tuple[float, ...]  # theta^delta / (1 + theta^delta)
    phi_singleton: float
    phi_definition: float  # independent route: 1 - P(m0 -> m0)
    phi_upper_relaxed: float  # paper's relaxation (1/k) sum theta^delta
    log_phi: float
    stationary_mass: Optional[float]  # mu(m0) when enumerable
    admissible: Optional[bool]  # mu(m0) <= 1/2; None when unknown
    mixing_lower_bound: Optional[float]  # 1/(4 Phi), only when admissible
    log_mixing_lower_bound: Optional[float]
    mixing_lower_bound_relaxed: Optional[float]

    def to_dict(self) -> dict:
        out = {
            "m0_index": self.m0_index,
            "k": self.k,
            "phi_singleton": self.phi_singleton,
            "phi_definition": self.phi_definition,
            "phi_upper_relaxed": self.phi_upper_relaxed,
            "log_phi": self.log_phi,
            "stationary_mass": self.stationary_mass,
            "admissible": self.admissible,
            "mixing_lower_bound": self.mixing_lower_bound,
            "log_mixing_lower_bound": self.log_mixing_lower_bound,
            "mixing_lower_bound_relaxed": self.mixing_lower_bound_relaxed,
        }
        if self.k <= 64:
            out["deltas"] = list(self.deltas)
            out["per_coordinate_terms"] = list(self.per_coordinate_terms)
        return out


def singleton_bottleneck(
    model: PosteriorModel,
    m0=0,
    k_cap: int = DEFAULT_K_CAP,
    assume_admissible: Optional[bool] = None,
) -> BottleneckReport:
    """Exact Phi({m0}) via the flip-probability sum.

    mu(m0) <= 1/2 is reported, not assumed: the mixing bound fields stay None
    unless admissibility is established (exactly when 2^k is enumerable, or
    by the caller via assume_admissible, e.g. from the two-mass witness).
    """
    m0_index = model._as_index(m0)
    k = model.k
    lt = model.log_theta
    deltas = tuple(model.delta(m0_index, i) for i in range(k))
    terms = tuple(_sigmoid(d * lt) for d in deltas)
    phi = _phi_from_deltas(deltas, lt)
    phi_def = 1.0 - transition_prob(model, m0_index, m0_index)
    relaxed = 0.0
    for d in deltas:
        relaxed += math.exp(d * lt)
    relaxed /= k
    log_phi = _log_phi_from_terms([_log_sigmoid(d * lt) for d in deltas], None, k)

    mass: Optional[float] = None
    if k <= k_cap:
        mass = float(model.exact_posterior(k_cap)[m0_index])
    admissible = (mass <= 0.5) if mass is not None else assume_admissible

    bound = log_bound = bound_relaxed = None
    if admissible:
        bound = 1.0 / (4.0 * phi)
        log_bound = -math.log(4.0) - log_phi
        bound_relaxed = 1.0 / (4.0 * relaxed) if relaxed > 0 else math.inf
    return BottleneckReport(
        m0_index=m0_index,
        k=k,
        deltas=deltas,
        per_coordinate_terms=terms,
        phi_singleton=phi,
        phi_definition=phi_def,
        phi_upper_relaxed=relaxed,
        log_phi=log_phi,
        stationary_mass=mass,
        admissible=admissible,
        mixing_lower_bound=bound,
        log_mixing_lower_bound=log_bound,
        mixing_lower_bound_relaxed=bound_relaxed,
    )


def exact_bottleneck(
    model: PosteriorModel,
    max_set_size: Optional[int] = None,
    k_cap: int = DEFAULT_K_CAP,
) -> tuple[float, tuple[int, ...]]:
    """Infimum of Phi(S) over enumerated sets with mu(S) <= 1/2.

    All subsets are enumerated when k <= 4; otherwise subsets up to
    max_set_size (default 1). Returns (phi, best set of state indices).
    """
    k = model.k
    N = 1 << k
    mu = model.exact_posterior(k_cap)
    flips = model.flip_table(k_cap)
    # flow[i, s]: stationary flow out of s along coordinate i
    flow = mu[None, :] * flips / k
    neighbors = [[s ^ (1 << i) for i in range(k)] for s in range(N)]

    exhaustive = max_set_size is None and N <= 16
    best_phi = math.inf
    best_set: tuple[int, ...] = ()

    def consider(states: tuple[int, ...], mask: int) -> None:
        nonlocal best_phi, best_set
        mass = float(mu[list(states)].sum())
        if mass <= 0.0 or mass > 0.5 + 1e-12:
            return
        escape = 0.0
        for s in states:
            for i in range(k):
                if not (mask >> neighbors[s][i]) & 1:
                    escape += flow[i, s]
        phi = escape / mass
        if phi < best_phi:
            best_phi, best_set = phi, states

    if exhaustive:
        for mask in range(1, 1 << N):
            states = tuple(s for s in range(N) if (mask >> s) & 1)
            consider(states, mask)
    else:
        size_cap = 1 if max_set_size is None else max_set_size
        if math.comb(N, min(size_cap, N)) > 1 << 22:
            raise ResourceLimitError("subset enumeration too large; lower max_set_size")
        for size in range(1, size_cap + 1):
            for states in combinations(range(N), size):
                mask = 0
                for s in states:
                    mask |= 1 << s
                consider(states, mask)
    return best_phi, best_set


@dataclass
class MixingReport:
    """Exact TV-to-stationarity curve and first-passage mixing times."""

    mu0: str
    t_max: int
    eps_list: tuple[float, ...]
    tv_curve: list[tuple[int, float]]
    t_mix: dict[float, Optional[int]]
    reached_all: bool

    def to_dict(self) -> dict:
        return {
            "mu0": self.mu0,
            "t_max": self.t_max,
            "eps_list": list(self.eps_list),
            "t_mix": {str(eps): t for eps, t in self.t_mix.items()},
            "reached_all": self.reached_all,
            "tv_curve": [[t, tv] for t, tv in self.tv_curve],
        }


def exact_tv_curve(
    model: PosteriorModel,
    mu0="zero",
    t_max: int = 10_000,
    eps_list: Sequence[float] = (0.25,),
    k_cap: int = DEFAULT_K_CAP,
    stop_when_reached: bool = True,
) -> MixingReport:
    """Evolve mu0 through the exact kernel, recording TV to stationarity.

    mu0 is "zero"/"stationary"/"uniform", a message index (point mass), or an
    explicit probability vector. The recorded t_mix(eps) is the first t with
    TV <= eps, or None if t_max was hit first.
    """
    if t_max < 0:
        raise ParameterError(f"t_max must be >= 0, got {t_max}")
    mu = model.exact_posterior(k_cap)
    N = mu.size
    if isinstance(mu0, str):
        descriptor = mu0
        if mu0 == "stationary":
            dist = mu.copy()
        elif mu0 == "uniform":
            dist = np.full(N, 1.0 / N)
        elif mu0 == "zero":
            dist = np.zeros(N)
            dist[0] = 1.0
        else:
            raise ParameterError(f"unknown initial distribution {mu0!r}")
    elif isinstance(mu0, (int, np.integer, BitVector)):
        index = model._as_index(mu0)
        descriptor = f"point:{index}"
        dist = np.zeros(N)
        dist[index] = 1.0
    else:
        dist = np.asarray(mu0, dtype=np.float64)
        if dist.shape != (N,):
            raise ParameterError(f"initial distribution must have length {N}")
        descriptor = "custom"

    eps_list = tuple(eps_list)
    tv0 = tv_distance(dist, mu)
    curve = [(0, tv0)]
    t_mix: dict[float, Optional[int]] = {eps: (0 if tv0 <= eps else None) for eps in eps_list}
    for t in range(1, t_max + 1):
        if stop_when_reached and all(v is not None for v in t_mix.values()):
            break
        dist = apply_kernel(model, dist, k_cap)
        tv = tv_distance(dist, mu)
        curve.append((t, tv))
        for eps in eps_list:
            if t_mix[eps] is None and tv <= eps:
                t_mix[eps] = t
    return MixingReport(
        mu0=descriptor,
        t_max=t_max,
        eps_list=eps_list,
        tv_curve=curve,
        t_mix=t_mix,
        reached_all=all(v is not None for v in t_mix.values()),
    )


def map_decode(model: PosteriorModel, k_cap: int = DEFAULT_K_CAP) -> BitVector:
    """Brute-force MAP decoder: minimize d_H(mG, y); ties go to the
    lexicographically smallest message (coordinate 0 read first)."""
    d = model.distance_table(k_cap)
    candidates = np.flatnonzero(d == d.min())
    return BitVector(model.k, _lex_smallest(candidates, model.k))


@dataclass
class SandwichReport:
    """Exact block-error comparison: MAP versus posterior sampling."""

    p: float
    k: int
    n: int
    p_e_map: float
    p_e_sampling: float
    ratio: float
    holds: bool

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "n": self.n,
            "p_e_map": self.p_e_map,
            "p_e_sampling": self.p_e_sampling,
            "ratio": self.ratio,
            "holds": self.holds,
        }


def sandwich_check(code: RmCode, p: float, max_enum: int = 1 << 22) -> SandwichReport:
    """Exact P_e(MAP) and posterior-sampling error by double enumeration.

    Averages over uniform messages and the full channel law (2^k messages
    times 2^n outputs), so it is exact up to float rounding. Verifies
    P_e* <= P_e(sampling) <= 2 P_e*.
    """
    BscParams(p)  # validate the channel parameter
    k, n = code.k, code.n
    if (1 << k) * (1 << n) > max_enum:
        raise ResourceLimitError(f"2^(k+n) = 2^{k + n} exceeds enumeration cap {max_enum}")
    rows = code.G.row_ints()
    cw = np.zeros(1 << k, dtype=np.int64)
    acc = 0
    for s in range(1, 1 << k):
        acc ^= rows[(s & -s).bit_length() - 1]
        cw[s ^ (s >> 1)] = acc
    prior = 1.0 / (1 << k)
    pe_map = 0.0
    pe_samp = 0.0
    for y in range(1 << n):
        d = np.bitwise_count(cw ^ y).astype(np.int64)
        joint = prior * np.power(p, d) * np.power(1.0 - p, n - d)
        z = joint.sum()
        mu = joint / z
        best = _lex_smallest(np.flatnonzero(d == d.min()), k)
        pe_map += z - joint[best]
        pe_samp += z - float(joint @ mu)
    pe_map = float(pe_map)
    pe_samp = float(pe_samp)
    ratio = pe_samp / pe_map if pe_map > 0 else math.nan
    holds = pe_map <= pe_samp + 1e-12 and pe_samp <= 2.0 * pe_map + 1e-12
    return SandwichReport(
        p=p, k=k, n=n, p_e_map=pe_map, p_e_sampling=pe_samp, ratio=ratio, holds=bool(holds)
    )


@dataclass
class Theorem3Report:
    """Slow-mixing bound for the constructed instance, in log space.

    delta_min_bound is 2^(m-r-q+1); when the exponent is negative the bound
    is below 1 and vacuous for integer weight increases. The mixing bound
    uses the exact flip-probability sum evaluated on the closed-form deltas;
    the relaxed variant drops the 1/(1+theta^delta) correction as in the
    underlying superpolynomial estimate.
    """

    m: int
    r: int
    p: Optional[float]
    q: int
    k: int
    delta_exponent: int
    delta_min_bound: float
    delta_min_bound_int: Optional[int]
    vacuous: bool
    method: str  # "rows" below ROW_ENUM_CAP, else "grouped"
    phi: float
    log_phi: float
    log_t_mix_lower: float
    t_mix_lower: float
    log_t_mix_lower_relaxed: float

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "r": self.r,
            "p": self.p,
            "q": self.q,
            "k": self.k,
            "delta_exponent": self.delta_exponent,
            "delta_min_bound": self.delta_min_bound,
            "delta_min_bound_int": self.delta_min_bound_int,
            "vacuous": self.vacuous,
            "method": self.method,
            "phi": self.phi,
            "log_phi": self.log_phi,
            "log_t_mix_lower": self.log_t_mix_lower,
            "t_mix_lower": self.t_mix_lower if math.isfinite(self.t_mix_lower) else None,
            "log_t_mix_lower_relaxed": self.log_t_mix_lower_relaxed,
        }


def theorem3_bound(m: int, r: int, p: Optional[float] = None, q: Optional[int] = None) -> Theorem3Report:
    """Evaluate the closed-form slow-mixing bound for the constructed y.

    Needs a channel for theta: p is required (q may additionally be
    overridden for studying the construction at a different exponent).
    """
    if p is None:
        raise ParameterError("p is required to evaluate the bound (theta = p/(1-p))")
    params = BscParams(p)
    if q is None:
        q = params.q
    if q < 2 or m < q:
        raise ParameterError(f"need m >= q >= 2, got m = {m}, q = {q}")
    if not 1 <= r <= m:
        raise ParameterError(f"need 1 <= r <= m, got r = {r}")
    lt = params.log_theta
    k = sum(math.comb(m, i) for i in range(r + 1))

    if k <= ROW_ENUM_CAP:
        method = "rows"
        deltas = [closed_form_delta(mono, m, q) for mono in enumerate_monomials(r, m)]
        phi = _phi_from_deltas(deltas, lt)
        log_phi = _log_phi_from_terms([_log_sigmoid(_dlt(d, lt)) for d in deltas], None, k)
        log_relaxed_sum = float(logsumexp([_dlt(d, lt) for d in deltas])) - math.log(k)
    else:
        method = "grouped"
        log_terms = []
        log_counts = []
        raw = []
        for count, exponent in _delta_groups(m, r, q):
            x = -math.ldexp(-lt, exponent)  # 2^exponent * log_theta without big-int floats
            log_terms.append(_log_sigmoid(x))
            log_counts.append(math.log(count))
            raw.append(x)
        phi = math.exp(_log_phi_from_terms(log_terms, log_counts, k))
        log_phi = _log_phi_from_terms(log_terms, log_counts, k)
        log_relaxed_sum = _log_phi_from_terms(raw, log_counts, k)

    e = m - r - q + 1
    log_bound = -math.log(4.0) - log_phi
    # 1/(4 phi) directly, so the value is bitwise identical to the
    # direct-delta bottleneck bound whenever phi matches; the log form covers
    # the regime where phi underflows.
    bound = 1.0 / (4.0 * phi) if phi > 0.0 else math.inf
    return Theorem3Report(
        m=m,
        r=r,
        p=p,
        q=q,
        k=k,
        delta_exponent=e,
        delta_min_bound=math.ldexp(1.0, e),
        delta_min_bound_int=(1 << e) if e >= 0 else None,
        vacuous=e < 0,
        method=method,
        phi=phi,
        log_phi=log_phi,
        log_t_mix_lower=log_bound,
        t_mix_lower=bound,
        log_t_mix_lower_relaxed=-math.log(4.0) - log_relaxed_sum,
    )


def _delta_groups(m: int, r: int, q: int):
    """(row count, delta exponent) grouped over the generator monomials.

    Case z_m | f, degree t: C(m-1, t-1) rows at exponent m - t. Otherwise
    with a = |support cap [q-1]|: C(q-1, a) C(m-q, t-a) rows at exponent
    m - t - (q - 1 - a). Group counts total k = C(m, <= r).
    """
    for t in range(1, r + 1):
        yield math.comb(m - 1, t - 1), m - t
    for t in range(0, min(r, m - 1) + 1):
        for a in range(max(0, t - (m - q)), min(t, q - 1) + 1):
            count = math.comb(q - 1, a) * math.comb(m - q, t - a)
            if count:
                yield count, m - t - (q - 1 - a)
