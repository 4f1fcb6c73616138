"""Reed-Muller code construction RM(r, m).

Evaluation-point convention
---------------------------
Coordinate j (0-indexed) of an evaluation vector holds the polynomial's value
at the point z(j) with z_i = 1 - b_i(j), where b_1 ... b_m are the bits of j
from most significant to least significant. Coordinate 0 is therefore the
all-ones point and coordinate 2^m - 1 the all-zeros point. Most textbooks use
the opposite orientation; this one is fixed so that the generator matrix of
RM(2,3) comes out as

    Eval(z1 z2) = 11000000
    Eval(z1 z3) = 10100000
    Eval(z2 z3) = 10001000
    Eval(z1)    = 11110000
    Eval(z2)    = 11001100
    Eval(z3)    = 10101010
    Eval(1)     = 11111111

and it is the single source of truth for every module in this package.

Generator rows are ordered by monomial degree descending from r to 0 and,
within a degree, by lexicographic order of the sorted variable support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np
from scipy.special import ndtri

from .errors import ParameterError, ResourceLimitError
from .gf2 import BitMatrix, BitVector

__all__ = [
    "Monomial",
    "RmCode",
    "enumerate_monomials",
    "eval_monomial",
    "build",
    "min_distance",
    "order_for_rate",
    "DEFAULT_N_CAP",
    "EXHAUSTIVE_DISTANCE_CAP",
]

DEFAULT_N_CAP = 1 << 20
EXHAUSTIVE_DISTANCE_CAP = 16  # 2^16 codewords enumerate in well under a second


@dataclass(frozen=True)
class Monomial:
    """A squarefree monomial over z_1 .. z_m, identified by its variable support.

    The empty support is the constant 1 (degree 0).
    """

    support: tuple[int, ...]

    def __post_init__(self):
        if tuple(sorted(set(self.support))) != self.support:
            raise ParameterError(f"support must be sorted and duplicate-free: {self.support}")
        if self.support and self.support[0] < 1:
            raise ParameterError("variable indices start at 1")

    @property
    def degree(self) -> int:
        return len(self.support)

    def __str__(self) -> str:
        if not self.support:
            return "1"
        return "".join(f"z{i}" for i in self.support)


def enumerate_monomials(r: int, m: int) -> list[Monomial]:
    """All monomials of degree <= r in m variables, in generator-row order."""
    _check_params(r, m)
    out = []
    for deg in range(r, -1, -1):
        for support in combinations(range(1, m + 1), deg):
            out.append(Monomial(support))
    return out


@lru_cache(maxsize=None)
def _eval_bits(mask: int, m: int) -> int:
    # Coordinate j equals 1 iff b_i(j) = 0 for every i in the support, i.e.
    # j has no bit in common with the support mask.
    n = 1 << m
    idx = np.arange(n, dtype=np.uint64)
    hits = (idx & np.uint64(mask)) == 0
    return int.from_bytes(np.packbits(hits, bitorder="little").tobytes(), "little")


def eval_monomial(mono: Monomial, m: int) -> BitVector:
    """Evaluation vector of a monomial over all 2^m points, length 2^m."""
    if mono.support and mono.support[-1] > m:
        raise ParameterError(f"support {mono.support} not contained in 1..{m}")
    if m < 1:
        raise ParameterError(f"need m >= 1, got {m}")
    mask = 0
    for i in mono.support:
        mask |= 1 << (m - i)
    return BitVector(1 << m, _eval_bits(mask, m))


@dataclass(frozen=True)
class RmCode:
    """RM(r, m) with its ordered monomial list and k x n generator matrix."""

    r: int
    m: int
    monomials: tuple[Monomial, ...]
    G: BitMatrix

    @property
    def n(self) -> int:
        return 1 << self.m

    @property
    def k(self) -> int:
        return len(self.monomials)

    @property
    def rate(self) -> float:
        return self.k / self.n

    @property
    def designed_distance(self) -> int:
        """Minimum distance 2^(m-r), by the standard RM distance theorem."""
        return 1 << (self.m - self.r)

    def encode(self, msg: BitVector) -> BitVector:
        return self.G.encode(msg)

    def row_index(self, mono: Monomial) -> int:
        return self.monomials.index(mono)

    def __repr__(self) -> str:
        return f"RmCode(r={self.r}, m={self.m}, k={self.k}, n={self.n})"


def _check_params(r: int, m: int) -> None:
    if m < 1:
        raise ParameterError(f"need m >= 1, got {m}")
    if not 0 <= r <= m:
        raise ParameterError(f"need 0 <= r <= m, got r={r}, m={m}")


@lru_cache(maxsize=None)
def _build_cached(r: int, m: int) -> RmCode:
    monos = tuple(enumerate_monomials(r, m))
    G = BitMatrix([eval_monomial(mono, m) for mono in monos])
    return RmCode(r=r, m=m, monomials=monos, G=G)


def build(r: int, m: int, cap_n: int = DEFAULT_N_CAP) -> RmCode:
    """Construct RM(r, m). Codes are cached, so repeated builds are free."""
    _check_params(r, m)
    if (1 << m) > cap_n:
        raise ResourceLimitError(f"n = 2^{m} exceeds the configured cap {cap_n}")
    return _build_cached(r, m)


def min_distance(code: RmCode, exhaustive: bool = False, cap_k: int = EXHAUSTIVE_DISTANCE_CAP) -> int:
    """Minimum distance of the code.

    Closed form 2^(m-r) by default; with exhaustive=True, enumerates all 2^k
    codewords by Gray code and returns the minimum nonzero weight (requires
    k <= cap_k).
    """
    if not exhaustive:
        return code.designed_distance
    if code.k > cap_k:
        raise ResourceLimitError(f"k = {code.k} exceeds exhaustive cap {cap_k}")
    rows = code.G.row_ints()
    cw = 0
    best = None
    for s in range(1, 1 << code.k):
        cw ^= rows[(s & -s).bit_length() - 1]
        w = cw.bit_count()
        if best is None or w < best:
            best = w
    return best


def order_for_rate(m: int, target_rate: float) -> tuple[int, int]:
    """Orders matching a target rate: (exact minimizer, normal-approximation).

    r_exact minimizes |C(m, <=r)/2^m - target| over r in 0..m, ties going to
    the smaller r. r_normal is round(m/2 + ndtri(target) * sqrt(m)/2), the
    Gaussian approximation of the binomial CDF inverted at the target rate,
    clamped to [0, m]; halves round up.
    """
    _check_params(0, m)
    if not 0.0 < target_rate < 1.0:
        raise ParameterError(f"target rate must lie in (0, 1), got {target_rate}")
    n = 1 << m
    best_r, best_gap = 0, None
    csum = 0
    for r in range(m + 1):
        csum += math.comb(m, r)
        gap = abs(csum / n - target_rate)
        if best_gap is None or gap < best_gap:
            best_r, best_gap = r, gap
    x = m / 2 + ndtri(target_rate) * math.sqrt(m) / 2
    r_normal = min(max(int(math.floor(x + 0.5)), 0), m)
    return best_r, r_normal
