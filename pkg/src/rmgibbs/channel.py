"""Binary symmetric channel model and the message posterior it induces.

The posterior of a message m given the received word y is proportional to
theta^d with theta = p/(1-p) and d = d_H(mG, y). Everything here works with
log-posteriors: theta^d underflows once n reaches a few thousand, while
d * log(theta) stays in range, and posterior ratios only ever enter through
the stable sigmoid in flip_probability.

Randomness: all draws come from numpy's Philox counter-based generator, which
is splittable by construction. transmit(x, p, seed) is a pure function of its
arguments; chains use one stream each, derived from (master seed, chain id)
via chain_rng().

Message index convention: a message of length k is also addressed as an
integer index whose bit i is message coordinate i. Distribution arrays
returned by exact_posterior follow this indexing.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionError, ParameterError, ResourceLimitError
from . import _backend
from .gf2 import BitVector
from .rmcode import RmCode

__all__ = [
    "BscParams",
    "PosteriorModel",
    "crossover_exponent",
    "transmit",
    "chain_rng",
    "is_typical",
    "message_to_index",
    "index_to_message",
    "DEFAULT_K_CAP",
]

DEFAULT_K_CAP = 20


def crossover_exponent(p: float) -> int:
    """q = ceil(log2(1/p)), guarded against floating-point edge cases.

    q is the smallest integer with 2^-q <= p; for p < 1/2 it satisfies q >= 2
    and the bracket p/2 <= 2^-q <= 3p/2.
    """
    if not 0.0 < p < 0.5:
        raise ParameterError(f"crossover probability must lie in (0, 1/2), got {p}")
    q = math.ceil(math.log2(1.0 / p))
    while 2.0 ** (-q) > p:
        q += 1
    while q > 1 and 2.0 ** (-(q - 1)) <= p:
        q -= 1
    return q


class BscParams:
    """Channel constants for BSC(p): theta = p/(1-p) and q = ceil(log2(1/p))."""

    __slots__ = ("p",)

    def __init__(self, p: float):
        if not 0.0 < p < 0.5:
            raise ParameterError(f"crossover probability must lie in (0, 1/2), got {p}")
        self.p = float(p)

    @property
    def theta(self) -> float:
        return self.p / (1.0 - self.p)

    @property
    def log_theta(self) -> float:
        return math.log(self.p) - math.log1p(-self.p)

    @property
    def q(self) -> int:
        return crossover_exponent(self.p)

    def __repr__(self) -> str:
        return f"BscParams(p={self.p})"


def chain_rng(seed: int, chain_id: int = 0) -> np.random.Generator:
    """Philox stream for one chain, derived from (master seed, chain id)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, chain_id])))


def transmit(x: BitVector, p: float, seed: int) -> BitVector:
    """Send x through BSC(p): flip each coordinate independently with prob p.

    Pure function of (x, p, seed); the flip pattern comes from the Philox
    stream keyed by the seed alone.
    """
    if not 0.0 < p < 0.5:
        raise ParameterError(f"crossover probability must lie in (0, 1/2), got {p}")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed])))
    flips = rng.random(x.n) < p
    return x ^ BitVector.from_array(flips.astype(np.uint8))


def is_typical(x: BitVector, y: BitVector, eps: float, p: float) -> bool:
    """Whether y is conditionally eps-typical for input x on BSC(p):
    n*p*(1-eps) <= d_H(x, y) <= n*p*(1+eps)."""
    if x.n != y.n:
        raise DimensionError(f"length mismatch: {x.n} vs {y.n}")
    if eps <= 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    if not 0.0 < p < 1.0:
        raise ParameterError(f"p must lie in (0, 1), got {p}")
    d = (x.bits ^ y.bits).bit_count()
    np_ = x.n * p
    return np_ * (1.0 - eps) <= d <= np_ * (1.0 + eps)


def message_to_index(msg: BitVector) -> int:
    """Integer index of a message: bit i of the index is coordinate i."""
    return msg.bits


def index_to_message(index: int, k: int) -> BitVector:
    return BitVector(k, index)


def _lex_smallest(indices, k: int) -> int:
    """Lexicographically smallest message among indices, coordinate 0 read first."""
    def key(j: int):
        return tuple((j >> i) & 1 for i in range(k))

    return min((int(j) for j in indices), key=key)


def _sigmoid(x: float) -> float:
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    t = math.exp(x)
    return t / (1.0 + t)


class PosteriorModel:
    """A code, a received word y, and channel parameters; immutable once built.

    Evaluates unnormalized log-posteriors, single-coordinate distance
    increments delta_i, and the Gibbs flip probabilities derived from them.
    The exact posterior over all 2^k messages (the brute-force oracle used by
    the sampling tests) is available while k stays under the enumeration cap.
    """

    def __init__(self, code: RmCode, y: BitVector, params: BscParams):
        if y.n != code.n:
            raise DimensionError(f"received length {y.n} != block length {code.n}")
        self.code = code
        self.y = y
        self.params = params
        self._row_ints = code.G.row_ints()
        self._y_int = y.bits
        self._dist_table = None
        self._flip_table = None

    @property
    def k(self) -> int:
        return self.code.k

    @property
    def n(self) -> int:
        return self.code.n

    @property
    def log_theta(self) -> float:
        return self.params.log_theta

    def _as_index(self, msg) -> int:
        if isinstance(msg, BitVector):
            if msg.n != self.k:
                raise DimensionError(f"message length {msg.n} != k = {self.k}")
            return msg.bits
        index = int(msg)
        if index < 0 or index >> self.k:
            raise ParameterError(f"message index {index} out of range for k = {self.k}")
        return index

    def codeword_int(self, msg) -> int:
        index = self._as_index(msg)
        acc = 0
        while index:
            low = index & -index
            acc ^= self._row_ints[low.bit_length() - 1]
            index ^= low
        return acc

    def distance(self, msg) -> int:
        """d_H(mG, y)."""
        return (self.codeword_int(msg) ^ self._y_int).bit_count()

    def log_posterior_unnorm(self, msg) -> float:
        """log of theta^d_H(mG, y); non-positive."""
        return self.distance(msg) * self.log_theta

    def delta(self, msg, i: int) -> int:
        """Distance increment d_H(m^(i) G, y) - d_H(mG, y) for flipping coordinate i."""
        if not 0 <= i < self.k:
            raise ParameterError(f"coordinate {i} out of range for k = {self.k}")
        e = self.codeword_int(msg) ^ self._y_int
        return (e ^ self._row_ints[i]).bit_count() - e.bit_count()

    def flip_probability(self, msg, i: int) -> float:
        """mu(m^(i)) / (mu(m) + mu(m^(i))) = sigmoid(delta_i * log theta)."""
        return _sigmoid(self.delta(msg, i) * self.log_theta)

    def distance_table(self, cap: int = DEFAULT_K_CAP) -> np.ndarray:
        """d_H(mG, y) for all 2^k message indices (cached)."""
        if self.k > cap:
            raise ResourceLimitError(f"k = {self.k} exceeds enumeration cap {cap}")
        if self._dist_table is None:
            self._dist_table = _backend.distance_table(self._row_ints, self.n, self._y_int, self.k)
        return self._dist_table

    def flip_table(self, cap: int = DEFAULT_K_CAP) -> np.ndarray:
        """Flip probabilities, shape (k, 2^k): entry (i, s) is the chance the
        chain at state s accepts a flip of coordinate i (cached)."""
        if self._flip_table is None:
            d = self.distance_table(cap)
            idx = np.arange(d.size, dtype=np.int64)
            table = np.empty((self.k, d.size))
            for i in range(self.k):
                x = (d[idx ^ (1 << i)] - d) * self.log_theta
                table[i] = _stable_sigmoid_array(x)
            self._flip_table = table
        return self._flip_table

    def exact_posterior(self, cap: int = DEFAULT_K_CAP) -> np.ndarray:
        """The normalized posterior over all 2^k message indices."""
        d = self.distance_table(cap)
        w = d * self.log_theta
        pr = np.exp(w - w.max())
        pr /= pr.sum()
        return pr

    def __repr__(self) -> str:
        return f"PosteriorModel({self.code!r}, p={self.params.p})"


def _stable_sigmoid_array(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out
