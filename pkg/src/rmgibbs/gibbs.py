"""Single-site Gibbs sampler on the message space.

Each step picks a coordinate i uniformly from the k message bits and flips it
with probability mu(m^(i)) / (mu(m) + mu(m^(i))), which depends only on the
distance increment delta_i and theta. The chain keeps d_H(mG, y) incrementally
(one XOR + popcount per proposal, no re-encoding); the heavy lifting happens
in the selected backend kernel.

A chain owns its Philox stream and is deterministic given (seed, chain_id) and
the sequence of run() calls: draws are batched per run, so run(5); run(5) and
run(10) consume the stream differently while each remains reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _backend
from .channel import DEFAULT_K_CAP, PosteriorModel, chain_rng, index_to_message
from .errors import DimensionError, ParameterError, ResourceLimitError
from .gf2 import BitVector

__all__ = ["GibbsChain", "RunResult", "transition_prob", "apply_kernel", "decode"]

_CHUNK = 1 << 16


@dataclass
class RunResult:
    """Summary of one run() call."""

    steps: int
    final_distance: int
    zero_fraction: float
    trajectory: Optional[list[tuple[int, int, int]]] = None  # (step, distance, flip or -1)
    states: Optional[np.ndarray] = None  # post-step message words (low 64 bits)


class GibbsChain:
    """Mutable chain state over the 2^k messages of a posterior model.

    start is "zero" (default), "uniform" (drawn from the chain's own stream),
    a message BitVector, or an integer message index. One chain is owned by
    one execution context; several chains with distinct chain ids may run
    concurrently against the same immutable model.
    """

    def __init__(self, model: PosteriorModel, start="zero", seed: int = 0, chain_id: int = 0):
        self.model = model
        self.seed = seed
        self.chain_id = chain_id
        self.rng = chain_rng(seed, chain_id)
        if isinstance(start, str):
            if start == "zero":
                start_index = 0
            elif start == "uniform":
                bits = self.rng.integers(0, 2, size=model.k).astype(np.uint8)
                start_index = int.from_bytes(
                    np.packbits(bits, bitorder="little").tobytes(), "little"
                )
            else:
                raise ParameterError(f"unknown start descriptor {start!r}")
        else:
            start_index = model._as_index(start)
        e0 = model.codeword_int(start_index) ^ model._y_int
        self._kernel = _backend.GibbsKernel(
            model._row_ints, model.n, e0, start_index, model.log_theta
        )

    @property
    def step_count(self) -> int:
        return self._kernel.step_count

    @property
    def cached_distance(self) -> int:
        return self._kernel.d

    @property
    def message_index(self) -> int:
        return self._kernel.message_int

    @property
    def message(self) -> BitVector:
        return index_to_message(self._kernel.message_int, self.model.k)

    @property
    def zero_steps(self) -> int:
        """Steps so far whose post-step state was the all-zero message."""
        return self._kernel.zero_steps

    def check_cache(self) -> None:
        """Assert the incremental distance equals a fresh recomputation."""
        fresh = self.model.distance(self.message_index)
        if fresh != self.cached_distance:
            raise AssertionError(
                f"cached distance {self.cached_distance} != recomputed {fresh}"
            )

    def step(self) -> int:
        """Advance one step; returns the flipped coordinate or -1 on a hold."""
        result = self.run(1, record_stride=1)
        return result.trajectory[-1][2]

    def run(self, steps: int, record_stride: int = 0, collect_states: bool = False) -> RunResult:
        """Advance the chain `steps` steps.

        record_stride > 0 collects (step, distance, flip) every that many
        steps; collect_states gathers the low 64 bits of the message after
        every step (a full state only while k <= 64).
        """
        if steps < 0:
            raise ParameterError(f"step budget must be >= 0, got {steps}")
        k = self.model.k
        zero_before = self._kernel.zero_steps
        trajectory = [] if record_stride else None
        states = np.empty(steps, dtype=np.uint64) if collect_states else None
        buf = max(1, min(_CHUNK, steps))
        dist_rec = np.empty(buf, dtype=np.int64)
        flip_rec = np.empty(buf, dtype=np.int64)
        state_rec = np.empty(buf, dtype=np.uint64)
        done = 0
        while done < steps:
            c = min(_CHUNK, steps - done)
            idx = self.rng.integers(0, k, size=c, dtype=np.int64)
            u = self.rng.random(c)
            s0 = self._kernel.step_count
            self._kernel.run_chunk(idx, u, dist_rec[:c], flip_rec[:c], state_rec[:c])
            if collect_states:
                states[done : done + c] = state_rec[:c]
            if record_stride:
                first = (record_stride - (s0 + 1) % record_stride) % record_stride
                for j in range(first, c, record_stride):
                    trajectory.append((s0 + 1 + j, int(dist_rec[j]), int(flip_rec[j])))
            done += c
        zero_frac = (self._kernel.zero_steps - zero_before) / steps if steps else 0.0
        return RunResult(
            steps=steps,
            final_distance=self.cached_distance,
            zero_fraction=zero_frac,
            trajectory=trajectory,
            states=states,
        )


def transition_prob(model: PosteriorModel, m_from, m_to) -> float:
    """One-step kernel entry P(m -> m').

    (1/k) * sigmoid(delta_i log theta) when m' flips exactly coordinate i of
    m; the holding remainder when m' = m; zero otherwise.
    """
    a = model._as_index(m_from)
    b = model._as_index(m_to)
    k = model.k
    if a == b:
        total = 0.0
        for i in range(k):
            total += model.flip_probability(a, i) / k
        return 1.0 - total
    diff = a ^ b
    if diff & (diff - 1):  # differ in two or more coordinates
        return 0.0
    i = diff.bit_length() - 1
    return model.flip_probability(a, i) / k


def apply_kernel(model: PosteriorModel, dist: np.ndarray, cap: int = DEFAULT_K_CAP) -> np.ndarray:
    """One exact kernel application dist -> dist * P over all 2^k states.

    Uses the sparse structure (k + 1 nonzero transitions per state) through
    the cached flip table; the reduction order is fixed, so results are
    bitwise reproducible.
    """
    k = model.k
    if k > cap:
        raise ResourceLimitError(f"k = {model.k} exceeds enumeration cap {cap}")
    dist = np.asarray(dist, dtype=np.float64)
    if dist.shape != (1 << k,):
        raise DimensionError(f"distribution must have length 2^{k}")
    flips = model.flip_table(cap)
    idx = np.arange(dist.size, dtype=np.int64)
    out = dist * (1.0 - flips.sum(axis=0) / k)
    for i in range(k):
        out += (dist * flips[i])[idx ^ (1 << i)] / k
    return out


def decode(model: PosteriorModel, steps: int, seed: int, start="zero", chain_id: int = 0) -> BitVector:
    """Posterior-sampling decoder: run the chain `steps` steps, return the state.

    No burn-in or thinning is applied; the sample is the state at exactly
    step `steps`.
    """
    if steps < 1:
        raise ParameterError(f"need at least one step, got {steps}")
    chain = GibbsChain(model, start=start, seed=seed, chain_id=chain_id)
    chain.run(steps)
    return chain.message
