"""Pure-Python chain kernels.

Fallback used when the compiled extension is not available. Vectors live in
arbitrary-precision integers; a step is one XOR plus one popcount. Both
backends consume identical (coordinate, uniform) arrays and apply the same
accept rule, so trajectories are reproducible across them for a fixed seed.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "pure-python"


def _sigmoid(x: float) -> float:
    # theta^d / (1 + theta^d) evaluated as sigmoid(d * log(theta)), stable on
    # both tails.
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    t = math.exp(x)
    return t / (1.0 + t)


class GibbsKernel:
    """Single-site chain state: disagreement pattern, message, cached counts."""

    __slots__ = ("rows", "n", "k", "log_theta", "e", "msg", "d", "wt", "step_count", "zero_steps")

    def __init__(self, row_ints, n: int, e0: int, msg0: int, log_theta: float):
        self.rows = list(row_ints)
        self.n = n
        self.k = len(self.rows)
        self.log_theta = float(log_theta)
        self.e = e0
        self.msg = msg0
        self.d = e0.bit_count()
        self.wt = msg0.bit_count()
        self.step_count = 0
        self.zero_steps = 0

    @property
    def message_int(self) -> int:
        return self.msg

    def run_chunk(self, idx, u, dist_rec, flip_rec, state_rec) -> None:
        """Advance by len(idx) steps, writing per-step records.

        idx: proposed coordinates; u: accept uniforms; dist_rec/flip_rec get
        the post-step distance and the flipped coordinate (or -1 on hold);
        state_rec gets the low 64 bits of the message.
        """
        rows = self.rows
        e = self.e
        msg = self.msg
        d = self.d
        wt = self.wt
        zeros = 0
        lt = self.log_theta
        exp = math.exp
        dists = []
        flips = []
        states = []
        for i, uu in zip(idx.tolist(), u.tolist()):
            x = e ^ rows[i]
            delta = x.bit_count() - d
            arg = delta * lt
            if arg >= 0.0:
                p = 1.0 / (1.0 + exp(-arg))
            else:
                t = exp(arg)
                p = t / (1.0 + t)
            if uu < p:
                e = x
                d += delta
                bit = 1 << i
                msg ^= bit
                wt += 1 if msg & bit else -1
                flips.append(i)
            else:
                flips.append(-1)
            if wt == 0:
                zeros += 1
            dists.append(d)
            states.append(msg & 0xFFFFFFFFFFFFFFFF)
        c = len(flips)
        dist_rec[:c] = dists
        flip_rec[:c] = flips
        state_rec[:c] = states
        self.e = e
        self.msg = msg
        self.d = d
        self.wt = wt
        self.step_count += c
        self.zero_steps += zeros


def distance_table(row_ints, n: int, y_int: int, k: int) -> np.ndarray:
    """d_H(mG, y) for every message index m in 0 .. 2^k - 1.

    Message index convention: bit i of the index is message coordinate i.
    Enumeration walks the Gray code so each entry costs one XOR + popcount.
    """
    out = np.empty(1 << k, dtype=np.int64)
    e = y_int
    out[0] = e.bit_count()
    for s in range(1, 1 << k):
        e ^= row_ints[(s & -s).bit_length() - 1]
        out[s ^ (s >> 1)] = e.bit_count()
    return out
