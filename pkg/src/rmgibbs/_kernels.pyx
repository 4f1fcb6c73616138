# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled chain kernels.

Same contract as rmgibbs._kernels_py: bit-packed single-site stepping and the
Gray-code distance table, operating on 64-bit words instead of Python ints.
Given the same (coordinate, uniform) arrays both backends produce identical
trajectories.
"""

from libc.math cimport exp

import numpy as np

ctypedef unsigned long long u64
ctypedef long long i64

cdef extern from *:
    """
    static inline int rmg_popcount64(unsigned long long x)
    { return __builtin_popcountll(x); }
    static inline int rmg_ctz64(unsigned long long x)
    { return __builtin_ctzll(x); }
    """
    int rmg_popcount64(u64 x) nogil
    int rmg_ctz64(u64 x) nogil

BACKEND = "compiled"


def _int_to_words(x, Py_ssize_t nwords):
    raw = int(x).to_bytes(nwords * 8, "little")
    return np.frombuffer(raw, dtype="<u8").copy()


def _words_to_int(arr):
    return int.from_bytes(np.asarray(arr, dtype="<u8").tobytes(), "little")


cdef inline double _sigmoid(double x) nogil:
    cdef double t
    if x >= 0.0:
        return 1.0 / (1.0 + exp(-x))
    t = exp(x)
    return t / (1.0 + t)


cdef class GibbsKernel:
    """Single-site chain state: disagreement pattern, message, cached counts."""

    cdef u64[:, ::1] rows
    cdef u64[::1] e
    cdef u64[::1] msg
    cdef Py_ssize_t W, KW
    cdef public Py_ssize_t k, n
    cdef public long long d, wt, step_count, zero_steps
    cdef double log_theta

    def __init__(self, row_ints, n, e0, msg0, log_theta):
        cdef Py_ssize_t k = len(row_ints)
        cdef Py_ssize_t W = (n + 63) // 64
        cdef Py_ssize_t KW = (k + 63) // 64
        cdef Py_ssize_t i
        rows = np.empty((k, W), dtype="<u8")
        for i in range(k):
            rows[i, :] = _int_to_words(row_ints[i], W)
        self.rows = rows
        self.e = _int_to_words(e0, W)
        self.msg = _int_to_words(msg0, KW)
        self.W = W
        self.KW = KW
        self.k = k
        self.n = n
        self.log_theta = log_theta
        self.d = int(e0).bit_count()
        self.wt = int(msg0).bit_count()
        self.step_count = 0
        self.zero_steps = 0

    @property
    def message_int(self):
        return _words_to_int(np.asarray(self.msg))

    def run_chunk(self, i64[::1] idx, double[::1] u,
                  i64[::1] dist_rec, i64[::1] flip_rec, u64[::1] state_rec):
        """Advance by len(idx) steps, writing per-step records.

        idx: proposed coordinates; u: accept uniforms; dist_rec/flip_rec get
        the post-step distance and the flipped coordinate (or -1 on hold);
        state_rec gets the low 64 bits of the message.
        """
        cdef Py_ssize_t c = idx.shape[0]
        cdef Py_ssize_t t, w, i
        cdef long long d = self.d
        cdef long long wt = self.wt
        cdef long long zeros = 0
        cdef long long delta
        cdef double lt = self.log_theta
        cdef double p
        cdef u64[:, ::1] rows = self.rows
        cdef u64[::1] e = self.e
        cdef u64[::1] msg = self.msg
        cdef Py_ssize_t W = self.W
        with nogil:
            for t in range(c):
                i = idx[t]
                delta = 0
                for w in range(W):
                    delta += rmg_popcount64(e[w] ^ rows[i, w])
                delta -= d
                p = _sigmoid(delta * lt)
                if u[t] < p:
                    for w in range(W):
                        e[w] ^= rows[i, w]
                    d += delta
                    msg[i >> 6] ^= (<u64>1) << (i & 63)
                    if msg[i >> 6] & ((<u64>1) << (i & 63)):
                        wt += 1
                    else:
                        wt -= 1
                    flip_rec[t] = i
                else:
                    flip_rec[t] = -1
                if wt == 0:
                    zeros += 1
                dist_rec[t] = d
                state_rec[t] = msg[0]
        self.d = d
        self.wt = wt
        self.step_count += c
        self.zero_steps += zeros


def distance_table(row_ints, n, y_int, k):
    """d_H(mG, y) for every message index m in 0 .. 2^k - 1.

    Message index convention: bit i of the index is message coordinate i.
    Enumeration walks the Gray code so each entry costs one XOR + popcount.
    """
    cdef Py_ssize_t W = (n + 63) // 64
    cdef Py_ssize_t kk = k
    cdef Py_ssize_t i
    rows_np = np.empty((kk, W), dtype="<u8")
    for i in range(kk):
        rows_np[i, :] = _int_to_words(row_ints[i], W)
    e_np = _int_to_words(y_int, W)
    out_np = np.empty(1 << kk, dtype=np.int64)

    cdef u64[:, ::1] rows = rows_np
    cdef u64[::1] e = e_np
    cdef i64[::1] out = out_np
    cdef u64 s, N = (<u64>1) << kk
    cdef Py_ssize_t w, bit
    cdef long long d = 0
    with nogil:
        for w in range(W):
            d += rmg_popcount64(e[w])
        out[0] = d
        for s in range(1, N):
            bit = rmg_ctz64(s)
            d = 0
            for w in range(W):
                e[w] ^= rows[bit, w]
                d += rmg_popcount64(e[w])
            out[s ^ (s >> 1)] = d
    return out_np
