from fractions import Fraction

import numpy as np
import pytest

import rmgibbs
from rmgibbs import build, build_instance
from rmgibbs.channel import BscParams, PosteriorModel
from rmgibbs.errors import ParameterError
from rmgibbs.gf2 import BitVector
from rmgibbs.gibbs import GibbsChain, apply_kernel, decode, transition_prob
from rmgibbs.analysis import tv_distance


def model_for(r, m, y01, p):
    return PosteriorModel(build(r, m), BitVector.from01(y01), BscParams(p))


def rep_model(p=0.25):
    return model_for(0, 1, "00", p)


def test_transition_prob_zero_beyond_single_flips():
    model = model_for(1, 2, "0110", 0.25)
    assert transition_prob(model, 0b000, 0b011) == 0.0
    assert transition_prob(model, 0b000, 0b111) == 0.0


def test_transition_prob_repetition_code():
    model = rep_model()
    assert transition_prob(model, 0, 0) == pytest.approx(float(Fraction(9, 10)), abs=1e-12)
    assert transition_prob(model, 0, 1) == pytest.approx(float(Fraction(1, 10)), abs=1e-12)


def test_transition_rows_sum_to_one_and_hold_positive():
    rng = np.random.default_rng(41)
    for (r, m) in [(0, 1), (1, 2), (1, 3)]:
        code = build(r, m)
        y = BitVector.from_array(rng.integers(0, 2, size=code.n))
        model = PosteriorModel(code, y, BscParams(float(rng.uniform(0.05, 0.45))))
        for state in range(1 << code.k):
            total = transition_prob(model, state, state)
            assert total > 0.0
            for i in range(code.k):
                p_i = transition_prob(model, state, state ^ (1 << i))
                assert 0.0 < p_i < 1.0 / code.k
                total += p_i
            assert total == pytest.approx(1.0, abs=1e-12)


def test_detailed_balance_small_models():
    rng = np.random.default_rng(42)
    for (r, m) in [(1, 2), (2, 3), (1, 4)]:
        code = build(r, m)
        y = BitVector.from_array(rng.integers(0, 2, size=code.n))
        model = PosteriorModel(code, y, BscParams(0.2))
        mu = model.exact_posterior()
        logmu = np.log(mu)
        for _ in range(30):
            s = int(rng.integers(0, 1 << code.k))
            i = int(rng.integers(0, code.k))
            t = s ^ (1 << i)
            lhs = logmu[s] + np.log(transition_prob(model, s, t))
            rhs = logmu[t] + np.log(transition_prob(model, t, s))
            assert lhs == pytest.approx(rhs, abs=1e-12)


def test_apply_kernel_preserves_stationarity():
    rng = np.random.default_rng(43)
    for (r, m) in [(1, 3), (2, 4), (1, 11)]:  # k = 4, 11, 12
        code = build(r, m)
        y = BitVector.from_array(rng.integers(0, 2, size=code.n))
        model = PosteriorModel(code, y, BscParams(0.25))
        mu = model.exact_posterior()
        assert tv_distance(apply_kernel(model, mu), mu) <= 1e-12


def test_apply_kernel_point_mass():
    model = rep_model()
    out = apply_kernel(model, np.array([1.0, 0.0]))
    assert np.allclose(out, [0.9, 0.1], atol=1e-12)
    # support of a point mass spreads only to single-flip neighbors
    model2 = build_instance(4, 1, p=0.25).model()
    dist = np.zeros(1 << model2.k)
    start = 0b10110
    dist[start] = 1.0
    out = apply_kernel(model2, dist)
    support = set(np.flatnonzero(out > 0).tolist())
    allowed = {start} | {start ^ (1 << i) for i in range(model2.k)}
    assert support <= allowed
    assert abs(out.sum() - 1.0) <= 1e-12


def test_run_zero_steps_is_identity():
    chain = GibbsChain(rep_model(), seed=1)
    res = chain.run(0)
    assert chain.step_count == 0 and res.steps == 0
    assert chain.message_index == 0


def test_step_advances_and_keeps_cache():
    chain = GibbsChain(build_instance(3, 1, p=0.25).model(), seed=3)
    for _ in range(200):
        flip = chain.step()
        assert flip == -1 or 0 <= flip < 4
        chain.check_cache()
    assert chain.step_count == 200


def test_cached_distance_matches_recomputation_after_runs():
    model = build_instance(4, 2, p=0.11).model()
    chain = GibbsChain(model, start="uniform", seed=17)
    for steps in (1, 7, 100, 4096):
        chain.run(steps)
        chain.check_cache()


def test_chain_determinism_and_stream_separation():
    model = build_instance(4, 1, p=0.25).model()
    runs = []
    for _ in range(2):
        chain = GibbsChain(model, seed=12, chain_id=0)
        res = chain.run(5000, record_stride=100)
        runs.append((chain.message_index, res.trajectory))
    assert runs[0] == runs[1]
    other = GibbsChain(model, seed=12, chain_id=1)
    other_res = other.run(5000, record_stride=100)
    assert other_res.trajectory != runs[0][1]


def test_backends_produce_identical_trajectories():
    if not rmgibbs.HAVE_COMPILED:
        pytest.skip("compiled backend unavailable")
    from rmgibbs import _backend, _kernels_py

    model = build_instance(4, 1, p=0.25).model()
    rows, n, e0 = model._row_ints, model.n, model._y_int
    fast = _backend.GibbsKernel(rows, n, e0, 0, model.log_theta)
    slow = _kernels_py.GibbsKernel(rows, n, e0, 0, model.log_theta)
    rng = rmgibbs.chain_rng(99)
    steps = 50_000
    idx = rng.integers(0, model.k, size=steps, dtype=np.int64)
    u = rng.random(steps)
    recs = lambda: (
        np.empty(steps, np.int64),
        np.empty(steps, np.int64),
        np.empty(steps, np.uint64),
    )
    d1, f1, s1 = recs()
    d2, f2, s2 = recs()
    fast.run_chunk(idx, u, d1, f1, s1)
    slow.run_chunk(idx, u, d2, f2, s2)
    assert np.array_equal(d1, d2)
    assert np.array_equal(f1, f2)
    assert np.array_equal(s1, s2)
    assert fast.d == slow.d and fast.message_int == slow.message_int
    assert fast.zero_steps == slow.zero_steps


def test_distance_table_backends_agree():
    if not rmgibbs.HAVE_COMPILED:
        pytest.skip("compiled backend unavailable")
    from rmgibbs import _backend, _kernels_py

    model = build_instance(4, 2, p=0.25).model()
    args = (model._row_ints, model.n, model._y_int, model.k)
    assert np.array_equal(_backend.distance_table(*args), _kernels_py.distance_table(*args))


def test_trajectory_stride_and_step_numbers():
    chain = GibbsChain(build_instance(3, 1, p=0.25).model(), seed=2)
    res = chain.run(1000, record_stride=250)
    assert [t for t, _, _ in res.trajectory] == [250, 500, 750, 1000]
    for _, d, flip in res.trajectory:
        assert 0 <= d <= 8 and (flip == -1 or 0 <= flip < 4)


def test_occupancy_repetition_code():
    chain = GibbsChain(rep_model(), seed=7)
    res = chain.run(1_000_000)
    assert res.zero_fraction == pytest.approx(0.9, abs=0.005)


def test_worst_case_chain_golden():
    chain = GibbsChain(build_instance(3, 1, p=0.25).model(), start="zero", seed=424242)
    res = chain.run(10_000)
    assert chain.message.to01() == "0011"
    assert chain.cached_distance == 2
    assert res.zero_fraction == pytest.approx(0.2349, abs=1e-12)


def test_decode_deterministic_and_one_step_law():
    model = rep_model()
    assert decode(model, 5000, seed=99) == decode(model, 5000, seed=99)
    # one-step flip probability from the zero start is exactly 0.1
    hits = sum(decode(model, 1, seed=s).bits for s in range(5000))
    assert hits / 5000 == pytest.approx(0.1, abs=0.02)


def test_decode_recovers_message_when_nearly_noiseless():
    code = build(1, 3)
    msg = BitVector.from01("0110")
    model = PosteriorModel(code, code.encode(msg), BscParams(0.01))
    for seed in range(5):
        assert decode(model, 2000, seed=seed) == msg


def test_decode_validation():
    with pytest.raises(ParameterError):
        decode(rep_model(), 0, seed=1)
    with pytest.raises(ParameterError):
        GibbsChain(rep_model(), start="sideways")
