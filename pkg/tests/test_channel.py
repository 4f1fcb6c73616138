import math
from fractions import Fraction

import numpy as np
import pytest

from rmgibbs import build, build_instance
from rmgibbs.channel import (
    BscParams,
    PosteriorModel,
    chain_rng,
    crossover_exponent,
    is_typical,
    transmit,
)
from rmgibbs.errors import DimensionError, ParameterError, ResourceLimitError
from rmgibbs.gf2 import BitVector


def model_for(r, m, y01, p):
    return PosteriorModel(build(r, m), BitVector.from01(y01), BscParams(p))


def test_crossover_exponent_table():
    assert crossover_exponent(0.4) == 2
    assert crossover_exponent(0.25) == 2
    assert crossover_exponent(0.11) == 4
    assert crossover_exponent(0.05) == 5


def test_crossover_exponent_bracket():
    rng = np.random.default_rng(31)
    ps = list(rng.uniform(1e-4, 0.499, size=200)) + [0.25, 0.125, 0.0625, 2.0 ** -10]
    for p in ps:
        q = crossover_exponent(float(p))
        assert q >= 2
        assert 0.5 * p <= 2.0 ** -q <= 1.5 * p


def test_bsc_params():
    params = BscParams(0.25)
    assert params.theta == pytest.approx(1 / 3, abs=1e-15)
    assert params.log_theta == pytest.approx(math.log(1 / 3), abs=1e-15)
    assert params.q == 2
    for bad in (0.0, 0.5, 0.75, -0.1):
        with pytest.raises(ParameterError):
            BscParams(bad)


def test_transmit_near_noiseless():
    x = BitVector.zeros(64)
    assert transmit(x, 1e-9, seed=0) == x


def test_transmit_golden():
    y = transmit(BitVector.zeros(16), 0.25, seed=12345)
    assert y.to01() == "0000011000000001"


def test_transmit_pure_function_of_seed():
    x = BitVector.from01("1011001110001111")
    assert transmit(x, 0.25, seed=7) == transmit(x, 0.25, seed=7)
    assert transmit(x, 0.25, seed=7) != transmit(x, 0.25, seed=8)


def test_transmit_mean_flip_count():
    x = BitVector.zeros(64)
    total = sum(transmit(x, 0.25, seed=s).weight() for s in range(100_000))
    assert total / 100_000 == pytest.approx(16.0, abs=0.5)


def test_chain_rng_streams_are_distinct():
    a = chain_rng(5, 0).random(8)
    b = chain_rng(5, 1).random(8)
    c = chain_rng(5, 0).random(8)
    assert np.array_equal(a, c)
    assert not np.array_equal(a, b)


def test_delta_at_own_codeword_is_row_weight():
    code = build(2, 3)
    rng = np.random.default_rng(32)
    msg = BitVector.from_array(rng.integers(0, 2, size=code.k))
    model = PosteriorModel(code, code.encode(msg), BscParams(0.25))
    for i in range(code.k):
        d = model.delta(msg, i)
        assert d == code.G.rows[i].weight() > 0


def test_delta_worst_case_rows():
    model = build_instance(3, 1, p=0.25).model()
    # rows in order [z1, z2, z3, 1]
    assert model.delta(0, 0) == 4
    assert model.delta(0, 1) == 2
    assert model.delta(0, 2) == 4
    assert model.delta(0, 3) == 4


def test_delta_antisymmetry():
    model = model_for(2, 4, "0110100110010110"[:16], 0.3)
    rng = np.random.default_rng(33)
    for _ in range(40):
        msg = int(rng.integers(0, 1 << model.k))
        i = int(rng.integers(0, model.k))
        assert model.delta(msg ^ (1 << i), i) == -model.delta(msg, i)


def test_delta_index_range():
    model = model_for(0, 1, "00", 0.25)
    with pytest.raises(ParameterError):
        model.delta(0, 1)


def test_flip_probability_values():
    # delta = 0 coordinate
    model = model_for(0, 1, "01", 0.25)
    assert model.flip_probability(0, 0) == pytest.approx(0.5, abs=1e-15)
    # theta = 1/3, delta = +/-2
    model = model_for(0, 1, "00", 0.25)
    assert model.flip_probability(0, 0) == pytest.approx(float(Fraction(1, 10)), abs=1e-15)
    assert model.flip_probability(1, 0) == pytest.approx(float(Fraction(9, 10)), abs=1e-15)


def test_flip_probability_complement():
    model = build_instance(4, 2, p=0.11).model()
    rng = np.random.default_rng(34)
    for _ in range(60):
        msg = int(rng.integers(0, 1 << model.k))
        i = int(rng.integers(0, model.k))
        total = model.flip_probability(msg, i) + model.flip_probability(msg ^ (1 << i), i)
        assert total == pytest.approx(1.0, abs=1e-12)


def test_is_typical():
    y = BitVector.from01("00000101")
    assert not is_typical(y, y, 0.5, 0.25)  # zero distance below n p (1 - eps)
    c = BitVector.from01("01010101")
    assert is_typical(c, y, 0.5, 0.25)  # d = 2 inside [1, 3]
    far = BitVector.from01("11110101")
    assert (far.bits ^ y.bits).bit_count() == 4
    assert not is_typical(far, y, 0.5, 0.25)
    with pytest.raises(DimensionError):
        is_typical(BitVector.zeros(4), y, 0.5, 0.25)
    with pytest.raises(ParameterError):
        is_typical(y, y, 0.0, 0.25)


def test_exact_posterior_uniform_when_equidistant():
    model = model_for(0, 1, "01", 0.25)
    assert np.allclose(model.exact_posterior(), [0.5, 0.5], atol=1e-15)


def test_exact_posterior_repetition_code():
    model = model_for(0, 1, "00", 0.25)
    mu = model.exact_posterior()
    # masses proportional to {1, theta^2} = {1, 1/9}
    expect = [float(Fraction(9, 10)), float(Fraction(1, 10))]
    assert np.allclose(mu, expect, atol=1e-14)


def test_exact_posterior_worst_case_tie():
    inst = build_instance(3, 1, p=0.25)
    mu = inst.model().exact_posterior()
    u_index = inst.u.bits
    assert mu[0] == mu[u_index]
    assert mu[0] == pytest.approx(float(Fraction(81, 400)), abs=1e-14)


def test_exact_posterior_normalization():
    rng = np.random.default_rng(35)
    for (r, m) in [(1, 3), (2, 4), (1, 5)]:
        code = build(r, m)
        y = BitVector.from_array(rng.integers(0, 2, size=code.n))
        mu = PosteriorModel(code, y, BscParams(0.3)).exact_posterior()
        assert abs(mu.sum() - 1.0) <= 1e-12
        assert np.all(mu > 0)


def test_log_posterior_ratio_identity():
    model = build_instance(4, 1, p=0.25).model()
    rng = np.random.default_rng(36)
    lt = model.log_theta
    for _ in range(40):
        a = int(rng.integers(0, 1 << model.k))
        b = int(rng.integers(0, 1 << model.k))
        lhs = model.log_posterior_unnorm(a) - model.log_posterior_unnorm(b)
        rhs = (model.distance(a) - model.distance(b)) * lt
        assert lhs == pytest.approx(rhs, abs=1e-10)


def test_exact_posterior_cap():
    code = build(2, 6)  # k = 22
    model = PosteriorModel(code, BitVector.zeros(code.n), BscParams(0.25))
    with pytest.raises(ResourceLimitError):
        model.exact_posterior()


def test_model_dimension_check():
    with pytest.raises(DimensionError):
        PosteriorModel(build(0, 1), BitVector.zeros(4), BscParams(0.25))
