import pytest

from rmgibbs.adversary import (
    build_instance,
    build_y,
    closed_form_delta,
    expected_intersection,
    grid_cells,
    nearest_codeword,
    verify_lemma4,
)
from rmgibbs.errors import ParameterError
from rmgibbs.gf2 import BitVector
from rmgibbs.rmcode import Monomial, build, enumerate_monomials, eval_monomial


def test_build_y_small_instance():
    assert build_y(3, 2) == BitVector.from01("00000101")


def test_build_y_weight_closed_form():
    for m in range(2, 13):
        for q in range(2, m + 1):
            assert build_y(m, q).weight() == (1 << (m - 1)) - (1 << (m - q))


def test_build_y_boundary_m_equals_q():
    for q in range(2, 9):
        assert build_y(q, q).weight() == (1 << (q - 1)) - 1


def test_build_y_validation():
    with pytest.raises(ParameterError):
        build_y(1, 2)
    with pytest.raises(ParameterError):
        build_y(3, 1)


def test_nearest_codeword_small_instance():
    c, u = nearest_codeword(3, 1)
    assert c == BitVector.from01("01010101")
    assert u == BitVector.from01("0011")  # rows [z1, z2, z3, 1]: selects z3 and 1


def test_nearest_codeword_encodes_to_c():
    for m in range(2, 9):
        for r in (1, 2, min(3, m)):
            c, u = nearest_codeword(m, r)
            assert build(r, m).encode(u) == c


def test_nearest_codeword_distance():
    for m in range(2, 10):
        y = build_y(m, 2)
        c, _ = nearest_codeword(m, 1)
        assert (c.bits ^ y.bits).bit_count() == 1 << (m - 2)


def test_nearest_codeword_needs_order_one():
    with pytest.raises(ParameterError):
        nearest_codeword(3, 0)


def test_closed_form_delta_examples():
    assert closed_form_delta(Monomial((3,)), 3, 2) == 4  # z_m case, t = 1
    assert closed_form_delta(Monomial((2,)), 3, 2) == 2  # I empty
    assert closed_form_delta(Monomial(()), 3, 2) == 4  # constant
    assert closed_form_delta(Monomial((1,)), 3, 2) == 4  # I = {1}


def test_closed_form_matches_direct_deltas():
    for m in range(2, 9):
        for q in range(2, m + 1):
            y = build_y(m, q)
            wt_y = y.weight()
            for mono in enumerate_monomials(min(m, 3), m):
                g = eval_monomial(mono, m)
                direct = (g.bits ^ y.bits).bit_count() - wt_y
                assert direct == closed_form_delta(mono, m, q), (m, q, mono)


def test_case_split_identities():
    for m in range(2, 9):
        for q in range(2, m + 1):
            y = build_y(m, q)
            for mono in enumerate_monomials(min(m, 3), m):
                g = eval_monomial(mono, m)
                inter = (g.bits & y.bits).bit_count()
                assert inter == expected_intersection(mono, m, q)
                if m in mono.support:
                    assert inter == 0  # evaluation supports are disjoint


def test_min_delta_attains_bound_at_low_order():
    # minimum over rows is exactly 2^(m-r-q+1) whenever r <= m - q
    for m in range(3, 11):
        for q in range(2, m):
            for r in range(1, m - q + 1):
                inst = build_instance(m, r, q=q)
                assert min(inst.per_row_deltas) == 1 << (m - r - q + 1)


def test_deltas_never_fall_below_bound():
    for m, r, p in grid_cells(p_values=(0.25, 0.05), m_max=9):
        inst = build_instance(m, r, p=p)
        assert min(inst.per_row_deltas) >= inst.delta_bound
        assert all(d > 0 for d in inst.per_row_deltas)


def test_verify_small_instance_report():
    rep = verify_lemma4(3, 1, p=0.25)
    assert rep.passed
    assert rep.per_row_deltas == (4, 2, 4, 4)
    assert rep.delta_bound == 2
    assert rep.statement2_method == "exact"
    assert rep.mu_zero == pytest.approx(81 / 400, abs=1e-14)
    assert rep.typical is True
    assert rep.wt_y == rep.d_cy == 2  # two-mass tie at q = 2


def test_verify_with_q_override_uses_witness():
    rep = verify_lemma4(5, 2, q=3)
    assert rep.passed
    assert rep.statement2_method == "witness"
    assert rep.p is None and rep.typical is None


def test_verify_boundary_m_equals_q():
    rep = verify_lemma4(2, 1, p=0.25)
    assert rep.passed


def test_verify_validation():
    with pytest.raises(ParameterError):
        verify_lemma4(1, 1, p=0.25)  # m < q
    with pytest.raises(ParameterError):
        verify_lemma4(4, 0, p=0.25)  # r = 0
    with pytest.raises(ParameterError):
        verify_lemma4(4, 5, p=0.25)  # r > m


def test_grid_cells_cover_expected_ranges():
    cells = grid_cells(p_values=(0.25, 0.11), m_max=6)
    assert (2, 1, 0.25) in cells
    assert (6, 6, 0.25) in cells
    assert all(m >= 4 for m, _, p in cells if p == 0.11)  # q(0.11) = 4


def test_grid_subsample_passes():
    for m, r, p in grid_cells(p_values=(0.11,), m_max=7):
        assert verify_lemma4(m, r, p=p).passed
