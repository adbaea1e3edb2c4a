import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arcmub import CycInt, field_new, root_of_unity, weil_sum, weil_survey
from arcmub.cyclotomic import cyclotomic_polynomial, euler_phi
from arcmub.errors import FieldMismatch


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(5) == (1, 1, 1, 1, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_roots_of_unity():
    assert root_of_unity(1, 0) == 1
    assert root_of_unity(3, 1).coeffs == (0, 1)
    assert root_of_unity(3, 2).coeffs == (-1, -1)  # zeta^2 = -1 - zeta
    assert root_of_unity(4, 2) == -1 + CycInt.zero(4)
    assert root_of_unity(4, 2).coeffs == (-1, 0)


def test_arithmetic_examples():
    z = root_of_unity(3, 1)
    z2 = root_of_unity(3, 2)
    one = CycInt.from_int(1, 3)
    assert (one + z) + (one + z2) == 1
    assert root_of_unity(4, 1).conj() == -root_of_unity(4, 1)
    x = CycInt(3, [5, -2])
    assert CycInt.zero(3) * x == CycInt.zero(3)


def test_magnitude_examples():
    a = CycInt(3, [1, 2])  # 1 + 2*zeta_3
    assert a.magnitude_sq() == 3
    assert CycInt.zero(5).magnitude_sq() == 0
    assert CycInt.from_int(2).magnitude_sq() == 4


def test_magnitude_absent_is_none():
    # a bare root of unity plus nothing has magnitude 1; zeta_5 + zeta_5^4 is
    # real but irrational, so |a|^2 is a non-rational cyclotomic integer
    a = root_of_unity(5, 1) + root_of_unity(5, 4)
    assert a.magnitude_sq() is None


def test_mixed_order_lifting():
    assert root_of_unity(2, 1) == root_of_unity(4, 2)
    assert root_of_unity(3, 1) * root_of_unity(2, 1) == root_of_unity(6, 5)


coeff_vectors = st.lists(st.integers(-30, 30), min_size=1, max_size=6)
orders = st.sampled_from([1, 2, 3, 4, 5, 7, 8, 9, 12])


@given(orders, coeff_vectors, coeff_vectors)
@settings(max_examples=200, deadline=None)
def test_conj_involution_and_multiplicativity(m, ca, cb):
    a = CycInt(m, ca)
    b = CycInt(m, cb)
    assert a.conj().conj() == a
    assert a.magnitude_sq() == a.conj().magnitude_sq()
    ma, mb, mab = a.magnitude_sq(), b.magnitude_sq(), (a * b).magnitude_sq()
    if ma is not None and mb is not None and mab is not None:
        assert mab == ma * mb


@given(orders, coeff_vectors)
@settings(max_examples=200, deadline=None)
def test_reduction_idempotent(m, c):
    a = CycInt(m, c)
    assert CycInt(m, a.coeffs).coeffs == a.coeffs


@given(orders, coeff_vectors, coeff_vectors, coeff_vectors)
@settings(max_examples=100, deadline=None)
def test_ring_laws(m, ca, cb, cc):
    a, b, c = CycInt(m, ca), CycInt(m, cb), CycInt(m, cc)
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert (a * b).conj() == a.conj() * b.conj()


def test_weil_sum_examples(F3, F2):
    w = weil_sum(F3, 1, 0)
    assert w.coeffs == (1, 2)  # 1 + 2*zeta_3 by direct 3-term summation
    assert w.magnitude_sq() == 3
    assert weil_sum(F2, 1, 0).is_zero()  # (+1) + (-1)
    for n in range(1, 3):
        assert weil_sum(F3, 0, n).is_zero()  # complete additive character sum


def test_weil_sum_field_mismatch(F3):
    with pytest.raises(FieldMismatch):
        weil_sum(F3, 5, 0)


def test_weil_survey_gf3(F3):
    sv = weil_survey(F3)
    assert sv.alarms == 0
    assert all(int(sv.table[m, n]) == 3 for m in (1, 2) for n in range(3))


def test_weil_survey_gf4(F4):
    sv = weil_survey(F4)
    row = sv.table[1, :]
    assert (row != 0).sum() == 1
    assert row.max() == 16  # 2^(2k) with k = 2


def test_weil_survey_gf5(F5):
    sv = weil_survey(F5)
    assert sv.odd_rows_uniform


def test_weil_survey_odd_fields_uniform():
    for p, n in [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3), (7, 2), (3, 4)]:
        F = field_new(p, n)
        sv = weil_survey(F)
        assert sv.alarms == 0
        assert sv.odd_rows_uniform, f"GF({F.order})"


def test_weil_survey_char2_pattern():
    for n in (1, 2, 3, 4):
        F = field_new(2, n)
        sv = weil_survey(F)
        assert sv.alarms == 0
        assert sv.char2_row_pattern() == [1] * (F.order - 1)
        for m in range(1, F.order):
            assert sv.row_nonzero_value(m) == F.order * F.order


def test_weil_survey_agrees_with_scalar_sums(F4, F9):
    for F in (F4, F9):
        sv = weil_survey(F)
        for m in range(F.order):
            for n in range(F.order):
                assert int(sv.table[m, n]) == weil_sum(F, m, n).magnitude_sq()


def test_serialization_roundtrip():
    a = CycInt(7, [3, -1, 0, 4, 0, 2])
    assert CycInt.parse(a.serialize()) == a
    assert a.serialize().startswith("zeta 7 :")


def test_phi():
    assert [euler_phi(m) for m in (1, 2, 3, 4, 5, 6, 12)] == [1, 1, 2, 2, 4, 2, 4]
