from fractions import Fraction

import pytest

from loopsv import (
    GroupMismatchError,
    GroupData,
    InvalidKeyError,
    LoopAlgebra,
    Scalar,
    Window,
    antisymmetry_witnesses,
    jacobi_witnesses,
)

HALF = Scalar(Fraction(1, 2))


@pytest.fixture(scope="module")
def m(alg):
    def make(kind, gamma, loop, coeff=1):
        return alg.monomial(alg.key(kind, gamma, loop), coeff)

    return make


def test_key_membership_enforced(alg):
    with pytest.raises(InvalidKeyError):
        alg.key("L", HALF, 0)
    with pytest.raises(InvalidKeyError):
        alg.key("M", HALF, 0)
    with pytest.raises(InvalidKeyError):
        alg.key("Y", 1, 0)
    with pytest.raises(InvalidKeyError):
        alg.key("X", 1, 0)


def test_bracket_examples(alg, m):
    assert alg.bracket(m("L", 1, 0), m("L", 2, 3)) == m("L", 3, 3)
    assert alg.bracket(m("L", 1, 0), m("Y", HALF, 2)).is_zero()
    assert alg.bracket(m("Y", HALF, 0), m("Y", Fraction(3, 2), 1)) == m("M", 2, 1)
    assert alg.bracket(m("L", 2, 1), m("M", 3, -1)) == m("M", 5, 0, 3)


def test_bracket_dead_sectors(alg, m):
    assert alg.bracket(m("M", 1, 0), m("M", 2, 5)).is_zero()
    assert alg.bracket(m("M", 1, 0), m("Y", HALF, 0)).is_zero()
    assert alg.bracket(m("M", 0, 3), m("L", 2, 0)).is_zero()


def test_bracket_bilinear(alg, m):
    x = 2 * m("L", 1, 0) + m("Y", HALF, 1)
    y = m("L", -1, 0) - 3 * m("M", 2, 0)
    lhs = alg.bracket(x, y)
    expected = (
        2 * alg.bracket(m("L", 1, 0), m("L", -1, 0))
        - 6 * alg.bracket(m("L", 1, 0), m("M", 2, 0))
        + alg.bracket(m("Y", HALF, 1), m("L", -1, 0))
        - 3 * alg.bracket(m("Y", HALF, 1), m("M", 2, 0))
    )
    assert lhs == expected


def test_bracket_group_mismatch(alg, m):
    other = LoopAlgebra(GroupData.default())
    with pytest.raises(GroupMismatchError):
        alg.bracket(m("L", 1, 0), other.monomial(other.key("L", 1, 0)))


def test_grade(alg, m):
    y = m("Y", Fraction(3, 2), 5)
    graded = alg.grade(y)
    assert set(graded) == {Scalar(Fraction(3, 2))}
    assert graded[Scalar(Fraction(3, 2))] == y
    assert alg.grade(m("L", 0, 7)) == {Scalar(0): m("L", 0, 7)}
    mixed = alg.grade(m("L", 1, 0) + m("M", 2, 3))
    assert mixed == {Scalar(1): m("L", 1, 0), Scalar(2): m("M", 2, 3)}
    # grading eigenvalue property
    for gamma, part in mixed.items():
        assert alg.bracket(m("L", 0, 0), part) == gamma * part


def test_is_central(alg, m):
    assert alg.is_central(m("M", 0, 7))
    assert not alg.is_central(m("L", 0, 0))
    assert alg.is_central(alg.zero())
    assert not alg.is_central(m("M", 0, 1) + m("M", 1, 0))


def test_in_maximal_ideal(alg, m):
    assert alg.in_maximal_ideal(m("M", 1, 2) + m("Y", HALF, 0))
    assert not alg.in_maximal_ideal(m("L", 0, 0))
    assert alg.in_maximal_ideal(alg.zero())


def test_jacobi_examples(alg, m):
    def defect(x, y, z):
        return (
            alg.bracket(x, alg.bracket(y, z))
            + alg.bracket(y, alg.bracket(z, x))
            + alg.bracket(z, alg.bracket(x, y))
        )

    assert defect(m("L", 1, 0), m("L", 2, 0), m("L", -3, 1)).is_zero()
    assert defect(m("L", 1, 0), m("Y", HALF, 0), m("Y", -HALF, 0)).is_zero()
    assert defect(m("M", 1, 0), m("M", 2, 0), m("Y", HALF, 0)).is_zero()


def test_window_enumeration(alg, window):
    gammas, cosets = alg.window_gammas(window)
    assert gammas == [Scalar(v) for v in range(-3, 4)]
    assert cosets == [Scalar(Fraction(n, 2)) for n in (-5, -3, -1, 1, 3, 5)]
    keys = alg.window_keys(window)
    assert len(keys) == 2 * 7 * 7 + 6 * 7
    assert len(set(keys)) == len(keys)


def test_small_window_axioms(alg, small_window):
    assert antisymmetry_witnesses(alg, small_window) == []
    bad, count = jacobi_witnesses(alg, small_window)
    assert bad == []
    n = len(alg.window_keys(small_window))
    assert count == n * (n + 1) * (n + 2) // 6


def test_grading_additivity(alg, small_window):
    keys = alg.window_keys(small_window)
    for k1 in keys[::7]:
        for k2 in keys[::11]:
            t = alg.structure(k1, k2)
            if t is not None:
                assert t[0].gamma == k1.gamma + k2.gamma
                assert t[0].loop == k1.loop + k2.loop


def test_center_property(alg, small_window, m):
    for key in alg.window_keys(small_window):
        for i in range(-2, 3):
            assert alg.bracket(alg.monomial(key), m("M", 0, i)).is_zero()


def test_element_str(alg, m):
    assert str(alg.zero()) == "0"
    assert str(m("L", 3, 3)) == "L(3,3)"
    assert str(-m("L", -2, 3)) == "-L(-2,3)"
    assert str(3 * m("M", 5, 0)) == "3*M(5,0)"
    x = m("L", 1, -2) + m("M", 0, 3, Fraction(3, 2))
    assert str(x) == "L(1,-2) + 3/2*M(0,3)"
    y = m("Y", HALF, 0, Fraction(-1, 2)) + m("L", 0, 0)
    assert str(y) == "L(0,0) - 1/2*Y(1/2,0)"


def test_element_str_composite_coefficient():
    g = GroupData([Scalar(1)], Scalar(Fraction(1, 2)), field_d=2)
    a = LoopAlgebra(g)
    x = a.monomial(a.key("L", 0, 0), Scalar(1, 1, 2))
    assert str(x) == "(1+sqrt2)*L(0,0)"
    assert str(a.monomial(a.key("L", 0, 0), Scalar(0, 1, 2))) == "sqrt2*L(0,0)"
