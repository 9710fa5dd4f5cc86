"""Exact nullspaces and the two shear constraint systems."""

from fractions import Fraction

from loopsv import Scalar, Window, g_constraint_space, nullspace, shear_constraint_space

ZERO = Scalar(0)
ONE = Scalar(1)


def s(x):
    return Scalar.of(x)


def dot(row, vec):
    out = ZERO
    for a, b in zip(row, vec):
        out = out + a * b
    return out


class TestNullspace:
    def test_single_relation(self):
        rows = [[s(1), s(2), s(3)]]
        basis = nullspace(rows, 3)
        assert len(basis) == 2
        for vec in basis:
            assert dot(rows[0], vec) == ZERO

    def test_full_rank_system(self):
        rows = [[ONE, ZERO], [s(3), ONE]]
        assert nullspace(rows, 2) == []

    def test_zero_matrix(self):
        basis = nullspace([[ZERO, ZERO]], 2)
        assert len(basis) == 2

    def test_rational_elimination(self):
        rows = [
            [s(Fraction(1, 2)), s(1), s(0)],
            [s(1), s(2), s(1)],
        ]
        basis = nullspace(rows, 3)
        assert len(basis) == 1
        for row in rows:
            assert dot(row, basis[0]) == ZERO

    def test_root_field_elimination(self):
        r2 = Scalar(0, 1, 2)
        rows = [[r2, s(2)]]
        basis = nullspace(rows, 2)
        assert len(basis) == 1
        assert dot(rows[0], basis[0]) == ZERO


def fit_affine(values: dict, gammas):
    v = values.get(ZERO, ZERO)
    pivot = next(g for g in gammas if g)
    u = (values.get(pivot, ZERO) - v) / pivot
    return u, v


class TestGSpace:
    def test_dimension_and_affine_shape(self, group, window):
        basis, gammas = g_constraint_space(group, window)
        assert len(basis) == 2
        for values in basis:
            u, v = fit_affine(values, gammas)
            for g in gammas:
                assert values.get(g, ZERO) == u * g + v

    def test_span_contains_constant_and_identity(self, group, window):
        basis, gammas = g_constraint_space(group, window)
        fits = [fit_affine(values, gammas) for values in basis]
        # (u, v) pairs of the basis span the plane, so both axis directions
        # are reachable: u1 v2 - u2 v1 is the determinant of the fit matrix
        (u1, v1), (u2, v2) = fits
        assert u1 * v2 - u2 * v1

    def test_rank_two_group(self, root2_group):
        basis, gammas = g_constraint_space(root2_group, Window(2, 1))
        assert len(basis) == 2
        for values in basis:
            u, v = fit_affine(values, gammas)
            for g in gammas:
                assert values.get(g, ZERO) == u * g + v


class TestShearSpace:
    def test_solutions_are_affine_and_loop_independent(self, group, window):
        basis, keys = shear_constraint_space(group, window)
        assert len(basis) == 2
        gammas = sorted({g for g, _ in keys}, key=lambda x: (abs(x), x.sign()))
        loops = sorted({i for _, i in keys})
        for values in basis:
            per_gamma = {}
            for g in gammas:
                col = {values.get((g, i), ZERO) for i in loops}
                assert len(col) == 1  # no loop dependence survives
                per_gamma[g] = col.pop()
            u, v = fit_affine(per_gamma, gammas)
            for g in gammas:
                assert per_gamma[g] == u * g + v

    def test_smaller_window_same_picture(self, group, small_window):
        basis, _ = shear_constraint_space(group, small_window)
        assert len(basis) == 2
