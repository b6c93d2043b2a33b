import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momlat.lattice import GridFunction, MomentumLattice, square_well_lattice
from momlat.operators import (
    OperatorMatrix,
    adjoint,
    apply,
    bracket,
    build_operator,
    continuum_scan,
    convergence_to_csv,
    interior_residual,
    reports_to_csv,
    unit_gaussian,
    verify_identity_suite,
    window_lattice,
)


def random_grid(lattice, seed):
    rng = np.random.default_rng(seed)
    n = lattice.n_points
    return GridFunction(lattice, rng.standard_normal(n) + 1j * rng.standard_normal(n))


class TestBuildOperator:
    def test_shift_up_matrix(self):
        lat = MomentumLattice(0.0, 1.0, 3)
        A = build_operator(lat, "A")
        assert np.array_equal(A.entries,
                              np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=complex))
        assert A.shift_radius == 1

    def test_momentum_diagonal(self):
        lat = MomentumLattice(0.0, 0.5, 2)
        P = build_operator(lat, "P")
        assert np.array_equal(P.entries, np.diag([0.0 + 0j, 0.5 + 0j]))
        assert P.shift_radius == 0

    def test_single_point_position_operator(self):
        lat = MomentumLattice(2.0, 1.0, 1)
        X = build_operator(lat, "X")
        assert np.array_equal(X.entries, np.zeros((1, 1)))

    def test_unknown_name(self):
        lat = MomentumLattice(0.0, 1.0, 4)
        with pytest.raises(ValueError):
            build_operator(lat, "Z")

    def test_declared_radii(self):
        lat = MomentumLattice(0.0, 0.5, 6)
        expected = {"A": 1, "Abar": 1, "D": 1, "Dbar": 1, "P": 0, "X": 1,
                    "Q": 1, "H": 2, "I": 0}
        for name, radius in expected.items():
            assert build_operator(lat, name).shift_radius == radius

    def test_band_violation_rejected(self):
        lat = MomentumLattice(0.0, 1.0, 3)
        dense = np.ones((3, 3), dtype=complex)
        with pytest.raises(ValueError):
            OperatorMatrix(lat, dense, 1)


class TestApply:
    def test_shift_up_truncates_last(self):
        lat = MomentumLattice(0.0, 1.0, 3)
        f = GridFunction(lat, [1, 2, 3])
        out = apply(build_operator(lat, "A"), f)
        assert np.array_equal(out.values, [2, 3, 0])

    def test_shift_down_truncates_first(self):
        lat = MomentumLattice(0.0, 1.0, 3)
        f = GridFunction(lat, [1, 2, 3])
        out = apply(build_operator(lat, "Abar"), f)
        assert np.array_equal(out.values, [0, 1, 2])

    def test_identity(self):
        lat = MomentumLattice(0.0, 1.0, 3)
        f = GridFunction(lat, [1j, 2, 3])
        out = apply(build_operator(lat, "I"), f)
        assert np.array_equal(out.values, f.values)

    def test_lattice_mismatch(self):
        lat1 = MomentumLattice(0.0, 1.0, 3)
        lat2 = MomentumLattice(1.0, 1.0, 3)
        with pytest.raises(ValueError):
            apply(build_operator(lat1, "A"), GridFunction(lat2, [1, 2, 3]))


class TestBracket:
    def test_self_commutator_vanishes(self):
        lat = MomentumLattice(0.0, 0.7, 5)
        P = build_operator(lat, "P")
        assert np.all(bracket("commutator", P, P).entries == 0)

    def test_shift_momentum_commutator_interior(self):
        lat = MomentumLattice(0.0, 0.7, 8)
        A = build_operator(lat, "A")
        P = build_operator(lat, "P")
        resid = bracket("commutator", A, P) - A.scaled(lat.a)
        assert interior_residual(resid, 1) == pytest.approx(0.0, abs=1e-15)

    def test_identity_anticommutator_doubles(self):
        lat = MomentumLattice(0.0, 1.0, 6)
        I = build_operator(lat, "I")
        Q = build_operator(lat, "Q")
        out = bracket("anticommutator", I, Q)
        assert np.allclose(out.entries, 2 * Q.entries, atol=1e-15)

    def test_radius_adds(self):
        lat = MomentumLattice(0.0, 1.0, 8)
        X = build_operator(lat, "X")
        H = build_operator(lat, "H")
        assert bracket("commutator", X, H).shift_radius == 3

    def test_bad_kind_and_mismatch(self):
        lat = MomentumLattice(0.0, 1.0, 4)
        A = build_operator(lat, "A")
        with pytest.raises(ValueError):
            bracket("nested", A, A)
        other = build_operator(MomentumLattice(0.0, 2.0, 4), "A")
        with pytest.raises(ValueError):
            bracket("commutator", A, other)


class TestInteriorResidual:
    def test_shift_momentum_identity_exact(self):
        lat = MomentumLattice(0.0, 0.5, 8)
        A = build_operator(lat, "A")
        P = build_operator(lat, "P")
        M = bracket("commutator", A, P) - A.scaled(lat.a)
        assert interior_residual(M, 1) == 0.0

    def test_shift_inverse_boundary_row(self):
        lat = MomentumLattice(0.0, 0.5, 8)
        A = build_operator(lat, "A")
        Abar = build_operator(lat, "Abar")
        I = build_operator(lat, "I")
        M = A @ Abar - I
        assert interior_residual(M, 1) == 0.0
        assert interior_residual(M, 0) == 1.0

    def test_zero_matrix(self):
        lat = MomentumLattice(0.0, 1.0, 4)
        Z = OperatorMatrix(lat, np.zeros((4, 4)), 0)
        assert interior_residual(Z, 0) == 0.0

    def test_margin_bounds(self):
        lat = MomentumLattice(0.0, 1.0, 4)
        Z = OperatorMatrix(lat, np.zeros((4, 4)), 0)
        with pytest.raises(ValueError):
            interior_residual(Z, 2)  # empty row range
        with pytest.raises(ValueError):
            interior_residual(Z, -1)


class TestIdentitySuite:
    def test_fine_lattice_below_1e12(self):
        reports = verify_identity_suite(MomentumLattice(0.0, 0.1, 64))
        assert len(reports) == 16
        for r in reports:
            assert r.max_interior_residual < 1e-12, r.identity_name

    def test_square_well_below_1e10(self):
        reports = verify_identity_suite(square_well_lattice(1.0, 16))
        for r in reports:
            assert r.max_interior_residual < 1e-10, r.identity_name

    def test_hermiticity_exact_zero(self):
        reports = {r.identity_name: r for r in
                   verify_identity_suite(MomentumLattice(-3.0, 0.37, 21))}
        assert reports["X_hermitian"].max_interior_residual == 0.0
        assert reports["P_hermitian"].max_interior_residual == 0.0
        assert reports["Abar_is_A_adjoint"].max_interior_residual == 0.0

    def test_small_lattice_rejected(self):
        with pytest.raises(ValueError):
            verify_identity_suite(MomentumLattice(0.0, 1.0, 7))

    @pytest.mark.parametrize("n,a_max", [(8, 2.5), (64, 0.31), (257, 0.078)])
    def test_envelope_lattices_below_1e12(self, n, a_max):
        # |p| <= 10 envelope, moderate stretches
        lat = MomentumLattice(-10.0, a_max, n)
        assert abs(lat.momentum_at(n - 1)) <= 10.0
        for r in verify_identity_suite(lat):
            assert r.max_interior_residual < 1e-12, r.identity_name

    @pytest.mark.xfail(
        strict=True,
        reason="double-precision floor: |p|<=10 with n=1024 forces a~0.02 and "
               "the degree-3 bracket residuals sit at eps/a^3 ~ 1e-11 > 1e-12",
    )
    def test_envelope_corner_n1024_literal_tolerance(self):
        lat = MomentumLattice(-10.0, 20.0 / 1023, 1024)
        for r in verify_identity_suite(lat):
            assert r.max_interior_residual < 1e-12, r.identity_name


class TestLeibnizRules:
    @given(st.integers(0, 2 ** 31 - 1), st.floats(0.05, 2.0))
    @settings(max_examples=25, deadline=None)
    def test_forward_rule(self, seed, a):
        lat = MomentumLattice(-1.0, a, 24)
        f = random_grid(lat, seed)
        g = random_grid(lat, seed + 1)
        D = build_operator(lat, "D")
        fg = GridFunction(lat, f.values * g.values)
        lhs = apply(D, fg).values
        shifted_f = np.append(f.values[1:], 0.0)
        rhs = apply(D, f).values * g.values + shifted_f * apply(D, g).values
        assert np.max(np.abs((lhs - rhs)[:-1])) < 1e-12

    @given(st.integers(0, 2 ** 31 - 1), st.floats(0.05, 2.0))
    @settings(max_examples=25, deadline=None)
    def test_backward_rule(self, seed, a):
        lat = MomentumLattice(-1.0, a, 24)
        f = random_grid(lat, seed)
        g = random_grid(lat, seed + 1)
        Dbar = build_operator(lat, "Dbar")
        fg = GridFunction(lat, f.values * g.values)
        lhs = apply(Dbar, fg).values
        shifted_f = np.insert(f.values[:-1], 0, 0.0)
        rhs = apply(Dbar, f).values * g.values + shifted_f * apply(Dbar, g).values
        assert np.max(np.abs((lhs - rhs)[1:])) < 1e-12


class TestBandInvariant:
    @given(st.integers(0, 2 ** 31 - 1))
    @settings(max_examples=20)
    def test_radius_survives_arithmetic(self, seed):
        rng = np.random.default_rng(seed)
        lat = MomentumLattice(-2.0, 0.4, 12)
        names = ["A", "Abar", "D", "Dbar", "P", "X", "Q", "I"]
        ops = [build_operator(lat, rng.choice(names)) for _ in range(3)]
        combo = (ops[0] @ ops[1]) + ops[2].scaled(rng.standard_normal())
        # construction re-checks the band; verify the claim directly too
        n = lat.n_points
        idx = np.arange(n)
        outside = np.abs(idx[:, None] - idx[None, :]) > combo.shift_radius
        if combo.shift_radius < n - 1:
            assert np.all(combo.entries[outside] == 0)


class TestContinuumScan:
    def test_gaussian_second_order(self):
        table = continuum_scan((0.1, 0.05, 0.025, 0.0125))
        assert table.slope == pytest.approx(2.0, abs=0.1)
        assert table.residuals[0] / table.residuals[1] == pytest.approx(4.0, abs=0.2)

    def test_residual_matches_second_derivative_scale(self):
        # (([X,P]+i)f) = (ia/2) Q f ~ -(i a^2/2) f'' on smooth f; the Gaussian
        # has max|f''| = 1 at the origin
        table = continuum_scan((0.1, 0.05, 0.025))
        for a, r in zip(table.spacings, table.residuals):
            assert r == pytest.approx(a * a / 2.0, rel=0.15)

    def test_constant_function_annihilated(self):
        table = continuum_scan((0.5, 0.25, 0.125),
                               test_function=lambda p: np.ones_like(p))
        assert all(r < 1e-13 for r in table.residuals)

    def test_validation(self):
        with pytest.raises(ValueError):
            continuum_scan((0.1, 0.05))
        with pytest.raises(ValueError):
            continuum_scan((0.05, 0.1, 0.2))
        with pytest.raises(ValueError):
            continuum_scan((0.1, -0.05, 0.025))

    def test_window_lattice_covers(self):
        lat = window_lattice(0.1, (-8.0, 8.0))
        assert lat.n_points == 161
        assert lat.momentum_at(0) == -8.0
        assert lat.momentum_at(160) == pytest.approx(8.0)


class TestSerialization:
    def test_reports_csv_schema(self):
        reports = verify_identity_suite(MomentumLattice(0.0, 0.1, 8))
        text = reports_to_csv(reports)
        lines = text.strip().splitlines()
        assert lines[0] == "identity,margin,residual"
        assert len(lines) == 1 + len(reports)
        name, margin, residual = lines[1].split(",")
        assert name == "A_Abar_is_identity"
        int(margin), float(residual)

    def test_convergence_csv_trailing_slope(self):
        table = continuum_scan((0.4, 0.2, 0.1), window=(-6.0, 6.0))
        lines = convergence_to_csv(table).strip().splitlines()
        assert lines[0] == "a,r,log_a,log_r"
        assert lines[-1].startswith("slope,")
        assert lines[-1].endswith(",,")

    def test_gaussian_shape(self):
        p = np.linspace(-2, 2, 5)
        vals = unit_gaussian(p)
        assert vals[2] == pytest.approx(1.0)
        assert vals[0] == pytest.approx(math.exp(-2.0))


class TestAdjoint:
    def test_double_adjoint(self):
        lat = MomentumLattice(0.0, 0.3, 9)
        X = build_operator(lat, "X")
        assert np.array_equal(adjoint(adjoint(X)).entries, X.entries)


class TestConcurrentUse:
    def test_suite_runs_identically_across_threads(self):
        # pure functions over immutable inputs: concurrent runs must agree
        from concurrent.futures import ThreadPoolExecutor

        lattices = [MomentumLattice(0.0, 0.1, 32), square_well_lattice(1.0, 12),
                    MomentumLattice(-2.0, 0.5, 16), MomentumLattice(0.0, 0.1, 32)]
        with ThreadPoolExecutor(max_workers=4) as pool:
            results = list(pool.map(verify_identity_suite, lattices))
        assert results[0] == results[3]
        for reports in results:
            assert all(r.max_interior_residual < 1e-10 for r in reports)
