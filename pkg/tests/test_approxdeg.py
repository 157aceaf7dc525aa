from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blockcomp.approxdeg import (DualWitness, approx_degree, dual_system_witness,
                                 dual_witness, lp_feasible, monomials_up_to,
                                 paturi_check, verify_witness)
from blockcomp.boolcube import (BooleanFunction, and_function, constant_function,
                                or_function, parity_function, projection,
                                spectrum_of_values)
from blockcomp.errors import EpsilonOutOfRange, WitnessNotApplicable
from blockcomp.simplex import solve_feasibility

THIRD = Fraction(1, 3)


class TestSimplex:
    def test_feasible_equality(self):
        # x1 + x2 = 2, x1 - x2 <= 0
        x = solve_feasibility(
            2,
            eq_rows=[([Fraction(1), Fraction(1)], Fraction(2))],
            ub_rows=[([Fraction(1), Fraction(-1)], Fraction(0))],
        )
        assert x is not None
        assert x[0] + x[1] == 2 and x[0] <= x[1]

    def test_infeasible(self):
        # x1 <= 1 and x1 = 3
        x = solve_feasibility(
            1,
            eq_rows=[([Fraction(1)], Fraction(3))],
            ub_rows=[([Fraction(1)], Fraction(1))],
        )
        assert x is None

    def test_negative_rhs_normalization(self):
        # -x1 <= -2 means x1 >= 2
        x = solve_feasibility(1, ub_rows=[([Fraction(-1)], Fraction(-2))])
        assert x is not None and x[0] >= 2

    def test_trivial_empty(self):
        assert solve_feasibility(3) == [0, 0, 0]


class TestLpFeasible:
    def test_constant_degree_zero(self):
        coeffs = lp_feasible(constant_function(2, 1), THIRD, 0)
        assert coeffs is not None
        assert abs(coeffs.get(0, Fraction(0)) - 1) <= THIRD

    def test_projection_degree_zero_infeasible(self):
        assert lp_feasible(projection(2, 1), THIRD, 0) is None

    def test_parity_low_degree_infeasible(self):
        assert lp_feasible(parity_function(4), THIRD, 3) is None

    def test_epsilon_validation(self):
        with pytest.raises(EpsilonOutOfRange):
            lp_feasible(or_function(2), Fraction(1, 2), 1)
        with pytest.raises(EpsilonOutOfRange):
            lp_feasible(or_function(2), Fraction(0), 1)

    def test_degree_cap_validation(self):
        with pytest.raises(ValueError):
            lp_feasible(or_function(2), THIRD, 3)

    def test_coefficients_satisfy_bound_exactly(self):
        f = or_function(3)
        res = approx_degree(f, THIRD)
        for x in range(8):
            val = sum(
                (c if (w & x).bit_count() % 2 == 0 else -c
                 for w, c in res.coefficients.items()),
                Fraction(0),
            )
            assert abs(val - f.table[x]) <= THIRD


class TestApproxDegree:
    def test_constants(self):
        assert approx_degree(constant_function(3, 0), THIRD).degree == 0
        assert approx_degree(constant_function(3, 1), THIRD).degree == 0

    def test_projection(self):
        assert approx_degree(projection(3, 2), THIRD).degree == 1

    def test_parity_full_degree(self):
        for n in range(1, 6):
            assert approx_degree(parity_function(n), THIRD).degree == n

    def test_or4_against_sweep_oracle(self):
        """Cross-check the reported minimum against a direct feasibility sweep."""
        f = or_function(4)
        res = approx_degree(f, THIRD)
        statuses = [lp_feasible(f, THIRD, d) is not None for d in range(5)]
        assert statuses == [d >= res.degree for d in range(5)]

    def test_monotone_in_epsilon(self):
        f = or_function(4)
        grid = [Fraction(1, 6), Fraction(1, 4), THIRD, Fraction(2, 5)]
        degrees = [approx_degree(f, e).degree for e in grid]
        assert degrees == sorted(degrees, reverse=True)

    def test_minimality(self):
        f = and_function(3)
        res = approx_degree(f, THIRD)
        assert all(w.bit_count() <= res.degree for w in res.coefficients)
        if res.degree > 0:
            assert lp_feasible(f, THIRD, res.degree - 1) is None


class TestFarkasDichotomy:
    @given(st.integers(0, 15), st.integers(0, 2))
    @settings(max_examples=48, deadline=None)
    def test_exactly_one_side_wins(self, table_bits, degree_cap):
        """At every degree level either the primal approximation exists or
        the alternative system produces a certificate, never both."""
        f = BooleanFunction(2, tuple((table_bits >> i) & 1 for i in range(4)))
        primal = lp_feasible(f, THIRD, degree_cap)
        alt = dual_system_witness(f, THIRD, degree_cap)
        assert (primal is None) != (alt is None)
        if alt is not None:
            l1 = sum(abs(v) for v in alt.values())
            dot = sum(v for x, v in alt.items() if f.table[x])
            assert dot >= 1 + THIRD * l1
            sp = spectrum_of_values(2, alt)
            for w in monomials_up_to(2, degree_cap):
                assert sp.coefficient(w) == 0


class TestDualWitness:
    def test_single_variable(self):
        w = dual_witness(projection(1, 1), THIRD)
        assert w.degree == 1
        assert w.q == {0: Fraction(-1), 1: Fraction(1)}

    def test_or3_properties(self):
        # a + (x1+x2+x3)/3 with a = 1/3 is a 1/3-approximation, so the
        # witness certifies exactly degree 1
        f = or_function(3)
        w = dual_witness(f, THIRD)
        r = w.report
        assert w.degree == approx_degree(f, THIRD).degree == 1
        assert r.all_pass
        assert r.q_dot_f == 1
        assert r.l1 < 3
        assert r.max_abs_coeff <= Fraction(3, 8)
        assert r.min_support_degree >= 1

    def test_or4_properties(self):
        f = or_function(4)
        w = dual_witness(f, THIRD)
        r = w.report
        assert w.degree == 2
        assert r.all_pass
        assert r.l1 < 3
        assert r.max_abs_coeff <= Fraction(3, 16)
        assert r.min_support_degree >= 2

    def test_constant_raises(self):
        with pytest.raises(WitnessNotApplicable):
            dual_witness(constant_function(2, 0), THIRD)
        with pytest.raises(WitnessNotApplicable):
            dual_witness(constant_function(2, 1), THIRD)

    def test_scaled_witness_fails_normalization(self):
        f = parity_function(2)
        w = dual_witness(f, THIRD)
        doubled = {x: 2 * v for x, v in w.q.items()}
        bad = DualWitness(w.n, w.epsilon, w.degree, doubled,
                          spectrum_of_values(w.n, doubled), w.report)
        r = verify_witness(bad, f)
        assert not r.check_a
        assert r.q_dot_f == 2

    def test_perturbed_witness_fails_support(self):
        f = parity_function(2)
        w = dual_witness(f, THIRD)
        shifted = dict(w.q)
        shifted[0] = shifted.get(0, Fraction(0)) + Fraction(1, 100)
        bad = DualWitness(w.n, w.epsilon, w.degree, shifted,
                          spectrum_of_values(w.n, shifted), w.report)
        r = verify_witness(bad, f)
        assert not r.check_d

    def test_arity_mismatch(self):
        w = dual_witness(parity_function(2), THIRD)
        with pytest.raises(ValueError):
            verify_witness(w, parity_function(3))

    @given(st.integers(2, 3), st.integers(0, 255))
    @settings(max_examples=30, deadline=None)
    def test_random_small_functions(self, n, bits):
        table = tuple((bits >> i) & 1 for i in range(1 << n))
        f = BooleanFunction(n, table)
        try:
            w = dual_witness(f, THIRD)
        except WitnessNotApplicable:
            assert lp_feasible(f, THIRD, 0) is not None
            return
        assert w.report.all_pass
        assert w.dot(f) == 1


class TestPaturi:
    def test_and2(self):
        # profile flips once near the top: ell0+ell1 = 1
        ratio = paturi_check(and_function(2), THIRD)
        deg = approx_degree(and_function(2), THIRD).degree
        assert ratio == pytest.approx(deg / 2**0.5)

    def test_or4(self):
        ratio = paturi_check(or_function(4), THIRD)
        deg = approx_degree(or_function(4), THIRD).degree
        assert ratio == pytest.approx(deg / 2.0)

    def test_constant_rejected(self):
        with pytest.raises(ValueError):
            paturi_check(constant_function(3, 0), THIRD)

    def test_non_symmetric_rejected(self):
        from blockcomp.errors import NotSymmetric

        with pytest.raises(NotSymmetric):
            paturi_check(projection(2, 1), THIRD)
