"""Exact epsilon-approximate degree and dual witnesses.

The primal side asks for coefficients alpha_w, |w| <= D, with
|sum_w alpha_w chi_w(x) - f(x)| <= epsilon everywhere.  When that system
is infeasible at D = d-1, linear-programming duality yields a signed
measure q on the cube with

    (a) q.f = 1   (b) ||q||_1 < 1/eps   (c) |q^_w| <= 1/(2^n eps)
    (d) q^_w = 0 for |w| < d,

which this module extracts and verifies in exact rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .boolcube import BooleanFunction, FourierSpectrum, spectrum_of_values, symmetric_profile
from .errors import EpsilonOutOfRange, WitnessNotApplicable
from .simplex import solve_feasibility

LP_ARITY_CAP = 12  # constraint count is 2*2^n; exact pivoting beyond this is impractical


def _check_epsilon(epsilon: Fraction) -> Fraction:
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < Fraction(1, 2):
        raise EpsilonOutOfRange(f"epsilon must lie in (0, 1/2), got {epsilon}")
    return epsilon


def _check_arity(f: BooleanFunction) -> None:
    if f.n > LP_ARITY_CAP:
        raise ValueError(f"LP operations support n <= {LP_ARITY_CAP}, got {f.n}")


def _chi(w: int, x: int) -> int:
    return -1 if (w & x).bit_count() & 1 else 1


def monomials_up_to(n: int, degree: int) -> list[int]:
    return [w for w in range(1 << n) if w.bit_count() <= degree]


@dataclass(frozen=True)
class ApproxDegreeResult:
    """Minimal degree with realizing coefficients at that degree."""

    epsilon: Fraction
    degree: int
    coefficients: dict[int, Fraction]


@dataclass(frozen=True)
class WitnessReport:
    """Exact pass/fail of the four witness properties, with the raw values."""

    q_dot_f: Fraction
    l1: Fraction
    l1_bound: Fraction
    l1_at_bound: bool
    max_abs_coeff: Fraction
    coeff_bound: Fraction
    min_support_degree: int | None
    check_a: bool
    check_b: bool
    check_c: bool
    check_d: bool

    @property
    def all_pass(self) -> bool:
        return self.check_a and self.check_b and self.check_c and self.check_d


@dataclass(frozen=True)
class DualWitness:
    """Signed measure certifying that deg~_eps(f) >= degree."""

    n: int
    epsilon: Fraction
    degree: int
    q: dict[int, Fraction]
    spectrum: FourierSpectrum
    report: WitnessReport

    def l1(self) -> Fraction:
        return sum((abs(v) for v in self.q.values()), Fraction(0))

    def dot(self, f: BooleanFunction) -> Fraction:
        return sum((v for x, v in self.q.items() if f.table[x]), Fraction(0))


def lp_feasible(f: BooleanFunction, epsilon: Fraction, degree_cap: int
                ) -> dict[int, Fraction] | None:
    """Coefficients alpha_w realizing an epsilon-approximation with support
    |w| <= degree_cap, or None if the system is infeasible.

    Free coefficients are split alpha_w = u_w - v_w with u, v >= 0 before
    the phase-1 solve.
    """
    epsilon = _check_epsilon(epsilon)
    _check_arity(f)
    if not 0 <= degree_cap <= f.n:
        raise ValueError(f"degree cap must lie in [0, {f.n}]")
    monos = monomials_up_to(f.n, degree_cap)
    m = len(monos)
    ub_rows = []
    for x in range(1 << f.n):
        signs = [_chi(w, x) for w in monos]
        row_up = [Fraction(s) for s in signs] + [Fraction(-s) for s in signs]
        row_lo = [-c for c in row_up]
        fx = f.table[x]
        ub_rows.append((row_up, fx + epsilon))
        ub_rows.append((row_lo, epsilon - fx))
    solution = solve_feasibility(2 * m, ub_rows=ub_rows)
    if solution is None:
        return None
    return {w: solution[t] - solution[m + t] for t, w in enumerate(monos)}


_degree_cache: dict[tuple, ApproxDegreeResult] = {}


def approx_degree(f: BooleanFunction, epsilon: Fraction) -> ApproxDegreeResult:
    """Smallest D with lp_feasible nonempty, by linear sweep D = 0, 1, ..."""
    epsilon = _check_epsilon(epsilon)
    key = (f.table, epsilon)
    cached = _degree_cache.get(key)
    if cached is not None:
        return cached
    for degree in range(f.n + 1):
        coeffs = lp_feasible(f, epsilon, degree)
        if coeffs is not None:
            result = ApproxDegreeResult(epsilon, degree, coeffs)
            _degree_cache[key] = result
            return result
    raise RuntimeError("degree n is always feasible; sweep must terminate")


def dual_system_witness(f: BooleanFunction, epsilon: Fraction, degree_cap: int
                        ) -> dict[int, Fraction] | None:
    """Solve the alternative (Farkas) system against support |w| <= degree_cap:
    an unnormalized q orthogonal to all chi_w, |w| <= degree_cap, with
    q.f >= 1 + eps*||q||_1.  Returns None when no certificate exists, i.e.
    exactly when the primal system at the same cap is feasible.
    """
    epsilon = _check_epsilon(epsilon)
    _check_arity(f)
    size = 1 << f.n
    monos = monomials_up_to(f.n, degree_cap)
    eq_rows = []
    for w in monos:
        signs = [Fraction(_chi(w, x)) for x in range(size)]
        eq_rows.append((signs + [-s for s in signs], Fraction(0)))
    # q = q_minus - q_plus; the certificate row scales the strict Farkas
    # inequality to <= -1
    row = [f.table[x] + epsilon for x in range(size)]
    row += [epsilon - f.table[x] for x in range(size)]
    ub_rows = [(row, Fraction(-1))]
    solution = solve_feasibility(2 * size, eq_rows=eq_rows, ub_rows=ub_rows)
    if solution is None:
        return None
    q = {}
    for x in range(size):
        v = solution[size + x] - solution[x]
        if v:
            q[x] = v
    return q


def dual_witness(f: BooleanFunction, epsilon: Fraction) -> DualWitness:
    """Extract, normalize (q.f = 1) and verify the dual witness for f."""
    epsilon = _check_epsilon(epsilon)
    degree = approx_degree(f, epsilon).degree
    if degree == 0:
        raise WitnessNotApplicable(
            f"f is epsilon-approximable by a constant (degree 0 at eps={epsilon})")
    raw = dual_system_witness(f, epsilon, degree - 1)
    if raw is None:
        raise RuntimeError("primal infeasible at degree-1 but no Farkas certificate")
    scale = sum((v for x, v in raw.items() if f.table[x]), Fraction(0))
    if scale <= 0:
        # cannot occur: the certificate row forces q.f >= 1 + eps*||q||_1
        raise RuntimeError(f"degenerate certificate with q.f = {scale}")
    q = {x: v / scale for x, v in raw.items()}
    spectrum = spectrum_of_values(f.n, q)
    witness = DualWitness(f.n, epsilon, degree, q, spectrum, None)  # type: ignore[arg-type]
    report = verify_witness(witness, f)
    witness = DualWitness(f.n, epsilon, degree, q, spectrum, report)
    if not report.all_pass:
        raise RuntimeError(f"extracted witness failed verification: {report}")
    return witness


def verify_witness(witness: DualWitness, f: BooleanFunction) -> WitnessReport:
    """Re-check the four witness properties by direct summation, exactly."""
    if witness.n != f.n:
        raise ValueError(f"arity mismatch: witness n={witness.n}, f n={f.n}")
    q_dot_f = witness.dot(f)
    l1 = witness.l1()
    l1_bound = 1 / witness.epsilon
    coeffs = witness.spectrum.coeffs
    max_abs = max((abs(c) for c in coeffs.values()), default=Fraction(0))
    coeff_bound = Fraction(1, 1 << witness.n) / witness.epsilon
    min_deg = witness.spectrum.min_degree()
    return WitnessReport(
        q_dot_f=q_dot_f,
        l1=l1,
        l1_bound=l1_bound,
        l1_at_bound=l1 == l1_bound,
        max_abs_coeff=max_abs,
        coeff_bound=coeff_bound,
        min_support_degree=min_deg,
        check_a=q_dot_f == 1,
        check_b=l1 < l1_bound,
        check_c=max_abs <= coeff_bound,
        check_d=min_deg is None or min_deg >= witness.degree,
    )


def paturi_check(f: BooleanFunction, epsilon: Fraction) -> float:
    """Ratio deg~_eps(f) / sqrt(n*(ell0+ell1)) for symmetric f."""
    profile = symmetric_profile(f)
    flips = profile.ell0 + profile.ell1
    if flips == 0:
        raise ValueError("degenerate profile: ell0 + ell1 = 0")
    degree = approx_degree(f, epsilon).degree
    return degree / math.sqrt(f.n * flips)
