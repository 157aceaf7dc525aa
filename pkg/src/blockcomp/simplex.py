"""Exact phase-1 simplex over rationals.

Decides feasibility of {x >= 0 : A_eq x = b_eq, A_ub x <= b_ub} with
Fraction arithmetic throughout, so callers can certify strict
(in)equalities with zero tolerance.  Pivoting uses Bland's rule, which
cannot cycle; an iteration cap guards against implementation bugs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)
ONE = Fraction(1)

MAX_PIVOTS = 1_000_000


class PivotLimitExceeded(RuntimeError):
    pass


def solve_feasibility(
    n_vars: int,
    eq_rows: Sequence[tuple[Sequence[Fraction], Fraction]] = (),
    ub_rows: Sequence[tuple[Sequence[Fraction], Fraction]] = (),
) -> list[Fraction] | None:
    """Return a feasible nonnegative x, or None if the system is infeasible."""
    # normalized rows: coefficient list over [vars | slacks], rhs >= 0,
    # needs_artificial flag
    prepared: list[tuple[list[Fraction], Fraction, int, bool]] = []
    n_slack = len(ub_rows)
    slack_no = 0
    for coeffs, rhs in ub_rows:
        row = [Fraction(c) for c in coeffs]
        rhs = Fraction(rhs)
        slack = ONE
        if rhs < 0:
            row = [-c for c in row]
            rhs, slack = -rhs, -ONE
        prepared.append((row, rhs, slack_no, slack == -ONE))
        slack_no += 1
    for coeffs, rhs in eq_rows:
        row = [Fraction(c) for c in coeffs]
        rhs = Fraction(rhs)
        if rhs < 0:
            row = [-c for c in row]
            rhs = -rhs
        prepared.append((row, rhs, -1, True))

    n_art = sum(1 for _, _, _, need in prepared if need)
    width = n_vars + n_slack + n_art + 1
    rows: list[list[Fraction]] = []
    basis: list[int] = []
    obj = [ZERO] * width
    art_no = 0
    for row, rhs, slack_idx, needs_art in prepared:
        full = row + [ZERO] * (n_slack + n_art) + [rhs]
        if slack_idx >= 0:
            full[n_vars + slack_idx] = ONE if not needs_art else -ONE
        if needs_art:
            col = n_vars + n_slack + art_no
            art_no += 1
            full[col] = ONE
            basis.append(col)
            # phase-1 objective counts this artificial; fold its row in so
            # reduced costs over the basic columns are zero
            obj = [o - v for o, v in zip(obj, full)]
        else:
            basis.append(n_vars + slack_idx)
        rows.append(full)

    enter_limit = n_vars + n_slack  # artificials never re-enter
    for _ in range(MAX_PIVOTS):
        enter = -1
        for j in range(enter_limit):
            if obj[j] < 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best_ratio = ZERO
        for i, row in enumerate(rows):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if leave < 0 or ratio < best_ratio or (
                    ratio == best_ratio and basis[i] < basis[leave]
                ):
                    leave, best_ratio = i, ratio
        if leave < 0:
            raise RuntimeError("phase-1 objective unbounded; malformed system")
        _pivot(rows, obj, basis, leave, enter)
    else:
        raise PivotLimitExceeded(f"no convergence in {MAX_PIVOTS} pivots")

    if -obj[-1] != 0:  # residual artificial mass
        return None
    x = [ZERO] * n_vars
    for i, b in enumerate(basis):
        if b < n_vars:
            x[b] = rows[i][-1]
    return x


def _pivot(rows: list[list[Fraction]], obj: list[Fraction], basis: list[int],
           r: int, c: int) -> None:
    prow = rows[r]
    piv = prow[c]
    if piv != 1:
        prow = rows[r] = [v / piv for v in prow]
    for i, row in enumerate(rows):
        if i == r:
            continue
        factor = row[c]
        if factor:
            rows[i] = [v - factor * p for v, p in zip(row, prow)]
    factor = obj[c]
    if factor:
        obj[:] = [v - factor * p for v, p in zip(obj, prow)]
    basis[r] = c
