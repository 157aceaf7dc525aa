"""Spectral discrepancy certificates for two-party inner functions.

A certificate is a pair of b-distributions (mu0, mu1) on a rectangle
I_A x I_B, with mu_b supported where g = b.  Scaling the operator norms
of their average and half-difference by sqrt(|I_A|*|I_B|) yields the
certificate parameter rho = max(diff_scaled, sum_scaled - 1, 0): an
upper-bound witness for the (uncomputable) minimum over all pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .boolcube import InnerFunction, weight_subsets
from .errors import SizeGuardExceeded

POWER_ITERATION_CAP = 100_000
RAYLEIGH_DRIFT_TOL = 1e-12
DENSE_FALLBACK_DIM = 512


class NormNotConverged(RuntimeError):
    def __init__(self, last_estimate: float, residual: float):
        super().__init__(
            f"power iteration did not converge; last estimate {last_estimate:.6e}, "
            f"residual {residual:.3e}")
        self.last_estimate = last_estimate
        self.residual = residual


def operator_norm(matrix: np.ndarray) -> float:
    """Largest singular value, to absolute accuracy ~1e-10.

    Power iteration on the Gram matrix with an all-ones start.  That start
    is provably safe only for sign-definite matrices (the top singular
    vector can then be taken entrywise non-negative, so it overlaps the
    ones vector); for mixed-sign matrices the ones vector can be exactly
    orthogonal to, or even annihilated by, the top singular space, so
    those go straight to a dense symmetric eigensolve.  Non-convergence
    past the cap falls back to the eigensolve too, when the Gram dimension
    allows it.
    """
    m = np.asarray(matrix, dtype=np.float64)
    if m.size == 0:
        return 0.0
    if not np.isfinite(m).all():
        raise ValueError("matrix entries must be finite")
    gram = m.T @ m if m.shape[1] <= m.shape[0] else m @ m.T
    dim = gram.shape[0]
    scale = np.abs(gram).max()
    if scale == 0.0:
        return 0.0
    sign_definite = bool((m >= 0).all() or (m <= 0).all())

    rayleigh = 0.0
    residual = math.inf
    if sign_definite:
        v = np.ones(dim) / math.sqrt(dim)
        for _ in range(POWER_ITERATION_CAP):
            w = gram @ v
            norm = np.linalg.norm(w)
            if norm <= scale * 1e-14:
                break
            v = w / norm
            new_rayleigh = float(v @ (gram @ v))
            if abs(new_rayleigh - rayleigh) <= RAYLEIGH_DRIFT_TOL * max(1.0, new_rayleigh):
                rayleigh = new_rayleigh
                break
            rayleigh = new_rayleigh
        residual = float(np.linalg.norm(gram @ v - rayleigh * v))
        if residual <= 1e-13 * max(1.0, scale):
            return math.sqrt(max(rayleigh, 0.0))
    if dim <= DENSE_FALLBACK_DIM:
        top = float(np.linalg.eigvalsh(gram)[-1])
        return math.sqrt(max(top, 0.0))
    raise NormNotConverged(math.sqrt(max(rayleigh, 0.0)), residual)


# ---------------------------------------------------------------------------
# distribution pairs


@dataclass(frozen=True)
class DistributionPair:
    """b-distributions on a rectangle, stored sparsely with exact masses.

    i_a / i_b are the row and column input labels (bitmask integers, sorted);
    mu0 / mu1 map (row index, col index) positions to rational masses.
    """

    i_a: tuple[int, ...]
    i_b: tuple[int, ...]
    mu0: dict[tuple[int, int], Fraction]
    mu1: dict[tuple[int, int], Fraction]

    @property
    def k_a(self) -> int:
        return len(self.i_a)

    @property
    def k_b(self) -> int:
        return len(self.i_b)

    def mu(self, b: int) -> dict[tuple[int, int], Fraction]:
        return self.mu1 if b else self.mu0

    def dense(self, b: int) -> np.ndarray:
        out = np.zeros((self.k_a, self.k_b))
        for (i, j), mass in self.mu(b).items():
            out[i, j] = float(mass)
        return out

    def mass(self, b: int) -> Fraction:
        return sum(self.mu(b).values(), Fraction(0))


def validate_pair(pair: DistributionPair, g: InnerFunction) -> None:
    """Check masses sum to 1, are non-negative, and sit inside g^{-1}(b)."""
    for b in (0, 1):
        total = pair.mass(b)
        if total != 1:
            raise ValueError(f"mu{b} mass is {total}, expected 1")
        for (i, j), mass in pair.mu(b).items():
            if mass < 0:
                raise ValueError(f"negative mass at position ({i},{j}) in mu{b}")
            x, y = pair.i_a[i], pair.i_b[j]
            if g.value(x, y) != b:
                raise ValueError(
                    f"mu{b} puts mass on ({x},{y}) where g is {g.value(x, y)}")


@dataclass(frozen=True)
class SpectralDiscrepancyCert:
    """Scaled norms of a pair and the minimal r they certify."""

    pair: DistributionPair
    sum_scaled: float
    diff_scaled: float
    rho: float

    def qcc_bound_bits(self) -> float:
        """log2(1/rho): the discrepancy route's lower bound in bits, with no
        hidden constant applied."""
        if self.rho == 0:
            return math.inf
        return math.log2(1.0 / self.rho)


def spectral_certificate(pair: DistributionPair) -> SpectralDiscrepancyCert:
    """Minimal r this pair certifies: max(diff_scaled, sum_scaled - 1, 0)."""
    scale = math.sqrt(pair.k_a * pair.k_b)
    avg = (pair.dense(0) + pair.dense(1)) / 2.0
    diff = (pair.dense(0) - pair.dense(1)) / 2.0
    sum_scaled = scale * operator_norm(avg)
    diff_scaled = scale * operator_norm(diff)
    rho = max(diff_scaled, sum_scaled - 1.0, 0.0)
    return SpectralDiscrepancyCert(pair, sum_scaled, diff_scaled, rho)


def uniform_pair(g: InnerFunction,
                 rows: tuple[int, ...] | None = None,
                 cols: tuple[int, ...] | None = None) -> DistributionPair:
    """Uniform b-distributions on g^{-1}(b) restricted to rows x cols."""
    side = 1 << g.k
    i_a = tuple(rows) if rows is not None else tuple(range(side))
    i_b = tuple(cols) if cols is not None else tuple(range(side))
    row_pos = {x: i for i, x in enumerate(i_a)}
    col_pos = {y: j for j, y in enumerate(i_b)}
    cells: dict[int, list[tuple[int, int]]] = {0: [], 1: []}
    for x in i_a:
        for y in i_b:
            v = g.value(x, y)
            if v is not None:
                cells[v].append((row_pos[x], col_pos[y]))
    mus = []
    for b in (0, 1):
        if not cells[b]:
            raise ValueError(f"g has no {b}-inputs on the chosen rectangle")
        mass = Fraction(1, len(cells[b]))
        mus.append({pos: mass for pos in cells[b]})
    return DistributionPair(i_a, i_b, mus[0], mus[1])


PAIR_SIDE_CAP = DENSE_FALLBACK_DIM


def ip_pair(k: int) -> DistributionPair:
    """Uniform pair for inner product mod 2, with the zero row removed
    from Alice's side (the zero row is constant and would break condition (2))."""
    if k < 1:
        raise ValueError("k must be >= 1")
    size = 1 << k
    if size > PAIR_SIDE_CAP:
        raise SizeGuardExceeded(
            f"side size {size} exceeds the certifiable cap {PAIR_SIDE_CAP}")
    i_a = tuple(range(1, size))
    i_b = tuple(range(size))
    counts = {0: 0, 1: 0}
    entries: dict[int, list[tuple[int, int]]] = {0: [], 1: []}
    for x in i_a:
        for y in i_b:
            b = (x & y).bit_count() & 1
            entries[b].append((x - 1, y))
            counts[b] += 1
    mu0 = {pos: Fraction(1, counts[0]) for pos in entries[0]}
    mu1 = {pos: Fraction(1, counts[1]) for pos in entries[1]}
    return DistributionPair(i_a, i_b, mu0, mu1)


def ip_closed_forms(k: int) -> tuple[float, float]:
    """Reference values for the ip_pair scaled-norm ingredients:
    ||avg|| = 1/sqrt(K(K-1)) and ||half-diff|| = 1/((K-1)sqrt(K))."""
    big_k = 1 << k
    return (1.0 / math.sqrt(big_k * (big_k - 1)),
            1.0 / ((big_k - 1) * math.sqrt(big_k)))


# ---------------------------------------------------------------------------
# intersection-indicator matrices on p-subsets and their exact spectra


@dataclass(frozen=True, eq=False)
class JohnsonMatrix:
    """0/1 indicator of |x cap y| = s over p-subsets of [k], lex order."""

    k: int
    p: int
    s: int
    subsets: tuple[int, ...]
    matrix: np.ndarray


def _check_kps(k: int, p: int, s: int) -> None:
    if not (0 <= s <= p and 2 * p <= k):
        raise ValueError(f"need 0 <= s <= p <= k/2, got k={k}, p={p}, s={s}")


def johnson_matrix(k: int, p: int, s: int) -> JohnsonMatrix:
    _check_kps(k, p, s)
    subsets = weight_subsets(k, p)
    m = len(subsets)
    mat = np.zeros((m, m), dtype=np.int8)
    for i, x in enumerate(subsets):
        for j, y in enumerate(subsets):
            if (x & y).bit_count() == s:
                mat[i, j] = 1
    return JohnsonMatrix(k, p, s, subsets, mat)


def knuth_eigenvalue(k: int, p: int, s: int, t: int) -> Fraction:
    """Exact eigenvalue of the (k, p, s) intersection matrix on its t-th
    shared eigenspace."""
    _check_kps(k, p, s)
    if not 0 <= t <= p:
        raise ValueError(f"need 0 <= t <= p, got t={t}")
    total = 0
    for i in range(max(0, s + t - p), min(s, t) + 1):
        term = math.comb(t, i) * math.comb(p - i, s - i) \
            * math.comb(k - p - t + i, p - s - t + i)
        total += -term if (t - i) & 1 else term
    return Fraction(total)


def eigenspace_dimension(k: int, t: int) -> int:
    """Multiplicity of the t-th shared eigenspace."""
    return math.comb(k, t) - (math.comb(k, t - 1) if t >= 1 else 0)


def disj_weights(k: int) -> tuple[int, int, int]:
    """(M, w0, w1): subset count and the 0/1-input counts for the
    at-most-one-intersection disjointness restriction at p = k/3."""
    p = k // 3
    m = math.comb(k, p)
    w0 = m * math.comb(k - p, p)
    w1 = m * p * math.comb(k - p, p - 1)
    return m, w0, w1


def disj_pair(k: int) -> DistributionPair:
    """Uniform pair for disjointness on p-subsets (p = k/3) restricted to
    intersections of size at most one: mu_s = J_{k,p,s} / w_s."""
    if k < 3 or k % 3:
        raise ValueError("k must be a positive multiple of 3")
    p = k // 3
    m, w0, w1 = disj_weights(k)
    if m > PAIR_SIDE_CAP:
        raise SizeGuardExceeded(
            f"side size {m} exceeds the certifiable cap {PAIR_SIDE_CAP}")
    subsets = weight_subsets(k, p)
    mu0: dict[tuple[int, int], Fraction] = {}
    mu1: dict[tuple[int, int], Fraction] = {}
    f0, f1 = Fraction(1, w0), Fraction(1, w1)
    for i, x in enumerate(subsets):
        for j, y in enumerate(subsets):
            inter = (x & y).bit_count()
            if inter == 0:
                mu0[(i, j)] = f0
            elif inter == 1:
                mu1[(i, j)] = f1
    return DistributionPair(subsets, subsets, mu0, mu1)


def disj_lambda(k: int, s: int, t: int) -> Fraction:
    """Exact eigenvalue of mu_s for the disjointness pair: knuth value / w_s."""
    p = k // 3
    _, w0, w1 = disj_weights(k)
    return knuth_eigenvalue(k, p, s, t) / (w1 if s else w0)


def disj_lambda_diff_closed(k: int, t: int) -> Fraction:
    """Closed-form lambda_{0,t} - lambda_{1,t} for the disjointness pair:
    (-1)^t * (1/M) * [C(k-p-t, p-t)/C(k-p, p)] * t(k-t+1)/p^2."""
    p = k // 3
    m = math.comb(k, p)
    ratio = Fraction(math.comb(k - p - t, p - t), math.comb(k - p, p))
    val = Fraction(1, m) * ratio * Fraction(t * (k - t + 1), p * p)
    return -val if t & 1 else val


# ---------------------------------------------------------------------------
# brute-force rectangle discrepancy (cross-check oracle)

RECTANGLE_GUARD = 24


def rectangle_discrepancy(pair: DistributionPair, g: InnerFunction) -> float:
    """Max over all sub-rectangles of |sum mu(x,y) (-1)^g(x,y)| for the
    combined distribution mu = (mu0+mu1)/2.  Exhaustive over subsets of
    the smaller side."""
    if pair.k_a + pair.k_b > RECTANGLE_GUARD:
        raise SizeGuardExceeded(
            f"|I_A| + |I_B| = {pair.k_a + pair.k_b} exceeds {RECTANGLE_GUARD}")
    signed = np.zeros((pair.k_a, pair.k_b))
    for b in (0, 1):
        for (i, j), mass in pair.mu(b).items():
            v = g.value(pair.i_a[i], pair.i_b[j])
            if v is None:
                raise ValueError(f"mass on undefined point ({pair.i_a[i]},{pair.i_b[j]})")
            signed[i, j] += float(mass) / 2.0 * (1 if v == 0 else -1)
    if pair.k_b <= pair.k_a:
        cols = signed
    else:
        cols = signed.T
    n_sub = cols.shape[1]
    best = 0.0
    for mask in range(1 << n_sub):
        if mask == 0:
            continue
        sel = [j for j in range(n_sub) if (mask >> j) & 1]
        sums = cols[:, sel].sum(axis=1)
        pos = sums[sums > 0].sum()
        neg = -sums[sums < 0].sum()
        best = max(best, pos, neg)
    return float(best)
