"""Boolean functions on the hypercube and two-party inner functions.

Bit convention used everywhere: input bit x_1 is the *least-significant*
bit of a truth-table index, so the index of x = (x_1, ..., x_n) is
sum(x_i << (i-1)).  Blocks of a composed input follow the same order:
block i of an nk-bit input occupies bits (i-1)k .. ik-1 of the integer.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .errors import ArityMismatch, NotSymmetric, SizeGuardExceeded

DEFAULT_MATERIALIZE_LIMIT = 4096


def materialize_limit() -> int:
    """Per-side dimension cap for dense materializations (env-overridable)."""
    return int(os.environ.get("BLOCKCOMP_MAX_MATERIALIZE", DEFAULT_MATERIALIZE_LIMIT))


# ---------------------------------------------------------------------------
# total Boolean functions


@dataclass(frozen=True)
class BooleanFunction:
    """Total function {0,1}^n -> {0,1} stored as a truth table."""

    n: int
    table: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("arity must be >= 1")
        if len(self.table) != 1 << self.n:
            raise ValueError(f"table length {len(self.table)} != 2^{self.n}")
        if any(b not in (0, 1) for b in self.table):
            raise ValueError("table entries must be 0/1")

    def value(self, index: int) -> int:
        return self.table[index]

    @property
    def is_constant(self) -> bool:
        return len(set(self.table)) == 1


def evaluate(f: BooleanFunction, x: Sequence[int]) -> int:
    """Evaluate f at a bit vector (x_1 first)."""
    if len(x) != f.n:
        raise ArityMismatch(f"expected {f.n} bits, got {len(x)}")
    index = 0
    for i, bit in enumerate(x):
        if bit:
            index |= 1 << i
    return f.table[index]


def from_predicate(n: int, pred) -> BooleanFunction:
    """Build a function from a predicate on the integer index."""
    return BooleanFunction(n, tuple(1 if pred(x) else 0 for x in range(1 << n)))


def constant_function(n: int, bit: int) -> BooleanFunction:
    return BooleanFunction(n, (bit,) * (1 << n))


def or_function(n: int) -> BooleanFunction:
    return from_predicate(n, lambda x: x != 0)


def and_function(n: int) -> BooleanFunction:
    full = (1 << n) - 1
    return from_predicate(n, lambda x: x == full)


def parity_function(n: int) -> BooleanFunction:
    return from_predicate(n, lambda x: x.bit_count() & 1)


def projection(n: int, i: int) -> BooleanFunction:
    """f(x) = x_i (1-based)."""
    return from_predicate(n, lambda x: (x >> (i - 1)) & 1)


def negate(f: BooleanFunction) -> BooleanFunction:
    return BooleanFunction(f.n, tuple(1 - b for b in f.table))


def from_profile(profile: Sequence[int]) -> BooleanFunction:
    """Symmetric function from its weight profile (profile[m] = value at weight m)."""
    n = len(profile) - 1
    return from_predicate(n, lambda x: profile[x.bit_count()])


# ---------------------------------------------------------------------------
# Fourier spectra (exact rationals)


@dataclass(frozen=True)
class FourierSpectrum:
    """Exact Fourier coefficients, keyed by the frequency bitmask w.

    Only nonzero coefficients are stored; coefficient() returns 0 for
    absent frequencies.
    """

    n: int
    coeffs: dict[int, Fraction]

    def coefficient(self, w: int) -> Fraction:
        return self.coeffs.get(w, Fraction(0))

    def evaluate(self, x: int) -> Fraction:
        """Invert the transform at the point with index x."""
        total = Fraction(0)
        for w, c in self.coeffs.items():
            total += c if (w & x).bit_count() % 2 == 0 else -c
        return total

    def min_degree(self) -> int | None:
        """Smallest |w| carrying a nonzero coefficient, or None if identically 0."""
        if not self.coeffs:
            return None
        return min(w.bit_count() for w in self.coeffs)

    def squared_mass(self) -> Fraction:
        return sum((c * c for c in self.coeffs.values()), Fraction(0))


def walsh_transform(values: Sequence) -> list:
    """Unnormalized Walsh transform: out[w] = sum_x values[x] * (-1)^(w.x).

    Works over any exact numeric type (int, Fraction).
    """
    out = list(values)
    size = len(out)
    h = 1
    while h < size:
        for base in range(0, size, h << 1):
            for j in range(base, base + h):
                a, b = out[j], out[j + h]
                out[j], out[j + h] = a + b, a - b
        h <<= 1
    return out


def fourier(f: BooleanFunction) -> FourierSpectrum:
    """Exact Fourier spectrum of a 0/1-valued function."""
    scale = Fraction(1, 1 << f.n)
    transformed = walsh_transform(f.table)
    coeffs = {w: v * scale for w, v in enumerate(transformed) if v != 0}
    return FourierSpectrum(f.n, coeffs)


def spectrum_of_values(n: int, values: dict[int, Fraction]) -> FourierSpectrum:
    """Spectrum of an arbitrary rational-valued map on the cube."""
    dense = [values.get(x, Fraction(0)) for x in range(1 << n)]
    scale = Fraction(1, 1 << n)
    transformed = walsh_transform(dense)
    coeffs = {w: v * scale for w, v in enumerate(transformed) if v != 0}
    return FourierSpectrum(n, coeffs)


# ---------------------------------------------------------------------------
# symmetric functions and the ell0/ell1 flip parameters


@dataclass(frozen=True)
class SymmetricProfile:
    """Weight profile of a symmetric function plus its flip parameters.

    ell0 is the largest m in [1, n/2] where the profile flips between
    weights m-1 and m (0 if none).  ell1 is the largest n-m over
    m in [ceil(n/2), n-1] where the profile flips between m and m+1
    (0 if none).  For odd n the lower end of the ell1 range is taken
    as ceil(n/2).
    """

    n: int
    values: tuple[int, ...]
    ell0: int
    ell1: int


@lru_cache(maxsize=256)
def symmetric_profile(f: BooleanFunction) -> SymmetricProfile:
    """Weight profile of f; raises NotSymmetric on any weight-class disagreement.

    Cached: protocol simulations re-derive the profile on every run, and the
    full-table scan dominates once n is large."""
    profile: list[int | None] = [None] * (f.n + 1)
    for x, bit in enumerate(f.table):
        m = x.bit_count()
        if profile[m] is None:
            profile[m] = bit
        elif profile[m] != bit:
            raise NotSymmetric(f"inputs of weight {m} disagree")
    values = tuple(profile)  # type: ignore[arg-type]
    return SymmetricProfile(f.n, values, ell0_of_profile(values), ell1_of_profile(values))


def ell0_of_profile(values: Sequence[int]) -> int:
    n = len(values) - 1
    flips = [m for m in range(1, n // 2 + 1) if values[m] != values[m - 1]]
    return max(flips, default=0)


def ell1_of_profile(values: Sequence[int]) -> int:
    n = len(values) - 1
    lo = (n + 1) // 2
    flips = [n - m for m in range(lo, n) if values[m] != values[m + 1]]
    return max(flips, default=0)


def pad_restrict(f: BooleanFunction, ones: int, zeros: int) -> BooleanFunction:
    """Restriction f'(x) = f(x 1^ones 0^zeros), suffix appended in that order."""
    if ones < 0 or zeros < 0:
        raise ValueError("pad counts must be non-negative")
    n_prime = f.n - ones - zeros
    if n_prime < 1:
        raise ArityMismatch(f"restricted arity {n_prime} < 1")
    suffix = ((1 << ones) - 1) << n_prime
    table = tuple(f.table[x | suffix] for x in range(1 << n_prime))
    return BooleanFunction(n_prime, table)


# ---------------------------------------------------------------------------
# inner two-party functions (possibly partial)

UNDEF = -1  # sentinel in value matrices


@dataclass(frozen=True, eq=False)
class InnerFunction:
    """Two-party function on {0,1}^k x {0,1}^k; entry -1 marks undefined."""

    k: int
    values: np.ndarray

    def __post_init__(self):
        side = 1 << self.k
        if self.values.shape != (side, side):
            raise ValueError(f"value matrix must be {side}x{side}")
        object.__setattr__(self, "values", self.values.astype(np.int8))

    def value(self, x: int, y: int) -> int | None:
        v = int(self.values[x, y])
        return None if v == UNDEF else v

    @property
    def is_total(self) -> bool:
        return not (self.values == UNDEF).any()

    def domain(self) -> Iterator[tuple[int, int]]:
        xs, ys = np.nonzero(self.values != UNDEF)
        return zip(xs.tolist(), ys.tolist())

    def preimage(self, b: int) -> list[tuple[int, int]]:
        xs, ys = np.nonzero(self.values == b)
        return list(zip(xs.tolist(), ys.tolist()))


def and_inner() -> InnerFunction:
    """Binary AND as a k=1 inner function."""
    return InnerFunction(1, np.array([[0, 0], [0, 1]], dtype=np.int8))


def ip_inner(k: int) -> InnerFunction:
    """Inner product mod 2 on k-bit strings (total)."""
    side = 1 << k
    xs = np.arange(side)
    par = np.zeros((side, side), dtype=np.int8)
    for x in range(side):
        masked = xs & x
        par[x] = np.array([m.bit_count() & 1 for m in masked.tolist()], dtype=np.int8)
    return InnerFunction(k, par)


def restrict_rows(g: InnerFunction, rows: Sequence[int]) -> InnerFunction:
    """Partial function keeping only the given row inputs defined."""
    values = np.full_like(g.values, UNDEF)
    for x in rows:
        values[x] = g.values[x]
    return InnerFunction(g.k, values)


def weight_subsets(k: int, p: int) -> tuple[int, ...]:
    """All weight-p bitmasks of length k, ordered lexicographically by
    the sorted element list of the subset they encode."""
    masks = []
    for combo in combinations(range(k), p):
        mask = 0
        for e in combo:
            mask |= 1 << e
        masks.append(mask)
    return tuple(masks)


def disj_le1_inner(k: int) -> InnerFunction:
    """Set disjointness on p-subsets of [k] (p = k/3), restricted to pairs
    intersecting in at most one element; 1 means intersecting."""
    if k < 3 or k % 3:
        raise ValueError("k must be a positive multiple of 3")
    p = k // 3
    side = 1 << k
    values = np.full((side, side), UNDEF, dtype=np.int8)
    masks = weight_subsets(k, p)
    for x in masks:
        for y in masks:
            inter = (x & y).bit_count()
            if inter <= 1:
                values[x, y] = 1 if inter == 1 else 0
    return InnerFunction(k, values)


def random_inner(k: int, seed: int) -> InnerFunction:
    """Seeded uniformly random total inner function."""
    rng = np.random.default_rng(seed)
    side = 1 << k
    return InnerFunction(k, rng.integers(0, 2, size=(side, side), dtype=np.int8))


# ---------------------------------------------------------------------------
# block composition


@dataclass(frozen=True, eq=False)
class ComposedFunction:
    """Materialized f(g(x_1,y_1), ..., g(x_n,y_n)) on {0,1}^{nk} x {0,1}^{nk}."""

    f: BooleanFunction
    g: InnerFunction
    values: np.ndarray

    @property
    def n(self) -> int:
        return self.f.n

    @property
    def k(self) -> int:
        return self.g.k

    @property
    def side_bits(self) -> int:
        return self.f.n * self.g.k

    def value(self, x: int, y: int) -> int | None:
        v = int(self.values[x, y])
        return None if v == UNDEF else v


def block_compose(f: BooleanFunction, g: InnerFunction) -> ComposedFunction:
    """Compose f with g blockwise; block i of an input is bits (i-1)k..ik-1."""
    n, k = f.n, g.k
    side = 1 << (n * k)
    limit = materialize_limit()
    if side > limit:
        raise SizeGuardExceeded(f"2^(nk) = {side} exceeds limit {limit}")
    mask = (1 << k) - 1
    coords = np.arange(side)
    z_index = np.zeros((side, side), dtype=np.int16)
    undefined = np.zeros((side, side), dtype=bool)
    for i in range(n):
        xi = (coords >> (i * k)) & mask
        yi = xi
        block = g.values[np.ix_(xi, yi)]
        undefined |= block == UNDEF
        z_index |= (block == 1).astype(np.int16) << i
    f_table = np.array(f.table, dtype=np.int8)
    values = f_table[z_index]
    values[undefined] = UNDEF
    return ComposedFunction(f, g, values)


# ---------------------------------------------------------------------------
# JSON wire formats


def function_to_dict(f: BooleanFunction) -> dict:
    return {"n": f.n, "bits": "".join(str(b) for b in f.table)}


def function_from_dict(obj: dict) -> BooleanFunction:
    n = int(obj["n"])
    bits = obj["bits"]
    if len(bits) != 1 << n or set(bits) - {"0", "1"}:
        raise ValueError(f"bits must be a 0/1 string of length 2^{n}")
    return BooleanFunction(n, tuple(int(c) for c in bits))


def inner_to_dict(g: InnerFunction) -> dict:
    rows = [["u" if v == UNDEF else str(v) for v in row] for row in g.values.tolist()]
    return {"k": g.k, "rows": rows}


def inner_from_dict(obj: dict) -> InnerFunction:
    k = int(obj["k"])
    side = 1 << k
    rows = obj["rows"]
    if len(rows) != side or any(len(r) != side for r in rows):
        raise ValueError(f"rows must form a {side}x{side} matrix")
    values = np.full((side, side), UNDEF, dtype=np.int8)
    for i, row in enumerate(rows):
        for j, cell in enumerate(row):
            if cell == "u":
                continue
            if cell not in ("0", "1"):
                raise ValueError(f"cell ({i},{j}) must be '0', '1' or 'u'")
            values[i, j] = int(cell)
    return InnerFunction(k, values)
