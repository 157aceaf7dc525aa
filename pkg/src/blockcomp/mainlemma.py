"""Witness matrices for block-composed functions and the certificates
they imply.

Given a dual witness q for the outer function and a distribution pair for
the inner function, h = sum_z q(z) (x)_i mu_{z_i} has unit correlation
with the composed function, entrywise L1 equal to ||q||_1, and operator
norm decaying like rho^degree.  The ratio of the first and last quantities
lower-bounds the trace norm of every entrywise approximation of the
composition, which in turn lower-bounds quantum communication.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np

from .approxdeg import DualWitness, dual_witness
from .boolcube import BooleanFunction, InnerFunction, materialize_limit
from .errors import ArityMismatch, SizeGuardExceeded
from .specdisc import (DistributionPair, SpectralDiscrepancyCert,
                       operator_norm, spectral_certificate, validate_pair)


@dataclass(frozen=True, eq=False)
class WitnessMatrix:
    """h = sum_z q(z) (x)_i mu_{z_i} in tensor form, with block 1 as the
    most significant kron factor; rows run over I_A^n, columns over I_B^n."""

    n: int
    pair: DistributionPair
    terms: tuple[tuple[int, Fraction], ...]
    h_l1: Fraction
    materialized: np.ndarray | None

    @property
    def shape(self) -> tuple[int, int]:
        return (self.pair.k_a ** self.n, self.pair.k_b ** self.n)

    def q_values(self) -> dict[int, Fraction]:
        return dict(self.terms)


def witness_matrix_from_values(q: dict[int, Fraction], n: int,
                               pair: DistributionPair) -> WitnessMatrix:
    """Assemble h from raw witness values; materializes when both side
    counts fit the guard, keeps tensor form otherwise."""
    if pair.mu0.keys() & pair.mu1.keys():
        raise ValueError("mu0 and mu1 share support; L1 bookkeeping invalid")
    if any(z < 0 or z >= 1 << n for z in q):
        raise ArityMismatch("witness support outside {0,1}^n")
    terms = tuple(sorted((z, v) for z, v in q.items() if v))
    h_l1 = sum((abs(v) for _, v in terms), Fraction(0))
    limit = materialize_limit()
    mat = None
    if pair.k_a ** n <= limit and pair.k_b ** n <= limit:
        dense = [pair.dense(0), pair.dense(1)]
        mat = np.zeros((pair.k_a ** n, pair.k_b ** n))
        for z, coeff in terms:
            factors = [dense[(z >> (i - 1)) & 1] for i in range(1, n + 1)]
            mat += float(coeff) * reduce(np.kron, factors)
    return WitnessMatrix(n, pair, terms, h_l1, mat)


def build_witness_matrix(q: DualWitness, pair: DistributionPair) -> WitnessMatrix:
    return witness_matrix_from_values(q.q, q.n, pair)


def require_materialized(h: WitnessMatrix) -> np.ndarray:
    if h.materialized is None:
        raise SizeGuardExceeded(
            f"witness matrix of shape {h.shape} exceeds the materialization guard")
    return h.materialized


def fourier_materialize(h: WitnessMatrix) -> np.ndarray:
    """Independent assembly of h from the witness spectrum: the term for
    frequency w uses (mu0+mu1) at blocks outside w and (mu0-mu1) at blocks
    inside w (unhalved), weighted by q_hat_w."""
    n = h.n
    size = 1 << n
    q_hat = {}
    for w in range(size):
        acc = Fraction(0)
        for z, coeff in h.terms:
            acc += -coeff if (w & z).bit_count() & 1 else coeff
        if acc:
            q_hat[w] = acc / size
    plus = h.pair.dense(0) + h.pair.dense(1)
    minus = h.pair.dense(0) - h.pair.dense(1)
    out = np.zeros((h.pair.k_a ** n, h.pair.k_b ** n))
    for w, coeff in q_hat.items():
        factors = [minus if (w >> (i - 1)) & 1 else plus for i in range(1, n + 1)]
        out += float(coeff) * reduce(np.kron, factors)
    return out


def restricted_composition(f: BooleanFunction, g: InnerFunction,
                           pair: DistributionPair
                           ) -> tuple[np.ndarray, np.ndarray]:
    """(values, defined) of the block composition over I_A^n x I_B^n,
    indexed consistently with WitnessMatrix (block 1 most significant)."""
    n = f.n
    limit = materialize_limit()
    if pair.k_a ** n > limit or pair.k_b ** n > limit:
        raise SizeGuardExceeded("restricted composition exceeds the guard")
    side = 1 << g.k
    if any(x >= side for x in pair.i_a) or any(y >= side for y in pair.i_b):
        raise ArityMismatch("pair labels outside the inner function's domain")
    values = np.zeros((pair.k_a ** n, pair.k_b ** n))
    defined = np.zeros_like(values, dtype=bool)
    for r, xs in enumerate(itertools.product(pair.i_a, repeat=n)):
        for c, ys in enumerate(itertools.product(pair.i_b, repeat=n)):
            z = 0
            ok = True
            for i in range(n):
                b = g.value(xs[i], ys[i])
                if b is None:
                    ok = False
                    break
                z |= b << i
            if ok:
                defined[r, c] = True
                values[r, c] = f.value(z)
    return values, defined


def inner_product_with_composition(h: WitnessMatrix, f: BooleanFunction,
                                   g: InnerFunction) -> Fraction:
    """tr(h^T F) for F the block composition of f and g, computed by the
    block-factorized identity: once each mu_b sits inside g^{-1}(b), the
    tensor term for z meets F on a constant-f(z) region of mass 1, so the
    trace collapses to sum_z q(z) f(z).  Exact."""
    if f.n != h.n:
        raise ArityMismatch(f"outer arity {f.n} != witness block count {h.n}")
    validate_pair(h.pair, g)
    return sum((coeff for z, coeff in h.terms if f.value(z)), Fraction(0))


@dataclass(frozen=True)
class OpnormBound:
    """Analytic bounds on ||h||.  bound_r is the binomial-tail form;
    bound_final is its closed weakening 2/(eps * scale) * exp(-d/2),
    valid only when rho <= d/(2en)."""

    n: int
    degree: int
    rho: float
    epsilon: float
    scale: float
    bound_r: float
    bound_final: float
    final_valid: bool


def opnorm_bound(q: DualWitness, cert: SpectralDiscrepancyCert) -> OpnormBound:
    if not cert.rho < 1:
        raise ValueError(f"rho = {cert.rho} must be < 1 for the bound to decay")
    n, d = q.n, q.degree
    rho = cert.rho
    eps = float(q.epsilon)
    scale = math.sqrt(cert.pair.k_a * cert.pair.k_b) ** n
    tail = sum(math.comb(n, ell) * rho ** ell for ell in range(d, n + 1))
    bound_r = (1.0 + rho) ** n / (eps * scale) * tail
    bound_final = 2.0 / (eps * scale) * math.exp(-0.5 * d)
    final_valid = bool(rho <= d / (2.0 * math.e * n))
    return OpnormBound(n, d, rho, eps, scale, bound_r, bound_final, final_valid)


def trace_norm_certificate(h: WitnessMatrix, f: BooleanFunction,
                           g: InnerFunction, epsilon: Fraction,
                           epsilon_prime: Fraction,
                           f_tilde: np.ndarray | None = None) -> float:
    """Lower bound on the trace norm of any entrywise eps'-approximation
    of the restricted composition: |tr(h^T F_tilde)| / ||h||.

    With an explicit F_tilde the numerator is evaluated directly (entries
    outside the composition's domain are ignored; h vanishes there anyway);
    without one it is replaced by the guaranteed 1 - eps'/eps.  The norm in
    the denominator is the exact materialized value when available, else
    the analytic binomial-tail bound.
    """
    if not epsilon_prime < epsilon:
        raise ValueError("epsilon_prime must be < epsilon")
    if f_tilde is not None:
        mat = require_materialized(h)
        values, defined = restricted_composition(f, g, h.pair)
        if f_tilde.shape != values.shape:
            raise ArityMismatch(f"approximation shape {f_tilde.shape} != {values.shape}")
        slack = float(epsilon_prime) + 1e-12
        if np.abs(np.where(defined, f_tilde - values, 0.0)).max() > slack:
            raise ValueError("approximation violates the entrywise error bound")
        numerator = abs(float(np.where(defined, mat * f_tilde, 0.0).sum()))
    else:
        numerator = 1.0 - float(epsilon_prime) / float(epsilon)
    if h.materialized is not None:
        denom = operator_norm(h.materialized)
    else:
        witness_like = _WitnessShim(h.n, _degree_of(h), epsilon)
        denom = opnorm_bound(witness_like, spectral_certificate(h.pair)).bound_r
    return numerator / denom


class _WitnessShim:
    """Just enough of the DualWitness surface for opnorm_bound."""

    def __init__(self, n: int, degree: int, epsilon: Fraction):
        self.n = n
        self.degree = degree
        self.epsilon = epsilon


def _degree_of(h: WitnessMatrix) -> int:
    size = 1 << h.n
    best = h.n + 1
    for w in range(size):
        acc = Fraction(0)
        for z, coeff in h.terms:
            acc += -coeff if (w & z).bit_count() & 1 else coeff
        if acc:
            best = min(best, w.bit_count())
    return 0 if best > h.n else best


@dataclass(frozen=True)
class CertificateReport:
    """Everything the certification chain produces for one (f, g, pair)."""

    n: int
    degree: int
    epsilon: Fraction
    epsilon_prime: Fraction
    rho: float
    scale: float
    h_l1: Fraction
    inner_product: Fraction
    h_opnorm_exact: float | None
    h_opnorm_bound: float
    norm_source: str
    tracenorm_lb: float
    closed_form_valid: bool
    closed_form_lb: float | None
    implied_degree_bound: float
    qcc_bits: float
    qcc_constant_note: str = "no hidden constant applied"


def mainlemma_certify(f: BooleanFunction, pair: DistributionPair,
                      g: InnerFunction,
                      epsilon: Fraction = Fraction(1, 3),
                      epsilon_prime: Fraction = Fraction(1, 6)
                      ) -> CertificateReport:
    """Run the full chain: dual witness, witness matrix, norm bounds,
    trace-norm lower bound, and the implied communication bound in bits."""
    if not epsilon_prime < epsilon:
        raise ValueError("epsilon_prime must be < epsilon")
    validate_pair(pair, g)
    witness = dual_witness(f, epsilon)
    cert = spectral_certificate(pair)
    h = build_witness_matrix(witness, pair)
    inner = inner_product_with_composition(h, f, g)
    bounds = opnorm_bound(witness, cert)
    if h.materialized is not None:
        exact = operator_norm(h.materialized)
        denom = exact
        source = "materialized_svd"
    else:
        exact = None
        denom = bounds.bound_r
        source = "analytic_bound"
    numerator = 1.0 - float(epsilon_prime) / float(epsilon)
    route_lb = numerator / denom if denom > 0 else math.inf
    closed_lb = None
    if bounds.final_valid:
        closed_lb = bounds.scale * math.exp(0.5 * witness.degree) / 24.0
    best_lb = max(route_lb, closed_lb) if closed_lb is not None else route_lb
    qcc = math.log2(best_lb / bounds.scale) if math.isfinite(best_lb) else math.inf
    return CertificateReport(
        n=witness.n, degree=witness.degree, epsilon=epsilon,
        epsilon_prime=epsilon_prime, rho=cert.rho, scale=bounds.scale,
        h_l1=h.h_l1, inner_product=inner, h_opnorm_exact=exact,
        h_opnorm_bound=bounds.bound_r, norm_source=source,
        tracenorm_lb=best_lb, closed_form_valid=bounds.final_valid,
        closed_form_lb=closed_lb, implied_degree_bound=float(witness.degree),
        qcc_bits=qcc)
