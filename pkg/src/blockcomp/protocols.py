"""Classical protocol simulations with bit-exact cost accounting.

Two upper-bound constructions: a decision-tree compiler that replaces
each query of the outer function by repeated runs of an inner-function
subprotocol, and the Hamming-distance binary-search protocol for
symmetric predicates composed with AND.  Subprotocol internals are
modeled as exact-answer oracles with a charged cost and optional
injected error; all randomness flows from one seeded generator so runs
are reproducible bit for bit.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .boolcube import BooleanFunction, InnerFunction, symmetric_profile
from .errors import ArityMismatch

TREE_ARITY_CAP = 4


@dataclass(frozen=True)
class Leaf:
    value: int

    def depth(self) -> int:
        return 0


@dataclass(frozen=True)
class Node:
    var: int            # 1-based variable index of the outer function
    low: "Node | Leaf"  # taken when the queried bit is 0
    high: "Node | Leaf"

    def depth(self) -> int:
        return 1 + max(self.low.depth(), self.high.depth())


@dataclass(frozen=True)
class DecisionTree:
    n: int
    root: Node | Leaf

    @property
    def depth(self) -> int:
        return self.root.depth()

    def evaluate(self, x: int) -> int:
        node = self.root
        while isinstance(node, Node):
            node = node.high if (x >> (node.var - 1)) & 1 else node.low
        return node.value


def _restrict(n: int, table: tuple[int, ...], i: int, b: int) -> tuple[int, ...]:
    # drop variable i (1-based), keeping the sub-table where x_i = b
    out = []
    for x in range(1 << (n - 1)):
        low = x & ((1 << (i - 1)) - 1)
        high = x >> (i - 1)
        out.append(table[low | (b << (i - 1)) | (high << i)])
    return tuple(out)


def _min_depth(n: int, table: tuple[int, ...], memo: dict) -> int:
    if all(v == table[0] for v in table):
        return 0
    key = (n, table)
    if key in memo:
        return memo[key]
    best = n
    for i in range(1, n + 1):
        d = 1 + max(_min_depth(n - 1, _restrict(n, table, i, 0), memo),
                    _min_depth(n - 1, _restrict(n, table, i, 1), memo))
        best = min(best, d)
    memo[key] = best
    return best


def optimal_decision_tree_depth(f: BooleanFunction) -> int:
    """Exact minimal query depth, by exhaustive restriction search."""
    if f.n > TREE_ARITY_CAP:
        raise ArityMismatch(f"arity {f.n} exceeds the exhaustive-search cap {TREE_ARITY_CAP}")
    return _min_depth(f.n, f.table, {})


def optimal_decision_tree(f: BooleanFunction) -> DecisionTree:
    """A tree achieving the minimal depth; variable labels refer to f's
    original variables even inside restricted subtrees."""
    if f.n > TREE_ARITY_CAP:
        raise ArityMismatch(f"arity {f.n} exceeds the exhaustive-search cap {TREE_ARITY_CAP}")
    memo: dict = {}

    def build(n: int, table: tuple[int, ...], labels: tuple[int, ...]) -> Node | Leaf:
        if all(v == table[0] for v in table):
            return Leaf(table[0])
        target = _min_depth(n, table, memo)
        for i in range(1, n + 1):
            t0, t1 = _restrict(n, table, i, 0), _restrict(n, table, i, 1)
            if 1 + max(_min_depth(n - 1, t0, memo), _min_depth(n - 1, t1, memo)) == target:
                sub = labels[:i - 1] + labels[i:]
                return Node(labels[i - 1], build(n - 1, t0, sub), build(n - 1, t1, sub))
        raise AssertionError("depth search inconsistent")

    return DecisionTree(f.n, build(f.n, f.table, tuple(range(1, f.n + 1))))


@dataclass
class CostLedger:
    """Append-only record of everything a protocol run charged."""

    bits_sent_alice: int = 0
    bits_sent_bob: int = 0
    subprotocol_invocations: list[tuple[str, int]] = field(default_factory=list)
    rng_seed: int | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def total(self) -> int:
        return (self.bits_sent_alice + self.bits_sent_bob
                + sum(c for _, c in self.subprotocol_invocations))


@dataclass(frozen=True)
class HamOracleConfig:
    """Cost and error model for a Hamming-threshold subprotocol call: a
    call at threshold d charges ceil(c_ham * d * log2(max(d, 2))) bits and
    errs independently with probability error_prob."""

    c_ham: float = 1.0
    error_prob: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.error_prob <= 1.0 / 3.0:
            raise ValueError("error_prob must lie in [0, 1/3]")
        if self.c_ham < 0:
            raise ValueError("c_ham must be non-negative")

    def cost(self, d: int) -> int:
        return math.ceil(self.c_ham * d * math.log2(max(d, 2)))


def bcw_compile_and_run(tree: DecisionTree, g: InnerFunction,
                        g_protocol_cost: int, repetitions: int,
                        x: int, y: int, inject_error: float = 0.0,
                        seed: int | None = None) -> tuple[int, CostLedger]:
    """Walk the tree on the composed input; every queried bit runs the
    g-subprotocol `repetitions` times and takes the majority."""
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    if not 0.0 <= inject_error <= 1.0 / 3.0:
        raise ValueError("inject_error must lie in [0, 1/3]")
    k = g.k
    side = 1 << (tree.n * k)
    if not (0 <= x < side and 0 <= y < side):
        raise ValueError("input outside the composed cube")
    mask = (1 << k) - 1
    rng = random.Random(seed)
    ledger = CostLedger(rng_seed=seed)
    node = tree.root
    while isinstance(node, Node):
        i = node.var
        xi = (x >> ((i - 1) * k)) & mask
        yi = (y >> ((i - 1) * k)) & mask
        true_bit = g.value(xi, yi)
        if true_bit is None:
            raise ValueError(f"block {i} falls outside the inner function's domain")
        votes = 0
        for _ in range(repetitions):
            bit = true_bit
            if inject_error > 0.0 and rng.random() < inject_error:
                bit ^= 1
            votes += bit
            ledger.subprotocol_invocations.append((f"g@{i}", g_protocol_cost))
        node = node.high if 2 * votes > repetitions else node.low
    return node.value, ledger


def repetition_schedule(delta_cap: int) -> int:
    """Smallest odd r with exp(-r/18) at most 1/(3(floor(log2 Delta)+1)),
    the majority-vote error needed so a union bound over the binary-search
    probes stays below 1/3.  A zero cap needs no search at all, so r = 1."""
    if delta_cap < 0:
        raise ValueError("delta_cap must be >= 0")
    if delta_cap == 0:
        return 1
    target = 3.0 * (math.floor(math.log2(delta_cap)) + 1)
    r = math.ceil(18.0 * math.log(target))
    if r < 1:
        r = 1
    if r % 2 == 0:
        r += 1
    while math.exp(-r / 18.0) > 1.0 / target:
        r += 2
    return r


def za_header_bits(ell1: int) -> int:
    """Bits Alice uses to announce her zero count once it is known to be
    below ell1."""
    return math.ceil(math.log2(max(ell1 - 1, 1))) + 1


def symmetric_and_protocol(f: BooleanFunction, x: int, y: int,
                           cfg: HamOracleConfig = HamOracleConfig(),
                           seed: int | None = None) -> tuple[int, CostLedger]:
    """Binary-search protocol for a symmetric f (with no flip in the lower
    half of the weight range) composed with bitwise AND.

    Both sides first compare their zero counts against the top flip
    distance ell1 and output 0 early when either is over the threshold.
    Otherwise Alice announces her zero count, the players binary-search
    the Hamming distance |x xor y| with majority-voted threshold probes,
    and Bob evaluates f at the implied intersection weight.  If f is 1
    instead of 0 on the low plateau, the complement is computed and the
    output flipped, with a ledger note.
    """
    profile = symmetric_profile(f)
    if profile.ell0 != 0:
        raise ValueError(f"protocol requires ell0 = 0, got {profile.ell0}")
    n = f.n
    if not (0 <= x < (1 << n) and 0 <= y < (1 << n)):
        raise ValueError("input outside the cube")
    rng = random.Random(seed)
    ledger = CostLedger(rng_seed=seed)
    values = profile.values
    flip = values[0] == 1
    if flip:
        values = tuple(1 - v for v in values)
        ledger.notes.append("negated: f is 1 on the low plateau")
    ell1 = profile.ell1

    def out(bit: int) -> tuple[int, CostLedger]:
        return (bit ^ 1 if flip else bit), ledger

    if ell1 == 0:
        ledger.notes.append("constant after orientation")
        return out(values[0])

    z_a = n - x.bit_count()
    z_b = n - y.bit_count()
    ledger.bits_sent_alice += 1
    ledger.bits_sent_bob += 1
    if z_a >= ell1 or z_b >= ell1:
        ledger.notes.append("threshold early exit")
        return out(0)

    header = za_header_bits(ell1)
    alt = math.ceil(math.log2(max(ell1, 2)))
    if header != alt:
        ledger.notes.append(f"header charged {header} bits (tight encoding {alt})")
    ledger.bits_sent_alice += header

    delta_cap = 2 * (ell1 - 1)
    reps = repetition_schedule(delta_cap)
    true_delta = (x ^ y).bit_count()
    lo, hi = 0, delta_cap
    while lo < hi:
        mid = (lo + hi + 1) // 2
        votes = 0
        for _ in range(reps):
            answer = 1 if true_delta >= mid else 0
            if cfg.error_prob > 0.0 and rng.random() < cfg.error_prob:
                answer ^= 1
            votes += answer
            ledger.subprotocol_invocations.append((f"ham_{mid}", cfg.cost(mid)))
        if 2 * votes > reps:
            lo = mid
        else:
            hi = mid - 1
    delta = lo

    weight = (x.bit_count() + y.bit_count() - delta) // 2
    weight = min(max(weight, 0), n)
    ledger.bits_sent_bob += 1
    return out(values[weight])
