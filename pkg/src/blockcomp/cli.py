"""Command-line frontend.

Every subcommand loads plain JSON inputs, calls one library operation,
and writes a JSON report (sorted keys, rationals as "p/q" strings) so
identical invocations produce byte-identical output.  Exit status: 0 on
success, 1 when a computed invariant fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import applications, approxdeg, boolcube, mainlemma, protocols, specdisc
from .errors import SizeGuardExceeded

OK, INVARIANT_FAILURE, INPUT_ERROR = 0, 1, 2


def _frac_str(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _emit(payload, out_path: str | None) -> None:
    text = json.dumps(payload, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def load_function(path: str) -> boolcube.BooleanFunction:
    with open(path) as fh:
        data = json.load(fh)
    if "profile" in data:
        return boolcube.from_profile(data["profile"])
    return boolcube.function_from_dict(data)


def load_inner(path: str) -> boolcube.InnerFunction:
    with open(path) as fh:
        return boolcube.inner_from_dict(json.load(fh))


def _parse_epsilon(text: str) -> Fraction:
    eps = Fraction(text)
    if not Fraction(0) < eps < Fraction(1, 2):
        raise ValueError(f"epsilon must lie in (0, 1/2), got {text}")
    return eps


@dataclass(frozen=True)
class RunConfig:
    """Validated parameters for one dispatch."""

    subcommand: str
    args: argparse.Namespace

    def validate(self) -> None:
        a = self.args
        if getattr(a, "k", None) is not None and a.k < 1:
            raise ValueError("k must be >= 1")
        if getattr(a, "trials", None) is not None and a.trials < 1:
            raise ValueError("trials must be >= 1")
        if getattr(a, "inject_error", None) is not None \
                and not 0.0 <= a.inject_error <= 1.0 / 3.0:
            raise ValueError("inject-error must lie in [0, 1/3]")


def _pair_for(family: str, k: int) -> specdisc.DistributionPair:
    if family == "ip":
        return specdisc.ip_pair(k)
    if family == "disj":
        return specdisc.disj_pair(k)
    raise ValueError(f"unknown family {family!r}")


def _inner_for(family: str, k: int) -> boolcube.InnerFunction:
    if family == "ip":
        return boolcube.ip_inner(k)
    if family == "disj":
        return boolcube.disj_le1_inner(k)
    if family == "and":
        return boolcube.and_inner()
    raise ValueError(f"unknown family {family!r}")


def _cert_payload(family: str, k: int) -> tuple[dict, bool]:
    cert = specdisc.spectral_certificate(_pair_for(family, k))
    payload = {
        "family": family,
        "k": k,
        "rho": cert.rho,
        "sum_scaled": cert.sum_scaled,
        "diff_scaled": cert.diff_scaled,
    }
    if family == "disj":
        bound = 3.0 / k
        payload["bound_3_over_k"] = bound
    else:
        bound = 1.0 / math.sqrt((1 << k) - 1)
        payload["bound_inv_sqrt_K_minus_1"] = bound
    payload["within_bound"] = bool(cert.rho <= bound + 1e-9)
    return payload, payload["within_bound"]


def cmd_approxdeg(args) -> int:
    f = load_function(args.f)
    eps = _parse_epsilon(args.epsilon)
    result = approxdeg.approx_degree(f, eps)
    _emit({
        "n": f.n,
        "epsilon": _frac_str(eps),
        "degree": result.degree,
        "coefficients": {str(w): _frac_str(cv)
                         for w, cv in sorted(result.coefficients.items())},
    }, args.out)
    return OK


def cmd_witness(args) -> int:
    f = load_function(args.f)
    eps = _parse_epsilon(args.epsilon)
    w = approxdeg.dual_witness(f, eps)
    report = approxdeg.verify_witness(w, f)
    _emit({
        "n": f.n,
        "epsilon": _frac_str(eps),
        "degree": w.degree,
        "q": {str(x): _frac_str(v) for x, v in sorted(w.q.items())},
        "checks": {"a": report.check_a, "b": report.check_b,
                   "c": report.check_c, "d": report.check_d},
        "l1": _frac_str(w.l1()),
    }, args.out)
    return OK if report.all_pass else INVARIANT_FAILURE


def cmd_specdisc(args) -> int:
    payload, ok = _cert_payload(args.family, args.k)
    _emit(payload, args.out)
    return OK if ok else INVARIANT_FAILURE


def cmd_knuth(args) -> int:
    ts = [args.t] if args.t is not None else list(range(args.p + 1))
    values = {str(t): _frac_str(specdisc.knuth_eigenvalue(args.k, args.p, args.s, t))
              for t in ts}
    dims = {str(t): specdisc.eigenspace_dimension(args.k, t) for t in ts}
    _emit({"k": args.k, "p": args.p, "s": args.s,
           "eigenvalues": values, "multiplicities": dims}, args.out)
    return OK


def cmd_mainlemma(args) -> int:
    f = load_function(args.f)
    eps = _parse_epsilon(args.epsilon)
    eps_prime = Fraction(args.epsilon_prime)
    report = mainlemma.mainlemma_certify(
        f, _pair_for(args.family, args.k), _inner_for(args.family, args.k),
        eps, eps_prime)
    payload = {
        "n": report.n,
        "degree": report.degree,
        "epsilon": _frac_str(report.epsilon),
        "epsilon_prime": _frac_str(report.epsilon_prime),
        "rho": report.rho,
        "scale": report.scale,
        "h_l1": _frac_str(report.h_l1),
        "inner_product": _frac_str(report.inner_product),
        "h_opnorm_exact": report.h_opnorm_exact,
        "h_opnorm_bound": report.h_opnorm_bound,
        "norm_source": report.norm_source,
        "tracenorm_lb": report.tracenorm_lb,
        "closed_form_valid": report.closed_form_valid,
        "closed_form_lb": report.closed_form_lb,
        "implied_degree_bound": report.implied_degree_bound,
        "qcc_bits": report.qcc_bits,
        "qcc_constant_note": report.qcc_constant_note,
    }
    _emit(payload, args.out)
    ok = report.inner_product == 1
    if report.h_opnorm_exact is not None:
        ok = ok and report.h_opnorm_exact <= report.h_opnorm_bound + 1e-9
    return OK if ok else INVARIANT_FAILURE


def cmd_reduce(args) -> int:
    f = load_function(args.f)
    plan = applications.reduction_plan(f, args.c, args.k_override,
                                       args.n_prime_override)
    payload = {
        "case": plan.case, "n": plan.n, "ell0": plan.ell0, "ell1": plan.ell1,
        "c": plan.c, "alpha": plan.alpha, "beta": plan.beta,
        "n_prime": plan.n_prime, "k": plan.k,
        "source_arity": plan.source_arity,
        "ones_pad": plan.ones_pad, "zeros_pad": plan.zeros_pad,
        "composed_ones_pad": plan.composed_ones_pad,
        "composed_zeros_pad": plan.composed_zeros_pad,
        "degree": plan.degree, "degree_symbolic": plan.degree_symbolic,
        "k_overridden": plan.k_overridden,
        "n_prime_overridden": plan.n_prime_overridden,
        "checks": plan.checks, "valid": plan.valid,
    }
    status = OK
    if args.check_identity:
        held = applications.padding_identity_check(plan, f)
        payload["identity_holds"] = held
        if not held:
            status = INVARIANT_FAILURE
    _emit(payload, args.out)
    return status


def _dense_input(rng: random.Random, n: int, ell1: int) -> int:
    zeros = rng.randrange(max(ell1, 1))
    x = (1 << n) - 1
    for pos in rng.sample(range(n), zeros):
        x &= ~(1 << pos)
    return x


def cmd_simulate(args) -> int:
    f = load_function(args.f)
    rng = random.Random(args.seed)
    lines: list[dict] = []
    errors = 0
    if args.protocol == "bcw":
        g = load_inner(args.g) if args.g else _inner_for(args.g_family, args.k)
        tree = protocols.optimal_decision_tree(f)
        side = 1 << (f.n * g.k)
        for t in range(args.trials):
            while True:
                x, y = rng.randrange(side), rng.randrange(side)
                expected = _composed_value(f, g, x, y)
                if expected is not None:
                    break
            out, ledger = protocols.bcw_compile_and_run(
                tree, g, args.g_cost, args.repetitions, x, y,
                inject_error=args.inject_error, seed=args.seed * 1_000_003 + t)
            lines.append(_trial_line(t, x, y, out, expected, ledger))
            errors += out != expected
    else:
        profile = boolcube.symmetric_profile(f)
        cfg = protocols.HamOracleConfig(c_ham=args.c_ham,
                                        error_prob=args.inject_error)
        for t in range(args.trials):
            if args.dense:
                x = _dense_input(rng, f.n, profile.ell1)
                y = _dense_input(rng, f.n, profile.ell1)
            else:
                x, y = rng.randrange(1 << f.n), rng.randrange(1 << f.n)
            expected = f.value(x & y)
            out, ledger = protocols.symmetric_and_protocol(
                f, x, y, cfg, seed=args.seed * 1_000_003 + t)
            lines.append(_trial_line(t, x, y, out, expected, ledger))
            errors += out != expected
    summary = {"summary": True, "trials": args.trials, "errors": errors,
               "error_rate": errors / args.trials,
               "max_total_bits": max((ln["total_bits"] for ln in lines), default=0)}
    text = "".join(json.dumps(ln, sort_keys=True) + "\n" for ln in lines)
    text += json.dumps(summary, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.inject_error == 0.0 and errors:
        return INVARIANT_FAILURE
    return OK


def _composed_value(f, g, x: int, y: int) -> int | None:
    mask = (1 << g.k) - 1
    z = 0
    for i in range(f.n):
        b = g.value((x >> (i * g.k)) & mask, (y >> (i * g.k)) & mask)
        if b is None:
            return None
        z |= b << i
    return f.value(z)


def _trial_line(t, x, y, out, expected, ledger) -> dict:
    return {
        "trial": t, "x": x, "y": y, "output": out, "expected": expected,
        "correct": out == expected,
        "bits_alice": ledger.bits_sent_alice,
        "bits_bob": ledger.bits_sent_bob,
        "subprotocol_bits": sum(c for _, c in ledger.subprotocol_invocations),
        "subprotocol_count": len(ledger.subprotocol_invocations),
        "total_bits": ledger.total,
        "notes": list(ledger.notes),
    }


BATCH_COLUMNS = ["f", "family", "k", "n", "degree", "rho", "sum_scaled",
                 "diff_scaled", "bound", "within_bound", "error"]


def batch_table(grid: dict) -> str:
    """Cross product of functions x families x k values, one CSV row per
    cell; per-cell failures land in the error column without aborting."""
    functions = grid.get("f", [None])
    families = grid.get("family", [])
    ks = grid.get("k", [])
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BATCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for path in functions:
        for family in families:
            for k in ks:
                row = {"f": path or "", "family": family, "k": k, "error": ""}
                try:
                    if path is not None:
                        f = load_function(path)
                        row["n"] = f.n
                        row["degree"] = approxdeg.approx_degree(
                            f, Fraction(1, 3)).degree
                    payload, _ = _cert_payload(family, k)
                    row["rho"] = payload["rho"]
                    row["sum_scaled"] = payload["sum_scaled"]
                    row["diff_scaled"] = payload["diff_scaled"]
                    row["bound"] = payload.get("bound_3_over_k",
                                               payload.get("bound_inv_sqrt_K_minus_1"))
                    row["within_bound"] = payload["within_bound"]
                except (ValueError, SizeGuardExceeded, OSError,
                        json.JSONDecodeError) as exc:
                    row["error"] = f"{type(exc).__name__}: {exc}"
                writer.writerow(row)
    return buf.getvalue()


def cmd_batch(args) -> int:
    with open(args.grid) as fh:
        grid = json.load(fh)
    text = batch_table(grid)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blockcomp",
        description="certified lower bounds for block-composed functions")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("approxdeg", help="approximate degree by exact LP")
    p.add_argument("--f", required=True)
    p.add_argument("--epsilon", default="1/3")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_approxdeg)

    p = sub.add_parser("witness", help="dual witness with verified properties")
    p.add_argument("--f", required=True)
    p.add_argument("--epsilon", default="1/3")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_witness)

    p = sub.add_parser("specdisc", help="spectral discrepancy certificate")
    p.add_argument("--family", choices=["ip", "disj"], required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_specdisc)

    p = sub.add_parser("knuth", help="exact intersection-matrix eigenvalues")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_knuth)

    p = sub.add_parser("mainlemma", help="full certification chain")
    p.add_argument("--f", required=True)
    p.add_argument("--family", choices=["ip", "disj"], required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--epsilon", default="1/3")
    p.add_argument("--epsilon-prime", default="1/6")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_mainlemma)

    p = sub.add_parser("reduce", help="padding reduction plan")
    p.add_argument("--f", required=True)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--k-override", type=int)
    p.add_argument("--n-prime-override", type=int)
    p.add_argument("--check-identity", action="store_true")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("simulate", help="protocol simulation with ledgers")
    p.add_argument("--protocol", choices=["bcw", "symand"], required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--g")
    p.add_argument("--g-family", choices=["and", "ip", "disj"], default="and")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--g-cost", type=int, default=2)
    p.add_argument("--repetitions", type=int, default=1)
    p.add_argument("--c-ham", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inject-error", type=float, default=0.0)
    p.add_argument("--dense", action="store_true")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("batch", help="CSV summary over a parameter grid")
    p.add_argument("--grid", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_batch)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = RunConfig(args.subcommand, args)
    try:
        config.validate()
        return args.fn(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError,
            SizeGuardExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
