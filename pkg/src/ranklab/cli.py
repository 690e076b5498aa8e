"""Command-line front end: ``ranklab {qcomb,codes,dep,sim,figure1,selftest} ...``.

Exit status: 0 on success, 1 when selftest finds a failing check, 2 on a
precondition violation, 3 when an enumeration would exceed the budget.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import codes, dep, qcomb, sim
from .constants import Bound, constants
from .errors import AmbiguousRadius, BudgetExceeded, ParameterViolation
from .gf import Subspace, parse_matrix, prime_power

RANK_DEPS = ["rank-exact", "rank-mrd", "rank-bound", "rank-asymptotic", "rank-symmetric", "rank-dmt", "rank-dmt-lower"]
CDC_DEPS = ["cdc-subspace", "cdc-subspace-bound", "cdc-subspace-asymptotic", "cdc-subspace-dmt", "cdc-subspace-dmt-lower",
            "cdc-injection", "cdc-injection-bound"]


# -- rendering ------------------------------------------------------------------

def rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def value_fields(x) -> dict:
    """Exact and float renderings of a count, a probability or a certified bound."""
    if x is None:
        return {"value_rational": None, "value_float": None}
    if isinstance(x, Bound):
        return {
            "value_rational": None,
            "value_symbolic": f"{x.factor}*{x.q}^({rational(x.exponent)})",
            "value_float": x.value,
            "bound_factor": x.factor,
            "exponent_rational": rational(x.exponent),
            "interval": [x.lower, x.upper],
        }
    out = {"value_rational": rational(x), "value_float": float(x)}
    if dep.is_no_output(x):
        out["no_output"] = True
    return out


def record(command: str, params: dict, value=None, rows=None, **extra) -> dict:
    out = {"command": command, "params": params}
    if value is not None:
        out.update(value_fields(value))
    out.update(extra)
    if rows is not None:
        out["rows"] = rows
    return out


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: "" if v is None else v for k, v in row.items()})
    return buf.getvalue()


def emit(rec: dict, args) -> None:
    if getattr(args, "csv", False) and "rows" in rec:
        text = to_csv(rec["rows"])
    else:
        text = json.dumps(rec, indent=2) + "\n"
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# -- argument helpers -------------------------------------------------------------

def need(args, *names: str) -> None:
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise ParameterViolation(f"{args.command}: missing --{', --'.join(missing)}")


def params_of(args, *names: str) -> dict:
    return {n: getattr(args, n) for n in names if getattr(args, n, None) is not None}


def load_rank_code(args) -> codes.RankCode:
    if args.code:
        return codes.read_codebook(args.code)
    need(args, "q", "m", "n")
    if args.k is None:
        need(args, "d")
    k = args.k if args.k is not None else args.n - args.d + 1
    return codes.gabidulin_build(codes.GabidulinSpec(args.q, args.m, args.n, k))


def load_cdc(args) -> codes.Cdc:
    if args.cdc:
        return codes.read_cdc(args.cdc)
    if args.code:
        return codes.lift_code(codes.read_codebook(args.code))
    need(args, "q", "n", "r", "d")
    return codes.kk_code(args.q, args.r, args.n, args.d)


def pick_codeword(code, index: int):
    if not 0 <= index < len(code):
        raise ParameterViolation(f"codeword index {index} out of range (code has {len(code)})")
    return code.codewords[index]


def error_row_space(args, code: codes.RankCode) -> Subspace:
    F = code.field
    if args.rowspace:
        A = parse_matrix(args.rowspace.replace(";", "\n"), F, code.n)
        return Subspace.span(F, code.n, A.rows)
    need(args, "u")
    if not 0 <= args.u <= code.n:
        raise ParameterViolation(f"u must lie in [0, {code.n}]")
    return Subspace.unit(F, code.n, range(args.u))


# -- subcommands ------------------------------------------------------------------

def cmd_qcomb(args) -> dict:
    what = args.what
    q = args.q
    if what == "constants":
        need(args, "q")
        c = constants(q)
        return record("qcomb constants", {"q": q}, None, K=value_fields(Bound.make(q, "K", 0)),
                      L=value_fields(Bound.make(q, "L", 0)), H={"value_rational": rational(c.H), "value_float": float(c.H)})
    table = {
        "alpha": (("q", "m", "u"), lambda: qcomb.alpha(q, args.m, args.u)),
        "gaussian": (("q", "n", "r"), lambda: qcomb.gaussian(q, args.n, args.r)),
        "n-rank": (("q", "m", "n", "u"), lambda: qcomb.n_rank(q, args.m, args.n, args.u)),
        "v-rank": (("q", "m", "n", "t"), lambda: qcomb.v_rank(q, args.m, args.n, args.t)),
        "j-rank": (("q", "m", "n", "u", "s", "d"), lambda: qcomb.j_rank(q, args.m, args.n, args.u, args.s, args.d)),
        "n-sub": (("q", "n", "r", "s", "d"), lambda: qcomb.n_sub(q, args.n, args.r, args.s, args.d)),
        "n-inj": (("q", "n", "r", "s", "d"), lambda: qcomb.n_inj(q, args.n, args.r, args.s, args.d)),
        "j-sub": (("q", "n", "u", "s", "w", "a", "b", "c"),
                  lambda: qcomb.j_sub(q, args.n, args.u, args.s, args.w, args.a, args.b, args.c)),
        "f": (("n", "r", "s", "t"), lambda: qcomb.f_exponent(args.n, args.r, args.s, args.t)),
        "sum-ns-bound": (("q", "n", "r", "s", "t"), lambda: qcomb.sum_ns_bound(q, args.n, args.r, args.s, args.t)),
    }
    names, fn = table[what]
    need(args, *names)
    return record(f"qcomb {what}", params_of(args, *names), fn())


def cmd_codes(args) -> dict:
    what = args.what
    if what in ("mrd-weight", "crc-bound"):
        need(args, "q", "m", "n", "d", "r")
        fn = codes.mrd_weight_distribution if what == "mrd-weight" else codes.crc_upper_bound
        return record(f"codes {what}", params_of(args, "q", "m", "n", "d", "r"), fn(args.q, args.m, args.n, args.d, args.r))
    if what == "lift":
        cdc = codes.lift_code(load_rank_code(args))
        text = codes.format_cdc(cdc)
        if args.out:
            Path(args.out).write_text(text)
            args.out = None
        C = pick_codeword(cdc, args.codeword)
        dist = codes.distance_distribution(cdc, C)
        rows = [{"w": w, "A_w": a} for w, a in enumerate(dist.counts)]
        return record("codes lift", params_of(args, "q", "m", "n", "d", "k", "code"), len(cdc),
                      n=cdc.n, r=cdc.r, min_injection_distance=cdc.d, rows=rows)
    code = load_rank_code(args)
    if what == "gabidulin" and args.out:
        codes.write_codebook(args.out, code)
        args.out = None
    C = pick_codeword(code, args.codeword)
    dist = codes.distance_distribution(code, C)
    rows = [{"w": w, "A_w": a} for w, a in enumerate(dist.counts)]
    return record(f"codes {what}", params_of(args, "q", "m", "n", "d", "k", "code"), len(code),
                  m=code.m, n=code.n, d=code.d, rows=rows)


def _value_row(value, **keys) -> dict:
    row = dict(keys)
    row.update(value_fields(value))
    return row


BOUND_KIND = {
    "rank-bound": "upper", "rank-asymptotic": "upper", "rank-dmt-lower": "lower",
    "cdc-subspace-bound": "upper", "cdc-subspace-asymptotic": "upper", "cdc-subspace-dmt-lower": "lower",
    "cdc-injection-bound": "upper",
}


def cmd_dep(args) -> dict:
    rec = _dep(args)
    if args.what != "figure1":
        rec.setdefault("bound_kind", BOUND_KIND.get(args.what, "exact"))
        rec = {k: rec[k] for k in sorted(rec, key=lambda k: k == "rows")}
    return rec


def _dep(args) -> dict:
    what = args.what
    if what == "figure1":
        return cmd_figure1(args)
    if what in ("rank-mrd", "rank-bound"):
        need(args, "q", "m", "n", "d")
        fn = dep.dep_rank_mrd if what == "rank-mrd" else dep.dep_rank_bound
        p = params_of(args, "q", "m", "n", "d", "t")
        if args.u is not None:
            return record(f"dep {what}", {**p, "u": args.u}, fn(args.q, args.m, args.n, args.d, args.u, args.t))
        rows = [_value_row(fn(args.q, args.m, args.n, args.d, u, args.t), u=u) for u in range(min(args.m, args.n) + 1)]
        return record(f"dep {what}", p, rows=rows)
    if what in ("rank-asymptotic", "rank-dmt-lower"):
        need(args, "q", "m", "n", "d")
        fn = dep.dep_rank_asymptotic if what == "rank-asymptotic" else dep.kk_mrd_dmt_lower
        kind = "upper" if what == "rank-asymptotic" else "lower"
        return record(f"dep {what}", params_of(args, "q", "m", "n", "d"), fn(args.q, args.m, args.n, args.d), bound_kind=kind)
    if what in ("rank-exact", "rank-symmetric", "rank-dmt"):
        code = load_rank_code(args)
        C = pick_codeword(code, args.codeword)
        p = {**params_of(args, "q", "m", "n", "d", "k", "code", "t", "u", "rowspace"), "codeword": args.codeword}
        if what == "rank-dmt":
            return record(f"dep {what}", p, dep.dep_rank_dmt(code, C, args.t))
        if what == "rank-symmetric":
            need(args, "u")
            return record(f"dep {what}", p, dep.dep_rank_symmetric(code, C, args.u, args.t))
        U = error_row_space(args, code)
        return record(f"dep {what}", {**p, "u": U.dim}, dep.dep_rank_exact(code, C, U, args.t))
    if what in ("cdc-subspace-bound", "cdc-subspace-asymptotic", "cdc-subspace-dmt-lower", "cdc-injection-bound"):
        need(args, "q", "n", "r", "d")
        q, n, r, d = args.q, args.n, args.r, args.d
        if what == "cdc-subspace-bound":
            fn, kind = (lambda u, v: dep.dep_cdc_subspace_lifting_bound(q, n, r, d, u, v)), "upper"
        elif what == "cdc-subspace-asymptotic":
            fn, kind = (lambda u, v: dep.dep_cdc_subspace_asymptotic(q, n, r, d, v)), "upper"
        elif what == "cdc-subspace-dmt-lower":
            fn, kind = (lambda u, v: dep.kk_subspace_dmt_lower(q, n, r, d, v)), "lower"
        else:
            t = (d - 1) // 2 if args.t is None else args.t
            fn, kind = (lambda u, v: dep.dep_cdc_injection_bound(q, n, r, d, t, v)), "upper"
        p = params_of(args, "q", "n", "r", "d", "t", "u", "v")
        if what == "cdc-subspace-bound":
            need(args, "u", "v")
        else:
            need(args, "v")
        return record(f"dep {what}", p, fn(args.u, args.v), bound_kind=kind)
    cdc = load_cdc(args)
    C = pick_codeword(cdc, args.codeword)
    p = {**params_of(args, "q", "n", "r", "d", "code", "cdc", "t"), "codeword": args.codeword}
    if what == "cdc-subspace-dmt":
        need(args, "v")
        return record(f"dep {what}", {**p, "v": args.v}, dep.dep_cdc_subspace_dmt(cdc, C, args.v))
    if what == "cdc-subspace":
        if args.u is not None and args.v is not None:
            return record(f"dep {what}", {**p, "u": args.u, "v": args.v}, dep.dep_cdc_subspace_exact(cdc, C, args.u, args.v))
        rows = [_value_row(dep.dep_cdc_subspace_exact(cdc, C, u, v), u=u, v=v)
                for v in range(cdc.n + 1) for u in range(cdc.n + 1) if qcomb.n_sub(cdc.q, cdc.n, cdc.r, v, u)]
        return record(f"dep {what}", p, rows=rows)
    if args.mu is not None and args.v is not None:
        return record(f"dep {what}", {**p, "mu": args.mu, "v": args.v},
                      dep.dep_cdc_injection_exact(cdc, C, args.mu, args.v, args.t))
    rows = []
    for v in range(cdc.n + 1):
        for mu in range(cdc.n + 1):
            val = dep.dep_cdc_injection_exact(cdc, C, mu, v, args.t)
            if not dep.is_no_output(val):
                rows.append(_value_row(val, mu=mu, v=v))
    return record(f"dep {what}", p, rows=rows)


def cmd_figure1(args) -> dict:
    need(args, "n", "r", "d", "t")
    rows = [
        {
            "v": row.v,
            "subspace_exponent": None if row.subspace is None else rational(row.subspace),
            "injection_exponent": None if row.injection is None else rational(row.injection),
        }
        for row in dep.figure1_exponents(args.n, args.r, args.d, args.t)
    ]
    return record("figure1", params_of(args, "n", "r", "d", "t"), rows=rows)


def cmd_sim(args) -> dict:
    need(args, "trials", "seed")
    config = sim.SimConfig(args.seed, args.trials, workers=args.workers)
    if args.channel == "operator":
        code = load_cdc(args)
        C = pick_codeword(code, args.codeword)
        if args.eps is not None and args.rho is not None:
            channel = sim.OperatorChannel(args.eps, args.rho)
        elif args.mu is not None and args.v is not None:
            channel = sim.OperatorChannel.from_mu_v(code.r, args.mu, args.v)
        else:
            need(args, "u", "v")
            channel = sim.OperatorChannel.from_uv(code.r, args.u, args.v)
        decoder = args.decoder or "subspace"
        params = {"channel": "operator", "eps": channel.eps, "rho": channel.rho, "decoder": decoder}
        res = sim.estimate_dep(config, channel, code, C, decoder, args.t if decoder == "injection" else None)
    else:
        code = load_rank_code(args)
        C = pick_codeword(code, args.codeword)
        if args.channel == "rank-symmetric":
            need(args, "u")
            channel = sim.RankChannel(args.u)
        else:
            channel = sim.RowSpaceChannel(error_row_space(args, code))
        params = {"channel": args.channel, "u": args.u if args.channel == "rank-symmetric" else channel.U.dim}
        res = sim.estimate_dep(config, channel, code, C, radius=args.t)
    params.update(trials=args.trials, seed=args.seed, workers=args.workers)
    return record("sim", params, res.estimate_exact, result=res.to_dict())


def cmd_selftest(args) -> tuple[dict, int]:
    from .selftest import CHECKS, run_checks

    if args.only:
        unknown = [n for n in args.only if n not in CHECKS]
        if unknown:
            raise ParameterViolation(f"unknown checks {unknown}; choose from {sorted(CHECKS)}")
    results = run_checks(args.only, args.code)
    for r in results:
        sys.stderr.write(f"{'PASS' if r.ok else 'FAIL'} {r.name}: {r.detail}\n")
    rows = [{"check": r.name, "ok": r.ok, "detail": r.detail} for r in results]
    failed = [r.name for r in results if not r.ok]
    return record("selftest", params_of(args, "only", "code"), rows=rows, failed=failed), (1 if failed else 0)


# -- parser -------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    for name in ("q", "m", "n", "r", "d", "t", "u", "v", "mu", "k", "s", "w", "a", "b", "c", "eps", "rho"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--code", help="codebook file (header 'q m n N')")
    p.add_argument("--cdc", help="CDC file (header 'q n r N')")
    p.add_argument("--codeword", type=int, default=0, help="index of the sent codeword")
    p.add_argument("--rowspace", help="error row space as rows, e.g. '1 0 0;0 1 0'")
    out = p.add_mutually_exclusive_group()
    out.add_argument("--json", action="store_true", help="JSON output (default)")
    out.add_argument("--csv", action="store_true", help="CSV output for sweeps")
    p.add_argument("--out", help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ranklab", description="Decoder error probability of rank-metric and subspace codes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("qcomb", help="q-analog counting")
    p.add_argument("what", choices=["alpha", "gaussian", "n-rank", "v-rank", "j-rank", "n-sub", "n-inj", "j-sub", "f",
                                    "sum-ns-bound", "constants"])
    _common(p)

    p = sub.add_parser("codes", help="build codes and distance distributions")
    p.add_argument("what", choices=["gabidulin", "distribution", "mrd-weight", "crc-bound", "lift"])
    _common(p)

    p = sub.add_parser("dep", help="analytic decoder error probabilities")
    p.add_argument("what", choices=RANK_DEPS + CDC_DEPS + ["figure1"])
    _common(p)

    p = sub.add_parser("sim", help="Monte Carlo estimate")
    p.add_argument("--channel", choices=["row-space", "rank-symmetric", "operator"], default="row-space")
    p.add_argument("--decoder", choices=["subspace", "injection"])
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, default=1)
    _common(p)

    p = sub.add_parser("figure1", help="bound exponents per output dimension")
    _common(p)

    p = sub.add_parser("selftest", help="run the desk-scale check suite")
    p.add_argument("--only", nargs="+", help="check names")
    p.add_argument("--code", help="codebook to check")
    p.add_argument("--out")
    return parser


HANDLERS = {"qcomb": cmd_qcomb, "codes": cmd_codes, "dep": cmd_dep, "sim": cmd_sim, "figure1": cmd_figure1}


def validate(args) -> None:
    """Reject malformed parameters before any work is done."""
    q = getattr(args, "q", None)
    if q is not None:
        prime_power(q)
    for name in ("m", "n", "r", "d", "t", "u", "v", "mu", "k", "s", "w", "a", "b", "c", "eps", "rho", "trials", "seed"):
        val = getattr(args, name, None)
        if val is not None and val < 0:
            raise ParameterViolation(f"--{name} must be non-negative, got {val}")
    if getattr(args, "workers", 1) < 1:
        raise ParameterViolation("--workers must be at least 1")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        validate(args)
        if args.command == "selftest":
            rec, status = cmd_selftest(args)
            emit(rec, args)
            return status
        emit(HANDLERS[args.command](args), args)
        return 0
    except BudgetExceeded as exc:
        sys.stderr.write(f"ranklab: budget exceeded: {exc}\n")
        return 3
    except (ParameterViolation, AmbiguousRadius, OSError) as exc:
        sys.stderr.write(f"ranklab: {type(exc).__name__}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
