"""Command-line entry point.

Subcommands expose the verification, enumeration, evaluation and sampling
operations with JSON reports on stdout (or --out).  Exit codes: 0 on
success/verified, 1 on an identity mismatch (the report carries the first
failing coefficient), 2 on usage errors.  A JSON config file can preload any
flag; explicit flags win.  Identical configuration and seed produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import acceptance, cache, cylindric, fock, macdonald, plancherel, process
from .partitions import make_partition
from .scalars import format_rational, parse_rational, random_qt_pair
from .series import SeriesRing, TruncSeries


class UsageError(Exception):
    pass


def _parse_partition(text: str) -> tuple:
    text = text.strip()
    if not text or text in ("0", "[]", "empty"):
        return ()
    try:
        return make_partition(int(p) for p in text.replace(" ", "").split(","))
    except ValueError as exc:
        raise UsageError(f"bad partition {text!r}: {exc}")


def _parse_q_t(args):
    try:
        q = parse_rational(args.q)
        t = parse_rational(args.t)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational: {exc}")
    if not getattr(args, "algebraic_point", False):
        if not (0 < q < 1 and 0 < t < 1):
            raise UsageError("q and t must lie in (0,1); "
                             "pass --algebraic-point to override")
    return q, t


def _spec_from_name(name: str, side: str, index: int, ring):
    name = name.strip().lower()
    if name == "zero":
        return macdonald.zero_spec()
    if name == "alpha":
        sym = f"{'a' if side == '+' else 'b'}{index}"
        return macdonald.alpha_spec([(sym, 1)], ring, label=f"alpha{side}{index}")
    if name == "plancherel":
        xi = ring.gen("g") * (ring.one() - ring.gen("u"))
        return macdonald.plancherel_spec(xi, ring)
    raise UsageError(f"unknown specialization {name!r} "
                     "(expected zero | alpha | plancherel)")


def _ring_symbols_for(spec_names, N):
    symbols = ["u"]
    if any(s == "plancherel" for s in spec_names):
        symbols.append("g")
    for i, s in enumerate(spec_names[:N]):
        if s == "alpha":
            symbols.append(f"a{i}")
    for j, s in enumerate(spec_names[N:], start=1):
        if s == "alpha":
            symbols.append(f"b{j}")
    return symbols


def _series_payload(ts: TruncSeries) -> dict:
    return ts.to_json()


def _first_mismatch(a: TruncSeries, b: TruncSeries):
    """First differing coefficient between two series, None when equal."""
    exps = sorted(set(a.terms) | set(b.terms))
    for e in exps:
        ca = a.terms.get(e, 0)
        cb = b.terms.get(e, 0)
        if ca != cb:
            return {"exp": dict(zip(a.ring.symbols, e)),
                    "formula": str(ca), "oracle": str(cb)}
    return None


def _emit(args, payload: dict) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2, default=str)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


# ---------------------------------------------------------------------------
# subcommand handlers (return process exit status)
# ---------------------------------------------------------------------------


def cmd_macdonald_expand(args) -> int:
    q, t = _parse_q_t(args)
    lam = _parse_partition(args.lam)
    if args.basis == "m":
        table = macdonald.macdonald_P(lam, q, t) if args.kind == "P" \
            else macdonald.macdonald_Q(lam, q, t)
    else:
        table = macdonald.macdonald_P_p(lam, q, t) if args.kind == "P" \
            else macdonald.macdonald_Q_p(lam, q, t)
    payload = {
        "quantity": f"{args.kind}_lambda in {args.basis} basis",
        "params": {"lambda": list(lam), "q": args.q, "t": args.t},
        "coefficients": {",".join(map(str, mu)): format_rational(c)
                         for mu, c in sorted(table.items())},
    }
    _emit(args, payload)
    return 0


def cmd_macdonald_pieri(args) -> int:
    q, t = _parse_q_t(args)
    lam = _parse_partition(args.lam)
    mu = _parse_partition(args.mu)
    try:
        psi, phi = macdonald.pieri(lam, mu, q, t)
    except ValueError as exc:
        raise UsageError(str(exc))
    _emit(args, {
        "quantity": "pieri coefficients",
        "params": {"lambda": list(lam), "mu": list(mu), "q": args.q, "t": args.t},
        "psi": format_rational(psi),
        "phi": format_rational(phi),
    })
    return 0


def _build_process(args):
    q, t = _parse_q_t(args)
    N = args.N
    plus_names = (args.spec_plus.split(";") * N)[:N]
    minus_names = (args.spec_minus.split(";") * N)[:N]
    symbols = _ring_symbols_for(plus_names + minus_names, N)
    ring = SeriesRing(symbols, args.u_deg)
    plus = [_spec_from_name(s, "+", i, ring) for i, s in enumerate(plus_names)]
    minus = [_spec_from_name(s, "-", j, ring)
             for j, s in enumerate(minus_names, start=1)]
    return process.ProcessSpec(ring, q, t, ring.gen("u"), plus, minus)


def cmd_process_partition_function(args) -> int:
    ps = _build_process(args)
    closed = process.partition_function_closed(ps)
    brute = process.partition_function_bruteforce(ps, args.u_deg)
    match = closed == brute
    _emit(args, {
        "quantity": "periodic partition function",
        "params": {"N": args.N, "q": args.q, "t": args.t,
                   "specs": [args.spec_plus, args.spec_minus]},
        "cutoffs": {"grade": args.u_deg},
        "series": _series_payload(closed),
        "oracle_match": match,
        "max_abs_discrepancy": "0" if match else "nonzero",
        "first_mismatch": _first_mismatch(closed, brute),
    })
    return 0 if match else 1


def cmd_process_moment(args) -> int:
    ps = _build_process(args)
    series_r = [(args.series, args.r)] * args.N
    formula = process.moment_formula(ps, series_r)
    brute = process.moment_bruteforce(ps, series_r, args.u_deg)
    match = formula == brute
    _emit(args, {
        "quantity": f"moment of {args.series}_{args.r}",
        "params": {"N": args.N, "q": args.q, "t": args.t,
                   "specs": [args.spec_plus, args.spec_minus]},
        "cutoffs": {"grade": args.u_deg},
        "series": _series_payload(formula),
        "oracle_match": match,
        "max_abs_discrepancy": "0" if match else "nonzero",
        "first_mismatch": _first_mismatch(formula, brute),
    })
    return 0 if match else 1


def cmd_process_shift_mixed(args) -> int:
    q, t = _parse_q_t(args)
    try:
        zeta = parse_rational(args.zeta)
    except ValueError as exc:
        raise UsageError(str(exc))
    ring = SeriesRing(["v"], args.v_deg)
    u = ring.monomial(Fraction(1), v=2)
    ps = process.ProcessSpec(ring, q, t, u,
                             [macdonald.zero_spec()], [macdonald.zero_spec()])
    formula = process.shift_mixed_moment_formula(ps, args.r, "v", zeta)
    brute = process.shift_mixed_moment_bruteforce(ps, args.r, "v", zeta,
                                                  args.v_deg)
    match = formula == brute
    _emit(args, {
        "first_mismatch": _first_mismatch(formula, brute),
        "quantity": f"shift-mixed moment, r={args.r}",
        "params": {"q": args.q, "t": args.t, "zeta": args.zeta},
        "cutoffs": {"v": args.v_deg},
        "series": _series_payload(formula),
        "oracle_match": match,
        "max_abs_discrepancy": "0" if match else "nonzero",
    })
    return 0 if match else 1


def cmd_plancherel_sample(args) -> int:
    q, t = _parse_q_t(args)
    times = [float(x) for x in args.times.split(",")]
    spec = plancherel.TrajectorySpec(args.beta, args.gamma, times,
                                     args.depth, args.seed, args.count)
    trajs = plancherel.sample_trajectories(spec, q, t)
    text = plancherel.trajectories_to_jsonl(trajs)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_plancherel_check(args) -> int:
    q, t = _parse_q_t(args)
    ring = SeriesRing(["g"], args.gamma_deg)
    defect = plancherel.semigroup_defect(
        ring.gen("g"), parse_rational(args.u), parse_rational(args.v),
        args.depth, q, t, reserve=args.reserve, mode="exact", ring=ring)
    chi = plancherel.marginal_chi_square(args.gamma, args.beta, args.depth,
                                         q, t, samples=args.samples,
                                         seed=args.seed)
    ok = defect == 0 and chi["p_value"] > 0.01
    _emit(args, {
        "quantity": "plancherel process checks",
        "params": {"q": args.q, "t": args.t, "gamma": args.gamma,
                   "beta": args.beta, "depth": args.depth,
                   "reserve": args.reserve, "seed": args.seed},
        "semigroup_defect": str(defect),
        "chi_square": chi,
        "verified": ok,
    })
    return 0 if ok else 1


def cmd_cylindric_enumerate(args) -> int:
    q, t = _parse_q_t(args)
    profile = cylindric.CylindricProfile(args.N, _parse_profile(args.M))
    _emit(args, cylindric.cp_dump(profile, args.max_weight, q, t))
    return 0


def _parse_profile(text: str):
    text = text.strip()
    if not text:
        return ()
    return tuple(int(x) for x in text.replace(" ", "").split(","))


def cmd_cylindric_verify(args) -> int:
    q, t = _parse_q_t(args)
    profile = cylindric.CylindricProfile(args.N, _parse_profile(args.M))
    report = cylindric.macmahon_verify(profile, args.s_deg, q, t)
    _emit(args, report)
    return 0 if report["verified"] else 1


def cmd_vertex_verify(args) -> int:
    q, t = _parse_q_t(args)
    rng = random.Random(args.seed)
    from .scalars import random_rational

    checks = {
        "empty_profile_trace": cylindric.cor_b2_check(args.grade, q, t)["match"],
        "signature_lemma": cylindric.lemma_b4_check(
            args.grade, random_rational(rng))["match"],
    }
    if args.nu:
        nu = _parse_partition(args.nu)
        b1 = cylindric.thm_b1_check(nu, max(2, args.grade - 1),
                                    max(2, args.grade - 1), q, t)
        checks["profile_trace"] = b1["match"]
    ok = all(checks.values())
    _emit(args, {"quantity": "vertex trace verification",
                 "params": {"q": args.q, "t": args.t, "grade": args.grade,
                            "nu": args.nu},
                 "checks": checks, "verified": ok})
    return 0 if ok else 1


def cmd_fock_trace_check(args) -> int:
    rng = random.Random(args.seed)
    failures = []
    for trial in range(args.trials):
        q, t = random_qt_pair(rng)
        ring = SeriesRing(["u", "a", "b"], args.u_deg)
        gp, gm = {}, {}
        for n in (1, 2):
            ca = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
            cb = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
            if ca:
                gp[n] = ring.monomial(ca, a=n)
            if cb:
                gm[n] = ring.monomial(cb, b=n)
        spec = fock.VertexSpec(gp, gm)
        closed = fock.trace_closed(spec, ring, "u", q, t)
        brute = fock.trace_bruteforce(
            lambda v: fock.vertex_apply(spec, v, q, t, degree_cap=args.u_deg),
            ring, "u", args.u_deg, q, t)
        if closed != brute:
            failures.append({"trial": trial, "q": str(q), "t": str(t)})
    _emit(args, {"quantity": "vertex trace closed vs brute force",
                 "params": {"trials": args.trials, "u_deg": args.u_deg,
                            "seed": args.seed},
                 "failures": failures, "verified": not failures})
    return 0 if not failures else 1


def cmd_verify_all(args) -> int:
    out = acceptance.run_all(seed=args.seed,
                             echo=(None if args.out else
                                   lambda line: print(line, file=sys.stderr)))
    _emit(args, out)
    return 0 if out["passed"] else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_qt(p, required=True):
    p.add_argument("--q", default="1/3", help="rational q as num/den")
    p.add_argument("--t", default="1/5", help="rational t as num/den")
    p.add_argument("--algebraic-point", action="store_true",
                   help="allow q, t outside (0,1)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="permac",
        description="exact verification engine for periodic Macdonald processes")
    ap.add_argument("--config", help="JSON file with default flag values")
    ap.add_argument("--out", help="write the JSON report here instead of stdout")
    ap.add_argument("--cache-dir", help="directory for coefficient-table caches")
    ap.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)

    # the same bookkeeping flags are accepted after the subcommand; SUPPRESS
    # keeps a leaf from clobbering a value given at the top level
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)
    common.add_argument("--cache-dir", dest="cache_dir",
                        default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    sub = ap.add_subparsers(dest="command")

    def leaf(group, name):
        return group.add_parser(name, parents=[common])

    mac = sub.add_parser("macdonald").add_subparsers(dest="subcommand")
    me = leaf(mac, "expand")
    me.add_argument("--lambda", dest="lam", required=True)
    me.add_argument("--basis", choices=["m", "p"], default="m")
    me.add_argument("--kind", choices=["P", "Q"], default="P")
    _add_qt(me)
    me.set_defaults(handler=cmd_macdonald_expand)
    mp = leaf(mac, "pieri")
    mp.add_argument("--lambda", dest="lam", required=True)
    mp.add_argument("--mu", required=True)
    _add_qt(mp)
    mp.set_defaults(handler=cmd_macdonald_pieri)

    proc = sub.add_parser("process").add_subparsers(dest="subcommand")
    pf = leaf(proc, "partition-function")
    pf.add_argument("--N", type=int, default=1)
    pf.add_argument("--spec-plus", default="alpha")
    pf.add_argument("--spec-minus", default="alpha")
    pf.add_argument("--u-deg", type=int, default=4)
    _add_qt(pf)
    pf.set_defaults(handler=cmd_process_partition_function)
    pm = leaf(proc, "moment")
    pm.add_argument("--series", choices=["E", "E'", "G", "G'"], default="E")
    pm.add_argument("--r", type=int, default=1)
    pm.add_argument("--N", type=int, default=1)
    pm.add_argument("--spec-plus", default="zero")
    pm.add_argument("--spec-minus", default="zero")
    pm.add_argument("--u-deg", type=int, default=5)
    _add_qt(pm)
    pm.set_defaults(handler=cmd_process_moment)
    psm = leaf(proc, "shift-mixed")
    psm.add_argument("--r", type=int, default=1)
    psm.add_argument("--zeta", default="2/3")
    psm.add_argument("--v-deg", type=int, default=6)
    _add_qt(psm)
    psm.set_defaults(handler=cmd_process_shift_mixed)

    pl = sub.add_parser("plancherel").add_subparsers(dest="subcommand")
    pls = leaf(pl, "sample")
    pls.add_argument("--gamma", type=float, default=0.8)
    pls.add_argument("--beta", type=float, default=1.0)
    pls.add_argument("--times", default="0.0")
    pls.add_argument("--depth", type=int, default=6)
    pls.add_argument("--count", type=int, default=100)
    _add_qt(pls)
    pls.set_defaults(handler=cmd_plancherel_sample)
    plc = leaf(pl, "check")
    plc.add_argument("--gamma", type=float, default=0.85)
    plc.add_argument("--beta", type=float, default=1.0)
    plc.add_argument("--u", default="1/2")
    plc.add_argument("--v", default="1/3")
    plc.add_argument("--depth", type=int, default=8)
    plc.add_argument("--reserve", type=int, default=4)
    plc.add_argument("--gamma-deg", type=int, default=6)
    plc.add_argument("--samples", type=int, default=20000)
    _add_qt(plc)
    plc.set_defaults(handler=cmd_plancherel_check)

    cyl = sub.add_parser("cylindric").add_subparsers(dest="subcommand")
    ce = leaf(cyl, "enumerate")
    ce.add_argument("--N", type=int, required=True)
    ce.add_argument("--M", default="")
    ce.add_argument("--max-weight", type=int, default=4)
    _add_qt(ce)
    ce.set_defaults(handler=cmd_cylindric_enumerate)
    cv = leaf(cyl, "verify-macmahon")
    cv.add_argument("--N", type=int, required=True)
    cv.add_argument("--M", default="")
    cv.add_argument("--s-deg", type=int, default=5)
    _add_qt(cv)
    cv.set_defaults(handler=cmd_cylindric_verify)

    vx = sub.add_parser("vertex").add_subparsers(dest="subcommand")
    vv = leaf(vx, "verify")
    vv.add_argument("--grade", type=int, default=4)
    vv.add_argument("--nu", default="")
    _add_qt(vv)
    vv.set_defaults(handler=cmd_vertex_verify)

    fk = sub.add_parser("fock").add_subparsers(dest="subcommand")
    ft = leaf(fk, "trace-check")
    ft.add_argument("--u-deg", type=int, default=5)
    ft.add_argument("--trials", type=int, default=3)
    ft.set_defaults(handler=cmd_fock_trace_check)

    ver = sub.add_parser("verify").add_subparsers(dest="subcommand")
    va = leaf(ver, "all")
    va.set_defaults(handler=cmd_verify_all)

    return ap


def _merge_config(args, argv) -> None:
    """Overlay JSON config values onto the namespace; explicit flags win."""
    path = getattr(args, "config", None)
    if not path:
        return
    try:
        with open(path) as fh:
            conf = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad config file: {exc}")
    for key, val in conf.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise UsageError(f"unknown config key {key!r} for this subcommand")
        flag = "--" + key.replace("_", "-")
        if flag in argv:
            continue  # explicit flag wins
        setattr(args, attr, val)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        _merge_config(args, argv)
        if args.cache_dir:
            cache.configure(args.cache_dir)
        handler = getattr(args, "handler", None)
        if handler is None:
            ap.print_help(sys.stderr)
            return 2
        return handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
