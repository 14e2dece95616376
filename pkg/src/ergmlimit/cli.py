"""Command-line entry point: ``ergmlimit <subcommand> ...``.

Payloads go to stdout (or ``--out``), diagnostics to stderr. Exit codes:
0 success, 1 usage, 2 domain/region, 3 convergence, 4 size, 5 empty shell.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ErgmLimitError
from .graphs import (
    format_graph,
    graph_to_graphon,
    named_graph,
    read_graph,
    read_graphon,
    write_graphon,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _num(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        v = float(f"{float(x):.12g}")
        return v + 0.0
    if isinstance(x, dict):
        return {k: _num(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_num(v) for v in x]
    return x


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (float, np.floating)):
        return f"{float(x) + 0.0:.12g}"
    if x is None:
        return ""
    return str(x)


def _json(payload: dict, argv) -> str:
    body = dict(_num(payload))
    body["meta"] = {"version": __version__, "argv": list(argv)}
    return json.dumps(body) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(r[h]) for h in header])
    return buf.getvalue()


def _table(args, header, rows, argv, default="csv") -> str:
    fmt = args.format or default
    if fmt == "json":
        return _json({"rows": [{h: r[h] for h in header} for r in rows]}, argv)
    return _csv(header, rows)


def _record(args, payload: dict, argv, default="json") -> str:
    fmt = args.format or default
    if fmt == "csv":
        keys = [k for k, v in payload.items() if not isinstance(v, (dict, list))]
        return _csv(keys, [payload])
    return _json(payload, argv)


def _pattern(spec: str):
    return read_graph(spec) if Path(spec).exists() else named_graph(spec)


# --- subcommands --------------------------------------------------------------

def cmd_density(args, argv):
    from .functionals import edge_density, hom_density, triangle_density

    h = read_graphon(args.graphon) if args.graphon else graph_to_graphon(read_graph(args.graph))
    payload = {"edge_density": edge_density(h), "triangle_density": triangle_density(h)}
    if args.pattern:
        payload["hom_densities"] = {p: hom_density(_pattern(p), h) for p in args.pattern}
    return _record(args, payload, argv)


def cmd_entropy(args, argv):
    if args.graphon:
        from .functionals import rate_function

        I = rate_function(read_graphon(args.graphon))
        return _record(args, {"rate_function": I, "entropy": -I}, argv)
    if args.e is None or args.t is None:
        raise ErgmLimitError("entropy needs --graphon FILE or both --e and --t")
    from .variational import s_half_closed, s_numeric

    pt = s_half_closed(args.t) if args.e == 0.5 and not args.numeric else s_numeric(args.e, args.t, starts=args.starts)
    payload = dict(pt.row(), conjectural=pt.conjectural)
    return _record(args, payload, argv)


def cmd_cutnorm(args, argv):
    from .errors import SizeError
    from .functionals import cut_distance_upper, cut_norm

    a, b = read_graphon(args.a), read_graphon(args.b)
    payload = {"cut_norm": cut_norm(a, b)}
    try:
        payload["cut_distance_upper"] = cut_distance_upper(a, b)
    except SizeError as exc:
        print(f"cut distance skipped: {exc}", file=sys.stderr)
        payload["cut_distance_upper"] = None
    return _record(args, payload, argv)


def cmd_region(args, argv):
    from .variational import region_bounds

    t_min, t_max = region_bounds(args.e)
    return _record(args, {"t_min": t_min, "t_max": t_max}, argv)


def cmd_s_curve(args, argv):
    from .variational import s_curve

    ts = np.linspace(args.t_min, args.t_max, args.steps)
    pts = s_curve(args.e, ts, starts=args.starts)
    header = ["e", "t", "s", "c", "p11", "p12", "p22"]
    return _table(args, header, [p.row() for p in pts], argv)


def cmd_phase_scan(args, argv):
    from .phase import phase_scan

    grid = np.linspace(args.beta2_from, args.beta2_to, args.steps)
    if args.beta2_from < args.beta2_to:
        grid = grid[::-1]
    pts = phase_scan(args.e, grid)
    return _table(args, ["beta2", "psi", "t_star", "eps_star"], [p.row() for p in pts], argv)


def cmd_critical(args, argv):
    from .phase import critical_point

    return _record(args, critical_point(args.e, tol=args.tol).to_dict(), argv)


def cmd_critical_curve(args, argv):
    from .phase import critical_curve

    es = np.linspace(args.e_from, args.e_to, args.steps)
    rows = []
    for e, cp, err in critical_curve(es, tol=args.tol):
        if cp is None:
            print(f"critical point failed at e={e}: {err}", file=sys.stderr)
            rows.append({"e": e, "beta2_c": None, "t_c": None, "eps_c": None, "error": err})
        else:
            rows.append(dict(cp.to_dict(), error=None))
    return _table(args, ["e", "beta2_c", "t_c", "eps_c", "error"], rows, argv)


def cmd_el_solve(args, argv):
    from .euler_lagrange import ELConfig, el_fixed_point, recover_multipliers

    cfg = ELConfig(beta1=args.beta1, beta2=args.beta2, H2=_pattern(args.h2), blocks=args.blocks,
                   damping=args.damping, tol=args.tol, max_iter=args.max_iter)
    init = read_graphon(args.init) if args.init else None
    sol = el_fixed_point(cfg, init)
    payload = sol.to_dict()
    if sol.graphon.values.min() > 0 and sol.graphon.values.max() < 1:
        b1, b2, res, deg = recover_multipliers(sol.graphon, cfg.H2)
        payload["constrained_multipliers"] = {"beta1": b1, "beta2": b2, "residual": res, "degenerate": deg}
    if args.graphon_out:
        write_graphon(sol.graphon, args.graphon_out)
    return _json(payload, argv)


def cmd_enumerate(args, argv):
    from .enumeration import (
        EnumSpec,
        conditional_concentration,
        exact_conditional_psi,
        exact_psi_n,
    )

    spec = EnumSpec(args.n, args.beta1, args.beta2, args.e, args.alpha)
    res = exact_conditional_psi(spec, args.threads) if spec.conditional else exact_psi_n(spec, args.threads)
    payload = res.to_dict()
    if args.concentration:
        if args.reference is None or args.eta is None:
            raise ErgmLimitError("--concentration needs --reference FILE and --eta")
        mass_far, mean_t = conditional_concentration(spec, read_graphon(args.reference), args.eta)
        payload.update(mass_far=mass_far, mean_t=mean_t)
    return _record(args, payload, argv)


def cmd_sample(args, argv):
    from .sampling import SampleSpec, replicate_densities, sample_w_random

    h = read_graphon(args.graphon)
    if args.stats:
        rows = [{"seed": s, "e": e, "t": t}
                for s, e, t in replicate_densities(h, args.n, range(args.seed, args.seed + args.reps))]
        return _table(args, ["seed", "e", "t"], rows, argv)
    return format_graph(sample_w_random(SampleSpec(args.n, h, args.seed)))


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"])
    common.add_argument("--out", help="write the payload to FILE instead of stdout")
    common.add_argument("--threads", type=int, default=1)

    p = _Parser(prog="ergmlimit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        sp.set_defaults(func=fn)
        return sp

    sp = add("density", cmd_density, help="edge, triangle and pattern densities")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--graphon")
    src.add_argument("--graph")
    sp.add_argument("--pattern", action="append", help="graph file or name such as K3, C4, P3")

    sp = add("entropy", cmd_entropy, help="rate function of a graphon, or s(e, t)")
    sp.add_argument("--graphon")
    sp.add_argument("--e", type=float)
    sp.add_argument("--t", type=float)
    sp.add_argument("--starts", type=int, default=32)
    sp.add_argument("--numeric", action="store_true", help="use the bipodal search even at e = 1/2")

    sp = add("cutnorm", cmd_cutnorm, help="cut norm and cut-distance upper bound")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)

    sp = add("region", cmd_region, help="feasible triangle densities at edge density e")
    sp.add_argument("--e", type=float, required=True)

    sp = add("s-curve", cmd_s_curve, help="s(e, t) along a t grid")
    sp.add_argument("--e", type=float, required=True)
    sp.add_argument("--t-min", type=float, required=True)
    sp.add_argument("--t-max", type=float, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--starts", type=int, default=32)

    sp = add("phase-scan", cmd_phase_scan, help="psi and t_star over a beta2 grid")
    sp.add_argument("--e", type=float, required=True)
    sp.add_argument("--beta2-from", type=float, required=True)
    sp.add_argument("--beta2-to", type=float, required=True)
    sp.add_argument("--steps", type=int, required=True)

    sp = add("critical", cmd_critical, help="critical beta2 of the first-order transition")
    sp.add_argument("--e", type=float, required=True)
    sp.add_argument("--tol", type=float, default=1e-10)

    sp = add("critical-curve", cmd_critical_curve, help="critical points over an e grid")
    sp.add_argument("--e-from", type=float, required=True)
    sp.add_argument("--e-to", type=float, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--tol", type=float, default=1e-8)

    sp = add("el-solve", cmd_el_solve, help="damped Euler-Lagrange fixed point")
    sp.add_argument("--beta1", type=float, required=True)
    sp.add_argument("--beta2", type=float, required=True)
    sp.add_argument("--h2", required=True, help="graph file or name such as K3")
    sp.add_argument("--blocks", type=int, required=True)
    sp.add_argument("--damping", type=float, default=0.5)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--max-iter", type=int, default=10000)
    sp.add_argument("--init")
    sp.add_argument("--graphon-out")

    sp = add("enumerate", cmd_enumerate, help="exact finite-n normalization constants")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--beta1", type=float, required=True)
    sp.add_argument("--beta2", type=float, required=True)
    sp.add_argument("--e", type=float)
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--concentration", action="store_true")
    sp.add_argument("--reference")
    sp.add_argument("--eta", type=float)

    sp = add("sample", cmd_sample, help="W-random graph from a step graphon")
    sp.add_argument("--graphon", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--stats", action="store_true")
    sp.add_argument("--reps", type=int, default=1)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        out = args.func(args, argv)
    except ErgmLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return 2
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    return 0


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
