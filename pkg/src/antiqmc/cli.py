"""Command line interface: ``antiqmc {gen,integrate,convergence,search,wce}``."""

from __future__ import annotations

import argparse
import sys

from .digits import pi_exact
from .hopl import ErrorBoundParams, HoplSpec, default_modulus, hopl_net, search_q
from .net import read_net
from .poly import PolyZb
from .qmc import convergence_study, integrate, make_function
from .sobol import sobol_net
from .sobolev import SobolevSpaceParams, worst_case_error
from .weights import parse_weights


def _on_off(text: str) -> bool:
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return text == "on"


def _mrange(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            return range(int(text), int(text) + 1)
        a, z = int(lo), int(hi)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}") from exc
    if z < a:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return range(a, z + 1)


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _add_net_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--net", default="sobol",
                   help="'sobol', 'hopl', or a net description file")
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--m", type=int, default=8)
    p.add_argument("--dirfile", default=None, help="direction-number file for sobol")
    p.add_argument("--b", type=int, default=2, help="base for hopl")
    p.add_argument("--hopl-n", type=int, default=None, help="modulus degree (default m)")
    p.add_argument("--hopl-p", type=int, default=None,
                   help="modulus as integer code (default smallest irreducible)")
    p.add_argument("--hopl-q", type=_int_list, default=None,
                   help="generating vector as comma-separated integer codes")


def _build_net(args):
    if args.net == "sobol":
        return sobol_net(args.s, args.m, dirfile=args.dirfile)
    if args.net == "hopl":
        n = args.m if args.hopl_n is None else args.hopl_n
        p = default_modulus(n, args.b) if args.hopl_p is None else PolyZb.from_int(args.hopl_p, args.b)
        if args.hopl_q is None or len(args.hopl_q) != args.s:
            raise ValueError(f"--hopl-q needs {args.s} comma-separated codes")
        q = tuple(PolyZb.from_int(c, args.b) for c in args.hopl_q)
        return hopl_net(HoplSpec(args.b, args.m, n, p, q))
    return read_net(args.net)


def cmd_gen(args, out) -> int:
    net = _build_net(args)
    if args.antithetic:
        net = net.antithetic()
    if args.format == "rational":
        for z in net.points():
            out.write(" ".join(str(pi_exact(zj)) for zj in z) + "\n")
    else:
        for row in net.points_array():
            out.write(" ".join(repr(float(v)) for v in row) + "\n")
    return 0


def cmd_integrate(args, out) -> int:
    f = make_function(args.func, args.s, args.theta, args.zeta, args.w)
    net = sobol_net(args.s, args.m, dirfile=args.dirfile)
    exact = f.exact_integral()
    out.write("variant,N,estimate,exact,abs_error\n")
    variants = ["plain", "antithetic"] if args.variant == "both" else [args.variant]
    for v in variants:
        use = net if v == "plain" else net.antithetic()
        est = integrate(f, use.points_array())
        out.write(f"{v},{use.n_points},{est!r},{exact!r},{abs(est - exact)!r}\n")
    return 0


def cmd_convergence(args, out) -> int:
    f = make_function(args.func, args.s, args.theta, args.zeta, args.w)
    res = convergence_study(f, args.mrange, generator=args.generator, variant=args.variant,
                            dirfile=args.dirfile, fit_window=args.fit_window, seed=args.seed)
    if args.out:
        res.to_csv(args.out)
    else:
        res.to_csv(out)
    for v, slope in res.slopes.items():
        steps = " ".join(f"{x:.3f}" for x in res.step_slopes[v])
        print(f"# {v}: fitted slope {slope:.4f}; per-step {steps}", file=sys.stderr)
    for flag in res.flags:
        print(f"# {flag}", file=sys.stderr)
    return 0


def cmd_search(args, out) -> int:
    weights = parse_weights(args.weights, args.s)
    params = ErrorBoundParams(args.alpha, args.lam, weights, args.trunc)
    p = default_modulus(args.n, args.b)
    res = search_q(p, args.m, params, strategy=args.strategy, trials=args.trials,
                   seed=args.seed, n_jobs=args.n_jobs)
    out.write(f"modulus: {p} (code {p.to_int()})\n")
    out.write("q: " + ", ".join(f"{qj} (code {qj.to_int()})" for qj in res.q) + "\n")
    out.write(f"truncated_bound: {res.bound.truncated!r}\n")
    out.write(f"tail_bound: {res.bound.tail!r}\n")
    out.write(f"certified_total: {res.bound.total!r}\n")
    return 0


def cmd_wce(args, out) -> int:
    net = _build_net(args)
    params = SobolevSpaceParams(args.alpha, parse_weights(args.weights, net.s))
    plain = worst_case_error(params, net.points_array())
    anti = ""
    if args.antithetic:
        anti = repr(worst_case_error(params, net.antithetic().points_array()))
    out.write("N,wce_plain,wce_antithetic\n")
    out.write(f"{net.n_points},{plain!r},{anti}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="antiqmc", description="b-adic antithetic QMC toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="print the points of a net, one per line")
    _add_net_args(g)
    g.add_argument("--antithetic", type=_on_off, default=False, help="on|off")
    g.add_argument("--format", choices=["decimal", "rational"], default="decimal")
    g.set_defaults(handler=cmd_gen)

    for name, helptext in (("integrate", "integrate a test function with one net"),
                           ("convergence", "error versus N over a range of m")):
        c = sub.add_parser(name, help=helptext)
        c.add_argument("--func", choices=["f1", "f2", "f3"], required=True)
        c.add_argument("--theta", type=float, default=0.1)
        c.add_argument("--zeta", type=float, default=1.0)
        c.add_argument("--w", type=float, default=0.5)
        c.add_argument("--s", type=int, required=True)
        c.add_argument("--variant", choices=["plain", "antithetic", "both"], default="both")
        c.add_argument("--dirfile", default=None)
        if name == "integrate":
            c.add_argument("--m", type=int, required=True)
            c.set_defaults(handler=cmd_integrate)
        else:
            c.add_argument("--mrange", type=_mrange, required=True, help="a..b")
            c.add_argument("--generator", choices=["sobol", "hopl"], default="sobol")
            c.add_argument("--fit-window", type=int, default=5)
            c.add_argument("--seed", type=int, default=0)
            c.add_argument("--out", default=None, help="CSV path (default stdout)")
            c.set_defaults(handler=cmd_convergence)

    s = sub.add_parser("search", help="search a generating vector for a polynomial lattice")
    s.add_argument("--b", type=int, default=2)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--s", type=int, required=True)
    s.add_argument("--alpha", type=int, default=2)
    s.add_argument("--lambda", dest="lam", type=float, default=1.0)
    s.add_argument("--weights", default="product:1")
    s.add_argument("--strategy", choices=["exhaustive", "random"], default="exhaustive")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trunc", type=int, default=None, help="index digits K (default n+4)")
    s.add_argument("--n-jobs", type=int, default=1)
    s.set_defaults(handler=cmd_search)

    w = sub.add_parser("wce", help="worst-case error in the weighted Sobolev space")
    _add_net_args(w)
    w.add_argument("--alpha", type=int, default=2)
    w.add_argument("--weights", default="product:1")
    w.add_argument("--antithetic", type=_on_off, default=True, help="on|off")
    w.set_defaults(handler=cmd_wce)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args, out)
    except (ValueError, ZeroDivisionError, OSError) as exc:
        print(f"antiqmc {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
