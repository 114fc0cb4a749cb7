"""Command line entry point.

Subcommands::

    finslerflat certify  --metric family --k 1 --c 1 --dim 3 --samples 1000 --out rep.json
    finslerflat geodesic --metric funk --x0 0.1,0,0 --y0 0.5,0.5,0 --out trace.csv
    finslerflat classify --k 1 --c 1
    finslerflat selftest --h 1e-5

Exit codes: 0 success, 1 certification failure, 2 configuration error,
3 I/O error.
"""

import argparse
import io
import sys

import numpy as np

from . import certify as cert
from .errors import DomainError
from .geometry import energy_drift, geodesic_integrate, straightness_residual, write_trace_csv
from .metrics import MetricSpec, f_solution, sample_domain
from .selftest import run_selftest

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3

FLATNESS = ("rapcsak", "dualflat", "coupled", "projective_factor", "dual_potential", "psi_pde")


class ConfigError(Exception):
    pass


def _vector(text):
    try:
        return np.array([float(t) for t in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _add_metric_args(p):
    p.add_argument("--metric", choices=["family", "funk", "euclidean", "perturbed"],
                   default="family")
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--dim", type=int, default=3)


def _add_run_args(p, tol_default):
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--samples", "--count", dest="count", type=int, default=1000)
    p.add_argument("--tol", type=float, default=tol_default)
    p.add_argument("--out", default=None)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="finslerflat",
        description="Numerical certification of projectively and dually flat "
                    "spherically symmetric Finsler metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", help="run every applicable residual check")
    _add_metric_args(p)
    _add_run_args(p, 1e-9)
    p.add_argument("--margin", type=float, default=0.1)

    p = sub.add_parser("geodesic", help="integrate a geodesic and measure straightness")
    _add_metric_args(p)
    _add_run_args(p, 1e-6)
    p.add_argument("--x0", type=_vector, required=True)
    p.add_argument("--y0", type=_vector, required=True)
    p.add_argument("--t-end", dest="t_end", type=float, default=0.5)
    p.add_argument("--step", type=float, default=1e-3)

    p = sub.add_parser("classify", help="check the classification chain for (k, c)")
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--dim", type=int, default=3)
    _add_run_args(p, 1e-8)

    p = sub.add_parser("selftest", help="jets vs finite differences")
    p.add_argument("--h", type=float, default=1e-5)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--samples", "--count", dest="count", type=int, default=100)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    return parser


def _metric(args):
    try:
        if args.metric == "family":
            return MetricSpec.family(args.k, args.c, args.dim)
        if args.metric == "funk":
            return MetricSpec.funk(args.dim)
        if args.metric == "euclidean":
            return MetricSpec.euclidean(args.dim)
        return MetricSpec.perturbed(args.k, args.c, args.dim)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _check_run(args):
    if args.count < 1:
        raise ConfigError("--samples must be >= 1")
    if not args.tol > 0:
        raise ConfigError("--tol must be positive")


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_certify(args):
    spec = _metric(args)
    _check_run(args)
    if not 0 < args.margin < 1:
        raise ConfigError("--margin must lie in (0, 1)")
    pts = sample_domain(spec, args.seed, max(args.count, 10), args.margin)
    c_hat, spread = cert.estimate_c(spec, pts)
    names = list(FLATNESS) + ["convexity"]
    if spec.kind in ("family", "funk"):
        names += ["spray_factor", "identities"]
    reports = []
    for name in names:
        reports.append(cert.aggregate(name, spec, args.seed, args.count, args.tol,
                                      args.margin, c=c_hat))
    reports.sort(key=lambda r: r.condition)
    text = cert.reports_to_json(reports)
    _emit(text, args.out)

    ok = True
    for r in reports:
        base = r.condition.split("(")[0]
        expect_pass = spec.projectively_flat or base not in FLATNESS
        status = "ok" if r.passed == expect_pass else "UNEXPECTED"
        if r.passed != expect_pass:
            ok = False
        print(f"{r.condition:32s} max={r.max_abs:.3e} pass={r.passed} [{status}]",
              file=sys.stderr)
    print(f"c_hat={c_hat!r} spread={spread:.3e}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_geodesic(args):
    spec = _metric(args)
    _check_run(args)
    if args.x0.shape != (spec.dim,) or args.y0.shape != (spec.dim,):
        raise ConfigError(f"--x0 and --y0 need {spec.dim} components")
    if not args.step > 0 or not args.t_end > 0:
        raise ConfigError("--step and --t-end must be positive")
    try:
        trace = geodesic_integrate(spec, args.x0, args.y0, args.t_end, args.step)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    buf = io.StringIO()
    write_trace_csv(trace, buf)
    if args.out is not None:
        _emit(buf.getvalue(), args.out)
    if trace.truncated:
        print(f"truncated: {trace.messages[-1]}")
    if len(trace) < 3:
        print("trace too short to measure straightness")
        return EXIT_OK
    resid = straightness_residual(trace)
    drift = energy_drift(trace)
    print(f"straightness_residual={format(resid, '.17g')}")
    print(f"energy_drift={format(drift, '.17g')}")
    print(f"states={len(trace)}")
    if spec.projectively_flat and resid > args.tol:
        return EXIT_FAIL
    return EXIT_OK


def classification_pipeline(k, c, dim=3, seed=42, count=1000, tol=1e-8, n_quad=50):
    """Run the ODE, identity, quadrature and closed-form checks for (k, c)."""
    spec = MetricSpec.family(k, c, dim)
    grid = [0.5 * i for i in range(21)]
    ode = cert.ode_residual(c, k, grid)

    worst = {}
    explicit = 0.0
    for p in sample_domain(spec, seed, count):
        res = cert.identity_suite(spec, p)
        for key, val in res.items():
            worst[key] = max(worst.get(key, 0.0), val)
        explicit = max(explicit, res["explicit_phi"])

    rng = np.random.default_rng(seed)
    R = spec.radius or 1.0
    quad = 0.0
    for _ in range(n_quad):
        r = rng.uniform(0.05, 0.9 * R)
        u1 = rng.uniform(0.5, 1.5)
        u2 = u1 + rng.uniform(0.1, 2.0)
        v = r * u1 * rng.uniform(-1.0, 1.0)
        quad = max(quad, cert.quadrature_reconstruction_check(spec, r, v, u1, u2))

    checks = {
        "ode_residual": ode,
        "identity_suite": max(worst.values()),
        "closed_form_equality": explicit,
        "quadrature_reconstruction": quad,
    }
    return {
        "f": {"formula": "1/sqrt(c^2 t + k)", "k": float(k), "c": float(c),
              "f(0)": f_solution(0.0, c, k)},
        "seed": int(seed),
        "samples": int(count),
        "quadrature_tuples": int(n_quad),
        "tol": float(tol),
        "identities": worst,
        "checks": checks,
        "pass": all(v <= tol for v in checks.values()),
    }


def cmd_classify(args):
    if not args.k > 0:
        raise ConfigError(f"k must be positive, got {args.k}")
    if args.dim < 2:
        raise ConfigError("--dim must be >= 2")
    _check_run(args)
    report = classification_pipeline(args.k, args.c, args.dim, args.seed, args.count,
                                     args.tol)
    _emit(cert.dumps(report), args.out)
    return EXIT_OK if report["pass"] else EXIT_FAIL


def cmd_selftest(args):
    if not args.h > 0:
        raise ConfigError("--h must be positive")
    res = run_selftest(args.h, args.count, args.seed, fault=args.inject_fault)
    print(f"max_grad_rel={res.grad_rel:.3e} (tol {res.grad_tol:g})")
    print(f"max_hess_rel={res.hess_rel:.3e} (tol {res.hess_tol:g})")
    print(f"poly_rel={res.poly_rel:.3e} (tol {res.poly_tol:g})")
    if not res.ok:
        print(f"worst case: {res.worst}")
        return EXIT_FAIL
    return EXIT_OK


COMMANDS = {
    "certify": cmd_certify,
    "geodesic": cmd_geodesic,
    "classify": cmd_classify,
    "selftest": cmd_selftest,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
