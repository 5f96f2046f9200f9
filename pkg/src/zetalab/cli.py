"""Command-line surface: zeros, test functions, Selberg check, experiments.

Exit codes: 0 success, 1 domain/config/usage error, 2 resource or IO error.
Every run that writes artifacts also writes a manifest JSON with the fully
resolved configuration, so reruns via ``--config manifest.json`` reproduce
the outputs byte for byte.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import platform
import sys

from . import __version__, experiment, linstat, testfns, zeros, zeta
from .errors import (
    ConfigError,
    CoverageError,
    DomainError,
    ParseError,
    ResourceError,
    ZetalabError,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.format_usage()}error: {message}")


def _versions() -> dict:
    import numpy
    import scipy

    return {
        "zetalab": __version__,
        "numpy": numpy.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
    }


def _write_manifest(path: str, command: str, config: dict) -> None:
    payload = {"command": command, "config": config, "versions": _versions()}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_config_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict) and "config" in data and isinstance(data["config"], dict):
        return data["config"]
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config file must hold a JSON object")
    return data


def _parse_lambda_rule(args) -> experiment.LambdaRule:
    if getattr(args, "lam", None) is not None:
        return experiment.LambdaRule.fixed(args.lam)
    rule = getattr(args, "lambda_rule", None)
    if rule is None:
        return experiment.LambdaRule.power()
    kind, _, rest = rule.partition(":")
    params = [float(p) for p in rest.split(",")] if rest else []
    if kind == "fixed":
        if len(params) != 1:
            raise ConfigError("lambda-rule fixed takes one parameter, e.g. fixed:3")
        return experiment.LambdaRule.fixed(params[0])
    if kind == "power":
        if len(params) not in (0, 1, 2):
            raise ConfigError("lambda-rule power takes up to two parameters")
        c = params[0] if params else 1.0
        beta = params[1] if len(params) > 1 else 0.7
        return experiment.LambdaRule.power(c, beta)
    raise ConfigError(f"unknown lambda rule {rule!r}; use fixed:L or power:c,beta")


def _experiment_flags(p: _Parser, multi_fn: bool = True):
    p.add_argument("--t", type=str, default=None,
                   help="height t, or comma list for t sweeps (e.g. 1e3,1e4)")
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="fixed zoom scale lambda")
    p.add_argument("--lambda-rule", type=str, default=None,
                   help="fixed:L or power:c,beta (lambda = c(log t)^beta)")
    p.add_argument("--alpha", type=float, default=None,
                   help="smoothing exponent, u = t^alpha (default 0.5)")
    p.add_argument("--samples", type=int, default=None, help="omega draws")
    p.add_argument("--seed", type=int, default=None, help="RNG seed")
    p.add_argument("--fn", action="append", default=None,
                   help="test function spec name:params, e.g. gaussian:0,1"
                   + ("; repeatable" if multi_fn else ""))
    p.add_argument("--side", type=str, default=None,
                   choices=["zero", "prime", "both"])
    p.add_argument("--normalize", type=str, default=None,
                   choices=["none", "sigma_t"])
    p.add_argument("--out", type=str, default=None, help="output directory")
    p.add_argument("--zeros-file", type=str, default=None,
                   help="precomputed zero table to use instead of computing")
    p.add_argument("--config", type=str, default=None,
                   help="JSON config (or manifest) merged under explicit flags")


def _build_parser() -> _Parser:
    p = _Parser(prog="zetalab", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--threads", type=int, default=None,
                   help="cap the BLAS/quadrature worker thread count")
    sub = p.add_subparsers(dest="verb", required=True)

    pz = sub.add_parser("zeros", help="compute, verify or import zero tables")
    zsub = pz.add_subparsers(dest="zverb", required=True)
    zc = zsub.add_parser("compute", help="find all zeros in a height range")
    zc.add_argument("--from", dest="t1", type=float, required=True)
    zc.add_argument("--to", dest="t2", type=float, required=True)
    zc.add_argument("--precision", type=float, default=1e-9)
    zc.add_argument("--out", type=str, required=True)
    zv = zsub.add_parser("verify", help="re-certify the count of a stored table")
    zv.add_argument("--table", type=str, required=True)
    zi = zsub.add_parser("import", help="ingest an external ordinate list")
    zi.add_argument("--in", dest="infile", type=str, required=True)
    zi.add_argument("--out", type=str, required=True)
    zi.add_argument("--height", type=float, default=None)
    zi.add_argument("--precision", type=float, default=None)
    zi.add_argument("--verify", action="store_true",
                    help="certify the count against a fresh scan")

    pf = sub.add_parser("fn", help="list or describe built-in test functions")
    fsub = pf.add_subparsers(dest="fverb", required=True)
    fsub.add_parser("list", help="list built-in families")
    fd = fsub.add_parser("describe", help="describe one function")
    fd.add_argument("--fn", type=str, required=True)

    ps = sub.add_parser("selberg-check",
                        help="defect of the four-term log-derivative formula")
    ps.add_argument("--sigma", type=float, required=True)
    ps.add_argument("--tau", type=float, required=True)
    ps.add_argument("--u", type=float, required=True)
    ps.add_argument("--zeros-file", type=str, default=None)

    pe = sub.add_parser("explicit-check",
                        help="residual of the explicit formula across t")
    _experiment_flags(pe)

    pc = sub.add_parser("clt", help="Monte Carlo normality experiment")
    _experiment_flags(pc)

    pv = sub.add_parser("cov", help="covariance vs the H^{1/2} Gram matrix")
    _experiment_flags(pv)

    pr = sub.add_parser("variance", help="truncated variance of a test function")
    pr.add_argument("--fn", type=str, required=True)
    pr.add_argument("--lambda", dest="lam", type=float, required=True)
    return p


# ---------------------------------------------------------------------------
# Verb implementations
# ---------------------------------------------------------------------------

def _cmd_zeros(args) -> int:
    if args.zverb == "compute":
        table = zeros.find_zeros(args.t1, args.t2, args.precision)
        zeros.save_zero_table(table, args.out)
        _write_manifest(args.out + ".manifest.json", "zeros compute", {
            "from": args.t1, "to": args.t2, "precision": args.precision,
            "out": args.out,
        })
        print(f"wrote {len(table)} zeros in [{args.t1:g}, {args.t2:g}] to {args.out}")
        return 0
    if args.zverb == "verify":
        table = zeros.load_zero_table(args.table, verify_count=True)
        print(f"verified count {len(table)} up to height {table.height:g} "
              f"(precision {table.precision:g})")
        return 0
    table = zeros.load_zero_table(
        args.infile, declared_height=args.height,
        declared_precision=args.precision, verify_count=args.verify,
    )
    zeros.save_zero_table(table, args.out)
    print(f"imported {len(table)} ordinates up to {table.height:g} to {args.out}")
    return 0


def _cmd_fn(args) -> int:
    if args.fverb == "list":
        for name in testfns.builtin_names():
            print(name)
        return 0
    f = testfns.builtin_from_spec(args.fn)
    rep = testfns.check_hypotheses(f)
    print(f"name: {f.name}")
    print(f"smoothness: {f.smoothness}")
    print(f"integral: {f.integral:.12g}")
    print(f"support radius (1e-10): {f.radius(1e-10):.6g}")
    hh = rep.details["h_half_norm_sq"]
    print(f"h_half_norm_sq: {'divergent' if math.isinf(hh) else format(hh, '.12g')}")
    print(f"smooth-CLT admissible: {rep.smooth_clt_admissible}")
    print(f"normalized-CLT admissible: {rep.normalized_clt_admissible}")
    return 0


def _cmd_selberg(args) -> int:
    s = zeta.ComplexPoint(sigma=args.sigma, tau=args.tau)
    if args.zeros_file:
        table = zeros.load_zero_table(args.zeros_file)
    else:
        table = zeros.cached_zero_table(float(math.ceil(abs(args.tau) + 60.0)))
    dec = zeta.selberg_decomposition(s, args.u, table)
    print(f"A_u = {dec.a_u:.12g}")
    print(f"B_u = {dec.b_u:.12g} (zeros to {dec.b_u_truncation_height:g}, "
          f"tail <= {dec.b_u_tail_bound:.3g})")
    print(f"C_u = {dec.c_u:.12g}")
    print(f"D_u = {dec.d_u:.12g}")
    print(f"defect = {dec.defect:.6g}")
    return 0


def _resolved_config(args, default_side: str) -> experiment.ExperimentConfig:
    base: dict = {}
    if args.config:
        base = _load_config_file(args.config)
    if args.t is not None:
        base["t_list"] = [float(x) for x in str(args.t).split(",")]
    if args.lam is not None or args.lambda_rule is not None:
        base["lambda_rule"] = _parse_lambda_rule(args)
    elif isinstance(base.get("lambda_rule"), dict):
        base["lambda_rule"] = experiment.LambdaRule(**base["lambda_rule"])
    if args.alpha is not None:
        base["alpha"] = args.alpha
    if args.samples is not None:
        base["n_samples"] = args.samples
    if args.seed is not None:
        base["seed"] = args.seed
    if args.fn:
        base["functions"] = list(args.fn)
    if args.side is not None:
        base["side"] = args.side
    if args.normalize is not None:
        base["normalize"] = args.normalize
    if args.out is not None:
        base["output"] = args.out
    base.setdefault("side", default_side)
    base.setdefault("alpha", 0.5)
    base.setdefault("seed", 1)
    missing = [k for k in ("t_list", "n_samples", "functions") if k not in base]
    if missing:
        raise ConfigError(f"missing required settings: {missing} "
                          "(use --t/--samples/--fn or --config)")
    return experiment.ExperimentConfig(**base)


def _zero_table_arg(args):
    if getattr(args, "zeros_file", None):
        return zeros.load_zero_table(args.zeros_file)
    return None


def _cmd_explicit(args) -> int:
    config = _resolved_config(args, default_side="both")
    rows = experiment.run_explicit_check(config, zero_table=_zero_table_arg(args))
    if config.output:
        _write_manifest(os.path.join(config.output, "manifest.json"),
                        "explicit-check", config.to_dict())
    for r in rows:
        print(f"{r['function']} t={r['t']:g} lambda={r['lambda']:.4g} "
              f"mean|res|={r['mean_abs_residual']:.6g} "
              f"max|res|={r['max_abs_residual']:.6g} "
              f"envelope={r['envelope']:.6g}")
    return 0


def _cmd_clt(args) -> int:
    config = _resolved_config(args, default_side="prime")
    stats = experiment.run_clt(config, zero_table=_zero_table_arg(args))
    if config.output:
        _write_manifest(os.path.join(config.output, "manifest.json"),
                        "clt", config.to_dict())
    for (name, t), s in stats.items():
        print(f"{name} t={t:g}: n={s.n} mean={s.mean:.6g} var={s.variance:.6g} "
              f"(theory {s.theoretical_variance:.6g}) skew={s.skewness:.4g} "
              f"exkurt={s.excess_kurtosis:.4g} ks={s.ks_distance:.4g}")
    return 0


def _cmd_cov(args) -> int:
    config = _resolved_config(args, default_side="zero")
    emp, theo, frob = experiment.run_covariance(
        config, zero_table=_zero_table_arg(args)
    )
    if config.output:
        _write_manifest(os.path.join(config.output, "manifest.json"),
                        "cov", config.to_dict())
    print("empirical:", json.dumps(emp.tolist()))
    print("theoretical:", json.dumps(theo.tolist()))
    print(f"frobenius_relative_distance: {frob:.6g}")
    return 0


def _cmd_variance(args) -> int:
    f = testfns.builtin_from_spec(args.fn)
    var = testfns.sigma_t_sq(f, args.lam)
    hh = testfns.h_half_inner(f, f)
    print(f"sigma_t_sq({f.name}, lambda={args.lam:g}) = {var:.12g}")
    if math.isinf(hh):
        print("h_half_norm_sq: divergent")
    else:
        print(f"h_half_norm_sq: {hh:.12g}")
    return 0


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    if args.threads is not None:
        if args.threads < 1:
            print("error: --threads must be >= 1", file=sys.stderr)
            return 1
        import threadpoolctl

        threadpoolctl.threadpool_limits(args.threads)
    try:
        if args.verb == "zeros":
            return _cmd_zeros(args)
        if args.verb == "fn":
            return _cmd_fn(args)
        if args.verb == "selberg-check":
            return _cmd_selberg(args)
        if args.verb == "explicit-check":
            return _cmd_explicit(args)
        if args.verb == "clt":
            return _cmd_clt(args)
        if args.verb == "cov":
            return _cmd_cov(args)
        if args.verb == "variance":
            return _cmd_variance(args)
        raise ConfigError(f"unknown verb {args.verb!r}")
    except (ResourceError, CoverageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, ConfigError, ZetalabError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
