"""Command-line front end: fit CSV data, simulate datasets, run benchmark
sweeps, and run the oracle agreement suite.

Exit codes: 0 ok, 1 diagnose failure, 2 input error, 3 sampler error.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from .diagnostics import estimation_error, summarize
from .errors import BadShape, NonFiniteInput, SliceRegError
from .model import Dataset, compute_sufficient_stats
from .oracles import conjugate_ridge_posterior, quadrature_posterior_moments
from .priors import PriorSpec
from .sampler import SamplerConfig, run_chain
from .simulation import DgpConfig, gen_dataset

PRIOR_CHOICES = ("flat", "horseshoe", "laplace", "ridge", "sharkfin", "nonlocal")


class InputError(Exception):
    """CSV/flag problems that should exit with code 2."""


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _fmt_short(v: float) -> str:
    return format(float(v), ".10g")


# ---------------------------------------------------------------- parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slicereg",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_sampler_flags(p):
        p.add_argument("--prior", choices=PRIOR_CHOICES, default="horseshoe")
        p.add_argument("--q", type=float, default=0.5,
                       help="shark-fin prior probability of a negative coefficient")
        p.add_argument("--lambda", dest="lam", type=float, default=1.0,
                       help="global scale: initial value, or fixed with --fix-lambda")
        p.add_argument("--fix-lambda", action="store_true")
        p.add_argument("--sigma2", type=float, default=1.0,
                       help="noise variance: initial value, or fixed with --fix-sigma2")
        p.add_argument("--fix-sigma2", action="store_true")
        p.add_argument("--draws", type=int, default=11000,
                       help="total iterations including burn-in")
        p.add_argument("--burnin", type=int, default=1000)
        p.add_argument("--block-size", type=int, default=1,
                       help="coefficients per Gibbs block; >= p means one full block")
        p.add_argument("--ridge-c", type=float, default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--engine", choices=("auto", "python", "numba"), default="auto")
        p.add_argument("--config", default=None,
                       help="key=value file mirroring these flags; flags win")

    fit = sub.add_parser("fit", help="sample the posterior for a CSV dataset")
    fit.add_argument("input", help="CSV file with a header row")
    fit.add_argument("--response", default="y", help="response column name")
    fit.add_argument("--intercept", action="store_true",
                     help="prepend a ones column with a flat prior")
    fit.add_argument("--out-prefix", default=None,
                     help="output prefix (default: input path without extension)")
    add_sampler_flags(fit)

    sim = sub.add_parser("simulate", help="write a simulated dataset and its truth")
    sim.add_argument("--p", type=int, required=True)
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--kappa", type=float, default=1.0)
    sim.add_argument("--structure", choices=("independent", "factor"), default="independent")
    sim.add_argument("--sparsity", type=int, default=None)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out-prefix", default="simulated")
    sim.add_argument("--config", default=None)

    bench = sub.add_parser("benchmark", help="error/ESS-per-second sweep over a grid")
    bench.add_argument("--p-list", default="100", help="comma-separated p values")
    bench.add_argument("--n-mult-list", default="10", help="comma-separated n/p multipliers")
    bench.add_argument("--kappa-list", default="1", help="comma-separated kappa values")
    bench.add_argument("--prior-list", default="horseshoe",
                       help="comma-separated prior names")
    bench.add_argument("--structure", choices=("independent", "factor"), default="independent")
    bench.add_argument("--replicates", type=int, default=1)
    bench.add_argument("--sparsity", type=int, default=None)
    bench.add_argument("--out", default="benchmark_results.csv")
    add_sampler_flags(bench)

    diag = sub.add_parser("diagnose", help="run the oracle agreement suite")
    diag.add_argument("--seed", type=int, default=0)
    diag.add_argument("--engine", choices=("auto", "python", "numba"), default="auto")
    diag.add_argument("--inject-prior-bug", action="store_true", help=argparse.SUPPRESS)
    diag.add_argument("--config", default=None)

    return parser


def _inject_config_file(argv: list[str]) -> list[str]:
    """Splice key=value file entries in as flags, before the user's own flags."""
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
            break
        if tok.startswith("--config="):
            path = tok.split("=", 1)[1]
            break
    if path is None or not argv:
        return argv
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read config file {path}: {exc}") from exc
    tokens: list[str] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path} line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        flag = "--" + key.replace("_", "-")
        if value.lower() in ("true", "yes", "1") and key in (
                "fix-lambda", "fix_lambda", "fix-sigma2", "fix_sigma2", "intercept"):
            tokens.append(flag)
        elif value.lower() in ("false", "no", "0") and key in (
                "fix-lambda", "fix_lambda", "fix-sigma2", "fix_sigma2", "intercept"):
            continue
        else:
            tokens.extend([flag, value])
    # insert right after the subcommand so explicit flags override
    return argv[:1] + tokens + argv[1:]


def _parse_list(text: str, cast, flag: str) -> list:
    try:
        return [cast(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise InputError(f"{flag}: cannot parse {text!r}") from exc


# ---------------------------------------------------------------- csv io


def _read_csv_dataset(path: str, response: str) -> tuple[list[str], np.ndarray, np.ndarray]:
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise InputError(f"cannot open {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if response not in header:
            raise InputError(f"{path}: no column named {response!r} in header {header}")
        y_col = header.index(response)
        x_cols = [i for i in range(len(header)) if i != y_col]
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise InputError(f"{path} line {lineno}: expected {len(header)} fields, got {len(row)}")
            try:
                rows.append([float(cell) for cell in row])
            except ValueError:
                bad = next(cell for cell in row if not _is_float(cell))
                raise InputError(f"{path} line {lineno}: could not parse {bad!r} as a number") from None
        if not rows:
            raise InputError(f"{path}: no data rows")
    mat = np.asarray(rows, dtype=np.float64)
    names = [header[i] for i in x_cols]
    return names, mat[:, x_cols], mat[:, y_col]


def _is_float(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def _write_draws_csv(path: Path, names: list[str], draws) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"beta_{n}" for n in names] + ["sigma2", "lambda"])
        for row in draws.draws:
            writer.writerow([_fmt(v) for v in row])


def _write_summary_csv(path: Path, names: list[str], summ) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["name", "mean", "sd", "q2.5", "q97.5", "ess"])
        cols = names + ["sigma2", "lambda"]
        for j, name in enumerate(cols):
            writer.writerow([name, _fmt_short(summ.mean[j]), _fmt_short(summ.sd[j]),
                             _fmt_short(summ.q2_5[j]), _fmt_short(summ.q97_5[j]),
                             _fmt_short(summ.ess[j])])
        writer.writerow(["ess_per_second", _fmt_short(summ.ess_per_second), "", "", "", ""])
        writer.writerow(["wall_time", _fmt_short(summ.wall_time_seconds), "", "", "", ""])
        writer.writerow(["rejections_per_iteration",
                         _fmt_short(summ.rejections_per_iteration), "", "", "", ""])


# ---------------------------------------------------------------- commands


def _build_prior(name: str, q: float, intercept: bool, p_x: int) -> PriorSpec:
    if intercept and name != "flat":
        families = ("flat",) + (name,) * p_x
        spec = PriorSpec.mixed(families, q=q)
    elif name == "flat":
        spec = PriorSpec.flat()
    elif name == "sharkfin":
        spec = PriorSpec.sharkfin(q=q)
    elif name == "nonlocal":
        spec = PriorSpec.nonlocal_mix()
    else:
        spec = PriorSpec(family=name)
    return spec


def _sampler_config(args, p: int) -> SamplerConfig:
    blocking = "singleton" if args.block_size <= 1 else (
        "full" if args.block_size >= p else None)
    if blocking is None:
        from .model import Blocking
        blocking = Blocking.chunked(p, args.block_size)
    return SamplerConfig(
        n_draws=args.draws, burn_in=args.burnin, blocking=blocking,
        ridge_c=args.ridge_c, sample_sigma2=not args.fix_sigma2,
        sample_lambda=not args.fix_lambda, sigma2_init=args.sigma2,
        lambda_init=args.lam, seed=args.seed, engine=args.engine,
    )


def cmd_fit(args) -> int:
    names, X, y = _read_csv_dataset(args.input, args.response)
    if args.intercept:
        names = ["intercept"] + names
        X = np.hstack([np.ones((X.shape[0], 1)), X])
    data = Dataset(X=X, y=y)
    prior = _build_prior(args.prior, args.q, args.intercept,
                         len(names) - (1 if args.intercept else 0))
    config = _sampler_config(args, data.p)
    draws = run_chain(data, prior, config)
    summ = summarize(draws)
    prefix = Path(args.out_prefix) if args.out_prefix else Path(args.input).with_suffix("")
    draws_path = prefix.with_name(prefix.name + ".draws.csv")
    summary_path = prefix.with_name(prefix.name + ".summary.csv")
    _write_draws_csv(draws_path, names, draws)
    _write_summary_csv(summary_path, names, summ)
    print(f"wrote {draws_path} and {summary_path}")
    return 0


def cmd_simulate(args) -> int:
    config = DgpConfig(p=args.p, n=args.n, regressor_kind=args.structure,
                       kappa=args.kappa, sparsity=args.sparsity, seed=args.seed)
    data, beta, sigma = gen_dataset(config)
    prefix = Path(args.out_prefix)
    data_path = prefix.with_name(prefix.name + ".data.csv")
    truth_path = prefix.with_name(prefix.name + ".truth.csv")
    names = [f"x{j + 1}" for j in range(args.p)]
    with open(data_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["y"] + names)
        for i in range(args.n):
            writer.writerow([_fmt(data.y[i])] + [_fmt(v) for v in data.X[i]])
    with open(truth_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["name", "value"])
        for j, name in enumerate(names):
            writer.writerow([f"beta_{name}", _fmt(beta[j])])
        writer.writerow(["sigma", _fmt(sigma)])
    print(f"wrote {data_path} and {truth_path}")
    return 0


BENCH_COLUMNS = ["prior", "p", "n", "kappa", "structure", "replicate",
                 "ols_error", "slice_error", "min_ess", "median_ess",
                 "ess_per_second", "rejections_per_iter", "wall_time"]


def cmd_benchmark(args) -> int:
    p_list = _parse_list(args.p_list, int, "--p-list")
    nmult_list = _parse_list(args.n_mult_list, int, "--n-mult-list")
    kappa_list = _parse_list(args.kappa_list, float, "--kappa-list")
    priors = _parse_list(args.prior_list, str, "--prior-list")
    for name in priors:
        if name not in PRIOR_CHOICES:
            raise InputError(f"--prior-list: unknown prior {name!r}")
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(BENCH_COLUMNS)
        for prior_name in priors:
            for p in p_list:
                for nmult in nmult_list:
                    for kappa in kappa_list:
                        for rep in range(args.replicates):
                            row = _benchmark_cell(args, prior_name, p, nmult * p,
                                                  kappa, rep)
                            writer.writerow(row)
                            fh.flush()
                            print(f"done: {prior_name} p={p} n={nmult * p} "
                                  f"kappa={kappa} rep={rep} "
                                  f"slice_error={row[7]}", file=sys.stderr)
    print(f"wrote {args.out}")
    return 0


def _benchmark_cell(args, prior_name: str, p: int, n: int, kappa: float, rep: int) -> list:
    data_seed = args.seed + rep
    chain_seed = args.seed + rep + 500_009
    dgp = DgpConfig(p=p, n=n, regressor_kind=args.structure, kappa=kappa,
                    sparsity=args.sparsity, seed=data_seed)
    data, beta_true, _sigma = gen_dataset(dgp)
    ols = compute_sufficient_stats(data).center
    ols_error = estimation_error(ols, beta_true)
    prior = _build_prior(prior_name, args.q, False, p)
    config = _sampler_config(args, p)
    config.seed = chain_seed
    draws = run_chain(data, prior, config)
    summ = summarize(draws, beta_true)
    return [prior_name, p, n, _fmt_short(kappa), args.structure, rep,
            _fmt_short(ols_error), _fmt_short(summ.error),
            _fmt_short(summ.min_ess), _fmt_short(summ.median_ess),
            _fmt_short(summ.ess_per_second),
            _fmt_short(summ.rejections_per_iteration),
            _fmt_short(summ.wall_time_seconds)]


# ---------------------------------------------------------------- diagnose


def _diag_problem(seed: int, p: int, n: int) -> Dataset:
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    beta = rng.standard_normal(p)
    y = X @ beta + rng.normal(0.0, 1.0, size=n)
    return Dataset(X=X, y=y)


def _check_conjugate_vs_quadrature(seed: int) -> tuple[bool, str]:
    data = _diag_problem(seed, p=2, n=40)
    stats = compute_sufficient_stats(data)
    post = conjugate_ridge_posterior(stats, lam=0.8, sigma2=1.3)
    mean, var = quadrature_posterior_moments(data, PriorSpec.ridge(), sigma2=1.3, lam=0.8)
    err = max(np.max(np.abs(mean - post.mean)),
              np.max(np.abs(var - np.diag(post.covariance))))
    return err < 1e-4, f"max deviation {err:.2e}"


def _check_flat_quadrature(seed: int) -> tuple[bool, str]:
    data = _diag_problem(seed, p=1, n=30)
    stats = compute_sufficient_stats(data)
    sigma2 = 0.9
    mean, var = quadrature_posterior_moments(data, PriorSpec.flat(), sigma2=sigma2, lam=1.0)
    target_var = sigma2 / stats.raw_gram[0, 0]
    err = max(abs(mean[0] - stats.center[0]), abs(var[0] - target_var))
    return err < 1e-4, f"max deviation {err:.2e}"


def _check_chain_vs_conjugate(seed: int, engine: str, broken: bool) -> tuple[bool, str]:
    data = _diag_problem(seed, p=2, n=30)
    stats = compute_sufficient_stats(data)
    lam, sigma2 = 0.7, 1.0
    post = conjugate_ridge_posterior(stats, lam=lam, sigma2=sigma2)
    if broken:
        # deliberately mis-scaled density; the chain then samples the wrong
        # posterior and the agreement check must flag it
        bad_lam = lam / 3.0
        prior = PriorSpec.user_defined(
            lambda beta, _lam: float(-0.5 * np.sum((beta / bad_lam) ** 2)),
            sample_lambda=False)
        engine = "python"
    else:
        prior = PriorSpec.ridge()
    config = SamplerConfig(n_draws=8000, burn_in=1000, seed=seed + 1, engine=engine,
                           sample_sigma2=False, sample_lambda=False,
                           sigma2_init=sigma2, lambda_init=lam)
    draws = run_chain(data, prior, config)
    summ = summarize(draws)
    sds = np.sqrt(np.diag(post.covariance))
    ess = np.nan_to_num(summ.ess[:2], nan=1.0)
    tol = 4.0 * sds / np.sqrt(ess) + 1e-4
    dev = np.abs(summ.mean[:2] - post.mean)
    return bool(np.all(dev < tol)), f"mean deviation {dev} vs tolerance {tol}"


def _check_horseshoe_shrinkage(seed: int) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((25, 1))
    y = 0.15 * X[:, 0] + rng.normal(0.0, 1.0, size=25)
    data = Dataset(X=X, y=y)
    stats = compute_sufficient_stats(data)
    mean, _var = quadrature_posterior_moments(data, PriorSpec.horseshoe(), sigma2=1.0, lam=1.0)
    ols = stats.center[0]
    shrunk = abs(mean[0]) < abs(ols) and (mean[0] == 0 or np.sign(mean[0]) == np.sign(ols))
    return shrunk, f"posterior mean {mean[0]:.4f} vs OLS {ols:.4f}"


def cmd_diagnose(args) -> int:
    checks = [
        ("conjugate-vs-quadrature ridge agreement",
         lambda: _check_conjugate_vs_quadrature(args.seed)),
        ("flat-prior quadrature matches the Gaussian factor",
         lambda: _check_flat_quadrature(args.seed)),
        ("slice chain matches the conjugate ridge oracle",
         lambda: _check_chain_vs_conjugate(args.seed, args.engine, args.inject_prior_bug)),
        ("horseshoe quadrature shrinks a weak signal toward zero",
         lambda: _check_horseshoe_shrinkage(args.seed)),
    ]
    failures = 0
    for name, runner in checks:
        ok, detail = runner()
        status = "PASS" if ok else "FAIL"
        print(f"{status}: {name} ({detail})")
        failures += 0 if ok else 1
    if failures:
        print(f"{failures} of {len(checks)} checks failed")
        return 1
    print(f"all {len(checks)} checks passed")
    return 0


# ---------------------------------------------------------------- entry


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        argv = _inject_config_file(argv)
        args = parser.parse_args(argv)
        if args.command == "fit":
            return cmd_fit(args)
        if args.command == "simulate":
            return cmd_simulate(args)
        if args.command == "benchmark":
            return cmd_benchmark(args)
        return cmd_diagnose(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (BadShape, NonFiniteInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SliceRegError as exc:
        print(f"sampler error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
