"""Command-line harness: reproducible experiments from a JSON config.

Every subcommand takes exactly one positional argument, the config path.
Outputs are deterministic: floats are rendered with repr, no timestamps
are embedded, and each artifact carries the config checksum and the
package version in header comments.

Config schema (all blocks optional unless noted)::

    {
      "weight":   {"family": "freud"|"exppower"|"powerexp",
                   "m": ..., "alpha": ..., "ell": ..., "rho": ...},
      "interp":   {"nu": 2, "l": 0, "n_list": [8, 16, 32, 64], "n": 10},
      "norm":     {"p": 2.0, "Delta": 1.0, "alpha": 1.0,
                   "eta": 0.5, "gamma": null},
      "numerics": {"digits": 30, "quad_points": 256,
                   "mrs_tol": 1e-12, "quad_rtol": 1e-7, "seed": 20260823},
      "functions": ["sin"],
      "x_list":   [-2.0, -1.0, 1.0, 2.0],
      "t_list":   [8, 16, 32, 64],
      "diagnostics": ["class_membership", "mrs_residual", "spacing",
                      "supbound", "coeffbound", "assumption"],
      "output":   "out"
    }

Exit codes: 0 success, 2 config error, 3 gate rejection, 4 numeric
failure, 5 acceptance failure.  The recurrence-table cache directory is
``<output>/cache`` unless the HFLAB_CACHE environment variable is set.
"""

import argparse
import hashlib
import json
import math
import os
import sys
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

from . import __version__
from .errors import (AcceptanceFailure, ConfigError, ConvergenceError,
                     DomainError, GateRejection, PrecisionError,
                     QuadratureError, ScaleOverflowError,
                     UnsupportedOrderError)
from .funcs import get_function
from .interp import build_fundamental, coeff_bound_diag, eval_split
from .mrs import MrsSolver
from .orthopoly import (RecurrenceTable, spacing_diag, stieltjes_recurrence,
                        sup_bound_diag, zeros)
from .weights import WeightSpec, check_class_membership, family_from_dict
from .wnorm import NormSpec, convergence_run

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_GATE = 3
EXIT_NUMERIC = 4
EXIT_ACCEPT = 5

CACHE_ENV = "HFLAB_CACHE"
CACHE_VERSION = 1

_ALL_DIAGNOSTICS = ("class_membership", "mrs_residual", "spacing",
                    "supbound", "coeffbound", "assumption")


@dataclass
class RunConfig:
    """Validated experiment configuration plus its canonical checksum."""

    family: object
    rho: float
    nu: int
    l: int
    n_list: list
    n: int
    p: float
    Delta: float
    alpha: float
    eta: float
    gamma: object
    digits: int
    quad_points: int
    mrs_tol: float
    quad_rtol: float
    seed: int
    functions: list
    x_list: list
    t_list: list
    diagnostics: list
    output: str
    checksum: str = ""

    def weight_spec(self):
        return WeightSpec(self.family, rho=self.rho, nu=self.nu)

    def solver(self, spec):
        return MrsSolver(spec, quad_points=self.quad_points,
                         tol=self.mrs_tol, gamma=self.gamma)


def _canonical_checksum(raw):
    blob = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def load_config(path):
    """Parse and validate the JSON config; errors carry field diagnostics."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config {path!r} is not valid JSON: {exc.msg} at line "
            f"{exc.lineno}, column {exc.colno}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")

    def block(name):
        b = raw.get(name, {})
        if not isinstance(b, dict):
            raise ConfigError(f"config field {name!r} must be an object")
        return b

    weight = block("weight")
    interp = block("interp")
    norm = block("norm")
    numerics = block("numerics")

    family = family_from_dict({"family": "freud", **weight})
    rho = float(weight.get("rho", 0.0))
    if rho < 0:
        raise ConfigError("weight.rho must be >= 0")

    nu = int(interp.get("nu", 2))
    l = int(interp.get("l", 0))
    n_list = [int(v) for v in interp.get("n_list", [8, 16, 32, 64])]
    if not n_list:
        raise ConfigError("interp.n_list must be non-empty")
    if sorted(n_list) != n_list:
        raise ConfigError("interp.n_list must be sorted ascending")
    if min(n_list) < 1:
        raise ConfigError("interp.n_list entries must be >= 1")
    n = int(interp.get("n", max(n_list)))
    if n < 1:
        raise ConfigError("interp.n must be >= 1")
    if not 0 <= l <= nu - 1:
        raise ConfigError(f"interp.l must lie in 0..nu-1, got {l}")

    gamma = norm.get("gamma", None)
    if gamma is not None:
        gamma = float(gamma)

    digits = int(numerics.get("digits", 30))
    functions = list(raw.get("functions", ["sin"]))
    if not functions:
        raise ConfigError("functions list must be non-empty")
    for name in functions:
        get_function(name)  # raises ConfigError on unresolved names

    x_list = [float(v) for v in raw.get("x_list", [-2.0, -1.0, 1.0, 2.0])]
    t_list = raw.get("t_list")
    if t_list is None:
        t_list = sorted({float(s * m_) for m_ in n_list for s in (1, 2, 4)})
    else:
        t_list = [float(v) for v in t_list]
    if any(t <= 0 for t in t_list):
        raise ConfigError("t_list entries must be positive")

    diagnostics = list(raw.get("diagnostics", _ALL_DIAGNOSTICS))
    if not diagnostics:
        raise ConfigError("diagnostics selection must be non-empty")
    for d in diagnostics:
        if d not in _ALL_DIAGNOSTICS:
            raise ConfigError(
                f"unknown diagnostic {d!r}; known: {list(_ALL_DIAGNOSTICS)}")

    return RunConfig(
        family=family, rho=rho, nu=nu, l=l, n_list=n_list, n=n,
        p=float(norm.get("p", 2.0)), Delta=float(norm.get("Delta", 1.0)),
        alpha=float(norm.get("alpha", 1.0)), eta=float(norm.get("eta", 0.5)),
        gamma=gamma, digits=digits,
        quad_points=int(numerics.get("quad_points", 256)),
        mrs_tol=float(numerics.get("mrs_tol", 1e-12)),
        quad_rtol=float(numerics.get("quad_rtol", 1e-7)),
        seed=int(numerics.get("seed", 20260823)),
        functions=functions, x_list=x_list, t_list=t_list,
        diagnostics=diagnostics, output=str(raw.get("output", "out")),
        checksum=_canonical_checksum(raw))


# ---------------------------------------------------------------------------
# recurrence-table cache

def cache_dir(cfg):
    return os.environ.get(CACHE_ENV) or os.path.join(cfg.output, "cache")


def _cache_path(cfg, N):
    key = f"{cfg.family.label()}|rho={cfg.rho!r}|N={N}|digits={cfg.digits}"
    h = hashlib.sha256(key.encode()).hexdigest()[:16]
    return os.path.join(cache_dir(cfg), f"table_{h}.json")


def _table_payload_checksum(payload):
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def save_table(cfg, table):
    payload = {
        "cache_version": CACHE_VERSION,
        "family": cfg.family.label(),
        "rho": repr(cfg.rho),
        "N": table.N,
        "digits": table.digits,
        "support": repr(table.support),
        "beta0": mp.nstr(table.beta0_mp, table.digits + 8),
        "beta": [mp.nstr(b, table.digits + 8) for b in table.beta_mp],
    }
    payload["checksum"] = _table_payload_checksum(
        {k: v for k, v in payload.items() if k != "checksum"})
    path = _cache_path(cfg, table.N)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True, indent=1)
    return path


def load_table(cfg, N, spec):
    path = _cache_path(cfg, N)
    if not os.path.exists(path):
        return None
    with open(path) as fh:
        payload = json.load(fh)
    stored = payload.get("checksum")
    actual = _table_payload_checksum(
        {k: v for k, v in payload.items() if k != "checksum"})
    if stored != actual:
        raise ConfigError(f"cache file {path} failed checksum validation")
    if payload.get("cache_version") != CACHE_VERSION:
        return None
    with mp.workdps(payload["digits"] + 10):
        beta0_mp = mp.mpf(payload["beta0"])
        beta_mp = [mp.mpf(s) for s in payload["beta"]]
    return RecurrenceTable(
        spec=spec, N=payload["N"], digits=payload["digits"],
        beta0=float(beta0_mp),
        beta=np.array([float(b) for b in beta_mp]),
        support=float(payload["support"]),
        beta0_mp=beta0_mp, beta_mp=beta_mp)


def get_table(cfg, spec, solver, N):
    """Load the recurrence table from cache or build and persist it."""
    table = load_table(cfg, N, spec)
    if table is not None:
        return table
    table = stieltjes_recurrence(spec, N, digits=cfg.digits, solver=solver)
    save_table(cfg, table)
    return table


# ---------------------------------------------------------------------------
# deterministic artifact writing

def _open_artifact(cfg, name):
    os.makedirs(cfg.output, exist_ok=True)
    path = os.path.join(cfg.output, name)
    fh = open(path, "w")
    fh.write(f"# hflab {__version__}\n")
    fh.write(f"# config_sha256={cfg.checksum}\n")
    return fh, path


def _csv_row(values):
    return ",".join(repr(v) if isinstance(v, float) else str(v)
                    for v in values) + "\n"


# ---------------------------------------------------------------------------
# subcommands

def cmd_mrs(cfg):
    spec = cfg.weight_spec()
    solver = cfg.solver(spec)
    fh, path = _open_artifact(cfg, "mrs.csv")
    with fh:
        header = "t,a_t,delta_t,T_a_t,eps_t\n"
        fh.write(header)
        sys.stdout.write(header)
        for t in cfg.t_list:
            row = _csv_row((float(t), solver.mrs_number(t),
                            solver.delta_u(t), solver.t_at(t),
                            solver.eps_n(t) if t >= 1 else float("nan")))
            fh.write(row)
            sys.stdout.write(row)
    print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def cmd_nodes(cfg):
    spec = cfg.weight_spec()
    solver = cfg.solver(spec)
    table = get_table(cfg, spec, solver, max(cfg.n, max(cfg.n_list)))
    nodes = zeros(table, cfg.n, solver, nu=cfg.nu)
    fh, path = _open_artifact(cfg, f"nodes_n{cfg.n}.csv")
    with fh:
        fh.write("k,x_k,pn_prime,varphi_n\n")
        for k in range(nodes.n):
            fh.write(_csv_row((k + 1, float(nodes.x[k]),
                               float(nodes.pn_deriv[1][k]),
                               float(nodes.varphi[k]))))
    print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def cmd_interp(cfg):
    spec = cfg.weight_spec()
    solver = cfg.solver(spec)
    table = get_table(cfg, spec, solver, max(cfg.n, max(cfg.n_list)))
    nodes = zeros(table, cfg.n, solver, nu=cfg.nu)
    fc = build_fundamental(nodes, cfg.l)
    xs = np.asarray(cfg.x_list, dtype=float)
    fh, path = _open_artifact(cfg, f"interp_n{cfg.n}.csv")
    with fh:
        fh.write("function,x,L,X,Y,Z\n")
        for name in cfg.functions:
            f = get_function(name)
            X, Y, Z = eval_split(nodes, fc, f, xs, cfg.l)
            for i, x in enumerate(cfg.x_list):
                fh.write(_csv_row((name, float(x),
                                   float(X[i] + Y[i] + Z[i]),
                                   float(X[i]), float(Y[i]), float(Z[i]))))
    print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def cmd_converge(cfg):
    spec = cfg.weight_spec()
    nspec = NormSpec(p=cfg.p, Delta=cfg.Delta, alpha=cfg.alpha, nu=cfg.nu,
                     rho=cfg.rho, eta=cfg.eta)
    if cfg.nu % 2 != 0:
        raise GateRejection(
            f"nu={cfg.nu} is odd; converge covers the even-order theorems "
            "only")
    solver = cfg.solver(spec)
    table = get_table(cfg, spec, solver, max(cfg.n_list))
    manifest = {"hflab_version": __version__, "config_sha256": cfg.checksum,
                "gamma": solver.gamma, "functions": {}}
    all_ok = True
    for name in cfg.functions:
        f = get_function(name)
        report = convergence_run(nspec, spec, solver, table, f, cfg.n_list,
                                 l=cfg.l, quad_rtol=cfg.quad_rtol)
        fh, path = _open_artifact(cfg, f"converge_{name}.csv")
        with fh:
            fh.write(",".join(report.COLUMNS) + "\n")
            for row in report.rows():
                fh.write(_csv_row(row))
        ok = report.strictly_decreasing()
        all_ok = all_ok and ok
        manifest["functions"][name] = {
            "file": os.path.basename(path),
            "E_n": report.E_n,
            "strictly_decreasing": ok,
        }
        print(f"wrote {path}", file=sys.stderr)
    manifest["passed"] = all_ok
    fh, path = _open_artifact(cfg, "converge_manifest.json")
    with fh:
        json.dump(manifest, fh, sort_keys=True, indent=1)
        fh.write("\n")
    print(f"wrote {path}", file=sys.stderr)
    if not all_ok:
        raise AcceptanceFailure(
            "monotone-decrease check failed for at least one function")
    return EXIT_OK


def cmd_diagnose(cfg):
    spec = cfg.weight_spec()
    solver = cfg.solver(spec)
    need_nodes = any(d in cfg.diagnostics
                     for d in ("spacing", "supbound", "coeffbound"))
    table = (get_table(cfg, spec, solver, max(cfg.n_list))
             if need_nodes else None)
    fh, path = _open_artifact(cfg, "diagnose.txt")
    with fh:
        fh.write(f"weight {spec.label()}\n")
        for check in cfg.diagnostics:
            fh.write(f"\n[{check}]\n")
            if check == "class_membership":
                rep = check_class_membership(spec)
                for key in ("lambda_fit", "t_quasi_increase_const",
                            "t_monotone_violations", "c1_fit", "c2_fit"):
                    fh.write(f"{key} = {getattr(rep, key)!r}\n")
                fh.write(f"ci_fits = {rep.ci_fits!r}\n")
            elif check == "mrs_residual":
                for n in cfg.n_list:
                    fh.write(f"n={n} residual = {solver.residual(n)!r}\n")
            elif check == "spacing":
                vals = []
                for n in cfg.n_list:
                    if n < 2:
                        continue
                    r = spacing_diag(zeros(table, n, solver, nu=cfg.nu))
                    vals.append(r)
                    fh.write(f"n={n} ratio range = "
                             f"[{float(r.min())!r}, {float(r.max())!r}]\n")
                allv = np.concatenate(vals)
                fh.write(f"band = [{float(allv.min())!r}, "
                         f"{float(allv.max())!r}] "
                         f"width = {float(allv.max() / allv.min())!r}\n")
            elif check == "supbound":
                vals = [sup_bound_diag(table, n, solver) for n in cfg.n_list]
                for n, v in zip(cfg.n_list, vals):
                    fh.write(f"n={n} product = {v!r}\n")
                fh.write(f"band = [{min(vals)!r}, {max(vals)!r}] "
                         f"width = {max(vals) / min(vals)!r}\n")
            elif check == "coeffbound":
                for n in cfg.n_list:
                    nodes = zeros(table, n, solver, nu=cfg.nu)
                    rep = coeff_bound_diag(nodes, build_fundamental(nodes,
                                                                    cfg.l))
                    fh.write(f"n={n} max_tri = "
                             f"{float(np.max(rep.ratio_tri))!r} "
                             f"max_parity = "
                             f"{float(np.max(rep.ratio_parity))!r}\n")
            elif check == "assumption":
                ts = [solver.t_at(float(n)) for n in cfg.n_list]
                for n, t in zip(cfg.n_list, ts):
                    fh.write(f"n={n} T_a_n = {t!r}\n")
                g = solver.gamma
                cfit = max(t / n ** g for n, t in zip(cfg.n_list, ts))
                fh.write(f"gamma = {g!r} fitted_C = {cfit!r}\n")
    print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def cmd_selftest(cfg):
    """Fixed deterministic battery; byte-identical across runs."""
    from .interp import eval_L
    from .mrs import freud_mrs_closed_form
    from .weights import FreudMonomial

    spec = WeightSpec(FreudMonomial(2.0), rho=0.0, nu=4)
    solver = MrsSolver(spec)
    st_cfg = RunConfig(
        family=spec.family, rho=0.0, nu=4, l=0, n_list=[10], n=10,
        p=2.0, Delta=1.0, alpha=1.0, eta=0.5, gamma=None,
        digits=30, quad_points=256, mrs_tol=1e-12, quad_rtol=1e-7,
        seed=20260823, functions=["sin"], x_list=[], t_list=[],
        diagnostics=[], output=cfg.output, checksum=cfg.checksum)
    table = get_table(st_cfg, spec, solver, 20)

    fh, path = _open_artifact(cfg, "selftest.txt")
    with fh:
        beta_err = float(max(abs(table.beta[k - 1] - k / 4.0) / (k / 4.0)
                             for k in range(1, 21)))
        fh.write(f"beta_k_vs_k/4 max rel err = {beta_err!r}\n")
        fh.write(f"beta_0 = {table.beta0!r}\n")
        for t in (1.0, 4.0, 16.0):
            fh.write(f"a_{t!r} = {solver.mrs_number(t)!r}\n")
        fh.write(f"a_1(|x|^4 closed form) = "
                 f"{freud_mrs_closed_form(4.0, 1.0)!r}\n")
        nodes = zeros(table, 10, solver, nu=4)
        for k in range(10):
            fh.write(f"x_{k + 1},10 = {float(nodes.x[k])!r}\n")
        fc = build_fundamental(nodes, 0)
        xs = np.linspace(-2.5, 2.5, 7)
        vals = eval_L(nodes, fc, get_function("one"), xs, 0)
        fh.write(f"partition_of_unity max dev = "
                 f"{float(np.max(np.abs(vals - 1.0)))!r}\n")
        nspec = NormSpec(p=2.0, Delta=1.0, alpha=1.0, nu=4)
        from .wnorm import weighted_lp_norm
        norm = weighted_lp_norm(nspec, spec, solver,
                                lambda x: x * np.exp(-x * x), 10)
        fh.write(f"norm[x exp(-x^2)] = {norm!r}\n")
        band = spacing_diag(nodes)
        fh.write(f"spacing band n=10 = [{float(band.min())!r}, "
                 f"{float(band.max())!r}]\n")
    print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


DISPATCH = {
    "mrs": cmd_mrs,
    "nodes": cmd_nodes,
    "interp": cmd_interp,
    "converge": cmd_converge,
    "diagnose": cmd_diagnose,
    "selftest": cmd_selftest,
}


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="hflab",
        description="Hermite-Fejer interpolation laboratory for "
                    "exponential-type weights")
    parser.add_argument("command", choices=sorted(DISPATCH))
    parser.add_argument("config", help="path to the JSON config file")
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        return DISPATCH[args.command](cfg)
    except GateRejection as exc:
        print(f"gate rejection: {exc}", file=sys.stderr)
        return EXIT_GATE
    except AcceptanceFailure as exc:
        print(f"acceptance failure: {exc}", file=sys.stderr)
        return EXIT_ACCEPT
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, PrecisionError, QuadratureError,
            ScaleOverflowError, DomainError, UnsupportedOrderError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
