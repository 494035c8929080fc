"""Command-line front end: verification suites, classical runs and spectrum queries.

Exit codes: 0 success, 1 verification failures, 2 usage or configuration
error, 3 runtime or numerical failure.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import algebras as alg
from . import classical as cl
from . import invariants as inv
from . import spectra as sp
from .liealg import appendix_truncation, jacobi_check, verify_realization
from .timecoeff import ExpPoly, dho_solutions, wronskian
from .weylop import commutator

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2, 3

DEFAULTS = {
    # underdamped by a wide margin: omega = 1 > gamma/2 = 0.2
    "mass": 1.0,
    "hbar": 1.0,
    "gamma": 0.4,
    "omega": 1.0,
    "tol": 1e-10,
    "seed": 0,
    "format": "json",
}
FORMATS = ("json", "csv", "markdown")
CONFIG_KEYS = {"params": ("mass", "hbar", "gamma", "omega"), "run": ("tol", "seed", "format")}

RESIDUAL_LIMIT = 1e-9
# generic state: nonzero energy, both oscillators excited
TEST_STATE = (1.0, 0.5, -0.3, 0.8)


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    mass: float = DEFAULTS["mass"]
    hbar: float = DEFAULTS["hbar"]
    gamma: float = DEFAULTS["gamma"]
    omega: float = DEFAULTS["omega"]
    tol: float = DEFAULTS["tol"]
    seed: int = DEFAULTS["seed"]
    out: Optional[str] = None
    format: str = DEFAULTS["format"]

    def __post_init__(self):
        if not self.tol > 0:
            raise ConfigError("tolerance must be positive")
        if not (self.mass > 0 and self.hbar > 0):
            raise ConfigError("mass and hbar must be positive")
        if self.gamma < 0 or self.omega < 0:
            raise ConfigError("gamma and omega must be nonnegative")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")

    def classical_params(self) -> cl.ClassicalParams:
        return cl.ClassicalParams(self.mass, self.gamma, self.omega)


def load_config(path: str) -> Dict[str, object]:
    """Read ``key = value`` pairs from the [params] and [run] sections."""
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    out: Dict[str, object] = {}
    for section in parser.sections():
        if section not in CONFIG_KEYS:
            raise ConfigError(f"unknown config section [{section}]")
        for key, raw in parser.items(section):
            if key not in CONFIG_KEYS[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
            try:
                if key == "seed":
                    out[key] = int(raw)
                elif key == "format":
                    out[key] = raw.strip()
                else:
                    out[key] = float(raw)
            except ValueError as exc:
                raise ConfigError(f"bad value for {key}: {raw!r}") from exc
    return out


def build_config(ns: argparse.Namespace) -> RunConfig:
    values = dict(DEFAULTS)
    if getattr(ns, "config", None):
        values.update(load_config(ns.config))
    for key in DEFAULTS:
        v = getattr(ns, key, None)
        if v is not None:
            values[key] = v
    return RunConfig(command=ns.command, out=getattr(ns, "out", None), **values)


# --- verification suites --------------------------------------------------

@dataclass
class Check:
    name: str
    passed: bool
    value: str
    error: bool = False


@dataclass
class SuiteResult:
    suite: str
    checks: List[Check] = field(default_factory=list)

    @property
    def failures(self) -> int:
        return sum(not c.passed for c in self.checks)


def _exact(name: str, residual) -> Check:
    text = str(residual)
    return Check(name, residual.is_zero(), text)


def _bound(name: str, value: float, limit: float) -> Check:
    return Check(name, bool(value <= limit), f"{value:.3e} (limit {limit:.0e})")


def suite_algebras(cfg: RunConfig) -> List[Check]:
    out = []
    for name, T in alg.named_tables().items():
        v = jacobi_check(T)
        out.append(Check(f"jacobi {name}", not v, f"{len(v)} violations"))
    for name, T, R in (
        ("A_tilde", alg.algebra_tilde(), alg.realization_tilde()),
        ("bateman", alg.algebra_bateman(), alg.realization_bateman()),
        ("B_tilde", alg.algebra_reduced(), alg.realization_reduced()),
    ):
        mm = verify_realization(T, R)
        out.append(Check(f"realization {name}", not mm, f"{len(T.pairs())} pairs, {len(mm)} mismatches"))
    shifted = alg.shift_to_q(alg.algebra_k())
    for name, ok in (
        ("A_k at k=1 equals A_tilde", alg.algebra_k(1) == alg.algebra_tilde()),
        ("shift Q = Qt + (k-1)X", shifted == alg.algebra_k_shifted()),
        ("shifted A_k at k=-1 equals A_-1", shifted.subs("k", -1) == alg.algebra_minus1()),
        ("gauge reduction of A_-1 equals B_tilde", alg.reduce_minus1() == alg.algebra_reduced()),
    ):
        out.append(Check(name, ok, "equal" if ok else "differ"))
    return out


def suite_invariants(cfg: RunConfig) -> List[Check]:
    out = [_exact(f"invariant {r.name}", r.residual) for r in inv.standard_reports()]
    out.append(_exact("[X, P] - i hbar", inv.heisenberg_check()))
    W = wronskian(*dho_solutions()) - ExpPoly.exp(-2, 0)
    out.append(Check("wronskian equals exp(-gamma t)", W.is_zero(), str(W)))
    return out


def suite_bateman_rep(cfg: RunConfig) -> List[Check]:
    H = sp.bateman_h_firstorder()
    H_Omega, D = sp.split_operators()
    mm = verify_realization(alg.algebra_bateman(), alg.realization_bateman())
    return [
        _exact("H - (H_Omega + D)", H - (H_Omega + D)),
        _exact("[H_Omega, D]", commutator(H_Omega, D)),
        _exact("[H, H_Omega]", commutator(H, H_Omega)),
        _exact("[H, D]", commutator(H, D)),
        _exact("quadratic H - first-order H", alg.bateman_hamiltonian_quadratic() - H),
        _exact("H - H^dagger", H - H.adjoint()),
        Check("basic operators realize the table", not mm, f"{len(mm)} mismatches"),
    ]


def suite_canonical(cfg: RunConfig) -> List[Check]:
    params = cfg.classical_params()
    t_end = 10.0 / cfg.gamma if cfg.gamma > 0 else 10.0
    traj = cl.integrate(TEST_STATE, t_end, cfg.tol, params)
    rx, ry = cl.dualeq_residuals(traj)
    out = [
        _bound("relative energy drift", traj.relative_energy_drift(), 1e-9),
        _bound("dual equation residual (x)", rx, 1e-8),
        _bound("dual equation residual (y)", ry, 1e-8),
    ]
    rng = np.random.default_rng(cfg.seed)
    states = rng.uniform(-1, 1, size=(50, 4))
    times = rng.uniform(0, t_end, size=50)
    jac = max(cl.symplectic_defect(cl.canonical_jacobian(s, t, params)) for s, t in zip(states, times))
    flow = max(cl.transformed_flow_residual(s, t, params) for s, t in zip(states, times))
    out.append(_bound("symplectic Jacobian defect (50 samples)", jac, 1e-10))
    out.append(_bound("transformed flow residual (50 samples)", flow, 1e-10))
    red = cl.constrained_reduction_check(1.0, 0.0, params, t_end, tol=cfg.tol)
    out.append(_bound("constrained reduction vs closed form", red.max_deviation, 1e-7))
    z1 = cl.richardson_state(TEST_STATE, 1.0, params)
    z2 = cl.integrate(TEST_STATE, 1.0, 1e-12, params).states[-1]
    out.append(_bound("DOP853 vs Richardson RK4 at t=1", float(np.abs(z1 - z2).max()), 1e-9))
    return out


def spectrum_regimes(cfg: RunConfig) -> List[sp.Regime]:
    """One regime of each kind, sharing m, hbar, gamma with the run.

    The configured regime keeps its own frequency; the others use Omega = 1
    (under) and W = gamma/4 (over, so that omega^2 = 3 gamma^2/16 > 0).
    """
    own = sp.Regime.from_omega(cfg.mass, cfg.hbar, cfg.gamma, cfg.omega)
    base = (cfg.mass, cfg.hbar, cfg.gamma)
    out = []
    for kind, freq in (("under", 1.0), ("over", cfg.gamma / 4 if cfg.gamma > 0 else 0.3), ("critical", 0.0)):
        out.append(own if own.kind == kind else sp.Regime(kind, *base, freq))
    return out


def suite_spectra(cfg: RunConfig) -> List[Check]:
    out = []
    rng = np.random.default_rng(cfg.seed)
    for i, R in enumerate(spectrum_regimes(cfg)):
        for which in ("H", "H_Omega", "D"):
            res = sp.residual_sweep(R, draws=100, seed=cfg.seed + 10 * i, which=which)
            out.append(_bound(f"{R.kind}: {which} eigen-relation, 100 draws", float(res.max()), RESIDUAL_LIMIT))
        labels = sp.sample_labels(R, 20, rng)
        points = sp.sample_points(R, 20, rng)
        ts = rng.uniform(0, 5, size=20)
        err = max(sp.stationary_phase_error(sp.EigenFunction(R, a, b), pt, t)
                  for (a, b), pt, t in zip(labels, points, ts))
        out.append(_bound(f"{R.kind}: propagated phase exp(-iEt/hbar)", err, 1e-8))
    under = spectrum_regimes(cfg)[0]
    pt = sp.sample_points(under, 1, rng)[0]
    ok_int = sp.is_single_valued(sp.EigenFunction(under, 2, 0.3), pt)
    ok_half = sp.is_single_valued(sp.EigenFunction(under, 0.5, 0.3, strict=False), pt)
    out.append(Check("single-valued for n=2", ok_int, str(ok_int)))
    out.append(Check("not single-valued for n=1/2", not ok_half, str(ok_half)))
    if under.gamma > 0:
        a = sp.EigenFunction(under, 0, 1.0)
        b = sp.EigenFunction(under, *sp.degenerate_partner(under, 0, 1.0))
        g = sp.gram_determinant([a, b], sp.sample_points(under, 50, rng))
        out.append(Check(f"degeneracy witness at E={a.energy:.6g}", g > 1e-6, f"gram determinant {g:.3e}"))

    def f(zp, zm):
        return np.exp(0.3 * zp - 0.2 * zm * zm)

    def df(zp, zm):
        v = f(zp, zm)
        return v, 0.3 * v, -0.4 * zm * v

    state = sp.PropagatedState(under, f, df)
    xs = rng.uniform(-1, 1, size=(100, 3))
    worst = max(state.schroedinger_residual(x, p, t) for x, p, t in xs)
    out.append(_bound("general solution solves the time-dependent equation", worst, 1e-6))
    return out


def suite_appendix(cfg: RunConfig) -> List[Check]:
    out = []
    for N in (1, 2, 3):
        rep = appendix_truncation(N)
        out.append(Check(f"truncation N={N}", not rep.failures,
                         f"{len(rep.checked)} pairs, {len(rep.failures)} mismatches, {len(rep.flagged)} outside"))
    return out


SUITES: Dict[str, Callable[[RunConfig], List[Check]]] = {
    "invariants": suite_invariants,
    "algebras": suite_algebras,
    "bateman-rep": suite_bateman_rep,
    "canonical": suite_canonical,
    "spectra": suite_spectra,
    "appendix": suite_appendix,
}
TITLES = {
    "invariants": "Invariants of the Caldirola-Kanai oscillator",
    "algebras": "Lie algebras and their realizations",
    "bateman-rep": "Bateman representation",
    "canonical": "Classical Bateman system and canonical map",
    "spectra": "First-order spectra",
    "appendix": "Damped particle algebra (truncated)",
}


def _run_one(name: str, cfg: RunConfig) -> SuiteResult:
    try:
        return SuiteResult(name, SUITES[name](cfg))
    except Exception as exc:  # reported, never silently dropped
        return SuiteResult(name, [Check("suite error", False, f"{type(exc).__name__}: {exc}", error=True)])


def run_suites(names: Sequence[str], cfg: RunConfig, workers: int = 4) -> List[SuiteResult]:
    """Run suites on a pool; results come back in the requested order."""
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda n: _run_one(n, cfg), names))


def render_report(results: List[SuiteResult], cfg: RunConfig) -> str:
    total = sum(len(r.checks) for r in results)
    failed = sum(r.failures for r in results)
    if cfg.format == "json":
        data = {
            "params": {k: getattr(cfg, k) for k in ("mass", "hbar", "gamma", "omega", "tol", "seed")},
            "suites": [{"suite": r.suite, "checks": [asdict(c) for c in r.checks]} for r in results],
            "checks": total,
            "failures": failed,
        }
        return json.dumps(data, indent=2) + "\n"
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "check", "passed", "value"])
        for r in results:
            for c in r.checks:
                w.writerow([r.suite, c.name, "true" if c.passed else "false", c.value])
        return buf.getvalue()
    lines = ["# Verification report", "",
             f"m={cfg.mass}, hbar={cfg.hbar}, gamma={cfg.gamma}, omega={cfg.omega}, "
             f"tol={cfg.tol}, seed={cfg.seed}", ""]
    for r in results:
        lines += [f"## {TITLES[r.suite]}", "", "| check | status | value |", "|---|---|---|"]
        for c in r.checks:
            value = c.value.replace("|", "\\|")
            lines.append(f"| {c.name} | {'pass' if c.passed else 'FAIL'} | `{value}` |")
        lines.append("")
    lines.append(f"{total - failed}/{total} checks passed.")
    return "\n".join(lines) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_verify(cfg: RunConfig, suite: str) -> int:
    names = list(SUITES) if suite == "all" else [suite]
    results = run_suites(names, cfg)
    _emit(render_report(results, cfg), cfg.out)
    if any(c.error for r in results for c in r.checks):
        return EXIT_RUNTIME
    return EXIT_FAILED if any(r.failures for r in results) else EXIT_OK


# --- simulate -------------------------------------------------------------

def _floats(text: str, count: int, what: str) -> List[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"{what} must be {count} comma-separated numbers") from exc
    if len(vals) != count or not all(math.isfinite(v) for v in vals):
        raise ConfigError(f"{what} must be {count} finite comma-separated numbers")
    return vals


def cmd_simulate(cfg: RunConfig, ns: argparse.Namespace) -> int:
    params = cfg.classical_params()
    t_end = ns.t_end if ns.t_end is not None else (10.0 / cfg.gamma if cfg.gamma > 0 else 10.0)
    extra: Dict[str, object] = {}
    try:
        if ns.reduction:
            red = cl.constrained_reduction_check(ns.x0, ns.v0, params, t_end, tol=cfg.tol)
            traj = red.trajectory
            extra.update(red.summary())
            extra["reduction"] = {"x0": ns.x0, "v0": ns.v0}
        else:
            state = _floats(ns.state, 4, "--state")
            traj = cl.integrate(state, t_end, cfg.tol, params)
    except (cl.IntegrationError, cl.ConstraintViolationError, FloatingPointError) as exc:
        sys.stderr.write(f"integration failed: {exc}\n")
        return EXIT_RUNTIME
    summary = cl.summary_json(traj, extra) + "\n"
    if cfg.out:
        # trajectory to the file, summary to stdout
        _emit(traj.to_csv(), cfg.out)
        sys.stdout.write(summary)
    elif cfg.format == "csv":
        sys.stdout.write(traj.to_csv())
        sys.stderr.write(summary)
    elif cfg.format == "markdown":
        data = json.loads(summary)
        lines = ["# Simulation summary", "", "| quantity | value |", "|---|---|"]
        lines += [f"| {k} | {json.dumps(v, sort_keys=True)} |" for k, v in sorted(data.items())]
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        sys.stdout.write(summary)
    return EXIT_OK


# --- spectrum -------------------------------------------------------------

def parse_values(text: str) -> List[float]:
    """``"a,b,c"`` or an integer range ``"lo:hi"`` (inclusive)."""
    try:
        if ":" in text:
            lo, hi = (int(v) for v in text.split(":"))
            return [float(v) for v in range(lo, hi + 1)]
        return [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"cannot parse label list {text!r}") from exc


def make_regime(cfg: RunConfig, kind: str, freq: Optional[float]) -> sp.Regime:
    if kind == "critical" or freq is not None:
        return sp.Regime(kind, cfg.mass, cfg.hbar, cfg.gamma, 0.0 if kind == "critical" else freq)
    R = sp.Regime.from_omega(cfg.mass, cfg.hbar, cfg.gamma, cfg.omega)
    if R.kind != kind:
        raise ConfigError(f"gamma={cfg.gamma}, omega={cfg.omega} is {R.kind}damped; pass --freq to set "
                          f"the {kind}damped frequency directly")
    return R


def render_rows(rows: List[sp.SpectrumRow], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([r.as_dict() for r in rows], indent=2) + "\n"
    name = sp.LABEL_NAMES[rows[0].regime] if rows else "label"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["regime", name, "lam", "E", "residual_max", "samples"])
        for r in rows:
            w.writerow([r.regime, repr(r.labels[name]), repr(r.labels["lam"]), repr(r.E),
                        repr(r.residual_max), r.samples])
        return buf.getvalue()
    lines = ["# Spectrum", "", f"| {name} | lam | E | residual_max |", "|---|---|---|---|"]
    for r in rows:
        lines.append(f"| {r.labels[name]:g} | {r.labels['lam']:g} | {r.E:.12g} | {r.residual_max:.3e} |")
    return "\n".join(lines) + "\n"


def cmd_spectrum(cfg: RunConfig, ns: argparse.Namespace) -> int:
    R = make_regime(cfg, ns.regime, ns.freq)
    labels, lams = parse_values(ns.label), parse_values(ns.lam)
    for a in labels:
        for b in lams:
            sp.validate_labels(R, a, b)
    rows = []
    for i, (a, b) in enumerate((a, b) for a in labels for b in lams):
        rows.append(sp.spectrum_row(R, a, b, samples=ns.samples, seed=cfg.seed + i))
    _emit(render_rows(rows, cfg.format), cfg.out)
    return EXIT_OK if all(r.residual_max <= RESIDUAL_LIMIT for r in rows) else EXIT_FAILED


# --- entry point ----------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    p.add_argument("--config", default=S, help="INI file with [params] and [run] sections")
    p.add_argument("--mass", type=float, default=S)
    p.add_argument("--hbar", type=float, default=S)
    p.add_argument("--gamma", type=float, default=S)
    p.add_argument("--omega", type=float, default=S, help="bare frequency")
    p.add_argument("--tol", type=float, default=S)
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--out", default=S, help="output file (default stdout)")
    p.add_argument("--format", choices=FORMATS, default=S)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="ckbateman", parents=[common],
                                     description="Damped oscillator verification toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("suite", choices=list(SUITES) + ["all"])
    s = sub.add_parser("simulate", parents=[common], help="integrate the classical Bateman system")
    s.add_argument("--state", default="1,0,0,1", help="x,p_x,y,p_y at t=0")
    s.add_argument("--t-end", type=float, default=None, help="default 10/gamma")
    s.add_argument("--reduction", action="store_true", help="start on the constraint and compare with the closed form")
    s.add_argument("--x0", type=float, default=1.0)
    s.add_argument("--v0", type=float, default=0.0)
    q = sub.add_parser("spectrum", parents=[common], help="energies and eigen-relation residuals")
    q.add_argument("regime", choices=sp.REGIMES)
    q.add_argument("--label", default="0", help="n, n~ or k values: 'a,b,c' or integer range 'lo:hi'")
    q.add_argument("--lam", default="0", help="lambda values")
    q.add_argument("--freq", type=float, default=None, help="Omega (under) or W (over) directly")
    q.add_argument("--samples", type=int, default=20, help="sample points per label pair")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = build_config(ns)
        if ns.command == "verify":
            return cmd_verify(cfg, ns.suite)
        if ns.command == "simulate":
            return cmd_simulate(cfg, ns)
        return cmd_spectrum(cfg, ns)
    except (ConfigError, sp.InvalidLabelError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (ArithmeticError, RuntimeError) as exc:
        sys.stderr.write(f"runtime failure: {exc}\n")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
