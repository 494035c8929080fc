"""Acceptance criteria, each at its stated tolerance.

Every criterion prints one PASS/FAIL line (also collected into the pytest
terminal summary).  Run directly with ``python3 tests/test_acceptance.py``.
"""

import subprocess
import sys

import numpy as np
import pytest

from ckbateman import algebras as alg
from ckbateman import classical as cl
from ckbateman import invariants as inv
from ckbateman import spectra as sp
from ckbateman.liealg import appendix_truncation, jacobi_check, verify_realization
from ckbateman.weylop import commutator


def criterion_exact_symbolic():
    failures = []
    if not inv.heisenberg_check().is_zero():
        failures.append("[X, P] != i hbar")
    for rep in inv.standard_reports()[:3]:  # X, P, P^2 under the Caldirola-Kanai Hamiltonian
        if not rep.passed:
            failures.append(f"invariant {rep.name}")
    tables = {
        "A_tilde": (alg.algebra_tilde(), alg.realization_tilde()),
        "bateman": (alg.algebra_bateman(), alg.realization_bateman()),
        "B_tilde": (alg.algebra_reduced(), alg.realization_reduced()),
    }
    for name, (T, R) in tables.items():
        if verify_realization(T, R):
            failures.append(f"realization {name}")
    for name, T in alg.named_tables().items():
        if jacobi_check(T):
            failures.append(f"jacobi {name}")
    if alg.reduce_minus1() != alg.algebra_reduced():
        failures.append("B_tilde from A_-1")
    H_Omega, D = sp.split_operators()
    if sp.bateman_h_firstorder() != H_Omega + D:
        failures.append("H != H_Omega + D")
    if not commutator(H_Omega, D).is_zero():
        failures.append("[H_Omega, D] != 0")
    return not failures, "; ".join(failures) or "all identities exact"


def criterion_specialization():
    shifted = alg.shift_to_q(alg.algebra_k())
    checks = {
        "k=1": alg.algebra_k(1) == alg.algebra_tilde(),
        "k=-1": shifted.subs("k", -1) == alg.algebra_minus1(),
        "shift": shifted == alg.algebra_k_shifted(),
    }
    bad = [k for k, ok in checks.items() if not ok]
    return not bad, "mismatch: " + ", ".join(bad) if bad else "k=1, k=-1 and the shift all match"


def criterion_classical():
    params = cl.ClassicalParams()
    t_end = 10 / params.gamma
    traj = cl.integrate((1.0, 0.5, -0.3, 0.8), t_end, 1e-10, params)
    drift = traj.relative_energy_drift()
    dual = max(cl.dualeq_residuals(traj))
    rng = np.random.default_rng(2024)
    samples = zip(rng.uniform(-1, 1, (50, 4)), rng.uniform(0, t_end, 50))
    symp = max(cl.symplectic_defect(cl.canonical_jacobian(s, t, params)) for s, t in samples)
    dev = cl.constrained_reduction_check(1.0, 0.0, params, t_end).max_deviation
    ok = drift <= 1e-9 and dual <= 1e-8 and symp <= 1e-10 and dev <= 1e-7
    return ok, (f"energy drift {drift:.1e}, dualeq {dual:.1e}, symplectic {symp:.1e}, "
                f"reduction {dev:.1e}")


def criterion_spectra():
    regimes = [sp.Regime("under", 1, 1, 0.4, 1.0), sp.Regime("over", 1, 1, 1.0, 0.3),
               sp.Regime("critical", 1, 1, 0.4)]
    worst = max(sp.residual_sweep(R, draws=100, seed=17).max() for R in regimes)
    under = regimes[0]
    pt = (0.6, -0.4)
    single = (sp.is_single_valued(sp.EigenFunction(under, 2, 0.3), pt)
              and not sp.is_single_valued(sp.EigenFunction(under, 0.5, 0.3, strict=False), pt))
    a = sp.EigenFunction(under, 0, 1.0)
    b = sp.EigenFunction(under, *sp.degenerate_partner(under, 0, 1.0))
    gram = sp.gram_determinant([a, b], sp.sample_points(under, 50, np.random.default_rng(3)))
    rng = np.random.default_rng(5)
    phase = 0.0
    for R in regimes:
        for (label, lam), p, t in zip(sp.sample_labels(R, 20, rng), sp.sample_points(R, 20, rng),
                                      rng.uniform(0, 5, 20)):
            phase = max(phase, sp.stationary_phase_error(sp.EigenFunction(R, label, lam), p, t))
    ok = worst <= 1e-9 and single and gram > 1e-6 and phase <= 1e-8
    return ok, (f"residual {worst:.1e}, single-valuedness {'ok' if single else 'broken'}, "
                f"gram {gram:.2f}, phase {phase:.1e}")


def criterion_appendix():
    reports = [appendix_truncation(N) for N in (1, 2, 3)]
    ok = all(not r.failures for r in reports)
    return ok, ", ".join(f"N={r.N}: {len(r.checked)} pairs, {len(r.failures)} mismatches" for r in reports)


def criterion_determinism():
    cmd = [sys.executable, "-m", "ckbateman", "verify", "all", "--seed", "11"]
    a = subprocess.run(cmd, capture_output=True, check=False)
    b = subprocess.run(cmd, capture_output=True, check=False)
    ok = a.returncode == 0 and a.stdout == b.stdout and len(a.stdout) > 0
    return ok, f"exit {a.returncode}, {len(a.stdout)} bytes, identical={a.stdout == b.stdout}"


CRITERIA = [
    (1, "exact symbolic suite", criterion_exact_symbolic),
    (2, "specialization consistency", criterion_specialization),
    (3, "classical Bateman dynamics", criterion_classical),
    (4, "spectra", criterion_spectra),
    (5, "truncated damped-particle algebra", criterion_appendix),
    (6, "determinism of verify all", criterion_determinism),
]


def _line(num, title, ok, detail):
    return f"{'PASS' if ok else 'FAIL'} criterion {num} ({title}): {detail}"


@pytest.mark.parametrize("num, title, fn", CRITERIA, ids=[c[1] for c in CRITERIA])
def test_criterion(num, title, fn, acceptance_log):
    ok, detail = fn()
    line = _line(num, title, ok, detail)
    print(line)
    acceptance_log.append(line)
    assert ok, line


if __name__ == "__main__":
    results = [(n, t, *fn()) for n, t, fn in CRITERIA]
    for r in results:
        print(_line(*r))
    sys.exit(0 if all(r[2] for r in results) else 1)
