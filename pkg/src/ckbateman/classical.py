"""Classical Bateman dual oscillator and its reduction to Caldirola-Kanai.

Hamiltonian ``H = p_x p_y/m + (gamma/2)(y p_y - x p_x) + m Omega^2 x y`` with
``Omega^2 = omega^2 - gamma^2/4`` (negative when overdamped).  Hamilton's
equations, with ``dq/dt = dH/dp`` and ``dp/dt = -dH/dq``::

    dx/dt   =  p_y/m - (gamma/2) x
    dp_x/dt =  (gamma/2) p_x - m Omega^2 y
    dy/dt   =  p_x/m + (gamma/2) y
    dp_y/dt = -(gamma/2) p_y - m Omega^2 x

Eliminating momenta gives ``x'' + gamma x' + omega^2 x = 0`` and
``y'' - gamma y' + omega^2 y = 0``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

SYMPLECTIC_FORM = np.array(
    [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], dtype=float
)


class IntegrationError(RuntimeError):
    pass


class StepUnderflowError(IntegrationError):
    pass


class ConstraintViolationError(RuntimeError):
    pass


@dataclass(frozen=True)
class ClassicalParams:
    """Mass, damping and bare frequency; ``Omega2`` keeps its sign."""

    m: float = 1.0
    gamma: float = 0.4
    omega: float = 1.0

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError("mass must be positive")

    @property
    def omega2(self) -> float:
        return self.omega ** 2

    @property
    def Omega2(self) -> float:
        return self.omega ** 2 - self.gamma ** 2 / 4

    @classmethod
    def from_Omega(cls, m: float, gamma: float, Omega: float) -> "ClassicalParams":
        return cls(m, gamma, math.sqrt(Omega ** 2 + gamma ** 2 / 4))


@dataclass(frozen=True)
class PhaseState:
    x: float
    p_x: float
    y: float
    p_y: float
    t: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.p_x, self.y, self.p_y, self.t)):
            raise ValueError("phase-space state must be finite")

    def array(self) -> np.ndarray:
        return np.array([self.x, self.p_x, self.y, self.p_y], dtype=float)

    @classmethod
    def from_array(cls, z: Sequence[float], t: float = 0.0) -> "PhaseState":
        return cls(float(z[0]), float(z[1]), float(z[2]), float(z[3]), float(t))


def _as_array(s) -> np.ndarray:
    if isinstance(s, PhaseState):
        return s.array()
    return np.asarray(s)


def generator_matrix(params: ClassicalParams) -> np.ndarray:
    """Matrix ``A`` with ``dz/dt = A z`` for ``z = (x, p_x, y, p_y)``."""
    m, g, W2 = params.m, params.gamma, params.Omega2
    return np.array(
        [
            [-g / 2, 0.0, 0.0, 1.0 / m],
            [0.0, g / 2, -m * W2, 0.0],
            [0.0, 1.0 / m, g / 2, 0.0],
            [-m * W2, 0.0, 0.0, -g / 2],
        ]
    )


def hamiltonian(s, params: ClassicalParams):
    z = _as_array(s)
    x, px, y, py = z[..., 0], z[..., 1], z[..., 2], z[..., 3]
    return px * py / params.m + params.gamma / 2 * (y * py - x * px) + params.m * params.Omega2 * x * y


def hamilton_rhs(s, params: ClassicalParams) -> np.ndarray:
    z = _as_array(s)
    x, px, y, py = z
    m, g, W2 = params.m, params.gamma, params.Omega2
    return np.array([
        py / m - g / 2 * x,
        g / 2 * px - m * W2 * y,
        px / m + g / 2 * y,
        -g / 2 * py - m * W2 * x,
    ])


@dataclass
class Trajectory:
    t: np.ndarray
    states: np.ndarray  # shape (n, 4)
    params: ClassicalParams
    grid: str = "adaptive"
    tol: float = 0.0
    dense: Optional[object] = field(default=None, repr=False)

    def __post_init__(self):
        if len(self.t) > 1 and not np.all(np.diff(self.t) > 0):
            raise ValueError("trajectory times must be strictly increasing")

    def __len__(self):
        return len(self.t)

    def __getitem__(self, i) -> PhaseState:
        return PhaseState.from_array(self.states[i], self.t[i])

    @property
    def energy(self) -> np.ndarray:
        return hamiltonian(self.states, self.params)

    def energy_drift(self) -> float:
        H = self.energy
        return float(np.max(np.abs(H - H[0])))

    def relative_energy_drift(self) -> float:
        H = self.energy
        return float(np.max(np.abs(H - H[0])) / max(1.0, abs(H[0])))

    def sample(self, times: Sequence[float]) -> np.ndarray:
        if self.dense is None:
            raise ValueError("trajectory has no dense output")
        return np.asarray(self.dense(np.asarray(times))).T

    def to_csv(self, handle=None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "x", "p_x", "y", "p_y", "H"])
        for t, z, H in zip(self.t, self.states, self.energy):
            writer.writerow([repr(float(t))] + [repr(float(v)) for v in z] + [repr(float(H))])
        text = buf.getvalue()
        if handle is not None:
            handle.write(text)
        return text

    def summary(self) -> Dict[str, object]:
        rx, ry = dualeq_residuals(self)
        return {
            "params": {"m": self.params.m, "gamma": self.params.gamma, "omega": self.params.omega,
                       "Omega2": self.params.Omega2},
            "t_end": float(self.t[-1]),
            "n_points": len(self),
            "grid": self.grid,
            "tol": self.tol,
            "energy_initial": float(self.energy[0]),
            "energy_drift": self.energy_drift(),
            "relative_energy_drift": self.relative_energy_drift(),
            "dualeq_residual_x": rx,
            "dualeq_residual_y": ry,
        }


def integrate(
    s0,
    t_end: float,
    tol: float,
    params: ClassicalParams,
    t_eval: Optional[Sequence[float]] = None,
) -> Trajectory:
    """Adaptive 8(5,3) Dormand-Prince integration of Hamilton's equations."""
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    z0 = _as_array(s0).astype(float)
    A = generator_matrix(params)
    sol = solve_ivp(
        lambda t, z: A @ z,
        (0.0, t_end),
        z0,
        method="DOP853",
        rtol=tol,
        atol=tol,
        t_eval=t_eval,
        dense_output=True,
    )
    if sol.status != 0:
        if "step size" in sol.message.lower():
            raise StepUnderflowError(sol.message)
        raise IntegrationError(sol.message)
    steps = np.diff(sol.t)
    if len(steps) and steps.min() < 1e-14 * t_end and t_eval is None:
        raise StepUnderflowError(f"step {steps.min():.3e} below 1e-14 * t_end")
    return Trajectory(sol.t, sol.y.T.copy(), params, tol=tol, dense=sol.sol)


def dualeq_residuals(traj: Trajectory):
    """Max residuals of the two second-order equations along a trajectory.

    Velocities and accelerations are taken from the Hamiltonian vector field
    at each stored state (``z' = A z``, ``z'' = A^2 z``), and residuals are
    scaled by the local size of the solution.
    """
    A = generator_matrix(traj.params)
    z = traj.states.T
    dz = A @ z
    ddz = A @ dz
    g, w2 = traj.params.gamma, traj.params.omega2
    rx = ddz[0] + g * dz[0] + w2 * z[0]
    ry = ddz[2] - g * dz[2] + w2 * z[2]
    sx = np.maximum(1.0, np.abs(z[0]) + np.abs(dz[0]))
    sy = np.maximum(1.0, np.abs(z[2]) + np.abs(dz[2]))
    return float(np.max(np.abs(rx) / sx)), float(np.max(np.abs(ry) / sy))


def spline_dualeq_residuals(traj: Trajectory, n_samples: int = 4001):
    """Residuals from twice-differentiated cubic splines of densely sampled x, y.

    The estimate is limited by spline truncation error (second derivative of
    a cubic interpolant is only O(h^2) accurate), so it is a consistency
    check, not a precision one.
    """
    from scipy.interpolate import CubicSpline

    ts = np.linspace(traj.t[0], traj.t[-1], n_samples)
    z = traj.sample(ts)
    g, w2 = traj.params.gamma, traj.params.omega2
    out = []
    for col, sign in ((0, 1.0), (2, -1.0)):
        cs = CubicSpline(ts, z[:, col])
        inner = slice(n_samples // 20, -n_samples // 20)
        r = cs(ts, 2) + sign * g * cs(ts, 1) + w2 * cs(ts)
        scale = np.maximum(1.0, np.abs(z[:, col]))
        out.append(float(np.max(np.abs(r[inner]) / scale[inner])))
    return tuple(out)


def time_reversal(s) -> np.ndarray:
    """Duality map ``(x, p_x, y, p_y) -> (y, -p_y, x, -p_x)`` paired with ``t -> -t``."""
    x, px, y, py = _as_array(s)
    return np.array([y, -py, x, -px])


def rk4_fixed(z0, t_end: float, n_steps: int, params: ClassicalParams) -> np.ndarray:
    A = generator_matrix(params)
    z = np.asarray(z0, dtype=float)
    h = t_end / n_steps
    for _ in range(n_steps):
        k1 = A @ z
        k2 = A @ (z + h / 2 * k1)
        k3 = A @ (z + h / 2 * k2)
        k4 = A @ (z + h * k3)
        z = z + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return z


def richardson_state(z0, t_end: float, params: ClassicalParams, n_steps: int = 200) -> np.ndarray:
    """Fourth-order RK4 at steps h and h/2, extrapolated: ``(16 z_{h/2} - z_h)/15``."""
    coarse = rk4_fixed(z0, t_end, n_steps, params)
    fine = rk4_fixed(z0, t_end, 2 * n_steps, params)
    return (16 * fine - coarse) / 15


# --------------------------------------------------------------------------
# canonical transformation to a Caldirola-Kanai pair


def bat2ck(s, t, params: ClassicalParams) -> np.ndarray:
    """``(x, p_x, y, p_y) -> (x', p_x', y', p_y')`` at time ``t`` (t' = t).

    Accepts complex inputs so the map can be differentiated by complex step.
    """
    W2 = params.Omega2
    if W2 == 0:
        raise ZeroDivisionError("the transformation requires Omega != 0")
    x, px, y, py = _as_array(s)
    m, g = params.m, params.gamma
    e = np.exp(g * t)
    r = 1 / math.sqrt(2)
    c = g / (2 * m * W2)
    ratio = params.omega2 / W2
    return np.array([
        r * (x + y / e - c / e * px),
        r * (ratio * px + e * py - m * g / 2 * e * x),
        r * (y - e * x + c * px),
        r * (py - ratio / e * px + m * g / 2 * x),
    ])


def bat2ck_matrix(t: float, params: ClassicalParams) -> np.ndarray:
    return np.stack([bat2ck(col, t, params) for col in np.eye(4)], axis=1)


def canonical_jacobian(s, t: float, params: ClassicalParams, h: float = 1e-20) -> np.ndarray:
    """Jacobian of :func:`bat2ck` by complex-step differentiation."""
    z = _as_array(s).astype(complex)
    cols = []
    for j in range(4):
        dz = z.copy()
        dz[j] += 1j * h
        cols.append(np.imag(bat2ck(dz, t, params)) / h)
    return np.stack(cols, axis=1)


def symplectic_defect(J: np.ndarray) -> float:
    """``max |J^T O J - O|`` relative to ``max(1, |J|_max^2)``."""
    D = J.T @ SYMPLECTIC_FORM @ J - SYMPLECTIC_FORM
    return float(np.abs(D).max() / max(1.0, np.abs(J).max() ** 2))


def ck_pair_hamiltonian(zp, t, params: ClassicalParams):
    """Caldirola-Kanai Hamiltonian of (x', p_x') minus its dual in (y', p_y')."""
    xp, pxp, yp, pyp = _as_array(zp)
    m, g, w2 = params.m, params.gamma, params.omega2
    e = np.exp(g * t)
    return pxp ** 2 / (2 * m * e) + m * w2 * xp ** 2 * e / 2 - e * pyp ** 2 / (2 * m) - m * w2 * yp ** 2 / (2 * e)


def ck_pair_rhs(zp, t, params: ClassicalParams) -> np.ndarray:
    xp, pxp, yp, pyp = _as_array(zp)
    m, g, w2 = params.m, params.gamma, params.omega2
    e = np.exp(g * t)
    return np.array([pxp / (m * e), -m * w2 * e * xp, -e * pyp / m, m * w2 * yp / e])


def transformed_flow_residual(s, t: float, params: ClassicalParams, h: float = 1e-20) -> float:
    """Mismatch between the pushed-forward Bateman flow and Hamilton's
    equations of the Caldirola-Kanai pair, at one state and time.

    ``d z'/dt = (d/dt bat2ck)(z, t) + J(z, t) z'(t)`` with both pieces
    differentiated by complex step, so no generating function is needed.
    """
    z = _as_array(s).astype(float)
    explicit = np.imag(bat2ck(z.astype(complex), t + 1j * h, params)) / h
    dzp = explicit + canonical_jacobian(z, t, params) @ hamilton_rhs(z, params)
    zp = bat2ck(z, t, params)
    expected = ck_pair_rhs(zp, t, params)
    return float(np.abs(dzp - expected).max() / max(1.0, np.abs(expected).max()))


def ck_initial_state(x0: float, v0: float, params: ClassicalParams) -> np.ndarray:
    """Bateman state at t=0 mapping to ``x'=x0, p_x'=m v0, y'=0, p_y'=0``."""
    target = np.array([x0, params.m * v0, 0.0, 0.0])
    return np.linalg.solve(bat2ck_matrix(0.0, params), target)


def ck_closed_form(x0: float, v0: float, t, params: ClassicalParams) -> np.ndarray:
    """``x(t) = x0 u2(t) + v0 u1(t)`` from the damped-oscillator solution pair."""
    t = np.asarray(t, dtype=float)
    g, W2 = params.gamma, params.Omega2
    decay = np.exp(-g * t / 2)
    if W2 > 0:
        W = math.sqrt(W2)
        s, c = np.sin(W * t), np.cos(W * t)
        u1 = decay * s / W
    elif W2 < 0:
        W = math.sqrt(-W2)
        s, c = np.sinh(W * t), np.cosh(W * t)
        u1 = decay * s / W
    else:
        u1 = decay * t
        return x0 * decay * (1 + g * t / 2) + v0 * u1
    u2 = decay * (c + g / (2 * W) * s)
    return x0 * u2 + v0 * u1


@dataclass
class ReductionResult:
    max_deviation: float
    max_constraint_drift: float
    trajectory: Trajectory
    primed: np.ndarray

    def summary(self) -> Dict[str, float]:
        return {"max_ck_deviation": self.max_deviation,
                "max_constraint_drift": self.max_constraint_drift}


def constrained_reduction_check(
    x0: float,
    v0: float,
    params: ClassicalParams,
    t_end: float,
    tol: float = 1e-10,
    drift_limit: float = 1e-6,
) -> ReductionResult:
    """Integrate Bateman from a state on the constraint y' = p_y' = 0 and
    compare x'(t) with the closed-form damped oscillator."""
    z0 = ck_initial_state(x0, v0, params)
    traj = integrate(z0, t_end, tol, params)
    primed = np.array([bat2ck(z, t, params) for t, z in zip(traj.t, traj.states)])
    drift = float(np.abs(primed[:, 2:]).max())
    if drift > drift_limit:
        raise ConstraintViolationError(f"constraint drifted to {drift:.3e}")
    exact = ck_closed_form(x0, v0, traj.t, params)
    dev = float(np.abs(primed[:, 0] - exact).max())
    return ReductionResult(dev, drift, traj, primed)


def summary_json(traj: Trajectory, extra: Optional[Dict[str, object]] = None) -> str:
    data = traj.summary()
    if extra:
        data.update(extra)
    return json.dumps(data, indent=2, sort_keys=True)
