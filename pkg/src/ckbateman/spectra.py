"""First-order quantum Bateman oscillator in the mixed (x, p_y) representation.

The Hamiltonian is a first-order differential operator, so its eigenfunctions
are built from the characteristic variables ``z_pm = x +- i p_y/(m Omega)``.
In the overdamped regime ``Omega = i W`` with ``W`` real, and then
``z_pm = x +- p_y/(m W)`` are real.  Eigen-relations are checked pointwise from
closed-form first partials; no inner product is involved.

Time evolution follows ``i hbar d_t psi = H psi``, so stationary states carry
the phase ``exp(-i E t/hbar)``.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .algebras import MIXED_SPACE, bateman_hamiltonian_mixed
from .scalarring import I, Omega, gamma, hbar, m
from .weylop import MissingPartialError, WeylOp

REGIMES = ("under", "over", "critical")
LABEL_NAMES = {"under": "n", "over": "n_tilde", "critical": "k"}

# keep sample points away from the singular lines
MIN_DISTANCE = 0.1


class InvalidLabelError(ValueError):
    pass


class SingularPointError(ValueError):
    pass


@dataclass(frozen=True)
class Regime:
    """Damping regime with its parameters.

    ``freq`` holds Omega when underdamped, the real W = -i Omega when
    overdamped, and is ignored at critical damping.
    """

    kind: str
    m: float = 1.0
    hbar: float = 1.0
    gamma: float = 0.4
    freq: float = 0.0

    def __post_init__(self):
        if self.kind not in REGIMES:
            raise ValueError(f"unknown regime {self.kind!r}")
        if not (self.m > 0 and self.hbar > 0 and self.gamma >= 0):
            raise ValueError("m and hbar must be positive, gamma nonnegative")
        if self.kind != "critical" and not self.freq > 0:
            raise ValueError(f"{self.kind}damped regime needs a positive frequency")

    @classmethod
    def from_omega(cls, m: float, hbar: float, gamma: float, omega: float) -> "Regime":
        d = omega ** 2 - gamma ** 2 / 4
        if d > 0:
            return cls("under", m, hbar, gamma, math.sqrt(d))
        if d < 0:
            return cls("over", m, hbar, gamma, math.sqrt(-d))
        return cls("critical", m, hbar, gamma, 0.0)

    @property
    def Omega(self) -> complex:
        if self.kind == "under":
            return complex(self.freq)
        if self.kind == "over":
            return 1j * self.freq
        return 0j

    @property
    def omega2(self) -> float:
        return (self.Omega ** 2).real + self.gamma ** 2 / 4

    def params(self) -> Dict[str, complex]:
        """Numeric values for the symbols of the operator coefficients."""
        return {"m": self.m, "hbar": self.hbar, "gamma": self.gamma, "Omega": self.Omega}

    def z(self, x, p):
        if self.kind == "critical":
            raise ValueError("z variables are undefined at critical damping")
        c = 1j / (self.m * self.Omega)
        return x + c * p, x - c * p

    def dz_dp(self) -> complex:
        """``d z_+/d p_y``; ``d z_-/d p_y`` is its negative."""
        return 1j / (self.m * self.Omega)

    def xp(self, zp, zm):
        """Inverse of :meth:`z`."""
        return (zp + zm) / 2, (zp - zm) / (2 * self.dz_dp())


def bateman_h_firstorder() -> WeylOp:
    return bateman_hamiltonian_mixed()


def split_operators() -> Tuple[WeylOp, WeylOp]:
    """``H_Omega = -i hbar (p_y/m d_x - m Omega^2 x d_py)`` and
    ``D = i hbar (gamma/2)(x d_x + p_y d_py + 1)``."""
    sp = MIXED_SPACE
    ih = I * hbar
    H_Omega = (WeylOp.term(sp, (0, 1), (1, 0), coeff=-ih * m ** -1)
               + WeylOp.term(sp, (1, 0), (0, 1), coeff=ih * m * Omega ** 2))
    g2 = ih * gamma * Fraction(1, 2)
    D = (WeylOp.term(sp, (1, 0), (1, 0), coeff=g2)
         + WeylOp.term(sp, (0, 1), (0, 1), coeff=g2)
         + WeylOp.identity(sp, g2))
    return H_Omega, D


def _is_integer(v) -> bool:
    return float(v).is_integer()


def validate_labels(regime: Regime, label: float, lam: float) -> None:
    for name, v in ((LABEL_NAMES[regime.kind], label), ("lam", lam)):
        if isinstance(v, complex) or not math.isfinite(v):
            raise InvalidLabelError(f"{name} must be a finite real number, got {v!r}")
    if regime.kind == "under" and not _is_integer(label):
        raise InvalidLabelError(f"n must be an integer in the underdamped regime, got {label}")


def eigenvalue(regime: Regime, label: float, lam: float) -> float:
    """``n hbar Omega + lam hbar gamma``, ``n~ hbar W + lam hbar gamma`` or
    ``hbar gamma (k + lam)``."""
    validate_labels(regime, label, lam)
    if regime.kind == "critical":
        return regime.hbar * regime.gamma * (label + lam)
    return regime.hbar * (label * regime.freq + lam * regime.gamma)


@dataclass(frozen=True)
class EigenFunction:
    """Simultaneous eigenfunction of ``H_Omega`` and ``D``.

    Under/overdamped: ``(z_-/z_+)^{n/2} (z_+ z_-)^{-1/2 - i lam}`` with each
    power taken from principal logarithms of ``z_+`` and ``z_-`` separately.
    Overdamped labels enter through ``n = -i n~``, which makes the
    ``H_Omega`` eigenvalue ``n~ hbar W``.  Critical damping uses
    ``exp(i k m gamma x/p_y) (p_y^2)^{-1/2 - i lam}``.

    ``strict=False`` skips label validation (used to exhibit the
    non-integer ``n`` failure of single-valuedness).
    """

    regime: Regime
    label: float
    lam: float
    strict: bool = True

    def __post_init__(self):
        if self.strict:
            validate_labels(self.regime, self.label, self.lam)

    @property
    def energy(self) -> float:
        if self.strict:
            return eigenvalue(self.regime, self.label, self.lam)
        r = self.regime
        if r.kind == "critical":
            return r.hbar * r.gamma * (self.label + self.lam)
        return r.hbar * (self.label * r.freq + self.lam * r.gamma)

    @property
    def n_eff(self) -> complex:
        """Exponent label in the z-form."""
        return -1j * self.label if self.regime.kind == "over" else complex(self.label)

    @property
    def a(self) -> complex:
        return -0.5 - 1j * self.lam

    def _check_point(self, x, p):
        if self.regime.kind == "critical":
            if p == 0:
                raise SingularPointError("p_y = 0 is singular at critical damping")
            return
        zp, zm = self.regime.z(x, p)
        if zp == 0 or zm == 0:
            raise SingularPointError(f"z_+ or z_- vanishes at ({x}, {p})")

    def from_logs(self, lp: complex, lm: complex) -> complex:
        """Value given chosen logarithms of ``z_+`` and ``z_-``."""
        n2 = self.n_eff / 2
        return cmath.exp(n2 * (lm - lp) + self.a * (lp + lm))

    def of_z(self, zp: complex, zm: complex) -> complex:
        """The z-form evaluated at arbitrary (independent) arguments."""
        if zp == 0 or zm == 0:
            raise SingularPointError("z_+ or z_- vanishes")
        return self.from_logs(cmath.log(zp), cmath.log(zm))

    def of_xp(self, x, p) -> complex:
        """Critical-damping form at arbitrary complex ``(x, p_y)``."""
        if p == 0:
            raise SingularPointError("p_y = 0 is singular at critical damping")
        r = self.regime
        return cmath.exp(1j * self.label * r.m * r.gamma * x / p + self.a * cmath.log(p * p))

    def value(self, x, p) -> complex:
        self._check_point(x, p)
        if self.regime.kind == "critical":
            return self.of_xp(x, p)
        return self.of_z(*self.regime.z(x, p))

    def gradient(self, x, p) -> Tuple[complex, complex, complex]:
        """``(phi, d phi/dx, d phi/dp_y)`` in closed form."""
        phi = self.value(x, p)
        r = self.regime
        if r.kind == "critical":
            c = 1j * self.label * r.m * r.gamma
            return phi, c / p * phi, (-c * x / p ** 2 + 2 * self.a / p) * phi
        zp, zm = r.z(x, p)
        n2 = self.n_eff / 2
        d_plus = (self.a - n2) / zp * phi
        d_minus = (self.a + n2) / zm * phi
        return phi, d_plus + d_minus, r.dz_dp() * (d_plus - d_minus)

    def partial(self, beta, dt, point, t) -> complex:
        """Partial-derivative callback for operator application."""
        if dt:
            return 0j
        order = tuple(beta)
        idx = {(0, 0): 0, (1, 0): 1, (0, 1): 2}
        if order not in idx:
            raise MissingPartialError(f"no closed form for partial {order}")
        return self.gradient(*point)[idx[order]]


def apply_terms(A: WeylOp, f: Callable, point: Sequence[complex], t: float,
                params: Mapping[str, complex]) -> List[complex]:
    """Individual term contributions of ``(A f)(point, t)``."""
    out = []
    for (alpha, beta, c), coeff in A.items():
        mono = 1 + 0j
        for v, a in zip(point, alpha):
            mono *= v ** a
        out.append(coeff.eval(t, params) * mono * f(beta, c, tuple(point), t))
    return out


@dataclass
class Residual:
    residual: complex
    relative: float


def _residual(A: WeylOp, phi: EigenFunction, eig: float, point) -> Residual:
    terms = apply_terms(A, phi.partial, point, 0.0, phi.regime.params())
    value = phi.value(*point)
    r = sum(terms) - eig * value
    scale = max(abs(eig * value), sum(abs(c) for c in terms))
    return Residual(r, abs(r) / scale if scale else abs(r))


def eigenfunction_residual(phi: EigenFunction, point) -> complex:
    """``(H phi)(point) - E phi(point)``."""
    return _residual(bateman_h_firstorder(), phi, phi.energy, point).residual


def relative_residual(phi: EigenFunction, point, which: str = "H") -> float:
    """Residual divided by the largest uncancelled magnitude.

    ``which`` selects ``H``, ``H_Omega`` or ``D``.  The scale is
    ``max(|E phi|, sum of |term|)``, which stays meaningful when ``E = 0``.
    """
    r = phi.regime
    H_Omega, D = split_operators()
    if which == "H":
        A, eig = bateman_h_firstorder(), phi.energy
    elif which == "H_Omega":
        A = H_Omega
        eig = r.hbar * r.gamma * phi.label if r.kind == "critical" else phi.energy - r.hbar * r.gamma * phi.lam
    elif which == "D":
        A, eig = D, r.hbar * r.gamma * phi.lam
    else:
        raise ValueError(f"unknown operator {which!r}")
    return _residual(A, phi, eig, point).relative


# --- sampling -------------------------------------------------------------

def is_regular(regime: Regime, x: float, p: float, margin: float = MIN_DISTANCE) -> bool:
    if regime.kind == "critical":
        return abs(p) > margin
    zp, zm = regime.z(x, p)
    return abs(zp) > margin and abs(zm) > margin


def sample_points(regime: Regime, n: int, rng: np.random.Generator, box: float = 2.0):
    out = []
    while len(out) < n:
        x, p = rng.uniform(-box, box, size=2)
        if is_regular(regime, x, p):
            out.append((float(x), float(p)))
    return out


def sample_labels(regime: Regime, n: int, rng: np.random.Generator):
    if regime.kind == "under":
        labels = rng.integers(-5, 6, size=n).astype(float)
    else:
        labels = rng.uniform(-3, 3, size=n)
    lams = rng.uniform(-2, 2, size=n)
    return [(float(a), float(b)) for a, b in zip(labels, lams)]


@dataclass
class SpectrumRow:
    regime: str
    labels: Dict[str, float]
    E: float
    residual_max: float
    samples: int

    def as_dict(self) -> Dict[str, object]:
        return {"regime": self.regime, "labels": self.labels, "E": self.E,
                "residual_max": self.residual_max, "samples": self.samples}


def spectrum_row(regime: Regime, label: float, lam: float, samples: int = 20,
                 seed: int = 0) -> SpectrumRow:
    """Energy and the worst relative residual over random regular points."""
    phi = EigenFunction(regime, label, lam)
    rng = np.random.default_rng(seed)
    worst = max(relative_residual(phi, pt) for pt in sample_points(regime, samples, rng))
    return SpectrumRow(regime.kind, {LABEL_NAMES[regime.kind]: label, "lam": lam},
                       phi.energy, worst, samples)


def residual_sweep(regime: Regime, draws: int = 100, seed: int = 0,
                   which: str = "H", workers: int = 4) -> np.ndarray:
    """Relative residuals over random (label, point) draws.

    Batches run on a thread pool; results keep draw order, so the output
    depends on ``seed`` alone.
    """
    rng = np.random.default_rng(seed)
    labels = sample_labels(regime, draws, rng)
    points = sample_points(regime, draws, rng)

    def one(job):
        (label, lam), pt = job
        return relative_residual(EigenFunction(regime, label, lam), pt, which)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return np.array(list(pool.map(one, zip(labels, points))))


# --- propagation ----------------------------------------------------------

def propagate(f: Callable[[complex, complex], complex], x, p, t: float,
              regime: Regime) -> complex:
    """``e^{gamma t/2} f(e^{(gamma/2 + i Omega) t} z_+, e^{(gamma/2 - i Omega) t} z_-)``."""
    zp, zm = regime.z(x, p)
    g2, W = regime.gamma / 2, regime.Omega
    return cmath.exp(g2 * t) * f(cmath.exp((g2 + 1j * W) * t) * zp,
                                 cmath.exp((g2 - 1j * W) * t) * zm)


def flow_matrix(t: float, regime: Regime) -> np.ndarray:
    """Linear characteristic flow in (x, p_y); valid in every regime."""
    W = regime.Omega
    c = np.cos(W * t)
    s_over = t if W == 0 else np.sin(W * t) / W
    ms = regime.m * W * W * s_over
    return np.exp(regime.gamma * t / 2) * np.array(
        [[c, -s_over / regime.m], [ms, c]], dtype=complex)


def propagate_xp(g: Callable[[complex, complex], complex], x, p, t: float,
                 regime: Regime) -> complex:
    """``e^{gamma t/2} g(Phi_t(x, p_y))``, the (x, p_y) form of the general solution."""
    X, P = flow_matrix(t, regime) @ np.array([x, p], dtype=complex)
    return cmath.exp(regime.gamma * t / 2) * g(complex(X), complex(P))


def stationary_phase_error(phi: EigenFunction, point, t: float) -> float:
    """``|psi(t) - e^{-iEt/hbar} phi| / |phi|`` for the propagated eigenfunction."""
    r = phi.regime
    if r.kind == "critical":
        psi = propagate_xp(phi.of_xp, *point, t, r)
    else:
        psi = propagate(phi.of_z, *point, t, r)
    ref = cmath.exp(-1j * phi.energy * t / r.hbar) * phi.value(*point)
    return abs(psi - ref) / abs(ref)


@dataclass
class PropagatedState:
    """Solution ``psi(t)`` from an initial datum given in z-form.

    ``f`` takes ``(z_+, z_-)``; ``df`` returns ``(f, df/dz_+, df/dz_-)`` at
    the same arguments.  Supplies spatial partials analytically, for
    checking the time-dependent equation against finite differences in t.
    """

    regime: Regime
    f: Callable[[complex, complex], complex]
    df: Callable[[complex, complex], Tuple[complex, complex, complex]] = field(repr=False)

    def value(self, x, p, t) -> complex:
        return propagate(self.f, x, p, t, self.regime)

    def gradient(self, x, p, t) -> Tuple[complex, complex, complex]:
        r = self.regime
        zp, zm = r.z(x, p)
        g2, W = r.gamma / 2, r.Omega
        ep, em = cmath.exp((g2 + 1j * W) * t), cmath.exp((g2 - 1j * W) * t)
        f, fp, fm = self.df(ep * zp, em * zm)
        pre = cmath.exp(g2 * t)
        dplus, dminus = pre * ep * fp, pre * em * fm
        return pre * f, dplus + dminus, r.dz_dp() * (dplus - dminus)

    def schroedinger_residual(self, x, p, t, h: float = 1e-5) -> float:
        """``|i hbar d_t psi - H psi|`` with a central difference in t."""
        r = self.regime
        dpsi = (self.value(x, p, t + h) - self.value(x, p, t - h)) / (2 * h)
        psi, dx, dp = self.gradient(x, p, t)
        H = bateman_h_firstorder()
        partials = {(0, 0): psi, (1, 0): dx, (0, 1): dp}
        Hpsi = sum(apply_terms(H, lambda b, c, pt, tt: partials[tuple(b)],
                               (x, p), 0.0, r.params()))
        return abs(1j * r.hbar * dpsi - Hpsi)


# --- global structure -----------------------------------------------------

def continued_value(phi: EigenFunction, point, windings: int = 1,
                    steps: int = 720) -> Tuple[complex, complex]:
    """Start value and value after continuation once around the origin.

    The path circles the origin in the (x, p_y/(m Omega)) plane, so ``z_+``
    winds by ``+2 pi`` and ``z_-`` by ``-2 pi`` per turn.  Logarithms are
    tracked continuously along the path.
    """
    r = phi.regime
    if r.kind != "under":
        raise ValueError("continuation around the origin needs real Omega")
    x0, p0 = point
    zp0, _ = r.z(x0, p0)
    radius, theta0 = abs(zp0), cmath.phase(zp0)
    theta = theta0 + np.linspace(0.0, 2 * np.pi * windings, steps * abs(windings) + 1)
    zp = radius * np.exp(1j * theta)
    xs, ps = zp.real, zp.imag * r.m * r.freq
    zplus, zminus = r.z(xs, ps)
    arg_p = np.unwrap(np.angle(zplus))
    arg_m = np.unwrap(np.angle(zminus))
    lp = np.log(np.abs(zplus)) + 1j * arg_p
    lm = np.log(np.abs(zminus)) + 1j * arg_m
    # anchor the start at the principal branch used by value()
    lp += cmath.log(zplus[0]) - lp[0]
    lm += cmath.log(zminus[0]) - lm[0]
    return phi.from_logs(lp[0], lm[0]), phi.from_logs(lp[-1], lm[-1])


def is_single_valued(phi: EigenFunction, point, rtol: float = 1e-9) -> bool:
    start, end = continued_value(phi, point)
    return abs(end - start) <= rtol * abs(start)


def gram_determinant(functions: Sequence[EigenFunction], points) -> float:
    """Determinant of the Gram matrix of the normalized sample vectors."""
    V = np.array([[f.value(*pt) for pt in points] for f in functions])
    V = V / np.linalg.norm(V, axis=1, keepdims=True)
    G = V.conj() @ V.T
    return float(np.linalg.det(G).real)


def degenerate_partner(regime: Regime, label: float, lam: float, shift: int = 1) -> Tuple[float, float]:
    """Another label pair with the same energy (``label + shift``)."""
    if regime.kind == "critical":
        return label + shift, lam - shift
    if regime.gamma == 0:
        raise ValueError("no degeneracy in lam without damping")
    return label + shift, lam - shift * regime.freq / regime.gamma


__all__ = [
    "REGIMES",
    "Regime",
    "InvalidLabelError",
    "SingularPointError",
    "bateman_h_firstorder",
    "split_operators",
    "eigenvalue",
    "EigenFunction",
    "eigenfunction_residual",
    "relative_residual",
    "residual_sweep",
    "spectrum_row",
    "propagate",
    "propagate_xp",
    "flow_matrix",
    "stationary_phase_error",
    "PropagatedState",
    "continued_value",
    "is_single_valued",
    "gram_determinant",
    "sample_points",
    "degenerate_partner",
]
