"""Dynamical invariants of the Caldirola-Kanai oscillator.

An operator ``O(t)`` is conserved when ``dO/dt + (i/hbar) [H, O] = 0``;
:func:`invariant_residual` returns the left-hand side as an exact operator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .scalarring import I, ScalarPoly, gamma, hbar, m, omega2
from .timecoeff import ExpPoly, dho_solutions, wronskian
from .weylop import VarSpace, WeylOp, commutator

X_SPACE = VarSpace(("x",))


@dataclass
class InvariantReport:
    name: str
    residual: WeylOp

    @property
    def passed(self) -> bool:
        return self.residual.is_zero()


def ck_hamiltonian(space: VarSpace = X_SPACE, damped_particle: bool = False) -> WeylOp:
    """``-(hbar^2/2m) e^{-gamma t} d_x^2 + (m omega^2/2) e^{gamma t} x^2``.

    With ``damped_particle`` the potential term is dropped (omega = 0).
    """
    kinetic = WeylOp.d(space, "x", 2, ExpPoly.exp(-2, 0, -hbar ** 2 * m ** -1 * Fraction(1, 2)))
    if damped_particle:
        return kinetic
    return kinetic + WeylOp.var(space, "x", 2, ExpPoly.exp(2, 0, m * omega2() * Fraction(1, 2)))


def qat_import(u1: ExpPoly, u2: ExpPoly, space: VarSpace = X_SPACE) -> Tuple[WeylOp, WeylOp]:
    """Position and momentum invariants built from two classical solutions.

    ``P = -i hbar u2 d_x - m (u2'/W) x`` and ``X = (u1'/W) x + i hbar (u1/m) d_x``
    where ``W`` is the Wronskian, which must be a unit of the ring.
    """
    W = wronskian(u1, u2)
    if not W.is_unit():
        raise ZeroDivisionError(f"Wronskian {W} is not a single exponential")
    Winv = W.inverse()
    ih = I * hbar
    P = WeylOp.d(space, "x", coeff=u2 * (-ih)) + WeylOp.var(space, "x", coeff=u2.d_dt() * Winv * (-m))
    X = WeylOp.var(space, "x", coeff=u1.d_dt() * Winv) + WeylOp.d(space, "x", coeff=u1 * ih * m ** -1)
    return X, P


def dho_invariants() -> Tuple[WeylOp, WeylOp]:
    return qat_import(*dho_solutions())


def damped_particle_operators(space: VarSpace = X_SPACE) -> Tuple[WeylOp, WeylOp]:
    """Invariants of the free damped particle, built directly at omega = 0.

    ``X = x + (i hbar/(m gamma)) (1 - e^{-gamma t}) d_x``, ``P = -i hbar d_x``.
    """
    ih = I * hbar
    c = ih * m ** -1 * gamma ** -1
    X = WeylOp.var(space, "x") + WeylOp.d(space, "x", coeff=ExpPoly.const(c) - ExpPoly.exp(-2, 0, c))
    P = WeylOp.d(space, "x", coeff=-ih)
    return X, P


def invariant_residual(O: WeylOp, H: WeylOp) -> WeylOp:
    """``dO/dt + (i/hbar) [H, O]`` (explicit time derivative of coefficients)."""
    if O.max_dt_order():
        raise ValueError("the observable must not contain d_t")
    return O.coefficient_d_dt() + commutator(H, O).scale(ExpPoly.const(I * hbar ** -1))


def check(name: str, O: WeylOp, H: WeylOp) -> InvariantReport:
    return InvariantReport(name, invariant_residual(O, H))


def standard_reports() -> list:
    H = ck_hamiltonian()
    X, P = dho_invariants()
    Xd, Pd = damped_particle_operators()
    Hd = ck_hamiltonian(damped_particle=True)
    return [
        check("X", X, H),
        check("P", P, H),
        check("P^2", P * P, H),
        check("X^2", X * X, H),
        check("X_damped_particle", Xd, Hd),
        check("P_damped_particle", Pd, Hd),
    ]


def heisenberg_check() -> WeylOp:
    """``[X, P] - i hbar``; zero when the imported pair is canonical."""
    X, P = dho_invariants()
    return commutator(X, P) - WeylOp.identity(X.space, ExpPoly.const(I * hbar))


