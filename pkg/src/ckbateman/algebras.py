"""Named Lie tables for the damped oscillator and its Bateman extension,
together with their explicit operator realizations."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict

from .liealg import LieTable, Realization, change_basis, gauge_reduce
from .scalarring import I, ONE, Omega, ScalarPoly, gamma, hbar, k, m, omega2
from .timecoeff import ExpPoly, from_trig
from .weylop import VarSpace, WeylOp, mul

X_SPACE = VarSpace(("x",))
MIXED_SPACE = VarSpace(("x", "p_y"))

ih = I * hbar
w2 = omega2()
half = Fraction(1, 2)

BASIS_TILDE = ("X", "P", "Qt", "Pi", "H", "G1", "G2")
BASIS_SHIFTED = ("X", "P", "Q", "Pi", "H", "G1", "G2")
BASIS_REDUCED = ("X", "P", "Q", "Pi", "H")
BASIS_BATEMAN = ("x", "p_x", "y", "p_y", "H")


def heisenberg_weyl() -> LieTable:
    return LieTable("heisenberg-weyl", ("X", "P"), "I", {("X", "P"): {"I": ih}})


def algebra_k(kval=None) -> LieTable:
    """The one-parameter family of central extensions; ``k`` symbolic unless given."""
    kk = k if kval is None else ScalarPoly.const(kval)
    T = LieTable(
        "A_k" if kval is None else f"A_k[k={kval}]",
        BASIS_TILDE,
        "I",
        {
            ("X", "P"): {"I": ih},
            ("Qt", "Pi"): {"G1": 2 * ih, "I": -ih * kk},
            ("X", "Qt"): {"G2": -ih * m ** -1},
            ("X", "Pi"): {"G1": ih},
            ("P", "Qt"): {"G1": -ih, "G2": ih * gamma, "I": ih * (kk - 1)},
            ("P", "Pi"): {"G2": -ih * m * w2},
            ("H", "X"): {"Pi": -ih * m ** -1},
            ("H", "P"): {"X": 2 * ih * m * w2, "Qt": -ih * m * w2},
            ("H", "Qt"): {"X": -2 * ih * gamma, "P": -ih * m ** -1, "Qt": ih * gamma},
            ("H", "Pi"): {"X": 3 * ih * m * w2, "Qt": -2 * ih * m * w2, "Pi": -ih * gamma},
            ("H", "G1"): {"G1": -ih * gamma, "G2": 2 * ih * w2},
            ("H", "G2"): {"G1": -2 * ih, "G2": ih * gamma, "I": ih * (1 + kk)},
        },
    )
    return T


def algebra_tilde() -> LieTable:
    """The eight-dimensional table closed by the imported operators and i hbar d_t."""
    return LieTable(
        "A_tilde",
        BASIS_TILDE,
        "I",
        {
            ("X", "P"): {"I": ih},
            ("Qt", "Pi"): {"G1": 2 * ih, "I": -ih},
            ("X", "Qt"): {"G2": -ih * m ** -1},
            ("X", "Pi"): {"G1": ih},
            ("P", "Qt"): {"G1": -ih, "G2": ih * gamma},
            ("P", "Pi"): {"G2": -ih * m * w2},
            ("H", "X"): {"Pi": -ih * m ** -1},
            ("H", "P"): {"X": 2 * ih * m * w2, "Qt": -ih * m * w2},
            ("H", "Qt"): {"X": -2 * ih * gamma, "P": -ih * m ** -1, "Qt": ih * gamma},
            ("H", "Pi"): {"X": 3 * ih * m * w2, "Qt": -2 * ih * m * w2, "Pi": -ih * gamma},
            ("H", "G1"): {"G1": -ih * gamma, "G2": 2 * ih * w2},
            ("H", "G2"): {"G1": -2 * ih, "G2": ih * gamma, "I": 2 * ih},
        },
    )


def algebra_k_shifted() -> LieTable:
    """The family after ``Q = Qt + (k-1) X``, as tabulated."""
    return LieTable(
        "A_k_shifted",
        BASIS_SHIFTED,
        "I",
        {
            ("X", "P"): {"I": ih},
            ("Q", "Pi"): {"G1": ih * (k + 1), "I": -ih * k},
            ("X", "Q"): {"G2": -ih * m ** -1},
            ("X", "Pi"): {"G1": ih},
            ("P", "Q"): {"G1": -ih, "G2": ih * gamma},
            ("P", "Pi"): {"G2": -ih * m * w2},
            ("H", "X"): {"Pi": -ih * m ** -1},
            ("H", "P"): {"X": ih * m * w2 * (1 + k), "Q": -ih * m * w2},
            ("H", "Q"): {"X": -ih * gamma * (1 + k), "P": -ih * m ** -1, "Q": ih * gamma,
                         "Pi": ih * m ** -1 * (1 - k)},
            ("H", "Pi"): {"X": ih * m * w2 * (2 * k + 1), "Q": -2 * ih * m * w2, "Pi": -ih * gamma},
            ("H", "G1"): {"G1": -ih * gamma, "G2": 2 * ih * w2},
            ("H", "G2"): {"G1": -2 * ih, "G2": ih * gamma, "I": ih * (1 + k)},
        },
    )


def shift_to_q(T: LieTable) -> LieTable:
    """Re-express an ``A_k``-type table in the basis with ``Q = Qt + (k-1) X``."""
    return change_basis(
        T,
        BASIS_SHIFTED,
        forward={"Q": {"Qt": ONE, "X": k - 1}},
        inverse={"Qt": {"Q": ONE, "X": 1 - k}},
        name=f"{T.name}->Q",
    )


def algebra_minus1() -> LieTable:
    return LieTable(
        "A_-1",
        BASIS_SHIFTED,
        "I",
        {
            ("X", "P"): {"I": ih},
            ("Q", "Pi"): {"I": ih},
            ("X", "Q"): {"G2": -ih * m ** -1},
            ("X", "Pi"): {"G1": ih},
            ("P", "Q"): {"G1": -ih, "G2": ih * gamma},
            ("P", "Pi"): {"G2": -ih * m * w2},
            ("H", "X"): {"Pi": -ih * m ** -1},
            ("H", "P"): {"Q": -ih * m * w2},
            ("H", "Q"): {"P": -ih * m ** -1, "Pi": 2 * ih * m ** -1, "Q": ih * gamma},
            ("H", "Pi"): {"X": -ih * m * w2, "Q": -2 * ih * m * w2, "Pi": -ih * gamma},
            ("H", "G1"): {"G1": -ih * gamma, "G2": 2 * ih * w2},
            ("H", "G2"): {"G1": -2 * ih, "G2": ih * gamma},
        },
    )


def algebra_reduced() -> LieTable:
    """The 5+1 table left after removing the gauge generators."""
    return LieTable(
        "B_tilde",
        BASIS_REDUCED,
        "I",
        {
            ("X", "P"): {"I": ih},
            ("Q", "Pi"): {"I": ih},
            ("H", "X"): {"Pi": -ih * m ** -1},
            ("H", "P"): {"Q": -ih * m * w2},
            ("H", "Q"): {"P": -ih * m ** -1, "Pi": 2 * ih * m ** -1, "Q": ih * gamma},
            ("H", "Pi"): {"X": -ih * m * w2, "Q": -2 * ih * m * w2, "Pi": -ih * gamma},
        },
    )


def algebra_bateman() -> LieTable:
    return LieTable(
        "bateman",
        BASIS_BATEMAN,
        "I",
        {
            ("x", "p_x"): {"I": ih},
            ("y", "p_y"): {"I": ih},
            ("H", "x"): {"p_y": -ih * m ** -1, "x": ih * gamma * half},
            ("H", "p_x"): {"p_x": -ih * gamma * half, "y": ih * m * Omega ** 2},
            ("H", "y"): {"p_x": -ih * m ** -1, "y": -ih * gamma * half},
            ("H", "p_y"): {"p_y": ih * gamma * half, "x": ih * m * Omega ** 2},
        },
    )


def named_tables() -> Dict[str, LieTable]:
    return {
        "heisenberg-weyl": heisenberg_weyl(),
        "A_tilde": algebra_tilde(),
        "A_k": algebra_k(),
        "A_k_shifted": algebra_k_shifted(),
        "A_-1": algebra_minus1(),
        "B_tilde": algebra_reduced(),
        "bateman": algebra_bateman(),
    }


def reduce_minus1() -> LieTable:
    return gauge_reduce(algebra_minus1(), name="B_tilde")


# --------------------------------------------------------------------------
# realizations


def realization_tilde() -> Realization:
    """Explicit time-dependent operators on functions of x closing ``A_tilde``."""
    sp = X_SPACE
    s = from_trig("sin", 0)
    c = from_trig("cos", 0)
    inv_W = Omega ** -1
    eplus = ExpPoly.exp(1, 0)
    eminus = ExpPoly.exp(-1, 0)
    ratio = gamma * inv_W * half
    P = WeylOp.d(sp, "x", coeff=eminus * (c + s * ratio) * (-ih)) + WeylOp.var(
        sp, "x", coeff=eplus * s * (m * w2 * inv_W))
    X = WeylOp.var(sp, "x", coeff=eplus * (c - s * ratio)) + WeylOp.d(
        sp, "x", coeff=eminus * s * (ih * m ** -1 * inv_W))
    Pi = WeylOp.d(sp, "x", coeff=eminus * (c - s * ratio) * (-ih)) + WeylOp.var(
        sp, "x", coeff=eplus * s * (m * w2 * inv_W))
    Qt = WeylOp.var(sp, "x", coeff=eplus * (c - s * ratio * 3)) + WeylOp.d(
        sp, "x", coeff=eminus * s * (ih * m ** -1 * inv_W))
    cos2 = c * c - s * s
    sin2 = s * c * 2
    g1 = (ExpPoly.const(-4 * w2) + cos2 * gamma ** 2 + sin2 * (2 * gamma * Omega)) * (
        -Omega ** -2 * Fraction(1, 4))
    g2 = s * s * (gamma * Omega ** -2)
    return {
        "X": X,
        "P": P,
        "Qt": Qt,
        "Pi": Pi,
        "H": WeylOp.dt(sp, ih),
        "G1": WeylOp.identity(sp, g1),
        "G2": WeylOp.identity(sp, g2),
    }


def mixed_basic_operators() -> Dict[str, WeylOp]:
    """x, p_x = -i hbar d_x, y = i hbar d_{p_y}, p_y on functions of (x, p_y)."""
    sp = MIXED_SPACE
    return {
        "x": WeylOp.var(sp, "x"),
        "p_x": WeylOp.d(sp, "x", coeff=-ih),
        "y": WeylOp.d(sp, "p_y", coeff=ih),
        "p_y": WeylOp.var(sp, "p_y"),
    }


def bateman_hamiltonian_mixed() -> WeylOp:
    """``i hbar (gamma x/2 - p_y/m) d_x + i hbar (gamma p_y/2 + m Omega^2 x) d_py + i hbar gamma/2``."""
    sp = MIXED_SPACE
    return (
        WeylOp.term(sp, (1, 0), (1, 0), coeff=ih * gamma * half)
        + WeylOp.term(sp, (0, 1), (1, 0), coeff=-ih * m ** -1)
        + WeylOp.term(sp, (0, 1), (0, 1), coeff=ih * gamma * half)
        + WeylOp.term(sp, (1, 0), (0, 1), coeff=ih * m * Omega ** 2)
        + WeylOp.identity(sp, ih * gamma * half)
    )


def bateman_hamiltonian_quadratic() -> WeylOp:
    """``p_x p_y/m + (gamma/2)(y p_y - x p_x) + m Omega^2 x y`` composed from the basic operators."""
    b = mixed_basic_operators()
    return (
        mul(b["p_x"], b["p_y"]).scale(m ** -1)
        + (mul(b["y"], b["p_y"]) - mul(b["x"], b["p_x"])).scale(gamma * half)
        + mul(b["x"], b["y"]).scale(m * Omega ** 2)
    )


def realization_bateman() -> Realization:
    R = dict(mixed_basic_operators())
    R["H"] = bateman_hamiltonian_mixed()
    return R


def reduced_from_bateman() -> Dict[str, WeylOp]:
    """X, P, Q, Pi in terms of the Bateman variables via the linear map."""
    b = mixed_basic_operators()
    x, px, y, py = b["x"], b["p_x"], b["y"], b["p_y"]
    inv_mg = m ** -1 * gamma ** -1
    mw2_g = m * w2 * gamma ** -1
    mg2 = m * gamma * half
    return {
        "X": y + py.scale(inv_mg) + x.scale(half),
        "P": px - y.scale(mg2) - x.scale(mw2_g),
        "Q": -y - py.scale(inv_mg) + x.scale(half),
        "Pi": px + y.scale(mg2) - x.scale(mw2_g),
    }


def bateman_from_reduced(ops: Dict[str, WeylOp]) -> Dict[str, WeylOp]:
    """The inverse linear map, applied to realized X, P, Q, Pi."""
    X, P, Q, Pi = ops["X"], ops["P"], ops["Q"], ops["Pi"]
    return {
        "x": X + Q,
        "p_x": (P + Pi).scale(half) + (X + Q).scale(m * w2 * gamma ** -1),
        "y": (P - Pi).scale(-(m ** -1) * gamma ** -1),
        "p_y": P - Pi + (X - Q).scale(m * gamma * half),
    }


def reduced_hamiltonian(ops: Dict[str, WeylOp]) -> WeylOp:
    """``Pi P/m - (gamma/2)(Q Pi + Pi Q) - Pi^2/m - m omega^2 X Q - m omega^2 Q^2``."""
    X, P, Q, Pi = ops["X"], ops["P"], ops["Q"], ops["Pi"]
    return (
        mul(Pi, P).scale(m ** -1)
        - (mul(Q, Pi) + mul(Pi, Q)).scale(gamma * half)
        - mul(Pi, Pi).scale(m ** -1)
        - mul(X, Q).scale(m * w2)
        - mul(Q, Q).scale(m * w2)
    )


def realization_reduced() -> Realization:
    R = reduced_from_bateman()
    R["H"] = reduced_hamiltonian(R)
    return R
