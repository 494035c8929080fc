"""Normal-ordered differential operators with exponential-polynomial coefficients.

A :class:`WeylOp` lives on a :class:`VarSpace` of one or two base variables
``v_i`` and is a finite sum of terms

    f(t) * v_1^{a_1} v_2^{a_2} * d_1^{b_1} d_2^{b_2} * d_t^{c}

with multiplications left of derivatives and the time derivative rightmost.
Products are re-ordered with ``d_v v = v d_v + 1`` and
``d_t f(t) = f(t) d_t + f'(t)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial
from typing import Callable, Dict, Mapping, Sequence, Tuple

from .scalarring import ScalarPoly
from .timecoeff import ExpPoly

Monomial = Tuple[Tuple[int, ...], Tuple[int, ...], int]


class SpaceMismatchError(ValueError):
    pass


class MissingPartialError(LookupError):
    """A test function cannot supply a derivative the operator needs."""


@dataclass(frozen=True)
class VarSpace:
    names: Tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not 1 <= len(names) <= 2:
            raise ValueError("a VarSpace has one or two base variables")
        if len(set(names)) != len(names):
            raise ValueError("variable names must be distinct")

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)


def _falling(n: int, j: int) -> int:
    return factorial(n) // factorial(n - j)


class WeylOp:
    __slots__ = ("space", "_terms", "_hash")

    def __init__(self, space: VarSpace, terms: Mapping[Monomial, object] | None = None):
        self.space = space
        clean: Dict[Monomial, ExpPoly] = {}
        for (alpha, beta, c), coeff in (terms or {}).items():
            alpha, beta, c = tuple(alpha), tuple(beta), int(c)
            if len(alpha) != space.dim or len(beta) != space.dim:
                raise ValueError("monomial powers do not match the space dimension")
            if min(alpha + beta + (c,)) < 0:
                raise ValueError("negative power in monomial")
            key = (alpha, beta, c)
            f = ExpPoly.coerce(coeff)
            if key in clean:
                f = clean[key] + f
            if f:
                clean[key] = f
            else:
                clean.pop(key, None)
        self._terms = clean
        self._hash = None

    # constructors
    @classmethod
    def zero(cls, space: VarSpace) -> "WeylOp":
        return cls(space)

    @classmethod
    def identity(cls, space: VarSpace, coeff=1) -> "WeylOp":
        z = (0,) * space.dim
        return cls(space, {(z, z, 0): coeff})

    @classmethod
    def var(cls, space: VarSpace, name: str, power: int = 1, coeff=1) -> "WeylOp":
        alpha = [0] * space.dim
        alpha[space.index(name)] = power
        return cls(space, {(tuple(alpha), (0,) * space.dim, 0): coeff})

    @classmethod
    def d(cls, space: VarSpace, name: str, power: int = 1, coeff=1) -> "WeylOp":
        beta = [0] * space.dim
        beta[space.index(name)] = power
        return cls(space, {((0,) * space.dim, tuple(beta), 0): coeff})

    @classmethod
    def dt(cls, space: VarSpace, coeff=1) -> "WeylOp":
        z = (0,) * space.dim
        return cls(space, {(z, z, 1): coeff})

    @classmethod
    def term(cls, space: VarSpace, alpha, beta, c=0, coeff=1) -> "WeylOp":
        return cls(space, {(tuple(alpha), tuple(beta), c): coeff})

    @property
    def terms(self) -> Dict[Monomial, ExpPoly]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def max_dt_order(self) -> int:
        return max((c for (_, _, c) in self._terms), default=0)

    def is_scalar(self) -> bool:
        """Multiple of the identity with a time-independent coefficient."""
        z = (0,) * self.space.dim
        return all(k == (z, z, 0) and f.is_constant() for k, f in self._terms.items())

    def scalar_value(self) -> ScalarPoly:
        z = (0,) * self.space.dim
        if not self.is_scalar():
            raise ValueError("operator is not a constant multiple of the identity")
        f = self._terms.get((z, z, 0))
        return f.constant_value() if f is not None else ScalarPoly()

    def _check(self, other: "WeylOp"):
        if self.space != other.space:
            raise SpaceMismatchError(f"{self.space.names} vs {other.space.names}")

    def _lift(self, other) -> "WeylOp":
        if isinstance(other, WeylOp):
            self._check(other)
            return other
        return WeylOp.identity(self.space, ExpPoly.coerce(other))

    def __eq__(self, other):
        if not isinstance(other, WeylOp):
            return NotImplemented
        return self.space == other.space and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.space, frozenset(self._terms.items())))
        return self._hash

    def __neg__(self):
        return WeylOp(self.space, {k: -f for k, f in self._terms.items()})

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for k, f in other._terms.items():
            out[k] = out[k] + f if k in out else f
        return WeylOp(self.space, out)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, coeff) -> "WeylOp":
        """Left multiplication by a function of t (or a constant)."""
        f = ExpPoly.coerce(coeff)
        return WeylOp(self.space, {k: f * g for k, g in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, WeylOp):
            return mul(self, other)
        try:
            f = ExpPoly.coerce(other)
        except TypeError:
            return NotImplemented
        # right multiplication by a function of t must pass through d_t
        return mul(self, WeylOp.identity(self.space, f))

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __pow__(self, n: int):
        result = WeylOp.identity(self.space)
        for _ in range(n):
            result = mul(result, self)
        return result

    def map_coefficients(self, fn: Callable[[ExpPoly], ExpPoly]) -> "WeylOp":
        return WeylOp(self.space, {k: fn(f) for k, f in self._terms.items()})

    def coefficient_d_dt(self) -> "WeylOp":
        """Partial time derivative of the coefficients (explicit time dependence)."""
        if self.max_dt_order():
            raise ValueError("explicit time derivative of an operator containing d_t")
        return self.map_coefficients(lambda f: f.d_dt())

    def adjoint(self) -> "WeylOp":
        """Formal adjoint for the flat measure, with real symbols and real t."""
        if self.max_dt_order():
            raise ValueError("adjoint of an operator containing d_t is not defined")
        out = WeylOp.zero(self.space)
        zero = (0,) * self.space.dim
        for (alpha, beta, _), f in self._terms.items():
            sign = -1 if sum(beta) % 2 else 1
            left = WeylOp(self.space, {(zero, beta, 0): sign})
            right = WeylOp(self.space, {(alpha, zero, 0): f.conjugate()})
            out = out + mul(left, right)
        return out

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (alpha, beta, c), f in self.items():
            factors = []
            for name, a in zip(self.space.names, alpha):
                if a:
                    factors.append(name if a == 1 else f"{name}^{a}")
            for name, b in zip(self.space.names, beta):
                if b:
                    factors.append(f"d_{name}" if b == 1 else f"d_{name}^{b}")
            if c:
                factors.append("d_t" if c == 1 else f"d_t^{c}")
            parts.append(f"{{{f}}}" + ("*" + "*".join(factors) if factors else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"WeylOp({self.space.names}, {str(self)!r})"


def _mul_monomials(space: VarSpace, k1: Monomial, f: ExpPoly, k2: Monomial, g: ExpPoly):
    alpha1, beta1, c1 = k1
    alpha2, beta2, c2 = k2
    out: Dict[Monomial, ExpPoly] = {}
    # d_t^{c1} g = sum_j C(c1, j) g^{(j)} d_t^{c1-j}
    gder = g
    for j in range(c1 + 1):
        if j:
            gder = gder.d_dt()
        if not gder:
            break
        coeff_t = f * gder * comb(c1, j)
        c_new = c1 - j + c2
        # per variable: d^{b} v^{a} = sum_i C(b,i) a!/(a-i)! v^{a-i} d^{b-i}
        partial = [((), (), 1)]
        for b, a in zip(beta1, alpha2):
            nxt = []
            for ai, bi, w in partial:
                for i in range(min(a, b) + 1):
                    nxt.append((ai + (a - i,), bi + (b - i,), w * comb(b, i) * _falling(a, i)))
            partial = nxt
        for amid, bmid, w in partial:
            alpha = tuple(x + y for x, y in zip(alpha1, amid))
            beta = tuple(x + y for x, y in zip(bmid, beta2))
            key = (alpha, beta, c_new)
            val = coeff_t * w
            out[key] = out[key] + val if key in out else val
    return out


def mul(A: WeylOp, B: WeylOp) -> WeylOp:
    """Operator composition ``A * B`` in normal order."""
    A._check(B)
    acc: Dict[Monomial, ExpPoly] = {}
    for k1, f in A._terms.items():
        for k2, g in B._terms.items():
            for key, val in _mul_monomials(A.space, k1, f, k2, g).items():
                acc[key] = acc[key] + val if key in acc else val
    return WeylOp(A.space, acc)


def commutator(A: WeylOp, B: WeylOp) -> WeylOp:
    return mul(A, B) - mul(B, A)


def is_zero(A: WeylOp) -> bool:
    return A.is_zero()


# A test function is a callable ``f(beta, dt, point, t)`` returning the
# partial derivative of order ``beta`` in the base variables and ``dt`` in t.
PartialFn = Callable[[Tuple[int, ...], int, Sequence[float], float], complex]


def apply_numeric(
    A: WeylOp,
    f: PartialFn,
    point: Sequence[complex],
    t: float,
    params: Mapping[str, complex],
) -> complex:
    """Value of ``(A f)(point, t)`` from the partials ``f`` supplies."""
    point = tuple(point)
    if len(point) != A.space.dim:
        raise ValueError("point dimension does not match the operator space")
    total = 0j
    for (alpha, beta, c), coeff in A.items():
        mono = 1 + 0j
        for v, a in zip(point, alpha):
            mono *= v ** a
        total += coeff.eval(t, params) * mono * f(beta, c, point, t)
    return total
