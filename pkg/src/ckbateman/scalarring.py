"""Exact coefficient ring: Laurent polynomials in the physical parameters.

A :class:`ScalarPoly` is a finite sum of monomials ``c * m^a * hbar^b *
gamma^c * Omega^d * k^e`` with Gaussian-rational coefficients ``c``.  The
damped frequency ``omega`` is never stored; it enters through
``omega**2 == Omega**2 + gamma**2/4`` (see :func:`omega2`).
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Mapping, Tuple

SYMBOLS: Tuple[str, ...] = ("m", "hbar", "gamma", "Omega", "k")
# symbols that must keep nonnegative exponents
POLYNOMIAL_ONLY = frozenset({"k"})

Exponents = Tuple[int, int, int, int, int]
ZERO_EXP: Exponents = (0, 0, 0, 0, 0)


class GaussianRational:
    """Complex number ``re + i*im`` with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            re, im = re.re, re.im + Fraction(im)
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        if isinstance(value, (int, Rational, str)):
            return cls(Fraction(value))
        if isinstance(value, float):
            return cls(Fraction(value))
        raise TypeError(f"cannot coerce {value!r} to GaussianRational")

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-GaussianRational.coerce(other))

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational.coerce(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return self * GaussianRational(other.re / norm, -other.im / norm)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}*i)"


I_UNIT = GaussianRational(0, 1)


def _check_exponents(exps: Exponents) -> None:
    for name, e in zip(SYMBOLS, exps):
        if name in POLYNOMIAL_ONLY and e < 0:
            raise ValueError(f"negative exponent for polynomial-only symbol {name!r}")


class ScalarPoly:
    """Immutable Laurent polynomial over the Gaussian rationals.

    Terms are kept canonical at construction: zero coefficients are dropped,
    so two polynomials are equal iff their term maps are equal.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponents, object] | None = None):
        clean: Dict[Exponents, GaussianRational] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(SYMBOLS):
                raise ValueError(f"exponent vector must have length {len(SYMBOLS)}")
            _check_exponents(exps)
            c = GaussianRational.coerce(coeff)
            if exps in clean:
                c = clean[exps] + c
            if c:
                clean[exps] = c
            else:
                clean.pop(exps, None)
        self._terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def const(cls, value) -> "ScalarPoly":
        return cls({ZERO_EXP: value})

    @classmethod
    def symbol(cls, name: str, power: int = 1) -> "ScalarPoly":
        exps = [0] * len(SYMBOLS)
        exps[SYMBOLS.index(name)] = power
        return cls({tuple(exps): 1})

    @classmethod
    def coerce(cls, value) -> "ScalarPoly":
        if isinstance(value, ScalarPoly):
            return value
        return cls.const(value)

    @property
    def terms(self) -> Dict[Exponents, GaussianRational]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(e == ZERO_EXP for e in self._terms)

    def constant_term(self) -> GaussianRational:
        return self._terms.get(ZERO_EXP, GaussianRational())

    def canonical(self) -> "ScalarPoly":
        # always canonical; kept as an explicit operation for idempotence checks
        return ScalarPoly(self._terms)

    def free_symbols(self) -> frozenset:
        used = set()
        for exps in self._terms:
            used.update(n for n, e in zip(SYMBOLS, exps) if e)
        return frozenset(used)

    # ring operations
    def __eq__(self, other):
        try:
            other = ScalarPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __neg__(self):
        return ScalarPoly({e: -c for e, c in self._terms.items()})

    def __add__(self, other):
        try:
            other = ScalarPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out[e] + c if e in out else c
        return ScalarPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = ScalarPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return ScalarPoly.coerce(other) - self

    def __mul__(self, other):
        try:
            other = ScalarPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out: Dict[Exponents, GaussianRational] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return ScalarPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = ScalarPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        return self * ScalarPoly.coerce(other).inverse()

    def inverse(self) -> "ScalarPoly":
        """Inverse of a single-term polynomial (a unit of the Laurent ring)."""
        if len(self._terms) != 1:
            raise ZeroDivisionError(f"{self} is not a monomial unit")
        (exps, c), = self._terms.items()
        inv = tuple(-e for e in exps)
        _check_exponents(inv)
        return ScalarPoly({inv: GaussianRational(1) / c})

    def conjugate(self) -> "ScalarPoly":
        """Complex conjugate with every symbol treated as real."""
        return ScalarPoly({e: c.conjugate() for e, c in self._terms.items()})

    def subs(self, name: str, value) -> "ScalarPoly":
        """Substitute an exact number for one symbol."""
        idx = SYMBOLS.index(name)
        value = GaussianRational.coerce(value)
        out = ScalarPoly()
        for exps, c in self._terms.items():
            e = exps[idx]
            if e < 0 and not value:
                raise ZeroDivisionError(f"{name}=0 with negative exponent")
            factor = GaussianRational(1)
            base = value if e >= 0 else GaussianRational(1) / value
            for _ in range(abs(e)):
                factor = factor * base
            rest = list(exps)
            rest[idx] = 0
            out = out + ScalarPoly({tuple(rest): c * factor})
        return out

    def eval(self, params: Mapping[str, complex]) -> complex:
        """Numeric value; terms summed in sorted exponent order."""
        total = 0j
        for exps, c in sorted(self._terms.items()):
            val = complex(c)
            for name, e in zip(SYMBOLS, exps):
                if e == 0:
                    continue
                try:
                    x = complex(params[name])
                except KeyError:
                    raise KeyError(f"no numeric value for symbol {name!r}") from None
                if e < 0 and x == 0:
                    raise ZeroDivisionError(f"{name}=0 with negative exponent")
                val *= x ** e
            total += val
        return total

    # text form
    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exps, c in sorted(self._terms.items()):
            factors = []
            for name, e in zip(SYMBOLS, exps):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            parts.append("*".join([str(c)] + factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"ScalarPoly({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "ScalarPoly":
        """Inverse of ``str``: ``'1/2*gamma*Omega^-1 + (1+2*i)*m'``."""
        text = text.strip()
        if text == "0":
            return cls()
        out = cls()
        for term in _split_top(text, " + "):
            out = out + _parse_term(term.strip())
        return out


_NUM = re.compile(r"^-?\d+(/\d+)?$")


def _split_top(text: str, sep: str):
    depth, start, parts = 0, 0, []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and text.startswith(sep, i):
            parts.append(text[start:i])
            i += len(sep)
            start = i
            continue
        i += 1
    parts.append(text[start:])
    return parts


def _parse_gaussian(tok: str) -> GaussianRational:
    if tok.startswith("(") and tok.endswith(")"):
        body = tok[1:-1]
        m = re.match(r"^(-?\d+(?:/\d+)?)([+-])(\d+(?:/\d+)?)\*i$", body)
        if not m:
            raise ValueError(f"bad Gaussian rational {tok!r}")
        im = Fraction(m.group(3))
        return GaussianRational(Fraction(m.group(1)), im if m.group(2) == "+" else -im)
    if _NUM.match(tok):
        return GaussianRational(Fraction(tok))
    raise ValueError(f"bad coefficient {tok!r}")


def _parse_term(term: str) -> ScalarPoly:
    factors = _split_top(term, "*")
    coeff = GaussianRational(1)
    exps = [0] * len(SYMBOLS)
    for f in factors:
        if f == "i":
            coeff = coeff * I_UNIT
        elif f.startswith("(") or _NUM.match(f):
            coeff = coeff * _parse_gaussian(f)
        else:
            name, _, power = f.partition("^")
            if name not in SYMBOLS:
                raise ValueError(f"unknown symbol {name!r}")
            exps[SYMBOLS.index(name)] += int(power) if power else 1
    return ScalarPoly({tuple(exps): coeff})


# common constants
m = ScalarPoly.symbol("m")
hbar = ScalarPoly.symbol("hbar")
gamma = ScalarPoly.symbol("gamma")
Omega = ScalarPoly.symbol("Omega")
k = ScalarPoly.symbol("k")
I = ScalarPoly.const(I_UNIT)
ONE = ScalarPoly.const(1)
ZERO = ScalarPoly()


def omega2() -> ScalarPoly:
    """``omega**2`` eliminated in favour of ``Omega**2 + gamma**2/4``."""
    return Omega ** 2 + gamma ** 2 * Fraction(1, 4)


def add(p, q) -> ScalarPoly:
    return ScalarPoly.coerce(p) + ScalarPoly.coerce(q)


def mul(p, q) -> ScalarPoly:
    return ScalarPoly.coerce(p) * ScalarPoly.coerce(q)


def eval_numeric(p, params: Mapping[str, complex]) -> complex:
    return ScalarPoly.coerce(p).eval(params)


def linear_combination(pairs: Iterable[Tuple[object, object]]) -> ScalarPoly:
    out = ScalarPoly()
    for c, p in pairs:
        out = out + ScalarPoly.coerce(c) * ScalarPoly.coerce(p)
    return out
