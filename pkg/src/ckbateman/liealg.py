"""Abstract Lie-algebra tables and their exact verification.

A :class:`LieTable` stores structure constants as linear combinations of
basis names with :class:`ScalarPoly` coefficients.  Tables are checked, not
discovered: :func:`jacobi_check` tests the Jacobi identity with exact
arithmetic and :func:`verify_realization` compares every commutator of a
concrete operator realization with the tabulated right-hand side.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .scalarring import ONE, ScalarPoly, gamma, hbar, m, I as I_S
from .timecoeff import ExpPoly
from .weylop import VarSpace, WeylOp, commutator

Combo = Dict[str, ScalarPoly]


class TableError(ValueError):
    pass


class GaugeInconsistencyError(TableError):
    pass


def _clean(combo: Mapping[str, object]) -> Combo:
    out = {}
    for name, c in combo.items():
        c = ScalarPoly.coerce(c)
        if c:
            out[name] = c
    return out


def combo_add(u: Mapping[str, ScalarPoly], v: Mapping[str, ScalarPoly], scale=ONE) -> Combo:
    out = dict(u)
    for name, c in v.items():
        out[name] = out.get(name, ScalarPoly()) + c * scale
    return _clean(out)


class LieTable:
    """Basis, central element and brackets ``[g_i, g_j] = sum c_k g_k``.

    Brackets absent from ``brackets`` are zero.  Supplying only one ordering
    of each pair is enough; the other is filled in by antisymmetry, and a
    supplied pair of orderings must already be antisymmetric.
    """

    def __init__(
        self,
        name: str,
        basis: Sequence[str],
        central: str,
        brackets: Mapping[Tuple[str, str], Mapping[str, object]],
    ):
        self.name = name
        self.basis = tuple(basis)
        self.central = central
        if central in self.basis:
            raise TableError("the central element is kept outside the basis list")
        known = set(self.basis) | {central}
        consts: Dict[Tuple[str, str], Combo] = {}
        for (a, b), combo in brackets.items():
            if a == central or b == central:
                if _clean(combo):
                    raise TableError(f"central element {central} has a nonzero bracket")
                continue
            if a not in self.basis or b not in self.basis:
                raise TableError(f"bracket ({a}, {b}) uses an unknown generator")
            combo = _clean(combo)
            unknown = set(combo) - known
            if unknown:
                raise TableError(f"bracket ({a}, {b}) produces unknown {sorted(unknown)}")
            if a == b:
                if combo:
                    raise TableError(f"[{a}, {a}] must vanish")
                continue
            neg = {n: -c for n, c in combo.items()}
            if (b, a) in consts and consts[(b, a)] != neg:
                raise TableError(f"brackets ({a}, {b}) and ({b}, {a}) are not antisymmetric")
            consts[(a, b)] = combo
            consts[(b, a)] = neg
        self._consts = {k: v for k, v in consts.items() if v}

    @property
    def constants(self) -> Dict[Tuple[str, str], Combo]:
        return {k: dict(v) for k, v in self._consts.items()}

    def generator(self, name: str) -> Combo:
        return {name: ONE}

    def bracket_basis(self, a: str, b: str) -> Combo:
        if a == self.central or b == self.central:
            return {}
        return dict(self._consts.get((a, b), {}))

    def bracket(self, u: Mapping[str, ScalarPoly], v: Mapping[str, ScalarPoly]) -> Combo:
        out: Combo = {}
        for a, ca in u.items():
            for b, cb in v.items():
                res = self.bracket_basis(a, b)
                if res:
                    out = combo_add(out, res, ca * cb)
        return out

    def pairs(self) -> List[Tuple[str, str]]:
        return list(itertools.combinations(self.basis, 2))

    def subs(self, symbol: str, value, name: Optional[str] = None) -> "LieTable":
        return LieTable(
            name or f"{self.name}[{symbol}={value}]",
            self.basis,
            self.central,
            {k: {n: c.subs(symbol, value) for n, c in v.items()} for k, v in self._consts.items()},
        )

    def drop(self, names: Iterable[str], name: Optional[str] = None) -> "LieTable":
        """Remove generators, deleting them from every right-hand side."""
        names = set(names)
        basis = [b for b in self.basis if b not in names]
        consts = {}
        for (a, b), combo in self._consts.items():
            if a in names or b in names:
                continue
            consts[(a, b)] = {n: c for n, c in combo.items() if n not in names}
        return LieTable(name or self.name, basis, self.central, consts)

    def to_text(self) -> str:
        lines = [f"# table {self.name}", f"# basis {' '.join(self.basis)}", f"# central {self.central}"]
        for a, b in self.pairs():
            combo = self._consts.get((a, b), {})
            rhs = " ; ".join(f"{n} : {combo[n]}" for n in self._order(combo)) or "0"
            lines.append(f"[{a}, {b}] = {rhs}")
        return "\n".join(lines) + "\n"

    def _order(self, combo):
        rank = {n: i for i, n in enumerate(self.basis + (self.central,))}
        return sorted(combo, key=lambda n: rank.get(n, len(rank)))

    @classmethod
    def from_text(cls, text: str) -> "LieTable":
        name, basis, central, brackets = "table", [], "I", {}
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("# table "):
                name = line[len("# table "):]
            elif line.startswith("# basis "):
                basis = line[len("# basis "):].split()
            elif line.startswith("# central "):
                central = line[len("# central "):].strip()
            elif line.startswith("["):
                lhs, _, rhs = line.partition("] = ")
                a, b = (s.strip() for s in lhs[1:].split(","))
                combo = {}
                if rhs.strip() != "0":
                    for part in rhs.split(" ; "):
                        gen, _, coeff = part.partition(" : ")
                        combo[gen.strip()] = ScalarPoly.parse(coeff)
                brackets[(a, b)] = combo
        return cls(name, basis, central, brackets)

    def __eq__(self, other):
        if not isinstance(other, LieTable):
            return NotImplemented
        return (set(self.basis), self.central, self._consts) == (
            set(other.basis), other.central, other._consts)

    def __repr__(self):
        return f"LieTable({self.name!r}, basis={self.basis})"


@dataclass
class Violation:
    triple: Tuple[str, str, str]
    residual: Combo

    def __str__(self):
        res = ", ".join(f"{n}: {c}" for n, c in sorted(self.residual.items()))
        return f"Jacobi({', '.join(self.triple)}) = {{{res}}}"


def jacobi_check(T: LieTable) -> List[Violation]:
    """Triples whose cyclic double-bracket sum is not exactly zero."""
    out = []
    for a, b, c in itertools.combinations(T.basis, 3):
        total: Combo = {}
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            inner = T.bracket_basis(y, z)
            total = combo_add(total, T.bracket({x: ONE}, inner))
        if total:
            out.append(Violation((a, b, c), total))
    return out


def table_differences(T1: LieTable, T2: LieTable) -> List[Tuple[str, str, Combo]]:
    """Pairs on which two tables over the same basis disagree."""
    if set(T1.basis) != set(T2.basis) or T1.central != T2.central:
        raise TableError("tables have different generators")
    out = []
    for a, b in itertools.combinations(T1.basis, 2):
        d = combo_add(T1.bracket_basis(a, b), T2.bracket_basis(a, b), -ONE)
        if d:
            out.append((a, b, d))
    return out


def change_basis(
    T: LieTable,
    new_basis: Sequence[str],
    forward: Mapping[str, Mapping[str, object]],
    inverse: Mapping[str, Mapping[str, object]],
    name: str = "transformed",
) -> LieTable:
    """Structure constants in a new basis.

    ``forward`` expresses each new generator in the old basis and ``inverse``
    each old generator in the new basis.  Names missing from either map are
    carried over unchanged; the central element is always kept.
    """
    fwd = {n: _clean(forward.get(n, {n: 1})) for n in new_basis}
    inv = {n: _clean(inverse.get(n, {n: 1})) for n in T.basis}
    inv[T.central] = {T.central: ONE}
    for n in T.basis:
        # the round trip must be the identity
        back: Combo = {}
        for newn, c in inv[n].items():
            back = combo_add(back, fwd[newn] if newn in fwd else {newn: ONE}, c)
        if back != {n: ONE}:
            raise TableError(f"forward/inverse maps are not inverse on {n}")
    brackets = {}
    for a, b in itertools.combinations(new_basis, 2):
        old = T.bracket(fwd[a], fwd[b])
        new: Combo = {}
        for oldn, c in old.items():
            new = combo_add(new, inv[oldn], c)
        brackets[(a, b)] = new
    return LieTable(name, new_basis, T.central, brackets)


# --------------------------------------------------------------------------
# realizations

Realization = Dict[str, WeylOp]


@dataclass
class Mismatch:
    pair: Tuple[str, str]
    residual: WeylOp
    flagged: bool = False  # bracket leaves a truncated realization

    def __str__(self):
        tag = "outside truncation" if self.flagged else "mismatch"
        return f"[{self.pair[0]}, {self.pair[1]}] {tag}: residual {self.residual}"


def realize_combo(T: LieTable, R: Realization, combo: Mapping[str, ScalarPoly], space: VarSpace) -> WeylOp:
    out = WeylOp.zero(space)
    for n, c in combo.items():
        if n == T.central and n not in R:
            op = WeylOp.identity(space)
        else:
            op = R[n]
        out = out + op.scale(ExpPoly.const(c))
    return out


def verify_realization(T: LieTable, R: Realization, outside: Iterable[str] = ()) -> List[Mismatch]:
    """Exact comparison of realized commutators with the table.

    ``outside`` names generators that the table mentions but the realization
    deliberately omits (a truncation); brackets landing on them are returned
    with ``flagged=True`` instead of being tested.
    """
    missing = [n for n in T.basis if n not in R and n not in set(outside)]
    if missing:
        raise TableError(f"realization does not cover {missing}")
    spaces = {op.space for op in R.values()}
    if len(spaces) != 1:
        raise TableError("realization operators live on different spaces")
    space = spaces.pop()
    outside = set(outside)
    out = []
    for a, b in T.pairs():
        if a in outside or b in outside:
            continue
        claimed = T.bracket_basis(a, b)
        if outside & set(claimed):
            out.append(Mismatch((a, b), WeylOp.zero(space), flagged=True))
            continue
        residual = commutator(R[a], R[b]) - realize_combo(T, R, claimed, space)
        if not residual.is_zero():
            out.append(Mismatch((a, b), residual))
    if T.central in R:
        for a in T.basis:
            if a in outside:
                continue
            residual = commutator(R[T.central], R[a])
            if not residual.is_zero():
                out.append(Mismatch((T.central, a), residual))
    return out


def discover_numeric(
    R: Realization,
    a: str,
    b: str,
    candidates: Sequence[str],
    params: Mapping[str, complex],
    times: Sequence[float],
    central: str = "I",
) -> Tuple[Dict[str, complex], float]:
    """Least-squares fit of ``[R_a, R_b]`` onto candidate generators.

    Diagnostic only: the operators are sampled numerically at ``times`` and
    parameter values ``params``.  Returns the fitted coefficients and the
    residual norm.
    """
    target = commutator(R[a], R[b])
    space = target.space
    ops = [R[n] if n in R else WeylOp.identity(space) for n in candidates]
    keys = sorted(set().union(target.terms, *(op.terms for op in ops)))

    def sample(op: WeylOp):
        terms = op.terms
        return np.array([
            terms[k].eval(t, params) if k in terms else 0.0
            for k in keys for t in times
        ], dtype=complex)

    A = np.stack([sample(op) for op in ops], axis=1)
    y = sample(target)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.linalg.norm(A @ coef - y))
    return dict(zip(candidates, coef)), resid


# --------------------------------------------------------------------------
# gauge reduction


def gauge_reduce(
    T: LieTable,
    gauge: Sequence[str] = ("G1", "G2"),
    hamiltonian: str = "H",
    name: str = "B",
) -> LieTable:
    """Remove generators that must act as zero in an irreducible representation.

    The gauge generators have to commute with every generator except the
    Hamiltonian, so they act as constants ``g_a``.  Then ``[H, G_a] = 0``
    gives a linear system ``M g = -c`` from the tabulated brackets, where
    ``c`` collects the central terms; ``g = 0`` is forced when ``c = 0`` and
    ``det M`` is a nonzero polynomial (symbols generic, Omega != 0).
    """
    gauge = list(gauge)
    for g in gauge:
        if g not in T.basis:
            raise GaugeInconsistencyError(f"{g} is not a generator of {T.name}")
        for other in T.basis:
            if other in (g, hamiltonian) or other in gauge:
                if other in gauge and T.bracket_basis(g, other):
                    raise GaugeInconsistencyError(f"[{g}, {other}] must vanish")
                continue
            if T.bracket_basis(g, other):
                raise GaugeInconsistencyError(f"{g} does not commute with {other}")
    # linear system from [H, G_a] = sum_b M_ab G_b + c_a I
    M = []
    c = []
    for g in gauge:
        combo = T.bracket_basis(hamiltonian, g)
        extra = set(combo) - set(gauge) - {T.central}
        if extra:
            raise GaugeInconsistencyError(f"[{hamiltonian}, {g}] leaves the gauge sector: {sorted(extra)}")
        M.append([combo.get(b, ScalarPoly()) for b in gauge])
        c.append(combo.get(T.central, ScalarPoly()))
    if any(ci for ci in c):
        raise GaugeInconsistencyError("central terms force nonzero gauge constants")
    if _det(M).is_zero():
        raise GaugeInconsistencyError("gauge constants are not fixed by [H, G] = 0")
    # brackets producing only gauge terms must now vanish; others must survive intact
    reduced = T.drop(gauge, name=name)
    for a, b in reduced.pairs():
        full = T.bracket_basis(a, b)
        kept = reduced.bracket_basis(a, b)
        if full and not kept and not set(full) <= set(gauge):
            raise GaugeInconsistencyError(f"[{a}, {b}] would lose non-gauge terms")
    return reduced


def _det(M: List[List[ScalarPoly]]) -> ScalarPoly:
    n = len(M)
    if n == 1:
        return M[0][0]
    total = ScalarPoly()
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _det(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total


# --------------------------------------------------------------------------
# infinite algebra of the damped particle, truncated


def _appendix_bracket(a: str, b: str) -> Combo:
    """Nonzero brackets of the full (untruncated) damped-particle algebra."""
    ih = I_S * hbar

    def idx(name):
        return int(name[1:]) if name[:1] in "PY" and name[1:].isdigit() else None

    if a == "HG" and b[:1] in "PY" and idx(b) is not None:
        n = idx(b)
        return {f"{b[0]}{n-1}": -ih * gamma * n} if n else {}
    if a == "HDP" and b[:1] in "PY" and idx(b) is not None:
        n = idx(b)
        return {b: -ih * gamma * n} if n else {}
    if a == "X" and b[:1] == "P" and idx(b) is not None:
        return {f"Y{idx(b)}": hbar}
    if (a, b) == ("HG", "X"):
        return {"P0": -ih * m ** -1}
    if (a, b) == ("HDP", "X"):
        return {"P1": -ih * m ** -1}
    if (a, b) == ("HDP", "HG"):
        return {"HG": ih * gamma}
    return {}


def appendix_generators(N: int) -> List[str]:
    return ["HG", "HDP", "X"] + [f"P{n}" for n in range(N + 1)] + [f"Y{n}" for n in range(1, N + 1)]


def appendix_table(N: int) -> Tuple[LieTable, List[Tuple[str, str, Combo]]]:
    """Truncated table over H_G, H_DP, X, P_n, Y_n (0 <= n <= N).

    ``Y_0`` is the central element.  Returns the table together with the
    brackets whose right-hand side leaves the truncation; those are left out
    of the table.
    """
    if N < 0:
        raise ValueError("truncation order must be nonnegative")
    basis = appendix_generators(N)
    known = set(basis) | {"Y0"}
    br: Dict[Tuple[str, str], Combo] = {}
    exits = []
    for a, b in itertools.combinations(basis, 2):
        for x, y, sign in ((a, b, ONE), (b, a, -ONE)):
            combo = _appendix_bracket(x, y)
            if combo:
                combo = {n: c * sign for n, c in combo.items()}
                if set(combo) <= known:
                    br[(a, b)] = combo
                else:
                    exits.append((a, b, combo))
                break
    return LieTable(f"damped-particle[N={N}]", basis, "Y0", br), exits


def appendix_realization(N: int) -> Realization:
    from .invariants import damped_particle_operators

    space = VarSpace(("x",))
    X, _ = damped_particle_operators()
    ih = I_S * hbar
    R: Realization = {
        "HG": WeylOp.dt(space, ExpPoly.exp(2, 0, ih)),
        "HDP": WeylOp.dt(space, ih),
        "X": X,
    }
    for n in range(N + 1):
        R[f"P{n}"] = WeylOp.d(space, "x", coeff=ExpPoly.exp(-2 * n, 0, -ih))
        R[f"Y{n}"] = WeylOp.identity(space, ExpPoly.exp(-2 * n, 0, I_S))
    return R


@dataclass
class TruncationReport:
    N: int
    table: LieTable
    realization: Realization
    checked: List[Tuple[str, str]] = field(default_factory=list)
    mismatches: List[Mismatch] = field(default_factory=list)

    @property
    def failures(self) -> List[Mismatch]:
        return [mm for mm in self.mismatches if not mm.flagged]

    @property
    def flagged(self) -> List[Mismatch]:
        return [mm for mm in self.mismatches if mm.flagged]


def appendix_truncation(N: int) -> TruncationReport:
    """Build and verify the truncated damped-particle algebra.

    Every generator pair is checked exactly; pairs whose bracket exits the
    truncation are reported as flagged mismatches instead of failures.
    """
    if N < 1:
        raise ValueError("truncation order must be at least 1")
    return _truncation(N)


def _truncation(N: int) -> TruncationReport:
    T, exits = appendix_table(N)
    R = appendix_realization(N)
    rep = TruncationReport(N, T, R, checked=T.pairs())
    exit_pairs = {(a, b) for a, b, _ in exits}
    space = R["X"].space
    for a, b, _ in exits:
        rep.mismatches.append(Mismatch((a, b), WeylOp.zero(space), flagged=True))
    rep.mismatches.extend(mm for mm in verify_realization(T, R) if mm.pair not in exit_pairs)
    return rep
