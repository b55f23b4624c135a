"""Strong price-of-anarchy bounds from the label-parameterized linear programs.

``build_primal`` gives the program whose value ``P*`` is the reciprocal of
the tight k-strong price of anarchy when agents maximize the welfare itself.
``build_design`` gives the program whose value ``Q*`` bounds what any choice
of per-coalition-size utility rules can achieve; ``1/Q*`` is an upper bound.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .combinatorics import IndexSet, Label, deviation_terms, falling_factorial, index_set
from .lp import LinearProgram, LpSolution, Relation, Sense, Verdict, check_certificate, solve
from .rational import to_fraction

log = logging.getLogger(__name__)

WELFARE_SHARING = "welfare-sharing"
OPTIMAL_DESIGN = "optimal-design"


class BoundError(ValueError):
    pass


class _LocalRule:
    """A map ``{0, ..., n} -> Q`` stored as an exact tuple."""

    kind = "rule"

    def __init__(self, values: Sequence, n: int | None = None):
        vals = tuple(to_fraction(v) for v in values)
        if n is not None and len(vals) != n + 1:
            raise BoundError(f"{self.kind} needs {n + 1} values for n={n}, got {len(vals)}")
        if len(vals) < 2:
            raise BoundError(f"{self.kind} needs at least the values at 0 and 1")
        self.values = vals
        self._validate()

    def _validate(self) -> None:
        if self.values[0] != 0:
            raise BoundError(f"{self.kind} must vanish at 0, got {self.values[0]}")

    @property
    def n(self) -> int:
        return len(self.values) - 1

    def __call__(self, j: int) -> Fraction:
        return self.values[j]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.values == other.values

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.values))

    def scaled(self, factor) -> "_LocalRule":
        factor = to_fraction(factor)
        return type(self)([factor * v for v in self.values])

    def __repr__(self) -> str:
        body = ", ".join(str(v) for v in self.values)
        return f"{type(self).__name__}([{body}])"


class WelfareCurve(_LocalRule):
    """Per-resource welfare ``w(j)`` as a function of the number of users."""

    kind = "welfare curve"

    def _validate(self) -> None:
        super()._validate()
        bad = [j for j, v in enumerate(self.values) if j and v <= 0]
        if bad:
            raise BoundError(f"welfare curve must be positive for j >= 1; w({bad[0]}) = {self.values[bad[0]]}")

    @classmethod
    def indicator(cls, n: int) -> "WelfareCurve":
        return cls([0] + [1] * n)

    @classmethod
    def identity(cls, n: int) -> "WelfareCurve":
        return cls(range(n + 1))

    @classmethod
    def parse(cls, text: str, n: int) -> "WelfareCurve":
        """``indicator``, ``identity`` or a comma-separated list of ``n + 1`` values."""
        text = text.strip()
        if text == "indicator":
            return cls.indicator(n)
        if text == "identity":
            return cls.identity(n)
        return cls([v for v in text.split(",")], n)


class UtilityRule(_LocalRule):
    """Per-resource utility ``u(j)`` that agents maximize instead of ``w``."""

    kind = "utility rule"

    def _validate(self) -> None:
        super()._validate()
        if any(v < 0 for v in self.values):
            raise BoundError("utility rule entries must be nonnegative")


def _check_args(n: int, w: WelfareCurve, k: int) -> None:
    if n < 1:
        raise BoundError(f"need at least one player, got n={n}")
    if w.n != n:
        raise BoundError(f"welfare curve is defined on 0..{w.n}, expected 0..{n}")
    if not 1 <= k <= n:
        raise BoundError(f"coalition size k={k} outside [1, {n}]")


@dataclass(frozen=True)
class LabelVector:
    """Nonnegative mass per label, aligned with an :class:`IndexSet`."""

    index_set: IndexSet
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != len(self.index_set):
            raise BoundError("label vector length does not match its index set")
        if any(v < 0 for v in self.entries):
            raise BoundError("label vector entries must be nonnegative")

    @classmethod
    def from_mapping(cls, n: int, mass: dict) -> "LabelVector":
        idx = index_set(n)
        entries = [Fraction(0)] * len(idx)
        for lab, v in mass.items():
            entries[idx.position(lab)] += to_fraction(v)
        return cls(idx, tuple(entries))

    @property
    def n(self) -> int:
        return self.index_set.n

    def __getitem__(self, label) -> Fraction:
        return self.entries[self.index_set.position(label)]

    def support(self) -> dict[Label, Fraction]:
        return {lab: v for lab, v in zip(self.index_set, self.entries) if v}

    def scaled(self, factor) -> "LabelVector":
        factor = to_fraction(factor)
        return LabelVector(self.index_set, tuple(factor * v for v in self.entries))


# ---------------------------------------------------------------------------
# Coefficients


def deviation_value(label, zeta: int, n: int, rule) -> Fraction:
    """``sum_{alpha,beta} B(alpha,beta) * rule(e + x + beta - alpha)`` for one label."""
    return sum((c * rule(load) for load, c in deviation_terms(label, zeta, n)), Fraction(0))


def equilibrium_coefficient(label, zeta: int, n: int, w) -> Fraction:
    """Coefficient of ``theta(label)`` in the size-``zeta`` equilibrium row."""
    e, x, _ = label
    return falling_factorial(n, zeta) * w(e + x) - deviation_value(label, zeta, n, w)


def build_primal(n: int, w: WelfareCurve, k: int) -> LinearProgram:
    """Maximize optimal welfare over label masses with equilibrium welfare one."""
    _check_args(n, w, k)
    labels = index_set(n)
    lp = LinearProgram(
        len(labels),
        [w(lab.opt_load) for lab in labels],
        Sense.MAXIMIZE,
        var_names=[f"theta{lab}" for lab in labels],
    )
    for zeta in range(1, k + 1):
        lp.add_constraint([equilibrium_coefficient(lab, zeta, n, w) for lab in labels], Relation.GE, 0)
    lp.add_constraint([w(lab.ne_load) for lab in labels], Relation.EQ, 1)
    return lp


def design_variable_index(n: int, zeta: int, j: int) -> int:
    """Column of ``u_zeta(j)`` in :func:`build_design`; column 0 is ``mu``."""
    return 1 + (zeta - 1) * n + (j - 1)


def build_design(n: int, w: WelfareCurve, k: int) -> LinearProgram:
    """Minimize ``mu`` over ``mu`` and one utility rule per coalition size.

    ``u_zeta(0)`` is fixed at zero and does not get a column.  ``mu`` carries
    the usual nonnegativity bound; the rows with ``e = o = 0`` already force
    ``mu >= 1``.
    """
    _check_args(n, w, k)
    labels = index_set(n)
    nv = 1 + k * n
    names = ["mu"] + [f"u{zeta}({j})" for zeta in range(1, k + 1) for j in range(1, n + 1)]
    lp = LinearProgram(nv, [1] + [0] * (nv - 1), Sense.MINIMIZE, var_names=names)
    for lab in labels:
        row = [Fraction(0)] * nv
        row[0] = -w(lab.ne_load)
        for zeta in range(1, k + 1):
            if lab.ne_load:
                row[design_variable_index(n, zeta, lab.ne_load)] += falling_factorial(n, zeta)
            for load, c in deviation_terms(lab, zeta, n):
                if load:
                    row[design_variable_index(n, zeta, load)] -= c
        lp.add_constraint(row, Relation.LE, -w(lab.opt_load))
    return lp


def build_restricted_design(n: int, w: WelfareCurve, k: int) -> LinearProgram:
    """The design program with each ``u_zeta`` confined to ``t_zeta * w``.

    Its value equals ``P*``: it is the LP dual of :func:`build_primal`.
    Columns are ``mu, t_1, ..., t_k``.
    """
    _check_args(n, w, k)
    labels = index_set(n)
    lp = LinearProgram(1 + k, [1] + [0] * k, Sense.MINIMIZE,
                       var_names=["mu"] + [f"t{zeta}" for zeta in range(1, k + 1)])
    for lab in labels:
        row = [-w(lab.ne_load)] + [equilibrium_coefficient(lab, zeta, n, w) for zeta in range(1, k + 1)]
        lp.add_constraint(row, Relation.LE, -w(lab.opt_load))
    return lp


# ---------------------------------------------------------------------------
# Reports


@dataclass
class BoundReport:
    n: int
    k: int
    mode: str
    primal_value: Fraction
    welfare: WelfareCurve
    theta: LabelVector | None = None
    utility_rules: list[UtilityRule] = field(default_factory=list)
    mu: Fraction | None = None
    iterations: int = 0

    @property
    def spoa(self) -> Fraction:
        return 1 / self.primal_value

    @property
    def is_upper_bound(self) -> bool:
        """Design values bound the best attainable ratio from above only."""
        return self.mode == OPTIMAL_DESIGN


def _solve_or_raise(lp: LinearProgram, what: str) -> LpSolution:
    sol = solve(lp)
    if sol.verdict is Verdict.UNBOUNDED:
        raise BoundError(f"{what} is unbounded: invalid welfare curve")
    if sol.verdict is Verdict.INFEASIBLE:
        raise BoundError(f"{what} is infeasible: invalid welfare curve")
    return sol


def spoa_bound(n: int, w: WelfareCurve, k: int) -> BoundReport:
    """Tight k-strong price of anarchy ``1/P*`` with the optimal label masses."""
    lp = build_primal(n, w, k)
    sol = _solve_or_raise(lp, "primal program")
    theta = LabelVector(index_set(n), sol.point)
    log.debug("P*(n=%d, k=%d) = %s after %d pivots", n, k, sol.value, sol.iterations)
    return BoundReport(n, k, WELFARE_SHARING, sol.value, w, theta=theta, iterations=sol.iterations)


def _design_from_restricted(n: int, w: WelfareCurve, k: int, lp: LinearProgram) -> LpSolution | None:
    """Optimal design solution when the restricted program already reaches 1.

    Every label ``(0, x, 0)`` row reads ``w(x) (1 - mu) <= 0``, so ``Q* >= 1``.
    If ``u_zeta = t_zeta * w`` attains ``mu = 1`` it is optimal, and the
    multiplier ``-1/w(1)`` on the ``(0, 1, 0)`` row certifies it.
    """
    restricted = _solve_or_raise(build_restricted_design(n, w, k), "restricted design program")
    if restricted.value != 1:
        return None
    t = restricted.point[1:]
    point = [Fraction(1)] + [t[zeta - 1] * w(j) for zeta in range(1, k + 1) for j in range(1, n + 1)]
    duals = [Fraction(0)] * lp.num_constraints
    duals[index_set(n).position((0, 1, 0))] = -1 / w(1)
    sol = LpSolution(Verdict.OPTIMAL, Fraction(1), tuple(point), tuple(duals),
                     iterations=restricted.iterations, method="restricted")
    check_certificate(lp, sol)
    return sol


def design_bound(n: int, w: WelfareCurve, k: int) -> BoundReport:
    """Upper bound ``1/Q*`` on the k-strong price of anarchy under utility design."""
    lp = build_design(n, w, k)
    sol = _design_from_restricted(n, w, k, lp) or _solve_or_raise(lp, "design program")
    rules = []
    for zeta in range(1, k + 1):
        start = design_variable_index(n, zeta, 1)
        rules.append(UtilityRule((Fraction(0),) + tuple(sol.point[start:start + n])))
    log.debug("Q*(n=%d, k=%d) = %s after %d pivots", n, k, sol.value, sol.iterations)
    return BoundReport(n, k, OPTIMAL_DESIGN, sol.value, w, utility_rules=rules,
                       mu=sol.point[0], iterations=sol.iterations)


def restricted_design_value(n: int, w: WelfareCurve, k: int) -> Fraction:
    return _solve_or_raise(build_restricted_design(n, w, k), "restricted design program").value


# ---------------------------------------------------------------------------
# Curves


@dataclass(frozen=True)
class CurveRow:
    k: int
    spoa: Fraction
    design_spoa: Fraction | None = None


@dataclass
class CurveTable:
    n: int
    welfare: WelfareCurve
    rows: list[CurveRow]

    @property
    def has_design(self) -> bool:
        return any(r.design_spoa is not None for r in self.rows)


def _curve_row(args) -> CurveRow:
    n, w, k, include_design = args
    design = design_bound(n, w, k).spoa if include_design else None
    return CurveRow(k, spoa_bound(n, w, k).spoa, design)


def spoa_curve(n: int, w: WelfareCurve, k_values: Iterable[int], include_design: bool = False,
               workers: int = 1) -> CurveTable:
    """Evaluate the bound(s) for each ``k``; rows come back in ascending ``k``."""
    ks = sorted(set(k_values))
    if not ks:
        raise BoundError("no coalition sizes requested")
    for k in ks:
        _check_args(n, w, k)
    jobs = [(n, w, k, include_design) for k in ks]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_curve_row, jobs))
    else:
        rows = [_curve_row(job) for job in jobs]
    return CurveTable(n, w, rows)


def gairing_covering_value(n: int) -> Fraction:
    """Best price of anarchy of covering games with unilateral deviations.

    ``1 - 1 / (1/((n-1)(n-1)!) + sum_{j<n} 1/j!)``; for ``n = 1`` the first
    term is dropped and the value is 1.
    """
    s = sum((Fraction(1, math.factorial(j)) for j in range(n)), Fraction(0))
    if n > 1:
        s += Fraction(1, (n - 1) * math.factorial(n - 1))
    return 1 - 1 / s if n > 1 else Fraction(1)
