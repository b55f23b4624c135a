"""Linear programs with exact rational data and an exact simplex solver.

The solver is a revised simplex method working on an integer-scaled copy of
the problem.  The basis inverse is stored as ``M / D`` where ``M`` is an
integer matrix and ``D = +-det(B)``; pivots use the fraction-free update

    M'[i] = (a_r * M[i] - a_i * M[r]) / D      (exact division)

so no rational normalisation happens inside the loop.  Entering columns are
priced by Dantzig's rule, falling back to Bland's rule on degenerate stalls;
leaving rows are chosen by minimum ratio with lowest-index ties.  Every
choice is deterministic, so the returned vertex is a function of the input.

Every optimal answer is checked against its dual certificate before it is
returned.
"""

from __future__ import annotations

import enum
import logging
import math
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .rational import to_fraction

log = logging.getLogger(__name__)

# Reduced costs are computed in blocks; Bland's rule only needs the first
# improving column, so most iterations stop after one block.
_PRICING_BLOCK = 512
_DEGENERATE_LIMIT = 30
_PERTURB_BITS = 48
# Default tolerances leave reduced costs of order 1e-9 unpriced, which on the
# wide-range design programs yields float bases hundreds of pivots from optimal.
_HIGHS_TIGHT = {"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10}


class LpError(ValueError):
    """Malformed linear program or a failed internal consistency check."""


class Sense(str, enum.Enum):
    MAXIMIZE = "max"
    MINIMIZE = "min"


class Relation(str, enum.Enum):
    LE = "<="
    GE = ">="
    EQ = "="


class Verdict(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    relation: Relation
    rhs: Fraction

    def activity(self, point: Sequence[Fraction]) -> Fraction:
        return sum((a * v for a, v in zip(self.coeffs, point) if a), Fraction(0))

    def holds(self, point: Sequence[Fraction]) -> bool:
        lhs = self.activity(point)
        if self.relation is Relation.LE:
            return lhs <= self.rhs
        if self.relation is Relation.GE:
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass
class LinearProgram:
    """``sense  objective . x`` subject to the listed rows and ``x >= 0``."""

    num_vars: int
    objective: Sequence
    sense: Sense = Sense.MAXIMIZE
    constraints: list[Constraint] = field(default_factory=list)
    var_names: Sequence[str] | None = None
    _scaled: tuple | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.num_vars < 1:
            raise LpError("a linear program needs at least one variable")
        self.sense = Sense(self.sense)
        self.objective = tuple(to_fraction(c) for c in self.objective)
        if len(self.objective) != self.num_vars:
            raise LpError(f"objective has {len(self.objective)} entries, expected {self.num_vars}")
        if self.var_names is not None:
            self.var_names = tuple(self.var_names)
            if len(self.var_names) != self.num_vars:
                raise LpError("var_names length does not match num_vars")
        rows, self.constraints = list(self.constraints), []
        for row in rows:
            self.add_constraint(row.coeffs, row.relation, row.rhs)

    def add_constraint(self, coeffs, relation, rhs) -> None:
        coeffs = tuple(to_fraction(c) for c in coeffs)
        if len(coeffs) != self.num_vars:
            raise LpError(
                f"constraint {len(self.constraints)} has {len(coeffs)} coefficients, "
                f"expected {self.num_vars}"
            )
        self.constraints.append(Constraint(coeffs, Relation(relation), to_fraction(rhs)))
        self._scaled = None

    def integer_rows(self) -> tuple[np.ndarray, np.ndarray, list[Fraction]]:
        """Rows scaled to coprime integers: ``(A, b, scale)`` with ``A[i] = scale[i] * coeffs``."""
        if self._scaled is None or self._scaled[0].shape[0] != len(self.constraints):
            A = np.zeros((len(self.constraints), self.num_vars), dtype=object)
            b = np.zeros(len(self.constraints), dtype=object)
            scales = []
            for i, row in enumerate(self.constraints):
                ints, r, scale = _integer_row(row.coeffs, row.rhs)
                A[i, :] = ints
                b[i] = r
                scales.append(scale)
            self._scaled = (A, b, scales)
        return self._scaled

    def _activities(self, point: Sequence[Fraction]) -> tuple[np.ndarray, int]:
        """Scaled row activities at ``point`` as integers over a common denominator."""
        X, den = _common_denominator(point)
        A, _, _ = self.integer_rows()
        return (A.dot(X) if A.size else np.zeros(0, dtype=object)), den

    def _relations_hold(self, act: np.ndarray, rhs: np.ndarray) -> bool:
        for row, a, r in zip(self.constraints, act, rhs):
            if row.relation is Relation.LE and a > r or row.relation is Relation.GE and a < r \
                    or row.relation is Relation.EQ and a != r:
                return False
        return True

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)

    def value_at(self, point: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, point) if c), Fraction(0))

    def is_feasible(self, point: Sequence[Fraction]) -> bool:
        if len(point) != self.num_vars or any(v < 0 for v in point):
            return False
        act, den = self._activities([to_fraction(v) for v in point])
        return self._relations_hold(act, self.integer_rows()[1] * den)


def _common_denominator(values: Sequence[Fraction]) -> tuple[np.ndarray, int]:
    den = 1
    for v in values:
        if v.denominator != 1:
            den = math.lcm(den, v.denominator)
    out = np.empty(len(values), dtype=object)
    out[:] = [v.numerator * (den // v.denominator) for v in values]
    return out, den


@dataclass
class LpSolution:
    """Outcome of :func:`solve`.

    ``dual_values`` hold one multiplier per constraint.  For a maximisation
    they satisfy ``sum_i y_i a_i >= c`` with ``y_i >= 0`` on ``<=`` rows and
    ``y_i <= 0`` on ``>=`` rows; for a minimisation the inequalities flip.
    ``b . y`` equals ``value`` in both cases.

    ``ray`` (unbounded) is a direction ``d >= 0`` that keeps every row
    satisfied and strictly improves the objective.  ``farkas`` (infeasible)
    is a multiplier vector ``z`` with ``sum_i z_i a_i <= 0``, ``z_i <= 0`` on
    ``<=`` rows, ``z_i >= 0`` on ``>=`` rows and ``b . z > 0``.
    """

    verdict: Verdict
    value: Fraction | None = None
    point: tuple[Fraction, ...] | None = None
    dual_values: tuple[Fraction, ...] | None = None
    ray: tuple[Fraction, ...] | None = None
    farkas: tuple[Fraction, ...] | None = None
    iterations: int = 0
    method: str = "primal"

    @property
    def is_optimal(self) -> bool:
        return self.verdict is Verdict.OPTIMAL


# ---------------------------------------------------------------------------
# Standard form


def _integer_row(coeffs: Sequence[Fraction], rhs: Fraction) -> tuple[list[int], int, Fraction]:
    """Scale a rational row to coprime integers; returns (ints, rhs, scale)."""
    den = 1
    for v in (*coeffs, rhs):
        if v.denominator != 1:
            den = math.lcm(den, v.denominator)
    ints = [v.numerator * (den // v.denominator) if v else 0 for v in coeffs]
    r = rhs.numerator * (den // rhs.denominator)
    g = math.gcd(*ints, r) or 1
    return [v // g for v in ints], r // g, Fraction(den, g)


@dataclass
class _StandardForm:
    """``min c.x  s.t.  A x = b, x >= 0`` with integer data and ``b >= 0``."""

    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    basis: list[int]
    n_orig: int
    n_struct: int  # originals + slacks; artificials start here
    row_sign: list[int]
    row_scale: list[Fraction]
    obj_scale: Fraction


def _standard_form(lp: LinearProgram) -> _StandardForm:
    m, n = lp.num_constraints, lp.num_vars
    slack_of = {}
    for i, row in enumerate(lp.constraints):
        if row.relation is not Relation.EQ:
            slack_of[i] = n + len(slack_of)
    n_struct = n + len(slack_of)

    rows, rhs, signs, scales, basis, art_rows = [], [], [], [], [], []
    A_int, b_int, row_scales = lp.integer_rows()
    for i, row in enumerate(lp.constraints):
        ints, r, scale = A_int[i], b_int[i], row_scales[i]
        slack = {Relation.LE: 1, Relation.GE: -1, Relation.EQ: 0}[row.relation]
        sign = -1 if r < 0 or (r == 0 and slack == -1) else 1
        full = [0] * n_struct
        full[:n] = list(sign * ints)
        if i in slack_of:
            full[slack_of[i]] = sign * slack
        rows.append(full)
        rhs.append(sign * r)
        signs.append(sign)
        scales.append(scale)
        if i in slack_of and sign * slack == 1:
            basis.append(slack_of[i])
        else:
            basis.append(-1)
            art_rows.append(i)

    for j, i in enumerate(art_rows):
        for k, full in enumerate(rows):
            full.append(1 if k == i else 0)
        basis[i] = n_struct + j

    c_frac = [(-v if lp.sense is Sense.MAXIMIZE else v) for v in lp.objective]
    den = 1
    for v in c_frac:
        den = math.lcm(den, v.denominator)
    g = math.gcd(*(int(v * den) for v in c_frac)) or 1
    obj_scale = Fraction(den, g)
    width = n_struct + len(art_rows)
    c = [int(v * obj_scale) for v in c_frac] + [0] * (width - n)

    A = np.empty((m, width), dtype=object)
    for i, full in enumerate(rows):
        A[i, :] = full
    b = np.empty(m, dtype=object)
    b[:] = rhs
    cvec = np.empty(width, dtype=object)
    cvec[:] = c
    return _StandardForm(A, b, cvec, basis, n, n_struct, signs, scales, obj_scale)


# ---------------------------------------------------------------------------
# Revised simplex kernel


class _Kernel:
    def __init__(self, A: np.ndarray, b: np.ndarray, basis: list[int]):
        self.A = A
        self.AT = np.ascontiguousarray(A.T)
        self.m, self.N = A.shape
        self.basis = list(basis)
        self.M = np.zeros((self.m, self.m), dtype=object)
        for i in range(self.m):
            self.M[i, i] = 1
        self.D = 1
        self.b = b
        self.xb = b.copy()
        self.is_basic = np.zeros(self.N, dtype=bool)
        self.is_basic[self.basis] = True
        self.iterations = 0
        self.col_norm = np.sqrt((A.astype(float) ** 2).sum(axis=0))
        self.col_norm[self.col_norm == 0] = 1.0

    def duals_numerator(self, c: np.ndarray) -> np.ndarray:
        return c[self.basis].dot(self.M)

    def _entering(self, c: np.ndarray, allowed: int, bland: bool) -> int | None:
        yv = self.duals_numerator(c)
        sgn = 1 if self.D > 0 else -1
        if bland:
            for start in range(0, allowed, _PRICING_BLOCK):
                stop = min(start + _PRICING_BLOCK, allowed)
                red = c[start:stop] * self.D - self.AT[start:stop].dot(yv)
                for off, r in enumerate(red):
                    if r and (r > 0) != (sgn > 0) and not self.is_basic[start + off]:
                        return start + off
            return None
        red = c[:allowed] * self.D - self.AT[:allowed].dot(yv)
        cand = [j for j in range(allowed) if red[j] and (red[j] > 0) != (sgn > 0) and not self.is_basic[j]]
        if not cand:
            return None
        # Largest reduced cost per unit column length; floats only rank candidates.
        shift = max(0, max(abs(red[j]).bit_length() for j in cand) - 900)
        return max(cand, key=lambda j: (float(abs(red[j]) >> shift) / self.col_norm[j], -j))

    def _leaving(self, a: np.ndarray) -> int | None:
        sgn = 1 if self.D > 0 else -1
        best = None
        for i in range(self.m):
            ai = a[i]
            if not ai or (ai > 0) != (sgn > 0):
                continue
            if best is None:
                best = i
                continue
            # xb[i]/a[i] vs xb[best]/a[best]; a[i]*a[best] > 0
            lhs = self.xb[i] * a[best]
            rhs = self.xb[best] * a[i]
            if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best]):
                best = i
        return best

    def pivot(self, r: int, q: int, a: np.ndarray) -> None:
        D, ar = self.D, a[r]
        Mr, xr = self.M[r].copy(), self.xb[r]
        self.M = (ar * self.M - np.multiply.outer(a, Mr)) // D
        self.M[r] = Mr
        self.xb = (ar * self.xb - a * xr) // D
        self.xb[r] = xr
        self.D = ar
        self.is_basic[self.basis[r]] = False
        self.is_basic[q] = True
        self.basis[r] = q
        self.iterations += 1

    def run(self, c: np.ndarray, allowed: int) -> tuple[str, int | None, np.ndarray | None]:
        """Iterate to optimality over columns ``< allowed``.

        Pricing is Dantzig's rule on column-normalised reduced costs.  After
        ``_DEGENERATE_LIMIT`` consecutive degenerate pivots it switches to
        Bland's rule until the objective moves again, which rules out cycling.
        """
        stalled = 0
        while True:
            bland = stalled >= _DEGENERATE_LIMIT
            q = self._entering(c, allowed, bland)
            if q is None:
                return "optimal", None, None
            a = self.M.dot(self.A[:, q])
            r = self._leaving(a)
            if r is None:
                return "unbounded", q, a
            stalled = stalled + 1 if self.xb[r] == 0 else 0
            self.pivot(r, q, a)
            if self.iterations % 200 == 0:
                log.debug("simplex iteration %d", self.iterations)

    def perturb(self, seed: int = 0) -> None:
        """Shift every basic value up by a distinct tiny amount.

        This equals replacing ``b`` by ``K*b + B*delta`` with ``delta > 0``,
        which makes degenerate pivots unlikely.  :meth:`restore` undoes it.
        """
        rng = random.Random(seed)
        delta = np.array([rng.randint(1, 1 << 20) for _ in range(self.m)], dtype=object)
        self.xb = (self.xb << _PERTURB_BITS) + self.D * delta

    def restore(self) -> None:
        self.xb = self.M.dot(self.b)

    def dual_run(self, c: np.ndarray, allowed: int) -> int:
        """Dual simplex from a dual-feasible basis until ``x_B >= 0``.

        Leaving rows are the most negative basic values, switching to the
        lowest basis index after degenerate stalls; entering columns by the
        minimum ratio with lowest-index ties.  Returns the pivot count.
        """
        pivots = stalled = 0
        while True:
            sgn = 1 if self.D > 0 else -1
            neg = [i for i in range(self.m) if self.xb[i] * sgn < 0]
            if not neg:
                return pivots
            if stalled >= _DEGENERATE_LIMIT:
                r = min(neg, key=lambda i: self.basis[i])
            else:
                r = min(neg, key=lambda i: (self.xb[i] * sgn, i))
            yv = self.duals_numerator(c)
            red = c[:allowed] * self.D - self.AT[:allowed].dot(yv)
            rho = self.AT[:allowed].dot(self.M[r])
            best = None
            for j in range(allowed):
                if self.is_basic[j] or not rho[j] or (rho[j] > 0) == (sgn > 0):
                    continue
                # ratio red_j / |rho_j|, both over D
                if best is None or abs(red[j]) * abs(rho[best]) < abs(red[best]) * abs(rho[j]):
                    best = j
            if best is None:
                raise LpError("dual simplex found no entering column on a feasible problem")
            stalled = stalled + 1 if red[best] == 0 else 0
            self.pivot(r, best, self.M.dot(self.A[:, best]))
            pivots += 1

    def append_column(self, column: np.ndarray) -> int:
        self.A = np.concatenate([self.A, column.reshape(-1, 1)], axis=1)
        self.AT = np.ascontiguousarray(self.A.T)
        norm = float(np.sqrt(sum(float(v) ** 2 for v in column))) or 1.0
        self.col_norm = np.append(self.col_norm, norm)
        self.is_basic = np.append(self.is_basic, False)
        self.N += 1
        return self.N - 1

    def drive_out_artificials(self, n_struct: int) -> None:
        """Pivot zero-valued artificials out of the basis where possible."""
        for r in range(self.m):
            if self.basis[r] < n_struct:
                continue
            row = self.M[r].dot(self.A[:, :n_struct])
            for q in range(n_struct):
                if row[q] and not self.is_basic[q]:
                    self.pivot(r, q, self.M.dot(self.A[:, q]))
                    break

    def point(self) -> list[Fraction]:
        x = [Fraction(0)] * self.N
        for i, j in enumerate(self.basis):
            x[j] = Fraction(int(self.xb[i]), int(self.D))
        return x


def _float_basis(sf: _StandardForm) -> list[int] | None:
    """Columns that HiGHS reports basic at a floating-point optimum.

    The answer only seeds the exact solver, which re-derives everything in
    integers; ``None`` means no usable hint (HiGHS missing or not optimal).
    """
    try:
        import highspy
    except ImportError:  # pragma: no cover - optional accelerator
        return None
    from scipy.sparse import csc_matrix

    n = sf.n_struct
    A = sf.A[:, :n].astype(float)
    col = np.max(np.abs(A), axis=0)
    col = np.where(col > 0, np.exp2(-np.round(np.log2(np.where(col > 0, col, 1.0)))), 1.0)
    A = A * col
    row = np.max(np.abs(A), axis=1)
    row = np.where(row > 0, np.exp2(-np.round(np.log2(np.where(row > 0, row, 1.0)))), 1.0)
    A = A * row[:, None]
    b = sf.b.astype(float) * row
    c = sf.c[:n].astype(float) * col
    cmax = np.max(np.abs(c))
    if cmax > 0:
        c = c / cmax

    mat = csc_matrix(A)
    model = highspy.HighsLp()
    model.num_col_, model.num_row_ = n, sf.A.shape[0]
    model.col_cost_ = c
    model.col_lower_ = np.zeros(n)
    model.col_upper_ = np.full(n, highspy.kHighsInf)
    model.row_lower_ = b
    model.row_upper_ = b
    model.a_matrix_.format_ = highspy.MatrixFormat.kColwise
    model.a_matrix_.start_ = mat.indptr
    model.a_matrix_.index_ = mat.indices
    model.a_matrix_.value_ = mat.data
    for options in (_HIGHS_TIGHT, {}):
        h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        h.setOptionValue("solver", "simplex")
        h.setOptionValue("random_seed", 0)
        for key, val in options.items():
            h.setOptionValue(key, val)
        h.passModel(model)
        h.run()
        if h.getModelStatus() == highspy.HighsModelStatus.kOptimal:
            break
    else:
        return None
    status = h.getBasis().col_status
    return [j for j in range(n) if status[j] == highspy.HighsBasisStatus.kBasic]


def _crash(kernel: _Kernel, columns: list[int]) -> None:
    """Pivot ``columns`` into the starting basis, ignoring feasibility."""
    keep = set(columns)
    for q in columns:
        if kernel.is_basic[q]:
            continue
        a = kernel.M.dot(kernel.A[:, q])
        rows = [i for i in range(kernel.m) if a[i] and kernel.basis[i] not in keep]
        if rows:
            kernel.pivot(rows[0], q, a)


def _repair(kernel: _Kernel) -> None:
    """Restore primal feasibility with one extra artificial column.

    The column is minus the sum of the basic columns on negative rows; pivoting
    it in on the most negative row lifts every negative entry to ``>= 0``.
    """
    sgn = 1 if kernel.D > 0 else -1
    neg = [i for i in range(kernel.m) if kernel.xb[i] * sgn < 0]
    if not neg:
        return
    g = sum((kernel.A[:, kernel.basis[i]] for i in neg), np.zeros(kernel.m, dtype=object))
    q = kernel.append_column(-g)
    r = min(neg, key=lambda i: (kernel.xb[i] * sgn, i))
    kernel.pivot(r, q, kernel.M.dot(kernel.A[:, q]))


# ---------------------------------------------------------------------------
# Public entry points


def solve(lp: LinearProgram, method: str = "auto", warm_start: bool | None = None) -> LpSolution:
    """Solve ``lp`` exactly.

    ``method`` is ``"primal"``, ``"dual"`` (simplex on the dual program,
    useful when rows outnumber columns) or ``"auto"``, which picks the
    formulation with the smaller basis.

    With ``warm_start`` the exact simplex starts from the basis of a
    floating-point HiGHS solve when that basis is exactly feasible.  The
    default follows ``SPOA_WARM_START`` (on unless set to ``0``).
    """
    if warm_start is None:
        warm_start = os.environ.get("SPOA_WARM_START", "1") != "0"
    if not isinstance(lp, LinearProgram):
        raise LpError("solve expects a LinearProgram")
    if method not in ("auto", "primal", "dual"):
        raise LpError(f"unknown method {method!r}")
    if method == "auto":
        method = "dual" if lp.num_constraints > lp.num_vars else "primal"
    if method == "dual" and lp.num_constraints:
        sol = _solve_via_dual(lp, warm_start)
        if sol is not None:
            return sol
    return _solve_primal(lp, warm_start)


def _solve_primal(lp: LinearProgram, warm_start: bool = False) -> LpSolution:
    n = lp.num_vars
    if not lp.constraints:
        # Only x >= 0: optimal at 0 unless some objective entry improves.
        improving = [j for j, c in enumerate(lp.objective)
                     if (c > 0 if lp.sense is Sense.MAXIMIZE else c < 0)]
        if improving:
            ray = [Fraction(0)] * n
            ray[improving[0]] = Fraction(1)
            return LpSolution(Verdict.UNBOUNDED, ray=tuple(ray))
        zero = tuple(Fraction(0) for _ in range(n))
        return LpSolution(Verdict.OPTIMAL, Fraction(0), zero, ())

    sf = _standard_form(lp)
    kernel = _Kernel(sf.A, sf.b, sf.basis)
    width = sf.A.shape[1]

    if warm_start:
        hint = _float_basis(sf)
        if hint is not None:
            _crash(kernel, hint)
            _repair(kernel)

    sgn = 1 if kernel.D > 0 else -1
    if any(j >= sf.n_struct and kernel.xb[i] * sgn > 0 for i, j in enumerate(kernel.basis)):
        phase1 = np.zeros(kernel.N, dtype=object)
        phase1[sf.n_struct:] = 1
        kernel.run(phase1, sf.n_struct)
        art_sum = sum(kernel.xb[i] for i, j in enumerate(kernel.basis) if j >= sf.n_struct)
        if art_sum:
            y = kernel.duals_numerator(phase1)
            farkas = tuple(
                Fraction(int(y[i]), int(kernel.D)) * sf.row_sign[i] * sf.row_scale[i]
                for i in range(kernel.m)
            )
            sol = LpSolution(Verdict.INFEASIBLE, farkas=farkas, iterations=kernel.iterations)
            check_certificate(lp, sol)
            return sol
    kernel.drive_out_artificials(sf.n_struct)
    c = np.zeros(kernel.N, dtype=object)
    c[:width] = sf.c

    kernel.perturb()
    status, q, a = kernel.run(c, sf.n_struct)
    kernel.restore()
    if status == "optimal":
        cleanup = kernel.dual_run(c, sf.n_struct)
        if cleanup:
            log.debug("dual simplex cleanup took %d pivots", cleanup)
            status, q, a = kernel.run(c, sf.n_struct)
    if status == "unbounded":
        ray = [Fraction(0)] * kernel.N
        ray[q] = Fraction(1)
        for i, j in enumerate(kernel.basis):
            if a[i]:
                ray[j] = -Fraction(int(a[i]), int(kernel.D))
        sol = LpSolution(Verdict.UNBOUNDED, ray=tuple(ray[:n]), iterations=kernel.iterations)
        check_certificate(lp, sol)
        return sol

    x = kernel.point()[:n]
    y = kernel.duals_numerator(c)
    obj_sign = -1 if lp.sense is Sense.MAXIMIZE else 1
    duals = tuple(
        Fraction(int(y[i]), int(kernel.D)) * sf.row_sign[i] * sf.row_scale[i] / (obj_sign * sf.obj_scale)
        for i in range(kernel.m)
    )
    sol = LpSolution(Verdict.OPTIMAL, lp.value_at(x), tuple(x), duals,
                     iterations=kernel.iterations)
    check_certificate(lp, sol)
    return sol


def dual_program(lp: LinearProgram) -> tuple[LinearProgram, list[tuple[tuple[int, int], ...]]]:
    """The LP dual of ``lp`` with every variable made nonnegative.

    Returns the dual and, per original row, ``(column, sign)`` pairs such that
    the row's multiplier is ``sum(sign * z[column])``.
    """
    maximize = lp.sense is Sense.MAXIMIZE
    columns: list[tuple[int, int]] = []
    split: list[list[tuple[int, int]]] = []
    for row in lp.constraints:
        if row.relation is Relation.EQ:
            pair = [(len(columns), 1), (len(columns) + 1, -1)]
        elif (row.relation is Relation.LE) == maximize:
            pair = [(len(columns), 1)]
        else:
            pair = [(len(columns), -1)]
        split.append(pair)
        columns.extend(pair)

    nd = len(columns)
    objective = [Fraction(0)] * nd
    for row, pair in zip(lp.constraints, split):
        for col, s in pair:
            objective[col] = s * row.rhs
    dual = LinearProgram(nd, objective, Sense.MINIMIZE if maximize else Sense.MAXIMIZE)
    rel = Relation.GE if maximize else Relation.LE
    for j in range(lp.num_vars):
        coeffs = [Fraction(0)] * nd
        for row, pair in zip(lp.constraints, split):
            a = row.coeffs[j]
            if a:
                for col, s in pair:
                    coeffs[col] = s * a
        dual.add_constraint(coeffs, rel, lp.objective[j])
    return dual, [tuple(pair) for pair in split]


def _solve_via_dual(lp: LinearProgram, warm_start: bool = False) -> LpSolution | None:
    dual, split = dual_program(lp)
    dsol = _solve_primal(dual, warm_start)
    if not dsol.is_optimal:
        # Infeasible or unbounded dual: let the primal simplex classify.
        return None
    x = dsol.dual_values
    if any(v < 0 for v in x):
        raise LpError("dual solve produced a negative primal point")
    y = tuple(sum((s * dsol.point[col] for col, s in pair), Fraction(0)) for pair in split)
    sol = LpSolution(Verdict.OPTIMAL, lp.value_at(x), tuple(x), y,
                     iterations=dsol.iterations, method="dual")
    check_certificate(lp, sol)
    return sol


def check_certificate(lp: LinearProgram, sol: LpSolution) -> None:
    """Raise :class:`LpError` unless ``sol`` carries a valid exact certificate."""
    maximize = lp.sense is Sense.MAXIMIZE
    rows = lp.constraints
    A, b, scales = lp.integer_rows()

    def combination(mult):
        # sum_i mult_i * row_i, returned as (integer column sums, rhs sum, denominator)
        Z, den = _common_denominator([Fraction(v) / s for v, s in zip(mult, scales)])
        return (Z.dot(A) if A.size else np.zeros(lp.num_vars, dtype=object)), Z.dot(b) if len(b) else 0, den

    if sol.verdict is Verdict.OPTIMAL:
        x, y = sol.point, sol.dual_values
        if x is None or y is None or len(x) != lp.num_vars or len(y) != len(rows):
            raise LpError("optimal solution is missing its point or duals")
        if not lp.is_feasible(x):
            raise LpError("optimal point violates a constraint")
        if lp.value_at(x) != sol.value:
            raise LpError("reported value differs from objective at point")
        for yi, row in zip(y, rows):
            if row.relation is Relation.EQ:
                continue
            nonneg = (row.relation is Relation.LE) == maximize
            if (yi < 0) if nonneg else (yi > 0):
                raise LpError("dual multiplier has the wrong sign")
        G, total, den = combination(y)
        for j in range(lp.num_vars):
            g = Fraction(int(G[j]), den)
            if (g < lp.objective[j]) if maximize else (g > lp.objective[j]):
                raise LpError(f"dual constraint for variable {j} violated")
        if Fraction(int(total), den) != sol.value:
            raise LpError("strong duality fails")
    elif sol.verdict is Verdict.UNBOUNDED:
        d = sol.ray
        if d is None or len(d) != lp.num_vars or any(v < 0 for v in d):
            raise LpError("unbounded verdict without a valid ray")
        act, _ = lp._activities(d)
        if not lp._relations_hold(act, np.zeros(len(rows), dtype=object)):
            raise LpError("ray leaves the feasible region")
        gain = lp.value_at(d)
        if (gain <= 0) if maximize else (gain >= 0):
            raise LpError("ray does not improve the objective")
    else:
        z = sol.farkas
        if z is None or len(z) != len(rows):
            raise LpError("infeasible verdict without a Farkas vector")
        for zi, row in zip(z, rows):
            if (row.relation is Relation.LE and zi > 0) or (row.relation is Relation.GE and zi < 0):
                raise LpError("Farkas multiplier has the wrong sign")
        G, total, _ = combination(z)
        if any(g > 0 for g in G):
            raise LpError("Farkas combination is positive on a variable")
        if total <= 0:
            raise LpError("Farkas combination does not separate the right-hand side")
