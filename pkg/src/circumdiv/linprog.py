"""Dense two-phase simplex solver for small inequality-form programs.

Solves ``min c.x  subject to  G x <= h`` with optional per-variable
bounds; variables are otherwise free.  Free variables are split into
positive and negative parts internally and bounds are rewritten as extra
inequality rows, so the tableau only ever contains nonnegative columns.

Design notes:

* Dantzig (most negative reduced cost) pivoting, switching to Bland's
  rule after ``5 * (rows + cols)`` degenerate pivots to rule out cycling.
* Rows with negative right-hand side are sign-flipped and given an
  artificial variable; phase 1 minimizes the sum of artificials and
  declares infeasibility when its optimum exceeds ``phase1_tol``.
* Optimal results are certified before being returned: primal
  feasibility, dual feasibility, stationarity and complementary
  slackness must all hold within ``optimality_tol``, otherwise a
  :class:`SolverFailureError` is raised.

The dual vector reported for row ``i`` is the multiplier ``lam_i >= 0``
with ``G.T @ lam = -c`` and objective value ``-h @ lam`` at optimality.
"""

from __future__ import annotations

import enum
import sys
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .config import TOLS
from .errors import SolverFailureError


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


def _as_float_array(value, ndim: int, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class LinearProgram:
    """``min objective . x`` subject to ``G x <= h`` and optional bounds.

    ``lower`` / ``upper`` may contain ``-inf`` / ``+inf`` entries for
    unbounded coordinates; ``None`` means no bound at all.
    """

    objective: np.ndarray
    G: np.ndarray
    h: np.ndarray
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None

    def __post_init__(self):
        c = _as_float_array(self.objective, 1, "objective")
        G = _as_float_array(self.G, 2, "G")
        h = _as_float_array(self.h, 1, "h")
        n = c.shape[0]
        if G.shape != (h.shape[0], n):
            raise ValueError(
                f"inconsistent shapes: objective {c.shape}, G {G.shape}, h {h.shape}"
            )
        if not (np.isfinite(c).all() and np.isfinite(G).all() and np.isfinite(h).all()):
            raise ValueError("objective, G and h must be finite")
        bounds = []
        for name, raw in (("lower", self.lower), ("upper", self.upper)):
            if raw is None:
                bounds.append(None)
                continue
            b = _as_float_array(raw, 1, name)
            if b.shape[0] != n:
                raise ValueError(f"{name} bound has wrong length {b.shape[0]}")
            if np.isnan(b).any():
                raise ValueError(f"{name} bound contains NaN")
            bounds.append(b)
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "lower", bounds[0])
        object.__setattr__(self, "upper", bounds[1])

    @property
    def num_vars(self) -> int:
        return self.objective.shape[0]

    @property
    def num_rows(self) -> int:
        return self.h.shape[0]


@dataclass(frozen=True)
class LpResult:
    status: LpStatus
    x: Optional[np.ndarray] = None
    value: Optional[float] = None
    #: multipliers for the original G rows (bound rows excluded)
    duals: Optional[np.ndarray] = None
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


@dataclass
class _PivotState:
    iterations: int = 0
    degenerate: int = 0
    bland: bool = False
    limit: int = 0
    bland_after: int = 0
    dump: Optional[Callable[[str, np.ndarray, np.ndarray, np.ndarray], None]] = None


def _dump_tableau(label: str, T: np.ndarray, cost: np.ndarray, basis: np.ndarray) -> None:
    """Debug dump of the working tableau (rows then cost row) to stderr."""
    with np.printoptions(precision=6, suppress=True, linewidth=200):
        print(f"[linprog] {label} basis={basis.tolist()}", file=sys.stderr)
        print(np.array2string(np.vstack([T, cost[None, :]])), file=sys.stderr)


def _pivot(T: np.ndarray, costs: list, basis: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    factors = T[:, col].copy()
    factors[row] = 0.0
    T -= np.outer(factors, T[row])
    # outer update leaves the pivot row itself untouched (factor zeroed)
    T[:, col] = 0.0
    T[row, col] = 1.0
    for cost in costs:
        cost -= cost[col] * T[row]
        cost[col] = 0.0
    basis[row] = col


def _run_phase(
    T: np.ndarray,
    cost: np.ndarray,
    extra_costs: list,
    basis: np.ndarray,
    allowed: np.ndarray,
    state: _PivotState,
) -> str:
    """Pivot until optimal or unbounded.  ``cost`` is the active objective
    row; ``extra_costs`` are kept in sync for the following phase."""
    m = T.shape[0]
    enter_tol = TOLS.pivot_tol
    while True:
        reduced = cost[:-1]
        candidates = np.flatnonzero(allowed & (reduced < -enter_tol))
        if candidates.size == 0:
            return "optimal"
        if state.bland:
            col = int(candidates[0])
        else:
            col = int(candidates[np.argmin(reduced[candidates])])
        column = T[:, col]
        usable = column > TOLS.pivot_tol
        if not usable.any():
            return "unbounded"
        ratios = np.full(m, np.inf)
        ratios[usable] = T[usable, -1] / column[usable]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + 1e-12 * (1.0 + abs(best)))
        # anti-cycling leaving rule: among ties evict the smallest basis index
        row = int(ties[np.argmin(basis[ties])])
        if best <= 1e-12:
            state.degenerate += 1
            if not state.bland and state.degenerate > state.bland_after:
                state.bland = True
        _pivot(T, [cost] + extra_costs, basis, row, col)
        state.iterations += 1
        if state.dump is not None:
            state.dump(f"pivot {state.iterations} (col {col}, row {row})", T, cost, basis)
        if state.iterations > state.limit:
            raise SolverFailureError("simplex iteration budget exhausted")


def _expand_constraints(lp: LinearProgram) -> tuple[np.ndarray, np.ndarray]:
    """Rewrite variable bounds as inequality rows appended below G."""
    rows = [lp.G]
    rhs = [lp.h]
    n = lp.num_vars
    eye = np.eye(n)
    if lp.lower is not None:
        keep = np.isfinite(lp.lower)
        if keep.any():
            rows.append(-eye[keep])
            rhs.append(-lp.lower[keep])
    if lp.upper is not None:
        keep = np.isfinite(lp.upper)
        if keep.any():
            rows.append(eye[keep])
            rhs.append(lp.upper[keep])
    return np.vstack(rows), np.concatenate(rhs)


def solve(lp: LinearProgram, *, verbose: bool = False) -> LpResult:
    """Solve the program, certifying any optimal result before returning.

    With ``verbose=True`` every pivoted tableau is dumped to stderr.
    """
    n = lp.num_vars
    G, h = _expand_constraints(lp)
    m = G.shape[0]
    if m == 0:
        # no constraints at all: optimal iff the objective is zero
        if np.any(np.abs(lp.objective) > 0):
            return LpResult(LpStatus.UNBOUNDED)
        return LpResult(LpStatus.OPTIMAL, np.zeros(n), 0.0, np.zeros(0))

    # standard form columns: [x+, x-, slacks, artificials]
    A = np.hstack([G, -G, np.eye(m)])
    b = h.copy()
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0

    art_rows = np.flatnonzero(flip)
    num_art = art_rows.size
    ncols = 2 * n + m + num_art
    T = np.zeros((m, ncols + 1))
    T[:, : 2 * n + m] = A
    T[:, -1] = b
    basis = np.empty(m, dtype=int)
    basis[~flip] = 2 * n + np.flatnonzero(~flip)
    for k, i in enumerate(art_rows):
        col = 2 * n + m + k
        T[i, col] = 1.0
        basis[i] = col

    structural = np.zeros(ncols, dtype=bool)
    structural[: 2 * n + m] = True

    state = _PivotState(
        limit=1000 + 100 * (m + 2 * n),
        bland_after=5 * (m + ncols),
        dump=_dump_tableau if verbose else None,
    )

    # phase 2 objective row, kept in sync during phase 1
    cost2 = np.zeros(ncols + 1)
    cost2[:n] = lp.objective
    cost2[n : 2 * n] = -lp.objective

    if num_art:
        cost1 = np.zeros(ncols + 1)
        cost1[2 * n + m :][:num_art] = 1.0
        for i in art_rows:
            cost1 -= T[i]
        if state.dump is not None:
            state.dump("phase 1 start", T, cost1, basis)
        status = _run_phase(T, cost1, [cost2], basis, structural, state)
        if status != "optimal":  # pragma: no cover - phase 1 is always bounded below
            raise SolverFailureError("phase 1 terminated without optimum")
        if -cost1[-1] > TOLS.phase1_tol:
            return LpResult(LpStatus.INFEASIBLE, iterations=state.iterations)
        # drive leftover artificials out of the basis where possible
        for i in range(m):
            if basis[i] >= 2 * n + m:
                usable = np.flatnonzero(np.abs(T[i, : 2 * n + m]) > TOLS.pivot_tol)
                if usable.size:
                    _pivot(T, [cost1, cost2], basis, i, int(usable[0]))
                # else: redundant zero row, harmless to leave in place

    # reduce phase 2 costs over the current basis
    for i, col in enumerate(basis):
        if abs(cost2[col]) > 0:
            cost2 -= cost2[col] * T[i]
            cost2[col] = 0.0

    if state.dump is not None:
        state.dump("phase 2 start", T, cost2, basis)
    status = _run_phase(T, cost2, [], basis, structural, state)
    if status == "unbounded":
        return LpResult(LpStatus.UNBOUNDED, iterations=state.iterations)

    x_std = np.zeros(ncols)
    x_std[basis] = T[:, -1]
    x = x_std[:n] - x_std[n : 2 * n]
    value = float(lp.objective @ x)
    lam = cost2[2 * n : 2 * n + m].copy()

    _certify(lp, G, h, x, value, lam)
    return LpResult(LpStatus.OPTIMAL, x, value, lam[: lp.num_rows], state.iterations)


def _certify(lp, G, h, x, value, lam) -> None:
    """Raise unless (x, lam) passes the KKT checks within tolerance."""
    tol = TOLS.optimality_tol
    slack = G @ x - h
    if slack.size and slack.max() > TOLS.abs_tol * (1.0 + np.abs(h).max()):
        raise SolverFailureError(f"primal feasibility violated by {slack.max():.3e}")
    if lam.min(initial=0.0) < -1e-9:
        raise SolverFailureError(f"negative dual multiplier {lam.min():.3e}")
    np.clip(lam, 0.0, None, out=lam)
    c_scale = 1.0 + np.abs(lp.objective).max(initial=0.0)
    stationarity = np.abs(G.T @ lam + lp.objective).max(initial=0.0)
    if stationarity > tol * c_scale:
        raise SolverFailureError(f"stationarity violated by {stationarity:.3e}")
    comp = np.abs(lam * slack).max(initial=0.0)
    if comp > tol * (1.0 + abs(value)):
        raise SolverFailureError(f"complementary slackness violated by {comp:.3e}")


def feasible_point(G, h, lower=None, upper=None) -> Optional[np.ndarray]:
    """Any point satisfying ``G x <= h`` (and bounds), or None."""
    G = np.asarray(G, dtype=float)
    result = solve(LinearProgram(np.zeros(G.shape[1]), G, h, lower, upper))
    return result.x if result.optimal else None
