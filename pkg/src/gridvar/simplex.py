"""Dense two-phase simplex solver with Bland's rule.

Solves min c.x subject to A x = b, x >= 0 on a dense numpy tableau. Bland's
pivoting rule (smallest eligible index enters, smallest basic index breaks
ratio ties) guarantees termination. Optimality is certified by dual
feasibility: the solver only stops when every reduced cost is >= -tol.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LPError

PIVOT_TOL = 1e-11


@dataclass(frozen=True)
class LPSolution:
    x: np.ndarray
    objective: float
    reduced_costs: np.ndarray
    iterations: int


def _pivot(tableau: np.ndarray, rhs: np.ndarray, zrow: np.ndarray, basis: np.ndarray,
           row: int, col: int) -> None:
    piv = tableau[row, col]
    tableau[row] /= piv
    rhs[row] /= piv
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row])
    rhs -= factors * rhs[row]
    zfac = zrow[col]
    zrow -= zfac * tableau[row]
    basis[row] = col
    # keep the basic columns numerically clean
    tableau[:, col] = 0.0
    tableau[row, col] = 1.0
    zrow[col] = 0.0


def _run_simplex(tableau: np.ndarray, rhs: np.ndarray, zrow: np.ndarray, basis: np.ndarray,
                 allowed: int, tol: float, max_iter: int) -> int:
    """Pivot until all reduced costs over columns [0, allowed) are >= -tol."""
    iters = 0
    while True:
        entering = -1
        for j in range(allowed):  # Bland: smallest improving index
            if zrow[j] < -tol:
                entering = j
                break
        if entering < 0:
            return iters
        col = tableau[:, entering]
        ratios = np.full(len(rhs), np.inf)
        positive = col > PIVOT_TOL
        ratios[positive] = rhs[positive] / col[positive]
        best = np.min(ratios)
        if not np.isfinite(best):
            raise LPError("LP is unbounded")
        # Bland tie-break: among minimal ratios, leave the smallest basic
        # index. The threshold must sit above `best` even when roundoff has
        # pushed a basic value (hence `best`) slightly negative.
        candidates = np.where(ratios <= best + 1e-12 * (1.0 + abs(best)))[0]
        row = min(candidates, key=lambda r: basis[r])
        _pivot(tableau, rhs, zrow, basis, row, entering)
        iters += 1
        if iters > max_iter:
            raise LPError(f"simplex exceeded {max_iter} pivots")


def solve_lp(c: np.ndarray, A: np.ndarray, b: np.ndarray, *,
             tol: float = 1e-9, max_iter: int = 100_000) -> LPSolution:
    """Minimize c.x subject to A x = b, x >= 0.

    Raises LPError if the program is infeasible or unbounded, or if the
    final basis cannot be certified optimal (reduced costs >= -tol).
    """
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    c = np.array(c, dtype=float)
    m, nvars = A.shape
    if b.shape != (m,) or c.shape != (nvars,):
        raise LPError(f"inconsistent LP shapes: A {A.shape}, b {b.shape}, c {c.shape}")
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0

    # Phase 1: artificial basis, minimize the sum of artificials.
    tableau = np.hstack([A, np.eye(m)])
    rhs = b.copy()
    basis = np.arange(nvars, nvars + m)
    zrow = np.concatenate([-A.sum(axis=0), np.zeros(m)])
    phase1_obj = float(rhs.sum())
    iters = _run_simplex(tableau, rhs, zrow, basis, nvars + m, tol, max_iter)
    infeas = float(rhs[basis >= nvars].sum()) if np.any(basis >= nvars) else 0.0
    if infeas > tol * (1.0 + phase1_obj):
        raise LPError(f"LP infeasible: phase-1 residual {infeas:.3e}")

    # Drive leftover zero-value artificials out of the basis; drop redundant rows.
    keep = np.ones(m, dtype=bool)
    for r in range(m):
        if basis[r] >= nvars:
            pivots = np.where(np.abs(tableau[r, :nvars]) > 1e-9)[0]
            if pivots.size:
                _pivot(tableau, rhs, zrow, basis, r, int(pivots[0]))
                iters += 1
            else:
                keep[r] = False
    tableau = tableau[keep][:, :nvars]
    rhs = rhs[keep]
    basis = basis[keep]

    # Phase 2: the real objective, restricted to original columns.
    zrow = c.copy()
    for r, bj in enumerate(basis):
        zrow -= c[bj] * tableau[r]
    iters += _run_simplex(tableau, rhs, zrow, basis, nvars, tol, max_iter)

    if np.min(zrow) < -tol:
        raise LPError("optimality certificate failed: negative reduced cost")
    x = np.zeros(nvars)
    x[basis] = rhs
    return LPSolution(x=x, objective=float(c @ x), reduced_costs=zrow, iterations=iters)
