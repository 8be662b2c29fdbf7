"""Interpolation projectors and the product projection used to bound e_k.

The one-axis projector of order k maps a sampled function to a polynomial of
degree k-1: for k = 1 the average of the two endpoint values, for k > 1 the
interpolant at k equispaced-index nodes including both endpoints. Tensor
products of axis projectors, the mixed projection

    f  ->  f - prod_i (1 - L_i^{alpha_i}) f,

and the full product over all |alpha| = k yield a computable upper bound:
e_k(f) <= sup-norm of f minus its full projection, complementing the exact
lower bound osc_k <= 2^k e_k.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .approx import Polynomial, e_k, make_polynomial
from .differences import as_multi_index, osc_k
from .errors import GridvarError
from .grid import GridFunction, LatticeCube, LatticeInterval, check_interval_in_grid


def interpolation_nodes(length: int, k: int) -> list[int]:
    """k node offsets in {0,...,length}: nearest to j*length/(k-1), endpoints in.

    For k = 1 the nodes are both endpoints (the projector averages them).
    """
    if k < 1:
        raise GridvarError(f"projector order must be >= 1, got {k}")
    if k == 1:
        return [0, length]
    if length + 1 < k:
        raise GridvarError(f"need at least {k} lattice points, interval has {length + 1}")
    return [round(j * length / (k - 1)) for j in range(k)]


def axis_projection_matrix(n: int, k: int) -> np.ndarray:
    """n x n matrix of the order-k projector along one axis of the full grid.

    Row r holds the weights expressing the projected value at index r from
    the node values; the matrix reproduces sampled polynomials of degree
    <= k-1 and has rank k (rank 1 for the endpoint average).
    """
    nodes = interpolation_nodes(n - 1, k)
    mat = np.zeros((n, n))
    if k == 1:
        mat[:, nodes[0]] = 0.5
        mat[:, nodes[1]] += 0.5
        return mat
    for r in range(n):
        for j, nj in enumerate(nodes):
            w = 1.0
            for m, nm in enumerate(nodes):
                if m != j:
                    w *= (r - nm) / (nj - nm)
            mat[r, nj] += w
    return mat


def _apply_axis(values: np.ndarray, mat: np.ndarray, axis: int) -> np.ndarray:
    moved = np.moveaxis(values, axis, 0)
    out = np.tensordot(mat, moved, axes=([1], [0]))
    return np.moveaxis(out, 0, axis)


def interpolate_1d(f: GridFunction, interval: LatticeInterval, k: int) -> Polynomial:
    """Projector of order k on a 1-d interval, returned as a polynomial.

    k = 1 gives the constant (f(a) + f(b))/2; k > 1 interpolates at the k
    equispaced-index nodes of the interval (closest lattice points, both
    endpoints included).
    """
    if f.d != 1:
        raise GridvarError(f"interpolate_1d needs d=1, got d={f.d}")
    check_interval_in_grid(interval, f)
    a, b = interval.lower[0], interval.upper[0]
    ca, cb = a / (f.n - 1), b / (f.n - 1)
    center = ((ca + cb) / 2.0,)
    scale = cb - ca
    if k == 1:
        value = (f.value_at((a,)) + f.value_at((b,))) / 2.0
        return make_polynomial(center, scale, {(0,): value})
    nodes = [a + off for off in interpolation_nodes(b - a, k)]
    vals = np.array([f.value_at((i,)) for i in nodes])
    z = (np.array(nodes, dtype=float) / (f.n - 1) - center[0]) / scale
    vander = np.vander(z, k, increasing=True)
    coef = np.linalg.solve(vander, vals)
    return make_polynomial(center, scale, {(j,): float(c) for j, c in enumerate(coef)})


def _check_alpha_fits(f: GridFunction, alpha: tuple[int, ...]) -> None:
    if any(a > f.n for a in alpha):
        raise GridvarError(f"projector order {max(alpha)} needs more than {f.n} nodes")


def tensor_projection(f: GridFunction, alpha: Sequence[int]) -> GridFunction:
    """Tensor product of axis projectors; axis i uses order alpha_i >= 1.

    The result samples a polynomial of degree alpha_i - 1 in coordinate i.
    Axis order does not matter: the projectors commute.
    """
    alpha = as_multi_index(alpha, f.d)
    if any(a < 1 for a in alpha):
        raise GridvarError(f"tensor projection needs every order >= 1, got {alpha}")
    _check_alpha_fits(f, alpha)
    out = f.values
    for axis, a in enumerate(alpha):
        out = _apply_axis(out, axis_projection_matrix(f.n, a), axis)
    return GridFunction(out)


def mixed_projection(f: GridFunction, alpha: Sequence[int]) -> GridFunction:
    """1 - prod_i (1 - L_i^{alpha_i}) applied to f; axes with alpha_i = 0 idle.

    Fixes f whenever the mixed oscillation of exponent alpha vanishes, and
    the residual f minus the projection is controlled by that oscillation.
    """
    alpha = as_multi_index(alpha, f.d)
    _check_alpha_fits(f, alpha)
    residual = f.values
    for axis, a in enumerate(alpha):
        if a >= 1:
            residual = residual - _apply_axis(residual, axis_projection_matrix(f.n, a), axis)
    return GridFunction(f.values - residual)


def order_k_exponents(d: int, k: int) -> list[tuple[int, ...]]:
    """All exponents alpha >= 0 with |alpha| = k, graded lexicographic order."""
    return [a for a in itertools.product(range(k + 1), repeat=d) if sum(a) == k]


def whitney_projection(f: GridFunction, k: int) -> GridFunction:
    """Compose the mixed projections over every |alpha| = k, in listed order.

    The result samples a polynomial of total degree <= k-1, so the sup norm
    of f minus the projection upper-bounds e_k(f) over the whole grid.
    """
    if k < 1:
        raise GridvarError(f"projection order must be >= 1, got {k}")
    if k > f.n:
        raise GridvarError(f"projection order {k} needs more than {f.n} grid points")
    out = f
    for alpha in order_k_exponents(f.d, k):
        out = mixed_projection(out, alpha)
    return out


@dataclass(frozen=True)
class WhitneyReport:
    """Two-sided comparison of e_k and osc_k on one cube.

    lower_ok asserts the exact bound osc_k <= 2^k e_k (small float slack);
    projector_residual is the sup norm of f - (full projection) on the cube's
    own subgrid, an upper bound for e_k whenever the cube admits the nodes
    (side + 1 >= k), else None.
    """

    e_value: float
    osc_value: float
    ratio: float | None  # osc / e, None when e is numerically zero
    lower_ok: bool
    projector_residual: float | None
    upper_ok: bool | None


def whitney_certificate(f: GridFunction, cube: LatticeCube, k: int) -> WhitneyReport:
    e_val = e_k(f, cube, k)
    osc_val = osc_k(f, cube, k)
    slack = 1e-9 * (1.0 + abs(e_val))
    lower_ok = osc_val <= 2.0**k * e_val + slack
    ratio = osc_val / e_val if e_val > 1e-12 else None
    if cube.side + 1 >= k:
        sub = GridFunction(f.restrict(cube))
        residual = float(np.max(np.abs(sub.values - whitney_projection(sub, k).values)))
        upper_ok = e_val <= residual + slack
    else:
        residual = None
        upper_ok = None
    return WhitneyReport(
        e_value=e_val,
        osc_value=osc_val,
        ratio=ratio,
        lower_ok=lower_ok,
        projector_residual=residual,
        upper_ok=upper_ok,
    )
