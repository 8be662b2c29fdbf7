"""Seeded generators of test functions on the grid.

Each family maps (seed, parameters) to a GridFunction deterministically.
The registry drives both the property suite and the `generate` CLI command.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .approx import poly_multi_indices
from .errors import GridvarError
from .grid import GridFunction


@dataclass(frozen=True)
class FunctionFamily:
    name: str
    generator: Callable[..., GridFunction]  # (rng, **parameters)
    defaults: tuple[tuple[str, object], ...] = field(default=())

    def make(self, seed: int, **overrides) -> GridFunction:
        params = dict(self.defaults)
        unknown = set(overrides) - set(params)
        if unknown:
            raise GridvarError(
                f"family {self.name!r} has no parameters {sorted(unknown)}; "
                f"known: {sorted(params)}"
            )
        params.update(overrides)
        return self.generator(np.random.default_rng(seed), **params)


def _lattice(d: int, n: int) -> np.ndarray:
    pts = np.array(list(itertools.product(range(n), repeat=d)), dtype=float)
    return pts / (n - 1)


def _uniform(rng: np.random.Generator, d: int, n: int, low: float, high: float) -> GridFunction:
    return GridFunction(rng.uniform(low, high, size=(n,) * d))


def _polynomial(rng: np.random.Generator, d: int, n: int, degree: int) -> GridFunction:
    """Random polynomial of total degree <= degree, standard normal
    coefficients in the monomial basis on [0,1]^d."""
    if degree < 0:
        raise GridvarError(f"degree must be >= 0, got {degree}")
    pts = _lattice(d, n)
    vals = np.zeros(len(pts))
    for alpha in poly_multi_indices(d, degree):
        vals += rng.standard_normal() * np.prod(pts ** np.asarray(alpha), axis=1)
    return GridFunction(vals.reshape((n,) * d))


def _monotone_walk(rng: np.random.Generator, n: int) -> GridFunction:
    """Nondecreasing 1-d walk: cumulative |normal| increments."""
    steps = np.abs(rng.standard_normal(n - 1))
    start = rng.uniform(-1.0, 1.0)
    return GridFunction(np.concatenate([[start], start + np.cumsum(steps)]))


def _lacunary(rng: np.random.Generator, n: int, s: float, terms: int) -> GridFunction:
    """f(x) = sum over j < terms of 2^(-j s) cos(2^j pi x + theta_j),
    with seeded phases theta_j, on the 1-d grid."""
    if s <= 0:
        raise GridvarError(f"exponent s must be > 0, got {s}")
    x = np.linspace(0.0, 1.0, n)
    phases = rng.uniform(0.0, 2.0 * math.pi, size=terms)
    vals = np.zeros(n)
    for j in range(terms):
        vals += 2.0 ** (-j * s) * np.cos(2.0**j * math.pi * x + phases[j])
    return GridFunction(vals)


def _point_masses(rng: np.random.Generator, d: int, n: int, count: int,
                  min_gap: int, amplitude: float | None, signed: bool) -> GridFunction:
    """`count` masses at interior lattice points with pairwise sup-distance
    >= min_gap; amplitudes are seeded (uniform in [0.5, 1.5] with random
    signs) unless `amplitude` pins their magnitude."""
    if n < 3:
        raise GridvarError("point masses need interior points: n >= 3")
    interior = list(itertools.product(range(1, n - 1), repeat=d))
    order = rng.permutation(len(interior))
    chosen: list[tuple[int, ...]] = []
    for idx in order:
        cand = interior[idx]
        if all(max(abs(a - b) for a, b in zip(cand, other)) >= min_gap for other in chosen):
            chosen.append(cand)
        if len(chosen) == count:
            break
    if len(chosen) < count:
        raise GridvarError(
            f"cannot place {count} interior points with gap >= {min_gap} on n={n}, d={d}"
        )
    vals = np.zeros((n,) * d)
    for pt in chosen:
        mag = rng.uniform(0.5, 1.5) if amplitude is None else float(amplitude)
        sign = rng.choice([-1.0, 1.0]) if signed else 1.0
        vals[pt] = sign * mag
    return GridFunction(vals)


def _separable(rng: np.random.Generator, d: int, n: int) -> GridFunction:
    """Product of independent random 1-d profiles, one per axis."""
    vals = np.ones((n,) * d)
    for axis in range(d):
        profile = rng.uniform(-1.0, 1.0, size=n)
        shape = [1] * d
        shape[axis] = n
        vals = vals * profile.reshape(shape)
    return GridFunction(vals)


def _checkerboard(rng: np.random.Generator, d: int, n: int, block: int) -> GridFunction:
    """0/1 indicator with parity flipping every `block` lattice steps."""
    if block < 1:
        raise GridvarError(f"block must be >= 1, got {block}")
    idx = np.indices((n,) * d) // block
    return GridFunction((idx.sum(axis=0) % 2).astype(float))


FAMILIES: Mapping[str, FunctionFamily] = {
    fam.name: fam
    for fam in (
        FunctionFamily("uniform", _uniform,
                       (("d", 1), ("n", 5), ("low", -1.0), ("high", 1.0))),
        FunctionFamily("polynomial", _polynomial,
                       (("d", 1), ("n", 5), ("degree", 1))),
        FunctionFamily("monotone-walk", _monotone_walk, (("n", 5),)),
        FunctionFamily("lacunary", _lacunary,
                       (("n", 9), ("s", 1.0), ("terms", 8))),
        FunctionFamily("point-masses", _point_masses,
                       (("d", 1), ("n", 7), ("count", 1), ("min_gap", 2),
                        ("amplitude", None), ("signed", True))),
        FunctionFamily("separable", _separable, (("d", 2), ("n", 5))),
        FunctionFamily("checkerboard", _checkerboard,
                       (("d", 2), ("n", 5), ("block", 1))),
    )
}


def generate(family: str | FunctionFamily, seed: int, **overrides) -> GridFunction:
    """Deterministic sample from a registered family (hyphen/underscore
    spellings of the name both accepted)."""
    if isinstance(family, FunctionFamily):
        return family.make(seed, **overrides)
    name = family.replace("_", "-")
    if name not in FAMILIES:
        raise GridvarError(f"unknown family {family!r}; known: {sorted(FAMILIES)}")
    return FAMILIES[name].make(seed, **overrides)
