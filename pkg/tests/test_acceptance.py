"""Acceptance checklist: eleven end-to-end guarantees, one verdict line each.

Every test prints a single [PASS]/[FAIL] line on the real stdout (visible
under `pytest -v`) and then asserts, so a red run still shows the verdict
table. Tolerances are part of each guarantee's statement.
"""

import itertools
import math
import time

import numpy as np
import pytest

from gridvar import (
    GridFunction,
    GridvarError,
    GuardError,
    LatticeCube,
    LatticeInterval,
    VariationParams,
    best_minimax_poly,
    delta_correction,
    duality_check,
    generate,
    hardy_krause_variation,
    holder_seminorm,
    make_atom,
    make_chain,
    minimax_reference,
    osc_directional,
    osc_k,
    osc_mixed,
    tonelli_variation,
    u_norm_bounds,
    variation_bruteforce,
    variation_dyadic,
    variation_local_search,
    vitali_deviation,
    vitali_variation,
    whitney_projection,
)


def _verdict(capsys, label, failures, detail=""):
    ok = not failures
    suffix = f" ({detail})" if detail else ""
    with capsys.disabled():
        print(f"[{'PASS' if ok else 'FAIL'}] {label}{suffix}")
    assert ok, failures[:5]


def test_01_method_ordering(capsys):
    """dyadic <= local search <= brute force, 1e-12, over 200+ functions."""
    failures = []
    runs = 0
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    for d, n in itertools.product((1, 2), (3, 4, 5)):
        for seed in range(34):
            f = GridFunction(rng.uniform(-1, 1, size=(n,) * d))
            for k, p in itertools.product((1, 2), (1.0, 2.0)):
                params = VariationParams(k=k, p=p)
                brute = variation_bruteforce(f, params).value
                try:
                    dyadic = variation_dyadic(f, params)
                except GuardError:
                    dyadic = None  # n - 1 not a power of two
                # local search refines the dyadic packing when there is one
                local = variation_local_search(
                    f, params, seed=None if dyadic is None else dyadic.optimizer
                ).value
                runs += 1
                if local > brute + 1e-12:
                    failures.append(f"local {local} > brute {brute} at d={d} n={n}")
                if dyadic is not None and dyadic.value > local + 1e-12:
                    failures.append(
                        f"dyadic {dyadic.value} > local {local} at d={d} n={n}"
                    )
    elapsed = time.perf_counter() - start
    if elapsed >= 300.0:
        failures.append(f"took {elapsed:.1f}s >= 300s")
    if runs < 200:
        failures.append(f"only {runs} functions sampled")
    _verdict(capsys, "01 method ordering: dyadic <= local <= brute", failures,
             f"{runs} runs, {elapsed:.1f}s")


def test_02_polynomial_null_space(capsys):
    """Variation of degree <= k-1 polynomials vanishes to 1e-8*(1+sup)."""
    failures = []
    runs = 0
    for d, k in itertools.product((1, 2), (1, 2, 3)):
        n = 5 if d == 1 else 4
        for seed in range(17):
            f = generate("polynomial", 1000 * k + seed, d=d, n=n, degree=k - 1)
            sup = float(np.max(np.abs(f.values)))
            val = variation_bruteforce(f, VariationParams(k=k, p=1.0)).value
            runs += 1
            if val > 1e-8 * (1.0 + sup):
                failures.append(f"residual {val} at d={d} k={k} seed={seed}")
    _verdict(capsys, "02 polynomial null space: variation vanishes", failures,
             f"{runs} polynomials")


def test_03_oscillation_vs_minimax_constants(capsys):
    """osc_k/E_k in [1, 2^k]; endpoint hit at k=1, d=1; E_k below the
    polynomial-projection residual everywhere."""
    failures = []
    counted = 0
    endpoint_hits = 0
    rng = np.random.default_rng(7)
    attempts = 0
    while counted < 1000 and attempts < 1500:
        attempts += 1
        d = int(rng.integers(1, 3))
        k = int(rng.integers(1, 3))
        n = 7 if d == 1 else 4
        f = GridFunction(rng.uniform(-1, 1, size=(n,) * d))
        side = int(rng.integers(k, n))
        origin = tuple(int(rng.integers(0, n - side)) for _ in range(d))
        cube = LatticeCube(origin, side)
        e = best_minimax_poly(f, cube, k).value
        osc = osc_k(f, cube, k)
        proj = whitney_projection(f, k)
        resid = max(
            abs(float(f.values[pt]) - float(proj.values[pt]))
            for pt in cube.lattice_points()
        )
        if e > resid + 1e-10:
            failures.append(f"E {e} above projection residual {resid}")
        if e <= 1e-9:
            continue
        counted += 1
        ratio = osc / e
        if not (1.0 - 1e-12 <= ratio <= 2.0**k + 1e-9):
            failures.append(f"ratio {ratio} outside [1, 2^{k}] at d={d}")
        if d == 1 and k == 1 and abs(ratio - 2.0) <= 1e-12:
            endpoint_hits += 1
    if counted < 1000:
        failures.append(f"only {counted} informative instances")
    if endpoint_hits == 0:
        failures.append("ratio 2 never attained at k=1, d=1")
    _verdict(capsys, "03 oscillation/minimax constants: ratio in [1, 2^k]",
             failures, f"{counted} instances, endpoint hit {endpoint_hits}x")


def test_04_monotone_telescoping(capsys):
    """Oscillation-weighted var_1^1 of a monotone walk is its total rise."""
    failures = []
    for seed in range(100):
        n = 5 + (seed % 5)
        f = generate("monotone-walk", seed, n=n)
        val = variation_bruteforce(f, VariationParams(k=1, p=1.0, weight="osc_k")).value
        rise = float(f.values[-1] - f.values[0])
        if abs(val - rise) > 1e-12:
            failures.append(f"seed {seed}: {val} != rise {rise}")
    _verdict(capsys, "04 monotone walks: variation telescopes to the rise",
             failures, "100 walks")


def test_05_point_mass_sandwich(capsys):
    """Unit masses give var = l1 = 1; separated masses give
    var <= l_p norm <= 2 var."""
    failures = []
    for seed in range(20):
        f = generate("point-masses", seed, d=1, n=7, count=1,
                     amplitude=1.0, signed=False)
        val = variation_bruteforce(f, VariationParams(k=1, p=1.0)).value
        if abs(val - 1.0) > 1e-10:
            failures.append(f"unit mass seed {seed}: var {val} != 1")

    sandwiched = 0
    for seed in range(40):
        for count, n in ((2, 7), (3, 9)):
            try:
                f = generate("point-masses", seed, d=1, n=n, count=count)
            except GridvarError:
                continue  # no admissible placement for this draw
            for p in (1.0, 2.0):
                var = variation_bruteforce(f, VariationParams(k=1, p=p)).value
                norm = float(np.sum(np.abs(f.values) ** p) ** (1.0 / p))
                sandwiched += 1
                if var > norm + 1e-10:
                    failures.append(f"var {var} > norm {norm} (seed {seed}, p={p})")
                if norm > 2.0 * var + 1e-10:
                    failures.append(f"norm {norm} > 2 var {var} (seed {seed}, p={p})")
    if sandwiched < 60:
        failures.append(f"only {sandwiched} sandwich instances placed")
    _verdict(capsys, "05 point masses: var = l1 = 1 and var <= lp <= 2 var",
             failures, f"{sandwiched} sandwich checks")


def test_06_classical_golden_values(capsys):
    failures = []
    for n in (3, 5):
        x = np.linspace(0.0, 1.0, n)
        prod = GridFunction(np.outer(x, x))
        sums = GridFunction(x[:, None] + x[None, :])
        got = {
            "vitali(xy)=1": (vitali_variation(prod).value, 1.0),
            "hardy-krause(xy)=3": (hardy_krause_variation(prod), 3.0),
            "tonelli(x+y)=2": (tonelli_variation(sums), 2.0),
            "vitali(x+y)=0": (vitali_variation(sums).value, 0.0),
        }
        for label, (value, want) in got.items():
            if abs(value - want) > 1e-12:
                failures.append(f"n={n}: {label} but value {value}")
    _verdict(capsys, "06 classical golden values on n in {3, 5}", failures)


def test_07_box_deviation_telescoping(capsys):
    """The alternating corner sum of a box equals the sum over any
    axis-aligned partition of it."""
    failures = []
    rng = np.random.default_rng(12)
    for trial in range(100):
        d = int(rng.integers(1, 4))
        n = 5 if d < 3 else 4
        f = GridFunction(rng.uniform(-1, 1, size=(n,) * d))
        lower = tuple(int(rng.integers(0, n - 1)) for _ in range(d))
        upper = tuple(int(rng.integers(lo + 1, n)) for lo in lower)
        box = LatticeInterval(lower, upper)
        slabs_per_axis = []
        for lo, hi in zip(lower, upper):
            inner = list(range(lo + 1, hi))
            rng.shuffle(inner)
            cuts = sorted(inner[: int(rng.integers(0, len(inner) + 1))])
            bounds = [lo, *cuts, hi]
            slabs_per_axis.append(list(zip(bounds[:-1], bounds[1:])))
        pieces = [
            LatticeInterval(tuple(s[0] for s in combo), tuple(s[1] for s in combo))
            for combo in itertools.product(*slabs_per_axis)
        ]
        whole = vitali_deviation(f, box)
        parts = math.fsum(vitali_deviation(f, piece) for piece in pieces)
        if abs(whole - parts) > 1e-12:
            failures.append(f"trial {trial}: {whole} != {parts} over {len(pieces)} pieces")
    _verdict(capsys, "07 box deviations telescope across partitions", failures,
             "100 partitions")


def test_08_lacunary_holder_bound(capsys):
    """Oscillation-weighted variation at s = d/p stays below the scaled
    oscillation seminorm."""
    failures = []
    runs = 0
    for p in (1.0, 2.0):
        s = 1.0 / p  # d = 1
        for seed in range(100):
            f = generate("lacunary", seed, n=9, s=s)
            var = variation_bruteforce(f, VariationParams(k=1, p=p, weight="osc_k")).value
            bound = holder_seminorm(f, 1, p)
            runs += 1
            if var > bound + 1e-10:
                failures.append(f"seed {seed} p={p}: var {var} > seminorm {bound}")
    _verdict(capsys, "08 lacunary family: variation below Holder seminorm",
             failures, f"{runs} instances")


def _random_chain(rng, n, k):
    """Disjoint k-th difference atoms with random coefficients, d = 1."""
    patterns = {
        1: ((0.5, -0.5), 1),
        2: ((0.25, -0.5, 0.25), 2),
    }
    weights, side = patterns[k]
    origins = []
    pos = int(rng.integers(0, 2))
    while pos + side <= n - 1:
        origins.append(pos)
        pos += side + int(rng.integers(1, 3))
    take = int(rng.integers(1, len(origins) + 1))
    atoms = [
        make_atom(LatticeCube((o,), side),
                  {(o + j,): w for j, w in enumerate(weights)})
        for o in origins[:take]
    ]
    return make_chain(atoms, rng.uniform(-2.0, 2.0, size=take))


def test_09_duality_and_norm_bounds(capsys):
    """|<f, chain>| <= chain norm * variation on 1000 pairs; decomposition
    bounds stay ordered; the separated-pair example lands in [1, 2]."""
    failures = []
    rng = np.random.default_rng(41)
    pairs = 0
    for k in (1, 2):
        params = VariationParams(k=k, p=float(rng.choice([1.0, 2.0])))
        for _ in range(500):
            f = GridFunction(rng.uniform(-1, 1, size=7))
            chain = _random_chain(rng, 7, k)
            params = VariationParams(k=k, p=float(rng.choice([1.0, 2.0])))
            report = duality_check(f, chain, params)
            pairs += 1
            if not report.ok:
                failures.append(f"duality violated by {-report.margin} (k={k})")

    for seed in range(10):
        corr = delta_correction((2,), [(0,), (4,)], k=2, n=5)
        scale = float(np.random.default_rng(seed).uniform(0.5, 2.0))
        vals = np.zeros(5)
        for pt, w in corr.items():
            vals[pt] += scale * w
        bounds = u_norm_bounds(GridFunction(vals), VariationParams(k=2, p=2.0))
        if bounds.lower > bounds.upper + 1e-10:
            failures.append(f"seed {seed}: lower {bounds.lower} > upper {bounds.upper}")

    vals = np.zeros(5)
    vals[0], vals[4] = 1.0, -1.0
    pair = u_norm_bounds(GridFunction(vals), VariationParams(k=1, p=1.0))
    if not (1.0 - 1e-10 <= pair.lower <= pair.upper <= 2.0 + 1e-10):
        failures.append(f"separated pair bounds [{pair.lower}, {pair.upper}]")
    _verdict(capsys, "09 duality pairing and decomposition-norm bounds",
             failures, f"{pairs} pairs")


def test_10_mixed_matches_directional(capsys):
    """The mixed oscillation at k*e_i is the directional one, exactly."""
    failures = []
    rng = np.random.default_rng(3)
    for trial in range(500):
        d = int(rng.integers(1, 4))
        n = 6 if d == 1 else (4 if d == 2 else 3)
        f = GridFunction(rng.uniform(-1, 1, size=(n,) * d))
        k = int(rng.integers(1, 4 if d == 1 else 3))
        side = int(rng.integers(1, n))
        origin = tuple(int(rng.integers(0, n - side)) for _ in range(d))
        cube = LatticeCube(origin, side)
        axis = int(rng.integers(0, d))
        alpha = tuple(k if i == axis else 0 for i in range(d))
        if osc_mixed(f, cube, alpha) != osc_directional(f, cube, k, axis):
            failures.append(f"trial {trial}: d={d} k={k} axis={axis}")
    _verdict(capsys, "10 mixed oscillation equals directional at k*e_i",
             failures, "500 instances")


def test_11_minimax_lp_vs_reference(capsys):
    """LP minimax errors match the exhaustive reference on every small cube;
    the 3-point parabola gives exactly 1/8."""
    failures = []
    checked = 0
    rng = np.random.default_rng(97)
    for seed in range(4):
        f1 = GridFunction(rng.uniform(-1, 1, size=5))
        for k in (1, 2, 3):
            for origin in range(5):
                for side in range(1, 5 - origin):
                    cube = LatticeCube((origin,), side)
                    lp = best_minimax_poly(f1, cube, k).value
                    ref = minimax_reference(f1, cube, k)
                    checked += 1
                    if abs(lp - ref) > 1e-9 * (1.0 + ref):
                        failures.append(f"d=1 {cube} k={k}: lp {lp} ref {ref}")
        f2 = GridFunction(rng.uniform(-1, 1, size=(4, 4)))
        for k in (1, 2):
            for cube in _small_cubes(4):
                lp = best_minimax_poly(f2, cube, k).value
                ref = minimax_reference(f2, cube, k)
                checked += 1
                if abs(lp - ref) > 1e-9 * (1.0 + ref):
                    failures.append(f"d=2 {cube} k={k}: lp {lp} ref {ref}")

    parabola = GridFunction(np.array([0.0, 0.25, 1.0]))
    value = best_minimax_poly(parabola, LatticeCube((0,), 2), 2).value
    if value != 0.125:
        failures.append(f"parabola error {value!r} != 0.125")
    _verdict(capsys, "11 minimax LP agrees with reference search", failures,
             f"{checked} cubes")


def _small_cubes(n):
    """d=2 cubes with at most 12 lattice points (sides 1 and 2)."""
    out = []
    for side in (1, 2):
        for i in range(n - side):
            for j in range(n - side):
                out.append(LatticeCube((i, j), side))
    return out
