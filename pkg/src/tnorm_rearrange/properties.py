"""Grid plus random-sample decision procedures for operator predicates.

A ``holds_on_grid`` verdict only says no counterexample was found at the
given resolution and sample budget.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .norm_catalog import T_CONORM, T_NORM, Operator, check_parameter, resolve_family

HOLDS = "holds_on_grid"
VIOLATED = "violated"

VIOLATION_TOL = 1e-9
ANTECEDENT_TOL = 1e-12
ASSOC_TOL = 1e-7
STALL_TOL = 1e-15

PROPERTIES = ("A", "A_prime", "B", "B_prime")


@dataclass(frozen=True)
class GridSpec:
    resolution: int = 17
    random_samples: int = 10_000
    seed: int = 0

    def __post_init__(self):
        if self.resolution < 2:
            raise ValueError("grid resolution must be >= 2")
        if self.random_samples < 0:
            raise ValueError("random_samples must be >= 0")

    def points(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.resolution)

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def to_dict(self) -> dict:
        return {"resolution": self.resolution, "random_samples": self.random_samples,
                "seed": self.seed}


@dataclass(frozen=True)
class PropertyVerdict:
    property: str
    verdict: str
    witness: Optional[tuple]
    grid: GridSpec
    operator: str = ""
    detail: str = ""

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def to_json(self) -> str:
        return json.dumps({
            "property": self.property,
            "operator": self.operator,
            "verdict": self.verdict,
            "witness": list(self.witness) if self.witness is not None else None,
            "grid": self.grid.to_dict(),
            "seed": self.grid.seed,
            "detail": self.detail,
        })


def _verdict(prop, op, grid, witness=None, detail=""):
    return PropertyVerdict(
        property=prop,
        verdict=HOLDS if witness is None else VIOLATED,
        witness=None if witness is None else tuple(float(v) for v in witness),
        grid=grid,
        operator=op.label,
        detail=detail,
    )


def _first_violation(cols, bad, extra=()):
    """Lexicographically smallest row among ``bad`` rows of ``cols``; None if clean."""
    idx = np.flatnonzero(bad)
    if idx.size == 0:
        return None
    keys = [c[idx] for c in cols]
    order = np.lexsort(keys[::-1])
    i = idx[order[0]]
    return tuple(c[i] for c in cols) + tuple(e[i] for e in extra)


def _search(build, test, grid: GridSpec):
    """Run ``test`` on grid tuples, then on random tuples; first witness wins."""
    for cols in (build(None), build(grid.rng()) if grid.random_samples else None):
        if cols is None:
            continue
        found = test(cols)
        if found is not None:
            return found
    return None


def _sorted_quads(grid: GridSpec, rng):
    if rng is None:
        idx = np.array(list(itertools.combinations_with_replacement(range(grid.resolution), 4)))
        return [grid.points()[idx[:, k]] for k in range(4)]
    q = np.sort(rng.random((grid.random_samples, 4)), axis=1)
    return [q[:, k] for k in range(4)]


def _ordered_pairs(grid: GridSpec):
    idx = np.array(list(itertools.combinations_with_replacement(range(grid.resolution), 2)))
    return grid.points()[idx[:, 0]], grid.points()[idx[:, 1]]


def _two_pairs(grid: GridSpec, rng):
    if rng is None:
        a, b = _ordered_pairs(grid)
        n = a.size
        return [np.repeat(a, n), np.repeat(b, n), np.tile(a, n), np.tile(b, n)]
    q = rng.random((grid.random_samples, 4))
    xy = np.sort(q[:, :2], axis=1)
    zw = np.sort(q[:, 2:], axis=1)
    return [xy[:, 0], xy[:, 1], zw[:, 0], zw[:, 1]]


def check_property(op: Operator, prop: str, grid: GridSpec = GridSpec()) -> PropertyVerdict:
    """Decide property A, A', B or B' on ``grid``.

    A/A' range over x <= y <= z <= w with the rectangle antecedent
    (w + x <= y + z for A, >= for A'); B/B' range over x <= y, z <= w.
    Witnesses are ``(x, y, z, w, lhs, rhs)`` where for A/A' lhs = f(x,w),
    rhs = f(y,z) and for B/B' lhs = f(x,w) - f(x,z), rhs = f(y,w) - f(y,z).
    """
    prop = {"A'": "A_prime", "B'": "B_prime"}.get(prop, prop)
    if prop not in PROPERTIES:
        raise ValueError(f"unknown property {prop!r}")

    if prop in ("A", "A_prime"):
        def test(cols):
            x, y, z, w = cols
            if prop == "A":
                ante = w + x <= y + z + ANTECEDENT_TOL
            else:
                ante = w + x >= y + z - ANTECEDENT_TOL
            lhs, rhs = op(x, w), op(y, z)
            bad = ante & ((lhs > rhs + VIOLATION_TOL) if prop == "A"
                          else (lhs < rhs - VIOLATION_TOL))
            return _first_violation(cols, bad, (lhs, rhs))

        found = _search(lambda rng: _sorted_quads(grid, rng), test, grid)
    else:
        def test(cols):
            x, y, z, w = cols
            lhs = op(x, w) - op(x, z)
            rhs = op(y, w) - op(y, z)
            bad = (lhs > rhs + VIOLATION_TOL) if prop == "B" else (lhs < rhs - VIOLATION_TOL)
            return _first_violation(cols, bad, (lhs, rhs))

        found = _search(lambda rng: _two_pairs(grid, rng), test, grid)
    return _verdict(prop, op, grid, found)


# ---------------------------------------------------------------------------
# axioms


def _pairs(grid, rng):
    if rng is None:
        g = grid.points()
        return [np.repeat(g, g.size), np.tile(g, g.size)]
    q = rng.random((grid.random_samples, 2))
    return [q[:, 0], q[:, 1]]


def _triples(grid, rng):
    if rng is None:
        g = grid.points()
        X, Y, Z = np.meshgrid(g, g, g, indexing="ij")
        return [X.ravel(), Y.ravel(), Z.ravel()]
    q = rng.random((grid.random_samples, 3))
    return [q[:, 0], q[:, 1], q[:, 2]]


def _mono_triples(grid, rng):
    if rng is None:
        a, b = _ordered_pairs(grid)
        g = grid.points()
        return [np.repeat(a, g.size), np.repeat(b, g.size), np.tile(g, a.size)]
    q = rng.random((grid.random_samples, 3))
    xy = np.sort(q[:, :2], axis=1)
    return [xy[:, 0], xy[:, 1], q[:, 2]]


def check_commutative(op, grid=GridSpec(resolution=33)):
    def test(cols):
        x, y = cols
        a, b = op(x, y), op(y, x)
        return _first_violation(cols, np.abs(a - b) > VIOLATION_TOL, (a, b))

    return _verdict("commutative", op, grid, _search(lambda r: _pairs(grid, r), test, grid))


def check_associative(op, grid=GridSpec(resolution=33)):
    def test(cols):
        x, y, z = cols
        a = op(op(x, y), z)
        b = op(x, op(y, z))
        return _first_violation(cols, np.abs(a - b) > ASSOC_TOL, (a, b))

    return _verdict("associative", op, grid, _search(lambda r: _triples(grid, r), test, grid))


def check_monotone(op, grid=GridSpec(resolution=33)):
    """x <= y implies f(x,z) <= f(y,z) and f(z,x) <= f(z,y)."""
    def test(cols):
        x, y, z = cols
        a, b = op(x, z), op(y, z)
        c, d = op(z, x), op(z, y)
        bad = (a > b + VIOLATION_TOL) | (c > d + VIOLATION_TOL)
        return _first_violation(cols, bad, (a, b))

    return _verdict("monotone", op, grid, _search(lambda r: _mono_triples(grid, r), test, grid))


def check_neutral(op, grid=GridSpec(resolution=33), identity=None):
    e = op.identity if identity is None else identity

    def test(cols):
        (x,) = cols
        v = op(x, e)
        return _first_violation(cols, np.abs(v - x) > VIOLATION_TOL, (v,))

    def build(rng):
        if rng is None:
            return [grid.points()]
        return [rng.random(grid.random_samples)]

    return _verdict("neutral", op, grid, _search(build, test, grid))


def check_axioms(op: Operator, grid: GridSpec = GridSpec(resolution=33)) -> list:
    return [
        check_commutative(op, grid),
        check_associative(op, grid),
        check_monotone(op, grid),
        check_neutral(op, grid),
    ]


# ---------------------------------------------------------------------------


def check_copula(op: Operator, grid: GridSpec = GridSpec()) -> PropertyVerdict:
    """Neutrality of 1, monotonicity and property B, in that order."""
    for sub in (check_neutral(op, grid, identity=1.0), check_monotone(op, grid),
                check_property(op, "B", grid)):
        if not sub.holds:
            return _verdict("copula", op, grid, sub.witness, detail=sub.property)
    return _verdict("copula", op, grid)


def check_zero_divisors(op: Operator, grid: GridSpec = GridSpec()) -> PropertyVerdict:
    """``violated`` means a zero divisor was found: 0 < x, y < 1 with f(x,y) = 0."""
    def test(cols):
        x, y = cols
        v = op(x, y)
        return _first_violation(cols, v == 0.0, (v,))

    def build(rng):
        if rng is None:
            g = grid.points()[1:-1]
            return [np.repeat(g, g.size), np.tile(g, g.size)]
        q = rng.random((grid.random_samples, 2))
        q = q[(q > 0).all(axis=1)]
        return [q[:, 0], q[:, 1]]

    found = _search(build, test, grid)
    return _verdict("zero_divisors", op, grid, found,
                    detail="zero divisor found" if found else "")


def power_by_squaring(op: Operator, x, n: int):
    """``x`` to the ``n``-th ``op``-power, using associativity to square.

    Returns ``(value, stalled)``; ``stalled`` flags entries whose squares
    reached a fixed point before the exponent was exhausted.
    """
    base = np.atleast_1d(np.asarray(x, dtype=float))
    result = None
    stalled = np.zeros(base.shape, dtype=bool)
    while True:
        if n & 1:
            result = base if result is None else op(result, base)
        n >>= 1
        if not n:
            break
        nxt = op(base, base)
        stalled |= np.abs(nxt - base) <= STALL_TOL
        base = nxt
    return result, stalled


def check_archimedean(op: Operator, grid: GridSpec = GridSpec(), n_max: int = 2**40):
    """For interior grid x > y, look for n <= n_max with x^(n) <= y.

    Powers are nonincreasing in n, so only n = n_max needs checking; it is
    computed by repeated squaring.  Random samples are not used.
    """
    if n_max < 1:
        raise ValueError("n_max must be positive")
    g = grid.points()[1:-1]
    if g.size == 0:
        return _verdict("archimedean", op, grid)
    power, stalled = power_by_squaring(op, g, int(n_max))
    y_min = g[0]
    bad = power > y_min
    if not np.any(bad):
        return _verdict("archimedean", op, grid)
    i = int(np.flatnonzero(bad)[0])
    detail = "power sequence stalls" if stalled[i] else f"not below y within n_max={n_max}"
    return _verdict("archimedean", op, grid, (g[i], y_min, power[i]), detail=detail)


# ---------------------------------------------------------------------------


def expected_flags(family: str, alpha=None) -> dict:
    """Checkmark columns of the catalog tables for ``family`` at ``alpha``."""
    fam, kind = resolve_family(family)
    check_parameter(fam, alpha)
    if kind == T_NORM:
        return {"property_A": fam.property_a, "property_B": fam.property_b}
    assert kind == T_CONORM
    return {"property_A_prime": fam.property_a, "property_B_prime": fam.property_b}
