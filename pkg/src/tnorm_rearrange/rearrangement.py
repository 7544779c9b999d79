"""Rearrangement inequality and its dual for (otimes, oplus) operator pairs.

Permutations are tuples of 1-based indices.  ``primal`` refers to the
sum-of-products chain, ``dual`` to the product-of-sums chain.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .norm_catalog import Operator, as_unit, standard_dual
from .properties import GridSpec, _ordered_pairs

PRIMAL = "primal"
DUAL = "dual"
HOLDS = "holds_on_samples"
VIOLATED = "violated"

VIOLATION_TOL = 1e-9
MAX_BRUTE_N = 9
MAX_CIRCULAR_N = 8


def _check_direction(direction):
    if direction not in (PRIMAL, DUAL):
        raise ValueError(f"direction must be 'primal' or 'dual', got {direction!r}")


def validate_permutation(sigma: Sequence[int], n: Optional[int] = None) -> tuple:
    sigma = tuple(int(s) for s in sigma)
    n = len(sigma) if n is None else n
    if len(sigma) != n or sorted(sigma) != list(range(1, n + 1)):
        raise ValueError(f"{sigma} is not a permutation of 1..{n}")
    return sigma


@dataclass(frozen=True)
class PairCheckResult:
    otimes: str
    oplus: str
    direction: str
    verdict: str
    witness: Optional[tuple] = None  # (x1, x2, y1, y2, lhs, rhs)
    samples_tested: int = 0
    seed: Optional[int] = None
    budget: Optional[int] = None

    @property
    def violated(self) -> bool:
        return self.verdict == VIOLATED

    @property
    def lhs(self):
        return None if self.witness is None else self.witness[4]

    @property
    def rhs(self):
        return None if self.witness is None else self.witness[5]

    def to_dict(self) -> dict:
        return {
            "otimes": self.otimes,
            "oplus": self.oplus,
            "direction": self.direction,
            "verdict": self.verdict,
            "witness": None if self.witness is None else list(self.witness[:4]),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "samples_tested": self.samples_tested,
            "budget": self.budget,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class RearrangementWitness:
    xs: tuple
    ys: tuple
    sigma: tuple
    value: float
    upper: float
    lower: float


@dataclass(frozen=True)
class RearrangementVerdict:
    holds: bool
    witness: Optional[RearrangementWitness] = None
    permutations: int = 0


# ---------------------------------------------------------------------------


def aggregate(op: Operator, values):
    """Left fold ``op(...op(op(v1, v2), v3)..., vn)``; entries may be arrays."""
    values = list(values)
    if not values:
        raise ValueError("aggregate needs at least one value")
    acc = as_unit(values[0])
    for v in values[1:]:
        acc = np.asarray(op(acc, v))
    return float(acc) if np.ndim(acc) == 0 else acc


def pair_sides(otimes: Operator, oplus: Operator, x1, x2, y1, y2, direction=PRIMAL):
    """Left and right sides of the two-term condition, vectorized."""
    if direction == PRIMAL:
        lhs = oplus(otimes(x1, y1), otimes(x2, y2))
        rhs = oplus(otimes(x1, y2), otimes(x2, y1))
    else:
        lhs = otimes(oplus(x1, y1), oplus(x2, y2))
        rhs = otimes(oplus(x1, y2), oplus(x2, y1))
    return lhs, rhs


def _violates(lhs, rhs, direction):
    if direction == PRIMAL:
        return lhs < rhs - VIOLATION_TOL
    return lhs > rhs + VIOLATION_TOL


def pair_condition(otimes, oplus, x1, x2, y1, y2, direction=PRIMAL) -> PairCheckResult:
    """Check the two-term condition at one sorted quadruple.

    primal: (x1*y1) + (x2*y2) >= (x1*y2) + (x2*y1) with * = otimes, + = oplus;
    dual:   (x1+y1) * (x2+y2) <= (x1+y2) * (x2+y1).
    """
    _check_direction(direction)
    if x1 > x2 or y1 > y2:
        raise ValueError("pair_condition needs x1 <= x2 and y1 <= y2")
    lhs, rhs = pair_sides(otimes, oplus, x1, x2, y1, y2, direction)
    bad = bool(_violates(lhs, rhs, direction))
    return PairCheckResult(
        otimes=otimes.label, oplus=oplus.label, direction=direction,
        verdict=VIOLATED if bad else HOLDS,
        witness=(float(x1), float(x2), float(y1), float(y2), float(lhs), float(rhs)),
        samples_tested=1,
    )


def grid_quadruples(resolution: int):
    """All (x1 <= x2, y1 <= y2) on a uniform grid, in lexicographic order."""
    a, b = _ordered_pairs(GridSpec(resolution=resolution))
    n = a.size
    return np.repeat(a, n), np.repeat(b, n), np.tile(a, n), np.tile(b, n)


def random_quadruples(budget: int, seed: int):
    q = np.random.default_rng(seed).random((budget, 4))
    xs = np.sort(q[:, :2], axis=1)
    ys = np.sort(q[:, 2:], axis=1)
    return xs[:, 0], xs[:, 1], ys[:, 0], ys[:, 1]


def search_pair(otimes, oplus, direction=PRIMAL, budget=10_000, seed=0,
                grid: Optional[GridSpec] = None) -> PairCheckResult:
    """Scan grid quadruples, then ``budget`` seeded random ones.

    Always returns a result; ``verdict`` is ``violated`` with the first
    violating quadruple, or ``holds_on_samples``.
    """
    _check_direction(direction)
    if budget < 0:
        raise ValueError("budget must be >= 0")
    resolution = 17 if grid is None else grid.resolution
    tested = 0
    batches = [lambda: grid_quadruples(resolution)]
    if budget:
        batches.append(lambda: random_quadruples(budget, seed))
    for make in batches:
        x1, x2, y1, y2 = make()
        lhs, rhs = pair_sides(otimes, oplus, x1, x2, y1, y2, direction)
        bad = np.flatnonzero(_violates(lhs, rhs, direction))
        if bad.size:
            i = bad[0]
            witness = tuple(float(v[i]) for v in (x1, x2, y1, y2, lhs, rhs))
            return PairCheckResult(otimes.label, oplus.label, direction, VIOLATED,
                                   witness, tested + int(i) + 1, seed, budget)
        tested += x1.size
    return PairCheckResult(otimes.label, oplus.label, direction, HOLDS, None,
                           tested, seed, budget)


def search_counterexample(otimes, oplus, direction=PRIMAL, budget=10_000, seed=0,
                          grid: Optional[GridSpec] = None) -> Optional[PairCheckResult]:
    """First violation of the two-term condition, or None if none is found."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    result = search_pair(otimes, oplus, direction, budget, seed, grid)
    return result if result.violated else None


def transport_witness(result: PairCheckResult, otimes: Operator, oplus: Operator):
    """Map a primal witness for (otimes, oplus) to a dual one for the negated pair.

    ``(x1, x2, y1, y2)`` becomes ``(1-x2, 1-x1, 1-y2, 1-y1)`` checked against
    ``(dual(oplus), dual(otimes))`` in the dual direction.
    """
    if result.direction != PRIMAL or result.witness is None:
        raise ValueError("transport needs a primal witness")
    x1, x2, y1, y2 = result.witness[:4]
    return pair_condition(standard_dual(oplus), standard_dual(otimes),
                          1.0 - x2, 1.0 - x1, 1.0 - y2, 1.0 - y1, DUAL)


# ---------------------------------------------------------------------------


def _check_sorted(seq, name):
    arr = np.asarray(seq, dtype=float)
    if np.any(np.diff(arr) < 0):
        raise ValueError(f"{name} must be sorted nondecreasing")
    return as_unit(arr)


def rearrangement_value(otimes, oplus, xs, ys, sigma, direction=PRIMAL):
    """Aggregate of ``x_sigma(i)`` paired with ``y_i``."""
    _check_direction(direction)
    xs = as_unit(xs)
    ys = as_unit(ys)
    if xs.shape != ys.shape:
        raise ValueError("xs and ys must have equal length")
    sigma = validate_permutation(sigma, xs.size)
    xp = xs[[s - 1 for s in sigma]]
    if direction == PRIMAL:
        return aggregate(oplus, [otimes(xp[i], ys[i]) for i in range(xs.size)])
    return aggregate(otimes, [oplus(xp[i], ys[i]) for i in range(xs.size)])


def _all_values(otimes, oplus, xs, ys, perms, direction):
    xp = xs[perms]  # (n!, n)
    if direction == PRIMAL:
        terms = [otimes(xp[:, i], ys[i]) for i in range(xs.size)]
        return np.atleast_1d(aggregate(oplus, terms))
    terms = [oplus(xp[:, i], ys[i]) for i in range(xs.size)]
    return np.atleast_1d(aggregate(otimes, terms))


def verify_rearrangement(otimes, oplus, xs, ys, direction=PRIMAL) -> RearrangementVerdict:
    """Brute-force the permutation chain over all n! pairings.

    primal: reversed pairing <= any sigma <= identity pairing;
    dual:   identity pairing <= any sigma <= reversed pairing.
    """
    _check_direction(direction)
    xs = _check_sorted(xs, "xs")
    ys = _check_sorted(ys, "ys")
    if xs.size != ys.size or xs.size == 0:
        raise ValueError("xs and ys must be nonempty and of equal length")
    n = xs.size
    if n > MAX_BRUTE_N:
        raise ValueError(f"n={n} exceeds the brute-force cap of {MAX_BRUTE_N}")
    perms = np.array(list(itertools.permutations(range(n))), dtype=int)
    vals = _all_values(otimes, oplus, xs, ys, perms, direction)
    ident = vals[0]
    rev = vals[-1]  # last lexicographic permutation is the reversal
    lower, upper = (rev, ident) if direction == PRIMAL else (ident, rev)
    bad = np.flatnonzero((vals < lower - VIOLATION_TOL) | (vals > upper + VIOLATION_TOL))
    if bad.size == 0:
        return RearrangementVerdict(True, None, len(perms))
    i = bad[0]
    w = RearrangementWitness(
        xs=tuple(xs.tolist()), ys=tuple(ys.tolist()),
        sigma=tuple(int(s) + 1 for s in perms[i]),
        value=float(vals[i]), upper=float(upper), lower=float(lower),
    )
    return RearrangementVerdict(False, w, len(perms))


def random_sequences(n: int, trials: int, seed: int, snap: float = 0.35, ends: float = 0.15,
                     resolution: int = 17):
    """``trials`` pairs of sorted length-``n`` sequences, shape ``(trials, 2, n)``.

    Each entry is 0 or 1 with probability ``ends``, a point of the
    ``resolution``-grid with probability ``snap``, and uniform otherwise.
    Violations of discontinuous operators often sit on ties such as
    x + y = 1 or on the boundary, a null set for purely uniform draws.
    """
    if n < 1 or trials < 0:
        raise ValueError("need n >= 1 and trials >= 0")
    if snap < 0 or ends < 0 or snap + ends > 1:
        raise ValueError("snap and ends must be probabilities summing to at most 1")
    rng = np.random.default_rng(seed)
    shape = (trials, 2, n)
    v = rng.random(shape)
    grid = rng.integers(0, resolution, shape) / (resolution - 1)
    end = rng.integers(0, 2, shape).astype(float)
    u = rng.random(shape)
    v = np.where(u < ends, end, np.where(u < ends + snap, grid, v))
    return np.sort(v, axis=2)


def verify_on_samples(otimes, oplus, n, trials=50, seed=0, direction=PRIMAL):
    """Run :func:`verify_rearrangement` over :func:`random_sequences`; first failure wins."""
    seqs = random_sequences(n, trials, seed)
    for xs, ys in seqs:
        verdict = verify_rearrangement(otimes, oplus, xs, ys, direction)
        if not verdict.holds:
            return verdict
    return RearrangementVerdict(True, None, trials * math.factorial(n))


# ---------------------------------------------------------------------------
# sum-product pairing variant


@dataclass(frozen=True)
class VariantVerdict:
    holds: bool
    lower: float
    middle: float
    upper: float


def sumprod_variant_check(otimes, oplus, a, direction=PRIMAL) -> VariantVerdict:
    """Bound the as-given pairing of ``a`` between the sorted extreme pairings.

    With ``b`` the sorted values, primal bounds
    ``+_i (b_i * b_{2n-i+1}) <= +_i (a_{2i-1} * a_{2i}) <= +_i (b_{2i-1} * b_{2i})``;
    dual bounds ``*_i (b_{2i-1} + b_{2i}) <= *_i (a_{2i-1} + a_{2i}) <= *_i (b_i + b_{2n-i+1})``.
    """
    _check_direction(direction)
    a = as_unit(a)
    if a.ndim != 1 or a.size == 0 or a.size % 2:
        raise ValueError("sum-product variant needs an even, nonempty sequence")
    b = np.sort(a)
    m = a.size // 2
    opposite = [(b[i], b[a.size - 1 - i]) for i in range(m)]
    given = [(a[2 * i], a[2 * i + 1]) for i in range(m)]
    adjacent = [(b[2 * i], b[2 * i + 1]) for i in range(m)]

    if direction == PRIMAL:
        def value(pairs):
            return aggregate(oplus, [otimes(p, q) for p, q in pairs])
        lo, mid, hi = value(opposite), value(given), value(adjacent)
    else:
        def value(pairs):
            return aggregate(otimes, [oplus(p, q) for p, q in pairs])
        lo, mid, hi = value(adjacent), value(given), value(opposite)
    ok = lo <= mid + VIOLATION_TOL and mid <= hi + VIOLATION_TOL
    return VariantVerdict(bool(ok), float(lo), float(mid), float(hi))


# ---------------------------------------------------------------------------
# circular variant


def sigma_m2(n: int) -> tuple:
    """Odd indices ascending, then even indices descending: (1, 3, 5, ..., 6, 4, 2)."""
    if n < 2:
        raise ValueError("sigma_m2 needs n >= 2")
    odds = list(range(1, n + 1, 2))
    evens = list(range(2, n + 1, 2))
    return validate_permutation(odds + evens[::-1], n)


def sigma_m1(n: int) -> tuple:
    """The arrangement (1, n-1, 3, n-3, 5, ..., n-4, 4, n-2, 2, n).

    The front is filled from 1, n-1, 3, n-3, ... and the back, read from the
    end, from n, 2, n-2, 4, ...; the two halves meet in the middle.
    """
    if n < 2:
        raise ValueError("sigma_m1 needs n >= 2")
    front_src = []
    back_src = []
    for k in range(1, n + 1, 2):
        front_src += [k, n - k]
    back_src = [n]
    for k in range(2, n + 1, 2):
        back_src += [k, n - k]
    used = set()
    front, back = [], []
    fi = bi = 0
    while len(front) + len(back) < n:
        while front_src[fi] in used or not 1 <= front_src[fi] <= n:
            fi += 1
        front.append(front_src[fi])
        used.add(front_src[fi])
        if len(front) + len(back) == n:
            break
        while back_src[bi] in used or not 1 <= back_src[bi] <= n:
            bi += 1
        back.append(back_src[bi])
        used.add(back_src[bi])
    return validate_permutation(front + back[::-1], n)


def circular_value(otimes, oplus, a, sigma, direction=PRIMAL):
    """Cyclic aggregate over sigma-neighbours, including the wraparound term."""
    _check_direction(direction)
    a = _check_sorted(a, "a")
    if a.size < 2:
        raise ValueError("circular value needs at least two entries")
    sigma = validate_permutation(sigma, a.size)
    seq = a[[s - 1 for s in sigma]]
    nxt = np.roll(seq, -1)
    if direction == PRIMAL:
        return aggregate(oplus, [otimes(seq[i], nxt[i]) for i in range(a.size)])
    return aggregate(otimes, [oplus(seq[i], nxt[i]) for i in range(a.size)])


@dataclass(frozen=True)
class CircularVerdict:
    holds: bool
    minimum: float
    maximum: float
    at_m1: float
    at_m2: float


def circular_values(otimes, oplus, a, direction=PRIMAL):
    """Values of every permutation (lexicographic order) and the permutations."""
    a = _check_sorted(a, "a")
    n = a.size
    perms = np.array(list(itertools.permutations(range(n))), dtype=int)
    seq = a[perms]
    nxt = np.roll(seq, -1, axis=1)
    if direction == PRIMAL:
        vals = aggregate(oplus, [otimes(seq[:, i], nxt[:, i]) for i in range(n)])
    else:
        vals = aggregate(otimes, [oplus(seq[:, i], nxt[:, i]) for i in range(n)])
    return np.atleast_1d(vals), perms + 1


def verify_circular_extremes(otimes, oplus, a, direction=PRIMAL) -> CircularVerdict:
    """Check that sigma_m1 / sigma_m2 attain the extremes over all n! arrangements.

    primal: sigma_m1 minimizes, sigma_m2 maximizes; dual: the reverse.
    """
    _check_direction(direction)
    a = _check_sorted(a, "a")
    n = a.size
    if not 2 <= n <= MAX_CIRCULAR_N:
        raise ValueError(f"circular check needs 2 <= n <= {MAX_CIRCULAR_N}")
    vals, _ = circular_values(otimes, oplus, a, direction)
    lo, hi = float(vals.min()), float(vals.max())
    v1 = float(circular_value(otimes, oplus, a, sigma_m1(n), direction))
    v2 = float(circular_value(otimes, oplus, a, sigma_m2(n), direction))
    if direction == PRIMAL:
        ok = math.isclose(v1, lo, abs_tol=VIOLATION_TOL) and math.isclose(v2, hi, abs_tol=VIOLATION_TOL)
    else:
        ok = math.isclose(v1, hi, abs_tol=VIOLATION_TOL) and math.isclose(v2, lo, abs_tol=VIOLATION_TOL)
    return CircularVerdict(ok, lo, hi, v1, v2)
