"""Negations, additive generators, ordinal sums and iterated powers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .norm_catalog import T_NORM, Operator, as_unit

BISECT_ITERS = 80
BISECT_WIDTH = 1e-13
VERIFY_GRID = 33


def _bisect_increasing(fn, target, lo=0.0, hi=1.0):
    """Solve fn(x) = target for an increasing fn on [lo, hi], vectorized."""
    target = np.asarray(target, dtype=float)
    lo = np.full(target.shape, lo)
    hi = np.full(target.shape, hi)
    for _ in range(BISECT_ITERS):
        if np.all(hi - lo < BISECT_WIDTH):
            break
        mid = 0.5 * (lo + hi)
        below = fn(mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class Negation:
    rule: Callable = field(repr=False, compare=False)
    strict: bool = True
    strong: bool = True
    phi: Optional[Callable] = field(default=None, repr=False, compare=False)
    label: str = "standard"

    def __call__(self, x):
        out = self.rule(as_unit(x))
        return float(out) if np.ndim(out) == 0 else out


def standard_negation() -> Negation:
    return Negation(rule=lambda x: 1.0 - np.asarray(x, dtype=float), label="standard")


def make_strong_negation(
    phi: Callable, phi_inv: Optional[Callable] = None, label: str = "phi"
) -> Negation:
    """Strong negation ``phi^-1(1 - phi(x))`` from an increasing bijection ``phi``.

    Without ``phi_inv`` the inverse is found by bisection.
    """
    grid = np.linspace(0.0, 1.0, VERIFY_GRID)
    vals = np.asarray(phi(grid), dtype=float)
    if abs(vals[0]) > 1e-12 or abs(vals[-1] - 1.0) > 1e-12:
        raise ValueError("phi must map 0 -> 0 and 1 -> 1")
    if np.any(np.diff(vals) <= 0):
        raise ValueError("phi must be strictly increasing")

    if phi_inv is None:
        def phi_inv(t):
            return _bisect_increasing(phi, t)

    def rule(x):
        x = np.asarray(x, dtype=float)
        t = np.clip(1.0 - np.asarray(phi(x), dtype=float), 0.0, 1.0)
        out = np.asarray(phi_inv(t), dtype=float)
        # endpoints are fixed by definition; bisection would miss them by ~1e-13
        out = np.where(t <= 0.0, 0.0, np.where(t >= 1.0, 1.0, out))
        return np.clip(out, 0.0, 1.0)

    return Negation(rule=rule, phi=phi, label=label)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Generator:
    """Additive generator ``mu`` with ``mu(1) = 0`` and value ``mu_at_zero`` at 0.

    ``inverse`` is an optional closed-form inverse of mu on [0, mu(0)].
    """

    mu: Callable = field(repr=False, compare=False)
    mu_at_zero: float
    inverse: Optional[Callable] = field(default=None, repr=False, compare=False)
    name: str = "custom"

    def __call__(self, x):
        with np.errstate(all="ignore"):
            return self.mu(np.asarray(x, dtype=float))


def make_generator(mu, inverse=None, name="custom") -> Generator:
    grid = np.linspace(0.0, 1.0, VERIFY_GRID)
    with np.errstate(all="ignore"):
        vals = np.asarray(mu(grid), dtype=float)
    if vals[-1] != 0.0:
        raise ValueError("additive generator must satisfy mu(1) = 0")
    if np.any(np.diff(vals) >= 0):
        raise ValueError("additive generator must be strictly decreasing")
    gen = Generator(mu=mu, mu_at_zero=float(vals[0]), inverse=inverse, name=name)
    _check_range_condition(gen, grid)
    return gen


def _check_range_condition(gen: Generator, grid):
    # mu(x) + mu(y) must land in Range(mu) or at/after mu(0)
    s = (gen(grid)[:, None] + gen(grid)[None, :]).ravel()
    inside = s < gen.mu_at_zero
    if np.any(inside):
        back = gen(pseudo_inverse(gen, s[inside]))
        if np.max(np.abs(back - s[inside])) > 1e-6 * max(1.0, float(np.max(s[inside]))):
            raise ValueError("mu(x) + mu(y) leaves Range(mu) on the verification grid")


def luka_generator() -> Generator:
    return make_generator(lambda x: 1.0 - x, inverse=lambda t: 1.0 - t, name="luka")


def nlog_generator() -> Generator:
    return make_generator(lambda x: -np.log(x), inverse=lambda t: np.exp(-t), name="nlog")


def yager_generator(alpha: float) -> Generator:
    alpha = float(alpha)
    if not alpha >= 1.0:
        raise ValueError("yager generator needs alpha >= 1")
    return make_generator(
        lambda x: (1.0 - x) ** alpha,
        inverse=lambda t: 1.0 - t ** (1.0 / alpha),
        name=f"yager:{alpha!r}",
    )


def pseudo_inverse(gen: Generator, t):
    """``sup{x in [0,1] : mu(x) > t}``, with the supremum of the empty set taken as 0."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or np.any(np.isnan(t)):
        raise ValueError("pseudo-inverse needs t >= 0")
    capped = t >= gen.mu_at_zero
    tt = np.where(capped, 0.0, t)
    with np.errstate(all="ignore"):
        if gen.inverse is not None:
            x = np.asarray(gen.inverse(tt), dtype=float)
        else:
            x = _bisect_increasing(lambda v: -gen(v), -tt)
    out = np.where(capped, 0.0, np.clip(x, 0.0, 1.0))
    return float(out) if out.ndim == 0 else out


def tnorm_from_generator(gen: Generator) -> Operator:
    def rule(x, y):
        return pseudo_inverse(gen, gen(x) + gen(y))

    return Operator(
        kind=T_NORM,
        rule=rule,
        identity=1.0,
        provenance=("generator", gen),
        label=f"gen({gen.name})",
    )


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrdinalSummand:
    op: Operator
    a: float
    b: float

    def __post_init__(self):
        if self.op.kind != T_NORM:
            raise ValueError(f"ordinal summand {self.op.label} is not a t_norm")
        if not 0.0 <= self.a < self.b <= 1.0:
            raise ValueError(f"invalid summand interval [{self.a}, {self.b}]")


def ordinal_sum(summands: Sequence[OrdinalSummand]) -> Operator:
    summands = list(summands)
    if not summands:
        raise ValueError("ordinal sum needs at least one summand")
    ordered = sorted(summands, key=lambda s: s.a)
    for left, right in zip(ordered, ordered[1:]):
        if left.b > right.a:
            raise ValueError(
                f"overlapping ordinal summands [{left.a},{left.b}] and [{right.a},{right.b}]"
            )
    parts = tuple(summands)

    def rule(x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        out = np.minimum(x, y)
        for s in parts:
            width = s.b - s.a
            inside = (x >= s.a) & (x <= s.b) & (y >= s.a) & (y <= s.b)
            if not np.any(inside):
                continue
            u = np.clip((x - s.a) / width, 0.0, 1.0)
            v = np.clip((y - s.a) / width, 0.0, 1.0)
            inner = np.clip(s.op.rule(u, v), 0.0, 1.0)
            out = np.where(inside, s.a + width * inner, out)
        return out

    inner_label = ", ".join(f"{s.op.label}@{s.a!r}-{s.b!r}" for s in parts)
    return Operator(
        kind=T_NORM,
        rule=rule,
        identity=1.0,
        provenance=("ordinal_sum", parts),
        label=f"ordinal({inner_label})",
    )


def iterate_power(op: Operator, x, n: int):
    """``x (x) x (x) ... (x) x`` with ``n`` copies, folded from the left."""
    if int(n) != n or n < 1:
        raise ValueError("iterate_power needs a positive integer n")
    acc = as_unit(x)
    base = acc
    for _ in range(int(n) - 1):
        acc = as_unit(op(acc, base))
    return float(acc) if acc.ndim == 0 else acc
