"""Closed-form T-norm and T-conorm families, duality and uninorm helpers.

Every operator evaluates vectorized over numpy arrays; calling it with
scalars returns a plain float.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

T_NORM = "t_norm"
T_CONORM = "t_conorm"
UNINORM = "uninorm_generic"

CLAMP_TOL = 1e-9


class ParameterError(ValueError):
    """Family parameter missing, superfluous or outside its admissible range."""


class NumericalError(ArithmeticError):
    """A non-finite or out-of-range intermediate value; indicates a stability bug."""


def as_unit(v, tol: float = CLAMP_TOL):
    """Clamp ``v`` onto [0, 1]; excursions beyond ``tol`` raise ValueError."""
    arr = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite unit value")
    if np.any(arr < -tol) or np.any(arr > 1 + tol):
        raise ValueError(f"value outside [0,1]: {arr.min()!r}..{arr.max()!r}")
    return np.clip(arr, 0.0, 1.0)


def _clamp_result(arr):
    if not np.all(np.isfinite(arr)):
        raise NumericalError("non-finite operator value")
    if np.any(arr < -CLAMP_TOL) or np.any(arr > 1 + CLAMP_TOL):
        raise NumericalError(f"operator value outside [0,1]: {arr.min()!r}..{arr.max()!r}")
    return np.clip(arr, 0.0, 1.0)


def _pin_boundary(out, x, y, e):
    """Make f(e, y) = y and f(z, y) = z (z the annihilator) exact.

    Closed forms can miss these by an ulp, which discontinuous partners
    such as the drastic or nilpotent operators then amplify into O(1) jumps.
    """
    z = 1.0 - e
    out = np.where(x == e, y, out)
    out = np.where(y == e, x, out)
    return np.where((x == z) | (y == z), z, out)


@dataclass(frozen=True)
class Operator:
    """An immutable binary operation on [0,1]^2.

    ``rule`` is the raw vectorized map; calls go through clamping and the
    finiteness check.  ``provenance`` is one of
    ``("closed_form",)``, ``("dual_of", base, negation_or_None)``,
    ``("ordinal_sum", summands)`` or ``("generator", generator)``.
    """

    kind: str
    rule: Callable = field(repr=False, compare=False)
    identity: float
    family: Optional[str] = None
    alpha: Optional[float] = None
    provenance: tuple = ("closed_form",)
    label: str = ""

    def __call__(self, x, y):
        x = as_unit(x)
        y = as_unit(y)
        with np.errstate(all="ignore"):
            out = self.rule(x, y)
        out = _clamp_result(np.asarray(out, dtype=float))
        if self.kind in (T_NORM, T_CONORM):
            out = _pin_boundary(out, x, y, self.identity)
        if out.ndim == 0:
            return float(out)
        return out

    def __str__(self):
        return self.label or repr(self)


# ---------------------------------------------------------------------------
# Frank: ln(1 + expm1(xL) expm1(yL) / expm1(L)) / L with L = ln(alpha)


def _frank(x, y, a):
    L = np.log(a)
    return np.log1p(np.expm1(x * L) * np.expm1(y * L) / np.expm1(L)) / L


# T-norms


def _minimum(x, y, a=None):
    return np.minimum(x, y)


def _product(x, y, a=None):
    return x * y


def _lukasiewicz(x, y, a=None):
    return np.maximum(x + y - 1.0, 0.0)


def _drastic(x, y, a=None):
    return np.where(np.maximum(x, y) == 1.0, np.minimum(x, y), 0.0)


def _nilpotent_minimum(x, y, a=None):
    return np.where(x + y > 1.0, np.minimum(x, y), 0.0)


def _dubois_prade(x, y, a):
    # xy / max(x, y) is min(x, y); take it exactly
    m = np.maximum(np.maximum(x, y), a)
    safe = np.where(m > 0, m, 1.0)
    return np.where(np.maximum(x, y) >= a, np.minimum(x, y), np.where(m > 0, x * y / safe, 0.0))


def _amh(x, y, a):
    pos = np.maximum(x, y) > 0
    den = a + (1.0 - a) * (x + y - x * y)
    return np.where(pos, x * y / np.where(pos, den, 1.0), 0.0)


def _clayton(x, y, a):
    if a > 0:
        return np.maximum(x**a + y**a - 1.0, 0.0) ** (1.0 / a)
    pos = np.minimum(x, y) > 0
    xs = np.where(pos, x, 1.0)
    ys = np.where(pos, y, 1.0)
    return np.where(pos, (xs**a + ys**a - 1.0) ** (1.0 / a), 0.0)


def _yager(x, y, a):
    return np.maximum(1.0 - ((1.0 - x) ** a + (1.0 - y) ** a) ** (1.0 / a), 0.0)


def _mayor_torrens(x, y, a):
    inside = (x <= a) & (y <= a)
    return np.where(inside, np.maximum(x + y - a, 0.0), np.minimum(x, y))


def _sugeno_weber(x, y, a):
    return np.maximum((x + y - 1.0 + a * x * y) / (1.0 + a), 0.0)


def _gumbel(x, y, a):
    pos = np.minimum(x, y) > 0
    xs = np.where(pos, x, 1.0)
    ys = np.where(pos, y, 1.0)
    t = ((-np.log(xs)) ** a + (-np.log(ys)) ** a) ** (1.0 / a)
    return np.where(pos, np.exp(-t), 0.0)


def _joe(x, y, a):
    u = (1.0 - x) ** a
    v = (1.0 - y) ** a
    return 1.0 - (u + v - u * v) ** (1.0 / a)


# T-conorms, written from their own closed forms rather than as duals


def _maximum(x, y, a=None):
    return np.maximum(x, y)


def _probabilistic_sum(x, y, a=None):
    return x + y - x * y


def _bounded_sum(x, y, a=None):
    return np.minimum(x + y, 1.0)


def _drastic_maximum(x, y, a=None):
    return np.where(np.minimum(x, y) == 0.0, np.maximum(x, y), 1.0)


def _nilpotent_maximum(x, y, a=None):
    return np.where(x + y < 1.0, np.maximum(x, y), 1.0)


def _dubois_prade_conorm(x, y, a):
    den = 1.0 - np.minimum(np.minimum(x, y), 1.0 - a)
    ok = den > 0
    out = np.where(ok, 1.0 - (1.0 - x) * (1.0 - y) / np.where(ok, den, 1.0), 1.0)
    return np.where(np.minimum(x, y) <= 1.0 - a, np.maximum(x, y), out)


def _amh_conorm(x, y, a):
    ok = np.minimum(x, y) < 1.0
    den = 1.0 + (a - 1.0) * x * y
    return np.where(ok, (x + y + (a - 2.0) * x * y) / np.where(ok, den, 1.0), 1.0)


def _clayton_conorm(x, y, a):
    u = 1.0 - x
    v = 1.0 - y
    if a > 0:
        return 1.0 - np.maximum(u**a + v**a - 1.0, 0.0) ** (1.0 / a)
    ok = np.maximum(x, y) < 1.0
    us = np.where(ok, u, 1.0)
    vs = np.where(ok, v, 1.0)
    return np.where(ok, 1.0 - (us**a + vs**a - 1.0) ** (1.0 / a), 1.0)


def _frank_conorm(x, y, a):
    return 1.0 - _frank(1.0 - x, 1.0 - y, a)


def _yager_conorm(x, y, a):
    return np.minimum((x**a + y**a) ** (1.0 / a), 1.0)


def _mayor_torrens_conorm(x, y, a):
    inside = (x >= 1.0 - a) & (y >= 1.0 - a)
    return np.where(inside, np.minimum(x + y + a - 1.0, 1.0), np.maximum(x, y))


def _sugeno_weber_conorm(x, y, a):
    return np.minimum(x + y - a / (1.0 + a) * x * y, 1.0)


def _gumbel_conorm(x, y, a):
    ok = np.maximum(x, y) < 1.0
    xs = np.where(ok, x, 0.0)
    ys = np.where(ok, y, 0.0)
    t = ((-np.log1p(-xs)) ** a + (-np.log1p(-ys)) ** a) ** (1.0 / a)
    return np.where(ok, -np.expm1(-t), 1.0)


def _joe_conorm(x, y, a):
    u = x**a
    v = y**a
    return (u + v - u * v) ** (1.0 / a)


# ---------------------------------------------------------------------------
# parameter domains


def _unit_interval(a):
    return 0.0 <= a <= 1.0


def _amh_range(a):
    return 0.0 <= a <= 2.0


def _clayton_range(a):
    return a != 0.0 and a <= 1.0


def _frank_range(a):
    return 0.0 < a and a != 1.0


def _at_least_one(a):
    return a >= 1.0


def _nonnegative(a):
    return a >= 0.0


@dataclass(frozen=True)
class Family:
    """One row pair of the catalog: a T-norm and its dual T-conorm."""

    name: str
    symbol: str
    norm_rule: Callable = field(repr=False)
    conorm_rule: Callable = field(repr=False)
    conorm_name: str = ""
    param_range: Optional[Callable[[float], bool]] = field(default=None, repr=False)
    range_text: str = ""
    property_a: bool = True
    property_b: bool = True

    @property
    def parametric(self) -> bool:
        return self.param_range is not None


FAMILIES: dict[str, Family] = {
    f.name: f
    for f in [
        Family("minimum", "T_m", _minimum, _maximum, "maximum"),
        Family("product", "T_p", _product, _probabilistic_sum, "probabilistic_sum"),
        Family("lukasiewicz", "T_L", _lukasiewicz, _bounded_sum, "bounded_sum"),
        Family("drastic", "T_d", _drastic, _drastic_maximum, "drastic_maximum",
               property_a=False, property_b=False),
        Family("nilpotent_minimum", "T_n", _nilpotent_minimum, _nilpotent_maximum,
               "nilpotent_maximum", property_b=False),
        Family("dubois_prade", "T_DP", _dubois_prade, _dubois_prade_conorm,
               param_range=_unit_interval, range_text="alpha in [0,1]"),
        Family("ali_mikhail_haq", "T_AMH", _amh, _amh_conorm,
               param_range=_amh_range, range_text="alpha in [0,2]"),
        Family("clayton", "T_C", _clayton, _clayton_conorm,
               param_range=_clayton_range, range_text="alpha <= 1, alpha != 0"),
        Family("frank", "T_F", _frank, _frank_conorm,
               param_range=_frank_range, range_text="alpha > 0, alpha != 1"),
        Family("yager", "T_Y", _yager, _yager_conorm,
               param_range=_at_least_one, range_text="alpha >= 1"),
        Family("mayor_torrens", "T_MT", _mayor_torrens, _mayor_torrens_conorm,
               param_range=_unit_interval, range_text="alpha in [0,1]"),
        Family("sugeno_weber", "T_SW", _sugeno_weber, _sugeno_weber_conorm,
               param_range=_nonnegative, range_text="alpha >= 0"),
        Family("gumbel", "T_G", _gumbel, _gumbel_conorm,
               param_range=_at_least_one, range_text="alpha >= 1"),
        Family("joe", "T_J", _joe, _joe_conorm,
               param_range=_at_least_one, range_text="alpha >= 1"),
    ]
}

# Conorm identifiers: "<family>_conorm" always works; the classic names too.
CONORM_ALIASES: dict[str, str] = {}
for _f in FAMILIES.values():
    CONORM_ALIASES[_f.name + "_conorm"] = _f.name
    if _f.conorm_name:
        CONORM_ALIASES[_f.conorm_name] = _f.name

# Parameter samples used by the test suites and table reproduction.
PARAMETER_SAMPLES: dict[str, tuple] = {
    "dubois_prade": (0.25, 0.5, 0.75),
    "mayor_torrens": (0.25, 0.5, 0.75),
    "ali_mikhail_haq": (0.5, 1.5),
    "clayton": (-1.0, 0.5, 1.0),
    "frank": (0.5, 2.0, 10.0),
    "yager": (1.0, 2.0, 5.0),
    "gumbel": (1.0, 2.0, 5.0),
    "joe": (1.0, 2.0, 5.0),
    "sugeno_weber": (0.0, 1.0, 5.0),
}


def family_ids() -> list[str]:
    """All 28 catalog identifiers: 14 norms followed by 14 conorms."""
    return list(FAMILIES) + [f.name + "_conorm" for f in FAMILIES.values()]


def resolve_family(family_id: str) -> tuple[Family, str]:
    """Map an identifier to ``(Family, kind)``."""
    key = family_id.strip().lower()
    if key in FAMILIES:
        return FAMILIES[key], T_NORM
    if key in CONORM_ALIASES:
        return FAMILIES[CONORM_ALIASES[key]], T_CONORM
    raise KeyError(f"unknown family {family_id!r}")


def samples_for(family_id: str) -> tuple:
    fam, _ = resolve_family(family_id)
    return PARAMETER_SAMPLES.get(fam.name, (None,))


def check_parameter(fam: Family, alpha) -> Optional[float]:
    if not fam.parametric:
        if alpha is not None:
            raise ParameterError(f"{fam.name} takes no parameter")
        return None
    if alpha is None:
        raise ParameterError(f"{fam.name} requires a parameter ({fam.range_text})")
    alpha = float(alpha)
    if not np.isfinite(alpha) or not fam.param_range(alpha):
        raise ParameterError(f"{fam.name}: alpha={alpha!r} outside {fam.range_text}")
    return alpha


def _fmt_alpha(a: float) -> str:
    return repr(float(a))


def make_operator(family: str, alpha: Optional[float] = None) -> Operator:
    """Build the catalog operator ``family`` (norm or conorm id) at ``alpha``."""
    fam, kind = resolve_family(family)
    alpha = check_parameter(fam, alpha)
    base = fam.norm_rule if kind == T_NORM else fam.conorm_rule
    rule = base if alpha is None else _bind(base, alpha)
    name = fam.name if kind == T_NORM else fam.name + "_conorm"
    label = name if alpha is None else f"{name}:{_fmt_alpha(alpha)}"
    return Operator(
        kind=kind,
        rule=rule,
        identity=1.0 if kind == T_NORM else 0.0,
        family=name,
        alpha=alpha,
        label=label,
    )


def _bind(fn, alpha):
    def rule(x, y):
        return fn(x, y, alpha)

    return rule


def eval_op(op: Operator, x, y):
    return op(x, y)


def standard_dual(op: Operator) -> Operator:
    """``1 - op(1-x, 1-y)``; swaps T-norms and T-conorms."""
    inner = op.rule

    def rule(x, y):
        return 1.0 - inner(1.0 - x, 1.0 - y)

    return Operator(
        kind=_flip(op.kind),
        rule=rule,
        identity=1.0 - op.identity,
        provenance=("dual_of", op, None),
        label=f"dual({op.label})",
    )


def dual_under(op: Operator, neg) -> Operator:
    """Dual of ``op`` under a strong negation: ``neg(op(neg x, neg y))``."""
    if not neg.strong:
        raise ValueError("dual_under requires a strong negation")
    inner = op.rule
    n = neg.rule

    def rule(x, y):
        return n(np.clip(inner(n(x), n(y)), 0.0, 1.0))

    return Operator(
        kind=_flip(op.kind),
        rule=rule,
        identity=float(neg(op.identity)),
        provenance=("dual_of", op, neg),
        label=f"dual_under({op.label}, {neg.label})",
    )


def _flip(kind: str) -> str:
    return {T_NORM: T_CONORM, T_CONORM: T_NORM}.get(kind, kind)


def uninorm(rule: Callable, identity: float, label: str = "uninorm") -> Operator:
    """Wrap an arbitrary vectorized map as a generic uninorm descriptor."""
    return Operator(kind=UNINORM, rule=rule, identity=float(identity), label=label)


def classify_uninorm(op: Operator, tol: float = CLAMP_TOL) -> str:
    """'conjunctive' if 0 (x) 1 = 0, 'disjunctive' if it is 1."""
    with np.errstate(all="ignore"):
        v = float(np.asarray(op.rule(np.float64(0.0), np.float64(1.0))))
    if abs(v) <= tol:
        return "conjunctive"
    if abs(v - 1.0) <= tol:
        return "disjunctive"
    raise ValueError(f"{op.label}: 0 (x) 1 = {v!r} is neither 0 nor 1; not a uninorm")
