"""Reference evaluations written straight from the printed family formulas.

Scalar, 50-digit mpmath, naive forms with the printed case splits.  Shares
no code with the package on purpose.
"""

from fractions import Fraction

import mpmath as mp

mp.mp.dps = 50


def _m(v):
    return mp.mpf(v)


def norm(name, x, y, a=None):
    x, y = _m(x), _m(y)
    a = None if a is None else _m(a)
    if name == "minimum":
        return min(x, y)
    if name == "product":
        return x * y
    if name == "lukasiewicz":
        return max(x + y - 1, 0)
    if name == "drastic":
        return min(x, y) if max(x, y) == 1 else mp.mpf(0)
    if name == "nilpotent_minimum":
        return min(x, y) if x + y > 1 else mp.mpf(0)
    if name == "dubois_prade":
        m = max(x, y, a)
        return x * y / m if m > 0 else mp.mpf(0)
    if name == "ali_mikhail_haq":
        if max(x, y) > 0:
            return x * y / (a + (1 - a) * (x + y - x * y))
        return mp.mpf(0)
    if name == "clayton":
        if a < 0 and min(x, y) == 0:
            return mp.mpf(0)
        return max(x**a + y**a - 1, 0) ** (1 / a)
    if name == "frank":
        return mp.log(1 + (a**x - 1) * (a**y - 1) / (a - 1), a)
    if name == "yager":
        return max(1 - ((1 - x) ** a + (1 - y) ** a) ** (1 / a), 0)
    if name == "mayor_torrens":
        if x <= a and y <= a:
            return max(x + y - a, 0)
        return min(x, y)
    if name == "sugeno_weber":
        return max((x + y - 1 + a * x * y) / (1 + a), 0)
    if name == "gumbel":
        if min(x, y) > 0:
            return mp.e ** (-(((-mp.log(x)) ** a + (-mp.log(y)) ** a) ** (1 / a)))
        return mp.mpf(0)
    if name == "joe":
        u, v = (1 - x) ** a, (1 - y) ** a
        return 1 - (u + v - u * v) ** (1 / a)
    raise KeyError(name)


def conorm(name, x, y, a=None):
    x, y = _m(x), _m(y)
    a = None if a is None else _m(a)
    if name == "minimum":
        return max(x, y)
    if name == "product":
        return x + y - x * y
    if name == "lukasiewicz":
        return min(x + y, 1)
    if name == "drastic":
        return max(x, y) if min(x, y) == 0 else mp.mpf(1)
    if name == "nilpotent_minimum":
        return max(x, y) if x + y < 1 else mp.mpf(1)
    if name == "dubois_prade":
        return 1 - (1 - x) * (1 - y) / (1 - min(x, y, 1 - a)) if min(x, y, 1 - a) < 1 else mp.mpf(1)
    if name == "ali_mikhail_haq":
        if min(x, y) < 1:
            return (x + y + (a - 2) * x * y) / (1 + (a - 1) * x * y)
        return mp.mpf(1)
    if name == "clayton":
        if a < 0 and max(x, y) == 1:
            return mp.mpf(1)
        return 1 - max((1 - x) ** a + (1 - y) ** a - 1, 0) ** (1 / a)
    if name == "frank":
        return 1 - mp.log(1 + (a ** (1 - x) - 1) * (a ** (1 - y) - 1) / (a - 1), a)
    if name == "yager":
        return min((x**a + y**a) ** (1 / a), 1)
    if name == "mayor_torrens":
        if x >= 1 - a and y >= 1 - a:
            return min(x + y + a - 1, 1)
        return max(x, y)
    if name == "sugeno_weber":
        return min(x + y - a / (1 + a) * x * y, 1)
    if name == "gumbel":
        if max(x, y) < 1:
            return 1 - mp.e ** (-(((-mp.log(1 - x)) ** a + (-mp.log(1 - y)) ** a) ** (1 / a)))
        return mp.mpf(1)
    if name == "joe":
        u, v = x**a, y**a
        return (u + v - u * v) ** (1 / a)
    raise KeyError(name)


# exact rational versions of the discontinuous operators, for tie analysis

def q_nilpotent_min(x, y):
    return min(x, y) if x + y > 1 else Fraction(0)


def q_nilpotent_max(x, y):
    return max(x, y) if x + y < 1 else Fraction(1)


def q_bounded_sum(x, y):
    return min(x + y, Fraction(1))


def q_drastic(x, y):
    return min(x, y) if max(x, y) == 1 else Fraction(0)
