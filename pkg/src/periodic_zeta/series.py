"""Truncated formal power series with exact rational coefficients.

A series is a tuple ``(c_0, ..., c_N)``; all operations truncate at the
shorter operand's order.
"""

from fractions import Fraction

from sympy import divisors, mobius


def _norm(c):
    return c.numerator if isinstance(c, Fraction) and c.denominator == 1 else c


def mul(a, b):
    n = min(len(a), len(b))
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j in range(n - i):
                out[i + j] += x * b[j]
    return tuple(_norm(c) for c in out)


def exp(g):
    """exp of a series with zero constant term."""
    if g and g[0] != 0:
        raise ValueError("exp needs a zero constant term")
    n = len(g)
    f = [Fraction(0)] * n
    if n:
        f[0] = Fraction(1)
    for m in range(1, n):
        f[m] = sum((k * g[k] * f[m - k] for k in range(1, m + 1)), Fraction(0)) / m
    return tuple(_norm(c) for c in f)


def log(f):
    """log of a series with constant term 1."""
    if not f or f[0] != 1:
        raise ValueError("log needs constant term 1")
    n = len(f)
    g = [Fraction(0)] * n
    for m in range(1, n):
        g[m] = f[m] - sum((k * g[k] * f[m - k] for k in range(1, m)), Fraction(0)) / m
    return tuple(_norm(c) for c in g)


def log_one_minus_power(ell, order):
    """Coefficients of log(1 - u^ell) through u^order."""
    out = [0] * (order + 1)
    for k in range(1, order // ell + 1):
        out[k * ell] = Fraction(-1, k)
    return tuple(_norm(c) for c in out)


def evaluate(coeffs, u):
    total = 0
    for c in reversed(coeffs):
        total = total * u + float(c)
    return total


def mobius_invert(values: dict, n: int):
    """Recover f(n) from F(m) = sum_{d | m} f(d):  f(n) = sum_{d | n} mu(n/d) F(d)."""
    return sum(int(mobius(n // d)) * values.get(d, 0) for d in divisors(n))
