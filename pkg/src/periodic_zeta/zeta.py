"""Ihara zeta function of a periodic graph: exact series and numeric determinant.

Inside |u| < 1/q the zeta function is handled as an exact power series,

    log Z(u) = chi(B) log(1 - u^2) + sum_k Tr(T^k) / k,   T = uA - q u^2,

where Tr is the von Neumann trace (identity coefficients of the diagonal).
For real |u| > 1 the determinant of the deformed Laplacian is evaluated
numerically as the character-averaged torus mean of log det M_u(theta).
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from . import series as fps
from .errors import (
    ConvergenceError,
    DomainError,
    IntegralityError,
    UnsupportedPointError,
    ValidationError,
)
from .graph import VoltageGraph, adjacency_matrix
from .group_ring import GroupRingMatrix, character_average

log = logging.getLogger(__name__)

DEFAULT_ORDER = 12
DEFAULT_TOL = 1e-10
DEFAULT_QUAD_CAP = 2**14
MAX_SERIES_ORDER = 400


# -- exact series ------------------------------------------------------------------------


def euler_characteristic(g: VoltageGraph) -> int:
    """chi(B), from |V|(1-q)/2 and from |V| - |E|; the two must agree."""
    closed = Fraction(g.n * (1 - g.q), 2)
    direct = g.n - len(g.edges)
    if closed != direct:
        raise ValidationError(f"{g}: |V|-|E| = {direct} but |V|(1-q)/2 = {closed}")
    return direct


_moment_cache: dict = {}


def trace_moments(A: GroupRingMatrix, N: int) -> list:
    """Tr(A^j) for j = 0..N, exact."""
    moments, power = _moment_cache.get(A, ([A.n], GroupRingMatrix.identity(A.group, A.n)))
    moments = list(moments)
    while len(moments) <= N:
        power = power @ A
        moments.append(power.trace())
    _moment_cache[A] = (tuple(moments), power)
    return moments[: N + 1]


@dataclass(frozen=True)
class ZetaSeries:
    """log Z(u) through u^order, with exact coefficients."""

    order: int
    log_coeffs: tuple

    def rooted_counts(self) -> dict:
        """N_m = m [u^m] log Z; raises IntegralityError unless a non-negative integer."""
        out = {}
        for m in range(1, self.order + 1):
            v = Fraction(self.log_coeffs[m]) * m
            if v.denominator != 1 or v < 0:
                raise IntegralityError(f"N_{m} = {v} is not a non-negative integer")
            out[m] = int(v)
        return out

    def zeta_coeffs(self) -> tuple:
        return fps.exp(self.log_coeffs)

    def truncate(self, order: int) -> "ZetaSeries":
        return ZetaSeries(order, self.log_coeffs[: order + 1])


def log_zeta_from_matrix(A: GroupRingMatrix, q: int, N: int) -> ZetaSeries:
    """Series of log Z for adjacency matrix ``A`` of a (q+1)-regular graph."""
    n = A.n
    chi = Fraction(n * (1 - q), 2)
    mu = trace_moments(A, N)
    chi_part = fps.log_one_minus_power(2, N)
    coeffs = [Fraction(0)] * (N + 1)
    for m in range(1, N + 1):
        c = chi * chi_part[m]
        # T^k = sum_j C(k, j) (uA)^j (-q u^2)^(k-j) contributes at u^(2k - j)
        for k in range((m + 1) // 2, m + 1):
            j = 2 * k - m
            c += Fraction(comb(k, j) * (-q) ** (k - j) * mu[j], k)
        coeffs[m] = c
    return ZetaSeries(N, tuple(fps._norm(c) for c in coeffs))


def log_zeta_series(g: VoltageGraph, N: int = DEFAULT_ORDER) -> ZetaSeries:
    if N < 1:
        raise ValueError("order must be positive")
    euler_characteristic(g)
    return log_zeta_from_matrix(adjacency_matrix(g), g.q, N)


def pl_from_series(s: ZetaSeries) -> dict:
    """PL(n) = (1/n) sum_{d | n} mu(n/d) N_d."""
    counts = s.rooted_counts()
    out = {}
    for n in range(1, s.order + 1):
        total = fps.mobius_invert(counts, n)
        if total % n or total < 0:
            raise IntegralityError(f"PL({n}) = {Fraction(total, n)} is not a non-negative integer")
        out[n] = total // n
    return out


def pl_by_peeling(s: ZetaSeries) -> dict:
    """Recover PL by stripping Euler factors from the bottom up.

    After removing all factors of length < l, the remainder is
    1 + PL(l) u^l + O(u^(l+1)).
    """
    rest = list(s.zeta_coeffs())
    N = s.order
    out = {}
    for ell in range(1, N + 1):
        k = Fraction(rest[ell])
        if k.denominator != 1 or k < 0:
            raise IntegralityError(f"coefficient {k} at u^{ell} is not a non-negative integer")
        k = int(k)
        out[ell] = k
        if k:
            factor = [0] * (N + 1)
            for j in range(0, N // ell + 1):
                factor[j * ell] = comb(k, j) * (-1) ** j
            rest = list(fps.mul(rest, factor))
    return out


def zeta_series_from_pl(pl: dict, N: int) -> ZetaSeries:
    """Euler product prod (1 - u^l)^(-PL(l)), as a log series."""
    coeffs = [Fraction(0)] * (N + 1)
    for ell, count in pl.items():
        if count and ell <= N:
            for m, c in enumerate(fps.log_one_minus_power(ell, N)):
                coeffs[m] -= count * c
    return ZetaSeries(N, tuple(fps._norm(c) for c in coeffs))


# -- numeric evaluation ------------------------------------------------------------------


def omega_q_contains(u: complex, q: int, rel_tol: float = 1e-12) -> bool:
    """Membership in the plane minus |u| = 1/sqrt(q) and the segments 1/q <= |x| <= 1."""
    u = complex(u)
    if math.isclose(abs(u) ** 2, 1 / q, rel_tol=rel_tol):
        return False
    if u.imag == 0:
        x = abs(u.real)
        lo, hi = 1 / q, 1.0
        if (lo < x < hi) or math.isclose(x, lo, rel_tol=rel_tol) or math.isclose(x, hi, rel_tol=rel_tol):
            return False
    return True


@dataclass(frozen=True)
class QuadratureEstimate:
    value: float
    nodes: int
    error: float


def _real_point(u) -> float:
    u = complex(u)
    if u.imag != 0:
        raise UnsupportedPointError(f"u = {u} is not real")
    return u.real


def log_det_gamma(
    g: VoltageGraph,
    u: float,
    tol: float = DEFAULT_TOL,
    quad_cap: int = DEFAULT_QUAD_CAP,
    start_nodes: int = 8,
) -> QuadratureEstimate:
    """log Det(I - uA + q u^2) by tensor trapezoid rule with node doubling."""
    u = _real_point(u)
    if not omega_q_contains(u, g.q):
        raise DomainError(f"u = {u} is not in Omega_{g.q}")
    A = adjacency_matrix(g)
    n, q = g.n, g.q
    eye = np.eye(n)

    def integrand(thetas, chars):
        M = (1 + q * u * u) * eye - u * A.evaluate_on_grid(thetas, chars)
        det = np.linalg.det(M)
        if np.any(det.real <= 0):
            raise DomainError(f"det M_u is not positive at u = {u}")
        return np.log(det.real)

    if g.group.free_rank == 0:
        val = character_average(integrand, g.group, 1).real
        return QuadratureEstimate(val, 1, 0.0)
    nodes = start_nodes
    prev = character_average(integrand, g.group, nodes).real
    while True:
        nodes *= 2
        if nodes > quad_cap:
            raise ConvergenceError(f"quadrature did not reach tol {tol} within {quad_cap} nodes per axis")
        cur = character_average(integrand, g.group, nodes).real
        if abs(cur - prev) < tol:
            return QuadratureEstimate(cur, nodes, abs(cur - prev))
        prev = cur


def det_gamma_numeric(g: VoltageGraph, u: float, tol: float = DEFAULT_TOL, quad_cap: int = DEFAULT_QUAD_CAP) -> float:
    return math.exp(log_det_gamma(g, u, tol, quad_cap).value)


def normalized_trace_of_identity(g: VoltageGraph, nodes: int = 16) -> float:
    """Character-averaged quadrature of tr(I); equals |V(B)| under normalised Haar measure."""
    eye = np.eye(g.n)

    def integrand(thetas, chars):
        shape = np.shape(thetas[0]) if thetas else ()
        return np.trace(np.broadcast_to(eye, shape + eye.shape), axis1=-2, axis2=-1)

    return character_average(integrand, g.group, nodes).real


def series_order_for(g: VoltageGraph, u: complex, tol: float) -> int:
    """Smallest order whose log Z tail bound at |u| is below tol.

    Uses N_m <= |V|(q+1)q^(m-1), the count of all non-backtracking walks.
    """
    x = g.q * abs(u)
    if x >= 1:
        raise UnsupportedPointError(f"|u| = {abs(u)} is not inside the disc of radius 1/q")
    const = g.n * (g.q + 1) / g.q / (1 - x)
    for M in range(1, MAX_SERIES_ORDER + 1):
        if const * x ** (M + 1) / (M + 1) < tol:
            return M
    raise ConvergenceError(f"series order above {MAX_SERIES_ORDER} needed at u = {u}")


def tail_bound(g: VoltageGraph, u: complex, M: int) -> float:
    x = g.q * abs(u)
    return g.n * (g.q + 1) / g.q / (1 - x) * x ** (M + 1) / (M + 1)


@dataclass(frozen=True)
class XiValue:
    u: complex
    value: complex
    error: float
    method: str


def _prefactor(g: VoltageGraph, u: complex, with_chi: bool) -> complex:
    chi = euler_characteristic(g)
    out = ((1 - u) * (1 - g.q * u)) ** g.n
    if with_chi:
        out *= (1 - u * u) ** (-chi)
    return out


def xi_eval(
    g: VoltageGraph,
    u: complex,
    tol: float = DEFAULT_TOL,
    quad_cap: int = DEFAULT_QUAD_CAP,
) -> XiValue:
    """The completed zeta function at u; ``error`` is a relative error estimate.

    Supported points: |u| < 1/q (exact series, tail-bounded) and real
    |u| > 1 (numeric determinant).
    """
    u = complex(u)
    if u == 0:
        return XiValue(u, 1 + 0j, 0.0, "series")
    if not omega_q_contains(u, g.q):
        raise UnsupportedPointError(f"u = {u} is not in Omega_{g.q}")
    if abs(u) < 1 / g.q:
        M = series_order_for(g, u, tol)
        s = log_zeta_series(g, M)
        log_z = sum(float(c) * u**m for m, c in enumerate(s.log_coeffs) if c)
        value = _prefactor(g, u, True) * cmath.exp(log_z)
        return XiValue(u, value, math.expm1(tail_bound(g, u, M)), "series")
    if u.imag == 0 and abs(u.real) > 1:
        est = log_det_gamma(g, u.real, tol, quad_cap)
        # (1-u^2)^(-chi) Z(u) = 1 / Det
        value = _prefactor(g, u, False) / math.exp(est.value)
        return XiValue(u, value, math.expm1(est.error), "determinant")
    raise UnsupportedPointError(f"u = {u}: only |u| < 1/q or real |u| > 1 are supported")


@dataclass(frozen=True)
class XiCheck:
    u: float
    xi_u: complex
    xi_dual: complex
    residual: float
    error: float


def functional_equation_residual(
    g: VoltageGraph, u: float, tol: float = DEFAULT_TOL, quad_cap: int = DEFAULT_QUAD_CAP
) -> XiCheck:
    """|xi(u) - xi(1/(qu))| / |xi(u)| for real |u| > 1."""
    u = _real_point(u)
    if not omega_q_contains(u, g.q):
        raise UnsupportedPointError(f"u = {u} is not in Omega_{g.q}")
    if abs(u) <= 1:
        raise UnsupportedPointError(f"functional-equation checks need real |u| > 1, got {u}")
    a = xi_eval(g, u, tol, quad_cap)
    b = xi_eval(g, 1 / (g.q * u), tol, quad_cap)
    residual = abs(a.value - b.value) / abs(a.value)
    return XiCheck(u, a.value, b.value, residual, a.error + b.error)
