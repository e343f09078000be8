"""Exact finite-size moment and variance formulas, plus martingale increments.

Everything here is driven by one fact: the expectation of an entry product
``a_i**alpha * b_i**(2*gamma)`` is an explicit polynomial in u = 1/(n*beta)
and beta.  Summing those entry moments over Motzkin-path exponent profiles
yields the exact spectral-measure moments; combining single and product
moments through the Dirichlet-weight identity gives the exact variance of
empirical linear statistics as a bivariate polynomial.

The variance must factor as sum_{k>=2} beta * l_k(beta) * u^k with
deg l_k <= k - 2.  That structure is asserted, not merely tested: a
violation raises :class:`ExactStructureError` because it can only mean an
engine bug.

The martingale side evaluates the per-path conditional-expectation
increments numerically on a sampled matrix, splitting each path product at
site k into a realized left factor, a centered middle factor, and an exact
expected right factor.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .model import TridiagonalMatrix
from .paths import (
    ClosedPath,
    admissible_window,
    enumerate_closed,
    enumerate_motzkin,
    exponent_profile,
)
from .polynomials import BivarPoly, Polynomial
from .randsrc import gaussian_moment_exact

__all__ = [
    "ExactStructureError",
    "MOMENT_ORDER_CAP",
    "entry_moment",
    "spectral_moment_expected",
    "spectral_moment_product_expected",
    "empirical_moment_expected",
    "moment_of_polynomial",
    "variance_linear_stat",
    "sigma_p_sq",
    "sigma_p_alpha_sq",
    "PoincareRow",
    "PoincareReport",
    "poincare_check",
    "martingale_delta",
    "martingale_increment_Y",
    "path_weight_expected",
]

MOMENT_ORDER_CAP = 16


class ExactStructureError(AssertionError):
    """An exact result violated a structural law it must satisfy."""


# ---------------------------------------------------------------------------
# entry moments
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def entry_moment(site: int, alpha: int, gamma: int) -> BivarPoly:
    """E[a_site**alpha * b_site**(2*gamma)] as a polynomial in (u, b).

    The diagonal entry contributes (alpha-1)!! * (2u)^(alpha/2) for even
    alpha (zero for odd); the squared off-diagonal entry at site i is
    (2u) * Gamma((1/u - i*b)/2, 1) in distribution, whose gamma-th rising
    moment expands into the product of (1 - i*b*u + 2*t*u) factors.
    """
    if site < 1:
        raise ValueError("sites are 1-based")
    if alpha < 0 or gamma < 0:
        raise ValueError("exponents must be nonnegative")
    if alpha % 2 == 1:
        return BivarPoly.zero()
    half = alpha // 2
    out = BivarPoly.monomial(half, 0, gaussian_moment_exact(alpha) * 2**half)
    for t in range(gamma):
        out = out * BivarPoly({(0, 0): 1, (1, 1): -site, (1, 0): 2 * t})
    return out


def _entry_moment_value(site: int, alpha: int, gamma: int, u: float, beta: float) -> float:
    """Float fast path of :func:`entry_moment` at a concrete (u, beta)."""
    if alpha % 2 == 1:
        return 0.0
    val = float(gaussian_moment_exact(alpha)) * (2.0 * u) ** (alpha // 2)
    for t in range(gamma):
        val *= 1.0 - site * beta * u + 2.0 * t * u
    return val


# ---------------------------------------------------------------------------
# spectral-measure moments over Motzkin profiles
# ---------------------------------------------------------------------------

ProfileKey = tuple[tuple[int, ...], tuple[int, ...]]


@lru_cache(maxsize=None)
def _motzkin_profile_counts(r: int) -> tuple[tuple[ProfileKey, int], ...]:
    """Multiplicities of exponent profiles over Motzkin paths of length r.

    Grouping paths by profile collapses the sum dramatically: the entry
    moments depend on the profile only.
    """
    counts: dict[ProfileKey, int] = {}
    for w in enumerate_motzkin(r):
        prof = exponent_profile(w)
        top = w.i_max
        alphas = tuple(prof.alpha.get(v, 0) for v in range(top + 1))
        gammas = tuple(prof.gamma.get(v, 0) for v in range(top + 1))
        key = (alphas, gammas)
        counts[key] = counts.get(key, 0) + 1
    return tuple(sorted(counts.items()))


@lru_cache(maxsize=None)
def _profile_moment(key: ProfileKey) -> BivarPoly:
    """Product of entry moments over one profile; relative site v is matrix site v+1."""
    alphas, gammas = key
    out = BivarPoly.constant(1)
    for v, (a, g) in enumerate(zip(alphas, gammas)):
        if a == 0 and g == 0:
            continue
        if a % 2 == 1:
            return BivarPoly.zero()
        out = out * entry_moment(v + 1, a, g)
    return out


def _check_moment_order(r: int):
    if r < 0:
        raise ValueError("moment order must be nonnegative")
    if r > MOMENT_ORDER_CAP:
        raise ValueError(f"moment order is capped at {MOMENT_ORDER_CAP} (got {r})")


@lru_cache(maxsize=None)
def spectral_moment_expected(r: int) -> BivarPoly:
    """E[<mu_n, x^r>] as a polynomial in (u, b); zero for odd r.

    Valid whenever every Motzkin path of length r fits in the matrix,
    i.e. n >= r//2 + 1; smaller n is out of this engine's domain.
    """
    _check_moment_order(r)
    out = BivarPoly.zero()
    for key, count in _motzkin_profile_counts(r):
        term = _profile_moment(key)
        if not term.is_zero:
            out = out + term * count
    if r % 2 == 1 and not out.is_zero:
        raise ExactStructureError(f"odd moment r={r} did not vanish")
    if out.u_degree() > r // 2:
        raise ExactStructureError(f"moment r={r} exceeds u-degree {r // 2}")
    for ku in range(out.u_degree() + 1):
        if out.beta_degree_of_u(ku) > ku:
            raise ExactStructureError(
                f"moment r={r}: coefficient of u^{ku} exceeds beta-degree {ku}"
            )
    return out


def _merge_profiles(k1: ProfileKey, k2: ProfileKey) -> ProfileKey:
    a1, g1 = k1
    a2, g2 = k2
    L = max(len(a1), len(a2))
    a = tuple((a1[v] if v < len(a1) else 0) + (a2[v] if v < len(a2) else 0) for v in range(L))
    g = tuple((g1[v] if v < len(g1) else 0) + (g2[v] if v < len(g2) else 0) for v in range(L))
    return (a, g)


@lru_cache(maxsize=None)
def spectral_moment_product_expected(r: int, s: int) -> BivarPoly:
    """E[<mu_n, x^r> <mu_n, x^s>] as a polynomial in (u, b).

    The two Motzkin paths read the same matrix entries, so their
    per-site exponents are added before taking the entry expectation.
    """
    _check_moment_order(r)
    _check_moment_order(s)
    if r + s > MOMENT_ORDER_CAP:
        raise ValueError(
            f"combined moment order is capped at {MOMENT_ORDER_CAP} (got {r + s})"
        )
    if r > s:
        return spectral_moment_product_expected(s, r)
    merged: dict[ProfileKey, int] = {}
    for k1, c1 in _motzkin_profile_counts(r):
        for k2, c2 in _motzkin_profile_counts(s):
            key = _merge_profiles(k1, k2)
            merged[key] = merged.get(key, 0) + c1 * c2
    out = BivarPoly.zero()
    for key, count in merged.items():
        term = _profile_moment(key)
        if not term.is_zero:
            out = out + term * count
    if (r + s) % 2 == 1 and not out.is_zero:
        raise ExactStructureError(f"odd product moment (r,s)=({r},{s}) did not vanish")
    for ku in range(out.u_degree() + 1):
        if out.beta_degree_of_u(ku) > ku:
            raise ExactStructureError(
                f"product moment ({r},{s}): u^{ku} part exceeds beta-degree {ku}"
            )
    return out


def empirical_moment_expected(r: int) -> BivarPoly:
    """E[<L_n, x^r>]; equals the spectral moment because E[q_j^2] = 1/n."""
    return spectral_moment_expected(r)


def moment_of_polynomial(p: Polynomial) -> BivarPoly:
    """E[<mu_n, p>] = E[<L_n, p>] as a polynomial in (u, b)."""
    out = BivarPoly.zero()
    for r, c in enumerate(p.coeffs):
        if c != 0:
            out = out + spectral_moment_expected(r) * c
    return out


# ---------------------------------------------------------------------------
# variance of linear statistics
# ---------------------------------------------------------------------------


def variance_linear_stat(p: Polynomial) -> BivarPoly:
    """Exact Var[<L_n, p>] in (u, b).

    Computed as (1 + 2u) * E[<mu,p>^2] - 2u * E[<mu,p^2>] - E[<mu,p>]^2,
    then checked against the mandatory shape: u^0 and u^1 parts vanish,
    every u^k coefficient is divisible by b, and the b-degree of the u^k
    coefficient is at most k - 1.
    """
    m = p.degree
    if m <= 0:
        return BivarPoly.zero()
    if 2 * m > MOMENT_ORDER_CAP:
        raise ValueError(f"polynomial degree is capped at {MOMENT_ORDER_CAP // 2}")
    nz = [(r, c) for r, c in enumerate(p.coeffs) if c != 0]
    A = BivarPoly.zero()
    for r, cr in nz:
        for s, cs in nz:
            A = A + spectral_moment_product_expected(r, s) * (cr * cs)
    B = moment_of_polynomial(p * p)
    mean = moment_of_polynomial(p)
    u = BivarPoly.monomial(1, 0)
    var = A + u * A * 2 - u * B * 2 - mean * mean
    for ku in (0, 1):
        if var.beta_poly_of_u(ku):
            raise ExactStructureError(
                f"variance of {p!r}: u^{ku} part should vanish but is "
                f"{var.beta_poly_of_u(ku)}"
            )
    if var.u_degree() > m + 1:
        raise ExactStructureError(f"variance of {p!r} exceeds u-degree {m + 1}")
    for ku in range(2, var.u_degree() + 1):
        part = var.beta_poly_of_u(ku)
        if 0 in part:
            raise ExactStructureError(
                f"variance of {p!r}: u^{ku} coefficient is not divisible by b"
            )
        if part and max(part) > ku - 1:
            raise ExactStructureError(
                f"variance of {p!r}: u^{ku} part exceeds beta-degree {ku - 1}"
            )
    return var


def _ell_at_zero(var: BivarPoly, k: int):
    """l_k(0): the pure-beta coefficient of u^k in the variance."""
    return var.coefficient(k, 1)


def sigma_p_sq(p: Polynomial) -> Fraction:
    """Limit of n^2 * beta * Var[<L_n, p>] as n*beta grows without bound.

    This is l_{p;2}, which the structure theorem forces to be constant in
    beta; a beta-dependent u^2 part raises :class:`ExactStructureError`.
    """
    var = variance_linear_stat(p)
    part = var.beta_poly_of_u(2)
    if not part:
        return Fraction(0)
    if set(part) != {1}:
        raise ExactStructureError(
            f"sigma^2 of {p!r}: u^2 coefficient {part} is not constant in beta"
        )
    return Fraction(part[1])


def sigma_p_alpha_sq(p: Polynomial, alpha) -> Fraction:
    """Limit of n^2 * beta * Var[<L_n, p>] when n*beta -> 2*alpha.

    Equals sum_{k>=2} l_k(0) / (2*alpha)^(k-2).
    """
    a = Fraction(alpha)
    if a <= 0:
        raise ValueError("alpha must be positive")
    var = variance_linear_stat(p)
    total = Fraction(0)
    for k in range(2, var.u_degree() + 1):
        total += Fraction(_ell_at_zero(var, k)) / (2 * a) ** (k - 2)
    return total


# ---------------------------------------------------------------------------
# Poincare inequality check
# ---------------------------------------------------------------------------


from dataclasses import dataclass


@dataclass(frozen=True)
class PoincareRow:
    n: int
    beta: Fraction
    lhs: Fraction
    rhs: Fraction

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs

    @property
    def margin(self) -> Fraction:
        return self.rhs - self.lhs


@dataclass(frozen=True)
class PoincareReport:
    polynomial: Polynomial
    rows: tuple[PoincareRow, ...]

    @property
    def all_passed(self) -> bool:
        return all(row.passed for row in self.rows)


def _beta_fraction(beta) -> Fraction:
    # decimal-literal semantics for floats: 0.05 means 1/20
    if isinstance(beta, float):
        return Fraction(str(beta))
    return Fraction(beta)


def poincare_check(p: Polynomial, grid) -> PoincareReport:
    """Exact check of n^2 * beta * Var[<L_n, p>] <= 2 * E[<L_n, (p')^2>].

    Both sides are evaluated in rational arithmetic at every (n, beta) in
    `grid`.  A failing row would mean an engine bug, so inspect
    ``report.all_passed``.
    """
    var = variance_linear_stat(p)
    dp2 = moment_of_polynomial(p.derivative() * p.derivative())
    rows = []
    for n, beta in grid:
        b = _beta_fraction(beta)
        if b <= 0:
            raise ValueError("beta must be positive")
        u = Fraction(1, n) / b
        lhs = n * n * b * var.evaluate_exact(u, b)
        rhs = 2 * dp2.evaluate_exact(u, b)
        rows.append(PoincareRow(n=n, beta=b, lhs=lhs, rhs=rhs))
    return PoincareReport(polynomial=p, rows=tuple(rows))


# ---------------------------------------------------------------------------
# martingale increments
# ---------------------------------------------------------------------------


def _require_gbe(T: TridiagonalMatrix):
    if T.beta <= 0.0:
        raise ValueError("martingale increments need a beta-ensemble matrix")


def _delta_unchecked(
    prof, j: int, k: int, T: TridiagonalMatrix, u: float, beta: float
) -> float:
    v0 = k - j
    a_k = prof.alpha.get(v0, 0)
    g_k = prof.gamma.get(v0, 0)
    if a_k == 0 and g_k == 0:
        return 0.0
    center = 1.0
    if a_k:
        center *= float(T.diag[k - 1]) ** a_k
    if g_k:
        center *= float(T.offdiag[k - 1]) ** (2 * g_k)
    center -= _entry_moment_value(k, a_k, g_k, u, beta)
    left = 1.0
    right = 1.0
    for v in prof.alpha.keys() | prof.gamma.keys():
        if v == v0:
            continue
        a = prof.alpha.get(v, 0)
        g = prof.gamma.get(v, 0)
        site = j + v
        if v < v0:
            if a:
                left *= float(T.diag[site - 1]) ** a
            if g:
                left *= float(T.offdiag[site - 1]) ** (2 * g)
        else:
            right *= _entry_moment_value(site, a, g, u, beta)
    return left * center * right


def martingale_delta(w: ClosedPath, j: int, k: int, T: TridiagonalMatrix) -> float:
    """Increment of E[xi_w | F_k] along the entry filtration.

    Equals (realized product over sites < k) * (realized - expected factor
    at site k) * (expected product over sites > k); identically zero when
    the path has no flat step and no up step at site k.
    """
    _require_gbe(T)
    n = T.n
    if not 1 <= k <= n:
        raise ValueError("k must index a matrix site")
    if not admissible_window(w, n).contains(j, n):
        raise ValueError(f"start {j} is not admissible on a {n}-dim matrix")
    u = 1.0 / (n * T.beta)
    return _delta_unchecked(exponent_profile(w), j, k, T, u, T.beta)


def path_weight_expected(w: ClosedPath, j: int, T: TridiagonalMatrix) -> float:
    """E[xi_w] for the shifted path: product of exact entry moments at (u, beta)."""
    _require_gbe(T)
    if not admissible_window(w, T.n).contains(j, T.n):
        raise ValueError(f"start {j} is not admissible on a {T.n}-dim matrix")
    prof = exponent_profile(w)
    u = 1.0 / (T.n * T.beta)
    val = 1.0
    for v in prof.alpha.keys() | prof.gamma.keys():
        val *= _entry_moment_value(
            j + v, prof.alpha.get(v, 0), prof.gamma.get(v, 0), u, T.beta
        )
    return val


def martingale_increment_Y(k: int, p: Polynomial, T: TridiagonalMatrix) -> float:
    """Martingale difference Y_k of the linear statistic sum of p over eigenvalues.

    Sums the per-path increments of every admissible path of length up to
    deg p, weighted by the polynomial coefficients.  Depends only on the
    entries within deg(p)/2 sites of k.
    """
    _require_gbe(T)
    m = p.degree
    if m <= 0:
        return 0.0
    if 2 * m > MOMENT_ORDER_CAP:
        raise ValueError(f"polynomial degree is capped at {MOMENT_ORDER_CAP // 2}")
    n = T.n
    if not 1 <= k <= n:
        raise ValueError("k must index a matrix site")
    u = 1.0 / (n * T.beta)
    beta = T.beta
    total = 0.0
    for r in range(1, m + 1):
        c = p.coefficient(r)
        if c == 0:
            continue
        cf = float(c)
        for w in enumerate_closed(r):
            prof = exponent_profile(w)
            window = admissible_window(w, n)
            for v in prof.active_sites():
                j = k - v
                if window.contains(j, n):
                    total += cf * _delta_unchecked(prof, j, k, T, u, beta)
    return total
