"""Closed-path and Motzkin-path combinatorics.

Traces of powers of a tridiagonal matrix expand over closed nearest-
neighbour paths; spectral-measure moments use the subset that never dips
below the start level (Motzkin paths).  Each path contributes the product
of matrix entries it steps on, which factorizes per site into
``a_i**alpha_i * b_i**(2*gamma_i)`` with `alpha_i` flat-step counts and
`gamma_i` up-step counts -- the exponent profile that drives every exact
expectation downstream.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "ClosedPath",
    "ExponentProfile",
    "AdmissibleWindow",
    "enumerate_closed",
    "enumerate_motzkin",
    "exponent_profile",
    "admissible_window",
    "path_weight",
]

ENUMERATION_CAP = 16


@dataclass(frozen=True)
class ClosedPath:
    """A step sequence over {-1, 0, +1} summing to zero."""

    steps: tuple[int, ...]

    def __post_init__(self):
        if any(s not in (-1, 0, 1) for s in self.steps):
            raise ValueError("steps must lie in {-1, 0, +1}")
        if sum(self.steps) != 0:
            raise ValueError("path must return to its start level")

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def levels(self) -> tuple[int, ...]:
        """Prefix sums i_0 = 0, ..., i_r = 0."""
        return tuple(itertools.accumulate(self.steps, initial=0))

    @property
    def i_min(self) -> int:
        return min(self.levels)

    @property
    def i_max(self) -> int:
        return max(self.levels)

    @property
    def is_motzkin(self) -> bool:
        return self.i_min >= 0


@dataclass(frozen=True)
class ExponentProfile:
    """Per-site flat-step counts (alpha) and up-step counts (gamma).

    Sites are levels relative to the path start; for a path started at
    matrix index j, relative site v touches entries a_{j+v} and b_{j+v}.
    """

    alpha: dict[int, int]
    gamma: dict[int, int]

    def active_sites(self) -> tuple[int, ...]:
        """Relative sites with a nonzero exponent, ascending."""
        return tuple(sorted(set(self.alpha) | set(self.gamma)))

    def total_steps(self) -> int:
        return sum(self.alpha.values()) + 2 * sum(self.gamma.values())


@dataclass(frozen=True)
class AdmissibleWindow:
    """Start offsets: j + path stays inside {1..n} exactly for k1 <= j <= n - k2."""

    k1: int
    k2: int

    def starts(self, n: int) -> range:
        return range(self.k1, n - self.k2 + 1)

    def is_empty(self, n: int) -> bool:
        return n < self.k1 + self.k2

    def contains(self, j: int, n: int) -> bool:
        return self.k1 <= j <= n - self.k2


def _check_cap(r: int):
    if r < 0:
        raise ValueError("path length must be nonnegative")
    if r > ENUMERATION_CAP:
        raise ValueError(
            f"path enumeration is capped at length {ENUMERATION_CAP} (got {r})"
        )


@lru_cache(maxsize=None)
def _enumerate(r: int, lowest: int | None) -> tuple[ClosedPath, ...]:
    out: list[ClosedPath] = []
    steps: list[int] = []

    def rec(level: int, remaining: int):
        if remaining == 0:
            if level == 0:
                out.append(ClosedPath(tuple(steps)))
            return
        for s in (1, 0, -1):
            nl = level + s
            if lowest is not None and nl < lowest:
                continue
            if abs(nl) > remaining - 1:
                continue
            steps.append(s)
            rec(nl, remaining - 1)
            steps.pop()

    rec(0, r)
    return tuple(out)


def enumerate_closed(r: int) -> tuple[ClosedPath, ...]:
    """All closed paths of length r starting (and ending) at level zero."""
    _check_cap(r)
    return _enumerate(r, None)


def enumerate_motzkin(r: int) -> tuple[ClosedPath, ...]:
    """Closed paths of length r that never go below the start level."""
    _check_cap(r)
    return _enumerate(r, 0)


@lru_cache(maxsize=None)
def _profile(steps: tuple[int, ...]) -> ExponentProfile:
    alpha: dict[int, int] = {}
    gamma: dict[int, int] = {}
    level = 0
    for s in steps:
        if s == 0:
            alpha[level] = alpha.get(level, 0) + 1
        elif s == 1:
            gamma[level] = gamma.get(level, 0) + 1
        level += s
    return ExponentProfile(alpha=alpha, gamma=gamma)


def exponent_profile(w: ClosedPath) -> ExponentProfile:
    """Flat-step and up-step counts per relative site.

    Down-steps are not counted separately: a closed path leaves each site
    upward as often as it re-enters from above, so entry b_i appears with
    the even power 2 * gamma_i.
    """
    return _profile(w.steps)


def admissible_window(w: ClosedPath, n: int) -> AdmissibleWindow:
    """Range of start indices keeping the shifted path inside {1..n}."""
    if n < 1:
        raise ValueError("matrix dimension must be at least 1")
    return AdmissibleWindow(k1=1 - w.i_min, k2=w.i_max)


def path_weight(w: ClosedPath, j: int, T) -> float:
    """Product of the entries of `T` along the path started at index j."""
    window = admissible_window(w, T.n)
    if not window.contains(j, T.n):
        raise ValueError(
            f"start {j} is not admissible for this path on a {T.n}-dim matrix"
        )
    prof = exponent_profile(w)
    val = 1.0
    for v, a in prof.alpha.items():
        val *= float(T.diag[j + v - 1]) ** a
    for v, g in prof.gamma.items():
        val *= float(T.offdiag[j + v - 1]) ** (2 * g)
    return val
