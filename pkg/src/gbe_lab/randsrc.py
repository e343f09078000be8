"""Reproducible sampling primitives and exact moments of the entry laws.

All randomness flows through :class:`RngStream`, a counter-based (Philox)
generator keyed by ``(seed, stream_id)``.  Replicate ``k`` of an experiment
owns stream ``k``, so any single replicate can be regenerated without
replaying the ones before it, and distinct streams are independent.

The gamma sampler is the Marsaglia-Tsang squeeze/rejection method.  Shapes
below one are boosted through ``Gamma(a) = Gamma(a+1) * U**(1/a)``; this
matters because in the ``n*beta -> 2*alpha`` regime the shape ``beta/2`` is
routinely far below one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "RngStream",
    "GammaParams",
    "sample_gaussian",
    "sample_gamma",
    "sample_gamma_array",
    "sample_chi_tilde",
    "sample_chi_tilde_array",
    "sample_dirichlet",
    "gamma_moment_exact",
    "gaussian_moment_exact",
]

_U64 = 2**64


@dataclass
class RngStream:
    """Counter-based random stream keyed by ``(seed, stream_id)``.

    Recreating a stream with the same key replays the identical draw
    sequence.  Drawing advances internal state, so share a stream only
    within a single consumer at a time.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        if not 0 <= int(self.seed) < _U64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if not 0 <= int(self.stream_id) < _U64:
            raise ValueError("stream_id must be an unsigned 64-bit integer")
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        self._gen = np.random.Generator(np.random.Philox(key=key))

    @property
    def generator(self) -> np.random.Generator:
        return self._gen


@dataclass(frozen=True)
class GammaParams:
    """Gamma distribution with unit scale; ``shape`` is any positive rational."""

    shape: Fraction

    def __post_init__(self):
        object.__setattr__(self, "shape", Fraction(self.shape))
        if self.shape <= 0:
            raise ValueError("gamma shape must be positive")


def sample_gaussian(stream: RngStream) -> float:
    """One standard normal draw."""
    return float(stream.generator.standard_normal())


def _gamma_mt(shapes: np.ndarray, gen: np.random.Generator) -> np.ndarray:
    """Marsaglia-Tsang rejection kernel; every entry of `shapes` must be >= 1."""
    d = shapes - 1.0 / 3.0
    c = 1.0 / np.sqrt(9.0 * d)
    out = np.empty_like(d)
    todo = np.arange(d.shape[0])
    while todo.size:
        x = gen.standard_normal(todo.size)
        v = (1.0 + c[todo] * x) ** 3
        u = gen.random(todo.size)
        pos = v > 0.0
        logv = np.log(np.where(pos, v, 1.0))
        accept = pos & (
            (u < 1.0 - 0.0331 * x**4)
            | (np.log(u) < 0.5 * x * x + d[todo] * (1.0 - v + logv))
        )
        hit = todo[accept]
        out[hit] = d[hit] * v[accept]
        todo = todo[~accept]
    return out


def sample_gamma_array(shapes, stream: RngStream) -> np.ndarray:
    """Vector of Gamma(shape, 1) draws, one per entry of `shapes`."""
    a = np.asarray(shapes, dtype=np.float64)
    if a.ndim != 1:
        raise ValueError("shapes must be one-dimensional")
    if a.size and not np.all(a > 0.0):
        raise ValueError("gamma shape must be positive")
    small = a < 1.0
    draws = _gamma_mt(np.where(small, a + 1.0, a), stream.generator)
    if small.any():
        u = stream.generator.random(int(small.sum()))
        draws[small] *= u ** (1.0 / a[small])
    return draws


def sample_gamma(p: GammaParams, stream: RngStream) -> float:
    """One Gamma(p.shape, 1) draw."""
    return float(sample_gamma_array([float(p.shape)], stream)[0])


def sample_chi_tilde_array(ks, stream: RngStream) -> np.ndarray:
    """Vector of draws of sqrt(Gamma(k/2, 1)), one per entry of `ks`."""
    k = np.asarray(ks, dtype=np.float64)
    if k.size and not np.all(k > 0.0):
        raise ValueError("chi-tilde parameter must be positive")
    return np.sqrt(sample_gamma_array(k / 2.0, stream))


def sample_chi_tilde(k: float, stream: RngStream) -> float:
    """One draw of the square root of Gamma(k/2, 1)."""
    return float(sample_chi_tilde_array([k], stream)[0])


def sample_dirichlet(n: int, conc: float, stream: RngStream) -> np.ndarray:
    """Symmetric Dirichlet(conc, ..., conc) weight vector of length `n`.

    Realized as normalized gamma draws.  For very small concentrations the
    draws underflow float64, so that branch normalizes in log space.
    """
    if n < 1:
        raise ValueError("need at least one weight")
    if conc <= 0.0:
        raise ValueError("concentration must be positive")
    if conc >= 0.1:
        g = sample_gamma_array(np.full(n, conc), stream)
        total = g.sum()
        if total > 0.0:
            return g / total
    # log-space route: log Gamma(a) = log Gamma(a+1) + log(U)/a
    boosted = _gamma_mt(np.full(n, conc + 1.0), stream.generator)
    logs = np.log(boosted) + np.log(stream.generator.random(n)) / conc
    logs -= logs.max()
    w = np.exp(logs)
    return w / w.sum()


def gamma_moment_exact(shape, k: int) -> Fraction:
    """E[X^k] for X ~ Gamma(shape, 1): the rising factorial of `shape`."""
    if k < 0:
        raise ValueError("moment order must be nonnegative")
    s = Fraction(shape)
    out = Fraction(1)
    for t in range(k):
        out *= s + t
    return out


def gaussian_moment_exact(r: int) -> int:
    """E[Z^r] for standard normal Z: zero for odd r, (r-1)!! for even r."""
    if r < 0:
        raise ValueError("moment order must be nonnegative")
    if r % 2 == 1:
        return 0
    out = 1
    for t in range(1, r, 2):
        out *= t
    return out
