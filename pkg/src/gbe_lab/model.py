"""The tridiagonal matrix model and its spectral samples.

``build_gbe`` draws the n x n symmetric tridiagonal matrix whose
eigenvalues follow the Gaussian beta ensemble: Gaussian diagonal and
chi-type off-diagonal, all scaled by sqrt(2/(n*beta)).  Deterministic
reference matrices (free Jacobi) and truncations of the fixed-coupling
limit matrix are built alongside.

Spectral-measure weights are never computed from eigenvectors: the
weights are Dirichlet(beta/2, ..., beta/2) independent of the
eigenvalues, so they are drawn directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .randsrc import RngStream, sample_chi_tilde_array, sample_dirichlet, sample_gamma_array

__all__ = [
    "TridiagonalMatrix",
    "SpectralSample",
    "build_gbe",
    "free_jacobi",
    "build_j_alpha_truncation",
    "spectral_sample",
    "dump_matrix",
    "load_matrix",
]


@dataclass(frozen=True, eq=False)
class TridiagonalMatrix:
    """Symmetric tridiagonal matrix with (n, beta) metadata.

    `beta` is 0 only for matrices that are not beta-ensemble samples:
    deterministic references (flagged) and truncations of the
    fixed-coupling limit matrix (which carry `alpha` instead).
    Arrays are frozen after construction and safe to share.
    """

    n: int
    beta: float
    diag: np.ndarray
    offdiag: np.ndarray
    deterministic: bool = False
    alpha: float | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("matrix dimension must be at least 1")
        object.__setattr__(self, "diag", np.asarray(self.diag, dtype=np.float64))
        object.__setattr__(self, "offdiag", np.asarray(self.offdiag, dtype=np.float64))
        if self.diag.shape != (self.n,):
            raise ValueError("diag must have length n")
        if self.offdiag.shape != (self.n - 1,):
            raise ValueError("offdiag must have length n - 1")
        if self.n > 1 and np.any(self.offdiag < 0.0):
            raise ValueError("off-diagonal entries must be nonnegative")
        if self.beta <= 0.0 and not (self.deterministic or self.alpha is not None):
            raise ValueError("beta must be positive for sampled matrices")
        self.diag.setflags(write=False)
        self.offdiag.setflags(write=False)

    def dense(self) -> np.ndarray:
        """Dense copy, for small-n oracles."""
        A = np.diag(self.diag)
        if self.n > 1:
            A += np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)
        return A


@dataclass(frozen=True, eq=False)
class SpectralSample:
    """Eigenvalues with optional spectral-measure weights.

    With weights this represents the spectral measure at the first
    coordinate; without, the empirical distribution (uniform 1/n).
    """

    eigenvalues: np.ndarray
    weights: np.ndarray | None
    n: int
    beta: float
    seed: int | None = None
    stream_id: int | None = None

    def __post_init__(self):
        vals = np.asarray(self.eigenvalues, dtype=np.float64)
        if np.any(np.diff(vals) < 0.0):
            raise ValueError("eigenvalues must be ascending")
        object.__setattr__(self, "eigenvalues", vals)
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=np.float64)
            if w.shape != vals.shape:
                raise ValueError("weights must match eigenvalues in length")
            if abs(float(w.sum()) - 1.0) > 1e-10:
                raise ValueError("weights must sum to one")
            object.__setattr__(self, "weights", w)
            w.setflags(write=False)
        vals.setflags(write=False)

    def moment(self, r: int) -> float:
        """r-th moment of the represented measure."""
        powers = self.eigenvalues**r
        if self.weights is None:
            return float(powers.mean())
        return float(np.dot(self.weights, powers))


def build_gbe(n: int, beta: float, stream: RngStream) -> TridiagonalMatrix:
    """Sample the beta-ensemble tridiagonal matrix.

    Diagonal entries are sqrt(2/(n*beta)) * N(0,1); off-diagonal entry i
    is sqrt(2/(n*beta)) times the square root of Gamma((n-i)*beta/2, 1).
    Diagonal draws come first, then the off-diagonal, so the stream layout
    is stable.
    """
    if n < 1:
        raise ValueError("matrix dimension must be at least 1")
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    scale = math.sqrt(2.0 / (n * beta))
    diag = scale * stream.generator.standard_normal(n)
    if n > 1:
        ks = (n - np.arange(1, n, dtype=np.float64)) * beta
        offdiag = scale * sample_chi_tilde_array(ks, stream)
    else:
        offdiag = np.empty(0)
    return TridiagonalMatrix(n=n, beta=float(beta), diag=diag, offdiag=offdiag)


def free_jacobi(n: int) -> TridiagonalMatrix:
    """Deterministic reference matrix: zero diagonal, unit off-diagonal."""
    if n < 1:
        raise ValueError("matrix dimension must be at least 1")
    return TridiagonalMatrix(
        n=n,
        beta=0.0,
        diag=np.zeros(n),
        offdiag=np.ones(max(n - 1, 0)),
        deterministic=True,
    )


def build_j_alpha_truncation(n: int, alpha: float, stream: RngStream) -> TridiagonalMatrix:
    """Top-left n x n block of the fixed-coupling limit matrix.

    Diagonal N(0,1)/sqrt(alpha) i.i.d.; off-diagonal i.i.d. draws of
    sqrt(Gamma(alpha, 1))/sqrt(alpha).
    """
    if n < 1:
        raise ValueError("matrix dimension must be at least 1")
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    inv = 1.0 / math.sqrt(alpha)
    diag = inv * stream.generator.standard_normal(n)
    if n > 1:
        offdiag = inv * np.sqrt(sample_gamma_array(np.full(n - 1, alpha), stream))
    else:
        offdiag = np.empty(0)
    return TridiagonalMatrix(
        n=n, beta=0.0, diag=diag, offdiag=offdiag, alpha=float(alpha)
    )


def spectral_sample(
    T: TridiagonalMatrix, with_weights: bool = False, stream: RngStream | None = None
) -> SpectralSample:
    """Eigenvalues of `T`, with spectral-measure weights when requested.

    Weights are drawn as Dirichlet(beta/2, ..., beta/2) independently of
    the eigenvalues, which is exactly their law for beta-ensemble samples;
    no eigenvectors are ever computed.
    """
    from .tridiag_eig import eigenvalues

    if with_weights:
        if T.beta <= 0.0 or T.deterministic:
            raise ValueError("spectral weights require a beta-ensemble sample")
        if stream is None:
            raise ValueError("spectral weights require a random stream")
    result = eigenvalues(T)
    weights = None
    if with_weights:
        weights = sample_dirichlet(T.n, T.beta / 2.0, stream)
    return SpectralSample(
        eigenvalues=result.values,
        weights=weights,
        n=T.n,
        beta=T.beta,
        seed=stream.seed if stream is not None else None,
        stream_id=stream.stream_id if stream is not None else None,
    )


def dump_matrix(T: TridiagonalMatrix) -> str:
    """Plain-text dump: line 1 "n beta", line 2 diagonal, line 3 off-diagonal.

    Entries carry 17 significant digits, enough to round-trip float64.
    """
    lines = [
        f"{T.n} {T.beta:.17g}",
        " ".join(f"{x:.17g}" for x in T.diag),
        " ".join(f"{x:.17g}" for x in T.offdiag),
    ]
    return "\n".join(lines) + "\n"


def load_matrix(text: str) -> TridiagonalMatrix:
    """Inverse of :func:`dump_matrix`; beta == 0 loads as deterministic."""
    lines = text.strip("\n").split("\n")
    if len(lines) < 2:
        raise ValueError("matrix dump needs at least two lines")
    head = lines[0].split()
    n = int(head[0])
    beta = float(head[1])
    diag = np.array([float(x) for x in lines[1].split()])
    off_text = lines[2].split() if len(lines) > 2 else []
    offdiag = np.array([float(x) for x in off_text])
    return TridiagonalMatrix(
        n=n, beta=beta, diag=diag, offdiag=offdiag, deterministic=(beta == 0.0)
    )
