"""Angular closure: velocity bands, Legendre machinery, and flux matrices.

The angular variable mu in [-1, 1] is split into T uniform bands, and the
intensity inside each band is expanded in Legendre polynomials of the local
band coordinate alpha up to degree N.  The resulting first-order system has a
block-diagonal flux matrix whose blocks are shifted/scaled copies of the
standard Legendre advection matrix.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import ConfigError


@dataclass(frozen=True)
class BandMesh:
    """Uniform partition of mu in [-1, 1] into T bands."""

    T: int
    mu_centers: np.ndarray
    delta_mu: float


def build_bands(T: int) -> BandMesh:
    """Band centers mu_j = -1 + (j - 1/2)*dmu with dmu = 2/T."""
    if T < 1:
        raise ConfigError(f"band count T must be a positive integer, got {T}")
    dmu = 2.0 / T
    centers = -1.0 + (np.arange(1, T + 1) - 0.5) * dmu
    return BandMesh(T=T, mu_centers=centers, delta_mu=dmu)


def legendre(k: int, alpha):
    """Legendre polynomial p_k(alpha) via the three-term recurrence."""
    if k < 0:
        raise ConfigError(f"Legendre order must be nonnegative, got {k}")
    alpha = np.asarray(alpha, dtype=float)
    pkm1 = np.ones_like(alpha)
    if k == 0:
        return pkm1 if pkm1.ndim else float(pkm1)
    pk = alpha.copy()
    for m in range(2, k + 1):
        pk, pkm1 = ((2 * m - 1) * alpha * pk - (m - 1) * pkm1) / m, pk
    return pk if pk.ndim else float(pk)


def legendre_table(N: int, alpha: np.ndarray) -> np.ndarray:
    """Values p_k(alpha) for k = 0..N, shape (N+1, len(alpha))."""
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
    out = np.empty((N + 1, alpha.size))
    out[0] = 1.0
    if N >= 1:
        out[1] = alpha
    for k in range(2, N + 1):
        out[k] = ((2 * k - 1) * alpha * out[k - 1] - (k - 1) * out[k - 2]) / k
    return out


def streaming_block(N: int) -> np.ndarray:
    """Tridiagonal Legendre advection matrix of size (N+1, N+1).

    Row l, column k holds the coupling (2k+1)/2 * int alpha p_k p_l dalpha:
    k/(2k-1) on the superdiagonal and (k+1)/(2k+3) on the subdiagonal.
    """
    J = np.zeros((N + 1, N + 1))
    for k in range(1, N + 1):
        J[k - 1, k] = k / (2 * k - 1)       # l = k - 1
    for k in range(0, N):
        J[k + 1, k] = (k + 1) / (2 * k + 3)  # l = k + 1
    return J


@dataclass(frozen=True)
class ClosureSpec:
    """Immutable spectral data for the banded-moment flux matrix.

    All matrices are block diagonal over bands; blocks are stored stacked
    with shape (T, N+1, N+1).  Flat moment ordering is band-major: the
    moment of order k in band j sits at flat index j*(N+1) + k (0-based).
    """

    bands: BandMesh
    N: int
    block_matrices: np.ndarray        # (T, N+1, N+1)
    eigenvalues: np.ndarray           # ((N+1)*T,)
    right_eigvecs: np.ndarray         # (T, N+1, N+1) per-band V
    inverse_eigvecs: np.ndarray       # (T, N+1, N+1) per-band V^-1
    abs_blocks: np.ndarray            # (T, N+1, N+1) per-band |A|
    spectral_radius: float
    # derived index helpers
    zeroth_idx: np.ndarray = field(repr=False, default=None)
    reflect_idx: np.ndarray = field(repr=False, default=None)
    reflect_sign: np.ndarray = field(repr=False, default=None)

    @property
    def T(self) -> int:
        return self.bands.T

    @property
    def size(self) -> int:
        return (self.N + 1) * self.bands.T

    @property
    def full_matrix(self) -> np.ndarray:
        """Dense block-diagonal flux matrix, ((N+1)T, (N+1)T)."""
        return _block_diag(self.block_matrices)

    @property
    def full_abs_matrix(self) -> np.ndarray:
        return _block_diag(self.abs_blocks)

    def emission_vector(self) -> np.ndarray:
        """Unit weights on the zeroth moment of every band."""
        e = np.zeros(self.size)
        e[self.zeroth_idx] = 1.0
        return e

    def apply(self, blocks: np.ndarray, u: np.ndarray) -> np.ndarray:
        """Apply a stacked block matrix to flat moment vectors.

        u has shape (..., (N+1)*T); returns the same shape.
        """
        nb = self.N + 1
        ub = np.reshape(u, u.shape[:-1] + (self.bands.T, nb))
        out = np.einsum("jkl,...jl->...jk", blocks, ub)
        return out.reshape(u.shape)


def _block_diag(blocks: np.ndarray) -> np.ndarray:
    T, nb, _ = blocks.shape
    out = np.zeros((T * nb, T * nb))
    for j in range(T):
        out[j * nb:(j + 1) * nb, j * nb:(j + 1) * nb] = blocks[j]
    return out


def build_closure(T: int, N: int, allow_zero_eigenvalues: bool = False) -> ClosureSpec:
    """Assemble the banded flux matrix and its spectral decomposition.

    Each band block is mu_j*I + (dmu/2)*J with J the Legendre advection
    matrix.  J is similar to a symmetric tridiagonal matrix via a diagonal
    scaling, so its eigendecomposition is computed with a symmetric
    tridiagonal eigensolve and unscaled; eigenvalues of the block are then
    the mu_j-shifted Legendre roots.
    """
    if N < 0:
        raise ConfigError(f"moment order N must be nonnegative, got {N}")
    bands = build_bands(T)
    if T % 2 == 1 and N % 2 == 0:
        msg = (
            f"closure (T={T}, N={N}) with odd T and even N has a zero "
            "eigenvalue and degrades vacuum/steady solutions"
        )
        if not allow_zero_eigenvalues:
            raise ConfigError(msg + "; pass allow_zero_eigenvalues=True to override")
        warnings.warn(msg)

    nb = N + 1
    dmu = bands.delta_mu
    J = streaming_block(N)

    # Diagonal similarity scaling: d_{k+1}/d_k = sqrt(sub_k / super_k).
    d = np.ones(nb)
    for k in range(1, nb):
        b_k = k / (2 * k - 1)        # superdiagonal entry J[k-1, k]
        c_k = k / (2 * k + 1)        # subdiagonal entry J[k, k-1]
        d[k] = d[k - 1] * np.sqrt(c_k / b_k)
    off = np.array([np.sqrt(J[k, k + 1] * J[k + 1, k]) for k in range(N)])
    if N > 0:
        s, W = eigh_tridiagonal(np.zeros(nb), off)
    else:
        s, W = np.zeros(1), np.ones((1, 1))
    # Eigenvectors of J: columns of D @ W, inverse W^T @ D^-1.
    V_band = d[:, None] * W
    Vinv_band = W.T / d[None, :]

    blocks = np.empty((T, nb, nb))
    V = np.empty((T, nb, nb))
    Vinv = np.empty((T, nb, nb))
    absA = np.empty((T, nb, nb))
    eigs = np.empty(T * nb)
    for j in range(T):
        mu_j = bands.mu_centers[j]
        blocks[j] = mu_j * np.eye(nb) + 0.5 * dmu * J
        lam = mu_j + 0.5 * dmu * s
        eigs[j * nb:(j + 1) * nb] = lam
        V[j] = V_band
        Vinv[j] = Vinv_band
        absA[j] = V_band @ (np.abs(lam)[:, None] * Vinv_band)

    spec = ClosureSpec(
        bands=bands,
        N=N,
        block_matrices=blocks,
        eigenvalues=eigs,
        right_eigvecs=V,
        inverse_eigvecs=Vinv,
        abs_blocks=absA,
        spectral_radius=float(np.max(np.abs(eigs))),
        zeroth_idx=np.arange(T) * nb,
        reflect_idx=_reflect_index(T, N),
        reflect_sign=_reflect_sign(T, N),
    )
    return spec


def _reflect_index(T: int, N: int) -> np.ndarray:
    """Flat index map for mu -> -mu: band j goes to band T-1-j."""
    nb = N + 1
    idx = np.empty(T * nb, dtype=int)
    for j in range(T):
        for k in range(nb):
            idx[j * nb + k] = (T - 1 - j) * nb + k
    return idx


def _reflect_sign(T: int, N: int) -> np.ndarray:
    """Moment parity under mu -> -mu: (-1)^k on moment order k."""
    nb = N + 1
    return np.tile((-1.0) ** np.arange(nb), T)


def reflect_moments(u: np.ndarray, closure: ClosureSpec) -> np.ndarray:
    """Moments of I(-mu) given the moments of I(mu)."""
    return u[..., closure.reflect_idx] * closure.reflect_sign


def radiation_energy(u: np.ndarray, closure: ClosureSpec, c: float):
    """Radiation energy density (dmu/2c) * sum of zeroth band moments."""
    return (closure.bands.delta_mu / (2.0 * c)) * np.sum(
        u[..., closure.zeroth_idx], axis=-1
    )


def project_intensity(intensity, closure: ClosureSpec, diracs=()) -> np.ndarray:
    """Band-wise Legendre moments of an intensity function of mu.

    ``intensity`` is a callable I(mu) for the smooth part (or None), and
    ``diracs`` lists (mu0, weight) pairs for distributional components,
    which are added analytically in the containing band.  Quadrature order
    is max(8, N+2), exact for the ansatz degree.
    """
    bands, N = closure.bands, closure.N
    nb = N + 1
    dmu = bands.delta_mu
    u = np.zeros(closure.size)
    if intensity is not None:
        order = max(8, N + 2)
        x, w = np.polynomial.legendre.leggauss(order)
        P = legendre_table(N, x)      # (N+1, order)
        for j in range(T := bands.T):
            mu = bands.mu_centers[j] + 0.5 * dmu * x
            vals = np.asarray([intensity(m) for m in mu], dtype=float)
            u[j * nb:(j + 1) * nb] = P @ (w * vals)
    for mu0, weight in diracs:
        pos = (mu0 + 1.0) / dmu
        j = int(np.floor(pos))
        if j == bands.T:             # mu0 == +1 belongs to the last band
            j = bands.T - 1
        on_boundary = abs(pos - round(pos)) < 1e-14 and 0 < round(pos) < bands.T
        if on_boundary:
            raise ConfigError(
                f"Dirac at mu={mu0} sits on an interior band boundary; "
                "band assignment is ambiguous"
            )
        alpha0 = (mu0 - bands.mu_centers[j]) / (0.5 * dmu)
        pk = legendre_table(N, np.array([alpha0]))[:, 0]
        u[j * nb:(j + 1) * nb] += weight * (2.0 / dmu) * pk
    return u


def reconstruct_intensity(u: np.ndarray, closure: ClosureSpec, mu: float) -> float:
    """Evaluate the band-local Legendre ansatz at angle mu.

    Interior band boundaries resolve to the left band.
    """
    bands, N = closure.bands, closure.N
    nb = N + 1
    dmu = bands.delta_mu
    pos = (mu + 1.0) / dmu
    j = int(np.ceil(pos)) - 1        # boundary points fall to the left band
    j = min(max(j, 0), bands.T - 1)
    alpha = (mu - bands.mu_centers[j]) / (0.5 * dmu)
    pk = legendre_table(N, np.array([alpha]))[:, 0]
    coeff = (2.0 * np.arange(nb) + 1.0) / 2.0
    return float(np.dot(coeff * u[j * nb:(j + 1) * nb], pk))
