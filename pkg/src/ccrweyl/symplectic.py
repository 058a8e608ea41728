"""Real symplectic linear algebra.

Coordinates on phase space are ordered (x_1..x_n, y_1..y_n), a vector
v = sum_j (x_j p_j + y_j q_j).  The symplectic form is

    sigma(v, v') = sum_j (x'_j y_j - x_j y'_j)

so that sigma(q_j, p_k) = delta_{jk}.  In matrix form sigma(v, w) = v^T J w
with J = [[0, -I], [I, 0]].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SymplecticSpace:
    """Phase space R^{2n} with the standard symplectic form."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("freedom count must be a positive integer")

    @property
    def dim(self) -> int:
        return 2 * self.n


def standard_form(n: int) -> np.ndarray:
    """Matrix J of the symplectic form in (x, y) block coordinates."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, -eye], [eye, zero]])


def symplectic_form(v, w, space: SymplecticSpace | None = None) -> float:
    """sigma(v, w) = sum_j (x'_j y_j - x_j y'_j)."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if v.shape != w.shape or v.ndim != 1 or v.size % 2 != 0:
        raise ValueError(f"dimension mismatch: {v.shape} vs {w.shape}")
    n = v.size // 2
    if space is not None and space.n != n:
        raise ValueError(f"vectors of dimension {v.size} on a 2n={2*space.n} space")
    return float(w[:n] @ v[n:] - v[:n] @ w[n:])


def _check_quadratic_part(K: np.ndarray) -> np.ndarray:
    K = np.asarray(K, dtype=float)
    if K.ndim != 2 or K.shape[0] != K.shape[1] or K.shape[0] % 2 != 0:
        raise ValueError(f"expected a 2n x 2n matrix, got shape {K.shape}")
    if not np.allclose(K, K.T, atol=1e-12 * max(1.0, np.linalg.norm(K))):
        raise np.linalg.LinAlgError("quadratic part is not symmetric")
    evals = np.linalg.eigvalsh(K)
    if evals.min() <= 1e-12 * np.linalg.norm(K):
        raise np.linalg.LinAlgError("quadratic part is not positive definite")
    return 0.5 * (K + K.T)


@dataclass(frozen=True)
class QuadraticPart:
    """Positive-definite quadratic form kappa(v) = v^T K v."""

    K: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "K", _check_quadratic_part(self.K))

    @property
    def n(self) -> int:
        return self.K.shape[0] // 2


@dataclass(frozen=True)
class WilliamsonResult:
    """Symplectic invariants gamma_j and the diagonalizing transform T.

    T satisfies T^T J T = J and
    T^T K T = diag(1/(4*gamma_1) .. 1/(4*gamma_n), 1/(4*gamma_1) .. ).
    """

    gammas: np.ndarray
    transform: np.ndarray


def _inv_sqrt(K: np.ndarray) -> np.ndarray:
    evals, vecs = np.linalg.eigh(K)
    return (vecs / np.sqrt(evals)) @ vecs.T


def symplectic_gammas(K) -> np.ndarray:
    """Positive eigenvalues of (i/4) K^{-1} J, sorted descending.

    Computed from the antisymmetric similarity K^{-1/2} (J/4) K^{-1/2},
    whose spectrum is {+-i gamma_j}.
    """
    if isinstance(K, QuadraticPart):
        K = K.K
    K = _check_quadratic_part(np.asarray(K, dtype=float))
    n = K.shape[0] // 2
    khalf_inv = _inv_sqrt(K)
    A = khalf_inv @ (standard_form(n) / 4.0) @ khalf_inv
    A = 0.5 * (A - A.T)
    evals = np.linalg.eigvalsh(1j * A)  # hermitian; spectrum {+-gamma_j}
    gammas = np.sort(evals[evals > 0])[::-1]
    if gammas.size != n:
        raise np.linalg.LinAlgError("eigen-decomposition failed to produce n positive invariants")
    return gammas


def williamson_normalize(K) -> WilliamsonResult:
    """Symplectic T bringing K to the normal form diag(1/(4 gamma_j)) pairs."""
    if isinstance(K, QuadraticPart):
        K = K.K
    K = _check_quadratic_part(np.asarray(K, dtype=float))
    n = K.shape[0] // 2
    khalf_inv = _inv_sqrt(K)
    A = khalf_inv @ (standard_form(n) / 4.0) @ khalf_inv
    A = 0.5 * (A - A.T)

    from scipy.linalg import schur

    T2, O = schur(A, output="real")
    # A is normal antisymmetric: the real Schur form is block diagonal with
    # 2x2 blocks [[0, c], [-c, 0]].  Normalize each block to c < 0 so that a
    # pair (e1, e2) satisfies sigma-orientation matching J = [[0,-1],[1,0]].
    pairs = []
    i = 0
    while i < 2 * n:
        if i + 1 >= 2 * n or abs(T2[i + 1, i]) < 1e-14 * max(1.0, abs(A).max()):
            raise np.linalg.LinAlgError("Schur form of the twisted form is not block diagonal")
        c = T2[i, i + 1]
        cols = O[:, i : i + 2].copy()
        if c > 0:
            cols = cols[:, ::-1]
            c = -c
        pairs.append((-c, cols))  # gamma = |c|
        i += 2
    pairs.sort(key=lambda t: -t[0])

    gammas = np.array([g for g, _ in pairs])
    o_sorted = np.hstack([cols for _, cols in pairs])
    scale = np.repeat(1.0 / (2.0 * np.sqrt(gammas)), 2)
    t_inter = khalf_inv @ (o_sorted * scale)
    # interleaved (x1,y1,x2,y2,..) -> block (x1..xn, y1..yn)
    perm = np.r_[np.arange(0, 2 * n, 2), np.arange(1, 2 * n, 2)]
    T = t_inter[:, perm]

    J = standard_form(n)
    if not np.allclose(T.T @ J @ T, J, atol=1e-9):
        raise np.linalg.LinAlgError("normalization failed: transform is not symplectic")
    return WilliamsonResult(gammas=gammas, transform=T)
