"""Truncated Fock / Schroedinger representation.

The Weyl unitary U(x, y) = e^{i(x p + y q)} acts on the number basis through
the displacement operator with parameter alpha = -conj(z), z = (x+iy)/sqrt(2).
Integrating an element against U(x, y) over the phase grid gives the
truncated matrix of pi(f), used as an eigenvalue oracle for the closed-form
spectra.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_genlaguerre

from . import gaussian as ga
from .grid import GridFunction, PhaseGrid
from .spectral import spectrum_single
from .units import PolyGaussian


class TruncationWarning(UserWarning):
    """Finite Fock dimension visibly distorts the requested object."""


@dataclass(frozen=True)
class FockTruncation:
    """Number basis |0> .. |D-1>."""

    D: int

    def __post_init__(self):
        if self.D < 2:
            raise ValueError("truncation dimension must be at least 2")


@dataclass(frozen=True)
class OperatorMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("operator matrix must be square")
        if not np.all(np.isfinite(m)):
            raise ValueError("operator matrix entries must be finite")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_hermitian(self) -> bool:
        return bool(np.allclose(self.matrix, self.matrix.conj().T, atol=1e-10))


def _log_factorials(D: int) -> np.ndarray:
    return np.cumsum(np.r_[0.0, np.log(np.arange(1, D))])


def _displacement_entries(alpha: np.ndarray, D: int) -> np.ndarray:
    """<m| D(alpha) |n> for an array of alphas; returns shape (D, D, len)."""
    alpha = np.asarray(alpha, dtype=complex).ravel()
    r2 = np.abs(alpha) ** 2
    gauss = np.exp(-0.5 * r2)
    logf = _log_factorials(D)
    out = np.empty((D, D, alpha.size), dtype=complex)
    for m in range(D):
        for n in range(m + 1):
            # <m|D|n> = sqrt(n!/m!) alpha^{m-n} e^{-|a|^2/2} L_n^{m-n}(|a|^2)
            pref = math.exp(0.5 * (logf[n] - logf[m]))
            lag = eval_genlaguerre(n, m - n, r2)
            out[m, n] = pref * alpha ** (m - n) * gauss * lag
            if m != n:
                # <n|D|m> from D(alpha)^dagger = D(-alpha)
                out[n, m] = pref * (-np.conj(alpha)) ** (m - n) * gauss * lag
    return out


def displacement_matrix(z: complex, trunc: FockTruncation) -> OperatorMatrix:
    """Number-basis matrix of U(x, y) = e^{za - zbar a*} with z = (x+iy)/sqrt(2)."""
    z = complex(z)
    D = trunc.D
    entries = _displacement_entries(np.array([-np.conj(z)]), D)[:, :, 0]
    # a-posteriori truncation estimate: unitarity defect of the last two columns
    defect = max(abs(np.linalg.norm(entries[:, j]) ** 2 - 1.0) for j in (D - 2, D - 1))
    if defect > 1e-8:
        warnings.warn(
            f"displacement truncation defect {defect:.3g} at D={D}, |z|={abs(z):.3g}",
            TruncationWarning,
            stacklevel=2,
        )
    return OperatorMatrix(entries)


def hermite_functions(xs: np.ndarray, D: int) -> np.ndarray:
    """Oscillator eigenfunctions h_0..h_{D-1} on the nodes, shape (D, len(xs))."""
    xs = np.asarray(xs, dtype=float)
    out = np.empty((D, xs.size))
    out[0] = np.pi ** (-0.25) * np.exp(-0.5 * xs**2)
    if D > 1:
        out[1] = np.sqrt(2.0) * xs * out[0]
    for k in range(2, D):
        out[k] = np.sqrt(2.0 / k) * xs * out[k - 1] - np.sqrt((k - 1.0) / k) * out[k - 2]
    return out


def displacement_matrix_quadrature(
    x: float, y: float, trunc: FockTruncation, xs: np.ndarray | None = None
) -> OperatorMatrix:
    """Schroedinger-side oracle for U(x, y).

    (U(x,y) psi)(xi) = e^{-i x y / 2} e^{i (xi + x) y} psi(xi + x); the matrix
    elements against Hermite functions are quadratured on a 1-D grid.
    """
    if xs is None:
        xs = np.linspace(-12.0, 12.0, 512)
    xs = np.asarray(xs, dtype=float)
    dxi = xs[1] - xs[0]
    h = hermite_functions(xs, trunc.D)
    h_shift = hermite_functions(xs + x, trunc.D)
    phase = np.exp(-0.5j * x * y) * np.exp(1j * (xs + x) * y)
    mat = np.einsum("mx,x,nx->mn", h, phase * dxi, h_shift)
    return OperatorMatrix(mat)


def _mode_entries_for_grid(grid: PhaseGrid, D: int) -> np.ndarray:
    """Displacement entries over one mode's (x, y) nodes, shape (N*N, D*D)."""
    x, y = np.meshgrid(grid.axis, grid.axis, indexing="ij")
    z = (x + 1j * y) / np.sqrt(2.0)
    entries = _displacement_entries(-np.conj(z.ravel()), D)  # (D, D, N^2)
    return entries.reshape(D * D, -1).T


def represent(f, trunc: FockTruncation, grid: PhaseGrid) -> OperatorMatrix:
    """pi(f) ~ sum over nodes of f(v) U(v) h^{2n} for n = 1 or 2.

    f may be a GaussianElement, a PolyGaussian, or a GridFunction.
    """
    if isinstance(f, ga.GaussianElement):
        f = ga.evaluate(f, grid)
    elif isinstance(f, PolyGaussian):
        f = f.evaluate(grid)
    if not isinstance(f, GridFunction):
        raise TypeError("cannot represent objects of type %r" % type(f).__name__)
    grid = f.grid
    D = trunc.D
    if grid.n == 1:
        A = _mode_entries_for_grid(grid, D)  # (N^2, D^2)
        vec = grid.weight * (f.values.ravel() @ A)
        return OperatorMatrix(vec.reshape(D, D))
    if grid.n == 2:
        N = grid.N
        A = _mode_entries_for_grid(PhaseGrid(1, grid.L, N), D)  # (N^2, D^2)
        # axes (x1, x2, y1, y2) -> ((x1 y1), (x2 y2))
        F = np.transpose(f.values, (0, 2, 1, 3)).reshape(N * N, N * N)
        T1 = F @ A  # (N^2, D^2)
        out = grid.weight * (A.T @ T1)  # (D^2, D^2): [(m1 n1), (m2 n2)]
        out4 = out.reshape(D, D, D, D)
        return OperatorMatrix(
            np.transpose(out4, (0, 2, 1, 3)).reshape(D * D, D * D)
        )
    raise ValueError("representation supports n = 1 or 2")


def fock_spectrum(f, trunc: FockTruncation, grid: PhaseGrid) -> np.ndarray:
    """Eigenvalues of the truncated pi(f), sorted by descending real part.

    Hermitian inputs are symmetrized before the eigensolve.
    """
    op = represent(f, trunc, grid)
    m = op.matrix
    if np.allclose(m, m.conj().T, atol=1e-8 * max(1.0, np.abs(m).max())):
        evals = np.linalg.eigvalsh(0.5 * (m + m.conj().T)).astype(complex)
    else:
        evals = np.linalg.eigvals(m)
    order = np.argsort(-evals.real)
    return evals[order]


def mehler_check(
    gamma: float,
    xs: np.ndarray | None = None,
    trunc: FockTruncation = FockTruncation(32),
    compare_stride: int = 4,
) -> float:
    """Residual between the two constructions of the Schroedinger kernel of pi(g_gamma).

    (a) number-basis expansion sum_k lambda_k h_k(xi) h_k(xi') -- the Mehler
        eigenfunction series;
    (b) direct quadrature K(xi, xi') = integral g_gamma(xi'-xi, y)
        e^{i y (xi+xi')/2} dy, obtained by resolving the delta kernel of U(v).

    Returns max |K_a - K_b| / max |K_b| over a strided node subset.
    """
    gamma = complex(gamma)
    if gamma.real <= 0:
        raise ValueError("Re gamma must be positive")
    if xs is None:
        xs = np.linspace(-12.0, 12.0, 512)
    xs = np.asarray(xs, dtype=float)
    sub = xs[::compare_stride]

    lam = spectrum_single(gamma, cutoff=trunc.D - 1).eigenvalues()
    h = hermite_functions(sub, trunc.D)
    Ka = np.einsum("k,kx,ky->xy", lam, h, h)

    dy = xs[1] - xs[0]
    delta = sub[None, :] - sub[:, None]
    # sum index: b = (xi + xi')/2 takes values over the sum lattice
    W = np.empty((sub.size, sub.size), dtype=complex)
    bvals = 0.5 * (sub[None, :] + sub[:, None])
    gauss_y = np.exp(-(xs**2) / (4.0 * gamma))
    W = np.exp(1j * np.multiply.outer(bvals, xs)) @ gauss_y * dy
    Kb = np.exp(-(delta**2) / (4.0 * gamma)) * W

    return float(np.abs(Ka - Kb).max() / np.abs(Kb).max())
