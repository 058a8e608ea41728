"""Spectral analysis of Gaussian elements.

Single-freedom law: g_gamma (Re gamma > 0) has eigenvalues

    lambda_k = 2 pi * (2 gamma / (1 + gamma)) * rho^k,   rho = (1-gamma)/(1+gamma)

on the diagonal matrix units g_{k,k}.  Multimode spectra come from the
symplectic invariants of the quadratic part; linear parts (shift
automorphisms) do not move the spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

import numpy as np

from . import gaussian as ga
from .grid import GridFunction, PhaseGrid
from .symplectic import symplectic_gammas
from .units import diagonal_unit_samples


@dataclass(frozen=True)
class SpectralData:
    """Eigenvalues lambda(l) = prefactor * prod_j rho_j^{l_j} with multi-indices."""

    entries: list  # [(multi_index tuple, eigenvalue complex)]
    prefactor: complex
    ratios: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        return np.array([lam for _, lam in self.entries])


def cayley_ratio(gamma: complex) -> complex:
    """rho = (1 - gamma)/(1 + gamma); |rho| < 1 iff Re gamma > 0."""
    gamma = complex(gamma)
    return (1.0 - gamma) / (1.0 + gamma)


def _auto_cutoff(rho: complex, tol: float) -> int:
    r = abs(rho)
    if r < 1e-16:
        return 0
    return max(0, int(np.ceil(np.log(tol * (1.0 - r)) / np.log(r))))


def spectrum_single(gamma: complex, cutoff: int | None = None, tol: float = 1e-10) -> SpectralData:
    """Eigenvalue list of g_gamma, Re gamma > 0, up to the cutoff index."""
    gamma = complex(gamma)
    if gamma.real <= 0:
        raise ValueError("Re gamma must be positive")
    rho = cayley_ratio(gamma)
    if cutoff is None:
        cutoff = _auto_cutoff(rho, tol)
    pref = 2.0 * np.pi * 2.0 * gamma / (1.0 + gamma)
    entries = [((k,), complex(pref * rho**k)) for k in range(cutoff + 1)]
    return SpectralData(entries=entries, prefactor=complex(pref), ratios=np.array([rho]))


def _hermitian_parts(f: ga.GaussianElement):
    if not f.is_hermitian:
        raise ValueError("spectrum of a general Gaussian requires a hermitian element")
    if f.c.real <= 0:
        raise ValueError("hermitian Gaussian must have a positive coefficient")
    return f.c.real, f.Q.real


def spectrum_gaussian(
    f: ga.GaussianElement, cutoff: int | None = None, tol: float = 1e-10
) -> SpectralData:
    """Multimode spectrum via the symplectic invariants of the quadratic part.

    The linear (purely imaginary) part is a shift automorphism and is
    discarded; symplectic changes of variable preserve the Liouville measure,
    so the prefactor is just c (2 pi)^n prod_j 2 gamma_j/(1 + gamma_j).
    """
    c, Q = _hermitian_parts(f)
    gammas = symplectic_gammas(Q)
    rhos = np.array([cayley_ratio(g) for g in gammas])
    pref = c * (2.0 * np.pi) ** f.n * np.prod(2.0 * gammas / (1.0 + gammas))
    if cutoff is None:
        cutoffs = [_auto_cutoff(r, tol) for r in rhos]
    else:
        cutoffs = [cutoff] * f.n
    entries = []
    for multi in iproduct(*[range(K + 1) for K in cutoffs]):
        lam = pref * np.prod([r**k for r, k in zip(rhos, multi)])
        entries.append((tuple(multi), complex(lam)))
    return SpectralData(entries=entries, prefactor=complex(pref), ratios=rhos)


def is_positive(f: ga.GaussianElement) -> bool:
    """Positivity criterion: all symplectic invariants gamma_j <= 1."""
    _, Q = _hermitian_parts(f)
    gammas = symplectic_gammas(Q)
    return bool(np.all(gammas <= 1.0 + 1e-12))


def trace_gaussian(f: ga.GaussianElement) -> complex:
    """tr(f) = (2 pi)^n f(0) = (2 pi)^n c; equals 2 pi for every g_gamma."""
    return complex((2.0 * np.pi) ** f.n * f.c)


def partial_sum_samples(gamma: complex, cutoff: int, grid: PhaseGrid) -> GridFunction:
    """Grid samples of sum_{k <= cutoff} lambda_k g_{k,k} (single freedom)."""
    spec = spectrum_single(gamma, cutoff=cutoff)
    acc = np.zeros(grid.shape, dtype=complex)
    for (k,), lam in spec.entries:
        acc += lam * diagonal_unit_samples(k, grid).values
    return GridFunction(grid, acc)


def integral_representation_check(
    gamma: complex,
    grid: PhaseGrid,
    quad_radius: float = 6.0,
    quad_samples: int = 64,
    tail_tol: float = 1e-3,
) -> float:
    """Residual of g_gamma = (2 gamma/(gamma-1)) integral e^{-mu |z|^2} e^{-zbar a*} g e^{z a} dxdy.

    mu = (gamma + 1)/(gamma - 1); requires Re mu > 1, i.e. Re gamma > 1.
    The integrand sample at z = (x + iy)/sqrt(2) is the closed-form kernel
    (2 pi)^{-1} exp(-(s^2+t^2)/4 + s x + t y - (x^2+y^2)/2).
    Returns the relative L1 deviation from sampled g_gamma.
    """
    gamma = complex(gamma)
    mu = (gamma + 1.0) / (gamma - 1.0)
    if mu.real <= 1.0:
        raise ValueError("integral representation requires Re mu > 1 (Re gamma > 1)")
    # L1 norm of the kernel grows like 2 e^{(x^2+y^2)/2}; the integrand tail
    # beyond the quadrature square is bounded by the Gaussian decay margin,
    # measured relative to ||g_gamma||_1 = 4 pi |gamma|.
    margin = mu.real - 1.0
    tail = (
        abs(2.0 * gamma / (gamma - 1.0))
        * 4.0
        * np.pi
        / margin
        * np.exp(-0.5 * margin * quad_radius**2)
    ) / (4.0 * np.pi * abs(gamma))
    if tail > tail_tol:
        raise ValueError(
            f"quadrature radius {quad_radius} leaves estimated tail {tail:.3g} > {tail_tol:g}"
        )
    if grid.n != 1:
        raise ValueError("single-freedom check only")

    xs = (np.arange(quad_samples) + 0.5) / quad_samples * 2 * quad_radius - quad_radius
    dx = 2.0 * quad_radius / quad_samples
    s, t = np.meshgrid(grid.axis, grid.axis, indexing="ij")
    base = np.exp(-(s * s + t * t) / 4.0) / (2.0 * np.pi)
    weight = 2.0 * gamma / (gamma - 1.0) * dx * dx
    # The kernel samples factor through exp(s x) exp(t y), so the double
    # Riemann sum separates into identical one-axis sums.
    ex = np.exp(-0.5 * (mu + 1.0) * xs**2)
    Fx = np.exp(np.outer(grid.axis, xs)) * ex[None, :]  # (N, quad_samples)
    sum_x = Fx.sum(axis=1)
    total = weight * np.outer(sum_x, sum_x) * base
    want = ga.evaluate(ga.standard_gaussian(gamma), grid)
    diff = np.abs(total - want.values).sum()
    return float(diff / np.abs(want.values).sum())


@dataclass(frozen=True)
class FreeStateMatrix:
    """Per-freedom sesquilinear form S with S - conj(S) = i sigma."""

    S: np.ndarray

    def __post_init__(self):
        S = np.asarray(self.S, dtype=complex)
        if S.shape != (2, 2):
            raise ValueError("S must be a 2x2 matrix")
        sigma = np.array([[0.0, -1.0], [1.0, 0.0]])
        if not np.allclose(S - np.conj(S), 1j * sigma, atol=1e-12):
            raise ValueError("S - conj(S) must equal i sigma")
        object.__setattr__(self, "S", S)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.S)


def free_state_matrix(gamma: float) -> tuple[FreeStateMatrix, bool]:
    """S(gamma) = [[1/gamma, -i], [i, 1/gamma]]/2 and its positivity flag."""
    gamma = float(gamma)
    if gamma <= 0:
        raise ValueError("gamma must be a positive real")
    S = 0.5 * np.array([[1.0 / gamma, -1j], [1j, 1.0 / gamma]])
    mat = FreeStateMatrix(S=S)
    psd = bool(mat.eigenvalues().min() >= -1e-12)
    return mat, psd
