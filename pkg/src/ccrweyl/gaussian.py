"""Closed-form algebra of Gaussian elements under twisted convolution.

A GaussianElement is f(v) = c * exp(-v^T Q v + l^T v) with complex symmetric
Q whose real part is positive definite.  Products, the involution, complex
Weyl-multiplier actions and shift automorphisms stay inside this class and
are computed exactly from (c, Q, l).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .grid import BoundaryTailWarning, GridFunction, PhaseGrid
from .symplectic import standard_form


class PrecisionLossWarning(UserWarning):
    """Combined quadratic form is close to singular."""


def _as_square(Q, dim: int) -> np.ndarray:
    Q = np.asarray(Q, dtype=complex)
    if Q.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} matrix, got {Q.shape}")
    return Q


@dataclass(frozen=True)
class GaussianElement:
    """c * exp(-v^T Q v + l^T v) on R^{2n}."""

    n: int
    c: complex
    Q: np.ndarray
    l: np.ndarray

    def __post_init__(self):
        dim = 2 * self.n
        Q = _as_square(self.Q, dim)
        if not np.allclose(Q, Q.T, atol=1e-12 * max(1.0, np.linalg.norm(Q))):
            raise ValueError("quadratic matrix must be symmetric")
        Q = 0.5 * (Q + Q.T)
        if np.linalg.eigvalsh(Q.real).min() <= 0:
            raise ValueError("real part of the quadratic matrix must be positive definite")
        l = np.asarray(self.l, dtype=complex)
        if l.shape != (dim,):
            raise ValueError(f"linear part must have shape ({dim},), got {l.shape}")
        object.__setattr__(self, "c", complex(self.c))
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "l", l)

    @property
    def is_hermitian(self) -> bool:
        scale = max(1.0, abs(self.c), np.abs(self.Q).max(), np.abs(self.l).max(initial=0.0))
        return bool(
            abs(self.c.imag) <= 1e-12 * scale
            and np.abs(self.Q.imag).max() <= 1e-12 * scale
            and np.abs(self.l.real).max(initial=0.0) <= 1e-12 * scale
        )

    def __call__(self, v) -> complex:
        v = np.asarray(v, dtype=complex)
        return complex(self.c * np.exp(-v @ self.Q @ v + self.l @ v))


def isclose(f: GaussianElement, h: GaussianElement, rtol: float = 1e-10) -> bool:
    """Componentwise comparison with relative tolerance."""
    if f.n != h.n:
        return False
    scale = max(abs(f.c), abs(h.c), 1e-300)
    qscale = max(np.abs(f.Q).max(), np.abs(h.Q).max())
    lscale = max(np.abs(f.l).max(initial=0.0), np.abs(h.l).max(initial=0.0), qscale)
    return bool(
        abs(f.c - h.c) <= rtol * scale
        and np.abs(f.Q - h.Q).max() <= rtol * qscale
        and np.abs(f.l - h.l).max(initial=0.0) <= rtol * max(lscale, 1e-300)
    )


def standard_gaussian(gamma: complex, n: int = 1) -> GaussianElement:
    """g_gamma(x, y) = exp(-(x^2 + y^2)/(4 gamma)), Re gamma > 0."""
    gamma = complex(gamma)
    if gamma.real <= 0:
        raise ValueError("Re gamma must be positive")
    dim = 2 * n
    return GaussianElement(n=n, c=1.0, Q=np.eye(dim) / (4.0 * gamma), l=np.zeros(dim))


def minimal_projection(n: int = 1) -> GaussianElement:
    """The minimal projection (2 pi)^{-n} exp(-(x^2+y^2)/4)."""
    dim = 2 * n
    return GaussianElement(
        n=n, c=(2.0 * np.pi) ** (-n), Q=np.eye(dim) / 4.0, l=np.zeros(dim)
    )


@dataclass(frozen=True)
class WeylShift:
    """The multiplier e^{iv-w} = e^{i(v + iw)} with real vectors v, w."""

    v: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.v, dtype=float)
        w = np.asarray(self.w, dtype=float)
        if v.shape != w.shape or v.ndim != 1 or v.size % 2 != 0:
            raise ValueError("v and w must be real vectors of equal even dimension")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "w", w)

    @classmethod
    def from_u(cls, u) -> "WeylShift":
        u = np.asarray(u, dtype=complex)
        return cls(v=u.real.copy(), w=u.imag.copy())

    @property
    def u(self) -> np.ndarray:
        return self.v + 1j * self.w


def annihilator_exp(z) -> WeylShift:
    """e^{z a} with a_j = (q_j + i p_j)/sqrt(2), z a complex n-vector."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    u = np.concatenate([z, -1j * z]) / np.sqrt(2.0)
    return WeylShift.from_u(u)


def creator_exp(z) -> WeylShift:
    """e^{z a*} with a*_j = (q_j - i p_j)/sqrt(2)."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    u = -np.concatenate([z, 1j * z]) / np.sqrt(2.0)
    return WeylShift.from_u(u)


def _sqrt_det_principal(M: np.ndarray) -> complex:
    """sqrt(det M) for complex symmetric M with Re M > 0.

    Eigenvalues of such M lie in the right half-plane, so the product of
    principal-branch square roots is the branch continuous along the segment
    from Re M to M.
    """
    evals = np.linalg.eigvals(M)
    if np.any(evals.real <= 0):
        raise ValueError("combined quadratic form lost positive-definite real part")
    return complex(np.prod(np.sqrt(evals)))


def product(f: GaussianElement, h: GaussianElement) -> GaussianElement:
    """Twisted convolution of two Gaussian elements, exactly.

    Completing the square in the convolution variable with the twist
    e^{i sigma(v, v')/2} gives another Gaussian with

        M = Q_f + Q_h,   B = 2 Q_h - (i/2) J,   b0 = l_f - l_h,
        Q = Q_h - B^T M^{-1} B / 4,
        l = l_h + B^T M^{-1} b0 / 2,
        c = c_f c_h pi^n det(M)^{-1/2} exp(b0^T M^{-1} b0 / 4).
    """
    if f.n != h.n:
        raise ValueError("operands live on different phase spaces")
    n = f.n
    J = standard_form(n)
    M = f.Q + h.Q
    cond = np.linalg.cond(M)
    if cond > 1e12:
        warnings.warn(
            f"combined quadratic form has condition number {cond:.3g}; "
            "precision loss likely",
            PrecisionLossWarning,
            stacklevel=2,
        )
    Minv = np.linalg.inv(M)
    B = 2.0 * h.Q - 0.5j * J
    b0 = f.l - h.l
    Q = h.Q - 0.25 * (B.T @ Minv @ B)
    Q = 0.5 * (Q + Q.T)
    l = h.l + 0.5 * (B.T @ Minv @ b0)
    c = (
        f.c
        * h.c
        * np.pi**n
        / _sqrt_det_principal(M)
        * np.exp(0.25 * b0 @ Minv @ b0)
    )
    return GaussianElement(n=n, c=c, Q=Q, l=l)


def involution(f: GaussianElement) -> GaussianElement:
    """f*(v) = conj(f(-v)): (c, Q, l) -> (conj c, conj Q, -conj l)."""
    return GaussianElement(n=f.n, c=np.conj(f.c), Q=np.conj(f.Q), l=-np.conj(f.l))


def multiplier(side: str, s: WeylShift, f: GaussianElement) -> GaussianElement:
    """Action of the multiplier e^{iv-w} on a Gaussian element.

    Substituting v' -> v' - u (u = v + iw) in the exponent and folding in the
    phase e^{-+ i sigma(u, v')/2} keeps Q fixed and updates (c, l).
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    u = s.u
    if u.shape != (2 * f.n,):
        raise ValueError(f"shift of dimension {u.size} on a 2n={2*f.n} element")
    J = standard_form(f.n)
    c = f.c * np.exp(-u @ f.Q @ u - f.l @ u)
    sign = 1.0 if side == "left" else -1.0
    l = f.l + 2.0 * (f.Q @ u) + sign * 0.5j * (J @ u)
    return GaussianElement(n=f.n, c=c, Q=f.Q, l=l)


def shift_automorphism(lam, f: GaussianElement) -> GaussianElement:
    """f(v) -> e^{i lam(v)} f(v): the linear part gains i*lam."""
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (2 * f.n,):
        raise ValueError(f"covector of dimension {lam.size} on a 2n={2*f.n} element")
    return GaussianElement(n=f.n, c=f.c, Q=f.Q, l=f.l + 1j * lam)


def power(f: GaussianElement, r: float) -> GaussianElement:
    """r-th power of a positive multiple of g_gamma (0 < gamma <= 1, n=1).

    For gamma = tanh(theta) the result is
    c^r (4 pi)^{r-1} sinh(theta)^r / sinh(r theta) * g_{tanh(r theta)};
    gamma = 1 is the projection scaling limit c^r (2 pi)^{r-1} g_1.
    """
    if r <= 0:
        raise ValueError("exponent must be positive")
    if f.n != 1:
        raise ValueError("power formula applies to single-freedom elements")
    scale = f.Q[0, 0]
    if (
        abs(f.c.imag) > 1e-12 * abs(f.c)
        or f.c.real <= 0
        or np.abs(f.l).max(initial=0.0) > 1e-12
        or not np.allclose(f.Q, scale.real * np.eye(2), atol=1e-12 * abs(scale))
    ):
        raise ValueError("element is not a positive multiple of g_gamma")
    gamma = 1.0 / (4.0 * scale.real)
    a = f.c.real
    if abs(gamma - 1.0) <= 1e-12:
        c = a**r * (2.0 * np.pi) ** (r - 1.0)
        return GaussianElement(n=1, c=c, Q=np.eye(2) / 4.0, l=np.zeros(2))
    if gamma <= 0 or gamma >= 1:
        raise ValueError("power formula requires 0 < gamma <= 1")
    theta = np.arctanh(gamma)
    c = a**r * (4.0 * np.pi) ** (r - 1.0) * np.sinh(theta) ** r / np.sinh(r * theta)
    Q = np.eye(2) / (4.0 * np.tanh(r * theta))
    return GaussianElement(n=1, c=c, Q=Q, l=np.zeros(2))


def evaluate(f: GaussianElement, grid: PhaseGrid) -> GridFunction:
    """Pointwise samples of f on the grid nodes."""
    if grid.n != f.n:
        raise ValueError(f"grid for n={grid.n} but element has n={f.n}")
    coords = grid.coordinates()
    flat = coords.reshape(2 * f.n, -1)
    expo = -np.einsum("if,ij,jf->f", flat, f.Q, flat) + f.l @ flat
    values = (f.c * np.exp(expo)).reshape(grid.shape)
    out = GridFunction(grid, values)
    peak = float(np.abs(values).max())
    from .grid import boundary_maximum

    if peak > 0 and boundary_maximum(out) > 1e-8 * peak:
        warnings.warn(
            "Gaussian element is not effectively supported in the grid",
            BoundaryTailWarning,
            stacklevel=2,
        )
    return out
