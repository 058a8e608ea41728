"""Sampled phase-space functions and twisted convolution by quadrature.

A PhaseGrid holds N uniform nodes k*h (k = -N/2 .. N/2-1, h = 2L/N) per
axis, so the origin is always a node.  GridFunction values are indexed with
axes ordered (x_1..x_n, y_1..y_n), matching the vector convention in
:mod:`ccrweyl.symplectic`.

The direct Riemann-sum convolution is the normative definition; the fast
path (n=1) evaluates the identical discrete sum with FFT-based row
convolutions and agrees with it to rounding error.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve


class GridMismatchError(ValueError):
    """Binary grid operation on functions living on different grids."""


class BoundaryTailWarning(UserWarning):
    """Samples near the grid boundary are not negligible."""


BOUNDARY_TOL = 1e-8


@dataclass(frozen=True)
class PhaseGrid:
    """Uniform node-centered grid on [-L, L)^{2n} including the origin."""

    n: int
    L: float
    N: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("freedom count must be positive")
        if self.N < 8 or self.N % 2 != 0:
            raise ValueError("N must be an even integer >= 8")
        if self.L <= 0:
            raise ValueError("half-extent L must be positive")

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.N

    @property
    def axis(self) -> np.ndarray:
        """Nodes k*h for k in [-N/2, N/2)."""
        return (np.arange(self.N) - self.N // 2) * self.h

    @property
    def origin_index(self) -> int:
        return self.N // 2

    @property
    def shape(self) -> tuple:
        return (self.N,) * (2 * self.n)

    @property
    def weight(self) -> float:
        """Quadrature weight h^{2n} of one node."""
        return self.h ** (2 * self.n)

    def coordinates(self) -> np.ndarray:
        """Stacked node coordinates, shape (2n,) + self.shape."""
        axes = np.meshgrid(*([self.axis] * (2 * self.n)), indexing="ij")
        return np.stack(axes)


@dataclass(frozen=True)
class GridFunction:
    grid: PhaseGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != self.grid.shape:
            raise ValueError(f"values of shape {values.shape} on grid {self.grid.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("grid samples must be finite")
        object.__setattr__(self, "values", values)


def _require_same_grid(f: GridFunction, h: GridFunction):
    if f.grid != h.grid:
        raise GridMismatchError(f"operands on different grids: {f.grid} vs {h.grid}")


def boundary_maximum(f: GridFunction) -> float:
    """Largest |sample| on any boundary face of the grid."""
    out = 0.0
    for ax in range(2 * f.grid.n):
        for idx in (0, -1):
            sl = [slice(None)] * (2 * f.grid.n)
            sl[ax] = idx
            out = max(out, float(np.abs(f.values[tuple(sl)]).max()))
    return out


def _warn_if_tail(f: GridFunction, label: str):
    peak = float(np.abs(f.values).max())
    if peak > 0 and boundary_maximum(f) > BOUNDARY_TOL * peak:
        warnings.warn(
            f"{label}: boundary samples exceed {BOUNDARY_TOL:g} of the peak; "
            "quadrature truncation may dominate",
            BoundaryTailWarning,
            stacklevel=3,
        )


def _twisted_convolve_direct(f: GridFunction, h: GridFunction) -> GridFunction:
    """Naive O(N^{4n}) Riemann sum of the twisted convolution."""
    grid = f.grid
    n, N = grid.n, grid.N
    axis = grid.axis
    coords = grid.coordinates()  # (2n, ...)
    fv, hv = f.values, h.values
    out = np.zeros(grid.shape, dtype=complex)
    half = N // 2
    for out_idx in itertools.product(*([range(N)] * (2 * n))):
        v = np.array([axis[i] for i in out_idx])
        # sigma(v, v') = sum_j (x'_j * y_j - x_j * y'_j)
        sig = np.zeros(grid.shape)
        for j in range(n):
            sig = sig + v[n + j] * coords[j] - v[j] * coords[n + j]
        phase = np.exp(0.5j * sig)
        # h(v - v'): shifted reversed copy, off-grid samples are zero
        shifted = np.zeros(grid.shape, dtype=complex)
        src = []
        dst = []
        ok = True
        for ax, i in enumerate(out_idx):
            # target index along ax: i - i' + half must lie in [0, N)
            lo = max(0, i - half + 1)
            hi = min(N - 1, i + half)
            if lo > hi:
                ok = False
                break
            src.append(slice(lo, hi + 1))
            dst.append(slice(i - hi + half, i - lo + half + 1))
        if ok:
            # dst slice runs in reverse order of src; handle by reversing
            block = hv[tuple(dst)]
            rev = tuple([slice(None, None, -1)] * (2 * n))
            shifted[tuple(src)] = block[rev]
        out[out_idx] = np.sum(phase * fv * shifted)
    return GridFunction(grid, out * grid.weight)


def _twisted_convolve_fast(f: GridFunction, h: GridFunction) -> GridFunction:
    """Same discrete sum as the direct path, n=1 only, via row FFT convolutions."""
    grid = f.grid
    N = grid.N
    half = N // 2
    axis = grid.axis
    fv, hv = f.values, h.values
    out = np.empty((N, N), dtype=complex)
    # phi[i, q] = exp(+i x'_i y_q / 2) pulled out of the y'-convolution
    phi = np.exp(0.5j * np.outer(axis, axis))
    for p in range(N):
        lo = max(0, p - half + 1)
        hi = min(N - 1, p + half)
        ii = np.arange(lo, hi + 1)
        rows_f = fv[ii] * np.exp(-0.5j * axis[p] * axis)[None, :]
        rows_h = hv[p - ii + half]
        conv = fftconvolve(rows_f, rows_h, mode="full", axes=1)
        out[p] = np.sum(phi[ii] * conv[:, half : half + N], axis=0)
    return GridFunction(grid, out * grid.weight)


def twisted_convolve(f: GridFunction, h: GridFunction, method: str = "auto") -> GridFunction:
    """(f h)(v) ~ integral of e^{i sigma(v,v')/2} f(v') h(v - v') dv'.

    method: "auto" (fast for n=1, direct otherwise), "direct", or "fast".
    """
    _require_same_grid(f, h)
    _warn_if_tail(f, "twisted_convolve: left operand")
    _warn_if_tail(h, "twisted_convolve: right operand")
    if method == "auto":
        method = "fast" if f.grid.n == 1 else "direct"
    if method == "fast":
        if f.grid.n != 1:
            raise ValueError("fast convolution path supports n=1 only")
        return _twisted_convolve_fast(f, h)
    if method == "direct":
        return _twisted_convolve_direct(f, h)
    raise ValueError(f"unknown convolution method {method!r}")


def involution(f: GridFunction) -> GridFunction:
    """f*(v) = conj(f(-v)) by index reflection.

    The node -N/2 has no mirror partner; it is wrapped periodically, which
    is exact for tail-negligible samples and keeps the map involutive.
    """
    v = f.values
    rev = v[tuple([slice(None, None, -1)] * v.ndim)]
    rolled = np.roll(rev, 1, axis=tuple(range(v.ndim)))
    return GridFunction(f.grid, np.conj(rolled))


def _phase_exponent(grid: PhaseGrid, v: np.ndarray) -> np.ndarray:
    """sigma(v, v') over all nodes v', shape grid.shape."""
    n = grid.n
    coords = grid.coordinates()
    sig = np.zeros(grid.shape)
    for j in range(n):
        sig = sig + v[n + j] * coords[j] - v[j] * coords[n + j]
    return sig


def _integer_shift(f: GridFunction, steps: np.ndarray) -> np.ndarray:
    """values of f(v' - v) where v = steps * h; off-grid becomes 0."""
    N = f.grid.N
    out = np.zeros(f.grid.shape, dtype=complex)
    src = []
    dst = []
    for s in steps:
        s = int(s)
        lo_dst = max(0, s)
        hi_dst = min(N, N + s)
        if lo_dst >= hi_dst:
            return out
        dst.append(slice(lo_dst, hi_dst))
        src.append(slice(lo_dst - s, hi_dst - s))
    out[tuple(dst)] = f.values[tuple(src)]
    return out


def weyl_multiplier(side: str, v, f: GridFunction) -> GridFunction:
    """Multiplier action of e^{iv}: phase times a grid-aligned shift.

    left:  (e^{iv} f)(v') = e^{-i sigma(v,v')/2} f(v' - v)
    right: (f e^{iv})(v') = e^{+i sigma(v,v')/2} f(v' - v)
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    v = np.asarray(v, dtype=float)
    if v.shape != (2 * f.grid.n,):
        raise ValueError(f"shift vector of shape {v.shape} on a 2n={2*f.grid.n} grid")
    steps = v / f.grid.h
    if not np.allclose(steps, np.round(steps), atol=1e-9):
        raise ValueError("shift components must be integer multiples of the grid spacing")
    steps = np.round(steps).astype(int)
    shifted = _integer_shift(f, steps)
    sign = -0.5j if side == "left" else 0.5j
    phase = np.exp(sign * _phase_exponent(f.grid, v))
    return GridFunction(f.grid, phase * shifted)


def shift_automorphism(lam, f: GridFunction) -> GridFunction:
    """Pointwise multiplication by e^{i lam(v)} for a real covector lam."""
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (2 * f.grid.n,):
        raise ValueError(f"covector of shape {lam.shape} on a 2n={2*f.grid.n} grid")
    coords = f.grid.coordinates()
    expo = np.tensordot(lam, coords, axes=1)
    return GridFunction(f.grid, np.exp(1j * expo) * f.values)


def l1_norm(f: GridFunction) -> float:
    return float(np.sum(np.abs(f.values)) * f.grid.weight)


def l2_inner(f: GridFunction, h: GridFunction) -> complex:
    """(f | h) = integral of conj(f) h."""
    _require_same_grid(f, h)
    return complex(np.sum(np.conj(f.values) * h.values) * f.grid.weight)


def trace_functional(f: GridFunction) -> complex:
    """tr(f) = (2 pi)^n f(0), reading f at the origin node."""
    center = (f.grid.origin_index,) * (2 * f.grid.n)
    return complex((2.0 * np.pi) ** f.grid.n * f.values[center])


def relative_l1_error(got: GridFunction, want: GridFunction) -> float:
    _require_same_grid(got, want)
    denom = l1_norm(want)
    if denom == 0.0:
        return l1_norm(got)
    diff = GridFunction(got.grid, got.values - want.values)
    return l1_norm(diff) / denom
