"""Coherent generating kernel and the matrix units it generates.

g_{z,w} = e^{z a*} g e^{w a} is a Gaussian element whose Taylor coefficients
in (z, w), scaled by sqrt(k! l!), are the matrix units g_{k,l}.  In the
complex phase variable u = (s + it)/sqrt(2),

    g_{z,w}(s,t) = (2 pi)^{-1} exp(-(s^2+t^2)/4 + z w - z u + w conj(u)),

so each g_{k,l} is a polynomial in (u, conj u) times the projection g.
Single freedom (n = 1) throughout.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import eval_laguerre

from . import gaussian as ga
from .grid import GridFunction, PhaseGrid, relative_l1_error, twisted_convolve

DEFAULT_CUTOFF = 8


def worker_count() -> int:
    env = os.environ.get("CCRWEYL_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


@dataclass(frozen=True)
class CoherentKernel:
    """g_{z,w} = e^{z a*} g e^{w a} together with its parameters."""

    z: complex
    w: complex
    body: ga.GaussianElement


def coherent_kernel(z: complex, w: complex) -> CoherentKernel:
    """Build g_{z,w} by acting with the creator/annihilator multipliers on g."""
    g = ga.minimal_projection(1)
    body = ga.multiplier("right", ga.annihilator_exp(w), ga.multiplier("left", ga.creator_exp(z), g))
    return CoherentKernel(z=complex(z), w=complex(w), body=body)


def coherent_kernel_closed_form(z: complex, w: complex) -> ga.GaussianElement:
    """The same kernel written out directly; cross-check for the multiplier route."""
    z, w = complex(z), complex(w)
    sqrt2 = np.sqrt(2.0)
    c = np.exp(z * w) / (2.0 * np.pi)
    l = np.array([(w - z) / sqrt2, -1j * (z + w) / sqrt2])
    return ga.GaussianElement(n=1, c=c, Q=np.eye(2) / 4.0, l=l)


@dataclass(frozen=True)
class PolyGaussian:
    """poly(u, conj u) times the projection g, with u = (s + it)/sqrt(2).

    poly maps bidegrees (p, q) of u^p conj(u)^q to complex coefficients.
    """

    poly: dict = field(default_factory=dict)
    core: ga.GaussianElement = field(default_factory=ga.minimal_projection)

    def __post_init__(self):
        object.__setattr__(
            self, "poly", {(int(p), int(q)): complex(c) for (p, q), c in self.poly.items()}
        )

    @property
    def degree(self) -> int:
        return max((p + q for p, q in self.poly), default=0)

    def evaluate(self, grid: PhaseGrid) -> GridFunction:
        if grid.n != 1:
            raise ValueError("polynomial Gaussians are single-freedom")
        base = ga.evaluate(self.core, grid)
        s, t = np.meshgrid(grid.axis, grid.axis, indexing="ij")
        u = (s + 1j * t) / np.sqrt(2.0)
        uc = np.conj(u)
        acc = np.zeros_like(u, dtype=complex)
        for (p, q), coeff in self.poly.items():
            acc += coeff * u**p * uc**q
        return GridFunction(grid, acc * base.values)

    def involution(self) -> "PolyGaussian":
        """Closed-form adjoint: conj coefficients, swap bidegree, sign (-1)^{p+q}."""
        out = {}
        for (p, q), coeff in self.poly.items():
            out[(q, p)] = out.get((q, p), 0.0) + (-1.0) ** (p + q) * np.conj(coeff)
        return PolyGaussian(poly=out, core=self.core)


def matrix_unit(k: int, l: int, cutoff: int = DEFAULT_CUTOFF) -> PolyGaussian:
    """g_{k,l}: the sqrt(k! l!)-scaled (z^k w^l) Taylor coefficient of g_{z,w}.

    Expanding exp(z w - z u + w conj u) gives

        g_{k,l} = sqrt(k! l!) * sum_a (-1)^{k-a} u^{k-a} conj(u)^{l-a}
                                      / (a! (k-a)! (l-a)!) * g
    """
    if k < 0 or l < 0:
        raise ValueError("indices must be non-negative")
    if k > cutoff or l > cutoff:
        raise ValueError(f"index ({k},{l}) exceeds cutoff {cutoff}")
    scale = math.sqrt(math.factorial(k) * math.factorial(l))
    poly = {}
    for a in range(min(k, l) + 1):
        coeff = scale * (-1.0) ** (k - a) / (
            math.factorial(a) * math.factorial(k - a) * math.factorial(l - a)
        )
        poly[(k - a, l - a)] = coeff
    return PolyGaussian(poly=poly, core=ga.minimal_projection(1))


def diagonal_unit_samples(k: int, grid: PhaseGrid) -> GridFunction:
    """g_{k,k} sampled stably via Laguerre: L_k(|u|^2) g(s,t)."""
    if grid.n != 1:
        raise ValueError("diagonal units are single-freedom")
    base = ga.evaluate(ga.minimal_projection(1), grid)
    s, t = np.meshgrid(grid.axis, grid.axis, indexing="ij")
    r2 = 0.5 * (s * s + t * t)
    return GridFunction(grid, eval_laguerre(k, r2) * base.values)


def cauchy_matrix_unit(
    k: int,
    l: int,
    grid: PhaseGrid,
    radius: float = 1.0,
    phases: int = 24,
    cutoff: int = DEFAULT_CUTOFF,
) -> GridFunction:
    """Independent oracle: extract g_{k,l} from kernel samples on a phase lattice.

    Samples g_{z,w} at z = r e^{i theta_a}, w = r e^{i theta_b} and takes the
    discrete Fourier coefficient.  The kernel is entire, so the only aliasing
    comes from degrees k + phases and beyond, suppressed like
    r^phases / sqrt((k + phases)!); demanding phases >= 2 * max(k, l)
    keeps that far below test tolerances at r = 1.
    """
    del cutoff
    if phases < 2 * max(k, l, 1):
        raise ValueError("phase count must be at least twice the extracted degree")
    thetas = 2.0 * np.pi * np.arange(phases) / phases
    acc = np.zeros(grid.shape, dtype=complex)
    for a, ta in enumerate(thetas):
        z = radius * np.exp(1j * ta)
        for b, tb in enumerate(thetas):
            w = radius * np.exp(1j * tb)
            body = coherent_kernel(z, w).body
            weight = np.exp(-1j * (k * ta + l * tb))
            acc += weight * ga.evaluate(body, grid).values
    acc *= math.sqrt(math.factorial(k) * math.factorial(l)) / (
        phases**2 * radius ** (k + l)
    )
    return GridFunction(grid, acc)


@dataclass(frozen=True)
class RelationCheck:
    j: int
    k: int
    l: int
    m: int
    residual: float


@dataclass(frozen=True)
class RelationReport:
    checks: list
    max_residual: float
    adjoint_residual: float


def verify_matrix_unit_relations(
    max_index: int,
    grid: PhaseGrid,
    cutoff: int = DEFAULT_CUTOFF,
    method: str = "auto",
) -> RelationReport:
    """Check g_{j,k} g_{l,m} = delta_{k,l} g_{j,m} on the grid for all indices.

    Residuals are L1 deviations relative to ||g_{j,m}||_1.  Also checks the
    closed-form adjoint relation g_{k,j}* = g_{j,k}.
    """
    if max_index > cutoff:
        raise ValueError("max_index exceeds cutoff")
    idx = range(max_index + 1)
    units = {(a, b): matrix_unit(a, b, cutoff) for a in idx for b in idx}
    samples = {key: pg.evaluate(grid) for key, pg in units.items()}
    norms = {
        key: float(np.sum(np.abs(sf.values)) * grid.weight) for key, sf in samples.items()
    }

    def one(args):
        j, k, l, m = args
        got = twisted_convolve(samples[(j, k)], samples[(l, m)], method=method)
        want = samples[(j, m)].values if k == l else 0.0
        dev = float(np.sum(np.abs(got.values - want)) * grid.weight) / norms[(j, m)]
        return RelationCheck(j, k, l, m, dev)

    quads = [(j, k, l, m) for j in idx for k in idx for l in idx for m in idx]
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        checks = list(pool.map(one, quads))

    adjoint = 0.0
    for (a, b), pg in units.items():
        star = units[(b, a)].involution()
        keys = set(star.poly) | set(pg.poly)
        dev = max(abs(star.poly.get(key, 0.0) - pg.poly.get(key, 0.0)) for key in keys)
        ref = max(abs(c) for c in pg.poly.values())
        adjoint = max(adjoint, dev / ref)

    return RelationReport(
        checks=checks,
        max_residual=max(c.residual for c in checks),
        adjoint_residual=adjoint,
    )


def span_recovery_fraction(
    sample: GridFunction, grid: PhaseGrid, max_index: int = 12, cutoff: int = 16
) -> float:
    """Fraction of L2 mass of `sample` recovered by span{g_{k,l}: k,l <= max_index}.

    Finite proxy for the totality of the coherent kernels.
    """
    basis = []
    for a in range(max_index + 1):
        for b in range(max_index + 1):
            basis.append(matrix_unit(a, b, cutoff).evaluate(grid).values.ravel())
    Bmat = np.array(basis).T  # (nodes, basis)
    y = sample.values.ravel()
    coef, *_ = np.linalg.lstsq(Bmat, y, rcond=None)
    resid = y - Bmat @ coef
    return 1.0 - float(np.vdot(resid, resid).real / np.vdot(y, y).real)
