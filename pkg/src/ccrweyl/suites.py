"""Named invariant suites behind the `verify` command.

Each suite returns a deterministic list of CheckResult lines; `run_suites`
executes several suites concurrently but merges reports in a fixed order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import fock as fk
from . import gaussian as ga
from . import spectral as sp
from . import units as un
from .grid import PhaseGrid, relative_l1_error, twisted_convolve
from .units import worker_count

SUITE_ORDER = ("units", "gaussian", "spectral", "fock")


@dataclass(frozen=True)
class RunConfig:
    """Grid, truncation and tolerance settings for a verification run."""

    grid_L: float = 10.0
    grid_N: int = 96
    dim: int = 32
    tol: float = 2e-4
    seed: int = 0
    max_index: int = 4

    def __post_init__(self):
        if self.grid_L <= 0 or self.grid_N < 8 or self.dim < 2:
            raise ValueError("invalid grid or truncation configuration")
        if self.tol <= 0:
            raise ValueError("tolerances must be positive")

    def grid(self, n: int = 1) -> PhaseGrid:
        return PhaseGrid(n=n, L=self.grid_L, N=self.grid_N)


@dataclass(frozen=True)
class CheckResult:
    name: str
    identity: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol

    def line(self) -> str:
        flag = "pass" if self.passed else "FAIL"
        return (
            f"[{flag}] {self.name}: {self.identity}  "
            f"residual={self.residual:.3e} tol={self.tol:.1e}"
        )


def _rng(cfg: RunConfig, salt: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, salt])


def suite_units(cfg: RunConfig) -> list:
    grid = cfg.grid()
    out = []

    report = un.verify_matrix_unit_relations(cfg.max_index, grid)
    out.append(
        CheckResult(
            "units.relations",
            f"g_jk g_lm = delta_kl g_jm for indices <= {cfg.max_index} "
            f"({len(report.checks)} relations)",
            report.max_residual,
            cfg.tol,
        )
    )
    out.append(
        CheckResult(
            "units.adjoint",
            "g_kj* = g_jk (closed-form coefficients)",
            report.adjoint_residual,
            1e-12,
        )
    )

    rng = _rng(cfg, 1)
    worst = 0.0
    for _ in range(20):
        z, w, z2, w2 = (rng.normal(scale=0.8) + 1j * rng.normal(scale=0.8) for _ in range(4))
        lhs = ga.product(un.coherent_kernel(z, w).body, un.coherent_kernel(z2, w2).body)
        rhs_body = un.coherent_kernel(z, w2).body
        rhs = ga.GaussianElement(
            n=1, c=np.exp(w * z2) * rhs_body.c, Q=rhs_body.Q, l=rhs_body.l
        )
        scale = max(abs(lhs.c), abs(rhs.c))
        dev = max(
            abs(lhs.c - rhs.c) / scale,
            np.abs(lhs.Q - rhs.Q).max(),
            np.abs(lhs.l - rhs.l).max(initial=0.0),
        )
        worst = max(worst, dev)
    out.append(
        CheckResult(
            "units.generating",
            "g_{z,w} g_{z',w'} = e^{w z'} g_{z,w'} (20 random quadruples)",
            worst,
            1e-10,
        )
    )

    oracle_dev = 0.0
    for k, l in ((0, 0), (1, 2)):
        got = un.cauchy_matrix_unit(k, l, grid)
        want = un.matrix_unit(k, l).evaluate(grid)
        oracle_dev = max(oracle_dev, relative_l1_error(got, want))
    out.append(
        CheckResult(
            "units.contour-oracle",
            "phase-lattice extraction of g_kl matches Taylor coefficients",
            oracle_dev,
            1e-8,
        )
    )
    return out


def suite_gaussian(cfg: RunConfig) -> list:
    grid = cfg.grid()
    out = []

    g = ga.minimal_projection(1)
    prod = ga.product(g, g)
    dev = 0.0 if ga.isclose(prod, g, rtol=1e-12) else max(
        abs(prod.c - g.c), np.abs(prod.Q - g.Q).max()
    )
    out.append(CheckResult("gaussian.projection", "g * g = g (closed form)", dev, 1e-12))

    gs = ga.evaluate(g, grid)
    conv = twisted_convolve(gs, gs)
    out.append(
        CheckResult(
            "gaussian.projection-grid",
            "sampled g convolved with itself reproduces g",
            relative_l1_error(conv, gs),
            cfg.tol,
        )
    )

    rng = _rng(cfg, 2)
    worst = 0.0
    for _ in range(30):
        alpha, beta = rng.uniform(0.2, 5.0, size=2)
        got = ga.product(ga.standard_gaussian(alpha), ga.standard_gaussian(beta))
        gamma = (alpha + beta) / (1.0 + alpha * beta)
        want_body = ga.standard_gaussian(gamma)
        cwant = 4.0 * np.pi * alpha * beta / (alpha + beta)
        worst = max(
            worst,
            abs(got.c - cwant) / abs(cwant),
            np.abs(got.Q - want_body.Q).max() / np.abs(want_body.Q).max(),
        )
    out.append(
        CheckResult(
            "gaussian.product-law",
            "g_a g_b = 4 pi a b/(a+b) g_{(a+b)/(1+ab)} (30 random pairs)",
            worst,
            1e-10,
        )
    )

    worst = 0.0
    for _ in range(20):
        x, y = rng.uniform(-2.0, 2.0, size=2)
        shift = ga.WeylShift(v=np.array([x, y]), w=np.zeros(2))
        mid = ga.multiplier("left", shift, g)
        lhs = ga.product(g, mid)
        scale = np.exp(-(x * x + y * y) / 4.0)
        want = ga.GaussianElement(n=1, c=scale * g.c, Q=g.Q, l=g.l)
        worst = max(worst, 0.0 if ga.isclose(lhs, want, rtol=1e-12) else abs(lhs.c - want.c))
    out.append(
        CheckResult(
            "gaussian.minimality",
            "g e^{i(xp+yq)} g = e^{-(x^2+y^2)/4} g (20 random shifts)",
            worst,
            1e-12,
        )
    )

    worst = 0.0
    for r in (2, 3, 4):
        base = ga.standard_gaussian(np.tanh(0.7))
        via_formula = ga.power(base, r)
        acc = base
        for _ in range(r - 1):
            acc = ga.product(acc, base)
        worst = max(
            worst,
            abs(via_formula.c - acc.c) / abs(acc.c),
            np.abs(via_formula.Q - acc.Q).max(),
        )
    out.append(
        CheckResult(
            "gaussian.power",
            "power(g_gamma, r) equals repeated products for r = 2, 3, 4",
            worst,
            1e-10,
        )
    )

    worst = 0.0
    for _ in range(10):
        lam = rng.normal(size=2)
        a = ga.standard_gaussian(rng.uniform(0.5, 2.0))
        b = ga.standard_gaussian(rng.uniform(0.5, 2.0))
        lhs = ga.shift_automorphism(lam, ga.product(a, b))
        rhs = ga.product(ga.shift_automorphism(lam, a), ga.shift_automorphism(lam, b))
        worst = max(worst, 0.0 if ga.isclose(lhs, rhs, rtol=1e-12) else 1.0)
    out.append(
        CheckResult(
            "gaussian.shift-automorphism",
            "shift(lam, f h) = shift(lam, f) shift(lam, h)",
            worst,
            1e-12,
        )
    )
    return out


def suite_spectral(cfg: RunConfig) -> list:
    grid = cfg.grid()
    out = []

    worst = 0.0
    for gamma in (0.5, 3.0, 2.0 + 1.0j):
        rho = abs(sp.cayley_ratio(gamma))
        K = max(10, int(np.ceil(np.log(1e-6 * (1 - rho)) / np.log(rho))))
        partial = sp.partial_sum_samples(gamma, K, grid)
        want = ga.evaluate(ga.standard_gaussian(gamma), grid)
        worst = max(worst, relative_l1_error(partial, want))
    out.append(
        CheckResult(
            "spectral.partial-sums",
            "sum_k lambda_k g_kk converges to g_gamma on the grid",
            worst,
            cfg.tol,
        )
    )

    worst = 0.0
    for gamma in (0.5, 1.0, 3.0, 2.0 + 1.0j):
        f = ga.standard_gaussian(gamma)
        worst = max(worst, abs(sp.trace_gaussian(f) - 2.0 * np.pi) / (2.0 * np.pi))
    out.append(
        CheckResult("spectral.trace", "tr(g_gamma) = 2 pi for all Re gamma > 0", worst, 1e-12)
    )

    rng = _rng(cfg, 3)
    worst = 0.0
    for _ in range(10):
        f = ga.standard_gaussian(rng.uniform(0.5, 2.0))
        fs = ga.evaluate(f, grid)
        lhs = (2.0 * np.pi) * np.sum(np.abs(fs.values) ** 2) * grid.weight
        star = twisted_convolve(ga.evaluate(ga.involution(f), grid), fs)
        tr = (2.0 * np.pi) * star.values[grid.origin_index, grid.origin_index].real
        worst = max(worst, abs(tr - lhs) / abs(lhs))
    out.append(
        CheckResult(
            "spectral.trace-l2",
            "tr(f* f) = 2 pi * sum |f|^2 (grid quadrature, 10 random elements)",
            worst,
            cfg.tol,
        )
    )

    worst = max(
        sp.integral_representation_check(3.0, grid),
        sp.integral_representation_check(5.0, grid),
    )
    out.append(
        CheckResult(
            "spectral.integral-representation",
            "g_gamma equals its coherent-kernel integral for gamma = 3, 5",
            worst,
            1e-3,
        )
    )

    sweep_ok = all(
        sp.free_state_matrix(gamma)[1] == (gamma <= 1.0)
        == sp.is_positive(ga.standard_gaussian(gamma))
        for gamma in np.arange(0.1, 3.05, 0.1)
    )
    out.append(
        CheckResult(
            "spectral.free-state",
            "psd(S(gamma)) iff gamma <= 1 iff g_gamma positive (sweep)",
            0.0 if sweep_ok else 1.0,
            0.5,
        )
    )
    return out


def suite_fock(cfg: RunConfig) -> list:
    grid = cfg.grid()
    trunc = fk.FockTruncation(cfg.dim)
    out = []

    worst = 0.0
    for x, y in ((0.7, -0.3), (1.5, 1.1)):
        z = (x + 1j * y) / np.sqrt(2.0)
        got = fk.displacement_matrix(z, trunc).matrix
        want = fk.displacement_matrix_quadrature(x, y, trunc).matrix
        worst = max(worst, float(np.abs(got - want).max()))
    out.append(
        CheckResult(
            "fock.displacement",
            "Laguerre displacement entries match wave-mechanics quadrature",
            worst,
            1e-10,
        )
    )

    # truncation spreads a displaced state to level ~ m + |z|^2; block 8 of a
    # D=32 matrix is clear of that front for |z| <= 2
    safe = 8
    worst = 0.0
    for z in (0.5, 1.0, 1.5 + 0.5j, 2.0):
        U = fk.displacement_matrix(z, fk.FockTruncation(max(cfg.dim, 32))).matrix
        V = fk.displacement_matrix(-z, fk.FockTruncation(max(cfg.dim, 32))).matrix
        block = (U @ V)[:safe, :safe] - np.eye(safe)
        worst = max(worst, float(np.abs(block).max()))
    out.append(
        CheckResult(
            "fock.unitarity",
            "U(z) U(-z) = 1 on the truncation-safe block, |z| <= 2",
            worst,
            1e-6,
        )
    )

    g = ga.minimal_projection(1)
    P = fk.represent(g, trunc, grid).matrix
    want = np.zeros_like(P)
    want[0, 0] = 1.0
    out.append(
        CheckResult(
            "fock.vacuum",
            "pi(g) is the rank-one vacuum projection",
            float(np.abs(P - want).max()),
            cfg.tol,
        )
    )

    worst = 0.0
    for k, l in ((0, 1), (2, 2), (1, 3)):
        M = fk.represent(un.matrix_unit(k, l), trunc, grid).matrix
        want = np.zeros_like(M)
        want[k, l] = 1.0
        worst = max(worst, float(np.abs(M - want).max()))
    out.append(
        CheckResult(
            "fock.matrix-units",
            "pi(g_kl) is the elementary matrix E_kl",
            worst,
            cfg.tol,
        )
    )

    spec = sp.spectrum_single(3.0, cutoff=8).eigenvalues().real
    evals = fk.fock_spectrum(ga.standard_gaussian(3.0), trunc, grid).real
    pairs = np.sort(np.abs(evals))[::-1][: spec.size]
    worst = float(np.abs(np.sort(np.abs(spec))[::-1] - pairs).max() / np.abs(spec).max())
    out.append(
        CheckResult(
            "fock.spectrum",
            "truncated eigenvalues of pi(g_3) match 2 pi (2g/(1+g)) rho^k",
            worst,
            cfg.tol,
        )
    )

    worst = max(fk.mehler_check(1.0), fk.mehler_check(3.0))
    out.append(
        CheckResult(
            "fock.mehler",
            "number-basis kernel of pi(g_gamma) matches direct quadrature",
            worst,
            1e-4,
        )
    )
    return out


SUITES = {
    "units": suite_units,
    "gaussian": suite_gaussian,
    "spectral": suite_spectral,
    "fock": suite_fock,
}


def run_suites(names, cfg: RunConfig) -> list:
    """Run the named suites concurrently; results merge in SUITE_ORDER."""
    names = [n for n in SUITE_ORDER if n in set(names)]
    with ThreadPoolExecutor(max_workers=min(worker_count(), len(names))) as pool:
        futures = {name: pool.submit(SUITES[name], cfg) for name in names}
        results = []
        for name in names:
            results.extend(futures[name].result())
    return results
