"""JSON / CSV / binary interchange for elements, grids and results.

All JSON payloads carry "schema": 1.  Complex scalars are [re, im] pairs;
complex matrices and vectors are row-major lists of [re, im] pairs.  CSV
uses 17 significant digits so replayed oracles compare bitwise.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .gaussian import GaussianElement, standard_gaussian
from .grid import GridFunction, PhaseGrid
from .symplectic import WilliamsonResult

SCHEMA = 1
FLOAT_FMT = "%.17g"


def _c2pair(z: complex) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _pair2c(p) -> complex:
    return complex(p[0], p[1])


def _carray2pairs(a: np.ndarray) -> list:
    return [_c2pair(z) for z in np.asarray(a, dtype=complex).ravel()]


def _pairs2carray(pairs, shape) -> np.ndarray:
    return np.array([_pair2c(p) for p in pairs], dtype=complex).reshape(shape)


def gaussian_to_json(f: GaussianElement) -> dict:
    return {
        "schema": SCHEMA,
        "n": f.n,
        "c": _c2pair(f.c),
        "Q": _carray2pairs(f.Q),
        "l": _carray2pairs(f.l),
    }


def gaussian_from_json(obj: dict) -> GaussianElement:
    if "gamma" in obj:
        gamma = obj["gamma"]
        if isinstance(gamma, (list, tuple)):
            gamma = _pair2c(gamma)
        return standard_gaussian(gamma, n=int(obj.get("n", 1)))
    n = int(obj["n"])
    dim = 2 * n
    return GaussianElement(
        n=n,
        c=_pair2c(obj["c"]),
        Q=_pairs2carray(obj["Q"], (dim, dim)),
        l=_pairs2carray(obj["l"], (dim,)),
    )


def quadratic_part_from_json(obj: dict) -> np.ndarray:
    n = int(obj["n"])
    dim = 2 * n
    return np.array(obj["matrix"], dtype=float).reshape(dim, dim)


def williamson_to_json(res: WilliamsonResult) -> dict:
    return {
        "schema": SCHEMA,
        "gammas": [float(g) for g in res.gammas],
        "transform": [float(x) for x in res.transform.ravel()],
    }


def grid_to_json(f: GridFunction) -> dict:
    vals = f.values.ravel()
    inter = np.empty(2 * vals.size)
    inter[0::2] = vals.real
    inter[1::2] = vals.imag
    return {
        "schema": SCHEMA,
        "grid": {"n": f.grid.n, "L": f.grid.L, "N": f.grid.N},
        "values": inter.tolist(),
    }


def grid_from_json(obj: dict) -> GridFunction:
    g = obj["grid"]
    grid = PhaseGrid(n=int(g["n"]), L=float(g["L"]), N=int(g["N"]))
    inter = np.asarray(obj["values"], dtype=float)
    vals = (inter[0::2] + 1j * inter[1::2]).reshape(grid.shape)
    return GridFunction(grid, vals)


def grid_to_npz(f: GridFunction, path):
    np.savez_compressed(
        path, n=f.grid.n, L=f.grid.L, N=f.grid.N, values=f.values
    )


def grid_from_npz(path) -> GridFunction:
    data = np.load(path)
    grid = PhaseGrid(n=int(data["n"]), L=float(data["L"]), N=int(data["N"]))
    return GridFunction(grid, data["values"])


def grid_slice_to_csv(f: GridFunction, path, axis_values: dict | None = None):
    """Write a 2-D slice (n=1: the whole function) as x,y,re,im rows."""
    if f.grid.n != 1 and not axis_values:
        raise ValueError("for n > 1 supply fixed indices for the remaining axes")
    vals = f.values
    if f.grid.n > 1:
        sl = [slice(None)] * (2 * f.grid.n)
        for ax, idx in axis_values.items():
            sl[int(ax)] = int(idx)
        vals = vals[tuple(sl)]
        if vals.ndim != 2:
            raise ValueError("slice must leave exactly two free axes")
    ax = f.grid.axis
    with open(path, "w") as fh:
        fh.write("x,y,re,im\n")
        for i in range(vals.shape[0]):
            for j in range(vals.shape[1]):
                fh.write(
                    ("%s,%s,%s,%s\n" % ((FLOAT_FMT,) * 4))
                    % (ax[i], ax[j], vals[i, j].real, vals[i, j].imag)
                )


def spectrum_rows(entries) -> list:
    return [
        {"index": list(idx), "re": lam.real, "im": lam.imag} for idx, lam in entries
    ]


def spectrum_to_csv(entries, path):
    with open(path, "w") as fh:
        fh.write("index,re,im\n")
        for idx, lam in entries:
            tag = ";".join(str(i) for i in idx)
            fh.write(("%s," + FLOAT_FMT + "," + FLOAT_FMT + "\n") % (tag, lam.real, lam.imag))


def write_json(obj, path):
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def read_json(path):
    return json.loads(Path(path).read_text())


def heatmap(f: GridFunction, path):
    """Two-panel |f| and arg f heatmap (SVG or PNG by extension), n=1 only."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    if f.grid.n != 1:
        raise ValueError("heatmaps are rendered for n=1 grids only")
    extent = [f.grid.axis[0], f.grid.axis[-1], f.grid.axis[0], f.grid.axis[-1]]
    fig, axes = plt.subplots(1, 2, figsize=(9, 4))
    im0 = axes[0].imshow(
        np.abs(f.values).T, origin="lower", extent=extent, cmap="viridis"
    )
    axes[0].set_title("|f|")
    fig.colorbar(im0, ax=axes[0])
    im1 = axes[1].imshow(
        np.angle(f.values).T, origin="lower", extent=extent, cmap="twilight",
        vmin=-np.pi, vmax=np.pi,
    )
    axes[1].set_title("arg f")
    fig.colorbar(im1, ax=axes[1])
    for ax in axes:
        ax.set_xlabel("x")
        ax.set_ylabel("y")
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None} if str(path).endswith(".svg") else None)
    plt.close(fig)
