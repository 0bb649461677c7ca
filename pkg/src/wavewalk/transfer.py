"""The transfer operator of the branch system and its grid iterations.

(Rg)(x) = sum_j W((x+j)/N) g((x+j)/N) summed over the N branches.
Exact powers are tree sums over all branch words; grid versions carry
functions as piecewise-constant values on the level-L N-adic cells.
The adjoint iteration moves cell masses along the walk and renormalizes,
approximating the stationary (Ruelle) measure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DepthTooLarge
from .filters import FilterSpec, eval_weight, weight_array
from .ifs import PathSystem, frac
from .measures import MAX_TREE_WORDS, TruncationPolicy, harmonic_on_grid


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Values of a 1-periodic function on the level-L N-adic grid.

    values[m] is the value at m / N**level, read back as a
    piecewise-constant function on the cell [m/N**L, (m+1)/N**L).
    """

    level: int
    n_branches: int
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.level < 0:
            raise ValueError("level must be >= 0")
        expected = self.n_branches**self.level
        if self.values.shape != (expected,):
            raise ValueError(f"values must have length {expected}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("grid values must be finite")

    @property
    def cells(self) -> int:
        return self.n_branches**self.level

    def grid_points(self) -> np.ndarray:
        return np.arange(self.cells, dtype=np.float64) / self.cells

    def value_at(self, x: float) -> float:
        return float(self.values[int(frac(x) * self.cells) % self.cells])

    def values_at(self, xs) -> np.ndarray:
        xs = np.mod(np.asarray(xs, dtype=np.float64), 1.0)
        xs[xs >= 1.0] = 0.0
        idx = np.minimum((xs * self.cells).astype(np.int64), self.cells - 1)
        return self.values[idx]

    @classmethod
    def from_callable(cls, fn, level: int, n_branches: int) -> "GridFunction":
        pts = np.arange(n_branches**level, dtype=np.float64) / n_branches**level
        vals = np.asarray([float(fn(p)) for p in pts])
        return cls(level, n_branches, vals)


def harmonic_gridfunction(
    spec: FilterSpec, system: PathSystem, level: int, policy: TruncationPolicy
) -> GridFunction:
    """Truncated lattice-mass harmonic function sampled on the level-L grid."""
    cells = system.scale_n**level
    pts = np.arange(cells, dtype=np.float64) / cells
    return GridFunction(level, system.scale_n, harmonic_on_grid(spec, system, pts, policy))


def apply_transfer(spec: FilterSpec, system: PathSystem, g, x: float) -> float:
    """One application of the transfer operator at a point.

    g may be a GridFunction (read piecewise-constantly) or any callable.
    """
    read = g.value_at if isinstance(g, GridFunction) else g
    n = system.scale_n
    return float(
        sum(eval_weight(spec, (x + j) / n) * read((x + j) / n) for j in range(n))
    )


def apply_transfer_n(spec: FilterSpec, system: PathSystem, g, x: float, n: int) -> float:
    """Exact n-th power via the full preimage tree.

    The N**n preimages of x are (x + k)/N**n; each carries the product
    of weights along its forward orbit.  n = 0 returns g(x).
    """
    if n < 0:
        raise ValueError("power must be >= 0")
    read = g.value_at if isinstance(g, GridFunction) else g
    if n == 0:
        return float(read(frac(x)))
    nb = system.scale_n
    count = nb**n
    if count > MAX_TREE_WORDS:
        raise DepthTooLarge(f"{nb}**{n} preimages exceed the tree budget")
    ys = (frac(x) + np.arange(count, dtype=np.float64)) / count
    weights = np.ones(count, dtype=np.float64)
    orbit = ys.copy()
    for _ in range(n):
        weights *= weight_array(spec, orbit)
        orbit = np.mod(orbit * nb, 1.0)
    gvals = np.asarray([read(y) for y in ys], dtype=np.float64)
    return float(np.sum(weights * gvals))


def harmonic_residual(
    spec: FilterSpec,
    system: PathSystem,
    h: GridFunction,
    eval_level: int | None = None,
) -> float:
    """Max of |(Rh)(x) - h(x)| over the level-`eval_level` grid points.

    Values of h at the branch points are read by piecewise-constant
    extension from h's own grid.  With eval_level = h.level - 1 every
    read lands exactly on a grid point of h, so the residual measures
    the function rather than the interpolation.
    """
    lev = h.level if eval_level is None else eval_level
    if lev < 1:
        raise ValueError("need a grid of level >= 1")
    if lev > h.level:
        raise ValueError("cannot evaluate on a finer grid than h carries")
    n = system.scale_n
    cells = n**lev
    xs = np.arange(cells, dtype=np.float64) / cells
    acc = np.zeros(cells, dtype=np.float64)
    for j in range(n):
        ys = (xs + j) / n
        acc += weight_array(spec, ys) * h.values_at(ys)
    return float(np.max(np.abs(acc - h.values_at(xs))))


def _grid_step(spec: FilterSpec, system: PathSystem, vals: np.ndarray, level: int) -> np.ndarray:
    """One grid-transfer application of the operator to cell values."""
    n = system.scale_n
    cells = n**level
    m = np.arange(cells, dtype=np.int64)
    out = np.zeros(cells, dtype=np.float64)
    for j in range(n):
        pts = (m + j * cells).astype(np.float64) / (n * cells)
        src = (m + j * cells) // n
        out += weight_array(spec, pts) * vals[src]
    return out


def power_iterate(
    spec: FilterSpec,
    system: PathSystem,
    level: int,
    iters: int,
) -> tuple[GridFunction, np.ndarray]:
    """Iterate g <- Rg from the constant 1 on the level-L grid.

    Returns the final grid function and the per-iteration sup change.
    For a weight that is an exact partition of unity the constant 1 is
    already a fixed point, so the sup change certifies the partition;
    no convergence toward the minimal harmonic function is claimed.
    """
    if level < 1 or iters < 1:
        raise ValueError("need level >= 1 and iters >= 1")
    vals = np.ones(system.scale_n**level, dtype=np.float64)
    history = np.empty(iters, dtype=np.float64)
    for t in range(iters):
        new = _grid_step(spec, system, vals, level)
        history[t] = float(np.max(np.abs(new - vals)))
        vals = new
    return GridFunction(level, system.scale_n, vals), history


def ruelle_measure(
    spec: FilterSpec,
    system: PathSystem,
    level: int,
    iters: int,
) -> tuple[GridFunction, float]:
    """Stationary cell masses of the walk, by adjoint power iteration.

    Mass at the cell of x flows to the cells of the branch points
    (x+j)/N weighted by W((x+j)/N); masses are renormalized to total 1
    each sweep.  Returns the final masses and the last L1 change.
    """
    if level < 1 or iters < 1:
        raise ValueError("need level >= 1 and iters >= 1")
    n = system.scale_n
    cells = n**level
    m = np.arange(cells, dtype=np.int64)
    targets = []
    flow_w = []
    for j in range(n):
        pts = (m + j * cells).astype(np.float64) / (n * cells)
        targets.append((m + j * cells) // n)
        flow_w.append(weight_array(spec, pts))
    mass = np.full(cells, 1.0 / cells, dtype=np.float64)
    residual = np.inf
    for _ in range(iters):
        new = np.zeros(cells, dtype=np.float64)
        for j in range(n):
            np.add.at(new, targets[j], mass * flow_w[j])
        total = new.sum()
        if total > 0:
            new /= total
        residual = float(np.abs(new - mass).sum())
        mass = new
    return GridFunction(level, system.scale_n, mass), residual
