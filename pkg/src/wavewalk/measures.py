"""Path-space measures driven by a branch weight.

For a weight W on [0, 1) that sums to 1 over the N branches, each
starting point x carries a probability measure on infinite digit
strings whose cylinder masses are the running products of W along the
inverse-branch walk.  This module evaluates those masses exactly
(cylinder probabilities, expectations of finite-coordinate functions)
and by controlled truncation (the atom at the all-zero string, atoms at
embedded integers, the mass of the embedded integer lattice and of its
N**k-fold sublattices).

Truncation rule for infinite products: a product is declared converged
once `stall_window` consecutive factors sit within `convergence_tol` of
1, or once the running product falls below the underflow floor (then
the value is exactly 0).  Anything else is reported unconverged rather
than guessed.

All functions are pure; array sweeps use fixed-shape numpy reductions,
so results are deterministic for a given input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArityTooLarge
from .filters import FilterSpec, eval_weight, weight_array
from .ifs import DigitWord, PathSystem, frac

ATOM_UNDERFLOW = 1e-300

#: hard cap on the number of enumerated words in exact tree sums
MAX_TREE_WORDS = 1 << 20


@dataclass(frozen=True)
class TruncationPolicy:
    """Knobs for truncating infinite products and lattice sums."""

    product_depth: int = 40
    tail_cutoff_k: int = 2000
    convergence_tol: float = 1e-12
    stall_window: int = 8

    def __post_init__(self) -> None:
        if self.product_depth < 1:
            raise ValueError("product_depth must be >= 1")
        if self.tail_cutoff_k < 1:
            raise ValueError("tail_cutoff_k must be >= 1")
        if self.convergence_tol <= 0:
            raise ValueError("convergence_tol must be positive")
        if self.stall_window < 1:
            raise ValueError("stall_window must be >= 1")


@dataclass(frozen=True)
class MeasureValue:
    """A truncated measure evaluation plus its convergence bookkeeping.

    tail_bound is a heuristic indicator of the truncation residual
    (None when the evaluation did not converge), never a proven bound.
    route_gap, when present, is the absolute discrepancy between two
    independent evaluation routes of the same quantity.
    """

    value: float
    converged: bool
    tail_bound: float | None
    depth_used: int
    route_gap: float | None = None


def _check_scales(spec: FilterSpec, system: PathSystem) -> None:
    if spec.scale_n != system.scale_n:
        raise ValueError(
            f"filter scale {spec.scale_n} != path-system scale {system.scale_n}"
        )


# ----------------------------------------------------------------------
# infinite products along the zero branch


def _atom_array(spec, system, xs, policy):
    """Truncated products prod_n W(x / N**n) over an array of real x.

    Returns (values, converged, depth_used, stall_deviation) with the
    shape of xs.  Factors of an element stop being accumulated once its
    product stalls at 1-ish factors or collapses to exactly 0.
    """
    xs = np.asarray(xs, dtype=np.float64)
    shape = xs.shape
    flat = xs.ravel()
    n = system.scale_n
    p = np.ones_like(flat)
    done = np.zeros(flat.shape, dtype=bool)
    depth_used = np.zeros(flat.shape, dtype=np.int64)
    streak = np.zeros(flat.shape, dtype=np.int64)
    last_dev = np.zeros(flat.shape, dtype=np.float64)
    y = flat.copy()
    for step in range(1, policy.product_depth + 1):
        y = y / n
        f = weight_array(spec, y)
        live = ~done
        p = np.where(live, p * f, p)
        dev = np.abs(1.0 - f)
        # near-1 factors only count toward a stall once the argument is
        # inside |y| < 1/2: further halvings then stay near 0 and cannot
        # wrap back onto accidental maxima of the periodic weight
        near = (dev <= policy.convergence_tol) & (np.abs(y) < 0.5)
        streak = np.where(live, np.where(near, streak + 1, 0), streak)
        depth_used = np.where(live, step, depth_used)
        dead = live & (p < ATOM_UNDERFLOW)
        p = np.where(dead, 0.0, p)
        last_dev = np.where(dead, 0.0, np.where(live, dev, last_dev))
        done = done | dead | (live & (streak >= policy.stall_window))
        if done.all():
            break
    return (
        p.reshape(shape),
        done.reshape(shape),
        depth_used.reshape(shape),
        last_dev.reshape(shape),
    )


def zero_path_atom(spec: FilterSpec, system: PathSystem, x: float, policy: TruncationPolicy) -> MeasureValue:
    """Mass of the all-zero digit string: the product of W(x/N**n), n >= 1.

    x is a real number, not reduced mod 1; the weight is read
    1-periodically but the product genuinely depends on x itself.
    """
    _check_scales(spec, system)
    vals, conv, depth, dev = _atom_array(spec, system, np.array([x]), policy)
    converged = bool(conv[0])
    return MeasureValue(
        value=float(vals[0]),
        converged=converged,
        tail_bound=float(dev[0]) if converged else None,
        depth_used=int(depth[0]),
    )


def integer_atom(spec: FilterSpec, system: PathSystem, x: float, k: int, policy: TruncationPolicy) -> MeasureValue:
    """Atom at the embedded integer k, with a built-in two-route check.

    Route 1 multiplies the branch weights along the addressing word of
    k and finishes with the zero-path atom at the terminal point,
    tracked on the real line as (x + k) / N**len(word).  For negative k
    that terminal point is the real-line continuation of the modular
    word, which makes the value independent of the admissible word
    length.  Route 2 evaluates the zero-path atom at x + k directly;
    the two must agree and their gap is reported.
    """
    _check_scales(spec, system)
    word = system.word_of_int(k)
    n = system.scale_n
    prefix = 1.0
    y = frac(x)
    for d in word:
        y = system.branch(d, y)
        prefix *= eval_weight(spec, y)
    z = (x + k) / n ** len(word)
    tail = zero_path_atom(spec, system, z, policy)
    route1 = prefix * tail.value
    route2 = zero_path_atom(spec, system, x + k, policy)
    return MeasureValue(
        value=route1,
        converged=tail.converged and route2.converged,
        tail_bound=tail.tail_bound,
        depth_used=len(word) + tail.depth_used,
        route_gap=abs(route1 - route2.value),
    )


# ----------------------------------------------------------------------
# lattice masses


def harmonic_on_grid(spec, system, xs, policy, chunk: int = 1 << 19) -> np.ndarray:
    """sum_{|k| <= K} atom(x + k) for every x in xs, vectorized.

    This is the minimal harmonic function of the transfer operator,
    truncated at K = policy.tail_cutoff_k.
    """
    _check_scales(spec, system)
    xs = np.asarray(xs, dtype=np.float64)
    flat = xs.ravel()
    kk = policy.tail_cutoff_k
    out = np.zeros(flat.shape, dtype=np.float64)
    step = max(1, chunk // max(1, flat.size))
    for k0 in range(-kk, kk + 1, step):
        ks = np.arange(k0, min(k0 + step, kk + 1), dtype=np.float64)
        vals, _, _, _ = _atom_array(spec, system, flat[:, None] + ks[None, :], policy)
        out += vals.sum(axis=1)
    return out.reshape(xs.shape)


def lattice_mass(spec: FilterSpec, system: PathSystem, x: float, policy: TruncationPolicy) -> MeasureValue:
    """Mass of the embedded integer lattice: sum of atom(x + k), |k| <= K.

    The reported tail_bound is the contribution of the outermost decade
    of |k| (a conservative indicator for polynomially decaying atoms,
    not a proven bound).  The sum is flagged unconverged if any atom
    failed to converge or the decade sums stopped decreasing.
    """
    _check_scales(spec, system)
    kk = policy.tail_cutoff_k
    ks = np.arange(-kk, kk + 1, dtype=np.float64)
    vals, conv, depth, _ = _atom_array(spec, system, x + ks, policy)
    value = float(np.sum(vals))
    absk = np.abs(ks)
    converged = bool(conv.all())
    tail = None
    if kk >= 10:
        outer = float(np.sum(vals[absk > kk // 10]))
        tail = outer
        if kk >= 100:
            inner = float(np.sum(vals[(absk > kk // 100) & (absk <= kk // 10)]))
            if outer > inner + 1e-15:
                converged = False
    return MeasureValue(
        value=value,
        converged=converged,
        tail_bound=tail if converged else None,
        depth_used=int(depth.max()),
    )


def scaled_lattice_mass(spec: FilterSpec, system: PathSystem, x: float, k: int, policy: TruncationPolicy) -> MeasureValue:
    """Mass of the embedded sublattice N**k * Z, by two routes.

    The returned value factors the mass as
    (prod_{j<=k} W(x/N**j)) * lattice_mass(x/N**k); route_gap reports
    the discrepancy against direct summation of atoms over the
    sublattice with the same truncation window.
    """
    _check_scales(spec, system)
    if k < 0:
        raise ValueError("sublattice exponent must be >= 0")
    n = system.scale_n
    prefix = 1.0
    y = float(x)
    for _ in range(k):
        y = y / n
        prefix *= eval_weight(spec, y)
    base = lattice_mass(spec, system, y, policy)
    value = prefix * base.value
    kk = policy.tail_cutoff_k
    js = np.arange(-kk, kk + 1, dtype=np.float64)
    direct_vals, direct_conv, _, _ = _atom_array(
        spec, system, x + (float(n) ** k) * js, policy
    )
    direct = float(np.sum(direct_vals))
    return MeasureValue(
        value=value,
        converged=base.converged and bool(direct_conv.all()),
        tail_bound=(prefix * base.tail_bound) if base.tail_bound is not None else None,
        depth_used=k + base.depth_used,
        route_gap=abs(value - direct),
    )


# ----------------------------------------------------------------------
# finite-coordinate functions and exact expectations


@dataclass(frozen=True, eq=False)
class FiniteCoordFn:
    """A function of the first `arity` digits, tabulated over all words.

    The flat table index treats the first coordinate as most
    significant: index(w) = w_1*N**(n-1) + ... + w_n.
    """

    arity: int
    n_branches: int
    table: np.ndarray

    def __post_init__(self) -> None:
        expected = self.n_branches**self.arity
        if self.table.shape != (expected,):
            raise ValueError(f"table must have length {expected}")

    @classmethod
    def constant(cls, c, arity: int, n_branches: int) -> "FiniteCoordFn":
        return cls(arity, n_branches, np.full(n_branches**arity, c, dtype=np.complex128))

    @classmethod
    def indicator(cls, word: DigitWord, n_branches: int) -> "FiniteCoordFn":
        n = len(word)
        table = np.zeros(n_branches**n, dtype=np.complex128)
        idx = 0
        for d in word:
            idx = idx * n_branches + d
        table[idx] = 1.0
        return cls(n, n_branches, table)

    @classmethod
    def from_callable(cls, fn, arity: int, n_branches: int) -> "FiniteCoordFn":
        """Tabulate fn(word_tuple) over all words of the given arity."""
        words = np.arange(n_branches**arity)
        table = np.empty(n_branches**arity, dtype=np.complex128)
        for i in words:
            digits = []
            v = int(i)
            for _ in range(arity):
                v, d = divmod(v, n_branches)
                digits.append(d)
            table[i] = fn(tuple(reversed(digits)))
        return cls(arity, n_branches, table)

    def value_at(self, word) -> complex:
        idx = 0
        for d in word:
            idx = idx * self.n_branches + d
        return complex(self.table[idx])

    def lifted(self) -> "FiniteCoordFn":
        """The same function viewed with one more (ignored) coordinate."""
        return FiniteCoordFn(self.arity + 1, self.n_branches, np.repeat(self.table, self.n_branches))

    def slice_first(self, i: int) -> "FiniteCoordFn":
        """The section w -> f(i, w) of one lower arity."""
        if self.arity < 1:
            raise ValueError("cannot slice an arity-0 function")
        block = self.n_branches ** (self.arity - 1)
        return FiniteCoordFn(self.arity - 1, self.n_branches, self.table[i * block : (i + 1) * block])


def cylinder_prob(spec: FilterSpec, system: PathSystem, x: float, word: DigitWord) -> float:
    """Product of branch weights along the word: the cylinder mass at x.

    Assumes the partition check has been run; the value is a
    probability only for weights that sum to 1 over the branches.
    """
    _check_scales(spec, system)
    p = 1.0
    y = frac(x)
    for d in word:
        y = system.branch(d, y)
        p *= eval_weight(spec, y)
    return p


def _chain_weights(spec, system, x, arity):
    """Cylinder weights of all words of the given length, flat-indexed."""
    n = system.scale_n
    count = n**arity
    if count > MAX_TREE_WORDS:
        raise ArityTooLarge(f"{n}**{arity} words exceed the tree budget {MAX_TREE_WORDS}")
    idx = np.arange(count)
    weights = np.ones(count, dtype=np.float64)
    y = np.full(count, frac(x), dtype=np.float64)
    for s in range(1, arity + 1):
        digit = (idx // n ** (arity - s)) % n
        y = (y + digit) / n
        weights *= weight_array(spec, y)
    return weights


def expect_finite(spec: FilterSpec, system: PathSystem, x: float, f: FiniteCoordFn) -> complex:
    """Expectation of a finite-coordinate function: the exact tree sum."""
    _check_scales(spec, system)
    if f.n_branches != system.scale_n:
        raise ValueError("function branch count does not match the system")
    if f.arity == 0:
        return complex(f.table[0])
    weights = _chain_weights(spec, system, x, f.arity)
    return complex(np.sum(weights * f.table))


def consistency_check(spec: FilterSpec, system: PathSystem, x: float, f: FiniteCoordFn) -> float:
    """Discrepancy between the arity-n and lifted arity-(n+1) expectations.

    Zero (up to rounding) exactly when the weight is a partition of
    unity over the branches.
    """
    a = expect_finite(spec, system, x, f)
    b = expect_finite(spec, system, x, f.lifted())
    return abs(a - b)


def refinement_check(spec: FilterSpec, system: PathSystem, x: float, f: FiniteCoordFn) -> float:
    """Residual of the one-step self-similarity of the measure family.

    Compares sum_i W(branch_i x) * E_{branch_i x}[f(i, .)] against
    E_x[f].
    """
    _check_scales(spec, system)
    if f.arity < 1:
        raise ValueError("refinement check needs arity >= 1")
    total = 0.0 + 0.0j
    for i in range(system.scale_n):
        yi = system.branch(i, frac(x))
        total += eval_weight(spec, yi) * expect_finite(spec, system, yi, f.slice_first(i))
    return abs(total - expect_finite(spec, system, x, f))


# ----------------------------------------------------------------------
# the negative-integer embedding, measured rather than assumed


@dataclass(frozen=True)
class NegativeEmbeddingReport:
    """Atom of a negative integer computed with every admissible word length.

    values[i] follows the addressing word of length n_values[i] + 1 with
    the terminal atom tracked on the real line; literal_values[i] is the
    atom of the corresponding finite word with a plain zero tail, which
    is what a naive fixed-length reading would give.  reference is the
    direct atom at x + k.
    """

    x: float
    k: int
    n_values: tuple[int, ...]
    values: tuple[float, ...]
    literal_values: tuple[float, ...]
    reference: float
    max_pairwise: float
    max_vs_reference: float


def check_negative_embedding(
    spec: FilterSpec,
    system: PathSystem,
    x: float,
    k: int,
    n_values,
    policy: TruncationPolicy,
) -> NegativeEmbeddingReport:
    """Measure how the negative-integer atom depends on the word length."""
    _check_scales(spec, system)
    if k >= 0:
        raise ValueError("embedding check is for negative k")
    n = system.scale_n
    vals = []
    literal = []
    for nn in n_values:
        if n**nn < -k:
            raise ValueError(f"n={nn} is not admissible for k={k}")
        shifted = n ** (nn + 1) + k
        word = system.digits_of(shifted)
        prefix = 1.0
        y = frac(x)
        for d in word:
            y = system.branch(d, y)
            prefix *= eval_weight(spec, y)
        z = (x + k) / n ** len(word)
        vals.append(prefix * zero_path_atom(spec, system, z, policy).value)
        literal.append(zero_path_atom(spec, system, x + shifted, policy).value)
    ref = zero_path_atom(spec, system, x + k, policy).value
    arr = np.asarray(vals)
    max_pair = float(np.max(arr) - np.min(arr)) if len(arr) else 0.0
    return NegativeEmbeddingReport(
        x=x,
        k=k,
        n_values=tuple(int(v) for v in n_values),
        values=tuple(float(v) for v in vals),
        literal_values=tuple(float(v) for v in literal),
        reference=float(ref),
        max_pairwise=max_pair,
        max_vs_reference=float(np.max(np.abs(arr - ref))) if len(arr) else 0.0,
    )
