"""Filter specifications and their coefficient-level sanity checks.

A filter is either a finite list of masking coefficients a_k (complex,
arbitrary integer indices, normalized so that sum(a_k) = 1 for a
low-pass filter) or a tabulated piecewise-constant weight W on [0, 1).
The weight of a coefficient filter is W = |m|^2 where
m(x) = sum_k a_k exp(-i 2 pi k x).

Checks offered:
  * partition: sum of W over the N branch points (x + j)/N equals 1;
  * quadrature: sum_k conj(a_k) a_{k+2n} = delta_{0,n}/2   (dyadic only);
  * low-pass:   sum_k a_k = 1.

FilterSpec instances are immutable; every function here is pure.
"""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import FilterKindError, UnsupportedScale

KIND_COEFFICIENTS = "coefficients"
KIND_TABULATED = "tabulated_w"

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class FilterSpec:
    """A wavelet filter, by coefficients or by tabulated weight."""

    kind: str
    scale_n: int = 2
    coeffs: tuple[tuple[int, complex], ...] = ()
    breakpoints: tuple[float, ...] = ()
    values: tuple[float, ...] = ()
    label: str = ""

    def __post_init__(self) -> None:
        if self.scale_n < 2:
            raise ValueError(f"scale must be >= 2, got {self.scale_n}")
        if self.kind == KIND_COEFFICIENTS:
            if not self.coeffs:
                raise ValueError("coefficient filter needs a nonempty index set")
            ks = [k for k, _ in self.coeffs]
            if len(set(ks)) != len(ks):
                raise ValueError("duplicate coefficient index")
        elif self.kind == KIND_TABULATED:
            if len(self.breakpoints) != len(self.values) or not self.values:
                raise ValueError("table needs matching nonempty breakpoints/values")
            if self.breakpoints[0] != 0.0:
                raise ValueError("first breakpoint must be 0")
            bp = self.breakpoints
            if any(b2 <= b1 for b1, b2 in zip(bp, bp[1:])) or bp[-1] >= 1.0:
                raise ValueError("breakpoints must be strictly increasing in [0, 1)")
            if any(not 0.0 <= v <= 1.0 for v in self.values):
                raise ValueError("table values must lie in [0, 1]")
        else:
            raise ValueError(f"unknown filter kind {self.kind!r}")

    # -- constructors -------------------------------------------------

    @classmethod
    def from_coefficients(cls, coeffs, scale_n: int = 2, label: str = "") -> "FilterSpec":
        """Build from {index: value} or iterable of (index, value) pairs."""
        if isinstance(coeffs, dict):
            pairs = sorted(coeffs.items())
        else:
            pairs = sorted(coeffs)
        pairs = tuple((int(k), complex(v)) for k, v in pairs)
        return cls(kind=KIND_COEFFICIENTS, scale_n=scale_n, coeffs=pairs, label=label)

    @classmethod
    def from_table(cls, breakpoints, values, scale_n: int = 2, label: str = "") -> "FilterSpec":
        """Piecewise-constant weight on half-open pieces [b_i, b_{i+1})."""
        return cls(
            kind=KIND_TABULATED,
            scale_n=scale_n,
            breakpoints=tuple(float(b) for b in breakpoints),
            values=tuple(float(v) for v in values),
            label=label,
        )

    # -- JSON schema ---------------------------------------------------

    @classmethod
    def from_json_dict(cls, doc: dict) -> "FilterSpec":
        label = str(doc.get("label", ""))
        scale_n = int(doc.get("scale_N", 2))
        kind = doc.get("kind")
        has_coeffs = "coeffs" in doc
        has_table = "w_table" in doc
        if has_coeffs == has_table:
            raise ValueError("exactly one of 'coeffs'/'w_table' must be present")
        if has_coeffs:
            if kind not in (None, KIND_COEFFICIENTS):
                raise ValueError(f"kind {kind!r} does not match 'coeffs' payload")
            pairs = [
                (int(c["k"]), complex(float(c.get("re", 0.0)), float(c.get("im", 0.0))))
                for c in doc["coeffs"]
            ]
            return cls.from_coefficients(pairs, scale_n=scale_n, label=label)
        if kind not in (None, KIND_TABULATED):
            raise ValueError(f"kind {kind!r} does not match 'w_table' payload")
        table = doc["w_table"]
        return cls.from_table(table["breakpoints"], table["values"], scale_n=scale_n, label=label)

    def to_json_dict(self) -> dict:
        doc: dict = {"label": self.label, "scale_N": self.scale_n, "kind": self.kind}
        if self.kind == KIND_COEFFICIENTS:
            doc["coeffs"] = [{"k": k, "re": v.real, "im": v.imag} for k, v in self.coeffs]
        else:
            doc["w_table"] = {
                "breakpoints": list(self.breakpoints),
                "values": list(self.values),
            }
        return doc

    # -- convenience views --------------------------------------------

    def coeff_indices(self) -> np.ndarray:
        self._need_coefficients()
        return np.array([k for k, _ in self.coeffs], dtype=np.int64)

    def coeff_values(self) -> np.ndarray:
        self._need_coefficients()
        return np.array([v for _, v in self.coeffs], dtype=np.complex128)

    def _need_coefficients(self) -> None:
        if self.kind != KIND_COEFFICIENTS:
            raise FilterKindError("operation needs a coefficient filter")


def load_filter(path) -> FilterSpec:
    """Read a filter spec from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        return FilterSpec.from_json_dict(json.load(fh))


def save_filter(spec: FilterSpec, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spec.to_json_dict(), fh, indent=2)
        fh.write("\n")


# ----------------------------------------------------------------------
# evaluation


def eval_response(spec: FilterSpec, x: float) -> complex:
    """The 1-periodic response sum_k a_k exp(-i 2 pi k x)."""
    spec._need_coefficients()
    return sum(v * cmath.exp(-2j * cmath.pi * k * x) for k, v in spec.coeffs)


def eval_weight(spec: FilterSpec, x: float) -> float:
    """The branch weight W(x): |response|^2, or a table lookup, in [0, 1]."""
    if spec.kind == KIND_COEFFICIENTS:
        return abs(eval_response(spec, x)) ** 2
    r = x % 1.0
    if r >= 1.0:
        r = 0.0
    i = 0
    for j, b in enumerate(spec.breakpoints):
        if b <= r:
            i = j
        else:
            break
    return spec.values[i]


def response_array(spec: FilterSpec, xs: np.ndarray) -> np.ndarray:
    """Vectorized eval_response."""
    spec._need_coefficients()
    z = np.exp(-2j * np.pi * np.asarray(xs, dtype=np.float64))
    out = np.zeros(z.shape, dtype=np.complex128)
    # Horner over the contiguous index range keeps this to one exp call.
    ks = spec.coeff_indices()
    vs = spec.coeff_values()
    k_lo, k_hi = int(ks.min()), int(ks.max())
    dense = np.zeros(k_hi - k_lo + 1, dtype=np.complex128)
    dense[ks - k_lo] = vs
    for c in dense[::-1]:
        out = out * z + c
    if k_lo != 0:
        out = out * z**k_lo
    return out


def _weight_taps(spec: FilterSpec):
    """Autocorrelation taps of the coefficients: |m|^2 as a cosine series.

    |m(x)|^2 = c_0 + 2 sum_{j>0} [Re c_j cos(2 pi j x) + Im c_j sin(2 pi j x)]
    with c_j = sum_k conj(a_k) a_{k+j}.
    """
    cmap = dict(spec.coeffs)
    ks = sorted(cmap)
    span = ks[-1] - ks[0]
    c0 = sum(abs(v) ** 2 for v in cmap.values())
    taps = []
    for j in range(1, span + 1):
        cj = sum(cmap[k].conjugate() * cmap.get(k + j, 0.0) for k in ks)
        taps.append((cj.real, cj.imag))
    return c0, taps


def weight_array(spec: FilterSpec, xs: np.ndarray) -> np.ndarray:
    """Vectorized eval_weight.

    Coefficient filters go through the exact cosine-series form of
    |m|^2 (one trig pair plus a recurrence); round-off can leave values
    a few ulp below 0, which is clamped away.
    """
    xs = np.asarray(xs, dtype=np.float64)
    if spec.kind == KIND_COEFFICIENTS:
        c0, taps = _weight_taps(spec)
        ang = 2.0 * np.pi * xs
        cos1 = np.cos(ang)
        out = np.full(xs.shape, c0)
        if taps:
            sin1 = np.sin(ang)
            cj, sj = cos1, sin1
            re, im = taps[0]
            out += 2.0 * re * cj
            if im:
                out += 2.0 * im * sj
            for re, im in taps[1:]:
                cj, sj = cj * cos1 - sj * sin1, sj * cos1 + cj * sin1
                out += 2.0 * re * cj
                if im:
                    out += 2.0 * im * sj
        return np.maximum(out, 0.0)
    r = np.mod(xs, 1.0)
    r[r >= 1.0] = 0.0
    idx = np.searchsorted(np.asarray(spec.breakpoints), r, side="right") - 1
    return np.asarray(spec.values, dtype=np.float64)[idx]


# ----------------------------------------------------------------------
# checks


@dataclass(frozen=True)
class ValidationReport:
    """Per-condition errors and verdicts for one filter."""

    grid_level: int
    verdicts: dict = field(default_factory=dict)
    partition_max_error: float | None = None
    quadrature_max_error: float | None = None
    lowpass_error: float | None = None

    @property
    def all_ok(self) -> bool:
        return all(self.verdicts.values())

    def to_json_dict(self) -> dict:
        doc: dict = {"grid_level": self.grid_level}
        for name in ("partition_max_error", "quadrature_max_error", "lowpass_error"):
            val = getattr(self, name)
            if val is not None:
                doc[name] = val
        doc["verdicts"] = dict(self.verdicts)
        return doc


def check_partition(spec: FilterSpec, grid_level: int, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Max deviation of sum_j W((x+j)/N) from 1 over the level-L grid."""
    if grid_level < 1:
        raise ValueError("grid_level must be >= 1")
    n = spec.scale_n
    xs = np.arange(n**grid_level, dtype=np.float64) / n**grid_level
    total = np.zeros_like(xs)
    for j in range(n):
        total += weight_array(spec, (xs + j) / n)
    err = float(np.max(np.abs(total - 1.0)))
    return ValidationReport(
        grid_level=grid_level,
        partition_max_error=err,
        verdicts={"partition": err <= tol},
    )


def check_quadrature(spec: FilterSpec, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Max deviation of sum_k conj(a_k) a_{k+2n} from delta_{0,n}/2, dyadic only."""
    spec._need_coefficients()
    if spec.scale_n != 2:
        raise UnsupportedScale("quadrature check is defined for scale 2 only")
    cmap = dict(spec.coeffs)
    ks = sorted(cmap)
    span = ks[-1] - ks[0]
    err = 0.0
    for n in range(-(span // 2), span // 2 + 1):
        s = sum(cmap[k].conjugate() * cmap.get(k + 2 * n, 0.0) for k in ks)
        target = 0.5 if n == 0 else 0.0
        err = max(err, abs(s - target))
    return ValidationReport(
        grid_level=0,
        quadrature_max_error=err,
        verdicts={"quadrature": err <= tol},
    )


def check_lowpass(spec: FilterSpec, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Deviation of sum_k a_k from 1."""
    spec._need_coefficients()
    err = abs(sum(v for _, v in spec.coeffs) - 1.0)
    return ValidationReport(
        grid_level=0,
        lowpass_error=err,
        verdicts={"lowpass": err <= tol},
    )


def validate_filter(spec: FilterSpec, grid_level: int = 10, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Run every check that applies to this filter and merge the reports."""
    rep = check_partition(spec, grid_level, tol)
    verdicts = dict(rep.verdicts)
    quadrature_err = None
    lowpass_err = None
    if spec.kind == KIND_COEFFICIENTS:
        lp = check_lowpass(spec, tol)
        lowpass_err = lp.lowpass_error
        verdicts.update(lp.verdicts)
        if spec.scale_n == 2:
            q = check_quadrature(spec, tol)
            quadrature_err = q.quadrature_max_error
            verdicts.update(q.verdicts)
    return ValidationReport(
        grid_level=grid_level,
        partition_max_error=rep.partition_max_error,
        quadrature_max_error=quadrature_err,
        lowpass_error=lowpass_err,
        verdicts=verdicts,
    )


def high_pass(spec: FilterSpec) -> FilterSpec:
    """Mirror coefficients b_k = (-1)**(k+1) conj(a_{1-k}), dyadic only.

    Applying the map twice returns the negated original coefficients.
    """
    spec._need_coefficients()
    if spec.scale_n != 2:
        raise UnsupportedScale("high-pass mirror is defined for scale 2 only")
    pairs = []
    for k, v in spec.coeffs:
        kk = 1 - k
        pairs.append((kk, (-1.0) ** (kk + 1) * v.conjugate()))
    label = f"high_pass({spec.label})" if spec.label else "high_pass"
    return FilterSpec.from_coefficients(pairs, scale_n=2, label=label)
