"""Heat traces of closed-form flat spectra and a singular-set detector.

Three exactly solvable one- and two-dimensional flat models are built by
truncating their eigenvalue series: the circle, the mirror-quotient
interval with Neumann conditions, and the rectangular torus.  Partial
heat traces carry rigorous truncation bounds by integral comparison, so
every reported digit is certified.  For the one-dimensional models the
small-time expansion is volume/sqrt(4 pi t) + (boundary constant) +
exponentially small terms, and the detector extracts that constant: it
vanishes for the circle and equals 1/2 for the interval (1/4 per mirror
endpoint), which is what makes the presence of the mirror points audible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import NumericalError, ParseError, PreconditionError, TailBoundError

SINGULARITY_THRESHOLD = 0.05
DETECTOR_T_LO = 1e-4
DETECTOR_T_HI = 1e-3


@dataclass(frozen=True, eq=False)
class FlatModelSpectrum:
    """Truncated spectrum of one closed-form flat model."""

    model: str
    lengths: tuple
    nmax: int
    dim: int
    volume: float
    eigenvalues: np.ndarray
    multiplicities: np.ndarray

    @property
    def total_count(self):
        return int(self.multiplicities.sum())

    def pairs(self):
        return [
            [float(v), int(m)]
            for v, m in zip(self.eigenvalues, self.multiplicities)
        ]


def circle_spectrum(L, nmax):
    """Circle of circumference L: eigenvalue (2 pi n / L)^2, double for n >= 1."""
    if L <= 0:
        raise PreconditionError("circumference must be positive")
    if nmax < 0:
        raise PreconditionError("nmax must be non-negative")
    n = np.arange(nmax + 1)
    values = (2.0 * np.pi * n / L) ** 2
    mults = np.where(n == 0, 1, 2).astype(np.int64)
    return FlatModelSpectrum(
        model="circle",
        lengths=(float(L),),
        nmax=int(nmax),
        dim=1,
        volume=float(L),
        eigenvalues=values,
        multiplicities=mults,
    )


def interval_neumann_spectrum(L, nmax):
    """Interval of length L with Neumann ends: eigenvalue (pi n / L)^2, simple."""
    if L <= 0:
        raise PreconditionError("length must be positive")
    if nmax < 0:
        raise PreconditionError("nmax must be non-negative")
    n = np.arange(nmax + 1)
    values = (np.pi * n / L) ** 2
    return FlatModelSpectrum(
        model="interval_neumann",
        lengths=(float(L),),
        nmax=int(nmax),
        dim=1,
        volume=float(L),
        eigenvalues=values,
        multiplicities=np.ones(nmax + 1, dtype=np.int64),
    )


def rect_torus_spectrum(a, b, nmax):
    """Rectangular torus with side lengths a, b: lattice eigenvalues
    (2 pi m / a)^2 + (2 pi n / b)^2 over |m|, |n| <= nmax."""
    if a <= 0 or b <= 0:
        raise PreconditionError("torus side lengths must be positive")
    if nmax < 0:
        raise PreconditionError("nmax must be non-negative")
    m = np.arange(nmax + 1)
    wm = np.where(m == 0, 1, 2)
    va = (2.0 * np.pi * m / a) ** 2
    vb = (2.0 * np.pi * m / b) ** 2
    grid = va[:, None] + vb[None, :]
    weight = (wm[:, None] * wm[None, :]).astype(np.int64)
    values, inverse = np.unique(grid.ravel(), return_inverse=True)
    mults = np.bincount(inverse, weights=weight.ravel()).astype(np.int64)
    return FlatModelSpectrum(
        model="rect_torus",
        lengths=(float(a), float(b)),
        nmax=int(nmax),
        dim=2,
        volume=float(a * b),
        eigenvalues=values,
        multiplicities=mults,
    )


@dataclass(frozen=True, eq=False)
class HeatTraceCurve:
    """Partial heat trace values with certified truncation error per t."""

    t_grid: np.ndarray
    values: np.ndarray
    tail_bounds: np.ndarray
    label: str

    def max_tail(self):
        return float(self.tail_bounds.max()) if len(self.tail_bounds) else 0.0


def _one_dim_tail(L, c, nmax, t):
    # sum_{n > nmax} e^{-(c n / L)^2 t} <= integral comparison
    return L / (2.0 * math.sqrt(math.pi * t)) * math.erfc(c * nmax * math.sqrt(t) / L)


def _partial_theta(L, nmax, t):
    n = np.arange(1, nmax + 1)
    return 1.0 + 2.0 * float(np.sum(np.exp(-((2.0 * np.pi * n / L) ** 2) * t)))


def tail_bounds(spec, t_grid):
    """Upper bound on the truncated part of the heat trace at each t."""
    t_grid = np.asarray(t_grid, dtype=np.float64)
    out = np.empty_like(t_grid)
    if spec.model == "circle":
        (L,) = spec.lengths
        for i, t in enumerate(t_grid):
            out[i] = 2.0 * _one_dim_tail(L, 2.0 * np.pi, spec.nmax, t)
    elif spec.model == "interval_neumann":
        (L,) = spec.lengths
        for i, t in enumerate(t_grid):
            out[i] = _one_dim_tail(L, np.pi, spec.nmax, t)
    elif spec.model == "rect_torus":
        a, b = spec.lengths
        for i, t in enumerate(t_grid):
            ta = 2.0 * _one_dim_tail(a, 2.0 * np.pi, spec.nmax, t)
            tb = 2.0 * _one_dim_tail(b, 2.0 * np.pi, spec.nmax, t)
            sa = _partial_theta(a, spec.nmax, t)
            sb = _partial_theta(b, spec.nmax, t)
            out[i] = sa * tb + ta * sb + ta * tb
    else:
        raise PreconditionError(f"unknown flat model {spec.model!r}")
    return out


def _as_value_mult_arrays(spec):
    if isinstance(spec, FlatModelSpectrum):
        return spec.eigenvalues, spec.multiplicities.astype(np.float64), spec.model
    if hasattr(spec, "clusters"):
        pairs = spec.pairs()
    else:
        pairs = list(spec)
    values = np.asarray([p[0] for p in pairs], dtype=np.float64)
    mults = np.asarray([p[1] for p in pairs], dtype=np.float64)
    return values, mults, "finite"


def heat_trace(spec, t_grid, tol=None):
    """Sum of multiplicity-weighted exponentials over the given times.

    ``spec`` may be a flat model, a spectral decomposition, or a plain
    list of (eigenvalue, multiplicity) pairs.  Finite spectra are exact
    (tail zero); flat models carry integral-comparison tail bounds, and
    a requested tolerance that some bound exceeds raises TailBoundError.
    """
    t_grid = np.asarray(t_grid, dtype=np.float64)
    if t_grid.ndim != 1 or len(t_grid) == 0:
        raise PreconditionError("t_grid must be a non-empty 1-D array")
    if np.any(t_grid <= 0) or not np.all(np.isfinite(t_grid)):
        raise PreconditionError("t_grid entries must be positive and finite")
    values, mults, label = _as_value_mult_arrays(spec)
    trace = _kernels.heat_sum(values, mults, t_grid)
    if label == "finite":
        tails = np.zeros_like(t_grid)
    else:
        tails = tail_bounds(spec, t_grid)
    if tol is not None:
        worst = float(tails.max())
        if worst > tol:
            raise TailBoundError(
                f"truncation error bound {worst:.3e} exceeds tolerance {tol:.3e}; "
                f"increase nmax"
            )
    return HeatTraceCurve(t_grid=t_grid, values=trace, tail_bounds=tails, label=label)


@dataclass(frozen=True, eq=False)
class SingularityIndicator:
    """Detector output for a one-dimensional flat model."""

    leading: float
    constant: float
    verdict: str
    threshold: float
    residual: float
    tail_bound_max: float

    def to_json_dict(self):
        return {
            "leading": self.leading,
            "constant": self.constant,
            "verdict": self.verdict,
            "tail_bound_max": self.tail_bound_max,
            "threshold": self.threshold,
            "residual": self.residual,
        }


def default_detector_grid(t_lo=DETECTOR_T_LO, t_hi=DETECTOR_T_HI, num=33):
    return np.geomspace(t_lo, t_hi, num)


def constant_term_estimate(spec, t_grid=None, threshold=SINGULARITY_THRESHOLD):
    """Estimate the constant term of the small-time heat expansion.

    Only meaningful for the one-dimensional models, where the trace is
    volume/sqrt(4 pi t) + constant + exponentially small corrections; the
    constant is the intercept of a linear fit of the detrended trace
    against t over (at least) a decade of small times.  Verdict is
    ``singular`` when the constant clears the threshold in absolute
    value, ``smooth`` when it does not, and ``inconclusive`` when the
    truncation bound or the fit residual is too large to trust either.
    """
    if not isinstance(spec, FlatModelSpectrum) or spec.dim != 1:
        raise PreconditionError(
            "the constant-term detector applies to one-dimensional flat models"
        )
    if t_grid is None:
        t_grid = default_detector_grid()
    t_grid = np.sort(np.asarray(t_grid, dtype=np.float64))
    if len(t_grid) < 4:
        raise PreconditionError("need at least 4 sample times for the fit")
    if t_grid[0] <= 0 or t_grid[-1] > 0.05:
        raise PreconditionError("sample times must lie in (0, 0.05]")
    if t_grid[-1] / t_grid[0] < 8.0:
        raise PreconditionError("sample times must span about a decade")
    curve = heat_trace(spec, t_grid)
    detrended = curve.values - spec.volume / np.sqrt(4.0 * np.pi * t_grid)
    design = np.stack([np.ones_like(t_grid), t_grid], axis=1)
    coeffs, _, _, _ = np.linalg.lstsq(design, detrended, rcond=None)
    constant = float(coeffs[0])
    residual = float(np.max(np.abs(design @ coeffs - detrended)))
    leading = float(curve.values[0] * np.sqrt(4.0 * np.pi * t_grid[0]))
    tail_max = curve.max_tail()
    if tail_max > threshold / 2.0 or residual > threshold / 2.0:
        verdict = "inconclusive"
    elif abs(constant) > threshold:
        verdict = "singular"
    else:
        verdict = "smooth"
    return SingularityIndicator(
        leading=leading,
        constant=constant,
        verdict=verdict,
        threshold=float(threshold),
        residual=residual,
        tail_bound_max=tail_max,
    )


# ---------------------------------------------------------------------------
# audibility chain
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AudibilityReport:
    """Consistency record for the covering-space singularity argument.

    Premises: the covers are isospectral, the quotients are isospectral,
    and each cover's volume is its sheet count times its quotient's
    volume.  When the premises hold, equal volumes force equal sheet
    counts and the singularity verdicts of the quotients must agree; a
    failed premise is reported as a diagnostic instead of a verdict.
    """

    premises: tuple
    diagnostics: tuple
    indicator_1: SingularityIndicator | None
    indicator_2: SingularityIndicator | None
    degrees: tuple
    singular_agree: bool | None
    consistent: bool

    def __bool__(self):
        return self.consistent

    def to_json_dict(self):
        return {
            "premises": {name: ok for name, ok in self.premises},
            "diagnostics": list(self.diagnostics),
            "indicator_1": None if self.indicator_1 is None else self.indicator_1.to_json_dict(),
            "indicator_2": None if self.indicator_2 is None else self.indicator_2.to_json_dict(),
            "degrees": list(self.degrees),
            "singular_agree": self.singular_agree,
            "consistent": self.consistent,
        }


def _expanded(spec):
    values, mults, label = _as_value_mult_arrays(spec)
    counts = mults.astype(np.int64)
    return np.repeat(values, counts), label


def _volume_of(spec):
    if isinstance(spec, FlatModelSpectrum):
        return spec.volume
    values, mults, _ = _as_value_mult_arrays(spec)
    # a finite graph spectrum recovers its vertex count at t -> 0
    return float(mults.sum())


def spectra_close(spec_a, spec_b, tol=1e-9):
    """Compare two spectra eigenvalue by eigenvalue with multiplicity.

    Finite spectra must have equal total counts; truncated flat models
    are compared on their common initial segment.
    """
    a, label_a = _expanded(spec_a)
    b, label_b = _expanded(spec_b)
    if label_a == "finite" and label_b == "finite" and len(a) != len(b):
        return False
    k = min(len(a), len(b))
    if k == 0:
        return len(a) == len(b)
    return bool(np.max(np.abs(a[:k] - b[:k])) <= tol)


def singularity_audibility_report(
    spec_o1,
    spec_o2,
    spec_m1,
    spec_m2,
    d1,
    d2,
    indicator_1=None,
    indicator_2=None,
    tol=1e-9,
    vol_rel_tol=1e-6,
):
    """Check the full audibility chain on two covers and their quotients.

    ``d1``, ``d2`` are the claimed sheet counts of the coverings
    M1 -> O1 and M2 -> O2.  Indicators may be passed in (graph quotients
    get theirs from freeness of the action); one-dimensional flat models
    compute their own when omitted.
    """
    if d1 < 1 or d2 < 1:
        raise PreconditionError("sheet counts must be positive integers")
    diagnostics = []
    premises = []

    covers_iso = spectra_close(spec_m1, spec_m2, tol)
    premises.append(("covers_isospectral", covers_iso))
    if not covers_iso:
        diagnostics.append(
            "the covers are not isospectral at the stated tolerance, so the "
            "argument does not start"
        )

    quots_iso = spectra_close(spec_o1, spec_o2, tol)
    premises.append(("quotients_isospectral", quots_iso))
    if not quots_iso:
        diagnostics.append(
            "the quotient spectra differ, so no common heat expansion exists "
            "and no singularity comparison is implied"
        )

    vol_o1, vol_o2 = _volume_of(spec_o1), _volume_of(spec_o2)
    vol_m1, vol_m2 = _volume_of(spec_m1), _volume_of(spec_m2)
    rel = lambda x, y: abs(x - y) <= vol_rel_tol * max(abs(x), abs(y), 1.0)
    towers_ok = rel(vol_m1, d1 * vol_o1) and rel(vol_m2, d2 * vol_o2)
    premises.append(("volume_towers", towers_ok))
    if not towers_ok:
        diagnostics.append(
            f"volumes do not match the claimed sheet counts: "
            f"{vol_m1} vs {d1} * {vol_o1}, {vol_m2} vs {d2} * {vol_o2}"
        )

    degrees_equal = d1 == d2
    premises.append(("degrees_equal", degrees_equal))
    if covers_iso and quots_iso and towers_ok and not degrees_equal:
        diagnostics.append(
            "equal volumes on both floors force equal sheet counts, but "
            f"{d1} != {d2} was claimed"
        )

    if indicator_1 is None and isinstance(spec_o1, FlatModelSpectrum) and spec_o1.dim == 1:
        indicator_1 = constant_term_estimate(spec_o1)
    if indicator_2 is None and isinstance(spec_o2, FlatModelSpectrum) and spec_o2.dim == 1:
        indicator_2 = constant_term_estimate(spec_o2)

    singular_agree = None
    if indicator_1 is not None and indicator_2 is not None:
        if "inconclusive" in (indicator_1.verdict, indicator_2.verdict):
            singular_agree = None
            diagnostics.append("a singularity verdict is inconclusive")
        else:
            singular_agree = indicator_1.verdict == indicator_2.verdict
            if not singular_agree:
                diagnostics.append(
                    f"singularity verdicts differ: {indicator_1.verdict} vs "
                    f"{indicator_2.verdict}"
                )
    else:
        diagnostics.append(
            "no singularity indicator available for at least one quotient; "
            "only the spectral premises were checked"
        )

    premises_ok = covers_iso and quots_iso and towers_ok and degrees_equal
    consistent = premises_ok and singular_agree is not False
    return AudibilityReport(
        premises=tuple(premises),
        diagnostics=tuple(diagnostics),
        indicator_1=indicator_1,
        indicator_2=indicator_2,
        degrees=(int(d1), int(d2)),
        singular_agree=singular_agree,
        consistent=consistent,
    )


# ---------------------------------------------------------------------------
# spectra files
# ---------------------------------------------------------------------------

def write_spectrum_json(spec, fh):
    """JSON array of [eigenvalue, multiplicity] pairs, 15 significant digits."""
    if isinstance(spec, FlatModelSpectrum) or hasattr(spec, "clusters"):
        pairs = spec.pairs()
    else:
        pairs = [[float(v), int(m)] for v, m in spec]
    pairs = [[float(f"{v:.15g}"), int(m)] for v, m in pairs]
    json.dump(pairs, fh)
    fh.write("\n")


def read_spectrum_json(fh, path=None):
    try:
        data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid spectrum JSON: {exc}", path=path) from exc
    if not isinstance(data, list):
        raise ParseError("spectrum JSON must be an array of pairs", path=path)
    pairs = []
    last = -math.inf
    for i, item in enumerate(data):
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not isinstance(item[0], (int, float))
            or not isinstance(item[1], int)
        ):
            raise ParseError(
                f"entry {i} must be [eigenvalue, multiplicity], got {item!r}",
                path=path,
            )
        value, mult = float(item[0]), item[1]
        if mult < 1:
            raise ParseError(f"entry {i}: multiplicity must be >= 1", path=path)
        if value < last:
            raise ParseError(
                f"entry {i}: eigenvalues must be non-decreasing", path=path
            )
        last = value
        pairs.append((value, mult))
    return pairs
