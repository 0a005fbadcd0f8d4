"""Floating-point cross-checks for the exact engines.

Three independent instruments:
  - mollified_oint: the Gaussian-mollified limit integral (1/vol G) *
    lim_{t->inf} integral exp(-|y|^2/4t) f(y) dy, evaluated by adaptive
    composite Gauss-Kronrod quadrature over a truncated window and a ladder
    of t values with optional Richardson extrapolation.
  - contour_coeff: trapezoid contour integration recovering a Laurent
    coefficient numerically, for checking exact coefficient extraction.
  - suptsq_check / shift_smoothness_check: the decay and smoothness
    diagnostics that justify trusting the mollified limits.

Everything here is double precision on purpose: agreement with the exact
side is only meaningful if the two routes share no code.  The quadrature
evaluates numeric closures built directly from atlas data, never the exact
Laurent arithmetic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .atlas import FixedPointAtlas
from .errors import QuadratureError, ValidationError
from .exact import LaurentSeries
from .localize import localize, phase_factory

# 7-point Gauss / 15-point Kronrod pair on [-1, 1].  Positive abscissae and
# weights; the grid is mirrored.  Exactness (degree 13 for the Gauss rule,
# 22 for the Kronrod extension) is asserted by the test suite, so a typo
# here cannot survive.
_XGK = (
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
)
_WGK = (
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
)
_WG = (
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
)

# full 15-node layout, ascending
KRONROD_NODES = np.array([-x for x in _XGK[:-1]] + [0.0] + [x for x in reversed(_XGK[:-1])])
KRONROD_WEIGHTS = np.array(list(_WGK[:-1]) + [_WGK[-1]] + list(reversed(_WGK[:-1])))
# the embedded Gauss rule lives on nodes 1, 3, 5, ... of the Kronrod grid
GAUSS_INDEX = np.arange(1, 15, 2)
GAUSS_WEIGHTS = np.array(list(_WG[:-1]) + [_WG[-1]] + list(reversed(_WG[:-1])))


class _Budget:
    __slots__ = ("left",)

    def __init__(self, n: int):
        self.left = n

    def spend(self, n: int):
        self.left -= n
        if self.left < 0:
            raise QuadratureError(
                "quadrature panel budget exhausted; reduce the top of the "
                "t ladder or raise max_panels"
            )


def _panel_edges(window: float, max_freq: float) -> np.ndarray:
    """Symmetric uniform edges covering [-window, window]: an even number of
    panels with 0 always an edge (so integrands with a removable singularity
    at the origin are never sampled there), sized to resolve oscillation."""
    h = window / 8
    if max_freq > 0:
        h = min(h, math.pi / (4 * max_freq))
    m = max(4, int(math.ceil(window / h)))
    return np.linspace(-m * h, m * h, 2 * m + 1)


def _eval_panels(fn, a: np.ndarray, b: np.ndarray):
    half = (b - a) / 2
    centers = (a + b) / 2
    x = centers[:, None] + half[:, None] * KRONROD_NODES[None, :]
    f = np.asarray(fn(x.ravel()), dtype=complex).reshape(len(a), 15)
    i15 = (f @ KRONROD_WEIGHTS) * half
    i7 = (f[:, GAUSS_INDEX] @ GAUSS_WEIGHTS) * half
    return i15, np.abs(i15 - i7)


def _fsum_panels(pairs: List[Tuple[float, complex]]) -> complex:
    pairs.sort(key=lambda p: p[0])
    return complex(
        math.fsum(v.real for _, v in pairs), math.fsum(v.imag for _, v in pairs)
    )


def adaptive_quadrature(
    fn: Callable[[np.ndarray], np.ndarray],
    edges: np.ndarray,
    tol_panel: float,
    budget: _Budget,
) -> Tuple[complex, float]:
    """Composite adaptive Gauss-Kronrod integration over fixed outer edges.

    Panels whose Kronrod-minus-Gauss estimate exceeds tol_panel are halved,
    all of them, each round.  Accepted panels are summed with fsum in
    left-edge order so the result does not depend on the splitting history.
    """
    work_a = edges[:-1].astype(float)
    work_b = edges[1:].astype(float)
    accepted: List[Tuple[float, complex]] = []
    err_total = 0.0
    while len(work_a):
        budget.spend(len(work_a))
        i15, err = _eval_panels(fn, work_a, work_b)
        ok = err <= tol_panel
        for j in np.nonzero(ok)[0]:
            accepted.append((work_a[j], complex(i15[j])))
        err_total += float(err[ok].sum())
        bad = np.nonzero(~ok)[0]
        if len(bad) == 0:
            break
        a, b = work_a[bad], work_b[bad]
        mid = (a + b) / 2
        work_a = np.concatenate([a, mid])
        work_b = np.concatenate([mid, b])
    return _fsum_panels(accepted), err_total


def fixed_quadrature(
    fn: Callable[[np.ndarray], np.ndarray], edges: np.ndarray
) -> complex:
    """Single non-adaptive composite Kronrod pass over the given edges.
    Used when two integrands must be compared on the identical grid."""
    i15, _ = _eval_panels(fn, edges[:-1].astype(float), edges[1:].astype(float))
    return complex(
        math.fsum(v.real for v in i15), math.fsum(v.imag for v in i15)
    )


# -- mollified limit integrals ------------------------------------------


@dataclass(frozen=True)
class MollifierConfig:
    t_ladder: Tuple[float, ...] = (1.0, 10.0, 100.0, 1000.0, 10000.0)
    quad_tolerance: float = 1e-10
    window_sigmas: float = 12.0
    extrapolation: str = "last_value"
    max_panels: int = 300_000

    def __post_init__(self):
        ladder = tuple(float(t) for t in self.t_ladder)
        object.__setattr__(self, "t_ladder", ladder)
        if len(ladder) < 2:
            raise ValidationError("t ladder needs at least two entries")
        if any(t <= 0 for t in ladder) or any(
            a >= b for a, b in zip(ladder, ladder[1:])
        ):
            raise ValidationError("t ladder must be positive and strictly increasing")
        if self.quad_tolerance <= 0 or self.window_sigmas <= 0:
            raise ValidationError("tolerance and window size must be positive")
        if self.extrapolation not in ("last_value", "richardson"):
            raise ValidationError(
                f"unknown extrapolation rule {self.extrapolation!r}"
            )
        if self.max_panels < 16:
            raise ValidationError("max_panels is too small to integrate anything")


@dataclass(frozen=True)
class OracleIntegrand:
    """Numeric closure plus the metadata quadrature needs to pace itself.

    fn maps a list of k equal-shape arrays (one per variable) to a complex
    array.  freq_linear bounds |d phase / d y| from oscillatory factors
    exp(i mu y); freq_quadratic bounds the lambda of exp(i lambda y^2)
    factors, whose local frequency grows with the window.
    """

    fn: Callable[[List[np.ndarray]], np.ndarray]
    k: int = 1
    freq_linear: float = 1.0
    freq_quadratic: float = 0.0

    def max_frequency(self, window: float) -> float:
        return self.freq_linear + 2.0 * self.freq_quadratic * window


@dataclass(frozen=True)
class LadderRow:
    t: float
    value: complex
    err_estimate: float

    def to_json_dict(self) -> dict:
        return {
            "t": self.t,
            "value": [self.value.real, self.value.imag],
            "err_estimate": self.err_estimate,
        }


@dataclass(frozen=True)
class OracleResult:
    rows: Tuple[LadderRow, ...]
    estimate: complex
    extrapolation: str

    def deltas(self) -> List[float]:
        return [
            abs(b.value - a.value) for a, b in zip(self.rows, self.rows[1:])
        ]

    def ladder_monotone(self) -> bool:
        d = self.deltas()
        return all(b <= a for a, b in zip(d, d[1:]))

    def to_json_dict(self) -> dict:
        return {
            "rows": [r.to_json_dict() for r in self.rows],
            "estimate": [self.estimate.real, self.estimate.imag],
            "extrapolation": self.extrapolation,
            "ladder_monotone": self.ladder_monotone(),
        }


def _as_integrand(f) -> OracleIntegrand:
    if isinstance(f, OracleIntegrand):
        return f
    return OracleIntegrand(fn=lambda ys, _f=f: _f(ys[0]), k=1)


def _mollified_single_t(
    g: OracleIntegrand, t: float, cfg: MollifierConfig, budget: _Budget
) -> Tuple[complex, float]:
    window = cfg.window_sigmas * math.sqrt(2.0 * t)
    edges = _panel_edges(window, g.max_frequency(window))

    if g.k == 1:

        def fn(y: np.ndarray) -> np.ndarray:
            return np.exp(-(y * y) / (4.0 * t)) * g.fn([y])

        return adaptive_quadrature(fn, edges, cfg.quad_tolerance, budget)

    if g.k > 3:
        raise ValidationError(
            "mollified integrals support at most three variables"
        )

    # nested integration: outermost variable adaptive, inner recursion
    err_box = [0.0]

    def outer(y_outer: np.ndarray) -> np.ndarray:
        out = np.empty(len(y_outer), dtype=complex)
        for j, y0 in enumerate(y_outer):
            inner = OracleIntegrand(
                fn=lambda ys, y0=y0: g.fn([np.full_like(ys[0], y0)] + list(ys)),
                k=g.k - 1,
                freq_linear=g.freq_linear,
                freq_quadratic=g.freq_quadratic,
            )
            v, e = _mollified_single_t(inner, t, cfg, budget)
            err_box[0] += e
            out[j] = v * math.exp(-(y0 * y0) / (4.0 * t))
        return out

    val, err = adaptive_quadrature(outer, edges, cfg.quad_tolerance * 10, budget)
    return val, err + err_box[0]


def mollified_oint(
    f, group, cfg: Optional[MollifierConfig] = None
) -> OracleResult:
    """(1/vol G) lim_{t->inf} integral exp(-|y|^2/4t) f(y) d^k y.

    f is an OracleIntegrand or a plain function of one array.  The limit is
    estimated over cfg.t_ladder; the tail outside |y_v| <= window_sigmas *
    sqrt(2t) is dropped (bounded below 1e-30 at the default 12 sigmas).
    """
    g = _as_integrand(f)
    cfg = cfg or MollifierConfig()
    vol = group.vol.numeric_value()
    if abs(vol.imag) > 1e-15 or vol.real <= 0:
        raise ValidationError("group volume must be a positive real")
    vol = vol.real
    rows = []
    for t in cfg.t_ladder:
        budget = _Budget(cfg.max_panels)
        val, err = _mollified_single_t(g, t, cfg, budget)
        rows.append(LadderRow(t=t, value=val / vol, err_estimate=err / vol))
    if cfg.extrapolation == "richardson":
        t1, t2 = cfg.t_ladder[-2], cfg.t_ladder[-1]
        v1, v2 = rows[-2].value, rows[-1].value
        estimate = (t2 * v2 - t1 * v1) / (t2 - t1)
    else:
        estimate = rows[-1].value
    return OracleResult(rows=tuple(rows), estimate=estimate, extrapolation=cfg.extrapolation)


# -- atlas integrands ----------------------------------------------------


def _series_closure(series: LaurentSeries):
    data = [
        (complex(c), tuple(e)) for e, c in sorted(series.terms.items())
    ]

    def ev(ys: List[np.ndarray]) -> np.ndarray:
        acc = np.zeros_like(ys[0], dtype=complex)
        for c, exps in data:
            term = np.full_like(ys[0], c, dtype=complex)
            for y, e in zip(ys, exps):
                if e:
                    term = term * y**e
            acc = acc + term
        return acc

    return ev


def atlas_integrand(
    atlas: FixedPointAtlas, *, eta_mode: str = "atlas", zeta: float = 0.0
) -> OracleIntegrand:
    """Numeric evaluator for the summed localization series of an atlas.

    Built directly from the fixed-point data (weights, moments, restriction
    coefficients) with double-precision arithmetic; the exact engine is used
    only as a gate, to refuse data whose summed series has a genuine pole at
    the origin and therefore no mollified limit.

    zeta shifts every symplectic moment by -zeta (rank 1 only): the phase
    picks up a global factor exp(-i zeta y).
    """
    k = atlas.group.rank
    if zeta and (k != 1 or atlas.geometry != "symplectic"):
        raise ValidationError("moment shifts are a symplectic circle diagnostic")

    total = localize(atlas, phase_factory(eta_mode), (-1,) * k).total
    if total.has_negative_exponents():
        principal = sorted(total.principal_terms())
        raise QuadratureError(
            "localized sum has a pole at the origin (principal exponents "
            f"{principal}); the mollified integral does not exist for this data"
        )

    hk = atlas.geometry == "hyperkahler"
    points = []
    for fp in atlas.fixed_points:
        if fp.mode == "raw":
            points.append(("raw", _series_closure(fp.raw_contribution), None, None))
            continue
        eta = (
            LaurentSeries.const(atlas.variable_order, 1)
            if eta_mode == "one"
            else fp.eta
        )
        num = _series_closure(eta)
        weights = [tuple(float(x) for x in w) for w in fp.weights]
        if hk:
            freqs = tuple(float(fp.hk_norm_sq(nu)) for nu in range(k))
        else:
            freqs = tuple(float(m) for m in fp.moment)
        points.append(("structured", num, weights, freqs))

    def fn(ys: List[np.ndarray]) -> np.ndarray:
        acc = np.zeros_like(ys[0], dtype=complex)
        for kind, num, weights, freqs in points:
            if kind == "raw":
                acc = acc + num(ys)
                continue
            if hk:
                phase_arg = sum(f * y * y for f, y in zip(freqs, ys))
            else:
                phase_arg = sum(f * y for f, y in zip(freqs, ys))
            term = num(ys) * np.exp(1j * phase_arg)
            for w in weights:
                term = term / sum(c * y for c, y in zip(w, ys))
            acc = acc + term
        if zeta:
            acc = acc * np.exp(-1j * zeta * ys[0])
        return acc

    lin = abs(zeta)
    quad = 0.0
    for kind, _, weights, freqs in points:
        if kind != "structured":
            continue
        if hk:
            quad = max(quad, max(freqs))
        else:
            lin = max(lin, sum(abs(f) for f in freqs))
    return OracleIntegrand(fn=fn, k=k, freq_linear=lin, freq_quadratic=quad)


def moment_gap(atlas: FixedPointAtlas) -> float:
    """Smallest absolute moment component over the fixed points."""
    gap = math.inf
    for fp in atlas.fixed_points:
        for m in fp.moment:
            gap = min(gap, abs(float(m)))
    return gap


# -- numeric residue vs exact coefficient -------------------------------


def contour_coeff(f: LaurentSeries, m: int, var: str) -> complex:
    """Numeric estimate of the coefficient at var^-m by a contour average:
    (1/2pi) integral_0^2pi f(r e^(i theta)) r^m e^(i m theta) d theta at
    r = 1/2, trapezoid rule with 4096 nodes."""
    if len(f.vars) != 1:
        raise ValidationError("contour extraction works on one-variable series")
    if f.vars[0] != var:
        raise ValidationError(f"series has variable {f.vars[0]!r}, not {var!r}")
    r = 0.5
    n = 4096
    data = [(complex(c), e[0]) for e, c in sorted(f.terms.items())]
    vals_re = []
    vals_im = []
    for j in range(n):
        theta = 2.0 * math.pi * j / n
        z = r * cmath.exp(1j * theta)
        fz = sum(c * z**e for c, e in data)
        v = fz * (r**m) * cmath.exp(1j * m * theta)
        vals_re.append(v.real)
        vals_im.append(v.imag)
    return complex(math.fsum(vals_re) / n, math.fsum(vals_im) / n)


# -- decay and smoothness diagnostics ------------------------------------


@dataclass(frozen=True)
class DecayRow:
    t: float
    value: complex
    bound: Optional[float]

    def to_json_dict(self) -> dict:
        return {
            "t": self.t,
            "value": [self.value.real, self.value.imag],
            "bound": self.bound,
        }


@dataclass(frozen=True)
class DecayTable:
    x: float
    n: int
    rows: Tuple[DecayRow, ...]
    constant: Optional[float]
    decay_ok: Optional[bool]

    def to_json_dict(self) -> dict:
        return {
            "x": self.x,
            "n": self.n,
            "rows": [r.to_json_dict() for r in self.rows],
            "constant": self.constant,
            "decay_ok": self.decay_ok,
        }


def suptsq_check(
    x: float,
    n: int,
    t_ladder: Sequence[float] = (1.0, 3.0, 10.0, 30.0),
    quad_tolerance: float = 1e-13,
    window_sigmas: float = 12.0,
) -> DecayTable:
    """I(t) = integral exp(-y^2/4t + i x y) y^(n/2) dy per ladder point.

    For x != 0 the values must die at the rate t^((n+2)/4) exp(-t x^2); the
    constant is calibrated on the first ladder point and the remaining rows
    are checked against it (with slack for the quadrature noise floor).  For
    x = 0 the integral grows like sqrt(t) and no decay claim is made.
    """
    if n < 0 or n % 2 != 0:
        raise ValidationError("n must be an even nonnegative integer")
    power = n // 2
    ladder = tuple(float(t) for t in t_ladder)
    if len(ladder) < 1 or any(t <= 0 for t in ladder) or any(
        a >= b for a, b in zip(ladder, ladder[1:])
    ):
        raise ValidationError("t ladder must be positive and strictly increasing")

    values = []
    for t in ladder:
        window = window_sigmas * math.sqrt(2.0 * t)
        edges = _panel_edges(window, abs(x))
        budget = _Budget(300_000)

        def fn(y: np.ndarray, t=t) -> np.ndarray:
            base = np.exp(-(y * y) / (4.0 * t) + 1j * x * y)
            return base * y**power if power else base

        val, _ = adaptive_quadrature(fn, edges, quad_tolerance, budget)
        values.append(val)

    def shape(t: float) -> float:
        return t ** ((n + 2) / 4.0) * math.exp(-t * x * x)

    if x == 0:
        rows = tuple(DecayRow(t, v, None) for t, v in zip(ladder, values))
        return DecayTable(x=x, n=n, rows=rows, constant=None, decay_ok=None)

    constant = abs(values[0]) / shape(ladder[0]) if shape(ladder[0]) > 0 else 0.0
    noise_floor = 1e-12
    rows = []
    ok = True
    for t, v in zip(ladder, values):
        bound = 2.0 * constant * shape(t) + noise_floor
        rows.append(DecayRow(t, v, bound))
        if abs(v) > bound:
            ok = False
    return DecayTable(x=x, n=n, rows=tuple(rows), constant=constant, decay_ok=ok)


@dataclass(frozen=True)
class ShiftRow:
    zeta: float
    difference: float
    asserted: bool

    def to_json_dict(self) -> dict:
        return {
            "zeta": self.zeta,
            "difference": self.difference,
            "asserted": self.asserted,
        }


@dataclass(frozen=True)
class ShiftTable:
    t: float
    gap: float
    base_value: complex
    rows: Tuple[ShiftRow, ...]
    linear_ok: bool

    def to_json_dict(self) -> dict:
        return {
            "t": self.t,
            "gap": self.gap,
            "base_value": [self.base_value.real, self.base_value.imag],
            "rows": [r.to_json_dict() for r in self.rows],
            "linear_ok": self.linear_ok,
        }


def shift_smoothness_check(
    atlas: FixedPointAtlas,
    zeta_list: Sequence[float],
    cfg: Optional[MollifierConfig] = None,
) -> ShiftTable:
    """|F(zeta) - F(0)| at the top of the t ladder, where F is the mollified
    value with every moment shifted by -zeta.

    Both integrands are evaluated on one shared fixed grid and differenced
    analytically (the shift is a global phase factor), so F(0) - F(0) is
    exactly zero and the zeta scaling is smooth down to the rounding floor.
    Rows with |zeta| below half the moment gap are asserted against a
    monotone near-linear profile; larger shifts are reported unasserted.
    """
    if atlas.geometry != "symplectic" or atlas.group.rank != 1:
        raise ValidationError("shift smoothness is a symplectic circle diagnostic")
    cfg = cfg or MollifierConfig()
    g0 = atlas_integrand(atlas)
    t = cfg.t_ladder[-1]
    vol = atlas.group.vol.numeric_value().real
    gap = moment_gap(atlas)
    zmax = max((abs(z) for z in zeta_list), default=0.0)
    window = cfg.window_sigmas * math.sqrt(2.0 * t)
    edges = _panel_edges(window, g0.max_frequency(window) + zmax)

    def base_fn(y: np.ndarray) -> np.ndarray:
        return np.exp(-(y * y) / (4.0 * t)) * g0.fn([y])

    base = fixed_quadrature(base_fn, edges) / vol

    rows = []
    diffs = {}
    for zeta in zeta_list:
        if zeta == 0:
            rows.append(ShiftRow(0.0, 0.0, True))
            diffs[0.0] = 0.0
            continue

        def diff_fn(y: np.ndarray, zeta=zeta) -> np.ndarray:
            # exp(-i z y) - 1 without cancellation
            shift = -2j * np.sin(zeta * y / 2) * np.exp(-1j * zeta * y / 2)
            return np.exp(-(y * y) / (4.0 * t)) * g0.fn([y]) * shift

        d = abs(fixed_quadrature(diff_fn, edges)) / vol
        asserted = abs(zeta) < gap / 2
        rows.append(ShiftRow(float(zeta), d, asserted))
        if asserted:
            diffs[abs(float(zeta))] = d

    floor = 1e-13 * max(1.0, abs(base))
    linear_ok = True
    ordered = sorted(diffs.items())
    for (z1, d1), (z2, d2) in zip(ordered, ordered[1:]):
        if z1 == 0:
            continue
        # within factor 10 of linear scaling, above the noise floor
        if max(d1, floor) > 10.0 * (z1 / z2) * max(d2, floor):
            linear_ok = False
    return ShiftTable(t=t, gap=gap, base_value=base, rows=tuple(rows), linear_ok=linear_ok)


# -- exact-vs-oracle comparison -----------------------------------------


def oracle_comparison(
    report, atlas: FixedPointAtlas, cfg: Optional[MollifierConfig] = None
) -> dict:
    """Compare a symplectic circle reduction report against the mollified
    limit of the same summed series.

    The exact raw coefficient is the residue sum over positive-moment
    points; a contour shift identifies the mollified limit of the full sum
    with 2 pi i times that residue sum.  The oracle-side quotient therefore
    is prefactor * vol * oint / (2 pi i), with vol and prefactor taken from
    the report's own profile so the convention cancels structurally.
    """
    if atlas.geometry != "symplectic" or atlas.group.rank != 1:
        raise ValidationError(
            "oracle comparison is defined for symplectic circle reductions"
        )
    cfg = cfg or MollifierConfig()
    res = mollified_oint(
        atlas_integrand(atlas, eta_mode=report.eta_mode), atlas.group, cfg
    )
    vol = atlas.group.vol.numeric_value().real
    pref = report.prefactor.numeric_value()
    oracle_value = pref * vol * res.estimate / (2j * math.pi)
    exact_value = report.quotient_integral.numeric()
    abs_err = abs(oracle_value - exact_value)
    rel_err = abs_err / max(abs(exact_value), 1e-30)
    return {
        "oracle_value": [oracle_value.real, oracle_value.imag],
        "exact_value": [exact_value.real, exact_value.imag],
        "abs_err": abs_err,
        "rel_err": rel_err,
        "t_ladder": list(cfg.t_ladder),
        "extrapolation": cfg.extrapolation,
        "ladder": [r.to_json_dict() for r in res.rows],
    }
