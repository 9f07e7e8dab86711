"""Exact Hermitian Gram forms for observation functionals, plus a quadrature oracle.

Every observation integral here is a quadratic form c^H G c in the doubled
coefficient vector (a-block then b-block). Entries factor into an amplitude per
doubled index, a closed-form time kernel, and a closed-form spatial overlap;
the oracle recomputes the same integrals by composite Simpson on pointwise
samples of the solution series and shares none of the closed forms.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .spectrum import ModeSet, RectangleGeometry, build_mode_set

FIELDS = ("displacement", "velocity", "normal_derivative")


# ---------------------------------------------------------------------------
# regions


@dataclass(frozen=True)
class VerticalSegments:
    """Segments {alpha_j} x I_j: displacement traces on interior vertical cuts."""

    segments: tuple  # of (alpha, (lo, hi))

    def __post_init__(self) -> None:
        segs = tuple((float(a), (float(lo), float(hi))) for a, (lo, hi) in self.segments)
        if not segs:
            raise ValueError("need at least one segment")
        for _, (lo, hi) in segs:
            if not lo < hi:
                raise ValueError("segment intervals must be nondegenerate")
        object.__setattr__(self, "segments", segs)


@dataclass(frozen=True)
class BoundaryEdgeBottom:
    pass


@dataclass(frozen=True)
class BoundaryEdgeLeft:
    pass


@dataclass(frozen=True)
class BoundaryGamma0:
    """Union of the left and bottom edges."""


@dataclass(frozen=True)
class VerticalStrip:
    a: float
    b: float

    def __post_init__(self) -> None:
        if not self.a < self.b:
            raise ValueError("strip interval must be nondegenerate")


@dataclass(frozen=True)
class HorizontalStrip:
    c: float
    d: float

    def __post_init__(self) -> None:
        if not self.c < self.d:
            raise ValueError("strip interval must be nondegenerate")


@dataclass(frozen=True)
class CrossStrips:
    """Union of a vertical and a horizontal strip.

    The observation integrates over the set union, so the shared rectangle
    (a,b) x (c,d) is counted once.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self) -> None:
        if not (self.a < self.b and self.c < self.d):
            raise ValueError("strip intervals must be nondegenerate")

    @property
    def vertical(self) -> VerticalStrip:
        return VerticalStrip(self.a, self.b)

    @property
    def horizontal(self) -> HorizontalStrip:
        return HorizontalStrip(self.c, self.d)


@dataclass(frozen=True)
class VerticalLine:
    alpha: float


@dataclass(frozen=True)
class HorizontalLine:
    beta: float


@dataclass(frozen=True)
class OpenRect:
    """Rectangle (t0,t1) x (x0,x1) in the (t, x2) plane.

    Carries its own time interval; the ObservationSpec horizon T is not used here.
    """

    t0: float
    t1: float
    x0: float
    x1: float

    def __post_init__(self) -> None:
        if not (self.t0 < self.t1 and self.x0 < self.x1):
            raise ValueError("rectangle must be nondegenerate")


_REGION_KINDS = {
    "VerticalSegments": VerticalSegments,
    "BoundaryEdgeBottom": BoundaryEdgeBottom,
    "BoundaryEdgeLeft": BoundaryEdgeLeft,
    "BoundaryGamma0": BoundaryGamma0,
    "VerticalStrip": VerticalStrip,
    "HorizontalStrip": HorizontalStrip,
    "CrossStrips": CrossStrips,
    "VerticalLine": VerticalLine,
    "HorizontalLine": HorizontalLine,
    "OpenRect": OpenRect,
}


def region_to_dict(region) -> dict:
    kind = type(region).__name__
    d = {"kind": kind}
    if kind == "VerticalSegments":
        d["segments"] = [[a, [lo, hi]] for a, (lo, hi) in region.segments]
    elif kind == "VerticalStrip":
        d.update(a=region.a, b=region.b)
    elif kind == "HorizontalStrip":
        d.update(c=region.c, d=region.d)
    elif kind == "CrossStrips":
        d.update(a=region.a, b=region.b, c=region.c, d=region.d)
    elif kind == "VerticalLine":
        d["alpha"] = region.alpha
    elif kind == "HorizontalLine":
        d["beta"] = region.beta
    elif kind == "OpenRect":
        d.update(t0=region.t0, t1=region.t1, x0=region.x0, x1=region.x1)
    return d


def region_from_dict(d: dict):
    kind = d["kind"]
    if kind not in _REGION_KINDS:
        raise ValueError(f"unknown region kind {kind!r}")
    if kind == "VerticalSegments":
        return VerticalSegments(tuple((a, (lo, hi)) for a, (lo, hi) in d["segments"]))
    keys = {k: v for k, v in d.items() if k != "kind"}
    return _REGION_KINDS[kind](**keys)


_DISPLACEMENT_REGIONS = (VerticalSegments, OpenRect)
_VELOCITY_REGIONS = (VerticalStrip, HorizontalStrip, CrossStrips, VerticalLine, HorizontalLine)
_BOUNDARY_REGIONS = (BoundaryEdgeBottom, BoundaryEdgeLeft, BoundaryGamma0)


@dataclass(frozen=True)
class ObservationSpec:
    """Region + observed field + time horizon + spectral model.

    Pairings follow the source problems: displacement traces live on plate
    segments and open (t,x2) rectangles, velocity on interior strips and lines
    of the membrane, normal derivatives on boundary edges of the membrane.
    """

    region: object
    field: str
    T: float
    model: str

    def __post_init__(self) -> None:
        if self.field not in FIELDS:
            raise ValueError(f"field must be one of {FIELDS}")
        if self.model not in ("plate", "wave"):
            raise ValueError("model must be 'plate' or 'wave'")
        if not self.T > 0:
            raise ValueError("time horizon must be positive")
        r = self.region
        if self.field == "displacement":
            ok = isinstance(r, _DISPLACEMENT_REGIONS) and self.model == "plate"
        elif self.field == "velocity":
            ok = isinstance(r, _VELOCITY_REGIONS) and self.model == "wave"
        else:
            ok = isinstance(r, _BOUNDARY_REGIONS) and self.model == "wave"
        if not ok:
            raise ValueError(
                f"incompatible pairing: field={self.field}, "
                f"region={type(r).__name__}, model={self.model}"
            )

    def validate_geometry(self, geometry: RectangleGeometry) -> None:
        """Require all region parameters strictly inside the rectangle."""
        r = self.region
        l1, l2 = geometry.ell1, geometry.ell2

        def inside(x, ell, what):
            if not 0 < x < ell:
                raise ValueError(f"{what}={x} not strictly inside (0, {ell})")

        if isinstance(r, VerticalSegments):
            for alpha, (lo, hi) in r.segments:
                inside(alpha, l1, "alpha")
                inside(lo, l2, "interval endpoint")
                inside(hi, l2, "interval endpoint")
        elif isinstance(r, VerticalStrip):
            inside(r.a, l1, "a")
            inside(r.b, l1, "b")
        elif isinstance(r, HorizontalStrip):
            inside(r.c, l2, "c")
            inside(r.d, l2, "d")
        elif isinstance(r, CrossStrips):
            inside(r.a, l1, "a")
            inside(r.b, l1, "b")
            inside(r.c, l2, "c")
            inside(r.d, l2, "d")
        elif isinstance(r, VerticalLine):
            inside(r.alpha, l1, "alpha")
        elif isinstance(r, HorizontalLine):
            inside(r.beta, l2, "beta")
        elif isinstance(r, OpenRect):
            inside(r.x0, l2, "x0")
            inside(r.x1, l2, "x1")

    def to_dict(self) -> dict:
        return {
            "region": region_to_dict(self.region),
            "field": self.field,
            "T": self.T,
            "model": self.model,
        }

    @staticmethod
    def from_dict(d: dict) -> "ObservationSpec":
        return ObservationSpec(region_from_dict(d["region"]), d["field"], d["T"], d["model"])


# ---------------------------------------------------------------------------
# closed-form kernels


def _interval_kernel(delta, lo: float, hi: float):
    """integral over (lo, hi) of e^{i delta s} ds, elementwise in delta.

    Written with odd/even real expressions so that the value at -delta is the
    exact floating-point conjugate; Gram matrices built from it are Hermitian
    to the last bit.
    """
    d = np.asarray(delta, dtype=float)
    out = np.empty(d.shape, dtype=complex)
    zero = d == 0.0
    dn = np.where(zero, 1.0, d)
    re = (np.sin(dn * hi) - np.sin(dn * lo)) / dn
    im = (np.cos(dn * lo) - np.cos(dn * hi)) / dn
    out.real = np.where(zero, hi - lo, re)
    out.imag = np.where(zero, 0.0, im)
    return out


def time_kernel(w1: float, w2: float, T: float) -> complex:
    """integral over (0, T) of e^{i (w1 - w2) t} dt; equals T when w1 = w2."""
    if not T > 0:
        raise ValueError("T must be positive")
    return complex(_interval_kernel(np.float64(w1) - np.float64(w2), 0.0, T))


def sine_overlap(k: int, kp: int, interval, scale: float) -> float:
    """integral over the interval of sin(scale*k*y) sin(scale*kp*y) dy.

    scale is the wavenumber unit pi/ell; over the full axis (0, pi/scale) this
    reduces to orthogonality, (pi/(2 scale)) when k = kp and 0 otherwise.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if k < 1 or kp < 1:
        raise ValueError("mode indices must be >= 1")
    z = float(scale)
    if k == kp:
        return (hi - lo) / 2.0 - (math.sin(2 * z * k * hi) - math.sin(2 * z * k * lo)) / (4 * z * k)
    dm, dp = z * (k - kp), z * (k + kp)
    return 0.5 * (
        (math.sin(dm * hi) - math.sin(dm * lo)) / dm
        - (math.sin(dp * hi) - math.sin(dp * lo)) / dp
    )


def _sine_overlap_matrix(ks: np.ndarray, interval, scale: float) -> np.ndarray:
    """sine_overlap over all index pairs of ks, vectorized, exactly symmetric."""
    lo, hi = float(interval[0]), float(interval[1])
    z = float(scale)
    dm = z * (ks[None, :] - ks[:, None])  # antisymmetric exactly
    dp = z * (ks[None, :] + ks[:, None])
    same = dm == 0.0
    dmn = np.where(same, 1.0, dm)
    cross = 0.5 * (
        (np.sin(dmn * hi) - np.sin(dmn * lo)) / dmn
        - (np.sin(dp * hi) - np.sin(dp * lo)) / dp
    )
    kk = z * (ks[None, :] + ks[:, None])  # = 2 z k on the diagonal
    diag = (hi - lo) / 2.0 - (np.sin(kk * hi) - np.sin(kk * lo)) / (2.0 * kk)
    return np.where(same, diag, cross)


# ---------------------------------------------------------------------------
# Gram assembly


@dataclass(frozen=True)
class GramForm:
    """Hermitian PSD matrix with c^H G c = observation integral of the state."""

    mode_set: ModeSet
    matrix: np.ndarray
    spec: ObservationSpec

    def __post_init__(self) -> None:
        g = np.ascontiguousarray(self.matrix, dtype=complex)
        n = 2 * len(self.mode_set)
        if g.shape != (n, n):
            raise ValueError(f"matrix must be {n}x{n}")
        scale = np.max(np.abs(g))
        if scale > 0 and np.max(np.abs(g - g.conj().T)) > 1e-14 * scale:
            raise ValueError("matrix is not Hermitian to tolerance")
        g.flags.writeable = False
        object.__setattr__(self, "matrix", g)

    def quadratic_form(self, state_or_coeffs) -> float:
        c = getattr(state_or_coeffs, "doubled", lambda: np.asarray(state_or_coeffs))()
        c = np.asarray(c, dtype=complex)
        return float(np.real(np.vdot(c, self.matrix @ c)))

    def to_json(self) -> str:
        ms = self.mode_set
        doc = {
            "geometry": {"ell1": ms.geometry.ell1, "ell2": ms.geometry.ell2},
            "K1": ms.K1,
            "K2": ms.K2,
            "mode_order": [[m.k1, m.k2] for m in ms.modes],
            "spec": self.spec.to_dict(),
            "matrix_re": self.matrix.real.tolist(),
            "matrix_im": self.matrix.imag.tolist(),
        }
        return json.dumps(doc, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "GramForm":
        doc = json.loads(text)
        geom = RectangleGeometry(doc["geometry"]["ell1"], doc["geometry"]["ell2"])
        ms = build_mode_set(geom, doc["K1"], doc["K2"])
        g = np.array(doc["matrix_re"]) + 1j * np.array(doc["matrix_im"])
        return GramForm(ms, g, ObservationSpec.from_dict(doc["spec"]))


def _mode_arrays(mode_set: ModeSet):
    k1 = np.array([m.k1 for m in mode_set.modes])
    k2 = np.array([m.k2 for m in mode_set.modes])
    lam = np.array([m.lam for m in mode_set.modes])
    return k1, k2, lam


def _frequencies(spec: ObservationSpec, mode_set: ModeSet) -> np.ndarray:
    """Signed frequencies over the doubled index (a-block +, b-block -)."""
    _, _, lam = _mode_arrays(mode_set)
    w = np.sqrt(lam) if spec.model == "wave" else lam
    return np.concatenate([w, -w])


def _amplitudes(spec: ObservationSpec, mode_set: ModeSet, region) -> np.ndarray:
    k1, k2, _ = _mode_arrays(mode_set)
    g = mode_set.geometry
    if spec.field == "displacement":
        amp = np.ones(len(mode_set))
        return np.concatenate([amp, amp]).astype(complex)
    if spec.field == "velocity":
        return 1j * _frequencies(spec, mode_set)
    # normal derivative: d/dx2 at the bottom edge brings pi k2 / l2, d/dx1 at
    # the left edge pi k1 / l1
    if isinstance(region, BoundaryEdgeBottom):
        amp = (math.pi / g.ell2) * k2
    elif isinstance(region, BoundaryEdgeLeft):
        amp = (math.pi / g.ell1) * k1
    else:
        raise ValueError("normal derivative amplitudes are per-edge")
    return np.concatenate([amp, amp]).astype(complex)


@dataclass(frozen=True)
class _OverlapRect:
    """Rectangle (a,b)x(c,d) shared by the two strips of a CrossStrips union."""

    a: float
    b: float
    c: float
    d: float


def _spatial_overlap(region, mode_set: ModeSet) -> np.ndarray:
    """Mode-pair overlap of the observed spatial profiles (real symmetric)."""
    k1, k2, _ = _mode_arrays(mode_set)
    g = mode_set.geometry
    z1, z2 = math.pi / g.ell1, math.pi / g.ell2
    same_k1 = (k1[:, None] == k1[None, :]).astype(float)
    same_k2 = (k2[:, None] == k2[None, :]).astype(float)
    if isinstance(region, VerticalSegments):
        sp = np.zeros((len(mode_set), len(mode_set)))
        for alpha, (lo, hi) in region.segments:
            pt = np.sin(k1 * (z1 * alpha))
            sp += np.outer(pt, pt) * _sine_overlap_matrix(k2, (lo, hi), z2)
        return sp
    if isinstance(region, BoundaryEdgeBottom):
        return (g.ell1 / 2.0) * same_k1
    if isinstance(region, BoundaryEdgeLeft):
        return (g.ell2 / 2.0) * same_k2
    if isinstance(region, VerticalStrip):
        return _sine_overlap_matrix(k1, (region.a, region.b), z1) * (g.ell2 / 2.0) * same_k2
    if isinstance(region, HorizontalStrip):
        return (g.ell1 / 2.0) * same_k1 * _sine_overlap_matrix(k2, (region.c, region.d), z2)
    if isinstance(region, VerticalLine):
        pt = np.sin(k1 * (z1 * region.alpha))
        return np.outer(pt, pt) * (g.ell2 / 2.0) * same_k2
    if isinstance(region, HorizontalLine):
        pt = np.sin(k2 * (z2 * region.beta))
        return (g.ell1 / 2.0) * same_k1 * np.outer(pt, pt)
    if isinstance(region, _OverlapRect):
        return _sine_overlap_matrix(k1, (region.a, region.b), z1) * _sine_overlap_matrix(
            k2, (region.c, region.d), z2
        )
    raise ValueError(f"no sine overlap for region {type(region).__name__}")


def _gram_matrix(spec: ObservationSpec, mode_set: ModeSet, region) -> np.ndarray:
    if isinstance(region, BoundaryGamma0):
        return _gram_matrix(spec, mode_set, BoundaryEdgeLeft()) + _gram_matrix(
            spec, mode_set, BoundaryEdgeBottom()
        )
    if isinstance(region, CrossStrips):
        # integral over the union: the shared rectangle is counted once
        return (
            _gram_matrix(spec, mode_set, region.vertical)
            + _gram_matrix(spec, mode_set, region.horizontal)
            - _gram_matrix(
                spec, mode_set, _OverlapRect(region.a, region.b, region.c, region.d)
            )
        )
    if isinstance(region, OpenRect):
        _, k2, lam = _mode_arrays(mode_set)
        z = mode_set.geometry.z
        wt = np.concatenate([lam, -lam])
        wx = np.concatenate([z * k2, -z * k2])
        kt = _interval_kernel(wt[None, :] - wt[:, None], region.t0, region.t1)
        kx = _interval_kernel(wx[None, :] - wx[:, None], region.x0, region.x1)
        return kt * kx
    w = _frequencies(spec, mode_set)
    amps = _amplitudes(spec, mode_set, region)
    kt = _interval_kernel(w[None, :] - w[:, None], 0.0, spec.T)
    sp = _spatial_overlap(region, mode_set)
    sp2 = np.tile(sp, (2, 2))
    return np.conj(amps)[:, None] * amps[None, :] * kt * sp2


def assemble_gram(spec: ObservationSpec, mode_set: ModeSet) -> GramForm:
    """Closed-form Gram matrix of the observation integral on the mode set."""
    spec.validate_geometry(mode_set.geometry)
    return GramForm(mode_set, _gram_matrix(spec, mode_set, spec.region), spec)


# ---------------------------------------------------------------------------
# quadrature oracle


def _simpson_weights(lo: float, hi: float, panels: int):
    """Composite Simpson nodes and weights with the given even panel count."""
    x = np.linspace(lo, hi, panels + 1)
    w = np.ones(panels + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    w *= (hi - lo) / panels / 3.0
    return x, w


def _normalize_resolution(resolution: int) -> int:
    if resolution < 64:
        raise ValueError("resolution must be >= 64")
    return resolution + (resolution % 2)


def _dense_rect_integral(coeffs, wt, t_int, profiles, x, wx) -> float:
    """Simpson integral of |sum_i coeffs_i e^{i wt_i t} profiles_i(x)|^2.

    profiles is (n, Nx) already sampled; the field matrix is built densely.
    """
    t, tw = t_int
    field = (np.exp(1j * np.outer(t, wt)) * coeffs[None, :]) @ profiles
    return float(tw @ (np.abs(field) ** 2) @ wx)


def _pointwise_axis_gram(samples: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Weighted pointwise Gram sum_x w_x conj(f_i(x)) f_j(x); samples is (n, Nx)."""
    return (np.conj(samples) * w[None, :]) @ samples.T


def quadrature_oracle(state, spec: ObservationSpec, resolution: int) -> float:
    """Composite-Simpson value of the observation integral, from pointwise samples.

    Regions with one spatial axis are integrated on a dense (t, axis) grid. The
    strip regions have three axes; there the Simpson sum is factorized through
    per-axis pointwise Gram matrices, which reproduces the full tensor-grid sum
    exactly because the sampled field is a sum of products over the axes.
    resolution is the Simpson panel count per axis (odd values rounded up).
    """
    spec.validate_geometry(state.mode_set.geometry)
    res = _normalize_resolution(resolution)
    ms = state.mode_set
    g = ms.geometry
    k1, k2, lam = _mode_arrays(ms)
    z1, z2 = math.pi / g.ell1, math.pi / g.ell2
    region = spec.region
    c = state.doubled()

    if isinstance(region, OpenRect):
        wt = np.concatenate([lam, -lam])
        wx = np.concatenate([z2 * k2, -z2 * k2])
        t, tw = _simpson_weights(region.t0, region.t1, res)
        x, xw = _simpson_weights(region.x0, region.x1, res)
        profiles = np.exp(1j * np.outer(wx, x))
        return _dense_rect_integral(c, wt, (t, tw), profiles, x, xw)

    w = _frequencies(spec, ms)
    k1d, k2d = np.tile(k1, 2), np.tile(k2, 2)
    t_int = _simpson_weights(0.0, spec.T, res)

    if isinstance(region, VerticalSegments):
        total = 0.0
        for alpha, (lo, hi) in region.segments:
            x, xw = _simpson_weights(lo, hi, res)
            amp = c * np.sin(k1d * (z1 * alpha))
            profiles = np.sin(np.outer(k2d * z2, x))
            total += _dense_rect_integral(amp, w, t_int, profiles, x, xw)
        return total

    if isinstance(region, (VerticalLine, HorizontalLine)):
        if isinstance(region, VerticalLine):
            amp = c * (1j * w) * np.sin(k1d * (z1 * region.alpha))
            x, xw = _simpson_weights(0.0, g.ell2, res)
            profiles = np.sin(np.outer(k2d * z2, x))
        else:
            amp = c * (1j * w) * np.sin(k2d * (z2 * region.beta))
            x, xw = _simpson_weights(0.0, g.ell1, res)
            profiles = np.sin(np.outer(k1d * z1, x))
        return _dense_rect_integral(amp, w, t_int, profiles, x, xw)

    if isinstance(region, (BoundaryEdgeBottom, BoundaryEdgeLeft, BoundaryGamma0)):
        total = 0.0
        parts = (
            [BoundaryEdgeLeft(), BoundaryEdgeBottom()]
            if isinstance(region, BoundaryGamma0)
            else [region]
        )
        for part in parts:
            if isinstance(part, BoundaryEdgeBottom):
                amp = c * (z2 * k2d)
                x, xw = _simpson_weights(0.0, g.ell1, res)
                profiles = np.sin(np.outer(k1d * z1, x))
            else:
                amp = c * (z1 * k1d)
                x, xw = _simpson_weights(0.0, g.ell2, res)
                profiles = np.sin(np.outer(k2d * z2, x))
            total += _dense_rect_integral(amp, w, t_int, profiles, x, xw)
        return total

    if isinstance(region, (VerticalStrip, HorizontalStrip, CrossStrips)):
        if isinstance(region, VerticalStrip):
            boxes = [((region.a, region.b), (0.0, g.ell2), 1.0)]
        elif isinstance(region, HorizontalStrip):
            boxes = [((0.0, g.ell1), (region.c, region.d), 1.0)]
        else:
            # union of the two strips: subtract the doubly covered rectangle
            boxes = [
                ((region.a, region.b), (0.0, g.ell2), 1.0),
                ((0.0, g.ell1), (region.c, region.d), 1.0),
                ((region.a, region.b), (region.c, region.d), -1.0),
            ]
        total = 0.0
        amp = c * (1j * w)
        t, tw = t_int
        ct = _pointwise_axis_gram(np.exp(1j * np.outer(w, t)), tw)
        for i1, i2, sign in boxes:
            x1, w1 = _simpson_weights(*i1, res)
            x2, w2 = _simpson_weights(*i2, res)
            cx1 = _pointwise_axis_gram(np.sin(np.outer(k1d * z1, x1)), w1)
            cx2 = _pointwise_axis_gram(np.sin(np.outer(k2d * z2, x2)), w2)
            m = ct * cx1 * cx2
            total += sign * float(np.real(np.vdot(amp, m @ amp)))
        return total

    raise ValueError(f"no oracle for region {type(region).__name__}")


# ---------------------------------------------------------------------------
# four-family form


def thm21_fourfamily_form(coeffs, omega: OpenRect, geometry: RectangleGeometry) -> float:
    """integral over omega of |f(t,x2)|^2 for the four-family exponential sum.

    coeffs is a 4-tuple of arrays shaped (K2, K1), indexed [k2-1, k1-1], for
    the families with exponents +zx-lt signs (+,+), (-,+), (+,-), (-,-) in
    (z k2 x2, lambda_k t). All kernels are the closed interval forms.
    """
    fams = [np.ascontiguousarray(f, dtype=complex) for f in coeffs]
    if len(fams) != 4 or any(f.shape != fams[0].shape or f.ndim != 2 for f in fams):
        raise ValueError("coeffs must be four equal-shape (K2, K1) arrays")
    K2, K1 = fams[0].shape
    k1 = np.tile(np.arange(1, K1 + 1), K2)
    k2 = np.repeat(np.arange(1, K2 + 1), K1)
    lam = geometry.u * k1**2 + geometry.v * k2**2
    signs = ((1, 1), (-1, 1), (1, -1), (-1, -1))
    wx = np.concatenate([sx * geometry.z * k2 for sx, _ in signs])
    wt = np.concatenate([st * lam for _, st in signs])
    cvec = np.concatenate([f.reshape(-1) for f in fams])
    kt = _interval_kernel(wt[None, :] - wt[:, None], omega.t0, omega.t1)
    kx = _interval_kernel(wx[None, :] - wx[:, None], omega.x0, omega.x1)
    return float(np.real(np.vdot(cvec, (kt * kx) @ cvec)))
