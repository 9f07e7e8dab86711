"""Truncated solution data, energy seminorms, symmetry projection, random states.

A state holds one complex coefficient pair (a_k, b_k) per mode; the solution it
represents is sum_k (a_k e^{i w_k t} + b_k e^{-i w_k t}) e_k(x) with w_k the
model frequency. Energy seminorms are diagonal in the coefficients, so they
serve as the D side of every observability pencil.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .spectrum import ModeSet, RectangleGeometry, build_mode_set

_MODELS = ("plate", "wave")


@dataclass(frozen=True)
class SpectralState:
    mode_set: ModeSet
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self) -> None:
        a = np.ascontiguousarray(self.a, dtype=complex)
        b = np.ascontiguousarray(self.b, dtype=complex)
        n = len(self.mode_set)
        if a.shape != (n,) or b.shape != (n,):
            raise ValueError(f"coefficient arrays must have shape ({n},)")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("coefficients must be finite")
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def doubled(self) -> np.ndarray:
        """Coefficients over the doubled index: a-block then b-block."""
        return np.concatenate([self.a, self.b])


@dataclass(frozen=True)
class EnergyWeight:
    """Diagonal energy form selector.

    plate: weight lambda_k^s on both coefficient families (the s-seminorm).
    wave:  the physical energy of the membrane; s is ignored and the weight is
           (l1 l2 / 2) lambda_k, which integrates |grad u0|^2 + |u1|^2 exactly.
    """

    s: float
    model: str

    def __post_init__(self) -> None:
        if self.model not in _MODELS:
            raise ValueError(f"model must be one of {_MODELS}")
        if not math.isfinite(self.s):
            raise ValueError("exponent must be finite")

    def diagonal(self, mode_set: ModeSet) -> np.ndarray:
        """Per-mode weights (not doubled); both families share the same weight."""
        lam = np.array([m.lam for m in mode_set.modes])
        if self.model == "plate":
            return lam**self.s
        g = mode_set.geometry
        return 0.5 * g.ell1 * g.ell2 * lam


@dataclass(frozen=True)
class SymmetrySpec:
    """Order-p translation symmetry along one axis, anchored at the point alpha.

    p must be the smallest positive integer with p*alpha/pi an integer; then
    sin(n*alpha) vanishes exactly for the multiples of p and nowhere else.
    """

    p: int
    axis: str
    alpha: float

    def __post_init__(self) -> None:
        if self.p < 2:
            raise ValueError("p must be >= 2")
        if self.axis not in ("x1", "x2"):
            raise ValueError("axis must be 'x1' or 'x2'")
        ratio = self.p * self.alpha / math.pi
        if abs(ratio - round(ratio)) > 1e-9:
            raise ValueError(f"p*alpha/pi = {ratio} is not an integer")
        for q in range(1, self.p):
            r = q * self.alpha / math.pi
            if abs(r - round(r)) <= 1e-9:
                raise ValueError(f"p is not minimal: {q}*alpha/pi is already an integer")


def energy_seminorm_sq(state: SpectralState, weight: EnergyWeight) -> float:
    w = weight.diagonal(state.mode_set)
    return float(np.sum(w * (np.abs(state.a) ** 2 + np.abs(state.b) ** 2)))


def project_p_symmetric(state: SpectralState, spec: SymmetrySpec) -> SpectralState:
    """Zero the coefficients whose index along spec.axis is a multiple of p.

    This is the orthogonal projection onto p-symmetric data: a sine series is
    p-symmetric exactly when its coefficients vanish at multiples of p.
    """
    ks = np.array([m.k1 if spec.axis == "x1" else m.k2 for m in state.mode_set.modes])
    keep = (ks % spec.p) != 0
    return SpectralState(state.mode_set, state.a * keep, state.b * keep)


def symmetry_residual(f_samples, p: int) -> float:
    """Worst violation of sum_{k=1}^{p} f(t + 2 k pi / p) = 0 on the grid.

    f_samples[i] = f(i*pi/N) for i = 0..N-1 samples a function on (0, pi); it is
    extended to a 2pi-periodic odd function, which the shifts then permute. N
    must be a multiple of 2p so every shifted point is again a grid node.
    """
    f = np.asarray(f_samples)
    n = f.shape[0]
    if p < 1:
        raise ValueError("p must be a positive integer")
    if n == 0 or n % (2 * p) != 0:
        raise ValueError(f"grid size must be a nonzero multiple of 2p, got {n} for p={p}")
    ext = np.zeros(2 * n, dtype=f.dtype if np.iscomplexobj(f) else float)
    ext[:n] = f
    ext[n] = 0.0
    ext[n + 1 :] = -f[:0:-1]  # odd reflection: f(pi + y) = -f(pi - y)
    shift = 2 * n // p
    total = np.zeros_like(ext)
    for k in range(1, p + 1):
        total += np.roll(ext, -k * shift)
    return float(np.max(np.abs(total)))


def axis_trace(state: SpectralState, axis: str, transverse: float, n_samples: int) -> np.ndarray:
    """Sample u0 = sum (a+b)_k e_k along one axis at a fixed transverse point.

    Returns u0 on the grid i*ell_axis/n_samples, i = 0..n_samples-1, the grid
    convention symmetry_residual expects (for the pi-length axes of the square).
    """
    ms = state.mode_set
    g = ms.geometry
    k1 = np.array([m.k1 for m in ms.modes])
    k2 = np.array([m.k2 for m in ms.modes])
    c = state.a + state.b
    if axis == "x1":
        x = np.arange(n_samples) * (g.ell1 / n_samples)
        along, across, ell_a, ell_c = k1, k2, g.ell1, g.ell2
    elif axis == "x2":
        x = np.arange(n_samples) * (g.ell2 / n_samples)
        along, across, ell_a, ell_c = k2, k1, g.ell2, g.ell1
    else:
        raise ValueError("axis must be 'x1' or 'x2'")
    point = np.sin(across * (math.pi * transverse / ell_c))
    # (n_samples, n_modes) sine table contracted against weighted coefficients
    table = np.sin(np.outer(x, along * (math.pi / ell_a)))
    return table @ (c * point)


def random_state(mode_set: ModeSet, seed: int, decay: float = 0.0) -> SpectralState:
    """Deterministic random state with |a_k|, |b_k| <= lambda_k^(-decay).

    Coefficients are uniform on the complex unit disc, then scaled; decay 0
    gives rough data, decay >= 2 the smooth regime.
    """
    if decay < 0:
        raise ValueError("decay must be >= 0")
    rng = np.random.default_rng(seed)
    n = len(mode_set)
    lam = np.array([m.lam for m in mode_set.modes])
    scale = lam ** (-decay) if decay != 0 else np.ones(n)

    def disc(count: int) -> np.ndarray:
        r = np.sqrt(rng.random(count))
        phi = 2.0 * math.pi * rng.random(count)
        return r * np.exp(1j * phi)

    a = disc(n) * scale
    b = disc(n) * scale
    if not (np.any(a) or np.any(b)):  # measure-zero guard, contract requires it
        a = a.copy()
        a[0] = scale[0]
    return SpectralState(mode_set, a, b)


def state_to_json(state: SpectralState) -> str:
    """Serialize to JSON; float repr makes the round trip bit-exact."""
    ms = state.mode_set
    rows = [
        [m.k1, m.k2, state.a[i].real, state.a[i].imag, state.b[i].real, state.b[i].imag]
        for i, m in enumerate(ms.modes)
    ]
    doc = {
        "geometry": {"ell1": ms.geometry.ell1, "ell2": ms.geometry.ell2},
        "K1": ms.K1,
        "K2": ms.K2,
        "coefficients": rows,
    }
    return json.dumps(doc, sort_keys=True)


def state_from_json(text: str) -> SpectralState:
    doc = json.loads(text)
    geom = RectangleGeometry(doc["geometry"]["ell1"], doc["geometry"]["ell2"])
    ms = build_mode_set(geom, doc["K1"], doc["K2"])
    a = np.zeros(len(ms), dtype=complex)
    b = np.zeros(len(ms), dtype=complex)
    for k1, k2, ra, ia, rb, ib in doc["coefficients"]:
        i = ms.index_of(int(k1), int(k2))
        a[i] = complex(ra, ia)
        b[i] = complex(rb, ib)
    return SpectralState(ms, a, b)
