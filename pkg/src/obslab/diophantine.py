"""Algebraic observation points and brute-force Diophantine scans.

The point set theta_j = frac(2^(j/(M+1))) lives in a degree-(M+1) real field,
so {theta_1, ..., theta_M, 1} are rationally independent by construction. The
scan for gamma_hat = min_k k^(1/M) max_j dist(k theta_j, Z) runs in 96-bit
integer fixed point: double precision would lose about six digits of the
fractional part by k = 10^6, while the quantization error here stays below
K_max * 2^-96.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

_FP_BITS = 96
_FP_ONE = 1 << _FP_BITS
_FP_MASK = _FP_ONE - 1


def _int_nth_root(n: int, r: int) -> int:
    """Floor of the r-th root of a nonnegative integer, exactly."""
    if n < 0 or r < 1:
        raise ValueError("need n >= 0 and r >= 1")
    if n == 0 or r == 1:
        return n
    if r == 2:
        return math.isqrt(n)
    x = 1 << -(-n.bit_length() // r)  # power of two at or above the root
    while True:
        y = ((r - 1) * x + n // x ** (r - 1)) // r
        if y >= x:
            return x
        x = y


@dataclass(frozen=True)
class AlgebraicPointSet:
    """M fractional parts of powers of one degree-(M+1) radical, scaled to (0, ell1).

    theta_fp holds floor(theta_j * 2^96) for exact modular accumulation; when
    constructed directly from floats it only carries double precision.
    """

    M: int
    theta: tuple
    alphas: tuple
    theta_fp: tuple = field(default=None, repr=False)

    def __post_init__(self) -> None:
        theta = tuple(float(t) for t in self.theta)
        alphas = tuple(float(a) for a in self.alphas)
        if self.M < 1 or len(theta) != self.M or len(alphas) != self.M:
            raise ValueError("need M >= 1 points with matching alphas")
        if not all(0 < t < 1 for t in theta):
            raise ValueError("theta values must lie in (0, 1)")
        if len(set(theta)) != self.M:
            raise ValueError("theta values must be pairwise distinct")
        if not all(a > 0 for a in alphas):
            raise ValueError("alphas must be positive")
        fp = self.theta_fp
        fp = tuple(int(t * _FP_ONE) for t in theta) if fp is None else tuple(int(v) for v in fp)
        if len(fp) != self.M or not all(0 < v < _FP_ONE for v in fp):
            raise ValueError("theta_fp must hold M scaled values in (0, 2^96)")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "theta_fp", fp)

    @property
    def field_degree(self) -> int:
        return self.M + 1


@dataclass(frozen=True)
class DiophantineReport:
    """Empirical lower-bound constant from a finite scan k = 1..K_max."""

    gamma_hat: float
    K_max: int
    argmin_k: int
    points: AlgebraicPointSet

    def to_json(self) -> str:
        doc = {
            "M": self.points.M,
            "generator": (
                f"fractional parts of 2^(j/{self.points.M + 1}) for j = 1..{self.points.M}"
            ),
            "independence": (
                "rational independence of the thetas together with 1 holds by "
                "construction in the degree-(M+1) field; assumed, not re-proved"
            ),
            "theta": list(self.points.theta),
            "K_max": self.K_max,
            "gamma_hat": self.gamma_hat,
            "argmin_k": self.argmin_k,
        }
        return json.dumps(doc, sort_keys=True)


def build_algebraic_points(M: int, ell1: float) -> AlgebraicPointSet:
    """Point set theta_j = frac(2^(j/(M+1))), alphas scaled by ell1.

    The fixed-point values floor(2^(j/(M+1)) * 2^96) are computed by integer
    root extraction, so they are exact floors, not rounded floats.
    """
    if M != int(M) or M < 1:
        raise ValueError("M must be an integer >= 1")
    if not ell1 > 0:
        raise ValueError("ell1 must be positive")
    M = int(M)
    fps = []
    for j in range(1, M + 1):
        root = _int_nth_root(1 << (j + _FP_BITS * (M + 1)), M + 1)
        fps.append(root & _FP_MASK)
    theta = tuple(fp / _FP_ONE for fp in fps)
    alphas = tuple(float(ell1) * t for t in theta)
    return AlgebraicPointSet(M, theta, alphas, tuple(fps))


def dist_to_integers(x):
    """Distance to the nearest integer, in [0, 1/2]; elementwise on arrays."""
    arr = np.asarray(x, dtype=float)
    d = np.abs(arr - np.rint(arr))
    return float(d) if arr.ndim == 0 else d


def estimate_gamma(points: AlgebraicPointSet, K_max: int) -> DiophantineReport:
    """Brute-force gamma_hat = min over k <= K_max of k^(1/M) max_j dist(k theta_j, Z).

    All accumulation and comparison is exact integer arithmetic on the 2^96
    grid (values compared as k * dist^M, a monotone transform); only the final
    gamma_hat is converted to float.
    """
    if K_max != int(K_max) or K_max < 1:
        raise ValueError("K_max must be an integer >= 1")
    K_max = int(K_max)
    M = points.M
    half = _FP_ONE >> 1
    best_val = None
    best_k = 1
    best_d = 0
    if M == 1:
        fp = points.theta_fp[0]
        acc = 0
        for k in range(1, K_max + 1):
            acc = (acc + fp) & _FP_MASK
            d = acc if acc <= half else _FP_ONE - acc
            val = k * d
            if best_val is None or val < best_val:
                best_val, best_k, best_d = val, k, d
    else:
        accs = [0] * M
        for k in range(1, K_max + 1):
            dmax = 0
            for j in range(M):
                acc = (accs[j] + points.theta_fp[j]) & _FP_MASK
                accs[j] = acc
                d = acc if acc <= half else _FP_ONE - acc
                if d > dmax:
                    dmax = d
            val = k * dmax**M
            if best_val is None or val < best_val:
                best_val, best_k, best_d = val, k, dmax
    if best_d == 0:
        raise RuntimeError("scan hit an exactly representable integer multiple")
    gamma_hat = best_k ** (1.0 / M) * (best_d / _FP_ONE)
    return DiophantineReport(gamma_hat, K_max, best_k, points)


def sine_dist_check(x, k: int) -> bool:
    """Check |sin(kx)| >= 2 dist(kx/pi, Z) - 1e-12, over all given x."""
    if k != int(k):
        raise ValueError("k must be an integer")
    arr = np.asarray(x, dtype=float)
    lhs = np.abs(np.sin(k * arr))
    rhs = 2.0 * np.abs(k * arr / math.pi - np.rint(k * arr / math.pi))
    return bool(np.all(lhs >= rhs - 1e-12))
