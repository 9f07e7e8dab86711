"""Truncated sine-basis spectra for rectangles and gap-condition analysis.

Eigenfunctions on (0, l1) x (0, l2) with Dirichlet conditions are
sin(k1 pi x1 / l1) sin(k2 pi x2 / l2) with eigenvalue
lambda_k = u k1^2 + v k2^2, u = pi^2/l1^2, v = pi^2/l2^2. The membrane
oscillates at sqrt(lambda_k), the hinged plate at lambda_k itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class RectangleGeometry:
    """Side lengths of the rectangle plus the derived constants u, v, z."""

    ell1: float
    ell2: float

    def __post_init__(self) -> None:
        if not (self.ell1 > 0 and self.ell2 > 0):
            raise ValueError(f"side lengths must be positive, got ({self.ell1}, {self.ell2})")

    @property
    def u(self) -> float:
        return math.pi**2 / self.ell1**2

    @property
    def v(self) -> float:
        return math.pi**2 / self.ell2**2

    @property
    def z(self) -> float:
        return math.pi / self.ell2


@dataclass(frozen=True)
class Mode:
    """One basis index pair with its eigenvalue and model frequencies."""

    k1: int
    k2: int
    lam: float  # u k1^2 + v k2^2

    def __post_init__(self) -> None:
        if self.k1 < 1 or self.k2 < 1:
            raise ValueError(f"mode indices must be >= 1, got ({self.k1}, {self.k2})")
        if not self.lam > 0:
            raise ValueError("eigenvalue must be positive")

    @property
    def wave_freq(self) -> float:
        return math.sqrt(self.lam)

    @property
    def plate_freq(self) -> float:
        return self.lam


@dataclass(frozen=True)
class ModeSet:
    """All modes 1 <= k1 <= K1, 1 <= k2 <= K2, row-major in (k2, k1).

    The ordering (k1 varies fastest) is part of the contract: Gram matrices,
    coefficient vectors and serialized states all index modes by position here.
    """

    geometry: RectangleGeometry
    K1: int
    K2: int
    modes: tuple[Mode, ...] = field(repr=False)

    def __post_init__(self) -> None:
        if len(self.modes) != self.K1 * self.K2:
            raise ValueError("mode list does not match truncation bounds")

    def __len__(self) -> int:
        return len(self.modes)

    def index_of(self, k1: int, k2: int) -> int:
        if not (1 <= k1 <= self.K1 and 1 <= k2 <= self.K2):
            raise KeyError(f"({k1}, {k2}) outside truncation")
        return (k2 - 1) * self.K1 + (k1 - 1)


def build_mode_set(geometry: RectangleGeometry, K1: int, K2: int) -> ModeSet:
    """Enumerate the truncated rectangle [1..K1] x [1..K2] of modes."""
    if K1 < 1 or K2 < 1:
        raise ValueError(f"truncation bounds must be >= 1, got K1={K1}, K2={K2}")
    u, v = geometry.u, geometry.v
    modes = tuple(
        Mode(k1, k2, u * k1 * k1 + v * k2 * k2)
        for k2 in range(1, K2 + 1)
        for k1 in range(1, K1 + 1)
    )
    return ModeSet(geometry, K1, K2, modes)


def check_gap_lemma(k1: int, k1p: int, k2: int) -> dict:
    """Check |sqrt(k1^2+k2^2) - sqrt(k1p^2+k2^2)| >= |k1-k1p| / (2 sqrt 2).

    The bound requires max(k1, k1p) >= k2 and two distinct positive first
    indices; anything else is a misuse, not a counterexample.
    """
    if k1 < 1 or k1p < 1 or k2 < 1:
        raise ValueError("indices must be positive integers")
    if k1 == k1p:
        raise ValueError("k1 and k1p must differ")
    if max(k1, k1p) < k2:
        raise ValueError(f"hypothesis max(k1, k1p) >= k2 violated: ({k1}, {k1p}, {k2})")
    lhs = abs(math.sqrt(k1 * k1 + k2 * k2) - math.sqrt(k1p * k1p + k2 * k2))
    bound = abs(k1 - k1p) / (2.0 * math.sqrt(2.0))
    return {"lhs": lhs, "bound": bound, "holds": lhs >= bound}


def partial_gap_analysis(frequencies, n: int, indices=None) -> dict:
    """Largest gamma for which the partial gap condition holds.

    The condition asks |w_{k'} - w_k| >= |k' - k| * gamma for every pair whose
    larger index magnitude reaches n. Positions map to indices 1..N unless an
    explicit integer index list is supplied (e.g. a centered -N..N convention).
    Pairs entirely below n are exempt, so gamma is the minimum of
    |w_{k'} - w_k| / |k' - k| over admissible pairs, +inf if none exist.
    """
    freqs = [float(w) for w in frequencies]
    if len(freqs) < 2:
        raise ValueError("need at least two frequencies")
    if indices is None:
        idx = list(range(1, len(freqs) + 1))
    else:
        idx = [int(i) for i in indices]
        if len(idx) != len(freqs):
            raise ValueError("indices and frequencies must have equal length")
    gamma = math.inf
    for a in range(len(freqs)):
        for b in range(a + 1, len(freqs)):
            if max(abs(idx[a]), abs(idx[b])) < n:
                continue
            step = abs(idx[b] - idx[a])
            if step == 0:
                raise ValueError("duplicate indices")
            gamma = min(gamma, abs(freqs[b] - freqs[a]) / step)
    return {"gamma": gamma, "satisfied": gamma > 0}
