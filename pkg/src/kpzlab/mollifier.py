"""Mollifier profiles and the derived Fourier multipliers.

A mollifier is an even, compactly supported smooth bump ``phi`` with
``phi(0) = 1``.  Smoothing a field at scale ``eps`` multiplies mode ``k``
by ``phi(eps*k)``; the doubled kernel (convolution of the mollifier with
itself) multiplies by ``phi(eps*k)**2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .grid import GridSpec, SpectralField, apply_multiplier

__all__ = ["Mollifier", "bump2_profile", "mollify", "eta2_convolve", "PROFILES"]


def bump2_profile(x: np.ndarray) -> np.ndarray:
    """The canonical bump: ``exp(1 - 1/(1-(x/2)^2))`` on (-2, 2), else 0."""
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    inside = np.abs(x) < 2.0
    y = x[inside] / 2.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - y * y))
    return out


PROFILES: dict[str, tuple[Callable[[np.ndarray], np.ndarray], float]] = {
    "bump2": (bump2_profile, 2.0),
}


@dataclass(frozen=True)
class Mollifier:
    """An even smooth bump at scale ``eps`` with compact support radius ``R``."""

    name: str
    eps: float
    support_radius: float
    profile: Callable[[np.ndarray], np.ndarray] = field(compare=False)

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        self._validate_profile()

    def _validate_profile(self):
        phi0 = float(self.profile(np.array([0.0]))[0])
        if abs(phi0 - 1.0) > 1e-12:
            raise ValueError(f"profile must satisfy phi(0)=1, got phi(0)={phi0!r}")
        xs = np.linspace(0.0, self.support_radius * 1.5, 301)
        vals_p = self.profile(xs)
        vals_m = self.profile(-xs)
        if not np.allclose(vals_p, vals_m, rtol=0.0, atol=1e-12):
            raise ValueError("profile must be even")
        beyond = xs >= self.support_radius
        if np.any(vals_p[beyond] != 0.0):
            raise ValueError("profile must vanish outside the support radius")

    @classmethod
    def from_name(cls, name: str, eps: float) -> "Mollifier":
        try:
            profile, radius = PROFILES[name]
        except KeyError:
            raise ValueError(f"unknown mollifier profile {name!r}") from None
        return cls(name=name, eps=float(eps), support_radius=radius, profile=profile)

    @classmethod
    def bump2(cls, eps: float) -> "Mollifier":
        return cls.from_name("bump2", eps)

    # -- multiplier tables -------------------------------------------------

    def phi(self, x) -> np.ndarray:
        return self.profile(np.asarray(x, dtype=np.float64))

    def phi_table(self, grid: GridSpec) -> np.ndarray:
        """``phi(eps*k)`` over the grid modes (FFT order)."""
        return _phi_table(self.name, self.eps, grid.n_modes, self.profile)

    def eta2_table(self, grid: GridSpec) -> np.ndarray:
        """``phi(eps*k)^2``, the multiplier of the doubled kernel."""
        return self.phi_table(grid) ** 2

    def band_limit(self) -> float:
        """Modes with ``|k| >= R/eps`` are annihilated."""
        return self.support_radius / self.eps

    def compatible_with(self, grid: GridSpec) -> bool:
        """Mollified noise is exactly band-limited iff ``R/eps <= N/2``."""
        return self.band_limit() <= grid.n_modes / 2

    def require_compatible(self, grid: GridSpec) -> None:
        if not self.compatible_with(grid):
            raise ValueError(
                f"grid too small for mollifier: need R/eps = "
                f"{self.band_limit():g} <= N/2 = {grid.n_modes // 2}"
            )


_TABLE_CACHE: dict[tuple[str, float, int], np.ndarray] = {}


def _phi_table(name, eps, n_modes, profile) -> np.ndarray:
    key = (name, eps, n_modes)
    table = _TABLE_CACHE.get(key)
    if table is None:
        modes = np.fft.fftfreq(n_modes, d=1.0 / n_modes)
        table = profile(eps * modes)
        table.setflags(write=False)
        _TABLE_CACHE[key] = table
    return table


def mollify(f: SpectralField, m: Mollifier) -> SpectralField:
    return apply_multiplier(f, m.phi_table(f.grid))


def eta2_convolve(f: SpectralField, m: Mollifier) -> SpectralField:
    return apply_multiplier(f, m.eta2_table(f.grid))
