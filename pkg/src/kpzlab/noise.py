"""Seeded space-time white noise in Fourier modes.

Increments are complex Gaussians ``dW_n(k)`` with variance ``dt`` and
conjugate symmetry, independent across steps and across modes ``k > 0``.
Draws come from counter-based Philox streams keyed by
``(seed, stream, purpose)`` with one counter block per time step, so any
step of any ensemble member can be regenerated without sequential replay.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import GridSpec, SpectralField
from .mollifier import Mollifier

__all__ = [
    "NoisePath",
    "sample_noise_path",
    "mollified_increment",
    "StationaryLinearState",
    "ou_step",
    "stationary_linear_state",
]

# purpose tags for the per-stream Philox substreams
PURPOSE_PATH = 0
PURPOSE_INIT = 1
PURPOSE_BURNIN = 2

_BLOCK = 1 << 128  # counter distance between addressable blocks


def step_generator(seed: int, stream: int, purpose: int, block: int) -> np.random.Generator:
    """Generator positioned at an addressable (seed, stream, purpose, block)."""
    key = np.random.SeedSequence([int(seed), int(stream), int(purpose)]).generate_state(2, np.uint64)
    return np.random.Generator(np.random.Philox(counter=block * _BLOCK, key=key))


def _draw_increments(grid: GridSpec, dt: float, n_steps: int, seed: int,
                     stream: int, purpose: int) -> np.ndarray:
    """(n_steps, N) complex increments in FFT order, one block per step."""
    n = grid.n_modes
    half = n // 2  # modes 1 .. N/2-1 live in [1, half)
    out = np.zeros((n_steps, n), dtype=np.complex128)
    scale = np.sqrt(dt / 2.0)
    for step in range(n_steps):
        rng = step_generator(seed, stream, purpose, step)
        z = rng.standard_normal(2 * (half - 1)) * scale
        pos = z[: half - 1] + 1j * z[half - 1 :]
        out[step, 1:half] = pos
        out[step, -1:-half:-1] = np.conj(pos)
        out[step, 0] = rng.standard_normal() * np.sqrt(dt)
    return out


@dataclass
class NoisePath:
    """Per-step Fourier increments of space-time white noise on [0, n_steps*dt]."""

    grid: GridSpec
    dt: float
    n_steps: int
    seed: int
    stream: int = 0
    increments: np.ndarray = field(default=None, repr=False)

    def increment(self, n: int) -> np.ndarray:
        if not 0 <= n < self.n_steps:
            raise IndexError(f"step {n} out of range [0, {self.n_steps})")
        return self.increments[n]

    def coarsen(self, factor: int) -> "NoisePath":
        """Aggregate consecutive increments; the same Brownian path at dt*factor."""
        if self.n_steps % factor != 0:
            raise ValueError("n_steps must be divisible by the coarsening factor")
        agg = self.increments.reshape(self.n_steps // factor, factor, -1).sum(axis=1)
        return NoisePath(self.grid, self.dt * factor, self.n_steps // factor,
                         self.seed, self.stream, agg)

    def burnin_path(self, n_steps: int) -> "NoisePath":
        """Independent pre-t=0 increments from the same (seed, stream)."""
        inc = _draw_increments(self.grid, self.dt, n_steps, self.seed,
                               self.stream, PURPOSE_BURNIN)
        return NoisePath(self.grid, self.dt, n_steps, self.seed, self.stream, inc)

    def init_generator(self) -> np.random.Generator:
        """Generator reserved for t=0 stationary initialization draws."""
        return step_generator(self.seed, self.stream, PURPOSE_INIT, 0)


def sample_noise_path(grid: GridSpec, dt: float, n_steps: int, seed: int,
                      stream: int = 0) -> NoisePath:
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    inc = _draw_increments(grid, dt, n_steps, seed, stream, PURPOSE_PATH)
    return NoisePath(grid, dt, n_steps, seed, stream, inc)


def mollified_increment(path: NoisePath, n: int, m: Mollifier) -> SpectralField:
    """The smeared increment ``phi(eps*k) * dW_n(k)``."""
    return SpectralField(path.grid, path.increment(n) * m.phi_table(path.grid))


# -- exact per-mode Ornstein-Uhlenbeck sampling ------------------------------


def _ou_decay(grid: GridSpec, dt: float) -> np.ndarray:
    k = grid.modes.astype(np.float64)
    return np.exp(-2.0 * np.pi**2 * k**2 * dt)


def _ou_gain(grid: GridSpec, dt: float, m: Mollifier) -> np.ndarray:
    """Scale on raw increments giving the exact conditional noise variance.

    Mode k needs a Gaussian of variance phi^2 (1 - e^{-4 pi^2 k^2 dt}) /
    (4 pi^2 k^2); the path increment has variance dt, so it is rescaled by
    sqrt(expm1-based factor).  The zero mode integrates the noise directly.
    """
    k = grid.modes.astype(np.float64)
    lam = 2.0 * np.pi**2 * k**2
    with np.errstate(divide="ignore", invalid="ignore"):
        factor = -np.expm1(-2.0 * lam * dt) / (2.0 * lam * dt)
    factor[0] = 1.0
    return m.phi_table(grid) * np.sqrt(factor)


@dataclass
class StationaryLinearState:
    """Per-mode state of the stationary linear solution driven by smeared noise."""

    grid: GridSpec
    m: Mollifier
    dt: float
    coeffs: np.ndarray = field(repr=False)
    _decay: np.ndarray = field(default=None, repr=False)
    _gain: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self._decay is None:
            self._decay = _ou_decay(self.grid, self.dt)
        if self._gain is None:
            self._gain = _ou_gain(self.grid, self.dt, self.m)

    def field(self) -> SpectralField:
        return SpectralField(self.grid, self.coeffs.copy())


def stationary_variance(grid: GridSpec, m: Mollifier) -> np.ndarray:
    """Stationary variance ``phi(eps k)^2 / (4 pi^2 k^2)`` per mode (0 at k=0)."""
    k = grid.modes.astype(np.float64)
    table = m.phi_table(grid) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        var = table / (4.0 * np.pi**2 * k**2)
    var[0] = 0.0
    var[grid.nyquist_index] = 0.0
    return var


def stationary_linear_state(grid: GridSpec, m: Mollifier, dt: float,
                            rng: np.random.Generator) -> StationaryLinearState:
    """Draw the nonzero modes from the stationary law; zero mode starts at 0."""
    n = grid.n_modes
    half = n // 2
    std = np.sqrt(stationary_variance(grid, m) / 2.0)
    z = rng.standard_normal(2 * (half - 1))
    pos = (z[: half - 1] + 1j * z[half - 1 :]) * std[1:half]
    coeffs = np.zeros(n, dtype=np.complex128)
    coeffs[1:half] = pos
    coeffs[-1:-half:-1] = np.conj(pos)
    return StationaryLinearState(grid, m, dt, coeffs)


def ou_step(state: StationaryLinearState, incr: SpectralField) -> StationaryLinearState:
    """Advance one step: exact exponential decay plus variance-matched noise.

    ``incr`` must be the path's raw (unmollified) increment field; the gain
    table applies both the mollifier and the exact conditional variance, so
    the same underlying Gaussians are common across all solvers in a run.
    """
    if incr.grid != state.grid:
        raise ValueError("grid mismatch")
    new = state._decay * state.coeffs + state._gain * incr.coeffs
    return StationaryLinearState(state.grid, state.m, state.dt, new,
                                 state._decay, state._gain)
