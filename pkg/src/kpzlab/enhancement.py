"""Construction of the stochastic driving-term tuple on a time grid.

The tuple is built by exact-linear-part time stepping from a common noise
path: the first-order field by exact per-mode Ornstein-Uhlenbeck updates,
the higher-order fields by exponential Euler with sources evaluated at
step start.  Nonzero modes of the stationary components are initialized
at the stationary law and the nonlinear ones equilibrated over a burn-in
window before time zero; zero-mode components restart at zero at t=0.

The doubled-kernel scheme ("fq") multiplies every nonlinear source and
the linear-transport source by the squared mollifier weights, which is
the Fourier form of convolving the right-hand side with the doubled
kernel.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .constants import RenormSet
from .dyadic import DyadicPartition, NormSpec, path_norm, partition_for
from .grid import GridSpec, SpectralField, heat_multiplier, product_coeffs
from .mollifier import Mollifier
from .noise import NoisePath, stationary_variance

__all__ = [
    "FieldPath",
    "Enhancement",
    "build_enhancement",
    "renormalized_resonant",
    "enhancement_norms",
    "save_field_path",
    "load_field_path",
]


@dataclass
class FieldPath:
    """A time-indexed sequence of spectral fields on a uniform grid."""

    grid: GridSpec
    t0: float
    dt: float
    coeffs: np.ndarray = field(repr=False)  # (n_times, n_modes) complex

    def __post_init__(self):
        if self.coeffs.ndim != 2 or self.coeffs.shape[1] != self.grid.n_modes:
            raise ValueError("coefficient stack does not match grid")

    @property
    def n_times(self) -> int:
        return self.coeffs.shape[0]

    @property
    def times(self) -> np.ndarray:
        return self.t0 + np.arange(self.n_times) * self.dt

    def field(self, i: int) -> SpectralField:
        return SpectralField(self.grid, self.coeffs[i].copy())

    def mean_series(self) -> np.ndarray:
        return self.coeffs[:, 0].real.copy()

    def values(self) -> np.ndarray:
        """Real-space samples, shape (n_times, n_modes)."""
        return np.real(np.fft.ifft(self.coeffs, axis=1) * self.grid.n_modes)

    def aligned_with(self, other: "FieldPath") -> bool:
        return (
            self.grid == other.grid
            and self.n_times == other.n_times
            and abs(self.t0 - other.t0) < 1e-12
            and abs(self.dt - other.dt) < 1e-12
        )

    def _require_aligned(self, other: "FieldPath"):
        if not self.aligned_with(other):
            raise ValueError("field paths are not aligned")

    def __add__(self, other: "FieldPath") -> "FieldPath":
        self._require_aligned(other)
        return FieldPath(self.grid, self.t0, self.dt, self.coeffs + other.coeffs)

    def __sub__(self, other: "FieldPath") -> "FieldPath":
        self._require_aligned(other)
        return FieldPath(self.grid, self.t0, self.dt, self.coeffs - other.coeffs)

    def __mul__(self, scalar: float) -> "FieldPath":
        return FieldPath(self.grid, self.t0, self.dt, self.coeffs * float(scalar))

    __rmul__ = __mul__

    def thinned(self, max_samples: int = 65) -> "FieldPath":
        """Subsample times (endpoints kept) for norm estimation."""
        m = self.n_times
        if m <= max_samples:
            return self
        stride = int(np.ceil((m - 1) / (max_samples - 1)))
        idx = list(range(0, m, stride))
        if idx[-1] != m - 1:
            idx.append(m - 1)
        sub = FieldPath(self.grid, self.t0, self.dt * stride, self.coeffs[idx])
        sub._times_override = self.times[idx]  # non-uniform tail spacing
        return sub


# -- persistence --------------------------------------------------------------

_PATH_DTYPE = "f64le-interleaved-complex"


def save_field_path(p: FieldPath, path) -> None:
    header = {
        "n_modes": p.grid.n_modes,
        "n_times": p.n_times,
        "t0": p.t0,
        "dt": p.dt,
        "layout": "fft-order",
        "dtype": _PATH_DTYPE,
        "symmetry": "real",
    }
    with open(path, "wb") as fh:
        fh.write(json.dumps(header).encode("ascii") + b"\n")
        fh.write(np.ascontiguousarray(p.coeffs, dtype="<c16").tobytes())


def load_field_path(path) -> FieldPath:
    with open(path, "rb") as fh:
        header = json.loads(fh.readline().decode("ascii"))
        if header.get("dtype") != _PATH_DTYPE:
            raise ValueError(f"unsupported path file header: {header}")
        n, m = int(header["n_modes"]), int(header["n_times"])
        raw = fh.read(16 * n * m)
        if len(raw) != 16 * n * m:
            raise ValueError("truncated path file")
    coeffs = np.frombuffer(raw, dtype="<c16").astype(np.complex128).reshape(m, n)
    return FieldPath(GridSpec(n), float(header["t0"]), float(header["dt"]), coeffs)


# -- driving-term construction -------------------------------------------------

COMPONENTS = ("I", "Y", "W", "K", "B", "D", "C")


@dataclass
class Enhancement:
    """Driving-term tuple sampled on a uniform time grid."""

    scheme: str
    grid: GridSpec
    mollifier: Mollifier
    dt: float
    n_steps: int
    consts: RenormSet
    burn_in: float
    paths: dict[str, FieldPath]

    def path(self, name: str) -> FieldPath:
        return self.paths[name]

    def save(self, directory) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        for name, p in self.paths.items():
            save_field_path(p, directory / f"X_{name}.fieldpath")
        manifest = {
            "scheme": self.scheme,
            "eps": self.mollifier.eps,
            "profile": self.mollifier.name,
            "n_modes": self.grid.n_modes,
            "dt": self.dt,
            "n_steps": self.n_steps,
            "burn_in": self.burn_in,
            "constants": {
                "c_V": self.consts.c_V,
                "c_B": self.consts.c_B,
                "c_D": self.consts.c_D,
                "ct_B": self.consts.ct_B,
                "ct_D": self.consts.ct_D,
                "v_torus": self.consts.v_torus,
            },
            "components": sorted(self.paths),
        }
        (directory / "enhancement.json").write_text(json.dumps(manifest, indent=2))


def _dx_table(grid: GridSpec) -> np.ndarray:
    k = grid.modes.astype(np.float64)
    t = 2j * np.pi * k
    t[grid.nyquist_index] = 0.0
    return t


def _joint_stationary_init(grid: GridSpec, m: Mollifier,
                           rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Exact joint stationary draw of the first-order field and its primitive.

    Per nonzero mode the pair is a linear functional of the same
    white-noise history; conditionally on the first field the primitive is
    Gaussian with mean ``a/(2 lam) * x`` and variance ``V/(2 lam)`` where
    ``V`` is the stationary variance, ``lam`` the heat rate and ``a`` the
    derivative symbol.
    """
    n = grid.n_modes
    half = n // 2
    k = grid.modes.astype(np.float64)
    lam = 2.0 * np.pi**2 * k**2
    var_i = stationary_variance(grid, m)

    z = rng.standard_normal(4 * (half - 1))
    zi = (z[0 : half - 1] + 1j * z[half - 1 : 2 * (half - 1)]) / np.sqrt(2.0)
    zk = (z[2 * (half - 1) : 3 * (half - 1)] + 1j * z[3 * (half - 1) :]) / np.sqrt(2.0)

    xi = np.zeros(n, dtype=np.complex128)
    xk = np.zeros(n, dtype=np.complex128)
    sl = slice(1, half)
    xi[sl] = zi * np.sqrt(var_i[sl])
    a = 2j * np.pi * k[sl]
    cond_mean = a / (2.0 * lam[sl]) * xi[sl]
    cond_std = np.sqrt(var_i[sl] / (2.0 * lam[sl]))
    xk[sl] = cond_mean + zk * cond_std
    xi[-1:-half:-1] = np.conj(xi[sl])
    xk[-1:-half:-1] = np.conj(xk[sl])
    return xi, xk


def build_enhancement(path: NoisePath, m: Mollifier, consts: RenormSet,
                      scheme: str = "plain", burn_in: float = 1.0,
                      part: DyadicPartition | None = None) -> Enhancement:
    """Time-step the driving-term tuple from a seeded noise path.

    The returned paths cover ``t = 0 .. n_steps*dt``; the burn-in window
    uses an independent substream of the same seed so the main increments
    remain common with every solver consuming ``path``.
    """
    if scheme not in ("plain", "fq"):
        raise ValueError(f"unknown scheme {scheme!r}")
    grid = path.grid
    m.require_compatible(grid)
    if abs(consts.eps - m.eps) > 1e-15 or consts.profile != m.name:
        raise ValueError("constants were computed for a different mollifier")

    fq = scheme == "fq"
    dt = path.dt
    n = grid.n_modes
    phi = m.phi_table(grid)
    eta2 = phi**2
    P = heat_multiplier(grid, dt)
    DX = _dx_table(grid)
    gain = _ou_gain_table(grid, dt, m)
    c_v = consts.c_V

    x_i, x_k = _joint_stationary_init(grid, m, path.init_generator())
    if fq:
        x_k = x_k * eta2
    x_y = np.zeros(n, dtype=np.complex128)
    x_w = np.zeros(n, dtype=np.complex128)

    def step(state, raw_incr):
        x_i, x_y, x_w, x_k = state
        g_i = DX * x_i
        src_y = 0.5 * product_coeffs(g_i, g_i, n)
        src_y[0] -= 0.5 * c_v
        src_w = product_coeffs(DX * x_y, g_i, n)
        src_k = g_i
        if fq:
            src_y = src_y * eta2
            src_w = src_w * eta2
            src_k = src_k * eta2
        return (
            P * x_i + gain * raw_incr,
            P * (x_y + dt * src_y),
            P * (x_w + dt * src_w),
            P * (x_k + dt * src_k),
        )

    state = (x_i, x_y, x_w, x_k)
    n_burn = int(round(burn_in / dt))
    if n_burn > 0:
        burn = path.burnin_path(n_burn)
        for i in range(n_burn):
            state = step(state, burn.increments[i])
    # zero-mode components restart at zero at t = 0
    x_i, x_y, x_w, x_k = (c.copy() for c in state)
    x_i[0] = 0.0
    x_y[0] = 0.0
    x_w[0] = 0.0
    state = (x_i, x_y, x_w, x_k)

    m_times = path.n_steps + 1
    stacks = {name: np.empty((m_times, n), dtype=np.complex128) for name in "IYWK"}
    for name, arr in zip("IYWK", state):
        stacks[name][0] = arr
    for i in range(path.n_steps):
        state = step(state, path.increments[i])
        for name, arr in zip("IYWK", state):
            stacks[name][i + 1] = arr

    paths = {name: FieldPath(grid, 0.0, dt, stacks[name]) for name in "IYWK"}

    if part is None:
        part = partition_for(grid)
    d_i = FieldPath(grid, 0.0, dt, DX * paths["I"].coeffs)
    d_y = FieldPath(grid, 0.0, dt, DX * paths["Y"].coeffs)
    d_w = FieldPath(grid, 0.0, dt, DX * paths["W"].coeffs)
    d_k = FieldPath(grid, 0.0, dt, DX * paths["K"].coeffs)

    c_b = consts.ct_B if fq else consts.c_B
    c_d = consts.ct_D if fq else consts.c_D
    c_c = consts.ct_C if fq else consts.c_C

    sq_y = np.stack([product_coeffs(row, row, n) for row in d_y.coeffs])
    sq_y[:, 0] -= c_b
    paths["B"] = FieldPath(grid, 0.0, dt, 0.5 * sq_y)

    x_d = renormalized_resonant(d_w, d_i, c_d, part)
    if c_c != 0.0:
        x_d = x_d - c_c * d_y
    paths["D"] = x_d
    paths["C"] = renormalized_resonant(d_k, d_i, c_c, part)

    return Enhancement(scheme, grid, m, dt, path.n_steps, consts, burn_in, paths)


def _ou_gain_table(grid: GridSpec, dt: float, m: Mollifier) -> np.ndarray:
    from .noise import _ou_gain

    return _ou_gain(grid, dt, m)


def renormalized_resonant(a: FieldPath, b: FieldPath, c: float,
                          part: DyadicPartition) -> FieldPath:
    """Pointwise-in-time resonant product, constant removed from the zero mode."""
    if not a.aligned_with(b):
        raise ValueError("field paths are not aligned")
    from .dyadic import resonant

    out = np.empty_like(a.coeffs)
    for i in range(a.n_times):
        out[i] = resonant(a.field(i), b.field(i), part).coeffs
    out[:, 0] -= c
    return FieldPath(a.grid, a.t0, a.dt, out)


# -- diagnostics ---------------------------------------------------------------

_NORM_ALPHA = 0.4


def enhancement_norms(e: Enhancement, part: DyadicPartition | None = None,
                      max_samples: int = 65) -> dict[str, float]:
    """The seven path norms of the driving-term tuple at ``alpha = 0.4``.

    Supremum-in-time spatial norms at each component's regularity; the
    third-order transport component also carries its quarter-Hoelder
    seminorm.  Estimated on a thinned time grid.
    """
    if part is None:
        part = partition_for(e.grid)
    a = _NORM_ALPHA
    regs = {"I": a, "Y": 2 * a, "W": a + 1, "K": a + 1,
            "B": 2 * a - 1, "D": 2 * a - 1, "C": 2 * a - 1}
    out = {}
    for name, alpha in regs.items():
        p = e.paths[name].thinned(max_samples)
        times = getattr(p, "_times_override", p.times) - p.t0
        if name == "W":
            out[name] = path_norm(times, p.coeffs,
                                  NormSpec(alpha=alpha, delta=0.25), part)
        else:
            sups = [None] * p.n_times
            from .dyadic import _besov_from_coeffs

            vals = _besov_from_coeffs(p.coeffs, alpha, np.inf, np.inf, part)
            out[name] = float(np.max(vals))
    out["total"] = float(sum(out[k] for k in regs))
    return out
