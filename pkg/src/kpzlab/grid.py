"""Periodic grid, spectral fields and Fourier-multiplier operators.

Fields live on the unit torus and are stored as complex Fourier
coefficients in FFT order, normalized so that ``coeffs[k]`` equals the
integral of ``exp(-2*pi*i*k*x) * u(x)`` over the torus for band-limited
``u``.  Real fields are kept real-symmetric (``coeffs[-k] == conj(coeffs[k])``)
and the Nyquist coefficient, which has no conjugate partner, is pinned
to zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GridSpec",
    "SpectralField",
    "make_grid",
    "apply_multiplier",
    "heat_semigroup",
    "heat_multiplier",
    "derivative",
    "pointwise_product",
    "project_zero_mode",
    "remove_zero_mode",
    "save_field",
    "load_field",
]


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid with ``n_modes`` real sample points on the unit torus.

    The represented modes are ``-N/2+1 .. N/2-1``; the Nyquist slot is
    carried along in FFT order but always zeroed.
    """

    n_modes: int

    def __post_init__(self):
        n = self.n_modes
        if not isinstance(n, (int, np.integer)):
            raise TypeError(f"n_modes must be an integer, got {type(n).__name__}")
        if n < 8 or not _is_power_of_two(n):
            raise ValueError(f"n_modes must be a power of two >= 8, got {n}")

    @property
    def modes(self) -> np.ndarray:
        """Integer mode numbers in FFT order."""
        return np.fft.fftfreq(self.n_modes, d=1.0 / self.n_modes).astype(np.int64)

    @property
    def nyquist_index(self) -> int:
        return self.n_modes // 2

    @property
    def max_mode(self) -> int:
        return self.n_modes // 2 - 1

    @property
    def sample_points(self) -> np.ndarray:
        return np.arange(self.n_modes) / self.n_modes


def make_grid(n_modes: int) -> GridSpec:
    return GridSpec(int(n_modes))


def enforce_real_symmetry(coeffs: np.ndarray) -> np.ndarray:
    """Project onto the real-symmetric subspace and zero the Nyquist slot."""
    n = coeffs.shape[-1]
    out = 0.5 * (coeffs + np.conj(coeffs[..., (-np.arange(n)) % n]))
    out[..., n // 2] = 0.0
    out[..., 0] = out[..., 0].real
    return out


@dataclass
class SpectralField:
    """A real periodic function stored as Fourier coefficients."""

    grid: GridSpec
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.coeffs.shape != (self.grid.n_modes,):
            raise ValueError(
                f"coefficient array has shape {self.coeffs.shape}, "
                f"expected ({self.grid.n_modes},)"
            )
        if self.coeffs.dtype != np.complex128:
            self.coeffs = self.coeffs.astype(np.complex128)

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, grid: GridSpec) -> "SpectralField":
        return cls(grid, np.zeros(grid.n_modes, dtype=np.complex128))

    @classmethod
    def from_values(cls, grid: GridSpec, values: np.ndarray) -> "SpectralField":
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (grid.n_modes,):
            raise ValueError("sample array does not match grid")
        coeffs = np.fft.fft(values) / grid.n_modes
        coeffs[grid.nyquist_index] = 0.0
        return cls(grid, coeffs)

    @classmethod
    def from_coeffs(cls, grid: GridSpec, coeffs: np.ndarray) -> "SpectralField":
        coeffs = np.asarray(coeffs, dtype=np.complex128).copy()
        if coeffs.shape != (grid.n_modes,):
            raise ValueError("coefficient array does not match grid")
        return cls(grid, enforce_real_symmetry(coeffs))

    @classmethod
    def single_mode(cls, grid: GridSpec, k: int, amplitude: complex = 1.0) -> "SpectralField":
        """The real field ``a*e^{2pi i k x} + conj``, i.e. a pure mode pair."""
        if abs(k) > grid.max_mode:
            raise ValueError(f"mode {k} not representable on grid of size {grid.n_modes}")
        c = np.zeros(grid.n_modes, dtype=np.complex128)
        c[k % grid.n_modes] += amplitude
        c[(-k) % grid.n_modes] += np.conj(amplitude)
        if k == 0:
            c[0] = 2.0 * np.real(amplitude)
        return cls(grid, c)

    # -- queries ---------------------------------------------------------

    def values(self) -> np.ndarray:
        """Real-space samples on the uniform grid."""
        return np.real(np.fft.ifft(self.coeffs) * self.grid.n_modes)

    def mean(self) -> float:
        """The spatial mean, i.e. the zero-mode coefficient."""
        return float(self.coeffs[0].real)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values())))

    def copy(self) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs.copy())

    # -- arithmetic (same-grid, real-symmetric closed) --------------------

    def _check(self, other: "SpectralField"):
        if other.grid != self.grid:
            raise ValueError("grid mismatch")

    def __add__(self, other: "SpectralField") -> "SpectralField":
        self._check(other)
        return SpectralField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        self._check(other)
        return SpectralField(self.grid, self.coeffs - other.coeffs)

    def __mul__(self, scalar: float) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralField":
        return SpectralField(self.grid, -self.coeffs)

    def shift_mean(self, delta: float) -> "SpectralField":
        """Add a constant to the field (zero-mode shift)."""
        c = self.coeffs.copy()
        c[0] += delta
        return SpectralField(self.grid, c)


# -- multiplier operators ---------------------------------------------------


def apply_multiplier(f: SpectralField, m) -> SpectralField:
    """Apply a Fourier multiplier given as a table over modes or a callable.

    The caller guarantees ``m(-k) == conj(m(k))`` whenever a real output is
    expected; Hermitian tables keep the real symmetry automatically.
    """
    if callable(m):
        table = np.asarray(m(f.grid.modes))
    else:
        table = np.asarray(m)
        if table.shape != (f.grid.n_modes,):
            raise ValueError("multiplier table does not match grid")
    return SpectralField(f.grid, f.coeffs * table)


def heat_multiplier(grid: GridSpec, t: float) -> np.ndarray:
    """Table of ``exp(-2 pi^2 k^2 t)`` over the grid modes."""
    if t < 0:
        raise ValueError(f"heat semigroup needs t >= 0, got {t}")
    k = grid.modes
    return np.exp(-2.0 * np.pi**2 * k.astype(np.float64) ** 2 * t)


def heat_semigroup(f: SpectralField, t: float) -> SpectralField:
    return apply_multiplier(f, heat_multiplier(f.grid, t))


def derivative(f: SpectralField) -> SpectralField:
    k = f.grid.modes.astype(np.float64)
    out = f.coeffs * (2j * np.pi * k)
    out[f.grid.nyquist_index] = 0.0
    return SpectralField(f.grid, out)


def project_zero_mode(f: SpectralField) -> SpectralField:
    """Orthogonal projection onto constant functions."""
    c = np.zeros_like(f.coeffs)
    c[0] = f.coeffs[0].real
    return SpectralField(f.grid, c)


def remove_zero_mode(f: SpectralField) -> SpectralField:
    c = f.coeffs.copy()
    c[0] = 0.0
    return SpectralField(f.grid, c)


# -- dealiased products ------------------------------------------------------
#
# Products are computed by zero-padding to 2N modes, so the quadratic
# convolution is exact on the represented modes.  The padded transforms work
# on half-spectra (rfft layout) and the hot path is exposed on raw
# coefficient arrays for the time steppers.


def _half(coeffs: np.ndarray, n: int) -> np.ndarray:
    return coeffs[: n // 2 + 1]


def _full_from_half(half: np.ndarray, n: int) -> np.ndarray:
    full = np.empty(n, dtype=np.complex128)
    full[: n // 2 + 1] = half
    full[n // 2 + 1 :] = np.conj(half[1 : n // 2][::-1])
    full[n // 2] = 0.0
    return full


def padded_values(coeffs: np.ndarray, n: int) -> np.ndarray:
    """Real-space samples on the doubled (dealiasing) grid."""
    m = 2 * n
    half = np.zeros(m // 2 + 1, dtype=np.complex128)
    half[: n // 2 + 1] = _half(coeffs, n)
    half[n // 2] = 0.0
    return np.fft.irfft(half * m, n=m)


def product_coeffs(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """Alias-free product of two coefficient arrays (raw-array hot path)."""
    m = 2 * n
    w = padded_values(a, n) * padded_values(b, n)
    half = np.fft.rfft(w)[: n // 2 + 1] / m
    half[0] = half[0].real
    return _full_from_half(half, n)


def pointwise_product(f: SpectralField, g: SpectralField) -> SpectralField:
    """Dealiased pointwise product of two fields on the same grid."""
    if f.grid != g.grid:
        raise ValueError("grid mismatch")
    n = f.grid.n_modes
    return SpectralField(f.grid, product_coeffs(f.coeffs, g.coeffs, n))


# -- field persistence -------------------------------------------------------

_FIELD_DTYPE = "f64le-interleaved-complex"


def save_field(f: SpectralField, path) -> None:
    """Write a field: one JSON header line, then 2N little-endian doubles."""
    header = {
        "n_modes": f.grid.n_modes,
        "layout": "fft-order",
        "dtype": _FIELD_DTYPE,
        "symmetry": "real",
    }
    raw = np.ascontiguousarray(f.coeffs, dtype="<c16").tobytes()
    with open(path, "wb") as fh:
        fh.write(json.dumps(header).encode("ascii") + b"\n")
        fh.write(raw)


def load_field(path) -> SpectralField:
    with open(path, "rb") as fh:
        header = json.loads(fh.readline().decode("ascii"))
        if header.get("dtype") != _FIELD_DTYPE or header.get("layout") != "fft-order":
            raise ValueError(f"unsupported field file header: {header}")
        n = int(header["n_modes"])
        raw = fh.read(16 * n)
        if len(raw) != 16 * n:
            raise ValueError("truncated field file")
    coeffs = np.frombuffer(raw, dtype="<c16").astype(np.complex128)
    return SpectralField(GridSpec(n), coeffs)
