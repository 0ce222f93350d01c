"""Dyadic frequency decomposition, Besov-type norms and paraproducts.

The partition of unity follows the usual normalization: a low block
supported in ``|k| <= 4/3`` and annular blocks supported in
``3/4 * 2^j <= |k| <= 8/3 * 2^j``.  The annular profile is built as a
telescoping difference of a smooth step, which makes the partition
identity hold identically rather than just numerically; the top block is
renormalized so the identity stays exact on the represented modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import GridSpec, SpectralField, product_coeffs

__all__ = [
    "DyadicPartition",
    "NormSpec",
    "build_partition",
    "block",
    "besov_norm",
    "path_norm",
    "paraproduct_lt",
    "paraproduct_gt",
    "resonant",
    "commutator_r",
]


def _smooth_step(t: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for t <= 0, 1 for t >= 1 (same primitive as the bump)."""
    t = np.asarray(t, dtype=np.float64)
    with np.errstate(over="ignore", divide="ignore"):
        a = np.where(t > 0.0, np.exp(-1.0 / np.maximum(t, 1e-300)), 0.0)
        b = np.where(t < 1.0, np.exp(-1.0 / np.maximum(1.0 - t, 1e-300)), 0.0)
    return a / (a + b)


_CHI_INNER = 3.0 / 4.0
_CHI_OUTER = 4.0 / 3.0


def _chi(x: np.ndarray) -> np.ndarray:
    """Even low-pass cutoff: 1 on |x| <= 3/4, 0 on |x| >= 4/3."""
    return _smooth_step((_CHI_OUTER - np.abs(x)) / (_CHI_OUTER - _CHI_INNER))


@dataclass
class DyadicPartition:
    """Block multiplier tables over a grid, rows ``j = -1 .. j_max``."""

    grid: GridSpec
    j_max: int
    rho: np.ndarray = field(repr=False)      # (j_max + 2, N)
    partial: np.ndarray = field(repr=False)  # cumulative sums S_j, same shape

    @property
    def j_range(self) -> range:
        return range(-1, self.j_max + 1)

    def row(self, j: int) -> np.ndarray:
        if not -1 <= j <= self.j_max:
            raise IndexError(f"block index {j} out of range [-1, {self.j_max}]")
        return self.rho[j + 1]

    def partial_row(self, j: int) -> np.ndarray:
        """Multiplier of the partial sum over blocks ``-1 .. j`` (zero for j < -1)."""
        if j < -1:
            return np.zeros(self.grid.n_modes)
        return self.partial[min(j, self.j_max) + 1]


def build_partition(grid: GridSpec) -> DyadicPartition:
    n = grid.n_modes
    if n < 8:
        raise ValueError("grid too small to host the first annular block")
    j_max = math.ceil(math.log2(3 * n / 16))
    k = np.abs(grid.modes).astype(np.float64)

    rows = np.empty((j_max + 2, n))
    rows[0] = _chi(k)
    for j in range(0, j_max + 1):
        rows[j + 1] = _chi(k / 2 ** (j + 1)) - _chi(k / 2**j)
    # absorb the tail of the telescoping sum into the top block so the
    # partition identity is exact on every represented mode
    rows[j_max + 1] += 1.0 - _chi(k / 2 ** (j_max + 1))
    rows[:, grid.nyquist_index] = 0.0

    partial = np.cumsum(rows, axis=0)
    return DyadicPartition(grid, j_max, rows, partial)


_PARTITIONS: dict[int, DyadicPartition] = {}


def partition_for(grid: GridSpec) -> DyadicPartition:
    part = _PARTITIONS.get(grid.n_modes)
    if part is None:
        part = _PARTITIONS[grid.n_modes] = build_partition(grid)
    return part


def block(f: SpectralField, j: int, part: DyadicPartition) -> SpectralField:
    return SpectralField(f.grid, f.coeffs * part.row(j))


# -- norms --------------------------------------------------------------------


@dataclass(frozen=True)
class NormSpec:
    """Regularity/integrability exponents, plus weighted-path parameters."""

    alpha: float
    p: float = math.inf
    q: float = math.inf
    eta: float = 0.0
    delta: float | None = None
    T: float | None = None

    def __post_init__(self):
        if not (1 <= self.p) or not (1 <= self.q):
            raise ValueError("integrability exponents must lie in [1, inf]")
        if self.delta is not None and not (0.0 < self.delta <= 1.0):
            raise ValueError("Hoelder exponent must lie in (0, 1]")
        if self.eta < 0:
            raise ValueError("blow-up exponent must be nonnegative")


def _block_values(coeffs: np.ndarray, part: DyadicPartition) -> np.ndarray:
    """Real-space samples of every block, shape (..., j_max+2, N)."""
    stacked = coeffs[..., None, :] * part.rho
    return np.real(np.fft.ifft(stacked, axis=-1) * part.grid.n_modes)


def _lp(values: np.ndarray, p: float) -> np.ndarray:
    """L^p norm over the last (spatial) axis, uniform-grid quadrature."""
    if p == math.inf:
        return np.max(np.abs(values), axis=-1)
    return np.mean(np.abs(values) ** p, axis=-1) ** (1.0 / p)


def _lq(weighted: np.ndarray, q: float) -> np.ndarray:
    if q == math.inf:
        return np.max(weighted, axis=-1)
    return np.sum(weighted**q, axis=-1) ** (1.0 / q)


def _besov_from_coeffs(coeffs: np.ndarray, alpha: float, p: float, q: float,
                       part: DyadicPartition) -> np.ndarray:
    js = np.arange(-1, part.j_max + 1, dtype=np.float64)
    weights = 2.0 ** (js * alpha)
    lp = _lp(_block_values(coeffs, part), p)
    return _lq(lp * weights, q)


def besov_norm(f: SpectralField, spec: NormSpec, part: DyadicPartition) -> float:
    if f.grid != part.grid:
        raise ValueError("grid mismatch")
    return float(_besov_from_coeffs(f.coeffs, spec.alpha, spec.p, spec.q, part))


def path_norm(times, coeff_stack, spec: NormSpec, part: DyadicPartition) -> float:
    """Discrete estimator of the weighted space-time path norm.

    ``times`` are the sample times of the path relative to its start,
    ``coeff_stack`` the (M, N) coefficient array.  The estimate is the sum
    of the three components of the weighted norm: the blow-up-weighted sup
    of the spatial norm, the unweighted sup at reduced regularity, and the
    weighted two-time Hoelder quotient at regularity ``alpha - 2*delta``.
    """
    times = np.asarray(times, dtype=np.float64)
    coeff_stack = np.asarray(coeff_stack)
    if coeff_stack.ndim != 2 or len(times) != coeff_stack.shape[0]:
        raise ValueError("path samples and times disagree")
    if len(times) < 2:
        raise ValueError("need at least two time samples")
    if spec.delta is None:
        raise ValueError("path norms need a Hoelder exponent delta")

    alpha, eta, delta = spec.alpha, spec.eta, spec.delta
    interior = times > 0

    n_alpha = _besov_from_coeffs(coeff_stack, alpha, spec.p, spec.q, part)
    if eta > 0:
        sup_weighted = float(np.max(times[interior] ** eta * n_alpha[interior])) \
            if interior.any() else 0.0
    else:
        sup_weighted = float(np.max(n_alpha))
    sup_reduced = float(np.max(_besov_from_coeffs(
        coeff_stack, alpha - 2.0 * eta, spec.p, spec.q, part)))

    # two-time Hoelder component, chunked over the earlier index
    m = len(times)
    hoelder = 0.0
    for i in range(m - 1):
        s = times[i]
        if s <= 0 and eta > 0:
            continue
        diffs = coeff_stack[i + 1 :] - coeff_stack[i]
        norms = _besov_from_coeffs(diffs, alpha - 2.0 * delta, spec.p, spec.q, part)
        dts = times[i + 1 :] - s
        w = (s**eta if eta > 0 else 1.0) * norms / dts**delta
        hoelder = max(hoelder, float(np.max(w)))
    return sup_weighted + sup_reduced + hoelder


# -- Bony decomposition -------------------------------------------------------


def paraproduct_lt(u: SpectralField, v: SpectralField, part: DyadicPartition) -> SpectralField:
    """Low-high paraproduct: sum over blocks of ``S_{j-2} u * Delta_j v``."""
    if u.grid != v.grid:
        raise ValueError("grid mismatch")
    n = u.grid.n_modes
    out = np.zeros(n, dtype=np.complex128)
    for j in range(1, part.j_max + 1):
        low = u.coeffs * part.partial_row(j - 2)
        high = v.coeffs * part.row(j)
        out += product_coeffs(low, high, n)
    return SpectralField(u.grid, out)


def paraproduct_gt(u: SpectralField, v: SpectralField, part: DyadicPartition) -> SpectralField:
    """High-low paraproduct, the transpose of the low-high one."""
    return paraproduct_lt(v, u, part)


def resonant(u: SpectralField, v: SpectralField, part: DyadicPartition) -> SpectralField:
    """Resonant product: blocks at distance at most one."""
    if u.grid != v.grid:
        raise ValueError("grid mismatch")
    n = u.grid.n_modes
    out = np.zeros(n, dtype=np.complex128)
    for j in part.j_range:
        near = part.row(j).copy()
        if j - 1 >= -1:
            near = near + part.row(j - 1)
        if j + 1 <= part.j_max:
            near = near + part.row(j + 1)
        out += product_coeffs(u.coeffs * part.row(j), v.coeffs * near, n)
    return SpectralField(u.grid, out)


def commutator_r(u: SpectralField, v: SpectralField, w: SpectralField,
                 part: DyadicPartition) -> SpectralField:
    """Trilinear correction ``(u <para v) resonant w - u * (v resonant w)``."""
    from .grid import pointwise_product

    first = resonant(paraproduct_lt(u, v, part), w, part)
    second = pointwise_product(u, resonant(v, w, part))
    return first - second
