"""Exact finite-sum evaluation of the renormalization constants.

All constants are deterministic pure functions of (profile, eps).  The
mollified weights have compact support, so every series truncates exactly
at ``|k| < R/eps`` and the sums are evaluated over that box with
compensated summation (see ``kernels``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from . import kernels
from .mollifier import Mollifier

__all__ = [
    "RenormSet",
    "c_V",
    "c_C",
    "c_B",
    "c_D",
    "v_torus",
    "dY_drift",
    "compute_renorm_set",
    "combo_checks",
    "heat_conv_closed_form",
    "support_kmax",
]

ONE_TWELFTH = 1.0 / 12.0


def support_kmax(m: Mollifier) -> int:
    """Largest mode with a nonzero weight: ``phi(eps*k) = 0`` for ``|k| >= R/eps``."""
    return int(math.ceil(m.band_limit())) - 1


def _phi2_by_abs_mode(m: Mollifier, kmax: int) -> np.ndarray:
    """``phi(eps*k)^2`` for ``k = 0 .. 2*kmax`` (convolution index included)."""
    ks = np.arange(0, 2 * kmax + 1, dtype=np.float64)
    return m.phi(m.eps * ks) ** 2


_PROFILE_L2_CACHE: dict[str, float] = {}


def _profile_l2(m: Mollifier) -> float:
    """``integral of phi^2`` by adaptive quadrature, cached per profile."""
    val = _PROFILE_L2_CACHE.get(m.name)
    if val is None:
        r = m.support_radius
        val, err = quad(lambda x: float(m.phi(x)) ** 2, -r, r,
                        epsabs=1e-14, epsrel=1e-13, limit=200)
        if err > 1e-10:
            raise RuntimeError(f"quadrature of phi^2 did not converge (err={err:g})")
        _PROFILE_L2_CACHE[m.name] = val
    return val


def c_V(m: Mollifier) -> float:
    """Noise variance rate ``eps^{-1} * integral phi^2``."""
    return _profile_l2(m) / m.eps


def v_torus(m: Mollifier) -> float:
    """Pointwise noise variance rate on the torus, ``sum_k phi(eps k)^2``."""
    kmax = support_kmax(m)
    return kernels.weighted_mode_sum(_phi2_by_abs_mode(m, kmax), kmax)


def dY_drift(m: Mollifier) -> float:
    """Per-unit-time drift of the renormalized zero mode, ``-1 + O(eps)``.

    Equals ``sum_{k != 0} phi(eps k)^2 - c_V``, i.e. ``v_torus - 1 - c_V``.
    """
    return v_torus(m) - 1.0 - c_V(m)


def _q_mode_integral(k: int) -> complex:
    """Quadrature of ``q |q|^2`` over the temporal frequency, for one mode.

    ``q(sigma, k) = 2 pi i k / (2 pi^2 k^2 - 2 pi i sigma)``; the real part
    is odd in sigma and integrates to zero, the imaginary part is evaluated
    adaptively.
    """
    if k == 0:
        return 0.0

    def im_part(sigma):
        d = (2.0 * math.pi**2 * k * k) ** 2 + (2.0 * math.pi * sigma) ** 2
        q2 = (2.0 * math.pi * k) ** 2 / d
        return (2.0 * math.pi * k) * (2.0 * math.pi**2 * k * k) / d * q2

    def re_part(sigma):
        d = (2.0 * math.pi**2 * k * k) ** 2 + (2.0 * math.pi * sigma) ** 2
        q2 = (2.0 * math.pi * k) ** 2 / d
        return -(2.0 * math.pi * k) * (2.0 * math.pi * sigma) / d * q2

    re, _ = quad(re_part, -np.inf, np.inf, epsabs=1e-12, limit=400)
    im, _ = quad(im_part, -np.inf, np.inf, epsabs=1e-12, limit=400)
    return complex(re, im)


def c_C(m: Mollifier, tilde: bool = False, verify: bool = False,
        verify_tol: float = 1e-10) -> float:
    """The linear-term counterterm; identically zero for even profiles.

    The constructor of :class:`Mollifier` rejects non-even profiles, which
    is what makes the choice of zero valid.  With ``verify=True`` the
    defining mode sum is evaluated by quadrature and asserted against zero.
    """
    if verify:
        kmax = support_kmax(m)
        phi2 = _phi2_by_abs_mode(m, kmax)
        total = 0.0 + 0.0j
        for k in range(-kmax, kmax + 1):
            w = phi2[abs(k)] ** 2 if tilde else phi2[abs(k)]
            total += w * _q_mode_integral(k)
        if abs(total) > verify_tol:
            raise AssertionError(
                f"odd-integrand verification of the zero counterterm failed: |{total}|"
            )
    return 0.0


def c_B(m: Mollifier, tilde: bool = False) -> float:
    """Counterterm for the squared gradient of the second-order field."""
    kmax = support_kmax(m)
    cb, _ = kernels.pair_sums(_phi2_by_abs_mode(m, kmax), kmax, tilde)
    return cb


def c_D(m: Mollifier, tilde: bool = False) -> float:
    """Counterterm for the resonant product of third- and first-order fields."""
    kmax = support_kmax(m)
    _, cd = kernels.pair_sums(_phi2_by_abs_mode(m, kmax), kmax, tilde)
    return cd


@dataclass(frozen=True)
class RenormSet:
    """All renormalization constants for one (profile, eps, scheme family)."""

    eps: float
    profile: str
    c_V: float
    c_C: float
    c_B: float
    c_D: float
    ct_C: float
    ct_B: float
    ct_D: float
    v_torus: float
    dY_drift: float
    backend: str = field(default=kernels.BACKEND, compare=False)

    @property
    def combo(self) -> float:
        return self.c_B + 2.0 * self.c_D

    @property
    def combo_tilde(self) -> float:
        return self.ct_B + 2.0 * self.ct_D

    def constant_for(self, scheme: str, kind: str = "paper") -> float:
        """The quadratic-term constant a solver should subtract.

        ``kind="paper"``: the constants of the convergence statement
        (``c_V - 1/12`` plain, ``c_V`` for the doubled-kernel scheme).
        ``kind="ito"``: the torus variance rate, which makes the discrete
        scheme the transform of the multiplicative heat equation.
        """
        if kind == "ito":
            return self.v_torus
        if kind != "paper":
            raise ValueError(f"unknown constant kind {kind!r}")
        if scheme == "plain":
            return self.c_V - ONE_TWELFTH
        if scheme == "fq":
            return self.c_V
        raise ValueError(f"unknown scheme {scheme!r}")


def compute_renorm_set(m: Mollifier, verify_c_C: bool = False) -> RenormSet:
    kmax = support_kmax(m)
    phi2 = _phi2_by_abs_mode(m, kmax)
    cb, cd = kernels.pair_sums(phi2, kmax, False)
    ctb, ctd = kernels.pair_sums(phi2, kmax, True)
    return RenormSet(
        eps=m.eps,
        profile=m.name,
        c_V=c_V(m),
        c_C=c_C(m, verify=verify_c_C),
        c_B=cb,
        c_D=cd,
        ct_C=c_C(m, tilde=True, verify=verify_c_C),
        ct_B=ctb,
        ct_D=ctd,
        v_torus=kernels.weighted_mode_sum(phi2, kmax),
        dY_drift=kernels.weighted_mode_sum(phi2, kmax) - 1.0 - c_V(m),
    )


def combo_checks(rset: RenormSet, m: Mollifier | None = None,
                 tol: float = 1e-10) -> dict:
    """Assert the cancellation identities; any violation is a hard failure.

    Checks: the doubled-kernel combination vanishes; the plain combination
    collapses to the single-mode series; the antisymmetric double sum
    vanishes.  Returns measured residuals for reporting.
    """
    if m is None:
        m = Mollifier.from_name(rset.profile, rset.eps)
    kmax = support_kmax(m)
    phi2 = _phi2_by_abs_mode(m, kmax)

    i1 = kernels.i1_sum(phi2, kmax)
    i2 = kernels.i2_sum(phi2, kmax)
    combo_vs_single_sum = rset.combo - 0.5 * i2
    limit_error = rset.combo + ONE_TWELFTH

    report = {
        "eps": rset.eps,
        "combo": rset.combo,
        "combo_tilde": rset.combo_tilde,
        "i1": i1,
        "combo_vs_single_sum": combo_vs_single_sum,
        "limit_error": limit_error,
    }
    if abs(rset.combo_tilde) > tol:
        raise AssertionError(f"tilde combination does not vanish: {rset.combo_tilde:g}")
    if abs(combo_vs_single_sum) > tol:
        raise AssertionError(
            f"combination disagrees with the single-mode series by {combo_vs_single_sum:g}"
        )
    if abs(i1) > 1e-12:
        raise AssertionError(f"antisymmetric audit sum is {i1:g}")
    return report


def heat_conv_closed_form(k1: float, k2: float, t: float, s: float) -> float:
    """Closed form of the time convolution of two derivative heat kernels.

    ``integral over u of h_{t-u}(k1) h_{s-u}(k2)`` with
    ``h_t(k) = 1_{t>0} 2 pi i k e^{-2 pi^2 k^2 t}`` equals
    ``-2 k1 k2/(k1^2+k2^2)`` times a one-sided exponential in ``t - s``.
    """
    if k1 == 0 or k2 == 0:
        raise ValueError("wavenumbers must be nonzero")
    pref = -2.0 * k1 * k2 / (k1 * k1 + k2 * k2)
    if t > s:
        return pref * math.exp(-2.0 * math.pi**2 * k1 * k1 * (t - s))
    if s > t:
        return pref * math.exp(-2.0 * math.pi**2 * k2 * k2 * (s - t))
    return pref
