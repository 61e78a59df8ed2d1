"""Complex-argument complete elliptic integrals and Riemann-sheet machinery.

K(m) is evaluated on the principal branch by the optimal complex AGM
(hot kernel in :mod:`pgqed._accel`), guarded by an adaptive-quadrature
oracle of the defining integral.  The five analytic continuations
K^I..K^V are the specific linear combinations of K(m) and K(1-m) that
keep the emitter self-energy continuous when the Fourier contour is
deformed around its branch cuts; the sheet is selected from the signs
of Re k, Im k and Im z^2.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.integrate import quad

from ._accel import agm_elliptic_k

_CUT_TOL = 1e-14
_LOG_SERIES_RADIUS = 1e-6


class SpecfunError(ValueError):
    pass


class BranchCutError(SpecfunError):
    """Parameter sits on the [1, inf) cut and no side was requested."""


class SingularPointError(SpecfunError):
    """Evaluation at a branch point of the self-energy parameter map."""


class SheetBoundaryError(SpecfunError):
    """Sign condition is indeterminate; carries both one-sided values."""

    def __init__(self, message, plus, minus):
        super().__init__(message)
        self.plus = plus
        self.minus = minus


class Sheet(Enum):
    I = 1
    II = 2
    III = 3
    IV = 4
    V = 5


@dataclass(frozen=True)
class EllipticParam:
    """Argument bundle for the continued elliptic integral.

    ``z`` is the (non-Hermitian) energy argument, ``k`` the S-matrix-like
    modulus from the lattice Green-function reduction and ``m = k^2``.
    ``z2`` keeps the exact z^2 used for the sign diagnostics.
    """

    m: complex
    k: complex
    z: complex
    z2: complex


def _log_series_k(m: complex) -> complex:
    # K(m) for m -> 1: log-accurate expansion in m1 = 1 - m
    m1 = 1.0 - m
    big_l = 0.5 * (cmath.log(16.0) - cmath.log(m1))
    return (
        big_l
        + 0.25 * m1 * (big_l - 1.0)
        + (9.0 / 64.0) * m1 * m1 * (big_l - 7.0 / 6.0)
    )


def elliptic_k(m, side: str | None = None):
    """Complete elliptic integral of the first kind, principal branch.

    K(m) = int_0^{pi/2} dtheta [1 - m sin^2 theta]^{-1/2}.

    m on the cut [1, inf) raises ``BranchCutError`` unless ``side`` is
    '+' or '-' (evaluation at m +- i0).
    """
    if np.isscalar(m) or np.ndim(m) == 0:
        m = complex(m)
        if m.imag == 0.0 and m.real >= 1.0:
            if side is None:
                raise BranchCutError(f"m={m} lies on the [1, inf) branch cut")
            m += 1j * _CUT_TOL * (1.0 if side == "+" else -1.0)
        if abs(1.0 - m) < _LOG_SERIES_RADIUS:
            return _log_series_k(m)
        return agm_elliptic_k(m)
    m = np.asarray(m, dtype=complex)
    out = agm_elliptic_k(m)
    near_one = np.abs(1.0 - m) < _LOG_SERIES_RADIUS
    if near_one.any():
        out[near_one] = [_log_series_k(v) for v in np.atleast_1d(m[near_one])]
    return out


def elliptic_k_quadrature(m: complex, *, tol: float = 1e-13) -> complex:
    """Adaptive quadrature of the defining integral; the slow oracle."""

    def integrand(theta):
        return 1.0 / np.sqrt(1.0 - m * np.sin(theta) ** 2)

    val, _ = quad(integrand, 0.0, np.pi / 2, epsabs=tol, epsrel=tol,
                  complex_func=True, limit=400)
    return val


def k_parameter_from_z2(z2: complex, big_j: float = 1.0) -> EllipticParam:
    """Parameter map from the squared energy argument (all roots principal)."""
    w = cmath.sqrt(z2)
    if abs(w - big_j) < 1e-13 * big_j or abs(w - 3 * big_j) < 1e-13 * big_j:
        raise SingularPointError(f"z^2={z2} at a branch point of the parameter map")
    k = 4.0 * z2 ** 0.25 * big_j ** 1.5 / (cmath.sqrt(w + 3 * big_j) * (w - big_j) ** 1.5)
    return EllipticParam(m=k * k, k=k, z=w, z2=z2)


def k_parameter(z: complex, big_j: float = 1.0) -> EllipticParam:
    """k(z) = 4 (z^2)^{1/4} J^{3/2} / [(sqrt(z^2)+3J)^{1/2} (sqrt(z^2)-J)^{3/2}]."""
    return k_parameter_from_z2(complex(z) * complex(z), big_j)


def _sheet_value(sheet: Sheet, km: complex, kc: complex, sign: int) -> complex:
    """Continuation combination a K(m) + i b K(1-m) per sheet and branch.

    sign carries the branch condition: for sheet I the combined sign
    state (0 mixed, +-1 aligned), for II/III the sign of Re k, for IV/V
    the sign of Im k.  The pairs keep the continued self-energy exactly
    continuous when a descent path crosses the elliptic-integral cuts.
    """
    if sheet is Sheet.I:
        if sign == 0:
            return km
        return km + 2j * sign * kc
    if sheet is Sheet.II:
        return (1.0 if sign > 0 else -3.0) * km + 2j * kc
    if sheet is Sheet.III:
        return (1.0 if sign > 0 else -3.0) * km - 2j * kc
    if sheet is Sheet.IV:
        return 3.0 * km + (2j if sign > 0 else -4j) * kc
    if sheet is Sheet.V:
        return 3.0 * km + (-2j if sign < 0 else 4j) * kc
    raise SpecfunError(f"unknown sheet {sheet}")


def continued_k(sheet: Sheet, param: EllipticParam, *, boundary_tol: float = 1e-13,
                prefer: int | None = None):
    """Analytically continued elliptic integral K^sheet at param.m.

    The branch inside a sheet is picked from the signs of Im k and
    Im z^2 (sheet I) or Re k / Im k (sheets II-V).  An indeterminate
    sign raises ``SheetBoundaryError`` carrying both one-sided values,
    unless ``prefer`` (+1 or -1) resolves it.
    """
    km = elliptic_k(param.m)
    kc = elliptic_k(1.0 - param.m)
    scale = max(abs(param.k), abs(param.z2), 1.0)

    def resolve(value, name):
        if abs(value) >= boundary_tol * scale:
            return 1 if value > 0 else -1
        if prefer is not None:
            return prefer
        raise SheetBoundaryError(
            f"sheet-{sheet.name} sign of {name} on a boundary",
            plus=_forced(sheet, param, km, kc, 1),
            minus=_forced(sheet, param, km, kc, -1))

    if sheet is Sheet.I:
        sk = resolve(param.k.imag, "Im k")
        sz = resolve(param.z2.imag, "Im z^2")
        return _sheet_value(sheet, km, kc, 0 if sk * sz < 0 else sk)
    cond = param.k.real if sheet in (Sheet.II, Sheet.III) else param.k.imag
    return _sheet_value(sheet, km, kc, resolve(cond, "branch condition"))


def _forced(sheet, param, km, kc, forced_sign):
    """One-sided value with every indeterminate sign forced to forced_sign."""
    def sgn(value):
        return (1 if value > 0 else -1) if abs(value) > 1e-13 else forced_sign

    if sheet is Sheet.I:
        sk, sz = sgn(param.k.imag), sgn(param.z2.imag)
        return _sheet_value(sheet, km, kc, 0 if sk * sz < 0 else sk)
    cond = param.k.real if sheet in (Sheet.II, Sheet.III) else param.k.imag
    return _sheet_value(sheet, km, kc, sgn(cond))


@dataclass(frozen=True)
class SheetRegion:
    sheet: Sheet
    boundary: bool
    diagnostics: dict


def _kappa_pm(kappa_a: float, kappa_b: float):
    return (kappa_a + kappa_b) / 4.0, (kappa_a - kappa_b) / 4.0


def branch_point_values(kappa_a: float, kappa_b: float, big_j: float = 1.0):
    """The four lateral branch points z1..z4 (roots of the parameter map).

    Valid for any loss pair; for vanishing kappa_minus the points sit at
    +-3J, +-J shifted down by kappa_plus, for strong single-sublattice
    loss they migrate onto the imaginary axis.
    """
    kp, km = _kappa_pm(kappa_a, kappa_b)
    outer = cmath.sqrt(9 * big_j ** 2 - km ** 2)
    inner = cmath.sqrt(big_j ** 2 - km ** 2)
    return [-outer - 1j * kp, -inner - 1j * kp, inner - 1j * kp, outer - 1j * kp]


def classify_sheet_region(z: complex, kappa_a: float, kappa_b: float,
                          big_j: float = 1.0, *, boundary_tol: float = 1e-12):
    """Riemann sheet valid as analytic continuation at a lower-half-plane z.

    The lower half plane splits into vertical strips bounded by the cuts
    hanging from the branch points; between cuts the continuation of the
    physical self-energy is sheet I (outside the band), II / IV / V / III
    inside.  Above the branch points everything is sheet I.
    """
    z = complex(z)
    kp, km = _kappa_pm(kappa_a, kappa_b)
    bps = branch_point_values(kappa_a, kappa_b, big_j)
    # anchor abscissae of the five cuts and their upper terminations
    xs = [bps[0].real, bps[1].real, 0.0, bps[2].real, bps[3].real]
    lateral_top = bps[3].imag
    center_top = -min(kappa_a, kappa_b) / 2.0

    kval = k_parameter_from_z2((z + 1j * kp) ** 2 + km ** 2, big_j)
    diagnostics = {
        "re_k": np.sign(kval.k.real),
        "im_k": np.sign(kval.k.imag),
        "im_z2": np.sign(kval.z2.imag),
        "re_z2": np.sign(kval.z2.real),
    }

    boundary = False
    if z.imag >= lateral_top:
        sheet = Sheet.I
        if z.imag < center_top and abs(z.real) < boundary_tol * big_j:
            boundary = True  # on the central cut segment above the lateral level
    else:
        edges = xs
        if any(abs(z.real - x) < boundary_tol * big_j for x in edges):
            boundary = True
        order = [Sheet.I, Sheet.II, Sheet.IV, Sheet.V, Sheet.III, Sheet.I]
        idx = int(np.searchsorted(edges, z.real))
        sheet = order[idx]
    if abs(z.imag - lateral_top) < boundary_tol * big_j:
        boundary = True
    return SheetRegion(sheet=sheet, boundary=boundary, diagnostics=diagnostics)
