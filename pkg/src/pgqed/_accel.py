"""Hot numeric kernels: numba-compiled with a pure-numpy fallback.

The complete elliptic integral K(m) for complex parameter is evaluated
millions of times inside contour quadratures and pole searches, so its
arithmetic-geometric-mean iteration lives here.  The Brillouin-zone
reduction used by the finite-lattice self-energy sums is here for the
same reason.

Set ``PGQED_DISABLE_NUMBA=1`` in the environment to force the numpy
implementations (also the automatic fallback when numba is absent).
``benchmarks/bench_kernels.py`` compares the two paths.
"""

from __future__ import annotations

import cmath
import os

import numpy as np

_EPS = 1e-15
_MAX_AGM_ITER = 64

USE_NUMBA = os.environ.get("PGQED_DISABLE_NUMBA", "0") not in ("1", "true", "yes")

if USE_NUMBA:
    try:
        import numba
    except ImportError:  # pragma: no cover - numba is a declared dependency
        numba = None
        USE_NUMBA = False


def _agm_k_scalar_py(m: complex) -> complex:
    """K(m) by the optimal complex AGM, principal branch.

    Valid for m off the cut [1, inf).  Near m=1 the caller is expected
    to switch to the logarithmic series (`_log_series_k`).
    """
    a = 1.0 + 0.0j
    b = cmath.sqrt(1.0 - m)
    for _ in range(_MAX_AGM_ITER):
        if abs(a - b) <= _EPS * abs(a):
            break
        a1 = 0.5 * (a + b)
        b1 = cmath.sqrt(a * b)
        # optimal AGM: keep the root closer to the arithmetic mean
        if abs(a1 - b1) > abs(a1 + b1):
            b1 = -b1
        elif abs(a1 - b1) == abs(a1 + b1) and (b1 / a1).imag < 0:
            b1 = -b1
        a, b = a1, b1
    return cmath.pi / (2.0 * a)


def _agm_k_array_py(m: np.ndarray) -> np.ndarray:
    a = np.ones_like(m, dtype=np.complex128)
    b = np.sqrt(1.0 - m.astype(np.complex128))
    for _ in range(_MAX_AGM_ITER):
        active = np.abs(a - b) > _EPS * np.abs(a)
        if not active.any():
            break
        a1 = 0.5 * (a + b)
        b1 = np.sqrt(a * b)
        flip = np.abs(a1 - b1) > np.abs(a1 + b1)
        b1 = np.where(flip, -b1, b1)
        a = np.where(active, a1, a)
        b = np.where(active, b1, b)
    return np.pi / (2.0 * a)


def _bz_sigma_sum_py(f2: np.ndarray, znh2: complex) -> complex:
    """sum_k 1/(znh2 - J^2 |f(k)|^2) over a flattened |f|^2 J^2 grid."""
    return complex(np.sum(1.0 / (znh2 - f2)))


def _bz_phased_sum_py(f2: np.ndarray, phase: np.ndarray, znh2: complex) -> complex:
    return complex(np.sum(phase / (znh2 - f2)))


if USE_NUMBA:
    _agm_k_scalar = numba.njit(cache=True)(_agm_k_scalar_py)

    @numba.njit(cache=True)
    def _agm_k_array(m):  # pragma: no cover - exercised via dispatch
        out = np.empty(m.shape, dtype=np.complex128)
        flat_m = m.ravel()
        flat_o = out.ravel()
        for i in range(flat_m.size):
            flat_o[i] = _agm_k_scalar(flat_m[i])
        return out

    @numba.njit(cache=True)
    def _bz_sigma_sum(f2, znh2):  # pragma: no cover
        acc = 0.0 + 0.0j
        for i in range(f2.size):
            acc += 1.0 / (znh2 - f2[i])
        return acc

    @numba.njit(cache=True)
    def _bz_phased_sum(f2, phase, znh2):  # pragma: no cover
        acc = 0.0 + 0.0j
        for i in range(f2.size):
            acc += phase[i] / (znh2 - f2[i])
        return acc

else:
    _agm_k_scalar = _agm_k_scalar_py
    _agm_k_array = _agm_k_array_py
    _bz_sigma_sum = _bz_sigma_sum_py
    _bz_phased_sum = _bz_phased_sum_py


def agm_elliptic_k(m):
    """Principal-branch K(m) via complex AGM, scalar or array."""
    if np.isscalar(m) or np.ndim(m) == 0:
        return _agm_k_scalar(complex(m))
    m = np.ascontiguousarray(m, dtype=np.complex128)
    return _agm_k_array(m)


def bz_sigma_sum(f2: np.ndarray, znh2: complex) -> complex:
    return _bz_sigma_sum(np.ascontiguousarray(f2, dtype=np.complex128), complex(znh2))


def bz_phased_sum(f2: np.ndarray, phase: np.ndarray, znh2: complex) -> complex:
    return _bz_phased_sum(
        np.ascontiguousarray(f2, dtype=np.complex128),
        np.ascontiguousarray(phase, dtype=np.complex128),
        complex(znh2),
    )
