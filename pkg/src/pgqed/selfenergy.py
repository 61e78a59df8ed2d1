"""Single- and two-emitter self-energies of the honeycomb bath.

Closed forms exist for the isotropic lattice,

    Sigma_e^A(z) = g^2 (2z + i kb) / [pi (w+3J)^(1/2) (w-J)^(3/2)] * K^sheet[m],
    w = sqrt(z_nh^2),  z_nh^2 = (z + i kappa_+)^2 + kappa_-^2,

with the B form swapping kappa_b -> kappa_a.  Finite-lattice momentum
sums and Brillouin-zone quadrature provide the oracles and the only
route for the anisotropic lattice.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from ._accel import bz_phased_sum, bz_sigma_sum
from .lattice import k_grid, structure_factor
from .specfun import (Sheet, SheetBoundaryError, continued_k, k_parameter_from_z2)



class SelfEnergyError(ValueError):
    pass


class PoleHitError(SelfEnergyError):
    """A momentum-grid eigenvalue sits on the requested energy."""


class UnsupportedFamilyError(SelfEnergyError):
    pass


@dataclass(frozen=True)
class MarkovianResult:
    delta_e: float
    gamma_e: float
    diverged: bool = False


class SelfEnergyEvaluator:
    """Immutable evaluator bundle for one coupling/loss configuration.

    eta is the +i*eta realization of E + i0^+ used by the Markovian and
    scan entry points; all энергии in units of big_j.
    """

    def __init__(self, g: float, kappa_a: float = 0.0, kappa_b: float = 0.0,
                 beta: float = 1.0, big_j: float = 1.0, eta: float = 1e-9):
        self.g = g
        self.kappa_a = kappa_a
        self.kappa_b = kappa_b
        self.beta = beta
        self.big_j = big_j
        self.eta = eta * big_j
        self.kappa_plus = (kappa_a + kappa_b) / 4.0
        self.kappa_minus = (kappa_a - kappa_b) / 4.0
        self._grid_cache: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

    # ------------------------------------------------------------ helpers

    def znh2(self, z: complex) -> complex:
        # product form of (z + i kappa_+)^2 + kappa_-^2; no cancellation
        # when z approaches the dissipative zeros on the imaginary axis
        return (z + 0.5j * self.kappa_a) * (z + 0.5j * self.kappa_b)

    def _loss_prefactor(self, z: complex, sublattice: str) -> complex:
        other = self.kappa_b if sublattice == "A" else self.kappa_a
        return z + 0.5j * other

    def _grids(self, n: int):
        if n not in self._grid_cache:
            ks = k_grid(n)
            k1, k2 = np.meshgrid(ks, ks, indexing="ij")
            f = structure_factor(k1, k2, self.beta)
            f2 = (self.big_j ** 2 * np.abs(f) ** 2).astype(complex).ravel()
            self._grid_cache[n] = (k1.ravel(), k2.ravel(), f2)
        return self._grid_cache[n]

    # ----------------------------------------------------------- closed form

    def closed_form(self, z: complex, sublattice: str = "A",
                    sheet: Sheet = Sheet.I, side: str | None = None) -> complex:
        """Analytic Sigma on a chosen Riemann sheet (isotropic only).

        On a sign boundary of the continuation rules the evaluation
        raises unless ``side`` ('+'/'-') picks the one-sided value.
        """
        if self.beta != 1.0:
            raise UnsupportedFamilyError("no closed form for beta != 1; use finite_sum/quadrature")
        z = complex(z)
        z2 = self.znh2(z)
        param = k_parameter_from_z2(z2, self.big_j)
        w = param.z
        pref = self.g ** 2 * (2.0 * z + 1j * (self.kappa_b if sublattice == "A" else self.kappa_a))
        denom = cmath.pi * cmath.sqrt(w + 3 * self.big_j) * (w - self.big_j) ** 1.5
        prefer = None if side is None else (1 if side == "+" else -1)
        return pref / denom * continued_k(sheet, param, prefer=prefer)

    def closed_form_sided(self, z: complex, sublattice: str = "A",
                          sheet: Sheet = Sheet.I) -> complex:
        """closed_form with sign boundaries resolved as physical limits.

        A nudge upward (then sideways) lets the sign conditions resolve
        naturally; the continuation formulas are continuous across the
        lines where the conditions vanish, so the nudged value is the
        boundary value.
        """
        try:
            return self.closed_form(z, sublattice, sheet)
        except SheetBoundaryError:
            pass
        for nudge in (1e-9j, 1e-12, 1e-12 + 1e-9j):
            try:
                return self.closed_form(z + nudge * self.big_j, sublattice, sheet)
            except SheetBoundaryError:
                continue
        return self.closed_form(z, sublattice, sheet, side="+")

    def closed_form_array(self, z, sublattice: str = "A") -> np.ndarray:
        """Vectorized physical-sheet (sheet I) closed form.

        Sign boundaries resolve toward positive; intended for scans at
        E + i eta where the conditions are generically off-boundary.
        """
        if self.beta != 1.0:
            raise UnsupportedFamilyError("no closed form for beta != 1")
        from ._accel import agm_elliptic_k
        z = np.asarray(z, dtype=complex)
        big_j = self.big_j
        z2 = (z + 0.5j * self.kappa_a) * (z + 0.5j * self.kappa_b)
        w = np.sqrt(z2)
        k = 4.0 * z2 ** 0.25 * big_j ** 1.5 / (np.sqrt(w + 3 * big_j) * (w - big_j) ** 1.5)
        m = k * k
        km = agm_elliptic_k(m)
        kc = agm_elliptic_k(1.0 - m)
        near = np.abs(1.0 - m) < 1e-6
        if near.any():
            from .specfun import _log_series_k
            km[near] = [_log_series_k(v) for v in np.atleast_1d(m[near])]
        sk = np.where(k.imag >= 0, 1.0, -1.0)
        sz = np.where(z2.imag >= 0, 1.0, -1.0)
        ki = np.where(sk * sz < 0, km, km + 2j * sk * kc)
        other = self.kappa_b if sublattice == "A" else self.kappa_a
        pref = self.g ** 2 * (2.0 * z + 1j * other) / (
            np.pi * np.sqrt(w + 3 * big_j) * (w - big_j) ** 1.5)
        return pref * ki

    # ---------------------------------------------------------- finite sums

    def finite_sum(self, z: complex, n: int, sublattice: str = "A",
                   dn: tuple[int, int] = (0, 0)) -> complex:
        """Discrete momentum sum (g^2/N^2) sum_k e^{i k dn} pref/(znh^2 - w_k^2).

        Works for any beta; dn = 0 is the on-site self-energy, nonzero dn
        the same-sublattice cross term of two separated emitters.
        """
        if n < 2:
            raise SelfEnergyError(f"grid size {n} < 2")
        k1, k2, f2 = self._grids(n)
        z = complex(z)
        z2 = self.znh2(z)
        if np.min(np.abs(z2 - f2)) < 1e-12 * self.big_j ** 2:
            raise PoleHitError(f"z={z} hits a momentum-grid eigenvalue at N={n}")
        pref = self.g ** 2 / n ** 2 * self._loss_prefactor(z, sublattice)
        if dn == (0, 0):
            return pref * bz_sigma_sum(f2, z2)
        phase = np.exp(1j * (k1 * dn[0] + k2 * dn[1]))
        return pref * bz_phased_sum(f2, phase, z2)

    def cross_sum(self, z: complex, n: int, pair: tuple[str, str] = ("A", "B"),
                  dn: tuple[int, int] = (0, 0)) -> complex:
        """Inter-sublattice finite sum with the e^{+-i phi(k)} band phase.

        pair (alpha, beta) gives Sigma_12^{alpha beta}(z, dn); the AA/BB
        pairs delegate to finite_sum.
        """
        if pair in (("A", "A"), ("B", "B")):
            return self.finite_sum(z, n, pair[0], dn)
        k1, k2, f2 = self._grids(n)
        z = complex(z)
        z2 = self.znh2(z)
        if np.min(np.abs(z2 - f2)) < 1e-12 * self.big_j ** 2:
            raise PoleHitError(f"z={z} hits a momentum-grid eigenvalue at N={n}")
        f = structure_factor(k1, k2, self.beta)
        band = self.big_j * (f if pair == ("A", "B") else np.conj(f))
        phase = band * np.exp(1j * (k1 * dn[0] + k2 * dn[1]))
        return self.g ** 2 / n ** 2 * bz_phased_sum(f2, phase, z2)

    def quadrature(self, z: complex, sublattice: str = "A", order: int = 80,
                   panels: int = 6) -> complex:
        """Gauss-Legendre BZ integral; the slow oracle, any anisotropy.

        The Dirac-point neighbourhoods are covered by their own panel
        refinement (the integrand peaks there for small eta).
        """
        nodes, weights = np.polynomial.legendre.leggauss(order)
        edges = np.linspace(-np.pi, np.pi, panels + 1)
        xs, ws = [], []
        for a, b in zip(edges[:-1], edges[1:]):
            xs.append(0.5 * (b - a) * nodes + 0.5 * (a + b))
            ws.append(0.5 * (b - a) * weights)
        xs = np.concatenate(xs)
        ws = np.concatenate(ws)
        k1, k2 = np.meshgrid(xs, xs, indexing="ij")
        w12 = np.outer(ws, ws)
        f2 = self.big_j ** 2 * np.abs(structure_factor(k1, k2, self.beta)) ** 2
        z2 = self.znh2(complex(z))
        integrand = self._loss_prefactor(complex(z), sublattice) / (z2 - f2)
        return self.g ** 2 / (2 * np.pi) ** 2 * np.sum(w12 * integrand)

    # ------------------------------------------------------------- analysis

    def markovian(self, delta_e: float, sublattice: str = "A") -> MarkovianResult:
        """Lamb shift and decay rate from Sigma(Delta_e + i eta) on sheet I.

        A rate that keeps growing as eta shrinks (the lossless-sublattice
        band-center case) is reported as divergent rather than trusted.
        """
        z = delta_e + 1j * self.eta
        sigma = self.closed_form_sided(z, sublattice) if self.beta == 1.0 \
            else self.quadrature(z, sublattice)
        gamma = -2.0 * sigma.imag
        diverged = False
        if self.beta == 1.0 and gamma > 1e-6 * self.g ** 2 / self.big_j:
            sharper = self.closed_form_sided(delta_e + 0.1j * self.eta, sublattice)
            diverged = -2.0 * sharper.imag > 1.05 * gamma
        return MarkovianResult(delta_e=sigma.real, gamma_e=gamma, diverged=diverged)

    def band_center_expansion(self, energy: float) -> complex:
        """Sigma_e^A(E + i0^+) expanded around the band middle, |E| << J.

        Sigma ~ (g^2/sqrt(3) J^2) [ -i|E|/2 + (E/pi) ln(|E| kappa_a / 18 J^2) ].
        """
        if energy == 0.0:
            return 0.0 + 0.0j
        scale = self.g ** 2 / (np.sqrt(3.0) * self.big_j ** 2)
        log_term = np.log(abs(energy) * self.kappa_a / (18.0 * self.big_j ** 2))
        return scale * (-0.5j * abs(energy) + energy / np.pi * log_term)

    def dsigma_dz(self, z: complex, sheet: Sheet = Sheet.I, sublattice: str = "A",
                  step: float | None = None) -> complex:
        """dSigma/dz by Richardson-extrapolated central differences."""
        h = (step or 1e-6) * self.big_j

        def diff(hh):
            return (self.closed_form_sided(z + hh, sublattice, sheet)
                    - self.closed_form_sided(z - hh, sublattice, sheet)) / (2.0 * hh)

        d1 = diff(h)
        d2 = diff(h / 2.0)
        return (4.0 * d2 - d1) / 3.0
