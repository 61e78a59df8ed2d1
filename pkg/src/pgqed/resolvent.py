"""Emitter amplitudes from the complex-energy-plane structure.

The Fourier integral for C_e(t) is deformed into the lower half plane:
pole residues plus five branch-cut detours along vertical rays through
the branch points of the closed-form self-energy.  Below the line of
branch points the self-energy is continued analytically; each strip
between adjacent rays carries its own continuation (the five Riemann
sheets).  Continuations are path-tracked: they enter a strip through
the inter-branch-point level segment with a fixed integer combination
a K(m) + i b K(1-m) and the pair (a, b) shifts by the K monodromy
(b -> b +- 2a across m in [1, inf), a -> a +- 2b across m in (-inf, 0])
whenever the descending path crosses a cut image.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.integrate import quad

from .lattice import Regime, dissipation_regime
from .selfenergy import SelfEnergyEvaluator
from .specfun import (Sheet, branch_point_values, elliptic_k,
                      k_parameter_from_z2)

_CUT_EPS = 1e-9          # lateral offset of the ray side lines
_EXCLUSION_RADIUS = 1e-6  # disk radius around branch points, units of J


class ResolventError(ValueError):
    pass


class UnsupportedRegimeError(ResolventError):
    """Contour reconstruction is limited to weak/homogeneous dissipation."""


class PoleKind(str, Enum):
    BOUND_STATE = "bound_state"
    UNSTABLE = "unstable"
    DARK = "dark"
    QLS = "qls"


@dataclass(frozen=True)
class PoleRecord:
    z: complex
    sheet: Sheet
    kind: PoleKind
    residue: complex
    uncertain: bool = False


@dataclass
class BcdChannel:
    index: int                 # 1..5, left to right
    anchor: float              # Re z of the ray
    y_top: float               # upper end of the nonzero jump
    sheet_pair: tuple[Sheet, Sheet]   # (right, left) continuation families


@dataclass
class ContourDecomposition:
    poles: list[PoleRecord]
    channels: list[BcdChannel]
    bcd_amplitudes: np.ndarray   # (5, nt)
    pole_amplitudes: np.ndarray  # (npoles, nt)
    times: np.ndarray

    def total(self) -> np.ndarray:
        out = self.bcd_amplitudes.sum(axis=0)
        if len(self.poles):
            out = out + self.pole_amplitudes.sum(axis=0)
        return out


# entry combinations a K(m) + i b K(1-m) of the four inner continuations,
# fixed by continuity across the level segment (verified numerically)
_ENTRY = {Sheet.II: (1, 2), Sheet.IV: (3, 2), Sheet.V: (3, -2), Sheet.III: (1, -2)}


def branch_points(kappa_a: float, kappa_b: float = 0.0, big_j: float = 1.0):
    """Four lateral branch points and the dissipation regime label."""
    pts = branch_point_values(kappa_a, kappa_b, big_j)
    regime = None
    if kappa_b == 0.0 and kappa_a > 0.0:
        regime = dissipation_regime(kappa_a, 0.0, big_j)
    return pts, regime


class ContinuedSigma:
    """Self-energy on all five continuation families, isotropic lattice.

    Family I is the piecewise closed form itself (physical above the
    branch-point level, in the outer strips, and on the sides of the
    upper central cut segment).  Families II/IV/V/III live below the
    level in their strips and are tracked column by column; each
    column's zone table (y intervals with constant (a, b)) is cached.
    """

    def __init__(self, evaluator: SelfEnergyEvaluator, sublattice: str = "A"):
        if evaluator.beta != 1.0:
            raise UnsupportedRegimeError("contour machinery requires the isotropic lattice")
        self.ev = evaluator
        self.sublattice = sublattice
        self.big_j = evaluator.big_j
        kp, km = evaluator.kappa_plus, evaluator.kappa_minus
        self.level = kp
        self.bps = branch_point_values(evaluator.kappa_a, evaluator.kappa_b, self.big_j)
        self.x_inner = self.bps[2].real
        self.x_outer = self.bps[3].real
        self._y_far = 50.0 * self.big_j + 2.0 * kp
        self._columns: dict[tuple[Sheet, float], tuple[float, list]] = {}

    # -------------------------------------------------------------- pieces

    def _parts(self, z: complex):
        z2 = self.ev.znh2(z)
        p = k_parameter_from_z2(z2, self.big_j)
        other = self.ev.kappa_b if self.sublattice == "A" else self.ev.kappa_a
        pref = self.ev.g ** 2 * (2.0 * z + 1j * other) / (
            cmath.pi * cmath.sqrt(p.z + 3 * self.big_j) * (p.z - self.big_j) ** 1.5)
        return p, pref

    def _kernels(self, z: complex):
        """(pref*K(m), pref*K(1-m)) so branch combos are linear in (a, b)."""
        p, pref = self._parts(z)
        return pref * elliptic_k(p.m), pref * elliptic_k(1.0 - p.m)

    def _combo(self, z: complex, a: int, b: int) -> complex:
        km, kc = self._kernels(z)
        return a * km + 1j * b * kc

    def physical(self, z: complex) -> complex:
        """Sheet-I value (the physical boundary function)."""
        return self.ev.closed_form_sided(z, self.sublattice, Sheet.I)

    def strip_of(self, x: float) -> Sheet:
        if x < -self.x_outer or x > self.x_outer:
            return Sheet.I
        if x < -self.x_inner:
            return Sheet.II
        if x < 0.0:
            return Sheet.IV
        if x < self.x_inner:
            return Sheet.V
        return Sheet.III

    # ------------------------------------------------------------- tracking

    def _strip_bounds(self, family: Sheet, x_hint: float = 0.0):
        xi, xo = self.x_inner, self.x_outer
        if family is Sheet.V:
            return 0.0, xi
        if family is Sheet.III:
            return xi, xo
        if family is Sheet.IV:
            return -xi, 0.0
        if family is Sheet.II:
            return -xo, -xi
        # outer sheet-I strips, picked by the side of interest
        return (xo, xo + 4 * self.big_j) if x_hint >= 0 else (-xo - 4 * self.big_j, -xo)

    def _entry_pair(self, family: Sheet, x: float):
        if family is Sheet.I:
            # outer strips continue with the plain-K piece across the level
            return (1, 0)
        return _ENTRY[family]

    def _cut_crossing(self, z_from: complex, z_to: complex) -> float:
        """Fraction along [z_from, z_to] where m crosses the real axis."""
        def im_m(s):
            z = z_from + s * (z_to - z_from)
            return k_parameter_from_z2(self.ev.znh2(z), self.big_j).m.imag

        lo, hi = 0.0, 1.0
        flo = im_m(lo)
        if flo == 0.0:
            return 0.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            fm = im_m(mid)
            if fm == 0.0:
                return mid
            if flo * fm < 0:
                hi = mid
            else:
                lo, flo = mid, fm
        return 0.5 * (lo + hi)

    def _track_segment(self, z_from: complex, z_to: complex, a: int, b: int,
                       *, max_iter: int = 40000):
        """Branch pair carried along a straight segment, with events.

        A candidate branch is accepted when it is unambiguously closer
        to the linear prediction than the runner-up; the absolute
        criterion alone would stall against the (integrable, log-type)
        kernel divergences the segment may graze.
        """
        length = abs(z_to - z_from)
        if length == 0.0:
            return a, b, []
        direction = (z_to - z_from) / length
        km, kc = self._kernels(z_from)
        val = a * km + 1j * b * kc
        events = []
        s = 0.0
        step = min(0.5e-3 * self.big_j, 0.25 * length)
        floor = 1e-7 * self.big_j
        slope = 0.0
        for _ in range(max_iter):
            if s >= length - 1e-15:
                return a, b, events
            h = min(step, length - s)
            snew = s + h
            z = z_from + snew * direction
            predicted = val + slope * h
            candidates = ((a, b), (a, b + 2 * a), (a, b - 2 * a),
                          (a + 2 * b, b), (a - 2 * b, b))
            km, kc = self._kernels(z)
            vals = [ca * km + 1j * cb * kc for ca, cb in candidates]
            errs = [abs(v - predicted) for v in vals]
            order = np.argsort(errs)
            pick = int(order[0])
            second = errs[int(order[1])]
            scale = max(abs(val), abs(vals[pick]), 1e-12)
            unambiguous = errs[pick] < 0.25 * second or errs[pick] < 0.05 * scale
            if not unambiguous and step > floor:
                step *= 0.25
                continue
            if pick != 0:
                a, b = candidates[pick]
                frac = self._cut_crossing(z_from + s * direction, z)
                events.append((s + frac * h, a, b))
            if errs[pick] < 0.05 * scale:
                step = min(step * 1.6, 0.05 * self.big_j)
            slope = (vals[pick] - val) / h
            val = vals[pick]
            s = snew
        raise ResolventError(f"branch tracking exceeded {max_iter} steps "
                             f"on [{z_from}, {z_to}]")

    def _track_down(self, x: float, y_from: float, y_to: float, a: int, b: int):
        """Branch pair after descending the column x; events carry depths."""
        a, b, ev = self._track_segment(complex(x, -y_from), complex(x, -y_to), a, b)
        events = [(y_from + s, na, nb) for s, na, nb in ev]
        return a, b, events

    def _track_up(self, x: float, y_from: float, y_to: float, a: int, b: int):
        a, b, _ = self._track_segment(complex(x, -y_from), complex(x, -y_to), a, b)
        return a, b

    def _track_across(self, y: float, x_from: float, x_to: float, a: int, b: int):
        a, b, _ = self._track_segment(complex(x_from, -y), complex(x_to, -y), a, b)
        return a, b

    def _vertical_zones(self, x: float, a0: int, b0: int, y_deep: float, state=None):
        """Zone list plus continuation state, extending any cached state."""
        if state is None:
            y0 = self.level + 1e-9 * self.big_j
            state = {"zones": [], "y": y0, "a": a0, "b": b0, "start": y0}
        if y_deep <= state["y"]:
            return state
        a, b, events = self._track_down(x, state["y"], y_deep, state["a"], state["b"])
        start, ca, cb = state["start"], state["a"], state["b"]
        for (ye, na, nb) in events:
            state["zones"].append((start, ye, ca, cb))
            start, ca, cb = ye, na, nb
        state.update(y=y_deep, a=a, b=b, start=start)
        return state

    def _state_pairs(self, state):
        return state["zones"] + [(state["start"], np.inf, state["a"], state["b"])]

    def _mid_column(self, family: Sheet, x_hint: float, y_deep: float | None = None):
        """Cached zone table down the middle of the family's strip."""
        lo, hi = self._strip_bounds(family, x_hint)
        x_mid = 0.5 * (lo + hi)
        key = (family, round(x_mid, 12), "mid")
        y_deep = self._y_far if y_deep is None else min(y_deep, self._y_far)
        a0, b0 = self._entry_pair(family, x_mid)
        state = self._vertical_zones(x_mid, a0, b0, y_deep, self._columns.get(key))
        self._columns[key] = state
        return x_mid, self._state_pairs(state)

    def _pair_on_mid(self, zones, y: float):
        for y0, y1, a, b in zones:
            if y <= y1:
                return a, b
        return zones[-1][2], zones[-1][3]

    def _ray_column(self, family: Sheet, x: float):
        """Zone table at an arbitrary abscissa via horizontal transfer.

        Knots ladder down the strip; at each depth the pair is carried
        from the mid column to x.  Zone boundaries are refined between
        knots that disagree.
        """
        key = (family, round(x, 12), "ray")
        cached = self._columns.get(key)
        if cached is not None:
            return cached
        x_mid, mid_zones = self._mid_column(family, x)
        lvl = self.level
        knots = lvl + np.concatenate([
            np.logspace(-6, 0, 25), np.linspace(1.1, self._y_far - lvl, 30)]) * self.big_j

        def pair_at(y):
            a, b = self._pair_on_mid(mid_zones, y)
            return self._track_across(y, x_mid, x, a, b)

        pairs = [pair_at(y) for y in knots]
        zones = []
        start = lvl + 1e-12 * self.big_j
        for i in range(1, len(knots)):
            if pairs[i] == pairs[i - 1]:
                continue
            lo_y, hi_y = knots[i - 1], knots[i]
            for _ in range(24):
                mid_y = 0.5 * (lo_y + hi_y)
                if pair_at(mid_y) == pairs[i - 1]:
                    lo_y = mid_y
                else:
                    hi_y = mid_y
            zones.append((start, 0.5 * (lo_y + hi_y)) + pairs[i - 1])
            start = 0.5 * (lo_y + hi_y)
        zones.append((start, np.inf) + pairs[-1])
        self._columns[key] = zones
        return zones

    def _column(self, family: Sheet, x: float, y_deep: float | None = None):
        """Zone table at abscissa x (mid-strip entry or horizontal transfer)."""
        lo, hi = self._strip_bounds(family, x)
        margin = 0.05 * self.big_j
        if lo + margin < x < hi - margin and family is not Sheet.I:
            key = (family, round(x, 12))
            y_deep = self._y_far if y_deep is None else min(y_deep + 0.1, self._y_far)
            state = self._vertical_zones(x, *self._entry_pair(family, x), y_deep,
                                         self._columns.get(key))
            self._columns[key] = state
            return self._state_pairs(state)
        return self._ray_column(family, x)

    def value(self, z: complex, family: Sheet) -> complex:
        """Continuation of the self-energy on the given family at z."""
        if family is Sheet.I and (-z.imag <= self.level
                                  or abs(z.real) > self.x_outer + 0.05 * self.big_j):
            return self.physical(z)
        x, y = z.real, -z.imag
        if y <= self.level:
            return self.physical(z)
        zones = self._column(family, x, y)
        for y0, y1, a, b in zones:
            if y <= y1:
                return self._combo(z, a, b)
        return self._combo(z, zones[-1][2], zones[-1][3])

    def local_pair(self, z: complex, family: Sheet):
        """Locally valid (a, b) via horizontal transfer; None -> physical.

        Cached on a coarse grid: the pair field is piecewise constant.
        The transfer runs at a depth clear of the branch points and
        climbs the column afterwards, so the stepper never stalls on
        the prefactor divergence.
        """
        x, y = z.real, -z.imag
        if y <= self.level or (family is Sheet.I
                               and abs(x) > self.x_outer + 0.05 * self.big_j):
            return None
        key = (family, round(x, 4), round(y, 2), "pair")
        cached = self._columns.get(key)
        if cached is not None:
            return cached
        y_safe = self.level + 0.2 * self.big_j
        x_mid, mid_zones = self._mid_column(family, x, max(y, y_safe))
        a, b = self._pair_on_mid(mid_zones, y_safe)
        a, b = self._track_across(y_safe, x_mid, x, a, b)
        if y > y_safe:
            a, b, _ = self._track_down(x, y_safe, y, a, b)
        elif y < y_safe:
            a, b = self._track_up(x, y_safe, y, a, b)
        pair = (a, b)
        self._columns[key] = pair
        return pair

    def derivative(self, z: complex, family: Sheet, h: float | None = None) -> complex:
        """dSigma/dz on the family, via a locally frozen branch pair."""
        h = (h or 1e-7) * self.big_j
        pair = self.local_pair(z, family)
        if pair is None:
            return (self.physical(z + h) - self.physical(z - h)) / (2.0 * h)
        return (self._combo(z + h, *pair) - self._combo(z - h, *pair)) / (2.0 * h)


# ------------------------------------------------------------------ channels

def bcd_channels(kappa_a: float, kappa_b: float = 0.0, big_j: float = 1.0) -> list[BcdChannel]:
    """The five detour rays with their (right, left) continuation families."""
    bps = branch_point_values(kappa_a, kappa_b, big_j)
    lateral_top = bps[0].imag
    central_top = -min(kappa_a, kappa_b) / 2.0
    pairs = [(Sheet.II, Sheet.I), (Sheet.IV, Sheet.II), (Sheet.V, Sheet.IV),
             (Sheet.III, Sheet.V), (Sheet.I, Sheet.III)]
    xs = [bps[0].real, bps[1].real, 0.0, bps[2].real, bps[3].real]
    tops = [lateral_top, lateral_top, central_top, lateral_top, lateral_top]
    return [BcdChannel(index=k + 1, anchor=xs[k], y_top=tops[k], sheet_pair=pairs[k])
            for k in range(5)]


def _check_contour_regime(ev: SelfEnergyEvaluator):
    if ev.kappa_a == ev.kappa_b:
        return
    if ev.kappa_b == 0.0:
        report = dissipation_regime(ev.kappa_a, 0.0, ev.big_j)
        if report.regime is not Regime.WEAK:
            raise UnsupportedRegimeError(
                f"branch topology of the {report.regime.value} regime is not supported; "
                "use the propagator for dynamics there")
        return
    raise UnsupportedRegimeError("contour supports homogeneous or single-sublattice loss")


class ContourCalculator:
    """Pole search plus branch-cut detours for one emitter configuration."""

    def __init__(self, evaluator: SelfEnergyEvaluator, delta_e: float = 0.0,
                 sublattice: str = "A"):
        _check_contour_regime(evaluator)
        self.ev = evaluator
        self.delta_e = delta_e
        self.sigma = ContinuedSigma(evaluator, sublattice)
        self.channels = bcd_channels(evaluator.kappa_a, evaluator.kappa_b, evaluator.big_j)
        self.big_j = evaluator.big_j

    # --------------------------------------------------------------- greens

    def _gf(self, z: complex, family: Sheet) -> complex:
        return 1.0 / (z - self.delta_e - self.sigma.value(z, family))

    # ---------------------------------------------------------- pole search

    def find_poles(self, search_box=None, grid=(120, 60)) -> list[PoleRecord]:
        """Roots of z - Delta_e - Sigma^family(z) inside each家 family domain.

        Grid seeding of |F| minima plus Newton polish; roots are kept
        when they land in the strip owned by the family (double-tagged
        when within the boundary tolerance of a cut).
        """
        big_j = self.big_j
        kp = self.ev.kappa_plus
        if search_box is None:
            half = max(4 * big_j, abs(self.delta_e) + 2 * big_j)
            search_box = (-half, half, -(3 * kp + big_j), 1e-9 * big_j)
        x0, x1, y0, y1 = search_box
        xs = np.linspace(x0, x1, grid[0])
        ys = np.linspace(y0, y1, grid[1])
        level = self.sigma.level
        records: dict[complex, PoleRecord] = {}

        pad_out = 0.06 * big_j
        strips = [  # (family, x_lo, x_hi, y_lo, y_hi)
            (Sheet.I, x0, x1, -level if level > 0 else y0, y1),
            (Sheet.I, x0, -self.sigma.x_outer - pad_out, y0, y1),
            (Sheet.I, self.sigma.x_outer + pad_out, x1, y0, y1),
            (Sheet.II, -self.sigma.x_outer, -self.sigma.x_inner, y0, -level),
            (Sheet.IV, -self.sigma.x_inner, 0.0, y0, -level),
            (Sheet.V, 0.0, self.sigma.x_inner, y0, -level),
            (Sheet.III, self.sigma.x_inner, self.sigma.x_outer, y0, -level),
        ]
        exclusions = list(self.sigma.bps) + [-0.5j * self.ev.kappa_a, -0.5j * self.ev.kappa_b]

        def region_family(z: complex) -> Sheet:
            if -z.imag <= level:
                return Sheet.I
            return self.sigma.strip_of(z.real)

        def admit(root: complex, family: Sheet):
            if root is None:
                return
            if any(abs(root - e) < _EXCLUSION_RADIUS * big_j for e in exclusions):
                return
            if not (x0 - 1e-9 <= root.real <= x1 + 1e-9 and y0 - 1e-6 <= root.imag <= y1 + 1e-6):
                return
            key = complex(round(root.real, 9), round(root.imag, 9))
            if any(abs(key - k) < 1e-7 * big_j for k in records):
                return
            uncertain = (min([abs(root.real - self.sigma.x_inner),
                              abs(root.real + self.sigma.x_inner),
                              abs(root.real - self.sigma.x_outer),
                              abs(root.real + self.sigma.x_outer),
                              abs(root.real)]
                             + [abs(root - bp) for bp in exclusions]) < 1e-3 * big_j)
            dsig = self.sigma.derivative(root, family)
            residue = 1.0 / (1.0 - dsig)
            kind = PoleKind.BOUND_STATE if abs(root.imag) < 1e-10 * big_j else PoleKind.UNSTABLE
            records[key] = PoleRecord(z=root, sheet=family, kind=kind,
                                      residue=residue, uncertain=uncertain)

        # resonances cluster at the branch points; seed them radially
        # (bound states sit exactly on the real axis when loss vanishes)
        for bp in exclusions:
            for r in np.logspace(-3.5, -0.5, 7) * big_j:
                for th in list(np.linspace(0, 2 * np.pi, 12, endpoint=False)) + [np.pi, 0.0]:
                    seed = bp + r * np.exp(1j * th)
                    if seed.imag > 1e-12 * big_j:
                        continue
                    seed = complex(seed.real, min(seed.imag, 0.0))
                    family = region_family(seed)
                    root = self._newton(seed, family)
                    if root is not None and region_family(root) == family:
                        admit(root, family)

        for family, sx0, sx1, sy0, sy1 in strips:
            sx0, sx1 = max(sx0, x0), min(sx1, x1)
            sy0, sy1 = max(sy0, y0), min(sy1, y1)
            if sx0 >= sx1 or sy0 >= sy1:
                continue
            pad = 0.06 * big_j if family is not Sheet.I else 1e-9
            gx = xs[(xs > sx0 + pad) & (xs < sx1 - pad)]
            gy = ys[(ys > sy0 + 1e-12) & (ys < sy1 + 1e-12)]
            if len(gx) < 2 or len(gy) < 1:
                continue
            fv = np.empty((len(gx), len(gy)), dtype=complex)
            for i, x in enumerate(gx):
                for j, y in enumerate(gy):
                    z = complex(x, y)
                    try:
                        fv[i, j] = z - self.delta_e - self.sigma.value(z, family)
                    except Exception:  # noqa: BLE001 - singular grid point
                        fv[i, j] = np.inf
            mag = np.abs(fv)
            for i in range(len(gx)):
                for j in range(len(gy)):
                    m = mag[i, j]
                    if not np.isfinite(m):
                        continue
                    neighborhood = mag[max(0, i - 1):i + 2, max(0, j - 1):j + 2]
                    if m > neighborhood.min() or m > 0.5 * big_j:
                        continue
                    root = self._newton(complex(gx[i], gy[j]), family)
                    if root is not None and (sx0 - 1e-6 <= root.real <= sx1 + 1e-6
                                             and sy0 - 1e-6 <= root.imag <= sy1 + 1e-6):
                        admit(root, family)
        return sorted(records.values(), key=lambda r: (r.z.real, r.z.imag))

    def _newton(self, z0: complex, family: Sheet, tol: float = 1e-12):
        """Newton polish with the branch pair frozen between refreshes."""
        z = z0
        h = 1e-7 * self.big_j
        for _refresh in range(4):
            try:
                pair = self.sigma.local_pair(z, family)
            except Exception:  # noqa: BLE001 - seed in a singular spot
                return None

            def f_loc(zz):
                if pair is None:
                    return zz - self.delta_e - self.sigma.physical(zz)
                return zz - self.delta_e - self.sigma._combo(zz, *pair)

            try:
                for _ in range(40):
                    f = f_loc(z)
                    d = (f_loc(z + h) - f_loc(z - h)) / (2.0 * h)
                    if d == 0:
                        return None
                    znew = z - f / d
                    if not np.isfinite(znew.real) or not np.isfinite(znew.imag):
                        return None
                    step_done = abs(znew - z) < tol * self.big_j
                    z = znew
                    if step_done:
                        break
            except Exception:  # noqa: BLE001
                return None
            try:
                pair2 = self.sigma.local_pair(z, family)
                if pair2 is None:
                    f_full = z - self.delta_e - self.sigma.physical(z)
                else:
                    f_full = z - self.delta_e - self.sigma._combo(z, *pair2)
            except Exception:  # noqa: BLE001
                return None
            if abs(f_full) < 1e-10 * self.big_j:
                return z
        return None

    # ------------------------------------------------------------------ BCD

    def _channel_jump(self, channel: BcdChannel, y: float) -> complex:
        """G_right - G_left on the ray at height y (y < 0).

        The central ray pinches the origin where the resolvent carries
        its logarithmic weight, so its side lines sit at 1e-30 J with
        explicitly sided sheet-I evaluations; the lateral rays keep a
        1e-9 J offset.
        """
        x = channel.anchor
        right, left = channel.sheet_pair
        if channel.index == 3 and y > -self.sigma.level:
            # the resolvent carries its logarithmic weight against this
            # segment: hug it at 1e-30 J with explicitly sided values
            eps = 1e-30 * self.big_j
            sub = self.sigma.sublattice
            sr = self.ev.closed_form(complex(eps, y), sub, Sheet.I, side="+")
            sl = self.ev.closed_form(complex(-eps, y), sub, Sheet.I, side="-")
            return (1.0 / (complex(eps, y) - self.delta_e - sr)
                    - 1.0 / (complex(-eps, y) - self.delta_e - sl))
        eps = _CUT_EPS * self.big_j
        zr, zl = complex(x + eps, y), complex(x - eps, y)
        return self._gf(zr, right) - self._gf(zl, left)

    def bcd_amplitude(self, channel: BcdChannel, t: float, *, rtol: float = 1e-8) -> complex:
        """(1/2pi) int dy [G_r - G_l] e^{-i(x+iy)t} down the ray.

        The top of the central channel is integrated in v = -ln(-y):
        at resonance the jump behaves like 1/(y ln^2 y) there and a
        polynomial map would lose its logarithmic mass.
        """
        x = channel.anchor
        y_start = 0.0 if channel.index == 3 and self.sigma.level > 0 \
            and min(self.ev.kappa_a, self.ev.kappa_b) == 0.0 else channel.y_top
        scale = max(t, 1.0 / self.big_j)
        total = 0.0 + 0.0j

        if channel.index == 3 and y_start == 0.0:
            y_split = -0.05 * self.big_j

            def integrand_log(v):
                y = -np.exp(-v) * self.big_j
                return self._channel_jump(channel, y) * np.exp(y * t) * np.exp(-v) * self.big_j

            v1 = -np.log(-y_split / self.big_j)
            v_cut = 55.0
            val, _ = quad(integrand_log, v1, v_cut, complex_func=True,
                          epsabs=1e-13, epsrel=rtol, limit=400)
            total += val
            # at resonance on the lossy sublattice the jump approaches
            # 2a/(|y| [a^2 + (1 + c(v+u))^2]), a = g^2/sqrt(3) J,
            # c = a/pi, u = ln(18 J/kappa_a): the exact self-energy
            # expansion at the origin.  Its v-tail beyond the numeric
            # window is the 1/ln(t) amplitude and is added analytically.
            resonant = (self.delta_e == 0.0 and self.ev.kappa_b == 0.0
                        and self.ev.kappa_a > 0.0 and self.sigma.sublattice == "A"
                        and t < 0.1 * np.exp(v_cut))
            if resonant:
                a_c = self.ev.g ** 2 / (np.sqrt(3.0) * self.big_j)
                c_c = a_c / np.pi
                u_c = np.log(18.0 * self.big_j / self.ev.kappa_a)
                tail = (2.0 / c_c) * (np.pi / 2
                                      - np.arctan((1.0 + c_c * (v_cut + u_c)) / a_c))
                total += tail
            y_start = y_split

        def integrand(u):
            y = y_start - u / scale
            return self._channel_jump(channel, y) * np.exp(y * t)

        val, _ = quad(integrand, 0.0, np.inf, complex_func=True,
                      epsabs=1e-13, epsrel=rtol, limit=400)
        total += val / scale
        return total / (2.0 * np.pi) * cmath.exp(-1j * x * t)

    def amplitude(self, t_grid, poles: list[PoleRecord] | None = None) -> ContourDecomposition:
        """C_e(t) = sum residues e^{-izt} + sum_k BCD_k(t) on the grid."""
        t_grid = np.asarray(t_grid, dtype=float)
        if poles is None:
            poles = self.find_poles()
        pole_amp = np.array([p.residue * np.exp(-1j * p.z * t_grid) for p in poles]) \
            if poles else np.zeros((0, len(t_grid)), dtype=complex)
        bcd = np.zeros((5, len(t_grid)), dtype=complex)
        for k, channel in enumerate(self.channels):
            for i, t in enumerate(t_grid):
                bcd[k, i] = self.bcd_amplitude(channel, t)
        return ContourDecomposition(poles=poles, channels=self.channels,
                                    bcd_amplitudes=bcd, pole_amplitudes=pole_amp,
                                    times=t_grid)


def long_time_asymptote(t, g: float, kappa_a: float, big_j: float = 1.0):
    """C_e(t) ~ E_e / ln(18 J^2 t / kappa_a), E_e = 5 sqrt(3) J^2 pi / g^2.

    Resonant emitter on the lossy sublattice; valid deep in the
    logarithmic regime t >> kappa_a/(18 J^2) e^{E_e}.
    """
    t = np.asarray(t, dtype=float)
    argument = 18.0 * big_j ** 2 * t / kappa_a
    if np.any(argument <= 1.0):
        raise ResolventError("time too small for the logarithmic asymptote")
    energy_scale = 5.0 * np.sqrt(3.0) * big_j ** 2 * np.pi / g ** 2
    return energy_scale / np.log(argument)


def two_emitter_long_time(t, delta_e: float, omega: float, g: float,
                          lattice_sum: float, big_j: float = 1.0):
    """Long-time e_1(t), e_2(t) for two emitters sharing one A cavity.

    Requires delta_e + omega = 0 (dark state at delta_e - omega plus the
    zero-energy quasilocalized pole):
        e_{1/2}(t) = ( [1 + 2 g^2 G(N)/J^2]^{-1} +- e^{2 i omega t} ) / 2.
    """
    if abs(delta_e + omega) > 1e-12 * big_j:
        raise ResolventError("closed form requires delta_e + omega = 0")
    t = np.asarray(t, dtype=float)
    weight = 1.0 / (1.0 + 2.0 * g ** 2 * lattice_sum / big_j ** 2)
    phase = np.exp(2j * omega * t)
    return 0.5 * (weight + phase), 0.5 * (weight - phase)


def two_emitter_dark_only(t, delta_e: float, omega: float):
    """B-sublattice co-location: only the dark state survives.

    e_2(t) = -e^{-i(delta_e - omega)t}/2; at most one quarter of the
    donor population reaches the acceptor.
    """
    t = np.asarray(t, dtype=float)
    phase = np.exp(-1j * (delta_e - omega) * t)
    return 0.5 * phase, -0.5 * phase
