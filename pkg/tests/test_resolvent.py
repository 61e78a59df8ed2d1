"""Contour machinery: poles, detours, completeness, closed forms."""

import numpy as np
import pytest

from pgqed.lattice import SiteRef, Sublattice, build_isotropic
from pgqed.propagator import Emitter, assemble, evolve
from pgqed.resolvent import (BcdChannel, ContourCalculator, PoleKind,
                             ResolventError, UnsupportedRegimeError,
                             bcd_channels, branch_points, long_time_asymptote,
                             two_emitter_dark_only, two_emitter_long_time)
from pgqed.selfenergy import SelfEnergyEvaluator
from pgqed.specfun import Sheet


def test_branch_points_and_regimes():
    pts, regime = branch_points(1.0, 0.0)
    assert pts[3] == pytest.approx(2.9895651857753496 - 0.25j, abs=1e-12)
    assert regime.regime.value == "weak"
    pts, _ = branch_points(0.6, 0.6)
    assert pts == pytest.approx([-3 - 0.3j, -1 - 0.3j, 1 - 0.3j, 3 - 0.3j])
    pts, regime = branch_points(14.0, 0.0)
    assert all(abs(p.real) < 1e-12 for p in pts)
    assert regime.regime.value == "strong"


def test_channel_table():
    chans = bcd_channels(1.0, 0.0)
    assert [c.sheet_pair for c in chans] == [
        (Sheet.II, Sheet.I), (Sheet.IV, Sheet.II), (Sheet.V, Sheet.IV),
        (Sheet.III, Sheet.V), (Sheet.I, Sheet.III)]
    assert chans[2].anchor == 0.0
    assert chans[2].y_top == pytest.approx(0.0)
    assert chans[0].y_top == pytest.approx(-0.25)
    chans_h = bcd_channels(0.6, 0.6)
    assert chans_h[2].y_top == pytest.approx(-0.3)
    assert chans_h[0].y_top == pytest.approx(-0.3)


def test_regime_guard():
    with pytest.raises(UnsupportedRegimeError):
        ContourCalculator(SelfEnergyEvaluator(g=0.3, kappa_a=8.0), delta_e=0.0)
    with pytest.raises(UnsupportedRegimeError):
        ContourCalculator(SelfEnergyEvaluator(g=0.3, kappa_a=1.0, kappa_b=0.3),
                          delta_e=0.0)


@pytest.mark.parametrize("g,ka,kb,de", [
    (0.2, 0.2, 0.2, 0.0), (0.2, 0.2, 0.2, 1.0),
    (0.5, 1.0, 0.0, 0.0), (0.5, 1.0, 0.0, 1.5), (0.6, 0.0, 0.0, 2.0)])
def test_completeness_at_t0(g, ka, kb, de):
    calc = ContourCalculator(SelfEnergyEvaluator(g=g, kappa_a=ka, kappa_b=kb),
                             delta_e=de)
    poles = calc.find_poles(grid=(80, 40))
    total = calc.amplitude([0.0], poles=poles).total()[0]
    assert total == pytest.approx(1.0, abs=1e-6)


def test_lossless_bound_state_above_band():
    calc = ContourCalculator(SelfEnergyEvaluator(g=0.6), delta_e=4.0)
    poles = calc.find_poles(grid=(60, 30))
    real_poles = [p for p in poles if p.kind is PoleKind.BOUND_STATE]
    assert len(real_poles) == 1
    pole = real_poles[0]
    assert pole.z.real > 3.0 and abs(pole.z.imag) < 1e-10
    assert 0.0 < pole.residue.real < 1.0 and abs(pole.residue.imag) < 1e-8
    # dense-diagonalization oracle: N = 64 torus bound-state energy
    model = build_isotropic(64, 0.0, 0.0)
    site = SiteRef(model.center_cell(), Sublattice.A)
    system = assemble(model, [Emitter.at_site(model, site, 0.6, 4.0)])
    import scipy.sparse.linalg as spla
    w, v = spla.eigs(system.h_full.tocsc(), k=1, sigma=pole.z.real + 1e-4)
    assert w[0].real == pytest.approx(pole.z.real, abs=1e-4)
    weight = abs(v[system.emitter_index(0), 0]) ** 2 / np.linalg.norm(v[:, 0]) ** 2
    assert weight == pytest.approx(pole.residue.real, abs=1e-3)


def test_no_real_poles_under_homogeneous_loss():
    calc = ContourCalculator(SelfEnergyEvaluator(g=0.2, kappa_a=0.2, kappa_b=0.2),
                             delta_e=0.0)
    poles = calc.find_poles(grid=(60, 30))
    assert all(p.z.imag < -1e-4 for p in poles)


def test_sheet_pairing_merges_above_branch_points():
    # across each lateral anchor the paired continuations agree above
    # the branch point and split below it
    calc = ContourCalculator(SelfEnergyEvaluator(g=0.5, kappa_a=1.0), delta_e=0.0)
    sig = calc.sigma
    for ch in (calc.channels[3], calc.channels[4]):
        right, left = ch.sheet_pair
        above = ch.y_top + 0.05
        below = ch.y_top - 0.05
        za = complex(ch.anchor, above)
        r_up = sig.value(complex(ch.anchor + 1e-9, above), right)
        l_up = sig.value(complex(ch.anchor - 1e-9, above), left)
        assert abs(r_up - l_up) < 1e-7
        r_dn = sig.value(complex(ch.anchor + 1e-9, below), right)
        l_dn = sig.value(complex(ch.anchor - 1e-9, below), left)
        assert abs(r_dn - l_dn) > 1e-4


def test_contour_matches_propagator_small():
    n = 128
    model = build_isotropic(n, kappa_a=0.2, kappa_b=0.2)
    site = SiteRef(model.center_cell(), Sublattice.A)
    ts = np.linspace(0.0, 60.0, 13)
    calc = ContourCalculator(SelfEnergyEvaluator(g=0.2, kappa_a=0.2, kappa_b=0.2),
                             delta_e=1.0)
    dec = calc.amplitude(ts, poles=calc.find_poles(grid=(60, 30)))
    system = assemble(model, [Emitter.at_site(model, site, 0.2, 1.0)])
    res = evolve(system, system.initial_excited(0), ts)
    assert np.abs(dec.total() - res.emitter_amps[0]).max() < 2e-3


def test_residue_derivative_consistency():
    calc = ContourCalculator(SelfEnergyEvaluator(g=0.2, kappa_a=0.2, kappa_b=0.2),
                             delta_e=1.0)
    poles = calc.find_poles(grid=(60, 30))
    pole = max(poles, key=lambda p: abs(p.residue))
    # circle-integral oracle for the residue
    th = np.linspace(0, 2 * np.pi, 2001)[:-1]
    zs = pole.z + 1e-3 * np.exp(1j * th)
    gf = np.array([1.0 / (z - 1.0 - calc.sigma.value(z, pole.sheet)) for z in zs])
    circ = np.sum(gf * 1e-3 * np.exp(1j * th) * 1j) * (th[1] - th[0]) / (2j * np.pi)
    assert pole.residue == pytest.approx(circ, rel=1e-6)


def test_long_time_asymptote_algebra():
    with pytest.raises(ResolventError):
        long_time_asymptote(1e-9, 0.5, 0.01)
    t = 1e4
    a1 = long_time_asymptote(t, 0.5, 0.01)
    a2 = long_time_asymptote(2 * t, 0.5, 0.01)
    assert a2 / a1 == pytest.approx(np.log(18 * t / 0.01)
                                    / np.log(36 * t / 0.01), rel=1e-12)
    # Zeno ordering of the asymptote: larger loss, larger amplitude
    assert long_time_asymptote(t, 0.5, 0.05) > long_time_asymptote(t, 0.5, 0.01)


def test_two_emitter_closed_forms():
    ts = np.linspace(0, 100, 11)
    e1, e2 = two_emitter_long_time(ts, 0.1, -0.1, 0.01, 1.73)
    # dark residues +-1/2: the oscillating parts are +-e^{2 i omega t}/2
    osc1 = e1 - np.mean(e1)
    assert np.abs(osc1 - 0.5 * np.exp(-2j * 0.1 * ts)
                  + 0.5 * np.mean(np.exp(-2j * 0.1 * ts))).max() < 1e-12
    weight = 1.0 / (1.0 + 2 * 0.01 ** 2 * 1.73)
    assert np.abs(e1 + e2 - weight).max() < 1e-12
    dense = np.linspace(0, 200, 4001)
    _, e2d = two_emitter_long_time(dense, 0.1, -0.1, 0.01, 1.73)
    assert np.abs(e2d).max() == pytest.approx((1 + weight) / 2, abs=1e-4)
    with pytest.raises(ResolventError):
        two_emitter_long_time(ts, 0.1, 0.2, 0.01, 1.73)
    d1, d2 = two_emitter_dark_only(ts, 0.1, -0.1)
    assert np.abs(np.abs(d2) ** 2 - 0.25).max() < 1e-14
