"""Elliptic kernel and Riemann-sheet machinery."""

import numpy as np
import pytest

from pgqed.specfun import (BranchCutError, EllipticParam, Sheet, k_parameter_from_z2,
                           SheetBoundaryError, SingularPointError,
                           branch_point_values, classify_sheet_region,
                           continued_k, elliptic_k, elliptic_k_quadrature,
                           k_parameter)

# frozen from the quadrature oracle of the defining integral
K_HALF = 1.8540746773013719


def test_k_at_zero():
    assert elliptic_k(0.0) == pytest.approx(np.pi / 2, abs=1e-15)


def test_k_half_frozen_value():
    assert elliptic_k(0.5) == pytest.approx(K_HALF, abs=1e-14)
    assert elliptic_k_quadrature(0.5) == pytest.approx(K_HALF, abs=1e-12)


def test_agm_matches_quadrature_on_random_complex():
    rng = np.random.default_rng(7)
    count = 0
    for _ in range(1000):
        m = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
        if abs(m.imag) < 1e-3 and m.real >= 1:
            continue
        count += 1
        assert elliptic_k(m) == pytest.approx(elliptic_k_quadrature(m), rel=1e-10)
    assert count > 900


def test_log_series_near_one():
    for m1 in (1e-7, 1e-7j, (3e-7 + 2e-7j), -1e-8j):
        m = 1.0 - m1
        assert elliptic_k(m) == pytest.approx(elliptic_k_quadrature(m), rel=1e-9)


def test_divergence_rate_toward_one():
    # K(m) ~ -0.5 ln(1-m) + 2 ln 2 as m -> 1-
    for m1 in (1e-4, 1e-6):
        expected = -0.5 * np.log(m1) + 2 * np.log(2)
        assert elliptic_k(1 - m1).real == pytest.approx(expected, rel=2e-4)


def test_branch_cut_raises_and_sides():
    with pytest.raises(BranchCutError):
        elliptic_k(1.5)
    up = elliptic_k(1.5, side="+")
    dn = elliptic_k(1.5, side="-")
    assert up == pytest.approx(np.conj(dn), rel=1e-10)
    assert abs(up.imag) > 0.1


def test_k_parameter_examples():
    p = k_parameter(2.0 + 1e-9j)
    assert np.isfinite(p.m)
    assert p.m == pytest.approx(p.k ** 2, rel=1e-14)
    with pytest.raises(SingularPointError):
        k_parameter(1.0)
    # large-argument decay k ~ 4 (J/z)^{3/2}
    for z in (1e3, 1e5):
        assert k_parameter(z).k == pytest.approx(4.0 * z ** -1.5, rel=1e-3)


def test_continued_sheet_linear_identities():
    rng = np.random.default_rng(3)
    minus_cases = 0
    for _ in range(40):
        z = complex(rng.uniform(-2.5, 2.5), rng.uniform(-2.0, -0.2))
        p = k_parameter(z)
        km = elliptic_k(p.m)
        kc = elliptic_k(1.0 - p.m)
        two = continued_k(Sheet.II, p, prefer=1)
        three = continued_k(Sheet.III, p, prefer=1)
        four = continued_k(Sheet.IV, p, prefer=1)
        five = continued_k(Sheet.V, p, prefer=1)
        assert two - three == pytest.approx(4j * kc, rel=1e-12)
        assert four - five == pytest.approx(-2j * kc, rel=1e-12)
        if p.k.real < 0:
            # II + III = -6 K(m) where both branch conditions are minus
            minus_cases += 1
            assert two + three == pytest.approx(-6 * km, rel=1e-12)
    assert minus_cases > 5


def test_continuations_match_path_tracked_oracle():
    # the pointwise sheet rules must agree with continuity tracking
    from pgqed.resolvent import ContinuedSigma
    from pgqed.selfenergy import SelfEnergyEvaluator
    import cmath
    for ka, kb in ((1.0, 0.0), (0.2, 0.2)):
        ev = SelfEnergyEvaluator(g=0.5, kappa_a=ka, kappa_b=kb)
        sig = ContinuedSigma(ev)
        for fam, xs in ((Sheet.V, (0.25, 0.75)), (Sheet.III, (1.4, 2.6)),
                        (Sheet.IV, (-0.6,)), (Sheet.II, (-1.7,))):
            for x in xs:
                for y in (0.3, 0.7, 1.4, 3.0):
                    z = complex(x, -y)
                    tracked = sig.value(z, fam)
                    p = k_parameter_from_z2(ev.znh2(z))
                    w = p.z
                    pref = ev.g ** 2 * (2 * z + 1j * kb) / (
                        cmath.pi * cmath.sqrt(w + 3) * (w - 1) ** 1.5)
                    direct = pref * continued_k(fam, p, prefer=1)
                    assert direct == pytest.approx(tracked, rel=1e-10), (fam, x, y)


def test_boundary_error_carries_sides():
    p = k_parameter(0.5)  # real argument puts the sign conditions on a boundary
    with pytest.raises(SheetBoundaryError) as err:
        continued_k(Sheet.I, p)
    assert err.value.plus is not None and err.value.minus is not None
    assert err.value.plus != err.value.minus


def test_branch_point_values():
    pts = branch_point_values(1.0, 0.0)
    x = np.sqrt(9 - 1 / 16)
    assert pts[3] == pytest.approx(x - 0.25j, abs=1e-14)
    assert pts[3].real == pytest.approx(2.9895651857753496, abs=1e-12)
    # homogeneous: plain shift by kappa/2
    pts = branch_point_values(0.4, 0.4)
    assert pts == pytest.approx([-3 - 0.2j, -1 - 0.2j, 1 - 0.2j, 3 - 0.2j])
    # strong single-sublattice loss: all four on the imaginary axis
    pts = branch_point_values(14.0, 0.0)
    assert all(abs(p.real) < 1e-12 for p in pts)


def test_classify_sheet_region():
    assert classify_sheet_region(0.5 + 0.1j, 1.0, 0.0).sheet is Sheet.I
    assert classify_sheet_region(9.0 - 8.0j, 1.0, 0.0).sheet is Sheet.I
    assert classify_sheet_region(2.0 - 0.5j, 1.0, 0.0).sheet is Sheet.III
    assert classify_sheet_region(0.5 - 0.5j, 1.0, 0.0).sheet is Sheet.V
    assert classify_sheet_region(-0.5 - 0.5j, 1.0, 0.0).sheet is Sheet.IV
    assert classify_sheet_region(-2.0 - 0.5j, 1.0, 0.0).sheet is Sheet.II
    assert classify_sheet_region(2.0 - 0.25j, 1.0, 0.0).boundary
