"""Exact propagation against dense oracles and structural identities."""

import numpy as np
import pytest

from pgqed.lattice import (Boundary, SiteRef, Sublattice, UnitCellCoord,
                           build_anisotropic, build_isotropic, build_kekule)
from pgqed.propagator import (DensityAccount, Emitter, GainDetectedError,
                              InvalidSiteError, assemble, bath_map,
                              density_account, evolve, plateau_statistics,
                              symmetric_sector, two_emitter_amplitudes)


def _center_system(model, g, detuning=0.0):
    site = SiteRef(model.center_cell(), Sublattice.A)
    return assemble(model, [Emitter.at_site(model, site, g, detuning)])


def test_t0_identity_and_gain_guard():
    model = build_isotropic(4, kappa_a=0.3)
    system = _center_system(model, 0.4)
    psi0 = system.initial_excited(0)
    res = evolve(system, psi0, [0.0])
    assert np.allclose(res.states.get(0, psi0), psi0)
    assert res.survival[0] == pytest.approx(1.0)
    with pytest.raises(GainDetectedError):
        density_account(1.001 * psi0)
    acct = density_account(0.6 * psi0)
    assert acct.survival + acct.p_jump == pytest.approx(1.0)


def test_dense_matches_sparse_all_families():
    models = [build_isotropic(6, kappa_a=0.3, kappa_b=0.1),
              build_isotropic(6, boundary=Boundary.OPEN, kappa_a=0.2),
              build_anisotropic(6, 1.5, kappa_a=0.4)]
    ts = np.linspace(0.0, 50.0, 6)
    for model in models:
        system = _center_system(model, 0.4, 0.2)
        psi0 = system.initial_excited(0)
        dense = evolve(system, psi0, ts, dense_cutoff=10 ** 9)
        sparse = evolve(system, psi0, ts, dense_cutoff=1)
        assert np.abs(dense.emitter_amps - sparse.emitter_amps).max() < 1e-9
        assert np.abs(dense.survival - sparse.survival).max() < 1e-9


def test_norm_monotone_under_loss():
    model = build_isotropic(6, kappa_a=0.5, kappa_b=0.2)
    system = _center_system(model, 0.4)
    res = evolve(system, system.initial_excited(0), np.linspace(0, 40, 81))
    assert np.all(np.diff(res.survival) <= 1e-12)


def test_decoupled_emitter():
    model = build_isotropic(5)
    site = SiteRef(model.center_cell(), Sublattice.A)
    system = assemble(model, [Emitter.at_site(model, site, 0.0, 0.7)])
    ts = np.linspace(0, 10, 21)
    res = evolve(system, system.initial_excited(0), ts, keep="all")
    assert np.allclose(np.abs(res.emitter_amps[0]), 1.0, atol=1e-13)
    assert np.allclose(res.emitter_amps[0], np.exp(-1j * 0.7 * ts), atol=1e-12)
    for i, psi in res.states.items():
        assert np.abs(psi[:model.num_sites]).max() < 1e-14


def test_homogeneous_bath_norm_factorizes():
    # with equal loss on both sublattices a photonic state decays as
    # e^{-kappa t}; with an emitter attached the factorization breaks
    model = build_isotropic(5, kappa_a=0.4, kappa_b=0.4)
    system = assemble(model, [])
    psi0 = np.zeros(system.dim, dtype=complex)
    psi0[model.index_of(SiteRef(UnitCellCoord(2, 2), Sublattice.B))] = 1.0
    ts = np.linspace(0, 12, 7)
    res = evolve(system, psi0, ts)
    assert np.abs(res.survival - np.exp(-0.4 * ts)).max() < 1e-10


def test_invalid_site():
    model = build_isotropic(4)
    with pytest.raises(InvalidSiteError):
        assemble(model, [Emitter(detuning=0.0, couplings={10 ** 6: 0.3})])


def test_bath_map_zero_at_start_and_c3_symmetry():
    n = 12
    model = build_isotropic(n)
    center = UnitCellCoord(n // 2, n // 2)
    system = assemble(model, [Emitter.at_site(
        model, SiteRef(center, Sublattice.A), 0.4, 0.0)])
    psi0 = system.initial_excited(0)
    wa0, wb0 = bath_map(system, psi0)
    assert wa0.max() == 0 and wb0.max() == 0
    res = evolve(system, psi0, [0.0, 18.0], keep=[1])
    wa, wb = bath_map(system, res.states[1])

    def rot_a(n1, n2):
        d1, d2 = n1 - center.n1, n2 - center.n2
        return ((center.n1 + d2) % n, (center.n2 - d1 - d2) % n)

    def rot_b(n1, n2):
        d1, d2 = n1 - center.n1, n2 - center.n2
        return ((center.n1 + d2) % n, (center.n2 - d1 - d2 - 1) % n)

    wa_g = wa.reshape(n, n)
    wb_g = wb.reshape(n, n)
    for n1 in range(n):
        for n2 in range(n):
            m1, m2 = rot_a(n1, n2)
            assert wa_g[m1, m2] == pytest.approx(wa_g[n1, n2], abs=1e-12)
            m1, m2 = rot_b(n1, n2)
            assert wb_g[m1, m2] == pytest.approx(wb_g[n1, n2], abs=1e-12)


def test_block_consistency_no_transfer_without_coupling():
    model = build_isotropic(5, kappa_a=0.3)
    site = SiteRef(model.center_cell(), Sublattice.A)
    system = assemble(model, [Emitter.at_site(model, site, 0.0, 0.3)])
    res = evolve(system, system.initial_excited(0), [5.0, 15.0], keep="all")
    for psi in res.states.values():
        assert np.abs(psi[:model.num_sites]).max() < 1e-14


def test_two_emitter_split_matches_direct():
    model = build_isotropic(8, kappa_a=0.8)
    site = SiteRef(model.center_cell(), Sublattice.A)
    g, de, om = 0.2, 0.1, -0.1
    ts = np.linspace(0, 60, 31)
    e1, e2 = two_emitter_amplitudes(model, site, g, de, om, ts)
    em = Emitter.at_site(model, site, g, de)
    system = assemble(model, [em, Emitter(detuning=de,
                                          couplings=dict(em.couplings))],
                      omega=om)
    res = evolve(system, system.initial_excited(0), ts)
    assert np.abs(res.emitter_amps[0] - e1).max() < 1e-9
    assert np.abs(res.emitter_amps[1] - e2).max() < 1e-9


def test_plateau_statistics_window():
    ts = np.linspace(0, 100, 501)
    pop = 0.5 + 0.05 * np.cos(ts)
    mean, osc = plateau_statistics(ts, pop)
    assert mean == pytest.approx(0.5, abs=0.01)
    assert osc == pytest.approx(0.05, abs=0.005)


def test_giant_atom_assembly():
    model = build_kekule(3, 0.1, 1.0, kappa_a=1.0)
    weights = {int(model.b_indices[0]): 0.1, int(model.b_indices[1]): -0.05}
    system = assemble(model, [Emitter.giant(weights, 0.0)], omega=0.0)
    col = system.h_full[:, system.emitter_index(0)].toarray().ravel()
    assert col[model.b_indices[0]] == pytest.approx(0.1)
    assert col[model.b_indices[1]] == pytest.approx(-0.05)
