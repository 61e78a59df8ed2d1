"""Lattice builders, Bloch side, exceptional rings, disorder."""

import numpy as np
import pytest

from pgqed.lattice import (Boundary, DisorderKind, DisorderRealization, Family,
                           InvalidParameterError, InvalidSizeError, Regime,
                           SiteRef, Sublattice, UnitCellCoord,
                           UnsupportedDisorderError, apply_disorder,
                           bloch_bands, bloch_band_multiset, bloch_kernel,
                           build_anisotropic, build_isotropic, build_kekule,
                           build_zigzag_bearded,
                           canonical_zigzag_bearded_descriptor,
                           dissipation_regime, exceptional_ring_locus,
                           export_sparse_triplets, model_from_descriptor)


def _sorted_complex(values):
    return sorted(values, key=lambda z: (round(z.real, 8), round(z.imag, 8)))


def test_minimal_periodic_lattice():
    m = build_isotropic(2)
    h = m.h_bath.toarray()
    assert h.shape == (8, 8)
    assert np.allclose(h, h.conj().T)
    assert (np.abs(h) > 0).sum() == 24  # 12 bonds, two entries each


def test_size_and_parameter_errors():
    with pytest.raises(InvalidSizeError):
        build_isotropic(1)
    with pytest.raises(InvalidParameterError):
        build_anisotropic(4, -0.5)


def test_loss_diagonal():
    m = build_isotropic(3, kappa_a=2.0)
    diag = m.h_bath.diagonal()
    assert np.allclose(diag[m.a_indices], -1.0j)
    assert np.allclose(diag[m.b_indices], 0.0)


def test_trace_identity():
    m = build_isotropic(5, kappa_a=1.3, kappa_b=0.4)
    expected = -0.5j * (1.3 * m.num_a + 0.4 * m.num_b)
    assert m.h_bath.diagonal().sum() == pytest.approx(expected, abs=1e-12)


def test_bloch_consistency():
    m = build_isotropic(6, kappa_a=1.3, kappa_b=0.4)
    ev = np.linalg.eigvals(m.h_bath.toarray())
    bands = bloch_band_multiset(m)
    for a, b in zip(_sorted_complex(ev), _sorted_complex(bands)):
        assert a == pytest.approx(b, abs=1e-10)


def test_beta_one_is_isotropic_bitwise():
    ma = build_anisotropic(5, 1.0, 0.3, 0.1)
    mi = build_isotropic(5, 0.3, 0.1)
    assert (ma.h_bath != mi.h_bath).nnz == 0


def test_chiral_pairing_all_families():
    models = [build_isotropic(3, boundary=Boundary.OPEN),
              build_anisotropic(3, 1.7),
              build_kekule(2, 1.0, 1.5),
              build_zigzag_bearded(canonical_zigzag_bearded_descriptor(3))]
    for m in models:
        ev = np.sort(np.linalg.eigvalsh(m.h_bath.toarray().real))
        assert np.allclose(ev, -ev[::-1], atol=1e-9)


def test_passive_pt_relation():
    m = build_isotropic(4, kappa_a=0.9, kappa_b=0.2)
    kp = (0.9 + 0.2) / 4
    sx = np.array([[0, 1], [1, 0]])
    rng = np.random.default_rng(5)
    for _ in range(100):
        k = rng.uniform(-np.pi, np.pi, 2)
        hp = bloch_kernel(m, k) + 1j * kp * np.eye(2)
        assert np.abs(sx @ hp.conj() @ sx - hp).max() < 1e-12


def test_bloch_band_examples():
    m = build_isotropic(4)
    wp, _ = bloch_bands(m, (np.array([0.0]), np.array([0.0])))
    assert wp[0] == pytest.approx(3.0, abs=1e-14)
    m2 = build_isotropic(4, kappa_a=2.0)
    kplus = 2 * np.pi / 3 * np.array([1.0, -1.0])
    wp, wm = bloch_bands(m2, (np.array([kplus[0]]), np.array([kplus[1]])))
    assert abs(wp[0]) < 1e-14
    assert wm[0] == pytest.approx(-1j, abs=1e-14)


def test_exceptional_rings_regimes():
    loc = exceptional_ring_locus(build_isotropic(4, kappa_a=2.0), resolution=250)
    assert loc.n_components == 2
    m = build_isotropic(4, kappa_a=2.0)
    wp, wm = bloch_bands(m, loc.points.T)
    assert np.abs(np.concatenate([wp, wm]) + 0.5j).max() < 1e-8
    assert exceptional_ring_locus(build_isotropic(4, kappa_a=8.0),
                                  resolution=250).n_components == 1
    assert len(exceptional_ring_locus(build_isotropic(4, kappa_a=14.0),
                                      resolution=200).points) == 0
    lossless = exceptional_ring_locus(build_isotropic(4), resolution=60)
    assert len(lossless.points) == 0
    assert lossless.dirac_points is not None


def test_dissipation_regime_thresholds():
    assert dissipation_regime(2.0).regime is Regime.WEAK
    assert dissipation_regime(8.0).regime is Regime.MODERATE
    assert dissipation_regime(13.0).regime is Regime.STRONG
    assert dissipation_regime(12.0).at_boundary
    assert dissipation_regime(4.0).at_boundary
    assert not dissipation_regime(5.0).at_boundary


def test_disorder_identity_and_bounds():
    m = build_isotropic(6)
    r0 = DisorderRealization(DisorderKind.OFF_DIAGONAL, 0.0, seed=4)
    m0 = apply_disorder(m, r0)
    assert (m0.h_bath != m.h_bath).nnz == 0

    r = DisorderRealization(DisorderKind.OFF_DIAGONAL, 0.5, seed=4)
    md = apply_disorder(m, r)
    delta = (md.h_bath - m.h_bath).tocoo()
    assert np.abs(delta.data).max() <= 0.5
    # chiral structure preserved: all added terms couple A and B
    a_set = set(m.a_indices)
    for i, j in zip(delta.row, delta.col):
        assert (i in a_set) != (j in a_set)

    rd = DisorderRealization(DisorderKind.DIAGONAL, 0.5, seed=4)
    mdd = apply_disorder(m, rd)
    dd = (mdd.h_bath - m.h_bath).tocoo()
    assert np.all(dd.row == dd.col)
    assert np.abs(dd.data).max() <= 0.5


def test_disorder_reproducible_and_family_guard():
    m = build_isotropic(5)
    r = DisorderRealization(DisorderKind.DIAGONAL, 0.7, seed=11)
    a = apply_disorder(m, r).h_bath
    b = apply_disorder(m, r).h_bath
    assert (a != b).nnz == 0
    with pytest.raises(UnsupportedDisorderError):
        apply_disorder(build_anisotropic(4, 1.3), r)


def test_site_indexing_roundtrip():
    m = build_isotropic(4)
    for idx in range(m.num_sites):
        assert m.index_of(m.site_of(idx)) == idx
    mk = build_kekule(3, 0.5, 1.0)
    for idx in range(mk.num_sites):
        assert mk.index_of(mk.site_of(idx)) == idx


def test_kekule_uniform_limit_is_honeycomb():
    m = build_kekule(4, 1.0, 1.0)
    h = m.h_bath.toarray()
    off = h - np.diag(h.diagonal())
    vals = off[np.abs(off) > 0]
    assert np.allclose(vals, 1.0)
    degree = (np.abs(off) > 0).sum(axis=0)
    assert degree.max() == 3 and degree.min() >= 2
    ev = np.linalg.eigvalsh(h.real)
    assert ev.min() > -3.0 - 1e-9 and ev.max() < 3.0 + 1e-9
    # bond geometry: every bond has unit length in the embedding
    coo = m.h_bath.tocoo()
    for i, j, v in zip(coo.row, coo.col, coo.data):
        if i < j and abs(v) > 0:
            assert np.linalg.norm(m.positions[i] - m.positions[j]) == pytest.approx(1.0)


def test_kekule_spectrum_symmetries():
    m = build_kekule(6, 0.1, 0.7, kappa_a=1.0)
    ev = np.linalg.eigvals(m.h_bath.toarray())
    re = np.sort(ev.real)
    im = np.sort(ev.imag)
    assert np.abs(re + re[::-1]).max() < 1e-9
    assert np.abs(im + im[::-1] + 0.5).max() < 1e-9


def test_zigzag_bearded_descriptor():
    desc = canonical_zigzag_bearded_descriptor(5)
    m = build_zigzag_bearded(desc, kappa_a=1.0)
    assert m.num_b - m.num_a == 5
    w = np.linalg.eigvals(m.h_bath.toarray())
    assert (np.abs(w) < 1e-8).sum() == 5
    bad = dict(desc)
    bad["bonds"] = desc["bonds"][:10]
    from pgqed.lattice import InvalidGeometryError
    with pytest.raises(InvalidGeometryError):
        build_zigzag_bearded(bad)


def test_descriptor_and_export(tmp_path):
    cfg = {"family": "anisotropic", "n": 4, "beta": 1.4, "kappa_a": 0.5,
           "boundary": "open"}
    m = model_from_descriptor(cfg)
    assert m.family is Family.ANISOTROPIC and m.boundary is Boundary.OPEN
    path = tmp_path / "h.txt"
    export_sparse_triplets(m, path)
    lines = path.read_text().splitlines()
    assert lines[1].startswith("# row col")
    assert len(lines) > m.num_sites
