"""Lattice builders for the dissipative photonic honeycomb bath.

All variants are assembled as sparse complex operators in the
single-excitation subspace with the flat site ordering A-block then
B-block (cell-major, basis index fastest).  Loss enters the diagonal as
-i*kappa/2 per sublattice.  Periodic isotropic/anisotropic models carry
momentum-space companions (structure factor, Bloch kernel, bands).
"""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np
import scipy.sparse as sp

# Bravais vectors (3, sqrt(3))/2 and (3, -sqrt(3))/2; B basis offset (1, 0)
V1 = np.array([1.5, np.sqrt(3) / 2])
V2 = np.array([1.5, -np.sqrt(3) / 2])
B_OFFSET = np.array([1.0, 0.0])

DIRAC_K_PLUS = 2 * np.pi / 3 * np.array([1.0, -1.0])
DIRAC_K_MINUS = 2 * np.pi / 3 * np.array([-1.0, 1.0])


class LatticeError(ValueError):
    pass


class InvalidSizeError(LatticeError):
    pass


class InvalidParameterError(LatticeError):
    pass


class InvalidGeometryError(LatticeError):
    pass


class UnsupportedDisorderError(LatticeError):
    pass


class Sublattice(str, Enum):
    A = "A"
    B = "B"


class Boundary(str, Enum):
    PERIODIC = "periodic"
    OPEN = "open"


class Family(str, Enum):
    ISOTROPIC = "isotropic"
    ANISOTROPIC = "anisotropic"
    KEKULE = "kekule"
    ZIGZAG_BEARDED = "zigzag_bearded"


class Regime(str, Enum):
    WEAK = "weak"
    MODERATE = "moderate"
    STRONG = "strong"


class DisorderKind(str, Enum):
    DIAGONAL = "diagonal"
    OFF_DIAGONAL = "off_diagonal"


@dataclass(frozen=True)
class UnitCellCoord:
    n1: int
    n2: int


@dataclass(frozen=True)
class SiteRef:
    cell: UnitCellCoord
    sublattice: Sublattice
    basis_index: int = 0


@dataclass(frozen=True)
class DisorderRealization:
    """Uniform[-W, W] draws keyed by (seed, cell, slot) via counter RNG."""

    kind: DisorderKind
    strength: float
    seed: int

    def draws(self, n: int) -> np.ndarray:
        nslots = 2 if self.kind is DisorderKind.DIAGONAL else 3
        rng = np.random.Generator(np.random.Philox(key=self.seed))
        return rng.uniform(-self.strength, self.strength, size=(n, n, nslots))


@dataclass
class LatticeModel:
    family: Family
    size: int
    boundary: Boundary
    kappa_a: float
    kappa_b: float
    big_j: float
    h_bath: sp.csr_matrix
    positions: np.ndarray
    a_indices: np.ndarray
    b_indices: np.ndarray
    beta: float = 1.0
    t_intra: float | None = None
    t_inter: float | None = None
    basis_per_sublattice: int = 1
    disorder: DisorderRealization | None = None
    descriptor: dict | None = field(default=None, repr=False)

    @property
    def num_sites(self) -> int:
        return self.h_bath.shape[0]

    @property
    def num_a(self) -> int:
        return len(self.a_indices)

    @property
    def num_b(self) -> int:
        return len(self.b_indices)

    def index_of(self, site: SiteRef) -> int:
        p = self.basis_per_sublattice
        if site.basis_index >= p or site.basis_index < 0:
            raise LatticeError(f"basis_index {site.basis_index} invalid for {self.family}")
        if self.family is Family.ZIGZAG_BEARDED:
            raise LatticeError("zigzag-bearded sites are addressed by descriptor id")
        n = self.size
        cell_flat = site.cell.n1 * n + site.cell.n2
        if not (0 <= site.cell.n1 < n and 0 <= site.cell.n2 < n):
            raise LatticeError(f"cell {site.cell} outside {n}x{n} lattice")
        block = 0 if site.sublattice is Sublattice.A else self.num_a
        return block + cell_flat * p + site.basis_index

    def site_of(self, index: int) -> SiteRef:
        if self.family is Family.ZIGZAG_BEARDED:
            raise LatticeError("zigzag-bearded sites are addressed by descriptor id")
        p = self.basis_per_sublattice
        n = self.size
        if index < self.num_a:
            sub, rem = Sublattice.A, index
        else:
            sub, rem = Sublattice.B, index - self.num_a
        cell_flat, basis = divmod(rem, p)
        return SiteRef(UnitCellCoord(*divmod(cell_flat, n)), sub, basis)

    def center_cell(self) -> UnitCellCoord:
        return UnitCellCoord(self.size // 2, self.size // 2)


def _bath_from_bonds(num_sites, bonds, a_indices, kappa_a, kappa_b):
    rows, cols, vals = [], [], []
    is_a = np.zeros(num_sites, dtype=bool)
    is_a[a_indices] = True
    for i, j, t in bonds:
        rows += [i, j]
        cols += [j, i]
        vals += [t, np.conj(t)]
    for i in range(num_sites):
        loss = kappa_a if is_a[i] else kappa_b
        if loss != 0.0:
            rows.append(i)
            cols.append(i)
            vals.append(-0.5j * loss)
    h = sp.coo_matrix((vals, (rows, cols)), shape=(num_sites, num_sites), dtype=complex)
    return h.tocsr()


def build_anisotropic(n: int, beta: float, kappa_a: float = 0.0, kappa_b: float = 0.0,
                      boundary: Boundary = Boundary.PERIODIC, big_j: float = 1.0) -> LatticeModel:
    """Honeycomb bath with intracell bond beta*J and intercell bonds J.

    Each B site at cell n couples to the A sites at cells n, n+v1, n+v2.
    beta = 1 reproduces the isotropic lattice element for element.
    """
    if n < 2:
        raise InvalidSizeError(f"lattice size {n} < 2")
    if beta <= 0:
        raise InvalidParameterError(f"anisotropy beta={beta} must be positive")
    boundary = Boundary(boundary)
    ncells = n * n
    bonds = []
    for n1 in range(n):
        for n2 in range(n):
            b = ncells + n1 * n + n2
            neighbors = ((n1, n2, beta * big_j), (n1 + 1, n2, big_j), (n1, n2 + 1, big_j))
            for m1, m2, t in neighbors:
                if boundary is Boundary.PERIODIC:
                    m1, m2 = m1 % n, m2 % n
                elif not (0 <= m1 < n and 0 <= m2 < n):
                    continue
                bonds.append((m1 * n + m2, b, t))
    cells = np.indices((n, n)).reshape(2, -1).T
    pos_a = cells @ np.vstack([V1, V2])
    positions = np.vstack([pos_a, pos_a + B_OFFSET])
    a_idx = np.arange(ncells)
    family = Family.ISOTROPIC if beta == 1.0 else Family.ANISOTROPIC
    h = _bath_from_bonds(2 * ncells, bonds, a_idx, kappa_a, kappa_b)
    return LatticeModel(family=family, size=n, boundary=boundary, kappa_a=kappa_a,
                        kappa_b=kappa_b, big_j=big_j, h_bath=h, positions=positions,
                        a_indices=a_idx, b_indices=np.arange(ncells, 2 * ncells), beta=beta)


def build_isotropic(n: int, kappa_a: float = 0.0, kappa_b: float = 0.0,
                    boundary: Boundary = Boundary.PERIODIC, big_j: float = 1.0) -> LatticeModel:
    """Uniform-hopping honeycomb bath (anisotropy beta = 1)."""
    return build_anisotropic(n, 1.0, kappa_a, kappa_b, boundary, big_j)


# Kekule ring geometry: six sites per cell on a strong hexagon, basis
# angles chosen so A sites (loss kappa_a) and B sites alternate; weak
# bridges leave each vertex radially toward the facing vertex of the
# adjacent ring.  Ring centers sit on a triangular lattice, columns of
# rings offset by half a cell, and the finished patch is rotated so the
# armchair edges run along x and the zigzag edges along y.
_KEKULE_BASIS = (("a", 0, 30.0), ("b", 0, 90.0), ("a", 1, 150.0),
                 ("b", 1, 210.0), ("a", 2, 270.0), ("b", 2, 330.0))
_RING_COL_PITCH = 3.0 * np.sqrt(3) / 2
_RING_ROW_PITCH = 3.0


def _kekule_index(sub: str, p: int, nx: int, ny: int, big_l: int) -> int:
    base = 0 if sub == "a" else 3 * big_l * big_l
    return base + (nx * big_l + ny) * 3 + p


def build_kekule(big_l: int, t_intra: float, t_inter: float, kappa_a: float = 0.0,
                 kappa_b: float = 0.0, big_j: float = 1.0) -> LatticeModel:
    """L x L Kekule-textured honeycomb with open boundaries.

    Six sites per cell (3 A + 3 B) on a strong hexagon with bond t_intra;
    single t_inter bridges join facing vertices of adjacent hexagons.
    t_inter = t_intra restores the uniform honeycomb patch.  Armchair
    edges run along x, zigzag edges along y.
    """
    if big_l < 2:
        raise InvalidSizeError(f"lattice size {big_l} < 2")
    if t_intra < 0 or t_inter < 0:
        raise InvalidParameterError("hopping amplitudes must be non-negative")
    ncell = big_l * big_l
    bonds = []
    positions = np.zeros((6 * ncell, 2))

    def center(nx, ny):
        return np.array([_RING_COL_PITCH * nx,
                         _RING_ROW_PITCH * ny + (1.5 if nx % 2 else 0.0)])

    by_angle = {ang: (sub, p) for sub, p, ang in _KEKULE_BASIS}
    for nx in range(big_l):
        for ny in range(big_l):
            c = center(nx, ny)
            ring = []
            for sub, p, ang in _KEKULE_BASIS:
                idx = _kekule_index(sub, p, nx, ny, big_l)
                th = np.deg2rad(ang)
                positions[idx] = c + [np.cos(th), np.sin(th)]
                ring.append(idx)
            for i in range(6):
                bonds.append((ring[i], ring[(i + 1) % 6], t_intra))
            # bridges toward N (90), NE (30), SE (330); S/SW/NW added by neighbors
            neighbor_of = {
                90.0: (nx, ny + 1),
                30.0: (nx + 1, ny + 1 if nx % 2 else ny),
                330.0: (nx + 1, ny if nx % 2 else ny - 1),
            }
            for ang, (mx, my) in neighbor_of.items():
                if not (0 <= mx < big_l and 0 <= my < big_l):
                    continue
                sub, p = by_angle[ang]
                osub, op = by_angle[(ang + 180.0) % 360.0]
                bonds.append((_kekule_index(sub, p, nx, ny, big_l),
                              _kekule_index(osub, op, mx, my, big_l), t_inter))

    positions = positions[:, ::-1].copy()  # rotate: armchair along x, zigzag along y
    a_idx = np.arange(3 * ncell)
    h = _bath_from_bonds(6 * ncell, bonds, a_idx, kappa_a, kappa_b)
    return LatticeModel(family=Family.KEKULE, size=big_l, boundary=Boundary.OPEN,
                        kappa_a=kappa_a, kappa_b=kappa_b, big_j=big_j, h_bath=h,
                        positions=positions, a_indices=a_idx,
                        b_indices=np.arange(3 * ncell, 6 * ncell),
                        t_intra=t_intra, t_inter=t_inter, basis_per_sublattice=3)


def build_zigzag_bearded(descriptor: dict, kappa_a: float = 0.0, kappa_b: float = 0.0,
                         big_j: float = 1.0) -> LatticeModel:
    """Finite honeycomb flake from an explicit adjacency descriptor.

    The descriptor lists sites (id, sublattice, position) and undirected
    bonds; all hoppings are uniform J.  The canonical shipped descriptor
    is a hexagonal flake with five zigzag edges and one bearded edge.
    """
    sites = descriptor["sites"]
    raw_bonds = descriptor["bonds"]
    order = sorted(range(len(sites)), key=lambda i: (sites[i]["sublattice"] != "A", sites[i]["id"]))
    old_to_new = {sites[o]["id"]: k for k, o in enumerate(order)}
    positions = np.array([sites[o]["pos"] for o in order], dtype=float)
    subl = [sites[o]["sublattice"] for o in order]
    a_idx = np.array([k for k, s in enumerate(subl) if s == "A"], dtype=int)
    b_idx = np.array([k for k, s in enumerate(subl) if s == "B"], dtype=int)
    bonds = [(old_to_new[i], old_to_new[j], big_j) for i, j in raw_bonds]

    adj = [[] for _ in range(len(sites))]
    for i, j, _ in bonds:
        adj[i].append(j)
        adj[j].append(i)
    seen, stack = {0}, [0]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    if len(seen) != len(sites):
        raise InvalidGeometryError("zigzag-bearded descriptor is disconnected")

    h = _bath_from_bonds(len(sites), bonds, a_idx, kappa_a, kappa_b)
    return LatticeModel(family=Family.ZIGZAG_BEARDED, size=0, boundary=Boundary.OPEN,
                        kappa_a=kappa_a, kappa_b=kappa_b, big_j=big_j, h_bath=h,
                        positions=positions, a_indices=a_idx, b_indices=b_idx,
                        descriptor=descriptor)


def apply_disorder(model: LatticeModel, realization: DisorderRealization) -> LatticeModel:
    """New model with uniform[-W, W] disorder terms added to the bath.

    Off-diagonal draws perturb the three existing A-B bonds of each cell
    (chiral symmetry of the kappa=0 part preserved); diagonal draws add
    on-site energies per sublattice and break it.
    """
    if model.family is not Family.ISOTROPIC:
        raise UnsupportedDisorderError(f"disorder defined for isotropic lattices, got {model.family}")
    n = model.size
    ncells = n * n
    eps = realization.draws(n)
    if realization.strength == 0.0:
        return replace(model, disorder=realization)

    rows, cols, vals = [], [], []
    if realization.kind is DisorderKind.DIAGONAL:
        for n1 in range(n):
            for n2 in range(n):
                a = n1 * n + n2
                rows += [a, ncells + a]
                cols += [a, ncells + a]
                vals += [eps[n1, n2, 0], eps[n1, n2, 1]]
    elif realization.kind is DisorderKind.OFF_DIAGONAL:
        for n1 in range(n):
            for n2 in range(n):
                b = ncells + n1 * n + n2
                neighbors = ((n1, n2), (n1 + 1, n2), (n1, n2 + 1))
                for slot, (m1, m2) in enumerate(neighbors):
                    if model.boundary is Boundary.PERIODIC:
                        m1, m2 = m1 % n, m2 % n
                    elif not (0 <= m1 < n and 0 <= m2 < n):
                        continue
                    a = m1 * n + m2
                    rows += [a, b]
                    cols += [b, a]
                    vals += [eps[n1, n2, slot]] * 2
    else:
        raise UnsupportedDisorderError(f"unknown disorder kind {realization.kind}")

    dh = sp.coo_matrix((vals, (rows, cols)), shape=model.h_bath.shape, dtype=complex)
    return replace(model, h_bath=(model.h_bath + dh.tocsr()).tocsr(), disorder=realization)


# ---------------------------------------------------------------- Bloch side

def structure_factor(k1, k2, beta: float = 1.0):
    """f(k) = beta + exp(-i k1) + exp(-i k2) (k in Bravais components)."""
    return beta + np.exp(-1j * np.asarray(k1)) + np.exp(-1j * np.asarray(k2))


def bloch_kernel(model: LatticeModel, k) -> np.ndarray:
    """2x2 kernel h_k = [[-i ka/2, J f(k)], [J f*(k), -i kb/2]]."""
    f = model.big_j * structure_factor(k[0], k[1], model.beta)
    return np.array([[-0.5j * model.kappa_a, f], [np.conj(f), -0.5j * model.kappa_b]])


def bloch_bands(model: LatticeModel, k):
    """Complex bands -i kappa_+ +- sqrt(J^2 |f|^2 - kappa_-^2), principal sqrt."""
    if model.boundary is not Boundary.PERIODIC:
        raise LatticeError("Bloch bands require periodic boundary conditions")
    if model.family not in (Family.ISOTROPIC, Family.ANISOTROPIC):
        raise LatticeError(f"no two-band Bloch form for {model.family}")
    kp = (model.kappa_a + model.kappa_b) / 4.0
    km = (model.kappa_a - model.kappa_b) / 4.0
    f = structure_factor(k[0], k[1], model.beta)
    eps = np.sqrt((model.big_j ** 2 * np.abs(f) ** 2 - km ** 2).astype(complex))
    return -1j * kp + eps, -1j * kp - eps


def k_grid(n: int) -> np.ndarray:
    """Discrete Bravais momenta 2*pi/N * (-N/2 .. N/2-1)."""
    return 2 * np.pi / n * (np.arange(n) - n // 2)


def bloch_band_multiset(model: LatticeModel) -> np.ndarray:
    """All 2N^2 band eigenvalues over the discrete momentum grid."""
    ks = k_grid(model.size)
    k1, k2 = np.meshgrid(ks, ks, indexing="ij")
    wp, wm = bloch_bands(model, (k1, k2))
    return np.concatenate([wp.ravel(), wm.ravel()])


@dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    at_boundary: bool
    kappa_a: float

    def __str__(self):
        flag = " (boundary)" if self.at_boundary else ""
        return f"{self.regime.value}{flag}"


def dissipation_regime(kappa_a: float, kappa_b: float = 0.0, big_j: float = 1.0,
                       *, tol: float = 1e-12) -> RegimeReport:
    """Weak/moderate/strong binning of single-sublattice loss at 4J and 12J."""
    if kappa_b != 0.0:
        raise LatticeError("regime classification applies to kappa_b = 0")
    x = kappa_a / big_j
    boundary = min(abs(x - 4.0), abs(x - 12.0)) < tol
    if x < 4.0:
        regime = Regime.WEAK
    elif x < 12.0:
        regime = Regime.MODERATE
    else:
        regime = Regime.STRONG
    return RegimeReport(regime=regime, at_boundary=boundary, kappa_a=kappa_a)


@dataclass(frozen=True)
class EpLocus:
    points: np.ndarray          # (n, 2) momenta with |f| J = kappa_-
    n_components: int
    regime: RegimeReport | None
    dirac_points: np.ndarray | None = None


def exceptional_ring_locus(model: LatticeModel, resolution: int = 400,
                           *, tol: float = 1e-10) -> EpLocus:
    """Momentum locus |f(k)| J = kappa_- where the two bands coalesce.

    Grid sign changes of |f| J - kappa_- are refined by bisection along
    grid edges; connected components are counted on the marked grid.
    kappa_- = 0 returns an empty locus with the Dirac points instead.
    """
    km = (model.kappa_a - model.kappa_b) / 4.0
    regime = None
    if model.kappa_b == 0.0:
        regime = dissipation_regime(model.kappa_a, 0.0, model.big_j)
    if km <= 0.0:
        return EpLocus(points=np.empty((0, 2)), n_components=0, regime=regime,
                       dirac_points=np.vstack([DIRAC_K_PLUS, DIRAC_K_MINUS]))

    ks = np.linspace(-np.pi, np.pi, resolution, endpoint=False)
    k1, k2 = np.meshgrid(ks, ks, indexing="ij")
    level = model.big_j * np.abs(structure_factor(k1, k2, model.beta)) - km

    def f2_long(p):
        # |f|^2 in extended precision; the band value square-roots the
        # locus residual, so double precision alone cannot pin the
        # coalescence энергии to 1e-8
        a, b = np.longdouble(p[0]), np.longdouble(p[1])
        return (model.beta ** 2 + 2.0 + 2 * np.cos(a - b)
                + 2 * model.beta * (np.cos(a) + np.cos(b)))

    target = (np.longdouble(km) / model.big_j) ** 2

    def refine(pa, pb):
        pa = pa.astype(np.longdouble)
        pb = pb.astype(np.longdouble)
        fa = f2_long(pa) - target
        for _ in range(90):
            mid = 0.5 * (pa + pb)
            fm = f2_long(mid) - target
            if fm == 0:
                break
            if fa * fm < 0:
                pb = mid
            else:
                pa, fa = mid, fm
        root = (0.5 * (pa + pb)).astype(float)

        def band_res(p):
            # replicate bloch_bands' float64 sequence exactly
            f = structure_factor(p[0], p[1], model.beta)
            return abs(model.big_j ** 2 * np.abs(f) ** 2 - km ** 2)

        # pick the representable point with the smallest residual: the
        # double grid alone leaves |omega + i kappa_a/4| ~ 2e-8
        best, best_res = root, band_res(root)
        step = np.spacing(np.abs(root)) + 1e-18
        for di in range(-14, 15):
            for dj in range(-14, 15):
                cand = root + np.array([di * step[0], dj * step[1]])
                res = band_res(cand)
                if res < best_res:
                    best, best_res = cand, res
        return best

    pts = []
    marked = np.zeros_like(level, dtype=bool)
    for axis in (0, 1):
        sgn = level * np.roll(level, -1, axis=axis)
        idx = np.argwhere(sgn < 0)
        for i, j in idx:
            pa = np.array([k1[i, j], k2[i, j]])
            i2, j2 = (i + 1) % resolution if axis == 0 else i, (j + 1) % resolution if axis == 1 else j
            pb = np.array([k1[i2, j2], k2[i2, j2]])
            if np.any(np.abs(pb - pa) > np.pi):  # wrapped edge; skip, rings stay off the zone seam
                continue
            pts.append(refine(pa, pb))
            marked[i, j] = True

    comps = _count_components(marked)
    points = np.array(pts) if pts else np.empty((0, 2))
    return EpLocus(points=points, n_components=comps, regime=regime)


def _count_components(mask: np.ndarray) -> int:
    n = mask.shape[0]
    labels = -np.ones(mask.shape, dtype=int)
    current = 0
    for i0, j0 in np.argwhere(mask):
        if labels[i0, j0] >= 0:
            continue
        stack = [(i0, j0)]
        labels[i0, j0] = current
        while stack:
            i, j = stack.pop()
            for di in (-1, 0, 1):
                for dj in (-1, 0, 1):
                    i2, j2 = (i + di) % n, (j + dj) % n
                    if mask[i2, j2] and labels[i2, j2] < 0:
                        labels[i2, j2] = current
                        stack.append((i2, j2))
        current += 1
    return current


def canonical_zigzag_bearded_descriptor(side: int = 5) -> dict:
    """Hexagonal zigzag flake with one bearded edge, as a descriptor dict.

    A balanced zigzag hexagon exposing `side` sites per edge gets pendant
    B sites on every exposed A site of its +x edge, so N_B - N_A = side
    and the lattice hosts exactly `side` zero-energy B-sublattice modes.
    """
    radius = 1.5 * side + 0.4
    mask_normals = np.deg2rad([0.0, 60.0, 120.0])
    center = np.array([0.5, np.sqrt(3) / 2])

    def inside(p):
        q = p - center
        return max(abs(q @ np.array([np.cos(t), np.sin(t)])) for t in mask_normals) <= radius + 1e-9

    span = range(-3 * side, 3 * side + 1)
    cells = {}
    for n1 in span:
        for n2 in span:
            base = n1 * V1 + n2 * V2
            if inside(base):
                cells[("A", n1, n2)] = base
            if inside(base + B_OFFSET):
                cells[("B", n1, n2)] = base + B_OFFSET

    def bond_list(site_set):
        out = []
        for (sub, n1, n2) in site_set:
            if sub == "B":
                for d1, d2 in ((0, 0), (1, 0), (0, 1)):
                    if ("A", n1 + d1, n2 + d2) in site_set:
                        out.append(((sub, n1, n2), ("A", n1 + d1, n2 + d2)))
        return out

    degree = {k: 0 for k in cells}
    for i, j in bond_list(cells):
        degree[i] += 1
        degree[j] += 1
    xmax = max(p[0] for p in cells.values())
    for (sub, n1, n2), d in sorted(degree.items()):
        if sub == "A" and d == 2 and cells[(sub, n1, n2)][0] > xmax - 0.8:
            cells[("B", n1, n2)] = cells[("A", n1, n2)] + B_OFFSET

    keys = sorted(cells)
    index = {k: i for i, k in enumerate(keys)}
    sites = [{"id": i, "sublattice": k[0], "cell": [k[1], k[2]],
              "pos": [round(float(cells[k][0]), 9), round(float(cells[k][1]), 9)]}
             for i, k in enumerate(keys)]
    bonds = sorted((min(index[i], index[j]), max(index[i], index[j]))
                   for i, j in bond_list(cells))
    return {"name": f"zigzag hexagon flake side {side}, bearded +x edge",
            "beard_sites": side, "sites": sites, "bonds": [list(b) for b in bonds]}


# ------------------------------------------------------------- file formats

def export_sparse_triplets(model: LatticeModel, path) -> None:
    """Debug dump: one 'row col re[J] im[J]' line per stored element."""
    coo = model.h_bath.tocoo()
    with open(path, "w") as fh:
        fh.write(f"# {model.family.value} nsites={model.num_sites} J={model.big_j}\n")
        fh.write("# row col re[J] im[J]\n")
        order = np.lexsort((coo.col, coo.row))
        for i in order:
            fh.write(f"{coo.row[i]} {coo.col[i]} {coo.data[i].real:.17g} {coo.data[i].imag:.17g}\n")


def load_descriptor_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def model_from_descriptor(cfg: dict) -> LatticeModel:
    """Build a lattice from a parsed descriptor mapping (TOML/JSON lattice block)."""
    family = Family(cfg.get("family", "isotropic"))
    kappa_a = float(cfg.get("kappa_a", 0.0))
    kappa_b = float(cfg.get("kappa_b", 0.0))
    big_j = float(cfg.get("j", 1.0))
    if family in (Family.ISOTROPIC, Family.ANISOTROPIC):
        model = build_anisotropic(int(cfg["n"]), float(cfg.get("beta", 1.0)), kappa_a,
                                  kappa_b, Boundary(cfg.get("boundary", "periodic")), big_j)
    elif family is Family.KEKULE:
        model = build_kekule(int(cfg["l"]), float(cfg["t_intra"]), float(cfg["t_inter"]),
                             kappa_a, kappa_b, big_j)
    else:
        from importlib.resources import files
        desc = cfg.get("descriptor")
        descriptor = load_descriptor_json(desc) if desc else json.loads(
            files("pgqed.data").joinpath("zigzag_bearded.json").read_text())
        model = build_zigzag_bearded(descriptor, kappa_a, kappa_b, big_j)
    dis = cfg.get("disorder")
    if dis:
        realization = DisorderRealization(kind=DisorderKind(dis["kind"]),
                                          strength=float(dis["strength"]),
                                          seed=int(dis["seed"]))
        model = apply_disorder(model, realization)
    return model
