"""Quantum emitters in dissipative photonic graphene.

Lattice builders, closed-form self-energies with five-sheet analytic
continuation, exact sparse propagation, resolvent contour machinery and
the special bound states behind decoherence-free emitter interactions.
"""

__version__ = "0.1.0"

from .lattice import (Boundary, DisorderKind, DisorderRealization, Family,
                      LatticeModel, SiteRef, Sublattice, UnitCellCoord,
                      apply_disorder, bloch_bands, build_anisotropic,
                      build_isotropic, build_kekule, build_zigzag_bearded,
                      dissipation_regime, exceptional_ring_locus)
from .propagator import (Emitter, QedSystem, assemble, bath_map,
                         density_account, emitter_population, evolve,
                         two_emitter_amplitudes)
from .resolvent import (ContourCalculator, branch_points, bcd_channels,
                        long_time_asymptote, two_emitter_dark_only,
                        two_emitter_long_time)
from .selfenergy import MarkovianResult, SelfEnergyEvaluator
from .specfun import (EllipticParam, Sheet, classify_sheet_region, continued_k,
                      elliptic_k, elliptic_k_quadrature, k_parameter)
from .boundstates import (BoundState, LatticeSum, StateClass, dark_state,
                          extract_corner_state, extract_edge_state,
                          lattice_sum_G, max_transfer, overlap_R0,
                          qls_wavefunction, verify_vds)
