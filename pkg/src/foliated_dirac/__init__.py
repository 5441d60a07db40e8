"""Numerical reconstruction of space(time) Dirac operators from foliation data.

The package builds hypersurface Dirac families on flat tori, assembles the
doubled-space product operators (Riemannian and Lorentzian), constructs the
intrinsic space(time) Dirac operator along a fully independent code path,
and verifies the algebraic and spectral identities tying the two together.
"""

from .clifford import (LORENTZIAN, RIEMANNIAN, CliffordRep, Signature, build_even_rep,
                       build_odd_rep, check_relations, tilde_rep)
from .lattice import (LapseFamily, MetricFamily, SpatialGrid, algebra_sample,
                      hypersurface_dirac, lapse_matrix, mean_curvature, volume_function)
from .scenario import Scenario, load_scenario
from .family import TripleFamily, check_family_axioms, conjugated_family, from_scenario
from .assembler import (AssembledOperator, TimeGrid, assemble_lorentzian, assemble_riemannian,
                        assemble_trivial, spectrum)
from .oracle import SpacetimeGrid, extrinsic_curvature, flat_spectrum, intrinsic_dirac
from .verify import lorentz_type_axioms, run_suite

__version__ = "0.1.0"
