"""Second-order phase-field models for isotropic and anisotropic brittle fracture.

Scalar (anti-plane shear) elasticity coupled to a phase field through one
of four surface-energy regularizations: the classical AT-1/AT-2 pair and
the two-fold / four-fold anisotropic quadratic and quartic families built
from toughness-induced norms.  Subpackages: geometry and meshing
(:mod:`fraktur.mesh`), toughness profiles and induced norms
(:mod:`fraktur.anisotropy`), material laws and 1D closed forms
(:mod:`fraktur.materials`), finite-element assembly
(:mod:`fraktur.assembly`), the staggered/trust-region solver
(:mod:`fraktur.solver`), the existence/uniqueness analysis
(:mod:`fraktur.wellposedness`), verification suites
(:mod:`fraktur.verification`) and the command line (:mod:`fraktur.cli`).
"""

from .anisotropy import AnisotropyParams
from .materials import DegradationSpec, ModelFamily, ModelSpec
from .mesh import BoundaryTag, DomainSpec, TriMesh, build_slit_domain
from .solver import LoadProgram, StaggeredParams, TrustRegionParams, run_load_program

__version__ = "0.1.0"

__all__ = [
    "AnisotropyParams",
    "DegradationSpec",
    "ModelFamily",
    "ModelSpec",
    "BoundaryTag",
    "DomainSpec",
    "TriMesh",
    "build_slit_domain",
    "LoadProgram",
    "StaggeredParams",
    "TrustRegionParams",
    "run_load_program",
    "__version__",
]
