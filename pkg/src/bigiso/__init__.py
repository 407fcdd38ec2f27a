"""Exact computer algebra for isotropic subbundles of TM (+) T*M.

Rational-coefficient linear algebra, symbolic Cartan calculus, Courant
bracket integrability certificates, canonical local frames, transport under
linear maps, and structure reduction through submanifolds and foliations.
"""

from .calculus import (
    BigSection,
    Chart,
    PolyBivector,
    PolyOneForm,
    PolyThreeForm,
    PolyTrivector,
    PolyTwoForm,
    PolyVectorField,
    courant_bracket,
)
from .linalg import Matrix, Subspace
from .pointwise import (
    BigVector,
    CharacteristicTriple,
    IsotropicData,
    characteristic_triple,
    dirac_extension,
    form_omega,
    is_isotropic,
    orthogonal_g,
    pairing_g,
    reconstruct,
)
from .scalars import Polynomial, RationalFunction
from .structures import (
    BigIsotropicStructure,
    check_integrability,
    check_module_property,
    foliation_pair,
    graph_P,
    graph_theta,
    tangent_lift,
)
from .transport import LinearMap, pullback_subspace, pushforward_subspace

__version__ = "0.1.0"

__all__ = [
    "BigIsotropicStructure",
    "BigSection",
    "BigVector",
    "CharacteristicTriple",
    "Chart",
    "IsotropicData",
    "LinearMap",
    "Matrix",
    "PolyBivector",
    "PolyOneForm",
    "PolyThreeForm",
    "PolyTrivector",
    "PolyTwoForm",
    "PolyVectorField",
    "Polynomial",
    "RationalFunction",
    "Subspace",
    "characteristic_triple",
    "check_integrability",
    "check_module_property",
    "courant_bracket",
    "dirac_extension",
    "foliation_pair",
    "form_omega",
    "graph_P",
    "graph_theta",
    "is_isotropic",
    "orthogonal_g",
    "pairing_g",
    "pullback_subspace",
    "pushforward_subspace",
    "reconstruct",
    "tangent_lift",
]
