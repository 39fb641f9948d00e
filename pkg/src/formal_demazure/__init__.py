"""Formal affine Demazure and Hecke algebras of Kac-Moody root data, computed exactly."""
from .coefficients import Coefficient, CoefficientRing
from .duals import DualElement, billey, dual_from_basis, dual_product, structure_constants
from .fga import FormalGroupAlgebra, FormalGroupLaw, Series
from .graded import NilHecke, dual_filtration_degree, eta, filtration_degree, phi
from .hecke import HeckeAlgebra
from .localized import LocalizedElement
from .rootdata import OutOfSlice, RootDatum, WeylSlice, build_root_datum
from .rootpoly import RootPolyContext, evaluate, root_polynomial
from .twisted import TwistedAlgebra, TwistedElement

__all__ = [
    "Coefficient", "CoefficientRing", "DualElement", "billey", "dual_from_basis", "dual_product",
    "structure_constants", "FormalGroupAlgebra", "FormalGroupLaw", "Series", "NilHecke",
    "dual_filtration_degree", "eta", "filtration_degree", "phi", "HeckeAlgebra",
    "LocalizedElement", "OutOfSlice", "RootDatum", "WeylSlice", "build_root_datum",
    "RootPolyContext", "evaluate", "root_polynomial", "TwistedAlgebra", "TwistedElement",
]
