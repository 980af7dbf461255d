"""Exact-arithmetic workbench for Hall algebras of quivers with automorphism.

Builds the folded representation theory of a quiver with an admissible
automorphism over a finite field (equivalently, modules over a
finite-dimensional hereditary basic algebra), entirely by finite
enumeration: orbit tables, submodule and extension counts, the Hall
bialgebra over Q[v]/(v^2 - q) with v = -sqrt(q), and the invariant
function calculus, together with exact verification suites for Green's
formula, the bialgebra property, Riedtmann-Peng, the rescaling
compatibility, and the quantum Serre relations.
"""

from hallq.algebra import HallAlgebra, HallCoeff, HallElement, TensorElement
from hallq.checks import CHECKS, Workbench
from hallq.functions import FunctionSpace, InvFunction, TensorFunction
from hallq.gf import FieldSpec, gf_init
from hallq.hall import HallData
from hallq.quiver import (
    OrbitData,
    QuiverWithAut,
    euler_form,
    symmetric_form,
    validate,
)
from hallq.repspace import Bounds, GroupElem, ModuleClass, OrbitTable, Point, Space

__all__ = [
    "Bounds",
    "CHECKS",
    "FieldSpec",
    "FunctionSpace",
    "GroupElem",
    "HallAlgebra",
    "HallCoeff",
    "HallData",
    "HallElement",
    "InvFunction",
    "ModuleClass",
    "OrbitData",
    "OrbitTable",
    "Point",
    "QuiverWithAut",
    "Space",
    "TensorElement",
    "TensorFunction",
    "Workbench",
    "euler_form",
    "gf_init",
    "symmetric_form",
    "validate",
]

__version__ = "0.1.0"
