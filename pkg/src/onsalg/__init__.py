"""Exact-arithmetic verification of a boundary current algebra.

The layers, bottom up: `exactalg` (rational coefficients, sparse Laurent
polynomials, rational functions), `tensormat` (tensor-leg matrices, the
classical r-matrix and boundary matrices, the unreduced identity checks),
`kacmoody` (the mode Lie algebra and its order-two maps), `currents`
(truncated matrix series, the double-row series and their exchange
relations), `onsager` (the three abstract subalgebra families), and
`envelope` (normal-ordered products and commuting charges).  `cli` wires
the checks into named suites; the `verify` entry point runs them.
"""

from .report import CheckReport
from .exactalg import LaurentPoly, RatFun, Variable, parameter, rat, spectral
from .kacmoody import C, E, F, H, LieElt, bracket
from .onsager import OnsElt, abstract_bracket, ons

__all__ = [
    "CheckReport",
    "LaurentPoly",
    "RatFun",
    "Variable",
    "parameter",
    "rat",
    "spectral",
    "C",
    "E",
    "F",
    "H",
    "LieElt",
    "bracket",
    "OnsElt",
    "abstract_bracket",
    "ons",
]

__version__ = "0.1.0"
