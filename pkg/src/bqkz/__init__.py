"""Exact-arithmetic kernel for the bispectral quantum KZ equations.

Modules, in dependency order: :mod:`scalars`, :mod:`rootdata`,
:mod:`affweyl`, :mod:`hecke`, :mod:`prinser`, :mod:`cocycle`,
:mod:`series`, :mod:`solver`, :mod:`macdonald`, :mod:`numeric`.
:mod:`suites` and :mod:`cli` drive the verification pipeline.
"""

from .affweyl import AffElem, AffineWeylGroup
from .cocycle import Cocycle
from .hecke import HeckeAlgebra
from .macdonald import MacdonaldEngine
from .prinser import PrincipalSeries
from .rootdata import RootSystem
from .scalars import BqkzError, ConfigError, ParameterField, default_qbase
from .series import SeriesExpander
from .solver import PsiSolution, PsiSolver

__version__ = "0.1.0"

__all__ = [
    "AffElem", "AffineWeylGroup", "BqkzError", "Cocycle", "ConfigError", "HeckeAlgebra", "MacdonaldEngine",
    "ParameterField", "PrincipalSeries", "PsiSolution", "PsiSolver", "RootSystem", "SeriesExpander",
    "default_qbase",
]
