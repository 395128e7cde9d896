"""Dormant opers on the marked projective line over F_p.

Subpackages and modules:

* :mod:`doper.fpcalc` - exponent multisets, radii and the star duality
* :mod:`doper.funcfield` - polynomials, rational functions and matrices over F_p(x)
* :mod:`doper.operengine` - log connections, p-curvature, opers and their dualities
* :mod:`doper.fusion` - three-point tables, fusion rings, genus-g counts
* :mod:`doper.verlinde` - exact cyclotomic evaluation of the closed-form count
"""

from __future__ import annotations

from .errors import DomainError
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "DomainError", "__version__"]
