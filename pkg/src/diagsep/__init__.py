"""Finite-resolution workbench for diagonal separation experiments.

Subpackages by concern:

* ``symbolic``   -- the three Cantor systems, exact language oracle, points;
* ``coverage``   -- orbit and product-orbit density statistics;
* ``quotient``   -- cylinder, mapping-torus quotient, identification nets;
* ``separation`` -- tube decomposition, connecting routes, audits;
* ``productnet`` -- the square of a net: components, bracket, probes;
* ``arclike``    -- the sin(1/x) curve side: fibered map, obstruction, demo;
* ``kernels``    -- jit/numpy twin implementations of the hot loops;
* ``cli``        -- the ``diagsep`` command.
"""

__version__ = "0.1.0"

from .coverage import CoverageReport, orbit_coverage, product_orbit_coverage
from .quotient import CylPoint, NetGraph, ProductPrePoint, TorusPoint, build_net, canonicalize, rho, sigma
from .separation import RegionLabel, SeparationParams, classify, route_to_anchor
from .symbolic import CantorPoint, SubshiftSystem, cantor_metric, chacon, fullshift2, language, odometer2, step, step_inverse

__all__ = [
    "CantorPoint",
    "CoverageReport",
    "CylPoint",
    "NetGraph",
    "ProductPrePoint",
    "RegionLabel",
    "SeparationParams",
    "SubshiftSystem",
    "TorusPoint",
    "build_net",
    "canonicalize",
    "cantor_metric",
    "chacon",
    "classify",
    "fullshift2",
    "language",
    "odometer2",
    "orbit_coverage",
    "product_orbit_coverage",
    "rho",
    "route_to_anchor",
    "sigma",
    "step",
    "step_inverse",
    "__version__",
]
