"""Explicit generators of K3 (modulo torsion) for imaginary quadratic fields.

Pipeline: exact field arithmetic -> S-units and the twisted wedge square ->
Bloch-group relations and certificates -> Voronoi tessellations of
hyperbolic 3-space -> regulator and zeta identities.
"""

from .dilog import PrecisionCfg, bloch_wigner, dsig
from .field import FieldCtx, KElem, make_field
from .relations import FormalSum, five_term, six_orbit, two_term

__all__ = [
    "FieldCtx",
    "FormalSum",
    "KElem",
    "PrecisionCfg",
    "bloch_wigner",
    "dsig",
    "five_term",
    "make_field",
    "six_orbit",
    "two_term",
]
