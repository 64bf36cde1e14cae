"""Exact arithmetic for the small quasi-quantum group at an odd root of unity.

Submodules:

* ``cyclo``      arithmetic in Q(zeta) with zeta a primitive n^2-th root of unity
* ``hmodel``     the algebra in its PBW basis, idempotents and the associator
* ``repcore``    module constructors, tensor products, JSON import/export
* ``homalg``     Hom spaces, witness isomorphisms, socles, covers, syzygies
* ``rules``      closed-form tensor decompositions as label multisets
* ``greenring``  normal forms in the Green ring and its stable quotient
* ``verify``     the check-suite runner; ``cli`` is the command-line front end
"""

from .cyclo import CycloContext, CycloNum, make_context

__version__ = "0.1.0"

__all__ = ["CycloContext", "CycloNum", "make_context", "__version__"]
