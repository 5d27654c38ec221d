"""Filtered A-infinity algebras F_p and mapping-cone cdgas on invariant-form models.

All arithmetic is exact over the rationals.  The main entry points:

* :mod:`fpcone.exterior`: forms, models, the differential.
* :mod:`fpcone.lefschetz`: L, Lambda, H, primitive decomposition, ``*_r``, ``Pi^p``.
* :mod:`fpcone.filtered`: the A-infinity algebra F_p and its Stasheff suite.
* :mod:`fpcone.cone`: the cone cdga, quotient, pullback and gauge maps.
* :mod:`fpcone.equivalence`: the maps f, g, G, g2 and their identities.
* :mod:`fpcone.homology`: cohomology, Gysin check, pairing, potential.
* :mod:`fpcone.models` and :mod:`fpcone.cli`: model files and the command line.
"""
from .exterior import Form, LieModel, d, e, integrate, make_model, validate, wedge
from .filtered import BARRED, PLAIN, FilteredElement, filtered_element, fp_algebra, m1, m2, m3, stasheff_check
from .cone import ConeElement, cone_d, cone_element, cone_m2, theta
from .equivalence import ainfty_map_check, map_f, map_g, homotopy_G, g2, sdr_check
from .homology import (cohomology, cone_complex, cyclic_check, derham_complex, filtered_complex, gysin_check,
                       pairing, pairing_matrix, potential_phi)
from .lefschetz import lefschetz, sl2_check
from .models import builtin_models, emit_model, load_model, parse_model
from .report import IdentityReport

__version__ = "0.1.0"
