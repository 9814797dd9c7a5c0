"""Vector spherical wave bookkeeping: basis, rotations, translations.

One import surface for the wave layer, implemented across three files:

* ``basis``: (pol, l, m) enumeration, the real-m combination matrix.
* ``rotation``: Wigner d/D matrices, block rotations, axis Euler angles.
* ``translation``: the outgoing->regular and regular->regular
  translation operators, their analytic gradients, and the tracked
  exponential prefactors that keep everything in exp-scaled form.
"""

from .basis import (POL_TE, POL_TM, BasisSpec, basis_enumerate,
                    real_combination_matrix, to_real_basis)
from .rotation import (axis_euler_angles, basis_rotation, rotate_block,
                       wigner_bigd_matrix, wigner_d_matrix)
from .translation import (KIND_OUTGOING, KIND_REGULAR, TranslationBlock,
                          axial_translation, translation_gradient,
                          translation_matrix, translation_matrix_direct)

__all__ = [
    "POL_TE", "POL_TM", "BasisSpec", "basis_enumerate",
    "real_combination_matrix", "to_real_basis",
    "axis_euler_angles", "basis_rotation", "rotate_block",
    "wigner_bigd_matrix", "wigner_d_matrix",
    "KIND_OUTGOING", "KIND_REGULAR", "TranslationBlock",
    "axial_translation", "translation_gradient", "translation_matrix",
    "translation_matrix_direct",
]
