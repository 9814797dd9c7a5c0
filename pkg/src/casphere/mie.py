"""Sphere T-matrices and permittivity models at imaginary frequency.

A homogeneous sphere of radius R and permittivity eps_s sits in a
background eps_B.  For a regular wave of polarization pol and order l
incident on the sphere, the scattered outgoing amplitude is
T_{pol,l} times the incident one; with Riccati functions S_l(x) = x i_l(x),
E_l(x) = x e_l(x) and arguments x_B = n_B xi R, x_s = sqrt(eps_rel) x_B,
eps_rel = eps_s / eps_B:

    T^TE_l = [S_l'(x_B) i_l(x_s) - i_l(x_B) S_l'(x_s)]
           / [e_l(x_B) S_l'(x_s) - E_l'(x_B) i_l(x_s)]

    T^TM_l = [i_l(x_B) S_l'(x_s) - eps_rel S_l'(x_B) i_l(x_s)]
           / [eps_rel E_l'(x_B) i_l(x_s) - e_l(x_B) S_l'(x_s)]

Both vanish identically at eps_rel = 1 and behave like x^{2l+1} for
small x; T^TM_1 ~ -(2/3) x^3 (eps_rel - 1)/(eps_rel + 2) identifies
-(3/2) T^TM_1 / x^3 with the normalized dipole polarizability.

T_l grows like e^{2 x_B} at large argument.  ``scaled=True`` returns
T_l e^{-2 x_B}, computed entirely from scaled Bessel functions so no
intermediate overflows; the unscaled form raises once e^{2 x_B} itself
would overflow.

The T-matrix is diagonal in (pol, l, m) with m-independent entries, in
the complex-m and real-m bases alike.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .basis import BasisSpec, POL_TE, POL_TM
from .specfun import RadialKind, riccati_ik

_EXP_LIMIT = 700.0


# -------------------------------------------------------- permittivities

class PermittivityModel:
    """Interface: eps_imag_freq(xi) -> eps(i xi), real and >= 1 for
    physical materials (vacuum = 1).  xi must be in the same frequency
    units as the model parameters."""

    def eps_imag_freq(self, xi):
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantPermittivity(PermittivityModel):
    value: float

    def __post_init__(self):
        if self.value <= 0.0:
            raise ValueError("permittivity must be positive")

    def eps_imag_freq(self, xi):
        return self.value


@dataclass(frozen=True)
class DrudeLorentzPermittivity(PermittivityModel):
    """eps(i xi) = 1 + sum_j A_j / (w_j^2 + xi^2 + g_j xi).

    Oscillators are (amplitude, resonance, damping) triples; a Drude
    metal is the resonance = 0 case.  All three share the frequency
    unit of xi; amplitudes carry that unit squared.
    """
    oscillators: tuple = field(default_factory=tuple)

    def eps_imag_freq(self, xi):
        out = 1.0
        for amp, res, gam in self.oscillators:
            out += amp / (res * res + xi * xi + gam * xi)
        return out


@dataclass(frozen=True)
class TabulatedPermittivity(PermittivityModel):
    """Log-linear interpolation of eps(i xi) samples; clamped outside."""
    xi_grid: tuple
    eps_values: tuple

    def __post_init__(self):
        g = np.asarray(self.xi_grid, dtype=float)
        v = np.asarray(self.eps_values, dtype=float)
        if g.ndim != 1 or g.shape != v.shape or g.size < 2:
            raise ValueError("need matching 1-d grids with >= 2 samples")
        if np.any(g <= 0.0) or np.any(np.diff(g) <= 0.0):
            raise ValueError("xi grid must be positive and increasing")
        if np.any(v <= 0.0):
            raise ValueError("eps samples must be positive")

    def eps_imag_freq(self, xi):
        g = np.log(np.asarray(self.xi_grid, dtype=float))
        v = np.asarray(self.eps_values, dtype=float)
        xi = max(float(xi), math.exp(g[0]))
        return float(np.interp(math.log(xi), g, v))


# ------------------------------------------------------- Mie coefficients

def _riccati_pair(l, x):
    """((i_l, S_l'), (e_l, E_l')) scaled by e^{-x} and e^{+x}."""
    zi, spi = riccati_ik(RadialKind.REGULAR, l, x, scaled=True)
    zk, spk = riccati_ik(RadialKind.DECAYING, l, x, scaled=True)
    sgn = (-1.0) ** l * (2.0 / math.pi)
    return (float(zi), float(spi)), (sgn * float(zk), sgn * float(spk))


def mie_coefficient(pol, l, x, eps_rel, scaled=False):
    """T_{pol,l} for background argument x = n_B xi R > 0.

    With scaled=True returns T e^{-2x}, finite for any x.
    """
    if x <= 0.0:
        raise ValueError("x = n_B xi R must be positive")
    if eps_rel <= 0.0:
        raise ValueError("relative permittivity must be positive")
    if eps_rel == 1.0:
        return 0.0
    xs = math.sqrt(eps_rel) * x
    (ib, spb), (eb, epb) = _riccati_pair(l, x)
    (is_, sps), _ = _riccati_pair(l, xs)
    # common scale e^{x+xs} in numerators, e^{-x+xs} in denominators
    if pol == POL_TE:
        num = spb * is_ - ib * sps
        den = eb * sps - epb * is_
    elif pol == POL_TM:
        num = ib * sps - eps_rel * spb * is_
        den = eps_rel * epb * is_ - eb * sps
    else:
        raise ValueError("pol must be 0 (TE) or 1 (TM)")
    t_scaled = num / den
    if scaled:
        return t_scaled
    if 2.0 * x > _EXP_LIMIT:
        raise OverflowError(
            f"unscaled T_l overflows for 2 n_B xi R > {_EXP_LIMIT}; "
            "use scaled=True")
    return t_scaled * math.exp(2.0 * x)


def mie_diag(basis: BasisSpec, x, eps_rel, scaled=False):
    """Diagonal of the T-matrix over the basis, as a vector of length D."""
    out = np.empty(basis.size)
    for pol in (POL_TE, POL_TM):
        for l in range(1, basis.l_max + 1):
            t = mie_coefficient(pol, l, x, eps_rel, scaled=scaled)
            i0 = basis.index(pol, l, -l)
            out[i0:i0 + 2 * l + 1] = t
    return out
