"""Rotation matrices on the spherical-wave basis.

Convention: for the active rotation R = Rz(alpha) Ry(beta) Rz(gamma) of
fields, the rotated harmonic expands as

    Y_lm(R^-1 x^) = sum_{m'} D^l_{m'm}(alpha, beta, gamma) Y_{lm'}(x^)

with D^l_{m'm} = exp(-i m' alpha) d^l_{m'm}(beta) exp(-i m gamma).
Vector waves M_lm, N_lm transform with the same D (the component
rotation is absorbed by their rotation-equivariant construction), so a
single block-diagonal matrix rotates the whole basis and commutes with
any sphere T-matrix.

The d-matrix uses the factorial sum formula; precision degrades slowly
with l from alternating-term cancellation, which is negligible for the
l range admitted by ``specfun.L_HARD_CAP``.
"""

import math
from functools import lru_cache

import numpy as np

from .basis import BasisSpec, to_real_basis


def _lg(n):
    return math.lgamma(n + 1.0)


def wigner_d_matrix(l, beta):
    """Real matrix d^l_{m'm}(beta), indexed [m'+l, m+l]."""
    dim = 2 * l + 1
    out = np.zeros((dim, dim))
    c = math.cos(0.5 * beta)
    s = math.sin(0.5 * beta)
    for mp in range(-l, l + 1):
        for m in range(-l, l + 1):
            pref = 0.5 * (_lg(l + mp) + _lg(l - mp) + _lg(l + m) + _lg(l - m))
            k_lo = max(0, m - mp)
            k_hi = min(l + m, l - mp)
            tot = 0.0
            for k in range(k_lo, k_hi + 1):
                a = 2 * l + m - mp - 2 * k
                b = mp - m + 2 * k
                ln_den = _lg(l + m - k) + _lg(k) + _lg(mp - m + k) + _lg(l - mp - k)
                sign = -1.0 if (mp - m + k) % 2 else 1.0
                tot += sign * math.exp(pref - ln_den) * (c ** a) * (s ** b)
            out[mp + l, m + l] = tot
    return out


def wigner_bigd_matrix(l, alpha, beta, gamma):
    """Complex matrix D^l_{m'm}(alpha, beta, gamma), indexed [m'+l, m+l]."""
    d = wigner_d_matrix(l, beta)
    ms = np.arange(-l, l + 1)
    return np.exp(-1j * alpha * ms)[:, None] * d * np.exp(-1j * gamma * ms)[None, :]


@lru_cache(maxsize=512)
def _scalar_rotation_cached(l_max, alpha, beta, gamma):
    ds = l_max * (l_max + 2)
    out = np.zeros((ds, ds), dtype=complex)
    for l in range(1, l_max + 1):
        base = l * l - 1
        out[base:base + 2 * l + 1, base:base + 2 * l + 1] = \
            wigner_bigd_matrix(l, alpha, beta, gamma)
    return out


def scalar_rotation(l_max, alpha, beta, gamma):
    """Block-diagonal rotation over the (l, m) labels of one polarization."""
    return _scalar_rotation_cached(int(l_max), float(alpha), float(beta),
                                   float(gamma)).copy()


def basis_rotation(basis: BasisSpec, alpha, beta, gamma):
    """Rotation matrix on the full basis (identical block per polarization).

    Coefficients of a rotated field are c_rot = Dmat @ c.
    """
    blk = _scalar_rotation_cached(basis.l_max, float(alpha), float(beta),
                                  float(gamma))
    ds = basis.scalar_size
    out = np.zeros((2 * ds, 2 * ds), dtype=complex)
    out[:ds, :ds] = blk
    out[ds:, ds:] = blk
    return out


def rotate_block(basis: BasisSpec, alpha, beta, gamma):
    """Real-m basis rotation matrix (orthogonal, D x D real)."""
    return to_real_basis(basis_rotation(basis, alpha, beta, gamma), basis.l_max)


def axis_euler_angles(displacement):
    """Euler angles (alpha, beta) with R(alpha, beta, 0) z^ = d^.

    Used to reduce a general translation to the axial one:
    A(d) = Dmat(alpha, beta, 0) A(|d| z^) Dmat(alpha, beta, 0)^dagger.
    """
    d = np.asarray(displacement, dtype=float)
    r = float(np.linalg.norm(d))
    if r == 0.0:
        raise ValueError("zero displacement has no direction")
    beta = math.acos(max(-1.0, min(1.0, d[2] / r)))
    alpha = math.atan2(d[1], d[0]) if (abs(d[0]) > 0 or abs(d[1]) > 0) else 0.0
    return alpha, beta
