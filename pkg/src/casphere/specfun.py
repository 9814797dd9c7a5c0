"""Special functions used by the scattering machinery.

Bessel-family evaluations wrap scipy.special where scipy already
implements the stable recurrence choices; this module pins the
conventions, adds exponentially scaled variants that stay finite at
large argument, enforces the order hard cap, and provides
exact-arithmetic Wigner 3j / Gaunt coefficients.

Conventions:
    i_l(x) = sqrt(pi/(2x)) I_{l+1/2}(x)     regular modified
    k_l(x) = sqrt(pi/(2x)) K_{l+1/2}(x)     decaying modified,
                                            k_0(x) = (pi/2) e^{-x}/x
    scaled variants: i_l(x) e^{-x}, k_l(x) e^{+x}
    Wronskian: i_l(x) k_l'(x) - i_l'(x) k_l(x) = -pi/(2 x^2)

Associated Legendre functions are fully normalized including the
Condon-Shortley phase, so Y_lm = assoc_legendre(l, m, cos theta) e^{i m phi}.
"""

import math
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import special as _sp

# Orders above this are refused: double precision recurrences and the
# factorial-based couplings degrade, and the physics here never needs them.
L_HARD_CAP = 60


class RadialKind(Enum):
    """Which modified spherical Bessel solution: regular i_l or decaying k_l."""
    REGULAR = "i"
    DECAYING = "k"


def _check_l(l):
    l = int(l)
    if l < 0 or l > L_HARD_CAP:
        raise ValueError(f"order l={l} outside [0, {L_HARD_CAP}] (L_HARD_CAP)")
    return l


def _dfact(n):
    """Double factorial n!! for odd n >= -1, as float."""
    out = 1
    for k in range(n, 1, -2):
        out *= k
    return float(out)


# ----------------------------------------------------------------------
# real-axis spherical Bessel / Hankel
# ----------------------------------------------------------------------

def _check_x_positive(x):
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x <= 0.0):
        raise ValueError("argument x must be finite and positive")
    return x


def sph_bessel_j(l, x, derivative=False):
    """Spherical Bessel function j_l(x) on the real axis, x > 0."""
    l = _check_l(l)
    return _sp.spherical_jn(l, _check_x_positive(x), derivative=derivative)


def sph_hankel_plus(l, x, derivative=False):
    """Outgoing spherical Hankel function h_l^+(x) = j_l(x) + i y_l(x), x > 0."""
    l = _check_l(l)
    x = _check_x_positive(x)
    return (_sp.spherical_jn(l, x, derivative=derivative)
            + 1j * _sp.spherical_yn(l, x, derivative=derivative))


# ----------------------------------------------------------------------
# imaginary-axis (modified) spherical Bessel
# ----------------------------------------------------------------------

_X_OVERFLOW = 700.0   # exp(x) overflows just above this


def mod_sph_bessel(kind, l, x, scaled=False):
    """Modified spherical Bessel function i_l(x) or k_l(x), x >= 0.

    Parameters
    ----------
    kind : RadialKind or {"i", "k"}
    l : int
    x : float or array
    scaled : bool
        If True return i_l(x) e^{-x} (regular) or k_l(x) e^{+x}
        (decaying); these stay representable at large x.  The unscaled
        regular kind raises instead of overflowing.

    The decaying kind uses the exact terminating sum
    k_l(x) e^{x} = (pi/2x) sum_{k=0..l} (l+k)! / (k! (l-k)! (2x)^k),
    whose terms are all positive (no cancellation at any x).
    """
    kind = RadialKind(kind)
    l = _check_l(l)
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x).astype(float)
    if np.any(x < 0):
        raise ValueError("mod_sph_bessel requires x >= 0")
    if kind is RadialKind.REGULAR:
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.sqrt(np.pi / (2.0 * x)) * _sp.ive(l + 0.5, x)
        small = x < 1e-5
        if np.any(small):
            xs = np.where(small, x, 1.0)
            ser = (xs**l / _dfact(2 * l + 1)
                   * (1.0 + xs * xs / (2.0 * (2 * l + 3))) * np.exp(-xs))
            out = np.where(small, ser, out)
        if not scaled:
            if np.any(x > _X_OVERFLOW):
                raise OverflowError(
                    f"unscaled i_l overflows for x > {_X_OVERFLOW}; use scaled=True")
            out = out * np.exp(x)
    else:
        with np.errstate(divide="ignore"):
            acc = np.ones_like(x)
            term = np.ones_like(x)
            for k in range(1, l + 1):
                term = term * ((l + k) * (l - k + 1) / (2.0 * k)) / x
                acc = acc + term
            out = (np.pi / 2.0) * acc / x
        if not scaled:
            out = out * np.exp(-x)
    if scalar:
        return float(out[0])
    return out


def mod_sph_bessel_dx(kind, l, x, scaled=False):
    """d/dx of i_l or k_l; with scaled=True, (i_l)' e^{-x} or (k_l)' e^{+x}.

    Uses i_l' = i_{l-1} - (l+1)/x i_l and k_l' = -k_{l-1} - (l+1)/x k_l
    (with i_{-1}(x) = cosh(x)/x and k_{-1} = k_0).
    """
    kind = RadialKind(kind)
    l = _check_l(l)
    x = np.asarray(x, dtype=float)
    if kind is RadialKind.REGULAR:
        if l == 0:
            return mod_sph_bessel(kind, 1, x, scaled=scaled)
        lower = mod_sph_bessel(kind, l - 1, x, scaled=scaled)
        here = mod_sph_bessel(kind, l, x, scaled=scaled)
        return lower - (l + 1) / x * here
    else:
        lower = mod_sph_bessel(kind, max(l - 1, 0), x, scaled=scaled)
        here = mod_sph_bessel(kind, l, x, scaled=scaled)
        return -lower - (l + 1) / x * here


def riccati_ik(kind, l, x, scaled=False):
    """Value z_l and Riccati derivative S_l'(x) = (x z_l(x))' as a pair."""
    z = mod_sph_bessel(kind, l, x, scaled=scaled)
    dz = mod_sph_bessel_dx(kind, l, x, scaled=scaled)
    return z, z + x * dz


# ----------------------------------------------------------------------
# normalized associated Legendre
# ----------------------------------------------------------------------

def assoc_legendre(l, m, u):
    """Fully normalized associated Legendre P~_lm(u), CS phase included.

    Y_lm(theta, phi) = assoc_legendre(l, m, cos theta) * exp(i m phi).
    Example: assoc_legendre(1, 0, u) = sqrt(3/4pi) u.
    """
    l = _check_l(l)
    m = int(m)
    if abs(m) > l:
        raise ValueError(f"|m|={abs(m)} exceeds l={l}")
    u = np.asarray(u, dtype=float)
    scalar = u.ndim == 0
    u = np.atleast_1d(u).astype(float)
    if np.any(np.abs(u) > 1 + 1e-12):
        raise ValueError("assoc_legendre requires |u| <= 1")
    sign = 1.0
    if m < 0:
        sign = (-1.0) ** (-m)
        m = -m
    s = np.sqrt(np.clip(1.0 - u * u, 0.0, None))
    # sectoral seed P~_mm, then upward recurrence in l
    p0 = np.full_like(u, 1.0 / math.sqrt(4.0 * math.pi))
    for k in range(1, m + 1):
        p0 = -math.sqrt((2 * k + 1) / (2.0 * k)) * s * p0
    if l > m:
        p1 = math.sqrt(2 * m + 3.0) * u * p0
        for ll in range(m + 2, l + 1):
            a = math.sqrt((4.0 * ll * ll - 1.0) / (ll * ll - m * m))
            b = math.sqrt(((ll - 1.0) ** 2 - m * m) / (4.0 * (ll - 1.0) ** 2 - 1.0))
            p0, p1 = p1, a * (u * p1 - b * p0)
        p0 = p1
    out = sign * p0
    if scalar:
        return float(out[0])
    return out


def assoc_legendre_dtheta(l, m, u):
    """d/dtheta of P~_lm(cos theta), via the exact m-ladder identity."""
    l = _check_l(l)
    m = int(m)
    out = 0.0
    if abs(m + 1) <= l:
        out = 0.5 * math.sqrt((l - m) * (l + m + 1.0)) * assoc_legendre(l, m + 1, u)
    if abs(m - 1) <= l:
        out = out - 0.5 * math.sqrt((l + m) * (l - m + 1.0)) * assoc_legendre(l, m - 1, u)
    return out


def sph_harm(l, m, theta, phi):
    """Spherical harmonic in this package's convention."""
    theta = np.asarray(theta, dtype=float)
    return assoc_legendre(l, m, np.cos(theta)) * np.exp(1j * m * np.asarray(phi))


# ----------------------------------------------------------------------
# Wigner 3j and Gaunt coefficients (exact rational arithmetic)
# ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def wigner_3j(l1, l2, l3, m1, m2, m3):
    """Wigner 3j symbol; exact rationals inside, one sqrt/exp at the end."""
    l1, l2, l3 = int(l1), int(l2), int(l3)
    m1, m2, m3 = int(m1), int(m2), int(m3)
    if m1 + m2 + m3 != 0:
        return 0.0
    if abs(m1) > l1 or abs(m2) > l2 or abs(m3) > l3:
        return 0.0
    if l3 < abs(l1 - l2) or l3 > l1 + l2:
        return 0.0
    f = math.factorial
    r = Fraction(f(l1 + l2 - l3) * f(l1 - l2 + l3) * f(-l1 + l2 + l3),
                 f(l1 + l2 + l3 + 1))
    r *= (f(l1 + m1) * f(l1 - m1) * f(l2 + m2) * f(l2 - m2)
          * f(l3 + m3) * f(l3 - m3))
    tmin = max(0, l2 - l3 - m1, l1 - l3 + m2)
    tmax = min(l1 + l2 - l3, l1 - m1, l2 + m2)
    s = Fraction(0)
    for t in range(tmin, tmax + 1):
        den = (f(t) * f(l3 - l2 + t + m1) * f(l3 - l1 + t - m2)
               * f(l1 + l2 - l3 - t) * f(l1 - t - m1) * f(l2 - t + m2))
        s += Fraction((-1) ** t, den)
    if s == 0:
        return 0.0
    sign = (-1) ** ((l1 - l2 - m3) % 2) * (1 if s > 0 else -1)
    s = abs(s)
    # math.log accepts arbitrarily large ints, so this never overflows
    log_val = (math.log(s.numerator) - math.log(s.denominator)
               + 0.5 * (math.log(r.numerator) - math.log(r.denominator)))
    return sign * math.exp(log_val)


@lru_cache(maxsize=None)
def gaunt_coefficient(l1, m1, l2, m2, l3):
    """Gaunt coefficient Int Y_{l1 m1} Y_{l2 m2} Y_{l3 m3} dOmega, m3 = -m1-m2.

    Exactly zero outside the selection rules (triangle inequality,
    even l1+l2+l3, |m| bounds).  Example: l1=l2=l3=0 gives 1/sqrt(4 pi).
    """
    l1, l2, l3 = int(l1), int(l2), int(l3)
    for l in (l1, l2, l3):
        _check_l(l)
    m3 = -int(m1) - int(m2)
    if (l1 + l2 + l3) % 2 != 0:
        return 0.0
    if l3 < abs(l1 - l2) or l3 > l1 + l2:
        return 0.0
    if abs(m1) > l1 or abs(m2) > l2 or abs(m3) > l3:
        return 0.0
    pref = math.sqrt((2 * l1 + 1) * (2 * l2 + 1) * (2 * l3 + 1) / (4.0 * math.pi))
    return (pref * wigner_3j(l1, l2, l3, 0, 0, 0)
            * wigner_3j(l1, l2, l3, m1, m2, m3))


def gaunt_yyc(l, m, lp, mp, p):
    """Coupling Int Y_{lm} Y*_{l'm'} Y*_{p,m-m'} dOmega used by translations."""
    return (-1.0) ** (m % 2) * gaunt_coefficient(l, m, lp, -mp, p)
