"""Independent field evaluators used as oracles by the test suite.

Everything here is built directly on scipy.special and textbook ladder
identities, deliberately avoiding the package's own special-function and
table machinery, so that agreement between the two routes is evidence
rather than tautology.

Conventions match the package contract (see ``casphere.constants``):
fully normalized Y_lm with Condon-Shortley phase, i_l / e_l radial
kinds with e_l = (-1)^l (2/pi) k_l, and

    M_lm = -(1/sqrt(l(l+1))) r x grad [z_l(kappa r) Y_lm]
    N_lm = (1/kappa) curl M_lm
"""

import numpy as np
from scipy.special import iv, kv, sph_harm_y


# ---------------------------------------------------------------- radial

def mod_i(l, x):
    x = np.asarray(x, dtype=float)
    return np.sqrt(np.pi / (2.0 * x)) * iv(l + 0.5, x)


def mod_e(l, x):
    x = np.asarray(x, dtype=float)
    return (-1.0) ** l * (2.0 / np.pi) * np.sqrt(np.pi / (2.0 * x)) * kv(l + 0.5, x)


def radial(kind, l, x):
    return mod_i(l, x) if kind == "regular" else mod_e(l, x)


def radial_dx(kind, l, x):
    """z_l'(x) = z_{l-1} - (l+1)/x z_l; e_l shares the i_l recurrence."""
    below = radial(kind, l - 1, x) if l > 0 else radial(kind, 1, x)
    return below - (l + 1.0) / x * radial(kind, l, x)


def riccati_dx(kind, l, x):
    """(x z_l(x))' = z_l(x) + x z_l'(x)."""
    return radial(kind, l, x) + x * radial_dx(kind, l, x)


# ------------------------------------------------------------- harmonics

def ylm(l, m, theta, phi):
    if abs(m) > l:
        return np.zeros(np.broadcast(theta, phi).shape, dtype=complex)
    return sph_harm_y(l, m, theta, phi)


def ylm_dtheta(l, m, theta, phi):
    """d/dtheta Y_lm via the ladder m cot(theta) Y_lm + c e^{-i phi} Y_{l,m+1}."""
    out = m * (np.cos(theta) / np.sin(theta)) * ylm(l, m, theta, phi)
    if m + 1 <= l:
        c = np.sqrt((l - m) * (l + m + 1.0))
        out = out + c * np.exp(-1j * phi) * ylm(l, m + 1, theta, phi)
    return out


def unit_vectors(theta, theta_hat_of, phi):
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    r_hat = np.stack([st * cp, st * sp, ct], axis=-1)
    t_hat = np.stack([ct * cp, ct * sp, -st], axis=-1)
    p_hat = np.stack([-sp, cp, np.zeros_like(phi)], axis=-1)
    return r_hat, t_hat, p_hat


def to_spherical(points):
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    r = np.linalg.norm(pts, axis=-1)
    theta = np.arccos(np.clip(pts[..., 2] / r, -1.0, 1.0))
    phi = np.arctan2(pts[..., 1], pts[..., 0])
    return r, theta, phi


# ----------------------------------------------------------- wave fields

def field_scalar(kind, l, m, kappa, points):
    r, theta, phi = to_spherical(points)
    return radial(kind, l, kappa * r) * ylm(l, m, theta, phi)


def _vsh(l, m, theta, phi):
    """Normalized vector harmonics C (transverse), B, P = r^ Y."""
    st = np.sin(theta)
    y = ylm(l, m, theta, phi)
    dy = ylm_dtheta(l, m, theta, phi)
    im_y_over_st = 1j * m * y / st
    cl = 1.0 / np.sqrt(l * (l + 1.0))
    r_hat, t_hat, p_hat = unit_vectors(theta, None, phi)
    c_vec = cl * (im_y_over_st[..., None] * t_hat - dy[..., None] * p_hat)
    b_vec = cl * (dy[..., None] * t_hat + im_y_over_st[..., None] * p_hat)
    p_vec = y[..., None] * r_hat
    return c_vec, b_vec, p_vec


def field_m(kind, l, m, kappa, points):
    """M_lm evaluated at Cartesian points; returns (..., 3) complex."""
    r, theta, phi = to_spherical(points)
    c_vec, _, _ = _vsh(l, m, theta, phi)
    return radial(kind, l, kappa * r)[..., None] * c_vec


def field_n(kind, l, m, kappa, points):
    """N_lm = (1/kappa) curl M_lm evaluated at Cartesian points."""
    r, theta, phi = to_spherical(points)
    x = kappa * r
    _, b_vec, p_vec = _vsh(l, m, theta, phi)
    zl = radial(kind, l, x)
    sp = riccati_dx(kind, l, x)
    return (np.sqrt(l * (l + 1.0)) * (zl / x))[..., None] * p_vec \
        + (sp / x)[..., None] * b_vec


def field_basis(pol, kind, l, m, kappa, points):
    return field_m(kind, l, m, kappa, points) if pol == 0 \
        else field_n(kind, l, m, kappa, points)


# ------------------------------------------------------------ quadrature

def sphere_grid(n_theta=24, n_phi=48):
    """Gauss-Legendre x uniform-phi product rule on the unit sphere.

    Returns (directions (N,3), weights (N,)) with sum(w) = 4 pi; exact for
    spherical polynomials up to degree ~ 2 n_theta - 1.
    """
    nodes, wts = np.polynomial.legendre.leggauss(n_theta)
    theta = np.arccos(nodes)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    ww = np.repeat(wts, n_phi) * (2.0 * np.pi / n_phi)
    st = np.sin(tt).ravel()
    dirs = np.stack([st * np.cos(pp.ravel()), st * np.sin(pp.ravel()),
                     np.cos(tt).ravel()], axis=-1)
    return dirs, ww


def rotation_matrix_zyz(alpha, beta, gamma):
    ca, sa = np.cos(alpha), np.sin(alpha)
    cb, sb = np.cos(beta), np.sin(beta)
    cg, sg = np.cos(gamma), np.sin(gamma)
    rz_a = np.array([[ca, -sa, 0], [sa, ca, 0], [0, 0, 1.0]])
    ry = np.array([[cb, 0, sb], [0, 1.0, 0], [-sb, 0, cb]])
    rz_g = np.array([[cg, -sg, 0], [sg, cg, 0], [0, 0, 1.0]])
    return rz_a @ ry @ rz_g


def translated_field_sum(block_mm, block_nm, kind, l, m, kappa, basis,
                         points):
    """Sum_j [A^MM_j M^reg_j + A^NM_j N^reg_j](points) for source (l, m).

    ``block_mm``/``block_nm`` map source scalar index -> target scalar
    index (complex-m labels); used to check that they reproduce the
    displaced outgoing/regular field of column (l, m).
    """
    col = basis.scalar_index(l, m)
    total = np.zeros(points.shape, dtype=complex)
    for lp in range(1, basis.l_max + 1):
        for mp in range(-lp, lp + 1):
            row = basis.scalar_index(lp, mp)
            amm = block_mm[row, col]
            anm = block_nm[row, col]
            if amm != 0:
                total += amm * field_m("regular", lp, mp, kappa, points)
            if anm != 0:
                total += anm * field_n("regular", lp, mp, kappa, points)
    return total
