"""Translation operators against the addition theorem, by quadrature.

The oracle route evaluates displaced vector wave fields directly from
scipy Bessel functions and spherical harmonics (tests/helpers.py) and
projects them back onto regular waves over a sphere of probe points;
the package's recurrence-built operators must reproduce those
projections.  The frozen number below is the sphere-quadrature value of
the (TM,1,0)->(TM,1,0) entry at kappa=1, |d|=3.
"""

import math

import numpy as np
import pytest

import helpers
from casphere.basis import (POL_TM, basis_enumerate, real_combination_matrix)
from casphere.translation import (KIND_OUTGOING, KIND_REGULAR,
                                  axial_translation, translation_matrix,
                                  translation_matrix_direct)

KAPPA = 1.0
# sphere-quadrature projection of the displaced outgoing field, unscaled
A_NN_10_10_D3 = -0.022127585941271864


def to_complex_basis(block, l_max):
    c = real_combination_matrix(l_max)
    return c.T @ block @ np.conj(c)


def p_channel_projection(kappa, d, l_src, m_src, l_tgt, m_tgt,
                         n_theta=40, n_phi=80, r_probe=1.0):
    """A^NN entry by projecting the displaced outgoing N field.

    Expands N^out_{l m}(x + d z^) in regular waves about the origin and
    reads off the N_{l' m'} coefficient from the radial (r^ Y) channel,
    which the M waves cannot reach.
    """
    dirs, w = helpers.sphere_grid(n_theta, n_phi)
    pts = r_probe * dirs
    field = helpers.field_n("outgoing", l_src, m_src, kappa,
                            pts + np.array([0.0, 0.0, d]))
    _, theta, phi = helpers.to_spherical(pts)
    y = helpers.ylm(l_tgt, m_tgt, theta, phi)
    proj = np.sum(w * np.conj(y) * np.sum(dirs * field, axis=-1))
    radial = (math.sqrt(l_tgt * (l_tgt + 1.0))
              * float(helpers.mod_i(l_tgt, kappa * r_probe))
              / (kappa * r_probe))
    return complex(proj / radial)


# ------------------------------------------------------------ structure

def test_zero_shift_is_identity():
    basis = basis_enumerate(3)
    for d in (1e-6, 1e-9):
        blk = axial_translation(basis, KIND_REGULAR, KAPPA, d)
        # deviation is linear in kappa d
        assert np.abs(blk.matrix - np.eye(basis.size)).max() < 2.0 * d


def test_axial_m_selection_exact():
    basis = basis_enumerate(3)
    blk = axial_translation(basis, KIND_OUTGOING, KAPPA, 3.0)
    labels = basis.labels()
    # complex-m basis: m' = m exactly
    a_c = to_complex_basis(blk.matrix, 3)
    scale = np.abs(a_c).max()
    for i, (p1, l1, m1) in enumerate(labels):
        for j, (p2, l2, m2) in enumerate(labels):
            if m1 != m2:
                assert abs(a_c[i, j]) < 1e-14 * scale
    # real-m basis: same-pol couples m'=m, cross-pol couples m'=-m,
    # everything else is an exact zero (cross-pol carries the i*m factor)
    for i, (p1, l1, m1) in enumerate(labels):
        for j, (p2, l2, m2) in enumerate(labels):
            if (p1 == p2 and m1 != m2) or (p1 != p2 and m1 != -m2):
                assert blk.matrix[i, j] == 0.0
    # the i*m factor kills the cross-pol m=0 entries
    for l1 in range(1, 4):
        for l2 in range(1, 4):
            assert blk.matrix[basis.index(0, l1, 0), basis.index(1, l2, 0)] == 0.0


def test_invalid_arguments_raise():
    basis = basis_enumerate(1)
    with pytest.raises(ValueError):
        translation_matrix(basis, KIND_OUTGOING, KAPPA, [0.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        axial_translation(basis, "incoming", KAPPA, 2.0)
    with pytest.raises(ValueError):
        axial_translation(basis, KIND_OUTGOING, -1.0, 2.0)


# ---------------------------------------------------- quadrature oracle

def test_axial_entry_matches_sphere_quadrature():
    basis = basis_enumerate(2)
    blk = axial_translation(basis, KIND_OUTGOING, KAPPA, 3.0)
    idx = basis.index(POL_TM, 1, 0)
    got = blk.matrix[idx, idx] * math.exp(blk.exponent)
    assert got == pytest.approx(A_NN_10_10_D3, rel=5e-12)
    live = p_channel_projection(KAPPA, 3.0, 1, 0, 1, 0)
    assert abs(live.imag) < 1e-15
    assert got == pytest.approx(live.real, rel=1e-11)


def test_general_entries_match_sphere_quadrature():
    # off-diagonal and l-changing entries, still axial so m is conserved
    basis = basis_enumerate(2)
    blk = axial_translation(basis, KIND_OUTGOING, KAPPA, 2.5)
    for (ls, ms), (lt, mt) in [((1, 0), (2, 0)), ((2, 1), (1, 1)),
                               ((2, -1), (2, -1))]:
        got = (blk.matrix[basis.index(POL_TM, lt, mt),
                          basis.index(POL_TM, ls, ms)]
               * math.exp(blk.exponent))
        live = p_channel_projection(KAPPA, 2.5, ls, ms, lt, mt)
        assert got == pytest.approx(live.real, rel=1e-10)


def test_field_completeness_at_generic_displacement():
    # the expanded field must reproduce the displaced outgoing field
    # pointwise, improving with truncation order
    dvec = np.array([0.9, -1.4, 2.2])
    rng = np.random.default_rng(3)
    probe = 0.1 * np.linalg.norm(dvec) * np.stack(
        [v / np.linalg.norm(v) for v in rng.normal(size=(6, 3))])
    exact = helpers.field_n("outgoing", 1, 1, KAPPA, probe + dvec)
    devs = []
    for lm in (2, 3, 4):
        basis = basis_enumerate(lm)
        blk = translation_matrix(basis, KIND_OUTGOING, KAPPA, dvec)
        a_c = to_complex_basis(blk.matrix * math.exp(blk.exponent), lm)
        ds = basis.scalar_size
        approx = helpers.translated_field_sum(
            a_c[0:ds, ds:], a_c[ds:, ds:], None, 1, 1, KAPPA, basis, probe)
        devs.append(np.max(np.abs(approx - exact)) / np.max(np.abs(exact)))
    assert devs[2] < 2e-3
    assert devs[0] > devs[1] > devs[2]


# ------------------------------------------------- algebraic properties

def test_plus_z_displacement_equals_axial():
    basis = basis_enumerate(3)
    ax = axial_translation(basis, KIND_OUTGOING, KAPPA, 2.7)
    gen = translation_matrix(basis, KIND_OUTGOING, KAPPA, [0.0, 0.0, 2.7])
    assert np.array_equal(gen.matrix, ax.matrix)
    assert gen.exponent == ax.exponent


def test_rotation_route_matches_direct_angular_series():
    # two construction routes: rotate-axial-rotate vs the direct series
    # at general direction; they share only the coupling tables
    basis = basis_enumerate(3)
    for dvec in ([1.3, -0.8, 2.1], [0.0, 2.4, -1.0], [-1.1, -1.7, 0.4]):
        a = translation_matrix(basis, KIND_OUTGOING, KAPPA, dvec)
        b = translation_matrix_direct(basis, KIND_OUTGOING, KAPPA, dvec)
        scale = np.abs(a.matrix).max()
        assert a.exponent == b.exponent
        assert np.abs(a.matrix - b.matrix).max() < 1e-11 * scale


def test_reciprocity_under_displacement_reversal():
    # A(-d) = P A(d) P with P = diag((-1)^{l+pol})
    basis = basis_enumerate(2)
    dvec = np.array([1.3, -0.8, 2.1])
    a_p = translation_matrix(basis, KIND_OUTGOING, KAPPA, dvec)
    a_m = translation_matrix(basis, KIND_OUTGOING, KAPPA, -dvec)
    par = np.array([(-1.0) ** (l + pol) for (pol, l, m) in basis.labels()])
    want = par[:, None] * a_p.matrix * par[None, :]
    scale = np.abs(a_p.matrix).max()
    assert np.abs(a_m.matrix - want).max() < 1e-12 * scale


def test_large_distance_leading_behavior():
    # the unscaled TM(1,0) self-coupling falls off as
    # e^{-kappa d}/(kappa d)^2: the scaled entry times (kappa d)^2
    # converges, with O(1/(kappa d)) remainder
    basis = basis_enumerate(2)
    idx = basis.index(POL_TM, 1, 0)
    c = {}
    for d in (40.0, 80.0, 160.0):
        blk = axial_translation(basis, KIND_OUTGOING, KAPPA, d)
        c[d] = blk.matrix[idx, idx] * (KAPPA * d) ** 2
    assert abs(c[80.0] / c[40.0] - 1.0) < 0.02
    assert abs(c[160.0] / c[80.0] - 1.0) < 0.01
    assert abs(c[160.0] / c[80.0] - 1.0) < abs(c[80.0] / c[40.0] - 1.0)


def test_collinear_regular_closure():
    # regular->regular translations compose: A(d1) A(d2) = A(d1+d2) on
    # the l<=4 block when the product runs in a larger internal basis
    l_keep, l_int = 4, 8
    big = basis_enumerate(l_int)
    a1 = axial_translation(big, KIND_REGULAR, KAPPA, 0.6)
    a2 = axial_translation(big, KIND_REGULAR, KAPPA, 0.9)
    small = basis_enumerate(l_keep)
    idx = [big.index(*lab) for lab in small.labels()]
    composed = (a1.matrix @ a2.matrix)[np.ix_(idx, idx)]
    direct = axial_translation(small, KIND_REGULAR, KAPPA, 1.5)
    assert a1.exponent + a2.exponent == pytest.approx(direct.exponent,
                                                      rel=1e-15)
    scale = np.abs(direct.matrix).max()
    assert np.abs(composed - direct.matrix).max() < 1e-8 * scale
