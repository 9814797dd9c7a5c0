"""N-sphere multiple-scattering Casimir forces, energies, decompositions.

Geometry and scattering combine into the block system

    M_ij(i xi) = T_i A^{i<-j}(r_i - r_j),   M_ii = 0

over target-sphere wave labels (D = 2 l_max (l_max + 2) per sphere).
The interaction energy and the force on sphere t are

    E    = (1/2 pi) Int_0^inf ln det(1 - M) d xi
    F_t  = +(1/2 pi) Int_0^inf tr[(1 - M)^{-1} dM/dr_t] d xi

(T = 0; at T > 0 the integral becomes the Matsubara sum, see
``spectral``).  "resummed" evaluates the inverse exactly - the full
geometric series over closed scattering paths; "fixed(k)" keeps paths
with exactly k scattering events, tr[M^{k-1} dM], the order-by-order
structure that the three-body decomposition and the large-N estimator
sample.

Units: lengths are in an arbitrary common unit L0, frequencies in
c/L0, energies in hbar c / L0, forces in hbar c / L0^2.  When
``length_unit_m`` is set (required at finite temperature), reduced
temperature and SI conversion factors are derived from it, and
permittivity models are evaluated at xi in rad/s.

Scaling strategy: blocks are assembled in balanced form
S^{-1} M S with S = diag(e^{kappa R_i} (kappa r0)^l), so every entry is
bounded by e^{-kappa gap_ij} at large kappa and O(1) at small kappa;
determinants and traces are similarity-invariant.  The fixed-order
path, by contrast, tracks the exponential prefactor of every block
product explicitly: a closed path's tracked exponent is exactly
-kappa times its total hop length, e.g. -2 kappa d for the two-sphere
round trip.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .basis import BasisSpec, basis_enumerate
from .constants import C_LIGHT, HBAR_C, matsubara_scale
from .mie import ConstantPermittivity, PermittivityModel, mie_diag
from .spectral import (SpectralSettings, integrate_zero_t, matsubara_sum,
                       zero_frequency_limit)
from .translation import (KIND_OUTGOING, TranslationBlock, _gradient_stack,
                          translation_matrix)

_TWO_PI = 2.0 * math.pi
_RENORM = 1e100


# ----------------------------------------------------------------- scene

@dataclass(frozen=True)
class SphereSpec:
    """One sphere: center and radius in scene length units."""
    label: str
    center: tuple
    radius: float
    permittivity: PermittivityModel

    def __post_init__(self):
        object.__setattr__(self, "center",
                           tuple(float(c) for c in self.center))
        if len(self.center) != 3:
            raise ValueError(f"sphere {self.label!r}: center must be 3-vector")
        if self.radius <= 0.0:
            raise ValueError(f"sphere {self.label!r}: radius must be positive")

    @property
    def center_array(self):
        return np.array(self.center)


@dataclass(frozen=True)
class SceneConfig:
    """Immutable N-sphere scene plus evaluation settings."""
    spheres: tuple
    background: PermittivityModel = ConstantPermittivity(1.0)
    l_max: int = 3
    temperature_kelvin: float = 0.0
    length_unit_m: float = 0.0       # meters per scene length unit; 0 = unset
    spectral: SpectralSettings = field(default_factory=SpectralSettings)

    def __post_init__(self):
        object.__setattr__(self, "spheres", tuple(self.spheres))
        if not self.spheres:
            raise ValueError("scene needs at least one sphere")
        labels = [s.label for s in self.spheres]
        if len(set(labels)) != len(labels):
            raise ValueError("sphere labels must be unique")
        if self.l_max < 1:
            raise ValueError("l_max must be >= 1")
        if self.temperature_kelvin < 0.0:
            raise ValueError("temperature must be >= 0")
        if self.temperature_kelvin > 0.0 and self.length_unit_m <= 0.0:
            raise ValueError(
                "finite temperature needs length_unit_m to fix the "
                "Matsubara scale")
        for i, a in enumerate(self.spheres):
            for b in self.spheres[i + 1:]:
                gap = np.linalg.norm(a.center_array - b.center_array) \
                    - a.radius - b.radius
                if gap <= 0.0:
                    raise ValueError(
                        f"spheres {a.label!r} and {b.label!r} overlap "
                        f"(gap {gap:g}); the wave expansion requires "
                        "non-overlapping spheres")

    @property
    def basis(self):
        return basis_enumerate(self.l_max)

    @property
    def frequency_unit(self):
        """Factor from scene frequency to permittivity-model frequency."""
        return C_LIGHT / self.length_unit_m if self.length_unit_m > 0 else 1.0

    @property
    def reduced_temperature(self):
        if self.temperature_kelvin == 0.0:
            return 0.0
        return matsubara_scale(self.temperature_kelvin, self.length_unit_m)

    @property
    def min_gap(self):
        out = math.inf
        for i, a in enumerate(self.spheres):
            for b in self.spheres[i + 1:]:
                gap = float(np.linalg.norm(a.center_array - b.center_array)
                            - a.radius - b.radius)
                out = min(out, gap)
        return out

    def index_of(self, label):
        for i, s in enumerate(self.spheres):
            if s.label == label:
                return i
        raise KeyError(f"no sphere labeled {label!r}")

    def subscene(self, labels):
        """Same settings, restricted to the given sphere labels."""
        keep = tuple(s for s in self.spheres if s.label in set(labels))
        if len(keep) != len(set(labels)):
            raise KeyError("unknown sphere label in subscene request")
        return replace(self, spheres=keep)

    def moved(self, label, new_center):
        idx = self.index_of(label)
        spheres = list(self.spheres)
        spheres[idx] = replace(spheres[idx],
                               center=tuple(float(c) for c in new_center))
        return replace(self, spheres=tuple(spheres))


# ----------------------------------------------------------------- results

@dataclass(frozen=True)
class ForceResult:
    """Force on a target sphere, in hbar c / L0^2 scene units.

    error combines the quadrature estimate with the l_max vs l_max - 1
    truncation delta.  exponent_scale reports the tracked path exponent
    of the dominant fixed-order contribution at the reference frequency
    (0.0 for resummed results, which are fully de-scaled).
    """
    force: np.ndarray
    error: np.ndarray
    target: str
    order: str
    l_max: int
    n_freq: int
    exponent_scale: float
    si_factor: float   # N per (hbar c / L0^2); 0 when length_unit_m unset

    @property
    def force_si(self):
        if self.si_factor == 0.0:
            raise ValueError("set length_unit_m on the scene for SI output")
        return self.force * self.si_factor


@dataclass(frozen=True)
class PotentialResult:
    """Interaction potential along a path, hbar c / L0 scene units.

    potential is relative to infinite separation; the tail beyond the
    last sample is a fitted power law s^{-tail_exponent}.  Plots are
    often drawn in the hbar c / 4 pi unit, provided as potential_4pi.
    """
    separations: np.ndarray
    potential: np.ndarray
    error: np.ndarray
    tail_exponent: float
    tail_ok: bool
    target: str
    l_max: int
    n_freq: int
    n_freq_points: np.ndarray

    @property
    def potential_4pi(self):
        return self.potential * (4.0 * math.pi)


# ------------------------------------------------------ frequency assembly

def _materials(scene: SceneConfig, xi):
    xm = xi * scene.frequency_unit
    eps_b = float(scene.background.eps_imag_freq(xm))
    if eps_b <= 0.0:
        raise ValueError("background permittivity must stay positive")
    kappa = math.sqrt(eps_b) * xi
    eps_rel = [float(s.permittivity.eps_imag_freq(xm)) / eps_b
               for s in scene.spheres]
    return kappa, eps_rel


def _l_balance_vec(basis: BasisSpec, kappa, r0):
    """Per-label similarity scale t^l, t = min(kappa r0, 1)."""
    t = min(kappa * r0, 1.0)
    out = np.empty(basis.size)
    for pol in (0, 1):
        for l in range(1, basis.l_max + 1):
            i0 = basis.index(pol, l, -l)
            out[i0:i0 + 2 * l + 1] = t ** l
    return out


def _balanced_m(scene: SceneConfig, xi):
    """S^{-1} M S as one dense (N D, N D) real matrix; entries bounded."""
    basis = scene.basis
    dim = basis.size
    n = len(scene.spheres)
    kappa, eps_rel = _materials(scene, xi)
    r0 = min(s.radius for s in scene.spheres)
    lbal = _l_balance_vec(basis, kappa, r0)
    tvecs = [mie_diag(basis, kappa * s.radius, eps_rel[i], scaled=True)
             for i, s in enumerate(scene.spheres)]
    out = np.zeros((n * dim, n * dim))
    for i, si in enumerate(scene.spheres):
        for j, sj in enumerate(scene.spheres):
            if i == j:
                continue
            d = si.center_array - sj.center_array
            blk = translation_matrix(basis, KIND_OUTGOING, kappa, d)
            gap = float(np.linalg.norm(d)) - si.radius - sj.radius
            scale = math.exp(-kappa * gap)
            m = (tvecs[i] / lbal)[:, None] * blk.matrix * (lbal[None, :]
                                                           * scale)
            out[i * dim:(i + 1) * dim, j * dim:(j + 1) * dim] = m
    return out


def logdet_energy_oracle(scene: SceneConfig, xi):
    """ln det(1 - M(i xi)) straight from an LU factorization.

    Independent of the eigenvalue route used by ``energy_integrand``;
    resolves couplings down to rounding of the determinant (fine for
    ordinary dielectric contrast, not for nearly-transparent spheres).
    """
    m = _balanced_m(scene, xi)
    sign, logabs = np.linalg.slogdet(np.eye(m.shape[0]) - m)
    if sign <= 0.0:
        raise RuntimeError(
            f"det(1 - M) not positive at xi={xi:g} (sign {sign}); "
            "passive scatterers cannot do this - check the scene")
    return float(logabs)


def energy_integrand(scene: SceneConfig, xi):
    """ln det(1 - M) / 2 pi, via eigenvalues of M.

    sum log(1 - lam) evaluated as 0.5 log1p(|lam|^2 - 2 Re lam) keeps
    full relative precision even when every |lam| is far below
    rounding, where forming 1 - M first would round the coupling away
    entirely (weak-contrast spheres).
    """
    m = _balanced_m(scene, xi)
    lam = np.linalg.eigvals(m)
    q = lam.real ** 2 + lam.imag ** 2 - 2.0 * lam.real   # |1-lam|^2 - 1
    if np.any(q <= -1.0):
        raise RuntimeError(
            f"det(1 - M) not positive at xi={xi:g}; passive scatterers "
            "cannot do this - check the scene")
    return 0.5 * float(np.sum(np.log1p(q))) / _TWO_PI


def _grad_pair(basis, kappa, d):
    """(3, D, D) stack of d/dd A(d), with its shared exponent removed."""
    return _gradient_stack(basis, KIND_OUTGOING, kappa, d)[0]


def _resummed_force_integrand(scene: SceneConfig, target_idx, xi):
    basis = scene.basis
    dim = basis.size
    t = target_idx
    kappa, eps_rel = _materials(scene, xi)
    r0 = min(s.radius for s in scene.spheres)
    lbal = _l_balance_vec(basis, kappa, r0)
    m = _balanced_m(scene, xi)
    x = np.linalg.inv(np.eye(m.shape[0]) - m)
    st = scene.spheres[t]
    tvec_t = mie_diag(basis, kappa * st.radius, eps_rel[t], scaled=True)
    out = np.zeros(3)
    for j, sj in enumerate(scene.spheres):
        if j == t:
            continue
        d_tj = st.center_array - sj.center_array
        dist = float(np.linalg.norm(d_tj))
        gap = dist - st.radius - sj.radius
        scale = math.exp(-kappa * gap)
        grad_tj = _grad_pair(basis, kappa, d_tj)        # d/dd at d = r_t - r_j
        grad_jt = _grad_pair(basis, kappa, -d_tj)
        tvec_j = mie_diag(basis, kappa * sj.radius, eps_rel[j], scaled=True)
        x_jt = x[j * dim:(j + 1) * dim, t * dim:(t + 1) * dim]
        x_tj = x[t * dim:(t + 1) * dim, j * dim:(j + 1) * dim]
        for a in range(3):
            # moving the target: d(r_t - r_j) = +dr_t, d(r_j - r_t) = -dr_t
            dm_tj = (tvec_t / lbal)[:, None] * grad_tj[a] * (lbal * scale)
            dm_jt = (tvec_j / lbal)[:, None] * (-grad_jt[a]) * (lbal * scale)
            out[a] += np.einsum("ab,ba->", x_jt, dm_tj)
            out[a] += np.einsum("ab,ba->", x_tj, dm_jt)
    return out / _TWO_PI


# ------------------------------------------------- fixed-order (tracked)

def _tracked_t_diag(basis, kappa, radius, eps_rel):
    """Unscaled T diagonal; raises before overflow can corrupt paths."""
    x = kappa * radius
    if 2.0 * x > 690.0:
        raise OverflowError(
            "fixed-order representation overflows at kappa R > 345; "
            "use the resummed order for this regime")
    return mie_diag(basis, x, eps_rel, scaled=True) * math.exp(2.0 * x)


def _tracked_m_blocks(scene: SceneConfig, xi):
    """{(i, j): (mantissa, exponent)} with exponent = -kappa d_ij."""
    basis = scene.basis
    kappa, eps_rel = _materials(scene, xi)
    tvecs = [_tracked_t_diag(basis, kappa, s.radius, eps_rel[i])
             for i, s in enumerate(scene.spheres)]
    blocks = {}
    for i, si in enumerate(scene.spheres):
        for j, sj in enumerate(scene.spheres):
            if i == j:
                continue
            d = si.center_array - sj.center_array
            blk = translation_matrix(basis, KIND_OUTGOING, kappa, d)
            blocks[(i, j)] = (tvecs[i][:, None] * blk.matrix, blk.exponent)
    return blocks


def _tracked_dm_blocks(scene: SceneConfig, target_idx, xi):
    """Per-axis tracked blocks of dM/dr_target."""
    basis = scene.basis
    t = target_idx
    kappa, eps_rel = _materials(scene, xi)
    st = scene.spheres[t]
    tvec_t = _tracked_t_diag(basis, kappa, st.radius, eps_rel[t])
    out = [{}, {}, {}]
    for j, sj in enumerate(scene.spheres):
        if j == t:
            continue
        d_tj = st.center_array - sj.center_array
        expo = -kappa * float(np.linalg.norm(d_tj))
        grad_tj = _grad_pair(basis, kappa, d_tj)
        grad_jt = _grad_pair(basis, kappa, -d_tj)
        tvec_j = _tracked_t_diag(basis, kappa, sj.radius, eps_rel[j])
        for a in range(3):
            out[a][(t, j)] = (tvec_t[:, None] * grad_tj[a], expo)
            out[a][(j, t)] = (tvec_j[:, None] * (-grad_jt[a]), expo)
    return out


def _block_mul(a_blocks, b_blocks, n):
    """Tracked product; per-destination terms combined at the max exponent."""
    out = {}
    for (i, k), (am, ae) in a_blocks.items():
        for j in range(n):
            if (k, j) not in b_blocks:
                continue
            bm, be = b_blocks[(k, j)]
            mant = am @ bm
            expo = ae + be
            if (i, j) in out:
                om, oe = out[(i, j)]
                top = max(oe, expo)
                mant = om * math.exp(oe - top) + mant * math.exp(expo - top)
                expo = top
            peak = np.max(np.abs(mant))
            if peak > _RENORM:
                shift = math.log(peak)
                mant = mant * math.exp(-shift)
                expo += shift
            out[(i, j)] = (mant, expo)
    return out


def _block_power(blocks, n, k):
    out = blocks
    for _ in range(k - 1):
        out = _block_mul(out, blocks, n)
    return out


def _tracked_trace(prod_blocks, dm_blocks):
    """tr[P dM] and the dominant tracked exponent among its terms."""
    total = 0.0
    top = -math.inf
    for (i, j), (dm, de) in dm_blocks.items():
        if (j, i) not in prod_blocks:
            continue
        pm, pe = prod_blocks[(j, i)]
        val = np.einsum("ab,ba->", pm, dm)
        expo = pe + de
        total += val * math.exp(expo)
        if val != 0.0 and expo > top:
            top = expo
    return total, top


def _fixed_force_terms(scene: SceneConfig, target_idx, xi, k):
    """((3,) integrand values, dominant tracked exponent)."""
    if k < 2:
        raise ValueError("fixed order needs k >= 2 scattering events")
    n = len(scene.spheres)
    m_blocks = _tracked_m_blocks(scene, xi)
    dm_blocks = _tracked_dm_blocks(scene, target_idx, xi)
    prod = _block_power(m_blocks, n, k - 1)
    vals = np.zeros(3)
    top = -math.inf
    for a in range(3):
        vals[a], t_a = _tracked_trace(prod, dm_blocks[a])
        top = max(top, t_a)
    return vals / _TWO_PI, top


def energy_integrand_fixed(scene: SceneConfig, xi, k):
    """-tr[M^k] / (2 pi k): the k-scattering-event energy integrand."""
    if k < 2:
        raise ValueError("fixed order needs k >= 2 scattering events")
    n = len(scene.spheres)
    m_blocks = _tracked_m_blocks(scene, xi)
    prod = _block_power(m_blocks, n, k - 1)
    total = 0.0
    for i in range(n):
        for j in range(n):
            if (i, j) in prod and (j, i) in m_blocks:
                pm, pe = prod[(i, j)]
                bm, be = m_blocks[(j, i)]
                total += np.einsum("ab,ba->", pm, bm) * math.exp(pe + be)
    return -total / (_TWO_PI * k)


def force_integrand(scene: SceneConfig, target, xi, order="resummed"):
    """(3,) force integrand; F = Int_0^inf (T=0) or Matsubara-summed."""
    if xi <= 0.0:
        raise ValueError("xi must be positive")
    t = scene.index_of(target)
    if len(scene.spheres) < 2:
        raise ValueError("force needs at least two spheres")
    if order == "resummed":
        return _resummed_force_integrand(scene, t, xi)
    if isinstance(order, str) and order.startswith("fixed"):
        k = int(order[len("fixed("):-1]) if order.endswith(")") else int(
            order.split(":")[1])
        return _fixed_force_terms(scene, t, xi, k)[0]
    raise ValueError(f"unknown order {order!r}; use 'resummed' or 'fixed(k)'")


# --------------------------------------------------------------- spectral

def _decay_scale(scene: SceneConfig):
    eps_b = float(scene.background.eps_imag_freq(
        scene.spectral.xi_eps * scene.frequency_unit))
    return 2.0 * math.sqrt(eps_b) * scene.min_gap


def _spectral_value(scene: SceneConfig, f, map_fn=map):
    """(value, error, n_freq) for Int f d xi or its Matsubara sum.

    map_fn may evaluate the T = 0 quadrature nodes concurrently; the
    Matsubara sum stops adaptively and stays sequential.
    """
    count = {"n": 0}

    def counted(xi):
        count["n"] += 1
        return f(xi)

    t_red = scene.reduced_temperature
    if t_red == 0.0:
        val, err = integrate_zero_t(counted if map_fn is map else f,
                                    _decay_scale(scene), scene.spectral,
                                    map_fn=map_fn)
        if map_fn is not map:
            count["n"] = scene.spectral.n_nodes * 2 \
                + scene.spectral.check_nodes
    else:
        val, err, _ = matsubara_sum(counted, t_red, scene.spectral)
    return val, err, count["n"]


def _si_force_factor(scene: SceneConfig):
    if scene.length_unit_m <= 0.0:
        return 0.0
    return HBAR_C / scene.length_unit_m ** 2


def casimir_force(scene: SceneConfig, target, order="resummed",
                  truncation_error=True, map_fn=map):
    """Force on the target sphere with quadrature + truncation errors."""
    if len(scene.spheres) < 2:
        raise ValueError("force needs at least two spheres")
    t = scene.index_of(target)

    def f(xi):
        return force_integrand(scene, target, xi, order)

    val, qerr, n_freq = _spectral_value(scene, f, map_fn)
    if truncation_error and scene.l_max >= 2:
        lower = replace(scene, l_max=scene.l_max - 1)
        val_lo, _, _ = _spectral_value(
            lower, lambda xi: force_integrand(lower, target, xi, order),
            map_fn)
        terr = np.abs(val - val_lo)
    else:
        terr = np.zeros(3)
    expo = 0.0
    if isinstance(order, str) and order.startswith("fixed"):
        k = int(order[len("fixed("):-1])
        xi_ref = 1.0 / _decay_scale(scene)
        expo = _fixed_force_terms(scene, t, xi_ref, k)[1]
    return ForceResult(force=val, error=qerr + terr, target=target,
                       order=str(order), l_max=scene.l_max, n_freq=n_freq,
                       exponent_scale=float(expo),
                       si_factor=_si_force_factor(scene))


def interaction_energy(scene: SceneConfig, order="resummed",
                       fixed_k=None, map_fn=map):
    """(energy, error, n_freq) in hbar c / L0; ln-det route."""
    if fixed_k is not None:
        f = lambda xi: energy_integrand_fixed(scene, xi, fixed_k)
    else:
        f = lambda xi: energy_integrand(scene, xi)
    val, err, n_freq = _spectral_value(scene, f, map_fn)
    return float(val), float(err), n_freq


def three_body_force(scene: SceneConfig, target, map_fn=map):
    """F(target | other two) minus the two pair forces, same settings."""
    if len(scene.spheres) != 3:
        raise ValueError("three-body decomposition needs exactly 3 spheres")
    full = casimir_force(scene, target, map_fn=map_fn)
    others = [s.label for s in scene.spheres if s.label != target]
    force = full.force.copy()
    error = full.error.copy()
    n_freq = full.n_freq
    for other in others:
        pair = casimir_force(scene.subscene([target, other]), target,
                             map_fn=map_fn)
        force -= pair.force
        error = error + pair.error
        n_freq += pair.n_freq
    return ForceResult(force=force, error=error, target=target,
                       order="three-body", l_max=scene.l_max, n_freq=n_freq,
                       exponent_scale=0.0,
                       si_factor=_si_force_factor(scene))


def three_body_energy(scene: SceneConfig, map_fn=map):
    """(V3, error, n_freq): E(1,2,3) - E(1,2) - E(1,3) - E(2,3)."""
    if len(scene.spheres) != 3:
        raise ValueError("three-body decomposition needs exactly 3 spheres")
    labels = [s.label for s in scene.spheres]
    val, err, n_freq = interaction_energy(scene, map_fn=map_fn)
    for i in range(3):
        for j in range(i + 1, 3):
            pv, pe, pn = interaction_energy(
                scene.subscene([labels[i], labels[j]]), map_fn=map_fn)
            val -= pv
            err += pe
            n_freq += pn
    return val, err, n_freq


def potential_along_path(scene: SceneConfig, target, positions,
                         tail_points=4, map_fn=map):
    """Potential of the target along a receding path, zero at infinity.

    positions: (n, 3) target centers ordered by increasing separation
    from the rest of the scene.  V at each point accumulates -F . dl
    inward from the last point, whose own offset comes from a power-law
    tail fit |F_parallel| ~ s^{-g} over the final tail_points samples.
    """
    pos = np.atleast_2d(np.asarray(positions, dtype=float))
    n = pos.shape[0]
    if n == 0:
        raise ValueError("empty path")
    others = np.array([s.center_array for s in scene.spheres
                       if s.label != target])
    ref = others.mean(axis=0)
    seps = np.linalg.norm(pos - ref, axis=1)
    if np.any(np.diff(seps) <= 0.0):
        raise ValueError("path must have increasing separation")
    forces = np.empty((n, 3))
    errors = np.empty((n, 3))
    counts = np.empty(n, dtype=int)
    for i in range(n):
        res = casimir_force(scene.moved(target, pos[i]), target,
                            map_fn=map_fn)
        forces[i] = res.force
        errors[i] = res.error
        counts[i] = res.n_freq
    n_freq = int(counts.sum())
    if n == 1:
        return PotentialResult(separations=seps, potential=np.zeros(1),
                               error=np.abs(errors[0]).sum(keepdims=True),
                               tail_exponent=math.nan, tail_ok=False,
                               target=target, l_max=scene.l_max,
                               n_freq=n_freq, n_freq_points=counts)
    # tangential force component along the path
    f_par = np.empty(n)
    for i in range(n):
        lo = max(i - 1, 0)
        hi = min(i + 1, n - 1)
        tangent = pos[hi] - pos[lo]
        tangent /= np.linalg.norm(tangent)
        f_par[i] = forces[i] @ tangent
    # tail: |F| ~ C s^-g  =>  integral beyond the last point
    npts = min(tail_points, n)
    s_t = seps[-npts:]
    f_t = np.abs(f_par[-npts:])
    tail_ok = bool(np.all(f_t > 0.0) and np.all(np.diff(f_t) < 0.0))
    if tail_ok:
        g = -np.polyfit(np.log(s_t), np.log(f_t), 1)[0]
        tail_ok = g > 1.5
    if tail_ok:
        v_last = f_par[-1] * seps[-1] / (g - 1.0)
    else:
        g = math.nan
        v_last = 0.0
    # V(s_i) = Int_{s_i}^{inf} F_par ds, accumulated by trapezoid
    pot = np.empty(n)
    pot[-1] = v_last
    for i in range(n - 2, -1, -1):
        ds = seps[i + 1] - seps[i]
        pot[i] = pot[i + 1] + 0.5 * (f_par[i] + f_par[i + 1]) * ds
    # crude but honest: force errors propagate through the ds weights
    verr = np.abs(errors).sum(axis=1)
    ds = np.diff(seps)
    err = np.empty(n)
    err[-1] = verr[-1] * seps[-1]
    for i in range(n - 2, -1, -1):
        err[i] = err[i + 1] + 0.5 * (verr[i] + verr[i + 1]) * ds[i]
    if not tail_ok:
        err = err + abs(f_par[-1]) * seps[-1]
    return PotentialResult(separations=seps, potential=pot, error=err,
                           tail_exponent=float(g), tail_ok=tail_ok,
                           target=target, l_max=scene.l_max, n_freq=n_freq,
                           n_freq_points=counts)
