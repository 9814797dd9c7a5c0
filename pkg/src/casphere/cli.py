"""Command-line surface: scene files, sweeps, CSV output, selfcheck.

Scene files are versioned JSON documents::

    {
      "schema_version": 1,
      "units": "R1",                  # lengths in first-sphere radii
      "length_unit_m": 1e-6,          # optional: meters per length unit
      "temperature_kelvin": 0.0,
      "l_max": 3,
      "background": {"model": "constant", "eps": 1.0},
      "spheres": [
        {"label": "a", "center": [0, 0, 0], "radius": 1.0,
         "permittivity": {"model": "constant", "eps": 2.6}},
        {"label": "b", "center": [0, 0, 4], "radius": 1.0,
         "permittivity": {"model": "constant", "eps": 2.6}}
      ],
      "spectral": {"n_nodes": 40}     # optional SpectralSettings fields
    }

``units: "SI"`` instead interprets every length as meters and rescales
internally to first-sphere radii (length_unit_m is then implied).
Permittivity models: ``constant`` (eps), ``drude-lorentz``
(oscillators: [[amplitude, resonance, damping], ...] in the scene's
frequency unit), ``tabulated`` (xi, eps arrays, log-linear
interpolation).

CSV columns are fixed: sweep parameter, F_x, F_y, F_z (or V),
error_estimate, L_max, n_freq, exponent_scale.  Header comments echo
every input needed to reproduce a row except the worker count, which
cannot influence values: frequency points are evaluated independently
and reduced by a fixed-order pairwise sum, so output bytes are
identical for any ``--workers``.  Potential-type values (``V`` column)
are written in units of hbar c / 4 pi.

Exit codes: 0 success; 2 scene/sweep validation; 3 numerical flag
(non-finite result, error estimate dominating the value, gradient
audit failure, selfcheck failure); 4 I/O failure.
"""

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import __version__
from .mie import (ConstantPermittivity, DrudeLorentzPermittivity,
                  TabulatedPermittivity)
from .scattering import (SceneConfig, SphereSpec, casimir_force,
                         interaction_energy, potential_along_path,
                         three_body_energy, three_body_force)
from .spectral import SpectralSettings

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

SCHEMA_VERSION = 1

_FORCE_COLUMNS = ("sweep_param", "F_x", "F_y", "F_z", "error_estimate",
                  "L_max", "n_freq", "exponent_scale")
_SCALAR_COLUMNS = ("sweep_param", "V", "error_estimate",
                   "L_max", "n_freq", "exponent_scale")


class SceneParseError(ValueError):
    """Scene document invalid; message names the offending field."""


# ---------------------------------------------------------------- scenes

def _parse_permittivity(doc, where):
    if not isinstance(doc, dict) or "model" not in doc:
        raise SceneParseError(f"{where}: expected an object with a 'model'")
    model = doc["model"]
    try:
        if model == "constant":
            return ConstantPermittivity(float(doc["eps"]))
        if model == "drude-lorentz":
            osc = tuple(tuple(float(x) for x in row)
                        for row in doc["oscillators"])
            return DrudeLorentzPermittivity(osc)
        if model == "tabulated":
            return TabulatedPermittivity(np.asarray(doc["xi"], dtype=float),
                                         np.asarray(doc["eps"], dtype=float))
    except SceneParseError:
        raise
    except KeyError as exc:
        raise SceneParseError(f"{where}: missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise SceneParseError(f"{where}: {exc}") from exc
    raise SceneParseError(f"{where}.model: unknown model {model!r}")


def parse_scene(doc):
    """Validated SceneConfig from a decoded scene document."""
    if not isinstance(doc, dict):
        raise SceneParseError("scene: top level must be an object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SceneParseError(
            f"schema_version: expected {SCHEMA_VERSION}, got {version!r}")
    known = {"schema_version", "units", "length_unit_m",
             "temperature_kelvin", "l_max", "background", "spheres",
             "spectral"}
    for key in doc:
        if key not in known:
            raise SceneParseError(f"{key}: unknown scene field")
    units = doc.get("units", "R1")
    if units not in ("R1", "SI"):
        raise SceneParseError(f"units: expected 'R1' or 'SI', got {units!r}")
    raw = doc.get("spheres")
    if not isinstance(raw, list) or not raw:
        raise SceneParseError("spheres: expected a non-empty list")
    spheres = []
    for i, s in enumerate(raw):
        where = f"spheres[{i}]"
        try:
            spheres.append(SphereSpec(
                label=str(s["label"]),
                center=tuple(float(c) for c in s["center"]),
                radius=float(s["radius"]),
                permittivity=_parse_permittivity(
                    s["permittivity"], where + ".permittivity")))
        except SceneParseError:
            raise
        except KeyError as exc:
            raise SceneParseError(f"{where}: missing field {exc}") from exc
        except (TypeError, ValueError) as exc:
            raise SceneParseError(f"{where}: {exc}") from exc
    length_unit_m = float(doc.get("length_unit_m", 0.0))
    if units == "SI":
        if "length_unit_m" in doc:
            raise SceneParseError(
                "length_unit_m: implied by units='SI', do not set both")
        unit = spheres[0].radius
        length_unit_m = unit
        spheres = [replace(s, center=tuple(c / unit for c in s.center),
                           radius=s.radius / unit) for s in spheres]
    background = _parse_permittivity(
        doc.get("background", {"model": "constant", "eps": 1.0}),
        "background")
    spectral_doc = doc.get("spectral", {})
    if not isinstance(spectral_doc, dict):
        raise SceneParseError("spectral: expected an object")
    try:
        spectral = SpectralSettings(**spectral_doc)
    except TypeError as exc:
        raise SceneParseError(f"spectral: {exc}") from exc
    try:
        return SceneConfig(
            spheres=tuple(spheres),
            background=background,
            l_max=int(doc.get("l_max", 3)),
            temperature_kelvin=float(doc.get("temperature_kelvin", 0.0)),
            length_unit_m=length_unit_m,
            spectral=spectral)
    except ValueError as exc:
        raise SceneParseError(str(exc)) from exc


def load_scene(path):
    """Parse and validate a scene file; raises SceneParseError/OSError."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SceneParseError(
                f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return parse_scene(doc)


# ---------------------------------------------------------------- sweeps

@dataclass(frozen=True)
class SweepSpec:
    """Move one sphere along an axis: label:axis:start:stop:n[:log]."""
    label: str
    axis: str
    start: float
    stop: float
    n_points: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.axis not in ("x", "y", "z"):
            raise ValueError(f"sweep axis must be x, y or z, got {self.axis!r}")
        if not self.start < self.stop:
            raise ValueError("sweep needs start < stop")
        if self.n_points < 2:
            raise ValueError("sweep needs n_points >= 2")
        if self.spacing not in ("linear", "log"):
            raise ValueError(f"sweep spacing must be linear or log, "
                             f"got {self.spacing!r}")
        if self.spacing == "log" and self.start <= 0.0:
            raise ValueError("log spacing needs start > 0")

    def values(self):
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.n_points)
        return np.linspace(self.start, self.stop, self.n_points)


def parse_sweep(text):
    parts = text.split(":")
    if len(parts) not in (5, 6):
        raise ValueError(
            "sweep syntax: label:axis:start:stop:n_points[:spacing]")
    spacing = parts[5] if len(parts) == 6 else "linear"
    return SweepSpec(label=parts[0], axis=parts[1], start=float(parts[2]),
                     stop=float(parts[3]), n_points=int(parts[4]),
                     spacing=spacing)


def sweep_scenes(scene, sweep):
    """[(param, scene_with_moved_sphere)]; validates the whole path."""
    idx = scene.index_of(sweep.label)
    base = scene.spheres[idx].center_array
    axis = "xyz".index(sweep.axis)
    out = []
    for value in sweep.values():
        center = base.copy()
        center[axis] = value
        out.append((float(value), scene.moved(sweep.label, center)))
    return out


# ------------------------------------------------------------ CSV output

def _fmt(value):
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _write_rows(out, comments, columns, rows):
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _echo_comments(args, scene, extra=()):
    skip = {"workers", "func", "out"}
    bits = []
    for key in sorted(vars(args)):
        if key in skip or vars(args)[key] is None:
            continue
        bits.append(f"{key}={vars(args)[key]}")
    return [f"casphere {__version__}", " ".join(bits),
            f"scene: l_max={scene.l_max} T={scene.temperature_kelvin}K "
            f"spheres={[(s.label, s.center, s.radius) for s in scene.spheres]}",
            "V in hbar*c/(4 pi), F in hbar*c per length unit squared",
            *extra]


def _flagged(value, error):
    v = np.max(np.abs(np.atleast_1d(value)))
    e = np.max(np.abs(np.atleast_1d(error)))
    return (not np.all(np.isfinite(np.atleast_1d(value)))) \
        or (v > 0.0 and e > 0.5 * v) or (v == 0.0 and e > 1e-12)


# ------------------------------------------------------------ subcommands

def _apply_overrides(scene, args):
    if getattr(args, "lmax", None) is not None:
        scene = replace(scene, l_max=args.lmax)
    if getattr(args, "temperature", None) is not None:
        scene = replace(scene, temperature_kelvin=args.temperature)
    return scene


def _make_map_fn(workers):
    if workers <= 1:
        return map, None
    pool = ThreadPoolExecutor(max_workers=workers)
    return pool.map, pool


def _parse_order(text):
    if text == "resummed":
        return "resummed"
    k = int(text)
    if not 2 <= k <= 4:
        raise ValueError("fixed order must be 2, 3 or 4")
    return f"fixed({k})"


def _gradient_audit(scene, rel_tol=1e-6):
    """FD-vs-analytic check on every pair gradient at the peak frequency."""
    from .scattering import _decay_scale, _materials
    from .translation import gradient_fd_check
    xi_ref = 1.0 / _decay_scale(scene)
    kappa, _ = _materials(scene, xi_ref)
    worst = 0.0
    for i, si in enumerate(scene.spheres):
        for j, sj in enumerate(scene.spheres):
            if i >= j:
                continue
            d = si.center_array - sj.center_array
            worst = max(worst, gradient_fd_check(scene.basis, kappa, d))
    return worst, worst <= rel_tol


def run_force(args):
    scene = _apply_overrides(load_scene(args.scene), args)
    order = _parse_order(args.order)
    map_fn, pool = _make_map_fn(args.workers)
    try:
        if args.sweep:
            points = sweep_scenes(scene, parse_sweep(args.sweep))
        else:
            points = [(0.0, scene)]
        rows = []
        any_flagged = False
        for param, sc in points:
            if args.verify_gradient:
                worst, ok = _gradient_audit(sc)
                if not ok:
                    print(f"gradient audit failed at sweep={param}: "
                          f"max rel error {worst:.2e}", file=sys.stderr)
                    return EXIT_NUMERICAL
            res = casimir_force(sc, args.target, order=order, map_fn=map_fn)
            err = float(np.max(res.error))
            any_flagged |= _flagged(res.force, res.error)
            rows.append((param, float(res.force[0]), float(res.force[1]),
                         float(res.force[2]), err, res.l_max, res.n_freq,
                         res.exponent_scale))
        _write_rows(args.out, _echo_comments(args, scene),
                    _FORCE_COLUMNS, rows)
        if any_flagged:
            print("numerical flag: error estimate dominates at least one "
                  "row", file=sys.stderr)
            return EXIT_NUMERICAL
        return EXIT_OK
    finally:
        if pool is not None:
            pool.shutdown()


def run_potential(args):
    scene = _apply_overrides(load_scene(args.scene), args)
    map_fn, pool = _make_map_fn(args.workers)
    try:
        points = sweep_scenes(scene, parse_sweep(args.sweep))
        positions = [sc.spheres[sc.index_of(args.target)].center_array
                     for _, sc in points]
        res = potential_along_path(scene, args.target, positions,
                                   map_fn=map_fn)
        four_pi = 4.0 * math.pi
        rows = []
        for i, (param, _) in enumerate(points):
            rows.append((param, res.potential[i] * four_pi,
                         res.error[i] * four_pi, res.l_max,
                         res.n_freq_points[i], 0.0))
        comments = _echo_comments(
            args, scene,
            (f"tail_exponent={res.tail_exponent} tail_ok={res.tail_ok}",))
        _write_rows(args.out, comments, _SCALAR_COLUMNS, rows)
        if not res.tail_ok or _flagged(res.potential, res.error):
            print("numerical flag: power-law tail not established or "
                  "error dominates", file=sys.stderr)
            return EXIT_NUMERICAL
        return EXIT_OK
    finally:
        if pool is not None:
            pool.shutdown()


def run_three_body(args):
    scene = _apply_overrides(load_scene(args.scene), args)
    map_fn, pool = _make_map_fn(args.workers)
    try:
        if args.sweep:
            points = sweep_scenes(scene, parse_sweep(args.sweep))
        else:
            points = [(0.0, scene)]
        rows = []
        any_flagged = False
        if args.quantity == "force":
            for param, sc in points:
                res = three_body_force(sc, args.target, map_fn=map_fn)
                any_flagged |= not np.all(np.isfinite(res.force))
                rows.append((param, float(res.force[0]), float(res.force[1]),
                             float(res.force[2]), float(np.max(res.error)),
                             res.l_max, res.n_freq, res.exponent_scale))
            columns = _FORCE_COLUMNS
        else:
            four_pi = 4.0 * math.pi
            for param, sc in points:
                val, err, n_freq = three_body_energy(sc, map_fn=map_fn)
                any_flagged |= not math.isfinite(val)
                rows.append((param, val * four_pi, err * four_pi,
                             sc.l_max, n_freq, 0.0))
            columns = _SCALAR_COLUMNS
        _write_rows(args.out, _echo_comments(args, scene), columns, rows)
        if any_flagged:
            print("numerical flag: non-finite three-body result",
                  file=sys.stderr)
            return EXIT_NUMERICAL
        return EXIT_OK
    finally:
        if pool is not None:
            pool.shutdown()


def run_large_n(args):
    from .largen import (LargeNParams, largen_asymptotic,
                         largen_potential_integral)
    if args.n_range:
        lo, hi = (int(x) for x in args.n_range.split(":"))
        ns = range(lo, hi + 1)
    else:
        ns = [args.n]
    rows = []
    for n in ns:
        params = LargeNParams(n=n, alpha_s=args.alpha_s, radius=args.radius,
                              separation=args.separation)
        if args.method == "asymptotic":
            res = largen_asymptotic(params)
        else:
            res = largen_potential_integral(params)
        mag = res.magnitude if res.log_magnitude < 700.0 else math.inf
        # the integral is Gauss-Laguerre-exact for the polynomial hop
        # amplitude; only rounding remains
        rows.append((float(n), mag, mag * 1e-14, 1, 0, res.log_magnitude))
    comments = [f"casphere {__version__}",
                f"large-n method={args.method} alpha_s={args.alpha_s} "
                f"radius={args.radius} separation={args.separation}",
                "V column is |V| in hbar*c units; sign alternates as "
                "(-1)^N with unresolved overall orientation",
                "exponent_scale column carries ln|V| (log-domain value)"]
    _write_rows(args.out, comments, _SCALAR_COLUMNS, rows)
    return EXIT_OK


def _selfcheck_rows():
    import time

    from .basis import basis_enumerate
    from .rotation import rotate_block
    from .specfun import mod_sph_bessel, mod_sph_bessel_dx
    from .translation import (KIND_OUTGOING, translation_matrix,
                              translation_matrix_direct)
    rows = []

    def add(name, err, tol):
        rows.append((name, err, tol, "pass" if err <= tol else "FAIL"))

    # Wronskian of the radial pair: i_l e_l' - e_l i_l' = (-1)^(l+1)/x^2
    worst = 0.0
    for l in range(0, 6):
        for x in (0.3, 2.0, 17.0):
            i_v = mod_sph_bessel("i", l, x)
            e_v = (-1) ** l * (2 / math.pi) * mod_sph_bessel("k", l, x)
            i_d = mod_sph_bessel_dx("i", l, x)
            e_d = (-1) ** l * (2 / math.pi) * mod_sph_bessel_dx("k", l, x)
            want = (-1.0) ** (l + 1) / x ** 2
            worst = max(worst, abs(i_v * e_d - e_v * i_d - want) / abs(want))
    add("radial Wronskian", worst, 1e-11)

    basis = basis_enumerate(2)
    rng = np.random.default_rng(12345)
    d = rng.normal(size=3)
    blk_a = translation_matrix(basis, KIND_OUTGOING, 0.9, d)
    blk_b = translation_matrix_direct(basis, KIND_OUTGOING, 0.9, d)
    add("translation dual route",
        float(np.abs(blk_a.matrix - blk_b.matrix).max()), 1e-11)

    rot = rotate_block(basis, 0.5, 1.1, -0.3)
    add("rotation orthogonality",
        float(np.abs(rot @ rot.T - np.eye(basis.size)).max()), 1e-12)

    eps = ConstantPermittivity(2.6)
    sc = SceneConfig(spheres=(SphereSpec("a", (0, 0, 0), 1.0, eps),
                              SphereSpec("b", (0, 0, 4.0), 1.0, eps)),
                     l_max=2)
    fa = casimir_force(sc, "a", truncation_error=False).force
    fb = casimir_force(sc, "b", truncation_error=False).force
    add("Newton third law", float(np.abs(fa + fb).max()
                                  / np.abs(fb).max()), 1e-11)

    eps_d = ConstantPermittivity(1.01)
    sd = SceneConfig(spheres=(SphereSpec("a", (0, 0, 0), 0.01, eps_d),
                              SphereSpec("b", (0, 0, 1.0), 0.01, eps_d)),
                     l_max=1)
    e_num, _, _ = interaction_energy(sd)
    alpha = 0.01 ** 3 * (1.01 - 1.0) / (1.01 + 2.0)
    e_cp = -23.0 * alpha * alpha / (4.0 * math.pi)
    add("dipole limit vs closed form", abs(e_num / e_cp - 1.0), 1e-2)

    f_an = casimir_force(sc, "b", truncation_error=False).force[2]
    h = 4.0e-3
    e_p, _, _ = interaction_energy(sc.moved("b", (0, 0, 4.0 + h)))
    e_m, _, _ = interaction_energy(sc.moved("b", (0, 0, 4.0 - h)))
    add("force vs -dE/dd", abs(-(e_p - e_m) / (2 * h) / f_an - 1.0), 1e-3)

    _ = time.time()
    return rows


def run_selfcheck(args):
    rows = _selfcheck_rows()
    width = max(len(r[0]) for r in rows)
    ok = True
    for name, err, tol, status in rows:
        ok &= status == "pass"
        print(f"{name:<{width}}  {err:12.3e}  (tol {tol:.0e})  {status}")
    print("selfcheck:", "all pass" if ok else "FAILURES")
    return EXIT_OK if ok else EXIT_NUMERICAL


# ---------------------------------------------------------------- parser

def _add_common(p, target=True, sweep_required=False):
    p.add_argument("--scene", required=True, help="scene JSON file")
    if target:
        p.add_argument("--target", required=True,
                       help="label of the sphere the result refers to")
    p.add_argument("--sweep", required=sweep_required, default=None,
                   help="label:axis:start:stop:n_points[:spacing]")
    p.add_argument("--lmax", type=int, default=None,
                   help="override the scene's multipole cutoff")
    p.add_argument("--temperature", type=float, default=None,
                   help="override the scene's temperature (kelvin)")
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.add_argument("--workers", type=int, default=1,
                   help="threads for frequency points; output is "
                        "byte-identical for any value")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="casphere",
        description="Casimir forces between dielectric spheres by "
                    "multiple scattering")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("force", help="force on a target sphere")
    _add_common(p)
    p.add_argument("--order", default="resummed",
                   help="'resummed' or a fixed scattering order 2..4")
    p.add_argument("--verify-gradient", action="store_true",
                   help="audit analytic translation gradients against "
                        "finite differences at every sweep point")
    p.set_defaults(func=run_force)

    p = sub.add_parser("potential",
                       help="potential along a receding sweep path")
    _add_common(p, sweep_required=True)
    p.set_defaults(func=run_potential)

    p = sub.add_parser("three-body",
                       help="non-additive three-sphere remainder")
    _add_common(p)
    p.add_argument("--quantity", choices=("potential", "force"),
                   default="potential")
    p.set_defaults(func=run_three_body)

    p = sub.add_parser("large-n", help="large-N weak-coupling estimate")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--n-range", default=None, help="lo:hi inclusive")
    p.add_argument("--alpha-s", type=float, required=True)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--separation", type=float, required=True)
    p.add_argument("--method", choices=("integral", "asymptotic"),
                   default="integral")
    p.add_argument("--out", default=None)
    p.set_defaults(func=run_large_n)

    p = sub.add_parser("selfcheck", help="run the built-in invariant suite")
    p.set_defaults(func=run_selfcheck)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "large-n" and (args.n is None) == (args.n_range is None):
        print("large-n: give exactly one of --n or --n-range",
              file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return args.func(args)
    except (SceneParseError, ValueError, KeyError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (RuntimeError, OverflowError, FloatingPointError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
