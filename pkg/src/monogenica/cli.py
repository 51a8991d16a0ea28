"""Command-line experiments.

    monogenica algebra-check | polygen | reconstruct | spectrum | series | probe

Tables go to ``--out`` (stdout by default) as CSV; JSON artifacts go to
``--json``.  Settings come from flags, then ``--config`` (a JSON file),
then built-in defaults.  Exit status is 0 when every check passes, 1 on a
numeric failure and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field, fields
from pathlib import Path

import numpy as np

from .algebra import (
    MAX_DIMENSION,
    Signature,
    SignatureError,
    algebra,
    dual,
    euclidean,
    grade_project,
    inverse_pseudoscalar,
    mv_inner,
    mv_norm,
    mv_norm_sq,
    project_blade,
    reverse,
)
from .cauchy import (
    MarginError,
    DomainError,
    RegionSpec,
    TraceSamples,
    cauchy_reconstruct,
    make_quadrature,
    series_coefficients,
)
from .dirac import Field, monogenicity_report
from .monogenic import (
    build_poly,
    coefficients_to_json,
    count_multi_indices,
    eval_series,
    multi_indices,
    polynomials_to_json,
    z_value,
)
from .spectrum import (
    CharacterTable,
    InconsistentCharacterError,
    character_from_point,
    consistency_residual,
    recover_point,
    sample_region,
    interior_grid,
    singular_probe,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    n: int = 3
    signature: tuple[int, int] | None = None
    degree: int = 2
    region: RegionSpec | None = None
    resolution: object = None
    h: float = 1e-4
    tol: float | None = None
    seed: int = 0
    out: str | None = None
    json: str | None = None
    points: int | None = None
    field: str = "z12"
    trace: str | None = None
    fd_step: float = 1e-3
    noise: float = 0.0
    samples: int = 200
    steps: int = 6
    extras: dict = dc_field(default_factory=dict)

    def validate(self):
        if self.signature is not None:
            p, q = self.signature
            try:
                Signature(p, q)
            except SignatureError as exc:
                raise UsageError(str(exc)) from exc
            self.n = p + q
        if not 1 <= self.n <= MAX_DIMENSION:
            raise UsageError(f"n={self.n} exceeds the dense cap of {MAX_DIMENSION}")
        for name in ("h", "fd_step"):
            if getattr(self, name) <= 0:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        if self.tol is not None and self.tol <= 0:
            raise UsageError("--tol must be positive")
        if self.degree < 0:
            raise UsageError("--degree must be nonnegative")
        if self.points is not None and self.points <= 0:
            raise UsageError("--points must be positive")
        if self.noise < 0:
            raise UsageError("--noise must be nonnegative")
        if self.region is not None and self.region.n != self.n:
            self.n = self.region.n
        return self


DEFAULTS = {f.name: f.default for f in fields(RunConfig) if f.name not in ("command", "extras")}


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("MONOGENICA_THREADS", "1")))
    except ValueError:
        return 1


def _fmt(v) -> str:
    return repr(float(v))


class _Table:
    def __init__(self, header):
        self.header = list(header)
        self.rows = []

    def add(self, *row):
        self.rows.append([c if isinstance(c, str) else _fmt(c) if isinstance(c, (float, np.floating)) else str(c) for c in row])

    def write(self, path):
        stream = open(path, "w", newline="") if path else sys.stdout
        try:
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(self.header)
            writer.writerows(self.rows)
        finally:
            if path:
                stream.close()


def _write_json(path, text):
    if path:
        Path(path).write_text(text + "\n")


def parse_field(name: str, n: int):
    """Analytic monogenic sources: ``one``, ``zIJ`` (e.g. ``z12``) or ``p:k2,...,kn``."""
    alg = algebra(n)
    if name == "one":
        return lambda x: alg.scalar(np.ones(np.asarray(x).shape[:-1]))
    if name.startswith("z") and len(name) == 3 and name[1:].isdigit():
        i, j = int(name[1]), int(name[2])
        return lambda x: z_value(i, j, x)
    if name.startswith("p:"):
        mi = tuple(int(k) for k in name[2:].split(","))
        if len(mi) != n - 1:
            raise UsageError(f"multi-index {mi} needs {n - 1} entries for n={n}")
        return build_poly(mi)
    raise UsageError(f"unknown field {name!r}; use one, zIJ or p:k2,...,kn")


def _rng(cfg):
    return np.random.default_rng(cfg.seed)


# -- algebra-check ---------------------------------------------------------

def _algebra_rows(cfg: RunConfig):
    sig = Signature(*cfg.signature) if cfg.signature else euclidean(cfg.n)
    alg = algebra(sig)
    rng = _rng(cfg)
    m = cfg.samples
    tol = cfg.tol if cfg.tol is not None else 1e-10
    rows = []

    def rand(grades=None):
        return alg.random(rng, m, grades)

    a, b, c = rand(), rand(), rand()
    rows.append(("associativity", np.max(np.abs(((a * b) * c).coeffs - (a * (b * c)).coeffs))))
    v, w = rand([1]), rand([1])
    rows.append(("vector_product_split", np.max(np.abs((v * w).coeffs - ((v | w) + (v ^ w)).coeffs))))
    rows.append(("reverse_antiautomorphism", np.max(np.abs(reverse(a * b).coeffs - (reverse(b) * reverse(a)).coeffs))))
    rows.append(("reverse_involution", np.max(np.abs(reverse(reverse(a)).coeffs - a.coeffs))))
    rows.append(("adjoint_identity", np.max(np.abs(mv_inner(c * a, b) - mv_inner(a, reverse(c) * b)))))
    rows.append(("inner_symmetric", np.max(np.abs(mv_inner(a, b) - mv_inner(b, a)))))
    sign = float((inverse_pseudoscalar(sig) * inverse_pseudoscalar(sig)).scalar)
    rows.append(("dual_dual_sign", np.max(np.abs(dual(dual(a)).coeffs - sign * a.coeffs))))
    rows.append(("dual_exchange", np.max(np.abs(dual(a << b).coeffs - (a ^ dual(b)).coeffs))))
    if sig.n >= 2:
        # unit coordinate 2-blade and a random versor-built unit blade
        u = alg.blade(sig.start, sig.start + 1)
        pa = project_blade(a, u)
        rows.append(("projection_idempotent", np.max(np.abs(project_blade(pa, u).coeffs - pa.coeffs))))
        leak = max(float(np.max(np.abs(project_blade(grade_project(a, k), u).coeffs * (alg.grades != k)))) for k in range(sig.n + 1))
        rows.append(("projection_grade_preserving", leak))
    if sig.euclidean:
        ev = alg.random(rng, m, range(0, sig.n + 1, 2)) if sig.n <= 3 else None
        if ev is not None:
            rows.append(("cstar_identity_spinors", np.max(np.abs(mv_norm(reverse(ev) * ev) - mv_norm(ev) ** 2) / mv_norm(ev) ** 2)))
        x, y = _versors(alg, rng, m), _versors(alg, rng, m)
        rows.append(("cstar_identity_versors", np.max(np.abs(mv_norm(reverse(x) * x) - mv_norm(x) ** 2) / mv_norm(x) ** 2)))
        excess = (mv_norm(x * y) - mv_norm(x) * mv_norm(y)) / (mv_norm(x) * mv_norm(y))
        rows.append(("submultiplicative_versors", max(0.0, float(np.max(excess)))))
    rows.extend(_fixtures(sig, rng))
    return [(name, float(r), float(r) <= tol) for name, r in rows]


def _versors(alg, rng, m):
    out = alg.vector(rng.standard_normal((m, alg.n)))
    for _ in range(2):
        out = out * alg.vector(rng.standard_normal((m, alg.n)))
    return out


def _fixtures(sig, rng):
    rows = []
    alg = algebra(sig)
    if sig.euclidean and sig.n >= 4:
        rows.append(("E123_E124", np.max(np.abs((alg.blade(1, 2, 3) * alg.blade(1, 2, 4)).coeffs + alg.blade(3, 4).coeffs))))
    if sig.euclidean and sig.n == 3:
        B12, B13, B23 = alg.blade(1, 2), alg.blade(1, 3), alg.blade(2, 3)
        rows.append(("bivector_squares", max(np.max(np.abs((B * B).coeffs + alg.scalar(1).coeffs)) for B in (B12, B13, B23))))
        rows.append(("B23_B13_B12", np.max(np.abs((B23 * B13 * B12).coeffs + alg.scalar(1).coeffs))))
        rows.append(("unit_trivector", abs(float(mv_norm(alg.pseudoscalar)) - 1)))
    metric = list(sig.metric)
    if sig.n == 4 and sorted([metric.count(1), metric.count(-1)]) == [1, 3]:
        # spacetime: the odd one out is temporal, the other three span space
        odd = 1 if metric.count(1) == 1 else -1
        spatial = [i + sig.start for i, s in enumerate(metric) if s != odd]
        T = alg.blade(*spatial)
        rows.append(("spatial_trivector_unit", abs(abs(float(mv_norm_sq(T))) - 1)))
        A = alg.random(rng)
        spatial_bits = sum(alg.bit(i) for i in spatial)
        keep = (alg.blades & ~spatial_bits) == 0
        rows.append(("spacetime_projection", np.max(np.abs(project_blade(A, T).coeffs - A.coeffs * keep))))
    return rows


def cmd_algebra_check(cfg: RunConfig) -> int:
    table = _Table(["identity", "max_residual", "pass"])
    ok = True
    for name, residual, passed in _algebra_rows(cfg):
        table.add(name, residual, "pass" if passed else "fail")
        ok &= passed
    table.write(cfg.out)
    return EXIT_OK if ok else EXIT_FAIL


# -- polygen ---------------------------------------------------------------

def cmd_polygen(cfg: RunConfig) -> int:
    n, K = cfg.n, cfg.degree
    if n < 2:
        raise UsageError("polygen needs n >= 2")
    if K > 4:
        warnings.warn("finite-difference residuals lose accuracy beyond degree 4", stacklevel=2)
        print("warning: degree > 4, finite-difference residuals lose accuracy", file=sys.stderr)
    tol = cfg.tol if cfg.tol is not None else 1e-6
    rng = _rng(cfg)
    pts = sample_region(RegionSpec.unit_ball(n), cfg.points or 20, rng)
    polys = [build_poly(mi) for k in range(K + 1) for mi in multi_indices(n, k)]
    table = _Table(["degree", "multi_index", "terms", "max_residual", "pass"])
    ok = True
    for p in polys:
        r = monogenicity_report(Field(n, p), pts, cfg.h)
        table.add(p.degree, " ".join(map(str, p.mi)), len(p.words), r, "pass" if r < tol else "fail")
        ok &= r < tol
    counts_ok = all(len(multi_indices(n, k)) == count_multi_indices(n, k) for k in range(K + 1))
    _write_json(cfg.json, polynomials_to_json(n, polys))
    table.write(cfg.out)
    return EXIT_OK if ok and counts_ok else EXIT_FAIL


# -- reconstruct -----------------------------------------------------------

def _region(cfg: RunConfig) -> RegionSpec:
    return cfg.region if cfg.region is not None else RegionSpec.unit_ball(cfg.n)


def _eval_points(cfg: RunConfig, spec: RegionSpec) -> np.ndarray:
    if "eval_points" in cfg.extras:
        return np.atleast_2d(np.asarray(cfg.extras["eval_points"], dtype=float))
    rng = _rng(cfg)
    pts = sample_region(spec, cfg.points or 10, rng)
    # stay inside half the region scale, where the default margin is comfortable
    return np.asarray(spec.center) + 0.5 * (pts - np.asarray(spec.center))


def cmd_reconstruct(cfg: RunConfig) -> int:
    spec = _region(cfg)
    tol = cfg.tol if cfg.tol is not None else 1e-3
    if cfg.trace:
        trace = TraceSamples.from_csv(Path(cfg.trace).read_text(), spec)
        exact = None
    else:
        exact = parse_field(cfg.field, spec.n)
        trace = TraceSamples.sample(make_quadrature(spec, cfg.resolution), exact)
    pts = _eval_points(cfg, spec)
    alg = algebra(spec.n)
    names = [alg.blade_name(b) for b in range(alg.size)]
    table = _Table(
        ["point"] + [f"x{i + 1}" for i in range(spec.n)] + ["status"]
        + [f"exact_{b}" for b in names] + [f"recon_{b}" for b in names] + ["abs_error"]
    )

    def one(x):
        try:
            return "ok", cauchy_reconstruct(trace, x)
        except MarginError:
            return "margin", None
        except DomainError:
            return "outside", None

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        results = list(pool.map(one, pts))
    ok = True
    for k, (x, (status, rec)) in enumerate(zip(pts, results)):
        blank = [""] * alg.size
        if rec is None:
            table.add(k, *x, status, *blank, *blank, "")
            continue
        if exact is None:
            table.add(k, *x, status, *blank, *rec.coeffs, "")
            continue
        ex = exact(x)
        err = float(np.max(np.abs(ex.coeffs - rec.coeffs)))
        ok &= err < tol
        table.add(k, *x, status, *ex.coeffs, *rec.coeffs, err)
    table.write(cfg.out)
    return EXIT_OK if ok else EXIT_FAIL


# -- spectrum --------------------------------------------------------------

def _perturb(t: CharacterTable, rng, noise: float) -> CharacterTable:
    if noise == 0:
        return t
    shape = t.alpha.shape
    return CharacterTable(t.alpha + noise * rng.uniform(-1, 1, shape), t.beta + noise * rng.uniform(-1, 1, shape))


def cmd_spectrum(cfg: RunConfig) -> int:
    spec = _region(cfg)
    rng = _rng(cfg)
    tol = cfg.tol if cfg.tol is not None else max(1e-9, 8 * cfg.noise)
    bound = 10 * cfg.noise
    pts = sample_region(spec, cfg.points or 100, rng)
    n = spec.n
    table = _Table(
        ["point"] + [f"x{i + 1}" for i in range(n)] + [f"recovered{i + 1}" for i in range(n)]
        + ["consistency_residual", "recovery_error", "inside"]
    )
    ok = True
    for k, x in enumerate(pts):
        t = _perturb(character_from_point(x), rng, cfg.noise)
        res = consistency_residual(t)
        try:
            xr = recover_point(t, tol)
        except InconsistentCharacterError:
            ok = False
            table.add(k, *x, *[""] * n, res, "", "inconsistent")
            continue
        err = float(np.max(np.abs(xr - x)))
        inside = bool(spec.contains(xr))
        ok &= err <= bound and inside
        table.add(k, *x, *xr, res, err, "yes" if inside else "no")
    table.write(cfg.out)
    return EXIT_OK if ok else EXIT_FAIL


# -- series ----------------------------------------------------------------

def cmd_series(cfg: RunConfig) -> int:
    spec = _region(cfg)
    if spec.kind != "ball":
        raise UsageError("series needs a ball region")
    if any(c != 0 for c in spec.center):
        raise UsageError("series expands about the origin; centre the ball at 0")
    tol = cfg.tol if cfg.tol is not None else 1e-3
    f = parse_field(cfg.field, spec.n)
    trace = TraceSamples.sample(make_quadrature(spec, cfg.resolution), f)
    coeffs = series_coefficients(trace, cfg.degree, cfg.fd_step)
    _write_json(cfg.json, coefficients_to_json(spec.n, coeffs))
    rng = _rng(cfg)
    pts = sample_region(RegionSpec.ball(spec.center, 0.5 * spec.size[0]), cfg.points or 20, rng)
    err = np.max(np.abs(eval_series(coeffs, pts, cfg.degree).coeffs - f(pts).coeffs), axis=-1)
    table = _Table(["point"] + [f"x{i + 1}" for i in range(spec.n)] + ["abs_error"])
    for k, (x, e) in enumerate(zip(pts, err)):
        table.add(k, *x, e)
    table.write(cfg.out)
    return EXIT_OK if np.max(err) < tol else EXIT_FAIL


# -- probe -----------------------------------------------------------------

def cmd_probe(cfg: RunConfig) -> int:
    spec = _region(cfg)
    grid = interior_grid(spec, cfg.points or 100)
    direction = np.zeros(spec.n)
    direction[0] = 1.0
    edge = np.asarray(spec.center) + direction * spec.size[0]
    table = _Table(["m"] + [f"pole{i + 1}" for i in range(spec.n)] + ["distance", "sup_norm"])
    sups = []
    for m in range(1, cfg.steps + 1):
        x0 = edge + direction * spec.scale / m
        s = singular_probe(spec, x0, grid)
        sups.append(s)
        table.add(m, *x0, float(spec.signed_distance(x0)), s)
    table.write(cfg.out)
    return EXIT_OK if all(b > a for a, b in zip(sups, sups[1:])) else EXIT_FAIL


COMMANDS = {
    "algebra-check": cmd_algebra_check,
    "polygen": cmd_polygen,
    "reconstruct": cmd_reconstruct,
    "spectrum": cmd_spectrum,
    "series": cmd_series,
    "probe": cmd_probe,
}


def _parse_signature(text: str) -> tuple[int, int]:
    try:
        p, q = (int(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("signature must look like p,q") from exc
    return p, q


def _parse_resolution(text: str):
    parts = [int(v) for v in text.replace("x", ",").split(",")]
    return parts[0] if len(parts) == 1 else tuple(parts)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file of settings; flags take precedence")
    common.add_argument("--n", type=int)
    common.add_argument("--signature", type=_parse_signature, help="p,q: p vectors square to +1, q to -1")
    common.add_argument("--degree", type=int)
    common.add_argument("--region", help="region JSON, inline or a file path")
    common.add_argument("--resolution", type=_parse_resolution, help="node budget or grid, e.g. 8192 or 64x128")
    common.add_argument("--h", type=float, help="finite-difference step")
    common.add_argument("--tol", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="CSV output path (default stdout)")
    common.add_argument("--json", help="JSON artifact path")
    common.add_argument("--points", type=int, help="number of sample points")
    common.add_argument("--field", help="analytic source: one, zIJ or p:k2,...,kn")
    common.add_argument("--trace", help="trace CSV to reconstruct from")
    common.add_argument("--fd-step", dest="fd_step", type=float)
    common.add_argument("--noise", type=float, help="uniform perturbation of character tables")
    common.add_argument("--samples", type=int, help="random samples per identity")
    common.add_argument("--steps", type=int, help="probe sweep length")
    common.add_argument("--eval-points", dest="eval_points", help="JSON list of evaluation points")

    parser = argparse.ArgumentParser(prog="monogenica", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _load_region(value):
    if value is None or isinstance(value, RegionSpec):
        return value
    if isinstance(value, dict):
        return RegionSpec.from_json(json.dumps(value))
    text = value.strip()
    if not text.startswith("{"):
        text = Path(text).read_text()
    return RegionSpec.from_json(text)


def make_config(args: argparse.Namespace) -> RunConfig:
    settings = dict(DEFAULTS)
    if args.config:
        try:
            settings.update(json.loads(Path(args.config).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
    extras = {}
    for key, value in vars(args).items():
        if key in ("command", "config") or value is None:
            continue
        if key == "eval_points":
            extras["eval_points"] = json.loads(value)
            continue
        settings[key] = value
    if "eval_points" in settings:
        extras["eval_points"] = settings.pop("eval_points")
    unknown = set(settings) - set(DEFAULTS)
    if unknown:
        raise UsageError(f"unknown settings {sorted(unknown)}")
    if isinstance(settings.get("signature"), list):
        settings["signature"] = tuple(settings["signature"])
    if isinstance(settings.get("resolution"), list):
        settings["resolution"] = tuple(settings["resolution"])
    try:
        settings["region"] = _load_region(settings["region"])
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"bad region: {exc}") from exc
    if settings["region"] is not None and settings["region"].resolution is not None and settings["resolution"] is None:
        res = settings["region"].resolution
        settings["resolution"] = tuple(res) if isinstance(res, list) else res
    return RunConfig(command=args.command, extras=extras, **settings).validate()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = make_config(args)
        return COMMANDS[cfg.command](cfg)
    except (UsageError, SignatureError) as exc:
        print(f"monogenica: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
