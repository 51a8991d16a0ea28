"""Green's function of the Dirac operator, boundary quadrature and Cauchy integrals.

For a left-monogenic field ``f`` on a compact region ``M`` of ``R^n``,

    f(x) = sign * integral over dM of G(y - x) nu(y) f(y) dS(y),
    G(x) = x / (omega_n |x|^n),

with ``nu`` the outward unit normal and ``omega_n`` the area of the unit
sphere.  The orientation factor ``sign`` is calibrated numerically from the
constant field (see :func:`calibrate_sign`) and frozen in
:data:`CAUCHY_SIGN`.

Power-series coefficients about the centre of a ball are quadratures of
mixed partials of ``G`` against the trace.  The raw integrals carry a factor
per degree relative to the coefficients consumed by
:func:`monogenica.monogenic.eval_series`; it is calibrated by a round trip on
``z_12`` (:func:`calibrate_series_factor`) and frozen in
:data:`SERIES_DEGREE_FACTOR`.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Sequence

import numpy as np

from .algebra import Multivector, algebra
from .monogenic import MultiIndex, multi_indices, z_value

# orientation factor of the Cauchy integral, per dimension; from calibrate_sign()
CAUCHY_SIGN = {2: 1.0, 3: 1.0}
# raw series integrals pick up this factor once per degree; from calibrate_series_factor()
SERIES_DEGREE_FACTOR = -1.0
DEFAULT_MARGIN = 0.1
DEFAULT_FD_STEP = 1e-3
MAX_SERIES_DEGREE = 4


class SingularityError(ValueError):
    pass


class MarginError(ValueError):
    pass


class DomainError(ValueError):
    pass


def sphere_area(n: int) -> float:
    """Area of the unit sphere in ``R^n``: ``2 pi^(n/2) / Gamma(n/2)``."""
    if n < 2:
        raise ValueError("sphere_area needs n >= 2")
    return 2 * math.pi ** (n / 2) / math.gamma(n / 2)


def greens(x) -> Multivector:
    """Vector-valued ``G(x) = x / (omega_n |x|^n)``, batched over leading axes."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    r = np.linalg.norm(x, axis=-1)
    if np.any(r < 1e-12):
        raise SingularityError("Green's function evaluated at its pole")
    return algebra(n).vector(x / (sphere_area(n) * r[..., None] ** n))


def _greens_coeffs(x: np.ndarray) -> np.ndarray:
    # vector components only; avoids building full multivectors inside stencils
    n = x.shape[-1]
    r = np.linalg.norm(x, axis=-1, keepdims=True)
    return x / (sphere_area(n) * r**n)


@dataclass(frozen=True)
class RegionSpec:
    kind: str
    center: tuple[float, ...]
    size: tuple[float, ...]  # (radius,) for balls, half-widths for boxes
    resolution: object = None

    def __post_init__(self):
        if self.kind not in ("ball", "box"):
            raise ValueError(f"unknown region kind {self.kind!r}")
        if any(s <= 0 for s in self.size):
            raise ValueError("region sizes must be positive")
        if self.kind == "ball" and len(self.size) != 1:
            raise ValueError("a ball takes a single radius")
        if self.kind == "box" and len(self.size) != len(self.center):
            raise ValueError("a box needs one half-width per axis")

    @classmethod
    def ball(cls, center: Sequence[float], radius: float = 1.0, resolution=None) -> "RegionSpec":
        return cls("ball", tuple(float(c) for c in center), (float(radius),), resolution)

    @classmethod
    def box(cls, center: Sequence[float], half_widths, resolution=None) -> "RegionSpec":
        center = tuple(float(c) for c in center)
        if np.isscalar(half_widths):
            half_widths = (half_widths,) * len(center)
        return cls("box", center, tuple(float(h) for h in half_widths), resolution)

    @classmethod
    def unit_ball(cls, n: int) -> "RegionSpec":
        return cls.ball((0.0,) * n, 1.0)

    @property
    def n(self) -> int:
        return len(self.center)

    @property
    def scale(self) -> float:
        return min(self.size)

    def signed_distance(self, x) -> np.ndarray:
        """Negative inside, zero on the boundary, positive outside."""
        d = np.asarray(x, dtype=float) - np.asarray(self.center)
        if self.kind == "ball":
            return np.linalg.norm(d, axis=-1) - self.size[0]
        q = np.abs(d) - np.asarray(self.size)
        outside = np.linalg.norm(np.maximum(q, 0.0), axis=-1)
        inside = np.minimum(np.max(q, axis=-1), 0.0)
        return outside + inside

    def contains(self, x) -> np.ndarray:
        return self.signed_distance(x) <= 0

    def to_json(self) -> str:
        doc = {"kind": self.kind, "center": list(self.center), "n": self.n}
        if self.kind == "ball":
            doc["radius"] = self.size[0]
        else:
            doc["half_widths"] = list(self.size)
        if self.resolution is not None:
            doc["resolution"] = self.resolution
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "RegionSpec":
        doc = json.loads(text) if isinstance(text, str) else dict(text)
        kind = doc["kind"]
        center = doc.get("center")
        n = doc.get("n")
        if center is None:
            if n is None:
                raise ValueError("region needs a center or n")
            center = [0.0] * int(n)
        if n is not None and int(n) != len(center):
            raise ValueError(f"center has {len(center)} coordinates but n={n}")
        if kind == "ball":
            return cls.ball(center, doc.get("radius", 1.0), doc.get("resolution"))
        if kind == "box":
            return cls.box(center, doc.get("half_widths", doc.get("half_width", 1.0)), doc.get("resolution"))
        raise ValueError(f"unknown region kind {kind!r}")


@dataclass(frozen=True)
class BoundaryQuadrature:
    nodes: np.ndarray
    normals: np.ndarray
    weights: np.ndarray
    region: RegionSpec | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return self.nodes.shape[-1]

    def __len__(self):
        return len(self.weights)

    @property
    def area(self) -> float:
        return float(np.sum(self.weights))


def _ball_quadrature(spec: RegionSpec, resolution) -> BoundaryQuadrature:
    n, r, c = spec.n, spec.size[0], np.asarray(spec.center)
    if n == 2:
        m = int(resolution)
        if m < 8:
            raise ValueError("circle rule needs at least 8 nodes")
        t = 2 * np.pi * np.arange(m) / m
        normals = np.stack([np.cos(t), np.sin(t)], axis=-1)
        weights = np.full(m, 2 * np.pi * r / m)
    elif n == 3:
        if np.isscalar(resolution):
            n_polar = max(2, int(round(math.sqrt(int(resolution) / 2))))
            n_azimuth = 2 * n_polar
        else:
            n_polar, n_azimuth = (int(v) for v in resolution)
        if n_polar < 2 or n_azimuth < 4:
            raise ValueError("sphere rule needs at least 2 x 4 nodes")
        # Gauss-Legendre in cos(polar angle) times the trapezoid rule in azimuth
        u, wu = np.polynomial.legendre.leggauss(n_polar)
        phi = 2 * np.pi * np.arange(n_azimuth) / n_azimuth
        U, PHI = np.meshgrid(u, phi, indexing="ij")
        s = np.sqrt(1 - U**2)
        normals = np.stack([s * np.cos(PHI), s * np.sin(PHI), U], axis=-1).reshape(-1, 3)
        weights = (wu[:, None] * np.full(n_azimuth, 2 * np.pi / n_azimuth)).reshape(-1) * r**2
    else:
        raise ValueError(f"ball quadrature is implemented for n = 2, 3 (got n = {n})")
    return BoundaryQuadrature(c + r * normals, normals, weights, spec)


def _box_quadrature(spec: RegionSpec, resolution) -> BoundaryQuadrature:
    n, c, half = spec.n, np.asarray(spec.center), np.asarray(spec.size)
    if n < 2:
        raise ValueError("box quadrature needs n >= 2")
    if np.isscalar(resolution):
        # per-axis Gauss points so the total budget is roughly respected
        per_face = max(1.0, int(resolution) / (2 * n))
        m = max(2, int(round(per_face ** (1 / (n - 1)))))
    else:
        m = int(resolution[0])
    g, wg = np.polynomial.legendre.leggauss(m)
    nodes, normals, weights = [], [], []
    for axis in range(n):
        others = [a for a in range(n) if a != axis]
        grid = np.array(list(product(range(m), repeat=n - 1)))
        for side in (-1.0, 1.0):
            pts = np.empty((len(grid), n))
            pts[:, axis] = c[axis] + side * half[axis]
            w = np.ones(len(grid))
            for col, a in enumerate(others):
                pts[:, a] = c[a] + half[a] * g[grid[:, col]]
                w *= half[a] * wg[grid[:, col]]
            nu = np.zeros((len(grid), n))
            nu[:, axis] = side
            nodes.append(pts)
            normals.append(nu)
            weights.append(w)
    return BoundaryQuadrature(np.concatenate(nodes), np.concatenate(normals), np.concatenate(weights), spec)


def make_quadrature(spec: RegionSpec, resolution=None) -> BoundaryQuadrature:
    """Boundary rule for a region.

    ``resolution`` is a node budget (int) or an explicit shape: circle nodes
    for 2D balls, ``(polar, azimuth)`` for spheres, Gauss points per face
    axis (``(m,)``) for boxes.  Falls back to ``spec.resolution``.
    """
    if resolution is None:
        resolution = spec.resolution if spec.resolution is not None else 8192
    if isinstance(resolution, Mapping):
        resolution = resolution.get("nodes", resolution.get("grid"))
    if spec.kind == "ball":
        return _ball_quadrature(spec, resolution)
    return _box_quadrature(spec, resolution)


@dataclass(frozen=True)
class TraceSamples:
    quadrature: BoundaryQuadrature
    values: Multivector

    def __post_init__(self):
        if self.values.sig.n != self.quadrature.n:
            raise ValueError("trace values live in the wrong algebra")
        if self.values.shape != (len(self.quadrature),):
            raise ValueError("need exactly one value per quadrature node")

    @classmethod
    def sample(cls, quadrature: BoundaryQuadrature, func) -> "TraceSamples":
        return cls(quadrature, func(quadrature.nodes))

    def to_csv(self) -> str:
        q = self.quadrature
        alg = self.values.alg
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["node"]
            + [f"x{i + 1}" for i in range(q.n)]
            + [f"nu{i + 1}" for i in range(q.n)]
            + ["weight"]
            + [alg.blade_name(b) for b in range(alg.size)]
        )
        for k in range(len(q)):
            writer.writerow(
                [k]
                + [repr(float(v)) for v in q.nodes[k]]
                + [repr(float(v)) for v in q.normals[k]]
                + [repr(float(q.weights[k]))]
                + [repr(float(v)) for v in self.values.coeffs[k]]
            )
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, region: RegionSpec | None = None) -> "TraceSamples":
        rows = list(csv.reader(io.StringIO(text)))
        header, body = rows[0], np.array(rows[1:], dtype=float)
        n = sum(1 for h in header if h.startswith("x"))
        nodes = body[:, 1 : 1 + n]
        normals = body[:, 1 + n : 1 + 2 * n]
        weights = body[:, 1 + 2 * n]
        values = body[:, 2 + 2 * n :]
        quad = BoundaryQuadrature(nodes, normals, weights, region)
        return cls(quad, algebra(n).mv(values))


def cauchy_sum(trace: TraceSamples, x, sign: float = 1.0) -> Multivector:
    """Raw quadrature of the Cauchy integral at any points ``x`` (no domain checks)."""
    q = trace.quadrature
    x = np.asarray(x, dtype=float)
    alg = algebra(q.n)
    diff = q.nodes - x[..., None, :]
    kernel = alg.product(greens(diff).coeffs, alg.vector(q.normals).coeffs)
    integrand = alg.product(kernel, trace.values.coeffs)
    return alg.mv(sign * np.sum(q.weights[:, None] * integrand, axis=-2))


def _sign_for(n: int, sign):
    if sign is not None:
        return float(sign)
    if n not in CAUCHY_SIGN:
        CAUCHY_SIGN[n] = calibrate_sign(n)
    return CAUCHY_SIGN[n]


def cauchy_reconstruct(trace: TraceSamples, x, sign: float | None = None, margin: float | None = None) -> Multivector:
    """Reconstruct a monogenic field at interior points from its boundary trace.

    Points closer to the boundary than ``margin`` (default ``0.1`` times the
    region scale) raise :class:`MarginError`; points outside raise
    :class:`DomainError`.
    """
    q = trace.quadrature
    if q.region is None:
        raise ValueError("trace carries no region; use cauchy_sum for unchecked evaluation")
    x = np.asarray(x, dtype=float)
    margin = DEFAULT_MARGIN * q.region.scale if margin is None else margin
    d = q.region.signed_distance(x)
    if np.any(d > 0):
        raise DomainError("evaluation point outside the region")
    if np.any(-d < margin):
        raise MarginError(f"evaluation point within {margin:g} of the boundary")
    return cauchy_sum(trace, x, _sign_for(q.n, sign))


def calibrate_sign(n: int, resolution=None) -> float:
    """Orientation factor that makes the constant field reconstruct to 1 at the centre."""
    spec = RegionSpec.unit_ball(n)
    q = make_quadrature(spec, resolution or (256 if n == 2 else (16, 32)))
    one = algebra(n).scalar(np.ones(len(q)))
    value = cauchy_sum(TraceSamples(q, one), np.zeros(n)).scalar
    return float(np.sign(value))


def _difference_weights(order: int, h: float) -> list[tuple[float, float]]:
    """(offset, weight) pairs of the central first difference applied ``order`` times."""
    weights = {0.0: 1.0}
    for _ in range(order):
        nxt: dict[float, float] = {}
        for off, w in weights.items():
            nxt[off + h] = nxt.get(off + h, 0.0) + w / (2 * h)
            nxt[off - h] = nxt.get(off - h, 0.0) - w / (2 * h)
        weights = nxt
    return sorted(weights.items())


def greens_derivative(mi: MultiIndex, y, fd_step: float = DEFAULT_FD_STEP) -> np.ndarray:
    """Vector components of ``d^|k| G / dx_2^k_2 ... dx_n^k_n`` at ``y`` by nested central differences.

    The step for total order ``k`` is ``fd_step * 10**(k / 2)``.
    """
    y = np.asarray(y, dtype=float)
    k = sum(mi)
    h = fd_step * 10 ** (k / 2)
    stencil = [(np.zeros(y.shape[-1]), 1.0)]
    for axis, order in enumerate(mi, start=1):
        if order == 0:
            continue
        step = []
        for off, w in stencil:
            for d, wd in _difference_weights(order, h):
                shifted = off.copy()
                shifted[axis] += d
                step.append((shifted, w * wd))
        stencil = step
    out = np.zeros(y.shape)
    for off, w in stencil:
        out += w * _greens_coeffs(y + off)
    return out


def series_coefficients_raw(trace: TraceSamples, K: int, fd_step: float = DEFAULT_FD_STEP) -> dict[MultiIndex, Multivector]:
    """Quadratures of ``(d^k G)(y) nu(y) f(y)`` over the sphere, for every ``|k| <= K``."""
    q = trace.quadrature
    spec = q.region
    if spec is None or spec.kind != "ball":
        raise DomainError("series coefficients are defined on balls only")
    if np.any(np.asarray(spec.center) != 0):
        raise DomainError("expand about the origin: the ball must be centred at 0")
    if not 0 <= K <= MAX_SERIES_DEGREE:
        raise ValueError(f"degree K must lie in 0..{MAX_SERIES_DEGREE}")
    if K * fd_step * 10 ** (K / 2) >= spec.size[0]:
        raise ValueError("difference stencil reaches the boundary; reduce fd_step")
    n = q.n
    alg = algebra(n)
    nu = alg.vector(q.normals).coeffs
    out = {}
    for k in range(K + 1):
        for mi in multi_indices(n, k):
            dG = alg.vector(greens_derivative(mi, q.nodes, fd_step)).coeffs
            integrand = alg.product(alg.product(dG, nu), trace.values.coeffs)
            out[mi] = alg.mv(np.sum(q.weights[:, None] * integrand, axis=0))
    return out


def series_coefficients(
    trace: TraceSamples,
    K: int,
    fd_step: float = DEFAULT_FD_STEP,
    sign: float | None = None,
    degree_factor: float = SERIES_DEGREE_FACTOR,
) -> dict[MultiIndex, Multivector]:
    """Power-series coefficients ready for :func:`monogenica.monogenic.eval_series`."""
    raw = series_coefficients_raw(trace, K, fd_step)
    s = _sign_for(trace.quadrature.n, sign)
    return {mi: a * (s * degree_factor ** sum(mi)) for mi, a in raw.items()}


def calibrate_series_factor(n: int = 3, resolution=None, fd_step: float = DEFAULT_FD_STEP) -> float:
    """Per-degree factor fixed by expanding ``z_12`` to first order on the unit ball.

    The degree-1 coefficient of ``z_12`` along ``x_2`` must be the scalar 1.
    """
    spec = RegionSpec.unit_ball(n)
    q = make_quadrature(spec, resolution or (256 if n == 2 else (16, 32)))
    trace = TraceSamples.sample(q, lambda y: z_value(1, 2, y))
    raw = series_coefficients_raw(trace, 1, fd_step)
    first = (1,) + (0,) * (n - 2)
    return float(1.0 / (_sign_for(n, None) * raw[first].scalar))
