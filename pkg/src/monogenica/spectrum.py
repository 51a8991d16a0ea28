"""Spin characters represented by their values on the ``z_ij`` variables.

A character sends each ``z_ij`` to a plane spinor ``alpha_ij + beta_ij B_ij``.
The algebraic relations

    z_ij B_ji = -z_ji,        z_ij = z_lj + z_il B_lj

force ``alpha_ij = -beta_ji``, ``alpha_ij = alpha_lj`` and ``beta_ij = beta_il``,
so the whole table is fixed by one point ``x`` with ``x^i = alpha_ji = -beta_ij``.
On tables satisfying these relations the character acts as evaluation at
that point.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .algebra import Multivector, algebra, mv_norm
from .cauchy import RegionSpec, greens
from .dirac import Field
from .monogenic import z_value

DEFAULT_TOL = 1e-9


class InconsistentCharacterError(ValueError):
    def __init__(self, residual: float, tol: float):
        super().__init__(f"character table violates the z relations: residual {residual:.3g} > {tol:.3g}")
        self.residual = residual
        self.tol = tol


@dataclass(frozen=True, eq=False)
class CharacterTable:
    """``alpha[i, j] + beta[i, j] B_ij`` is the value on ``z_(i+1)(j+1)``; diagonals are NaN."""

    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        alpha = np.array(self.alpha, dtype=float)
        beta = np.array(self.beta, dtype=float)
        if alpha.shape != beta.shape or alpha.ndim != 2 or alpha.shape[0] != alpha.shape[1]:
            raise ValueError("alpha and beta must be matching square matrices")
        np.fill_diagonal(alpha, np.nan)
        np.fill_diagonal(beta, np.nan)
        alpha.setflags(write=False)
        beta.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def n(self) -> int:
        return self.alpha.shape[0]

    def value(self, i: int, j: int) -> Multivector:
        """The plane spinor assigned to ``z_ij`` (1-based)."""
        alg = algebra(self.n)
        return alg.scalar(self.alpha[i - 1, j - 1]) + alg.blade(i, j) * float(self.beta[i - 1, j - 1])

    def with_entry(self, which: str, i: int, j: int, value: float) -> "CharacterTable":
        alpha, beta = self.alpha.copy(), self.beta.copy()
        {"alpha": alpha, "beta": beta}[which][i - 1, j - 1] = value
        return CharacterTable(alpha, beta)

    def to_json(self) -> str:
        def rows(m):
            return [[None if i == j else float(m[i, j]) for j in range(self.n)] for i in range(self.n)]

        return json.dumps({"n": self.n, "alpha": rows(self.alpha), "beta": rows(self.beta)})

    @classmethod
    def from_json(cls, text: str) -> "CharacterTable":
        doc = json.loads(text)
        alpha = np.array([[np.nan if v is None else v for v in row] for row in doc["alpha"]], dtype=float)
        beta = np.array([[np.nan if v is None else v for v in row] for row in doc["beta"]], dtype=float)
        if alpha.shape[0] != int(doc["n"]):
            raise ValueError("table size disagrees with n")
        return cls(alpha, beta)


def character_from_point(x) -> CharacterTable:
    """Table of point evaluation: ``alpha_ij = x^j``, ``beta_ij = -x^i``."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    alpha = np.broadcast_to(x[None, :], (n, n))
    beta = np.broadcast_to(-x[:, None], (n, n))
    return CharacterTable(alpha, beta)


def consistency_residual(t: CharacterTable) -> float:
    """Largest defect among ``alpha_ij + beta_ji``, ``alpha_ij - alpha_lj`` and ``beta_ij - beta_il``."""
    n = t.n
    a, b = t.alpha, t.beta
    off = ~np.eye(n, dtype=bool)
    worst = float(np.max(np.abs(a + b.T)[off]))
    if n >= 3:
        i, j, l = np.array([(i, j, l) for i in range(n) for j in range(n) for l in range(n) if len({i, j, l}) == 3]).T
        worst = max(worst, float(np.max(np.abs(a[i, j] - a[l, j]))), float(np.max(np.abs(b[i, j] - b[i, l]))))
    return worst


def recover_point(t: CharacterTable, tol: float = DEFAULT_TOL) -> np.ndarray:
    """The point ``x`` with ``x^i`` averaged over every ``alpha_ji`` and ``-beta_ij``.

    The mean is taken as offsets from the first determination, so an
    exact table returns its point bit for bit.
    """
    residual = consistency_residual(t)
    if not residual <= tol:
        raise InconsistentCharacterError(residual, tol)
    n = t.n
    off = ~np.eye(n, dtype=bool)
    # column i of alpha and row i of beta both determine x^i
    determinations = np.stack([t.alpha.T[off].reshape(n, n - 1), -t.beta[off].reshape(n, n - 1)], axis=1).reshape(n, -1)
    ref = determinations[:, :1]
    return ref[:, 0] + np.mean(determinations - ref, axis=1)


def gelfand_eval(f, t: CharacterTable, tol: float = DEFAULT_TOL) -> Multivector:
    """``f^(delta) = delta[f]``, realised as ``f`` at the recovered point."""
    return f(recover_point(t, tol))


def gelfand_sup(f, tables, tol: float = DEFAULT_TOL) -> float:
    """Sup-norm of the transform over a sample of characters."""
    return max(float(mv_norm(gelfand_eval(f, t, tol))) for t in tables)


def character_values(t: CharacterTable) -> dict[tuple[int, int], Multivector]:
    return {(i, j): t.value(i, j) for i in range(1, t.n + 1) for j in range(1, t.n + 1) if i != j}


def probe_field(x0, axis: int = 1) -> Field:
    """``G(x - x0) e_axis``: monogenic away from ``x0`` and singular at it."""
    x0 = np.asarray(x0, dtype=float)
    n = x0.shape[-1]
    e = algebra(n).e(axis)
    return Field(n, lambda x: greens(np.asarray(x) - x0) * e)


def singular_probe(spec: RegionSpec, x0, samples) -> float:
    """Sup over ``samples`` of ``|G(x - x0) e_1|`` for an exterior point ``x0``."""
    x0 = np.asarray(x0, dtype=float)
    if spec.signed_distance(x0) <= 0:
        raise ValueError("probe pole must lie strictly outside the region")
    return float(np.max(mv_norm(probe_field(x0)(np.asarray(samples, dtype=float)))))


def separating_variable(x, y) -> tuple[int, int] | None:
    """Some ``(i, j)`` with ``z_ij(x) != z_ij(y)``, or ``None`` if none separates them."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.shape[-1]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j and z_value(i, j, x) != z_value(i, j, y):
                return i, j
    return None


def sample_region(spec: RegionSpec, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random points inside a ball or box."""
    n, c = spec.n, np.asarray(spec.center)
    if spec.kind == "ball":
        d = rng.standard_normal((count, n))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        return c + spec.size[0] * d * rng.random((count, 1)) ** (1 / n)
    return c + np.asarray(spec.size) * rng.uniform(-1, 1, (count, n))


def interior_grid(spec: RegionSpec, count: int = 100) -> np.ndarray:
    """Deterministic sample of the closed region, including boundary points.

    Balls in ``R^3`` use concentric shells of polar-axis spiral points whose
    outer shell contains ``center + r e_1``; other regions use a clipped
    lattice.
    """
    n, c = spec.n, np.asarray(spec.center)
    if spec.kind == "ball" and n == 3:
        shells = max(1, int(round(count ** (1 / 3))))
        per = [max(1, round(count * s**2 / sum(t**2 for t in range(1, shells + 1)))) for s in range(1, shells + 1)]
        per[-1] += count - sum(per)
        pts = []
        golden = np.pi * (3 - np.sqrt(5))
        for s, m in zip(range(1, shells + 1), per):
            k = np.arange(m)
            u = 1 - 2 * k / max(m - 1, 1)  # u = 1 exactly at the first point
            rho = np.sqrt(np.clip(1 - u**2, 0, None))
            t = golden * k
            shell = np.stack([u, rho * np.cos(t), rho * np.sin(t)], axis=-1)
            pts.append(shell * spec.size[0] * s / shells)
        return c + np.concatenate(pts)[:count]
    side = max(2, int(np.ceil(count ** (1 / n))))
    while True:
        axis = np.linspace(-1, 1, side)
        grid = np.stack(np.meshgrid(*[axis] * n, indexing="ij"), axis=-1).reshape(-1, n)
        pts = c + grid * (spec.size[0] if spec.kind == "ball" else np.asarray(spec.size))
        pts = pts[spec.contains(pts)]
        if len(pts) >= count:
            return pts
        side += 1
