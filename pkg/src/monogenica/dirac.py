"""Central-difference Hodge-Dirac operator on flat R^n."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import Multivector, algebra, mv_norm

DEFAULT_STEP = 1e-4


class StencilDomainError(ValueError):
    pass


@dataclass(frozen=True)
class Field:
    """A multivector field sampled through ``func(points) -> Multivector``.

    ``func`` receives an array of shape ``(..., n)`` and must return a
    batched multivector of shape ``(...)``.  ``domain``, when given, maps
    points to a boolean mask of where the field may be evaluated.
    """

    n: int
    func: Callable[[np.ndarray], Multivector]
    domain: Callable[[np.ndarray], np.ndarray] | None = None

    def __call__(self, x) -> Multivector:
        x = np.asarray(x, dtype=float)
        out = self.func(x)
        if not isinstance(out, Multivector):
            raise TypeError("field functions must return a Multivector")
        return out

    @classmethod
    def scalar(cls, n: int, func: Callable[[np.ndarray], np.ndarray], domain=None) -> "Field":
        alg = algebra(n)
        return cls(n, lambda x: alg.scalar(func(x)), domain)

    @classmethod
    def constant(cls, value: Multivector) -> "Field":
        n = value.sig.n
        return cls(n, lambda x: Multivector(value.sig, np.broadcast_to(value.coeffs, x.shape[:-1] + value.coeffs.shape)))

    def __mul__(self, other: "Field") -> "Field":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        return Field(self.n, lambda x: self(x) * other(x), self.domain)


def _stencil(x: np.ndarray, h: float) -> np.ndarray:
    n = x.shape[-1]
    offsets = np.concatenate([np.eye(n), -np.eye(n)]) * h
    return x[..., None, :] + offsets


def dirac(f: Field, x, h: float = DEFAULT_STEP) -> Multivector:
    """``sum_i e_i (f(x + h e_i) - f(x - h e_i)) / 2h`` with the geometric product."""
    if h <= 0:
        raise ValueError("step must be positive")
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != f.n:
        raise ValueError(f"expected points in R^{f.n}")
    n = f.n
    pts = _stencil(x, h)
    if f.domain is not None and not np.all(f.domain(pts)):
        raise StencilDomainError("difference stencil leaves the field's domain")
    vals = f(pts).coeffs
    alg = algebra(n)
    out = np.zeros(x.shape[:-1] + (alg.size,))
    for i in range(n):
        partial = (vals[..., i, :] - vals[..., n + i, :]) / (2 * h)
        out += alg.product(alg.e(i + 1).coeffs, partial)
    return Multivector(alg.sig, out)


def partial(f: Field, x, axis: int, h: float = DEFAULT_STEP) -> Multivector:
    """Central difference along a 0-based axis."""
    x = np.asarray(x, dtype=float)
    step = np.zeros(f.n)
    step[axis] = h
    return (f(x + step) - f(x - step)) / (2 * h)


def cr_residual(f0, f2, x, h: float = DEFAULT_STEP, plane: tuple[int, int] = (1, 2)) -> tuple[float, float]:
    """Cauchy-Riemann defects of ``f0 + f2 B`` in the coordinate plane ``plane`` (1-based).

    Returns ``(d f0/dx^a - d f2/dx^b, d f0/dx^b + d f2/dx^a)``; both vanish
    exactly when the plane spinor field is monogenic.
    """
    x = np.asarray(x, dtype=float)
    a, b = plane[0] - 1, plane[1] - 1
    ea = np.zeros(x.shape[-1])
    eb = np.zeros(x.shape[-1])
    ea[a] = h
    eb[b] = h

    def d(g, e):
        return (np.asarray(g(x + e), dtype=float) - np.asarray(g(x - e), dtype=float)) / (2 * h)

    return float(d(f0, ea) - d(f2, eb)), float(d(f0, eb) + d(f2, ea))


def monogenicity_report(f: Field, points, h: float = DEFAULT_STEP) -> float:
    """Largest ``|dirac f|`` over the sample points."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[0] == 0:
        raise ValueError("need at least one sample point")
    return float(np.max(mv_norm(dirac(f, points, h))))
