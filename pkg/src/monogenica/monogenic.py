"""Subsurface spinor variables and homogeneous monogenic polynomials.

The variables ``z_ij(x) = x^j - x^i B_ij`` (with ``B_ij = e_i e_j``) are
monogenic plane-spinor fields.  Fixing the first index to 1, the
homogeneous polynomial of multi-index ``k = (k_2, ..., k_n)`` is

    p_k(x) = 1/|k|! * sum over distinct words w of z_{1 w_1}(x) ... z_{1 w_|k|}(x)

where the words run over the distinct orderings of the multiset holding
``j`` exactly ``k_j`` times.  A truncated power series multiplies each
``p_k(x)`` on the right by its coefficient.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np
from sympy.utilities.iterables import multiset_permutations

from .algebra import Multivector, algebra, mv_inner, project_blade

MultiIndex = tuple[int, ...]


class MissingCoefficientError(KeyError):
    pass


def _points(x, n: int | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        raise ValueError("a point needs at least one coordinate")
    if n is not None and x.shape[-1] != n:
        raise ValueError(f"expected points in R^{n}, got trailing dimension {x.shape[-1]}")
    return x


def z_value(i: int, j: int, x) -> Multivector:
    """``z_ij(x) = x^j - x^i B_ij`` in the Euclidean algebra of ``R^n`` (1-based axes)."""
    x = _points(x)
    n = x.shape[-1]
    if i == j:
        raise ValueError("z_ij needs distinct axes")
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"axes ({i}, {j}) outside 1..{n}")
    alg = algebra(n)
    coeffs = np.zeros(x.shape[:-1] + (alg.size,))
    coeffs[..., 0] = x[..., j - 1]
    # B_ij = s * E_{ij} with s = -1 when i > j
    bits = (1 << (i - 1)) | (1 << (j - 1))
    s = alg.blade_sign(1 << (i - 1), 1 << (j - 1))
    coeffs[..., bits] = -s * x[..., i - 1]
    return Multivector(alg.sig, coeffs)


def z_subsurface(v, w, x, atol: float = 1e-10) -> Multivector:
    """The plane variable ``P_B(v x)`` with ``B = v w`` for an orthonormal pair ``v, w``.

    Equals ``(x . v) + (x . w) B``.
    """
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    x = _points(x, v.shape[-1])
    if abs(v @ v - 1) > atol or abs(w @ w - 1) > atol or abs(v @ w) > atol:
        raise ValueError("v, w must be orthonormal")
    alg = algebra(v.shape[-1])
    V, W = alg.vector(v), alg.vector(w)
    return project_blade(V * alg.vector(x), V * W)


@dataclass(frozen=True)
class PlaneSpinor:
    """``re + im * B_ij`` for a coordinate plane ``(i, j)``; a copy of the complex numbers."""

    re: float
    im: float
    plane: tuple[int, int]

    def __mul__(self, other: "PlaneSpinor") -> "PlaneSpinor":
        if other.plane != self.plane:
            raise ValueError("plane spinors from different planes do not close under the product")
        return PlaneSpinor(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
            self.plane,
        )

    def __add__(self, other: "PlaneSpinor") -> "PlaneSpinor":
        if other.plane != self.plane:
            raise ValueError("plane mismatch")
        return PlaneSpinor(self.re + other.re, self.im + other.im, self.plane)

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def to_multivector(self, n: int) -> Multivector:
        alg = algebra(n)
        i, j = self.plane
        return alg.scalar(self.re) + alg.blade(i, j) * self.im

    @classmethod
    def from_multivector(cls, a: Multivector, plane: tuple[int, int], atol: float = 1e-12) -> "PlaneSpinor":
        alg = a.alg
        B = alg.blade(*plane)
        im = float(mv_inner(B, a))
        out = cls(a.scalar, im, plane)
        if not out.to_multivector(alg.n).isclose(a, atol):
            raise ValueError(f"multivector is not in the plane spinors of B{plane}")
        return out


def multi_indices(n: int, k: int) -> list[MultiIndex]:
    """All ``(k_2, ..., k_n)`` with sum ``k``, in descending lexicographic order."""
    if n < 2:
        raise ValueError("multi-indices need n >= 2")
    if k < 0:
        raise ValueError("degree must be nonnegative")
    return _compositions(n - 1, k)


@lru_cache(maxsize=None)
def _compositions(parts: int, total: int) -> list[MultiIndex]:
    if parts == 1:
        return [(total,)]
    return [(first,) + rest for first in range(total, -1, -1) for rest in _compositions(parts - 1, total - first)]


def count_multi_indices(n: int, k: int) -> int:
    return math.comb(n - 2 + k, n - 2)


@dataclass(frozen=True)
class MonogenicPolynomial:
    mi: MultiIndex
    words: tuple[tuple[int, ...], ...]
    prefactor: float

    @property
    def n(self) -> int:
        return len(self.mi) + 1

    @property
    def degree(self) -> int:
        return sum(self.mi)

    def __call__(self, x) -> Multivector:
        return eval_poly(self, x)


def build_poly(mi: Sequence[int]) -> MonogenicPolynomial:
    mi = tuple(int(k) for k in mi)
    if any(k < 0 for k in mi):
        raise ValueError(f"negative entry in multi-index {mi}")
    letters = [j for j, kj in enumerate(mi, start=2) for _ in range(kj)]
    words = tuple(tuple(w) for w in multiset_permutations(letters)) if letters else ((),)
    return MonogenicPolynomial(mi, words, 1.0 / math.factorial(len(letters)))


def eval_poly(p: MonogenicPolynomial, x) -> Multivector:
    x = _points(x, p.n)
    alg = algebra(p.n)
    z = {j: z_value(1, j, x).coeffs for j in range(2, p.n + 1)}
    total = np.zeros(x.shape[:-1] + (alg.size,))
    # words sharing a prefix reuse its partial product
    prefix: dict[tuple[int, ...], np.ndarray] = {(): alg.scalar(np.ones(x.shape[:-1])).coeffs}
    for word in p.words:
        for m in range(1, len(word) + 1):
            key = word[:m]
            if key not in prefix:
                prefix[key] = alg.product(prefix[word[: m - 1]], z[word[m - 1]])
        total += prefix[word]
    return Multivector(alg.sig, p.prefactor * total)


def polynomials_up_to(n: int, K: int) -> list[MonogenicPolynomial]:
    return [build_poly(mi) for k in range(K + 1) for mi in multi_indices(n, k)]


def eval_series(coeffs: Mapping[MultiIndex, Multivector], x, K: int) -> Multivector:
    """``sum_{|k| <= K} p_k(x) a_k`` with every coefficient multiplied on the right."""
    x = _points(x)
    n = x.shape[-1]
    alg = algebra(n)
    total = alg.scalar(np.zeros(x.shape[:-1]))
    for k in range(K + 1):
        for mi in multi_indices(n, k):
            if mi not in coeffs:
                raise MissingCoefficientError(mi)
            a = coeffs[mi]
            if not isinstance(a, Multivector):
                a = alg.mv(a)
            total = total + eval_poly(build_poly(mi), x) * a
    return total


def coefficients_to_json(n: int, coeffs: Mapping[MultiIndex, Multivector]) -> str:
    entries = [
        {"mi": list(mi), "coeff": [float(c) for c in (a.coeffs if isinstance(a, Multivector) else a)]}
        for mi, a in sorted(coeffs.items(), key=lambda kv: (sum(kv[0]), [-k for k in kv[0]]))
    ]
    return json.dumps({"n": n, "entries": entries}, indent=2)


def coefficients_from_json(text: str) -> tuple[int, dict[MultiIndex, Multivector]]:
    doc = json.loads(text)
    n = int(doc["n"])
    alg = algebra(n)
    out = {}
    for entry in doc["entries"]:
        mi = tuple(int(k) for k in entry["mi"])
        if len(mi) != n - 1:
            raise ValueError(f"multi-index {mi} does not fit n={n}")
        out[mi] = alg.mv(entry["coeff"])
    return n, out


def polynomials_to_json(n: int, polys: Sequence[MonogenicPolynomial]) -> str:
    entries = [{"mi": list(p.mi), "prefactor": p.prefactor, "words": [list(w) for w in p.words]} for p in polys]
    return json.dumps({"n": n, "entries": entries}, indent=2)


def polynomials_from_json(text: str) -> tuple[int, list[MonogenicPolynomial]]:
    doc = json.loads(text)
    polys = [
        MonogenicPolynomial(tuple(e["mi"]), tuple(tuple(w) for w in e["words"]), float(e["prefactor"]))
        for e in doc["entries"]
    ]
    return int(doc["n"]), polys
