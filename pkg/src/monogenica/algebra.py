"""Dense geometric algebra over a diagonal, nondegenerate metric.

Multivectors store one real coefficient per basis blade.  Blades are
addressed by bitmaps: bit ``i`` set means the ``i``-th basis vector takes
part, so the blade ``E_I`` is the increasing-order product of its vectors.
Products of blades follow ``E_I E_J = +/- E_{I xor J}``, with the sign from
counting transpositions and from the metric squares of shared vectors.

The signature convention is ``Signature(p, q)``: ``p`` vectors square to
``+1`` and come first, ``q`` vectors square to ``-1`` and come last.  The
spacetime algebra ``Signature(1, 3, start=0)`` therefore has a temporal
``e0`` with ``e0**2 = +1`` and spatial ``e1, e2, e3`` squaring to ``-1``.
Use :meth:`Signature.from_metric` for any other ordering.

Every :class:`Multivector` may carry leading batch dimensions; the blade
axis is always last.
"""
from __future__ import annotations

import functools
import numbers
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_DIMENSION = 12
# full sign tables are cached up to this dimension; rows are computed on demand above it
_TABLE_DIMENSION = 8
ATOL = 1e-12


class SignatureError(ValueError):
    pass


class SignatureMismatchError(ValueError):
    pass


class NotABladeError(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    p: int
    q: int = 0
    start: int = 1
    order: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise SignatureError(f"negative signature ({self.p}, {self.q})")
        if not 1 <= self.p + self.q <= MAX_DIMENSION:
            raise SignatureError(
                f"dimension {self.p + self.q} outside the supported range 1..{MAX_DIMENSION}"
            )
        if self.order is not None:
            if len(self.order) != self.n or any(m not in (1, -1) for m in self.order):
                raise SignatureError(f"bad metric diagonal {self.order}")
            if self.order.count(1) != self.p:
                raise SignatureError("metric diagonal disagrees with (p, q)")

    @classmethod
    def from_metric(cls, diagonal: Sequence[int], start: int = 1) -> "Signature":
        diagonal = tuple(int(m) for m in diagonal)
        return cls(diagonal.count(1), diagonal.count(-1), start, diagonal)

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def metric(self) -> tuple[int, ...]:
        if self.order is not None:
            return self.order
        return (1,) * self.p + (-1,) * self.q

    @property
    def euclidean(self) -> bool:
        return self.q == 0


def euclidean(n: int) -> Signature:
    return Signature(n, 0)


def _popcount(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    count = np.zeros_like(x)
    while np.any(x):
        count += x & 1
        x = x >> 1
    return count


def _reorder_sign_row(a: int, blades: np.ndarray) -> np.ndarray:
    """Sign from moving the vectors of ``E_b`` through ``E_a`` for every ``b``."""
    swaps = np.zeros_like(blades)
    a >>= 1
    while a:
        swaps += _popcount(a & blades)
        a >>= 1
    return np.where(swaps & 1, -1, 1).astype(np.int8)


class Algebra:
    """Blade tables for one signature.  Obtain instances through :func:`algebra`."""

    def __init__(self, sig: Signature):
        self.sig = sig
        self.n = sig.n
        self.size = 1 << sig.n
        self.blades = np.arange(self.size, dtype=np.int64)
        self.grades = _popcount(self.blades)
        self._metric = np.array(sig.metric, dtype=np.int8)
        # product of metric squares of the vectors inside each blade
        self.blade_square = np.ones(self.size, dtype=np.int8)
        for i, m in enumerate(self._metric):
            self.blade_square = np.where(self.blades >> i & 1, self.blade_square * m, self.blade_square)
        self.reverse_sign = np.where((self.grades * (self.grades - 1) // 2) % 2, -1, 1).astype(np.int8)
        self._table = None
        if self.n <= _TABLE_DIMENSION:
            self._table = np.stack([self._compute_row(a) for a in range(self.size)])

    def _compute_row(self, a: int) -> np.ndarray:
        common = a & self.blades
        return _reorder_sign_row(a, self.blades) * self.blade_square[common]

    def sign_row(self, a: int) -> np.ndarray:
        """``s`` with ``E_a E_b = s[b] E_{a ^ b}`` for all ``b``."""
        if self._table is not None:
            return self._table[a]
        return self._compute_row(a)

    def blade_sign(self, a: int, b: int) -> int:
        return int(self.sign_row(a)[b])

    def product(self, a: np.ndarray, b: np.ndarray, keep=None) -> np.ndarray:
        """Geometric product of raw coefficient arrays, optionally filtered per blade pair.

        ``keep(a_blade, b_blades)`` returns a boolean mask selecting which
        blade pairs contribute; it is how the graded products are formed.
        """
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (self.size,)
        out = np.zeros(shape)
        for i in np.flatnonzero(np.any(a.reshape(-1, self.size) != 0, axis=0)):
            target = i ^ self.blades
            signs = self.sign_row(int(i))[target].astype(float)
            if keep is not None:
                signs = signs * keep(int(i), target)
            # for fixed i, k -> i ^ k is a permutation, so each output slot is hit once
            out += a[..., i : i + 1] * (signs * b[..., target])
        return out

    def mv(self, coeffs) -> "Multivector":
        return Multivector(self.sig, coeffs)

    def scalar(self, value=1.0) -> "Multivector":
        value = np.asarray(value, dtype=float)
        coeffs = np.zeros(value.shape + (self.size,))
        coeffs[..., 0] = value
        return Multivector(self.sig, coeffs)

    def zero(self) -> "Multivector":
        return self.scalar(0.0)

    def bit(self, label: int) -> int:
        i = label - self.sig.start
        if not 0 <= i < self.n:
            raise IndexError(f"no basis vector e{label} in {self.sig}")
        return 1 << i

    def e(self, label: int) -> "Multivector":
        coeffs = np.zeros(self.size)
        coeffs[self.bit(label)] = 1.0
        return Multivector(self.sig, coeffs)

    def blade(self, *labels: int) -> "Multivector":
        """Product ``e_{l1} e_{l2} ...`` in the given order (so ``blade(2, 1) == -blade(1, 2)``)."""
        out = self.scalar(1.0)
        for label in labels:
            out = out * self.e(label)
        return out

    def vector(self, components) -> "Multivector":
        components = np.asarray(components, dtype=float)
        if components.shape[-1] != self.n:
            raise ValueError(f"expected {self.n} vector components, got {components.shape[-1]}")
        coeffs = np.zeros(components.shape[:-1] + (self.size,))
        coeffs[..., 1 << np.arange(self.n)] = components
        return Multivector(self.sig, coeffs)

    @property
    def pseudoscalar(self) -> "Multivector":
        coeffs = np.zeros(self.size)
        coeffs[-1] = 1.0
        return Multivector(self.sig, coeffs)

    def blade_name(self, bits: int) -> str:
        if bits == 0:
            return "1"
        labels = [str(i + self.sig.start) for i in range(self.n) if bits >> i & 1]
        sep = "," if self.n + self.sig.start > 10 else ""
        return "e" + sep.join(labels)

    def random(self, rng: np.random.Generator, shape=(), grades: Iterable[int] | None = None) -> "Multivector":
        shape = (shape,) if isinstance(shape, numbers.Integral) else tuple(shape)
        coeffs = rng.standard_normal(shape + (self.size,))
        if grades is not None:
            coeffs = coeffs * np.isin(self.grades, list(grades))
        return Multivector(self.sig, coeffs)


@functools.lru_cache(maxsize=None)
def algebra(sig: Signature | int) -> Algebra:
    if isinstance(sig, numbers.Integral):
        sig = euclidean(int(sig))
    return Algebra(sig)


class Multivector:
    """Immutable multivector value, possibly batched over leading axes."""

    __slots__ = ("sig", "coeffs")
    __array_priority__ = 1000

    def __init__(self, sig: Signature, coeffs):
        coeffs = np.array(coeffs, dtype=float)
        if coeffs.shape[-1:] != (1 << sig.n,):
            raise ValueError(f"expected trailing axis of length {1 << sig.n}, got shape {coeffs.shape}")
        coeffs.setflags(write=False)
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    @property
    def alg(self) -> Algebra:
        return algebra(self.sig)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.coeffs.shape[:-1]

    def __len__(self):
        return self.shape[0]

    def __getitem__(self, item) -> "Multivector":
        if not self.shape:
            raise TypeError("cannot index a single multivector")
        return Multivector(self.sig, self.coeffs[item])

    def _coerce(self, other) -> "Multivector":
        if isinstance(other, Multivector):
            if other.sig != self.sig:
                raise SignatureMismatchError(f"{self.sig} vs {other.sig}")
            return other
        if isinstance(other, numbers.Real) or (isinstance(other, np.ndarray) and other.ndim == 0):
            return self.alg.scalar(float(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Multivector(self.sig, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return Multivector(self.sig, -self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Multivector(self.sig, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, numbers.Real):
            return Multivector(self.sig, self.coeffs * float(other))
        if isinstance(other, np.ndarray) and not isinstance(other, Multivector):
            # batched scalar weights broadcast over the blade axis
            return Multivector(self.sig, self.coeffs * np.asarray(other, dtype=float)[..., None])
        return geometric_product(self, other)

    def __rmul__(self, other):
        if isinstance(other, numbers.Real):
            return Multivector(self.sig, self.coeffs * float(other))
        if isinstance(other, np.ndarray):
            return Multivector(self.sig, self.coeffs * np.asarray(other, dtype=float)[..., None])
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, numbers.Real):
            return Multivector(self.sig, self.coeffs / float(other))
        return NotImplemented

    def __xor__(self, other):
        return wedge(self, other)

    def __or__(self, other):
        return interior(self, other)

    def __lshift__(self, other):
        return left_contract(self, other)

    def __invert__(self):
        return reverse(self)

    def __call__(self, k: int) -> "Multivector":
        return grade_project(self, k)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return bool(np.array_equal(self.coeffs, other.coeffs))

    __hash__ = None

    def isclose(self, other, atol: float = ATOL) -> bool:
        other = self._coerce(other)
        return bool(np.all(np.abs(self.coeffs - other.coeffs) <= atol))

    @property
    def scalar(self):
        return self.coeffs[..., 0] if self.shape else float(self.coeffs[0])

    def grades_present(self, atol: float = 0.0) -> set[int]:
        mask = np.any(np.abs(self.coeffs.reshape(-1, self.alg.size)) > atol, axis=0)
        return set(int(g) for g in np.unique(self.alg.grades[mask]))

    def even(self) -> "Multivector":
        return Multivector(self.sig, self.coeffs * (self.alg.grades % 2 == 0))

    def odd(self) -> "Multivector":
        return Multivector(self.sig, self.coeffs * (self.alg.grades % 2 == 1))

    def norm(self):
        return mv_norm(self)

    def __repr__(self):
        if self.shape:
            return f"Multivector({self.sig}, shape={self.shape})"
        alg = self.alg
        terms = [
            f"{c:+.6g}" + ("" if b == 0 else "*" + alg.blade_name(b))
            for b, c in enumerate(self.coeffs)
            if c != 0
        ]
        return " ".join(terms) if terms else "0"


def _check(a: Multivector, b: Multivector):
    if a.sig != b.sig:
        raise SignatureMismatchError(f"{a.sig} vs {b.sig}")


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    _check(a, b)
    return Multivector(a.sig, a.alg.product(a.coeffs, b.coeffs))


def grade_project(a: Multivector, k: int) -> Multivector:
    if not 0 <= k <= a.sig.n:
        raise ValueError(f"grade {k} outside 0..{a.sig.n}")
    return Multivector(a.sig, a.coeffs * (a.alg.grades == k))


def _graded(a: Multivector, b: Multivector, rule) -> Multivector:
    _check(a, b)
    alg = a.alg
    grades = alg.grades

    def keep(i, targets):
        # targets are the right-hand blades; i ^ targets are the output blades
        return rule(grades[i], grades[targets], grades[i ^ targets])

    return Multivector(a.sig, alg.product(a.coeffs, b.coeffs, keep=keep))


def wedge(a: Multivector, b: Multivector) -> Multivector:
    """Outer product: the grade ``k + l`` part of each ``A_k B_l``."""
    return _graded(a, b, lambda k, l, g: g == k + l)


def interior(a: Multivector, b: Multivector) -> Multivector:
    """Lowest-grade part ``<A_k B_l>_{|k-l|}`` of each graded product."""
    return _graded(a, b, lambda k, l, g: g == np.abs(k - l))


def left_contract(a: Multivector, b: Multivector) -> Multivector:
    """``<A_k B_l>_{l-k}``, zero whenever ``l < k``."""
    return _graded(a, b, lambda k, l, g: (l >= k) & (g == l - k))


def right_contract(a: Multivector, b: Multivector) -> Multivector:
    return _graded(a, b, lambda k, l, g: (k >= l) & (g == k - l))


def reverse(a: Multivector) -> Multivector:
    return Multivector(a.sig, a.coeffs * a.alg.reverse_sign)


def involute(a: Multivector) -> Multivector:
    return Multivector(a.sig, a.coeffs * np.where(a.alg.grades % 2, -1.0, 1.0))


def mv_inner(a: Multivector, b: Multivector):
    """Multivector inner product ``<a^dagger b>_0``.

    Only matching blades contribute, each with weight ``<E_I^dagger E_I>``,
    which is the product of the metric squares of the blade's vectors.
    """
    _check(a, b)
    return np.sum(a.coeffs * b.coeffs * a.alg.blade_square, axis=-1)


def mv_norm_sq(a: Multivector):
    return mv_inner(a, a)


def mv_norm(a: Multivector):
    """``sqrt(|(a, a)|)``; a true norm only for Euclidean signatures."""
    return np.sqrt(np.abs(mv_norm_sq(a)))


def inverse_pseudoscalar(sig: Signature) -> Multivector:
    alg = algebra(sig)
    I = alg.pseudoscalar
    # I I^dagger is the product of all metric squares, hence +/-1
    return reverse(I) * float(alg.blade_square[-1])


def dual(a: Multivector) -> Multivector:
    """``A I^{-1}``; grade ``k`` maps to grade ``n - k``."""
    return a * inverse_pseudoscalar(a.sig)


def blade_inverse(u: Multivector) -> Multivector:
    uu = u * reverse(u)
    if uu.grades_present(atol=1e-10) - {0}:
        raise NotABladeError("u u^dagger is not a scalar")
    s = uu.scalar
    if abs(s) < 1e-12:
        raise NotABladeError("null blade has no inverse")
    return reverse(u) / s


def check_unit_blade(u: Multivector, atol: float = 1e-10) -> None:
    if u.shape:
        raise NotABladeError("expected a single blade, got a batch")
    grades = u.grades_present(atol=atol)
    if len(grades) != 1:
        raise NotABladeError(f"mixed grades {sorted(grades)}")
    utu = reverse(u) * u
    if utu.grades_present(atol=atol) - {0}:
        raise NotABladeError("u^dagger u is not a scalar")
    if abs(abs(mv_norm_sq(u)) - 1.0) > atol:
        raise NotABladeError(f"|u|^2 = {float(mv_norm_sq(u)):.3g}, expected +/-1")


def project_blade(b: Multivector, u: Multivector) -> Multivector:
    """Projection ``(B | U) U^{-1}`` onto the subspace of the unit blade ``u``."""
    check_unit_blade(u)
    return left_contract(b, u) * blade_inverse(u)
