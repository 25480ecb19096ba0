"""Clifford algebras Cl(R^n), n <= 8, in a blade basis, and three Clifford modules.

A blade ``e_{a1} ... e_{ak}`` (a1 < ... < ak) is encoded by the bitmask with
bits a1..ak set; generator ``e_i`` (1-based) is bit ``i - 1``.  The metric is
Euclidean with ``e_i e_i = -1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch, NotImaginary, ShapeMismatch
from .quat import as_quat, qconj, qmul

MAX_DIM = 8


def popcount(x):
    return bin(x).count("1")


def reorder_sign(a, b):
    """Sign of the permutation that sorts the concatenation of blades ``a`` and ``b``."""
    a >>= 1
    swaps = 0
    while a:
        swaps += popcount(a & b)
        a >>= 1
    return -1 if swaps & 1 else 1


def blade_product(a, b):
    """``(sign, blade)`` with ``e_a e_b = sign * e_blade`` under ``e_i^2 = -1``."""
    sign = reorder_sign(a, b)
    if popcount(a & b) & 1:
        sign = -sign
    return sign, a ^ b


@lru_cache(maxsize=None)
def product_table(n):
    size = 1 << n
    signs = np.empty((size, size))
    index = np.empty((size, size), dtype=np.intp)
    for a in range(size):
        for b in range(size):
            signs[a, b], index[a, b] = blade_product(a, b)
    signs.setflags(write=False)
    index.setflags(write=False)
    return signs, index


def _check_n(n):
    if not 1 <= n <= MAX_DIM:
        raise DimensionMismatch(f"dimension must be in 1..{MAX_DIM}, got {n}")


@dataclass(frozen=True, eq=False)
class CliffordElement:
    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        _check_n(self.n)
        c = np.asarray(self.coeffs, dtype=np.float64)
        if c.shape != (1 << self.n,):
            raise ShapeMismatch(f"Cl(R^{self.n}) needs {1 << self.n} coefficients, got {c.shape}")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def scalar(cls, n, value=1.0):
        c = np.zeros(1 << n)
        c[0] = value
        return cls(n, c)

    @classmethod
    def generator(cls, n, i):
        """The generator ``e_i`` with 1 <= i <= n."""
        if not 1 <= i <= n:
            raise DimensionMismatch(f"generator index {i} outside 1..{n}")
        c = np.zeros(1 << n)
        c[1 << (i - 1)] = 1.0
        return cls(n, c)

    @classmethod
    def vector(cls, u):
        u = np.asarray(u, dtype=np.float64)
        n = u.shape[0]
        c = np.zeros(1 << n)
        c[[1 << i for i in range(n)]] = u
        return cls(n, c)

    def _same(self, other):
        if not isinstance(other, CliffordElement) or other.n != self.n:
            raise DimensionMismatch("Clifford elements live in different algebras")

    def __add__(self, other):
        self._same(other)
        return CliffordElement(self.n, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._same(other)
        return CliffordElement(self.n, self.coeffs - other.coeffs)

    def __neg__(self):
        return CliffordElement(self.n, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, CliffordElement):
            return clifford_mul(self, other)
        return CliffordElement(self.n, self.coeffs * float(other))

    def __rmul__(self, other):
        return CliffordElement(self.n, self.coeffs * float(other))

    def __repr__(self):
        terms = [f"{c:+g}*e{b:0{self.n}b}" for b, c in enumerate(self.coeffs) if c != 0.0]
        return f"CliffordElement(n={self.n}, {' '.join(terms) or '0'})"


def clifford_mul(x, y):
    """Bilinear associative product in Cl(R^n)."""
    x._same(y)
    signs, index = product_table(x.n)
    terms = signs * np.outer(x.coeffs, y.coeffs)
    out = np.bincount(index.ravel(), weights=terms.ravel(), minlength=1 << x.n)
    return CliffordElement(x.n, out)


@dataclass(frozen=True, eq=False)
class FormModuleElement:
    """Element of the exterior algebra of (R^n)*; bit i of the index marks dx_i (0-based)."""

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        _check_n(self.n)
        c = np.asarray(self.coeffs, dtype=np.float64)
        if c.shape != (1 << self.n,):
            raise ShapeMismatch(f"Lambda(R^{self.n})* needs {1 << self.n} coefficients, got {c.shape}")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def basis(cls, n, *indices):
        c = np.zeros(1 << n)
        mask = 0
        for i in indices:
            mask |= 1 << i
        c[mask] = reorder_sign_seq(indices)
        return cls(n, c)

    def __add__(self, other):
        return FormModuleElement(self.n, self.coeffs + other.coeffs)

    def __sub__(self, other):
        return FormModuleElement(self.n, self.coeffs - other.coeffs)

    def __mul__(self, s):
        return FormModuleElement(self.n, self.coeffs * float(s))

    __rmul__ = __mul__


def reorder_sign_seq(indices):
    """Sign of the permutation sorting ``indices``; 0 if an index repeats."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0.0
    sign = 1.0
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if idx[a] > idx[b]:
                sign = -sign
    return sign


def _below(mask, i):
    return popcount(mask & ((1 << i) - 1))


def exterior_mul(u, phi):
    """``<u, .> ^ phi`` for a vector ``u`` in R^n."""
    out = np.zeros_like(phi.coeffs)
    for i, ui in enumerate(u):
        if ui == 0.0:
            continue
        bit = 1 << i
        for mask, c in enumerate(phi.coeffs):
            if c == 0.0 or mask & bit:
                continue
            out[mask | bit] += (-1.0) ** _below(mask, i) * ui * c
    return FormModuleElement(phi.n, out)


def contraction(u, phi):
    """Interior product ``i_u phi``."""
    out = np.zeros_like(phi.coeffs)
    for i, ui in enumerate(u):
        if ui == 0.0:
            continue
        bit = 1 << i
        for mask, c in enumerate(phi.coeffs):
            if c == 0.0 or not mask & bit:
                continue
            out[mask ^ bit] += (-1.0) ** _below(mask, i) * ui * c
    return FormModuleElement(phi.n, out)


def form_module_action(u, phi):
    """Clifford action ``u . phi = i_u phi - <u, .> ^ phi`` on the exterior algebra."""
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (phi.n,):
        raise DimensionMismatch(f"vector of length {u.shape} acting on forms over R^{phi.n}")
    return contraction(u, phi) - exterior_mul(u, phi)


def hh_module_action(h, v1, v2):
    """Cl(R^4) action of ``h`` on V + V: ``(v1, v2) -> (h v2, -conj(h) v1)``.

    ``v1`` and ``v2`` are tuples of quaternions, arrays of shape (m, 4),
    acted on by left multiplication.
    """
    h = as_quat(h)
    v1 = as_quat(v1)
    v2 = as_quat(v2)
    if v1.shape != v2.shape:
        raise ShapeMismatch(f"v1 {v1.shape} and v2 {v2.shape} must have the same shape")
    return qmul(h, v2), -qmul(qconj(h), v1)


def imh_module_action(h, v, tol=1e-12):
    """Cl(R^3) action of an imaginary quaternion by left multiplication."""
    h = as_quat(h)
    if abs(h[0]) > tol * max(1.0, float(np.abs(h).max())):
        raise NotImaginary(f"Re h = {h[0]} is not zero")
    return qmul(h, as_quat(v))
