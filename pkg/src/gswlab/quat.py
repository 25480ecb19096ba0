"""Quaternions, the spin double covers Sp(1) -> SO(3) and Sp(1) x Sp(1) -> SO(4),
and the quaternionic-linear splitting of real linear maps.

Quaternions are stored as ``(w, x, y, z)`` along the last axis of a float
array, so every array routine here broadcasts over leading axes.  The
:class:`Quaternion` class is a thin scalar wrapper for interactive use.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonUnitQuaternion, ShapeMismatch

UNIT_TOL = 1e-12

ONE = np.array([1.0, 0.0, 0.0, 0.0])
I = np.array([0.0, 1.0, 0.0, 0.0])
J = np.array([0.0, 0.0, 1.0, 0.0])
K = np.array([0.0, 0.0, 0.0, 1.0])
BASIS = np.stack([ONE, I, J, K])

_CONJ = np.array([1.0, -1.0, -1.0, -1.0])


def as_quat(q):
    if isinstance(q, Quaternion):
        return q.as_array()
    arr = np.asarray(q, dtype=np.float64)
    if arr.shape[-1:] != (4,):
        raise ShapeMismatch(f"quaternion arrays need a trailing axis of length 4, got {arr.shape}")
    return arr


def qmul(p, q):
    """Hamilton product of quaternion arrays, broadcasting over leading axes."""
    p = as_quat(p)
    q = as_quat(q)
    pw, px, py, pz = np.moveaxis(p, -1, 0)
    qw, qx, qy, qz = np.moveaxis(q, -1, 0)
    return np.stack(
        [
            pw * qw - px * qx - py * qy - pz * qz,
            pw * qx + px * qw + py * qz - pz * qy,
            pw * qy - px * qz + py * qw + pz * qx,
            pw * qz + px * qy - py * qx + pz * qw,
        ],
        axis=-1,
    )


def qconj(q):
    return as_quat(q) * _CONJ


def qnorm(q):
    return np.sqrt(np.sum(as_quat(q) ** 2, axis=-1))


def left_matrix(q):
    """4x4 real matrix of ``h -> q h`` in the basis (1, i, j, k)."""
    return np.stack([qmul(q, e) for e in BASIS], axis=-1)


def right_matrix(q):
    """4x4 real matrix of ``h -> h q`` in the basis (1, i, j, k)."""
    return np.stack([qmul(e, q) for e in BASIS], axis=-1)


@dataclass(frozen=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, arr):
        w, x, y, z = (float(v) for v in np.asarray(arr, dtype=np.float64).reshape(4))
        return cls(w, x, y, z)

    def as_array(self):
        return np.array([self.w, self.x, self.y, self.z])

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion.from_array(qmul(self.as_array(), other.as_array()))
        return Quaternion.from_array(self.as_array() * float(other))

    def __rmul__(self, other):
        return Quaternion.from_array(self.as_array() * float(other))

    def __add__(self, other):
        return Quaternion.from_array(self.as_array() + as_quat(other))

    def __sub__(self, other):
        return Quaternion.from_array(self.as_array() - as_quat(other))

    def __neg__(self):
        return Quaternion.from_array(-self.as_array())

    def conj(self):
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self):
        return float(qnorm(self.as_array()))

    @property
    def real(self):
        return self.w

    @property
    def imag(self):
        return np.array([self.x, self.y, self.z])


def quat_mul(p, q):
    """Hamilton product with i^2 = j^2 = k^2 = -1 and ij = k."""
    if isinstance(p, Quaternion) and isinstance(q, Quaternion):
        return p * q
    return qmul(p, q)


def _check_unit(q):
    n = qnorm(q)
    if np.any(np.abs(n - 1.0) > UNIT_TOL):
        raise NonUnitQuaternion(f"expected |q| = 1 within {UNIT_TOL}, got |q| = {n}")


def so3_from_unit_quat(q):
    """Matrix of ``h -> q h conj(q)`` on Im H in the basis (i, j, k)."""
    q = as_quat(q)
    _check_unit(q)
    cols = [qmul(qmul(q, e), qconj(q))[..., 1:] for e in (I, J, K)]
    return np.stack(cols, axis=-1)


def so4_from_quat_pair(qp, qm):
    """Matrix of ``h -> qp h conj(qm)`` on H in the basis (1, i, j, k)."""
    qp = as_quat(qp)
    qm = as_quat(qm)
    _check_unit(qp)
    _check_unit(qm)
    cols = [qmul(qmul(qp, e), qconj(qm)) for e in BASIS]
    return np.stack(cols, axis=-1)


def random_unit_quaternion(rng, size=None):
    shape = (4,) if size is None else (*np.atleast_1d(size), 4)
    q = rng.standard_normal(shape)
    return q / qnorm(q)[..., None]


def random_rotation(rng):
    """Haar-random element of SO(3), via the double cover."""
    return so3_from_unit_quat(random_unit_quaternion(rng))


@dataclass(frozen=True)
class QuatStructure:
    """Three complex structures on a real vector space satisfying the quaternion relations.

    Stored as explicit real matrices so that rotated triples can be built and
    compared directly.
    """

    i1: np.ndarray
    i2: np.ndarray
    i3: np.ndarray

    @property
    def dim(self):
        return self.i1.shape[0]

    def as_tuple(self):
        return (self.i1, self.i2, self.i3)

    @classmethod
    def left(cls, k=1):
        """Left multiplication by i, j, k on H^k (coordinates grouped per quaternion)."""
        eye = np.eye(k)
        return cls(*(np.kron(eye, left_matrix(e)) for e in (I, J, K)))

    @classmethod
    def right(cls, k=1):
        """Right multiplication by conj(i), conj(j), conj(k) on H^k.

        Right multiplication by i, j, k anticommutes the wrong way (R_i R_j = -R_k),
        so the conjugates are used to satisfy i1 i2 = i3.
        """
        eye = np.eye(k)
        return cls(*(np.kron(eye, right_matrix(qconj(e))) for e in (I, J, K)))

    def rotated(self, R):
        """Triple ``i'_a = sum_b R[b, a] i_b`` for R in SO(3)."""
        mats = np.stack(self.as_tuple())
        new = np.einsum("ba,bij->aij", np.asarray(R, dtype=np.float64), mats)
        return QuatStructure(*new)

    def defects(self):
        """Largest violations of the quaternion relations and of orthogonality."""
        i1, i2, i3 = self.as_tuple()
        eye = np.eye(self.dim)
        rel = max(
            np.abs(i1 @ i1 + eye).max(),
            np.abs(i2 @ i2 + eye).max(),
            np.abs(i3 @ i3 + eye).max(),
            np.abs(i1 @ i2 - i3).max(),
        )
        orth = max(np.abs(m.T @ m - eye).max() for m in (i1, i2, i3))
        return {"relations": float(rel), "orthogonality": float(orth)}

    def is_valid(self, tol=1e-10):
        return all(v <= tol for v in self.defects().values())


@dataclass(frozen=True)
class HomSplit:
    """Decomposition of a real linear map into its H-linear part and the complement B_+."""

    quaternionic_part: np.ndarray
    plus_part: np.ndarray

    def total(self):
        return self.quaternionic_part + self.plus_part


def quaternionic_projector(A, src, dst):
    """Split ``A: U -> V`` into ``(A - I1 A i1 - I2 A i2 - I3 A i3) / 4`` and its remainder.

    ``src`` carries (i1, i2, i3) on U and ``dst`` carries (I1, I2, I3) on V.
    The first part commutes with every pair (i_a, I_a).
    """
    A = np.asarray(A, dtype=np.float64)
    if A.shape != (dst.dim, src.dim):
        raise ShapeMismatch(f"A has shape {A.shape}, expected {(dst.dim, src.dim)}")
    acc = A.copy()
    for Ia, ia in zip(dst.as_tuple(), src.as_tuple()):
        acc = acc - Ia @ A @ ia
    q = 0.25 * acc
    return HomSplit(quaternionic_part=q, plus_part=A - q)


def fueter_contraction(A, dst):
    """``A e0 - I1 A e1 - I2 A e2 - I3 A e3`` for ``A: R^4 -> V`` (columns A e_mu)."""
    A = np.asarray(A, dtype=np.float64)
    if A.shape != (dst.dim, 4):
        raise ShapeMismatch(f"A has shape {A.shape}, expected {(dst.dim, 4)}")
    out = A[:, 0].copy()
    for Ia, col in zip(dst.as_tuple(), (A[:, 1], A[:, 2], A[:, 3])):
        out = out - Ia @ col
    return out
