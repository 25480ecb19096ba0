"""Exterior algebra over R^8, the Cayley 4-form and the Spin(7) splitting of 2-forms.

Forms are stored as coefficient arrays over the 256 blades of
Lambda(R^8)*, indexed by bitmask (bit m marks dx_m).  Coefficients may
carry trailing axes, e.g. a quaternion axis of length 4 for the H-valued
1-forms theta and eta.  R^8 = U + V with coordinates x0..x3 on U and x4..x7
on V.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .clifford import popcount, reorder_sign
from .errors import DegreeMismatch, ShapeMismatch
from .lattice4 import SD_FRAME
from .quat import BASIS, qconj, qmul

DIM = 8
NBLADES = 1 << DIM
TOP = NBLADES - 1

PAIRS = list(combinations(range(DIM), 2))
PAIR_MASKS = np.array([(1 << i) | (1 << j) for i, j in PAIRS])
PAIRS_U = [p for p in PAIRS if p[1] < 4]
PAIRS_V = [p for p in PAIRS if p[0] >= 4]
PAIRS_UV = [p for p in PAIRS if p[0] < 4 <= p[1]]


@dataclass(frozen=True, eq=False)
class Form8:
    """Element of Lambda(R^8)* with real (or quaternion, trailing axis 4) coefficients."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.float64)
        if c.shape[:1] != (NBLADES,):
            raise ShapeMismatch(f"Form8 needs {NBLADES} blade coefficients, got {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def blade(cls, *indices, value=1.0):
        c = np.zeros(NBLADES)
        mask = 0
        for i in indices:
            mask |= 1 << i
        c[mask] = value * _sort_sign(indices)
        return cls(c)

    @property
    def is_quaternionic(self):
        return self.coeffs.shape[1:] == (4,)

    def degrees(self, tol=0.0):
        nz = np.any(np.abs(self.coeffs.reshape(NBLADES, -1)) > tol, axis=1)
        return sorted({popcount(m) for m in np.nonzero(nz)[0]})

    def real(self):
        return Form8(self.coeffs[..., 0]) if self.is_quaternionic else self

    def conj(self):
        return Form8(qconj(self.coeffs)) if self.is_quaternionic else self

    def __add__(self, other):
        return Form8(self.coeffs + other.coeffs)

    def __sub__(self, other):
        return Form8(self.coeffs - other.coeffs)

    def __mul__(self, s):
        return Form8(self.coeffs * s)

    __rmul__ = __mul__

    def components(self):
        """Nonzero coefficients keyed by sorted index tuples."""
        flat = self.coeffs.reshape(NBLADES, -1)
        return {
            tuple(i for i in range(DIM) if m >> i & 1): self.coeffs[m]
            for m in range(NBLADES)
            if np.any(flat[m] != 0.0)
        }


def _sort_sign(indices):
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0.0
    inversions = sum(1 for a in range(len(idx)) for b in range(a + 1, len(idx)) if idx[a] > idx[b])
    return -1.0 if inversions % 2 else 1.0


def wedge(x, y):
    """Exterior product in blade order; quaternion coefficients multiply in wedge order."""
    quat = x.is_quaternionic or y.is_quaternionic
    xc, yc = x.coeffs, y.coeffs
    if quat:
        xc = xc if x.is_quaternionic else xc[:, None] * BASIS[0]
        yc = yc if y.is_quaternionic else yc[:, None] * BASIS[0]
    out = np.zeros((NBLADES,) + xc.shape[1:])
    xs = np.nonzero(np.any(xc.reshape(NBLADES, -1) != 0.0, axis=1))[0]
    ys = np.nonzero(np.any(yc.reshape(NBLADES, -1) != 0.0, axis=1))[0]
    for A in xs:
        for B in ys:
            if A & B:
                continue
            prod = qmul(xc[A], yc[B]) if quat else xc[A] * yc[B]
            out[A | B] += reorder_sign(A, B) * prod
    return Form8(out)


def hodge_star(x, orientation=1):
    """``*dx_A = s dx_{A^c}`` with ``dx_A ^ *dx_A = vol``; ``orientation=-1`` reverses vol."""
    out = np.zeros_like(x.coeffs)
    for A in range(NBLADES):
        C = TOP ^ A
        out[C] = orientation * reorder_sign(A, C) * x.coeffs[A]
    return Form8(out)


def volume(orientation=1):
    c = np.zeros(NBLADES)
    c[TOP] = orientation
    return Form8(c)


def theta_eta():
    """The H-valued projections onto U and V as 1-forms: theta = sum_m e_m dx_m, eta = sum_m e_m dx_(4+m)."""
    th = np.zeros((NBLADES, 4))
    et = np.zeros((NBLADES, 4))
    for m in range(4):
        th[1 << m] = BASIS[m]
        et[1 << (m + 4)] = BASIS[m]
    return Form8(th), Form8(et)


@lru_cache(maxsize=None)
def _cayley_coeffs():
    th, et = theta_eta()
    tt = wedge(th, th.conj())
    ee = wedge(et, et.conj())
    quartic = wedge(wedge(tt, th), th.conj()) - 6.0 * wedge(tt, ee) + wedge(wedge(ee, et), et.conj())
    c = -quartic.real().coeffs / 24.0
    c.setflags(write=False)
    return c


def cayley_form():
    """``-1/24 Re(theta^thetabar^theta^thetabar - 6 theta^thetabar^eta^etabar + eta^etabar^eta^etabar)``."""
    return Form8(_cayley_coeffs())


def two_form_vector(x):
    if x.degrees() not in ([], [2]):
        raise DegreeMismatch(f"expected a 2-form, got degrees {x.degrees()}")
    return x.coeffs[PAIR_MASKS]


def two_form(vec):
    c = np.zeros((NBLADES,) + np.shape(vec)[1:])
    c[PAIR_MASKS] = vec
    return Form8(c)


def cayley_eigenmap(omega, orientation=1):
    """``omega -> -*(omega ^ Omega)`` on 2-forms."""
    two_form_vector(omega)
    return hodge_star(wedge(omega, cayley_form()), orientation) * -1.0


@lru_cache(maxsize=None)
def _eigenmap_matrix(orientation):
    T = np.empty((28, 28))
    for col, (i, j) in enumerate(PAIRS):
        T[:, col] = two_form_vector(cayley_eigenmap(Form8.blade(i, j), orientation))
    T.setflags(write=False)
    return T


def eigenmap_matrix(orientation=1):
    """28x28 matrix of :func:`cayley_eigenmap` in the basis dx_i ^ dx_j, i < j (lexicographic)."""
    return _eigenmap_matrix(orientation)


@dataclass(frozen=True)
class Spin7Spectrum:
    eigenvalues: np.ndarray
    value7: float  # eigenvalue on the 7-dimensional eigenspace
    value21: float  # eigenvalue on the 21-dimensional eigenspace
    P_plus: np.ndarray
    P_minus: np.ndarray


@lru_cache(maxsize=None)
def spin7_spectrum(orientation=1):
    """Eigen-decomposition of the eigenmap; P_plus projects onto the 7-dimensional eigenspace."""
    T = eigenmap_matrix(orientation)
    w, v = np.linalg.eigh(T)
    values = np.unique(np.round(w, 9))
    if values.size != 2:
        raise RuntimeError(f"eigenmap should have two eigenvalues, found {values}")
    counts = {float(x): int(np.sum(np.isclose(w, x, atol=1e-9))) for x in values}
    seven = [x for x, n in counts.items() if n == 7]
    if len(seven) != 1:
        raise RuntimeError(f"unexpected multiplicities {counts}")
    val7 = seven[0]
    val21 = next(x for x in counts if x != val7)
    E = v[:, np.isclose(w, val7, atol=1e-9)]
    Pp = E @ E.T
    Pm = np.eye(28) - Pp
    for arr in (w, Pp, Pm):
        arr.setflags(write=False)
    return Spin7Spectrum(w, val7, val21, Pp, Pm)


def spin7_projectors(orientation=1):
    s = spin7_spectrum(orientation)
    return s.P_plus, s.P_minus


# --- the split criterion ----------------------------------------------------------

_IDX_U = [PAIRS.index(p) for p in PAIRS_U]
_IDX_V = [PAIRS.index(p) for p in PAIRS_V]
_IDX_UV = [PAIRS.index(p) for p in PAIRS_UV]


def _sd4(block):
    """Self-dual frame coefficients (weight-2 normalization) of a 4d 2-form block (6, ...)."""
    return np.tensordot(SD_FRAME.T, block, axes=(1, 0)) / 2.0


@lru_cache(maxsize=None)
def derived_identification(orientation=1):
    """Matrix M with E7 meeting Lambda2U + Lambda2V in {omega+_U(x) + omega+_V(M x)}.

    Returns ``(M, K)`` where ``K = -M^-T`` carries (W20)+ to the value of
    (W02)+ that makes the block component of P+ W vanish.
    """
    Pp = spin7_spectrum(orientation).P_plus
    blk = _IDX_U + _IDX_V
    w, v = np.linalg.eigh(Pp[np.ix_(blk, blk)])
    basis = v[:, w > 0.5]
    if basis.shape[1] != 3:
        raise RuntimeError("7-dimensional eigenspace should meet the U/V block in 3 dimensions")
    xu = _sd4(basis[:6])
    xv = _sd4(basis[6:])
    # the U parts must be self-dual for the graph description to hold
    if np.abs(basis[:6] - SD_FRAME @ xu).max() > 1e-9 or np.abs(basis[6:] - SD_FRAME @ xv).max() > 1e-9:
        raise RuntimeError("eigenspace block is not a graph between self-dual parts")
    M = xv @ np.linalg.inv(xu)
    if np.abs(M.T @ M - np.eye(3)).max() > 1e-9:
        raise RuntimeError("derived identification is not orthogonal")
    K = -np.linalg.inv(M).T
    return M, K


def assemble_two_form(W20, W11, W02):
    """28-component vector (with trailing Lie axes) from U, U x V and V blocks.

    ``W20`` and ``W02`` list the 4d components (01, 02, 03, 12, 13, 23) of
    the U and V parts; ``W11[m, n]`` is the coefficient of dx_m ^ dx_(4+n).
    """
    W20, W11, W02 = (np.asarray(x) for x in (W20, W11, W02))
    fiber = W20.shape[1:]
    if W20.shape[:1] != (6,) or W02.shape != W20.shape or W11.shape != (4, 4) + fiber:
        raise ShapeMismatch(f"blocks need shapes (6,F), (4,4,F), (6,F); got {W20.shape}, {W11.shape}, {W02.shape}")
    out = np.zeros((28,) + fiber, dtype=np.result_type(W20, W11, W02))
    out[_IDX_U] = W20
    out[_IDX_V] = W02
    for idx, (i, j) in zip(_IDX_UV, PAIRS_UV):
        out[idx] = W11[i, j - 4]
    return out


@dataclass(frozen=True)
class SplitReport:
    left: bool
    right: bool
    defect_left: float
    defect_mixed: float
    defect_blocks: float
    defect_right: float

    @property
    def agree(self):
        return self.left == self.right


def _fnorm(x):
    x = np.asarray(x)
    return float(np.sqrt(np.sum(np.abs(x) ** 2)))


def spin7_split_check(W20, W11, W02, tol=1e-9, orientation=1):
    """Compare ``P+ W = 0`` with ``(W11)+_8 = 0 and K (W20)+_4 = (W02)+_4``.

    Defects are Frobenius norms over all components (and Lie entries).
    ``defect_right`` combines the two right-hand conditions so that it
    equals ``defect_left`` identically: the block part of |P+ W| is
    ``|M^T ((W02)+ - K (W20)+)|`` with M from :func:`derived_identification`.
    """
    Pp = spin7_spectrum(orientation).P_plus
    W = assemble_two_form(W20, W11, W02)
    flat = W.reshape(28, -1)
    left = _fnorm(Pp @ flat)

    W11_only = np.zeros_like(flat)
    W11_only[_IDX_UV] = flat[_IDX_UV]
    mixed = _fnorm(Pp @ W11_only)

    M, K = derived_identification(orientation)
    u = _sd4(np.asarray(W20).reshape(6, -1))
    v = _sd4(np.asarray(W02).reshape(6, -1))
    gap = v - K @ u
    blocks = _fnorm(gap)
    right = float(np.hypot(mixed, _fnorm(M.T @ gap)))
    scale = max(1.0, _fnorm(flat))
    return SplitReport(
        left=left <= tol * scale,
        right=(mixed <= tol * scale) and (blocks <= tol * scale),
        defect_left=left,
        defect_mixed=mixed,
        defect_blocks=blocks,
        defect_right=right,
    )
