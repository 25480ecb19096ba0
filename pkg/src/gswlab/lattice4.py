"""Periodic four-dimensional lattice calculus.

Fields are vertex-based: a k-form stores one fiber value per site and per
increasing index tuple ``I`` (``dx_I``).  Fiber values are real scalars,
quaternions (trailing axis 4) or k x k complex matrices in u(k).

Two difference schemes are provided.  ``forward`` differences with their
backward adjoint give the compact Laplacian; ``central`` differences are
exactly skew-adjoint and second-order accurate, and are used wherever gauge
covariance has to converge at O(h^2).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np

from . import _backend
from .errors import DegreeOverflow, DegreeUnderflow, ParseError, ShapeMismatch

SD = "2+"
DEGREES = (0, 1, 2, SD, 3, 4)

COMPONENTS = {k: list(combinations(range(4), k)) for k in range(5)}
COMPONENTS[SD] = [(1,), (2,), (3,)]  # frame labels omega_1+, omega_2+, omega_3+

# omega_a+ = dx0^dx_a + dx_b^dx_c, (a, b, c) cyclic, in the basis (01, 02, 03, 12, 13, 23)
SD_FRAME = np.array(
    [
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0],
        [0.0, -1.0, 0.0],
        [1.0, 0.0, 0.0],
    ]
)
SD_WEIGHT = 2.0  # |omega_a+|^2 in the component inner product


@dataclass(frozen=True)
class Grid4:
    N: int
    h: float

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 4:
            raise ValueError(f"grid needs N >= 4 sites per axis, got {self.N}")
        if not self.h > 0:
            raise ValueError(f"grid spacing must be positive, got {self.h}")

    @classmethod
    def of_length(cls, N, L):
        return cls(N, L / N)

    @property
    def L(self):
        return self.N * self.h

    @property
    def shape(self):
        return (self.N,) * 4

    def coords(self):
        x = np.arange(self.N) * self.h
        return np.meshgrid(x, x, x, x, indexing="ij")


def ncomp(degree):
    return len(COMPONENTS[degree])


@dataclass(frozen=True, eq=False)
class FormField:
    """Immutable snapshot of a form-valued lattice field.

    ``data`` has shape ``(ncomp(degree), N, N, N, N, *fiber)``.
    """

    grid: Grid4
    degree: object
    data: np.ndarray

    def __post_init__(self):
        if self.degree not in DEGREES:
            raise ValueError(f"unknown degree {self.degree!r}")
        data = np.array(self.data, copy=True)
        expected = (ncomp(self.degree),) + self.grid.shape
        if data.shape[:5] != expected:
            raise ShapeMismatch(f"degree {self.degree} field needs leading shape {expected}, got {data.shape}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @classmethod
    def zeros(cls, grid, degree, fiber=(), dtype=np.float64):
        return cls(grid, degree, np.zeros((ncomp(degree),) + grid.shape + tuple(fiber), dtype=dtype))

    @property
    def fiber(self):
        return self.data.shape[5:]

    @property
    def is_lie(self):
        return np.iscomplexobj(self.data) and len(self.fiber) == 2

    def like(self, data, degree=None):
        return FormField(self.grid, self.degree if degree is None else degree, data)

    def _check(self, other):
        if not isinstance(other, FormField):
            raise TypeError("expected a FormField")
        if other.grid != self.grid or other.degree != self.degree or other.data.shape != self.data.shape:
            raise ShapeMismatch("fields differ in grid, degree or fiber")

    def __add__(self, other):
        self._check(other)
        return self.like(self.data + other.data)

    def __sub__(self, other):
        self._check(other)
        return self.like(self.data - other.data)

    def __neg__(self):
        return self.like(-self.data)

    def __mul__(self, s):
        return self.like(self.data * s)

    __rmul__ = __mul__

    def component(self, index):
        return self.data[COMPONENTS[self.degree].index(tuple(index))]


def inner(f, g):
    """Site-sum inner product ``h^4 sum_x <f(x), g(x)>``.

    Fibers use ``Re sum conj(f) g``, which equals ``-tr(f g)`` on u(k).
    Self-dual fields are weighted by ``|omega_a+|^2`` so that the pairing
    agrees with that of their embedding into 2-forms.
    """
    f._check(g)
    w = SD_WEIGHT if f.degree == SD else 1.0
    return float(w * f.grid.h**4 * np.sum(np.real(np.conj(f.data) * g.data)))


def norm(f):
    return float(np.sqrt(max(inner(f, f), 0.0)))


def _position_sign(mu, J):
    return -1.0 if J.index(mu) % 2 else 1.0


def _as_plain(f):
    return embed_selfdual(f) if f.degree == SD else f


def _derivatives(data, grid, kind):
    return [_backend.diff(data, mu, kind, grid.h) for mu in range(4)]


def _d(f, kind):
    f = _as_plain(f)
    k = f.degree
    if k >= 4:
        raise DegreeOverflow("the exterior derivative of a 4-form vanishes identically")
    der = _derivatives(f.data, f.grid, kind)
    src = COMPONENTS[k]
    out = np.zeros((ncomp(k + 1),) + f.data.shape[1:], dtype=f.data.dtype)
    for j, J in enumerate(COMPONENTS[k + 1]):
        for mu in J:
            I = tuple(x for x in J if x != mu)
            out[j] += _position_sign(mu, J) * der[mu][src.index(I)]
    return FormField(f.grid, k + 1, out)


def _delta(f, kind):
    f = _as_plain(f)
    k = f.degree
    if k <= 0:
        raise DegreeUnderflow("the codifferential of a 0-form is not defined")
    der = _derivatives(f.data, f.grid, kind)
    src = COMPONENTS[k]
    out = np.zeros((ncomp(k - 1),) + f.data.shape[1:], dtype=f.data.dtype)
    for i, I in enumerate(COMPONENTS[k - 1]):
        for mu in range(4):
            if mu in I:
                continue
            J = tuple(sorted(I + (mu,)))
            out[i] -= _position_sign(mu, J) * der[mu][src.index(J)]
    return FormField(f.grid, k - 1, out)


def d_forward(f):
    """Exterior derivative with forward differences."""
    return _d(f, "forward")


def delta_backward(f):
    """Codifferential built from backward differences; the exact adjoint of :func:`d_forward`."""
    return _delta(f, "backward")


def d_central(f):
    return _d(f, "central")


def delta_central(f):
    """Exact adjoint of :func:`d_central`."""
    return _delta(f, "central")


D_SCHEMES = {"forward": (d_forward, delta_backward), "central": (d_central, delta_central)}


def selfdual_project(f):
    """Coefficients of the self-dual part of a 2-form along the frame omega_a+."""
    if f.degree == SD:
        return f
    if f.degree != 2:
        raise ShapeMismatch(f"self-dual projection needs a 2-form, got degree {f.degree}")
    coeffs = np.tensordot(SD_FRAME.T, f.data, axes=(1, 0)) / SD_WEIGHT
    return FormField(f.grid, SD, coeffs)


def embed_selfdual(f):
    """The 2-form sum_a f_a omega_a+."""
    if f.degree != SD:
        raise ShapeMismatch(f"expected a self-dual field, got degree {f.degree}")
    return FormField(f.grid, 2, np.tensordot(SD_FRAME, f.data, axes=(1, 0)))


def antiselfdual_part(f):
    return f - embed_selfdual(selfdual_project(f))


# --- Lie algebra helpers -------------------------------------------------


def bracket(x, y):
    return x @ y - y @ x


def lie_basis(k, su=True):
    """Orthonormal basis of u(k) (or su(k)) for the inner product -tr(XY)."""
    mats = []
    for a in range(k):
        for b in range(a + 1, k):
            m = np.zeros((k, k), complex)
            m[a, b], m[b, a] = 1, -1
            mats.append(m / np.sqrt(2))
            m = np.zeros((k, k), complex)
            m[a, b], m[b, a] = 1j, 1j
            mats.append(m / np.sqrt(2))
    if su:
        for a in range(1, k):
            m = np.zeros((k, k), complex)
            m[np.arange(a), np.arange(a)] = 1j
            m[a, a] = -1j * a
            mats.append(m / np.sqrt(a * (a + 1)))
    else:
        for a in range(k):
            m = np.zeros((k, k), complex)
            m[a, a] = 1j
            mats.append(m)
    return np.array(mats)


def antihermitian_part(x):
    return 0.5 * (x - np.conj(np.swapaxes(x, -1, -2)))


def expm_antihermitian(x):
    """Batched matrix exponential of anti-Hermitian matrices via eigh."""
    w, v = np.linalg.eigh(-1j * np.asarray(x))
    return (v * np.exp(1j * w)[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))


def random_lie(rng, k, size=(), su=True):
    basis = lie_basis(k, su=su)
    c = rng.standard_normal(tuple(size) + (len(basis),))
    return np.tensordot(c, np.reshape(basis, (len(basis), k, k)), axes=(-1, 0))


def random_unitary(rng, k, size=()):
    return expm_antihermitian(random_lie(rng, k, size, su=False) * 3.0)


# --- covariant operators ---------------------------------------------------


def _bracket_d(a, f):
    """The term ``[a ^ f]`` of ``d_a f`` for a 1-form ``a``."""
    k = f.degree
    src = COMPONENTS[k]
    out = np.zeros((ncomp(k + 1),) + f.data.shape[1:], dtype=np.result_type(a.data, f.data))
    for j, J in enumerate(COMPONENTS[k + 1]):
        for mu in J:
            I = tuple(x for x in J if x != mu)
            out[j] += _position_sign(mu, J) * bracket(a.data[mu], f.data[src.index(I)])
    return out


def d_cov(a, f, scheme="central"):
    """Covariant exterior derivative ``d_a f = d f + [a ^ f]`` for Lie-valued ``f``."""
    f = _as_plain(f)
    if f.degree >= 4:
        raise DegreeOverflow("the covariant derivative of a 4-form vanishes identically")
    base = D_SCHEMES[scheme][0](f)
    return FormField(f.grid, f.degree + 1, base.data + _bracket_d(a, f))


def delta_cov(a, f, scheme="central"):
    """Exact adjoint of :func:`d_cov` for anti-Hermitian ``a``."""
    f = _as_plain(f)
    k = f.degree
    if k <= 0:
        raise DegreeUnderflow("the codifferential of a 0-form is not defined")
    base = D_SCHEMES[scheme][1](f)
    src = COMPONENTS[k]
    out = np.array(base.data)
    for i, I in enumerate(COMPONENTS[k - 1]):
        for mu in range(4):
            if mu in I:
                continue
            J = tuple(sorted(I + (mu,)))
            out[i] -= _position_sign(mu, J) * bracket(a.data[mu], f.data[src.index(J)])
    return FormField(f.grid, k - 1, out)


def wedge_bracket(a, b):
    """``[a ^ b]`` for Lie-valued 1-forms: components ``[a_mu, b_nu] - [a_nu, b_mu]``."""
    out = np.zeros((6,) + a.data.shape[1:], dtype=np.result_type(a.data, b.data))
    for j, (mu, nu) in enumerate(COMPONENTS[2]):
        out[j] = bracket(a.data[mu], b.data[nu]) - bracket(a.data[nu], b.data[mu])
    return FormField(a.grid, 2, out)


def curvature(a):
    """``F_a = d a + 1/2 [a ^ a]`` with central differences."""
    if a.degree != 1:
        raise ShapeMismatch(f"curvature needs a 1-form, got degree {a.degree}")
    da = d_central(a)
    if not a.is_lie:
        return da
    return FormField(a.grid, 2, da.data + 0.5 * wedge_bracket(a, a).data)


def gauge_transform(a, g, factor=1.0):
    """``a -> g a g^-1 - factor * (d g) g^-1`` with central-difference ``d g``.

    ``g`` has shape (N, N, N, N, k, k) with unitary values.  The inhomogeneous
    term is projected onto u(k), where it lies in the continuum limit.
    ``factor`` = 2 is the determinant-line convention of the abelian
    Seiberg-Witten system.
    """
    if a.degree != 1:
        raise ShapeMismatch(f"gauge transform acts on 1-forms, got degree {a.degree}")
    g = np.asarray(g)
    if g.shape != a.data.shape[1:]:
        raise ShapeMismatch(f"gauge map shape {g.shape} does not match fiber {a.data.shape[1:]}")
    ginv = np.conj(np.swapaxes(g, -1, -2))
    dg = _derivatives(g[None], a.grid, "central")
    out = np.empty_like(a.data, dtype=np.complex128)
    for mu in range(4):
        out[mu] = g @ a.data[mu] @ ginv - factor * antihermitian_part(dg[mu][0] @ ginv)
    return FormField(a.grid, 1, out)


def conjugate(f, g):
    """Adjoint action ``f -> g f g^-1`` on a Lie-valued form of any degree."""
    ginv = np.conj(np.swapaxes(g, -1, -2))
    return f.like(g[None] @ f.data @ ginv[None])


# --- smooth periodic sampling ------------------------------------------------


class TrigPolynomial:
    """Random smooth periodic function on the torus [0, L)^4.

    Coefficients are drawn once, so evaluating on grids of different N
    samples the same continuum function (used for convergence orders).
    """

    def __init__(self, rng, L, nterms=3, kmax=1, amplitude=1.0, shape=()):
        self.L = float(L)
        self.shape = tuple(shape)
        self.waves = rng.integers(-kmax, kmax + 1, size=(nterms, 4))
        self.waves[np.all(self.waves == 0, axis=1), 0] = 1
        self.phase = rng.uniform(0, 2 * np.pi, size=(nterms,) + self.shape)
        self.amp = amplitude * rng.standard_normal((nterms,) + self.shape) / np.sqrt(nterms)

    def __call__(self, grid):
        x = grid.coords()
        out = np.zeros(grid.shape + self.shape)
        for wave, ph, amp in zip(self.waves, self.phase, self.amp):
            arg = sum(2 * np.pi * wave[m] * x[m] / self.L for m in range(4))
            out += amp * np.cos(arg[(...,) + (None,) * len(self.shape)] + ph)
        return out


class SmoothLieForm:
    """Smooth u(k)-valued form built from trig polynomials in an orthonormal Lie basis."""

    def __init__(self, rng, L, degree, k, su=True, **kw):
        self.degree = degree
        self.basis = lie_basis(k, su=su)
        self.coef = TrigPolynomial(rng, L, shape=(ncomp(degree), len(self.basis)), **kw)

    def __call__(self, grid):
        c = np.moveaxis(self.coef(grid), 4, 0)  # (ncomp, N,N,N,N, nbasis)
        return FormField(grid, self.degree, np.tensordot(c, self.basis, axes=(-1, 0)))


class SmoothGauge:
    """Smooth unitary gauge map ``exp(X(x))`` for a smooth u(k)-valued X."""

    def __init__(self, rng, L, k, su=False, **kw):
        self.generator = SmoothLieForm(rng, L, 0, k, su=su, **kw)

    def __call__(self, grid):
        return expm_antihermitian(self.generator(grid).data[0])


# --- serialization -------------------------------------------------------------

_MAGIC = b"GSWF1\n"


def _kind(f):
    if f.is_lie:
        return "lie", f.fiber[0]
    if f.fiber == (4,) and not np.iscomplexobj(f.data):
        return "quat", 0
    if f.fiber == ():
        return "real", 0
    raise ShapeMismatch(f"cannot serialize fiber {f.fiber}")


def _site_major(f):
    arr = np.moveaxis(f.data, 0, 4)  # (N,N,N,N, ncomp, *fiber)
    if np.iscomplexobj(arr):
        arr = np.stack([arr.real, arr.imag], axis=-1)
    return np.ascontiguousarray(arr, dtype="<f8").reshape(f.grid.N**4, -1)


def header(f):
    kind, k = _kind(f)
    return {"N": f.grid.N, "h": f.grid.h, "degree": str(f.degree), "k": int(k), "kind": kind}


def _from_rows(hdr, rows):
    grid = Grid4(int(hdr["N"]), float(hdr["h"]))
    degree = SD if hdr["degree"] == SD else int(hdr["degree"])
    kind, k = hdr["kind"], int(hdr["k"])
    fiber = {"real": (), "quat": (4,), "lie": (k, k, 2)}[kind]
    try:
        arr = np.asarray(rows, dtype=np.float64).reshape(grid.shape + (ncomp(degree),) + fiber)
    except ValueError as exc:
        raise ParseError(f"field payload does not match header {hdr}: {exc}") from None
    if kind == "lie":
        arr = arr[..., 0] + 1j * arr[..., 1]
    return FormField(grid, degree, np.moveaxis(arr, 4, 0))


def save_field(path, f):
    """Write ``f`` as CSV (``.csv``) or flat little-endian binary (anything else).

    CSV layout: line 1 ``N,h,degree,k,kind``, line 2 the values, then one row
    per site in lexicographic site order with components (and fiber entries,
    complex as re,im pairs) along the row.  Binary layout: the magic line
    ``GSWF1``, one JSON header line with the same keys, then the doubles.
    """
    path = Path(path)
    hdr = header(f)
    rows = _site_major(f)
    if path.suffix == ".csv":
        with path.open("w", encoding="utf-8") as fh:
            fh.write("N,h,degree,k,kind\n")
            fh.write(f"{hdr['N']},{hdr['h']!r},{hdr['degree']},{hdr['k']},{hdr['kind']}\n")
            np.savetxt(fh, rows, fmt="%.17g", delimiter=",")
    else:
        with path.open("wb") as fh:
            fh.write(_MAGIC)
            fh.write(json.dumps(hdr, sort_keys=True).encode() + b"\n")
            fh.write(rows.tobytes())


def load_field(path):
    path = Path(path)
    if path.suffix == ".csv":
        with path.open(encoding="utf-8") as fh:
            keys = fh.readline().strip().split(",")
            vals = fh.readline().strip().split(",")
            if keys != ["N", "h", "degree", "k", "kind"] or len(vals) != 5:
                raise ParseError(f"{path}: malformed field header")
            rows = np.loadtxt(fh, delimiter=",", ndmin=2)
        return _from_rows(dict(zip(keys, vals)), rows)
    raw = path.read_bytes()
    if not raw.startswith(_MAGIC):
        raise ParseError(f"{path}: not a gswlab field file")
    line_end = raw.index(b"\n", len(_MAGIC))
    hdr = json.loads(raw[len(_MAGIC):line_end])
    return _from_rows(hdr, np.frombuffer(raw[line_end + 1:], dtype="<f8"))
