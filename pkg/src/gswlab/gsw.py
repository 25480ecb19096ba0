"""Generalized Seiberg-Witten systems with targets built from a Lie algebra g.

Covers the Vafa-Witten equations (target g x H), complex anti-self-duality
(the same target read as g-valued 1-forms), the quaternion-Hermitian
structure on the complexification of a Hermitian space, and the
five-dimensional instanton moment map and flow.

Lie-valued fields carry u(k) matrices in their fiber; self-dual fields are
stored by their three frame coefficients, with omega_1+, omega_2+,
omega_3+ identified with i, j, k.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BlowUp, GridMismatch, IncompatibleTriple, ShapeMismatch
from .lattice4 import (
    COMPONENTS,
    SD,
    SD_FRAME,
    SD_WEIGHT,
    FormField,
    bracket,
    curvature,
    d_cov,
    delta_cov,
    embed_selfdual,
    inner,
    norm,
    selfdual_project,
    wedge_bracket,
)

# --- Vafa-Witten ----------------------------------------------------------


def _check_same(*xs):
    shape = np.shape(xs[0])
    if any(np.shape(x) != shape for x in xs):
        raise ShapeMismatch(f"Lie values differ in shape: {[np.shape(x) for x in xs]}")
    if len(shape) < 2 or shape[-1] != shape[-2]:
        raise ShapeMismatch(f"expected square matrices, got shape {shape}")


def vw_moment(x0, x1, x2, x3):
    """``([x2,x3]+[x0,x1], [x3,x1]+[x0,x2], [x1,x2]+[x0,x3])``, broadcasting over leading axes."""
    _check_same(x0, x1, x2, x3)
    return (
        bracket(x2, x3) + bracket(x0, x1),
        bracket(x3, x1) + bracket(x0, x2),
        bracket(x1, x2) + bracket(x0, x3),
    )


_QTABLE = np.zeros((4, 4, 4))  # e_a e_b = sum_c _QTABLE[a, b, c] e_c
for _a, _b, _c, _s in [
    (0, 0, 0, 1), (0, 1, 1, 1), (0, 2, 2, 1), (0, 3, 3, 1),
    (1, 0, 1, 1), (1, 1, 0, -1), (1, 2, 3, 1), (1, 3, 2, -1),
    (2, 0, 2, 1), (2, 1, 3, -1), (2, 2, 0, -1), (2, 3, 1, 1),
    (3, 0, 3, 1), (3, 1, 2, 1), (3, 2, 1, -1), (3, 3, 0, -1),
]:  # fmt: skip
    _QTABLE[_a, _b, _c] = _s


def quat_matmul(p, q):
    """Product in g (x) H of quaternion-valued matrices given as (4, ..., k, k) stacks."""
    out = np.zeros(np.broadcast_shapes(p.shape, q.shape), dtype=np.result_type(p, q))
    for a in range(4):
        for b in range(4):
            prod = p[a] @ q[b]
            for c in range(4):
                if _QTABLE[a, b, c]:
                    out[c] += _QTABLE[a, b, c] * prod
    return out


def vw_moment_compact(x0, x1, x2, x3):
    """``sigma(Im xi) + [Re xi, Im xi]`` with ``sigma(v) = Im(v v)`` computed in g (x) H."""
    _check_same(x0, x1, x2, x3)
    zero = np.zeros_like(x0)
    im = np.stack([zero, x1, x2, x3])
    sq = quat_matmul(im, im)
    return tuple(sq[a] + bracket(x0, im[a]) for a in (1, 2, 3))


def sigma_lie(b):
    """Sitewise sigma of a g-valued self-dual field, again self-dual."""
    b1, b2, b3 = b.data
    zero = np.zeros_like(b1)
    return b.like(np.stack(vw_moment(zero, b1, b2, b3)))


@dataclass(frozen=True)
class VWConfig:
    a: FormField
    b: FormField
    c: FormField

    def __post_init__(self):
        if (self.a.degree, self.b.degree, self.c.degree) != (1, SD, 0):
            raise ShapeMismatch("Vafa-Witten data needs degrees (1, 2+, 0)")
        if not (self.a.grid == self.b.grid == self.c.grid):
            raise ShapeMismatch("fields live on different grids")
        if not (self.a.fiber == self.b.fiber == self.c.fiber) or not self.a.is_lie:
            raise ShapeMismatch("fields need a common u(k) fiber")


def vw_residual(cfg, scheme="central"):
    """``(d_a c + delta_a b, F_a+ - sigma(b) + [b, c])`` as (1-form, self-dual) fields."""
    r1 = d_cov(cfg.a, cfg.c, scheme) + delta_cov(cfg.a, embed_selfdual(cfg.b), scheme)
    fplus = selfdual_project(curvature(cfg.a))
    bc = cfg.b.like(bracket(cfg.b.data, cfg.c.data[0][None]))
    return r1, fplus - sigma_lie(cfg.b) + bc


# --- complex anti-self-duality ---------------------------------------------


@dataclass(frozen=True)
class CASDConfig:
    a: FormField
    b: FormField

    def __post_init__(self):
        if self.a.degree != 1 or self.b.degree != 1:
            raise ShapeMismatch("complex ASD data is a pair of 1-forms")
        if self.a.grid != self.b.grid or self.a.fiber != self.b.fiber or not self.a.is_lie:
            raise ShapeMismatch("a and b need the same grid and u(k) fiber")


def casd_residual(cfg, scheme="central"):
    """``(delta_a b, d_a+ b, F_a+ - 1/2 [b ^ b]+)``."""
    r1 = delta_cov(cfg.a, cfg.b, scheme)
    r2 = selfdual_project(d_cov(cfg.a, cfg.b, scheme))
    fa = curvature(cfg.a)
    r3 = selfdual_project(fa - 0.5 * wedge_bracket(cfg.b, cfg.b))
    return r1, r2, r3


def complex_curvature_plus(cfg):
    """Self-dual part of the curvature of ``A = a + i b`` on the lattice."""
    A = FormField(cfg.a.grid, 1, cfg.a.data + 1j * cfg.b.data)
    return selfdual_project(curvature(A))


def _sd_coeffs(two_form):
    """Self-dual frame coefficients of pointwise 2-form components (6, ...)."""
    return np.tensordot(SD_FRAME.T, two_form, axes=(1, 0)) / SD_WEIGHT


def casd_curvature_identity(a, b, da, db):
    """Defect of ``F_A+ = F_a+ - 1/2 [b ^ b]+ + i d_a+ b`` at one point.

    ``a``, ``b`` have shape (4, k, k): the values of the 1-forms; ``da`` and
    ``db`` have shape (4, 4, k, k) with ``da[mu, nu]`` the partial derivative
    ``d_mu a_nu``.  The left side is the self-dual curvature of the complex
    connection ``A = a + i b`` computed from its own jet; the right side is
    assembled from the real pieces.  Returns the largest absolute entry of
    the difference.
    """
    a, b, da, db = (np.asarray(x, dtype=complex) for x in (a, b, da, db))
    A = a + 1j * b
    dA = da + 1j * db
    pairs = COMPONENTS[2]
    FA = np.stack([dA[m, n] - dA[n, m] + bracket(A[m], A[n]) for m, n in pairs])
    Fa = np.stack([da[m, n] - da[n, m] + bracket(a[m], a[n]) for m, n in pairs])
    dab = np.stack([db[m, n] - db[n, m] + bracket(a[m], b[n]) - bracket(a[n], b[m]) for m, n in pairs])
    half_bb = np.stack([bracket(b[m], b[n]) for m, n in pairs])
    lhs = _sd_coeffs(FA)
    rhs = _sd_coeffs(Fa) - _sd_coeffs(half_bb) + 1j * _sd_coeffs(dab)
    return float(np.abs(lhs - rhs).max())


def gauge_vector(cfg, lam, scheme="central"):
    """Infinitesimal real gauge action of ``lam``: ``(-d_a lam, [lam, b])``."""
    va = -d_cov(cfg.a, lam, scheme)
    vb = cfg.b.like(bracket(lam.data[0][None], cfg.b.data))
    return va, vb


def omega1(x, y):
    """Kahler form ``omega_1((v1, w1), (v2, w2)) = -<v2, w1> + <v1, w2>`` on pairs of 1-forms."""
    (v1, w1), (v2, w2) = x, y
    return -inner(v2, w1) + inner(v1, w2)


def moment_pairing_defect(cfg, lam, v, w, eps=1e-3, scheme="central"):
    """Compare ``d/de <delta_{a+e v}(b + e w), lam>`` with ``omega_1((v, w), X_lam)``.

    The map is quadratic in (a, b), so the symmetric difference quotient is
    exact up to rounding.  Returns ``(derivative, omega_value)``.
    """
    def mu(e):
        return inner(delta_cov(cfg.a + e * v, cfg.b + e * w, scheme), lam)

    deriv = (mu(eps) - mu(-eps)) / (2 * eps)
    return deriv, omega1((v, w), gauge_vector(cfg, lam, scheme))


# --- quaternion-Hermitian structure on V + V ----------------------------------


@dataclass(frozen=True)
class QuaternionHermitianReport:
    relations: float
    orthogonality: float
    forms: float
    omega2_restriction: float

    def max_defect(self):
        return max(self.relations, self.orthogonality, self.forms, self.omega2_restriction)


def quaternion_hermitian_structure(I, g):
    """``(I1, I2, I3)`` and metric ``G`` on V + V with I1(v,w)=(-w,v), I2=(Iv,-Iw), I3=(Iw,Iv)."""
    n = I.shape[0]
    Z = np.zeros((n, n))
    E = np.eye(n)
    I1 = np.block([[Z, -E], [E, Z]])
    I2 = np.block([[I, Z], [Z, -I]])
    I3 = np.block([[Z, I], [I, Z]])
    G = np.block([[g, Z], [Z, g]])
    return (I1, I2, I3), G


def _pair_form(n, f):
    """Bilinear form on V + V from ``f(v1, w1, v2, w2)`` evaluated on basis pairs."""
    M = np.empty((2 * n, 2 * n))
    basis = np.eye(2 * n)
    for r in range(2 * n):
        for s in range(2 * n):
            x, y = basis[r], basis[s]
            M[r, s] = f(x[:n], x[n:], y[:n], y[n:])
    return M


def quaternion_hermitian_check(I, omega, g, tol=1e-10):
    """Build the structure on V + V from a Hermitian triple (g, I, omega) and report its defects.

    ``omega`` is the matrix of ``omega(x, y) = g(I x, y)``.  The symplectic
    forms are assembled from the explicit component formulas and compared
    with ``G(I_a ., .)``.
    """
    I, omega, g = (np.asarray(x, dtype=np.float64) for x in (I, omega, g))
    n = g.shape[0]
    if I.shape != (n, n) or omega.shape != (n, n):
        raise ShapeMismatch("I, omega and g must be square of equal size")
    scale = max(1.0, np.abs(g).max())
    if np.abs(I.T @ g @ I - g).max() > tol * scale:
        raise IncompatibleTriple("g(I., I.) differs from g")
    if np.abs(I.T @ g - omega).max() > tol * scale:
        raise IncompatibleTriple("omega differs from g(I., .)")

    (I1, I2, I3), G = quaternion_hermitian_structure(I, g)
    eye = np.eye(2 * n)
    rel = max(
        np.abs(I1 @ I1 + eye).max(),
        np.abs(I2 @ I2 + eye).max(),
        np.abs(I3 @ I3 + eye).max(),
        np.abs(I1 @ I2 - I3).max(),
    )
    orth = max(np.abs(M.T @ G @ M - G).max() for M in (I1, I2, I3))

    def om(x, y):
        return x @ omega @ y

    def gg(x, y):
        return x @ g @ y

    w1 = _pair_form(n, lambda v1, w1, v2, w2: -gg(v2, w1) + gg(v1, w2))
    w2 = _pair_form(n, lambda v1, w1, v2, w2: om(v1, v2) - om(w1, w2))
    w3 = _pair_form(n, lambda v1, w1, v2, w2: om(w1, v2) + om(v1, w2))
    forms = max(np.abs(w - M.T @ G).max() for w, M in ((w1, I1), (w2, I2), (w3, I3)))
    restr = np.abs(w2[:n, :n] - omega).max()
    return QuaternionHermitianReport(float(rel), float(orth), float(forms), float(restr))


def random_hermitian_triple(rng, m):
    """Random compatible (g, I, omega) on R^(2m): I is conjugated from the standard structure."""
    J0 = np.kron(np.eye(m), np.array([[0.0, -1.0], [1.0, 0.0]]))
    # singular values in [e^-1/2, e^1/2] keep the triple well conditioned
    U, _ = np.linalg.qr(rng.standard_normal((2 * m, 2 * m)))
    V, _ = np.linalg.qr(rng.standard_normal((2 * m, 2 * m)))
    A = U @ np.diag(np.exp(rng.uniform(-0.5, 0.5, 2 * m))) @ V
    Ainv = np.linalg.inv(A)
    I = A @ J0 @ Ainv
    g = Ainv.T @ Ainv
    return g, I, I.T @ g


# --- five-dimensional instantons -------------------------------------------------


def _time_step(t):
    t = np.asarray(t, dtype=np.float64)
    if t.ndim != 1 or t.size < 3:
        raise GridMismatch("time grid needs at least three samples")
    steps = np.diff(t)
    dt = steps.mean()
    if not dt > 0 or np.abs(steps - dt).max() > 1e-12 * max(1.0, abs(dt)):
        raise GridMismatch("time grid must be uniform and increasing")
    return dt


def five_d_moment(T, t, periodic=True):
    """Moment map of the gauge action on paths ``T = T0 + T1 i + T2 j + T3 k``.

    ``T`` has shape (4, nt, k, k).  The time derivative is a central
    difference; with ``periodic=False`` the first and last samples are
    dropped and the output has nt - 2 samples.
    """
    T = np.asarray(T)
    t = np.asarray(t, dtype=np.float64)
    if T.ndim < 2 or T.shape[0] != 4 or T.shape[1] != t.size:
        raise GridMismatch(f"paths of shape {T.shape} do not match {t.size} time samples")
    dt = _time_step(t)
    if periodic:
        Tdot = (np.roll(T, -1, axis=1) - np.roll(T, 1, axis=1)) / (2 * dt)
        S = T
    else:
        Tdot = (T[:, 2:] - T[:, :-2]) / (2 * dt)
        S = T[:, 1:-1]
    T0, T1, T2, T3 = S
    return (
        Tdot[1] + bracket(T0, T1) - bracket(T2, T3),
        Tdot[2] + bracket(T0, T2) - bracket(T3, T1),
        Tdot[3] + bracket(T0, T3) - bracket(T1, T2),
    )


def five_d_gauge(T, g, t, periodic=True):
    """``g . T``: conjugation on all parts and ``-g' g^-1`` added to T0 (central difference).

    The inhomogeneous term is carried by the real part T0, which plays the
    role of the connection along the time line.  Returns the transformed
    paths on the same (or interior-trimmed) samples.
    """
    dt = _time_step(t)
    ginv = np.conj(np.swapaxes(g, -1, -2))
    if periodic:
        gdot = (np.roll(g, -1, axis=0) - np.roll(g, 1, axis=0)) / (2 * dt)
        out = g[None] @ T @ ginv[None]
    else:
        gdot = (g[2:] - g[:-2]) / (2 * dt)
        g, ginv, T = g[1:-1], ginv[1:-1], T[:, 1:-1]
        out = g[None] @ T @ ginv[None]
    out[0] = out[0] - gdot @ ginv
    return out


@dataclass(frozen=True)
class FiveDState:
    t: float
    a: FormField
    b: FormField
    c: FormField

    def __post_init__(self):
        VWConfig(self.a, self.b, self.c)  # same shape requirements

    def norms(self):
        return norm(self.a), norm(self.b), norm(self.c)


BLOWUP = 1e6


def five_d_rhs(a, b, c, scheme="central"):
    """``(delta_a b + d_a c, F_a+ - sigma(b) - [c, b])``; c is held fixed."""
    adot = delta_cov(a, embed_selfdual(b), scheme) + d_cov(a, c, scheme)
    cb = b.like(bracket(c.data[0][None], b.data))
    bdot = selfdual_project(curvature(a)) - sigma_lie(b) - cb
    return adot, bdot


def five_d_flow_step(s, dt, scheme="central"):
    """One classical RK4 step of the five-dimensional instanton flow."""
    if not dt > 0:
        raise ValueError("dt must be positive")

    def f(a, b):
        return five_d_rhs(a, b, s.c, scheme)

    k1a, k1b = f(s.a, s.b)
    k2a, k2b = f(s.a + 0.5 * dt * k1a, s.b + 0.5 * dt * k1b)
    k3a, k3b = f(s.a + 0.5 * dt * k2a, s.b + 0.5 * dt * k2b)
    k4a, k4b = f(s.a + dt * k3a, s.b + dt * k3b)
    a = s.a + (dt / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
    b = s.b + (dt / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
    out = FiveDState(s.t + dt, a, b, s.c)
    biggest = max(out.norms())
    if not np.isfinite(biggest) or biggest > BLOWUP:
        raise BlowUp(f"field norm {biggest:.3e} exceeds {BLOWUP:.0e} at t = {out.t:.6g}")
    return out


def five_d_flow(s, dt, steps, scheme="central"):
    """Integrate ``steps`` RK4 steps; returns the final state and rows
    ``(t, |a|, |b|, |c|, |r1|, |r2|)`` where (r1, r2) is the Vafa-Witten residual."""
    rows = [_flow_row(s, scheme)]
    for _ in range(steps):
        s = five_d_flow_step(s, dt, scheme)
        rows.append(_flow_row(s, scheme))
    return s, rows


def _flow_row(s, scheme):
    r1, r2 = vw_residual(VWConfig(s.a, s.b, s.c), scheme)
    return (s.t, *s.norms(), norm(r1), norm(r2))
