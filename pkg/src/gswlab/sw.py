"""The sigma map and the abelian Seiberg-Witten equations on the periodic lattice.

A configuration is a u(1) connection ``a = i alpha`` (1-form, fiber (1, 1)
complex) and a spinor ``phi`` (quaternion 0-form).  The curvature
``F_a = i d alpha`` is compared with sigma(phi) after dividing by i, and
imaginary quaternions are identified with self-dual forms by
``i, j, k -> omega_1+, omega_2+, omega_3+``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dirac import spinc_dirac_minus, spinc_dirac_plus, spinor
from .errors import DivergedError, ShapeMismatch
from .lattice4 import (
    D_SCHEMES,
    SD,
    FormField,
    embed_selfdual,
    gauge_transform,
    inner,
    norm,
    selfdual_project,
)
from .quat import I, qconj, qmul

GAUGE_FACTOR = 2.0  # a -> a - 2 (dg) g^-1: the connection lives on the determinant line

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]])
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def sigma_map(x):
    """``x i conj(x)``, an imaginary quaternion with ``|sigma(x)| = |x|^2``."""
    return qmul(qmul(x, I), qconj(x))


def sigma_coeffs(phi_values):
    """Imaginary part of sigma, read as coefficients along (omega_1+, omega_2+, omega_3+)."""
    return sigma_map(phi_values)[..., 1:]


def imh_to_hermitian(s):
    """Traceless Hermitian 2x2 matrix ``(s1 Z - s2 Y - s3 X) / 2`` of an imaginary quaternion.

    The map is fixed by requiring that sigma(z + j w) reproduces the matrix
    form in :func:`sigma_matrix_form`.
    """
    s = np.asarray(s, dtype=np.float64)
    return 0.5 * (
        s[..., 0, None, None] * PAULI_Z - s[..., 1, None, None] * PAULI_Y - s[..., 2, None, None] * PAULI_X
    )


def quat_from_pair(z, w):
    """The quaternion ``z + j w`` for complex z, w (complex numbers read as a + b i)."""
    z, w = complex(z), complex(w)
    return np.array([z.real, z.imag, w.real, -w.imag])


def sigma_matrix_form(z, w):
    """sigma in the coordinates ``x = z + j w`` as a traceless Hermitian matrix.

    Returns ``1/2 [[|z|^2 - |w|^2, 2 z conj(w)], [2 conj(z) w, |w|^2 - |z|^2]]``,
    whose eigenvalues are ``+-(|z|^2 + |w|^2)/2``.  Multiplying by i gives the
    su(2) element.
    """
    z, w = complex(z), complex(w)
    a = abs(z) ** 2 - abs(w) ** 2
    b = z * np.conj(w)
    return 0.5 * np.array([[a, 2 * b], [2 * np.conj(b), -a]])


@dataclass(frozen=True)
class SWConfig:
    a: FormField
    phi: FormField

    def __post_init__(self):
        if self.a.degree != 1 or self.a.fiber != (1, 1):
            raise ShapeMismatch("the connection must be a u(1)-valued 1-form")
        if self.phi.degree != 0 or self.phi.fiber != (4,):
            raise ShapeMismatch("phi must be a quaternion-valued 0-form")
        if self.a.grid != self.phi.grid:
            raise ShapeMismatch("connection and spinor live on different grids")
        if np.abs(self.a.data.real).max(initial=0.0) > 1e-12 * max(1.0, np.abs(self.a.data).max(initial=0.0)):
            raise ShapeMismatch("u(1) connection components must be purely imaginary")

    @classmethod
    def from_real(cls, grid, alpha, phi_values):
        """Build from real coefficients alpha (shape (4, N, N, N, N)) and spinor values."""
        a = FormField(grid, 1, 1j * np.asarray(alpha, dtype=np.float64)[..., None, None])
        return cls(a, spinor(grid, phi_values))

    @classmethod
    def zero(cls, grid):
        return cls.from_real(grid, np.zeros((4,) + grid.shape), np.zeros(grid.shape + (4,)))

    @property
    def grid(self):
        return self.a.grid

    @property
    def alpha(self):
        return np.imag(self.a.data[..., 0, 0])


def _alpha_form(cfg):
    return FormField(cfg.grid, 1, cfg.alpha)


def sw_residual(cfg, eta=None, scheme="central"):
    """``(D_a+ phi, F_a+ / i - sigma(phi) - eta)``; the second entry is a real self-dual field."""
    d = D_SCHEMES[scheme][0]
    curv = selfdual_project(d(_alpha_form(cfg))).data
    r2 = curv - np.moveaxis(sigma_coeffs(cfg.phi.data[0]), -1, 0)
    if eta is not None:
        if eta.degree != SD or eta.data.shape != r2.shape:
            raise ShapeMismatch("eta must be a real self-dual field on the same grid")
        r2 = r2 - eta.data
    return spinc_dirac_plus(cfg.a, cfg.phi, scheme), FormField(cfg.grid, SD, r2)


def residual_norms(cfg, eta=None, scheme="central"):
    r1, r2 = sw_residual(cfg, eta, scheme)
    return norm(r1), norm(r2)


def sw_gauge(cfg, theta):
    """Act by ``g = exp(i theta)``: ``(a - 2 (dg) g^-1, phi conj(g))``."""
    theta = np.asarray(theta, dtype=np.float64)
    g = np.exp(1j * theta)[..., None, None]
    gbar = np.stack([np.cos(theta), -np.sin(theta), np.zeros_like(theta), np.zeros_like(theta)], axis=-1)
    a = gauge_transform(cfg.a, g, factor=GAUGE_FACTOR)
    # the transformed abelian potential is purely imaginary up to rounding
    a = FormField(a.grid, 1, 1j * a.data.imag)
    return SWConfig(a, spinor(cfg.grid, qmul(cfg.phi.data[0], gbar)))


def energy(cfg, eta=None, scheme="central"):
    r1, r2 = sw_residual(cfg, eta, scheme)
    return 0.5 * (inner(r1, r1) + inner(r2, r2))


def energy_gradient(cfg, eta=None, scheme="central"):
    """Exact gradient of :func:`energy` with respect to (alpha, phi) in the site-sum metric.

    Built from adjoint stencils: the Dirac part uses D_a-, the curvature part
    the codifferential, and sigma enters through its pointwise linearization.
    """
    r1, r2 = sw_residual(cfg, eta, scheme)
    phi = cfg.phi.data[0]
    r2q = np.zeros(phi.shape)
    r2q[..., 1:] = np.moveaxis(r2.data, 0, -1)
    grad_phi = spinc_dirac_minus(cfg.a, r1, scheme).data[0] + 2.0 * 2.0 * qmul(qmul(r2q, phi), I)

    phi_i = qmul(phi, I)
    units = np.array([[-1.0, 0, 0, 0], [0, 1.0, 0, 0], [0, 0, 1.0, 0], [0, 0, 0, 1.0]])
    grad_alpha = np.empty((4,) + cfg.grid.shape)
    for mu in range(4):
        grad_alpha[mu] = -0.5 * np.sum(r1.data[0] * qmul(units[mu], phi_i), axis=-1)
    grad_alpha += D_SCHEMES[scheme][1](embed_selfdual(r2)).data
    return grad_alpha, grad_phi


def stable_rate(grid):
    """Documented step bound h^2 / 8 for the explicit descent (the linear part has spectrum <= 4/h^2)."""
    return grid.h**2 / 8.0


def sw_descent(cfg0, steps, rate=None, eta=None, scheme="central", tol=0.0):
    """Gradient descent on ``E = (|r1|^2 + |r2|^2) / 2``.

    Returns the final configuration and the history rows
    ``(step, dirac_res, curv_res)``, starting with step 0.  Raises
    :class:`DivergedError` once the combined residual exceeds ten times
    its initial value.  With ``tol > 0`` the loop stops early once the
    combined residual falls below it.

    From a smooth perturbation of size 0.05 of the zero solution on N = 8,
    L = 2 pi, the default rate reduces the residual by 10^3 in about 110 steps.
    """
    rate = stable_rate(cfg0.grid) if rate is None else float(rate)
    if not rate > 0:
        raise ValueError("rate must be positive")
    cfg = cfg0
    r1, r2 = residual_norms(cfg, eta, scheme)
    start = np.hypot(r1, r2)
    history = [(0, r1, r2)]
    for step in range(1, steps + 1):
        if tol > 0 and np.hypot(r1, r2) <= tol:
            break
        ga, gp = energy_gradient(cfg, eta, scheme)
        cfg = SWConfig.from_real(cfg.grid, cfg.alpha - rate * ga, cfg.phi.data[0] - rate * gp)
        r1, r2 = residual_norms(cfg, eta, scheme)
        history.append((step, r1, r2))
        total = np.hypot(r1, r2)
        if not np.isfinite(total) or total > 10.0 * max(start, np.finfo(float).tiny):
            raise DivergedError(f"residual grew from {start:.3e} to {total:.3e} at step {step}")
    return cfg, history
