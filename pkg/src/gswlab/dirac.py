"""Flat-space Dirac operators on quaternion-valued lattice spinors.

A spinor is a degree-0 :class:`~gswlab.lattice4.FormField` with quaternion
fiber, i.e. data of shape (1, N, N, N, N, 4).  Quaternion units act by left
multiplication.

``scheme="central"`` (default) uses central differences for both D+ and D-:
the pair is exactly adjoint, D- D+ is exactly minus the (wide) central
Laplacian, and gauge covariance holds at O(h^2).  ``scheme="forward"`` uses
forward differences for D+ and backward for D-; adjointness is still exact
but D- D+ picks up non-vanishing cross terms, because the mixed products
of forward and backward differences along different axes do not commute.
"""
from __future__ import annotations

import numpy as np

from . import _backend
from .errors import NotImaginary, ShapeMismatch
from .lattice4 import D_SCHEMES, FormField, Grid4, selfdual_project
from .quat import QuatStructure, fueter_contraction, qmul, quaternionic_projector

SCHEMES = {"central": ("central", "central"), "forward": ("forward", "backward")}
UNITS_PLUS = np.array([[-1.0, 0, 0, 0], [0, 1.0, 0, 0], [0, 0, 1.0, 0], [0, 0, 0, 1.0]])
UNITS_MINUS = np.eye(4)


def spinor(grid, values):
    values = np.asarray(values, dtype=np.float64)
    if values.shape != grid.shape + (4,):
        raise ShapeMismatch(f"spinor values need shape {grid.shape + (4,)}, got {values.shape}")
    return FormField(grid, 0, values[None])


def _check_spinor(u):
    if u.degree != 0 or u.fiber != (4,) or np.iscomplexobj(u.data):
        raise ShapeMismatch("expected a quaternion-valued 0-form")


def _stencil(u, kind, c0):
    _check_spinor(u)
    return FormField(u.grid, 0, _backend.dirac(u.data[0], kind, u.grid.h, c0)[None])


def fueter_apply(u, scheme="central"):
    """``d0 u - i d1 u - j d2 u - k d3 u`` with the D+ differences of ``scheme``."""
    return -_stencil(u, SCHEMES[scheme][0], -1.0)


def dirac_plus(u, scheme="central"):
    """``D+ = -d0 + i d1 + j d2 + k d3``."""
    return _stencil(u, SCHEMES[scheme][0], -1.0)


def dirac_minus(u, scheme="central"):
    """``D- = d0 + i d1 + j d2 + k d3``, the exact adjoint of :func:`dirac_plus`."""
    return _stencil(u, SCHEMES[scheme][1], 1.0)


def laplacian(u, scheme="central"):
    """Componentwise discrete Laplacian ``sum_mu d-_mu d+_mu`` (negative semidefinite)."""
    plus, minus = SCHEMES[scheme]
    out = np.zeros_like(u.data)
    for mu in range(4):
        out += _backend.diff(_backend.diff(u.data, mu, plus, u.grid.h), mu, minus, u.grid.h)
    return u.like(out)


def _spinc_potential(a):
    """Real coefficients alpha_mu of a u(1) connection a_mu = i alpha_mu."""
    if a.degree != 1:
        raise ShapeMismatch(f"connection must be a 1-form, got degree {a.degree}")
    if a.fiber == (1, 1):
        vals = a.data[..., 0, 0]
        if np.abs(np.real(vals)).max(initial=0.0) > 1e-12 * max(1.0, np.abs(vals).max(initial=0.0)):
            raise NotImaginary("u(1) connection components must be purely imaginary")
        return np.imag(vals)
    if a.fiber == ():
        return np.asarray(a.data, dtype=np.float64)
    raise ShapeMismatch(f"spin^c connection needs u(1) fiber, got {a.fiber}")


def _coupling(alpha, phi):
    """``-1/2 alpha phi i`` for each direction; right multiplication by i."""
    phi_i = np.stack([-phi[..., 1], phi[..., 0], phi[..., 3], -phi[..., 2]], axis=-1)
    return -0.5 * alpha[..., None] * phi_i[None]


def spinc_dirac(a, phi, sign=+1, scheme="central"):
    """``D_a = sum_mu e_mu (d_mu phi - 1/2 alpha_mu phi i)`` with e = (-1, i, j, k) for D_a+.

    ``a`` is u(1)-valued, ``a_mu = i alpha_mu``, stored either with fiber
    (1, 1) complex or directly as the real coefficients alpha.  Under a gauge
    map ``g = exp(i theta)`` the pair transforms as
    ``(a, phi) -> (a - 2 (dg) g^-1, phi conj(g))`` and D_a+ phi by right
    multiplication with conj(g).
    """
    _check_spinor(phi)
    alpha = _spinc_potential(a)
    base = dirac_plus(phi, scheme) if sign > 0 else dirac_minus(phi, scheme)
    units = UNITS_PLUS if sign > 0 else UNITS_MINUS
    cpl = _coupling(alpha, phi.data[0])
    out = np.array(base.data[0])
    for mu in range(4):
        out += qmul(units[mu], cpl[mu])
    return FormField(phi.grid, 0, out[None])


def spinc_dirac_plus(a, phi, scheme="central"):
    return spinc_dirac(a, phi, +1, scheme)


def spinc_dirac_minus(a, phi, scheme="central"):
    """Exact adjoint of :func:`spinc_dirac_plus`."""
    return spinc_dirac(a, phi, -1, scheme)


def d_plus_delta(alpha, scheme="central"):
    """``D'' alpha = (P+ d alpha, delta alpha)`` for a real or Lie-valued 1-form."""
    if alpha.degree != 1:
        raise ShapeMismatch(f"D'' acts on 1-forms, got degree {alpha.degree}")
    d, delta = D_SCHEMES[scheme]
    return selfdual_project(d(alpha)), delta(alpha)


def delta_plus_d(omega, c, scheme="central"):
    """Adjoint ``D'(omega, c) = delta omega + d c`` of :func:`d_plus_delta`."""
    d, delta = D_SCHEMES[scheme]
    return delta(omega) + d(c)


def pointwise_jacobian(u, scheme="central"):
    """Per-site 4x4 real matrices whose columns are the differences ``d_mu u``."""
    _check_spinor(u)
    kind = SCHEMES[scheme][0]
    cols = [_backend.diff(u.data, mu, kind, u.grid.h)[0] for mu in range(4)]
    return np.stack(cols, axis=-1)


def fueter_from_jacobian(jac):
    """Apply :func:`gswlab.quat.fueter_contraction` at every site of a Jacobian field."""
    dst = QuatStructure.left()
    flat = jac.reshape(-1, 4, 4)
    return np.stack([fueter_contraction(m, dst) for m in flat]).reshape(jac.shape[:-1])


def generalized_dirac_pointwise(jac):
    """``-4 (grad u)_H (e0)`` per site, the quaternionic part taken for left structures on both sides."""
    s = QuatStructure.left()
    flat = jac.reshape(-1, 4, 4)
    return np.stack([-4.0 * quaternionic_projector(m, s, s).quaternionic_part[:, 0] for m in flat]).reshape(
        jac.shape[:-1]
    )


def operator_matrix(op, grid):
    """Dense matrix of a real-linear spinor operator on a small grid (columns = basis spinors)."""
    n = 4 * grid.N**4
    cols = np.empty((n, n))
    e = np.zeros(n)
    for i in range(n):
        e[i] = 1.0
        cols[:, i] = op(spinor(grid, e.reshape(grid.shape + (4,)))).data.ravel()
        e[i] = 0.0
    return cols


def constant_spinor(grid, q):
    return spinor(grid, np.broadcast_to(np.asarray(q, dtype=np.float64), grid.shape + (4,)))


__all__ = [
    "Grid4",
    "spinor",
    "fueter_apply",
    "dirac_plus",
    "dirac_minus",
    "laplacian",
    "spinc_dirac_plus",
    "spinc_dirac_minus",
    "d_plus_delta",
    "delta_plus_d",
    "pointwise_jacobian",
    "fueter_from_jacobian",
    "generalized_dirac_pointwise",
    "operator_matrix",
]
