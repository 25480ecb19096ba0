"""Independent reference computations shared by the module and acceptance tests."""
import numpy as np
from scipy.linalg import expm

from gswlab import gsw, lattice4
from gswlab.lattice4 import SD, FormField, Grid4

L = 2 * np.pi


def _pack(a, b):
    return np.concatenate([a.data.imag.ravel(), b.data.imag.ravel()])


def _unpack(grid, vec):
    na = 4 * grid.N**4
    a = FormField(grid, 1, 1j * vec[:na].reshape((4,) + grid.shape + (1, 1)))
    b = FormField(grid, SD, 1j * vec[na:].reshape((3,) + grid.shape + (1, 1)))
    return a, b


def abelian_flow_matrix(grid):
    """Matrix of the (linear) abelian 5d flow with c = 0, acting on the imaginary parts of (a, b)."""
    c = FormField.zeros(grid, 0, (1, 1), complex)
    n = 7 * grid.N**4
    A = np.empty((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        a, b = _unpack(grid, e)
        A[:, j] = _pack(*gsw.five_d_rhs(a, b, c))
    return A


def smooth_abelian_state(grid, seed=0, amplitude=0.3):
    rng = np.random.default_rng(seed)
    pa = lattice4.TrigPolynomial(rng, grid.L, shape=(4,), amplitude=amplitude)
    pb = lattice4.TrigPolynomial(rng, grid.L, shape=(3,), amplitude=amplitude)
    a = FormField(grid, 1, 1j * np.moveaxis(pa(grid), 4, 0)[..., None, None])
    b = FormField(grid, SD, 1j * np.moveaxis(pb(grid), 4, 0)[..., None, None])
    c = FormField.zeros(grid, 0, (1, 1), complex)
    return gsw.FiveDState(0.0, a, b, c)


def rk4_errors(T=0.5, steps=(10, 20, 40, 80), N=4, seed=0):
    """Final-time errors of the RK4 flow against the matrix exponential, per step count."""
    grid = Grid4.of_length(N, L)
    s0 = smooth_abelian_state(grid, seed)
    exact = expm(T * abelian_flow_matrix(grid)) @ _pack(s0.a, s0.b)
    errs = []
    for n in steps:
        s, _ = gsw.five_d_flow(s0, T / n, n)
        errs.append(np.linalg.norm(_pack(s.a, s.b) - exact))
    return np.array(errs)


def orders(errors, ratio=2.0):
    errors = np.asarray(errors, dtype=np.float64)
    return np.log(errors[:-1] / errors[1:]) / np.log(ratio)
