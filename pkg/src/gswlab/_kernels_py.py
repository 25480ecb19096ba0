"""NumPy reference implementations of the compiled stencils in ``_kernels.pyx``."""
import numpy as np

FORWARD, BACKWARD, CENTRAL = 0, 1, 2


def diff(f, axis, kind, scale):
    ax = axis + 1
    if kind == FORWARD:
        return (np.roll(f, -1, axis=ax) - f) * scale
    if kind == BACKWARD:
        return (f - np.roll(f, 1, axis=ax)) * scale
    return (np.roll(f, -1, axis=ax) - np.roll(f, 1, axis=ax)) * scale


def dirac(u, kind, scale, c0):
    d = [diff(u[None], mu, kind, scale)[0] for mu in range(4)]
    d0, d1, d2, d3 = d
    out = np.empty_like(u)
    out[..., 0] = c0 * d0[..., 0] + (-d1[..., 1]) + (-d2[..., 2]) + (-d3[..., 3])
    out[..., 1] = c0 * d0[..., 1] + d1[..., 0] + d2[..., 3] + (-d3[..., 2])
    out[..., 2] = c0 * d0[..., 2] + (-d1[..., 3]) + d2[..., 0] + d3[..., 1]
    out[..., 3] = c0 * d0[..., 3] + d1[..., 2] + (-d2[..., 1]) + d3[..., 0]
    return out
