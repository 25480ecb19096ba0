import numpy as np
import pytest

from gswlab import _backend, _kernels_py, dirac, lattice4
from gswlab.lattice4 import FormField, Grid4

compiled = pytest.mark.skipif(not _backend.available()["compiled"], reason="extension not built")


@compiled
@pytest.mark.parametrize("kind", ["forward", "backward", "central"])
def test_diff_bitwise_equal(rng, kind):
    from gswlab import _kernels

    f = rng.standard_normal((3, 5, 4, 6, 7, 2))
    code = _backend.KINDS[kind]
    for axis in range(4):
        assert np.array_equal(_kernels.diff(f, axis, code, 1.7), _kernels_py.diff(f, axis, code, 1.7))


@compiled
@pytest.mark.parametrize("kind", ["forward", "backward", "central"])
def test_dirac_bitwise_equal(rng, kind):
    from gswlab import _kernels

    u = rng.standard_normal((4, 5, 6, 7, 4))
    code = _backend.KINDS[kind]
    for c0 in (1.0, -1.0):
        assert np.array_equal(_kernels.dirac(u, code, 0.8, c0), _kernels_py.dirac(u, code, 0.8, c0))


def test_switch_backends_same_results(rng):
    g = Grid4(6, 0.3)
    a = FormField(g, 1, lattice4.random_lie(rng, 2, (4,) + g.shape))
    u = dirac.spinor(g, rng.standard_normal(g.shape + (4,)))
    prev = _backend.name()
    results = {}
    try:
        for b in [name for name, ok in _backend.available().items() if ok]:
            _backend.use(b)
            results[b] = (lattice4.curvature(a).data, dirac.dirac_plus(u).data)
    finally:
        _backend.use(prev)
    ref = results["python"]
    for out in results.values():
        assert all(np.array_equal(x, y) for x, y in zip(out, ref))


def test_complex_and_read_only_input(rng):
    f = rng.standard_normal((2, 4, 4, 4, 4, 3)) + 1j * rng.standard_normal((2, 4, 4, 4, 4, 3))
    f.setflags(write=False)
    out = _backend.diff(f, 2, "central", 0.5)
    ref = (np.roll(f, -1, 3) - np.roll(f, 1, 3)) / (2 * 0.5)
    assert np.allclose(out, ref)


def test_use_rejects_unknown():
    with pytest.raises(ValueError):
        _backend.use("fortran")
