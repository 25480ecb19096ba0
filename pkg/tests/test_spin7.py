from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gswlab import spin7
from gswlab.errors import DegreeMismatch, ShapeMismatch
from gswlab.spin7 import Form8, TOP, cayley_form, hodge_star, wedge

QUADS = list(combinations(range(8), 4))


def _four_vector(x):
    return np.array([x.coeffs[sum(1 << i for i in q)] for q in QUADS])


def _derivation(A, x):
    """Action of the matrix A in gl(8) on a 4-form, index by index."""
    out = Form8(np.zeros(spin7.NBLADES))
    for q, c in x.components().items():
        for slot in range(4):
            for new in range(8):
                if A[q[slot], new] == 0.0:
                    continue
                idx = list(q)
                idx[slot] = new
                out = out + Form8.blade(*idx, value=c * A[q[slot], new])
    return out


def test_cayley_terms():
    comps = cayley_form().components()
    assert len(comps) == 14
    assert all(abs(abs(v) - 1.0) == 0.0 for v in comps.values())
    assert comps[(0, 1, 2, 3)] == 1.0 and comps[(4, 5, 6, 7)] == 1.0
    assert cayley_form().degrees() == [4]


def test_cayley_self_dual_and_square():
    O = cayley_form()
    assert np.abs(hodge_star(O).coeffs - O.coeffs).max() <= 1e-12
    OO = wedge(O, O)
    assert OO.degrees() == [8]
    assert abs(OO.coeffs[TOP] - 14.0) <= 1e-12


def test_stabilizer_dimension():
    # so(8) has dimension 28; the stabilizer of the Cayley form is spin(7), dimension 21
    O = cayley_form()
    images = []
    for i, j in combinations(range(8), 2):
        A = np.zeros((8, 8))
        A[i, j], A[j, i] = 1.0, -1.0
        images.append(_four_vector(_derivation(A, O)))
    assert np.linalg.matrix_rank(np.array(images), tol=1e-9) == 7


def test_hodge_pairing_oracle(rng):
    # a ^ *b = <a, b> vol on random 2-forms
    for _ in range(5):
        a, b = rng.standard_normal(28), rng.standard_normal(28)
        lhs = wedge(spin7.two_form(a), hodge_star(spin7.two_form(b))).coeffs[TOP]
        assert abs(lhs - a @ b) <= 1e-12


def test_hodge_involution(rng):
    x = Form8(rng.standard_normal(spin7.NBLADES))
    assert np.allclose(hodge_star(hodge_star(x)).coeffs, x.coeffs * (-1.0) ** np.array(
        [bin(m).count("1") * (8 - bin(m).count("1")) for m in range(spin7.NBLADES)]))


@given(st.lists(st.integers(0, 7), min_size=1, max_size=4), st.lists(st.integers(0, 7), min_size=1, max_size=4))
def test_wedge_graded_commutative(p, q):
    x, y = Form8.blade(*p), Form8.blade(*q)
    sign = (-1.0) ** (len(p) * len(q))
    assert np.array_equal(wedge(x, y).coeffs, sign * wedge(y, x).coeffs)


def test_eigenmap_symmetric_traceless():
    T = spin7.eigenmap_matrix()
    assert np.abs(T - T.T).max() <= 1e-12
    assert abs(np.trace(T)) <= 1e-12


def test_spectrum_standard_orientation():
    s = spin7.spin7_spectrum()
    w = np.sort(s.eigenvalues)
    assert np.allclose(w[:7], -3.0, atol=1e-10) and np.allclose(w[7:], 1.0, atol=1e-10)
    assert s.value7 == -3.0 and s.value21 == 1.0


def test_projectors():
    Pp, Pm = spin7.spin7_projectors()
    T = spin7.eigenmap_matrix()
    for P, rank in ((Pp, 7), (Pm, 21)):
        assert np.abs(P @ P - P).max() <= 1e-12
        assert np.abs(P - P.T).max() <= 1e-12
        assert round(np.trace(P)) == rank
    assert np.abs(Pp + Pm - np.eye(28)).max() <= 1e-15
    s = spin7.spin7_spectrum()
    assert np.abs(T @ Pp - s.value7 * Pp).max() <= 1e-12
    assert np.abs(T @ Pm - s.value21 * Pm).max() <= 1e-12


def test_eigenmap_on_blade_matches_matrix():
    x = spin7.two_form(np.eye(28)[5])
    col = spin7.two_form_vector(spin7.cayley_eigenmap(x))
    assert np.array_equal(col, spin7.eigenmap_matrix()[:, 5])


def test_reversed_orientation():
    O = cayley_form()
    s = spin7.spin7_spectrum(orientation=-1)
    assert s.value7 == 3.0 and s.value21 == -1.0
    # reversing the volume form breaks self-duality and flips the sign of Omega ^ Omega / vol
    assert np.allclose(hodge_star(O, -1).coeffs, -O.coeffs)
    assert wedge(O, O).coeffs[TOP] / spin7.volume(-1).coeffs[TOP] == -14.0


def test_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        spin7.cayley_eigenmap(Form8.blade(0, 1, 2))
    with pytest.raises(DegreeMismatch):
        spin7.two_form_vector(cayley_form())


def test_form8_shape():
    with pytest.raises(ShapeMismatch):
        Form8(np.zeros(10))


def test_derived_identification_orthogonal():
    M, K = spin7.derived_identification()
    assert np.abs(M.T @ M - np.eye(3)).max() <= 1e-12
    assert np.abs(K + np.linalg.inv(M).T).max() <= 1e-12


def test_split_zero():
    z6, z44 = np.zeros((6, 2, 2)), np.zeros((4, 4, 2, 2))
    r = spin7.spin7_split_check(z6, z44, z6)
    assert r.left and r.right and r.agree


def test_split_mixed_only_fails_both(rng):
    z6 = np.zeros((6, 1))
    W11 = rng.standard_normal((4, 4, 1))
    r = spin7.spin7_split_check(z6, W11, z6)
    assert not r.left and not r.right


def _sample_kernel(rng, fiber=(3,)):
    _, Pm = spin7.spin7_projectors()
    W = Pm @ rng.standard_normal((28,) + fiber).reshape(28, -1)
    W = W.reshape((28,) + fiber)
    W20 = W[spin7._IDX_U]
    W02 = W[spin7._IDX_V]
    W11 = np.zeros((4, 4) + fiber)
    for idx, (i, j) in zip(spin7._IDX_UV, spin7.PAIRS_UV):
        W11[i, j - 4] = W[idx]
    return W20, W11, W02


def test_split_agreement_random(rng):
    for trial in range(20):
        if trial % 2:
            blocks = _sample_kernel(rng)
        else:
            blocks = (rng.standard_normal((6, 3)), rng.standard_normal((4, 4, 3)), rng.standard_normal((6, 3)))
        r = spin7.spin7_split_check(*blocks)
        assert r.agree
        assert r.left == bool(trial % 2)
        assert abs(r.defect_left - r.defect_right) <= 1e-12 * max(1.0, r.defect_left)


def test_assemble_round_trip(rng):
    W20, W11, W02 = _sample_kernel(rng, fiber=())
    W = spin7.assemble_two_form(W20, W11, W02)
    _, Pm = spin7.spin7_projectors()
    assert np.abs(Pm @ W - W).max() <= 1e-12
    with pytest.raises(ShapeMismatch):
        spin7.assemble_two_form(W20, W11[:3], W02)
