"""Verification suites run by ``gswlab verify``.

Each suite takes a seeded generator and the grid parameters and returns a
list of :class:`Check` records.  Everything is deterministic given the seed.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import adhm, clifford, dirac, gsw, lattice4, quat, spin7, sw
from .errors import UnknownSuite
from .lattice4 import SD, FormField, Grid4, inner, ncomp, norm


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    value: float
    tol: float

    def as_dict(self):
        return asdict(self)


def _le(name, value, tol):
    value = float(value)
    return Check(name, bool(value <= tol), value, float(tol))


def _ge(name, value, bound):
    value = float(value)
    return Check(name, bool(value >= bound), value, float(bound))


def _rel(a, b):
    return abs(a - b) / max(1.0, abs(a), abs(b))


# --- algebra ------------------------------------------------------------------


def suite_algebra(rng, N, h):
    out = []
    worst = 0.0
    for n in range(1, clifford.MAX_DIM + 1):
        one = clifford.CliffordElement.scalar(n)
        gens = [clifford.CliffordElement.generator(n, i) for i in range(1, n + 1)]
        for i, ei in enumerate(gens):
            worst = max(worst, np.abs((ei * ei + one).coeffs).max())
            for ej in gens[i + 1:]:
                worst = max(worst, np.abs((ei * ej + ej * ei).coeffs).max())
        if n >= 2:
            s = gens[0] + gens[1]
            worst = max(worst, np.abs((s * s + 2.0 * one).coeffs).max())
    out.append(_le("clifford_relations", worst, 1e-14))

    n = 5
    x, y, z = (clifford.CliffordElement(n, rng.standard_normal(1 << n)) for _ in range(3))
    out.append(_le("clifford_associativity", np.abs(((x * y) * z - x * (y * z)).coeffs).max(), 1e-12))

    u = rng.standard_normal(6)
    phi = clifford.FormModuleElement(6, rng.standard_normal(64))
    twice = clifford.form_module_action(u, clifford.form_module_action(u, phi))
    out.append(_le("form_module_axiom", np.abs(twice.coeffs + (u @ u) * phi.coeffs).max(), 1e-12))

    p, q = rng.standard_normal((2, 4))
    out.append(_le("quat_norm_multiplicative", abs(quat.qnorm(quat.qmul(p, q)) - quat.qnorm(p) * quat.qnorm(q)), 1e-13))

    qs = quat.random_unit_quaternion(rng, 50)
    cover = max(np.abs(quat.so3_from_unit_quat(v) - quat.so3_from_unit_quat(-v)).max() for v in qs)
    out.append(_le("so3_double_cover", cover, 1e-14))

    eye = np.eye(4)
    signs = {(a, b): np.abs(quat.so4_from_quat_pair(a * quat.ONE, b * quat.ONE) - eye).max() for a in (1, -1) for b in (1, -1)}
    kernel_ok = signs[(1, 1)] == 0 and signs[(-1, -1)] == 0 and signs[(1, -1)] > 1 and signs[(-1, 1)] > 1
    out.append(Check("so4_kernel_signs", bool(kernel_ok), float(min(signs[(1, -1)], signs[(-1, 1)])), 1.0))

    src = quat.QuatStructure.left(2)
    dst = quat.QuatStructure.right(1)
    A = rng.standard_normal((4, 8))
    P = quat.quaternionic_projector(A, src, dst).quaternionic_part
    out.append(_le("projector_idempotent", np.abs(quat.quaternionic_projector(P, src, dst).quaternionic_part - P).max(), 1e-12))
    R = quat.random_rotation(rng)
    Pr = quat.quaternionic_projector(A, src.rotated(R), dst.rotated(R)).quaternionic_part
    out.append(_le("projector_rotation_invariant", np.abs(Pr - P).max(), 1e-12))

    left = quat.QuatStructure.left()
    B = rng.standard_normal((4, 4))
    f = quat.fueter_contraction(B, left)
    Pb = quat.quaternionic_projector(B, left, left).quaternionic_part
    out.append(_le("fueter_contraction_vs_projector", np.abs(f - 4 * Pb[:, 0]).max(), 1e-12))
    return out


# --- dirac ----------------------------------------------------------------------


def _rand_spinor(rng, grid):
    return dirac.spinor(grid, rng.standard_normal(grid.shape + (4,)))


def suite_dirac(rng, N, h):
    grid = Grid4(N, h)
    u, v = _rand_spinor(rng, grid), _rand_spinor(rng, grid)
    out = []
    lhs, rhs = inner(dirac.dirac_plus(u), v), inner(u, dirac.dirac_minus(v))
    out.append(_le("dirac_adjoint", _rel(lhs, rhs), 1e-12))
    ddu = dirac.dirac_minus(dirac.dirac_plus(u))
    lap = dirac.laplacian(u)
    out.append(_le("weitzenbock_flat", norm(ddu + lap) / max(1.0, norm(lap)), 1e-12))

    a = FormField(grid, 1, 1j * rng.standard_normal((4,) + grid.shape + (1, 1)))
    lhs, rhs = inner(dirac.spinc_dirac_plus(a, u), v), inner(u, dirac.spinc_dirac_minus(a, v))
    out.append(_le("spinc_dirac_adjoint", _rel(lhs, rhs), 1e-12))

    worst = 0.0
    for k in range(4):
        f = FormField(grid, k, rng.standard_normal((ncomp(k),) + grid.shape))
        g = FormField(grid, k + 1, rng.standard_normal((ncomp(k + 1),) + grid.shape))
        worst = max(worst, _rel(inner(lattice4.d_forward(f), g), inner(f, lattice4.delta_backward(g))))
    out.append(_le("d_delta_adjoint", worst, 1e-12))

    alpha = FormField(grid, 1, rng.standard_normal((4,) + grid.shape))
    om = FormField(grid, SD, rng.standard_normal((3,) + grid.shape))
    c = FormField(grid, 0, rng.standard_normal((1,) + grid.shape))
    w, s = dirac.d_plus_delta(alpha)
    lhs = inner(w, om) + inner(s, c)
    rhs = inner(alpha, dirac.delta_plus_d(om, c))
    out.append(_le("d_plus_delta_adjoint", _rel(lhs, rhs), 1e-12))

    x = grid.coords()
    affine = dirac.spinor(grid, np.stack([x[1], x[0], 0 * x[0], 0 * x[0]], axis=-1))
    interior = (slice(1, -1),) * 4
    out.append(_le("fueter_affine_kernel", np.abs(dirac.fueter_apply(affine).data[0][interior]).max(), 1e-12))

    jac = dirac.pointwise_jacobian(u)
    out.append(_le("fueter_matches_contraction", np.abs(dirac.fueter_from_jacobian(jac) - dirac.fueter_apply(u).data[0]).max(), 1e-10))
    return out


# --- classical SW -------------------------------------------------------------------


def sw_gauge_defects(rng, sizes, L=2 * np.pi):
    """Equivariance defect ``|R(g.c) - g.R(c)|`` and norm defect on grids of the given sizes."""
    pa = lattice4.TrigPolynomial(rng, L, shape=(4,), amplitude=0.5)
    pphi = lattice4.TrigPolynomial(rng, L, shape=(4,))
    pth = lattice4.TrigPolynomial(rng, L, amplitude=0.5)
    field, norms = [], []
    for n in sizes:
        grid = Grid4.of_length(n, L)
        cfg = sw.SWConfig.from_real(grid, np.moveaxis(pa(grid), 4, 0), pphi(grid))
        th = pth(grid)
        r1, r2 = sw.sw_residual(cfg)
        s1, s2 = sw.sw_residual(sw.sw_gauge(cfg, th))
        gbar = np.stack([np.cos(th), -np.sin(th), 0 * th, 0 * th], axis=-1)
        d1 = norm(s1 - r1.like(quat.qmul(r1.data[0], gbar)[None]))
        d2 = norm(s2 - r2)
        field.append(float(np.hypot(d1, d2)))
        norms.append(abs(float(np.hypot(norm(s1), norm(s2)) - np.hypot(norm(r1), norm(r2)))))
    return np.array(field), np.array(norms)


def orders(errors):
    errors = np.asarray(errors, dtype=np.float64)
    return np.log2(errors[:-1] / errors[1:])


def suite_sw(rng, N, h):
    out = []
    out.append(_le("sigma_one", np.abs(sw.sigma_map(quat.ONE) - quat.I).max(), 1e-15))
    out.append(_le("sigma_j", np.abs(sw.sigma_map(quat.J) + quat.I).max(), 1e-15))
    x = rng.standard_normal((100, 4))
    out.append(_le("sigma_norm", np.abs(quat.qnorm(sw.sigma_map(x)) - quat.qnorm(x) ** 2).max(), 1e-13))
    q = quat.random_unit_quaternion(rng, 100)
    th = rng.uniform(0, 2 * np.pi, 100)
    zbar = np.stack([np.cos(th), -np.sin(th), 0 * th, 0 * th], axis=-1)
    lhs = sw.sigma_map(quat.qmul(quat.qmul(q, x), zbar))
    rhs = quat.qmul(quat.qmul(q, sw.sigma_map(x)), quat.qconj(q))
    out.append(_le("sigma_equivariance", np.abs(lhs - rhs).max() / max(1.0, np.abs(rhs).max()), 1e-14))
    out.append(_le("sigma_matrix_form", np.abs(sw.sigma_matrix_form(1, 0) - 0.5 * np.diag([1, -1])).max(), 1e-15))

    grid = Grid4(N, h)
    r = sw.residual_norms(sw.SWConfig.zero(grid))
    out.append(_le("residual_at_zero", max(r), 0.0))

    field, _ = sw_gauge_defects(rng, (N, 2 * N))
    out.append(_ge("gauge_covariance_order", orders(field)[-1], 1.5))

    L = 2 * np.pi
    grid = Grid4.of_length(N, L)
    pa = lattice4.TrigPolynomial(rng, L, shape=(4,), amplitude=0.05)
    pp = lattice4.TrigPolynomial(rng, L, shape=(4,), amplitude=0.05)
    cfg = sw.SWConfig.from_real(grid, np.moveaxis(pa(grid), 4, 0), pp(grid))
    _, hist = sw.sw_descent(cfg, 60)
    tot = np.hypot([row[1] for row in hist], [row[2] for row in hist])
    out.append(Check("descent_monotone", bool(np.all(np.diff(tot) <= 0)), float(np.max(np.diff(tot))), 0.0))
    out.append(_ge("descent_reduction", tot[0] / tot[-1], 10.0))
    return out


# --- Vafa-Witten --------------------------------------------------------------------


def _random_su2(rng, size=()):
    return lattice4.random_lie(rng, 2, size)


def suite_vafa_witten(rng, N, h):
    out = []
    xs = [_random_su2(rng, (1000,)) for _ in range(4)]
    a = gsw.vw_moment(*xs)
    b = gsw.vw_moment_compact(*xs)
    out.append(_le("moment_forms_agree", max(np.abs(p - q).max() for p, q in zip(a, b)), 1e-13))
    g = lattice4.random_unitary(rng, 2, (1000,))
    gi = np.conj(np.swapaxes(g, -1, -2))
    lhs = gsw.vw_moment(*(g @ x @ gi for x in xs))
    out.append(_le("moment_equivariance", max(np.abs(p - g @ q @ gi).max() for p, q in zip(lhs, a)), 1e-12))

    grid = Grid4(N, h)
    zero = gsw.VWConfig(*(FormField.zeros(grid, k, (2, 2), complex) for k in (1, SD, 0)))
    out.append(_le("residual_at_zero", max(norm(r) for r in gsw.vw_residual(zero)), 0.0))

    fields = [FormField(grid, k, 1j * rng.standard_normal((ncomp(k),) + grid.shape + (1, 1))) for k in (1, SD, 0)]
    cfg = gsw.VWConfig(*fields)
    r1, r2 = gsw.vw_residual(cfg)
    e1 = lattice4.d_central(cfg.c) + lattice4.delta_central(cfg.b)
    e2 = lattice4.selfdual_project(lattice4.d_central(cfg.a))
    out.append(_le("abelian_reduction", max(norm(r1 - e1), norm(r2 - e2)), 1e-12))
    return out


# --- complex ASD -------------------------------------------------------------------


def suite_casd(rng, N, h):
    out = []
    worst = 0.0
    for _ in range(200):
        a, b = _random_su2(rng, (4,)), _random_su2(rng, (4,))
        da, db = _random_su2(rng, (4, 4)), _random_su2(rng, (4, 4))
        worst = max(worst, gsw.casd_curvature_identity(a, b, da, db))
    out.append(_le("curvature_identity", worst, 1e-12))

    grid = Grid4(N, h)

    def rl(k):
        return FormField(grid, k, _random_su2(rng, (ncomp(k),) + grid.shape))

    cfg = gsw.CASDConfig(rl(1), rl(1))
    _, r2, r3 = gsw.casd_residual(cfg)
    F = gsw.complex_curvature_plus(cfg)
    out.append(_le("lattice_reassembly", np.abs(F.data - (r3.data + 1j * r2.data)).max(), 1e-12))

    deriv, om = gsw.moment_pairing_defect(cfg, rl(0), rl(1), rl(1))
    out.append(_le("moment_map_pairing", _rel(deriv, om), 1e-9))

    g, I, omega = gsw.random_hermitian_triple(rng, 4)
    out.append(_le("quaternion_hermitian", gsw.quaternion_hermitian_check(I, omega, g).max_defect(), 1e-12))
    return out


# --- ADHM ----------------------------------------------------------------------------


def suite_adhm(rng, N, h):
    out = []
    d = adhm.ADHMData.random(rng, 3, 2)
    muR, muC = adhm.adhm_moment(d)
    out.append(_le("muR_antihermitian", np.abs(muR + muR.conj().T).max(), 1e-13))
    g = lattice4.random_unitary(rng, 2)
    gR, gC = adhm.adhm_moment(adhm.unitary_action(g, d))
    gi = g.conj().T
    out.append(_le("equivariance", max(np.abs(gR - gi @ muR @ g).max(), np.abs(gC - gi @ muC @ g).max()), 1e-12))
    ex = adhm.slice_example(1.0)
    rep = adhm.level_set_check(ex, "i", 1.0)
    out.append(Check("slice_example_i_level", rep.member, rep.defect, adhm.LEVEL_TOL))
    out.append(Check("slice_example_tgr", adhm.tgr_slice_check(ex), 0.0, 0.0))
    z = np.exp(1j * rng.uniform(0, 2 * np.pi))
    sR, sC = adhm.adhm_moment(adhm.s1_action(z, 3, d))
    out.append(_le("s1_preserves_muR", np.abs(sR - muR).max(), 1e-13))
    out.append(_le("s1_scales_muC", np.abs(sC - z**3 * muC).max(), 1e-12))
    sl = adhm.ADHMData(np.zeros((2, 2)), np.zeros((2, 2)), d.C, d.D)
    cc = adhm.conjugation_c(adhm.conjugation_c(sl))
    out.append(_le("conjugation_involution", max(np.abs(cc.C - sl.C).max(), np.abs(cc.D - sl.D).max()), 0.0))
    return out


# --- Cayley ----------------------------------------------------------------------------


def suite_cayley(rng, N, h):
    out = []
    spectrum = spin7.spin7_spectrum()
    w = spectrum.eigenvalues
    n7 = int(np.sum(np.isclose(w, spectrum.value7, atol=1e-9)))
    n21 = int(np.sum(np.isclose(w, spectrum.value21, atol=1e-9)))
    out.append(Check("eigen_multiplicities_7_21", n7 == 7 and n21 == 21, float(n7), 7.0))
    dev = max(np.abs(w[np.isclose(w, spectrum.value7, atol=1e-6)] - 3.0).max(), np.abs(w[np.isclose(w, spectrum.value21, atol=1e-6)] + 1.0).max())
    out.append(_le("eigenvalues_3_and_minus1", dev, 1e-9))
    out.append(_le("eigenmap_trace", abs(np.trace(spin7.eigenmap_matrix())), 1e-12))
    O = spin7.cayley_form()
    out.append(_le("omega_selfdual", np.abs(spin7.hodge_star(O).coeffs - O.coeffs).max(), 1e-13))
    out.append(_le("omega_wedge_omega_14", abs(spin7.wedge(O, O).coeffs[spin7.TOP] - 14.0), 1e-12))
    agree = True
    corr = 0.0
    for kind in range(60):
        W = rng.standard_normal(28)
        if kind % 2:
            W = spectrum.P_minus @ W
        W20 = W[spin7._IDX_U]
        W02 = W[spin7._IDX_V]
        W11 = np.zeros((4, 4))
        for idx, (i, j) in zip(spin7._IDX_UV, spin7.PAIRS_UV):
            W11[i, j - 4] = W[idx]
        rep = spin7.spin7_split_check(W20, W11, W02)
        agree &= rep.agree
        corr = max(corr, abs(rep.defect_left - rep.defect_right))
    out.append(Check("split_criterion_agreement", bool(agree), 0.0, 0.0))
    out.append(_le("split_defect_correlation", corr, 1e-9))
    return out


# --- five-dimensional flow --------------------------------------------------------------


def suite_fivedim(rng, N, h):
    out = []
    grid = Grid4(N, h)
    diag = np.zeros((4,) + grid.shape + (2, 2), complex)
    diag[..., 0, 0] = 0.3j
    diag[..., 1, 1] = -0.3j
    a = FormField(grid, 1, diag)
    s0 = gsw.FiveDState(0.0, a, FormField.zeros(grid, SD, (2, 2), complex), FormField.zeros(grid, 0, (2, 2), complex))
    s = s0
    for _ in range(10):
        s = gsw.five_d_flow_step(s, 0.01)
    out.append(_le("fixed_point", np.abs(s.a.data - s0.a.data).max() + np.abs(s.b.data).max(), 1e-12))

    t = np.linspace(0, 1, 64, endpoint=False)
    T = np.zeros((4, t.size, 1, 1), complex)
    T[1, :, 0, 0] = 1j * np.sin(2 * np.pi * t)
    mu = gsw.five_d_moment(T, t)
    dt = t[1] - t[0]
    stencil = (np.roll(T[1], -1, axis=0) - np.roll(T[1], 1, axis=0)) / (2 * dt)
    out.append(_le("abelian_moment_stencil", np.abs(mu[0] - stencil).max(), 1e-14))

    b = FormField(grid, SD, lattice4.random_lie(rng, 2, (3,) + grid.shape) * 0.1)
    s1 = gsw.five_d_flow_step(gsw.FiveDState(0.0, a, b, s0.c), 0.01)
    herm = max(np.abs(x + np.conj(np.swapaxes(x, -1, -2))).max() for x in (s1.a.data, s1.b.data))
    out.append(_le("antihermitian_preserved", herm, 1e-14))
    return out


SUITES = {
    "algebra": suite_algebra,
    "dirac": suite_dirac,
    "sw": suite_sw,
    "vafa-witten": suite_vafa_witten,
    "casd": suite_casd,
    "adhm": suite_adhm,
    "cayley": suite_cayley,
    "fivedim": suite_fivedim,
}


def run_suite(name, seed=0, N=8, h=0.25):
    """Run one suite (or ``"all"``) and return ``{suite_name: [Check, ...]}``."""
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise UnknownSuite(name)
    results = {}
    for key in names:
        # the stream depends on the suite, not on which others run alongside
        rng = np.random.default_rng([seed, list(SUITES).index(key)])
        results[key] = SUITES[key](rng, N, h)
    return results
