import math
from itertools import product

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from kernelur import bounds as bd
from kernelur import moments as mo
from kernelur.errors import SingularParameterError, UnsupportedClosedFormError
from kernelur.grid import Bump, Gaussian, Hermite, sample
from kernelur.kernels import QuadPhaseKernel, gtf_standard, make_frft, make_lct, make_squeeze

ANGLES = (0.3, 0.7, 1.1, 1.9, 2.6)
LCTS = ((1.0, 0.5, 0.3), (0.5, 1.0, 0.3), (-1.0, 2.0, 0.3), (2.0, -1.5, 0.3), (0.0, 1.0, 0.0))


def _rel(a, b):
    return abs(a - b) / abs(b)


# -- W and F -----------------------------------------------------------------------


@pytest.mark.parametrize("alpha, beta", [(0.3, 1.1), (2.6, 0.7), (1.9, 1.9)])
def test_w_frft(alpha, beta):
    w = bd.w_matrix(make_frft(alpha), make_frft(beta))
    assert w.shape == (1, 1)
    assert w[0, 0] == pytest.approx(math.sin(beta - alpha), abs=1e-15)


def test_w_lct():
    assert bd.w_matrix(make_lct(0, 1, 0), make_lct(1, 1, 1))[0, 0] == -1.0


def test_w_squeeze():
    w = bd.w_matrix(make_squeeze(0.5, 0.0), make_squeeze(1.5, 0.0))[0, 0]
    assert w == pytest.approx(math.sinh(1.0), rel=1e-14)
    assert w == pytest.approx(1.17520, abs=1e-5)


@pytest.mark.parametrize("alpha, beta, theta", [(0.2, 0.9, 0.3), (1.3, -0.4, -0.8)])
def test_w_squeeze_general(alpha, beta, theta):
    w = bd.w_matrix(make_squeeze(alpha, theta), make_squeeze(beta, theta))[0, 0]
    assert w == pytest.approx(math.cos(theta) * math.sinh(beta - alpha), rel=1e-12)


def test_w_antisymmetry_is_exact():
    for a, b in product(ANGLES, repeat=2):
        k1, k2 = make_frft(a), make_frft(b)
        assert bd.w_matrix(k1, k2)[0, 0] == -bd.w_matrix(k2, k1)[0, 0]


def test_closed_forms_reject_extra_phase():
    with pytest.raises(UnsupportedClosedFormError):
        bd.w_matrix(gtf_standard(0.5), make_frft(0.5))
    with pytest.raises(UnsupportedClosedFormError):
        bd.ur_quadratic(make_frft(0.5), gtf_standard(0.5), None)


@pytest.mark.parametrize("alpha, beta", [(0.3, 1.1), (2.6, 0.7), (1.1, 1.1)])
def test_f_frft_ground_state(psi, alpha, beta):
    f = bd.f_matrix(make_frft(alpha), make_frft(beta), mo.moment_set(psi(0)))[0, 0]
    assert f == pytest.approx(0.5 * math.cos(alpha - beta), abs=1e-10)


def test_f_reduces_to_position_variance():
    # at alpha = beta = 0 the kernel is a delta, but F itself is pure algebra
    m = bd.DeltaBlocks(0.5, 0.5, 0.0)
    k = QuadPhaseKernel(1e12, 1e12, 1e12, math.sqrt(1e12 / (2 * math.pi)))
    assert bd.f_matrix(k, k, m)[0, 0] == pytest.approx(0.5, rel=1e-9)


def test_f_lct_ground_state(psi):
    f = bd.f_matrix(make_lct(0, 1, 0), make_lct(1, 1, 1), mo.moment_set(psi(0)))[0, 0]
    assert f == pytest.approx(0.5, abs=1e-10)


def _block_kernel(k1, k2):
    diag = lambda attr: np.diag([getattr(k1, attr), getattr(k2, attr)])  # noqa: E731
    c = diag("c")
    return QuadPhaseKernel(diag("a"), diag("b"), c, math.sqrt(abs(np.linalg.det(c))) / (2 * math.pi), dim=2)


def test_matrix_level_blocks_match_scalars(lattice_signals):
    m1 = mo.moment_set(lattice_signals["chirped"])
    m2 = mo.moment_set(lattice_signals["psi0+psi1"])
    blocks = bd.DeltaBlocks(np.diag([m1.dxx, m2.dxx]), np.diag([m1.dpp, m2.dpp]), np.diag([m1.dxp, m2.dxp]))
    ka = _block_kernel(make_frft(0.3), make_squeeze(0.4, 0.3))
    kb = _block_kernel(make_frft(1.9), make_squeeze(0.8, 0.3))
    wf = bd.wf_matrices(ka, kb, blocks)
    assert wf.w[0, 0] == pytest.approx(math.sin(1.9 - 0.3), rel=1e-12)
    assert wf.w[1, 1] == pytest.approx(math.cos(0.3) * math.sinh(0.4), rel=1e-12)
    assert wf.f[0, 0] == pytest.approx(bd.f_matrix(make_frft(0.3), make_frft(1.9), m1)[0, 0], rel=1e-12)
    assert wf.f[1, 1] == pytest.approx(
        bd.f_matrix(make_squeeze(0.4, 0.3), make_squeeze(0.8, 0.3), m2)[0, 0], rel=1e-12)
    assert wf.w[0, 1] == 0 and wf.f[1, 0] == 0


sym2 = st.tuples(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3)).map(
    lambda t: np.array([[t[0], t[1]], [t[1], t[2]]]))
mat2 = st.tuples(*[st.floats(-3, 3)] * 4).map(lambda t: np.array(t).reshape(2, 2))


def _kernel2(a, b, c):
    return QuadPhaseKernel(a, b, c, math.sqrt(abs(np.linalg.det(c))) / (2 * math.pi), dim=2)


@settings(max_examples=60, deadline=None)
@given(a1=sym2, b1=sym2, c1=mat2, a2=sym2, b2=sym2, c2=mat2)
def test_matrix_w_antisymmetry(a1, b1, c1, a2, b2, c2):
    assume(abs(np.linalg.det(c1)) > 0.1 and abs(np.linalg.det(c2)) > 0.1)
    k1, k2 = _kernel2(a1, b1, c1), _kernel2(a2, b2, c2)
    w12, w21 = bd.w_matrix(k1, k2), bd.w_matrix(k2, k1)
    assert np.allclose(w12, -w21.T, rtol=0, atol=1e-10 * max(1.0, np.abs(w12).max()))


@settings(max_examples=60, deadline=None)
@given(b1=sym2, c1=mat2, b2=sym2, c2=mat2, dxp=mat2)
def test_matrix_f_transpose_symmetry(b1, c1, b2, c2, dxp):
    assume(abs(np.linalg.det(c1)) > 0.1 and abs(np.linalg.det(c2)) > 0.1)
    k1, k2 = _kernel2(np.eye(2), b1, c1), _kernel2(np.eye(2), b2, c2)
    blocks = bd.DeltaBlocks(np.eye(2) * 0.7, np.eye(2) * 1.3, dxp)
    f12, f21 = bd.f_matrix(k1, k2, blocks), bd.f_matrix(k2, k1, blocks)
    assert np.allclose(f12, f21.T, rtol=1e-10, atol=1e-10)


# -- reports ------------------------------------------------------------------------


def test_report_json_layout(psi):
    rep = bd.ur_quadratic(make_frft(0.9), make_frft(0.3), psi(0))
    assert list(rep.to_dict()) == ["sigma2_1", "sigma2_2", "f_term", "w_term", "bound",
                                   "lhs", "margin", "saturation", "labels"]
    gtf = bd.ur_gtf(0.4, 1.2, psi(0)).to_dict()
    assert list(gtf)[5] == "bound_paper_variant"


def test_gaussian_saturation_example(psi):
    rep = bd.ur_quadratic(make_frft(0.9), make_frft(0.3), psi(0))
    assert rep.lhs == pytest.approx(0.25, abs=1e-10)
    assert rep.bound == pytest.approx(0.25, abs=1e-12)
    assert abs(rep.margin) <= 1e-7
    assert rep.holds()


def test_canonical_pair_saturates(psi):
    rep = bd.ur_generic(mo.position(), mo.momentum(), psi(0))
    assert rep.lhs == pytest.approx(0.25, abs=1e-10)
    assert rep.bound == pytest.approx(0.25, abs=1e-10)
    assert rep.saturation == pytest.approx(1.0, abs=1e-9)


def test_saturation_convention():
    assert bd.UrReport.assemble(0.0, 1.0, 0.0, 0.0).saturation == 1.0
    assert bd.UrReport.assemble(0.0, 1.0, 0.0, 1.0).saturation == math.inf


def test_real_even_signal_reproduces_special_case(psi):
    f = psi(2)
    m = mo.moment_set(f)
    for alpha in (0.3, 1.1, 2.6):
        rep = bd.ur_generic(mo.position(), bd.frft_observable(alpha), f)
        assert _rel(rep.bound, bd.frft_bound_uncorrelated(alpha, m.dxx)) <= 1e-9
        assert rep.holds()


def test_frft_bound_ground_state_is_quarter(psi):
    m = mo.moment_set(psi(0))
    for a, b in product(ANGLES, repeat=2):
        assert bd.frft_bound(a, b, m) == pytest.approx(0.25, abs=1e-10)


def test_special_case_algebra():
    m = mo.MomentSet(0.0, 0.0, 1.7, 0.9, 0.0, 0.0)
    for alpha in np.linspace(-3, 3, 61):
        assert _rel(bd.frft_bound(alpha, 0.0, m), bd.frft_bound_uncorrelated(alpha, 1.7)) <= 1e-12


@pytest.mark.parametrize(
    "m1, m2, expected",
    [((0, 1, 0), (1, 1, 1), 0.5), ((2, 1, 0), (0, 1, 0), 1.25)],
)
def test_lct_bound_ground_state(psi, m1, m2, expected):
    m = mo.moment_set(psi(0))
    assert bd.lct_bound(m1, m2, m) == pytest.approx(expected, abs=1e-10)
    assert bd.ur_quadratic(make_lct(*m1), make_lct(*m2), psi(0)).bound == pytest.approx(expected, abs=1e-10)


def test_lct_equal_matrices_have_no_commutator(lattice_signals):
    m = mo.moment_set(lattice_signals["chirped"])
    f = 1.0 * 1.0 * m.dxx + 0.5 * 0.5 * m.dpp + 2 * 0.5 * m.dxp
    assert bd.lct_bound((1.0, 0.5), (1.0, 0.5), m) == pytest.approx(f * f, rel=1e-14)


def test_squeeze_ground_state(psi):
    # with theta = 0, F = (sinh a sinh b + cosh a cosh b)/2 = cosh(a + b)/2
    m = mo.moment_set(psi(0))
    expected = 0.25 * math.cosh(1.5) ** 2 + 0.25 * math.sinh(0.5) ** 2
    assert bd.squeeze_bound(0.5, 1.0, 0.0, m) == pytest.approx(expected, rel=1e-9)
    rep = bd.ur_quadratic(make_squeeze(0.5, 0.0), make_squeeze(1.0, 0.0), psi(0))
    assert rep.bound == pytest.approx(expected, rel=1e-9)
    assert rep.saturation == pytest.approx(1.0, abs=1e-9)


def test_squeeze_equal_orders(lattice_signals):
    m = mo.moment_set(lattice_signals["chirped"])
    f = bd.squeeze_f_term(0.7, 0.7, 0.3, m)
    assert bd.squeeze_bound(0.7, 0.7, 0.3, m) == pytest.approx(f * f, rel=1e-14)


def test_squeeze_singular_theta(psi):
    with pytest.raises(SingularParameterError):
        bd.squeeze_bound(0.3, 0.6, math.pi / 2, mo.moment_set(psi(0)))


def test_squeeze_cross_term_needs_cos_theta(lattice_signals):
    f = lattice_signals["chirped"]
    m = mo.moment_set(f)
    generic = bd.ur_quadratic(make_squeeze(0.3, 0.6), make_squeeze(0.8, 0.6), f).bound
    assert _rel(bd.squeeze_bound(0.3, 0.8, 0.6, m), generic) <= 1e-9
    assert _rel(bd.squeeze_bound(0.3, 0.8, 0.6, m, printed=True), generic) > 1e-2
    # without x-p correlation the two forms coincide
    g = lattice_signals["shifted"]
    mg = mo.moment_set(g)
    assert bd.squeeze_bound(0.3, 0.8, 0.6, mg, printed=True) == pytest.approx(
        bd.squeeze_bound(0.3, 0.8, 0.6, mg), abs=1e-10)


@pytest.mark.parametrize("signal", ["psi0", "psi0+psi1", "chirped", "shifted"])
def test_closed_forms_match_matrix_route(lattice_signals, signal):
    f = lattice_signals[signal]
    m = mo.moment_set(f)
    for a, b in product(ANGLES, repeat=2):
        assert _rel(bd.frft_bound(a, b, m), bd.ur_quadratic(make_frft(a), make_frft(b), f).bound) <= 1e-7
    for m1, m2 in product(LCTS, repeat=2):
        assert _rel(bd.lct_bound(m1, m2, m), bd.ur_quadratic(make_lct(*m1), make_lct(*m2), f).bound) <= 1e-7
    for a, b in product((0.2, 0.4, 0.6), repeat=2):
        generic = bd.ur_quadratic(make_squeeze(a, 0.3), make_squeeze(b, 0.3), f).bound
        assert _rel(bd.squeeze_bound(a, b, 0.3, m), generic) <= 1e-7


@pytest.mark.parametrize("signal", ["psi0", "psi0+psi1", "chirped", "shifted"])
def test_inequality_over_lattice(lattice_signals, signal):
    f = lattice_signals[signal]
    for a, b in product(ANGLES, repeat=2):
        k1, k2 = make_frft(a), make_frft(b)
        assert bd.ur_quadratic(k1, k2, f).holds(1e-7)
        assert bd.ur_generic(mo.transformed_observable(k1), mo.transformed_observable(k2), f).holds(1e-7)
        assert bd.ur_quadratic(make_squeeze(a, 0.3), make_squeeze(b, 0.3), f).holds(1e-7)
        assert bd.ur_gtf(a, b, f).holds(1e-7)


def test_ground_state_saturates_every_frft_pair(psi):
    for a, b in product(ANGLES, repeat=2):
        if a != b:
            assert bd.ur_quadratic(make_frft(a), make_frft(b), psi(0)).saturation == pytest.approx(1.0, abs=1e-6)


# -- cubic phase ------------------------------------------------------------------


def test_gtf_observable_form():
    o = bd.gtf_observable(0.7)
    assert o.p_coeff == math.sin(0.7)
    assert np.allclose(o.x_coeffs, [0, math.cos(0.7), -3 * math.sin(0.7)])


def test_gtf_ground_state_quarter_turn(psi):
    m, hm = mo.moment_set(psi(0)), mo.higher_moments(psi(0))
    assert bd.gtf_bound(0.0, math.pi / 2, m, hm) == pytest.approx(0.25, abs=1e-10)
    assert bd.gtf_bound_paper_variant(0.0, math.pi / 2, m, hm) == pytest.approx(1.0, abs=1e-10)


def test_gtf_equal_angles(lattice_signals):
    f = lattice_signals["shifted"]
    m, hm = mo.moment_set(f), mo.higher_moments(f)
    var = mo.variance(bd.gtf_observable(0.8), f)
    assert bd.gtf_covariance(0.8, 0.8, m, hm) == pytest.approx(var, rel=1e-9)
    assert bd.gtf_bound(0.8, 0.8, m, hm) == pytest.approx(var * var, rel=1e-9)


def test_gtf_generic_example(psi):
    rep = bd.ur_gtf(0.4, 1.2, psi(0))
    assert rep.w_term == pytest.approx(math.sin(0.8), abs=1e-7)
    assert rep.holds(1e-7)


@pytest.mark.parametrize("signal", ["chirped", "shifted"])
def test_gtf_covariance_coefficient(grid, signal):
    # a signal with nonzero Cov(x^2, p) separates the -6 and -3 coefficients
    f = sample(Gaussian(mu=0.6, chirp=0.8, p0=0.4), grid) if signal == "chirped" else sample(Gaussian(mu=1.0), grid)
    m, hm = mo.moment_set(f), mo.higher_moments(f)
    for phi1, phi2 in ((0.4, 1.2), (2.1, 0.5), (0.9, 0.9)):
        numeric = mo.covariance(bd.gtf_observable(phi1), bd.gtf_observable(phi2), f)
        assert bd.gtf_covariance(phi1, phi2, m, hm) == pytest.approx(numeric, abs=1e-8)
        rep = bd.ur_gtf(phi1, phi2, f)
        assert rep.bound == pytest.approx(bd.gtf_bound(phi1, phi2, m, hm), abs=1e-8)
    if signal == "chirped":
        assert abs(hm.cov_x2_p) > 0.1
        printed = bd.gtf_covariance(0.4, 1.2, m, hm, printed=True)
        assert abs(printed - bd.gtf_covariance(0.4, 1.2, m, hm)) > 1e-2


@pytest.mark.parametrize("phi1, phi2", [(0.0, math.pi / 2), (0.4, 1.2), (2.1, 0.5)])
@pytest.mark.parametrize("spec", [Hermite(0), Hermite((0, 1)), Gaussian(chirp=1.0)], ids=["psi0", "psi01", "chirped"])
def test_gtf_commutator_is_x_free(grid, phi1, phi2, spec):
    f = sample(spec, grid)
    w = mo.commutator_expectation(bd.gtf_observable(phi1), bd.gtf_observable(phi2), f)
    assert w == pytest.approx(math.sin(phi2 - phi1), abs=1e-7)


# -- momentum versus number ---------------------------------------------------------


def test_pn_ground_state(psi):
    rep = bd.pn_bound(psi(0), 12)
    assert rep.sigma2_2 == pytest.approx(0.0, abs=1e-12)
    assert rep.lhs == pytest.approx(0.0, abs=1e-12)
    assert rep.bound == pytest.approx(0.0, abs=1e-12)


def test_pn_two_level(grid):
    rep = bd.pn_bound(sample(Hermite((0, 1)), grid), 12)
    assert rep.sigma2_2 == pytest.approx(0.25, abs=1e-8)
    assert 0.25 * rep.w_term ** 2 == pytest.approx(0.125, abs=1e-6)
    assert rep.lhs >= rep.bound


def test_pn_third_level(psi):
    rep = bd.pn_bound(psi(3), 12)
    assert rep.sigma2_2 <= 1e-10
    assert abs(rep.margin) <= 1e-9
    assert rep.bound == pytest.approx(0.0, abs=1e-12)


def test_pn_shifted(grid):
    rep = bd.pn_bound(sample(Gaussian(mu=1.0), grid), 16)
    assert 0.25 * rep.w_term ** 2 == pytest.approx(0.25, abs=1e-6)
    assert rep.holds()


# -- properties -------------------------------------------------------------------


@settings(max_examples=30, deadline=None)
@given(a=st.floats(0.2, 2.9), b=st.floats(0.2, 2.9), mu=st.floats(-1.5, 1.5), chirp=st.floats(-1.5, 1.5),
       p0=st.floats(-1.5, 1.5))
def test_frft_inequality_property(grid, a, b, mu, chirp, p0):
    f = sample(Gaussian(mu=mu, chirp=chirp, p0=p0), grid)
    rep = bd.ur_quadratic(make_frft(a), make_frft(b), f)
    assert rep.holds(1e-7)
    # every Gaussian is a minimum-uncertainty state for linear pairs
    assert rep.saturation == pytest.approx(1.0, abs=1e-6) or abs(rep.lhs) < 1e-12


@settings(max_examples=30, deadline=None)
@given(phi1=st.floats(-3, 3), phi2=st.floats(-3, 3), center=st.floats(-2, 2), width=st.floats(2, 4))
def test_gtf_inequality_property(grid, phi1, phi2, center, width):
    f = sample(Bump(center=center, width=width), grid)
    assert bd.ur_gtf(phi1, phi2, f).holds(1e-7)
