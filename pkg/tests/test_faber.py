"""Polynomial construction: closed form, oracle, Chebyshev form, residuals.

The frozen coefficient and root values below were produced by the contour
oracle (faber_oracle) and the simultaneous root finder and cross-checked
against faber_coeffs_mp before being written down.
"""

import numpy as np
import pytest

import faberzeros as fz
from faberzeros.conformal import params_from, psi, uvw
from faberzeros.faber import (
    FaberEvaluator, PolyCoeffs, chebyshev_T, faber_closed, faber_coeffs_mp,
    faber_oracle, faber_shifted, horner, residual, scaled_residual,
)

PRESETS = [(1.26, 0.0), (2.1, 0.0), (2.1, 0.2), (1.45, 0.2)]


def test_degree_one_and_leading_coefficient():
    p = params_from(1.26)
    f1 = faber_closed(p, 1)
    # F_1 = (2z - b)/a
    assert f1.coeffs[0] == pytest.approx(0.20634920634920634, abs=1e-16)
    assert f1.coeffs[1] == pytest.approx(1.5873015873015872, abs=1e-15)
    for R, theta in PRESETS:
        p = params_from(R, theta)
        for n in (1, 2, 5, 9):
            lead = faber_closed(p, n).coeffs[-1]
            assert lead == pytest.approx((2.0 / p.a) ** n, rel=1e-14)


def test_frozen_low_degree_coeffs():
    p = params_from(1.26)
    f2 = faber_closed(p, 2).coeffs
    f3 = faber_closed(p, 3).coeffs
    assert np.allclose(f2, [-1.217183169564122, 0.6550768455530359,
                            2.519526329050138], atol=1e-14)
    assert np.allclose(f3, [-0.7710670393965935, -2.796674225245654,
                            1.5597067751262763, 3.999248141349426], atol=1e-14)


def test_degree_zero():
    p = params_from(1.26)
    f0 = faber_closed(p, 0)
    assert f0.degree == 0
    assert f0.coeffs[0] == pytest.approx(1.0)


def test_oracle_equivalence_small():
    for R, theta in PRESETS:
        p = params_from(R, theta)
        for n in (1, 4, 7, 12):
            a = faber_closed(p, n).coeffs
            o = faber_oracle(p, n).coeffs
            assert np.max(np.abs(a - o)) < 1e-11 * np.max(np.abs(a))


def test_mp_coefficients_agree():
    p = params_from(2.1, 0.2)
    a = faber_closed(p, 18).coeffs
    m = np.array([complex(v) for v in faber_coeffs_mp(p, 18)])
    assert np.max(np.abs(a - m)) < 1e-12 * np.max(np.abs(a))


def test_defining_property_at_infinity():
    # F_n(psi(w)) = w^n + O(1/w): at large |w| the ratio is 1
    rng = np.random.default_rng(17)
    for R, theta in PRESETS:
        p = params_from(R, theta)
        f = faber_closed(p, 8)
        w = 40.0 * np.exp(1j * rng.uniform(0, 2 * np.pi, 16))
        vals = f(psi(p, w))
        assert np.max(np.abs(vals / w ** 8 - 1.0)) < 1e-9


def test_circle_plane_identity_seeded():
    # F_n(J(b(1-w))) == (-b/a)^n (w^n + g(w)^n - 1) with g(w) = 1 - 1/(b^2(1-w));
    # exact for every w, not just asymptotically.
    rng = np.random.default_rng(23)
    for R, theta in [(2.1, 0.0), (2.1, 0.2)]:
        p = params_from(R, theta)
        b = p.b
        for n in (3, 11, 24):
            f = faber_closed(p, n)
            w = np.exp(1j * rng.uniform(0, 2 * np.pi, 30)) * rng.uniform(0.7, 1.4, 30)
            zeta = b * (1.0 - w)
            z = 0.5 * (zeta + 1.0 / zeta)
            g = 1.0 - 1.0 / (b * b * (1.0 - w))
            rhs = (-b / p.a) ** n * (w ** n + g ** n - 1.0)
            scale = np.max(np.abs(rhs)) + 1.0
            assert np.max(np.abs(f(z) - rhs)) < 1e-10 * scale


def test_shifted_variant_is_chebyshev_form():
    # F_n + (-b/a)^n == 2 a^-n V^{n/2} T_n(U)
    rng = np.random.default_rng(29)
    p = params_from(2.1, 0.2)
    n = 9
    sh = faber_shifted(p, n)
    z = rng.normal(size=25) + 1j * rng.normal(size=25)
    u, v, _ = uvw(p, z)
    from faberzeros.conformal import uvw4
    _, _, _, sv = uvw4(p, z)
    want = 2.0 * p.a ** (-n) * sv ** n * chebyshev_T(n, u)
    got = sh(z)
    assert np.max(np.abs(got - want)) < 1e-9 * (np.max(np.abs(want)) + 1)


def test_chebyshev_reference_values():
    u = np.linspace(-0.99, 0.99, 41)
    for n in (0, 1, 2, 7, 20):
        want = np.cos(n * np.arccos(u))
        assert np.max(np.abs(chebyshev_T(n, u) - want)) < 1e-11
    # outside [-1, 1] compare against cosh form
    x = np.linspace(1.5, 4.0, 11)
    for n in (3, 10):
        want = np.cosh(n * np.arccosh(x))
        assert np.max(np.abs(chebyshev_T(n, x) - want)) < 1e-8 * np.max(want)


def test_residual_vanishes_at_roots_and_derivative_fd():
    p = params_from(2.1, 0.2)
    n = 14
    zs = fz.compute_zeros(p, n)
    r, _ = residual(p, n, zs.zeros)
    assert np.max(np.abs(r)) < 1e-10
    # dr by central differences at generic points
    rng = np.random.default_rng(31)
    z = rng.normal(size=12) + 1j * rng.normal(size=12)
    h = 1e-6
    r0, dr = residual(p, n, z)
    rp, _ = residual(p, n, z + h)
    rm, _ = residual(p, n, z - h)
    fd = (rp - rm) / (2 * h)
    mask = np.abs(dr) > 1e-6
    assert np.max(np.abs(fd[mask] - dr[mask]) / np.abs(dr[mask])) < 1e-5


def test_scaled_residual_is_scale_free():
    p = params_from(2.1, 0.0)
    n = 30
    zs = fz.compute_zeros(p, n)
    s = scaled_residual(p, n, zs.zeros)
    assert np.max(s) < 1e-10
    # a point far from any zero scores order one
    assert scaled_residual(p, n, np.array([0.5 + 0.9j]))[0] > 1e-3


def test_overflow_preflight():
    p = params_from(2.1, 0.0)
    with pytest.raises(OverflowError):
        faber_closed(p, 1200)


def test_poly_coeffs_json_roundtrip_and_horner():
    co = np.array([1.0 + 2.0j, -0.5, 0.25j, 3.0])
    pc = PolyCoeffs(3, co)
    back = PolyCoeffs.from_json_dict(pc.to_json_dict())
    assert back.degree == 3
    assert np.allclose(back.coeffs, co)
    z = np.array([0.3 + 0.1j, -2.0, 1.5j])
    assert np.allclose(horner(co, z), np.polyval(co[::-1], z))


def test_evaluator_matches_coefficients():
    p = params_from(1.45, 0.2)
    n = 16
    ev = FaberEvaluator(p, n)
    f = faber_closed(p, n)
    z = np.linspace(-1, 1, 9) + 0.2j
    assert np.allclose(ev(z), f(z), rtol=1e-12, atol=1e-12)
