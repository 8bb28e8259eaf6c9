import math

import numpy as np
import pytest

from fhmerge.errors import SingularAngleError, ValidationError
from fhmerge.quadrature import arc_rule, integrate_arc
from fhmerge.symbol import (
    FHParams,
    eval_symbol,
    fourier_coeffs,
    params_from_json_dict,
    wiener_hopf,
)

PI = math.pi


def test_tanh_sinh_endpoint_singularity():
    # int_0^1 x^(-0.4) dx = 1/0.6, the hardest exponent in the battery
    val, err = integrate_arc(lambda rule: rule.dist_a ** (-0.4), 0.0, 1.0)
    assert abs(val - 1.0 / 0.6) < 1e-12


def test_tanh_sinh_oscillatory():
    rule = arc_rule(0.0, 2.0 * PI, max_freq=40.0)
    val = np.sum(np.cos(40.0 * rule.x) * rule.x * rule.w)
    exact = 0.0  # int_0^{2pi} x cos(40x) dx = 0
    assert abs(val - exact) < 1e-11


def test_params_validation():
    with pytest.raises(ValidationError):
        FHParams(-0.6, 0.0)
    with pytest.raises(ValidationError):
        FHParams(0.3, 0.3, t=3.5)
    with pytest.raises(ValidationError):
        FHParams(-0.3, -0.3, t=0.0)  # merged integrability


def test_t_snap():
    p = FHParams(0.3, 0.3, t=1e-15)
    assert p.t == 0.0 and p.t_was_snapped


def test_seminorm():
    p = FHParams(0.1, 0.1, beta1=1.2, beta2=-0.3)
    assert p.seminorm == 1.5


def test_eval_identity_symbol():
    p = FHParams(0.0, 0.0)
    for theta in (0.3, 2.0, 5.9):
        assert abs(eval_symbol(p, theta) - 1.0) < 1e-15


def test_eval_modulus_product():
    # |1-i| * |1+i| = 2 at theta=0 for the half pair at t = pi/2
    p = FHParams(0.5, 0.5, t=PI / 2.0)
    assert abs(eval_symbol(p, 0.0) - 2.0) < 1e-14


def test_jump_ratio():
    p = FHParams(0.0, 0.0, beta1=0.5, t=1.0)
    eps = 1e-9
    ratio = eval_symbol(p, 1.0 + eps) / eval_symbol(p, 1.0 - eps)
    assert abs(ratio - np.exp(-2j * PI * 0.5)) < 1e-6


def test_eval_singular_angle_error():
    p = FHParams(0.3, 0.3, t=0.7)
    with pytest.raises(SingularAngleError):
        eval_symbol(p, 0.7)


def test_wiener_hopf_trivial():
    wh = wiener_hopf(FHParams(0.0, 0.0))
    assert wh.b0 == 1.0 and wh.b_plus(0.5) == 1.0 and wh.szego_sum == 0


def test_wiener_hopf_split():
    wh = wiener_hopf(FHParams(0.0, 0.0, v_coeffs={1: 1.0}))
    z = 0.3 + 0.1j
    assert abs(wh.b_plus(z) - np.exp(z)) < 1e-15
    assert wh.b_minus(z) == 1.0 and wh.b0 == 1.0


def test_szego_sum_single_pair():
    wh = wiener_hopf(FHParams(0.0, 0.0, v_coeffs={1: 0.5, -1: 0.5}))
    assert abs(wh.szego_sum - 0.25) < 1e-15


def test_fourier_identity():
    tab = fourier_coeffs(FHParams(0.0, 0.0), 6)
    assert abs(tab[0] - 1.0) < 1e-14
    assert max(abs(tab[j]) for j in range(1, 7)) < 1e-13


def test_fourier_abs_z_minus_one():
    # f = |z-1| = 2|sin(theta/2)|: f_j = 4/pi (j=0), -4/(pi(4j^2-1)) else
    tab = fourier_coeffs(FHParams(0.25, 0.25), 5)
    assert abs(tab[0] - 4.0 / PI) < 1e-11
    assert abs(tab[1] + 4.0 / (3.0 * PI)) < 1e-11
    assert abs(tab[3] + 4.0 / (35.0 * PI)) < 1e-11


def test_fourier_two_cos():
    # f = 2|cos theta| at t = pi/2
    tab = fourier_coeffs(FHParams(0.5, 0.5, t=PI / 2.0), 4)
    assert abs(tab[0] - 4.0 / PI) < 1e-11
    assert abs(tab[1]) < 1e-11
    assert abs(tab[2] - 4.0 / (3.0 * PI)) < 1e-11
    assert abs(tab[-2] - 4.0 / (3.0 * PI)) < 1e-11


def test_hermitian_symmetry():
    p = FHParams(0.3, 0.2, beta1=0.4j, beta2=-0.1j, t=0.9)
    assert p.is_real_symbol()
    tab = fourier_coeffs(p, 8)
    worst = max(abs(tab[-j] - np.conj(tab[j])) for j in range(1, 9))
    assert worst <= max(tab.quad_error_estimate, 1e-13)


def test_parseval():
    p = FHParams(0.25, 0.25, t=0.6)
    n_max = 48
    tab = fourier_coeffs(p, n_max)

    total = 0.0
    from fhmerge.symbol import _arcs, _symbol_on_rule

    for (a, b), roles in _arcs(p):
        rule = arc_rule(a, b, max_freq=4.0, refine=1)
        vals = np.abs(_symbol_on_rule(p, rule, roles)) ** 2
        total += np.sum(vals * rule.w) / (2.0 * PI)
    series = sum(abs(tab[j]) ** 2 for j in range(-n_max, n_max + 1))
    # coefficients decay ~ 1/j^2, so the tail is O(1/n_max^3)
    assert abs(total - series) < 5.0 / n_max**3


def test_rotation_consistency():
    phi = PI / 3.0
    v = {1: 0.3 + 0.1j, -2: 0.2j, 2: -0.05}
    p = FHParams(0.0, 0.0, v_coeffs=v)
    vrot = {k: c * np.exp(1j * k * phi) for k, c in v.items()}
    prot = FHParams(0.0, 0.0, v_coeffs=vrot)
    t1 = fourier_coeffs(p, 6)
    t2 = fourier_coeffs(prot, 6)
    for j in range(-6, 7):
        assert abs(t2[j] - t1[j] * np.exp(1j * j * phi)) < 1e-9


def test_json_config_roundtrip():
    cfg = {
        "alpha1": [0.3, 0.0],
        "alpha2": [0.2, 0.1],
        "beta1": [0.0, 0.4],
        "beta2": 0.0,
        "t": 0.7,
        "V": {"1": [0.5, 0.0], "-1": [0.5, 0.0]},
    }
    p = params_from_json_dict(cfg)
    assert p.alpha2 == 0.2 + 0.1j and p.beta1 == 0.4j and p.v[1] == 0.5


def test_json_config_rejects_invalid():
    with pytest.raises(ValidationError):
        params_from_json_dict({"alpha1": [-0.7, 0.0], "alpha2": 0.0, "t": 0.1})
