import math

import numpy as np
import pytest

from fhmerge.errors import ValidationError
from fhmerge.symbol import FHParams, fourier_coeffs
from fhmerge.toeplitz import det_path, heine_det, log_det, orth_poly

PI = math.pi

# the cross-check battery: mixed power/jump exponents and separations
BATTERY = [
    FHParams(0.25, 0.25, t=0.0),
    FHParams(0.5, 0.5, t=PI / 2.0),
    FHParams(-0.2, 0.25, t=0.3),
    FHParams(0.3, 0.3, beta1=0.4j, beta2=0.4j, t=0.3),
    FHParams(0.5, -0.2, beta1=0.4j, beta2=0.0, t=PI / 2.0),
]


def test_identity_matrix():
    tab = fourier_coeffs(FHParams(0.0, 0.0), 8)
    ld = log_det(tab, 6)
    assert abs(ld.log_abs) < 1e-13 and abs(ld.arg) < 1e-13


def test_d1_d2_abs_z_minus_one():
    tab = fourier_coeffs(FHParams(0.25, 0.25), 4)
    d1 = log_det(tab, 1)
    d2 = log_det(tab, 2)
    assert abs(np.exp(d1.log) - 4.0 / PI) < 1e-10
    assert abs(np.exp(d2.log) - 128.0 / (9.0 * PI**2)) < 1e-10


def test_beta_shift_scaling():
    # shifting (beta1, beta2) -> (beta1+k, beta2-k) scales D_n by e^{-2iknt}
    p = FHParams(0.3, 0.3, beta1=0.1 + 0.2j, beta2=-0.1j, t=0.7)
    for n in (4, 16):
        for k in (1, -1):
            base = log_det(fourier_coeffs(p, n - 1), n).log
            shifted = log_det(
                fourier_coeffs(p.with_betas(p.beta1 + k, p.beta2 - k), n - 1), n
            ).log
            expect = base - 2j * k * n * p.t
            assert abs(np.exp(shifted) - np.exp(expect)) < 1e-9 * abs(np.exp(base))


def test_heine_trivial():
    assert abs(heine_det(FHParams(0.0, 0.0), 1) - 1.0) < 1e-12


def test_heine_two_by_two_values():
    # f = |z-1|: D_2 = 128/(9 pi^2); f = 2|cos|: D_2 = f0^2 - |f1|^2 = 16/pi^2
    assert abs(heine_det(FHParams(0.25, 0.25), 2) - 128.0 / (9.0 * PI**2)) < 1e-9
    assert abs(heine_det(FHParams(0.5, 0.5, t=PI / 2.0), 2) - 16.0 / PI**2) < 1e-9


@pytest.mark.parametrize("idx", range(len(BATTERY)))
def test_heine_battery(idx):
    p = BATTERY[idx]
    tab = fourier_coeffs(p, 4)
    for n in (1, 2, 3):
        hd = heine_det(p, n)
        ld = np.exp(log_det(tab, n).log)
        assert abs(hd - ld) <= 1e-6 * max(1.0, abs(ld))


def test_positivity_real_symbols():
    for p in (FHParams(0.25, 0.25), FHParams(0.3, 0.3, beta1=0.2j, beta2=0.2j, t=0.4)):
        tab = fourier_coeffs(p, 24)
        for n in (3, 10, 24):
            assert abs(log_det(tab, n).arg) < 1e-8


def test_szego_baseline():
    p = FHParams(0.0, 0.0, v_coeffs={1: 0.5, -1: 0.5})
    tab = fourier_coeffs(p, 32)
    assert abs(log_det(tab, 32).log_abs - 0.25) < 1e-6


def test_orth_poly_trivial():
    tab = fourier_coeffs(FHParams(0.0, 0.0), 6)
    op = orth_poly(tab, 4)
    assert abs(op.chi - 1.0) < 1e-12
    np.testing.assert_allclose(op.phi_coeffs, np.eye(5)[-1], atol=1e-12)


def test_orth_poly_chi0():
    tab = fourier_coeffs(FHParams(0.25, 0.25), 4)
    op = orth_poly(tab, 0)
    assert abs(op.chi - (4.0 / PI) ** -0.5) < 1e-10


def test_orth_poly_chi_consistency():
    # chi_n^2 = D_n / D_{n+1}
    p = FHParams(0.3, 0.3, beta1=0.1j, beta2=0.3j, t=0.8)
    tab = fourier_coeffs(p, 8)
    for n in (0, 2, 5):
        op = orth_poly(tab, n)
        want = np.exp(log_det(tab, n).log - log_det(tab, n + 1).log)
        assert abs(op.chi_sq - want) < 1e-8 * abs(want)


def test_orth_poly_orthogonality_residuals():
    p = FHParams(0.25, 0.25, t=0.6)
    tab = fourier_coeffs(p, 8)
    n = 5
    op = orth_poly(tab, n)
    for k in range(n + 1):
        val = sum(op.phi_coeffs[j] * tab[k - j] for j in range(n + 1))
        want = 1.0 / op.chi if k == n else 0.0
        assert abs(val - want) < 1e-9


def test_orth_poly_recurrence():
    # chi_n hat_n(w) = chi_{n-1} w hat_{n-1}(w) + hat_n(0) * reversed phi_n
    tab = fourier_coeffs(FHParams(0.25, 0.25), 6)
    op3 = orth_poly(tab, 3)
    op2 = orth_poly(tab, 2)
    lhs = op3.chi * op3.hat_phi_coeffs
    rhs = np.concatenate([[0.0], op2.chi * op2.hat_phi_coeffs])
    rhs = rhs + op3.hat_phi_at_0 * op3.phi_coeffs[::-1]
    np.testing.assert_allclose(lhs, rhs, atol=1e-10)


def test_det_path_positive_symbol():
    p = FHParams(0.25, 0.25)
    path = det_path(p, 4, [0.1, 0.2, 0.3])
    assert all(abs(ld.arg) < 1e-8 for ld in path)


def test_det_path_continuity_and_endpoint():
    p = FHParams(0.3, 0.3, beta1=0.3j, beta2=0.3j)
    grid = np.linspace(0.01, 0.5, 50)
    path = det_path(p, 8, grid)
    args = np.array([ld.arg for ld in path])
    assert np.max(np.abs(np.diff(args))) < PI
    single = log_det(fourier_coeffs(p.with_t(0.5), 7), 8)
    assert abs(math.remainder(path[-1].arg - single.arg, 2.0 * PI)) < 1e-9
    assert abs(path[-1].log_abs - single.log_abs) < 1e-10


def test_det_path_constant_factor():
    # scaling the symbol by c multiplies D_n by c^n
    c = np.exp(1j * PI / 7.0)
    v0 = complex(np.log(c))
    p = FHParams(0.25, 0.25, t=0.4)
    pc = FHParams(0.25, 0.25, t=0.4, v_coeffs={0: v0})
    n = 6
    base = log_det(fourier_coeffs(p, n - 1), n)
    scaled = log_det(fourier_coeffs(pc, n - 1), n)
    assert abs(scaled.log_abs - base.log_abs - n * v0.real) < 1e-9
    assert abs(math.remainder(scaled.arg - base.arg - n * v0.imag, 2.0 * PI)) < 1e-9


def test_log_det_requires_table_size():
    tab = fourier_coeffs(FHParams(0.25, 0.25), 3)
    with pytest.raises(ValidationError):
        log_det(tab, 5)
