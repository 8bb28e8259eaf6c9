"""The Painleve V sigma-transcendent attached to a merging singularity pair.

sigma solves the quartic second-order equation

    s^2 sigma_ss^2 = (sigma - s sigma_s + 2 sigma_s^2)^2
                     - 4 prod_k (sigma_s - theta_k)

on the ray s = -i x, x > 0.  We integrate the once-differentiated
explicit third-order form (no square roots, hence no branch flips); the
quartic relation itself is a first integral of that form, so it is
enforced by checking the residual at every output node and retrying at a
tighter solver tolerance on failure.  Everything downstream (the
transition formula, the integral identity, the r-function of the
shifted-beta determinant ratio) reads from the resulting trajectory.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import rgamma

from .errors import (
    DegenerateDenominatorError,
    NondegeneracyError,
    NumericalError,
    PoleDetectedError,
    ValidationError,
)
from .specfun import log_barnes_g, log_gamma
from .symbol import FHParams

__all__ = [
    "ThetaParams",
    "SigmaTrajectory",
    "RTrajectory",
    "theta_params",
    "tau0",
    "sigma_series_small",
    "sigma_large_asym",
    "integrate_sigma",
    "degenerate_sigma",
    "degenerate_r",
    "r_trajectory",
    "omega_integral",
    "integral_identity_check",
]

_POLE_CAP = 1e6
_X_SERIES_MAX = 1e-2
_X_ASYM_MIN = 10.0


@dataclass(frozen=True)
class ThetaParams:
    theta1: complex
    theta2: complex
    theta3: complex
    theta4: complex

    def as_tuple(self):
        return (self.theta1, self.theta2, self.theta3, self.theta4)


def theta_params(p: FHParams) -> ThetaParams:
    """The four parameters of the quartic sigma-equation."""
    half = p.beta_sum / 2.0
    return ThetaParams(
        theta1=-p.alpha1 + half,
        theta2=p.alpha1 + half,
        theta3=p.alpha2 - half,
        theta4=-p.alpha2 - half,
    )


def sigma_zero(p: FHParams) -> complex:
    """sigma(0) = 2 alpha1 alpha2 - (beta1+beta2)^2 / 2."""
    return 2.0 * p.alpha1 * p.alpha2 - p.beta_sum**2 / 2.0


def _is_negative_integer(z: complex) -> bool:
    return z.imag == 0.0 and z.real < -0.5 and z.real == round(z.real)


def check_nondegeneracy(p: FHParams, merged: bool = True) -> None:
    """Reject alpha_j +/- beta_j in {-1,-2,...} (and merged combinations)."""
    combos = [p.alpha1 + p.beta1, p.alpha1 - p.beta1, p.alpha2 + p.beta2, p.alpha2 - p.beta2]
    if merged:
        a, b = p.alpha1 + p.alpha2, p.beta_sum
        combos += [a + b, a - b]
    for c in combos:
        if _is_negative_integer(c):
            raise NondegeneracyError(f"parameter combination {c} hits a negative integer")


def tau0(p: FHParams) -> complex:
    """Coefficient of |s|^(1+2(alpha1+alpha2)) in the small-argument expansion."""
    a = p.alpha1 + p.alpha2
    b = p.beta_sum
    two_a = 2.0 * a
    if two_a.imag == 0.0 and two_a.real >= 0.0 and two_a.real == round(two_a.real):
        raise NondegeneracyError("2(alpha1+alpha2) in N u {0}: no tau0 term (half-integer case)")
    check_nondegeneracy(p)
    sin2a = cmath.sin(2.0 * cmath.pi * a)
    bracket = (
        cmath.exp(1j * cmath.pi * (p.alpha1 - p.alpha2)) * cmath.sin(cmath.pi * (a + b)) / sin2a
        + cmath.exp(-1j * cmath.pi * (p.alpha1 - p.alpha2)) * cmath.sin(cmath.pi * (a - b)) / sin2a
        - cmath.exp(1j * cmath.pi * (p.beta1 - p.beta2))
    )
    lg = (
        log_gamma(1.0 + a + b)
        + log_gamma(1.0 + a - b)
        - 2.0 * log_gamma(1.0 + two_a)
        + log_gamma(1.0 + 2.0 * p.alpha1)
        + log_gamma(1.0 + 2.0 * p.alpha2)
        - log_gamma(2.0 + two_a)
    )
    return -cmath.exp(lg) / (2.0 * cmath.pi) * bracket


def _series_linear_coeff(p: FHParams) -> complex:
    a = p.alpha1 + p.alpha2
    return (p.alpha1 - p.alpha2) * p.beta_sum / (2.0 * a) if a != 0.0 else 0.0


def _series_integer_coeffs(p: FHParams):
    """(a2, a3): the s^2 and s^3 coefficients forced by the equation.

    Substituting the expansion into the quartic relation determines every
    integer power beyond the stated ones; the s^2 order has a two-fold
    root and the trajectory matching the determinants takes the nonzero
    branch.  Both blow up at the half-integer resonances 2(a1+a2) in N.
    """
    a = p.alpha1 + p.alpha2
    b = p.beta_sum
    prod = p.alpha1 * p.alpha2
    a2 = prod * (a - b) * (a + b) / (a**2 * (2.0 * a - 1.0) * (2.0 * a + 1.0))
    a3 = (
        -prod
        * (p.alpha1 - p.alpha2)
        * b
        * (a - b)
        * (a + b)
        / (2.0 * a**3 * (a - 1.0) * (a + 1.0) * (2.0 * a - 1.0) * (2.0 * a + 1.0))
    )
    return a2, a3


def sigma_series_small(p: FHParams, x: float):
    """(sigma, d sigma/dx, d^2 sigma/dx^2) at s = -ix from the x -> 0 expansion.

    Carries the fractional tau0 |s|^(1+2a) term plus the integer s^2, s^3
    coefficients the equation forces, so the second derivative is accurate
    at the initialization point.  Valid for x below ~1e-2; raises outside.
    In the half-integer case 2(alpha1+alpha2) in N u {0} only the constant
    sigma(0) is available.
    """
    if x > _X_SERIES_MAX:
        raise ValidationError(f"series radius exceeded: x = {x} > {_X_SERIES_MAX}")
    a = p.alpha1 + p.alpha2
    s0 = sigma_zero(p)
    try:
        t0 = tau0(p)
    except NondegeneracyError:
        return s0, 0.0 + 0.0j, 0.0 + 0.0j
    lin = _series_linear_coeff(p)
    a2, a3 = _series_integer_coeffs(p)
    xp = x ** (2.0 * a)  # complex exponent allowed; x > 0
    u = s0 + 1j * lin * x + t0 * xp * x - a2 * x * x + 1j * a3 * x**3
    du = 1j * lin + t0 * (1.0 + 2.0 * a) * xp - 2.0 * a2 * x + 3j * a3 * x * x
    d2u = t0 * (1.0 + 2.0 * a) * (2.0 * a) * xp / x - 2.0 * a2 + 6j * a3 * x
    return u, du, d2u


def _gamma_connection(p: FHParams, x: float) -> complex:
    """The oscillatory gamma(s) entering the large-argument expansion."""
    if (p.beta1 - p.beta2).real >= 0.0:
        expo = 2.0 * (-1.0 + p.beta1 - p.beta2)
        phase = cmath.exp(-1j * x) * cmath.exp(1j * cmath.pi * (p.alpha1 + p.alpha2))
        ratio = cmath.exp(log_gamma(1.0 + p.alpha1 - p.beta1) + log_gamma(1.0 + p.alpha2 + p.beta2))
        ratio *= complex(rgamma(p.alpha1 + p.beta1)) * complex(rgamma(p.alpha2 - p.beta2))
    else:
        expo = 2.0 * (-1.0 + p.beta2 - p.beta1)
        phase = cmath.exp(1j * x) * cmath.exp(-1j * cmath.pi * (p.alpha1 + p.alpha2))
        ratio = cmath.exp(log_gamma(1.0 + p.alpha2 - p.beta2) + log_gamma(1.0 + p.alpha1 + p.beta1))
        ratio *= complex(rgamma(p.alpha2 + p.beta2)) * complex(rgamma(p.alpha1 - p.beta1))
    return 0.25 * (x / 2.0) ** expo * phase * ratio


def sigma_large_asym(p: FHParams, x: float) -> complex:
    """Connection asymptotics of sigma at s = -ix for large x.

    Requires the seminorm |Re(beta1-beta2)| < 1; the error of the formula
    is O(x^(-1+seminorm)).
    """
    if p.seminorm >= 1.0:
        raise ValidationError("large-argument form needs seminorm < 1")
    s = -1j * x
    g = _gamma_connection(p, x)
    sign = 1.0 if (p.beta1 - p.beta2).real >= 0.0 else -1.0
    return (p.beta2 - p.beta1) * s / 2.0 - (p.beta1 - p.beta2) ** 2 / 2.0 + sign * s * g / (1.0 + g)


# ---------------------------------------------------------------------------
# ODE integration along paths in the s-plane


def _sigma_rhs_factory(thetas):
    th1, th2, th3, th4 = thetas

    def rhs(s, sigma, dsig, d2sig):
        # third-order explicit form: d/ds of the quartic relation,
        # divided through by 2 s^2 sigma_ss (the division cancels exactly)
        aa = sigma - s * dsig + 2.0 * dsig * dsig
        f1, f2, f3, f4 = dsig - th1, dsig - th2, dsig - th3, dsig - th4
        pprime = 4.0 * (f2 * f3 * f4 + f1 * f3 * f4 + f1 * f2 * f4 + f1 * f2 * f3)
        return (2.0 * aa * (4.0 * dsig - s) - pprime) / (2.0 * s * s) - d2sig / s

    return rhs


def sigma_residual(p: FHParams, s, sigma, dsig, d2sig):
    """Scaled residual of the quartic relation at one point."""
    th1, th2, th3, th4 = theta_params(p).as_tuple()
    aa = sigma - s * dsig + 2.0 * dsig * dsig
    quart = 4.0 * (dsig - th1) * (dsig - th2) * (dsig - th3) * (dsig - th4)
    res = s * s * d2sig * d2sig - aa * aa + quart
    return abs(res) / (1.0 + abs(sigma) ** 2 + abs(s * dsig) ** 2)


@dataclass
class _Segment:
    s_a: complex
    s_b: complex
    sol: object  # solve_ivp result with dense output over tau in [0, L]

    @property
    def length(self) -> float:
        return abs(self.s_b - self.s_a)

    def on_ray(self) -> bool:
        return abs(self.s_a.real) < 1e-12 and abs(self.s_b.real) < 1e-12


@dataclass
class SigmaTrajectory:
    """sigma and derivatives on a grid of x = |s| along the ray s = -ix.

    mode is one of 'series-init', 'data-init', 'degenerate'.  branch_gaps
    lists x-intervals bridged by a detour around a detected pole; inside
    them sigma values are not available and omega follows the detour
    path (a branch choice of the determinant logarithm).
    """

    params: FHParams
    x_grid: np.ndarray
    sigma: np.ndarray
    sigma_x: np.ndarray
    sigma_xx: np.ndarray
    omega: np.ndarray
    residual: np.ndarray
    sigma0: complex
    mode: str
    x0: float
    omega_head: complex
    init_bias: float
    branch_gaps: list = field(default_factory=list)
    omega_offset: complex = 0.0
    _segments: list = field(default_factory=list, repr=False)

    def _locate(self, x: float):
        x_top = max(max(abs(seg.s_a.imag), abs(seg.s_b.imag)) for seg in self._segments)
        if not (self.x0 <= x <= x_top + 1e-12):
            raise ValidationError(f"x = {x} outside trajectory range [{self.x0}, {x_top}]")
        for lo, hi in self.branch_gaps:
            if lo < x < hi:
                raise PoleDetectedError(x)
        for seg in self._segments:
            if not seg.on_ray():
                continue
            xa, xb = abs(seg.s_a.imag), abs(seg.s_b.imag)
            if min(xa, xb) - 1e-12 <= x <= max(xa, xb) + 1e-12:
                # tau measures arclength from s_a regardless of direction
                return seg, min(max(abs(x - xa), 0.0), seg.length)
        raise ValidationError(f"x = {x} not covered by any ray segment")

    def eval(self, x: float):
        """(sigma, sigma_x, sigma_xx) at x, from dense solver output."""
        if self.mode == "degenerate":
            return 0.0 + 0.0j, 0.0 + 0.0j, 0.0 + 0.0j
        if x < self.x0:
            return sigma_series_small(self.params, x)
        seg, tau = self._locate(x)
        sig, dsig, d2sig, _ = seg.sol.sol(tau)
        # convert s-derivatives to x-derivatives on the ray (ds/dx = -i)
        return sig, -1j * dsig, -d2sig

    def sigma_at(self, x: float) -> complex:
        return self.eval(x)[0]

    def q_at(self, x: float) -> complex:
        """The (1,1) monodromy coefficient recovered from sigma."""
        p = self.params
        u = self.sigma_at(x)
        const = p.alpha1**2 + p.alpha2**2 - p.beta_sum**2 / 2.0
        return (2.0 / x) * (u - 1j * x * (p.beta1 - p.beta2) / 2.0 + const)

    def omega_at(self, x: float) -> complex:
        """int_0^{-ix} (sigma(s) - sigma(0)) ds/s along the trajectory path."""
        if self.mode == "degenerate":
            return 0.0 + 0.0j
        if x <= self.x0:
            return self._omega_head_at(x)
        seg, tau = self._locate(x)
        # the integral state is carried across segments, so the dense
        # output of the containing segment is already cumulative; for
        # backward (connection-initialized) runs omega_offset rebases the
        # accumulated value to the x0 end of the ray
        return self.omega_head + seg.sol.sol(tau)[3] - self.omega_offset

    def _omega_head_at(self, x: float) -> complex:
        return _omega_series_head(self.params, x)

    @property
    def q(self) -> np.ndarray:
        return np.array([self.q_at(x) for x in self.x_grid])

    def to_csv(self, path, r_traj=None):
        """Dump x, sigma, sigma_x, r, residual rows."""
        with open(path, "w") as fh:
            fh.write("x,re_sigma,im_sigma,re_sigma_x,im_sigma_x,re_r,im_r,residual\n")
            for i, x in enumerate(self.x_grid):
                r = r_traj.r_at(x) if r_traj is not None else 0.0 + 0.0j
                fh.write(
                    f"{x:.12g},{self.sigma[i].real:.12g},{self.sigma[i].imag:.12g},"
                    f"{self.sigma_x[i].real:.12g},{self.sigma_x[i].imag:.12g},"
                    f"{r.real:.12g},{r.imag:.12g},{self.residual[i]:.3e}\n"
                )


def _integrate_path(p, waypoints, y0, rtol, atol):
    """Integrate (sigma, sigma_s, sigma_ss, omega) along straight segments."""
    rhs3 = _sigma_rhs_factory(theta_params(p).as_tuple())
    s0c = sigma_zero(p)
    segments = []
    y = np.asarray(y0, dtype=complex)
    for s_a, s_b in zip(waypoints[:-1], waypoints[1:]):
        length = abs(s_b - s_a)
        if length == 0.0:
            continue
        direction = (s_b - s_a) / length

        def f(tau, yv, s_a=s_a, direction=direction):
            s = s_a + tau * direction
            sig, dsig, d2sig = yv[0], yv[1], yv[2]
            return direction * np.array(
                [dsig, d2sig, rhs3(s, sig, dsig, d2sig), (sig - s0c) / s], dtype=complex
            )

        def blowup(tau, yv):
            return abs(yv[0]) - _POLE_CAP

        blowup.terminal = True
        sol = solve_ivp(
            f,
            (0.0, length),
            y,
            method="DOP853",
            rtol=rtol,
            atol=atol,
            dense_output=True,
            events=blowup,
        )
        if not sol.success and sol.status != 1:
            raise NumericalError(f"sigma integration failed: {sol.message}")
        if sol.status == 1:  # blow-up event fired
            s_pole = s_a + sol.t_events[0][0] * direction
            raise PoleDetectedError(abs(s_pole.imag))
        segments.append(_Segment(s_a=s_a, s_b=s_b, sol=sol))
        y = sol.y[:, -1]
    return segments


def _default_grid(x0: float, x_max: float) -> np.ndarray:
    if x0 >= 1.0:
        return np.unique(np.concatenate([np.arange(x0, x_max + 1e-9, 0.2), [x_max]]))
    head = np.geomspace(x0, min(1.0, x_max), 25)
    if x_max <= 1.0:
        return head
    tail = np.arange(1.0, x_max + 1e-9, 0.2)
    return np.unique(np.concatenate([head, tail, [x_max]]))


def _asym_init_data(p: FHParams, x: float):
    """(sigma, sigma_x, sigma_xx) at x from the connection asymptotics."""
    h = 1e-4 * x
    vals = [sigma_large_asym(p, x + k * h) for k in (-1, 0, 1)]
    return vals[1], (vals[2] - vals[0]) / (2.0 * h), (vals[2] - 2.0 * vals[1] + vals[0]) / h**2


def _is_pole_free_class(p: FHParams) -> bool:
    return (
        p.alpha1.imag == 0.0
        and p.alpha2.imag == 0.0
        and p.beta1.real == 0.0
        and p.beta2.real == 0.0
    )


def integrate_sigma(
    p: FHParams,
    x0: float = 1e-3,
    x_max: float = 40.0,
    tol: float = 1e-8,
    init: str = "series",
    init_data=None,
    detour: bool = False,
    x_grid=None,
    _rtol: float | None = None,
) -> SigmaTrajectory:
    """Integrate the sigma-equation along s = -ix between x0 and x_max.

    init='series' starts from the small-argument expansion (requires
    2(alpha1+alpha2) not in N u {0}); init='data' takes (sigma, sigma_x,
    sigma_xx) at x0 from init_data, e.g. the determinant-derived oracle;
    init='asym' integrates backward from x_max starting at the connection
    asymptotics, which is the stable direction when the connecting
    solution repels its neighbours under forward integration (strong
    exponents).  For the pole-free class (real alphas, imaginary betas)
    a failed forward pass falls back to 'asym' automatically.  With
    detour=True a detected blow-up is instead bypassed by a rectangular
    excursion into Re s > 0 and recorded in branch_gaps.
    """
    if x0 <= 0.0 or x0 >= x_max:
        raise ValidationError("need 0 < x0 < x_max")
    backward = False
    if init == "series":
        u0, du0, d2u0 = sigma_series_small(p, x0)
        a2 = 2.0 * (p.alpha1 + p.alpha2)
        if a2.imag == 0.0 and a2.real >= 0.0 and a2.real == round(a2.real):
            raise NondegeneracyError(
                "series init unavailable for 2(alpha1+alpha2) in N u {0}; use data init"
            )
        mode = "series-init"
        # truncation of the expansion enters as an O(x0^2) bias
        init_bias = x0**2
    elif init == "data":
        if init_data is None:
            raise ValidationError("init='data' requires init_data=(sigma, sigma_x, sigma_xx)")
        u0, du0, d2u0 = (complex(v) for v in init_data)
        mode = "data-init"
        init_bias = float("nan")
    elif init == "asym":
        u0, du0, d2u0 = _asym_init_data(p, x_max)
        mode = "asym-init"
        init_bias = 1.0 / x_max
        backward = True
    else:
        raise ValidationError(f"unknown init {init!r}")

    # state in s-variables: sigma_s = i u', sigma_ss = -u''
    y0 = [u0, 1j * du0, -d2u0, 0.0]
    rtol = min(1e-10, tol * 1e-2) if _rtol is None else _rtol
    atol = rtol

    if backward:
        waypoints = [-1j * x_max, -1j * x0]
    else:
        waypoints = [-1j * x0, -1j * x_max]
    gaps = []
    for _attempt in range(8):
        try:
            segments = _integrate_path(p, waypoints, y0, rtol, atol)
            break
        except PoleDetectedError as exc:
            if init == "series" and not detour and _is_pole_free_class(p):
                # runaway off the connecting solution, not a true pole:
                # switch to the backward (contracting) direction
                return integrate_sigma(
                    p, x0=x0, x_max=x_max, tol=tol, init="asym",
                    detour=False, x_grid=x_grid, _rtol=_rtol,
                )
            if not detour:
                raise
            xp = exc.x_location
            rho = max(0.5, 0.05 * xp)
            lo, hi = xp - rho, xp + rho
            gaps.append((lo, hi))
            idx = waypoints.index(-1j * x_max)
            waypoints[idx:idx] = [-1j * lo, -1j * lo + rho, -1j * hi + rho, -1j * hi]
            # drop duplicate ray points while keeping order
            seen = []
            for w in waypoints:
                if not seen or abs(w - seen[-1]) > 1e-15:
                    seen.append(w)
            waypoints = seen
    else:
        raise NumericalError("too many pole detours")

    omega_head = _omega_series_head(p, x0)
    omega_offset = complex(segments[-1].sol.sol(segments[-1].length)[3]) if backward else 0.0
    traj = SigmaTrajectory(
        params=p,
        x_grid=np.array([]),
        sigma=np.array([]),
        sigma_x=np.array([]),
        sigma_xx=np.array([]),
        omega=np.array([]),
        residual=np.array([]),
        sigma0=sigma_zero(p),
        mode=mode,
        x0=x0,
        omega_head=omega_head,
        init_bias=init_bias,
        branch_gaps=gaps,
        omega_offset=omega_offset,
        _segments=segments,
    )
    grid = _default_grid(x0, x_max) if x_grid is None else np.asarray(x_grid, dtype=float)
    grid = np.array([x for x in grid if not any(lo < x < hi for lo, hi in gaps)])
    sig = np.empty(len(grid), dtype=complex)
    sig_x = np.empty_like(sig)
    sig_xx = np.empty_like(sig)
    om = np.empty_like(sig)
    res = np.empty(len(grid))
    for i, x in enumerate(grid):
        sig[i], sig_x[i], sig_xx[i] = traj.eval(x)
        om[i] = traj.omega_at(x)
        res[i] = sigma_residual(p, -1j * x, sig[i], 1j * sig_x[i], -sig_xx[i])
    traj.x_grid = grid
    traj.sigma = sig
    traj.sigma_x = sig_x
    traj.sigma_xx = sig_xx
    traj.omega = om
    traj.residual = res

    if (
        init == "series"
        and not gaps
        and _is_pole_free_class(p)
        and p.seminorm < 1.0
        and x_max >= _X_ASYM_MIN
    ):
        # connection check: a forward pass that quietly left the
        # connecting solution shows up as an O(1) mismatch at the far end
        asym = sigma_large_asym(p, x_max)
        if abs(traj.sigma_at(x_max) - asym) > 0.5 * (1.0 + abs(asym)):
            return integrate_sigma(
                p, x0=x0, x_max=x_max, tol=tol, init="asym",
                detour=False, x_grid=x_grid, _rtol=_rtol,
            )

    worst = float(np.max(res)) if len(res) else 0.0
    if worst > 10.0 * tol:
        if rtol > 1e-12:
            return integrate_sigma(
                p, x0=x0, x_max=x_max, tol=tol, init=init,
                init_data=init_data, detour=detour, x_grid=x_grid, _rtol=1e-12,
            )
        raise NumericalError(f"quartic-relation residual {worst:.2e} exceeds 10*tol")
    return traj


def _omega_series_head(p: FHParams, x0: float) -> complex:
    """int_0^{x0} (sigma - sigma(0)) dy/y from the series expansion."""
    try:
        t0 = tau0(p)
    except NondegeneracyError:
        return 0.0 + 0.0j
    a = p.alpha1 + p.alpha2
    lin = _series_linear_coeff(p)
    a2, a3 = _series_integer_coeffs(p)
    return (
        1j * lin * x0
        + t0 * x0 ** (1.0 + 2.0 * a) / (1.0 + 2.0 * a)
        - a2 * x0**2 / 2.0
        + 1j * a3 * x0**3 / 3.0
    )


_DEGENERATE = FHParams(0.5, 0.5, 0.5, 0.5, 0.1)  # t is irrelevant here


def _is_degenerate_params(p: FHParams) -> bool:
    return (
        p.alpha1 == 0.5 and p.alpha2 == 0.5 and p.beta1 == 0.5 and p.beta2 == 0.5
    )


def degenerate_sigma(x0: float = 1e-3, x_max: float = 40.0) -> SigmaTrajectory:
    """The explicit solution sigma == 0 at alpha1=alpha2=beta1=beta2=1/2."""
    grid = _default_grid(x0, x_max)
    zeros = np.zeros(len(grid), dtype=complex)
    return SigmaTrajectory(
        params=_DEGENERATE,
        x_grid=grid,
        sigma=zeros.copy(),
        sigma_x=zeros.copy(),
        sigma_xx=zeros.copy(),
        omega=zeros.copy(),
        residual=np.zeros(len(grid)),
        sigma0=0.0,
        mode="degenerate",
        x0=x0,
        omega_head=0.0,
        init_bias=0.0,
    )


def degenerate_r(x: float) -> float:
    """r(-ix) = -sin(x/2) / (x/2)^2 in the degenerate case."""
    if x == 0.0:
        return -1.0
    return -math.sin(x / 2.0) / (x / 2.0) ** 2


@dataclass
class RTrajectory:
    """The (1,2) monodromy coefficient r on the trajectory grid."""

    x_grid: np.ndarray
    r: np.ndarray
    matched_at: float
    flagged: np.ndarray  # nodes where the identity denominator was floored

    def r_at(self, x: float) -> complex:
        if not (self.x_grid[0] <= x <= self.x_grid[-1]):
            raise ValidationError(f"x = {x} outside r trajectory range")
        re = np.interp(x, self.x_grid, self.r.real)
        im = np.interp(x, self.x_grid, self.r.imag)
        return complex(re, im)


def r_small_s(p: FHParams, x: float) -> complex:
    """Leading small-argument form of r at s = -ix."""
    a = p.alpha1 + p.alpha2
    b = p.beta_sum
    lg = log_gamma(1.0 + a - b) if not _is_negative_integer(1.0 + a - b) else None
    if lg is None:
        raise NondegeneracyError("r small-argument form degenerate")
    val = cmath.exp(lg) * complex(rgamma(a + b))
    phase = cmath.exp(1j * cmath.pi * (p.alpha1 - p.alpha2 - 3.0 * p.beta1 - p.beta2))
    return -2.0 / x * cmath.exp(-1j * x / 2.0) * phase * val


def r_large_s(p: FHParams, x: float) -> complex:
    """Two-term large-argument form of r at s = -ix (Re beta1 = Re beta2)."""
    term1 = (
        -2.0
        * x ** (-1.0 - p.beta2)
        * cmath.exp(-1j * x / 2.0)
        * cmath.exp(1j * cmath.pi * (p.alpha1 - 3.0 * p.beta1 - p.beta2))
        * cmath.exp(log_gamma(1.0 + p.alpha1 - p.beta1))
        * complex(rgamma(p.alpha1 + p.beta1))
    )
    term2 = (
        -2.0
        * x ** (-1.0 - p.beta1)
        * cmath.exp(1j * x / 2.0)
        * cmath.exp(-1j * cmath.pi * (p.alpha2 + 3.0 * p.beta1 + p.beta2))
        * cmath.exp(log_gamma(1.0 + p.alpha2 - p.beta2))
        * complex(rgamma(p.alpha2 + p.beta2))
    )
    return term1 + term2


def _lax_point(p: FHParams, traj: SigmaTrajectory, x: float, u_prev=None):
    """Auxiliary Lax variables (U, v, v_s, W) at x, with U branch-tracked.

    v is fixed by sigma_s; U solves the quadratic the sigma-equation
    forces on the residue variables.  Of the two roots the one continuing
    u_prev is taken (nearest-neighbour tracking); with u_prev=None both
    roots are returned for the caller to select.
    """
    sig, du, d2u = traj.eval(x)
    s = -1j * x
    sig_s = 1j * du
    v = -sig_s + p.beta_sum / 2.0 - p.alpha1
    v_s = d2u  # v_s = -sigma_ss and sigma_ss = -d2u on the ray
    w_cap = sig - s * sig_s + p.alpha1**2 + p.alpha2**2 - p.beta_sum**2 / 2.0
    a_minus = p.alpha1 - p.alpha2 - p.beta_sum
    a_plus = p.alpha1 + p.alpha2 - p.beta_sum
    qa = v * (v + a_plus)
    qb = -(w_cap + (v + a_minus) * (v + a_plus) + v * (v + 2.0 * p.alpha1))
    qc = (v + a_minus) * (v + 2.0 * p.alpha1)
    if abs(qa) < 1e-14 * (1.0 + abs(qb) + abs(qc)):
        if abs(qb) < 1e-14 * (1.0 + abs(qc)):
            raise DegenerateDenominatorError(
                "Lax quadratic degenerates; use degenerate_r"
            )
        roots = (-qc / qb,)
    else:
        disc = cmath.sqrt(qb * qb - 4.0 * qa * qc)
        roots = ((-qb + disc) / (2.0 * qa), (-qb - disc) / (2.0 * qa))
    if u_prev is None:
        return roots, v, v_s, s
    u_sel = min(roots, key=lambda r_: abs(r_ - u_prev))
    return u_sel, v, v_s, s


def _r_log_derivative_at(p: FHParams, u_lax, v, v_s, s):
    """(d ln r / dx, numf) from the compatibility system at one point."""
    a_minus = p.alpha1 - p.alpha2 - p.beta_sum
    su_s = (
        s * u_lax
        - 2.0 * v * (u_lax - 1.0) ** 2
        + (u_lax - 1.0)
        * (u_lax * (-p.alpha1 - p.alpha2 + p.beta_sum) + 3.0 * p.alpha1 - p.alpha2 - p.beta_sum)
    )
    sy_y = (
        (v + 2.0 * p.alpha1) / u_lax
        - 2.0 * v
        - 2.0 * p.alpha1
        - s / 2.0
        + u_lax * v
    )
    numf = v * (1.0 - u_lax) + a_minus
    dnumf = v_s * (1.0 - u_lax) - v * su_s / s
    # d ln r/dx = -i [ y_s/y - 1/s + numf_s/numf ] = y_part - 1/x + ...;
    # the -1/x and numf pieces integrate in closed form, so the bounded
    # y_part is returned separately for quadrature
    y_part = -1j * sy_y / s
    return y_part, numf, -1j * dnumf


def r_log_derivative(p: FHParams, traj: SigmaTrajectory, x: float, u_prev=None):
    """d ln r / dx at x from sigma via the compatibility system.

    u_prev selects the branch of the auxiliary variable (nearest root);
    without it the small-argument branch is chosen.  Returns (value,
    u_lax) so callers can continue the branch.
    """
    if u_prev is None:
        roots, v, v_s, s = _lax_point(p, traj, x)
        best = None
        target = -1.0 / x - 0.5j  # log-derivative of the small-x closed form
        for root in roots:
            y_part, numf, dnumf = _r_log_derivative_at(p, root, v, v_s, s)
            val = y_part - 1.0 / x + dnumf / numf
            if best is None or abs(val - target) < abs(best[0] - target):
                best = (val, root)
        return best
    u_lax, v, v_s, s = _lax_point(p, traj, x, u_prev)
    y_part, numf, dnumf = _r_log_derivative_at(p, u_lax, v, v_s, s)
    return y_part - 1.0 / x + dnumf / numf, u_lax


def r_trajectory(
    p: FHParams,
    traj: SigmaTrajectory,
    step: float = 0.01,
) -> RTrajectory:
    """r(s) on the trajectory by integrating its logarithmic derivative.

    The derivative comes from the compatibility system of the associated
    linear problem; its log-singular part (vanishing of the r-numerator,
    i.e. zeros of r) is integrated in closed form so sign changes of r
    are crossed exactly.  The multiplicative constant is matched to the
    small-argument form at the trajectory start.  Nodes where the
    numerator is below 1e-6 (r indistinguishable from 0) are flagged.
    """
    if _is_degenerate_params(p):
        grid = traj.x_grid
        return RTrajectory(
            x_grid=grid,
            r=np.array([degenerate_r(x) for x in grid], dtype=complex),
            matched_at=traj.x0,
            flagged=np.zeros(len(grid), dtype=bool),
        )
    x0, x_max = traj.x0, float(traj.x_grid[-1])
    n_steps = max(int(math.ceil((x_max - x0) / step)), 8)
    xs = np.linspace(x0, x_max, n_steps + 1)

    (_, u_lax) = r_log_derivative(p, traj, x0)
    y_part = np.empty(len(xs), dtype=complex)
    numf = np.empty(len(xs), dtype=complex)
    du_dx = 0.0 + 0.0j
    for i, x in enumerate(xs):
        if i > 0:
            # predictor from the U-equation disambiguates the two quadratic
            # roots near their collision points
            u_pred = u_lax + du_dx * (x - xs[i - 1])
            u_lax, v, v_s, s = _lax_point(p, traj, x, u_pred)
        else:
            _, v, v_s, s = _lax_point(p, traj, x, u_lax)
        su_s = (
            s * u_lax
            - 2.0 * v * (u_lax - 1.0) ** 2
            + (u_lax - 1.0)
            * (u_lax * (-p.alpha1 - p.alpha2 + p.beta_sum) + 3.0 * p.alpha1 - p.alpha2 - p.beta_sum)
        )
        du_dx = -1j * su_s / s
        y_part[i], numf[i], _ = _r_log_derivative_at(p, u_lax, v, v_s, s)

    # continuous branch of ln(numf): unwrap the argument along the grid
    ln_numf = np.log(np.abs(numf)) + 1j * np.unwrap(np.angle(numf))

    # quadrature of the bounded part; -1/x and d ln numf are exact
    lnr = np.empty(len(xs), dtype=complex)
    lnr[0] = cmath.log(r_small_s(p, x0)) - ln_numf[0] + math.log(x0)
    for i in range(1, len(xs)):
        lnr[i] = lnr[i - 1] + 0.5 * (y_part[i] + y_part[i - 1]) * (xs[i] - xs[i - 1])
    lnr += ln_numf - np.log(xs)

    r_dense = np.exp(lnr)
    r_grid = np.array(
        [r_dense[np.argmin(np.abs(xs - x))] for x in traj.x_grid], dtype=complex
    )
    floor = 1e-6 * (1.0 + np.max(np.abs(numf)))
    flag_grid = np.array(
        [bool(np.abs(numf[np.argmin(np.abs(xs - x))]) < floor) for x in traj.x_grid]
    )
    return RTrajectory(x_grid=traj.x_grid, r=r_grid, matched_at=x0, flagged=flag_grid)


def omega_integral(traj: SigmaTrajectory, x: float) -> complex:
    """int_0^{-ix} (sigma(s) - sigma(0)) ds/s along the axis (and detours)."""
    return traj.omega_at(x)


def integral_identity_check(p: FHParams, traj: SigmaTrajectory, T: float):
    """Both sides of the global integral identity, evaluated at cutoff T.

    The left side is the finite-T combination plus an oscillatory-tail
    correction computed from the connection asymptotics; the right side
    is the Barnes-G expression.  Returns (lhs, rhs, |lhs - rhs|).
    """
    if T < 20.0:
        raise ValidationError("need T >= 20")
    if p.seminorm >= 1.0:
        raise ValidationError("identity needs seminorm < 1")
    lhs = (
        traj.omega_at(T)
        + 1j * T * (p.beta2 - p.beta1) / 2.0
        + 2.0 * (p.alpha1 * p.alpha2 - p.beta1 * p.beta2) * math.log(T)
    )
    if not _is_degenerate_params(p):
        sign = 1.0 if (p.beta1 - p.beta2).real >= 0.0 else -1.0
        ys = np.arange(T, max(10.0 * T, 2000.0), math.pi / 40.0)
        gs = np.array([_gamma_connection(p, y) for y in ys])
        integrand = -sign * 1j * gs / (1.0 + gs)
        lhs += np.trapezoid(integrand, ys)

    a = p.alpha1 + p.alpha2
    b = p.beta_sum
    rhs = 1j * math.pi * (p.alpha1 * p.beta2 - p.alpha2 * p.beta1)
    rhs -= (
        log_barnes_g(1.0 + a + b)
        + log_barnes_g(1.0 + a - b)
        - log_barnes_g(1.0 + 2.0 * a)
    )
    rhs += (
        log_barnes_g(1.0 + p.alpha1 + p.beta1)
        + log_barnes_g(1.0 + p.alpha1 - p.beta1)
        + log_barnes_g(1.0 + p.alpha2 + p.beta2)
        + log_barnes_g(1.0 + p.alpha2 - p.beta2)
        - log_barnes_g(1.0 + 2.0 * p.alpha1)
        - log_barnes_g(1.0 + 2.0 * p.alpha2)
    )
    return lhs, rhs, abs(lhs - rhs)
