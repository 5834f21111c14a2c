"""Joukowski-airfoil conformal machinery.

The airfoil boundary is the image of the unit circle under Psi(w) = J(a*w + b),
J(zeta) = (zeta + 1/zeta)/2, with a = R*exp(i*theta) and b = 1 - a chosen so a
cusp sits at z = 1.  Everything else in the package is built on the exterior
map Phi (inverse of Psi), the square-root pair (U, V, W) with U = (z-b)/sqrt(V),
and the two-sheeted interior map phi_b.
"""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import BranchError, DomainError, ParameterError, PoleError, SingularityError

_ARC_PROBE = 513  # samples used to place the branch cut of sqrt(V)


class Sheet(enum.Enum):
    PLUS = "plus"    # unbounded sheet: phi_b -> infinity at infinity
    MINUS = "minus"  # bounded sheet: phi_b -> 1 at infinity


@dataclass(frozen=True)
class BranchedValue:
    value: complex
    sheet: Sheet


@dataclass(frozen=True)
class AirfoilParams:
    """Derived constants for one airfoil. Build with params_from()."""

    R: float
    theta: float
    a: complex
    b: complex
    c: complex          # (b + 1/b)/2, the sqrt(V) branch point
    capacity: float     # logarithmic capacity |a|/2
    cut_angle: float    # direction of the sqrt(V) cut ray out of c
    # phase bookkeeping for the sqrt(V) branch (see _sqrt_v)
    _rot: complex = field(repr=False, default=1.0 + 0j)
    _pref: complex = field(repr=False, default=1.0 + 0j)
    _sigma: complex = field(repr=False, default=1.0 + 0j)

    @property
    def rcos(self) -> float:
        return self.R * np.cos(self.theta)

    @property
    def is_real(self) -> bool:
        return self.theta == 0.0


def _cut_angle(b: complex, c: complex) -> float:
    # place the cut ray from c inside the largest angular gap left free by the
    # limit arc *and* by 1/b (U' must be well-defined at 1/b)
    if abs(b.imag) < 1e-14:
        return np.pi
    rho = np.linspace(0.0, 1.0, _ARC_PROBE)
    zp, zm = arc_candidates_raw(b, rho)
    pts = np.concatenate([zp, zm, [1.0 / b]])
    ang = np.sort(np.angle(pts - c) % (2 * np.pi))
    gaps = np.diff(np.concatenate([ang, [ang[0] + 2 * np.pi]]))
    i = int(np.argmax(gaps))
    return float((ang[i] + gaps[i] / 2) % (2 * np.pi))


def params_from(R: float, theta: float = 0.0) -> AirfoilParams:
    """Validate (R, theta) and precompute the derived constants.

    Requires R > 1, |theta| < pi/2 and the cusp condition R*cos(theta) > 1.
    """
    R = float(R)
    theta = float(theta)
    if not np.isfinite(R) or not np.isfinite(theta):
        raise ParameterError(f"non-finite parameters R={R} theta={theta}")
    if not abs(theta) < np.pi / 2:
        raise ParameterError(f"theta must lie in (-pi/2, pi/2), got {theta}")
    if R <= 1.0:
        raise ParameterError(f"R must exceed 1, got {R}")
    if R * np.cos(theta) <= 1.0:
        raise ParameterError(
            f"cusp condition R*cos(theta) > 1 fails: R*cos(theta) = {R * np.cos(theta)}"
        )
    a = R * np.exp(1j * theta)
    b = 1.0 - a
    c = (b + 1.0 / b) / 2.0
    delta = _cut_angle(b, c)
    rot = np.exp(1j * (delta - np.pi))
    pref = np.sqrt(-2.0 * b * rot)
    # normalize so sqrt(V)(1) = 1 - b exactly; |sigma| = 1 since -2b(1-c) = (1-b)^2
    sigma = (1.0 - b) / (pref * np.sqrt((1.0 - c) / rot))
    return AirfoilParams(
        R=R, theta=theta, a=complex(a), b=complex(b), c=complex(c),
        capacity=abs(a) / 2.0, cut_angle=delta,
        _rot=complex(rot), _pref=complex(pref), _sigma=complex(sigma),
    )


def _maybe_scalar(x, scalar):
    return complex(x[()]) if scalar else x


def psi(p: AirfoilParams, w):
    """Exterior parametrization Psi(w) = J(a*w + b); pole at w = -b/a."""
    w = np.asarray(w, dtype=complex)
    scalar = w.ndim == 0
    zeta = p.a * w + p.b
    if np.any(np.abs(zeta) < 1e-15 * (1.0 + abs(p.b))):
        raise PoleError(f"psi has a pole at w = {-p.b / p.a}")
    out = (zeta + 1.0 / zeta) / 2.0
    return _maybe_scalar(out, scalar)


def phi(p: AirfoilParams, z):
    """Exterior map Phi: the branch of (z ± sqrt(z^2-1) - b)/a with modulus >= 1.

    Raises DomainError strictly inside the airfoil; points within 1e-12 of the
    boundary return the unimodular boundary value. Phi(1) = 1 (the cusp).
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    s = np.sqrt(z - 1.0) * np.sqrt(z + 1.0)   # cut on [-1, 1] only
    wp = (z + s - p.b) / p.a
    wm = (z - s - p.b) / p.a
    w = np.where(np.abs(wp) >= np.abs(wm), wp, wm)
    r = np.abs(w)
    if np.any(r < 1.0 - 1e-12):
        bad = np.asarray(z)[r < 1.0 - 1e-12].ravel()
        raise DomainError(f"point(s) inside the airfoil, e.g. z = {bad[0]}")
    w = np.where(r < 1.0, w / np.where(r == 0, 1.0, r), w)  # boundary grace band
    return _maybe_scalar(w, scalar)


def _sqrt_v(p: AirfoilParams, z):
    # branch of sqrt(V) = sqrt(-2b (z - c)) cut along the ray angle cut_angle
    # from c, normalized so sqrt(V)(1) = 1 - b
    return p._sigma * p._pref * np.sqrt((z - p.c) / p._rot)


def uvw(p: AirfoilParams, z):
    """Return (U, V, W): V = b^2+1-2bz, W = z-b, U = W/sqrt(V) with U(1) = 1."""
    u, v, w, _ = uvw4(p, z)
    return u, v, w


def uvw4(p: AirfoilParams, z):
    """Like uvw() but also returns the branch-consistent sqrt(V)."""
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    if np.any(np.abs(z - p.c) < 1e-14 * (1.0 + abs(p.c))):
        raise SingularityError(f"U is singular at z = c = {p.c}")
    sv = _sqrt_v(p, z)
    v = p.b * p.b + 1.0 - 2.0 * p.b * z
    w = z - p.b
    u = w / sv
    if scalar:
        return complex(u[()]), complex(v[()]), complex(w[()]), complex(sv[()])
    return u, v, w, sv


def phi_b(p: AirfoilParams, z, sheet: Sheet = Sheet.PLUS) -> BranchedValue:
    """Two-sheeted interior map (b - z -/+ sqrt(z^2-1))/b.

    Sheet.PLUS (-sqrt) is unbounded at infinity, Sheet.MINUS (+sqrt) tends
    to 1.  The sqrt cut is exactly [-1, 1]; IEEE signed zero in Im(z) selects
    the one-sided limit on the cut.  phi_b never takes the value 1.  Inverse on
    either sheet: z = J(b*(1 - w)).
    """
    z = complex(z)
    s = cmath.sqrt(z - 1.0) * cmath.sqrt(z + 1.0)
    if sheet is Sheet.PLUS:
        val = (p.b - z - s) / p.b
    elif sheet is Sheet.MINUS:
        val = (p.b - z + s) / p.b
    else:
        raise BranchError(f"unknown sheet {sheet!r}")
    return BranchedValue(value=val, sheet=sheet)


def phi_b_inverse(p: AirfoilParams, w):
    """J(b*(1-w)), the common inverse of both phi_b sheets."""
    w = np.asarray(w, dtype=complex)
    scalar = w.ndim == 0
    zeta = p.b * (1.0 - w)
    out = (zeta + 1.0 / zeta) / 2.0
    return _maybe_scalar(out, scalar)


def arc_candidates_raw(b: complex, rho):
    # both square-root branches of the limit-arc equation U(z)^2 = rho
    rho = np.asarray(rho, dtype=float)
    s = np.sqrt(rho * (1.0 - b * b + b * b * rho) + 0j)
    base = b * (1.0 - rho)
    return base + s, base - s


def arc_candidates(p: AirfoilParams, rho):
    """Candidate points of the limit arc at parameter rho in [0, 1] (both branches)."""
    return arc_candidates_raw(p.b, rho)


def boundary_samples(p: AirfoilParams, m: int = 1024):
    """m points of the airfoil boundary Psi(e^{it}), t uniform in [0, 2pi)."""
    t = 2 * np.pi * np.arange(m) / m
    return psi(p, np.exp(1j * t))
