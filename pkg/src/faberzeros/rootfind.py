"""Locating all n zeros of the degree-n Faber polynomial.

Two routes that cross-check each other: a simultaneous (Aberth) solver on the
coefficients, and a seeded solver that never touches coefficients — real-arc
bisection / arc Newton for segment zeros, plus a unit-circle Newton in the
w-plane for loop zeros using the exact pullback
F_n(J(b(1-w))) = (-b/a)^n (w^n + g(w)^n - 1), g(w) = 1 - 1/(b^2 (1-w)).
The coefficient route dies of rounding around n ≈ 40 unless it escalates to
mpmath via the provenance stored on PolyCoeffs; the seeded route is the
authoritative one for large n.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

from .conformal import AirfoilParams, phi_b_inverse
from .errors import ConvergenceError, DeficitError, MismatchError
from .faber import (
    MP_LOCK, PolyCoeffs, faber_closed, faber_coeffs_mp, residual, scaled_residual,
)
from .limitsets import arc_z_of_u, intersection_ib, u_lower

RESIDUAL_GATE = 1e-7      # ZeroSet guarantee on max scaled residual
BACKWARD_GATE = 1e-10     # |p(root)| / (max|c| * max(1,|root|)^deg)
DISTINCT_TOL = 1e-8


class Method(enum.Enum):
    SIMULTANEOUS = "simultaneous"
    SEEDED = "seeded"
    CROSS_CHECKED = "cross_checked"


@dataclass(frozen=True)
class ZeroSet:
    """All n zeros, sorted by (Re, Im), with scaled equation residuals."""

    n: int
    zeros: np.ndarray
    residuals: np.ndarray
    method: Method

    def __post_init__(self):
        assert len(self.zeros) == self.n == len(self.residuals)


def _sorted(z):
    z = np.asarray(z, dtype=complex)
    return z[np.lexsort((z.imag, z.real))]


def _dedup(z, tol=DISTINCT_TOL):
    kept: list[complex] = []
    for v in _sorted(z):
        if all(abs(v - k) > tol for k in kept):
            kept.append(complex(v))
    return np.array(kept, dtype=complex)


def _horner_pair(co, z):
    p = np.full_like(z, co[-1])
    dp = np.zeros_like(z)
    for c in co[-2::-1]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _aberth_double(co, max_iter=120):
    deg = len(co) - 1
    cn = co[-1]
    # Cauchy-style radius + irrational angular offset so no symmetry traps us
    r0 = 1.0 + max(abs(co[k] / cn) ** (1.0 / (deg - k)) for k in range(deg))
    z = r0 * np.exp(2j * np.pi * (np.arange(deg) + 0.26183) / deg)
    ok = False
    for _ in range(max_iter):
        p, dp = _horner_pair(co, z)
        dp = np.where(np.abs(dp) < 1e-300, 1e-300, dp)
        newton = p / dp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = np.sum(1.0 / diff, axis=1)
        denom = 1.0 - newton * s
        denom = np.where(np.abs(denom) < 1e-300, 1e-300, denom)
        step = newton / denom
        z = z - step
        if np.max(np.abs(step) / (1.0 + np.abs(z))) < 1e-14:
            ok = True
            break
    return z, ok


def _aberth_polish_mp(co_mp, z0, dps, max_iter=60):
    with MP_LOCK, mp.workdps(dps):
        zs = [mp.mpc(v) for v in z0]
        deg = len(zs)
        for _ in range(max_iter):
            worst = mp.mpf(0)
            for i in range(deg):
                z = zs[i]
                p = co_mp[-1]
                dp = mp.mpc(0)
                for c in co_mp[-2::-1]:
                    dp = dp * z + p
                    p = p * z + c
                if dp == 0:
                    continue
                newton = p / dp
                s = mp.mpc(0)
                for j in range(deg):
                    if j != i:
                        s += 1 / (z - zs[j])
                denom = 1 - newton * s
                if denom == 0:
                    continue
                step = newton / denom
                zs[i] = z - step
                worst = max(worst, abs(step) / (1 + abs(zs[i])))
            if worst < mp.mpf("1e-20"):
                break
        return np.array([complex(v) for v in zs])


def _backward_residuals(co, z):
    p, _ = _horner_pair(np.asarray(co, dtype=complex), z)
    deg = len(co) - 1
    scale = np.max(np.abs(co)) * np.maximum(1.0, np.abs(z)) ** deg
    return np.abs(p) / scale


def roots_simultaneous(poly: PolyCoeffs, max_iter: int = 120) -> ZeroSet:
    """All roots by Aberth iteration on the coefficients, with an mpmath
    recompute-and-polish fallback when the polynomial knows its provenance.
    ConvergenceError (with .partial) if the residual gates can't be met."""
    deg = poly.degree
    if deg < 1:
        raise ValueError("need degree >= 1")
    co = poly.coeffs
    if deg == 1:
        z = np.array([-co[0] / co[1]])
        ok = True
    else:
        z, ok = _aberth_double(co, max_iter=max_iter)
    src = poly.source
    need_escalation = not ok or np.max(_backward_residuals(co, z)) > BACKWARD_GATE
    if src is not None:
        p_air, n = src
        eq = scaled_residual(p_air, n, z)
        need_escalation = need_escalation or np.max(eq) > 1e-11
        if need_escalation:
            dps = 40 + int(0.8 * n)
            z = _aberth_polish_mp(faber_coeffs_mp(p_air, n, dps=dps), z, dps=dps)
            eq = scaled_residual(p_air, n, z)
        res = eq
        if np.max(res) > RESIDUAL_GATE:
            partial = ZeroSet(deg, _sorted(z), np.sort(res), Method.SIMULTANEOUS)
            raise ConvergenceError(
                f"scaled residual stuck at {np.max(res):.2e}", partial=partial)
    else:
        if need_escalation:
            # no provenance: polish against the same double coefficients
            z = _aberth_polish_mp([mp.mpc(v) for v in co], z, dps=60)
        res = _backward_residuals(co, z)
        if np.max(res) > BACKWARD_GATE:
            partial = ZeroSet(deg, _sorted(z), res, Method.SIMULTANEOUS)
            raise ConvergenceError(
                f"backward residual stuck at {np.max(res):.2e}", partial=partial)
    order = np.lexsort((z.imag, z.real))
    return ZeroSet(deg, z[order], np.asarray(res)[order], Method.SIMULTANEOUS)


@dataclass(frozen=True)
class SeedPlan:
    """Where to look: bracketing arc intervals for segment zeros and
    roots-of-unity images for loop zeros."""

    n: int
    segment_brackets: list        # (z_lo, z_hi) pairs on the arc
    loop_seeds: np.ndarray        # J(b(1-omega_k)) for on-arc omega_k
    u_lo: float
    _ts: np.ndarray = field(repr=False, default=None)       # t-brackets, t = arccos u
    _omegas: np.ndarray = field(repr=False, default=None)   # the omega_k kept

    @property
    def count(self) -> int:
        return len(self.segment_brackets) + len(self.loop_seeds)


def _g_of_w(b, w):
    return 1.0 - 1.0 / (b * b * (1.0 - w))


def seed_plan(p: AirfoilParams, n: int) -> SeedPlan:
    """Chebyshev-style brackets on the zero-carrying arc piece plus unit-root
    seeds on the loop-side circle arc (selected by |g(omega)| < 1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    u_lo = u_lower(p)
    s_max = float(np.arccos(np.clip(u_lo, -1.0, 1.0)))
    k = np.arange(n)
    tlo = k * np.pi / n
    thi = (k + 1) * np.pi / n
    keep = tlo < s_max - 1e-15
    tlo, thi = tlo[keep], np.minimum(thi[keep], s_max)
    ts = np.stack([tlo, thi], axis=1)
    brackets = []
    if len(ts):
        zlo = arc_z_of_u(p, np.cos(thi))   # lower u end
        zhi = arc_z_of_u(p, np.cos(tlo))
        brackets = list(zip(zlo, zhi))
    if intersection_ib(p) is not None:
        om = np.exp(2j * np.pi * np.arange(n) / n)
        with np.errstate(divide="ignore", invalid="ignore"):
            keep_om = np.abs(_g_of_w(p.b, om)) < 1.0 - 1e-12
        om = om[keep_om]
    else:
        om = np.empty(0, complex)
    return SeedPlan(
        n=n, segment_brackets=brackets,
        loop_seeds=phi_b_inverse(p, om) if len(om) else np.empty(0, complex),
        u_lo=u_lo, _ts=ts, _omegas=om,
    )


def _newton_w(p: AirfoilParams, n: int, w, max_iter=100, cap=0.1, accept=1e-6):
    """Newton on h(w) = w^n + g(w)^n - 1 on/near the unit circle."""
    b = p.b
    w = np.asarray(w, dtype=complex).copy()
    if not len(w):
        return w
    for _ in range(max_iter):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            g = _g_of_w(b, w)
            wn = w ** n
            gn = g ** n
            h = wn + gn - 1.0
            dh = n * wn / w - n * gn / g / (b * b * (1.0 - w) ** 2)
            dh = np.where(np.abs(dh) < 1e-300, 1e-300, dh)
            step = h / dh
            step = np.where(np.isfinite(step), step, cap)
            mag = np.abs(step)
            step = np.where(mag > cap, step * (cap / mag), step)
        w = w - step
        if np.max(np.abs(step)) < 5e-16 * np.max(1.0 + np.abs(w)):
            break
    g = _g_of_w(b, w)
    hfin = np.abs(w ** n + g ** n - 1.0)
    return w[hfin < accept]


def _newton_z(p: AirfoilParams, n: int, z, max_iter=80, cap=0.05, accept=1e-6):
    z = np.asarray(z, dtype=complex).copy()
    if not len(z):
        return z
    for _ in range(max_iter):
        r, dr = residual(p, n, z)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            dr = np.where(np.abs(dr) < 1e-300, 1e-300, dr)
            step = r / dr
            step = np.where(np.isfinite(step), step, cap)
            mag = np.abs(step)
            step = np.where(mag > cap, step * (cap / mag), step)
        z = z - step
        if np.max(np.abs(step)) < 1e-15 * np.max(1.0 + np.abs(z)):
            break
    r, _ = residual(p, n, z)
    return z[np.abs(r) < accept]


def _bisect_real(p: AirfoilParams, n: int, ts):
    # real-axis case: the residual is real on the segment, brackets alternate sign
    def f(t):
        z = arc_z_of_u(p, np.cos(t)).real
        return residual(p, n, z + 0j)[0].real, z

    tlo, thi = ts[:, 0].copy(), ts[:, 1].copy()
    flo, _ = f(tlo)
    fhi, _ = f(thi)
    good = np.sign(flo) * np.sign(fhi) < 0
    tlo, thi, flo = tlo[good], thi[good], flo[good]
    for _ in range(60):
        tm = 0.5 * (tlo + thi)
        fm, _ = f(tm)
        left = np.sign(fm) == np.sign(flo)
        tlo = np.where(left, tm, tlo)
        flo = np.where(left, fm, flo)
        thi = np.where(left, thi, tm)
    _, z = f(0.5 * (tlo + thi))
    z = z.astype(complex)
    return z[np.atleast_1d(scaled_residual(p, n, z)) < 1e-6]


def roots_seeded(p: AirfoilParams, n: int) -> ZeroSet:
    """Coefficient-free zero finder: all n zeros from the seed plan, with a
    mop-up ring near the loop corners and a simultaneous-method merge as the
    final fallback. DeficitError when the count still isn't n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    plan = seed_plan(p, n)
    found = []
    if len(plan._ts):
        if p.is_real:
            found.append(_bisect_real(p, n, plan._ts))
        else:
            mid = np.cos(0.5 * (plan._ts[:, 0] + plan._ts[:, 1]))
            found.append(_newton_z(p, n, arc_z_of_u(p, mid)))
    if len(plan._omegas):
        w = _newton_w(p, n, plan._omegas)
        if len(w):
            found.append(phi_b_inverse(p, w))
    zs = _dedup(np.concatenate(found) if found else np.empty(0, complex))

    if len(zs) < n and intersection_ib(p) is not None:
        # corners eat a few seeds; re-launch from small rings around c_±
        ib = intersection_ib(p)
        sq = np.sqrt(complex(ib) ** 2 - 1.0)
        corners = [(p.b - ib - sq) / p.b, (p.b - ib + sq) / p.b]
        angles = np.exp(2j * np.pi * np.arange(12) / 12)
        for rad in (0.3 / n, 1.0 / n, 3.0 / n, 0.3 / np.sqrt(n)):
            if len(zs) >= n:
                break
            seeds = np.concatenate([c + rad * angles for c in corners])
            w = _newton_w(p, n, seeds, cap=0.05, accept=1e-8)
            if len(w):
                zs = _dedup(np.concatenate([zs, phi_b_inverse(p, w)]))

    if len(zs) < n:
        try:
            sim = roots_simultaneous(faber_closed(p, n))
            extra = [z for z in sim.zeros
                     if np.min(np.abs(zs - z)) > 1e-6] if len(zs) else list(sim.zeros)
            zs = _dedup(np.concatenate([zs, np.array(extra, dtype=complex)]))
        except (OverflowError, ConvergenceError):
            pass

    if len(zs) > n:
        # spurious accepts are residual-ranked out (never seen in practice)
        r = scaled_residual(p, n, zs)
        zs = _sorted(zs[np.argsort(r)[:n]])
    if len(zs) != n:
        raise DeficitError(
            f"found {len(zs)} of {n} zeros", missing=n - len(zs))

    res = np.atleast_1d(scaled_residual(p, n, zs))
    if np.max(res) > RESIDUAL_GATE:
        bad = res > 1e-13
        tightened = _newton_z(p, n, zs[bad], max_iter=8, cap=1e-3, accept=np.inf)
        if len(tightened) == int(np.sum(bad)):
            zs[bad] = tightened
            res = np.atleast_1d(scaled_residual(p, n, zs))
    order = np.lexsort((zs.imag, zs.real))
    return ZeroSet(n, zs[order], res[order], Method.SEEDED)


@dataclass(frozen=True)
class CrossCheckReport:
    n: int
    max_distance: float
    mean_distance: float


def cross_check(a: ZeroSet, b: ZeroSet, tol: float = 1e-6) -> CrossCheckReport:
    """Greedy nearest-pair matching of two zero sets; MismatchError when any
    matched pair is farther than tol (message lists the offenders)."""
    if a.n != b.n:
        raise MismatchError(f"zero counts differ: {a.n} vs {b.n}")
    d = np.abs(a.zeros[:, None] - b.zeros[None, :])
    n = a.n
    dists = np.empty(n)
    pairs = []
    work = d.copy()
    for _ in range(n):
        i, j = np.unravel_index(np.argmin(work), work.shape)
        dists[len(pairs)] = work[i, j]
        pairs.append((i, j))
        work[i, :] = np.inf
        work[:, j] = np.inf
    if np.max(dists) > tol:
        bad = [(complex(a.zeros[i]), complex(b.zeros[j]))
               for (i, j), dd in zip(pairs, dists) if dd > tol]
        raise MismatchError(
            f"{len(bad)} zero pair(s) farther than {tol:g}; worst {np.max(dists):.3e}: "
            + "; ".join(f"{u} vs {v}" for u, v in bad[:5]),
            unmatched=bad)
    return CrossCheckReport(n=n, max_distance=float(np.max(dists)),
                            mean_distance=float(np.mean(dists)))


def compute_zeros(p: AirfoilParams, n: int, method: str = "auto") -> ZeroSet:
    """Dispatcher: simultaneous for n <= 60, seeded above (method='auto')."""
    if method == "auto":
        method = "simultaneous" if n <= 60 else "seeded"
    if method == "simultaneous":
        return roots_simultaneous(faber_closed(p, n))
    if method == "seeded":
        return roots_seeded(p, n)
    raise ValueError(f"unknown method {method!r}")
