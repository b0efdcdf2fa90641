"""Asymptotic eigenvalue spectrum of Y Y^H via the Stieltjes fixed point.

The large-system eigenvalue distribution of the unnormalized Gram matrix
Y Y^H obeys a scalar fixed-point equation for its Stieltjes transform
G(s) = int dP(x)/(x - s). Each power source (signal, each interferer, noise)
contributes one rational self-energy term. Densities are recovered by the
inversion formula p(x) = Im G(x + jy)/pi for small y > 0.

Eigenvalue axes are expressed as eig(Y Y^H)/scale; `scale` = T*R places the
signal bulk near kappa*P/alpha, `scale` = R matches empirical_spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .system_model import SystemParams

_PP = np.polynomial.polynomial


class StieltjesSolverError(RuntimeError):
    """Fixed-point solver failed; carries the last residual."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual


@dataclass(frozen=True)
class FixedPointParams:
    """Coefficients of the fixed-point equation.

    Terms are (rho_k, a_k^2) pairs with multiplicity weights: the signal
    carries (alpha/kappa, P*T*C), interferer k carries (1/C, I_k*C), and white
    noise enters through the rho -> infinity limit with a^2 = W*C. Equal
    interference powers are collapsed into one weighted term.
    """

    kappa: float
    alpha: float
    rhos: np.ndarray
    a2s: np.ndarray
    weights: np.ndarray
    noise_a2: float
    scale: float = 1.0

    def __post_init__(self):
        for name in ("rhos", "a2s", "weights"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if np.any(self.weights < 0):
            raise ValueError("term weights must be non-negative")
        if not (len(self.rhos) == len(self.a2s) == len(self.weights)):
            raise ValueError("rhos, a2s, weights must have equal length")

    @classmethod
    def from_system(cls, sys: SystemParams, scale=1.0):
        kappa, alpha = sys.C / sys.R, sys.T / sys.R
        rhos, a2s, wgts = [], [], []
        if sys.P > 0:
            rhos.append(alpha / kappa)
            a2s.append(sys.P * sys.T * sys.C)
            wgts.append(1.0)
        powers = np.asarray(sys.interference_powers, dtype=float)
        powers = powers[powers > 0]
        if len(powers):
            vals, counts = np.unique(powers, return_counts=True)
            rhos.extend([1.0 / sys.C] * len(vals))
            a2s.extend(list(vals * sys.C))
            wgts.extend(list(counts.astype(float)))
        return cls(kappa=kappa, alpha=alpha, rhos=np.array(rhos), a2s=np.array(a2s),
                   weights=np.array(wgts), noise_a2=sys.W * sys.C, scale=float(scale))

    def mean_eigenvalue(self):
        """First moment of the distribution on the chosen axis (trace identity)."""
        raw = self.noise_a2 / self.kappa
        if len(self.a2s):
            raw += float(np.sum(self.weights * self.a2s * self.rhos)) / self.kappa
        return raw / self.scale


@dataclass(frozen=True)
class StieltjesValue:
    s: complex
    G: complex
    residual: float
    iterations: int


@dataclass(frozen=True)
class SpectralDensity:
    """Continuous density on an increasing grid plus the mass of the atom at zero."""

    grid: np.ndarray
    values: np.ndarray
    atom_at_zero: float
    kappa: float
    scale: float = 1.0
    y_offset: float = 0.0

    @property
    def continuous_mass(self):
        return float(np.trapezoid(self.values, self.grid))

    def cdf(self):
        """Cumulative mass of the continuous part along the grid."""
        dx = np.diff(self.grid)
        return np.concatenate([[0.0], np.cumsum(0.5 * (self.values[1:] + self.values[:-1]) * dx)])

    def to_csv(self, path):
        """Write columns x, density with header metadata lines."""
        lines = [f"# kappa={self.kappa!r}", f"# atom={self.atom_at_zero!r}",
                 f"# scale={self.scale!r}", f"# y_offset={self.y_offset!r}", "x,density"]
        for x, v in zip(self.grid, self.values):
            lines.append(f"{float(x):.17g},{float(v):.17g}")
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")

    def bulk_intervals(self, threshold_ratio=1e-3):
        """Contiguous grid regions where the density exceeds a fraction of its peak."""
        above = self.values > threshold_ratio * self.values.max()
        regions, start = [], None
        for i, flag in enumerate(above):
            if flag and start is None:
                start = i
            elif not flag and start is not None:
                regions.append((float(self.grid[start]), float(self.grid[i - 1])))
                start = None
        if start is not None:
            regions.append((float(self.grid[start]), float(self.grid[-1])))
        return regions


# ---------------------------------------------------------------------------
# fixed-point solver internals (raw, unnormalized axis)
# ---------------------------------------------------------------------------

def _self_energy(G, s, fp: FixedPointParams):
    # T(G) = G * Sigma(G); each term a2*rho*(q/kappa) / (rho - a2*(G/kappa^2)*q)
    q = s * G + 1.0 - fp.kappa
    total = fp.noise_a2 * q / fp.kappa
    if len(fp.rhos):
        num = fp.a2s * fp.rhos * q / fp.kappa
        den = fp.rhos - fp.a2s * q * G / fp.kappa ** 2
        total = total + np.sum(fp.weights * num / den)
    return total


def _iterate(s, fp, G, damping, tol, max_iter):
    residual = np.inf
    for it in range(max_iter):
        Gn = -1.0 / (s + _self_energy(G, s, fp))
        residual = abs(Gn - G)
        G = (1 - damping) * G + damping * Gn
        if residual <= tol:
            return G, it + 1, residual
    return G, max_iter, residual


def _cleared_and_deriv(G, s, fp: FixedPointParams):
    """F(G) = G (s + Sigma(G)) + 1 and its analytic derivative."""
    q = s * G + 1.0 - fp.kappa
    sigma = fp.noise_a2 * q / fp.kappa
    dsigma = fp.noise_a2 * s / fp.kappa
    if len(fp.rhos):
        den = fp.rhos - fp.a2s * q * G / fp.kappa ** 2
        num = fp.a2s * fp.rhos * q / fp.kappa
        dden = -(fp.a2s / fp.kappa ** 2) * (s * G + q)
        dnum = fp.a2s * fp.rhos * s / fp.kappa
        sigma = sigma + np.sum(fp.weights * num / den)
        dsigma = dsigma + np.sum(fp.weights * (dnum * den - num * dden) / den ** 2)
    F = G * (s + sigma) + 1.0
    dF = s + sigma + G * dsigma
    return F, dF


def _map_residual(G, s, fp):
    return abs(-1.0 / (s + _self_energy(G, s, fp)) - G)


def _newton_polish(s, fp, G, steps=6):
    """Sharpen a near-solution to machine precision on the cleared equation."""
    best, best_res = G, _map_residual(G, s, fp)
    for _ in range(steps):
        F, dF = _cleared_and_deriv(G, s, fp)
        if dF == 0:
            break
        G = G - F / dF
        res = _map_residual(G, s, fp)
        if G.imag > 0 and res < best_res:
            best, best_res = G, res
        if res > 10 * best_res:
            break
    return best, best_res


def _ladder(s, fp, y_start, damping, tol, max_iter, G=None):
    """Continuation in the imaginary part: solve high above the real axis where
    the damped map contracts to the Herglotz branch, then walk down."""
    x, y_target = s.real, s.imag
    y = max(y_start, y_target)
    it_total, residual = 0, np.inf
    while True:
        z = x + 1j * y
        G, it, residual = _iterate(z, fp, G if G is not None else -1.0 / z, damping, tol, max_iter)
        it_total += it
        if y <= y_target:
            return G, it_total, residual
        y = max(y_target, 0.1 * y)


def _poly_candidates(s, fp):
    """Upper-half-plane roots of the fixed point after clearing denominators."""
    q = np.array([1.0 - fp.kappa, s])
    G1 = np.array([0.0, 1.0])
    base = _PP.polyadd(np.array([1.0, s]), (fp.noise_a2 / fp.kappa) * _PP.polymul(G1, q))
    Ds = [_PP.polysub(np.array([rho + 0j]), (a2 / fp.kappa ** 2) * _PP.polymul(G1, q))
          for rho, a2 in zip(fp.rhos, fp.a2s)]
    total = base
    for D in Ds:
        total = _PP.polymul(total, D)
    for k, (rho, a2, w) in enumerate(zip(fp.rhos, fp.a2s, fp.weights)):
        term = (w * a2 * rho / fp.kappa) * _PP.polymul(G1, q)
        for j, D in enumerate(Ds):
            if j != k:
                term = _PP.polymul(term, D)
        total = _PP.polyadd(total, term)
    roots = np.roots(total[::-1])
    return roots[roots.imag > 0]


def _solve_raw(s, fp, init=None, y_start=None, damping=0.5, tol=1e-10, max_iter=10000):
    """Herglotz-branch solution at one raw-axis point.

    Damped iteration from a warm start, then escalating repairs when the
    iterate leaves the Herglotz branch or stalls: conjugate restart,
    continuation from far above the real axis, and direct root-finding on the
    cleared polynomial. Every accepted value is Newton-polished on the cleared
    equation.
    """
    if s.imag <= 0:
        raise ValueError("stieltjes_solve requires Im(s) > 0")
    if y_start is None:
        y_start = 10.0 * max(abs(s.real), abs(s.imag), fp.scale)

    def accept(G, it):
        if G.imag <= 0:
            return None
        G, res = _newton_polish(s, fp, G)
        if G.imag > 0 and res <= tol:
            return G, it, res
        return None

    worst = np.inf
    G, it, res = _iterate(s, fp, init if init is not None else -1.0 / s, damping, tol, max_iter)
    worst = min(worst, res)
    out = accept(G, it)
    if out:
        return out
    G2, it2, res2 = _iterate(s, fp, np.conj(G), damping, tol, max_iter)
    it += it2
    worst = min(worst, res2)
    out = accept(G2, it)
    if out:
        return out
    G3, it3, res3 = _ladder(s, fp, y_start, damping, tol, max_iter)
    it += it3
    worst = min(worst, res3)
    out = accept(G3, it)
    if out:
        return out
    if len(fp.rhos) <= 16:
        for G4 in sorted(_poly_candidates(s, fp),
                         key=lambda g: abs(g - (init if init is not None else -1.0 / s))):
            out = accept(G4, it)
            if out:
                return out
    raise StieltjesSolverError(f"no Herglotz solution found at s={s}", worst)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def stieltjes_solve(s, fp: FixedPointParams, init=None, damping=0.5, tol=1e-10,
                    max_iter=10000) -> StieltjesValue:
    """Stieltjes transform G(s) of the eig(Y Y^H)/scale distribution at one point.

    The fixed point is solved on the raw axis and rescaled; the returned G
    satisfies the fixed-point relation to within `tol` on the Herglotz branch
    (Im G > 0 for Im s > 0).
    """
    s = complex(s)
    s_raw = fp.scale * s
    init_raw = None if init is None else complex(init) / fp.scale
    G_raw, iters, res = _solve_raw(s_raw, fp, init=init_raw, damping=damping,
                                   tol=tol, max_iter=max_iter)
    return StieltjesValue(s=s, G=G_raw * fp.scale, residual=res, iterations=iters)


def density_from_stieltjes(grid, fp: FixedPointParams, y_offset=None) -> SpectralDensity:
    """Asymptotic density on an increasing grid: values = Im G(x + jy)/pi.

    The sweep warm-starts each point from its neighbor to keep the Herglotz
    branch; the first point uses continuation from far above the real axis.
    The atom at zero is reported as the mass missing from the continuous part.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be increasing with at least two points")
    if y_offset is None:
        y_offset = 1e-4 * (grid[-1] - grid[0])
    if y_offset <= 0:
        raise ValueError("y_offset must be > 0")
    span_raw = (grid[-1] - grid[0]) * fp.scale
    values = np.empty_like(grid)
    G = None
    for i, x in enumerate(grid):
        s_raw = fp.scale * (x + 1j * y_offset)
        G, _, _ = _solve_raw(s_raw, fp, init=G, y_start=0.1 * span_raw)
        values[i] = G.imag / math.pi * fp.scale
    dx = np.diff(grid)
    mass = float(np.sum(0.5 * (values[1:] + values[:-1]) * dx))
    atom = min(1.0, max(0.0, 1.0 - mass))
    return SpectralDensity(grid=grid, values=values, atom_at_zero=atom,
                           kappa=fp.kappa, scale=fp.scale, y_offset=y_offset)


def empirical_spectrum(Y) -> np.ndarray:
    """All R eigenvalues of Y Y^H / R, non-negative, descending.

    Computed on the smaller Gram side; for R > C the trailing R - C entries
    are exact zeros (rank bound).
    """
    Y = np.asarray(Y)
    R, C = Y.shape
    if R <= C:
        ev = np.linalg.eigvalsh(Y @ Y.conj().T).real
    else:
        ev = np.concatenate([np.linalg.eigvalsh(Y.conj().T @ Y).real, np.zeros(R - C)])
    ev = np.clip(ev, 0.0, None)
    return np.sort(ev)[::-1] / R


def mp_density(kappa, scale=1.0):
    """Marchenko-Pastur eigenvalue density and support edges.

    Returns (pdf, (lo, hi)) for eigenvalues of W W^H/(C W_pow) times `scale`:
    the noise-only reduction of the fixed point. Support edges sit at the
    zeros of the discriminant, scale*(1 -+ 1/sqrt(kappa))^2, and the density
    integrates to min(1, kappa); for kappa < 1 the remaining 1 - kappa mass is
    the atom at zero.
    """
    if kappa <= 0:
        raise ValueError("kappa must be > 0")
    lo = scale * (1 - 1 / math.sqrt(kappa)) ** 2
    hi = scale * (1 + 1 / math.sqrt(kappa)) ** 2

    def pdf(x):
        u = np.asarray(x, dtype=float) / scale
        disc = 4 * u * kappa - (u * kappa + 1 - kappa) ** 2
        out = np.zeros_like(u)
        inside = disc > 0
        out[inside] = np.sqrt(disc[inside]) / (2 * math.pi * u[inside]) / scale
        return out if out.ndim else float(out)

    return pdf, (lo, hi)


def noise_bulk_max_power(T, C, W, kappa):
    """Upper bound on the white-noise power landing in the projected block:
    T*C*W*(1 + 1/sqrt(kappa))^2."""
    if T <= 0 or C <= 0 or W < 0 or kappa <= 0:
        raise ValueError("inputs must be positive (W >= 0)")
    return T * C * W * (1 + 1 / math.sqrt(kappa)) ** 2


def snr_lower_bound(P, W, R, C, kappa):
    """Post-projection SNR lower bounds:
    (P/W) * R/(1 + 1/sqrt(kappa))^2 and (P/W) * min(R, C)/4."""
    if P < 0 or W <= 0 or R <= 0 or C <= 0 or kappa <= 0:
        raise ValueError("inputs must be positive")
    bound1 = (P / W) * R / (1 + 1 / math.sqrt(kappa)) ** 2
    bound2 = (P / W) * min(R, C) / 4.0
    return bound1, bound2
