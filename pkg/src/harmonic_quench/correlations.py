"""Entanglement and Gaussian discord of two coupled oscillators.

Two-mode covariances here use the ordering ``(x1, p1, x2, p2)`` and the
same normalisation as the rest of the package (vacuum = identity), so
the uncertainty principle reads ``sigma + i*Omega >= 0``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import optimize
from scipy.special import xlogy

from .chain import ChainSpec, normal_modes
from .errors import InvalidSpecError, OptimizerError
from .work import classical_lag, nonequilibrium_lag

__all__ = [
    "TwoModeCov",
    "CorrelationReport",
    "LagCorrelationTable",
    "equilibrium_covariance",
    "symplectic_eigenvalues",
    "log_negativity",
    "log_negativity_closed_form",
    "entanglement_threshold",
    "entropy_function",
    "gaussian_discord",
    "discord_grid_search",
    "correlation_report",
    "lag_correlation_curves",
]

_OMEGA2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
_OMEGA4 = np.kron(np.eye(2), _OMEGA2)
_CLAMP = 1e-9
_S_BOUND = 5.0


@dataclass(frozen=True)
class TwoModeCov:
    alpha1: np.ndarray
    alpha2: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "gamma"):
            block = np.array(getattr(self, name), dtype=float)
            if block.shape != (2, 2):
                raise InvalidSpecError(f"{name} must be 2x2")
            object.__setattr__(self, name, block)
        sigma = self.matrix
        if np.max(np.abs(sigma - sigma.T)) > 1e-10:
            raise InvalidSpecError("covariance matrix is not symmetric")
        if np.linalg.eigvalsh(sigma + 1j * _OMEGA4).min() < -1e-9:
            raise InvalidSpecError("covariance violates the uncertainty principle")

    @property
    def matrix(self) -> np.ndarray:
        return np.block([[self.alpha1, self.gamma], [self.gamma.T, self.alpha2]])

    @classmethod
    def from_matrix(cls, sigma) -> "TwoModeCov":
        sigma = np.asarray(sigma, dtype=float)
        return cls(sigma[:2, :2], sigma[2:, 2:], sigma[:2, 2:])

    def partial_transpose(self) -> np.ndarray:
        flip = np.diag([1.0, 1.0, 1.0, -1.0])
        return flip @ self.matrix @ flip


@dataclass(frozen=True)
class CorrelationReport:
    log_negativity: float
    nu_minus_pt: float
    nu_minus: float
    nu_plus: float
    discord: float
    witness: tuple  # (s, phi) of the optimal measurement covariance

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["witness"] = list(self.witness)
        return d


def equilibrium_covariance(spec: ChainSpec) -> TwoModeCov:
    """Covariance of the Gibbs state of the coupled two-oscillator Hamiltonian."""
    if spec.n_modes != 2:
        raise InvalidSpecError("correlations are computed for two oscillators")
    nm = normal_modes(spec)
    if spec.zero_temperature:
        v = np.ones(2)
    else:
        v = 1.0 / np.tanh(0.5 * spec.beta * nm.mus)
    p = nm.p_matrix
    cov_x = p @ np.diag(v * np.exp(-4.0 * nm.squeeze_params)) @ p.T
    cov_p = p @ np.diag(v * np.exp(4.0 * nm.squeeze_params)) @ p.T
    sigma = np.zeros((4, 4))
    sigma[0::2, 0::2] = cov_x
    sigma[1::2, 1::2] = cov_p
    return TwoModeCov.from_matrix(sigma)


def symplectic_eigenvalues(sigma) -> np.ndarray:
    """``(nu_minus, nu_plus)`` of a 4x4 covariance in ``(x1, p1, x2, p2)`` order."""
    ev = np.abs(np.linalg.eigvals(1j * _OMEGA4 @ np.asarray(sigma, dtype=float)))
    return np.sort(ev)[::2]


def _clamp(value: float) -> float:
    return 0.0 if abs(value) < _CLAMP else value


def log_negativity(cov: TwoModeCov) -> float:
    """``E = max(0, -ln nu_minus)`` from the partially transposed covariance."""
    nu = symplectic_eigenvalues(cov.partial_transpose())[0]
    return _clamp(max(0.0, -math.log(nu)))


def log_negativity_closed_form(spec: ChainSpec) -> float:
    """Equilibrium log-negativity without building the covariance.

    The partially transposed spectrum of the Gibbs state gives
    ``nu_minus = sqrt(coth(beta omega/2) coth(beta mu/2)) (1 + 2 g0/omega)^(-1/4)``.
    """
    if spec.n_modes != 2:
        raise InvalidSpecError("correlations are computed for two oscillators")
    mu = normal_modes(spec).mus[1]
    if spec.zero_temperature:
        v1 = v2 = 1.0
    else:
        v1 = 1.0 / math.tanh(0.5 * spec.beta * spec.omega)
        v2 = 1.0 / math.tanh(0.5 * spec.beta * mu)
    log_nu = 0.5 * math.log(v1 * v2) - 0.25 * math.log1p(2.0 * spec.g0 / spec.omega)
    return _clamp(max(0.0, -log_nu))


def entanglement_threshold(spec: ChainSpec, beta_max: float = 1e3) -> float:
    """Inverse temperature below which the equilibrium state is separable.

    Root of ``coth(beta omega/2) coth(beta mu/2) = sqrt(1 + 2 g0/omega)``,
    bracketed by bisection; ``inf`` when the state never becomes entangled.
    """
    if spec.n_modes != 2:
        raise InvalidSpecError("correlations are computed for two oscillators")
    mu = normal_modes(spec).mus[1]
    target = 0.5 * math.log1p(2.0 * spec.g0 / spec.omega)

    def log_coth_half(x):
        # ln coth(x/2) = ln(1 + 2/(e^x - 1)), safe for large x
        return math.log1p(2.0 * math.exp(-x) / -math.expm1(-x))

    def excess(b):
        return log_coth_half(b * spec.omega) + log_coth_half(b * mu) - target

    if spec.g0 == 0.0 or excess(beta_max) >= 0.0:
        return math.inf
    return optimize.brentq(excess, 1e-6, beta_max, xtol=1e-14, rtol=1e-14)


def entropy_function(x):
    """``f(x) = (x+1)/2 ln((x+1)/2) - (x-1)/2 ln((x-1)/2)``, with ``f(1) = 0``."""
    x = np.maximum(np.asarray(x, dtype=float), 1.0)
    a, b = 0.5 * (x + 1.0), 0.5 * (x - 1.0)
    return xlogy(a, a) - xlogy(b, b)


def _det_eps(cov: TwoModeCov, s, phi):
    """``det(alpha1 - gamma (alpha2 + sigma0)^-1 gamma^T)``, vectorised over ``(s, phi)``."""
    s, phi = np.broadcast_arrays(np.asarray(s, float), np.asarray(phi, float))
    c2, s2 = np.cos(2.0 * phi), np.sin(2.0 * phi)
    ch, sh = np.cosh(2.0 * s), np.sinh(2.0 * s)
    # R(phi) diag(e^{2s}, e^{-2s}) R(phi)^T
    m00 = cov.alpha2[0, 0] + ch + sh * c2
    m11 = cov.alpha2[1, 1] + ch - sh * c2
    m01 = cov.alpha2[0, 1] + sh * s2
    det_m = m00 * m11 - m01 * m01
    g = cov.gamma
    # gamma M^{-1} gamma^T with M^{-1} = adj(M)/det(M)
    q00 = (g[0, 0] ** 2 * m11 - 2 * g[0, 0] * g[0, 1] * m01 + g[0, 1] ** 2 * m00) / det_m
    q11 = (g[1, 0] ** 2 * m11 - 2 * g[1, 0] * g[1, 1] * m01 + g[1, 1] ** 2 * m00) / det_m
    q01 = (g[0, 0] * g[1, 0] * m11 - (g[0, 0] * g[1, 1] + g[0, 1] * g[1, 0]) * m01
           + g[0, 1] * g[1, 1] * m00) / det_m
    a = cov.alpha1
    e00, e11, e01 = a[0, 0] - q00, a[1, 1] - q11, a[0, 1] - q01
    return e00 * e11 - e01 * e01


def _discord_from_det(cov: TwoModeCov, det_eps: float) -> float:
    nu_m, nu_p = symplectic_eigenvalues(cov.matrix)
    a2 = math.sqrt(max(np.linalg.det(cov.alpha2), 1.0))
    value = (entropy_function(a2) - entropy_function(nu_m) - entropy_function(nu_p)
             + entropy_function(math.sqrt(max(det_eps, 1.0))))
    return _clamp(float(value))


def gaussian_discord(cov: TwoModeCov, seeds: int = 3, tol: float = 1e-14):
    """Gaussian discord and the optimal measurement ``(s, phi)``.

    The infimum over pure rotated squeezed measurement covariances is
    found by bounded L-BFGS-B from a ``seeds x seeds`` grid of starting
    points in ``s in [-5, 5]``, ``phi in [0, pi)``.  Because ``f`` is
    increasing it is enough to minimise ``det(epsilon)``.
    """
    def objective(z):
        return float(_det_eps(cov, z[0], z[1]))

    best = None
    for s0 in np.linspace(-0.8 * _S_BOUND, 0.8 * _S_BOUND, seeds):
        for p0 in (np.arange(seeds) + 0.5) * math.pi / seeds:
            res = optimize.minimize(objective, x0=[s0, p0], method="L-BFGS-B",
                                    bounds=[(-_S_BOUND, _S_BOUND), (0.0, math.pi)],
                                    options={"ftol": tol, "gtol": 1e-12})
            if np.isfinite(res.fun) and (best is None or res.fun < best.fun):
                best = res
    if best is None:
        raise OptimizerError("discord minimisation produced no finite value", best=None)
    d = _discord_from_det(cov, best.fun)
    return d, (float(best.x[0]), float(best.x[1]))


def discord_grid_search(cov: TwoModeCov, resolution: int = 400, zoom_levels: int = 4):
    """Brute-force discord: a ``resolution x resolution`` grid over ``(s, phi)``.

    Each zoom level re-grids a window of ``+-2`` cells around the current
    best point at the same resolution, which drives the grid error on the
    minimum far below what a single coarse grid can reach.
    """
    s_lo, s_hi, p_lo, p_hi = -_S_BOUND, _S_BOUND, 0.0, math.pi
    best = (math.inf, 0.0, 0.0)
    for _ in range(zoom_levels + 1):
        s = np.linspace(s_lo, s_hi, resolution)
        phi = np.linspace(p_lo, p_hi, resolution)
        vals = _det_eps(cov, s[:, None], phi[None, :])
        i, j = np.unravel_index(np.argmin(vals), vals.shape)
        if vals[i, j] < best[0]:
            best = (float(vals[i, j]), float(s[i]), float(phi[j]))
        ds, dp = 2 * (s_hi - s_lo) / (resolution - 1), 2 * (p_hi - p_lo) / (resolution - 1)
        s_lo, s_hi = max(-_S_BOUND, best[1] - ds), min(_S_BOUND, best[1] + ds)
        # phi is periodic with period pi; the window may leave [0, pi)
        p_lo, p_hi = best[2] - dp, best[2] + dp
    return _discord_from_det(cov, best[0]), (best[1], best[2] % math.pi)


def correlation_report(cov: TwoModeCov) -> CorrelationReport:
    nu_pt = symplectic_eigenvalues(cov.partial_transpose())[0]
    nu_m, nu_p = symplectic_eigenvalues(cov.matrix)
    d, witness = gaussian_discord(cov)
    return CorrelationReport(
        log_negativity=_clamp(max(0.0, -math.log(nu_pt))),
        nu_minus_pt=float(nu_pt),
        nu_minus=float(nu_m),
        nu_plus=float(nu_p),
        discord=d,
        witness=witness,
    )


@dataclass(frozen=True)
class LagCorrelationTable:
    """Rows ``(beta, L, L_c, L_q, E, D)`` in the order of the input grid."""

    beta: np.ndarray
    lag: np.ndarray
    lag_classical: np.ndarray
    lag_quantum: np.ndarray
    log_negativity: np.ndarray
    discord: np.ndarray

    columns = ("beta", "L", "L_c", "L_q", "E", "D")

    def rows(self):
        return list(zip(self.beta, self.lag, self.lag_classical, self.lag_quantum,
                        self.log_negativity, self.discord))


def lag_correlation_curves(spec: ChainSpec, betas, workers: int | None = None) -> LagCorrelationTable:
    """Lag and correlations along a grid of inverse temperatures.

    ``spec`` fixes ``omega`` and ``g0``; its ``beta`` is ignored.  Points
    are evaluated independently, on ``workers`` threads when given.
    """
    if spec.n_modes != 2:
        raise InvalidSpecError("correlations are computed for two oscillators")
    betas = np.asarray(betas, dtype=float)
    lc = classical_lag(spec)

    def point(b):
        s = spec.replace(beta=float(b))
        lag = nonequilibrium_lag(s, with_jarzynski=False).lag
        cov = equilibrium_covariance(s)
        d, _ = gaussian_discord(cov)
        return lag, log_negativity(cov), d

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(point, betas))
    else:
        results = [point(b) for b in betas]
    lag, e, d = (np.array(col, dtype=float) for col in zip(*results)) if results else (np.array([]),) * 3
    return LagCorrelationTable(betas, lag, np.full(betas.shape, lc), lag - lc, e, d)
