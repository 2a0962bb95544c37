"""Characteristic function of work, free energies and irreversibility.

The orthogonal mode mixer leaves both the pre-quench Hamiltonian and the
product of identical thermal P-functions invariant, so the thermal average
factorises over normal modes.  Mode ``j`` then undergoes a single-mode
frequency quench ``omega -> mu_j`` and its thermal convolution of the
coherent-state echo is a complex Gaussian integral done in closed form.
The centre-of-mass mode (``mu_1 = omega``) contributes one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chain import ChainSpec, build_h2, normal_modes
from .errors import ContinuationError, InvalidSpecError
from .symplectic import coherent_echo

__all__ = [
    "WorkCharacteristic",
    "ThermoReport",
    "RwaStatistics",
    "default_u_grid",
    "mode_chi_radicand",
    "characteristic_function",
    "chi_at",
    "chi_quadrature",
    "average_work",
    "log_partition_functions",
    "partition_functions",
    "free_energy_change",
    "classical_lag",
    "nonequilibrium_lag",
    "jarzynski_check",
    "rwa_statistics",
]


@dataclass(frozen=True)
class WorkCharacteristic:
    u_grid: np.ndarray
    chi: np.ndarray
    spec: ChainSpec


@dataclass(frozen=True)
class ThermoReport:
    avg_work: float
    delta_f: float
    lag: float
    lag_classical: float
    lag_quantum: float
    jarzynski_residual: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class RwaStatistics:
    avg_work: float
    second_moment: float
    chi_u2_coefficient: float


def default_u_grid(spec: ChainSpec, u_max: float | None = None, points: int = 2001) -> np.ndarray:
    if u_max is None:
        u_max = 10.0 / spec.omega
    return np.linspace(-u_max, u_max, points)


def mode_chi_radicand(u, omega: float, mu: float, nbar: float):
    """``G(u)`` with ``chi_mode(u) = exp(i (mu - omega) u / 2) / sqrt(G(u))``.

    ``G`` is analytic in ``u`` and equals one at ``u = 0``.
    """
    u = np.asarray(u, dtype=complex)
    rho = 0.5 * math.log(mu / omega)
    c, s = math.cosh(rho), math.sinh(rho)
    w = np.exp(-1j * omega * u)
    v = np.exp(1j * mu * u)
    den = c * c - s * s * v * v
    first = (1.0 + nbar) * den - nbar * w * v
    second = nbar * s * c * w * (v * v - 1.0)
    return (first * first - second * second) / den


def _continued_sqrt(fn, targets, max_step: float):
    """Square root of ``fn`` at ``targets``, continued along rays from ``u = 0``.

    Targets sharing a direction are visited in order of modulus on one
    path; the path is refined until consecutive samples differ in argument
    by less than 0.5 rad.
    """
    targets = np.asarray(targets, dtype=complex)
    flat = targets.ravel()
    out = np.empty(flat.shape, dtype=complex)
    mod = np.abs(flat)
    out[mod == 0] = np.sqrt(fn(np.zeros(1)))[0]
    nz = np.flatnonzero(mod > 0)
    if nz.size == 0:
        return out.reshape(targets.shape)
    directions = np.round(np.angle(flat[nz]), 12)
    for d in np.unique(directions):
        idx = nz[directions == d]
        idx = idx[np.argsort(mod[idx])]
        unit = flat[idx[0]] / mod[idx[0]]
        radii = mod[idx]
        step = max_step
        for _ in range(30):
            n_pts = int(math.ceil(radii[-1] / step)) + 1
            grid = np.union1d(np.linspace(0.0, radii[-1], n_pts), radii)
            vals = fn(grid * unit)
            if np.any(vals == 0) or not np.all(np.isfinite(vals)):
                raise ContinuationError("radicand vanishes or overflows on the continuation path")
            jumps = np.abs(np.diff(np.unwrap(np.angle(vals))))
            if jumps.size == 0 or jumps.max() < 0.5:
                break
            step /= 4.0
        else:
            raise ContinuationError("could not resolve the argument of the radicand")
        phase = np.unwrap(np.angle(vals))
        phase -= phase[0] - np.angle(vals[0])
        roots = np.sqrt(np.abs(vals)) * np.exp(0.5j * phase)
        pos = np.searchsorted(grid, radii)
        out[idx] = roots[pos]
    return out.reshape(targets.shape)


def chi_at(spec: ChainSpec, u):
    """Closed-form ``chi(u)`` for real or complex ``u`` (scalar or array)."""
    u_arr = np.asarray(u, dtype=complex)
    nm = normal_modes(spec)
    nbar = spec.nbar
    out = np.ones(u_arr.shape, dtype=complex)
    for mu in nm.mus[1:]:
        if mu == spec.omega:
            continue
        fn = lambda z, mu=mu: mode_chi_radicand(z, spec.omega, mu, nbar)
        root = _continued_sqrt(fn, u_arr, max_step=0.05 / (mu + spec.omega))
        out = out * np.exp(0.5j * (mu - spec.omega) * u_arr) / root
    return out if out.ndim else complex(out)


def characteristic_function(spec: ChainSpec, u_grid=None) -> WorkCharacteristic:
    """``chi(u) = Tr[exp(iuH_f) exp(-iuH_i) rho_th]`` sampled on ``u_grid``."""
    if u_grid is None:
        u_grid = default_u_grid(spec)
    u = np.asarray(u_grid, dtype=float)
    return WorkCharacteristic(u_grid=u, chi=np.asarray(chi_at(spec, u)), spec=spec)


def chi_quadrature(spec: ChainSpec, u: float, order: int = 24) -> complex:
    """Two-oscillator ``chi(u)`` by Gauss-Hermite quadrature of the coherent echo.

    Integrates :func:`coherent_echo` over the product of thermal
    P-functions on a 4D tensor grid; slow, used as an independent check of
    the closed form.
    """
    if spec.n_modes != 2:
        raise InvalidSpecError("quadrature check is implemented for two oscillators")
    if spec.zero_temperature:
        return complex(coherent_echo(spec, 0.0, 0.0, u))
    nodes, weights = np.polynomial.hermite.hermgauss(order)
    # P(alpha) = exp(-|alpha|^2/nbar)/(pi nbar): each real component ~ N(0, nbar/2)
    scale = math.sqrt(spec.nbar)
    x = nodes * scale
    w = weights / math.sqrt(math.pi)
    a1 = x[:, None, None, None] + 1j * x[None, :, None, None]
    a2 = x[None, None, :, None] + 1j * x[None, None, None, :]
    ww = w[:, None, None, None] * w[None, :, None, None] * w[None, None, :, None] * w[None, None, None, :]
    vals = coherent_echo(spec, a1, a2, u)
    return complex(np.sum(ww * vals))


def average_work(spec: ChainSpec) -> float:
    """``<W> = g0 V (N - 1) / 2``."""
    return spec.g0 * spec.variance * (spec.n_modes - 1) / 2.0


def _log_two_sinh(x):
    x = np.asarray(x, dtype=float)
    return x + np.log(-np.expm1(-2.0 * x))


def log_partition_functions(spec: ChainSpec) -> tuple:
    """``(ln Z_0, ln Z)`` with per-mode factors ``1 / (2 sinh(beta nu / 2))``."""
    if spec.zero_temperature:
        raise InvalidSpecError("partition functions diverge in the beta -> inf limit")
    nm = normal_modes(spec)
    lz0 = -spec.n_modes * float(_log_two_sinh(0.5 * spec.beta * spec.omega))
    lz = -float(np.sum(_log_two_sinh(0.5 * spec.beta * nm.mus)))
    return lz0, lz


def partition_functions(spec: ChainSpec) -> tuple:
    lz0, lz = log_partition_functions(spec)
    return math.exp(lz0), math.exp(lz)


def free_energy_change(spec: ChainSpec) -> float:
    """``Delta F_N = (1/beta) sum_j ln[sinh(beta mu_j/2) / sinh(beta omega/2)]``.

    At ``beta = inf`` the zero-point shift ``sum_j (mu_j - omega)/2``.
    """
    nm = normal_modes(spec)
    if spec.zero_temperature:
        return float(np.sum(nm.mus - spec.omega) / 2.0)
    half_b = 0.5 * spec.beta
    diff = _log_two_sinh(half_b * nm.mus) - _log_two_sinh(half_b * spec.omega)
    return float(np.sum(diff) / spec.beta)


def classical_lag(spec: ChainSpec) -> float:
    """High-temperature limit ``(N-1) g0/omega - (1/2) sum_j ln(lambda_j/omega)``."""
    nm = normal_modes(spec)
    return (spec.n_modes - 1) * spec.g0 / spec.omega - 0.5 * float(np.sum(np.log(nm.lambdas / spec.omega)))


def _lag_closed_form(spec: ChainSpec) -> float:
    nm = normal_modes(spec)
    n, b = spec.n_modes, spec.beta
    lead = (n - 1) * (0.5 * b * spec.g0 * spec.variance + float(_log_two_sinh(0.5 * b * spec.omega)))
    return lead - float(np.sum(_log_two_sinh(0.5 * b * nm.mus[1:])))


def nonequilibrium_lag(spec: ChainSpec, with_jarzynski: bool = True) -> ThermoReport:
    """``L = beta (<W> - Delta F)`` from its closed form, with the classical/quantum split."""
    w = average_work(spec)
    df = free_energy_change(spec)
    lc = classical_lag(spec)
    if spec.zero_temperature:
        lag = math.inf if w > df else 0.0
        return ThermoReport(w, df, lag, lc, lag - lc, math.nan)
    lag = _lag_closed_form(spec)
    resid = jarzynski_check(spec) if with_jarzynski else math.nan
    return ThermoReport(w, df, lag, lc, lag - lc, resid)


def jarzynski_check(spec: ChainSpec) -> float:
    """``|chi(i beta) exp(beta Delta F) - 1|`` with ``chi`` continued up the imaginary axis."""
    if spec.zero_temperature:
        raise InvalidSpecError("the Jarzynski check needs a finite temperature")
    chi = chi_at(spec, 1j * spec.beta)
    return abs(chi * math.exp(spec.beta * free_energy_change(spec)) - 1.0)


def rwa_statistics(spec: ChainSpec) -> RwaStatistics:
    """Work statistics of a quench of the ``x1 p2 - p1 x2`` coupling.

    The coupling commutes with the free Hamiltonian, so the mean work is
    zero and ``<W^2> = g0^2 <(x1 p2 - p1 x2)^2> = g0^2 (V^2 - 1)/8``;
    hence ``chi(u) = 1 - g0^2 (V^2 - 1) u^2 / 16 + O(u^3)``.
    """
    build_h2(spec)  # enforces N = 2 and the stability bound
    v = spec.variance
    second = spec.g0 ** 2 * (v * v - 1.0) / 8.0
    return RwaStatistics(avg_work=0.0, second_moment=second, chi_u2_coefficient=-second / 2.0)
