"""Hamiltonians of the open harmonic chain and their normal modes.

Quadratures follow ``x = (a + a^dag)/2``, ``p = (a - a^dag)/(2i)`` so that
``omega * (x**2 + p**2) = omega * (a^dag a + 1/2)``.  A Hamiltonian is stored as
the symmetric coefficient matrix ``H`` of ``r^T H r`` with
``r = (x_1..x_N, p_1..p_N)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import CouplingTooStrongError, InvalidSpecError

__all__ = [
    "ChainSpec",
    "QuadraticForm",
    "NormalModeData",
    "build_h1",
    "build_h2",
    "spectrum",
    "normal_modes",
]


@dataclass(frozen=True)
class ChainSpec:
    """Physical parameters of the chain and of the sudden quench.

    ``beta = math.inf`` selects the zero-temperature limit; quantities that
    have a finite limit are then returned from their limiting expressions.
    """

    n_modes: int = 2
    omega: float = 1.0
    g0: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if int(self.n_modes) != self.n_modes or self.n_modes < 2:
            raise InvalidSpecError(f"n_modes must be an integer >= 2, got {self.n_modes!r}")
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise InvalidSpecError(f"omega must be positive and finite, got {self.omega!r}")
        if not (math.isfinite(self.g0) and self.g0 >= 0):
            raise InvalidSpecError(f"g0 must be non-negative and finite, got {self.g0!r}")
        if math.isnan(self.beta) or self.beta <= 0:
            raise InvalidSpecError(f"beta must be positive, got {self.beta!r}")
        object.__setattr__(self, "n_modes", int(self.n_modes))

    @property
    def zero_temperature(self) -> bool:
        return math.isinf(self.beta)

    @property
    def variance(self) -> float:
        """Thermal quadrature variance ``V = 2*nbar + 1 = coth(beta*omega/2)``."""
        if self.zero_temperature:
            return 1.0
        return 1.0 / math.tanh(0.5 * self.beta * self.omega)

    @property
    def nbar(self) -> float:
        if self.zero_temperature:
            return 0.0
        return 1.0 / math.expm1(self.beta * self.omega)

    def replace(self, **changes) -> "ChainSpec":
        values = self.to_dict()
        values.update(changes)
        return ChainSpec(**values)

    def to_dict(self) -> dict:
        return {"n_modes": self.n_modes, "omega": self.omega, "g0": self.g0, "beta": self.beta}


@dataclass(frozen=True)
class QuadraticForm:
    """Coefficient blocks of ``x^T V x + p^T K p + x^T C p + p^T C^T x``."""

    v_block: np.ndarray
    k_block: np.ndarray
    xp_block: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.xp_block is None:
            object.__setattr__(self, "xp_block", np.zeros_like(self.v_block))

    @property
    def n_modes(self) -> int:
        return self.v_block.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        """Full symmetric ``2N x 2N`` coefficient matrix."""
        return np.block([[self.v_block, self.xp_block], [self.xp_block.T, self.k_block]])

    def generator(self) -> np.ndarray:
        """Matrix ``A`` of the Heisenberg flow ``dr/dt = A r``."""
        n = self.n_modes
        omega_form = np.block([[np.zeros((n, n)), np.eye(n)], [-np.eye(n), np.zeros((n, n))]])
        return omega_form @ self.matrix

    def eigenfrequencies(self) -> np.ndarray:
        """Normal-mode frequencies, ascending.

        Eigenvalues of the flow generator come in pairs ``+-i*nu``; a
        non-negligible real part means the quadratic form is not bounded
        below and the mode is dynamically unstable.
        """
        ev = np.linalg.eigvals(self.generator())
        if np.max(np.abs(ev.real)) > 1e-9 * max(1.0, np.max(np.abs(ev))):
            raise CouplingTooStrongError("quadratic form has unstable (non-oscillatory) modes")
        nu = np.sort(ev.imag[ev.imag > 0])
        return nu


def build_h1(spec: ChainSpec) -> QuadraticForm:
    """Hooke-like chain ``omega*sum(x^2+p^2) + g0*sum (x_j - x_{j+1})^2``."""
    n, w, g = spec.n_modes, spec.omega, spec.g0
    diag = np.full(n, w + 2.0 * g)
    diag[0] = diag[-1] = w + g
    v = np.diag(diag) - g * (np.eye(n, k=1) + np.eye(n, k=-1))
    return QuadraticForm(v_block=v, k_block=w * np.eye(n))


def build_h2(spec: ChainSpec) -> QuadraticForm:
    """Two oscillators with the excitation-exchanging ``g0*(x1 p2 - p1 x2)`` coupling.

    Raises :class:`CouplingTooStrongError` when ``g0 >= 2*omega``, where one
    normal-mode frequency ``omega - g0/2`` stops being positive.
    """
    if spec.n_modes != 2:
        raise InvalidSpecError("the x1*p2 - p1*x2 model is defined for two oscillators")
    if spec.g0 >= 2.0 * spec.omega:
        raise CouplingTooStrongError(
            f"g0={spec.g0} must be below 2*omega={2.0 * spec.omega} for a bounded spectrum"
        )
    w, g = spec.omega, spec.g0
    xp = 0.5 * g * np.array([[0.0, 1.0], [-1.0, 0.0]])
    return QuadraticForm(v_block=w * np.eye(2), k_block=w * np.eye(2), xp_block=xp)


def spectrum(spec: ChainSpec) -> np.ndarray:
    """Closed-form eigenvalues ``omega + 2 g0 (1 - cos(pi (j-1)/N))`` of the potential matrix."""
    j = np.arange(spec.n_modes)
    lam = spec.omega + 2.0 * spec.g0 * (1.0 - np.cos(np.pi * j / spec.n_modes))
    lam[0] = spec.omega
    return lam


@dataclass(frozen=True)
class NormalModeData:
    lambdas: np.ndarray
    mus: np.ndarray
    p_matrix: np.ndarray
    squeeze_params: np.ndarray


def _fix_column_signs(p: np.ndarray) -> np.ndarray:
    # largest-magnitude entry of each column positive (first one on ties)
    idx = np.argmax(np.abs(p) - 1e-12 * np.arange(p.shape[0])[:, None], axis=0)
    signs = np.sign(p[idx, np.arange(p.shape[1])])
    return p * signs


def normal_modes(spec: ChainSpec) -> NormalModeData:
    """Orthogonal mode mixer ``P`` with ``P^T V P = diag(lambda)``.

    Mode frequencies are ``mu_j = sqrt(omega*lambda_j)`` and mode ``j`` needs
    single-mode squeezing ``r_j = log(mu_j/omega)/4`` to turn
    ``lambda_j X^2 + omega P^2`` into ``mu_j (X'^2 + P'^2)``.
    """
    lam = spectrum(spec)
    n = spec.n_modes
    if spec.g0 == 0.0:
        p = np.eye(n)
    else:
        v = build_h1(spec).v_block
        _, vecs = linalg.eigh_tridiagonal(np.diag(v).copy(), np.diag(v, 1).copy())
        p = _fix_column_signs(vecs)
    mus = spec.omega * np.sqrt(lam / spec.omega)
    r = 0.25 * np.log(mus / spec.omega)
    return NormalModeData(lambdas=lam, mus=mus, p_matrix=p, squeeze_params=r)
