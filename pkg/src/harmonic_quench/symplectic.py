"""Gaussian states, symplectic maps and displaced-squeezed-state overlaps.

Conventions
-----------
* Phase-space vectors are ordered ``(x_1..x_N, p_1..p_N)`` and covariance
  matrices are normalised so that the vacuum has ``cov = 1``.
* A Gaussian unitary ``U`` is represented by the matrix ``S`` of its
  Heisenberg action ``U^dag r U = S r``.  Operator products map to matrix
  products in the same order, and a network applies its elements in list
  order, so its matrix is ``S_last @ ... @ S_first``.
* ``Squeezer(mode, r)`` stretches ``x`` by ``exp(2r)`` and compresses ``p``
  by ``exp(-2r)`` in the Heisenberg picture.  In ladder-operator language it
  is ``exp[r (a^dag**2 - a**2)]``, i.e. a displaced-squeezed state with
  squeezing amplitude ``xi = 2r``.
* ``|zeta; xi> = D(zeta) S(xi) |0>`` with ``D(z) = exp(z a^dag - z* a)`` and
  ``S(xi) = exp[(xi a^dag**2 - xi* a**2)/2]``, for which
  ``S(xi) D(z) S(xi)^dag = D(z cosh|xi| + z* e^{i arg xi} sinh|xi|)``.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy import linalg

from .chain import ChainSpec, normal_modes
from .errors import InvalidSpecError

__all__ = [
    "symplectic_form",
    "GaussianState",
    "SymplecticOp",
    "thermal_state",
    "beam_splitter",
    "rotation",
    "squeezer",
    "passive_symplectic",
    "BeamSplitter",
    "Rotation",
    "Squeezer",
    "OpticalNetwork",
    "propagator_network",
    "DisplacedSqueezedState",
    "overlap_dss",
    "mode_echo",
    "coherent_echo",
    "coherent_transform",
]


def symplectic_form(n_modes: int) -> np.ndarray:
    z = np.zeros((n_modes, n_modes))
    e = np.eye(n_modes)
    return np.block([[z, e], [-e, z]])


@dataclass(frozen=True)
class GaussianState:
    displacement: np.ndarray
    cov: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.cov.shape[0] // 2

    def symplectic_eigenvalues(self) -> np.ndarray:
        """Ascending symplectic spectrum (moduli of the eigenvalues of ``i Sigma cov``)."""
        ev = np.linalg.eigvals(1j * symplectic_form(self.n_modes) @ self.cov)
        return np.sort(np.abs(ev))[::2]

    def is_physical(self, tol: float = 1e-10) -> bool:
        if not np.allclose(self.cov, self.cov.T, atol=tol):
            return False
        herm = self.cov + 1j * symplectic_form(self.n_modes)
        return bool(np.linalg.eigvalsh(herm).min() >= -tol)

    def transform(self, op: Union["SymplecticOp", "OpticalNetwork"]) -> "GaussianState":
        if isinstance(op, OpticalNetwork):
            op = op.symplectic()
        s = op.matrix
        return GaussianState(s @ self.displacement + op.displacement_shift, s @ self.cov @ s.T)


def thermal_state(spec: ChainSpec) -> GaussianState:
    """Pre-quench equilibrium state: ``N`` independent thermal modes at frequency omega."""
    n = spec.n_modes
    return GaussianState(np.zeros(2 * n), spec.variance * np.eye(2 * n))


@dataclass(frozen=True)
class SymplecticOp:
    matrix: np.ndarray
    displacement_shift: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.displacement_shift is None:
            object.__setattr__(self, "displacement_shift", np.zeros(self.matrix.shape[0]))

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2

    def then(self, other: "SymplecticOp") -> "SymplecticOp":
        """Apply ``self`` first, then ``other``."""
        return SymplecticOp(
            other.matrix @ self.matrix,
            other.matrix @ self.displacement_shift + other.displacement_shift,
        )

    def is_symplectic(self, tol: float = 1e-10) -> bool:
        om = symplectic_form(self.n_modes)
        return bool(np.max(np.abs(self.matrix @ om @ self.matrix.T - om)) < tol)


def passive_symplectic(u: np.ndarray) -> np.ndarray:
    """Phase-space matrix of the passive map ``a -> u a`` (``u`` unitary)."""
    u = np.asarray(u, dtype=complex)
    re, im = u.real, u.imag
    return np.block([[re, -im], [im, re]])


def beam_splitter(theta: float, phi: float = 0.0) -> SymplecticOp:
    """Two-mode mixer ``a1 -> cos(t) a1 - e^{-i phi} sin(t) a2``, ``a2 -> e^{i phi} sin(t) a1 + cos(t) a2``."""
    c, s = math.cos(theta), math.sin(theta)
    u = np.array([[c, -cmath.exp(-1j * phi) * s], [cmath.exp(1j * phi) * s, c]])
    return SymplecticOp(passive_symplectic(u))


def rotation(theta: float) -> SymplecticOp:
    """Phase-space rotation generated by ``theta (x^2 + p^2)``: ``a -> e^{-i theta} a``."""
    c, s = math.cos(theta), math.sin(theta)
    return SymplecticOp(np.array([[c, s], [-s, c]]))


def squeezer(r: float) -> SymplecticOp:
    return SymplecticOp(np.diag([math.exp(2.0 * r), math.exp(-2.0 * r)]))


def _embed(op: SymplecticOp, modes: Sequence[int], n_modes: int) -> np.ndarray:
    k = len(modes)
    idx = list(modes) + [m + n_modes for m in modes]
    full = np.eye(2 * n_modes)
    full[np.ix_(idx, idx)] = op.matrix
    assert op.matrix.shape == (2 * k, 2 * k)
    return full


@dataclass(frozen=True)
class BeamSplitter:
    mode_i: int
    mode_j: int
    theta: float
    phi: float = 0.0

    @property
    def modes(self):
        return (self.mode_i, self.mode_j)

    def op(self) -> SymplecticOp:
        return beam_splitter(self.theta, self.phi)

    def inverse(self) -> "BeamSplitter":
        return BeamSplitter(self.mode_i, self.mode_j, -self.theta, self.phi)

    def to_dict(self) -> dict:
        return {"type": "beam_splitter", "modes": [self.mode_i, self.mode_j],
                "theta": self.theta, "phi": self.phi}


@dataclass(frozen=True)
class Rotation:
    mode: int
    theta: float

    @property
    def modes(self):
        return (self.mode,)

    def op(self) -> SymplecticOp:
        return rotation(self.theta)

    def inverse(self) -> "Rotation":
        return Rotation(self.mode, -self.theta)

    def to_dict(self) -> dict:
        return {"type": "rotation", "mode": self.mode, "theta": self.theta}


@dataclass(frozen=True)
class Squeezer:
    mode: int
    r: float

    @property
    def modes(self):
        return (self.mode,)

    def op(self) -> SymplecticOp:
        return squeezer(self.r)

    def inverse(self) -> "Squeezer":
        return Squeezer(self.mode, -self.r)

    def to_dict(self) -> dict:
        return {"type": "squeezer", "mode": self.mode, "r": self.r}


Element = Union[BeamSplitter, Rotation, Squeezer]


def _element_from_dict(d: dict) -> Element:
    kind = d.get("type")
    if kind == "beam_splitter":
        i, j = d["modes"]
        return BeamSplitter(int(i), int(j), float(d["theta"]), float(d.get("phi", 0.0)))
    if kind == "rotation":
        return Rotation(int(d["mode"]), float(d["theta"]))
    if kind == "squeezer":
        return Squeezer(int(d["mode"]), float(d["r"]))
    raise ValueError(f"unknown network element type {kind!r}")


@dataclass(frozen=True)
class OpticalNetwork:
    """Ordered list of linear-optics elements, applied first to last."""

    n_modes: int
    elements: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        for el in self.elements:
            for m in el.modes:
                if not 0 <= m < self.n_modes:
                    raise InvalidSpecError(f"element {el} references mode {m} outside 0..{self.n_modes - 1}")
            if isinstance(el, BeamSplitter) and el.mode_i == el.mode_j:
                raise InvalidSpecError(f"beam splitter {el} acts twice on the same mode")

    def __len__(self):
        return len(self.elements)

    def __add__(self, other: "OpticalNetwork") -> "OpticalNetwork":
        if other.n_modes != self.n_modes:
            raise InvalidSpecError("cannot concatenate networks on different mode counts")
        return OpticalNetwork(self.n_modes, self.elements + other.elements)

    def inverse(self) -> "OpticalNetwork":
        return OpticalNetwork(self.n_modes, tuple(el.inverse() for el in reversed(self.elements)))

    def symplectic(self) -> SymplecticOp:
        s = np.eye(2 * self.n_modes)
        for el in self.elements:
            s = _embed(el.op(), el.modes, self.n_modes) @ s
        return SymplecticOp(s)

    def to_dict(self) -> dict:
        return {"n_modes": self.n_modes, "elements": [el.to_dict() for el in self.elements]}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> "OpticalNetwork":
        return cls(int(d["n_modes"]), tuple(_element_from_dict(e) for e in d["elements"]))

    @classmethod
    def from_json(cls, text: str) -> "OpticalNetwork":
        return cls.from_dict(json.loads(text))


def propagator_network(spec: ChainSpec, t: float) -> OpticalNetwork:
    """Linear-optics network equal to ``exp(-i H_1(g0) t)``.

    The sequence is mode mixer, squeezers on modes ``2..N``, free rotations
    by ``mu_j t``, inverse squeezers, inverse mixer.  The mixer realises the
    Heisenberg map ``x -> P^T x`` as a Reck cascade.
    """
    from .interferometer import reck_decompose

    if t < 0:
        raise InvalidSpecError("propagation time must be non-negative")
    n = spec.n_modes
    nm = normal_modes(spec)
    mixer = reck_decompose(nm.p_matrix.T).network
    squeeze = OpticalNetwork(n, tuple(Squeezer(j, nm.squeeze_params[j]) for j in range(1, n)
                                      if nm.squeeze_params[j] != 0.0))
    rotate = OpticalNetwork(n, tuple(Rotation(j, nm.mus[j] * t) for j in range(n)))
    return mixer + squeeze + rotate + squeeze.inverse() + mixer.inverse()


@dataclass(frozen=True)
class DisplacedSqueezedState:
    zeta: complex
    xi: complex


def _dss_bargmann(state: DisplacedSqueezedState):
    # D(zeta) S(xi)|0> = K exp[(t/2) a^dag^2 + b a^dag] |0>
    r = abs(state.xi)
    t = cmath.exp(1j * cmath.phase(state.xi)) * math.tanh(r) if r > 0 else 0j
    z = complex(state.zeta)
    log_k = -0.5 * math.log(math.cosh(r)) - 0.5 * abs(z) ** 2 + 0.5 * t * z.conjugate() ** 2
    return log_k, t, z - t * z.conjugate()


def _bargmann_overlap(log_ka, ta, ba, log_kb, tb, bb):
    """``<psi_a|psi_b>`` for ``|psi> = exp(log_k) exp[(t/2) a^dag^2 + b a^dag]|0>``.

    Arguments broadcast as numpy arrays; ``ta`` must satisfy ``|ta| < 1``
    and the principal square root is used, which is continuous as long as
    ``Re(1 - conj(ta) tb) > 0``.
    """
    cta, cba = np.conj(ta), np.conj(ba)
    d = 1.0 - cta * tb
    expo = (cba ** 2 * tb + bb ** 2 * cta + 2.0 * cba * bb) / (2.0 * d)
    return np.exp(np.conj(log_ka) + log_kb + expo) / np.sqrt(d)


def overlap_dss(a: DisplacedSqueezedState, b: DisplacedSqueezedState) -> complex:
    """Inner product ``<zeta_a; xi_a | zeta_b; xi_b>`` including its phase."""
    return complex(_bargmann_overlap(*_dss_bargmann(a), *_dss_bargmann(b)))


def mode_echo(alpha, omega: float, mu: float, u):
    """Loschmidt echo of one normal mode prepared in the coherent state ``|alpha>``.

    Returns ``<alpha| exp(i u H_f) exp(-i u H_i) |alpha>`` for
    ``H_i = omega (X^2 + P^2)`` and ``H_f = lambda X^2 + omega P^2`` with
    ``mu = sqrt(omega*lambda)``.  The expression is entire in ``u``, so
    complex times (``u = i beta``) are allowed.  ``alpha`` and ``u``
    broadcast.
    """
    alpha = np.asarray(alpha, dtype=complex)
    u = np.asarray(u, dtype=complex)
    rho = 0.5 * math.log(mu / omega)  # ladder squeezing amplitude, twice the "degree" r
    c, tau = math.cosh(rho), math.tanh(rho)
    w = np.exp(-1j * omega * u)
    v = np.exp(1j * mu * u)
    norm = -0.5 * np.abs(alpha) ** 2 - 0.5 * math.log(c)
    # bra: S(rho)|alpha>;  ket: e^{i mu u n} S(rho) e^{-i omega u n}|alpha>
    log_ka = norm - 0.5 * tau * alpha ** 2
    log_kb = norm - 0.5 * tau * (alpha * w) ** 2
    overlap = _bargmann_overlap(log_ka, tau, alpha / c, log_kb, tau * v ** 2, alpha * w * v / c)
    return np.exp(0.5j * (mu - omega) * u) * overlap


def coherent_transform(p_matrix: np.ndarray, amplitudes) -> tuple:
    """Action of the passive mixer ``x -> P^T x`` on a product of coherent states.

    Returns ``(phase, beta)`` with ``beta = P^T alpha``.  The mixer is taken
    as the number-conserving unitary, which leaves the vacuum invariant, so
    the phase is zero.
    """
    p = np.asarray(p_matrix, dtype=float)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise InvalidSpecError("mode mixer must be square")
    if np.max(np.abs(p.T @ p - np.eye(p.shape[0]))) > 1e-10:
        raise InvalidSpecError("mode mixer is not orthogonal")
    alpha = np.asarray(amplitudes, dtype=complex)
    return 0.0, p.T @ alpha


def coherent_echo(spec: ChainSpec, alpha1, alpha2=None, u=0.0):
    """Loschmidt echo ``<alpha| e^{iuH_f} e^{-iuH_i} |alpha>`` of a coherent product state.

    For two oscillators call ``coherent_echo(spec, a1, a2, u)``; for longer
    chains pass the amplitudes stacked along the first axis as ``alpha1``
    and leave ``alpha2`` as ``None``.  The echo factorises over normal
    modes and the centre-of-mass mode contributes exactly one.
    """
    if alpha2 is not None:
        amps = np.array(np.broadcast_arrays(np.asarray(alpha1, complex), np.asarray(alpha2, complex)))
    else:
        amps = np.asarray(alpha1, dtype=complex)
    if amps.shape[:1] != (spec.n_modes,):
        raise InvalidSpecError(f"expected {spec.n_modes} coherent amplitudes, got shape {amps.shape}")
    nm = normal_modes(spec)
    _, beta = coherent_transform(nm.p_matrix, amps.reshape(spec.n_modes, -1))
    beta = beta.reshape(amps.shape)
    out = np.ones(np.broadcast_shapes(amps.shape[1:], np.shape(u)), dtype=complex)
    for j in range(1, spec.n_modes):
        out = out * mode_echo(beta[j], spec.omega, nm.mus[j], u)
    return out if out.ndim else complex(out)


def evolution_symplectic(form, t: float) -> np.ndarray:
    """Heisenberg matrix ``expm(A t)`` of ``exp(-i r^T H r t)``."""
    return linalg.expm(form.generator() * t)
