"""Triangular (Reck) decomposition of real orthogonal mode mixers."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpecError
from .symplectic import BeamSplitter, OpticalNetwork, Rotation, Squeezer

__all__ = ["NetworkPlan", "reck_decompose", "reconstruct", "complementary_angle"]


@dataclass(frozen=True)
class NetworkPlan:
    network: OpticalNetwork
    source_matrix: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.network.n_modes

    @property
    def mixers(self) -> list:
        return [el for el in self.network.elements if isinstance(el, BeamSplitter)]

    def source_hash(self) -> str:
        data = np.ascontiguousarray(self.source_matrix, dtype="<f8").tobytes()
        return hashlib.sha256(data).hexdigest()

    def to_dict(self) -> dict:
        d = self.network.to_dict()
        d["source_sha256"] = self.source_hash()
        d["source_matrix"] = self.source_matrix.tolist()
        return d

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> "NetworkPlan":
        net = OpticalNetwork.from_dict(d)
        src = np.array(d["source_matrix"], dtype=float)
        plan = cls(net, src)
        if "source_sha256" in d and d["source_sha256"] != plan.source_hash():
            raise InvalidSpecError("source matrix does not match its recorded hash")
        return plan


def complementary_angle(theta: float) -> float:
    """Mixing angle measured from the reflected port, ``pi/2 - theta``.

    Tables that parametrise a beam splitter by its reflection rather than
    its transmission amplitude quote this angle.
    """
    return 0.5 * math.pi - theta


def reck_decompose(p, atol: float = 1e-10) -> NetworkPlan:
    """Factor a real orthogonal matrix into two-mode mixers and sign flips.

    Columns are combined pairwise, ``(i, j)`` for ``j = 1..N-1`` and
    ``i = 0..j-1`` in that order, each Givens rotation nulling entry
    ``(i, j)`` against the diagonal pivot ``(i, i)``.  What remains is a
    diagonal of ``+-1``; each ``-1`` becomes a rotation by ``pi``.  The
    returned network reproduces ``p`` as its Heisenberg ``x``-map.
    """
    p = np.asarray(p)
    if np.iscomplexobj(p):
        if np.max(np.abs(p.imag)) > atol:
            raise InvalidSpecError("only real orthogonal matrices are supported")
        p = p.real
    p = np.array(p, dtype=float)
    n = p.shape[0]
    if p.ndim != 2 or p.shape != (n, n):
        raise InvalidSpecError("mode mixer must be square")
    if np.max(np.abs(p.T @ p - np.eye(n))) >= atol:
        raise InvalidSpecError("matrix is not orthogonal")

    m = p.copy()
    givens = []
    for j in range(1, n):
        for i in range(j):
            a, b = m[i, i], m[i, j]
            if b == 0.0:
                continue
            theta = math.atan2(b, a)
            c, s = math.cos(theta), math.sin(theta)
            ci, cj = m[:, i].copy(), m[:, j].copy()
            m[:, i] = c * ci + s * cj
            m[:, j] = -s * ci + c * cj
            m[i, j] = 0.0
            givens.append((i, j, theta))

    elements = [BeamSplitter(i, j, -theta) for i, j, theta in givens]
    signs = np.sign(np.diag(m))
    elements += [Rotation(k, math.pi) for k in range(n) if signs[k] < 0]
    return NetworkPlan(OpticalNetwork(n, tuple(elements)), p)


def reconstruct(plan) -> np.ndarray:
    """Ladder-operator matrix ``a -> U a`` of a passive network (real when possible)."""
    network = plan.network if isinstance(plan, NetworkPlan) else plan
    n = network.n_modes
    u = np.eye(n, dtype=complex)
    for el in network.elements:
        if isinstance(el, Squeezer):
            raise InvalidSpecError("squeezers have no passive N x N representation")
        step = np.eye(n, dtype=complex)
        if isinstance(el, BeamSplitter):
            c, s = math.cos(el.theta), math.sin(el.theta)
            i, j = el.mode_i, el.mode_j
            step[i, i], step[i, j] = c, -np.exp(-1j * el.phi) * s
            step[j, i], step[j, j] = np.exp(1j * el.phi) * s, c
        else:
            step[el.mode, el.mode] = np.exp(-1j * el.theta)
        u = step @ u
    if np.max(np.abs(u.imag)) < 1e-13:
        return u.real.copy()
    return u
