"""Mode-domain precoding and demultiplexing over a uniform circular array.

Both transforms carry a ``1/sqrt(N)`` factor so that, through a circulant
channel, mode ``l`` comes out scaled by exactly the plain DFT eigenvalue
``xi_l`` of the channel's generator row.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .channel import LinkChannel


@dataclass(frozen=True)
class ModeSet:
    active_modes: tuple[int, ...]
    element_count: int

    def __post_init__(self):
        modes = tuple(int(m) for m in self.active_modes)
        object.__setattr__(self, "active_modes", modes)
        if self.element_count < 1:
            raise ValueError(f"element_count must be >= 1, got {self.element_count}")
        if not modes:
            raise ValueError("mode set must not be empty")
        if len(set(modes)) != len(modes):
            raise ValueError(f"duplicate modes in {modes}")
        bad = [m for m in modes if not 0 <= m < self.element_count]
        if bad:
            raise ValueError(f"modes {bad} outside [0, {self.element_count - 1}]")

    @classmethod
    def full(cls, element_count: int) -> "ModeSet":
        return cls(tuple(range(element_count)), element_count)

    def __len__(self):
        return len(self.active_modes)

    def __iter__(self):
        return iter(self.active_modes)


def _phase_ramp(n_points: int, modes: Iterable[int], sign: float) -> np.ndarray:
    """``exp(sign * j 2 pi n l / N)`` with rows indexed by element, columns by mode."""
    n = np.arange(n_points)[:, None]
    l = np.asarray(list(modes))[None, :]
    # (n*l) mod N keeps the argument small so large N stays accurate.
    return np.exp(sign * 2j * np.pi * ((n * l) % n_points) / n_points)


def precode(symbols, modes: ModeSet) -> np.ndarray:
    """Superpose per-mode symbols onto the array elements.

    Returns ``s[n] = (1/sqrt(N)) * sum_l A_l exp(-j 2 pi n l / N)``.
    """
    symbols = np.asarray(symbols, dtype=complex)
    if symbols.shape != (len(modes),):
        raise ValueError(
            f"expected {len(modes)} symbols for modes {modes.active_modes}, got shape {symbols.shape}"
        )
    n = modes.element_count
    return _phase_ramp(n, modes.active_modes, -1.0) @ symbols / np.sqrt(n)


def demultiplex(received, mode: int) -> complex:
    """Project the per-element received samples onto OAM mode ``mode``.

    The projection uses the conjugate of the precoding phase ramp, i.e. the
    inverse unitary DFT, so precode followed by demultiplex is the identity.
    Noise is not added here.
    """
    received = np.asarray(received, dtype=complex)
    n = received.shape[0]
    if not 0 <= mode < n:
        raise ValueError(f"mode must be in [0, {n}), got {mode}")
    ramp = _phase_ramp(n, [mode], +1.0)[:, 0]
    return complex(received @ ramp / np.sqrt(n))


def demultiplex_all(received) -> np.ndarray:
    """Demultiplex every mode ``0..N-1`` at once."""
    received = np.asarray(received, dtype=complex)
    n = received.shape[0]
    return _phase_ramp(n, range(n), +1.0).T @ received / np.sqrt(n)


@dataclass(frozen=True)
class OracleResult:
    modes: tuple[int, ...]
    gains: np.ndarray
    mode_leakage: np.ndarray
    eigenvalue_errors: np.ndarray

    @property
    def leakage(self) -> float:
        return float(self.mode_leakage.max())

    @property
    def max_gain(self) -> float:
        return float(np.max(np.abs(self.gains)))

    @property
    def relative_leakage(self) -> float:
        top = self.max_gain
        if top > 0:
            return self.leakage / top
        return 0.0 if self.leakage == 0 else np.inf

    def passes(self, rtol: float = 1e-10) -> bool:
        return self.relative_leakage <= rtol and bool(np.all(self.eigenvalue_errors <= rtol))


def diagonalize_oracle(link: LinkChannel, modes: ModeSet) -> OracleResult:
    """Push a unit symbol on each active mode through the explicit channel matrix.

    ``gains[i]`` is the demultiplexed output on the injected mode and
    ``mode_leakage[i]`` the largest magnitude that shows up on any other mode
    (``leakage`` is the worst case over all injected modes).
    ``eigenvalue_errors`` compares each gain with ``link.mode_eigenvalues``,
    relative to the largest eigenvalue magnitude.
    """
    n = link.element_count
    if modes.element_count != n:
        raise ValueError(f"mode set is for N={modes.element_count}, link has N={n}")
    gains = np.empty(len(modes), dtype=complex)
    leakage = np.zeros(len(modes))
    for i, l in enumerate(modes):
        received = link.matrix @ precode([1.0], ModeSet((l,), n))
        out = demultiplex_all(received)
        gains[i] = out[l]
        others = np.delete(np.abs(out), l)
        if others.size:
            leakage[i] = others.max()
    scale = float(np.max(np.abs(link.mode_eigenvalues)))
    expected = link.mode_eigenvalues[list(modes)]
    errors = np.abs(gains - expected) / scale if scale > 0 else np.abs(gains - expected)
    return OracleResult(tuple(modes), gains, leakage, errors)
