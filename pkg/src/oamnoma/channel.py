"""Line-of-sight channel between two coaxial uniform circular arrays.

Element ``n`` of the transmit array and element ``p`` of the receive array sit
at the same angular positions ``2*pi*n/N`` on circles of radius ``r_tx`` and
``r_rx`` separated by an axial distance ``d``.  The resulting N x N channel is
circulant, so its eigenvectors are the OAM phase ramps and its eigenvalues are
the per-mode gains.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np


class PhaseDistanceMode(str, enum.Enum):
    """How the element-pair distance is computed.

    ``COSINE`` is the law-of-cosines distance between two points on coaxial
    circles.  ``LITERAL`` multiplies the cross term by the raw angle instead of
    its cosine; it breaks the circulant structure and exists only so the
    difference can be inspected.
    """

    COSINE = "cosine"
    LITERAL = "literal"


@dataclass(frozen=True)
class UcaGeometry:
    element_count: int
    radius_tx: float
    radius_rx: float
    axial_distance: float

    def __post_init__(self):
        problems = geometry_problems(
            self.element_count, self.radius_tx, self.radius_rx, self.axial_distance
        )
        if problems:
            raise ValueError("invalid UCA geometry: " + "; ".join(problems))


def geometry_problems(element_count, radius_tx, radius_rx, axial_distance) -> list[str]:
    """Return human-readable invariant violations (empty when valid)."""
    problems = []
    if int(element_count) != element_count or element_count < 1:
        problems.append(f"element_count must be an integer >= 1, got {element_count!r}")
    if not radius_tx > 0:
        problems.append(f"radius_tx must be > 0, got {radius_tx!r}")
    if not radius_rx > 0:
        problems.append(f"radius_rx must be > 0, got {radius_rx!r}")
    if not axial_distance > 0:
        problems.append(f"axial_distance must be > 0, got {axial_distance!r}")
    elif radius_tx > 0 and radius_rx > 0 and not axial_distance > radius_tx + radius_rx:
        problems.append(
            f"axial_distance ({axial_distance!r}) must exceed radius_tx + radius_rx "
            f"({radius_tx + radius_rx!r})"
        )
    return problems


@dataclass(frozen=True)
class PropagationParams:
    wavelength: float
    antenna_gain_constant: float = 1.0
    wavenumber: float = field(init=False)

    def __post_init__(self):
        if not self.wavelength > 0:
            raise ValueError(f"wavelength must be > 0, got {self.wavelength!r}")
        if not self.antenna_gain_constant > 0:
            raise ValueError(
                f"antenna_gain_constant must be > 0, got {self.antenna_gain_constant!r}"
            )
        object.__setattr__(self, "wavenumber", 2.0 * np.pi / self.wavelength)


@dataclass(frozen=True, eq=False)
class LinkChannel:
    """One BS-to-user link.

    ``matrix[p, n]`` is the coefficient from transmit element ``n`` to receive
    element ``p``.  ``mode_eigenvalues`` is the plain (un-normalised) DFT of
    row 0, which is exactly the gain seen by mode ``l`` after unitary
    precoding and demultiplexing.
    """

    geometry: Optional[UcaGeometry]
    matrix: np.ndarray
    mode_eigenvalues: np.ndarray
    mode_gains: np.ndarray

    @classmethod
    def from_matrix(cls, matrix, geometry: Optional[UcaGeometry] = None) -> "LinkChannel":
        matrix = np.array(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"channel matrix must be square, got shape {matrix.shape}")
        matrix.setflags(write=False)
        eigenvalues = np.fft.fft(matrix[0])
        eigenvalues.setflags(write=False)
        gains = np.abs(eigenvalues) ** 2
        gains.setflags(write=False)
        return cls(geometry, matrix, eigenvalues, gains)

    @property
    def element_count(self) -> int:
        return self.matrix.shape[0]

    @property
    def singular_values(self) -> np.ndarray:
        """Per-mode singular values ``|xi_l|`` (the matrix is normal)."""
        return np.abs(self.mode_eigenvalues)


def _check_index(name, index, n):
    if not (0 <= index < n) or int(index) != index:
        raise ValueError(f"{name} must be an integer in [0, {n}), got {index!r}")


def element_phase_distance(
    geometry: UcaGeometry,
    tx_index: int,
    rx_index: int,
    mode: PhaseDistanceMode | str = PhaseDistanceMode.COSINE,
) -> float:
    """Distance between transmit element ``tx_index`` and receive element ``rx_index``."""
    n = geometry.element_count
    _check_index("tx_index", tx_index, n)
    _check_index("rx_index", rx_index, n)
    mode = PhaseDistanceMode(mode)
    r_tx, r_rx, d = geometry.radius_tx, geometry.radius_rx, geometry.axial_distance

    if mode is PhaseDistanceMode.COSINE:
        # Reduce mod N first so the result depends on (n - p) mod N bit-for-bit.
        phi = 2.0 * np.pi * ((tx_index - rx_index) % n) / n
        # (r_tx - r_rx)^2 + 2 r_tx r_rx (1 - cos phi) avoids cancellation when
        # the radii are small against d.
        radial = (r_tx - r_rx) ** 2 + 4.0 * r_tx * r_rx * np.sin(phi / 2.0) ** 2
        return float(np.sqrt(d * d + radial))

    phi = 2.0 * np.pi * (tx_index - rx_index) / n
    radicand = d * d + r_tx**2 + r_rx**2 - 2.0 * r_tx * r_rx * phi
    if radicand <= 0:
        raise ValueError(
            f"literal phase distance is imaginary for pair ({tx_index}, {rx_index}); "
            "radii are too large for this axial distance"
        )
    return float(np.sqrt(radicand))


def channel_coefficient(
    params: PropagationParams,
    geometry: UcaGeometry,
    tx_index: int,
    rx_index: int,
    mode: PhaseDistanceMode | str = PhaseDistanceMode.COSINE,
) -> complex:
    """Free-space coefficient ``beta * lambda / (4 pi d) * exp(j k d_np)``.

    The amplitude uses the axial distance of the link; only the phase uses the
    element-pair distance.
    """
    amplitude = (
        params.antenna_gain_constant * params.wavelength / (4.0 * np.pi * geometry.axial_distance)
    )
    d_np = element_phase_distance(geometry, tx_index, rx_index, mode)
    return complex(amplitude * np.exp(1j * params.wavenumber * d_np))


def build_link(
    params: PropagationParams,
    geometry: UcaGeometry,
    mode: PhaseDistanceMode | str = PhaseDistanceMode.COSINE,
) -> LinkChannel:
    n = geometry.element_count
    matrix = np.empty((n, n), dtype=complex)
    for p in range(n):
        for tx in range(n):
            matrix[p, tx] = channel_coefficient(params, geometry, tx, p, mode)
    return LinkChannel.from_matrix(matrix, geometry)
