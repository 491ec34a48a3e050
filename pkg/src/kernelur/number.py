"""Photon-number (Hermite–Gauss) decomposition of sampled signals."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InsufficientBasisError, ResolutionError
from .grid import HERMITE_MAX, Grid, SampledSignal, hermite_functions

RESIDUAL_TOL = 1e-8


@lru_cache(maxsize=16)
def _basis(grid: Grid, n_max: int) -> np.ndarray:
    table = hermite_functions(grid.x, n_max)
    table.flags.writeable = False
    return table


def number_basis(grid: Grid, n_max: int, representation: str = "position") -> np.ndarray:
    """Rows are the number eigenfunctions sampled on ``grid``.

    In the momentum representation ``<p|n> = (-i)^n psi_n(p)``.
    """
    table = _basis(grid, n_max)
    if representation == "position":
        return table
    if representation == "momentum":
        return table * ((-1j) ** np.arange(n_max + 1))[:, None]
    raise ValueError(f"unknown representation {representation!r}")


def _check_resolvable(grid: Grid, n_max: int) -> None:
    if not 0 <= n_max <= HERMITE_MAX:
        raise ResolutionError(f"n_max must lie in [0, {HERMITE_MAX}], got {n_max}")
    turning = math.sqrt(2 * n_max + 1)
    if grid.half_width < turning + 4:
        raise ResolutionError(
            f"half_width {grid.half_width} cannot hold psi_{n_max} (needs >= {turning + 4:.3f})"
        )
    if turning > grid.nyquist / 2:
        raise ResolutionError(f"spacing {grid.spacing} is too coarse for psi_{n_max}")


@dataclass(frozen=True, eq=False)
class NumberDecomposition:
    coeffs: np.ndarray
    truncation_residual: float
    grid: Grid
    representation: str = "position"

    @property
    def n_max(self) -> int:
        return len(self.coeffs) - 1

    @property
    def weights(self) -> np.ndarray:
        return np.abs(self.coeffs) ** 2

    def to_dict(self) -> dict:
        return {
            "n_max": self.n_max,
            "residual": self.truncation_residual,
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
        }


def decompose(f: SampledSignal, n_max: int, representation: str = "position") -> NumberDecomposition:
    _check_resolvable(f.grid, n_max)
    basis = number_basis(f.grid, n_max, representation)
    coeffs = (np.conj(basis) @ f.values) * f.grid.spacing
    energy = float(np.sum(np.abs(f.values) ** 2) * f.grid.spacing)
    residual = energy - float(np.sum(np.abs(coeffs) ** 2))
    coeffs.flags.writeable = False
    return NumberDecomposition(coeffs, residual, f.grid, representation)


def number_moments(d: NumberDecomposition, renormalize: bool = True,
                   max_residual: float = RESIDUAL_TOL) -> tuple[float, float]:
    """Mean and variance of ``n`` under the weights ``|C_n|^2``.

    Weights are divided by their sum unless ``renormalize`` is false, in which
    case the raw (truncation-biased) moments are returned.
    """
    if d.truncation_residual > max_residual:
        raise InsufficientBasisError(
            f"truncation residual {d.truncation_residual:.3g} exceeds {max_residual:g}; raise n_max"
        )
    w = d.weights
    total = w.sum() if renormalize else 1.0
    n = np.arange(len(w))
    mean = float(np.sum(n * w) / total)
    second = float(np.sum(n * n * w) / total)
    return mean, max(second - mean * mean, 0.0)


def reconstruct(d: NumberDecomposition, grid: Grid | None = None) -> SampledSignal:
    grid = d.grid if grid is None else grid
    _check_resolvable(grid, d.n_max)
    basis = number_basis(grid, d.n_max, d.representation)
    return SampledSignal(grid, d.coeffs @ basis, "reconstructed")


def momentum_matrix(n_max: int) -> np.ndarray:
    """Truncated matrix of ``p = i (a^dagger - a) / sqrt(2)`` in the number basis."""
    k = np.sqrt(np.arange(1, n_max + 1) / 2.0)
    return np.diag(1j * k, -1) + np.diag(-1j * k, 1)


def pn_anticommutator(d: NumberDecomposition) -> float:
    """``<{p, n}>`` evaluated in coefficient space with the tridiagonal momentum matrix."""
    if d.representation != "position":
        raise ValueError("coefficient-space momentum assumes position-representation coefficients")
    c = np.asarray(d.coeffs)
    n = np.arange(len(c))
    pm = momentum_matrix(d.n_max)
    z = np.conj(c) @ (pm @ (n * c)) + np.conj(c) @ (n * (pm @ c))
    return float(z.real)
