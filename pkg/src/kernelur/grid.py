"""Uniform grids, sampled signals, quadrature and spectral differentiation.

Signals live on a half-open symmetric grid ``[-L, L)`` with ``N`` points.
Integrals use the periodic trapezoid rule (``h * sum``), which is spectrally
accurate for smooth integrands that have decayed at the grid edges, and the
momentum operator ``p = -i d/dx`` is applied by FFT differentiation.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    AliasingRiskError,
    IncompatibleGridsError,
    InvalidGridError,
    ResolutionError,
)

DECAY_TOL = 1e-10
EDGE_SAMPLES = 3
HERMITE_MAX = 64


@dataclass(frozen=True)
class Grid:
    n_points: int
    half_width: float

    def __post_init__(self):
        if int(self.n_points) != self.n_points or self.n_points < 8:
            raise InvalidGridError(f"need at least 8 grid points, got {self.n_points}")
        if not (self.half_width > 0 and math.isfinite(self.half_width)):
            raise InvalidGridError(f"half_width must be positive, got {self.half_width}")
        object.__setattr__(self, "n_points", int(self.n_points))
        object.__setattr__(self, "half_width", float(self.half_width))

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.n_points

    @property
    def x(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(self.n_points)

    @property
    def wavenumbers(self) -> np.ndarray:
        """Angular wavenumbers ``pi j / L`` in FFT order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.spacing)

    @property
    def nyquist(self) -> float:
        return math.pi / self.spacing


def make_grid(n_points: int, half_width: float) -> Grid:
    return Grid(n_points, half_width)


@dataclass(frozen=True, eq=False)
class SampledSignal:
    grid: Grid
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        values = np.array(self.values, dtype=complex)
        if values.shape != (self.grid.n_points,):
            raise InvalidGridError(
                f"signal has {values.shape} samples, grid has {self.grid.n_points}"
            )
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    def norm(self) -> float:
        return math.sqrt(inner_product(self, self).real)

    def normalized(self) -> "SampledSignal":
        n = self.norm()
        if n == 0:
            return self
        return self.with_values(self.values / n)

    def with_values(self, values, label=None) -> "SampledSignal":
        return SampledSignal(self.grid, values, self.label if label is None else label)

    def __add__(self, other):
        _check_same_grid(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        _check_same_grid(self, other)
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar):
        return self.with_values(self.values * scalar)

    __rmul__ = __mul__


def zeros(grid: Grid, label: str = "") -> SampledSignal:
    return SampledSignal(grid, np.zeros(grid.n_points, dtype=complex), label)


def pad(f: SampledSignal, n_points: int) -> SampledSignal:
    """Zero-pad ``f`` symmetrically onto a wider grid with the same spacing."""
    extra = n_points - f.grid.n_points
    if extra < 0 or extra % 2:
        raise InvalidGridError(f"cannot pad {f.grid.n_points} samples to {n_points}")
    if extra == 0:
        return f
    grid = Grid(n_points, f.grid.spacing * n_points / 2)
    values = np.zeros(n_points, dtype=complex)
    values[extra // 2: extra // 2 + f.grid.n_points] = f.values
    return SampledSignal(grid, values, f.label)


def _check_same_grid(f: SampledSignal, g: SampledSignal) -> None:
    if f.grid != g.grid:
        raise IncompatibleGridsError(f"signals live on different grids: {f.grid} vs {g.grid}")


def inner_product(f: SampledSignal, g: SampledSignal) -> complex:
    """Trapezoid approximation of the integral of conj(f) * g."""
    _check_same_grid(f, g)
    return complex(np.sum(np.conj(f.values) * g.values) * f.grid.spacing)


def l2_distance(f: SampledSignal, g: SampledSignal) -> float:
    _check_same_grid(f, g)
    d = f.values - g.values
    return math.sqrt(float(np.sum(np.abs(d) ** 2)) * f.grid.spacing)


def boundary_decay_ok(f: SampledSignal, tol: float = DECAY_TOL) -> bool:
    mag = np.abs(f.values)
    peak = mag.max()
    if peak == 0:
        return True
    edge = max(mag[:EDGE_SAMPLES].max(), mag[-EDGE_SAMPLES:].max())
    return bool(edge <= tol * peak)


def effective_support(f: SampledSignal, tol: float = DECAY_TOL) -> tuple[float, float]:
    """Smallest interval holding every sample with ``|f| > tol * max|f|``."""
    mag = np.abs(f.values)
    peak = mag.max()
    if peak == 0:
        return 0.0, 0.0
    idx = np.nonzero(mag > tol * peak)[0]
    x = f.grid.x
    return float(x[idx[0]]), float(x[idx[-1]])


def spectral_support(f: SampledSignal, tol: float = DECAY_TOL) -> tuple[float, float]:
    """Range of wavenumbers carrying spectral magnitude above ``tol`` (relative)."""
    spec = np.abs(np.fft.fft(f.values))
    peak = spec.max()
    if peak == 0:
        return 0.0, 0.0
    k = f.grid.wavenumbers[spec > tol * peak]
    return float(k.min()), float(k.max())


def spectral_derivative(f: SampledSignal, unsafe: bool = False) -> SampledSignal:
    """Apply the momentum operator ``(1/i) d/dx`` by FFT differentiation.

    The Nyquist mode is dropped so that the discrete operator is Hermitian
    and maps real signals to purely imaginary ones.
    """
    if not unsafe and not boundary_decay_ok(f):
        raise AliasingRiskError(
            "signal has not decayed at the grid edges; spectral derivative would wrap around"
        )
    k = f.grid.wavenumbers
    n = f.grid.n_points
    if n % 2 == 0:
        k = k.copy()
        k[n // 2] = 0.0
    deriv = np.fft.ifft(1j * k * np.fft.fft(f.values))
    return f.with_values(-1j * deriv)


def hermite_functions(x: np.ndarray, n_max: int) -> np.ndarray:
    """Orthonormal Hermite functions psi_0..psi_{n_max} evaluated at ``x``.

    Uses the normalized three-term recurrence, which stays finite far beyond
    the degree where the raw polynomials overflow.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if n_max >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for k in range(1, n_max):
        out[k + 1] = math.sqrt(2.0 / (k + 1)) * x * out[k] - math.sqrt(k / (k + 1)) * out[k - 1]
    return out


def hermite_function(n: int, x: np.ndarray) -> np.ndarray:
    return hermite_functions(x, n)[n]


# -- analytic test signals ---------------------------------------------------


@dataclass(frozen=True)
class Gaussian:
    """Gaussian packet whose |f|^2 has mean ``mu`` and standard deviation ``sigma``.

    ``chirp`` multiplies the exponent by ``(1 - i*chirp)``; with
    ``sigma = sqrt(1/2)`` this is the phase ``exp(i*chirp*(x-mu)^2/2)``.
    ``p0`` is a momentum boost ``exp(i*p0*x)``.
    """

    mu: float = 0.0
    sigma: float = math.sqrt(0.5)
    chirp: float = 0.0
    p0: float = 0.0

    def check(self, grid: Grid) -> None:
        if self.sigma <= 0:
            raise ResolutionError(f"gaussian width must be positive, got {self.sigma}")
        if self.sigma < 3 * grid.spacing:
            raise ResolutionError(
                f"gaussian width {self.sigma} is below 3 grid spacings ({grid.spacing})"
            )
        if grid.half_width < abs(self.mu) + 6 * self.sigma:
            raise ResolutionError(
                f"gaussian at mu={self.mu}, sigma={self.sigma} does not decay inside "
                f"[-{grid.half_width}, {grid.half_width})"
            )

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        s2 = self.sigma ** 2
        amp = (2 * np.pi * s2) ** -0.25
        return amp * np.exp(-(1 - 1j * self.chirp) * (x - self.mu) ** 2 / (4 * s2) + 1j * self.p0 * x)

    @property
    def label(self) -> str:
        return f"gaussian(mu={self.mu:g},sigma={self.sigma:g},chirp={self.chirp:g},p0={self.p0:g})"


@dataclass(frozen=True)
class Hermite:
    """Hermite function psi_n, or an equal-weight superposition when ``n`` is a tuple."""

    n: int | tuple[int, ...] = 0

    @property
    def levels(self) -> tuple[int, ...]:
        return (self.n,) if isinstance(self.n, int) else tuple(self.n)

    def check(self, grid: Grid) -> None:
        levels = self.levels
        if not levels or min(levels) < 0 or max(levels) > HERMITE_MAX:
            raise ResolutionError(f"hermite levels must lie in [0, {HERMITE_MAX}], got {levels}")
        top = max(levels)
        turning = math.sqrt(2 * top + 1)
        if grid.half_width < turning + 4 or turning > grid.nyquist / 2:
            raise ResolutionError(f"grid {grid} cannot resolve psi_{top}")

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        levels = self.levels
        table = hermite_functions(x, max(levels))
        return table[list(levels)].sum(axis=0).astype(complex)

    @property
    def label(self) -> str:
        return "hermite(" + "+".join(str(k) for k in self.levels) + ")"


@dataclass(frozen=True)
class Bump:
    """Compactly supported smooth real bump ``exp(-1/(1-u^2))``, ``u = (x-center)/width``."""

    center: float = 0.0
    width: float = 4.0

    def check(self, grid: Grid) -> None:
        if self.width < 20 * grid.spacing:
            raise ResolutionError(f"bump width {self.width} is under-resolved on {grid}")
        if abs(self.center) + self.width >= grid.half_width - EDGE_SAMPLES * grid.spacing:
            raise ResolutionError("bump support reaches the grid edge")

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        u = (x - self.center) / self.width
        inside = np.abs(u) < 1
        out = np.zeros_like(x, dtype=complex)
        out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
        return out

    @property
    def label(self) -> str:
        return f"bump(center={self.center:g},width={self.width:g})"


@dataclass(frozen=True)
class Table:
    """Samples read from a CSV file with header ``x,re,im``."""

    path: str
    normalize: bool = field(default=True, compare=False)

    def check(self, grid: Grid) -> None:
        pass

    @property
    def label(self) -> str:
        return f"file({self.path})"


AnalyticSignalSpec = Gaussian | Hermite | Bump | Table


def sample(spec, grid: Grid, normalize: bool = True) -> SampledSignal:
    """Sample an analytic signal spec on ``grid``; normalized numerically by default."""
    if isinstance(spec, Table):
        return load_table(spec.path, grid, normalize=spec.normalize and normalize)
    spec.check(grid)
    sig = SampledSignal(grid, spec.evaluate(grid.x), spec.label)
    return sig.normalized() if normalize else sig


def load_table(path, grid: Grid, normalize: bool = True) -> SampledSignal:
    xs, vals = [], []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [h.strip() for h in reader.fieldnames[:3]] != ["x", "re", "im"]:
            raise InvalidGridError(f"{path}: expected header x,re,im")
        for row in reader:
            xs.append(float(row["x"]))
            vals.append(complex(float(row["re"]), float(row["im"])))
    xs = np.asarray(xs)
    if len(xs) != grid.n_points or not np.allclose(xs, grid.x, rtol=0, atol=1e-9 * grid.half_width):
        raise IncompatibleGridsError(f"{path}: abscissae do not match {grid}")
    sig = SampledSignal(grid, np.asarray(vals), f"file({Path(path).name})")
    return sig.normalized() if normalize else sig


def write_table(f: SampledSignal, path, coordinate: str = "x") -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([coordinate, "re", "im"])
        for xi, v in zip(f.grid.x, f.values):
            w.writerow([repr(float(xi)), repr(float(v.real)), repr(float(v.imag))])
