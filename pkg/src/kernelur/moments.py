"""Expectation values, covariances and transformed observables.

Observables are anything with an ``apply(signal) -> signal`` method.  The
workhorse is :class:`PolyObservable`, ``c_p * p + g(x)`` with ``g`` a real
polynomial; this covers the transformed momenta of every kernel in
:mod:`kernelur.kernels`.  Operator products are evaluated by applying the
factors in sequence, never by symbolic reordering.

Observables implement ``apply(f, unsafe=False)``.  The engine checks the
boundary decay of the input once and then applies operator chains with
``unsafe=True``: an intermediate such as ``n psi_0`` is pure roundoff and
need not decay, while the decay of ``f`` already bounds every polynomial
image of it.
"""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial

from .errors import AliasingRiskError, DegenerateKernelError, HermiticityViolationError, NotNormalizedError
from .grid import Grid, SampledSignal, boundary_decay_ok, inner_product, spectral_derivative
from .kernels import QuadPhaseKernel, apply_transform

log = logging.getLogger(__name__)

SOFT_RESIDUE = 1e-8
HARD_RESIDUE = 1e-6
NORM_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class PolyObservable:
    """``p_coeff * p + x_poly(x)``; Hermitian because all coefficients are real."""

    p_coeff: float = 0.0
    x_poly: Polynomial = Polynomial([0.0])
    label: str = ""

    def __post_init__(self):
        coef = self.x_poly.coef if isinstance(self.x_poly, Polynomial) else np.asarray(self.x_poly)
        if np.iscomplexobj(coef) or isinstance(self.p_coeff, complex):
            raise ValueError("observable coefficients must be real")
        poly = Polynomial(np.asarray(coef, dtype=float))
        if not (math.isfinite(self.p_coeff) and np.all(np.isfinite(poly.coef))):
            raise ValueError("observable coefficients must be finite")
        object.__setattr__(self, "x_poly", poly.trim())
        object.__setattr__(self, "p_coeff", float(self.p_coeff))

    def apply(self, f: SampledSignal, unsafe: bool = False) -> SampledSignal:
        out = self.x_poly(f.grid.x) * f.values
        if self.p_coeff != 0:
            out = out + self.p_coeff * spectral_derivative(f, unsafe).values
        return f.with_values(out)

    @property
    def x_coeffs(self) -> np.ndarray:
        return self.x_poly.coef


def position() -> PolyObservable:
    return PolyObservable(0.0, Polynomial([0.0, 1.0]), "x")


def momentum() -> PolyObservable:
    return PolyObservable(1.0, Polynomial([0.0]), "p")


def x_power(k: int) -> PolyObservable:
    coef = np.zeros(k + 1)
    coef[k] = 1.0
    return PolyObservable(0.0, Polynomial(coef), f"x^{k}")


class NumberOperator:
    """Oscillator number operator ``(x^2 + p^2 - 1) / 2`` built from first-order pieces."""

    label = "n"

    def apply(self, f: SampledSignal, unsafe: bool = False) -> SampledSignal:
        x = f.grid.x
        pf = spectral_derivative(f, unsafe)
        ppf = spectral_derivative(pf, unsafe=True).values
        return f.with_values(0.5 * (x * x * f.values + ppf - f.values))


def _check_normalized(f: SampledSignal) -> None:
    nrm = inner_product(f, f).real
    if abs(nrm - 1) > NORM_TOL:
        raise NotNormalizedError(f"signal norm^2 is {nrm:.12g}, expected 1")
    if not boundary_decay_ok(f):
        raise AliasingRiskError("signal has not decayed at the grid edges")


def _apply(o, f: SampledSignal) -> SampledSignal:
    return o.apply(f, unsafe=True)


def _real(z: complex, what: str) -> float:
    residue = abs(z.imag)
    scale = max(1.0, abs(z.real))
    if residue > HARD_RESIDUE * scale:
        raise HermiticityViolationError(f"{what} has imaginary part {z.imag:.3g}", residue=residue)
    if residue > SOFT_RESIDUE * scale:
        log.warning("%s has imaginary residue %.3g", what, residue)
    return z.real


def expectation_detail(o, f: SampledSignal) -> tuple[float, float]:
    """``(<f|o f>, |imaginary residue|)``."""
    _check_normalized(f)
    z = inner_product(f, _apply(o, f))
    return _real(z, f"<{getattr(o, 'label', 'o')}>"), abs(z.imag)


def expectation(o, f: SampledSignal) -> float:
    return expectation_detail(o, f)[0]


def product_expectation(o1, o2, f: SampledSignal) -> complex:
    """Raw ``<f| o1 o2 |f>`` (complex in general)."""
    _check_normalized(f)
    return inner_product(f, _apply(o1, _apply(o2, f)))


def covariance(o1, o2, f: SampledSignal) -> float:
    """Symmetrized covariance ``<{o1, o2}>/2 - <o1><o2>``."""
    _check_normalized(f)
    f2 = _apply(o2, f)
    f1 = f2 if o1 is o2 else _apply(o1, f)
    m1 = _real(inner_product(f, f1), "mean")
    m2 = m1 if o1 is o2 else _real(inner_product(f, f2), "mean")
    z12 = inner_product(f, _apply(o1, f2))
    z21 = z12 if o1 is o2 else inner_product(f, _apply(o2, f1))
    return _real(0.5 * (z12 + z21), "anticommutator") - m1 * m2


def variance(o, f: SampledSignal) -> float:
    return covariance(o, o, f)


def commutator_closed_form(o1: PolyObservable, o2: PolyObservable) -> Polynomial:
    """``(1/i)[o1, o2]`` as a multiplication operator: ``a2 g1' - a1 g2'``."""
    return o2.p_coeff * o1.x_poly.deriv() - o1.p_coeff * o2.x_poly.deriv()


def commutator_expectation(o1, o2, f: SampledSignal, route: str = "numeric") -> float:
    """Expectation of ``(1/i)[o1, o2]``.

    ``route="numeric"`` applies both orderings to the samples;
    ``route="closed"`` integrates the closed-form multiplier (PolyObservables only).
    """
    _check_normalized(f)
    if route == "closed":
        w = commutator_closed_form(o1, o2)
        return float(np.sum(w(f.grid.x) * np.abs(f.values) ** 2) * f.grid.spacing)
    if route != "numeric":
        raise ValueError(f"unknown route {route!r}")
    z = inner_product(f, _apply(o1, _apply(o2, f))) - inner_product(f, _apply(o2, _apply(o1, f)))
    return _real(-1j * z, "commutator")


@dataclass(frozen=True)
class MomentSet:
    mean_x: float
    mean_p: float
    dxx: float
    dpp: float
    dxp: float
    r_xp: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class HigherMoments:
    mean_x2: float
    mean_x3: float
    mean_x4: float
    var_x2: float
    cov_x2_p: float
    cov_x_x2: float

    def to_dict(self) -> dict:
        return asdict(self)


def moment_set(f: SampledSignal) -> MomentSet:
    x, p = position(), momentum()
    dxx = variance(x, f)
    dpp = variance(p, f)
    dxp = covariance(x, p, f)
    denom = math.sqrt(max(dxx, 0.0) * max(dpp, 0.0))
    r = dxp / denom if denom > 0 else 0.0
    return MomentSet(expectation(x, f), expectation(p, f), dxx, dpp, dxp, r)


def higher_moments(f: SampledSignal) -> HigherMoments:
    _check_normalized(f)
    x = f.grid.x
    rho = np.abs(f.values) ** 2 * f.grid.spacing
    m1, m2, m3, m4 = (float(np.sum(rho * x ** k)) for k in (1, 2, 3, 4))
    return HigherMoments(
        mean_x2=m2,
        mean_x3=m3,
        mean_x4=m4,
        var_x2=m4 - m2 * m2,
        cov_x2_p=covariance(x_power(2), momentum(), f),
        cov_x_x2=m3 - m1 * m2,
    )


def transformed_observable(k: QuadPhaseKernel) -> PolyObservable:
    """The operator whose moments equal those of the transformed coordinate.

    For a one-dimensional kernel this is ``(p + B'(x)) / c`` where ``B`` is the
    full x-dependent phase of the kernel.
    """
    if k.dim != 1:
        raise ValueError("transformed_observable is implemented for dim = 1")
    c = k.c
    if not math.isfinite(c) or c == 0:
        raise DegenerateKernelError(f"kernel {k.label} has no finite transformed observable")
    g = Polynomial([0.0, k.b])
    if k.extra_x_phase is not None:
        g = g + k.extra_x_phase.deriv()
    return PolyObservable(1.0 / c, g / c, f"P[{k.label}]")


def transformed_domain_moments(
    k: QuadPhaseKernel, f: SampledSignal, out_grid: Optional[Grid] = None
) -> tuple[float, float]:
    """Mean and variance of the output coordinate under ``|T_K f|^2``, by quadrature."""
    g = apply_transform(k, f, out_grid)
    p = g.grid.x
    rho = np.abs(g.values) ** 2
    total = rho.sum()
    mean = float(np.sum(p * rho) / total)
    var = float(np.sum((p - mean) ** 2 * rho) / total)
    return mean, var
