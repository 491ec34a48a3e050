"""Schrödinger–Robertson bounds for transformed observables.

Two routes are provided and checked against each other: the generic numeric
route (covariances and commutators evaluated on samples) and the closed-form
route through the ``W`` and ``F`` matrices of a quadratic-phase kernel pair,
plus the scalar closed forms for the four named transform families.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import moments as mo
from .errors import SingularParameterError, UnsupportedClosedFormError
from .grid import SampledSignal
from .kernels import QuadPhaseKernel
from .number import decompose, number_moments


@dataclass(frozen=True)
class UrReport:
    sigma2_1: float
    sigma2_2: float
    f_term: float
    w_term: float
    bound: float
    lhs: float
    margin: float
    saturation: float
    labels: tuple = ()
    bound_paper_variant: Optional[float] = None

    @classmethod
    def assemble(cls, sigma2_1, sigma2_2, f_term, w_term, labels=(), bound_paper_variant=None):
        bound = f_term ** 2 + 0.25 * w_term ** 2
        lhs = sigma2_1 * sigma2_2
        if lhs == 0:
            saturation = 1.0 if bound == 0 else math.inf
        else:
            saturation = bound / lhs
        return cls(sigma2_1, sigma2_2, f_term, w_term, bound, lhs, lhs - bound, saturation,
                   tuple(labels), bound_paper_variant)

    def holds(self, tol: float = 1e-7) -> bool:
        return self.margin >= -tol * max(1.0, self.lhs)

    def to_dict(self) -> dict:
        out = {
            "sigma2_1": self.sigma2_1,
            "sigma2_2": self.sigma2_2,
            "f_term": self.f_term,
            "w_term": self.w_term,
            "bound": self.bound,
        }
        if self.bound_paper_variant is not None:
            out["bound_paper_variant"] = self.bound_paper_variant
        out.update(lhs=self.lhs, margin=self.margin, saturation=self.saturation, labels=list(self.labels))
        return out


@dataclass(frozen=True)
class DeltaBlocks:
    """Covariance blocks of an n-dimensional state (``dpx`` is ``dxp`` transposed)."""

    dxx: np.ndarray
    dpp: np.ndarray
    dxp: np.ndarray
    dpx: np.ndarray = field(default=None)

    def __post_init__(self):
        for name in ("dxx", "dpp", "dxp"):
            object.__setattr__(self, name, np.atleast_2d(np.asarray(getattr(self, name), dtype=float)))
        if self.dpx is None:
            object.__setattr__(self, "dpx", self.dxp.T.copy())
        else:
            object.__setattr__(self, "dpx", np.atleast_2d(np.asarray(self.dpx, dtype=float)))

    @classmethod
    def from_moments(cls, m: mo.MomentSet) -> "DeltaBlocks":
        return cls(m.dxx, m.dpp, m.dxp)


@dataclass(frozen=True)
class WfMatrices:
    w: np.ndarray
    f: np.ndarray


def _require_quadratic(*ks: QuadPhaseKernel) -> None:
    for k in ks:
        if k.has_extra_phase:
            raise UnsupportedClosedFormError(
                f"kernel {k.label} has a non-quadratic phase; use ur_generic"
            )
    if len({k.dim for k in ks}) != 1:
        raise ValueError("kernels must share a dimension")


def w_matrix(k1: QuadPhaseKernel, k2: QuadPhaseKernel) -> np.ndarray:
    """Commutator matrix ``C1^-T (B1 - B2) C2^-1``."""
    _require_quadratic(k1, k2)
    if k1.dim == 1:
        # one division keeps the sign flip under k1 <-> k2 exact
        return np.array([[(k1.b - k2.b) / (k1.c * k2.c)]])
    c1t_inv = np.linalg.inv(k1.c_mat.T)
    c2_inv = np.linalg.inv(k2.c_mat)
    return c1t_inv @ (k1.b_quad - k2.b_quad) @ c2_inv


def f_matrix(k1: QuadPhaseKernel, k2: QuadPhaseKernel, m) -> np.ndarray:
    """Symmetrized cross-covariance matrix of the two transformed momenta.

    ``m`` is a :class:`MomentSet` (scalar case) or :class:`DeltaBlocks`.
    """
    _require_quadratic(k1, k2)
    d = m if isinstance(m, DeltaBlocks) else DeltaBlocks.from_moments(m)
    b1, b2 = k1.b_quad, k2.b_quad
    inner = b1 @ d.dxp + d.dpx @ b2 + b1 @ d.dxx @ b2 + d.dpp
    return np.linalg.inv(k1.c_mat.T) @ inner @ np.linalg.inv(k2.c_mat)


def wf_matrices(k1, k2, m) -> WfMatrices:
    return WfMatrices(w_matrix(k1, k2), f_matrix(k1, k2, m))


def ur_quadratic(k1: QuadPhaseKernel, k2: QuadPhaseKernel, f: SampledSignal) -> UrReport:
    _require_quadratic(k1, k2)
    o1, o2 = mo.transformed_observable(k1), mo.transformed_observable(k2)
    m = mo.moment_set(f)
    return UrReport.assemble(
        mo.variance(o1, f),
        mo.variance(o2, f),
        float(f_matrix(k1, k2, m)[0, 0]),
        float(w_matrix(k1, k2)[0, 0]),
        labels=(k1.label, k2.label),
    )


def ur_generic(o1, o2, f: SampledSignal) -> UrReport:
    return UrReport.assemble(
        mo.variance(o1, f),
        mo.variance(o2, f),
        mo.covariance(o1, o2, f),
        mo.commutator_expectation(o1, o2, f),
        labels=(getattr(o1, "label", ""), getattr(o2, "label", "")),
    )


# -- closed forms for the named families --------------------------------------


def frft_bound(alpha: float, beta: float, m: mo.MomentSet) -> float:
    f = (m.dpp * math.sin(alpha) * math.sin(beta)
         + m.r_xp * math.sqrt(m.dxx * m.dpp) * math.sin(alpha + beta)
         + m.dxx * math.cos(alpha) * math.cos(beta))
    return f * f + 0.25 * math.sin(alpha - beta) ** 2


def frft_bound_uncorrelated(alpha: float, sigma2_x: float) -> float:
    """The ``R = 0, beta = 0`` special case: ``sigma_x^4 cos^2 a + sin^2 a / 4``."""
    return sigma2_x ** 2 * math.cos(alpha) ** 2 + 0.25 * math.sin(alpha) ** 2


def lct_bound(m1: Sequence[float], m2: Sequence[float], m: mo.MomentSet) -> float:
    """Bound for two 1-D LCTs given as ``(a, b, d)`` triples."""
    a1, b1 = m1[0], m1[1]
    a2, b2 = m2[0], m2[1]
    f = a1 * a2 * m.dxx + b1 * b2 * m.dpp + (a1 * b2 + a2 * b1) * m.dxp
    return f * f + 0.25 * (a1 * b2 - a2 * b1) ** 2


def squeeze_f_term(alpha: float, beta: float, theta: float, m: mo.MomentSet, printed: bool = False) -> float:
    """Cross-covariance of two fractional-squeezing momenta.

    With ``printed=True`` the ``sinh(alpha+beta)`` cross term is used without
    its ``cos(theta)`` factor, the alternate closed form; the two agree
    only when ``theta = 0`` or the x-p correlation vanishes.
    """
    ct = math.cos(theta)
    if abs(ct) < 1e-6:
        raise SingularParameterError(f"cos(theta) = 0 at theta={theta:g}")
    sa, sb = math.sinh(alpha), math.sinh(beta)
    ua = math.cosh(alpha) + sa * math.sin(theta)
    ub = math.cosh(beta) + sb * math.sin(theta)
    cross = (1.0 if printed else ct) * math.sinh(alpha + beta) + sa * sb * math.sin(2 * theta)
    return m.dpp * sa * sb * ct * ct + m.dxx * ua * ub + m.r_xp * math.sqrt(m.dxx * m.dpp) * cross


def squeeze_bound(alpha: float, beta: float, theta: float, m: mo.MomentSet, printed: bool = False) -> float:
    f = squeeze_f_term(alpha, beta, theta, m, printed)
    return f * f + 0.25 * math.cos(theta) ** 2 * math.sinh(alpha - beta) ** 2


def frft_observable(alpha: float) -> mo.PolyObservable:
    """``p sin(alpha) + x cos(alpha)``; defined at the degenerate angles too."""
    return mo.PolyObservable(math.sin(alpha), np.array([0.0, math.cos(alpha)]), f"p_alpha({float(alpha)!r})")


def lct_observable(a: float, b: float) -> mo.PolyObservable:
    """``b p + a x``."""
    return mo.PolyObservable(b, np.array([0.0, a]), f"p_M({float(a)!r},{float(b)!r})")


def squeeze_observable(alpha: float, theta: float) -> mo.PolyObservable:
    """``p sinh(alpha) cos(theta) + x (cosh(alpha) + sinh(alpha) sin(theta))``."""
    return mo.PolyObservable(
        math.sinh(alpha) * math.cos(theta),
        np.array([0.0, math.cosh(alpha) + math.sinh(alpha) * math.sin(theta)]),
        f"p_sq({float(alpha)!r},{float(theta)!r})",
    )


def gtf_observable(phi: float) -> mo.PolyObservable:
    """``p sin(phi) + x cos(phi) - 3 x^2 sin(phi)``."""
    s, c = math.sin(phi), math.cos(phi)
    return mo.PolyObservable(s, np.array([0.0, c, -3.0 * s]), f"p_phi({float(phi)!r})")


def gtf_covariance(phi1: float, phi2: float, m: mo.MomentSet, hm: mo.HigherMoments,
                   printed: bool = False) -> float:
    """Covariance of two cubic-phase momenta from first and higher moments.

    Expanding bilinearly gives the coefficient ``-6`` on ``Cov(x^2, p)``;
    ``printed=True`` uses the alternate ``-3``.
    """
    s1, s2 = math.sin(phi1), math.sin(phi2)
    k = 3.0 if printed else 6.0
    return ((m.dpp - k * hm.cov_x2_p + 9 * hm.var_x2) * s1 * s2
            + m.dxx * math.cos(phi1) * math.cos(phi2)
            + (m.dxp - 3 * hm.cov_x_x2) * math.sin(phi1 + phi2))


def gtf_bound(phi1: float, phi2: float, m: mo.MomentSet, hm: mo.HigherMoments) -> float:
    """Schrödinger–Robertson bound: ``Cov^2 + sin^2(phi1 - phi2) / 4``."""
    cov = gtf_covariance(phi1, phi2, m, hm)
    return cov * cov + 0.25 * math.sin(phi1 - phi2) ** 2


def gtf_bound_paper_variant(phi1: float, phi2: float, m: mo.MomentSet, hm: mo.HigherMoments) -> float:
    """Alternate expression: commutator weight 1 and the ``-3`` covariance."""
    cov = gtf_covariance(phi1, phi2, m, hm, printed=True)
    return math.sin(phi1 - phi2) ** 2 + cov * cov


def ur_gtf(phi1: float, phi2: float, f: SampledSignal) -> UrReport:
    """Generic-route report for two cubic-phase momenta, carrying the alternate variant."""
    rep = ur_generic(gtf_observable(phi1), gtf_observable(phi2), f)
    variant = gtf_bound_paper_variant(phi1, phi2, mo.moment_set(f), mo.higher_moments(f))
    return UrReport.assemble(rep.sigma2_1, rep.sigma2_2, rep.f_term, rep.w_term,
                             labels=rep.labels, bound_paper_variant=variant)


def pn_bound(f: SampledSignal, n_max: int) -> UrReport:
    """Momentum versus photon-number relation.

    The number variance comes from the Hermite decomposition; the covariance
    and commutator from the operator engine with ``n = (x^2 + p^2 - 1)/2``.
    """
    d = decompose(f, n_max)
    _, var_n = number_moments(d)
    p, n = mo.momentum(), mo.NumberOperator()
    return UrReport.assemble(
        mo.variance(p, f),
        var_n,
        mo.covariance(p, n, f),
        mo.commutator_expectation(p, n, f),
        labels=("p", "n"),
    )
