"""Quadratic-phase kernels and their direct application to sampled signals.

A kernel in this family has the form

    K(p, x) = prefactor * exp(i * (A(p) + B(x) - p . C x))

with ``A(p) = p.a_quad.p / 2 + extra_p_phase(p)`` and
``B(x) = x.b_quad.x / 2 + extra_x_phase(x)``.  The fractional Fourier,
linear canonical, fractional squeezing and cubic-phase time-frequency
transforms are all members.  Transforms are evaluated by direct O(N*M)
quadrature; there is no fast path.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import Polynomial

from .errors import (
    AliasingRiskError,
    DegenerateKernelError,
    GridTooCoarseError,
    InvalidGridError,
    SingularParameterError,
)
from .grid import Grid, SampledSignal, boundary_decay_ok, effective_support, l2_distance, pad, spectral_support

MAX_PHASE_DEGREE = 6
DEGENERACY_TOL = 1e-6
_CHUNK = 1 << 22


def _as_matrix(v, dim):
    m = np.array(v, dtype=float).reshape(dim, dim) if np.ndim(v) else np.full((dim, dim), float(v))
    m.flags.writeable = False
    return m


def _as_poly(p) -> Optional[Polynomial]:
    if p is None:
        return None
    poly = p if isinstance(p, Polynomial) else Polynomial(np.asarray(p, dtype=float))
    poly = poly.trim()
    if np.all(poly.coef == 0):
        return None
    if poly.degree() > MAX_PHASE_DEGREE:
        raise ValueError(f"extra phase degree {poly.degree()} exceeds {MAX_PHASE_DEGREE}")
    return poly


@dataclass(frozen=True, eq=False)
class QuadPhaseKernel:
    a_quad: np.ndarray
    b_quad: np.ndarray
    c_mat: np.ndarray
    prefactor: complex
    extra_x_phase: Optional[Polynomial] = None
    extra_p_phase: Optional[Polynomial] = None
    label: str = ""
    dim: int = 1

    def __post_init__(self):
        dim = self.dim
        a, b, c = (_as_matrix(m, dim) for m in (self.a_quad, self.b_quad, self.c_mat))
        object.__setattr__(self, "a_quad", a)
        object.__setattr__(self, "b_quad", b)
        object.__setattr__(self, "c_mat", c)
        object.__setattr__(self, "prefactor", complex(self.prefactor))
        object.__setattr__(self, "extra_x_phase", _as_poly(self.extra_x_phase))
        object.__setattr__(self, "extra_p_phase", _as_poly(self.extra_p_phase))
        if dim != 1 and (self.extra_x_phase is not None or self.extra_p_phase is not None):
            raise ValueError("polynomial extra phases are one-dimensional")
        for name, m in (("a_quad", a), ("b_quad", b)):
            if not np.allclose(m, m.T, rtol=0, atol=1e-12):
                raise ValueError(f"{name} must be symmetric")
        det = np.linalg.det(c)
        if abs(det) <= 1e-12:
            raise DegenerateKernelError(f"c_mat is singular (det={det:g})")
        # norm preservation: |prefactor|^2 (2 pi)^n = |det C|
        unitarity = abs(self.prefactor) ** 2 * (2 * math.pi) ** dim / abs(det)
        if abs(unitarity - 1) > 1e-9:
            raise ValueError(f"prefactor does not preserve norms (ratio {unitarity:.12g})")

    @property
    def has_extra_phase(self) -> bool:
        return self.extra_x_phase is not None or self.extra_p_phase is not None

    # scalar views for the one-dimensional case
    @property
    def a(self) -> float:
        return float(self.a_quad[0, 0])

    @property
    def b(self) -> float:
        return float(self.b_quad[0, 0])

    @property
    def c(self) -> float:
        return float(self.c_mat[0, 0])

    def x_phase(self, x):
        out = 0.5 * self.b * np.asarray(x) ** 2
        if self.extra_x_phase is not None:
            out = out + self.extra_x_phase(x)
        return out

    def p_phase(self, p):
        out = 0.5 * self.a * np.asarray(p) ** 2
        if self.extra_p_phase is not None:
            out = out + self.extra_p_phase(p)
        return out

    def x_phase_slope(self, x):
        """d/dx of the x-dependent phase, excluding the ``-p c x`` coupling."""
        out = self.b * np.asarray(x, dtype=float)
        if self.extra_x_phase is not None:
            out = out + self.extra_x_phase.deriv()(x)
        return out

    def to_dict(self) -> dict:
        def mat(m):
            return float(m[0, 0]) if self.dim == 1 else m.tolist()

        def poly(p):
            return [] if p is None else [float(c) for c in p.coef]

        return {
            "label": self.label,
            "dim": self.dim,
            "a_quad": mat(self.a_quad),
            "b_quad": mat(self.b_quad),
            "c_mat": mat(self.c_mat),
            "prefactor_re": self.prefactor.real,
            "prefactor_im": self.prefactor.imag,
            "extra_x_phase": poly(self.extra_x_phase),
            "extra_p_phase": poly(self.extra_p_phase),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "QuadPhaseKernel":
        return cls(
            a_quad=d["a_quad"],
            b_quad=d["b_quad"],
            c_mat=d["c_mat"],
            prefactor=complex(d["prefactor_re"], d["prefactor_im"]),
            extra_x_phase=d.get("extra_x_phase") or None,
            extra_p_phase=d.get("extra_p_phase") or None,
            label=d.get("label", ""),
            dim=int(d.get("dim", 1)),
        )


def _angle_limit(alpha: float) -> str:
    # sin(alpha) ~ 0: alpha near 0 mod 2 pi is the identity, near pi the parity map
    return "identity" if math.cos(alpha) > 0 else "parity"


def make_frft(alpha: float) -> QuadPhaseKernel:
    """Fractional Fourier kernel of angle ``alpha``; ``alpha = pi/2`` is the ordinary FT."""
    s = math.sin(alpha)
    if abs(s) < DEGENERACY_TOL:
        limit = _angle_limit(alpha)
        raise DegenerateKernelError(f"frft({alpha:g}) is a delta kernel ({limit})", limit=limit)
    cot = math.cos(alpha) / s
    return QuadPhaseKernel(
        a_quad=cot,
        b_quad=cot,
        c_mat=1.0 / s,
        prefactor=cmath.sqrt((1 - 1j * cot) / (2 * math.pi)),
        label=f"frft({float(alpha)!r})",
    )


def make_lct(a: float, b: float, d: float, c: Optional[float] = None) -> QuadPhaseKernel:
    """Linear canonical kernel for M = (a, b, c, d).

    ``c`` does not enter the kernel and is only recorded in the label.
    """
    if abs(b) < 1e-12:
        raise DegenerateKernelError("lct with b = 0 is a scaling/chirp map, not an integral kernel",
                                    limit="scaling")
    tag = "." if c is None else f"{float(c)!r}"
    return QuadPhaseKernel(
        a_quad=d / b,
        b_quad=a / b,
        c_mat=1.0 / b,
        prefactor=cmath.sqrt(1 / (2j * math.pi * b)),
        label=f"lct({float(a)!r},{float(b)!r},{tag},{float(d)!r})",
    )


def make_squeeze(alpha: float, theta: float) -> QuadPhaseKernel:
    """Fractional squeezing kernel of order ``alpha`` and squeeze angle ``theta``."""
    ct = math.cos(theta)
    if abs(ct) < DEGENERACY_TOL:
        raise SingularParameterError(f"squeeze angle theta={theta:g} has cos(theta) = 0")
    sh = math.sinh(alpha)
    if abs(sh) < DEGENERACY_TOL:
        raise DegenerateKernelError(f"squeeze({alpha:g}) is a delta kernel (identity)", limit="identity")
    diag = 1.0 / (math.tanh(alpha) * ct)
    tan = math.tan(theta)
    return QuadPhaseKernel(
        a_quad=diag - tan,
        b_quad=diag + tan,
        c_mat=1.0 / (sh * ct),
        prefactor=cmath.sqrt(1 / (2j * math.pi * ct * sh)),
        label=f"squeeze({float(alpha)!r},{float(theta)!r})",
    )


def make_gtf(phi: float, g_of_phi: float, l_of_phi: float, f_poly) -> QuadPhaseKernel:
    """Generalized time-frequency kernel with phase ``+f(p) - f(x)``."""
    if abs(l_of_phi) < DEGENERACY_TOL:
        raise DegenerateKernelError(f"gtf with l(phi)={l_of_phi:g} is degenerate", limit="scaling")
    poly = _as_poly(f_poly)
    return QuadPhaseKernel(
        a_quad=2 * g_of_phi,
        b_quad=2 * g_of_phi,
        c_mat=1.0 / l_of_phi,
        prefactor=cmath.sqrt(1 / (2j * math.pi * l_of_phi)),
        extra_x_phase=None if poly is None else -poly,
        extra_p_phase=poly,
        label=f"gtf({float(phi)!r})",
    )


def gtf_standard(phi: float, cubic: float = 1.0) -> QuadPhaseKernel:
    """The cubic-phase instance: l = sin(phi), g = cot(phi)/2, f(x) = cubic * x^3."""
    s = math.sin(phi)
    if abs(s) < DEGENERACY_TOL:
        raise DegenerateKernelError(f"gtf({phi:g}) is degenerate", limit=_angle_limit(phi))
    k = make_gtf(phi, 0.5 * math.cos(phi) / s, s, [0, 0, 0, cubic])
    return k


def eval_kernel(k: QuadPhaseKernel, p, x):
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    return k.prefactor * np.exp(1j * (k.p_phase(p) + k.x_phase(x) - k.c * p * x))


def nyquist_check(k: QuadPhaseKernel, f: SampledSignal, out_grid: Grid) -> None:
    """Raise if the kernel oscillates faster than the input grid resolves.

    The x-derivative of the phase at output ``p`` is ``slope(x) - c p``; its
    largest magnitude over the effective support of ``f`` must stay below
    ``pi / spacing`` for every output sample.
    """
    lo, hi = effective_support(f)
    x = f.grid.x
    xs = x[(x >= lo) & (x <= hi)]
    slope = k.x_phase_slope(xs)
    smin, smax = float(slope.min()), float(slope.max())
    cp = k.c * out_grid.x
    worst = np.maximum(smax - cp, cp - smin)
    j = int(np.argmax(worst))
    if worst[j] > f.grid.nyquist:
        raise GridTooCoarseError(
            f"kernel {k.label} oscillates at {worst[j]:.6g} rad/unit at p={out_grid.x[j]:.6g}, "
            f"above the grid Nyquist rate {f.grid.nyquist:.6g}",
            p=float(out_grid.x[j]),
            max_frequency=float(worst[j]),
        )


def apply_transform(k: QuadPhaseKernel, f: SampledSignal, out_grid: Optional[Grid] = None) -> SampledSignal:
    """Evaluate ``T_K[f](p_j) = sum_i K(p_j, x_i) f(x_i) h`` on ``out_grid``."""
    if k.dim != 1:
        raise InvalidGridError("sampled transforms are implemented for dim = 1 only")
    out_grid = f.grid if out_grid is None else out_grid
    if not boundary_decay_ok(f):
        raise AliasingRiskError("input signal has not decayed at the grid edges")
    nyquist_check(k, f, out_grid)

    x = f.grid.x
    p = out_grid.x
    weights = np.exp(1j * k.x_phase(x)) * f.values * f.grid.spacing
    out = np.empty(p.size, dtype=complex)
    rows = max(1, _CHUNK // x.size)
    for start in range(0, p.size, rows):
        ps = p[start:start + rows]
        # pairwise summation along each row keeps results reproducible
        out[start:start + rows] = (np.exp(-1j * k.c * np.outer(ps, x)) * weights).sum(axis=1)
    out *= k.prefactor * np.exp(1j * k.p_phase(p))
    return SampledSignal(out_grid, out, k.label)


@dataclass(frozen=True)
class UnitarityReport:
    norm_in: float
    norm_out: float
    relative_defect: float

    def to_dict(self) -> dict:
        return {"norm_in": self.norm_in, "norm_out": self.norm_out, "relative_defect": self.relative_defect}


def check_parseval(k: QuadPhaseKernel, f: SampledSignal, out_grid: Optional[Grid] = None) -> UnitarityReport:
    norm_in = f.norm()
    if norm_in == 0:
        return UnitarityReport(0.0, 0.0, 0.0)
    norm_out = apply_transform(k, f, out_grid).norm()
    return UnitarityReport(norm_in, norm_out, abs(norm_out - norm_in) / norm_in)


def _next_pow2(n: float) -> int:
    return 1 << max(3, math.ceil(math.log2(max(n, 8))))


def covering_grid(k: QuadPhaseKernel, f: SampledSignal, tol: float = 1e-6, max_points: int = 8192) -> Grid:
    """An output grid wide enough to hold ``T_K f``.

    Bounds the output coordinate ``(k_loc + B'(x)) / c`` over the box spanned
    by the effective position and wavenumber supports of ``f``.  Returns the
    input grid when that already suffices.
    """
    lo, hi = effective_support(f, tol)
    kmin, kmax = spectral_support(f, tol)
    x = f.grid.x
    slope = k.x_phase_slope(x[(x >= lo) & (x <= hi)])
    ends = np.array([slope.min() + kmin, slope.max() + kmax]) / k.c
    need = 1.05 * float(np.abs(ends).max()) + 1.0
    if need <= f.grid.half_width:
        return f.grid
    spacing = 4 * f.grid.spacing
    n = min(_next_pow2(2 * need / spacing), max_points)
    return Grid(n, need)


def limit_map(limit: str, f: SampledSignal) -> SampledSignal:
    """Apply the analytic limit of a degenerate kernel (identity or parity)."""
    if limit == "identity":
        return f
    if limit == "parity":
        n = f.grid.n_points
        return f.with_values(f.values[(-np.arange(n)) % n])
    raise DegenerateKernelError(f"no sampled realization of the '{limit}' limit", limit=limit)


def check_additivity(
    maker: Callable[[float], QuadPhaseKernel], alpha: float, beta: float, f: SampledSignal
) -> float:
    """Relative defect ``||T_a[T_b f] - T_{a+b} f|| / ||f||``.

    ``f`` is zero-padded (same spacing) until the grid holds every stage.
    """
    inner = maker(beta)
    need = covering_grid(inner, f).half_width
    target, limit = None, None
    try:
        target = maker(alpha + beta)
        need = max(need, covering_grid(target, f).half_width)
    except DegenerateKernelError as err:
        if err.limit is None:
            raise
        limit = err.limit
    if need > f.grid.half_width:
        f = pad(f, 2 * math.ceil(need / f.grid.spacing))
    composed = apply_transform(maker(alpha), apply_transform(inner, f))
    direct = limit_map(limit, f) if target is None else apply_transform(target, f)
    return l2_distance(composed, direct) / f.norm()
