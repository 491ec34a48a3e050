"""Invariant suite run by ``kernelur selftest``.

Every check returns the worst measured deviation over its lattice together
with the tolerance it is held to.  Cubic-phase checks run on a finer, wider
companion grid ``(2 n, 1.2 L)``.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from itertools import product
from typing import Callable

import numpy as np

from . import bounds as bd
from . import moments as mo
from .errors import KernelURError
from .grid import (
    Bump,
    Gaussian,
    Grid,
    Hermite,
    hermite_functions,
    l2_distance,
    sample,
)
from .kernels import (
    apply_transform,
    check_additivity,
    check_parseval,
    covering_grid,
    gtf_standard,
    make_frft,
    make_lct,
    make_squeeze,
)
from .number import decompose, number_moments, pn_anticommutator, reconstruct

ANGLES = (0.3, 0.7, 1.1, 1.9, 2.6)
SQUEEZE_THETA = 0.3
SQUEEZE_LATTICE = (0.2, 0.3, 0.4, 0.5, 0.6)
FRFT_ADDITIVITY_LATTICE = tuple(np.linspace(0.2, 2.8, 5))
LCT_PARAMS = ((1.0, 0.5, 0.3), (0.5, 1.0, 0.3), (-1.0, 2.0, 0.3), (2.0, -1.5, 0.3), (0.0, 1.0, 0.0))
GTF_ANGLES = (0.9, 1.3, 1.7, 2.2)
GTF_COMMUTATOR_PAIRS = ((0.0, math.pi / 2), (0.4, 1.2), (2.1, 0.5))


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tol: float
    passed: bool
    seconds: float
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "value": self.value,
            "tol": self.tol,
            "detail": self.detail,
        }

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status}  {self.name:<28} worst={self.value:.3e}  tol={self.tol:.0e}"
        return f"{text}  ({self.detail})" if self.detail else text


@dataclass(frozen=True)
class Scale:
    grid: Grid
    fine: Grid

    @classmethod
    def of(cls, n: int, half_width: float) -> "Scale":
        return cls(Grid(n, half_width), Grid(2 * n, 1.2 * half_width))

    def signals(self, fine: bool = False) -> dict:
        g = self.fine if fine else self.grid
        return {
            "psi0": sample(Hermite(0), g),
            "psi0+psi1": sample(Hermite((0, 1)), g),
            "chirped": sample(Gaussian(chirp=1.0), g),
            "shifted": sample(Gaussian(mu=1.0), g),
        }


def eigenphase(alpha: float, n: int) -> complex:
    """Eigenvalue of the sampled FrFT on ``psi_n``.

    The output is read in the momentum representation ``<p|n> = (-i)^n psi_n(p)``,
    so ``exp(i(pi/2 - alpha) n) (-i)^n = exp(-i alpha n)``.
    """
    return complex(np.exp(1j * (math.pi / 2 - alpha) * n) * (-1j) ** n)


# -- individual checks; each returns (worst, detail) ----------------------------


def _ft_gaussian(s: Scale):
    f = sample(Hermite(0), s.grid)
    return l2_distance(apply_transform(make_frft(math.pi / 2), f), f) / f.norm(), ""


def _frft_eigenfunctions(s: Scale):
    worst = 0.0
    for alpha, n in product((0.4, 0.7, 1.3), range(6)):
        f = sample(Hermite(n), s.grid)
        worst = max(worst, l2_distance(apply_transform(make_frft(alpha), f), f * eigenphase(alpha, n)))
    return worst, ""


def _frft_additivity(s: Scale):
    f = sample(Hermite((0, 1)), s.grid)
    return max(check_additivity(make_frft, a, b, f)
               for a, b in product(FRFT_ADDITIVITY_LATTICE, repeat=2)), ""


def _squeeze_additivity(s: Scale):
    f = sample(Hermite((0, 1)), s.grid)
    maker = lambda a: make_squeeze(a, SQUEEZE_THETA)  # noqa: E731
    return max(check_additivity(maker, a, b, f) for a, b in product(SQUEEZE_LATTICE, repeat=2)), ""


def _quadratic_kernels():
    yield from (make_frft(a) for a in ANGLES)
    yield from (make_lct(*m) for m in LCT_PARAMS)
    yield from (make_squeeze(a, SQUEEZE_THETA) for a in SQUEEZE_LATTICE)


def _parseval_quadratic(s: Scale):
    worst = 0.0
    for k in _quadratic_kernels():
        for f in s.signals().values():
            worst = max(worst, check_parseval(k, f, covering_grid(k, f)).relative_defect)
    return worst, ""


def _parseval_gtf(s: Scale):
    worst = 0.0
    for phi in (0.9, 1.7):
        k = gtf_standard(phi)
        for f in (sample(Hermite(0), s.fine), sample(Hermite((0, 1)), s.fine)):
            worst = max(worst, check_parseval(k, f, covering_grid(k, f)).relative_defect)
    return worst, f"grid ({s.fine.n_points}, {s.fine.half_width:g})"


def _dual_route_variance(s: Scale):
    families = {
        "frft": ([make_frft(a) for a in ANGLES[:4]], False),
        "lct": ([make_lct(*m) for m in LCT_PARAMS[:4]], False),
        "squeeze": ([make_squeeze(a, SQUEEZE_THETA) for a in (0.2, 0.4, 0.6, 0.8)], False),
        "gtf": ([gtf_standard(phi) for phi in GTF_ANGLES], True),
    }
    worst = 0.0
    for kernels, fine in families.values():
        sigs = s.signals(fine)
        for k in kernels:
            for name in ("psi0", "psi0+psi1", "chirped"):
                f = sigs[name]
                _, v_domain = mo.transformed_domain_moments(k, f, covering_grid(k, f))
                v_operator = mo.variance(mo.transformed_observable(k), f)
                worst = max(worst, abs(v_domain - v_operator) / max(1.0, v_operator))
    return worst, ""


def _relative(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _closed_form_bounds(s: Scale):
    worst = 0.0
    for f in s.signals().values():
        m = mo.moment_set(f)
        for a, b in product(ANGLES, repeat=2):
            rep = bd.ur_quadratic(make_frft(a), make_frft(b), f)
            worst = max(worst, _relative(bd.frft_bound(a, b, m), rep.bound))
        for m1, m2 in product(LCT_PARAMS, repeat=2):
            rep = bd.ur_quadratic(make_lct(*m1), make_lct(*m2), f)
            worst = max(worst, _relative(bd.lct_bound(m1, m2, m), rep.bound))
        for a, b in product(SQUEEZE_LATTICE, repeat=2):
            rep = bd.ur_quadratic(make_squeeze(a, SQUEEZE_THETA), make_squeeze(b, SQUEEZE_THETA), f)
            worst = max(worst, _relative(bd.squeeze_bound(a, b, SQUEEZE_THETA, m), rep.bound))
    return worst, ""


def _frft_special_case(s: Scale):
    f = sample(Hermite(2), s.grid)
    m = mo.moment_set(f)
    uncorrelated = mo.MomentSet(m.mean_x, m.mean_p, m.dxx, m.dpp, 0.0, 0.0)
    worst = 0.0
    for alpha in np.linspace(0.05, 3.1, 40):
        worst = max(worst, _relative(bd.frft_bound(alpha, 0.0, uncorrelated),
                                     bd.frft_bound_uncorrelated(alpha, m.dxx)))
    return worst, ""


def _scaled_violation(rep: bd.UrReport) -> float:
    return max(0.0, -rep.margin / max(1.0, rep.lhs))


def _inequality(s: Scale):
    worst, count = 0.0, 0
    for f in s.signals().values():
        for a, b in product(ANGLES, repeat=2):
            k1, k2 = make_frft(a), make_frft(b)
            for rep in (bd.ur_quadratic(k1, k2, f),
                        bd.ur_generic(mo.transformed_observable(k1), mo.transformed_observable(k2), f),
                        bd.ur_gtf(a, b, f)):
                worst = max(worst, _scaled_violation(rep))
                count += 1
            rep = bd.ur_quadratic(make_squeeze(a, SQUEEZE_THETA), make_squeeze(b, SQUEEZE_THETA), f)
            worst = max(worst, _scaled_violation(rep))
            count += 1
        for m1, m2 in product(LCT_PARAMS, repeat=2):
            worst = max(worst, _scaled_violation(bd.ur_quadratic(make_lct(*m1), make_lct(*m2), f)))
            count += 1
    return worst, f"{count} reports"


def _gaussian_saturation(s: Scale):
    f = sample(Hermite(0), s.grid)
    worst = abs(bd.ur_generic(mo.position(), mo.momentum(), f).saturation - 1)
    for a, b in product(ANGLES, repeat=2):
        if a != b:
            worst = max(worst, abs(bd.ur_quadratic(make_frft(a), make_frft(b), f).saturation - 1))
    return worst, ""


def _real_signal_identity(s: Scale):
    x, p = mo.position(), mo.momentum()
    worst = 0.0
    for f in (sample(Hermite(2), s.grid), sample(Bump(width=4.0), s.grid)):
        raw = mo.product_expectation(x, p, f)
        assembled = (mo.covariance(x, p, f) + mo.expectation(x, f) * mo.expectation(p, f)
                     + 0.5j * mo.commutator_expectation(x, p, f))
        worst = max(worst, abs(raw - 0.5j), abs(assembled - 0.5j))
    return worst, ""


def _pn_sigma_n(s: Scale):
    d = decompose(sample(Hermite((0, 1)), s.grid), 12)
    return abs(number_moments(d)[1] - 0.25), ""


def _pn_commutator(s: Scale):
    rep = bd.pn_bound(sample(Hermite((0, 1)), s.grid), 12)
    return abs(0.25 * rep.w_term ** 2 - 0.125), f"margin {rep.margin:.3e}"


def _pn_inequality(s: Scale):
    worst = 0.0
    for spec in (Hermite((0, 1)), Hermite(3), Gaussian(mu=1.0), Gaussian(mu=-0.5, p0=0.5)):
        worst = max(worst, _scaled_violation(bd.pn_bound(sample(spec, s.grid), 16)))
    return worst, ""


def _pn_eigenstate(s: Scale):
    return number_moments(decompose(sample(Hermite(3), s.grid), 12))[1], ""


def _pn_anticommutator_routes(s: Scale):
    worst = 0.0
    p, n = mo.momentum(), mo.NumberOperator()
    for spec in (Hermite((0, 1)), Gaussian(mu=1.0), Gaussian(p0=0.5, mu=-0.5)):
        f = sample(spec, s.grid)
        operator = (mo.product_expectation(p, n, f) + mo.product_expectation(n, p, f)).real
        worst = max(worst, abs(operator - pn_anticommutator(decompose(f, 16))))
    return worst, ""


def _gtf_commutator(s: Scale):
    worst = 0.0
    for f in (sample(Hermite(0), s.grid), sample(Hermite((0, 1)), s.grid), sample(Gaussian(chirp=1.0), s.grid)):
        for phi1, phi2 in GTF_COMMUTATOR_PAIRS:
            w = mo.commutator_expectation(bd.gtf_observable(phi1), bd.gtf_observable(phi2), f)
            worst = max(worst, abs(w - math.sin(phi2 - phi1)))
    return worst, ""


def _commutator_routes(s: Scale):
    obs = [mo.position(), mo.momentum(), bd.gtf_observable(0.7),
           mo.PolyObservable(0.5, np.array([0.1, -0.3, 0.2, 0.05]), "cubic")]
    worst = 0.0
    for f in s.signals().values():
        for o1, o2 in product(obs, repeat=2):
            diff = (mo.commutator_expectation(o1, o2, f, route="numeric")
                    - mo.commutator_expectation(o1, o2, f, route="closed"))
            worst = max(worst, abs(diff))
    return worst, ""


def _number_eigenphase(s: Scale):
    f = sample(Gaussian(mu=1.0, p0=0.5), s.grid)
    before = decompose(f, 10)
    worst = 0.0
    for alpha in (0.4, 1.3):
        after = decompose(apply_transform(make_frft(alpha), f), 10, representation="momentum")
        expected = np.exp(1j * (math.pi / 2 - alpha) * np.arange(11)) * before.coeffs
        worst = max(worst, float(np.abs(after.coeffs - expected).max()))
    return worst, "momentum-representation basis"


def _number_round_trip(s: Scale):
    f = sample(Hermite((0, 5)), s.grid)
    d = decompose(f, 12)
    return max(l2_distance(reconstruct(d), f), abs(float(np.sum(d.weights)) - 1.0)), ""


def _hermite_orthonormality(s: Scale):
    g = s.fine
    table = hermite_functions(g.x, 20)
    gram = (table @ table.T) * g.spacing
    return float(np.abs(gram - np.eye(21)).max()), f"grid ({g.n_points}, {g.half_width:g})"


def _w_antisymmetry(s: Scale):
    pairs = [(make_frft(a), make_frft(b)) for a, b in product(ANGLES, repeat=2)]
    pairs += [(make_lct(*m1), make_lct(*m2)) for m1, m2 in product(LCT_PARAMS, repeat=2)]
    return max(float(np.abs(bd.w_matrix(k1, k2) + bd.w_matrix(k2, k1).T).max()) for k1, k2 in pairs), ""


def _hermiticity(s: Scale):
    worst = 0.0
    obs = [mo.position(), mo.momentum(), bd.gtf_observable(1.1), mo.NumberOperator()]
    for f in s.signals().values():
        for o in obs:
            worst = max(worst, mo.expectation_detail(o, f)[1])
    return worst, ""


CHECKS: tuple[tuple[str, Callable, float], ...] = (
    ("ft_gaussian", _ft_gaussian, 1e-8),
    ("frft_eigenfunctions", _frft_eigenfunctions, 1e-6),
    ("frft_additivity", _frft_additivity, 1e-6),
    ("squeeze_additivity", _squeeze_additivity, 1e-5),
    ("parseval_quadratic", _parseval_quadratic, 1e-7),
    ("parseval_gtf", _parseval_gtf, 1e-5),
    ("dual_route_variance", _dual_route_variance, 1e-6),
    ("closed_form_bounds", _closed_form_bounds, 1e-7),
    ("frft_special_case", _frft_special_case, 1e-12),
    ("inequality", _inequality, 1e-7),
    ("gaussian_saturation", _gaussian_saturation, 1e-6),
    ("real_signal_identity", _real_signal_identity, 1e-7),
    ("pn_sigma_n", _pn_sigma_n, 1e-8),
    ("pn_commutator", _pn_commutator, 1e-6),
    ("pn_inequality", _pn_inequality, 1e-7),
    ("pn_eigenstate", _pn_eigenstate, 1e-10),
    ("pn_anticommutator_routes", _pn_anticommutator_routes, 1e-6),
    ("gtf_commutator", _gtf_commutator, 1e-7),
    ("commutator_routes", _commutator_routes, 1e-7),
    ("number_eigenphase", _number_eigenphase, 1e-6),
    ("number_round_trip", _number_round_trip, 1e-7),
    ("hermite_orthonormality", _hermite_orthonormality, 1e-8),
    ("w_antisymmetry", _w_antisymmetry, 0.0),
    ("hermiticity", _hermiticity, 1e-8),
)

CHECK_NAMES = tuple(name for name, _, _ in CHECKS)


def run_check(name: str, n: int = 1024, half_width: float = 10.0) -> CheckResult:
    fn, tol = next((fn, tol) for nm, fn, tol in CHECKS if nm == name)
    return _run(name, fn, tol, Scale.of(n, half_width))


def _run(name: str, fn: Callable, tol: float, scale: Scale) -> CheckResult:
    t0 = time.perf_counter()
    try:
        value, detail = fn(scale)
        value = float(value)
        passed = math.isfinite(value) and value <= tol
    except KernelURError as err:
        value, passed, detail = math.inf, False, f"{err.kind}: {err}"
    return CheckResult(name, value, tol, passed, time.perf_counter() - t0, detail)


def run_selftest(n: int = 1024, half_width: float = 10.0) -> list[CheckResult]:
    """Run every invariant at the given scale, in a fixed order."""
    scale = Scale.of(n, half_width)
    return [_run(name, fn, tol, scale) for name, fn, tol in CHECKS]
