"""Command-line front end.

    kernelur transform --kernel frft --alpha 1.5708 --signal gaussian --out g.csv
    kernelur ur --kernel squeeze --alpha 0.4 --beta 0.9 --theta 0.3
    kernelur sweep --kernel frft --sweep alpha=0.1:3.0:30 --beta 0 --signal hermite:2
    kernelur pn-ur --signal hermite:0+1
    kernelur selftest --json

Exit codes: 0 success, 2 configuration error, 3 numerical precondition
error, 4 invariant failure.  Errors are written to standard error as a JSON
object ``{"error_kind": ..., "detail": ...}``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from itertools import product
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import bounds as bd
from . import moments as mo
from .errors import ConfigError, DegenerateKernelError, InvalidGridError, InvariantFailure, KernelURError
from .grid import Bump, Gaussian, Grid, Hermite, HERMITE_MAX, SampledSignal, Table, sample
from .kernels import QuadPhaseKernel, apply_transform, covering_grid, gtf_standard, make_frft, make_lct, make_squeeze
from .number import decompose, number_moments

KERNELS = ("frft", "lct", "squeeze", "gtf")
SWEEPABLE = ("alpha", "beta", "theta", "theta2", "a", "b", "d", "a2", "b2", "d2", "phi", "phi2")
GAUSSIAN_FIELDS = ("mu", "sigma", "chirp", "p0")
BUMP_FIELDS = ("center", "width")
SWEEP_COLUMNS = ("lhs", "bound", "margin", "saturation", "w_term", "f_term")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


# -- parsing helpers ------------------------------------------------------------


def _float(text: str, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"{what}: {text!r} is not a number") from None
    if not math.isfinite(value):
        raise ConfigError(f"{what} must be finite")
    return value


def _fields(body: str, names: Sequence[str], kind: str) -> dict:
    """Parse ``v1,v2`` (positional) or ``name=v`` items into keyword arguments."""
    out = {}
    for i, item in enumerate(p.strip() for p in body.split(",")):
        if not item:
            continue
        if "=" in item:
            key, _, val = item.partition("=")
            key = key.strip()
            if key not in names:
                raise ConfigError(f"{kind} has no parameter {key!r}; expected one of {', '.join(names)}")
        elif i < len(names):
            key, val = names[i], item
        else:
            raise ConfigError(f"{kind} takes at most {len(names)} parameters")
        out[key] = _float(val, f"{kind} {key}")
    return out


def parse_signal(text: str, normalize: bool = True):
    """``gaussian[:mu,sigma,chirp,p0]``, ``hermite:n``, ``hermite:0+1``, ``bump[:center,width]``, ``file:path``."""
    kind, _, body = text.partition(":")
    kind = kind.strip().lower()
    if kind == "gaussian":
        return Gaussian(**_fields(body, GAUSSIAN_FIELDS, "gaussian"))
    if kind == "bump":
        return Bump(**_fields(body, BUMP_FIELDS, "bump"))
    if kind == "hermite":
        try:
            levels = tuple(int(t) for t in body.split("+"))
        except ValueError:
            raise ConfigError(f"hermite expects n or n1+n2+..., got {body!r}") from None
        if any(not 0 <= n <= HERMITE_MAX for n in levels):
            raise ConfigError(f"hermite order must lie in [0, {HERMITE_MAX}]")
        return Hermite(levels[0] if len(levels) == 1 else levels)
    if kind == "file":
        if not body:
            raise ConfigError("file: needs a path")
        return Table(body, normalize)
    raise ConfigError(f"unknown signal kind {kind!r}")


def parse_sweep(text: str) -> tuple[str, np.ndarray]:
    name, sep, rng = text.partition("=")
    parts = rng.split(":")
    if not sep or len(parts) != 3:
        raise ConfigError(f"sweep must look like name=start:stop:count, got {text!r}")
    name = name.strip()
    if name not in SWEEPABLE:
        raise ConfigError(f"cannot sweep {name!r}; choose from {', '.join(SWEEPABLE)}")
    start, stop = _float(parts[0], "sweep start"), _float(parts[1], "sweep stop")
    try:
        count = int(parts[2])
    except ValueError:
        raise ConfigError(f"sweep count {parts[2]!r} is not an integer") from None
    if count < 2:
        raise ConfigError("sweep count must be at least 2")
    return name, np.linspace(start, stop, count)


# -- kernels and observables from flags -------------------------------------------


def _require(params: dict, *names: str, kind: str) -> list[float]:
    missing = [n for n in names if params.get(n) is None]
    if missing:
        raise ConfigError(f"{kind} needs " + ", ".join("--" + n.replace("_", "-") for n in missing))
    return [params[n] for n in names]


def _slot_params(params: dict, slot: int) -> dict:
    """Parameters of the first (slot 1) or second (slot 2) member of a pair."""
    if slot == 1:
        return {"alpha": params.get("alpha"), "theta": params.get("theta"), "a": params.get("a"),
                "b": params.get("b"), "d": params.get("d"), "c": params.get("c"), "phi": params.get("phi")}
    theta2 = params.get("theta2")
    return {"alpha": params.get("beta"), "theta": params.get("theta") if theta2 is None else theta2,
            "a": params.get("a2"), "b": params.get("b2"), "d": params.get("d2"), "phi": params.get("phi2")}


def build_kernel(kind: str, p: dict) -> QuadPhaseKernel:
    if kind == "frft":
        return make_frft(*_require(p, "alpha", kind=kind))
    if kind == "lct":
        return make_lct(*_require(p, "a", "b", "d", kind=kind), c=p.get("c"))
    if kind == "squeeze":
        return make_squeeze(*_require(p, "alpha", "theta", kind=kind))
    if kind == "gtf":
        return gtf_standard(*_require(p, "phi", kind=kind))
    raise ConfigError(f"unknown kernel {kind!r}")


def build_observable(kind: str, p: dict) -> mo.PolyObservable:
    """The transformed momentum in closed form; valid at degenerate parameters."""
    if kind == "frft":
        return bd.frft_observable(*_require(p, "alpha", kind=kind))
    if kind == "lct":
        return bd.lct_observable(*_require(p, "a", "b", kind=kind))
    if kind == "squeeze":
        return bd.squeeze_observable(*_require(p, "alpha", "theta", kind=kind))
    if kind == "gtf":
        return bd.gtf_observable(*_require(p, "phi", kind=kind))
    raise ConfigError(f"unknown kernel {kind!r}")


def ur_report(kind1: str, kind2: str, params: dict, f: SampledSignal) -> bd.UrReport:
    """Pick the route: closed-form matrices for quadratic pairs, numeric otherwise."""
    p1, p2 = _slot_params(params, 1), _slot_params(params, 2)
    if kind1 == kind2 == "gtf":
        phi1, phi2 = _require(p1, "phi", kind="gtf")[0], _require(p2, "phi", kind="gtf pair (--phi2)")[0]
        return bd.ur_gtf(phi1, phi2, f)
    if "gtf" not in (kind1, kind2):
        try:
            return bd.ur_quadratic(build_kernel(kind1, p1), build_kernel(kind2, p2), f)
        except DegenerateKernelError:
            pass
    return bd.ur_generic(build_observable(kind1, p1), build_observable(kind2, p2), f)


# -- output -----------------------------------------------------------------------


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    return obj


def dumps(obj) -> str:
    """Deterministic JSON: insertion-ordered keys, shortest round-trip floats."""
    return json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n"


def _csv_text(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in _clean(list(row))])
    return buf.getvalue()


def _flat_csv(obj: dict) -> str:
    flat = {k: v for k, v in obj.items() if not isinstance(v, (dict, list))}
    return _csv_text(list(flat), [list(flat.values())])


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_obj(obj: dict, args) -> None:
    _emit(_flat_csv(obj) if args.format == "csv" else dumps(obj), args.out)


# -- commands ---------------------------------------------------------------------


def _grid(args) -> Grid:
    try:
        return Grid(args.n, args.half_width)
    except InvalidGridError as err:
        # a bad grid flag is a configuration mistake
        err.exit_code = 2
        raise


def _signal(args, grid: Optional[Grid] = None) -> SampledSignal:
    return sample(parse_signal(args.signal, not args.no_normalize), grid or _grid(args))


def _params(args) -> dict:
    return {name: getattr(args, name) for name in (*SWEEPABLE, "c")}


def _grid_dict(g: Grid) -> dict:
    return {"n_points": g.n_points, "half_width": g.half_width}


def cmd_transform(args) -> int:
    f = _signal(args)
    k = build_kernel(args.kernel, _slot_params(_params(args), 1))
    if args.out_n is not None or args.out_half_width is not None:
        out_grid = Grid(args.out_n or f.grid.n_points, args.out_half_width or f.grid.half_width)
    else:
        out_grid = covering_grid(k, f)
    g = apply_transform(k, f, out_grid)
    norm_in, norm_out = f.norm(), g.norm()
    unitarity = {"norm_in": norm_in, "norm_out": norm_out,
                 "relative_defect": abs(norm_out - norm_in) / norm_in if norm_in else 0.0}
    sidecar = {
        "kernel": k.to_dict(),
        "signal": f.label,
        "grid": _grid_dict(f.grid),
        "out_grid": _grid_dict(out_grid),
        "unitarity": unitarity,
    }
    rows = ((p, v.real, v.imag) for p, v in zip(g.grid.x, g.values))
    if args.out:
        Path(args.out).write_text(_csv_text(("p", "re", "im"), rows))
        Path(args.out).with_suffix(".json").write_text(dumps(sidecar))
    elif args.format == "csv":
        sys.stdout.write(_csv_text(("p", "re", "im"), rows))
    else:
        sys.stdout.write(dumps(sidecar))
    return 0


def cmd_moments(args) -> int:
    f = _signal(args)
    obj = {"signal": f.label, **mo.moment_set(f).to_dict(), **mo.higher_moments(f).to_dict()}
    _emit_obj(obj, args)
    return 0


def _kernel_pair(args) -> tuple[str, str]:
    return args.kernel, args.kernel2 or args.kernel


def cmd_ur(args) -> int:
    f = _signal(args)
    rep = ur_report(*_kernel_pair(args), _params(args), f)
    _emit_obj(rep.to_dict(), args)
    return 0


def cmd_sweep(args) -> int:
    if not args.sweep or len(args.sweep) > 2:
        raise ConfigError("sweep needs one or two --sweep name=start:stop:count options")
    axes = [parse_sweep(s) for s in args.sweep]
    names = [n for n, _ in axes]
    if len(set(names)) != len(names):
        raise ConfigError("the two sweep axes must differ")
    f = _signal(args)
    base = _params(args)
    rows = []
    for point in product(*(vals for _, vals in axes)):
        params = dict(base, **dict(zip(names, map(float, point))))
        rep = ur_report(*_kernel_pair(args), params, f)
        rows.append([*point, *(getattr(rep, c) for c in SWEEP_COLUMNS)])
    header = [*names, *SWEEP_COLUMNS]
    if args.format == "json":
        _emit(dumps({"signal": f.label, "rows": [dict(zip(header, r)) for r in rows]}), args.out)
    else:
        _emit(_csv_text(header, rows), args.out)
    return 0


def _max_resolvable_n(grid: Grid) -> int:
    turning = min(grid.half_width - 4, grid.nyquist / 2)
    if turning < 1:
        return 0
    return int(min(HERMITE_MAX, (turning * turning - 1) // 2))


def cmd_pn_ur(args) -> int:
    f = _signal(args)
    n_max = _max_resolvable_n(f.grid) if args.n_max is None else args.n_max
    rep = bd.pn_bound(f, n_max)
    d = decompose(f, n_max)
    n_mean, _ = number_moments(d)
    obj = rep.to_dict()
    obj.update(n_max=n_max, n_mean=n_mean, truncation_residual=d.truncation_residual)
    _emit_obj(obj, args)
    return 0


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    t0 = time.perf_counter()
    results = run_selftest(args.n, args.half_width)
    total = time.perf_counter() - t0
    ok = all(r.passed for r in results)
    if args.json:
        text = dumps({"passed": ok, "checks": [r.to_dict() for r in results]})
    else:
        lines = [r.line() for r in results]
        lines.append(f"{sum(r.passed for r in results)}/{len(results)} invariants passed in {total:.1f}s")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    if not ok:
        failed = [r.name for r in results if not r.passed]
        raise InvariantFailure(f"{len(failed)} invariant(s) failed", failed=failed)
    return 0


# -- argument parser ---------------------------------------------------------------


def _add_grid(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=1024, help="grid points (default 1024)")
    p.add_argument("--half-width", type=float, default=10.0, help="grid spans [-L, L) (default 10)")


def _add_signal(p: argparse.ArgumentParser) -> None:
    _add_grid(p)
    p.add_argument("--signal", default="hermite:0",
                   help="gaussian[:mu,sigma,chirp,p0] | hermite:n | hermite:0+1 | bump[:center,width] | file:path")
    p.add_argument("--no-normalize", action="store_true", help="keep table amplitudes as read")


def _add_output(p: argparse.ArgumentParser, default_format: str = "json") -> None:
    p.add_argument("--out", help="output path (default: standard output)")
    p.add_argument("--format", choices=("json", "csv"), default=default_format)


def _add_kernel(p: argparse.ArgumentParser, pair: bool) -> None:
    p.add_argument("--kernel", choices=KERNELS, required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--d", type=float)
    p.add_argument("--c", type=float, help="LCT c entry (recorded, does not enter the kernel)")
    p.add_argument("--phi", type=float)
    if pair:
        p.add_argument("--kernel2", choices=KERNELS, help="family of the second member (default: --kernel)")
        p.add_argument("--beta", type=float)
        p.add_argument("--theta2", type=float, help="second squeeze angle (default: --theta)")
        p.add_argument("--a2", type=float)
        p.add_argument("--b2", type=float)
        p.add_argument("--d2", type=float)
        p.add_argument("--phi2", type=float)
    else:
        p.set_defaults(**{n: None for n in ("kernel2", "beta", "theta2", "a2", "b2", "d2", "phi2")})


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kernelur", description="Kernel transforms and their uncertainty relations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("transform", help="apply a kernel transform; CSV p,re,im plus a JSON sidecar")
    _add_kernel(p, pair=False)
    _add_signal(p)
    _add_output(p)
    p.add_argument("--out-n", type=int, help="output grid points (default: automatic covering grid)")
    p.add_argument("--out-half-width", type=float, help="output grid half width")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("moments", help="first and higher moments of a signal")
    _add_signal(p)
    _add_output(p)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("ur", help="uncertainty report for a pair of transformed momenta")
    _add_kernel(p, pair=True)
    _add_signal(p)
    _add_output(p)
    p.set_defaults(func=cmd_ur)

    p = sub.add_parser("sweep", help="uncertainty reports over a 1-D or 2-D parameter lattice")
    _add_kernel(p, pair=True)
    _add_signal(p)
    _add_output(p, default_format="csv")
    p.add_argument("--sweep", action="append", metavar="NAME=START:STOP:COUNT")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("pn-ur", help="momentum versus photon-number relation")
    _add_signal(p)
    _add_output(p)
    p.add_argument("--n-max", type=int, help="Hermite truncation (default: largest the grid resolves)")
    p.set_defaults(func=cmd_pn_ur)

    p = sub.add_parser("selftest", help="run the invariant suite")
    _add_grid(p)
    p.add_argument("--json", action="store_true", help="machine-readable result list")
    p.add_argument("--out", help="output path (default: standard output)")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except KernelURError as err:
        payload = err.to_dict()
        code = err.exit_code
    except OSError as err:
        payload, code = {"error_kind": "io", "detail": str(err)}, 2
    except ValueError as err:
        payload, code = {"error_kind": "config", "detail": str(err)}, 2
    sys.stderr.write(json.dumps(_clean(payload)) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
