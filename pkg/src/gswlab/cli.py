"""Command-line driver: ``gswlab verify | flow | adhm | cayley``.

Exit codes are 0 on success, 1 when a check fails or a flow blows up,
and 2 for usage and configuration errors.  Reports are JSON written with
sorted keys; timings are left out unless ``--timings`` is given so that
reruns with the same seed are byte-identical.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import _backend, adhm, gsw, lattice4, spin7, suites, sw
from .errors import BlowUp, ConfigError, DivergedError, ParseError, UnknownSuite
from .lattice4 import SD, FormField, Grid4

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SUITE_NAMES = tuple(suites.SUITES) + ("all",)


@dataclass
class RunReport:
    command: str
    seed: int | None
    config: dict
    checks: list = field(default_factory=list)
    results: dict = field(default_factory=dict)
    timings: dict | None = None

    @property
    def passed(self):
        return all(c["passed"] for c in self.checks)

    def to_json(self):
        obj = asdict(self)
        obj["passed"] = self.passed
        if obj["timings"] is None:
            del obj["timings"]
        return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# --- key=value configuration ----------------------------------------------------

FLOW_KEYS = {
    "sw-descent": {
        "seed": int, "N": int, "L": float, "h": float, "steps": int, "rate": float,
        "amplitude": float, "scheme": str,
    },
    "fivedim": {
        "seed": int, "N": int, "L": float, "h": float, "steps": int, "dt": float,
        "amplitude": float, "k": int, "init": str, "scheme": str,
    },
}
FLOW_DEFAULTS = {
    "sw-descent": {"seed": 0, "N": 8, "L": 2 * np.pi, "steps": 100, "amplitude": 0.05, "scheme": "central"},
    "fivedim": {"seed": 0, "N": 4, "L": 2 * np.pi, "steps": 20, "dt": 0.01, "amplitude": 0.1, "k": 2,
                "init": "random", "scheme": "central"},
}
CHOICES = {"scheme": ("central", "forward"), "init": ("random", "fixed-point")}


def parse_config(text, kind, source="<config>"):
    """Parse flat ``key = value`` lines; ``#`` starts a comment."""
    types = FLOW_KEYS[kind]
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in types:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r} for {kind}; known: {', '.join(sorted(types))}")
        if key in out:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            out[key] = types[key](value)
        except ValueError:
            raise ConfigError(f"{source}:{lineno}: {key} needs a {types[key].__name__}, got {value!r}") from None
        if key in CHOICES and out[key] not in CHOICES[key]:
            raise ConfigError(f"{source}:{lineno}: {key} must be one of {', '.join(CHOICES[key])}")
    return out


def _resolve_flow_config(kind, file_cfg, args):
    cfg = dict(FLOW_DEFAULTS[kind])
    cfg.update(file_cfg)
    for key in ("seed", "N", "h", "steps", "dt", "rate"):
        val = getattr(args, key, None)
        if val is not None and key in FLOW_KEYS[kind]:
            cfg[key] = val
    if "h" in cfg and "L" in file_cfg:
        raise ConfigError("give either L or h, not both")
    if cfg["N"] < 4:
        raise ConfigError("N must be at least 4")
    for key in ("steps",):
        if cfg[key] < 0:
            raise ConfigError(f"{key} must be non-negative")
    for key in ("h", "L", "dt", "rate"):
        if key in cfg and not cfg[key] > 0:
            raise ConfigError(f"{key} must be positive")
    if "h" not in cfg:
        cfg["h"] = cfg["L"] / cfg["N"]
    cfg["L"] = cfg["N"] * cfg["h"]
    return cfg


# --- commands ---------------------------------------------------------------------


def _write(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x) + 0.0) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def cmd_verify(args):
    if args.suite not in SUITE_NAMES:
        raise UnknownSuite(args.suite)
    names = tuple(suites.SUITES) if args.suite == "all" else (args.suite,)
    results, timings = {}, {}
    for name in names:
        t0 = time.perf_counter()
        results.update(suites.run_suite(name, seed=args.seed, N=args.N, h=args.h))
        timings[name] = time.perf_counter() - t0
    timings["total"] = sum(timings.values())
    checks = [dict(suite=k, **c.as_dict()) for k, cs in results.items() for c in cs]
    report = RunReport(
        command="verify",
        seed=args.seed,
        config={"suite": args.suite, "N": args.N, "h": args.h, "backend": _backend.name()},
        checks=checks,
        timings=timings if args.timings else None,
    )
    _write(report.to_json(), args.out)
    if not args.quiet:
        for c in checks:
            status = "PASS" if c["passed"] else "FAIL"
            print(f"{status} {c['suite']}/{c['name']}: {c['value']:.3e} (tol {c['tol']:.1e})", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def _sw_initial(cfg):
    rng = np.random.default_rng(cfg["seed"])
    grid = Grid4(cfg["N"], cfg["h"])
    pa = lattice4.TrigPolynomial(rng, grid.L, shape=(4,), amplitude=cfg["amplitude"])
    pp = lattice4.TrigPolynomial(rng, grid.L, shape=(4,), amplitude=cfg["amplitude"])
    return sw.SWConfig.from_real(grid, np.moveaxis(pa(grid), 4, 0), pp(grid))


def _fivedim_initial(cfg):
    rng = np.random.default_rng(cfg["seed"])
    grid = Grid4(cfg["N"], cfg["h"])
    k = cfg["k"]
    if cfg["init"] == "fixed-point":
        # constant diagonal connection, b = 0 and c = 0: a stationary point of the flow
        diag = 1j * cfg["amplitude"] * np.linspace(1.0, -1.0, k)
        data = np.zeros((4,) + grid.shape + (k, k), complex)
        data[..., np.arange(k), np.arange(k)] = diag
        a = FormField(grid, 1, data)
        b = FormField.zeros(grid, SD, (k, k), complex)
    else:
        kw = dict(amplitude=cfg["amplitude"])
        a = lattice4.SmoothLieForm(rng, grid.L, 1, k, **kw)(grid)
        b = lattice4.SmoothLieForm(rng, grid.L, SD, k, **kw)(grid)
    c = FormField.zeros(grid, 0, (k, k), complex)
    return gsw.FiveDState(0.0, a, b, c)


def cmd_flow(args):
    try:
        text = Path(args.config).read_text(encoding="utf-8") if args.config else ""
    except OSError as exc:
        raise ConfigError(f"{args.config}: {exc.strerror}") from None
    cfg = _resolve_flow_config(args.kind, parse_config(text, args.kind, args.config or "<none>"), args)
    if args.kind == "sw-descent":
        cfg0 = _sw_initial(cfg)
        rate = cfg.get("rate", sw.stable_rate(cfg0.grid))
        cfg["rate"] = rate
        _, rows = sw.sw_descent(cfg0, cfg["steps"], rate=rate, scheme=cfg["scheme"])
        header = ("step", "dirac_res", "curv_res")
        total = np.hypot([r[1] for r in rows], [r[2] for r in rows])
        checks = [{
            "name": "residual_monotone",
            "passed": bool(np.all(np.diff(total) <= 0)),
            "value": float(np.max(np.diff(total), initial=0.0)),
            "tol": 0.0,
        }]
        results = {"initial_residual": float(total[0]), "final_residual": float(total[-1])}
    else:
        s0 = _fivedim_initial(cfg)
        _, rows = gsw.five_d_flow(s0, cfg["dt"], cfg["steps"], scheme=cfg["scheme"])
        header = ("t", "norm_a", "norm_b", "norm_c", "res_1", "res_2")
        checks = []
        results = {"final": [float(x) for x in rows[-1]]}
    csv_text = _csv_text(header, rows)
    cfg["backend"] = _backend.name()
    report = RunReport(command=f"flow {args.kind}", seed=cfg["seed"], config=cfg, checks=checks, results=results)
    if args.out is None or args.out == "-":
        sys.stdout.write(csv_text)
    else:
        Path(args.out).write_text(csv_text, encoding="utf-8")
    if args.report:
        _write(report.to_json(), args.report)
    elif args.out not in (None, "-"):
        sys.stdout.write(report.to_json())
    return EXIT_OK if report.passed else EXIT_FAIL


def _cmatrix(m):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.atleast_2d(m)]


def cmd_adhm(args):
    d = adhm.load_adhm(args.datafile)
    muR, muC = adhm.adhm_moment(d)
    level = adhm.level_set_check(d, args.level, args.zeta)
    results = {
        "r": d.r,
        "n": d.n,
        "mu_R": _cmatrix(muR),
        "mu_C": _cmatrix(muC),
        "level": args.level,
        "zeta": args.zeta,
        "level_defect": level.defect,
        "level_member": bool(level.member),
        "on_slice": bool(adhm.on_slice(d, adhm.LEVEL_TOL)),
        "tgr_slice": bool(adhm.tgr_slice_check(d, args.zeta)),
    }
    report = RunReport(
        command="adhm",
        seed=None,
        config={"datafile": str(args.datafile), "level": args.level, "zeta": args.zeta},
        results=results,
    )
    _write(report.to_json(), args.out)
    return EXIT_OK


def cmd_cayley(args):
    spectrum = spin7.spin7_spectrum(args.orientation)
    if args.what == "form":
        rows = [(*idx, float(coeff)) for idx, coeff in sorted(spin7.cayley_form().components().items())]
        text = _csv_text(("i", "j", "k", "l", "coeff"), rows)
    else:
        M = {
            "eigenmap": spin7.eigenmap_matrix(args.orientation),
            "p-plus": spectrum.P_plus,
            "p-minus": spectrum.P_minus,
        }[args.what]
        labels = [f"{i}{j}" for i, j in spin7.PAIRS]
        text = _csv_text(["row"] + labels, [[lab, *map(float, r)] for lab, r in zip(labels, M)])
    _write(text, args.out)
    print(f"eigenvalues {spectrum.value7:g} x7, {spectrum.value21:g} x21", file=sys.stderr)
    return EXIT_OK


# --- entry point ---------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="gswlab", description="Numerical checks for generalized Seiberg-Witten equations.")
    p.add_argument("--backend", choices=("auto", "compiled", "python"), default="auto",
                   help="stencil kernel backend (default: compiled when available)")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run invariant suites")
    v.add_argument("--suite", default="all", help=f"one of {', '.join(SUITE_NAMES)}")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--N", type=int, default=8)
    v.add_argument("--h", type=float, default=0.25)
    v.add_argument("--out", help="JSON report path (default stdout)")
    v.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    v.add_argument("--quiet", action="store_true", help="no per-check lines on stderr")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("flow", help="run a flow and write its trajectory as CSV")
    f.add_argument("--kind", required=True, choices=tuple(FLOW_KEYS))
    f.add_argument("--config", help="key=value configuration file")
    f.add_argument("--seed", type=int)
    f.add_argument("--N", type=int)
    f.add_argument("--h", type=float)
    f.add_argument("--steps", type=int)
    f.add_argument("--dt", type=float)
    f.add_argument("--rate", type=float)
    f.add_argument("--out", help="trajectory CSV path (default stdout)")
    f.add_argument("--report", help="JSON report path")
    f.set_defaults(func=cmd_flow)

    a = sub.add_parser("adhm", help="evaluate moment maps of an ADHM data file")
    a.add_argument("datafile")
    a.add_argument("--level", choices=("zero", "i"), default="zero")
    a.add_argument("--zeta", type=float, default=1.0)
    a.add_argument("--out", help="JSON report path (default stdout)")
    a.set_defaults(func=cmd_adhm)

    c = sub.add_parser("cayley", help="Cayley form utilities")
    c.add_argument("action", choices=("dump",))
    c.add_argument("--what", choices=("eigenmap", "p-plus", "p-minus", "form"), default="eigenmap",
                   help="28x28 matrix in the dx_i^dx_j basis, or the nonzero 4-form coefficients")
    c.add_argument("--orientation", type=int, choices=(1, -1), default=1)
    c.add_argument("--out", help="CSV path (default stdout)")
    c.set_defaults(func=cmd_cayley)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.backend != "auto":
            try:
                _backend.use(args.backend)
            except RuntimeError as exc:
                raise ConfigError(str(exc)) from None
        return args.func(args)
    except (UnknownSuite, ConfigError, ParseError, ValueError) as exc:
        msg = exc
        if isinstance(exc, UnknownSuite):
            msg = f"unknown suite {exc.args[0]!r}; choose from {', '.join(SUITE_NAMES)}"
        print(f"gswlab: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except (BlowUp, DivergedError) as exc:
        print(f"gswlab: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
