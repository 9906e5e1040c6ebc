"""Command-line front end and the spectrum job runner.

    bsq run <config> [--csv PATH] [--plotdata PATH] [--paper-style]
    bsq table1 [--csv PATH] [--paper-style]
    bsq table2 [--csv PATH] [--paper-style] [--oracle]
    bsq levels --potential <name|expression> --method <m> --n <range> [--param K=V ...]

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 partial report (some method/level combinations failed).
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import ljasym
from .action import QuantizerSettings, level_count, quantize, turning_points_numeric
from .config import ALL_BOUND, JobConfig, build_potential, load_config, parse_levels
from .errors import BSQError, ConfigError, NotApplicableError
from .oracle import solve_bound_states
from .potentials import CATALOG, METHODS, Constants, LJFamily, Potential
from .wellseries import CUBIC_QUARTIC, SYMMETRIC_SEXTIC, expand_well, perturbative_energy

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_PARTIAL = 0, 2, 3, 4
CSV_HEADER = "n,method,energy,energy_over_scale,abs_err_vs_reference,rel_err_vs_reference"
REL_FLOOR = 1e-3  # in units of the potential's energy scale


@dataclass(frozen=True)
class Row:
    n: int
    method: str
    energy: float
    energy_over_scale: float
    abs_err: float = math.nan
    rel_err: float = math.nan


@dataclass
class JobReport:
    potential: Potential
    methods: Tuple[str, ...]
    levels: Tuple[int, ...]
    reference: str
    rows: List[Row] = field(default_factory=list)
    failures: List[Tuple[str, Optional[int], str]] = field(default_factory=list)

    @property
    def partial(self) -> bool:
        return bool(self.failures)

    @property
    def exit_code(self) -> int:
        if not self.failures:
            return EXIT_OK
        return EXIT_PARTIAL if self.rows else EXIT_NUMERIC

    def energies(self, method: str) -> Dict[int, float]:
        return {r.n: r.energy for r in self.rows if r.method == method}


def _variant(spec: Potential, variant: str) -> str:
    if variant == "auto":
        return SYMMETRIC_SEXTIC if spec.symmetric else CUBIC_QUARTIC
    return variant


def _method_runner(config: JobConfig, method: str, levels: Sequence[int]):
    """Return a callable n -> energy for ``method``; setup errors propagate."""
    spec = config.potential
    if method == "perturbative":
        variant = _variant(spec, config.variant)
        w = expand_well(spec, order=6 if variant == SYMMETRIC_SEXTIC else 4)
        return lambda n: perturbative_energy(w, n, variant)
    if method == "numericBS":
        return lambda n: quantize(spec, n, config.quantizer).energy
    if method == "exactClosedForm":
        return spec.exact_energy
    if method == "asymptoticFit":
        if not isinstance(spec, LJFamily) or spec.k <= 2:
            raise NotApplicableError("the asymptotic fit exists only for the Lennard-Jones family with k > 2")
        n0 = config.fit.get("n0PlusHalf", ljasym.n0_plus_half(spec.k, spec.hw_over_V0))
        if "alpha" in config.fit:
            fit = ljasym.FitCoefficients(config.fit["alpha"], config.fit["beta"])
        else:
            fit = ljasym.fit_coefficients(spec.k, spec.hw_over_V0, n0)
        return lambda n: ljasym.fitted_energy(n, n0, fit) * spec.energy_scale
    if method == "oracle":
        oracle = solve_bound_states(spec, config.grid, max(levels) + 1)
        found = {lv.n: lv.energy for lv in oracle}

        def lookup(n):
            if n not in found:
                raise NotApplicableError(f"oracle found only {len(found)} bound states")
            return found[n]
        return lookup
    raise ConfigError(f"unknown method {method!r}")


def resolve_levels(config: JobConfig) -> Tuple[int, ...]:
    if config.levels != ALL_BOUND:
        return tuple(config.levels)
    count = level_count(config.potential, config.quantizer)
    if not math.isfinite(count):
        raise NotApplicableError("'all-bound' needs a finite number of bound levels")
    return tuple(range(count))


def run_job(config: JobConfig) -> JobReport:
    """Evaluate every requested method at every level.

    Failures are recorded per method (and level) and do not stop the others.
    """
    spec = config.potential
    levels = resolve_levels(config)
    report = JobReport(spec, config.methods, levels, config.reference)
    methods = list(config.methods)
    if config.reference not in methods:
        methods.append(config.reference)
    computed: Dict[str, Dict[int, float]] = {}
    for method in methods:
        values: Dict[int, float] = {}
        try:
            run = _method_runner(config, method, levels)
        except BSQError as exc:
            if method in config.methods:
                report.failures.append((method, None, str(exc)))
            computed[method] = values
            continue
        for n in levels:
            try:
                values[n] = float(run(n))
            except BSQError as exc:
                if method in config.methods:
                    report.failures.append((method, n, str(exc)))
        computed[method] = values

    ref = computed.get(config.reference, {})
    scale = spec.energy_scale
    floor = REL_FLOOR * abs(scale)
    for method in config.methods:
        for n in levels:
            if n not in computed[method]:
                continue
            e = computed[method][n]
            abs_err = rel_err = math.nan
            if n in ref:
                abs_err = abs(e - ref[n])
                rel_err = abs_err / max(abs(ref[n]), floor)
            report.rows.append(Row(n, method, e, e / scale, abs_err, rel_err))
    report.rows.sort(key=lambda r: (r.n, config.methods.index(r.method)))
    return report


def _fmt(v: float) -> str:
    return "nan" if math.isnan(v) else "{:.9e}".format(v)


def format_csv(report: JobReport) -> str:
    out = [CSV_HEADER]
    for r in report.rows:
        out.append(",".join([str(r.n), r.method, _fmt(r.energy), _fmt(r.energy_over_scale),
                             _fmt(r.abs_err), _fmt(r.rel_err)]))
    return "\n".join(out) + "\n"


def scaled_digits(value: float, digits: int) -> str:
    """|value| as a zero-padded integer in units of 10^-digits, e.g. -0.94113 -> 94113."""
    return str(int(round(abs(value) * 10**digits))).zfill(digits)


def format_table(report: JobReport, scaled: bool = False, digits: int = 5,
                 extra: Optional[Dict[str, Sequence[float]]] = None) -> str:
    """Aligned table of energy_over_scale, one column per method.

    ``extra`` adds published columns aligned with ``report.levels``.
    """
    cols = list(report.methods) + list(extra or {})
    table: Dict[Tuple[int, str], float] = {(r.n, r.method): r.energy_over_scale for r in report.rows}
    for name, vals in (extra or {}).items():
        for n, v in zip(report.levels, vals):
            table[(n, name)] = v
    width = max(16, *(len(c) + 2 for c in cols))
    lines = ["n".rjust(4) + "".join(c.rjust(width) for c in cols)]
    for n in report.levels:
        cells = []
        for c in cols:
            v = table.get((n, c))
            if v is None:
                cells.append("--".rjust(width))
            elif scaled:
                cells.append(scaled_digits(v, digits).rjust(width))
            else:
                cells.append(f"{v:.9f}".rjust(width))
        lines.append(str(n).rjust(4) + "".join(cells))
    if scaled:
        lines.append(f"(magnitudes of E/scale in units of 10^-{digits})")
    for method, n, msg in report.failures:
        where = "" if n is None else f" n={n}"
        lines.append(f"! {method}{where}: {msg}")
    return "\n".join(lines) + "\n"


def format_plotdata(report: JobReport, samples: int = 400) -> str:
    """Potential curve plus one horizontal segment per computed level."""
    spec = report.potential
    x0, vmin = spec.minimum()
    top = spec.dissociation()
    energies = [r.energy for r in report.rows]
    e_hi = max(energies) if energies else vmin + abs(spec.energy_scale)
    if math.isfinite(top):
        e_hi = max(e_hi, top)
    seg = {}
    for r in report.rows:
        try:
            seg[(r.n, r.method)] = turning_points_numeric(spec, r.energy)
        except BSQError:
            seg[(r.n, r.method)] = (math.nan, math.nan)
    xs = [p for pair in seg.values() for p in pair if math.isfinite(p)]
    L = spec.length_scale
    lo = min(xs, default=x0 - 3 * L) - 0.5 * L
    hi = max(xs, default=x0 + 3 * L) + 0.5 * L
    dlo, dhi = spec.domain
    lo = max(lo, dlo + 1e-6 * L if math.isfinite(dlo) else lo)
    hi = min(hi, dhi - 1e-6 * L if math.isfinite(dhi) else hi)
    out = ["# potential", "x,V"]
    for x in np.linspace(lo, hi, samples):
        try:
            v = float(spec(x))
        except BSQError:
            continue
        out.append(f"{_fmt(float(x))},{_fmt(v)}")
    out += ["# levels", "n,method,energy,x_left,x_right"]
    for r in report.rows:
        xl, xr = seg[(r.n, r.method)]
        out.append(f"{r.n},{r.method},{_fmt(r.energy)},{_fmt(xl)},{_fmt(xr)}")
    return "\n".join(out) + "\n"


def _write(path: str, text: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _emit(report: JobReport, args, output: str = "table", digits: int = 5, extra=None, stdout=None):
    stdout = stdout or sys.stdout
    if args.csv:
        _write(args.csv, format_csv(report))
    if getattr(args, "plotdata", None):
        _write(args.plotdata, format_plotdata(report))
    if output == "csv":
        stdout.write(format_csv(report))
    elif output == "plotdata":
        stdout.write(format_plotdata(report))
    else:
        stdout.write(format_table(report, args.paper_style, digits, extra))
    for method, n, msg in report.failures:
        where = "" if n is None else f" n={n}"
        print(f"bsq: {method}{where}: {msg}", file=sys.stderr)
    return report.exit_code


def lj_table_config(methods, levels, hw_over_V0: float = 0.03, k: int = 6) -> JobConfig:
    spec = LJFamily.from_hw_over_v0(k, hw_over_V0)
    return JobConfig(spec, tuple(methods), tuple(levels))


def _cmd_run(args) -> int:
    config = load_config(args.config)
    return _emit(run_job(config), args, config.output)


def _cmd_table1(args) -> int:
    config = lj_table_config(("perturbative", "numericBS"), ljasym.TABLE1_N)
    extra = {"published_pert": ljasym.TABLE1_PERTURBATIVE, "published_exact": ljasym.TABLE1_EXACT}
    return _emit(run_job(config), args, digits=3, extra=extra)


def _cmd_table2(args) -> int:
    methods = ("asymptoticFit", "numericBS") + (("oracle",) if args.oracle else ())
    config = lj_table_config(methods, range(24))
    extra = {"published_fit": ljasym.TABLE2_FIT, "published_exact": ljasym.TABLE2_EXACT}
    return _emit(run_job(config), args, digits=5, extra=extra)


def _cmd_levels(args) -> int:
    constants = Constants(hbar=args.hbar, mass=args.mass)
    params = {}
    for item in args.param or []:
        if "=" not in item:
            raise ConfigError(f"--param expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        params[k.strip()] = v.strip()
    if args.potential in CATALOG and args.potential != "expression":
        params["kind"] = args.potential
    else:
        params.update(kind="expression", text=args.potential)
        if args.search:
            params["search"] = args.search
    spec = build_potential(params, constants)
    methods = tuple(m.strip() for m in args.method.split(","))
    bad = [m for m in methods if m not in METHODS]
    if bad:
        raise ConfigError(f"unknown methods {bad}")
    config = JobConfig(spec, methods, parse_levels(args.n), quantizer=QuantizerSettings.from_env())
    return _emit(run_job(config), args, "csv" if args.format == "csv" else "table")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bsq", description="Bohr-Sommerfeld spectra of 1D wells")
    sub = p.add_subparsers(dest="command", required=True)

    def outputs(sp, plot=True):
        sp.add_argument("--csv", metavar="PATH", help="also write CSV to PATH")
        if plot:
            sp.add_argument("--plotdata", metavar="PATH", help="also write plot data to PATH")
        sp.add_argument("--paper-style", action="store_true",
                        help="print scaled integer magnitudes like the published tables")

    r = sub.add_parser("run", help="run a job described by a key=value config file")
    r.add_argument("config")
    outputs(r)
    r.set_defaults(func=_cmd_run)

    t1 = sub.add_parser("table1", help="Lennard-Jones perturbative series vs numerical quantization")
    outputs(t1, plot=False)
    t1.set_defaults(func=_cmd_table1)

    t2 = sub.add_parser("table2", help="Lennard-Jones rational fit vs numerical quantization")
    outputs(t2, plot=False)
    t2.add_argument("--oracle", action="store_true", help="add the finite-difference column")
    t2.set_defaults(func=_cmd_table2)

    lv = sub.add_parser("levels", help="levels of a catalog potential or an expression")
    lv.add_argument("--potential", required=True, help="catalog name or expression in x")
    lv.add_argument("--method", default="numericBS", help="comma-separated methods")
    lv.add_argument("--n", default="0..4", help='levels: "0..5", "0,2,4" or "all-bound"')
    lv.add_argument("--param", action="append", metavar="KEY=VALUE", help="potential parameter")
    lv.add_argument("--search", metavar="LO,HI", help="bracket of the minimum (expressions)")
    lv.add_argument("--hbar", type=float, default=1.0)
    lv.add_argument("--mass", type=float, default=1.0)
    lv.add_argument("--format", choices=("table", "csv"), default="table")
    outputs(lv)
    lv.set_defaults(func=_cmd_levels)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"bsq: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BSQError as exc:
        print(f"bsq: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, ValueError) as exc:
        print(f"bsq: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
