"""Job configuration: flat ``key=value`` lines with dotted sections.

Grammar, one entry per line::

    line    := blank | '#' comment | key '=' value
    key     := section ('.' name)*

Recognised keys
    potential.kind          harmonic | poschl_teller | poschl_teller_trig | morse |
                            rosen_morse | lj | polynomial | expression
    potential.<param>       numeric parameters of the kind (V0, a, k, omega, A, B, ...);
                            lj also accepts hw_over_V0 in place of V0
    potential.coeffs        comma-separated polynomial coefficients, constant first
    potential.text          expression text in x (kind = expression)
    potential.search        lo,hi bracket of the minimum (required for expression)
    potential.dissociation  threshold energy for expression wells (optional)
    potential.bounds        lo,hi domain of an expression (optional)
    constants.hbar, constants.mass
    methods                 comma-separated subset of perturbative, numericBS,
                            asymptoticFit, oracle, exactClosedForm
    levels                  "all-bound", a range "0..5", or a list "0,1,2,10"
    reference               method used for the error columns (default numericBS)
    output                  table | csv | plotdata
    series.variant          auto | cubicQuartic | symmetricSextic
    quantizer.rootTolerance, quantizer.quadraturePoints, quantizer.maxBisections
    grid.xMin, grid.xMax, grid.points
    fit.n0PlusHalf, fit.alpha, fit.beta   (asymptoticFit overrides)

Values keep surrounding whitespace stripped; later duplicates are an error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple, Union

from .action import QuantizerSettings
from .errors import BSQError, ConfigError
from .oracle import GridSettings
from .potentials import CATALOG, METHODS, Constants, LJFamily, Potential

OUTPUTS = ("table", "csv", "plotdata")
ALL_BOUND = "all-bound"


@dataclass(frozen=True)
class JobConfig:
    potential: Potential
    methods: Tuple[str, ...]
    levels: Union[Tuple[int, ...], str]
    output: str = "table"
    reference: str = "numericBS"
    variant: str = "auto"
    quantizer: QuantizerSettings = field(default_factory=QuantizerSettings.from_env)
    grid: Optional[GridSettings] = None
    fit: Dict[str, float] = field(default_factory=dict)


def read_pairs(text: str) -> Dict[str, str]:
    pairs: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in pairs:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        pairs[key] = value
    return pairs


def parse_levels(text: str):
    text = text.strip()
    if text == ALL_BOUND:
        return ALL_BOUND
    try:
        if ".." in text:
            lo, hi = (int(s) for s in text.split(".."))
            levels = tuple(range(lo, hi + 1))
        else:
            levels = tuple(int(s) for s in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"bad level specification {text!r}") from exc
    if not levels or min(levels) < 0:
        raise ConfigError("levels must be a non-empty set of non-negative integers")
    return levels


def _float(key, value):
    try:
        return float(value)
    except ValueError as exc:
        raise ConfigError(f"{key}: {value!r} is not a number") from exc


def _pair(key, value):
    parts = value.split(",")
    if len(parts) != 2:
        raise ConfigError(f"{key}: expected lo,hi")
    return _float(key, parts[0]), _float(key, parts[1])


def build_potential(params: Dict[str, str], constants: Constants) -> Potential:
    """Construct a potential from ``potential.*`` entries (section prefix removed)."""
    params = dict(params)
    kind = params.pop("kind", None)
    if kind is None:
        raise ConfigError("potential.kind is required")
    if kind not in CATALOG:
        raise ConfigError(f"unknown potential kind {kind!r}; choose from {sorted(CATALOG)}")
    try:
        if kind == "expression":
            if "search" not in params:
                raise ConfigError("expression potentials need potential.search=lo,hi")
            kwargs = {"text": params.pop("text", ""), "search": _pair("search", params.pop("search"))}
            if "dissociation" in params:
                kwargs["dissociation_energy"] = _float("dissociation", params.pop("dissociation"))
            if "bounds" in params:
                kwargs["bounds"] = _pair("bounds", params.pop("bounds"))
            if "scale" in params:
                kwargs["scale"] = _float("scale", params.pop("scale"))
        elif kind == "polynomial":
            coeffs = params.pop("coeffs", None)
            if coeffs is None:
                raise ConfigError("polynomial potentials need potential.coeffs")
            kwargs = {"coeffs": tuple(_float("coeffs", c) for c in coeffs.split(","))}
            if "search" in params:
                kwargs["search"] = _pair("search", params.pop("search"))
            if "center" in params:
                kwargs["center"] = _float("center", params.pop("center"))
        elif kind == "lj" and "hw_over_V0" in params:
            hw = _float("hw_over_V0", params.pop("hw_over_V0"))
            k = _float("k", params.pop("k", "6"))
            a = _float("a", params.pop("a", "1"))
            if params:
                raise ConfigError(f"unexpected potential keys {sorted(params)}")
            return LJFamily.from_hw_over_v0(_int_if_whole(k), hw, a=a, constants=constants)
        else:
            kwargs = {k: _int_if_whole(_float(k, v)) if k == "k" else _float(k, v) for k, v in params.items()}
            params = {}
        if params:
            raise ConfigError(f"unexpected potential keys {sorted(params)}")
        return CATALOG[kind](**kwargs, constants=constants)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {kind}: {exc}") from exc
    except ConfigError:
        raise
    except (BSQError, ValueError) as exc:
        raise ConfigError(f"invalid {kind} potential: {exc}") from exc


def _int_if_whole(v):
    return int(v) if float(v).is_integer() else v


def _section(pairs, name):
    prefix = name + "."
    return {k[len(prefix):]: v for k, v in pairs.items() if k.startswith(prefix)}


def parse_config(text: str) -> JobConfig:
    pairs = read_pairs(text)
    known = {"potential", "constants", "quantizer", "grid", "fit", "series"}
    for key in pairs:
        head = key.split(".", 1)[0]
        if "." in key and head not in known:
            raise ConfigError(f"unknown section {head!r}")
        if "." not in key and key not in ("methods", "levels", "reference", "output"):
            raise ConfigError(f"unknown key {key!r}")

    cst = _section(pairs, "constants")
    try:
        constants = Constants(**{k: _float(k, v) for k, v in cst.items()})
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"constants: {exc}") from exc
    potential = build_potential(_section(pairs, "potential"), constants)

    methods = tuple(m.strip() for m in pairs.get("methods", "").split(",") if m.strip())
    if not methods:
        raise ConfigError("at least one method is required")
    bad = [m for m in methods if m not in METHODS]
    if bad:
        raise ConfigError(f"unknown methods {bad}; choose from {list(METHODS)}")

    reference = pairs.get("reference", "numericBS")
    if reference not in METHODS:
        raise ConfigError(f"unknown reference method {reference!r}")
    output = pairs.get("output", "table")
    if output not in OUTPUTS:
        raise ConfigError(f"output must be one of {OUTPUTS}")

    names = {"rootTolerance": ("root_tolerance", float),
             "quadraturePoints": ("quadrature_points", int),
             "maxBisections": ("max_bisections", int)}
    q = {}
    for k, v in _section(pairs, "quantizer").items():
        if k not in names:
            raise ConfigError(f"unknown quantizer key {k!r}")
        attr, conv = names[k]
        try:
            q[attr] = conv(v)
        except ValueError as exc:
            raise ConfigError(f"quantizer.{k}: {v!r}") from exc
    try:
        quantizer = QuantizerSettings.from_env(**q)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    g = _section(pairs, "grid")
    grid = None
    if g:
        if set(g) != {"xMin", "xMax", "points"}:
            raise ConfigError("grid needs exactly xMin, xMax and points")
        try:
            grid = GridSettings(_float("xMin", g["xMin"]), _float("xMax", g["xMax"]), int(g["points"]))
        except ValueError as exc:
            raise ConfigError(f"grid: {exc}") from exc

    fit = {k: _float(k, v) for k, v in _section(pairs, "fit").items()}
    if set(fit) - {"n0PlusHalf", "alpha", "beta"}:
        raise ConfigError("fit accepts n0PlusHalf, alpha and beta")
    if ("alpha" in fit) != ("beta" in fit):
        raise ConfigError("fit.alpha and fit.beta must be given together")

    variant = _section(pairs, "series").get("variant", "auto")
    if variant not in ("auto", "cubicQuartic", "symmetricSextic"):
        raise ConfigError(f"unknown series variant {variant!r}")

    return JobConfig(
        potential=potential,
        methods=methods,
        levels=parse_levels(pairs.get("levels", "0")),
        output=output,
        reference=reference,
        variant=variant,
        quantizer=quantizer,
        grid=grid,
        fit=fit,
    )


def load_config(path) -> JobConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return parse_config(text)
