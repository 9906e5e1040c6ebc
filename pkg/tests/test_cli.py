import math

import numpy as np
import pytest

from bsq.action import QuantizerSettings
from bsq.cli import CSV_HEADER, format_csv, format_plotdata, format_table, main, scaled_digits, run_job
from bsq.config import ALL_BOUND, JobConfig, parse_config, parse_levels, read_pairs
from bsq.errors import ConfigError
from bsq.oracle import GridSettings
from bsq.potentials import Expression, Harmonic, LJFamily, Morse, PoschlTeller

LJ_CONFIG = """
# Lennard-Jones 6-12 at the tabulated depth
potential.kind = lj
potential.k = 6
potential.hw_over_V0 = 0.03
methods = perturbative
levels = 0..5
output = csv
"""


# --- config ---------------------------------------------------------------

def test_read_pairs():
    pairs = read_pairs("a = 1\n# note\n\nb.c=x y\n")
    assert pairs == {"a": "1", "b.c": "x y"}
    with pytest.raises(ConfigError):
        read_pairs("a=1\na=2")
    with pytest.raises(ConfigError):
        read_pairs("just words")


def test_parse_levels():
    assert parse_levels("0..3") == (0, 1, 2, 3)
    assert parse_levels("0, 2,10") == (0, 2, 10)
    assert parse_levels("all-bound") == ALL_BOUND
    for bad in ("", "a..b", "-1", "3..1"):
        with pytest.raises(ConfigError):
            parse_levels(bad)


def test_parse_lj_config():
    cfg = parse_config(LJ_CONFIG)
    assert isinstance(cfg.potential, LJFamily)
    assert cfg.potential.hw_over_V0 == pytest.approx(0.03, rel=1e-14)
    assert cfg.methods == ("perturbative",) and cfg.output == "csv"


@pytest.mark.parametrize("text", [
    "potential.kind=morse\nmethods=",                               # no method
    "potential.kind=morse\nmethods=magic",                          # unknown method
    "potential.kind=nowhere\nmethods=numericBS",                    # unknown kind
    "methods=numericBS",                                            # no potential
    "potential.kind=expression\npotential.text=x^2\nmethods=numericBS",  # no search interval
    "potential.kind=morse\npotential.V0=-1\nmethods=numericBS",     # invalid parameter
    "potential.kind=morse\nmethods=numericBS\ngrid.xMin=0",         # incomplete grid
    "potential.kind=morse\nmethods=numericBS\nweird=1",             # unknown key
    "potential.kind=morse\nmethods=numericBS\nquantizer.rootTolerance=0.5",
    "potential.kind=morse\nmethods=numericBS\nfit.alpha=1",
])
def test_config_errors(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_config_settings():
    cfg = parse_config("potential.kind=morse\npotential.V0=50\nmethods=oracle,numericBS\n"
                       "quantizer.rootTolerance=1e-10\ngrid.xMin=-2\ngrid.xMax=30\ngrid.points=5000\n"
                       "constants.hbar=1\nreference=oracle")
    assert cfg.quantizer.root_tolerance == 1e-10
    assert cfg.grid == GridSettings(-2.0, 30.0, 5000)
    assert cfg.reference == "oracle"


def test_seed_tolerance_env(monkeypatch):
    monkeypatch.setenv("BSQ_SEED_TOLERANCE", "1e-8")
    assert parse_config("potential.kind=morse\nmethods=numericBS").quantizer.root_tolerance == 1e-8


# --- jobs -----------------------------------------------------------------

def test_lj_perturbative_column():
    report = run_job(parse_config(LJ_CONFIG))
    got = [r.energy_over_scale for r in report.rows]
    np.testing.assert_allclose(got, [-0.941, -0.830, -0.728, -0.636, -0.551, -0.477], atol=2e-3)
    assert report.exit_code == 0


def test_harmonic_two_methods():
    cfg = JobConfig(Harmonic(), ("numericBS", "oracle"), (0, 1, 2),
                    grid=GridSettings(-10.0, 10.0, 4000))
    report = run_job(cfg)
    for method in ("numericBS", "oracle"):
        e = report.energies(method)
        assert [e[n] for n in range(3)] == pytest.approx([0.5, 1.5, 2.5], abs=1e-6)


def test_lj_fit_all_bound():
    cfg = JobConfig(LJFamily.from_hw_over_v0(6, 0.03), ("asymptoticFit", "numericBS"), ALL_BOUND)
    report = run_job(cfg)
    assert report.levels == tuple(range(24))
    fit_rows = [r for r in report.rows if r.method == "asymptoticFit"]
    assert len(fit_rows) == 24
    # agreement with the quantizer is a fraction of a percent, see the acceptance report
    assert max(r.rel_err for r in fit_rows) < 0.05


def test_partial_report():
    cfg = JobConfig(Morse(V0=50, a=1), ("numericBS", "exactClosedForm"), (8, 9, 10))
    report = run_job(cfg)
    assert report.partial and report.exit_code == 4
    assert {(m, n) for m, n, _ in report.failures} == {("numericBS", 10), ("exactClosedForm", 10)}
    assert report.energies("exactClosedForm")[9] == pytest.approx(-0.125)


def test_method_setup_failure_is_tagged():
    cfg = JobConfig(Morse(V0=50, a=1), ("asymptoticFit", "numericBS"), (0,))
    report = run_job(cfg)
    assert report.failures[0][0] == "asymptoticFit" and report.failures[0][1] is None
    assert 0 in report.energies("numericBS")


def test_reference_columns():
    cfg = JobConfig(Morse(V0=50, a=1), ("perturbative", "exactClosedForm"), (0, 3),
                    reference="exactClosedForm")
    report = run_job(cfg)
    for r in report.rows:
        assert r.abs_err == pytest.approx(0.0, abs=1e-9)


# --- output ---------------------------------------------------------------

def test_csv_header_and_determinism():
    cfg = parse_config(LJ_CONFIG)
    a = format_csv(run_job(cfg))
    b = format_csv(run_job(parse_config(LJ_CONFIG)))
    assert a == b
    lines = a.splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 7
    energy = lines[1].split(",")[2]
    assert len(energy.split("e")[0].replace("-", "").replace(".", "")) == 10


def test_scaled_digits():
    assert scaled_digits(-0.94113, 5) == "94113"
    assert scaled_digits(-0.00019, 5) == "00019"
    assert scaled_digits(0.0, 5) == "00000"


def test_table_scaled_style():
    report = run_job(JobConfig(LJFamily.from_hw_over_v0(6, 0.03), ("asymptoticFit",), (0, 23)))
    text = format_table(report, scaled=True, digits=5)
    assert "94113" in text and "00000" in text


def test_plotdata():
    report = run_job(JobConfig(Morse(V0=50, a=1), ("numericBS",), (0, 1)))
    text = format_plotdata(report, samples=50)
    head, levels = text.split("# levels\n")
    assert head.startswith("# potential\nx,V\n")
    rows = levels.strip().splitlines()
    assert rows[0] == "n,method,energy,x_left,x_right" and len(rows) == 3
    n, method, e, xl, xr = rows[1].split(",")
    assert float(xl) < 0 < float(xr)


# --- command line ---------------------------------------------------------

def test_main_run(tmp_path, capsys):
    cfg = tmp_path / "job.cfg"
    cfg.write_text(LJ_CONFIG)
    out_csv = tmp_path / "out.csv"
    assert main(["run", str(cfg), "--csv", str(out_csv)]) == 0
    assert capsys.readouterr().out.startswith(CSV_HEADER)
    assert out_csv.read_text().startswith(CSV_HEADER)


def test_main_config_error(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("potential.kind=morse\n")
    assert main(["run", str(cfg)]) == 2
    assert main(["run", str(tmp_path / "missing.cfg")]) == 2


def test_main_partial(capsys):
    code = main(["levels", "--potential", "morse", "--param", "V0=50", "--n", "9..10"])
    assert code == 4
    assert "n=10" in capsys.readouterr().err


def test_main_numeric_failure(capsys):
    code = main(["levels", "--potential", "morse", "--param", "V0=50", "--n", "10..11"])
    assert code == 3


def test_main_levels_expression(capsys):
    code = main(["levels", "--potential", "0.5*x^2", "--search=-1,1", "--method", "numericBS",
                 "--n", "0..2", "--format", "csv"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert [float(l.split(",")[2]) for l in lines[1:]] == pytest.approx([0.5, 1.5, 2.5], rel=1e-10)


def test_main_table1(capsys):
    assert main(["table1", "--paper-style"]) == 0
    out = capsys.readouterr().out
    assert "941" in out and "published_pert" in out


# --- expression transcriptions reproduce the catalog -----------------------

CASES = [
    (Morse(V0=50, a=1), Expression("50*(exp(-2*x) - 2*exp(-x))", search=(-1.0, 1.0),
                                   dissociation_energy=0.0),
     GridSettings(-2.5, 25.0, 6000)),
    (PoschlTeller(V0=10.0, a=1.0), Expression("-10*sech(x)^2", search=(-1.0, 1.0),
                                              dissociation_energy=0.0),
     GridSettings(-15.0, 15.0, 6000)),
]


@pytest.mark.parametrize("catalog, expr, grid", CASES, ids=["morse", "poschl_teller"])
def test_expression_matches_catalog(catalog, expr, grid):
    levels = (0, 1, 2)
    for method in ("numericBS", "oracle"):
        a = run_job(JobConfig(catalog, (method,), levels, grid=grid)).energies(method)
        b = run_job(JobConfig(expr, (method,), levels, grid=grid)).energies(method)
        for n in levels:
            assert b[n] == pytest.approx(a[n], rel=1e-9), (method, n)


@pytest.mark.parametrize("catalog, expr, grid", CASES, ids=["morse", "poschl_teller"])
def test_expression_perturbative_close_to_catalog(catalog, expr, grid):
    # series coefficients come from finite differences of the text, so
    # agreement is limited by the sixth-derivative accuracy
    a = run_job(JobConfig(catalog, ("perturbative",), (0, 1, 2))).energies("perturbative")
    b = run_job(JobConfig(expr, ("perturbative",), (0, 1, 2))).energies("perturbative")
    for n in (0, 1, 2):
        assert b[n] == pytest.approx(a[n], rel=1e-6)
