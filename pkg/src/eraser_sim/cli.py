"""Command-line driver: phase scans in eraser or which-way mode.

Example::

    eraser-sim --mode eraser --scan phi --points 64 --pairs 100000 --seed 7 \\
        --out run.csv --plot run.svg
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import re
import sys
from dataclasses import dataclass

import numpy as np

from . import analysis, kernels
from .correlator import run_point
from .ensemble import EnsembleSpec, coherence_report, derive_seed
from .model import TWO_PI, Mode, SetupConfig
from .oracle import analytic_value
from .svg import line_plot

COLUMNS = ["index", "phase_rad", "phi", "psi", "i10", "i21", "i22", "r01", "r02", "r03",
           "r04", "n01", "n02", "n03", "n04", "n_lost", "n_pairs"]

MODES = ("eraser", "whichway-a", "whichway-b")
SCANS = ("phi", "psi", "joint")
ENGINES = ("analytic", "montecarlo", "both")
FORMATS = ("csv", "json")

# Summary-test thresholds.
ANALYTIC_TOL = 1e-12
MC_COMPLEMENTARITY_TOL = 0.02
MC_FLATNESS_VISIBILITY = 0.02
MC_SIGMA = 3.0

EXIT_OK, EXIT_STRICT, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    out_path: str
    mode: str = "eraser"
    scan: str = "phi"
    scan_start: float = 0.0
    scan_end: float = TWO_PI
    scan_points: int = 64
    fixed_phi: float = 0.0
    fixed_psi: float = 0.0
    delta: float = 1.0
    tau: float = 1.0
    pairs: int = 100_000
    seed: int = 42
    engine: str = "both"
    format: str | None = None
    plot_path: str | None = None
    strict: bool = False
    gamma_ratio: float = 0.1

    @property
    def output_format(self) -> str:
        if self.format:
            return self.format
        return "json" if self.out_path.lower().endswith(".json") else "csv"

    @property
    def uses_analytic(self) -> bool:
        return self.engine in ("analytic", "both")

    @property
    def uses_montecarlo(self) -> bool:
        return self.engine in ("montecarlo", "both")

    def phases(self) -> list[float]:
        span = self.scan_end - self.scan_start
        return [self.scan_start + span * k / self.scan_points for k in range(self.scan_points)]

    def point_phases(self, x: float) -> tuple[float, float]:
        if self.scan == "phi":
            return x, self.fixed_psi
        if self.scan == "psi":
            return self.fixed_phi, x
        return x, (self.fixed_phi + self.fixed_psi) - x


_PI_MULTIPLE = re.compile(r"^([-+]?)(\d*\.?\d*(?:e[-+]?\d+)?)\s*\*?\s*pi(?:\s*/\s*(\d+\.?\d*))?$")


def parse_angle(text) -> float:
    """Float, or a multiple of pi such as ``pi``, ``2pi``, ``-pi/2``, ``1.5*pi``."""
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        value = float(text)
    else:
        s = str(text).strip().lower()
        m = _PI_MULTIPLE.match(s)
        if m:
            sign, factor, den = m.groups()
            value = (-1.0 if sign == "-" else 1.0) * float(factor or 1.0) * math.pi
            value /= float(den or 1.0)
        else:
            value = float(s)
    if not math.isfinite(value):
        raise ValueError(f"angle must be finite: {text!r}")
    return value


def _positive_int(text) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _finite(text) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be finite, got {text}")
    return value


def _angle_arg(text) -> float:
    try:
        return parse_angle(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="eraser-sim",
        description="Scan the control phases of a delayed-choice quantum eraser and record "
                    "local intensities and selected coincidence rates.",
    )
    p.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--scan", choices=SCANS,
                   help="phi, psi, or joint (phi scanned, psi = fixed_phi + fixed_psi - phi)")
    p.add_argument("--scan-start", type=_angle_arg, dest="scan_start")
    p.add_argument("--scan-end", type=_angle_arg, dest="scan_end")
    p.add_argument("--points", type=_positive_int, dest="scan_points")
    p.add_argument("--fixed-phi", type=_angle_arg, dest="fixed_phi")
    p.add_argument("--fixed-psi", type=_angle_arg, dest="fixed_psi")
    p.add_argument("--delta", type=_finite, help="detuning FWHM (dimensionless)")
    p.add_argument("--tau", type=_finite, help="delay; delta_f * tau is a phase in radians")
    p.add_argument("--pairs", type=_positive_int, help="Monte-Carlo pairs per scan point")
    p.add_argument("--seed", type=int)
    p.add_argument("--engine", choices=ENGINES)
    p.add_argument("--gamma-ratio", type=_finite, dest="gamma_ratio",
                   help="per-photon linewidth / delta for the coherence report")
    p.add_argument("--out", dest="out_path")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--plot", dest="plot_path", help="write an SVG plot here")
    p.add_argument("--strict", action="store_true", default=None,
                   help="exit 1 if any summary test fails")
    return p


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}


def _coerce_file_values(raw: dict, parser: argparse.ArgumentParser) -> dict:
    out = {}
    for key, value in raw.items():
        if key not in _FIELDS:
            parser.error(f"unknown config field {key!r}")
        try:
            if key in ("scan_start", "scan_end", "fixed_phi", "fixed_psi"):
                value = parse_angle(value)
            elif key in ("scan_points", "pairs", "seed"):
                if isinstance(value, bool) or int(value) != value:
                    raise ValueError
                value = int(value)
            elif key in ("delta", "tau", "gamma_ratio"):
                value = float(value)
            elif key == "strict":
                if not isinstance(value, bool):
                    raise ValueError
        except (TypeError, ValueError):
            parser.error(f"config field {key!r} has invalid value {value!r}")
        out[key] = value
    return out


def parse_config(argv=None, config_file=None) -> RunConfig:
    """Merge defaults, an optional JSON config file, and command-line flags.

    Usage errors exit with status 2 via argparse.
    """
    parser = build_parser()
    ns = parser.parse_args(argv)
    values: dict = {}
    path = ns.config or config_file
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            parser.error(f"cannot read config file {path}: {exc}")
        if not isinstance(raw, dict):
            parser.error("config file must hold a JSON object")
        values.update(_coerce_file_values(raw, parser))
    for key, value in vars(ns).items():
        if key != "config" and value is not None:
            values[key] = value

    if not values.get("out_path"):
        parser.error("an output path is required (--out)")
    cfg = RunConfig(**values)
    _validate(cfg, parser)
    return cfg


def _validate(cfg: RunConfig, parser):
    if cfg.mode not in MODES:
        parser.error(f"mode must be one of {MODES}")
    if cfg.scan not in SCANS:
        parser.error(f"scan must be one of {SCANS}")
    if cfg.engine not in ENGINES:
        parser.error(f"engine must be one of {ENGINES}")
    if cfg.format is not None and cfg.format not in FORMATS:
        parser.error(f"format must be one of {FORMATS}")
    if cfg.scan_points < 2:
        parser.error("scan_points must be >= 2")
    if cfg.pairs < 1:
        parser.error("pairs must be >= 1")
    if not cfg.scan_end > cfg.scan_start:
        parser.error("scan_end must be greater than scan_start")
    if not 0 <= cfg.seed < 2**64:
        parser.error("seed must lie in [0, 2**64)")
    if cfg.delta < 0:
        parser.error("delta must be >= 0")
    if not 0 < cfg.gamma_ratio <= 1:
        parser.error("gamma_ratio must lie in (0, 1]")


# --- scan execution ----------------------------------------------------------

_RATE_COL = {"D1": "r01", "D2": "r02", "D3": "r03", "D4": "r04"}
_COUNT_COL = {"D1": "n01", "D2": "n02", "D3": "n03", "D4": "n04"}


def compute_rows(cfg: RunConfig) -> tuple[list[dict], dict]:
    """Per-point output rows plus side data (Monte-Carlo estimates) for the summary."""
    mode = Mode.parse(cfg.mode)
    live = mode.live_detectors
    rows, mc_rates = [], {det: [] for det in live}
    for k, x in enumerate(cfg.phases()):
        phi, psi = cfg.point_phases(x)
        setup = SetupConfig(cfg.delta, cfg.tau, phi, psi, mode)
        row = dict.fromkeys(COLUMNS)
        row.update(index=k, phase_rad=x, phi=phi, psi=psi)
        if cfg.uses_analytic:
            row["i10"] = analytic_value("I10", phi, psi)
            if mode is Mode.ERASER:
                row["i21"] = analytic_value("I21", phi, psi)
                row["i22"] = analytic_value("I22", phi, psi)
            for det in live:
                row[_RATE_COL[det]] = analytic_value("R0" + det[1], phi, psi)
        if cfg.uses_montecarlo:
            spec = EnsembleSpec(cfg.pairs, derive_seed(cfg.seed, k), cfg.delta)
            res = run_point(spec, setup)
            row["i10"] = res.means.i10
            if mode is Mode.ERASER:
                row["i21"] = res.means.i21
                row["i22"] = res.means.i22
            for det in live:
                row[_COUNT_COL[det]] = res.tally.count(det)
                estimate = res.tally.rate_estimate(det)
                mc_rates[det].append(estimate)
                if not cfg.uses_analytic:
                    row[_RATE_COL[det]] = estimate
            row["n_lost"] = res.tally.n_lost
            row["n_pairs"] = res.tally.n_pairs
        rows.append(row)
    return rows, mc_rates


def _fit_dict(fit: analysis.FringeFit) -> dict:
    return {"c": fit.c, "a": fit.a, "b": fit.b, "visibility": fit.visibility,
            "visibility_err": fit.visibility_err, "phase": fit.phase,
            "residual_rms": fit.residual_rms, "raw_visibility": fit.raw_visibility}


def _test(name, passed, value, threshold) -> dict:
    return {"name": name, "passed": bool(passed), "value": value, "threshold": threshold}


def _binomial_err(rate: float, weight: float, n: int) -> float:
    # Floor p(1-p) at 1/n so extremal points keep a positive error.
    p = rate / weight
    return weight * math.sqrt(max(p * (1.0 - p), 1.0 / n) / n)


def summarize(cfg: RunConfig, rows: list[dict], mc_rates: dict) -> dict:
    mode = Mode.parse(cfg.mode)
    x = np.array([r["phase_rad"] for r in rows])
    fits, mc_fits, tests = {}, {}, []
    can_fit = len(rows) >= 4

    def col(name):
        return np.array([r[name] for r in rows], dtype=float)

    if can_fit:
        for name in ("i10", "i21", "i22", "r01", "r02", "r03", "r04"):
            if rows[0][name] is not None:
                fits[name] = _fit_dict(analysis.fit_fringe(analysis.ScanSeries(x, col(name))))
        for det, est in mc_rates.items() if cfg.uses_montecarlo else ():
            mc_fits[_RATE_COL[det]] = _fit_dict(analysis.fit_fringe(analysis.ScanSeries(x, est)))

    weight = {"D1": 2.0, "D2": 2.0, "D3": 0.5, "D4": 0.5}
    if mode is Mode.ERASER:
        if cfg.uses_analytic:
            dev = float(np.max(np.abs(col("r01") + col("r02") - 1.0)))
            tests.append(_test("complementarity_analytic", dev <= ANALYTIC_TOL, dev,
                               ANALYTIC_TOL))
        if cfg.uses_montecarlo:
            dev = float(np.max(np.abs(np.add(mc_rates["D1"], mc_rates["D2"]) - 1.0)))
            tests.append(_test("complementarity_montecarlo", dev <= MC_COMPLEMENTARITY_TOL,
                               dev, MC_COMPLEMENTARITY_TOL))
            if can_fit:
                for name in ("i10", "i21", "i22"):
                    ok, vis = analysis.flatness_test(analysis.ScanSeries(x, col(name)),
                                                     MC_FLATNESS_VISIBILITY)
                    tests.append(_test(f"local_flatness_{name}", ok, vis,
                                       MC_FLATNESS_VISIBILITY))
        if cfg.scan == "joint":
            if cfg.uses_analytic:
                r01 = col("r01")
                dev = float(np.max(np.abs(r01 - r01[0])))
                tests.append(_test("joint_phase_constant_analytic", dev <= ANALYTIC_TOL, dev,
                                   ANALYTIC_TOL))
            if cfg.uses_montecarlo and can_fit:
                est = np.array(mc_rates["D1"])
                err = [_binomial_err(r, 2.0, cfg.pairs) for r in est]
                ok, z = analysis.amplitude_flatness_test(analysis.ScanSeries(x, est, err),
                                                         MC_SIGMA)
                tests.append(_test("joint_phase_constant_montecarlo", ok, z, MC_SIGMA))
    else:
        det = mode.live_detectors[0]
        if cfg.uses_analytic:
            vals = col(_RATE_COL[det])
            ok = bool(np.all(vals == 0.25))
            tests.append(_test(f"whichway_flat_analytic_{_RATE_COL[det]}", ok,
                               float(np.max(np.abs(vals - 0.25))), 0.0))
        if cfg.uses_montecarlo and can_fit:
            est = np.array(mc_rates[det])
            err = [_binomial_err(r, weight[det], cfg.pairs) for r in est]
            ok, z = analysis.amplitude_flatness_test(analysis.ScanSeries(x, est, err), MC_SIGMA)
            tests.append(_test(f"whichway_flat_montecarlo_{_RATE_COL[det]}", ok, z, MC_SIGMA))

    loss = None
    if cfg.uses_montecarlo:
        n_lost = sum(r["n_lost"] for r in rows)
        n_tot = sum(r["n_pairs"] for r in rows)
        frac = n_lost / n_tot
        bound = MC_SIGMA * math.sqrt(0.25 / n_tot)
        loss = {"n_lost": n_lost, "n_pairs": n_tot, "fraction": frac}
        tests.append(_test("selection_loss", abs(frac - 0.5) <= bound, frac - 0.5, bound))

    if cfg.delta > 0:
        rep = coherence_report(EnsembleSpec(1, 0, cfg.delta), cfg.gamma_ratio)
        coherence = {"tau_0": rep.tau_0, "tau_j_min": rep.tau_j_min,
                     "gamma_ratio": cfg.gamma_ratio}
    else:
        coherence = None

    return {
        "config": {k: v for k, v in dataclasses.asdict(cfg).items()
                   if k not in ("out_path", "plot_path")},
        "backend": kernels.backend_name(),
        "fits": fits,
        "montecarlo_rate_fits": mc_fits,
        "loss": loss,
        "coherence": coherence,
        "tests": tests,
        "all_passed": all(t["passed"] for t in tests),
    }


# --- output ------------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def render_csv(rows: list[dict], summary: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in COLUMNS])
    buf.write("# summary\n")
    for line in json.dumps(_jsonable(summary), indent=1, sort_keys=True).splitlines():
        buf.write("# " + line + "\n")
    return buf.getvalue()


def render_json(rows: list[dict], summary: dict) -> str:
    doc = {"columns": COLUMNS, "rows": _jsonable(rows), "summary": _jsonable(summary)}
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def render_plot(cfg: RunConfig, rows: list[dict], mc_rates: dict) -> str:
    x = [r["phase_rad"] for r in rows]
    series = {}
    for name in ("r01", "r02", "r03", "r04", "i10", "i21", "i22"):
        if rows[0][name] is not None:
            series[name] = [r[name] for r in rows]
    if cfg.uses_analytic:
        for det, est in mc_rates.items():
            series[f"{_RATE_COL[det]} (MC)"] = est
    title = f"{cfg.mode} mode, {cfg.scan} scan"
    return line_plot(x, series, title=title, xlabel=f"{cfg.scan} scan phase (rad)",
                     ylabel="intensity (I0) / coincidence rate (I0^2)")


def run_scan(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    rows, mc_rates = compute_rows(cfg)
    summary = summarize(cfg, rows, mc_rates)
    text = render_json(rows, summary) if cfg.output_format == "json" else render_csv(rows, summary)
    try:
        with open(cfg.out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        if cfg.plot_path:
            with open(cfg.plot_path, "w", encoding="utf-8") as fh:
                fh.write(render_plot(cfg, rows, mc_rates))
    except OSError as exc:
        print(f"eraser-sim: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO

    for t in summary["tests"]:
        status = "PASS" if t["passed"] else "FAIL"
        print(f"{status} {t['name']}: value={t['value']:.6g} threshold={t['threshold']:.6g}",
              file=stdout)
    print(f"wrote {len(rows)} rows to {cfg.out_path}", file=stdout)
    if cfg.strict and not summary["all_passed"]:
        return EXIT_STRICT
    return EXIT_OK


def main(argv=None) -> int:
    cfg = parse_config(argv)
    return run_scan(cfg)


if __name__ == "__main__":
    sys.exit(main())
