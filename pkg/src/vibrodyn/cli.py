"""Command-line front end: classify / drift / simulate / converge.

Runs are driven by an INI config (section [model] plus one section per
command); all outputs are CSV files with 17-significant-digit decimals, so
identical configs give byte-identical results.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys

import numpy as np

from . import models
from .averaging import drift_v2, drift_v3
from .classify import DL, SamplingDomain, classify
from .convergence import epsilon_sweep
from .fields import FieldEvaluationError
from .integrators import (
    DEFAULT_N_FAST,
    IntegrationError,
    SLOW_TIME_FOR_DL,
    integrate,
    integrate_full,
)
from .systems import build_system, compose_solution


class ConfigError(ValueError):
    pass


_KNOWN_KEYS = {
    "model": {"name", "a_mean", "b_mean", "a_cos", "a_sin", "b_cos", "b_sin",
              "alpha_mean", "beta_mean", "gamma_mean", "mu_mean",
              "alpha_cos", "alpha_sin", "beta_cos", "beta_sin",
              "gamma_cos", "gamma_sin", "mu_cos", "mu_sin", "case",
              "k", "v_poly", "a1", "a2"},
    "classify": {"box", "points", "s_values", "tol", "scan_csv"},
    "drift": {"points", "s", "which"},
    "simulate": {"omega", "x0", "window", "n_fast", "averaged_steps"},
    "converge": {"omegas", "order", "window", "x0", "n_fast"},
    "run": {"seed"},
}

_MODEL_KEYS = {
    "logistic": {"name", "a_mean", "b_mean", "a_cos", "a_sin", "b_cos", "b_sin"},
    "predator_prey": {"name", "case"} | {
        f"{p}_{t}" for p in ("alpha", "beta", "gamma", "mu")
        for t in ("mean", "cos", "sin")},
    "stokes": {"name", "k"},
    "standing_wave": {"name", "v_poly"},
    "two_harmonic": {"name", "a1", "a2"},
}


def _parse_harmonics(text: str) -> dict:
    """'1:1.0, 3:0.5' -> {1: 1.0, 3: 0.5}."""
    out = {}
    text = text.strip()
    if not text:
        return out
    for item in text.split(","):
        try:
            k, amp = item.split(":")
            out[int(k)] = float(amp)
        except ValueError as exc:
            raise ConfigError(f"bad harmonic term {item!r}: {exc}") from exc
    return out


def _parse_floats(text: str):
    return [float(v) for v in text.replace(";", ",").split(",") if v.strip()]


def _parse_matrix(text: str) -> np.ndarray:
    rows = [[float(v) for v in row.split()] for row in text.split(";")]
    return np.asarray(rows, float)


def _series_from(section, prefix: str):
    return models.series(
        mean=section.getfloat(f"{prefix}_mean", 0.0),
        cos=_parse_harmonics(section.get(f"{prefix}_cos", "")),
        sin=_parse_harmonics(section.get(f"{prefix}_sin", "")))


def load_config(path: str) -> configparser.ConfigParser:
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    cp = configparser.ConfigParser()
    try:
        cp.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    for sec in cp.sections():
        if sec not in _KNOWN_KEYS:
            raise ConfigError(f"unknown section [{sec}]")
        for key in cp[sec]:
            if key not in _KNOWN_KEYS[sec]:
                raise ConfigError(f"unknown key {key!r} in section [{sec}]")
    if "model" not in cp:
        raise ConfigError("missing [model] section")
    return cp


def build_model(cp: configparser.ConfigParser):
    sec = cp["model"]
    name = sec.get("name", "")
    if name not in _MODEL_KEYS:
        raise ConfigError(f"unknown model {name!r}; choose from "
                          f"{sorted(_MODEL_KEYS)}")
    for key in sec:
        if key not in _MODEL_KEYS[name]:
            raise ConfigError(f"key {key!r} does not apply to model {name!r}")
    if name == "logistic":
        params = models.LogisticParams(a=_series_from(sec, "a"),
                                       b=_series_from(sec, "b"))
        return models.logistic_field(params)
    if name == "predator_prey":
        params = models.PredatorPreyParams(
            alpha=_series_from(sec, "alpha"), beta=_series_from(sec, "beta"),
            gamma=_series_from(sec, "gamma"), mu=_series_from(sec, "mu"),
            case=sec.get("case", "dl1"))
        return models.predator_prey_field(params)
    if name == "stokes":
        return models.stokes_field(sec.getfloat("k", 1.0))
    if name == "standing_wave":
        coeffs = _parse_floats(sec.get("v_poly", "0,1"))

        def v(x):
            return np.array([sum(c * x[0] ** i for i, c in enumerate(coeffs))])

        def v_jac(x):
            return np.array([[sum(i * c * x[0] ** (i - 1)
                                  for i, c in enumerate(coeffs) if i > 0)]])

        return models.standing_wave_field(v, dim=1, v_jacobian=v_jac)
    params = (_parse_matrix(sec.get("a1", "")), _parse_matrix(sec.get("a2", "")))
    return models.linear_two_harmonic_field(*params)


def build_scan(cp, field) -> SamplingDomain:
    sec = cp["classify"] if "classify" in cp else {}
    box_text = sec.get("box", "") if sec else ""
    if box_text:
        box = []
        for axis in box_text.split(","):
            lo, hi = axis.split(":")
            box.append((float(lo), float(hi)))
        box = tuple(box)
    else:
        box = models.MODEL_DEFAULT_BOX.get(
            getattr(field, "name", ""), ((0.5, 2.0),) * field.dim)
    if len(box) != field.dim:
        raise ConfigError(f"box has {len(box)} axes, model has dim {field.dim}")
    points = int(sec.get("points", 5)) if sec else 5
    s_values = tuple(_parse_floats(sec.get("s_values", "0"))) if sec else (0.0,)
    return SamplingDomain(box=box, x_grid_points_per_axis=points,
                          s_samples=s_values or (0.0,))


def _classify(cp, field):
    tol = float(cp["classify"].get("tol", "1e-8")) if "classify" in cp else 1e-8
    return classify(field, build_scan(cp, field), tol=tol)


def cmd_classify(cp, out_dir: str, quiet: bool) -> int:
    field = build_model(cp)
    result = _classify(cp, field)
    if not quiet:
        print(result.describe())
    if "classify" in cp and cp["classify"].get("scan_csv"):
        result.table.write_csv(os.path.join(out_dir, cp["classify"]["scan_csv"]))
    return 2 if result.dl is DL.FULLY_DEGENERATE else 0


def cmd_drift(cp, out_dir: str, quiet: bool) -> int:
    field = build_model(cp)
    if "drift" not in cp:
        raise ConfigError("missing [drift] section")
    sec = cp["drift"]
    pts_text = sec.get("points", "")
    if not pts_text.strip():
        raise ConfigError("[drift] needs 'points'")
    points = [np.asarray([float(v) for v in chunk.split()], float)
              for chunk in pts_text.split(";") if chunk.strip()]
    s = sec.getfloat("s", 0.0)
    which = sec.get("which", "v2")
    if which not in ("v2", "v3", "both"):
        raise ConfigError("which must be v2, v3 or both")
    kinds = {"v2": [("v2", drift_v2)], "v3": [("v3", drift_v3)],
             "both": [("v2", drift_v2), ("v3", drift_v3)]}[which]
    for kind, fn in kinds:
        path = os.path.join(out_dir, f"drift_{kind}.csv")
        header = ",".join([f"x{j + 1}" for j in range(field.dim)] + ["s"]
                          + [f"{kind}_{j + 1}" for j in range(field.dim)]
                          + ["residual"])
        with open(path, "w") as fh:
            fh.write(header + "\n")
            for x in points:
                if x.size != field.dim:
                    raise ConfigError(f"point {x.tolist()} has wrong dimension")
                ev = fn(field, x, s)
                row = [*x, s, *ev.value, ev.residual]
                fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
        if not quiet:
            print(f"wrote {path}")
    return 0


def cmd_simulate(cp, out_dir: str, quiet: bool) -> int:
    field = build_model(cp)
    if "simulate" not in cp:
        raise ConfigError("missing [simulate] section")
    sec = cp["simulate"]
    omega = sec.getfloat("omega", 1000.0)
    if omega <= 0:
        raise ConfigError("omega must be positive")
    x0 = np.asarray(_parse_floats(sec.get("x0", "1.0")), float)
    window = _parse_floats(sec.get("window", "0:2").replace(":", ","))
    n_fast = int(sec.get("n_fast", DEFAULT_N_FAST))
    result = _classify(cp, field)
    if result.dl is DL.FULLY_DEGENERATE:
        print("field is fully degenerate; nothing to simulate", file=sys.stderr)
        return 2
    system = build_system(field, result)
    p = SLOW_TIME_FOR_DL[result.dl].exponent
    s_hi = window[1]
    h = s_hi / int(sec.get("averaged_steps", 2048))
    averaged = integrate(system.rhs_zeroth, x0, (0.0, s_hi), h,
                         system.time_variable)
    eps = 1.0 / omega
    composite = compose_solution(averaged, None, field, eps)
    full = integrate_full(field, omega, result.dl, x0,
                          (0.0, s_hi / eps ** p), n_fast=n_fast)
    full.write_csv(os.path.join(out_dir, "full.csv"))
    averaged.write_csv(os.path.join(out_dir, "averaged.csv"))
    if not quiet:
        end_err = np.max(np.abs(full.states[-1] - composite(full.times[-1])))
        print(f"classified {result.dl.value}; endpoint |full - composed| = "
              f"{end_err:.6e}")
        print(f"wrote {os.path.join(out_dir, 'full.csv')} and "
              f"{os.path.join(out_dir, 'averaged.csv')}")
    return 0


def cmd_converge(cp, out_dir: str, quiet: bool) -> int:
    field = build_model(cp)
    if "converge" not in cp:
        raise ConfigError("missing [converge] section")
    sec = cp["converge"]
    omegas = _parse_floats(sec.get("omegas", "100,316.23,1000"))
    order = sec.get("order", "zeroth")
    window = _parse_floats(sec.get("window", "0:2").replace(":", ","))
    x0 = np.asarray(_parse_floats(sec.get("x0", "1.0")), float)
    n_fast = int(sec.get("n_fast", DEFAULT_N_FAST))
    result = _classify(cp, field)
    if result.dl is DL.FULLY_DEGENERATE:
        print("field is fully degenerate; no averaged model", file=sys.stderr)
        return 2
    report = epsilon_sweep(field, result.dl, order, omegas,
                           (window[0], window[1]), x0, n_fast=n_fast)
    path = os.path.join(out_dir, "converge.csv")
    report.write_csv(path)
    if not quiet:
        print(f"slope = {report.slope:.4f} +/- {report.slope_stderr:.4f}")
        print(f"wrote {path}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="vibrodyn",
        description="Averaging toolkit for ODEs with fast oscillating "
                    "velocity fields",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="output CSV columns (17-significant-digit decimals):\n"
               "  classify  scan table: x1..xd,s,mean_norm,v2_norm,v3_norm\n"
               "  drift     drift_v2.csv/drift_v3.csv: x1..xd,s,V-components,"
               "residual\n"
               "  simulate  full.csv/averaged.csv: time,x1..xd\n"
               "  converge  converge.csv: omega,epsilon,error; final summary "
               "row slope,value,stderr\n"
               "exit codes: 0 ok, 1 config error, 2 fully degenerate field, "
               "3 numerical abort")
    parser.add_argument("command",
                        choices=["classify", "drift", "simulate", "converge"])
    parser.add_argument("--config", required=True, help="INI config path")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--quiet", action="store_true")
    args = parser.parse_args(argv)

    try:
        cp = load_config(args.config)
        os.makedirs(args.out, exist_ok=True)
        handler = {"classify": cmd_classify, "drift": cmd_drift,
                   "simulate": cmd_simulate, "converge": cmd_converge}[args.command]
        return handler(cp, args.out, args.quiet)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (IntegrationError, FieldEvaluationError) as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
