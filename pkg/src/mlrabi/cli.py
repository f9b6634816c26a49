"""Command-line front end.

Usage: ``python3 -m mlrabi <command> [flags]``.  A JSON config file given with
``--config`` supplies defaults; flags on the command line override it.  The
file holds the same keys as the long flags with dashes replaced by
underscores, for example::

    {"command": "spectrum", "n": 2, "m": 2, "coupling": "diag:1.0,0.7",
     "cutoff": 64, "format": "json", "out": "spec.json"}

Exit codes: 0 success, 2 configuration error, 3 convergence failure,
4 numerical-precision failure.
"""

from __future__ import annotations

import argparse
import ast
import json
import logging
import os
import re
import sys
import tempfile
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from . import experiments as ex
from .errors import ConfigError, ConvergenceError, MLRabiError, PrecisionError
from .model import DoubletBasis, ModelSpec, atomic_doublet_matrix
from .radiation import doublet_atomic, to_radiation_basis
from .records import (
    SPECTRUM_COLUMNS,
    ExperimentRecord,
    records_to_csv,
    records_to_json,
)
from .rmt import (
    Ensemble,
    SvDistribution,
    mass_lambda1,
    min_kappa1,
    moment_lambda1,
    sample_ginibre,
    variance_lambda1,
)
from .spectral import DEFAULT_MAX_CUTOFF, converge_spectrum, svd

log = logging.getLogger("mlrabi")

COMMANDS = ("spectrum", "svd", "radiation", "rmt-stats", "fig1", "fig3", "fig4", "fig5", "appendix-sv")
STOCHASTIC = frozenset({"fig4", "fig5", "appendix-sv"})
MODEL_COMMANDS = frozenset({"spectrum", "svd", "radiation"})

EXIT_OK, EXIT_CONFIG, EXIT_CONVERGENCE, EXIT_PRECISION = 0, 2, 3, 4


# ---------------------------------------------------------------- coupling grammar


def _complex_list(text: str) -> list[complex]:
    out = []
    for tok in text.split(","):
        tok = tok.strip().replace("i", "j")
        try:
            out.append(complex(tok))
        except ValueError as exc:
            raise ConfigError(f"bad number {tok!r} in coupling literal") from exc
    return out


def parse_coupling(text: str, n: Optional[int] = None, m: Optional[int] = None) -> np.ndarray:
    """Parse a coupling literal into an n x m complex matrix.

    Grammar: ``diag:a,b,...`` | ``uniform:v`` | ``rank1:v1,v2;w1,w2`` |
    ``full:[[re+imi, ...], ...]`` | ``ginibre:seed``.  Complex numbers use
    ``i`` (or ``j``) as the imaginary unit.
    """
    kind, sep, body = text.partition(":")
    if not sep:
        raise ConfigError(f"coupling {text!r} lacks a 'kind:' prefix")
    kind = kind.strip().lower()
    if kind == "diag":
        d = _complex_list(body)
        n = len(d) if n is None else n
        m = len(d) if m is None else m
        if len(d) != min(n, m):
            raise ConfigError(f"diag needs min(n, m) = {min(n, m)} entries, got {len(d)}")
        lam = np.zeros((n, m), dtype=complex)
        lam[np.arange(len(d)), np.arange(len(d))] = d
    elif kind == "uniform":
        if n is None or m is None:
            raise ConfigError("uniform coupling needs --n and --m")
        (v,) = _complex_list(body)
        lam = np.full((n, m), v, dtype=complex)
    elif kind == "rank1":
        parts = body.split(";")
        if len(parts) != 2:
            raise ConfigError("rank1 coupling is 'rank1:v1,v2,...;w1,w2,...'")
        v, w = (np.array(_complex_list(p)) for p in parts)
        lam = np.outer(v, w)
    elif kind == "full":
        try:
            rows = ast.literal_eval(re.sub(r"(?<=[0-9.])i\b", "j", body))
            lam = np.array(rows, dtype=complex)
        except (ValueError, SyntaxError, TypeError) as exc:
            raise ConfigError(f"invalid matrix literal {body!r}: {exc}") from exc
        if lam.ndim != 2:
            raise ConfigError("full coupling must be a nested list of rows")
    elif kind == "ginibre":
        if n is None or m is None:
            raise ConfigError("ginibre coupling needs --n and --m")
        try:
            seed = int(body)
        except ValueError as exc:
            raise ConfigError(f"ginibre seed must be an integer, got {body!r}") from exc
        lam = sample_ginibre(n, m, Ensemble.COMPLEX, seed)
    else:
        raise ConfigError(f"unknown coupling kind {kind!r}")
    if (n is not None and lam.shape[0] != n) or (m is not None and lam.shape[1] != m):
        raise ConfigError(f"coupling has shape {lam.shape}, expected ({n}, {m})")
    if not np.all(np.isfinite(lam)):
        raise ConfigError("coupling has non-finite entries")
    return lam


def _float_list(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from exc


# ---------------------------------------------------------------- config


@dataclass
class RunConfig:
    command: str
    model: Optional[ModelSpec] = None
    output_path: Optional[str] = None
    output_format: str = "csv"
    seed: Optional[int] = None
    threads: int = 1
    tolerances: dict[str, float] = field(default_factory=dict)
    options: dict[str, Any] = field(default_factory=dict)

    def describe(self) -> dict[str, Any]:
        """JSON-safe summary stored in the output metadata (output path left out)."""
        return {
            "command": self.command,
            "model": None if self.model is None else _model_dict(self.model),
            "output_format": self.output_format,
            "seed": self.seed,
            "threads": self.threads,
            "tolerances": dict(self.tolerances),
            "options": dict(self.options),
        }


def _model_dict(spec: ModelSpec) -> dict[str, Any]:
    lam = spec.coupling
    return {
        "n": spec.n_excited, "m": spec.n_ground, "cutoff": spec.fock_cutoff,
        "omega": spec.omega, "epsilon": spec.epsilon,
        "coupling_re": lam.real.tolist(), "coupling_im": lam.imag.tolist(),
        "delta_e": spec.delta_e.tolist(), "delta_g": spec.delta_g.tolist(),
    }


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    # every default is SUPPRESS so config-file values survive unless a flag is given
    common = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON file with default option values")
    common.add_argument("--out", help="output file (stdout when omitted)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--seed", type=int)
    common.add_argument("--threads", type=int)
    common.add_argument("--tol", type=float, help="spectral convergence tolerance (units of omega)")
    common.add_argument("--max-cutoff", type=int)
    common.add_argument("--levels", type=int, help="number of tracked levels")
    common.add_argument("-v", "--verbose", action="store_true")

    model = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    model.add_argument("--n", type=int, help="number of excited levels")
    model.add_argument("--m", type=int, help="number of ground levels")
    model.add_argument("--coupling", help="diag:.. | uniform:v | rank1:v;w | full:[[..]] | ginibre:seed")
    model.add_argument("--epsilon", type=float)
    model.add_argument("--delta-e", help="comma-separated excited detuning coefficients")
    model.add_argument("--delta-g", help="comma-separated ground detuning coefficients")
    model.add_argument("--omega", type=float)
    model.add_argument("--cutoff", type=int, help="(starting) Fock cutoff")

    p = _Parser(prog="mlrabi", description="Multilevel Rabi model spectra and random-coupling statistics")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("spectrum", argument_default=argparse.SUPPRESS, parents=[common, model], help="converged lowest levels of one model")
    s.add_argument("--scales", help="comma-separated coupling scale factors to sweep")
    sub.add_parser("svd", argument_default=argparse.SUPPRESS, parents=[common, model], help="phase-fixed SVD of the coupling")
    sub.add_parser("radiation", argument_default=argparse.SUPPRESS, parents=[common, model], help="effective Rabi couplings and dark states")

    r = sub.add_parser("rmt-stats", argument_default=argparse.SUPPRESS, parents=[common], help="largest-singular-value law for one size")
    r.add_argument("--n", type=int)
    r.add_argument("--m", type=int)
    r.add_argument("--ensemble", choices=("complex", "real"))

    f1 = sub.add_parser("fig1", argument_default=argparse.SUPPRESS, parents=[common], help="diagonal-coupling four-level spectra")
    f1.add_argument("--lambda-max", type=float)
    f1.add_argument("--points", type=int)
    f1.add_argument("--ratio", type=float)

    f3 = sub.add_parser("fig3", argument_default=argparse.SUPPRESS, parents=[common], help="detuning-induced anticrossing")
    f3.add_argument("--epsilon", type=float)
    f3.add_argument("--mixing", type=float, help="off-diagonal coupling fraction b")
    f3.add_argument("--cutoff", type=int)

    f4 = sub.add_parser("fig4", argument_default=argparse.SUPPRESS, parents=[common], help="random-coupling spectral heatmap")
    f4.add_argument("--systems", type=int)
    f4.add_argument("--n", type=int)
    f4.add_argument("--epsilon", type=float)
    f4.add_argument("--bins", help="lambda_bins,energy_bins")
    f4.add_argument("--lambda-max", type=float)
    f4.add_argument("--energy-max", type=float)
    f4.add_argument("--cutoff", type=int)

    f5 = sub.add_parser("fig5", argument_default=argparse.SUPPRESS, parents=[common], help="ground-doublet spread of random systems")
    f5.add_argument("--systems", type=int)
    f5.add_argument("--n", type=int)
    f5.add_argument("--epsilon", type=float)
    f5.add_argument("--lambda1", type=float)

    a = sub.add_parser("appendix-sv", argument_default=argparse.SUPPRESS, parents=[common], help="analytic vs Monte Carlo lambda_1 statistics")
    a.add_argument("--n-grid", help="comma-separated sizes (n = m)")
    a.add_argument("--trials-mean", type=int)
    a.add_argument("--trials-hist", type=int)
    a.add_argument("--ensemble", choices=("complex", "real"))
    return p


_TOLERANCE_KEYS = ("tol", "max_cutoff", "levels")
_GENERAL_KEYS = {"config", "out", "format", "seed", "threads", "verbose", "command"}
_MODEL_KEYS = {"n", "m", "coupling", "epsilon", "delta_e", "delta_g", "omega", "cutoff"}


def parse_config(argv: Sequence[str], file: Optional[str] = None) -> RunConfig:
    """Build a validated RunConfig from flags, on top of an optional JSON document.

    ``file`` is the text of a config document; when omitted, ``--config`` in
    ``argv`` names a file to read.
    """
    ns = vars(build_parser().parse_args(list(argv)))
    if file is None and "config" in ns:
        try:
            with open(ns["config"], encoding="utf-8") as fh:
                file = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
    values: dict[str, Any] = {}
    if file is not None:
        try:
            doc = json.loads(file)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("config file must hold a JSON object")
        values.update({k.replace("-", "_"): v for k, v in doc.items()})
        if "command" in values and values["command"] != ns["command"]:
            raise ConfigError(f"config file is for {values['command']!r}, not {ns['command']!r}")
    values.update(ns)
    command = values.pop("command")

    subparser_keys = _command_option_keys(command)
    unknown = set(values) - subparser_keys
    if unknown:
        raise ConfigError(f"unknown option(s) for {command}: {', '.join(sorted(unknown))}")

    seed = values.get("seed")
    if command in STOCHASTIC and seed is None:
        raise ConfigError(f"{command} is stochastic; pass --seed")
    fmt = values.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {fmt!r}")
    threads = int(values.get("threads", 1))
    if threads < 1:
        raise ConfigError("--threads must be >= 1")

    tolerances = {k: values[k] for k in _TOLERANCE_KEYS if k in values}
    if tolerances.get("tol", 1.0) <= 0:
        raise ConfigError("--tol must be positive")
    model = _model_from(values) if command in MODEL_COMMANDS else None
    options = {k: values[k] for k in subparser_keys - _GENERAL_KEYS - set(_TOLERANCE_KEYS) if k in values}
    if command in MODEL_COMMANDS:
        options = {k: v for k, v in options.items() if k not in _MODEL_KEYS}
        if "scales" in values:
            options["scales"] = _float_list(values["scales"])
    logging.basicConfig(level=logging.INFO if values.get("verbose") else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return RunConfig(command, model, values.get("out"), fmt, seed, threads, tolerances, options)


def _command_option_keys(command: str) -> set[str]:
    sub = build_parser()._subparsers._group_actions[0].choices[command]
    return {a.dest for a in sub._actions if a.dest not in ("help",)}


def _model_from(values: dict[str, Any]) -> ModelSpec:
    if "coupling" not in values:
        raise ConfigError("model commands need --coupling")
    n, m = values.get("n"), values.get("m")
    lam = parse_coupling(str(values["coupling"]), n, m)
    n, m = lam.shape
    try:
        return ModelSpec(
            n, m, lam,
            fock_cutoff=int(values.get("cutoff", 32)),
            omega=float(values.get("omega", 1.0)),
            epsilon=float(values.get("epsilon", 0.0)),
            delta_e=_float_list(values["delta_e"]) if "delta_e" in values else None,
            delta_g=_float_list(values["delta_g"]) if "delta_g" in values else None,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


# ---------------------------------------------------------------- commands


def _spectrum(cfg: RunConfig) -> list[ExperimentRecord]:
    spec = cfg.model
    tol = cfg.tolerances.get("tol", 1e-8)
    max_cutoff = cfg.tolerances.get("max_cutoff", DEFAULT_MAX_CUTOFF)
    levels = min(int(cfg.tolerances.get("levels", ex.DEFAULT_LEVELS)), spec.dim)
    records = []
    for scale in cfg.options.get("scales", [1.0]):
        s = spec.with_coupling(scale * spec.coupling)
        if s.epsilon == 0.0 and s.n_excited == s.n_ground:
            dop = atomic_doublet_matrix(s, DoubletBasis.BARE)
        else:
            dop = doublet_atomic(to_radiation_basis(s), s)
        res = converge_spectrum(s, levels, tol=tol, max_cutoff=max(max_cutoff, s.fock_cutoff),
                                doublet_atomic=dop)
        if not res.converged:
            raise ConvergenceError(
                f"levels not converged to {tol:g} at cutoff {res.cutoff_used} (scale {scale:g})"
            )
        for i, e in enumerate(res.eigenvalues):
            records.append(ExperimentRecord(
                "spectrum", float(scale), i, float(e / s.omega), None, int(res.parities[i]),
                float(res.doublet_expectations[i]), res.cutoff_used, res.converged,
            ))
    return records


def _svd(cfg: RunConfig) -> list[ExperimentRecord]:
    res = svd(cfg.model.coupling)
    err = float(np.max(np.abs(res.reconstruct() - cfg.model.coupling)))
    return [
        ExperimentRecord("svd", 1.0, k, extra={"singular_value": float(s), "reconstruction_error": err})
        for k, s in enumerate(res.singular_values)
    ]


def _radiation(cfg: RunConfig) -> list[ExperimentRecord]:
    dec = to_radiation_basis(cfg.model)
    out = [
        ExperimentRecord("radiation", 1.0, k, extra={"effective_coupling": float(s), "dark": False})
        for k, s in enumerate(dec.effective_couplings)
    ]
    r = dec.effective_couplings.size
    for k in range(dec.dark_excited_count):
        out.append(ExperimentRecord("radiation", 1.0, r + k,
                                    extra={"effective_coupling": 0.0, "dark": True, "manifold": "excited"}))
    for k in range(dec.dark_ground_count):
        out.append(ExperimentRecord("radiation", 1.0, r + k,
                                    extra={"effective_coupling": 0.0, "dark": True, "manifold": "ground"}))
    return out


def _rmt_stats(cfg: RunConfig) -> list[ExperimentRecord]:
    n = int(cfg.options.get("n", 5))
    m = int(cfg.options.get("m", n))
    ens = Ensemble(cfg.options.get("ensemble", "complex"))
    dist = SvDistribution.for_size(n, m, ens)
    return [ExperimentRecord("rmt-stats", float(n), 0, extra={
        "ensemble": ens.value, "m": m, "mu": dist.mu, "rho": dist.rho,
        "lower_support": dist.lower_support, "min_kappa1": min_kappa1(dist),
        "mean": moment_lambda1(dist, 1), "variance": variance_lambda1(dist),
        "pdf_mass": mass_lambda1(dist),
    })]


def _fig1(cfg: RunConfig) -> list[ExperimentRecord]:
    o = cfg.options
    grid = np.linspace(0.0, float(o.get("lambda_max", 2.0)), int(o.get("points", 81)))
    return ex.run_fig1_diagonal_spectra(
        grid, ratio=float(o.get("ratio", 0.7)),
        n_levels=int(cfg.tolerances.get("levels", ex.DEFAULT_LEVELS)),
        tol=cfg.tolerances.get("tol", 1e-8),
        max_cutoff=int(cfg.tolerances.get("max_cutoff", DEFAULT_MAX_CUTOFF)),
        workers=cfg.threads,
    )


def _fig3(cfg: RunConfig) -> list[ExperimentRecord]:
    o = cfg.options
    return ex.run_fig3_anticrossing(
        epsilon=float(o.get("epsilon", 0.015)), b=float(o.get("mixing", 0.2)),
        fock_cutoff=int(o.get("cutoff", 48)),
        n_levels=int(cfg.tolerances.get("levels", ex.DEFAULT_LEVELS)), workers=cfg.threads,
    )


def _fig4(cfg: RunConfig) -> list[ExperimentRecord]:
    o = cfg.options
    bins = tuple(int(v) for v in _float_list(o.get("bins", "1000,1250")))
    if len(bins) != 2:
        raise ConfigError("--bins takes two integers: lambda_bins,energy_bins")
    return ex.run_fig4_heatmap(
        n=int(o.get("n", 5)), systems=int(o.get("systems", 600)), bins=bins,
        lambda_range=(0.0, float(o.get("lambda_max", 3.0))),
        energy_range=(0.0, float(o.get("energy_max", 6.0))),
        epsilon=float(o.get("epsilon", 0.05)), seed=cfg.seed,
        fock_cutoff=int(o.get("cutoff", 48)), workers=cfg.threads,
    )


def _fig5(cfg: RunConfig) -> list[ExperimentRecord]:
    o = cfg.options
    return ex.run_fig5_groundstate_histogram(
        lambda1=float(o.get("lambda1", 2.5)), systems=int(o.get("systems", 600)),
        n=int(o.get("n", 5)), epsilon=float(o.get("epsilon", 0.05)), seed=cfg.seed,
        workers=cfg.threads,
    )


def _appendix(cfg: RunConfig) -> list[ExperimentRecord]:
    o = cfg.options
    grid = [int(v) for v in _float_list(o.get("n_grid", "2,3,5,10,20,50"))]
    return ex.run_appendix_sv_stats(
        grid, trials_mean=int(o.get("trials_mean", 1000)), trials_hist=int(o.get("trials_hist", 600)),
        ensemble=o.get("ensemble", "complex"), seed=cfg.seed, workers=cfg.threads,
    )


_DISPATCH = {
    "spectrum": _spectrum, "svd": _svd, "radiation": _radiation, "rmt-stats": _rmt_stats,
    "fig1": _fig1, "fig3": _fig3, "fig4": _fig4, "fig5": _fig5, "appendix-sv": _appendix,
}


def render(cfg: RunConfig, records: Sequence[ExperimentRecord]) -> str:
    if cfg.output_format == "json":
        return records_to_json(records, meta=cfg.describe())
    columns = SPECTRUM_COLUMNS if cfg.command == "spectrum" else None
    return records_to_csv(records, columns)


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary sibling file and rename, so readers never see partial output."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".mlrabi-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class _WarningCounter(logging.Handler):
    def __init__(self):
        super().__init__(logging.WARNING)
        self.count = 0

    def emit(self, record):
        self.count += 1


def execute(cfg: RunConfig) -> int:
    counter = _WarningCounter()
    root = logging.getLogger("mlrabi")
    root.addHandler(counter)
    try:
        records = _DISPATCH[cfg.command](cfg)
        text = render(cfg, records)
        if cfg.output_path:
            write_atomic(cfg.output_path, text)
        else:
            sys.stdout.write(text)
    except ConfigError as exc:
        print(f"mlrabi: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"mlrabi: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except PrecisionError as exc:
        print(f"mlrabi: precision failure: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (MLRabiError, ValueError) as exc:
        print(f"mlrabi: invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    finally:
        root.removeHandler(counter)
    target = cfg.output_path or "stdout"
    print(f"mlrabi {cfg.command}: {len(records)} records -> {target}, "
          f"{counter.count} convergence warnings", file=sys.stderr)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except ConfigError as exc:
        print(f"mlrabi: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return execute(cfg)


if __name__ == "__main__":
    sys.exit(main())
