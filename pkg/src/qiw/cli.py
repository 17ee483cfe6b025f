"""Command-line front end: build witnesses, evaluate violations, run attacks.

Subcommands
    build   scenario JSON -> witness JSON + beta CSV
    eval    scenario + witness -> quantum value vs predicted value
    attack  witness -> sampled/optimized separable minimum, JSON report

Exit codes: 0 success, 2 file/schema parse error, 3 state not detected by
the map (no negative eigenvalue), 4 dimension mismatch, 5 a classical
strategy beat the bound (which would falsify the witness construction).

Scenario schema (complex numbers are [re, im] pairs)::

    {
      "state":      {"kind": "werner", "d": 2, "v": 0.5}
                  | {"kind": "singlet"}
                  | {"kind": "matrix", "dA": 2, "dB": 2, "entries": [[[re, im], ...], ...]},
      "ensembleA":  {"kind": "tetrahedron"}
                  | {"kind": "sic", "d": 3, "seed": 0}
                  | {"kind": "explicit", "states": [[[re, im], ...], ...]},
      "ensembleB":  same as ensembleA,
      "measurement": {"kind": "canonical"}
    }

All reports echo the tolerance and seed in effect. The QIW_SEED environment
variable overrides the default seed (42); an explicit --seed wins over both.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from .adversary import run_attack, witness_id
from .linalg import DimensionMismatchError
from .scenario import QIScenario, canonical_scenario, correlations
from .states import DensityMatrix, InputEnsemble, PureState, sic_ensemble, singlet, tetrahedron_ensemble, werner_state
from .witness import (
    NoNegativeEigenvalueError,
    PositiveMapSpec,
    WitnessCoefficients,
    build_witness,
    choi_map,
    evaluate_inequality,
    predicted_quantum_value,
    transposition_map,
)

DEFAULT_SEED = 42
DEFAULT_TOL = 1e-9
CSV_FLOAT = "%.17g"

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NOT_DETECTED = 3
EXIT_DIMENSIONS = 4
EXIT_BOUND_VIOLATED = 5


class SchemaError(ValueError):
    """Scenario/witness file fails to parse; message carries the field path."""


# ---------------------------------------------------------------------------
# JSON schema helpers

def _field(obj: dict, path: str, key: str, kind, required: bool = True, default=None):
    if key not in obj:
        if required:
            raise SchemaError(f"{path}.{key}: missing required field")
        return default
    value = obj[key]
    if kind in (int, float) and isinstance(value, bool):
        raise SchemaError(f"{path}.{key}: expected a number, got a boolean")
    if kind is float and isinstance(value, int):
        value = float(value)
    if not isinstance(value, kind):
        raise SchemaError(f"{path}.{key}: expected {getattr(kind, '__name__', kind)}, got {type(value).__name__}")
    return value


def pair_to_complex(value, path: str) -> complex:
    if not (isinstance(value, list) and len(value) == 2 and all(isinstance(x, (int, float)) for x in value)):
        raise SchemaError(f"{path}: expected a [re, im] pair")
    return complex(value[0], value[1])


def complex_to_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def vector_to_json(v: np.ndarray) -> list:
    return [complex_to_pair(z) for z in np.asarray(v, dtype=complex)]


def vector_from_json(value, path: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise SchemaError(f"{path}: expected a non-empty list of [re, im] pairs")
    return np.array([pair_to_complex(z, f"{path}[{k}]") for k, z in enumerate(value)])


def matrix_to_json(m: np.ndarray) -> list:
    return [vector_to_json(row) for row in np.asarray(m, dtype=complex)]


def matrix_from_json(value, path: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise SchemaError(f"{path}: expected a non-empty list of rows")
    return np.array([vector_from_json(row, f"{path}[{k}]") for k, row in enumerate(value)])


def ensemble_to_json(ensemble: InputEnsemble) -> dict:
    return {"dim": ensemble.dim, "states": [vector_to_json(s.amplitudes) for s in ensemble.states]}


def ensemble_from_json(value, path: str) -> InputEnsemble:
    if not isinstance(value, dict):
        raise SchemaError(f"{path}: expected an object")
    states = value.get("states")
    if not isinstance(states, list) or not states:
        raise SchemaError(f"{path}.states: expected a non-empty list")
    pure = []
    for k, amps in enumerate(states):
        try:
            pure.append(PureState(vector_from_json(amps, f"{path}.states[{k}]")))
        except ValueError as exc:
            raise SchemaError(f"{path}.states[{k}]: {exc}") from exc
    return InputEnsemble(tuple(pure))


# ---------------------------------------------------------------------------
# Scenario loading

def _load_state(obj: dict, path: str) -> DensityMatrix:
    kind = _field(obj, path, "kind", str)
    if kind == "singlet":
        psi = singlet()
        return DensityMatrix(psi.projector(), 2, 2)
    if kind == "werner":
        d = _field(obj, path, "d", int)
        v = _field(obj, path, "v", float)
        try:
            return werner_state(d, v)
        except ValueError as exc:
            raise SchemaError(f"{path}: {exc}") from exc
    if kind == "matrix":
        dim_a = _field(obj, path, "dA", int)
        dim_b = _field(obj, path, "dB", int)
        entries = matrix_from_json(_field(obj, path, "entries", list), f"{path}.entries")
        try:
            return DensityMatrix(entries, dim_a, dim_b)
        except ValueError as exc:
            # a matrix inconsistent with its own declared dims is a file
            # problem, unlike cross-file dimension mismatches
            raise SchemaError(f"{path}.entries: {exc}") from exc
    raise SchemaError(f"{path}.kind: unknown state kind {kind!r}")


def _load_ensemble(obj: dict, path: str, default_seed: int) -> InputEnsemble:
    kind = _field(obj, path, "kind", str)
    if kind == "tetrahedron":
        return tetrahedron_ensemble()
    if kind == "sic":
        d = _field(obj, path, "d", int)
        seed = _field(obj, path, "seed", int, required=False, default=default_seed)
        try:
            return sic_ensemble(d, seed)
        except ValueError as exc:
            raise SchemaError(f"{path}: {exc}") from exc
    if kind == "explicit":
        return ensemble_from_json(obj, path)
    raise SchemaError(f"{path}.kind: unknown ensemble kind {kind!r}")


def load_scenario(path: str | Path, default_seed: int = DEFAULT_SEED) -> QIScenario:
    """Parse a scenario file into a canonical QIScenario."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("scenario: top-level value must be an object")
    rho = _load_state(_field(doc, "scenario", "state", dict), "state")
    ensemble_a = _load_ensemble(_field(doc, "scenario", "ensembleA", dict), "ensembleA", default_seed)
    ensemble_b = _load_ensemble(_field(doc, "scenario", "ensembleB", dict), "ensembleB", default_seed)
    measurement = _field(doc, "scenario", "measurement", dict)
    meas_kind = _field(measurement, "measurement", "kind", str)
    if meas_kind != "canonical":
        raise SchemaError(f"measurement.kind: only 'canonical' is supported, got {meas_kind!r}")
    return canonical_scenario(rho, ensemble_a, ensemble_b)


# ---------------------------------------------------------------------------
# Witness files

def _map_to_json(map_spec: PositiveMapSpec) -> dict:
    if map_spec.kind == "transposition":
        return {"kind": "transposition", "d": map_spec.dim_in}
    return {
        "kind": "choi",
        "dimIn": map_spec.dim_in,
        "dimOut": map_spec.dim_out,
        "choi": matrix_to_json(map_spec.choi),
    }


def _map_from_json(obj: dict, path: str) -> PositiveMapSpec:
    kind = _field(obj, path, "kind", str)
    if kind == "transposition":
        return transposition_map(_field(obj, path, "d", int))
    if kind == "choi":
        dim_in = _field(obj, path, "dimIn", int)
        dim_out = _field(obj, path, "dimOut", int)
        choi = matrix_from_json(_field(obj, path, "choi", list), f"{path}.choi")
        return choi_map(choi, dim_in, dim_out)
    raise SchemaError(f"{path}.kind: unknown map kind {kind!r}")


def witness_to_json(witness: WitnessCoefficients, tol: float, seed: int) -> dict:
    return {
        "format": "qiw-witness-v1",
        "witness_id": witness_id(witness),
        "dims": {"dA": witness.dim_a, "dB": witness.dim_b},
        "lambda": witness.lambda_,
        "map": _map_to_json(witness.map),
        "xi": vector_to_json(witness.xi.amplitudes),
        "beta": [[float(x) for x in row] for row in witness.beta],
        "ensembleA": ensemble_to_json(witness.ensemble_a),
        "ensembleB": ensemble_to_json(witness.ensemble_b),
        "tol": tol,
        "seed": seed,
    }


def load_witness(path: str | Path) -> WitnessCoefficients:
    """Parse a witness file.

    The decomposition is trusted as stored, not re-derived, so externally
    edited coefficients are evaluated exactly as given.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("witness: top-level value must be an object")
    beta_rows = _field(doc, "witness", "beta", list)
    beta = np.array(beta_rows, dtype=float)
    if beta.ndim != 2:
        raise SchemaError("witness.beta: expected a 2-D array of numbers")
    xi = PureState(vector_from_json(_field(doc, "witness", "xi", list), "witness.xi"))
    map_spec = _map_from_json(_field(doc, "witness", "map", dict), "witness.map")
    ensemble_a = ensemble_from_json(_field(doc, "witness", "ensembleA", dict), "witness.ensembleA")
    ensemble_b = ensemble_from_json(_field(doc, "witness", "ensembleB", dict), "witness.ensembleB")
    lam = doc.get("lambda")
    if lam is not None:
        lam = _field(doc, "witness", "lambda", float)
    return WitnessCoefficients(
        beta=beta, xi=xi, map=map_spec, ensemble_a=ensemble_a, ensemble_b=ensemble_b, lambda_=lam
    )


def write_beta_csv(witness: WitnessCoefficients, path: str | Path):
    """beta as CSV: rows are s labels, columns t labels, 17 significant digits."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["s/t"] + [str(t) for t in witness.ensemble_b.labels])
        for s, row in zip(witness.ensemble_a.labels, witness.beta):
            writer.writerow([str(s)] + [CSV_FLOAT % x for x in row])


def write_table_csv(table, path: str | Path):
    """Correlation table as long-format CSV with 1-based s, t labels."""
    p = table.probabilities
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["a", "b", "s", "t", "p"])
        for a in range(2):
            for b in range(2):
                for s in range(table.n_s):
                    for t in range(table.n_t):
                        writer.writerow([a, b, s + 1, t + 1, CSV_FLOAT % p[a, b, s, t]])


def table_to_json(table) -> dict:
    return {
        "nS": table.n_s,
        "nT": table.n_t,
        "probabilities": [[[list(map(float, row)) for row in block] for block in plane] for plane in table.probabilities.tolist()],
    }


def _dump_json(doc: dict, out: str | Path | None) -> str:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out is not None:
        Path(out).write_text(text, encoding="utf-8")
    return text


# ---------------------------------------------------------------------------
# Commands

def _witness_paths(out: str) -> tuple[Path, Path]:
    p = Path(out)
    if p.suffix == ".json":
        return p, p.with_suffix(".csv")
    return Path(str(p) + ".json"), Path(str(p) + ".csv")


def cmd_build(args) -> int:
    scenario = load_scenario(args.scenario, default_seed=args.seed)
    witness = build_witness(scenario.rho, scenario.ensemble_a, scenario.ensemble_b)
    json_path, csv_path = _witness_paths(args.out)
    _dump_json(witness_to_json(witness, args.tol, args.seed), json_path)
    write_beta_csv(witness, csv_path)
    print(f"witness {witness_id(witness)}: lambda = {witness.lambda_!r}, "
          f"beta is {witness.beta.shape[0]}x{witness.beta.shape[1]}")
    print(f"wrote {json_path} and {csv_path}")
    return EXIT_OK


def _check_witness_matches_scenario(witness: WitnessCoefficients, scenario: QIScenario):
    if witness.dim_a != scenario.rho.dim_a or witness.dim_b != scenario.rho.dim_b:
        raise DimensionMismatchError(
            f"witness dims {witness.dim_a}x{witness.dim_b} != scenario dims "
            f"{scenario.rho.dim_a}x{scenario.rho.dim_b}"
        )
    for name, ws, ss in (
        ("A", witness.ensemble_a, scenario.ensemble_a),
        ("B", witness.ensemble_b, scenario.ensemble_b),
    ):
        if ws.n != ss.n:
            raise DimensionMismatchError(f"ensemble {name}: witness has {ws.n} states, scenario has {ss.n}")
        if np.max(np.abs(ws.state_matrix() - ss.state_matrix())) > 1e-8:
            raise DimensionMismatchError(f"ensemble {name}: witness and scenario input states differ")


def cmd_eval(args) -> int:
    scenario = load_scenario(args.scenario, default_seed=args.seed)
    witness = load_witness(args.witness)
    _check_witness_matches_scenario(witness, scenario)
    table = correlations(scenario)
    i_quantum = evaluate_inequality(witness, table)
    i_predicted = (
        predicted_quantum_value(witness, witness.dim_a, witness.dim_b)
        if witness.lambda_ is not None
        else None
    )
    print(f"I_quantum   = {i_quantum!r}")
    print(f"I_predicted = {i_predicted!r}")
    difference = None if i_predicted is None else i_quantum - i_predicted
    print(f"difference  = {difference!r}")
    if difference is not None and abs(difference) > args.tol:
        print(f"warning: |difference| exceeds tol {args.tol!r}", file=sys.stderr)
    if args.out is not None:
        if args.format == "csv":
            write_table_csv(table, args.out)
        else:
            report = {
                "witness_id": witness_id(witness),
                "I_quantum": i_quantum,
                "I_predicted": i_predicted,
                "difference": difference,
                "table": table_to_json(table),
                "tol": args.tol,
                "seed": args.seed,
            }
            _dump_json(report, args.out)
    return EXIT_OK


def cmd_attack(args) -> int:
    witness = load_witness(args.witness)
    report = run_attack(witness, samples=args.samples, budget=args.budget, seed=args.seed, workers=args.workers)
    doc = {
        "witness_id": report.witness_id,
        "samples": report.samples,
        "min_I_samples": report.min_i_samples,
        "min_I_optimizer": report.min_i_optimizer,
        "min_I": report.min_i,
        "seed": report.seed,
        "budget": report.budget,
        "tol": args.tol,
    }
    sys.stdout.write(_dump_json(doc, args.out))
    if report.min_i < -args.tol:
        print(f"error: separable strategy reached I = {report.min_i!r} < {-args.tol!r}; "
              "the witness bound is violated", file=sys.stderr)
        return EXIT_BOUND_VIOLATED
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing

def _default_seed() -> int:
    raw = os.environ.get("QIW_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise SchemaError(f"QIW_SEED: expected an integer, got {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qiw", description="Quantum-input Bell witness toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="numerical tolerance (default 1e-9)")
        p.add_argument("--seed", type=int, default=None, help="master seed (default 42, or QIW_SEED)")
        p.add_argument("--out", default=None, help="output path")
        p.add_argument("--format", choices=("json", "csv"), default="json", help="output format where applicable")

    p_build = sub.add_parser("build", help="construct a witness from a scenario file")
    p_build.add_argument("--scenario", required=True, help="scenario JSON path")
    common(p_build)
    p_build.set_defaults(func=cmd_build)

    p_eval = sub.add_parser("eval", help="evaluate the quantum violation of a witness")
    p_eval.add_argument("--scenario", required=True, help="scenario JSON path")
    p_eval.add_argument("--witness", required=True, help="witness JSON path")
    common(p_eval)
    p_eval.set_defaults(func=cmd_eval)

    p_attack = sub.add_parser("attack", help="search for classical violations of a witness")
    p_attack.add_argument("--witness", required=True, help="witness JSON path")
    p_attack.add_argument("--samples", type=int, default=10_000, help="number of sampled strategies")
    p_attack.add_argument("--budget", type=int, default=200, help="optimizer restarts")
    p_attack.add_argument("--workers", type=int, default=1, help="worker threads (does not affect results)")
    common(p_attack)
    p_attack.set_defaults(func=cmd_attack)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.seed is None:
            args.seed = _default_seed()
        if args.command == "build" and args.out is None:
            parser.error("build requires --out")
        return args.func(args)
    except (SchemaError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NoNegativeEigenvalueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_DETECTED
    except DimensionMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSIONS


def run():
    raise SystemExit(main())
