"""Command-line experiment runner.

Every subcommand produces a list of ``(index, sector, value)`` records, written
as JSON (default) or CSV. Exit codes: 0 success, 2 configuration error,
3 empty target sector.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass, fields, replace
from itertools import combinations
from math import comb, pi, sqrt

import numpy as np

from .circuit import bcs_prepare, pair_number_labels
from .errors import DomainError, EmptySectorError, ResourceLimitError
from .pauli import canonical_kind, number_operator_pauli
from .projector import ProjectorSpec, apply_projector, binary_fraction_deviation, lcu_decomposition
from .resources import METHODS, resource_report
from .restore import (
    ABSENT,
    ObservableLcu,
    expectation_postprocessed,
    good_bad_state,
    grover_project,
    hadamard_oracle_project,
    iqpe_project,
    lcu_project,
    qpe_project,
)
from .statevec import ZERO_PROB, random_state, sector_probabilities, uniform_state
from .symmetry import spectrum

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_EMPTY = 3
EXPERIMENTS = ("fig5", "fig6", "equivalence", "compare", "bcs")
CLI_METHODS = ("postproc", "lcu", "grover", "hoyer", "qpe", "iqpe", "hadamard-oracle")
EXACT_FORMS = ("delta_filter", "lowdin", "discrete_sum", "product", "gauge_integral")

log = logging.getLogger("symrestore")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    qubits: int | None = None
    kind: str = "particle_number"
    target: float | None = None
    method: str | None = None
    mode: str | None = None
    seed: int | None = None
    out: str | None = None
    format: str = "json"
    trials: int | None = None
    theta: float | None = None
    steps: int | None = None

    def validate(self) -> "ExperimentConfig":
        for name, types in _FIELD_TYPES.items():
            value = getattr(self, name)
            if value is not None and (isinstance(value, bool) or not isinstance(value, types)):
                raise DomainError(f"{name} has the wrong type: {value!r}")
        if self.experiment not in EXPERIMENTS:
            raise DomainError(f"unknown experiment {self.experiment!r}")
        if self.format not in ("json", "csv"):
            raise DomainError(f"unknown format {self.format!r}")
        if self.method is not None and self.method not in CLI_METHODS:
            raise DomainError(f"unknown method {self.method!r}")
        if self.qubits is not None and self.qubits < 1:
            raise DomainError("qubits must be positive")
        if self.trials is not None and self.trials < 1:
            raise DomainError("trials must be positive")
        if self.steps is not None and self.steps < 0:
            raise DomainError("steps must be non-negative")
        return replace(self, kind=canonical_kind(self.kind))


_FIELD_TYPES = {
    "qubits": int, "kind": str, "target": (int, float), "method": str, "mode": str,
    "seed": int, "out": str, "format": str, "trials": int, "theta": (int, float), "steps": int,
}
CONFIG_FIELDS = tuple(f.name for f in fields(ExperimentConfig) if f.name != "experiment")


@dataclass
class Output:
    header: tuple[str, str, str]
    records: list[tuple]
    extra: dict


def _sector_key(value) -> int | float:
    value = float(value)
    return int(value) if value.is_integer() else value


# ---------------------------------------------------------------- experiments


def _fig5(cfg: ExperimentConfig) -> Output:
    n = cfg.qubits or 8
    target = 4 if cfg.target is None else cfg.target
    theta = pi / 26 if cfg.theta is None else cfg.theta
    n_max = 30 if cfg.steps is None else cfg.steps
    state = good_bad_state(n, cfg.kind, target, theta, seed=cfg.seed)
    res = grover_project(state, ProjectorSpec(cfg.kind, target), "fixed_n", n_steps=0, n_max=n_max)
    if res.status == ABSENT:
        raise EmptySectorError()
    rows = [(i, _sector_key(target), p) for i, p in enumerate(res.trace["p_n"])]
    return Output(("n", "sector", "p_n"), rows, {"theta": theta})


def _fig6(cfg: ExperimentConfig) -> Output:
    n = cfg.qubits or 16
    target = n // 2 if cfg.target is None else cfg.target
    state = uniform_state(n) if cfg.seed is None else random_state(n, cfg.seed)
    res = iqpe_project(state, cfg.kind, target, l_max=cfg.steps)
    if res.status == ABSENT:
        raise EmptySectorError()
    # Phase products of non-exact angles leave ~1e-33 residues on removed sectors.
    rows = [
        (step, _sector_key(sector), p if p > ZERO_PROB else 0.0)
        for step, dist in enumerate(res.trace["sector_probabilities"])
        for sector, p in sorted(dist.items())
    ]
    amplitudes = [[step, sector, sqrt(p)] for step, sector, p in rows]
    return Output(("step", "sector", "probability"), rows,
                  {"amplitudes": amplitudes, "survival": res.trace["survival"]})


def _equivalence(cfg: ExperimentConfig) -> Output:
    n = cfg.qubits or 5
    trials = cfg.trials or 20
    kind = cfg.kind
    seeds = np.random.SeedSequence(0 if cfg.seed is None else cfg.seed).spawn(trials)
    targets = spectrum(kind, n) if cfg.target is None else [cfg.target]
    forms = EXACT_FORMS if kind != "total_spin" else ("delta_filter", "lowdin")
    worst: dict[str, float] = {}
    for ss in seeds:
        state = random_state(n, np.random.default_rng(ss))
        for t in targets:
            vecs = {}
            for form in forms:
                vec, _ = apply_projector(state, ProjectorSpec(kind, t, form))
                twice, _ = apply_projector(vec, ProjectorSpec(kind, t, form))
                key = f"idempotency:{form}"
                worst[key] = max(worst.get(key, 0.0), float(np.max(np.abs(twice.amplitudes - vec.amplitudes))))
                vecs[form] = vec.amplitudes
            for a, b in combinations(forms, 2):
                key = f"{a}~{b}"
                worst[key] = max(worst.get(key, 0.0), float(np.max(np.abs(vecs[a] - vecs[b]))))
    rows = [(i, key, worst[key]) for i, key in enumerate(sorted(worst))]
    base = len(rows)
    rows += [(base + b - 1, f"product~sum:M=2^{b}", binary_fraction_deviation(b)) for b in range(1, 6)]
    return Output(("index", "comparison", "max_deviation"), rows,
                  {"max_deviation": max(r[2] for r in rows)})


def _compare(cfg: ExperimentConfig) -> Output:
    n = cfg.qubits or 16
    target = n // 2 if cfg.target is None else cfg.target
    p_g = comb(n, int(target)) / 2**n
    methods = METHODS if cfg.method is None else (cfg.method.replace("-", "_"),)
    reports = [resource_report(m, n, p_G=p_g) for m in methods]
    rows = []
    for r in reports:
        rows.append((r.method, "n_ancilla", r.n_ancilla))
        rows.append((r.method, "n_measurement_rounds", r.n_measurement_rounds))
        for gate, count in sorted(r.gate_inventory.items()):
            rows.append((r.method, f"gates:{gate}", count))
        rows.append((r.method, "retained_probability", r.retained_probability))
        rows.append((r.method, "gives_projected_state", int(r.gives_projected_state)))
    return Output(("method", "field", "value"), rows,
                  {"p_G": p_g, "reports": [r.to_dict() for r in reports]})


def _bcs_state(cfg: ExperimentConfig):
    n = cfg.qubits or 8
    if n % 2:
        raise DomainError("the two-qubits-per-pair encoding needs an even register")
    n_pairs = n // 2
    if cfg.theta is not None:
        thetas = [cfg.theta] * n_pairs
    else:
        rng = np.random.default_rng(0 if cfg.seed is None else cfg.seed)
        thetas = list(rng.uniform(0.2, pi - 0.2, size=n_pairs))
    return n, n_pairs, thetas, bcs_prepare(thetas).run()


def _bcs(cfg: ExperimentConfig) -> Output:
    n, n_pairs, thetas, state = _bcs_state(cfg)
    pairs = n_pairs // 2 if cfg.target is None else int(cfg.target)
    if not 0 <= pairs <= n_pairs:
        raise DomainError(f"pair target {pairs} outside 0..{n_pairs}")
    target = 2 * pairs
    labels = pair_number_labels(n)
    before = sector_probabilities(state, labels)
    method = cfg.method or "lcu"
    rows = [("before", _sector_key(k), p) for k, p in sorted(before.items())]
    extra = {"thetas": thetas, "method": method}
    if method == "postproc":
        obs = ObservableLcu.from_pauli_sum(number_operator_pauli(n) * 0.5)
        value = expectation_postprocessed(state, obs, lcu_decomposition("particle_number", target, n_qubits=n))
        rows.append(("after", "mean_pairs", value))
        return Output(("stage", "sector", "value"), rows, extra)
    spec = ProjectorSpec("particle_number", target)
    if method == "lcu":
        res = lcu_project(state, lcu_decomposition("particle_number", target, n_qubits=n))
    elif method == "hadamard-oracle":
        res = hadamard_oracle_project(state, spec)
    elif method == "qpe":
        res = qpe_project(state, "particle_number", target)
    elif method == "iqpe":
        res = iqpe_project(state, "particle_number", target)
    else:
        res = grover_project(state, spec, "hoyer" if method == "hoyer" else "auto_optimal")
    if res.status == ABSENT:
        raise EmptySectorError()
    after = sector_probabilities(res.final_state, labels)
    rows += [("after", _sector_key(k), p) for k, p in sorted(after.items())]
    extra["success_probability"] = res.success_probability
    return Output(("stage", "sector", "value"), rows, extra)


RUNNERS = {"fig5": _fig5, "fig6": _fig6, "equivalence": _equivalence, "compare": _compare, "bcs": _bcs}


# ---------------------------------------------------------------- output


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def render(cfg: ExperimentConfig, out: Output) -> str:
    if cfg.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(out.header)
        for row in out.records:
            writer.writerow([_fmt(v) for v in row])
        return buf.getvalue()
    config = {k: v for k, v in asdict(cfg).items() if k not in ("out", "format")}
    payload = {
        "experiment": cfg.experiment,
        "config": config,
        "columns": list(out.header),
        "records": [list(r) for r in out.records],
        **out.extra,
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def run_experiment(cfg: ExperimentConfig) -> tuple[int, str]:
    """Run ``cfg`` and return ``(exit code, rendered output or diagnostic)``."""
    try:
        cfg = cfg.validate()
        out = RUNNERS[cfg.experiment](cfg)
    except EmptySectorError as exc:
        return EXIT_EMPTY, f"error: {exc}"
    except (DomainError, ResourceLimitError) as exc:
        return EXIT_CONFIG, f"error: {exc}"
    return EXIT_OK, render(cfg, out)


# ---------------------------------------------------------------- argparse


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with config fields; flags override it")
    common.add_argument("--qubits", type=int)
    common.add_argument("--kind", help="particle_number, sz, parity or total_spin")
    common.add_argument("--target", type=float)
    common.add_argument("--method", choices=CLI_METHODS)
    common.add_argument("--mode")
    common.add_argument("--seed", type=int)
    common.add_argument("--out")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--trials", type=int)
    common.add_argument("--theta", type=float)
    common.add_argument("--steps", type=int)
    parser = argparse.ArgumentParser(prog="symrestore", description="Symmetry restoration experiments")
    sub = parser.add_subparsers(dest="experiment", required=True)
    sub.add_parser("fig5", parents=[common], help="amplitude-amplification oscillation p_n")
    sub.add_parser("fig6", parents=[common], help="sector probabilities along the IQPE ladder")
    sub.add_parser("equivalence", parents=[common], help="projector-form deviations on random states")
    sub.add_parser("compare", parents=[common], help="resource reports per method")
    sub.add_parser("bcs", parents=[common], help="restore particle number of a BCS state")
    return parser


def _load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise DomainError("config file must hold a JSON object")
    unknown = sorted(set(data) - set(CONFIG_FIELDS))
    if unknown:
        raise DomainError(f"unknown config fields: {', '.join(unknown)}")
    return data


def build_config(argv: list[str] | None = None) -> ExperimentConfig:
    args = _parser().parse_args(argv)
    values = _load_config(args.config) if args.config else {}
    for name in CONFIG_FIELDS:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    if isinstance(values.get("target"), float) and values["target"].is_integer():
        values["target"] = int(values["target"])
    return ExperimentConfig(args.experiment, **values)


def main(argv: list[str] | None = None) -> int:
    level = logging.getLevelName(os.environ.get("SYMRESTORE_LOG", "WARNING").upper())
    logging.basicConfig(level=level if isinstance(level, int) else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = build_config(argv)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    log.info("running %s", cfg.experiment)
    code, text = run_experiment(cfg)
    if code != EXIT_OK:
        print(text, file=sys.stderr)
        return code
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
