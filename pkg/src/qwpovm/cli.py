"""
Command-line front end.

Every command writes ``result.json`` (a self-describing record) and one or
more comma-delimited tables into ``--out``. Settings come from an optional
YAML file (``--config``) and command-line flags; flags win.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Sequence

import numpy as np
import yaml

from . import __version__
from .errors import DomainError, PlanningError, SamplingError, ValidationError
from .noise import NoiseParams, error_budget, noisy_evolve, sample_counts
from .optics import WaveplatePlan, compile_coin, plan_placement
from .povm import completeness_residual, match_rank1, outcome_probabilities, povm_from_spec
from .protocols import (
    SIC_POSITIONS,
    UsdSpec,
    sic_schedule,
    sic_vectors,
    usd_expected,
    usd_overlap,
    usd_schedule,
)
from .tomography import SicOutcome, density_record, fidelity_report, project_psd, reconstruct
from .walk import CoinSchedule, WalkSpec, evolve, position_distribution

COMMANDS = ("simulate", "usd", "sic", "extract-povm", "compile", "noise", "tomography", "sweep")
PROTOCOLS = ("usd", "sic", "walk")


class ConfigError(ValueError):
    """Malformed configuration; the message names the offending field or line."""


@dataclass(frozen=True)
class NoiseConfig:
    visibility: float = 1.0
    jitter_deg: float = 0.0
    counts: float = 1e4
    trials: int = 1


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    protocol: str | None = None
    phi: float | None = None
    input: str = "plus"
    a: float = 1.0
    b: float = 1.0
    index: int | None = None
    walk: dict | None = None
    matrix: tuple[tuple[str, str], tuple[str, str]] | None = None
    noise: NoiseConfig | None = None
    phi_range: tuple[float, float, float] | None = None
    rows: tuple[tuple[float, float, float, float], ...] | None = None
    seed: int = 0
    out: str = "qwpovm-out"

    def to_dict(self) -> dict:
        d = asdict(self)
        return json.loads(json.dumps(d))

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        return _build_config(data)


# ---------------------------------------------------------------------------
# config parsing

_NUMBER = (int, float)


def _expect(name: str, value: Any, kind, allow_none: bool = True):
    if value is None and allow_none:
        return None
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, _NUMBER):
            raise ConfigError(f"field '{name}': expected a number, got {value!r}")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"field '{name}': expected an integer, got {value!r}")
        return value
    if kind is str:
        if not isinstance(value, str):
            raise ConfigError(f"field '{name}': expected a string, got {value!r}")
        return value
    raise AssertionError(kind)


def _build_config(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a mapping of fields")
    known = {f.name for f in fields(ExperimentConfig)}
    for key in data:
        if key not in known:
            raise ConfigError(f"field '{key}': unknown setting")
    if "command" not in data:
        raise ConfigError("field 'command': missing")
    command = _expect("command", data["command"], str, allow_none=False)
    if command not in COMMANDS:
        raise ConfigError(f"field 'command': must be one of {', '.join(COMMANDS)}, got {command!r}")
    kw: dict[str, Any] = {"command": command}
    protocol = _expect("protocol", data.get("protocol"), str)
    if protocol is not None and protocol not in PROTOCOLS:
        raise ConfigError(f"field 'protocol': must be one of {', '.join(PROTOCOLS)}, got {protocol!r}")
    kw["protocol"] = protocol
    kw["phi"] = _expect("phi", data.get("phi"), float)
    kw["input"] = _expect("input", data.get("input", "plus"), str, allow_none=False)
    kw["a"] = _expect("a", data.get("a", 1.0), float, allow_none=False)
    kw["b"] = _expect("b", data.get("b", 1.0), float, allow_none=False)
    kw["index"] = _expect("index", data.get("index"), int)
    kw["seed"] = _expect("seed", data.get("seed", 0), int, allow_none=False)
    if kw["seed"] < 0 or kw["seed"] >= 2**64:
        raise ConfigError(f"field 'seed': must be an unsigned 64-bit integer, got {kw['seed']}")
    kw["out"] = _expect("out", data.get("out", "qwpovm-out"), str, allow_none=False)

    walk = data.get("walk")
    if walk is not None:
        if not isinstance(walk, dict):
            raise ConfigError("field 'walk': expected a mapping")
        _walk_spec(walk)  # validate eagerly
        kw["walk"] = json.loads(json.dumps(walk))

    matrix = data.get("matrix")
    if matrix is not None:
        try:
            rows = tuple(tuple(str(v) for v in row) for row in matrix)
            [[complex(v.replace(" ", "")) for v in row] for row in rows]
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"field 'matrix': expected 2x2 complex entries ({exc})") from exc
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise ConfigError("field 'matrix': expected a 2x2 matrix")
        kw["matrix"] = rows

    noise = data.get("noise")
    if noise is not None:
        if not isinstance(noise, dict):
            raise ConfigError("field 'noise': expected a mapping")
        nk = {f.name for f in fields(NoiseConfig)}
        for key in noise:
            if key not in nk:
                raise ConfigError(f"field 'noise.{key}': unknown setting")
        nc = NoiseConfig(
            visibility=_expect("noise.visibility", noise.get("visibility", 1.0), float, False),
            jitter_deg=_expect("noise.jitter_deg", noise.get("jitter_deg", 0.0), float, False),
            counts=_expect("noise.counts", noise.get("counts", 1e4), float, False),
            trials=_expect("noise.trials", noise.get("trials", 1), int, False),
        )
        try:
            NoiseParams(nc.visibility, nc.jitter_deg, nc.counts, kw["seed"])
        except ValidationError as exc:
            raise ConfigError(f"field 'noise': {exc}") from exc
        if nc.trials < 1:
            raise ConfigError("field 'noise.trials': must be >= 1")
        kw["noise"] = nc

    pr = data.get("phi_range")
    if pr is not None:
        if not isinstance(pr, (list, tuple)) or len(pr) != 3:
            raise ConfigError("field 'phi_range': expected [start, stop, step]")
        kw["phi_range"] = tuple(_expect(f"phi_range[{i}]", v, float, False) for i, v in enumerate(pr))

    rows = data.get("rows")
    if rows is not None:
        if not isinstance(rows, (list, tuple)) or not rows:
            raise ConfigError("field 'rows': expected a non-empty list")
        parsed = []
        for i, row in enumerate(rows):
            if isinstance(row, dict):
                try:
                    row = [row[x] for x in (0, 2, 4, 6)]
                except KeyError as exc:
                    raise ConfigError(f"field 'rows[{i}]': missing position {exc}") from exc
            if not isinstance(row, (list, tuple)) or len(row) != 4:
                raise ConfigError(f"field 'rows[{i}]': expected P(0), P(2), P(4), P(6)")
            parsed.append(tuple(_expect(f"rows[{i}][{j}]", v, float, False) for j, v in enumerate(row)))
        kw["rows"] = tuple(parsed)
    return ExperimentConfig(**kw)


def _complex(v: Any, name: str) -> complex:
    if isinstance(v, bool):
        raise ConfigError(f"field '{name}': expected a complex number, got {v!r}")
    if isinstance(v, _NUMBER):
        return complex(v)
    if isinstance(v, str):
        try:
            return complex(v.replace(" ", ""))
        except ValueError:
            pass
    raise ConfigError(f"field '{name}': expected a complex number, got {v!r}")


def _walk_spec(walk: dict) -> WalkSpec:
    for key in walk:
        if key not in ("steps", "start", "coin", "coins"):
            raise ConfigError(f"field 'walk.{key}': unknown setting")
    steps = _expect("walk.steps", walk.get("steps"), int, allow_none=False)
    start = _expect("walk.start", walk.get("start", 0), int, allow_none=False)
    coin = walk.get("coin", [1, 0])
    if not isinstance(coin, (list, tuple)) or len(coin) != 2:
        raise ConfigError("field 'walk.coin': expected two amplitudes")
    spinor = [_complex(v, f"walk.coin[{i}]") for i, v in enumerate(coin)]
    coins = {}
    for i, entry in enumerate(walk.get("coins") or []):
        name = f"walk.coins[{i}]"
        if not isinstance(entry, dict) or {"step", "x", "matrix"} - set(entry):
            raise ConfigError(f"field '{name}': expected step, x and matrix")
        m = entry["matrix"]
        if not isinstance(m, (list, tuple)) or len(m) != 2 or any(len(r) != 2 for r in m):
            raise ConfigError(f"field '{name}.matrix': expected a 2x2 matrix")
        key = (_expect(f"{name}.step", entry["step"], int, False), _expect(f"{name}.x", entry["x"], int, False))
        coins[key] = [[_complex(v, f"{name}.matrix") for v in r] for r in m]
    try:
        return WalkSpec(steps, spinor, CoinSchedule(coins), start)
    except ValidationError as exc:
        raise ConfigError(f"field 'walk': {exc}") from exc


def load_config_file(path: str | Path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        where = f"line {mark.line + 1}, column {mark.column + 1}" if mark else "unknown position"
        raise ConfigError(f"{path}: {where}: {exc.problem}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return data


# ---------------------------------------------------------------------------
# dispatch helpers


def _spec_for(cfg: ExperimentConfig) -> WalkSpec:
    protocol = cfg.protocol or {"usd": "usd", "sic": "sic"}.get(cfg.command)
    if protocol is None:
        protocol = "walk" if cfg.walk is not None else None
    if protocol == "usd":
        if cfg.phi is None:
            raise ConfigError("field 'phi': required for the usd protocol")
        return usd_schedule(cfg.phi, cfg.input, cfg.a, cfg.b)
    if protocol == "sic":
        if cfg.index is None:
            raise ConfigError("field 'index': required for the sic protocol")
        return sic_schedule(cfg.index)
    if protocol == "walk":
        if cfg.walk is None:
            raise ConfigError("field 'walk': required for a raw walk")
        return _walk_spec(cfg.walk)
    raise ConfigError("field 'protocol': one of usd, sic or walk is required")


def _noise_params(cfg: ExperimentConfig) -> NoiseParams:
    n = cfg.noise or NoiseConfig()
    return NoiseParams(n.visibility, n.jitter_deg, n.counts, cfg.seed)


def _fmt(p: float) -> str:
    return f"{p:.6f}"


def _table(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _dist_json(d: dict[int, float]) -> dict[str, float]:
    return {str(x): d[x] for x in sorted(d)}


def _theory_table(theory: dict[int, float], positions: Sequence[int], sampled=None) -> str:
    header = ["position", "probability"]
    if sampled is not None:
        header += ["sampled", "counts"]
    rows = []
    for x in positions:
        row = [x, _fmt(theory.get(x, 0.0))]
        if sampled is not None:
            row += [_fmt(sampled.distribution.get(x, 0.0)), sampled.counts.get(x, 0)]
        rows.append(row)
    return _table(header, rows)


def _with_sampling(cfg, spec, theory, record):
    if cfg.noise is None:
        return None
    params = _noise_params(cfg)
    rng = np.random.default_rng(params.seed)
    state = noisy_evolve(spec, params, rng=rng)
    trial = sample_counts(state.position_distribution(), params, reference=theory, rng=rng)
    record["sampled"] = _dist_json(trial.distribution)
    record["counts"] = {str(x): c for x, c in sorted(trial.counts.items())}
    record["d"] = trial.d
    return trial


def _povm_check(spec: WalkSpec, theory: dict[int, float]) -> float:
    probs = outcome_probabilities(povm_from_spec(spec), spec.coin)
    return max(abs(probs.get(x, 0.0) - theory.get(x, 0.0)) for x in set(probs) | set(theory))


def _cmd_simulate(cfg, record, files):
    spec = _spec_for(cfg)
    theory = position_distribution(evolve(spec))
    record["theory"] = _dist_json(theory)
    record["derived"]["povm_consistency"] = _povm_check(spec, theory)
    trial = _with_sampling(cfg, spec, theory, record)
    positions = range(spec.start - spec.steps, spec.start + spec.steps + 1, 2)
    files["distribution.csv"] = _theory_table(theory, positions, trial)


def _cmd_usd(cfg, record, files):
    if cfg.phi is None:
        raise ConfigError("field 'phi': required for usd")
    spec = usd_schedule(cfg.phi, cfg.input, cfg.a, cfg.b)
    theory = position_distribution(evolve(spec))
    outcome = usd_expected(UsdSpec(cfg.phi, cfg.input, cfg.a, cfg.b))
    record["theory"] = _dist_json(theory)
    ratio = outcome.ratio
    record["derived"].update({
        "eta_err": outcome.eta_err,
        "overlap": usd_overlap(cfg.phi),
        "p_plus": outcome.p_plus,
        "p_minus": outcome.p_minus,
        "ratio": "inf" if math.isinf(ratio) else ratio,
        "povm_consistency": _povm_check(spec, theory),
    })
    trial = _with_sampling(cfg, spec, theory, record)
    files["distribution.csv"] = _theory_table(theory, (-1, 1, 3), trial)
    files["plan.csv"] = plan_placement(spec.schedule, spec.steps).to_csv()


def _cmd_sic(cfg, record, files):
    if cfg.index is None:
        raise ConfigError("field 'index': required for sic")
    spec = sic_schedule(cfg.index)
    theory = position_distribution(evolve(spec))
    record["theory"] = _dist_json(theory)
    record["derived"].update({
        "forbidden_position": SIC_POSITIONS[cfg.index],
        "povm_consistency": _povm_check(spec, theory),
    })
    trial = _with_sampling(cfg, spec, theory, record)
    files["distribution.csv"] = _theory_table(theory, (0, 2, 4, 6), trial)
    files["plan.csv"] = plan_placement(spec.schedule, spec.steps).to_csv()


def _cmd_extract(cfg, record, files):
    spec = _spec_for(cfg)
    elements = povm_from_spec(spec)
    record["derived"]["completeness_residual"] = completeness_residual(elements)
    record["povm"] = {
        str(e.position): [[[v.real, v.imag] for v in row] for row in e.matrix] for e in elements
    }
    if cfg.protocol == "sic":
        xi = sic_vectors()
        by_pos = {e.position: e for e in elements}
        record["derived"]["rank1_residuals"] = {
            str(i): match_rank1(by_pos[SIC_POSITIONS[i]], xi[i], 0.5)[1] for i in (1, 2, 3, 4)
        }
    rows = [
        [e.position, _fmt(e.matrix[0, 0].real), _fmt(e.matrix[0, 1].real), _fmt(e.matrix[0, 1].imag),
         _fmt(e.matrix[1, 1].real)]
        for e in elements
    ]
    files["povm.csv"] = _table(["position", "e00", "e01_re", "e01_im", "e11"], rows)


def _cmd_compile(cfg, record, files):
    if cfg.matrix is not None:
        m = np.array([[complex(v.replace(" ", "")) for v in row] for row in cfg.matrix])
        plates = compile_coin(m)
        plan = WaveplatePlan({1: tuple(plates)}) if plates else WaveplatePlan()
    else:
        spec = _spec_for(cfg)
        plan = plan_placement(spec.schedule, spec.steps, spec.start)
    record["plan"] = plan.records()
    files["plan.csv"] = plan.to_csv()


def _cmd_noise(cfg, record, files):
    spec = _spec_for(cfg)
    params = _noise_params(cfg)
    trials = (cfg.noise or NoiseConfig()).trials
    summary = error_budget(spec, params, trials)
    theory = position_distribution(evolve(spec))
    record["theory"] = _dist_json(theory)
    record["derived"].update({
        "d_median": summary.d_median,
        "d_p05": summary.d_p05,
        "d_p95": summary.d_p95,
        "d_mean": summary.d_mean,
        "fidelity_mean": summary.fidelity_mean,
        "d_trials": summary.d_values,
    })
    positions = list(range(spec.start - spec.steps, spec.start + spec.steps + 1, 2))
    rows = [[k, f"{t.d:.6f}"] + [t.counts.get(x, 0) for x in positions] for k, t in enumerate(summary.trials)]
    files["trials.csv"] = _table(["trial", "d"] + [f"n{x}" for x in positions], rows)
    files["distribution.csv"] = _theory_table(theory, positions, summary.trials[0])


def _cmd_tomography(cfg, record, files):
    if not cfg.rows:
        raise ConfigError("field 'rows': at least one outcome row is required")
    outcomes = []
    for i, row in enumerate(cfg.rows):
        try:
            outcomes.append(SicOutcome.from_positions(dict(zip((0, 2, 4, 6), row))))
        except ValidationError as exc:
            raise ConfigError(f"field 'rows[{i}]': {exc}") from exc
    rhos = [reconstruct(o) for o in outcomes]
    record["density"] = [density_record(r) for r in rhos]
    record["density_projected"] = [density_record(project_psd(r)) for r in rhos]
    if len(outcomes) == 4:
        record["derived"]["fidelities"] = fidelity_report(outcomes)
    header = ["row", "re00", "re01", "re10", "re11", "im00", "im01", "im10", "im11"]
    files["density.csv"] = _table(header, [[i + 1] + [_fmt(v) for v in density_record(r)] for i, r in enumerate(rhos)])


def _phi_grid(start: float, stop: float, step: float) -> list[float]:
    if step <= 0:
        raise ConfigError("field 'phi_range': step must be positive")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    grid = [round(start + k * step, 10) for k in range(max(n, 0))]
    if not grid:
        raise ConfigError("field 'phi_range': empty range")
    for p in grid:
        if not 0 < p <= 90:
            raise DomainError(f"phi must lie in (0, 90] degrees, got {p}")
    return grid


def _cmd_sweep(cfg, record, files):
    if cfg.phi_range is None:
        raise ConfigError("field 'phi_range': required for sweep")
    grid = _phi_grid(*cfg.phi_range)
    base = _noise_params(cfg)
    seeds = np.random.SeedSequence(base.seed).spawn(len(grid))
    rows = []
    for phi, ss in zip(grid, seeds):
        spec = usd_schedule(phi, cfg.input, cfg.a, cfg.b)
        theory = position_distribution(evolve(spec))
        eta = usd_expected(UsdSpec(phi, cfg.input, cfg.a, cfg.b)).eta_err
        rng = np.random.default_rng(ss)
        state = noisy_evolve(spec, base, rng=rng)
        trial = sample_counts(state.position_distribution(), base, reference=theory, rng=rng)
        rows.append([f"{phi:g}", _fmt(eta), _fmt(trial.distribution.get(3, 0.0))])
    record["derived"]["rows"] = len(rows)
    files["sweep.csv"] = _table(["phi_deg", "eta_err_theory", "eta_err_sampled"], rows)


_DISPATCH = {
    "simulate": _cmd_simulate,
    "usd": _cmd_usd,
    "sic": _cmd_sic,
    "extract-povm": _cmd_extract,
    "compile": _cmd_compile,
    "noise": _cmd_noise,
    "tomography": _cmd_tomography,
    "sweep": _cmd_sweep,
}


def config_hash(cfg: ExperimentConfig) -> str:
    canon = json.dumps(cfg.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def run(cfg: ExperimentConfig, write: bool = True) -> tuple[dict, dict[str, str]]:
    """Execute ``cfg``; return the result record and the table files.

    With ``write`` the record goes to ``<out>/result.json`` and each table to
    ``<out>/<name>``.
    """
    record: dict[str, Any] = {
        "version": __version__,
        "command": cfg.command,
        "config": cfg.to_dict(),
        "config_hash": config_hash(cfg),
        "seed": cfg.seed,
        "derived": {},
    }
    files: dict[str, str] = {}
    _DISPATCH[cfg.command](cfg, record, files)
    if write:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "result.json").write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")
        for name, text in files.items():
            (out / name).write_text(text)
    return record, files


# ---------------------------------------------------------------------------
# argument parsing


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="YAML file with settings; flags override it")
    common.add_argument("--seed", type=int, help="RNG seed (unsigned 64-bit)")
    common.add_argument("--out", metavar="DIR", help="output directory")

    noise = argparse.ArgumentParser(add_help=False)
    noise.add_argument("--visibility", type=float)
    noise.add_argument("--jitter", type=float, dest="jitter_deg", help="plate angle jitter, degrees")
    noise.add_argument("--counts", type=float, help="expected total counts")
    noise.add_argument("--trials", type=int)

    proto = argparse.ArgumentParser(add_help=False)
    proto.add_argument("--protocol", choices=PROTOCOLS)
    proto.add_argument("--phi", type=float, help="degrees")
    proto.add_argument("--input", dest="input", help="plus, minus or superposition (usd); 1-4 (sic)")
    proto.add_argument("-a", type=float)
    proto.add_argument("-b", type=float)

    p = argparse.ArgumentParser(prog="qwpovm", description="Quantum-walk POVM simulator")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")
    sub.add_parser("simulate", parents=[common, proto, noise], help="evolve a walk and tabulate P(x)")
    sub.add_parser("usd", parents=[common, proto, noise], help="unambiguous discrimination walk")
    sub.add_parser("sic", parents=[common, proto, noise], help="SIC-POVM walk")
    sub.add_parser("extract-povm", parents=[common, proto], help="POVM elements realized by a walk")
    c = sub.add_parser("compile", parents=[common, proto], help="wave-plate settings")
    c.add_argument("--matrix", help="2x2 coin as 'a,b;c,d' with Python complex literals")
    sub.add_parser("noise", parents=[common, proto, noise], help="Monte Carlo error budget")
    t = sub.add_parser("tomography", parents=[common], help="reconstruct states from SIC outcomes")
    t.add_argument("--row", action="append", help="P(0),P(2),P(4),P(6); repeat for several states")
    s = sub.add_parser("sweep", parents=[common, proto, noise], help="inconclusive rate versus phi")
    s.add_argument("--phi-range", nargs=3, type=float, metavar=("START", "STOP", "STEP"))
    return p


def config_from_args(argv: Sequence[str] | None = None) -> ExperimentConfig:
    args = _parser().parse_args(argv)
    data: dict[str, Any] = load_config_file(args.config) if args.config else {}
    data["command"] = args.command
    flags = vars(args)
    for key in ("protocol", "phi", "a", "b", "seed", "out"):
        if flags.get(key) is not None:
            data[key] = flags[key]
    if flags.get("input") is not None:
        if args.command == "sic" or data.get("protocol") == "sic":
            try:
                data["index"] = int(flags["input"])
            except ValueError as exc:
                raise ConfigError(f"--input: SIC input must be 1-4, got {flags['input']!r}") from exc
        else:
            data["input"] = flags["input"]
    noise_flags = {k: flags.get(k) for k in ("visibility", "jitter_deg", "counts", "trials")}
    if any(v is not None for v in noise_flags.values()):
        section = dict(data.get("noise") or {})
        section.update({k: v for k, v in noise_flags.items() if v is not None})
        data["noise"] = section
    if flags.get("matrix"):
        try:
            data["matrix"] = [row.split(",") for row in flags["matrix"].split(";")]
        except AttributeError as exc:  # pragma: no cover
            raise ConfigError("--matrix: expected 'a,b;c,d'") from exc
    if flags.get("row"):
        try:
            data["rows"] = [[float(v) for v in r.split(",")] for r in flags["row"]]
        except ValueError as exc:
            raise ConfigError(f"--row: {exc}") from exc
    if flags.get("phi_range"):
        data["phi_range"] = list(flags["phi_range"])
    return _build_config(data)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
        record, _ = run(cfg)
    except ConfigError as exc:
        print(f"qwpovm: config error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, ValidationError, PlanningError, SamplingError) as exc:
        print(f"qwpovm: {exc}", file=sys.stderr)
        return 1
    print(json.dumps({"out": cfg.out, "command": cfg.command, "config_hash": record["config_hash"]}))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
