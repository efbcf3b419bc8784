"""Command-line experiment runner.

Every command is a pure function of its configuration and seed and writes
versioned CSV.  Configuration comes from an optional ``key=value`` file
(``--config``) overridden by flags.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .errors import ParseError
from ._kernels.rng import derive_seed

CSV_VERSION = "v1"
DEFAULT_GRID = (0.0, 0.02, 0.05, 0.1, 0.15, 0.2)


@dataclass(frozen=True)
class ScenarioConfig:
    code: str = "steane"
    circuit: str = "parallel"
    noise: str = "none"
    state: str = "calibration"
    lambdas: tuple[float, ...] = ()
    shots: int | None = None
    seed: int = 0
    rounds: int = 2
    analytic: bool = False
    out: str | None = None
    generators: tuple[int, ...] = (4, 5, 6)

    def __post_init__(self):
        if any(not 0.0 <= v <= 1.0 for v in self.lambdas):
            raise ValueError("lambda values must lie in [0, 1]")
        if self.shots is not None and self.shots < 1:
            raise ValueError("shots must be >= 1")

    @property
    def sampled(self) -> bool:
        return self.shots is not None and not self.analytic


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(t) for t in text.replace(" ", "").split(",") if t)


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.replace(" ", "").split(",") if t)


def _bool(text: str) -> bool:
    key = text.strip().lower()
    if key in ("1", "true", "yes", "on"):
        return True
    if key in ("0", "false", "no", "off", ""):
        return False
    raise ParseError(f"not a boolean: {text!r}")


_CONVERT = {
    "lambdas": _floats, "generators": _ints, "shots": int, "seed": int, "rounds": int,
    "analytic": _bool,
}


def read_config(path: str | Path) -> dict:
    """Flat ``key=value`` lines; ``#`` starts a comment."""
    known = {f.name for f in fields(ScenarioConfig)}
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"{path}:{lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise ParseError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _CONVERT.get(key, str)(val)
    return out


def build_config(args: argparse.Namespace, defaults: dict) -> ScenarioConfig:
    values = dict(defaults)
    if getattr(args, "config", None):
        values.update(read_config(args.config))
    for f in fields(ScenarioConfig):
        v = getattr(args, f.name, None)
        if v is not None and v is not False:
            values[f.name] = _CONVERT[f.name](v) if f.name in ("lambdas", "generators") else v
    return ScenarioConfig(**values)


# --- scenario plumbing ------------------------------------------------------------


def _load(cfg: ScenarioConfig):
    from .code import load_code
    from .sim.circuit import build_circuit, parse_circuit
    from .states import parse_state

    code = load_code(cfg.code)
    if cfg.circuit.strip().lower() in ("sequential", "parallel"):
        circuit = build_circuit(code, cfg.circuit)
    else:
        circuit = parse_circuit(Path(cfg.circuit).read_text(), code)
    return code, circuit, parse_state(cfg.state, code)


def _models(cfg: ScenarioConfig, lam: float | None):
    from .channel import parse_noise

    models = parse_noise(cfg.noise)
    if lam is None:
        return models
    return tuple(m.with_value(lam) for m in models)


def _grid(cfg: ScenarioConfig):
    return cfg.lambdas if cfg.lambdas else (None,)


def _header(command: str) -> str:
    return f"# syndrocal-csv {CSV_VERSION} {command}\n"


def _table(command: str, header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write(_header(command))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _num(v) -> str:
    v = float(v)
    return "nan" if np.isnan(v) else ("inf" if np.isinf(v) else repr(float(format(v, ".13g")) + 0.0))


# --- commands -------------------------------------------------------------------


def cmd_calibrate(cfg: ScenarioConfig) -> dict[str, str]:
    """Calibration report per grid point; exact unless shots are requested.

    The exact path reads the factors off the spectral engine, which needs
    no joint-law enumeration and does not depend on the input state.
    """
    from .calib import REPORT_COLUMNS, empirical_report, spectral_report
    from .sim import attach_noise, sample_shots

    code, base, state = _load(cfg)
    rows, au_rows = [], []
    for i, lam in enumerate(_grid(cfg)):
        noisy = attach_noise(base, _models(cfg, lam))
        if cfg.sampled:
            batch = sample_shots(noisy, state, cfg.shots, derive_seed(cfg.seed, i), rounds=2)
            rep = empirical_report(batch, state, code, with_beta_au=True)
        else:
            rep = spectral_report(noisy, code, with_beta_au=True)
        rows += rep.rows(lam)
        prefix = [_num(lam)] if lam is not None else []
        au_rows += [prefix + r for r in rep.beta_au_rows()]
    head = (["lambda"] if cfg.lambdas else []) + list(REPORT_COLUMNS)
    out = {"calibrate.csv": _table("calibrate", head, rows)}
    if au_rows:
        au_head = (["lambda"] if cfg.lambdas else []) + ["a", "u", "value", "se"]
        out["beta_au.csv"] = _table("calibrate/beta_au", au_head, au_rows)
    return out


def cmd_estimate_channel(cfg: ScenarioConfig) -> dict[str, str]:
    from .noisest import channel_estimation_experiment

    _, base, _ = _load(cfg)
    models = _models(cfg, None)
    if len(models) != 1:
        raise ParseError("estimate-channel takes exactly one noise family")
    grid = cfg.lambdas or DEFAULT_GRID
    res = channel_estimation_experiment(grid, base, models[0].kind,
                                        shots=cfg.shots if cfg.sampled else None, seed=cfg.seed)
    out = {"estimate-channel.csv": _table(
        "estimate-channel", ["lambda", "db_raw", "db_calibrated"],
        [[_num(r.lam), _num(r.db_raw), _num(r.db_calibrated)] for r in res])}
    head = ["lambda", "source", "qubit", "p_id", "p_x", "p_y", "p_z", "flags"]
    rows = []
    for r in res:
        for source, est in (("raw", r.raw), ("calibrated", r.calibrated), ("reference", r.reference)):
            rows += [[_num(r.lam), source, *row] for row in est.to_csv_rows()]
    out["channels.csv"] = _table("estimate-channel/channels", head, rows)
    return out


def cmd_decode_compare(cfg: ScenarioConfig) -> dict[str, str]:
    from .decode import disagreement_experiment

    _, base, state = _load(cfg)
    models = _models(cfg, None)
    if len(models) != 1:
        raise ParseError("decode-compare takes exactly one noise family")
    grid = cfg.lambdas or DEFAULT_GRID
    recs = disagreement_experiment(grid, cfg.shots or 100_000, cfg.seed, circuit=base,
                                   state=state, noise_kind=models[0].kind)
    head = ["lambda", "standard_wrong_rate", "standard_wrong_rate_se", "calibrated_wrong_rate",
            "closed_form_target"]
    rows = [[_num(r.lam), _num(r.standard_wrong_rate), _num(r.standard_wrong_rate_se),
             _num(r.calibrated_wrong_rate), _num(r.closed_form_target)] for r in recs]
    return {"decode-compare.csv": _table("decode-compare", head, rows)}


def cmd_recover_generators(cfg: ScenarioConfig) -> dict[str, str]:
    from .code import load_code
    from .noisest import recover_generators
    from .states import parse_state

    code = load_code(cfg.code)
    state = parse_state(cfg.state, code)
    idx = [g - 1 for g in cfg.generators]
    if any(not 0 <= g < code.m for g in idx):
        raise ValueError(f"generators must be in 1..{code.m}")
    rows = []
    for i, lam in enumerate(_grid(cfg)):
        res = recover_generators(code, idx, _models(cfg, lam),
                                 shots=cfg.shots if cfg.sampled else None,
                                 seed=derive_seed(cfg.seed, i), state=state)
        prefix = [_num(lam)] if lam is not None else []
        rows += [prefix + [f"S{r.generator + 1}", _num(r.measured), _num(r.corrected),
                           _num(r.corrected_se), _num(r.true), _num(r.rem)] for r in res]
    head = (["lambda"] if cfg.lambdas else []) + [
        "generator", "measured", "corrected", "corrected_se", "true", "rem"]
    return {"recover-generators.csv": _table("recover-generators", head, rows)}


_DEFAULTS = {
    "calibrate": {},
    "estimate-channel": {"noise": "depolarizing2:lambda=0", "state": "codeword"},
    "decode-compare": {"noise": "z-control:lambda=0", "state": "codeword"},
    "recover-generators": {"noise": "measflip:q=0.05", "state": "zeros", "circuit": "sequential"},
}

_COMMANDS = {
    "calibrate": cmd_calibrate,
    "estimate-channel": cmd_estimate_channel,
    "decode-compare": cmd_decode_compare,
    "recover-generators": cmd_recover_generators,
}


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="syndrocal", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", help="key=value file; flags override it")
        s.add_argument("--code", help="'steane' or a code file")
        s.add_argument("--circuit", help="'sequential', 'parallel' or a circuit file")
        s.add_argument("--noise", help="e.g. 'depolarizing2:lambda=0.01+measflip:q=0.02'")
        s.add_argument("--state", help="codeword, calibration or zeros")
        s.add_argument("--lambdas", help="comma list; replaces every noise rate in turn")
        s.add_argument("--shots", type=int)
        s.add_argument("--seed", type=int)
        s.add_argument("--rounds", type=int)
        s.add_argument("--analytic", action="store_true", help="exact values even if shots are set")
        s.add_argument("--out", help="output directory (default: print to stdout)")
        if name == "recover-generators":
            s.add_argument("--generators", help="1-based generator indices, default 4,5,6")
    st = sub.add_parser("selftest")
    st.add_argument("--seed", type=int, default=0)
    return p


def _emit(files: dict[str, str], out: str | None) -> None:
    if out is None:
        sys.stdout.write("".join(files.values()))
        return
    d = Path(out)
    d.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (d / name).write_text(text)
        print(d / name)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "selftest":
        from .selftest import run_selftest

        report = run_selftest(seed=args.seed)
        print("\n".join(report.lines()))
        return 0 if report.passed else 1
    try:
        cfg = build_config(args, _DEFAULTS[args.command])
        if cfg.rounds != 2 and args.command == "calibrate":
            raise ValueError("calibration uses exactly two rounds")
        files = _COMMANDS[args.command](cfg)
    except (ParseError, ValueError, OSError) as exc:
        print(f"syndrocal {args.command}: {exc}", file=sys.stderr)
        return 2
    _emit(files, cfg.out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
