"""Batch experiments: elimination growth on QBF corpora and minimal device sizes for machines.

Both experiments are pure functions of their configuration.  Instances are
processed independently (optionally in worker processes) and merged back in
id order, so the written bytes do not depend on ``jobs``.
"""
from __future__ import annotations

import csv
import glob
import io
import json
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Callable, Sequence

from .boolfn import CYCLE_SELECTION_CAP, EXACT_ARITY_CAP, CapExceeded, TruthTable, best_cover_with_cycles, minimize
from .chain import (Budget, TruthTableClass, augment_with_cycles, check_all, decide_via_device,
                    find_device, reachable_set, spurious_cycles)
from .configs import (ACCEPT, CounterSpace, EnumerationLimitExceeded, MachineSpace, SpaceBound,
                      simulate_space)
from .elim import (CSV_COLUMNS, DEFAULT_MAX_CLAUSES, CorpusItem, condition_b_report, loglog_fit,
                   report_csv_rows, run_instance)
from .fixtures import inputs_of_length, load_machine
from .oracles import QBF_VAR_CAP, qbf_brute_force
from .qbf import EXISTS, parse_qdimacs, random_qbf
from .rng import SplitMix64
from .turing import loopback_transform

EXPERIMENTS = ("b-growth", "aprime-minrep")
VARIANTS = ("none", "counter", "loopback")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    experiment: str = "b-growth"
    seed: int | None = None
    out: str = "out"
    format: str = "both"
    jobs: int = 1
    verify: bool = False
    # b-growth
    vars: tuple[int, ...] = (4, 6, 8)
    clauses: int | None = None
    clause_ratio: float = 2.0
    width: int = 3
    alternation: str = "strict"
    count: int = 10
    level: str = "L1"
    max_clauses: int = DEFAULT_MAX_CLAUSES
    corpus: str | None = None
    # aprime-minrep
    machines: tuple[str, ...] = ("fixture:m1",)
    n_min: int = 1
    n_max: int = 1
    inputs: tuple[str, ...] | None = None
    space_slack: int = 0
    variant: str = "none"
    cycles: str = "exhaustive"
    cycle_cap: int = CYCLE_SELECTION_CAP
    exact_cap: int = EXACT_ARITY_CAP
    find_device: bool = False
    max_bits: int = 16
    budget: int | None = None
    max_configs: int = 1 << 12

    def validate(self) -> "ExperimentConfig":
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"experiment must be one of {EXPERIMENTS}")
        if self.format not in ("csv", "json", "both"):
            raise ConfigError("format must be csv, json or both")
        for name in ("jobs", "count", "max_clauses", "width", "cycle_cap", "exact_cap", "max_bits",
                     "max_configs"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.budget is not None and self.budget <= 0:
            raise ConfigError("budget must be positive")
        if self.experiment == "b-growth" and self.corpus is None and self.seed is None:
            raise ConfigError("a seed is required for generated corpora")
        if self.variant not in VARIANTS:
            raise ConfigError(f"variant must be one of {VARIANTS}")
        if self.cycles not in ("exhaustive", "greedy"):
            raise ConfigError("cycles must be exhaustive or greedy")
        if self.n_min < 0 or self.n_max < self.n_min:
            raise ConfigError("need 0 <= n_min <= n_max")
        return self


def _coerce(name: str, raw, default):
    kind = {f.name: f.type for f in fields(ExperimentConfig)}[name]
    if raw is None:
        return None
    if isinstance(raw, str):
        text = raw.strip()
    else:
        return raw
    if "tuple[int" in kind:
        return tuple(int(v) for v in text.split(",") if v.strip())
    if "tuple[str" in kind:
        return tuple(v.strip() for v in text.split(",")) if text else ()
    if kind.startswith("bool"):
        if text.lower() in ("1", "true", "yes", "on"):
            return True
        if text.lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{name}: expected a boolean, got {text!r}")
    if kind.startswith("int"):
        return None if text.lower() == "none" else int(text)
    if kind.startswith("float"):
        return float(text)
    return None if text.lower() == "none" and "None" in kind else text


def parse_config_text(text: str) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment; dashes in keys read as underscores."""
    known = {f.name for f in fields(ExperimentConfig)}
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected key = value")
        key = key.strip().replace("-", "_")
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        out[key] = value.strip()
    return out


def build_config(file_values: dict | None = None, overrides: dict | None = None) -> ExperimentConfig:
    """Config from file values, then flag overrides (``None`` means not given)."""
    cfg = ExperimentConfig()
    for source in (file_values or {}, overrides or {}):
        for key, raw in source.items():
            if raw is None:
                continue
            try:
                setattr(cfg, key, _coerce(key, raw, getattr(cfg, key)))
            except ValueError as exc:
                if isinstance(exc, ConfigError):
                    raise
                raise ConfigError(f"{key}: {exc}") from None
    return cfg.validate()


def load_config(path: str | None, overrides: dict | None = None) -> ExperimentConfig:
    values = parse_config_text(Path(path).read_text()) if path else {}
    return build_config(values, overrides)


# ---- output -----------------------------------------------------------------------

def write_atomic(path: Path, data: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if v is None else v for v in row])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _map(fn: Callable, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


# ---- condition B growth --------------------------------------------------------------

def instance_seeds(seed: int, count: int) -> list[int]:
    rng = SplitMix64(seed)
    return [rng.next_u64() for _ in range(count)]


def b_corpus(cfg: ExperimentConfig) -> list[CorpusItem]:
    if cfg.corpus:
        paths = sorted(glob.glob(cfg.corpus))
        if not paths:
            raise ConfigError(f"corpus pattern {cfg.corpus!r} matched no files")
        return [CorpusItem(Path(p).stem, parse_qdimacs(Path(p).read_text())) for p in paths]
    items = []
    for n in cfg.vars:
        n_clauses = cfg.clauses if cfg.clauses is not None else max(1, round(cfg.clause_ratio * n))
        for i, s in enumerate(instance_seeds(cfg.seed + n, cfg.count)):
            q = random_qbf(n, n_clauses, min(cfg.width, n), cfg.alternation, s, EXISTS)
            items.append(CorpusItem(f"b-{n:03d}-{i:04d}", q, s, cfg.alternation))
    return items


def _b_task(args):
    item, level, max_clauses = args
    return run_instance(item, level, max_clauses)


def experiment_b(cfg: ExperimentConfig, write: bool = True) -> dict:
    corpus = b_corpus(cfg)
    rows = _map(_b_task, [(it, cfg.level, cfg.max_clauses) for it in corpus], cfg.jobs)
    report = condition_b_report(corpus, cfg.level, cfg.max_clauses, rows=rows)
    if cfg.verify:
        mismatches = []
        for inst, item in zip(report["instances"], corpus):
            if inst["verdict"] is None or len(item.qbf.prefix) > QBF_VAR_CAP:
                inst["oracle_verdict"] = None
                continue
            truth = "T" if qbf_brute_force(item.qbf) else "F"
            inst["oracle_verdict"] = truth
            if truth != inst["verdict"]:
                mismatches.append(inst["instance_id"])
        report["aggregate"]["verify_mismatches"] = mismatches
    if write:
        out = Path(cfg.out)
        if cfg.format in ("csv", "both"):
            write_atomic(out / "b_report.csv", _csv_text(CSV_COLUMNS, report_csv_rows(report)))
        if cfg.format in ("json", "both"):
            write_atomic(out / "b_report.json", _json_text(report))
    return report


# ---- condition A' device sizes ---------------------------------------------------------

@dataclass
class AprimeRecord:
    machine: str
    input: str
    n: int
    T: int
    variant: str
    W: int
    valid_configs: int
    verdict: str
    reachable: int
    extensional_terms: int
    exact_terms: int | None = None
    exact_literals: int | None = None
    greedy_terms: int | None = None
    spurious_cycles: int | None = None
    augmented_terms: int | None = None
    augmented_literals: int | None = None
    cycles_selected: int | None = None
    search: str = "skipped"
    oracle_calls: int | None = None
    encoding_length: int | None = None
    verified: bool | None = None
    notes: list[str] = field(default_factory=list)


APRIME_COLUMNS = tuple(f.name for f in fields(AprimeRecord))


def build_space(machine, x: str, T: int, variant: str):
    if variant == "loopback":
        return MachineSpace(loopback_transform(machine, x), SpaceBound(T))
    base = MachineSpace(machine, SpaceBound(T))
    return CounterSpace(base) if variant == "counter" else base


def aprime_cases(cfg: ExperimentConfig) -> list[tuple[str, str, int]]:
    cases = []
    for ref in cfg.machines:
        m = load_machine(ref)
        if cfg.inputs is not None:
            xs = list(cfg.inputs)
        else:
            xs = [x for n in range(cfg.n_min, cfg.n_max + 1) for x in inputs_of_length(m, n)]
        for x in xs:
            cases.append((ref, x, max(1, len(x) + cfg.space_slack)))
    return cases


def aprime_record(cfg: ExperimentConfig, ref: str, x: str, T: int) -> AprimeRecord:
    m = load_machine(ref)
    space = build_space(m, x, T, cfg.variant)
    outcome = simulate_space(space, space.initial(x))
    verdict = "accept" if outcome.verdict == ACCEPT else "reject"
    reach = reachable_set(space, x)
    rec = AprimeRecord(ref, x, len(x), T, cfg.variant, space.width, space.count(), verdict,
                       len(reach), len(reach))
    if space.width > cfg.exact_cap:
        rec.notes.append(f"width {space.width} above minimization cap {cfg.exact_cap}")
        return rec
    table = TruthTable.from_points(space.width, reach)
    exact = minimize(table, "exact", cap=cfg.exact_cap)
    rec.exact_terms, rec.exact_literals = exact.term_count, exact.literal_count
    rec.greedy_terms = minimize(table, "greedy").term_count
    if space.count() > cfg.max_configs:
        rec.notes.append(f"{space.count()} configurations above enumeration limit {cfg.max_configs}")
        return rec
    cycles = spurious_cycles(space, x, cfg.max_configs)
    rec.spurious_cycles = len(cycles)
    search = "exhaustive" if cfg.cycles == "exhaustive" and len(cycles) <= cfg.cycle_cap else "greedy"
    if search != cfg.cycles:
        rec.notes.append(f"{len(cycles)} cycles above selection cap; greedy selection used")
    try:
        selection, cover = best_cover_with_cycles(table, cycles, "exact", search, cfg.cycle_cap)
    except CapExceeded as exc:
        rec.notes.append(str(exc))
        return rec
    rec.augmented_terms, rec.augmented_literals = cover.term_count, cover.literal_count
    rec.cycles_selected = len(selection)
    P = cfg.budget if cfg.budget is not None else space.width
    if cfg.verify:
        device = augment_with_cycles(space, reach, [cycles[i] for i in selection])
        passed = check_all(space, x, device, P, cfg.max_configs).passed
        same = decide_via_device(space, device, P) == verdict
        rec.verified = passed and same and cover.to_table() == device.to_table()
    if cfg.find_device:
        cls = TruthTableClass(space)
        if cls.encoding_length > cfg.max_bits:
            rec.search = "limit"
            rec.notes.append(f"truth-table encoding of {cls.encoding_length} bits above max_bits {cfg.max_bits}")
        else:
            res = find_device(space, x, Budget(P, cfg.max_bits), cls)
            rec.search = "found" if res.device is not None else "none"
            rec.oracle_calls, rec.encoding_length = res.oracle_calls, res.encoding_length
    return rec


def _aprime_task(args):
    cfg, case = args
    try:
        return aprime_record(cfg, *case)
    except EnumerationLimitExceeded as exc:
        ref, x, T = case
        return AprimeRecord(ref, x, len(x), T, cfg.variant, 0, 0, "unknown", 0, 0, notes=[str(exc)])


def growth_summary(records: Sequence[AprimeRecord]) -> list[dict]:
    groups: dict[tuple[str, int], list[AprimeRecord]] = {}
    for r in records:
        groups.setdefault((r.machine, r.n), []).append(r)
    out = []
    for (machine, n), rs in sorted(groups.items()):
        exact = [r.exact_terms for r in rs if r.exact_terms is not None]
        aug = [r.augmented_terms for r in rs if r.augmented_terms is not None]
        out.append({
            "machine": machine, "n": n, "records": len(rs),
            "max_reachable": max(r.reachable for r in rs),
            "max_exact_terms": max(exact) if exact else None,
            "max_augmented_terms": max(aug) if aug else None,
        })
    return out


def experiment_aprime(cfg: ExperimentConfig, write: bool = True) -> dict:
    cases = aprime_cases(cfg)
    records = _map(_aprime_task, [(cfg, c) for c in cases], cfg.jobs)
    summary = growth_summary(records)
    fits = {}
    for machine in sorted({s["machine"] for s in summary}):
        pts = [(s["n"], s["max_exact_terms"]) for s in summary
               if s["machine"] == machine and s["max_exact_terms"]]
        fit = loglog_fit([p[0] for p in pts], [p[1] for p in pts])
        fits[machine] = None if fit is None else {"slope": fit[0], "intercept": fit[1], "residual": fit[2]}
    report = {
        "records": [asdict(r) for r in records],
        "growth": summary,
        "fits": fits,
        "aggregate": {
            "records": len(records),
            "verify_failures": [f"{r.machine}:{r.input}" for r in records if r.verified is False],
        },
    }
    if write:
        out = Path(cfg.out)
        if cfg.format in ("csv", "both"):
            rows = ([(";".join(v) if isinstance(v, list) else v) for v in
                     (getattr(r, c) for c in APRIME_COLUMNS)] for r in records)
            write_atomic(out / "aprime_report.csv", _csv_text(APRIME_COLUMNS, rows))
        if cfg.format in ("json", "both"):
            write_atomic(out / "aprime_report.json", _json_text(report))
    return report


def run_experiment(cfg: ExperimentConfig, write: bool = True) -> dict:
    return experiment_b(cfg, write) if cfg.experiment == "b-growth" else experiment_aprime(cfg, write)
