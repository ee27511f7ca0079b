"""Command-line entry point: ``chainbench qbf ...`` and ``chainbench tm ...``.

Exit status is 0 on success, 1 on a domain or input error and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import boolfn, chain, configs, devices, elim, harness, qbf
from .oracles import qbf_brute_force
from .fixtures import inputs_of_length, load_machine


class DomainError(Exception):
    pass


def _global(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("global options")
    g.add_argument("--out", default=None, help="output directory or file")
    g.add_argument("--format", choices=("csv", "json", "both"), default=None)
    g.add_argument("--jobs", type=int, default=None)
    g.add_argument("--verify", action="store_true", default=None)
    g.add_argument("--seed", type=int, default=None)


def _machine_args(p: argparse.ArgumentParser, space: bool = True) -> None:
    p.add_argument("machine", help="machine file, or fixture:NAME")
    p.add_argument("--input", default="", help="input string (one character per symbol)")
    if space:
        p.add_argument("--space", type=int, default=None, help="tape cells T (default: input length, at least 1)")
    p.add_argument("--variant", choices=harness.VARIANTS, default="none")


def build_parser() -> argparse.ArgumentParser:
    root = argparse.ArgumentParser(prog="chainbench", description="QBF elimination and machine chain experiments")
    top = root.add_subparsers(dest="area", required=True)

    q = top.add_parser("qbf", help="QBF tools").add_subparsers(dest="cmd", required=True)
    p = q.add_parser("eval", help="evaluate a QDIMACS file by quantifier elimination")
    p.add_argument("file")
    p.add_argument("--level", choices=elim.LEVELS, default="L1")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--max-clauses", type=int, default=elim.DEFAULT_MAX_CLAUSES)
    _global(p)
    p = q.add_parser("gen", help="write seeded random QDIMACS instances")
    p.add_argument("--vars", type=int, required=True)
    p.add_argument("--clauses", type=int, required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--alternation", default="strict")
    p.add_argument("--count", type=int, default=1)
    _global(p)
    p = q.add_parser("experiment-b", help="elimination size growth over a corpus")
    p.add_argument("--config")
    p.add_argument("--vars", help="comma-separated variable counts")
    p.add_argument("--clauses", type=int)
    p.add_argument("--clause-ratio", type=float)
    p.add_argument("--width", type=int)
    p.add_argument("--alternation")
    p.add_argument("--count", type=int)
    p.add_argument("--level", choices=elim.LEVELS)
    p.add_argument("--max-clauses", type=int)
    p.add_argument("--corpus", help="glob of QDIMACS files instead of generated instances")
    _global(p)

    t = top.add_parser("tm", help="Turing machine and device tools").add_subparsers(dest="cmd", required=True)
    p = t.add_parser("simulate", help="run a machine on one input")
    _machine_args(p)
    p.add_argument("--step-cap", type=int, default=None)
    p.add_argument("--trace", action="store_true")
    _global(p)
    p = t.add_parser("reach", help="list configurations reachable from the input")
    _machine_args(p)
    p.add_argument("--step-cap", type=int, default=None)
    _global(p)
    p = t.add_parser("chained", help="check a device against the configuration graph")
    _machine_args(p)
    p.add_argument("--device", default="exact", help="exact | tt:FILE | cover:FILE")
    p.add_argument("--budget", type=int, default=None, help="step budget P (default: width)")
    _global(p)
    p = t.add_parser("cycles", help="list spurious cycles")
    _machine_args(p)
    _global(p)
    p = t.add_parser("minrep", help="minimal two-level size of the reachable indicator")
    _machine_args(p)
    p.add_argument("--cycles", choices=("exhaustive", "greedy"), default="exhaustive")
    _global(p)
    p = t.add_parser("find-device", help="binary search for the least passing truth-table device")
    _machine_args(p)
    p.add_argument("--max-bits", type=int, required=True)
    p.add_argument("--budget", type=int, required=True)
    _global(p)
    p = t.add_parser("all-inputs", help="run the all-inputs view and list its marker phases")
    p.add_argument("machine")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--start", default=None)
    p.add_argument("--last", default=None)
    p.add_argument("--space", type=int, default=None)
    _global(p)
    p = t.add_parser("experiment-aprime", help="device-size study over machines and inputs")
    p.add_argument("--config")
    p.add_argument("--machines", help="comma-separated machine references")
    p.add_argument("--n-min", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--inputs")
    p.add_argument("--space-slack", type=int)
    p.add_argument("--variant", choices=harness.VARIANTS)
    p.add_argument("--cycles", choices=("exhaustive", "greedy"))
    p.add_argument("--find-device", action="store_true", default=None)
    p.add_argument("--max-bits", type=int)
    p.add_argument("--budget", type=int)
    _global(p)
    return root


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        out = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        out = text if text.endswith("\n") else text + "\n"
    if args.out:
        harness.write_atomic(Path(args.out), out)
    else:
        sys.stdout.write(out)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror or exc}") from None


# ---- qbf -----------------------------------------------------------------------------

def cmd_qbf_eval(args) -> int:
    formula = qbf.parse_qdimacs(_read(args.file))
    try:
        trace = elim.evaluate_qbf(formula, args.level, args.max_clauses)
    except elim.ResourceCapExceeded as exc:
        raise DomainError(str(exc)) from None
    verdict = "T" if trace.verdict else "F"
    lines = [f"verdict: {verdict}", f"steps: {len(trace.steps)}",
             f"max_literals: {max(trace.sizes(), default=0)}", f"early_exit: {trace.early_exit}"]
    if args.trace:
        lines.append("step quantifier variable clauses_after_elim lits_after_elim clauses lits")
        for s in trace.steps:
            lines.append(f"{s.index} {s.quantifier} {s.variable} {s.after_elim.clauses} "
                         f"{s.after_elim.literals} {s.after_simp.clauses} {s.after_simp.literals}")
    payload = {"verdict": verdict, "sizes": trace.sizes(), "early_exit": trace.early_exit}
    if args.verify:
        truth = "T" if qbf_brute_force(formula) else "F"
        payload["oracle_verdict"] = truth
        lines.append(f"oracle: {truth}")
        if truth != verdict:
            _emit(args, payload, "\n".join(lines))
            raise DomainError("verdict disagrees with the brute-force oracle")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_qbf_gen(args) -> int:
    seed = 0 if args.seed is None else args.seed
    out = Path(args.out or ".")
    names = []
    for i, s in enumerate(harness.instance_seeds(seed, args.count)):
        formula = qbf.random_qbf(args.vars, args.clauses, args.width, args.alternation, s)
        name = f"gen-{i:04d}.qdimacs"
        comments = [f"vars={args.vars} clauses={args.clauses} width={args.width} "
                    f"alternation={args.alternation} seed={s}"]
        harness.write_atomic(out / name, qbf.emit_qdimacs(formula, comments))
        names.append(name)
    sys.stdout.write("\n".join(str(out / n) for n in names) + "\n")
    return 0


def _experiment(args, experiment: str, keys: tuple[str, ...]) -> int:
    overrides = {k: getattr(args, k, None) for k in keys}
    overrides.update(experiment=experiment, out=args.out, format=args.format, jobs=args.jobs,
                     verify=args.verify, seed=args.seed)
    try:
        cfg = harness.load_config(args.config, overrides)
    except OSError as exc:
        raise DomainError(f"cannot read config: {exc}") from None
    if cfg.experiment != experiment:
        raise DomainError(f"config is for experiment {cfg.experiment!r}")
    report = harness.run_experiment(cfg)
    agg = report["aggregate"]
    sys.stdout.write(json.dumps(agg, sort_keys=True) + "\n")
    bad = agg.get("verify_mismatches") or agg.get("verify_failures")
    if bad:
        raise DomainError(f"verification failed for {len(bad)} instance(s)")
    return 0


def cmd_experiment_b(args) -> int:
    return _experiment(args, "b-growth", ("vars", "clauses", "clause_ratio", "width", "alternation",
                                          "count", "level", "max_clauses", "corpus"))


def cmd_experiment_aprime(args) -> int:
    return _experiment(args, "aprime-minrep", ("machines", "n_min", "n_max", "inputs", "space_slack",
                                               "variant", "cycles", "find_device", "max_bits", "budget"))


# ---- tm ------------------------------------------------------------------------------

def _space(args):
    try:
        m = load_machine(args.machine)
    except OSError as exc:
        raise DomainError(f"cannot read {args.machine}: {exc.strerror or exc}") from None
    except KeyError as exc:
        raise DomainError(str(exc.args[0])) from None
    T = args.space if args.space is not None else max(1, len(args.input))
    return m, harness.build_space(m, args.input, T, args.variant)


def cmd_simulate(args) -> int:
    m, space = _space(args)
    out = configs.simulate_space(space, space.initial(args.input), args.step_cap, args.trace)
    lines = [f"verdict: {out.verdict}", f"steps: {out.steps_used}", f"final: {out.final}"]
    if args.trace:
        lines += [f"  {c}  {space.describe(c)}" for c in out.trace]
    _emit(args, {"verdict": out.verdict, "steps": out.steps_used, "final": out.final,
                 "trace": list(out.trace) if out.trace else None}, "\n".join(lines))
    return 0


def cmd_reach(args) -> int:
    _, space = _space(args)
    reach = sorted(chain.reachable_set(space, args.input, args.step_cap))
    lines = [f"reachable: {len(reach)}"] + [f"  {c}  {space.describe(c)}" for c in reach]
    _emit(args, {"reachable": reach}, "\n".join(lines))
    return 0


def _device(args, space):
    spec = args.device
    if spec == "exact":
        return chain.exact_indicator(space, args.input)
    kind, sep, path = spec.partition(":")
    if not sep or kind not in ("tt", "cover"):
        raise DomainError(f"unknown device {spec!r}; use exact, tt:FILE or cover:FILE")
    try:
        return devices.load_device_file(kind, _read(path), space.configurations(), space.width)
    except ValueError as exc:
        raise DomainError(f"{path}: {exc}") from None


def cmd_chained(args) -> int:
    _, space = _space(args)
    f = _device(args, space)
    P = args.budget if args.budget is not None else space.width
    rep = chain.check_all(space, args.input, f, P)
    lines = [f"pass: {rep.passed}", f"configs_checked: {rep.configs_checked}"]
    payload = {"pass": rep.passed, "witness": rep.witness, "configs_checked": rep.configs_checked}
    if rep.witness:
        lines.append(f"witness: {rep.witness}  {space.describe(rep.witness)}")
    try:
        decision = chain.decide_via_device(space, f, P)
    except chain.DeviceBudgetExceeded as exc:
        raise DomainError(str(exc)) from None
    lines.append(f"decision: {decision}")
    payload["decision"] = decision
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_cycles(args) -> int:
    _, space = _space(args)
    cycles = chain.spurious_cycles(space, args.input)
    lines = [f"spurious_cycles: {len(cycles)}"] + ["  " + " -> ".join(c) for c in cycles]
    _emit(args, {"cycles": cycles}, "\n".join(lines))
    return 0


def cmd_minrep(args) -> int:
    _, space = _space(args)
    reach = chain.reachable_set(space, args.input)
    table = boolfn.TruthTable.from_points(space.width, reach)
    exact = boolfn.minimize(table, "exact")
    greedy = boolfn.minimize(table, "greedy")
    cycles = chain.spurious_cycles(space, args.input)
    search = args.cycles if len(cycles) <= boolfn.CYCLE_SELECTION_CAP else "greedy"
    sel, best = boolfn.best_cover_with_cycles(table, cycles, "exact", search)
    payload = {"reachable": len(reach), "extensional_terms": len(reach), "exact_terms": exact.term_count,
               "exact_literals": exact.literal_count, "greedy_terms": greedy.term_count,
               "spurious_cycles": len(cycles), "cycles_selected": list(sel),
               "augmented_terms": best.term_count, "augmented_literals": best.literal_count,
               "augmented_cover": [str(c) for c in best]}
    lines = [f"{k}: {v}" for k, v in payload.items() if k != "augmented_cover"]
    lines.append("augmented cover:")
    lines += ["  " + ln for ln in boolfn.format_cover(best).splitlines()]
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_find_device(args) -> int:
    _, space = _space(args)
    cls = chain.TruthTableClass(space)
    res = chain.find_device(space, args.input, chain.Budget(args.budget, args.max_bits), cls)
    outcome = "found" if res.device is not None else "none"
    lines = [f"outcome: {outcome}", f"oracle_calls: {res.oracle_calls}",
             f"encoding_length: {res.encoding_length}"]
    if res.device is not None:
        lines.append(f"encoding: {res.encoding}")
    _emit(args, {"outcome": outcome, "encoding": res.encoding, "oracle_calls": res.oracle_calls,
                 "encoding_length": res.encoding_length}, "\n".join(lines))
    return 0


def cmd_all_inputs(args) -> int:
    try:
        m = load_machine(args.machine)
    except OSError as exc:
        raise DomainError(f"cannot read {args.machine}: {exc.strerror or exc}") from None
    xs = inputs_of_length(m, args.n)
    view = configs.all_inputs_machine(m, args.n, args.start if args.start is not None else xs[0],
                                      args.last if args.last is not None else xs[-1], args.space)
    marks = view.markers()
    lines = [f"width: {view.width}"] + [f"{x or '(empty)'} {v}" for x, v in marks]
    _emit(args, {"width": view.width, "markers": [list(mv) for mv in marks]}, "\n".join(lines))
    return 0


HANDLERS = {
    ("qbf", "eval"): cmd_qbf_eval,
    ("qbf", "gen"): cmd_qbf_gen,
    ("qbf", "experiment-b"): cmd_experiment_b,
    ("tm", "simulate"): cmd_simulate,
    ("tm", "reach"): cmd_reach,
    ("tm", "chained"): cmd_chained,
    ("tm", "cycles"): cmd_cycles,
    ("tm", "minrep"): cmd_minrep,
    ("tm", "find-device"): cmd_find_device,
    ("tm", "all-inputs"): cmd_all_inputs,
    ("tm", "experiment-aprime"): cmd_experiment_aprime,
}

DOMAIN_ERRORS = (DomainError, OSError, ValueError, RuntimeError, KeyError)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return HANDLERS[(args.area, args.cmd)](args)
    except DOMAIN_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        sys.stderr.write(f"error: {msg}\n")
        return 1


def main() -> None:
    sys.exit(run())
