"""The ``catk`` command line: rule files in, reports and artifacts out.

Every subcommand reads plain-text documents (see :mod:`catoolkit.formats`),
runs one library call, and reports line-oriented ``key=value`` fields (or
the same content as JSON with ``--json``).  The ``run`` subcommand executes
an experiment file: an ``outdir:`` entry followed by one command per line,
``<name> key=value ...``.  Inputs named in an experiment resolve against
the output directory first (so commands can chain) and the experiment
file's directory second.  The report written to ``outdir/report.txt``
contains no timestamps; wall-clock timing goes to stderr.

Exit status: 0 when every check passes, 1 when some check fails, 2 on any
error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .core import (ABSENT, DEFAULT_BUDGET, PERIODIC, RuleTable, iterate,
                   window1d, window2d)
from .formats import (ParseError, parse_orientation, parse_path_config,
                      parse_rule_file, render_spacetime, serialize_rule,
                      serialize_path_config, serialize_trace)
from .onesided import PermutationFamily, family_to_rule, invert_up_to_radius
from .oriented import (BRANCH_ALL, BRANCH_PATTERN_VALID, ROLE_BEGIN,
                       ROLE_BEGIN_END, ROLE_END, ROLE_INVALID, ROLE_MIDDLE,
                       VARIANT_MOBIUS, VARIANT_SHIFT, VARIANT_ZOT,
                       apply_hphi, apply_path_ca, extract_paths)
from .reduction import (ReductionSpec, build_f, build_g, build_phi,
                        graph_subshift, verify_witness)
from .trace import (entropy_estimate, find_spreading_states,
                    is_nilpotent_within, trace_words)


class CommandError(Exception):
    """A command cannot run: bad arguments, missing files, bad documents."""


_MISSING = object()


class _Args:
    """String arguments of one command, taken one by one, typed on take."""

    def __init__(self, name: str, raw: dict):
        self.name = name
        self._raw = dict(raw)

    def _fail(self, message: str):
        raise CommandError(f"{self.name}: {message}")

    def take(self, key: str, default=_MISSING):
        if key in self._raw:
            return self._raw.pop(key)
        if default is _MISSING:
            self._fail(f"missing required argument '{key}'")
        return default

    def take_int(self, key: str, default=_MISSING):
        value = self.take(key, default)
        if value is None or isinstance(value, int):
            return value
        try:
            return int(value)
        except ValueError:
            self._fail(f"'{key}' must be an integer, got {value!r}")

    def take_float(self, key: str, default=_MISSING):
        value = self.take(key, default)
        if value is None or isinstance(value, float):
            return value
        try:
            return float(value)
        except ValueError:
            self._fail(f"'{key}' must be a number, got {value!r}")

    def take_choice(self, key: str, choices, default=_MISSING):
        value = self.take(key, default)
        if value not in choices:
            self._fail(f"'{key}' must be one of "
                       f"{', '.join(choices)}; got {value!r}")
        return value

    def take_yesno(self, key: str):
        value = self.take(key, None)
        if value is None:
            return None
        if value not in ("yes", "no"):
            self._fail(f"'{key}' must be 'yes' or 'no', got {value!r}")
        return value == "yes"

    def finish(self):
        for key in self._raw:
            self._fail(f"unknown argument '{key}'")


@dataclass
class _Context:
    budget: int
    seed: int
    read_text: object
    write_bytes: object
    in_experiment: bool


@dataclass
class _Result:
    """Report fields in order, an optional verdict, an optional payload."""

    fields: list
    passed: bool | None = None
    payload: bytes | None = None


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.6f}"
    if isinstance(value, bool):
        return "yes" if value else "no"
    return str(value)


def _load_rule_table(path: str, ctx: _Context) -> RuleTable:
    doc = parse_rule_file(ctx.read_text(path))
    if isinstance(doc, PermutationFamily):
        return family_to_rule(doc)
    if isinstance(doc, RuleTable):
        return doc
    raise CommandError(f"{path}: expected a rule table, found an orientation")


def _verdict(expect, actual):
    """None when informational, otherwise whether expectation is met."""
    return None if expect is None else expect == actual


def _emit(a: _Args, ctx: _Context, result: _Result, out: str | None):
    if out is not None and result.payload is not None:
        shown = ctx.write_bytes(out, result.payload)
        result.fields.append(("out", shown))
        result.payload = None
    return result


# ---------------------------------------------------------------------------
# command handlers


def _cmd_sim(a: _Args, ctx: _Context) -> _Result:
    rule = _load_rule_table(a.take("rule"), ctx)
    init = a.take("init")
    steps = a.take_int("steps")
    boundary = a.take_choice("boundary", (PERIODIC, ABSENT), PERIODIC)
    fmt = a.take_choice("fmt", ("text", "pgm"), "text")
    out = a.take("out", None)
    a.finish()
    if out is None and ctx.in_experiment:
        raise CommandError("sim: 'out' is required inside an experiment")
    window = (window2d(init.split("/"), boundary) if "/" in init
              else window1d(init, boundary))
    diagram = iterate(rule, window, steps)
    result = _Result([("steps", steps), ("rows", len(diagram.rows)),
                      ("fmt", fmt)],
                     payload=render_spacetime(diagram, fmt))
    return _emit(a, ctx, result, out)


def _cmd_trace(a: _Args, ctx: _Context) -> _Result:
    path = a.take("rule")
    rule = _load_rule_table(path, ctx)
    n = a.take_int("n")
    t = a.take_int("t")
    budget = a.take_int("budget", ctx.budget)
    expect = a.take_int("expect", None)
    out = a.take("out", None)
    a.finish()
    words = trace_words(rule, n, t, budget, rule_id=Path(path).stem)
    result = _Result([("n", n), ("t", t), ("count", len(words))],
                     passed=_verdict(expect, len(words)),
                     payload=serialize_trace(words).encode("utf-8"))
    return _emit(a, ctx, result, out)


def _cmd_entropy(a: _Args, ctx: _Context) -> _Result:
    rule = _load_rule_table(a.take("rule"), ctx)
    n = a.take_int("n")
    t = a.take_int("t")
    budget = a.take_int("budget", ctx.budget)
    expect = a.take_float("expect", None)
    tol = a.take_float("tol", 1e-9)
    a.finish()
    est = entropy_estimate(rule, n, t, budget)
    passed = None
    if expect is not None:
        passed = abs(est.estimate - expect) <= tol
    return _Result([("n", n), ("t", t),
                    ("estimate", est.estimate),
                    ("raw_quotient", est.raw_quotient),
                    ("count_t", est.count_t),
                    ("count_prev", est.count_prev)],
                   passed=passed)


def _cmd_check_reversible(a: _Args, ctx: _Context) -> _Result:
    rule = _load_rule_table(a.take("rule"), ctx)
    radius = a.take_int("radius")
    budget = a.take_int("budget", ctx.budget)
    expect = a.take_yesno("expect")
    out = a.take("out", None)
    a.finish()
    inverse = invert_up_to_radius(rule, radius, budget)
    fields = [("radius", radius), ("found", inverse is not None)]
    payload = None
    if inverse is not None:
        fields.append(("inverse_radius", inverse.radius))
        payload = serialize_rule(inverse).encode("utf-8")
    result = _Result(fields, passed=_verdict(expect, inverse is not None),
                     payload=payload)
    return _emit(a, ctx, result, out)


def _cmd_nilpotent_within(a: _Args, ctx: _Context) -> _Result:
    rule = _load_rule_table(a.take("rule"), ctx)
    n = a.take_int("n")
    q = a.take_int("q")
    budget = a.take_int("budget", ctx.budget)
    expect = a.take_yesno("expect")
    a.finish()
    nil = is_nilpotent_within(rule, n, q, budget)
    return _Result([("n", n), ("q", q), ("nilpotent", nil)],
                   passed=_verdict(expect, nil))


def _cmd_spreading(a: _Args, ctx: _Context) -> _Result:
    rule = _load_rule_table(a.take("rule"), ctx)
    expect = a.take("expect", None)
    a.finish()
    states = find_spreading_states(rule)
    text = ",".join(map(str, states)) if states else "none"
    return _Result([("spreading", text)], passed=_verdict(expect, text))


def _cmd_reduce(a: _Args, ctx: _Context) -> _Result:
    h = _load_rule_table(a.take("h"), ctx)
    q = a.take_int("q")
    k = a.take_int("k")
    n = a.take_int("n")
    budget = a.take_int("budget", ctx.budget)
    out_f = a.take("out-f")
    out_g = a.take("out-g")
    out_phi = a.take("out-phi")
    a.finish()
    spec = ReductionSpec(h, q, k, n)
    fields = [("a_states", spec.reversible_size),
              ("pair_states", spec.pair_size), ("n", n)]
    for key, rule in (("out_f", build_f(spec)), ("out_g", build_g(spec)),
                      ("out_phi", build_phi(spec, budget))):
        target = {"out_f": out_f, "out_g": out_g, "out_phi": out_phi}[key]
        fields.append((key, ctx.write_bytes(
            target, serialize_rule(rule).encode("utf-8"))))
    return _Result(fields)


def _cmd_verify_witness(a: _Args, ctx: _Context) -> _Result:
    phi = _load_rule_table(a.take("phi"), ctx)
    coupled = _load_rule_table(a.take("f"), ctx)
    inert = _load_rule_table(a.take("g"), ctx)
    radius = a.take_int("radius")
    budget = a.take_int("budget", ctx.budget)
    out = a.take("out", None)
    a.finish()
    report = verify_witness(phi, coupled, inert, radius, budget)
    fields = [("homomorphism", "pass" if report.homomorphism else "fail"),
              ("invertible", "pass" if report.invertible else "fail"),
              ("witnessed", report.witnessed),
              ("max_radius", report.max_radius)]
    # the inverse table can be huge, so it is only written on request
    payload = None
    if out is not None and report.inverse is not None:
        payload = serialize_rule(report.inverse).encode("utf-8")
    result = _Result(fields, passed=report.witnessed, payload=payload)
    return _emit(a, ctx, result, out)


def _cmd_graph_sft(a: _Args, ctx: _Context) -> _Result:
    rule = _load_rule_table(a.take("rule"), ctx)
    budget = a.take_int("budget", ctx.budget)
    out = a.take("out", None)
    a.finish()
    sft = graph_subshift(rule, budget)
    listing = "".join(
        " ".join(f"({x},{y})" for x, y in block) + "\n"
        for block in sorted(sft.forbidden))
    result = _Result([("width", sft.width), ("anchor", sft.anchor),
                      ("forbidden", len(sft.forbidden))],
                     payload=listing.encode("utf-8"))
    return _emit(a, ctx, result, out)


_ROLE_LETTER = {ROLE_INVALID: ".", ROLE_BEGIN: "b", ROLE_MIDDLE: "m",
                ROLE_END: "e", ROLE_BEGIN_END: "x"}


def _take_grid(a: _Args, ctx: _Context):
    """An a-layer grid from either a pathconfig document or inline rows."""
    config = a.take("config", None)
    grid = a.take("grid", None)
    if (config is None) == (grid is None):
        raise CommandError(
            f"{a.name}: exactly one of 'config' and 'grid' is required")
    if config is not None:
        return parse_path_config(ctx.read_text(config)).a_layer
    return tuple(tuple(int(ch) for ch in row) for row in grid.split("/"))


def _cmd_paths(a: _Args, ctx: _Context) -> _Result:
    o = parse_orientation(ctx.read_text(a.take("orient")))
    grid = _take_grid(a, ctx)
    boundary = a.take_choice("boundary", (ABSENT, PERIODIC), ABSENT)
    branching = a.take_choice("branching",
                              (BRANCH_ALL, BRANCH_PATTERN_VALID), BRANCH_ALL)
    out = a.take("out", None)
    a.finish()
    deco = extract_paths(o, grid, boundary, branching)
    height = len(grid)
    width = len(grid[0])
    lines = ["roles:"]
    lines.extend("".join(_ROLE_LETTER[deco.roles[(x, y)]]
                         for x in range(width))
                 for y in range(height))
    for path in deco.paths:
        lines.append("path: " + " ".join(f"{x},{y}" for x, y in path))
    for cycle in deco.cycles:
        lines.append("cycle: " + " ".join(f"{x},{y}" for x, y in cycle))
    result = _Result([("paths", len(deco.paths)),
                      ("cycles", len(deco.cycles)),
                      ("acyclic", deco.acyclic)],
                     payload=("\n".join(lines) + "\n").encode("utf-8"))
    return _emit(a, ctx, result, out)


def _cmd_path_ca(a: _Args, ctx: _Context) -> _Result:
    o = parse_orientation(ctx.read_text(a.take("orient")))
    cfg = parse_path_config(ctx.read_text(a.take("config")))
    variant = a.take_choice("variant",
                            (VARIANT_SHIFT, VARIANT_MOBIUS, VARIANT_ZOT))
    steps = a.take_int("steps", 1)
    boundary = a.take_choice("boundary", (ABSENT, PERIODIC), ABSENT)
    branching = a.take_choice("branching",
                              (BRANCH_ALL, BRANCH_PATTERN_VALID), BRANCH_ALL)
    out = a.take("out", None)
    a.finish()
    if steps < 0:
        raise CommandError("path-ca: 'steps' must be >= 0")
    for _ in range(steps):
        cfg = apply_path_ca(o, cfg, variant, boundary, branching)
    result = _Result([("variant", variant), ("steps", steps)],
                     payload=serialize_path_config(cfg).encode("utf-8"))
    return _emit(a, ctx, result, out)


def _cmd_hphi(a: _Args, ctx: _Context) -> _Result:
    o = parse_orientation(ctx.read_text(a.take("orient")))
    cfg = parse_path_config(ctx.read_text(a.take("config")))
    boundary = a.take_choice("boundary", (ABSENT, PERIODIC), ABSENT)
    branching = a.take_choice("branching",
                              (BRANCH_ALL, BRANCH_PATTERN_VALID), BRANCH_ALL)
    out = a.take("out", None)
    a.finish()
    folded = apply_hphi(o, cfg, boundary, branching)
    w, h = folded.shape
    result = _Result([("shape", f"{w}x{h}")],
                     payload=serialize_path_config(folded).encode("utf-8"))
    return _emit(a, ctx, result, out)


_HANDLERS = {
    "sim": _cmd_sim,
    "trace": _cmd_trace,
    "entropy": _cmd_entropy,
    "check-reversible": _cmd_check_reversible,
    "nilpotent-within": _cmd_nilpotent_within,
    "spreading": _cmd_spreading,
    "reduce": _cmd_reduce,
    "verify-witness": _cmd_verify_witness,
    "graph-sft": _cmd_graph_sft,
    "paths": _cmd_paths,
    "path-ca": _cmd_path_ca,
    "hphi": _cmd_hphi,
}


def _run_command(name: str, raw: dict, ctx: _Context) -> _Result:
    try:
        return _HANDLERS[name](_Args(name, raw), ctx)
    except CommandError:
        raise
    except (ValueError, KeyError, OSError, RuntimeError) as exc:
        raise CommandError(f"{name}: {exc}") from exc


# ---------------------------------------------------------------------------
# experiments


@dataclass(frozen=True)
class ExperimentSpec:
    """An output directory plus an ordered list of command invocations."""

    outdir: str
    commands: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "commands",
            tuple((name, dict(args)) for name, args in self.commands))
        for name, _args in self.commands:
            if name not in _HANDLERS:
                raise ValueError(f"unknown experiment command {name!r}")


def parse_experiment(text: str) -> ExperimentSpec:
    """Parse an experiment document: ``outdir:`` then one command per line."""
    outdir = None
    commands = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if outdir is None:
            key, sep, value = line.partition(":")
            if not sep or key.strip() != "outdir" or not value.strip():
                raise ParseError("first entry must be 'outdir: <path>'", no)
            outdir = value.strip()
            continue
        parts = line.split()
        name = parts[0]
        if name not in _HANDLERS:
            raise ParseError(f"unknown command {name!r}", no)
        args = {}
        for token in parts[1:]:
            key, sep, value = token.partition("=")
            if not sep or not key:
                raise ParseError(f"expected key=value, got {token!r}", no)
            if key in args:
                raise ParseError(f"duplicate argument {key!r}", no)
            args[key] = value
        commands.append((name, args))
    if outdir is None:
        raise ParseError("missing 'outdir:' entry")
    return ExperimentSpec(outdir, tuple(commands))


def serialize_experiment(spec: ExperimentSpec) -> str:
    lines = [f"outdir: {spec.outdir}"]
    for name, args in spec.commands:
        lines.append(" ".join([name] + [f"{k}={v}" for k, v in args.items()]))
    return "\n".join(lines) + "\n"


def run_experiment(spec: ExperimentSpec, base_dir,
                   budget: int = DEFAULT_BUDGET, seed: int = 0):
    """Execute an experiment; return ``(report_text, all_passed, results)``.

    Artifacts and ``report.txt`` land in the spec's output directory,
    resolved against ``base_dir``.  Inputs resolve against the output
    directory first and ``base_dir`` second, so commands can consume each
    other's artifacts.  The report carries no timestamps; per-command
    timing is printed to stderr.
    """
    base = Path(base_dir)
    outdir = Path(spec.outdir)
    if not outdir.is_absolute():
        outdir = base / outdir
    outdir.mkdir(parents=True, exist_ok=True)

    def read_text(path):
        p = Path(path)
        candidates = [p] if p.is_absolute() else [outdir / p, base / p]
        for candidate in candidates:
            if candidate.is_file():
                return candidate.read_text(encoding="utf-8")
        raise CommandError(f"input file not found: {path}")

    def write_bytes(path, data):
        p = Path(path)
        target = p if p.is_absolute() else outdir / p
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(data)
        return str(path)

    ctx = _Context(budget, seed, read_text, write_bytes, True)
    lines = []
    results = []
    all_passed = True
    for name, raw in spec.commands:
        started = time.perf_counter()
        result = _run_command(name, raw, ctx)
        print(f"timing {name} "
              f"{(time.perf_counter() - started) * 1000.0:.1f}ms",
              file=sys.stderr)
        line = " ".join([name] + [f"{k}={_fmt(v)}"
                                  for k, v in result.fields])
        if result.passed is not None:
            line += f" status={'pass' if result.passed else 'fail'}"
            all_passed = all_passed and result.passed
        lines.append(line)
        results.append((name, result))
    report = "".join(line + "\n" for line in lines)
    (outdir / "report.txt").write_text(report, encoding="utf-8")
    return report, all_passed, results


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catk",
        description="Rule-table cellular automata: simulation, trace "
                    "enumeration, entropy estimates, reversibility, "
                    "two-track reductions, and oriented path automata.")
    parser.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="cap on enumerated candidates for exhaustive "
                             "searches (default %(default)s)")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for randomized helpers (accepted for "
                             "interface stability; current commands are "
                             "deterministic)")
    parser.add_argument("--json", action="store_true",
                        help="emit the report fields as JSON")
    parser.add_argument("--out", help="write the command's artifact here")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, *flags, positional=None):
        p = sub.add_parser(name, help=help_text)
        if positional:
            p.add_argument(positional)
        for flag, required in flags:
            p.add_argument(f"--{flag}", required=required,
                           default=argparse.SUPPRESS)
        return p

    add("sim", "iterate a rule on a finite window and render the orbit",
        ("rule", True), ("init", True), ("steps", True),
        ("boundary", False), ("fmt", False))
    add("trace", "enumerate the width-n trace words of length t",
        ("rule", True), ("n", True), ("t", True), ("expect", False))
    add("entropy", "two-step entropy estimate from exact trace counts",
        ("rule", True), ("n", True), ("t", True),
        ("expect", False), ("tol", False))
    add("check-reversible", "search for an inverse rule up to a radius",
        ("rule", True), ("radius", True), ("expect", False))
    add("nilpotent-within", "does the n-th iterate send everything to q",
        ("rule", True), ("n", True), ("q", True), ("expect", False))
    add("spreading", "list the spreading states of a rule",
        ("rule", True), ("expect", False))
    add("reduce", "build the coupled/inert pair and its witness map",
        ("h", True), ("q", True), ("k", True), ("n", True),
        ("out-f", True), ("out-g", True), ("out-phi", True))
    add("verify-witness", "check a witness map: intertwining + invertible",
        ("phi", True), ("f", True), ("g", True), ("radius", True))
    add("graph-sft", "forbidden blocks of the orbit-graph subshift",
        ("rule", True))
    add("paths", "classify cells and extract oriented paths",
        ("orient", True), ("config", False), ("grid", False),
        ("boundary", False), ("branching", False))
    add("path-ca", "step a path automaton on the data layer",
        ("orient", True), ("config", True), ("variant", True),
        ("steps", False), ("boundary", False), ("branching", False))
    add("hphi", "re-block every path's loop tape in place",
        ("orient", True), ("config", True),
        ("boundary", False), ("branching", False))
    add("run", "execute an experiment file", positional="experiment")
    return parser


def _print_result(name: str, result: _Result, json_mode: bool) -> None:
    if json_mode:
        obj = {"command": name}
        obj.update((k, _fmt(v)) for k, v in result.fields)
        if result.passed is not None:
            obj["status"] = "pass" if result.passed else "fail"
        if result.payload is not None:
            obj["output"] = result.payload.decode("utf-8", "replace")
        print(json.dumps(obj))
        return
    line = " ".join([name] + [f"{k}={_fmt(v)}" for k, v in result.fields])
    if result.passed is not None:
        line += f" status={'pass' if result.passed else 'fail'}"
    print(line)
    if result.payload is not None:
        sys.stdout.write(result.payload.decode("utf-8", "replace"))


def _run_cli_experiment(path: str, budget: int, seed: int,
                        json_mode: bool) -> int:
    source = Path(path)
    if not source.is_file():
        raise CommandError(f"experiment file not found: {path}")
    spec = parse_experiment(source.read_text(encoding="utf-8"))
    report, all_passed, results = run_experiment(
        spec, source.parent, budget, seed)
    if json_mode:
        obj = {"commands": [], "overall": "pass" if all_passed else "fail"}
        for name, result in results:
            entry = {"command": name}
            entry.update((k, _fmt(v)) for k, v in result.fields)
            if result.passed is not None:
                entry["status"] = "pass" if result.passed else "fail"
            obj["commands"].append(entry)
        print(json.dumps(obj))
    else:
        sys.stdout.write(report)
    return 0 if all_passed else 1


def main(argv=None) -> int:
    params = vars(_build_parser().parse_args(argv))
    name = params.pop("command")
    budget = params.pop("budget")
    seed = params.pop("seed")
    json_mode = params.pop("json")
    out = params.pop("out", None)

    try:
        if name == "run":
            return _run_cli_experiment(params["experiment"], budget, seed,
                                       json_mode)
        raw = {key.replace("_", "-"): value for key, value in params.items()}
        if out is not None:
            raw["out"] = out

        def read_text(path):
            p = Path(path)
            if not p.is_file():
                raise CommandError(f"input file not found: {path}")
            return p.read_text(encoding="utf-8")

        def write_bytes(path, data):
            p = Path(path)
            if p.parent != Path("."):
                p.parent.mkdir(parents=True, exist_ok=True)
            p.write_bytes(data)
            return str(path)

        ctx = _Context(budget, seed, read_text, write_bytes, False)
        result = _run_command(name, raw, ctx)
    except (CommandError, ParseError) as exc:
        print(f"error: command={name} message={exc}", file=sys.stderr)
        return 2
    _print_result(name, result, json_mode)
    return 1 if result.passed is False else 0


if __name__ == "__main__":
    sys.exit(main())
