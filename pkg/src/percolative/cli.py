"""Command-line experiment driver.

Settings come from an optional INI file (sections ``[model]``, ``[graph]``,
``[run]``) overridden by explicit flags.  Each run prints or writes one JSON
result record; ``--csv`` adds a flat series with columns
``n, r, value, stderr, samples, seed``.  Timestamps, worker counts and output
paths live in the record's ``runtime`` block so that everything else is a
deterministic function of the settings and the seed.

Exit codes: 0 success, 2 usage, 3 graph generation failure, 4 computational
infeasibility (budget exceeded, zero mass, no tree-like vertex, ...).
"""
from __future__ import annotations

import argparse
import configparser
import csv
import datetime as _dt
import hashlib
import io
import json
import math
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .errors import (
    BudgetExceeded,
    GenerationFailure,
    InfeasibleInit,
    NotTreeLike,
    ZeroMass,
    ZeroPartition,
)
from .exact_gibbs import DEFAULT_BUDGET, build, log_partition_and_entropy, percolation_identity_rhs
from .group_tree import parity_from_degree
from .interaction import (
    coloring_constant,
    coloring_threshold,
    hardcore_threshold,
    parse_model_config,
)
from .labeled_graph import format_graph, load_graph, random_graph, tree_like_fraction
from .tree_engine import FREE, ExtremalAllState
from .estimators import (
    dobrushin_alpha,
    lw_diagnostic,
    percolative_entropy,
    specific_entropy_truncated,
    ssm_profile,
)

EXIT_USAGE, EXIT_GENERATION, EXIT_INFEASIBLE = 2, 3, 4
INFEASIBLE = (BudgetExceeded, ZeroMass, ZeroPartition, NotTreeLike, InfeasibleInit)

MODEL_KEYS = ("model", "beta", "lambda", "q", "field")
GRAPH_KEYS = ("parity", "d", "n", "sizes", "graphs_per_size", "file")
RUN_KEYS = ("seed", "radii", "r", "r_max", "samples", "orderings", "inner", "epsilon",
            "budget", "strategy", "mode", "source", "sampler", "burn_in", "thin", "units",
            "boundary", "extremal_state", "generator_radius", "tree_radius", "hperc_radius",
            "lw_radius", "stratified", "field_grid", "workers", "output", "csv")
RUNTIME_KEYS = ("workers", "output", "csv")
SECTIONS = {"model": MODEL_KEYS, "graph": GRAPH_KEYS, "run": RUN_KEYS}

DEFAULTS = dict(parity="inv", d=3, seed=0, samples=10_000, orderings=200, inner=1,
                epsilon=0.05, budget=DEFAULT_BUDGET, strategy="extremal", mode="auto",
                source="auto", sampler="glauber", burn_in=100, thin=10, units="nats",
                boundary="both", extremal_state=0, r_max=6, radii="1,2,3", r=1,
                hperc_radius=6, lw_radius=1, graphs_per_size=1, field_grid="default",
                stratified="false", workers=1)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- settings

def read_config(path) -> dict:
    """Flatten an INI file into ``{key: text}``; unknown sections or keys are usage errors."""
    if not Path(path).exists():
        raise UsageError(f"config file {path} does not exist")
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.read(path)
    out = {}
    for section in cp.sections():
        if section not in SECTIONS:
            raise UsageError(f"unknown config section [{section}]")
        for key, val in cp.items(section):
            if key not in SECTIONS[section]:
                raise UsageError(f"unknown key {key!r} in [{section}]")
            out[key] = val
    return out


def _ints(text) -> list[int]:
    if isinstance(text, (list, tuple)):
        return [int(x) for x in text]
    return [int(x) for x in str(text).replace(",", " ").split()]


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"not a boolean: {text!r}")


class Settings:
    """Defaults, then config file, then explicit flags."""

    def __init__(self, args: argparse.Namespace):
        merged = dict(DEFAULTS)
        if getattr(args, "config", None):
            merged.update(read_config(args.config))
        for key in MODEL_KEYS + GRAPH_KEYS + RUN_KEYS:
            val = getattr(args, key, None)
            if val is not None:
                merged[key] = val
        self.values = merged

    def __getitem__(self, key):
        return self.values[key]

    def get(self, key, default=None):
        return self.values.get(key, default)

    def int(self, key) -> int:
        try:
            return int(self.values[key])
        except (KeyError, ValueError) as err:
            raise UsageError(f"setting {key!r} must be an integer") from err

    def float(self, key) -> float:
        try:
            return float(self.values[key])
        except (KeyError, ValueError) as err:
            raise UsageError(f"setting {key!r} must be a number") from err

    def parity(self):
        try:
            return parity_from_degree(str(self["parity"]), self.int("d"))
        except ValueError as err:
            raise UsageError(str(err)) from err

    def spec(self):
        cfg = {k: self.values[k] for k in MODEL_KEYS if self.values.get(k) is not None}
        if "model" not in cfg:
            raise UsageError("a model is required (--model or [model] in the config)")
        try:
            return parse_model_config(cfg, self.parity())
        except ValueError as err:
            raise UsageError(str(err)) from err

    def echo(self, keys) -> dict:
        return {k: self.values[k] for k in sorted(keys)
                if k in self.values and k not in RUNTIME_KEYS and self.values[k] is not None}


def derived_seed(seed: int, *key: int) -> int:
    """64-bit seed of a sub-experiment, a pure function of the master seed and key."""
    st = np.random.SeedSequence([seed, *key]).generate_state(2, np.uint32)
    return int(st[0]) << 32 | int(st[1])


# ---------------------------------------------------------------- records

def _series_row(n, r, est, **extra) -> dict:
    row = dict(n=n, r=r, value=est.value, stderr=est.stderr, samples=est.samples, seed=est.seed)
    row.update(extra)
    return row


def _to_units(rows: list, units: str, keys=("value", "stderr")) -> list:
    if units == "nats":
        return rows
    if units != "bits":
        raise UsageError("units must be 'nats' or 'bits'")
    out = []
    for row in rows:
        row = dict(row)
        for k in keys:
            if isinstance(row.get(k), (int, float)) and row[k] is not None:
                row[k] = row[k] / math.log(2)
        out.append(row)
    return out


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    return x


def make_record(command: str, settings: Settings, keys, body: dict, started) -> dict:
    config = settings.echo(keys)
    digest = hashlib.sha256(json.dumps(_jsonable(config), sort_keys=True).encode()).hexdigest()
    rec = dict(experiment=f"{command}-{digest[:12]}", command=command, version=__version__,
               config=config, **body)
    rec["runtime"] = dict(started=started, finished=_now(), workers=settings.int("workers"),
                          output=settings.get("output"), csv=settings.get("csv"))
    return _jsonable(rec)


def dump_record(rec: dict) -> str:
    return json.dumps(rec, sort_keys=True, indent=2) + "\n"


def load_record(path) -> dict:
    return json.loads(Path(path).read_text())


def write_csv(rows: list, path) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "r", "value", "stderr", "samples", "seed"])
    for row in rows:
        w.writerow(["" if row.get(k) is None else row[k]
                    for k in ("n", "r", "value", "stderr", "samples", "seed")])
    Path(path).write_text(buf.getvalue())


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def _emit(rec: dict, settings: Settings, rows: Optional[list] = None) -> None:
    text = dump_record(rec)
    out = settings.get("output")
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    if settings.get("csv"):
        write_csv(rows if rows is not None else rec.get("series", []), settings["csv"])


# ---------------------------------------------------------------- commands

def cmd_gen_graph(args, settings: Settings) -> int:
    started = _now()
    parity = settings.parity()
    n, seed = settings.int("n"), settings.int("seed")
    if n < 1:
        raise UsageError("n must be positive")
    try:
        graph = random_graph(parity, n, np.random.default_rng(seed))
    except ValueError as err:
        raise UsageError(str(err)) from err
    path = settings.get("file") or f"graph_{parity.tag}_d{parity.degree}_n{n}_s{seed}.txt"
    Path(path).write_text(format_graph(graph))
    fractions = {str(t): float(tree_like_fraction(graph, t)) for t in range(1, 5)}
    rec = make_record("gen-graph", settings, ("parity", "d", "n", "seed"),
                      dict(graph_file=str(path), tree_like_fraction=fractions,
                           multi_edge_vertices=len(graph.multi_edge_vertices)), started)
    _emit(rec, settings, [])
    return 0


def _graph_from_settings(settings: Settings):
    path = settings.get("file")
    if not path:
        raise UsageError("a graph file is required (--graph or [graph] file)")
    if not Path(path).exists():
        raise UsageError(f"graph file {path} does not exist")
    try:
        return load_graph(path)
    except ValueError as err:
        raise UsageError(f"bad graph file: {err}") from err


def _exact_entropy(graph, spec, settings) -> dict:
    log_z, h = log_partition_and_entropy(graph, spec, settings.int("budget"),
                                         settings.int("workers"))
    out = dict(value=h / graph.n, log_partition=log_z / graph.n)
    if graph.n <= 10:
        rhs = percolation_identity_rhs(build(graph, spec, settings.int("budget")))
        out["identity_rhs"] = rhs
        out["identity_error"] = abs(rhs - h / graph.n)
    return out


def _truncated(graph, spec, r, settings, seed):
    source = settings["source"]
    if source == "auto":
        feasible = spec.alphabet_size ** graph.n <= settings.int("budget")
        source = "exact" if feasible else "ball"
    return specific_entropy_truncated(
        graph, spec, r, settings.int("orderings"), seed, source=source,
        sampler=settings["sampler"], burn_in=settings.int("burn_in"), thin=settings.int("thin"),
        budget=settings.int("budget"), workers=settings.int("workers"))


def cmd_entropy(args, settings: Settings) -> int:
    started = _now()
    spec, graph = settings.spec(), _graph_from_settings(settings)
    mode, seed = settings["mode"], settings.int("seed")
    if mode not in ("auto", "exact", "truncated", "both"):
        raise UsageError("mode must be auto, exact, truncated or both")
    if mode == "auto":
        feasible = spec.alphabet_size ** graph.n <= settings.int("budget")
        mode = "exact" if feasible else "truncated"
    body, rows = dict(n=graph.n, model=spec.describe()), []
    if mode in ("exact", "both"):
        ex = _exact_entropy(graph, spec, settings)
        body["exact"] = ex
        rows.append(dict(n=graph.n, r=None, value=ex["value"], stderr=0.0, samples=0, seed=None))
    if mode in ("truncated", "both"):
        for r in _ints(settings["radii"]):
            est = _truncated(graph, spec, r, settings, derived_seed(seed, r))
            extra = {k: v for k, v in est.extra.items() if k != "r"}
            rows.append(_series_row(graph.n, r, est, method=est.method, **extra))
    body["series"] = _to_units(rows, settings["units"])
    if "exact" in body:
        body["exact"] = _to_units([body["exact"]], settings["units"],
                                  ("value", "log_partition", "identity_rhs", "identity_error"))[0]
    body["units"] = settings["units"]
    rec = make_record("entropy", settings, MODEL_KEYS + GRAPH_KEYS + (
        "seed", "mode", "radii", "orderings", "source", "sampler", "burn_in", "thin", "budget",
        "units"), body, started)
    _emit(rec, settings)
    return 0


def _boundaries(settings: Settings, spec) -> list:
    which = settings["boundary"]
    a = settings.int("extremal_state")
    if not 0 <= a < spec.alphabet_size:
        raise UsageError("extremal state outside the alphabet")
    named = {"free": [("free", FREE)], "extremal": [(f"extremal:{a}", ExtremalAllState(a))]}
    if which == "both":
        return named["free"] + named["extremal"]
    if which not in named:
        raise UsageError("boundary must be free, extremal or both")
    return named[which]


def _hperc(spec, r, boundary, settings, seed):
    gr = settings.get("generator_radius")
    return percolative_entropy(
        spec, r, boundary, settings.int("samples"), settings.int("inner"), seed,
        stratified=_bool(settings["stratified"]),
        generator_radius=None if gr in (None, "") else int(gr),
        workers=settings.int("workers"))


def cmd_hperc(args, settings: Settings) -> int:
    started = _now()
    spec, seed = settings.spec(), settings.int("seed")
    rows, side = [], []
    for r in _ints(settings["radii"]):
        entry = dict(r=r)
        for j, (name, bc) in enumerate(_boundaries(settings, spec)):
            est = _hperc(spec, r, bc, settings, derived_seed(seed, r, j))
            entry[name] = est.to_dict()
            if j == 0:
                rows.append(_series_row(None, r, est, boundary=name))
        side.append(entry)
    units = settings["units"]
    if units == "bits":
        for entry in side:
            for k, v in entry.items():
                if isinstance(v, dict):
                    entry[k] = _to_units([v], units)[0]
    body = dict(model=spec.describe(), series=_to_units(rows, units), boundaries=side,
                units=units)
    rec = make_record("hperc", settings, MODEL_KEYS + (
        "parity", "d", "seed", "radii", "samples", "inner", "boundary", "extremal_state",
        "generator_radius", "stratified", "units"), body, started)
    _emit(rec, settings)
    return 0


def _field_grid(settings, spec):
    g = str(settings["field_grid"]).strip()
    if g == "default":
        return None
    if g == "zero":
        return [np.zeros(spec.alphabet_size)]
    raise UsageError("field_grid must be 'default' or 'zero'")


def cmd_ssm(args, settings: Settings) -> int:
    started = _now()
    spec = settings.spec()
    prof = ssm_profile(spec, settings.int("r_max"), settings["strategy"],
                       _field_grid(settings, spec), budget=settings.int("budget"),
                       rng=settings.int("seed"))
    rows = [dict(n=None, r=e.r, value=e.sup_difference, stderr=None, samples=None,
                 seed=settings.int("seed"), field=list(e.field)) for e in prof.entries]
    body = dict(model=spec.describe(), series=rows, strategy=prof.strategy,
                n_fields=prof.n_fields, decay_rate=prof.decay_rate())
    rec = make_record("ssm", settings, MODEL_KEYS + (
        "parity", "d", "seed", "r_max", "strategy", "budget", "field_grid"), body, started)
    _emit(rec, settings)
    return 0


def cmd_converge(args, settings: Settings) -> int:
    started = _now()
    spec, parity, seed = settings.spec(), settings.parity(), settings.int("seed")
    sizes = _ints(settings.get("sizes") or "")
    if not sizes or min(sizes) < 1:
        raise UsageError("converge needs a positive sizes list")
    per_size = settings.int("graphs_per_size")
    rh = settings.int("hperc_radius")
    perc = _hperc(spec, rh, FREE, settings, derived_seed(seed, 0, rh))
    budget = settings.int("budget")
    lw_r = settings.int("lw_radius")
    rows, sizes_out = [], []
    for n in sizes:
        values, lw = [], []
        for k in range(per_size):
            try:
                graph = random_graph(parity, n, np.random.default_rng(derived_seed(seed, 1, n, k)))
            except ValueError as err:
                raise UsageError(str(err)) from err
            if spec.alphabet_size ** n <= budget:
                values.append(log_partition_and_entropy(graph, spec, budget,
                                                        settings.int("workers"))[1] / n)
                # exact pushforwards need the dense joint table; keep that small
                method = "exact"
                lw_mode = "exact" if spec.alphabet_size ** n <= 2 ** 16 else "mc"
            else:
                est = _truncated(graph, spec, settings.int("r"), settings,
                                 derived_seed(seed, 2, n, k))
                values.append(est.value)
                method, lw_mode = est.method, "mc"
            lw.append(lw_diagnostic(graph, spec, lw_r, settings.float("epsilon"), lw_mode,
                                    derived_seed(seed, 3, n, k), budget=budget))
        v = np.asarray(values)
        se = float(v.std(ddof=1) / math.sqrt(v.size)) if v.size > 1 else 0.0
        mean = float(v.sum() / v.size)
        gap = abs(mean - perc.value)
        gap_se = math.sqrt(se ** 2 + perc.stderr ** 2)
        sizes_out.append(dict(n=n, specific_entropy=mean, ensemble_stderr=se, values=values,
                              method=method, lw_fraction=float(np.mean(lw)), gap=gap,
                              gap_stderr=gap_se))
        rows.append(dict(n=n, r=rh, value=gap, stderr=gap_se, samples=per_size,
                         seed=derived_seed(seed, 1, n, 0)))
    units = settings["units"]
    sizes_out = _to_units(sizes_out, units, ("specific_entropy", "ensemble_stderr", "gap",
                                             "gap_stderr"))
    if units == "bits":
        for s in sizes_out:
            s["values"] = [x / math.log(2) for x in s["values"]]
    body = dict(model=spec.describe(), hperc=_to_units([perc.to_dict()], units)[0],
                sizes=sizes_out, series=_to_units(rows, units), units=units)
    rec = make_record("converge", settings, MODEL_KEYS + (
        "parity", "d", "sizes", "graphs_per_size", "seed", "hperc_radius", "samples", "inner",
        "stratified", "generator_radius", "lw_radius", "epsilon", "r", "orderings", "budget",
        "units", "source", "sampler", "burn_in", "thin"), body, started)
    _emit(rec, settings)
    return 0


def cmd_lw_diag(args, settings: Settings) -> int:
    started = _now()
    spec, graph = settings.spec(), _graph_from_settings(settings)
    mode = settings["mode"]
    if mode == "auto":
        mode = "exact" if spec.alphabet_size ** graph.n <= settings.int("budget") else "mc"
    tr = settings.get("tree_radius")
    frac = lw_diagnostic(graph, spec, settings.int("r"), settings.float("epsilon"), mode,
                         settings.int("seed"), None if tr in (None, "") else int(tr),
                         n_samples=settings.int("samples"), burn_in=settings.int("burn_in"),
                         thin=settings.int("thin"), budget=settings.int("budget"))
    body = dict(model=spec.describe(), n=graph.n, mode=mode, fraction=frac,
                series=[dict(n=graph.n, r=settings.int("r"), value=frac, stderr=None,
                             samples=settings.int("samples") if mode == "mc" else 0,
                             seed=settings.int("seed"))])
    rec = make_record("lw-diag", settings, MODEL_KEYS + GRAPH_KEYS + (
        "seed", "r", "epsilon", "mode", "samples", "burn_in", "thin", "tree_radius", "budget"),
        body, started)
    _emit(rec, settings)
    return 0


def cmd_thresholds(args, settings: Settings) -> int:
    started = _now()
    d = settings.int("d")
    if d < 3:
        raise UsageError("thresholds need d >= 3")
    body = dict(d=d, hardcore_threshold=hardcore_threshold(d),
                coloring_constant=coloring_constant(), coloring_threshold=coloring_threshold(d))
    if settings.get("model"):
        spec = settings.spec()
        alpha, f = dobrushin_alpha(spec, _field_grid(settings, spec), return_field=True)
        body.update(model=spec.describe(), dobrushin_alpha=alpha, maximising_field=f)
    rec = make_record("thresholds", settings, MODEL_KEYS + ("parity", "d", "field_grid"),
                      body, started)
    _emit(rec, settings, [])
    return 0


COMMANDS = {
    "gen-graph": cmd_gen_graph, "entropy": cmd_entropy, "hperc": cmd_hperc, "ssm": cmd_ssm,
    "converge": cmd_converge, "lw-diag": cmd_lw_diag, "thresholds": cmd_thresholds,
}


# ---------------------------------------------------------------- parser

def _common(p, model=True, graph_file=False):
    p.add_argument("--config", help="INI file with [model], [graph], [run] sections")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", dest="output", help="write the JSON record here (default stdout)")
    p.add_argument("--csv", help="also write the flat series as CSV")
    p.add_argument("--units", choices=("nats", "bits"))
    p.add_argument("--budget", type=int)
    p.add_argument("--parity", choices=("inv", "even"))
    p.add_argument("--d", type=int)
    if model:
        p.add_argument("--model", choices=("ising", "potts", "hardcore", "coloring"))
        p.add_argument("--beta", type=float)
        p.add_argument("--lambda", dest="lambda", type=float)
        p.add_argument("--q", type=int)
        p.add_argument("--field", help="per-state self-interaction, e.g. '0.5,0'")
    if graph_file:
        p.add_argument("--graph", dest="file", help="graph file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="percolative", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-graph", help="generate a random labeled regular graph")
    _common(p, model=False)
    p.add_argument("--n", type=int)
    p.add_argument("--file", dest="file", help="output graph file")

    p = sub.add_parser("entropy", help="specific entropy of a graph Gibbs measure")
    _common(p, graph_file=True)
    p.add_argument("--mode", choices=("auto", "exact", "truncated", "both"))
    p.add_argument("--radii")
    p.add_argument("--orderings", type=int)
    p.add_argument("--source", choices=("auto", "ball", "exact"))
    p.add_argument("--sampler", choices=("glauber", "exact"))
    p.add_argument("--burn-in", dest="burn_in", type=int)
    p.add_argument("--thin", type=int)

    p = sub.add_parser("hperc", help="percolative entropy on the tree")
    _common(p)
    p.add_argument("--radii")
    p.add_argument("--samples", type=int)
    p.add_argument("--inner", type=int)
    p.add_argument("--boundary", choices=("free", "extremal", "both"))
    p.add_argument("--extremal-state", dest="extremal_state", type=int)
    p.add_argument("--generator-radius", dest="generator_radius", type=int)
    p.add_argument("--stratified", action="store_const", const="true")

    p = sub.add_parser("ssm", help="strong spatial mixing profile")
    _common(p)
    p.add_argument("--r-max", dest="r_max", type=int)
    p.add_argument("--strategy", choices=("extremal", "exhaustive", "random-search"))
    p.add_argument("--field-grid", dest="field_grid", choices=("default", "zero"))

    p = sub.add_parser("converge", help="specific entropy versus percolative entropy by size")
    _common(p)
    p.add_argument("--sizes")
    p.add_argument("--graphs-per-size", dest="graphs_per_size", type=int)
    p.add_argument("--hperc-radius", dest="hperc_radius", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--generator-radius", dest="generator_radius", type=int)
    p.add_argument("--stratified", action="store_const", const="true")
    p.add_argument("--lw-radius", dest="lw_radius", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--r", type=int, help="truncation radius when enumeration is infeasible")
    p.add_argument("--orderings", type=int)

    p = sub.add_parser("lw-diag", help="local weak* diagnostic fraction")
    _common(p, graph_file=True)
    p.add_argument("--r", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--mode", choices=("auto", "exact", "mc"))
    p.add_argument("--samples", type=int)
    p.add_argument("--tree-radius", dest="tree_radius", type=int)
    p.add_argument("--burn-in", dest="burn_in", type=int)
    p.add_argument("--thin", type=int)

    p = sub.add_parser("thresholds", help="model thresholds and Dobrushin alpha")
    _common(p)
    p.add_argument("--field-grid", dest="field_grid", choices=("default", "zero"))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = Settings(args)
        return COMMANDS[args.command](args, settings)
    except (UsageError, ValueError) as err:
        print(f"percolative: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except GenerationFailure as err:
        print(f"percolative: generation failed: {err}", file=sys.stderr)
        return EXIT_GENERATION
    except INFEASIBLE as err:
        print(f"percolative: infeasible: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
