"""Command-line interface.

Exit codes: 0 success, 1 assertion failure, 2 usage error, 3 enumeration
cap exceeded.  ``--json`` switches machine-readable output with a
``schema`` field.
"""

from __future__ import annotations

import json
import sys

import click

from . import corpus as corpus_mod
from . import fixtures as fx
from .algorithms import pc_run, sp_run
from .ci import CISet, Dataset, FisherZOracle, ci_holds, from_graph, skeleton_of, union_of_markov
from .framework import (
    corresponding_output,
    evaluate,
    make_property,
    support_subset,
    uniqueness_detail,
)
from .graphs import (
    DAG,
    GRAPH_CLASSES,
    EnumerationCapError,
    MixedGraph,
    enumerate_graphs,
    mec_key,
    separated,
    validate_class,
)
from .simulation import ExperimentConfig, table1_experiment

SCHEMA = 1


def _load_graph(path: str) -> MixedGraph:
    with open(path) as fh:
        return MixedGraph.from_json(json.load(fh))


def _load_ciset(path: str) -> CISet:
    with open(path) as fh:
        return CISet.from_json(json.load(fh))


def _emit(payload: dict, as_json: bool, plain: str) -> None:
    if as_json:
        click.echo(json.dumps({"schema": SCHEMA, **payload}))
    else:
        click.echo(plain)


def _parse_cond(cond: str) -> set[int]:
    return {int(x) for x in cond.split(",") if x.strip()} if cond else set()


@click.group()
def cli():
    """Graphs, independence models, properties, learners, and experiments."""


# --- graph ---


@cli.group()
def graph():
    """Mixed-graph operations."""


@graph.command("validate")
@click.option("--class", "cls", type=click.Choice(GRAPH_CLASSES), required=True)
@click.option("--file", "path", required=True, type=click.Path(exists=True))
@click.option("--json", "as_json", is_flag=True)
def graph_validate(cls, path, as_json):
    ok = validate_class(_load_graph(path), cls)
    _emit({"result": ok}, as_json, f"{'valid' if ok else 'invalid'} {cls}")


@graph.command("separated")
@click.option("--file", "path", required=True, type=click.Path(exists=True))
@click.option("--i", type=int, required=True)
@click.option("--j", type=int, required=True)
@click.option("--cond", default="")
@click.option("--json", "as_json", is_flag=True)
def graph_separated(path, i, j, cond, as_json):
    ok = separated(_load_graph(path), i, j, _parse_cond(cond))
    _emit({"result": ok}, as_json, str(ok).lower())


@graph.command("enumerate")
@click.option("--n", type=int, required=True)
@click.option("--class", "cls", type=click.Choice(GRAPH_CLASSES), required=True)
@click.option("--out", type=click.Path(), default=None)
def graph_enumerate(n, cls, out):
    stream = enumerate_graphs(n, cls)
    if out:
        count = 0
        with open(out, "w") as fh:
            for g in stream:
                fh.write(json.dumps(g.to_json()) + "\n")
                count += 1
        click.echo(f"wrote {count} graphs to {out}")
    else:
        for g in stream:
            click.echo(json.dumps(g.to_json()))


# --- ci ---


@cli.group()
def ci():
    """Conditional-independence models."""


@ci.command("from-graph")
@click.option("--graph", "path", required=True, type=click.Path(exists=True))
def ci_from_graph(path):
    click.echo(json.dumps({"schema": SCHEMA, **from_graph(_load_graph(path)).to_json()}))


@ci.command("skeleton")
@click.option("--ci", "ci_path", type=click.Path(exists=True), default=None)
@click.option("--data", "data_path", type=click.Path(exists=True), default=None)
@click.option("--alpha", type=float, default=0.01, show_default=True)
def ci_skeleton(ci_path, data_path, alpha):
    oracle = _oracle_from(ci_path, data_path, alpha)
    click.echo(json.dumps({"schema": SCHEMA, **skeleton_of(oracle, oracle.n).to_json()}))


def _oracle_from(ci_path, data_path, alpha):
    if (ci_path is None) == (data_path is None):
        raise click.UsageError("provide exactly one of --ci or --data")
    if ci_path:
        return _load_ciset(ci_path)
    return FisherZOracle(Dataset.from_csv(data_path), alpha)


@ci.command("holds")
@click.option("--ci", "ci_path", type=click.Path(exists=True), default=None)
@click.option("--data", "data_path", type=click.Path(exists=True), default=None)
@click.option("--alpha", type=float, default=0.01, show_default=True)
@click.option("--i", type=int, required=True)
@click.option("--j", type=int, required=True)
@click.option("--cond", default="")
@click.option("--json", "as_json", is_flag=True)
def ci_holds_cmd(ci_path, data_path, alpha, i, j, cond, as_json):
    ok = ci_holds(_oracle_from(ci_path, data_path, alpha), i, j, _parse_cond(cond))
    _emit({"result": ok}, as_json, str(ok).lower())


@ci.command("union")
@click.option("--graphs", "paths", multiple=True, required=True, type=click.Path(exists=True))
def ci_union(paths):
    merged = union_of_markov([_load_graph(p) for p in paths])
    click.echo(json.dumps({"schema": SCHEMA, **merged.to_json()}))


# --- prop ---

_PROP_CHOICES = (
    "v1",
    "v2",
    "v3",
    "vous",
    "markov",
    "pairwise-markov",
    "faithful",
    "adj-faithful",
    "min-markov",
    "sparsest",
    "pearl-min",
    "causal-min",
)


@cli.group()
def prop():
    """Property evaluation, uniqueness, and supports."""


@prop.command("eval")
@click.option("--property", "name", type=click.Choice(_PROP_CHOICES), required=True)
@click.option("--ci", "ci_path", required=True, type=click.Path(exists=True))
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True))
@click.option("--class", "cls", type=click.Choice((DAG, "mag")), default=DAG, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def prop_eval(name, ci_path, graph_path, cls, as_json):
    result = evaluate(make_property(name, cls), _load_ciset(ci_path), _load_graph(graph_path))
    _emit({"result": result}, as_json, str(result).lower())


@prop.command("uniqueness")
@click.option("--property", "name", type=click.Choice(_PROP_CHOICES), required=True)
@click.option("--ci", "ci_path", required=True, type=click.Path(exists=True))
@click.option("--n", type=int, required=True)
@click.option("--class", "cls", type=click.Choice((DAG, "mag")), default=DAG, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def prop_uniqueness(name, ci_path, n, cls, as_json):
    detail = uniqueness_detail(make_property(name, cls), _load_ciset(ci_path), n)
    plain = str(detail["unique"]).lower()
    if not detail["satisfiable"]:
        plain += " (vacuous: no graph satisfies the property)"
    _emit({"result": detail["unique"], **detail}, as_json, plain)


@prop.command("output-set")
@click.option("--property", "name", type=click.Choice(_PROP_CHOICES), required=True)
@click.option("--ci", "ci_path", required=True, type=click.Path(exists=True))
@click.option("--n", type=int, required=True)
@click.option("--class", "cls", type=click.Choice((DAG, "mag")), default=DAG, show_default=True)
def prop_output_set(name, ci_path, n, cls):
    out = corresponding_output(make_property(name, cls), _load_ciset(ci_path), n)
    keys = {mec_key(g) for g in out}
    click.echo(
        json.dumps(
            {
                "schema": SCHEMA,
                "graphs": [g.to_json() for g in sorted(out, key=lambda g: g.sort_key())],
                "equivalence_classes": len(keys),
            }
        )
    )


@prop.command("support-subset")
@click.option("--a", "name_a", type=click.Choice(_PROP_CHOICES), required=True)
@click.option("--b", "name_b", type=click.Choice(_PROP_CHOICES), required=True)
@click.option("--corpus", "corpus_name", default="std", show_default=True)
@click.option("--n", type=int, required=True)
@click.option("--class", "cls", type=click.Choice((DAG, "mag")), default=DAG, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def prop_support_subset(name_a, name_b, corpus_name, n, cls, as_json):
    if corpus_name != "std":
        raise click.UsageError("only the std corpus is available")
    members = corpus_mod.standard_corpus(n, cls)
    ok, witness = support_subset(make_property(name_a, cls), make_property(name_b, cls), members, n)
    payload = {"result": ok}
    plain = str(ok).lower()
    if witness:
        payload["witness"] = {"ci": witness[0].to_json(), "graph": witness[1].to_json()}
        plain += f"  witness: {witness[1]!r} under {witness[0]!r}"
    _emit(payload, as_json, plain)


# --- algo ---


@cli.group()
def algo():
    """Constraint-based learners."""


@algo.command("pc")
@click.option("--variant", type=click.Choice(("1", "2", "3")), required=True)
@click.option("--ci", "ci_path", type=click.Path(exists=True), default=None)
@click.option("--data", "data_path", type=click.Path(exists=True), default=None)
@click.option("--alpha", type=float, default=0.01, show_default=True)
@click.option("--n", type=int, required=True)
@click.option("--out", type=click.Path(), default=None)
def algo_pc(variant, ci_path, data_path, alpha, n, out):
    oracle = _oracle_from(ci_path, data_path, alpha)
    result = pc_run(int(variant), oracle, n)
    payload = {"schema": SCHEMA, **result.to_json()}
    text = json.dumps(payload)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
        click.echo(f"wrote result to {out}")
    else:
        click.echo(text)


@algo.command("sp")
@click.option("--ci", "ci_path", required=True, type=click.Path(exists=True))
@click.option("--n", type=int, required=True)
@click.option("--full", is_flag=True, help="keep every minimal DAG, not one per equivalence class")
def algo_sp(ci_path, n, full):
    out = sp_run(_load_ciset(ci_path), n, full=full)
    click.echo(
        json.dumps(
            {
                "schema": SCHEMA,
                "graphs": [g.to_json() for g in sorted(out, key=lambda g: g.sort_key())],
                "edges": min(g.edge_count() for g in out) if out else None,
            }
        )
    )


# --- simulate ---


@cli.group()
def simulate():
    """Sampling experiments."""


@simulate.command("table1")
@click.option("--batches", type=int, default=200, show_default=True)
@click.option("--samples", type=int, default=10000, show_default=True)
@click.option("--alpha", type=float, default=0.01, show_default=True)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--variants", default="1,3", show_default=True)
@click.option("--exact-oracle", is_flag=True, help="use the analytic population oracle instead of data")
@click.option("--out", type=click.Path(), default=None)
def simulate_table1(batches, samples, alpha, seed, variants, exact_oracle, out):
    cfg = ExperimentConfig(
        batches=batches,
        samples=samples,
        alpha=alpha,
        seed=seed,
        variants=tuple(int(v) for v in variants.split(",")),
    )
    rates = table1_experiment(cfg, exact_oracle=exact_oracle)
    payload = {
        "schema": SCHEMA,
        "config": {
            "batches": cfg.batches,
            "samples": cfg.samples,
            "alpha": cfg.alpha,
            "seed": cfg.seed,
            "exact_oracle": exact_oracle,
        },
        "rates": {str(v): r for v, r in rates.items()},
    }
    text = json.dumps(payload)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
        click.echo(f"wrote rates to {out}")
    else:
        click.echo(text)


# --- reproduce ---


@cli.command("reproduce")
@click.option("--example", required=True, help=f"one of: {', '.join(fx.EXAMPLE_IDS)}")
@click.option("--json", "as_json", is_flag=True)
def reproduce(example, as_json):
    """Re-run the scripted assertions behind a named worked example."""
    try:
        report = fx.run_example(example)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    if as_json:
        click.echo(json.dumps({"schema": SCHEMA, "example": example, "assertions": report.assertions}))
    else:
        for line in report.lines():
            click.echo(line)
    if not report.ok:
        sys.exit(1)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 2
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        return 2
    except EnumerationCapError as exc:
        click.echo(f"error: {exc}", err=True)
        return 3
    except SystemExit as exc:
        return int(exc.code or 0)
    return 0


if __name__ == "__main__":
    sys.exit(main())
