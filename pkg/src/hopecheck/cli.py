"""Command-line front end; a thin client of the HTTP service.

By default the service runs in-process, so no server is needed; point
``--server`` (or HOPECHECK_SERVER) at a running instance to use one.

Exit codes: 0 for the expected outcome (valid, sat found, no violations,
unique puzzle solution, all claims hold), 1 for the logical negative
(counterexample, unsat, violations, zero or multiple solutions, failed
claims), 2 for usage, parse, or I/O errors.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .client import ServiceClient, ServiceError


def _fail_usage(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _client(ctx) -> ServiceClient:
    return ServiceClient(ctx.obj.get("server"))


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        _fail_usage(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        _fail_usage(f"{path} is not valid JSON: {exc}")


def _emit_json(doc):
    click.echo(json.dumps(doc, indent=2, sort_keys=True))


def _call(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ServiceError as exc:
        _fail_usage(str(exc))
    except Exception as exc:  # connection failures against --server
        _fail_usage(str(exc))


def _parse_agents(text: str) -> list[str]:
    agents = [a.strip() for a in text.split(",") if a.strip()]
    if not agents:
        _fail_usage("--agents needs a comma-separated list of agent names")
    return agents


@click.group()
@click.option(
    "--server",
    envvar="HOPECHECK_SERVER",
    default=None,
    metavar="URL",
    help="Base URL of a running service; default is in-process.",
)
@click.version_option(package_name="hopecheck")
@click.pass_context
def main(ctx, server):
    """Model checking for the logic of knowledge and hope."""
    ctx.ensure_object(dict)
    ctx.obj["server"] = server


@main.command()
@click.argument("model_path", type=click.Path())
@click.argument("formula")
@click.option("--world", default=None, help="Evaluate at this world only.")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.pass_context
def check(ctx, model_path, formula, world, as_json):
    """Evaluate FORMULA on the model at MODEL_PATH (per world, or at --world)."""
    model_doc = _read_json(model_path)
    result = _call(_client(ctx).check, model_doc, formula, world)
    if as_json:
        _emit_json(result)
    elif world is not None:
        click.echo("true" if result["value"] else "false")
    else:
        for w, value in result["values"].items():
            click.echo(f"{w}: {'true' if value else 'false'}")
    truth = result["value"] if world is not None else result["valid"]
    sys.exit(0 if truth else 1)


@main.command()
@click.argument("model_path", type=click.Path())
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.pass_context
def validate(ctx, model_path, as_json):
    """List frame-condition violations of the model at MODEL_PATH."""
    model_doc = _read_json(model_path)
    result = _call(_client(ctx).validate_model, model_doc)
    if as_json:
        _emit_json(result)
    elif result["ok"]:
        click.echo("no frame violations")
    else:
        for v in result["violations"]:
            click.echo(f"{v['kind']} for agent {v['agent']}: ({', '.join(v['witness'])})")
    sys.exit(0 if result["ok"] else 1)


def _verdict_command(ctx, formula, agents, max_worlds, max_models, as_json, mode):
    universe = _parse_agents(agents)
    client = _client(ctx)
    fn = client.validity if mode == "validity" else client.sat
    result = _call(fn, formula, universe, max_worlds, max_models)
    if as_json:
        _emit_json(result)
    else:
        verdict = result["verdict"]
        if verdict in ("valid-up-to", "unsat-up-to"):
            click.echo(f"{verdict} {result['bound']}")
        else:
            worlds = result["model"]["worlds"]
            noun = "world" if len(worlds) == 1 else "worlds"
            click.echo(f"{verdict} at {result['world']} ({len(worlds)} {noun})")
            _emit_json(result["model"])
    ok = result["verdict"] in ("valid-up-to", "sat-found")
    sys.exit(0 if ok else 1)


@main.command()
@click.argument("formula")
@click.option("--agents", required=True, help="Comma-separated agent universe.")
@click.option("--max-worlds", default=3, show_default=True, type=click.IntRange(min=1))
@click.option("--max-models", default=None, type=click.IntRange(min=1), help="Enumeration ceiling.")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.pass_context
def validity(ctx, formula, agents, max_worlds, max_models, as_json):
    """Search for a countermodel of FORMULA up to a world bound."""
    _verdict_command(ctx, formula, agents, max_worlds, max_models, as_json, "validity")


@main.command()
@click.argument("formula")
@click.option("--agents", required=True, help="Comma-separated agent universe.")
@click.option("--max-worlds", default=3, show_default=True, type=click.IntRange(min=1))
@click.option("--max-models", default=None, type=click.IntRange(min=1), help="Enumeration ceiling.")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.pass_context
def sat(ctx, formula, agents, max_worlds, max_models, as_json):
    """Search for a model and world satisfying FORMULA up to a world bound."""
    _verdict_command(ctx, formula, agents, max_worlds, max_models, as_json, "sat")


@main.command()
@click.argument("model_path", required=False, type=click.Path())
@click.option("--sample", "samples", multiple=True, help="Extra sample formula (repeatable).")
@click.option("--agents", default=1, show_default=True, type=click.IntRange(min=1), help="Sweep agent count.")
@click.option("--atoms", default=1, show_default=True, type=click.IntRange(min=0), help="Sweep atom count.")
@click.option("--max-worlds", default=2, show_default=True, type=click.IntRange(min=1), help="Sweep world bound.")
@click.option("--model-cap", default=20000, show_default=True, type=click.IntRange(min=1), help="Sweep sampling cap.")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.pass_context
def axioms(ctx, model_path, samples, agents, atoms, max_worlds, model_cap, as_json):
    """Run the axiom suite on a model file, or sweep enumerated models."""
    client = _client(ctx)
    if model_path is not None:
        model_doc = _read_json(model_path)
        result = _call(client.axioms, model_doc, list(samples) or None)
    else:
        bounds = {"agents": agents, "atoms": atoms, "maxWorlds": max_worlds, "modelCap": model_cap}
        result = _call(client.axioms, None, None, bounds)
    if as_json:
        _emit_json(result)
    else:
        for schema in result["schemas"]:
            if schema["passed"]:
                click.echo(f"{schema['name']}: pass ({schema['checks']} checks)")
            else:
                failure = schema["firstFailure"]
                click.echo(
                    f"{schema['name']}: FAIL ({schema['failures']} failures; "
                    f"e.g. {failure['formula']} at {failure['world']})"
                )
        click.echo(
            f"{'all schemas pass' if result['allPassed'] else 'schema failures found'} "
            f"({result['modelsChecked']} models)"
        )
    sys.exit(0 if result["allPassed"] else 1)


@main.command("compile-runs")
@click.argument("runs_path", type=click.Path())
@click.argument("out_path", type=click.Path())
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.pass_context
def compile_runs(ctx, runs_path, out_path, as_json):
    """Compile the run system at RUNS_PATH into a model JSON at OUT_PATH."""
    system_doc = _read_json(runs_path)
    result = _call(_client(ctx).compile_runs, system_doc)
    model_doc = result["model"]
    try:
        Path(out_path).write_text(json.dumps(model_doc, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        _fail_usage(f"cannot write {out_path}: {exc}")
    if as_json:
        _emit_json({"outPath": out_path, "worlds": len(model_doc["worlds"])})
    else:
        click.echo(f"wrote model with {len(model_doc['worlds'])} worlds to {out_path}")
    sys.exit(0)


@main.command()
@click.argument("puzzle_path", type=click.Path())
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.pass_context
def puzzle(ctx, puzzle_path, as_json):
    """Solve the knights-and-knaves puzzle at PUZZLE_PATH."""
    puzzle_doc = _read_json(puzzle_path)
    result = _call(_client(ctx).puzzle, puzzle_doc)
    assignments = result["assignments"]
    if as_json:
        _emit_json(result)
    elif not assignments:
        click.echo("no consistent assignment")
    elif result["unique"]:
        only = assignments[0]
        click.echo(" ".join(f"{a}={only[a]}" for a in sorted(only)) + " (unique)")
    else:
        for assignment in assignments:
            click.echo(" ".join(f"{a}={assignment[a]}" for a in sorted(assignment)))
        click.echo(f"({len(assignments)} solutions)")
    sys.exit(0 if result["unique"] else 1)


@main.command()
@click.argument("name")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.pass_context
def demo(ctx, name, as_json):
    """Run a built-in demonstration (available: brain-in-vat)."""
    result = _call(_client(ctx).demo, name)
    if as_json:
        _emit_json(result)
    else:
        for claim in result["claims"]:
            status = "ok" if claim["passed"] else "MISMATCH"
            click.echo(
                f"{status}: {claim['formula']} @ {claim['world']} = "
                f"{'true' if claim['actual'] else 'false'} "
                f"(expected {'true' if claim['expected'] else 'false'})"
            )
        click.echo("all claims hold" if result["allPassed"] else "some claims failed")
    sys.exit(0 if result["allPassed"] else 1)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(host, port):
    """Start the HTTP service."""
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
