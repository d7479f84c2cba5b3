"""Command line front end.

Every command emits one report (JSON or CSV) to stdout or to --out, embedding
a run manifest with the command line, input digests, tool version,
tolerances and seeds.  Reports are byte-deterministic for identical inputs
and seeds; wall time is recorded only when --timing is passed, since a
timing field would break that determinism.

Exit codes: 0 success, 2 input validation failure, 64 malformed usage,
1 internal error.
"""

from __future__ import annotations

import hashlib
import json
import math
import sys
import time
from pathlib import Path

import click

from . import __version__
from .covering import GoodCovering, Subgraph, ball_covering, effective_potential, \
    validate_covering
from .errors import GraphError, GraphFormatError
from .esa import LadderParams, ladder_criterion_check, ladder_sweep, \
    ladder_vertex_pos, classify_regime
from .graph import WeightedGraph, degree_bound, dumps_graph, loads_graph
from .holonomy import Cycle, gauge_reduce, holonomy
from .spectra import SOLVER_SEED, assemble_operator, dense_spectrum, \
    lowest_eigenvalue

USAGE_EXIT = 64
VALIDATION_EXIT = 2
INTERNAL_EXIT = 1


# ---------------------------------------------------------------------------
# report plumbing
# ---------------------------------------------------------------------------

def _sha256(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def _manifest(ctx: click.Context, inputs: dict[str, str],
              tolerances: dict[str, float], started: float) -> dict:
    opts = ctx.obj
    wall = round(time.perf_counter() - started, 6) if opts["timing"] else None
    return {
        "command": " ".join(["magspec", *opts["argv"]]),
        "version": __version__,
        "inputs": inputs,
        "tolerances": tolerances,
        "seeds": {"cli": opts["seed"], "solver": opts["solver_seed"]},
        "wall_time_s": wall,
    }


def _emit_json(payload: dict, out: Path | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit_csv(manifest: dict, comments: list[str], header: list[str],
              rows: list[tuple], out: Path | None) -> None:
    lines = ["# manifest: " + _canonical_json(manifest)]
    lines += [f"# {c}" for c in comments]
    lines.append(",".join(header))
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _load_graph_file(path: str) -> tuple[WeightedGraph, str]:
    """Parse a graph file; returns the graph and its canonical digest."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise GraphError(f"cannot read graph file {path}: {exc}") from exc
    try:
        graph = loads_graph(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"{path} is not valid JSON: {exc}") from exc
    return graph, _sha256(dumps_graph(graph))


def _parse_angle(text: str) -> float:
    lowered = text.strip().lower()
    if lowered == "pi":
        return math.pi
    if lowered == "-pi":
        return -math.pi
    try:
        return float(text)
    except ValueError:
        raise click.UsageError(f"cannot parse angle {text!r}; use a float or 'pi'")


def common_options(f):
    f = click.option("--out", type=click.Path(dir_okay=False), default=None,
                     help="Write the report to this file instead of stdout.")(f)
    f = click.option("--seed", type=int, default=0, show_default=True,
                     help="Seed for randomized internals.")(f)
    f = click.option("--timing", is_flag=True, default=False,
                     help="Record wall time in the manifest (breaks byte determinism).")(f)
    return f


@click.group(name="magspec")
@click.pass_context
def cli(ctx: click.Context) -> None:
    """Spectral toolkit for magnetic operators on weighted graphs."""
    ctx.ensure_object(dict)


def _register(ctx: click.Context, seed: int, timing: bool) -> float:
    """Store per-command options on the context; returns the start time."""
    ctx.obj["seed"] = seed
    ctx.obj["solver_seed"] = SOLVER_SEED ^ seed
    ctx.obj["timing"] = timing
    return time.perf_counter()


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

@cli.command()
@click.argument("graph_file", type=click.Path(dir_okay=False))
@common_options
@click.pass_context
def validate(ctx, graph_file, out, seed, timing):
    """Check a graph file; exit 2 with a diagnostic naming the bad element."""
    started = _register(ctx, seed, timing)
    graph, digest = _load_graph_file(graph_file)
    payload = {
        "valid": True,
        "vertices": graph.n_vertices,
        "edges": graph.n_edges,
        "degree_bound": degree_bound(graph),
        "manifest": _manifest(ctx, {"graph": digest}, {}, started),
    }
    _emit_json(payload, out)


@cli.command()
@click.argument("graph_file", type=click.Path(dir_okay=False))
@click.option("--tol", type=float, default=1e-10, show_default=True,
              help="Residual tolerance of the eigensolver.")
@common_options
@click.pass_context
def bnorm(ctx, graph_file, tol, out, seed, timing):
    """Field norm of the graph's potential (unit-weight lowest eigenvalue)."""
    started = _register(ctx, seed, timing)
    graph, digest = _load_graph_file(graph_file)
    result = lowest_eigenvalue(assemble_operator(graph.unit_weights()),
                               tol=tol, seed=ctx.obj["solver_seed"])
    payload = {
        "lambda_min": result.lambda_min,
        "residual": result.residual,
        "iterations": result.iterations,
        "manifest": _manifest(ctx, {"graph": digest}, {"tol": tol}, started),
    }
    _emit_json(payload, out)


@cli.command()
@click.argument("graph_file", type=click.Path(dir_okay=False))
@click.option("--dense/--no-dense", "dense", default=True, show_default=True,
              help="Use dense eigendecomposition for the full spectrum.")
@common_options
@click.pass_context
def spectrum(ctx, graph_file, dense, out, seed, timing):
    """All eigenvalues of the weighted magnetic operator, ascending, as CSV."""
    started = _register(ctx, seed, timing)
    if not dense:
        raise click.UsageError("only the dense full-spectrum mode is available")
    graph, digest = _load_graph_file(graph_file)
    values = dense_spectrum(assemble_operator(graph))
    manifest = _manifest(ctx, {"graph": digest}, {}, started)
    _emit_csv(manifest, [], ["eigenvalue"],
              [(float(v),) for v in values], out)


@cli.command(name="holonomy")
@click.argument("graph_file", type=click.Path(dir_okay=False))
@click.option("--cycle", "cycle_text", required=True,
              help="Comma-separated vertex ids of a closed cycle, e.g. '0,1,2'.")
@common_options
@click.pass_context
def holonomy_cmd(ctx, graph_file, cycle_text, out, seed, timing):
    """Holonomy of the graph's potential along a vertex cycle."""
    started = _register(ctx, seed, timing)
    graph, digest = _load_graph_file(graph_file)
    try:
        vertices = [int(v) for v in cycle_text.split(",")]
    except ValueError:
        raise click.UsageError(f"--cycle expects comma-separated integers, got {cycle_text!r}")
    if len(vertices) < 3:
        raise click.UsageError("--cycle needs at least 3 vertices")
    try:
        cycle = Cycle.from_vertices(vertices)
        angle = holonomy(graph, cycle)
    except ValueError as exc:
        raise GraphError(str(exc)) from exc
    payload = {
        "cycle": vertices,
        "holonomy": angle,
        "manifest": _manifest(ctx, {"graph": digest}, {}, started),
    }
    _emit_json(payload, out)


@cli.command(name="gauge-reduce")
@click.argument("graph_file", type=click.Path(dir_okay=False))
@common_options
@click.pass_context
def gauge_reduce_cmd(ctx, graph_file, out, seed, timing):
    """Gauge function and reduced potential (zero on a spanning tree)."""
    started = _register(ctx, seed, timing)
    graph, digest = _load_graph_file(graph_file)
    sigma, reduced = gauge_reduce(graph)
    payload = {
        "sigma": [[x, sigma[x]] for x in sorted(sigma)],
        "alpha_reduced": [{"u": u, "v": v, "alpha": reduced[(u, v)]}
                          for u, v in sorted(reduced)],
        "manifest": _manifest(ctx, {"graph": digest}, {}, started),
    }
    _emit_json(payload, out)


@cli.command()
@click.argument("graph_file", type=click.Path(dir_okay=False))
@click.option("--k", type=int, default=1, show_default=True,
              help="Combinatorial radius of the covering balls.")
@common_options
@click.pass_context
def cover(ctx, graph_file, k, out, seed, timing):
    """Covering of the graph by induced k-balls, as JSON."""
    started = _register(ctx, seed, timing)
    if k < 1:
        raise click.UsageError(f"--k must be >= 1, got {k}")
    graph, digest = _load_graph_file(graph_file)
    covering = ball_covering(graph, k)
    check = validate_covering(graph, covering)
    payload = {
        "provenance": covering.provenance,
        "degree": covering.degree,
        "is_good": check.is_good,
        "empirical_max_multiplicity": check.max_multiplicity,
        "subgraphs": [
            {"vertices": sorted(sub.vertices),
             "edges": [list(e) for e in sorted(sub.edges)]}
            for sub in covering.subgraphs
        ],
        "manifest": _manifest(ctx, {"graph": digest}, {}, started),
    }
    _emit_json(payload, out)


def _load_cover_file(path: str) -> tuple[GoodCovering, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise GraphError(f"cannot read covering file {path}: {exc}") from exc
    try:
        data = json.loads(text)
        subs = tuple(
            Subgraph(frozenset(item["vertices"]),
                     frozenset((min(u, v), max(u, v)) for u, v in item["edges"]))
            for item in data["subgraphs"])
        covering = GoodCovering(subs, int(data["degree"]),
                                provenance=str(data.get("provenance", "user")))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise GraphFormatError(f"{path} is not a covering document: {exc}") from exc
    canonical = _canonical_json({
        "degree": covering.degree,
        "subgraphs": [{"vertices": sorted(s.vertices),
                       "edges": [list(e) for e in sorted(s.edges)]}
                      for s in covering.subgraphs],
    })
    return covering, _sha256(canonical)


@cli.command(name="effective-potential")
@click.argument("graph_file", type=click.Path(dir_okay=False))
@click.option("--cover", "cover_file", required=True,
              type=click.Path(dir_okay=False), help="Covering JSON file.")
@click.option("--tol", type=float, default=1e-10, show_default=True)
@common_options
@click.pass_context
def effective_potential_cmd(ctx, graph_file, cover_file, tol, out, seed, timing):
    """Per-vertex effective potential of a covering, as CSV."""
    started = _register(ctx, seed, timing)
    graph, graph_digest = _load_graph_file(graph_file)
    covering, cover_digest = _load_cover_file(cover_file)
    potential = effective_potential(graph, covering, tol=tol)
    rows = [(x, potential.values[x], len(potential.breakdown[x]))
            for x in graph.vertex_ids]
    manifest = _manifest(ctx, {"graph": graph_digest, "cover": cover_digest},
                         {"tol": tol}, started)
    _emit_csv(manifest, [], ["vertex", "w", "subgraph_count"], rows, out)


@cli.command(name="esa-check")
@click.option("--family", "family_name", required=True,
              type=click.Choice(["ladder"]), help="Built-in graph family.")
@click.option("--a", "a", type=float, required=True, help="Edge weight exponent.")
@click.option("--b", "b", type=float, required=True, help="Vertex weight exponent.")
@click.option("--omega", "flux_text", default="pi", show_default=True,
              help="Holonomy per square; a float or 'pi'.")
@click.option("--radius", type=int, required=True, help="Truncation radius.")
@click.option("--covering", type=click.Choice(["square", "ball"]),
              default="square", show_default=True)
@click.option("--k", type=int, default=1, show_default=True,
              help="Ball radius when --covering ball.")
@click.option("--tol", type=float, default=1e-10, show_default=True)
@common_options
@click.pass_context
def esa_check(ctx, family_name, a, b, flux_text, radius, covering, k, tol,
              out, seed, timing):
    """Audit the self-adjointness criterion on a truncated family."""
    started = _register(ctx, seed, timing)
    flux = _parse_angle(flux_text)
    try:
        params = LadderParams(a=a, b=b, flux=flux)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    if radius < 4 * (k if covering == "ball" else 1):
        raise click.UsageError(f"--radius {radius} too small for this covering")
    report = ladder_criterion_check(params, radius, covering=covering, k=k, tol=tol)
    rows = []
    for row in report.rows:
        l, eps = ladder_vertex_pos(row.vertex)
        rows.append({"vertex": row.vertex, "l": l, "eps": eps,
                     "w": _json_safe(row.w), "d": _json_safe(row.d),
                     "deficit": _json_safe(row.deficit)})
    payload = {
        "family": family_name,
        "params": {"a": a, "b": b, "flux": flux},
        "radius": report.radius,
        "degree_bound": report.degree,
        "core_size": report.core_size,
        "sup_deficit": _json_safe(report.sup_deficit),
        "bound": _json_safe(report.bound),
        "verdict": report.verdict,
        "regime": classify_regime(params),
        "rows": rows,
        "manifest": _manifest(ctx, {}, {"tol": tol}, started),
    }
    _emit_json(payload, out)


@cli.command()
@click.option("--a", "a", type=float, required=True, help="Edge weight exponent.")
@click.option("--b", "b", type=float, required=True, help="Vertex weight exponent.")
@click.option("--omega", "flux_text", default="pi", show_default=True,
              help="Holonomy per square; a float or 'pi'.")
@click.option("--radius", type=int, default=200, show_default=True)
@click.option("--sweep-l", "sweep_text", default=None,
              help="Column range lo:hi (default 1 to radius/2).")
@click.option("--tol", type=float, default=1e-10, show_default=True)
@common_options
@click.pass_context
def ladder(ctx, a, b, flux_text, radius, sweep_text, tol, out, seed, timing):
    """Per-column audit table of the ladder family, as CSV."""
    started = _register(ctx, seed, timing)
    flux = _parse_angle(flux_text)
    try:
        params = LadderParams(a=a, b=b, flux=flux)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    if radius < 1:
        raise click.UsageError(f"--radius must be >= 1, got {radius}")
    if sweep_text is None:
        l_range = None
    else:
        try:
            lo, hi = (int(part) for part in sweep_text.split(":"))
        except ValueError:
            raise click.UsageError(f"--sweep-l expects lo:hi, got {sweep_text!r}")
        l_range = (lo, hi)
    try:
        rows = ladder_sweep(params, radius, l_range, tol=tol)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    manifest = _manifest(ctx, {}, {"tol": tol}, started)
    _emit_csv(manifest, [f"regime: {classify_regime(params)}"],
              ["l", "w_effective", "w_closed_form", "d_frontier", "deficit"],
              rows, out)


# ---------------------------------------------------------------------------
# entry points
# ---------------------------------------------------------------------------

def main(argv: list[str] | None = None) -> int:
    """Run the CLI; returns the process exit code."""
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    try:
        cli.main(args=argv, standalone_mode=False, obj={"argv": argv})
        return 0
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return USAGE_EXIT
    except click.exceptions.Exit as exc:  # --help and friends
        return int(exc.exit_code)
    except click.Abort:
        return INTERNAL_EXIT
    except GraphError as exc:
        click.echo(f"validation error: {exc}", err=True)
        return VALIDATION_EXIT
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports everything
        click.echo(f"internal error: {exc}", err=True)
        return INTERNAL_EXIT


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
