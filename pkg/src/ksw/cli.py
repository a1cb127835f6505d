"""Command line front end.

Thin client over the handler layer: each verb parses its input file, calls
the matching handler, prints either a human summary or (with ``--json``) the
canonical JSON report, and exits with the handler's code.  0 means the
checked property holds, 1 means it decidedly fails, 2 means the input was
rejected or the question could not be decided.

The ``wick`` verb seeds its search from the ``KSW_SEED`` environment
variable so runs are reproducible byte for byte.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .kreinlin import DEFAULT_TOL
from .serialization import canonical_dumps
from .service import handlers
from .service.handlers import DEMOS, ERROR, HandlerError


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        err = click.ClickException(f"{path}: invalid JSON: {exc}")
        err.exit_code = ERROR  # rejected input is code 2, not a decided failure
        raise err


def _emit(code: int, report: dict, as_json: bool, lines) -> None:
    if as_json:
        click.echo(canonical_dumps(report))
    else:
        for line in lines(report):
            click.echo(line)
    sys.exit(code)


def _run(fn, *args, as_json: bool, lines) -> None:
    try:
        code, report = fn(*args)
    except HandlerError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(ERROR)
    _emit(code, report, as_json, lines)


def _status(flag: bool) -> str:
    return "ok" if flag else "FAIL"


def _check_lines(checks: list[dict]) -> list[str]:
    out = []
    for c in checks:
        note = f"  ({c['note']})" if c.get("note") else ""
        out.append(f"  {c['name']:<34} {_status(c['ok'])}  residual {c['residual']:.3e}{note}")
    return out


def _axiom_lines(report: dict) -> list[str]:
    signs = report["signs"]
    head = (
        f"{report['signature']} structure, dim {report['dim']}, KO dimension {report['ko_dim']}: "
        f"signs (eps, eps'', kappa) = ({signs['epsilon']:+d}, {signs['epsilon_pp']:+d}, {signs['kappa']:+d})"
    )
    lines = [head, *_check_lines(report["checks"])]
    lines.append("axioms: " + ("PASS" if report["ok"] else "FAIL"))
    return lines


def _distance_lines(report: dict) -> list[str]:
    return [f"d({report['source']}, {report['target']}) = {report['distance']}"]


def _potential_lines(pot: dict) -> list[str]:
    return [f"  {v}: {val}" for v, val in pot.items()]


def _causality_lines(report: dict) -> list[str]:
    if report["verdict"] == "StablyCausal":
        lines = ["stably causal; global time function:"]
        lines += _potential_lines(report["potential"])
        lines += _check_lines(report["orientation_checks"])
        lines.append("orientation form: " + _status(report["orientation_ok"]))
        return lines
    cyc = " -> ".join(str(v) for v in report["cycle"])
    return [
        "not stably causal",
        f"  future-directed cycle: {cyc}",
        f"  cycle integral of the time form: {report['cycle_integral']:g}",
    ]


def _reconstruct_lines(report: dict) -> list[str]:
    lines = [
        f"order-one reconstructibility: {_status(report['reconstructible'])}",
        f"  faithfulness: {_status(report['faithful'])} (worst residual {report['worst_residual']:.3e})",
    ]
    wit = report.get("x_closure_witness")
    if wit:
        lines.append(
            f"  x-closure fails at vertex {wit['vertex']} (residual {wit['residual']:.3e}),"
            " so the answer is not an algebra artifact"
        )
    return lines


def _wick_lines(report: dict) -> list[str]:
    fwd = report["forward"]
    lines = [
        f"rotation to euclidean: KO {fwd['ko_dim_spacetime']} -> {fwd['ko_dim_euclidean']}, "
        f"axioms {_status(fwd['axioms_ok'])}",
        *_check_lines(fwd["checks"]),
        "round trip residuals:",
    ]
    for name, val in report["round_trip_residuals"].items():
        lines.append(f"  {name:<10} {val:.3e}")
    form = report["distinguished_form"]
    if form["found"]:
        lines.append(
            "distinguished form: found"
            f" (normalized {_status(form['normalized'])},"
            f" imaginary {_status(form['imaginary'])},"
            f" membership {_status(form['membership'])})"
        )
    else:
        lines.append("distinguished form: none found")
    lines.append("wick rotation: " + ("PASS" if report["ok"] else "FAIL"))
    return lines


def _theorem6_lines(report: dict) -> list[str]:
    conn = report["connection"]
    lines = ["edge and connection checks:", *_check_lines(report["checks"])]
    lines.append(
        "  connection: "
        + ", ".join(
            f"{k} {_status(conn[k])}"
            for k in ("metric", "spin_preserving", "orientation_preserving", "clifford")
        )
    )
    ax = report.get("axioms")
    if ax:
        lines.append(
            f"assembled structure ({ax['signature']}, KO {ax['ko_dim']}):"
        )
        lines += _check_lines(ax["checks"])
    lines.append(f"vectorial: {report['vectorial']}, complete: {report['complete']}")
    lines.append("split structure: " + ("PASS" if report["ok"] else "FAIL"))
    return lines


def _split_reconstruct_lines(report: dict) -> list[str]:
    if report["verdict"] == "Reconstructible":
        lines = ["reconstructible as a spacetime"]
        if report.get("field"):
            lines.append("  timelike field (per vertex):")
            for v, vec in report["field"].items():
                coords = ", ".join(f"{x:g}" for x in vec)
                lines.append(f"    {v}: [{coords}]")
        else:
            lines.append("  dimension 2: reconstructible unconditionally")
    else:
        lines = ["not reconstructible", f"  reason: {report['reason']}"]
    cross = report["cross_check"]
    lines.append(
        f"  independent form check: {_status(cross['ok'])} (residual {cross['worst_residual']:.3e})"
    )
    return lines


def _split_causality_lines(report: dict) -> list[str]:
    lines = ["edge tangent types: " + ", ".join(report["edge_types"])]
    verdict = report["verdict"]
    if verdict == "StablyCausal":
        lines.append("stably causal; potentials (f, h) per vertex:")
        fs, hs = report["potential"]["f"], report["potential"]["h"]
        for v in fs:
            lines.append(f"  {v}: f = {fs[v]}, h = {hs[v]}")
        lines.append("  per-edge margins: " + "; ".join(f"({a}, {b})" for a, b in report["margins"]))
    elif verdict == "NotStablyCausal":
        lines.append("not stably causal")
        if report.get("cycle"):
            lines.append("  future-directed cycle: " + " -> ".join(str(v) for v in report["cycle"]))
        if report.get("certificate"):
            combo = ", ".join(
                f"{report['row_labels'][int(i)]} x {m}" for i, m in report["certificate"].items()
            )
            lines.append(f"  infeasibility certificate: {combo}")
        if report.get("note"):
            lines.append(f"  note: {report['note']}")
    else:
        lines.append(f"indeterminate: {report['note']}")
    return lines


def _mvs_lines(report: dict) -> list[str]:
    lines = [
        f"embedding identity: {_status(report['identity_ok'])};"
        f" averaging projector: {_status(report['projector_ok'])}",
        f"graph regular: {report['regular']}; single proportionality factor: {report['consistent']}",
        "per-vertex factors (computed vs -i deg/2):",
    ]
    for v in report["factors"]:
        fr, fi = report["factors"][v]
        cr, ci = report["claimed"][v]
        lines.append(f"  {v}: {fr:+g}{fi:+g}i   vs   {cr:+g}{ci:+g}i")
    lines.append(f"matches -i deg/2: {report['matches_claimed']}")
    if report.get("note"):
        lines.append(f"note: {report['note']}")
    return lines


def _demo_lines(report: dict) -> list[str]:
    body = json.dumps(
        {k: v for k, v in report.items() if k not in ("kind", "demo", "ok")},
        indent=2,
        default=str,
    )
    verdict = "PASS" if report["ok"] else "FAIL"
    return [f"demo {report['demo']}: {verdict}", body]


_json_flag = click.option("--json", "as_json", is_flag=True, help="emit the canonical JSON report")
_tol_opt = click.option("--tolerance", type=float, default=DEFAULT_TOL, show_default=True)


@click.group()
def main() -> None:
    """Verify and analyse indefinite spectral structures on graphs."""


@main.command()
@click.argument("structure_file", type=click.Path(exists=True, dir_okay=False))
@_tol_opt
@click.option(
    "--signature",
    type=click.Choice(["euclidean", "lorentzian", "antilorentzian"]),
    default=None,
    help="check the axioms against this signature instead of the declared one",
)
@_json_flag
def verify(structure_file: str, tolerance: float, signature: str | None, as_json: bool) -> None:
    """Check all axioms of a stored spectral structure."""
    data = _read_json(structure_file)
    _run(handlers.handle_verify, data, tolerance, signature, as_json=as_json, lines=_axiom_lines)


@main.command()
@click.argument("graph_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("source")
@click.argument("target")
@_json_flag
def distance(graph_file: str, source: str, target: str, as_json: bool) -> None:
    """Spectral distance between two vertices of a weighted graph."""
    data = _read_json(graph_file)
    _run(handlers.handle_distance, data, source, target, as_json=as_json, lines=_distance_lines)


@main.command()
@click.argument("graph_file", type=click.Path(exists=True, dir_okay=False))
@_tol_opt
@_json_flag
def causality(graph_file: str, tolerance: float, as_json: bool) -> None:
    """Decide stable causality of the canonical spacetime on a graph."""
    data = _read_json(graph_file)
    _run(handlers.handle_causality, data, tolerance, as_json=as_json, lines=_causality_lines)


@main.command()
@click.argument("graph_file", type=click.Path(exists=True, dir_okay=False))
@_tol_opt
@_json_flag
def reconstruct(graph_file: str, tolerance: float, as_json: bool) -> None:
    """Check order-one reconstructibility of the canonical spacetime."""
    data = _read_json(graph_file)
    _run(handlers.handle_reconstruct, data, tolerance, as_json=as_json, lines=_reconstruct_lines)


@main.command()
@click.argument("graph_file", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--sigma",
    default=None,
    help="comma-separated +1/-1 per edge selecting the distinguished form branch",
)
@_tol_opt
@_json_flag
def wick(graph_file: str, sigma: str | None, tolerance: float, as_json: bool) -> None:
    """Rotate the canonical spacetime to euclidean and back, with certificates."""
    data = _read_json(graph_file)
    parsed = None
    if sigma is not None:
        try:
            parsed = [float(x) for x in sigma.split(",")]
        except ValueError:
            raise click.BadParameter("expected comma-separated numbers", param_hint="--sigma")
    seed = os.environ.get("KSW_SEED")
    seed_val = int(seed) if seed else 0
    _run(
        handlers.handle_wick, data, parsed, tolerance, seed_val, as_json=as_json, lines=_wick_lines
    )


@main.group()
def split() -> None:
    """Operations on split Dirac structures over directed graphs."""


@split.command(name="verify")
@click.argument("split_file", type=click.Path(exists=True, dir_okay=False))
@_tol_opt
@_json_flag
def split_verify(split_file: str, tolerance: float, as_json: bool) -> None:
    """Check the defining identities and the induced connection."""
    data = _read_json(split_file)
    _run(handlers.handle_split_verify, data, tolerance, as_json=as_json, lines=_theorem6_lines)


@split.command(name="reconstruct")
@click.argument("split_file", type=click.Path(exists=True, dir_okay=False))
@_tol_opt
@_json_flag
def split_reconstruct(split_file: str, tolerance: float, as_json: bool) -> None:
    """Decide whether the split structure is a spacetime in disguise."""
    data = _read_json(split_file)
    _run(
        handlers.handle_split_reconstruct,
        data,
        tolerance,
        as_json=as_json,
        lines=_split_reconstruct_lines,
    )


@split.command(name="causality")
@click.argument("split_file", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--method",
    type=click.Choice(["auto", "criterion", "fourier_motzkin"]),
    default="auto",
    show_default=True,
)
@_tol_opt
@_json_flag
def split_causality(split_file: str, method: str, tolerance: float, as_json: bool) -> None:
    """Decide stable causality of a four-dimensional split structure."""
    data = _read_json(split_file)
    _run(
        handlers.handle_split_causality,
        data,
        method,
        tolerance,
        as_json=as_json,
        lines=_split_causality_lines,
    )


@main.command(name="mvs-compare")
@click.argument("split_file", type=click.Path(exists=True, dir_okay=False))
@_tol_opt
@_json_flag
def mvs_compare(split_file: str, tolerance: float, as_json: bool) -> None:
    """Compare the split Dirac operator against the lattice one on a graph."""
    data = _read_json(split_file)
    _run(handlers.handle_mvs_compare, data, tolerance, as_json=as_json, lines=_mvs_lines)


@main.command()
@click.argument("name", type=click.Choice(list(DEMOS)))
@_tol_opt
@_json_flag
def demo(name: str, tolerance: float, as_json: bool) -> None:
    """Run a named worked example end to end."""
    _run(handlers.handle_demo, name, tolerance, as_json=as_json, lines=_demo_lines)


if __name__ == "__main__":
    main()
