"""Command-line front end: voltages, orbits, iso, fingerprint, canon, oracle.

Exit codes: 0 success, 2 parse/validation failure, 3 solver failure,
4 orbit verification mismatch, and for `iso` 0/1/5 for isomorphic-certified /
distinct-certified / possibly-isomorphic.  Validation and solver errors print
machine-readable JSON on stderr.  All floats in JSON output are serialized
as 17-significant-digit decimal strings.
"""

from __future__ import annotations

import hashlib
import json
import sys

import click

from . import oracle as oracle_mod
from . import signatures as sig_mod
from . import solver as solver_mod
from .errors import (
    BudgetExhaustedError,
    GraphError,
    KCanonError,
    NonFiniteError,
    SameSourceSinkError,
    TooLargeError,
)
from .graph import load_graph

VALIDATION_ERRORS = (GraphError, SameSourceSinkError, NonFiniteError, TooLargeError)


def _f(x: float) -> str:
    return format(float(x), ".17g")


def _fail(exc: Exception, code: int):
    name = type(exc).__name__
    if name.endswith("Error"):
        name = name[: -len("Error")]
    click.echo(
        json.dumps({"error": name, "message": str(exc)}, separators=(",", ":")),
        err=True,
    )
    sys.exit(code)


def _guard(fn):
    try:
        return fn()
    except BudgetExhaustedError:
        raise
    except VALIDATION_ERRORS as exc:
        _fail(exc, 2)
    except KCanonError as exc:
        _fail(exc, 3)


def _emit(doc: dict, fmt: str, text_lines):
    if fmt == "json":
        click.echo(json.dumps(doc, separators=(",", ":"), sort_keys=True))
    else:
        for line in text_lines:
            click.echo(line)


tol_option = click.option(
    "--tol",
    type=float,
    default=sig_mod.DEFAULT_TOL,
    envvar="KCANON_TOL",
    show_default=True,
    help="quantization tolerance (env KCANON_TOL; flag wins)",
)
format_option = click.option(
    "--format", "fmt", type=click.Choice(["json", "text"]), default="text"
)
budget_option = click.option(
    "--budget", type=int, default=sig_mod.DEFAULT_BUDGET, show_default=True,
    help="search node-expansion budget",
)


@click.group()
def main():
    """Resistor-network signatures for graph symmetry and isomorphism."""


@main.command()
@click.argument("graph_file", type=click.Path(exists=True))
@click.argument("a", type=int)
@click.argument("b", type=int)
@click.option(
    "--method",
    type=click.Choice(["grounded", "pseudoinverse", "universal-sink"]),
    default="grounded",
    show_default=True,
)
@click.option("--sink-weight", type=float, default=1.0, show_default=True)
@tol_option
@format_option
def voltages(graph_file, a, b, method, sink_weight, tol, fmt):
    """Solve the unit-current injection (A -> B) and report voltages/currents."""
    g = _guard(lambda: load_graph(graph_file))

    def solve():
        if method == "grounded":
            return solver_mod.solve_pair(solver_mod.build_system(g), a, b)
        if method == "pseudoinverse":
            return solver_mod.solve_pair_pseudoinverse(g, a, b)
        return solver_mod.solve_pair_universal_sink(g, a, b, sink_weight)

    profile = _guard(solve)
    currents = _guard(lambda: solver_mod.pair_currents(g, profile))
    residual = solver_mod.kcl_residual(g, profile)
    resistance = float(profile.v[a - 1] - profile.v[b - 1])
    doc = {
        "n": g.n,
        "m": g.m,
        "source": a,
        "sink": b,
        "method": profile.method,
        "approximate": profile.approximate,
        "voltages": [_f(x) for x in profile.v],
        "currents": [
            {"u": u, "v": v, "current": _f(i)}
            for (u, v, _), i in zip(g.edges, currents.currents)
        ],
        "effective_resistance": _f(resistance),
        "kcl_residual": _f(residual),
    }
    lines = [
        f"method: {profile.method}" + (" (approximate)" if profile.approximate else ""),
        f"effective resistance {a}-{b}: {_f(resistance)} ohm",
        f"KCL residual: {_f(residual)}",
        "node voltages:",
    ]
    lines += [f"  {k + 1}: {_f(x)}" for k, x in enumerate(profile.v)]
    lines.append("edge currents:")
    lines += [
        f"  {u}->{v}: {_f(i)}"
        for (u, v, _), i in zip(g.edges, currents.currents)
    ]
    _emit(doc, fmt, lines)


@main.command()
@click.argument("graph_file", type=click.Path(exists=True))
@click.option("--verify", is_flag=True, help="cross-check against the brute-force oracle (n <= 10)")
@tol_option
@format_option
def orbits(graph_file, verify, tol, fmt):
    """Group nodes into orbit-candidate classes by voltage signature."""
    g = _guard(lambda: load_graph(graph_file))
    part = _guard(lambda: sig_mod.orbit_partition(g, tol))
    sigs = {s.node: s for s in _guard(lambda: sig_mod.all_node_signatures(g, tol))}
    classes = []
    for cls in part.classes:
        sig = sigs[cls[0]]
        payload = json.dumps([_f(k * tol) for k in sig.values]).encode()
        classes.append(
            {"nodes": list(cls), "signature_sha256": hashlib.sha256(payload).hexdigest()}
        )
    doc = {"n": g.n, "m": g.m, "classes": classes}
    lines = ["orbit candidates:"]
    lines += [
        f"  {list(c['nodes'])} sig {c['signature_sha256'][:16]}" for c in classes
    ]
    if verify:
        report = _guard(lambda: oracle_mod.brute_force_automorphisms(g))
        oracle_classes = [list(o) for o in report.orbits]
        candidate_classes = sorted([list(c) for c in part.classes])
        match = sorted(oracle_classes) == candidate_classes
        doc["verify"] = {
            "oracle_orbits": oracle_classes,
            "match": match,
            "group_order": report.order,
        }
        lines.append(f"oracle orbits: {sorted(oracle_classes)} (group order {report.order})")
        lines.append(f"verify: {'match' if match else 'MISMATCH'}")
        if not match:
            _emit(doc, fmt, lines)
            sys.exit(4)
    _emit(doc, fmt, lines)


@main.command()
@click.argument("file1", type=click.Path(exists=True))
@click.argument("file2", type=click.Path(exists=True))
@tol_option
@budget_option
@format_option
def iso(file1, file2, tol, budget, fmt):
    """Screen two graphs for isomorphism; exit 0 iso / 1 distinct / 5 unknown."""
    g1 = _guard(lambda: load_graph(file1))
    g2 = _guard(lambda: load_graph(file2))
    verdict = _guard(lambda: sig_mod.iso_screen(g1, g2, tol, budget))
    doc = {"verdict": verdict.kind, "reason": verdict.reason}
    lines = [f"verdict: {verdict.kind} ({verdict.reason})"]
    if verdict.mapping is not None:
        doc["mapping"] = {str(k): v for k, v in sorted(verdict.mapping.items())}
        lines.append("mapping: " + ", ".join(
            f"{k}->{v}" for k, v in sorted(verdict.mapping.items())
        ))
    _emit(doc, fmt, lines)
    sys.exit(
        {
            sig_mod.IsoVerdict.ISOMORPHIC: 0,
            sig_mod.IsoVerdict.DISTINCT: 1,
            sig_mod.IsoVerdict.POSSIBLE: 5,
        }[verdict.kind]
    )


@main.command()
@click.argument("graph_file", type=click.Path(exists=True))
@tol_option
@format_option
def fingerprint(graph_file, tol, fmt):
    """Emit the canonical fingerprint serialization and its hash."""
    g = _guard(lambda: load_graph(graph_file))
    fp = _guard(lambda: sig_mod.fingerprint(g, tol))
    doc = {"fingerprint": json.loads(fp.to_json()), "sha256": fp.digest()}
    lines = [f"sha256: {fp.digest()}", fp.to_json()]
    _emit(doc, fmt, lines)


@main.command()
@click.argument("graph_file", type=click.Path(exists=True))
@tol_option
@budget_option
@format_option
def canon(graph_file, tol, budget, fmt):
    """Compute a canonical node ordering and canonical form."""
    g = _guard(lambda: load_graph(graph_file))
    lab = _guard(lambda: sig_mod.canonical_labeling(g, tol, budget))
    doc = {
        "order": list(lab.order),
        "form": [_f(x) for x in lab.form],
        "certified": lab.certified,
        "form_sha256": lab.digest(),
        "expansions": lab.expansions,
    }
    lines = [
        f"order: {list(lab.order)}",
        f"certified: {lab.certified}",
        f"form sha256: {lab.digest()}",
    ]
    _emit(doc, fmt, lines)


@main.group()
def oracle():
    """Brute-force / exact-arithmetic ground-truth queries (small graphs)."""


@oracle.command("solve")
@click.argument("graph_file", type=click.Path(exists=True))
@click.argument("a", type=int)
@click.argument("b", type=int)
@format_option
def oracle_solve(graph_file, a, b, fmt):
    """Exact rational voltages for unit current A -> B."""
    g = _guard(lambda: load_graph(graph_file))
    v = _guard(lambda: oracle_mod.exact_solve_pair(g, a, b))
    doc = {
        "source": a,
        "sink": b,
        "voltages": [str(x) for x in v],
        "voltages_float": [_f(x) for x in v],
    }
    lines = [f"  {k + 1}: {x}" for k, x in enumerate(v)]
    _emit(doc, fmt, lines)


@oracle.command("autos")
@click.argument("graph_file", type=click.Path(exists=True))
@format_option
def oracle_autos(graph_file, fmt):
    """Exhaustive automorphism group order and orbits."""
    g = _guard(lambda: load_graph(graph_file))
    report = _guard(lambda: oracle_mod.brute_force_automorphisms(g))
    doc = {
        "group_order": report.order,
        "orbits": [list(o) for o in report.orbits],
    }
    lines = [
        f"group order: {report.order}",
        f"orbits: {[list(o) for o in report.orbits]}",
    ]
    _emit(doc, fmt, lines)


@oracle.command("iso")
@click.argument("file1", type=click.Path(exists=True))
@click.argument("file2", type=click.Path(exists=True))
@format_option
def oracle_iso(file1, file2, fmt):
    """Exhaustive isomorphism check; exit 0 isomorphic / 1 proven distinct."""
    g1 = _guard(lambda: load_graph(file1))
    g2 = _guard(lambda: load_graph(file2))
    mapping = _guard(lambda: oracle_mod.brute_force_isomorphic(g1, g2))
    if mapping is None:
        _emit({"verdict": "proven-distinct"}, fmt, ["verdict: proven-distinct"])
        sys.exit(1)
    doc = {"verdict": "isomorphic", "mapping": {str(k): v for k, v in mapping.items()}}
    _emit(doc, fmt, ["verdict: isomorphic",
                     "mapping: " + ", ".join(f"{k}->{v}" for k, v in sorted(mapping.items()))])


if __name__ == "__main__":
    main()
