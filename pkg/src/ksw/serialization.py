"""Shared JSON codecs and the validated input loader.

Matrices travel as row-major arrays of [re, im] pairs, rational weights as
"p/q" strings, and every loader failure carries a JSON-pointer location so a
bad file points at its own defect.  Output goes through `canonical_dumps`,
which fixes key order and spacing; identical objects therefore serialize to
identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .clifford import build_clifford, spin_lift
from .graphs import Edge, WeightedDigraph, format_weight, parse_weight
from .kreinlin import AntilinearOperator, KreinSpace
from .spectral import AlgebraRep, SpectralStructure
from .splitdirac import SplitDiracStructure, build_split

INPUT_KINDS = ("graph", "structure", "split")


class SchemaError(ValueError):
    """Input file violates the schema; `pointer` locates the offence."""

    def __init__(self, pointer: str, message: str):
        self.pointer = pointer or "/"
        super().__init__(f"at {self.pointer}: {message}")


def _expect(condition: bool, pointer: str, message: str) -> None:
    if not condition:
        raise SchemaError(pointer, message)


def _get(obj: dict, key: str, pointer: str):
    _expect(isinstance(obj, dict), pointer, "expected an object")
    _expect(key in obj, pointer, f"missing required key {key!r}")
    return obj[key]


def _check_keys(obj: dict, allowed: set[str], pointer: str) -> None:
    extra = set(obj) - allowed
    _expect(not extra, pointer, f"unknown keys {sorted(extra)}")


# -- scalars and matrices ------------------------------------------------------


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def fraction_from_json(value, pointer: str) -> Fraction:
    try:
        out = parse_weight(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(pointer, str(exc)) from exc
    return out


def fraction_to_json(value: Fraction) -> str:
    return format_weight(Fraction(value))


def matrix_from_json(data, pointer: str) -> np.ndarray:
    """Row-major [re, im] pairs; rows must be equal length and nonempty."""
    _expect(isinstance(data, list) and data, pointer, "expected a nonempty array of rows")
    rows = []
    width = None
    for i, row in enumerate(data):
        _expect(isinstance(row, list) and row, f"{pointer}/{i}", "expected a nonempty row array")
        if width is None:
            width = len(row)
        _expect(len(row) == width, f"{pointer}/{i}", f"row length {len(row)} != {width}")
        entries = []
        for k, cell in enumerate(row):
            cp = f"{pointer}/{i}/{k}"
            _expect(
                isinstance(cell, list) and len(cell) == 2 and all(_is_number(x) for x in cell),
                cp,
                "expected an [re, im] pair",
            )
            entries.append(complex(cell[0], cell[1]))
        rows.append(entries)
    return np.array(rows, dtype=complex)


def matrix_to_json(mat) -> list:
    mat = np.asarray(mat, dtype=complex)
    return [[[float(np.real(x)), float(np.imag(x))] for x in row] for row in mat]


def real_vector_from_json(data, pointer: str) -> np.ndarray:
    _expect(
        isinstance(data, list) and data and all(_is_number(x) for x in data),
        pointer,
        "expected a nonempty array of numbers",
    )
    return np.array(data, dtype=float)


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


# -- graphs --------------------------------------------------------------------


def graph_from_json(data, pointer: str = "") -> WeightedDigraph:
    _expect(isinstance(data, dict), pointer, "expected a graph object")
    _check_keys(data, {"vertices", "edges"}, pointer)
    raw_vertices = _get(data, "vertices", pointer)
    _expect(isinstance(raw_vertices, list) and raw_vertices, f"{pointer}/vertices", "expected a nonempty array")
    for i, v in enumerate(raw_vertices):
        _expect(
            isinstance(v, (str, int)) and not isinstance(v, bool),
            f"{pointer}/vertices/{i}",
            "vertex labels must be strings or integers",
        )
    raw_edges = _get(data, "edges", pointer)
    _expect(isinstance(raw_edges, list), f"{pointer}/edges", "expected an array")
    edges = []
    for i, rec in enumerate(raw_edges):
        ep = f"{pointer}/edges/{i}"
        _expect(isinstance(rec, dict), ep, "expected an edge object")
        _check_keys(rec, {"src", "dst", "weight", "phase"}, ep)
        weight = fraction_from_json(_get(rec, "weight", ep), f"{ep}/weight")
        _expect(weight > 0, f"{ep}/weight", "edge weights must be positive")
        phase = rec.get("phase")
        if phase is not None:
            _expect(_is_number(phase), f"{ep}/phase", "expected a number")
            phase = float(phase)
        edges.append(Edge(_get(rec, "src", ep), _get(rec, "dst", ep), weight, phase))
    try:
        return WeightedDigraph(tuple(raw_vertices), tuple(edges))
    except ValueError as exc:
        raise SchemaError(f"{pointer}/edges", str(exc)) from exc


def graph_to_json(g: WeightedDigraph) -> dict:
    return g.to_json_dict()


# -- full spectral structures ---------------------------------------------------


def structure_from_json(data, pointer: str = "") -> SpectralStructure:
    _expect(isinstance(data, dict), pointer, "expected a structure object")
    allowed = {"signature", "ko_dim", "j", "dirac", "real", "chi", "algebra", "labels"}
    _check_keys(data, allowed, pointer)
    signature = _get(data, "signature", pointer)
    _expect(
        signature in ("euclidean", "antilorentzian", "lorentzian"),
        f"{pointer}/signature",
        f"unknown signature {signature!r}",
    )
    ko_dim = _get(data, "ko_dim", pointer)
    _expect(isinstance(ko_dim, int) and not isinstance(ko_dim, bool), f"{pointer}/ko_dim", "expected an integer")
    j = matrix_from_json(_get(data, "j", pointer), f"{pointer}/j")
    dirac = matrix_from_json(_get(data, "dirac", pointer), f"{pointer}/dirac")
    real = matrix_from_json(_get(data, "real", pointer), f"{pointer}/real")
    chi = matrix_from_json(_get(data, "chi", pointer), f"{pointer}/chi")
    raw_algebra = _get(data, "algebra", pointer)
    _expect(isinstance(raw_algebra, list) and raw_algebra, f"{pointer}/algebra", "expected a nonempty array")
    basis = tuple(
        matrix_from_json(mat, f"{pointer}/algebra/{i}") for i, mat in enumerate(raw_algebra)
    )
    labels = data.get("labels", ())
    if labels:
        _expect(
            isinstance(labels, list) and all(isinstance(x, str) for x in labels),
            f"{pointer}/labels",
            "expected an array of strings",
        )
    try:
        return SpectralStructure(
            space=KreinSpace(j),
            algebra=AlgebraRep(basis, tuple(labels)),
            dirac=dirac,
            real=AntilinearOperator(real),
            chi=chi,
            signature=signature,
            ko_dim=ko_dim,
        )
    except ValueError as exc:
        raise SchemaError(pointer, str(exc)) from exc


def structure_to_json(s: SpectralStructure) -> dict:
    return {
        "signature": s.signature,
        "ko_dim": s.ko_dim,
        "j": matrix_to_json(s.space.j),
        "dirac": matrix_to_json(s.dirac),
        "real": matrix_to_json(s.real.m),
        "chi": matrix_to_json(s.chi),
        "algebra": [matrix_to_json(a) for a in s.algebra.basis],
        "labels": list(s.algebra.labels),
    }


# -- split Dirac structures -------------------------------------------------------


def _gamma_from_json(data, rep, pointer: str) -> np.ndarray:
    _expect(isinstance(data, dict), pointer, 'expected {"vector": [..]} or {"matrix": [[..]]}')
    _check_keys(data, {"vector", "matrix"}, pointer)
    _expect(len(data) == 1, pointer, "exactly one of 'vector' or 'matrix' is required")
    if "vector" in data:
        v = real_vector_from_json(data["vector"], f"{pointer}/vector")
        _expect(v.shape == (rep.n,), f"{pointer}/vector", f"expected {rep.n} components")
        return rep.rho(v)
    return matrix_from_json(data["matrix"], f"{pointer}/matrix")


def _transport_from_json(data, rep, pointer: str) -> np.ndarray:
    _expect(isinstance(data, dict), pointer, 'expected {"spinor": [[..]]} or {"lorentz": [[..]]}')
    _check_keys(data, {"spinor", "lorentz"}, pointer)
    _expect(len(data) == 1, pointer, "exactly one of 'spinor' or 'lorentz' is required")
    if "spinor" in data:
        return matrix_from_json(data["spinor"], f"{pointer}/spinor")
    lam = matrix_from_json(data["lorentz"], f"{pointer}/lorentz")
    _expect(lam.shape == (rep.n, rep.n), f"{pointer}/lorentz", f"expected a {rep.n}x{rep.n} matrix")
    _expect(float(np.max(np.abs(np.imag(lam)))) == 0.0, f"{pointer}/lorentz", "Lorentz matrices are real")
    try:
        return spin_lift(np.real(lam), rep)
    except ValueError as exc:
        raise SchemaError(f"{pointer}/lorentz", str(exc)) from exc


def split_from_json(data, pointer: str = "") -> SplitDiracStructure:
    _expect(isinstance(data, dict), pointer, "expected a split-structure object")
    _check_keys(data, {"graph", "n", "edges"}, pointer)
    graph = graph_from_json(_get(data, "graph", pointer), f"{pointer}/graph")
    n = _get(data, "n", pointer)
    _expect(isinstance(n, int) and not isinstance(n, bool), f"{pointer}/n", "expected an integer")
    try:
        rep = build_clifford(n)
    except ValueError as exc:
        raise SchemaError(f"{pointer}/n", str(exc)) from exc
    raw_edges = _get(data, "edges", pointer)
    _expect(isinstance(raw_edges, list), f"{pointer}/edges", "expected an array")
    _expect(
        len(raw_edges) == len(graph.edges),
        f"{pointer}/edges",
        f"expected one record per graph edge ({len(graph.edges)}), got {len(raw_edges)}",
    )
    hs, gps, gms, deltas = [], [], [], []
    for i, rec in enumerate(raw_edges):
        ep = f"{pointer}/edges/{i}"
        _expect(isinstance(rec, dict), ep, "expected an edge-data object")
        _check_keys(rec, {"h", "gamma_plus", "gamma_minus", "delta"}, ep)
        hs.append(_transport_from_json(_get(rec, "h", ep), rep, f"{ep}/h"))
        gps.append(_gamma_from_json(_get(rec, "gamma_plus", ep), rep, f"{ep}/gamma_plus"))
        gms.append(_gamma_from_json(_get(rec, "gamma_minus", ep), rep, f"{ep}/gamma_minus"))
        if "delta" in rec:
            delta = fraction_from_json(rec["delta"], f"{ep}/delta")
            _expect(delta > 0, f"{ep}/delta", "delta must be positive")
            deltas.append(float(delta))
        else:
            deltas.append(float(graph.edges[i].weight))
    try:
        return build_split(graph, rep, hs, gps, gms, deltas)
    except ValueError as exc:
        raise SchemaError(f"{pointer}/edges", str(exc)) from exc


def split_to_json(s: SplitDiracStructure) -> dict:
    return {
        "graph": graph_to_json(s.graph),
        "n": s.rep.n,
        "edges": [
            {
                "h": {"spinor": matrix_to_json(s.h_plus[k])},
                "gamma_plus": {"matrix": matrix_to_json(s.gamma_plus[k])},
                "gamma_minus": {"matrix": matrix_to_json(s.gamma_minus[k])},
                "delta": fraction_to_json(Fraction(s.delta[k]).limit_denominator(10**9)),
            }
            for k in range(len(s.graph.edges))
        ],
    }


# -- entry point -----------------------------------------------------------------


_LOADERS = {
    "graph": graph_from_json,
    "structure": structure_from_json,
    "split": split_from_json,
}


def load_input(path, kind: str):
    """Parse and schema-validate one input file of the given kind."""
    if kind not in INPUT_KINDS:
        raise ValueError(f"unknown input kind {kind!r}; expected one of {INPUT_KINDS}")
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"invalid JSON: {exc}") from exc
    return _LOADERS[kind](data, "")
