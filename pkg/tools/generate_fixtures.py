"""Regenerate the shipped JSON fixtures under src/ksw/fixtures/.

Run from the repository root:  python3 tools/generate_fixtures.py

Everything here is deterministic; the rational boost (cosh, sinh) = (5/4, 3/4)
and rotation (cos, sin) = (3/5, 4/5) keep the Lorentz matrices exact in JSON.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ksw.clifford import build_clifford
from ksw.serialization import matrix_to_json

OUT = Path(__file__).resolve().parent.parent / "src" / "ksw" / "fixtures"

REP4 = build_clifford(4)
REP2 = build_clifford(2)

E0 = [1, 0, 0, 0]
SIGMA_PLUS_GAMMA = REP4.chi @ REP4.gamma[0]


def graph(vertices, arcs):
    return {
        "vertices": list(vertices),
        "edges": [{"src": a, "dst": b, "weight": "1"} for a, b in arcs],
    }


def identity_h(dim):
    return {"spinor": matrix_to_json(np.eye(dim))}


def timelike_edge(dim):
    return {
        "h": identity_h(dim),
        "gamma_plus": {"vector": E0},
        "gamma_minus": {"vector": E0},
    }


def sigma_plus_edge(dim):
    return {
        "h": identity_h(dim),
        "gamma_plus": {"matrix": matrix_to_json(SIGMA_PLUS_GAMMA)},
        "gamma_minus": {"matrix": matrix_to_json(-SIGMA_PLUS_GAMMA)},
    }


def lorentz_edge(lam):
    return {
        "h": {"lorentz": matrix_to_json(lam)},
        "gamma_plus": {"vector": [float(x) for x in (np.asarray(lam) @ E0)]},
        "gamma_minus": {"vector": E0},
    }


def write(name, obj):
    path = OUT / name
    path.write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n")
    print("wrote", path)


def main():
    OUT.mkdir(parents=True, exist_ok=True)

    write("single_edge.json", graph([1, 2], [(1, 2)]))
    write(
        "fig2_left.json",
        graph([1, 2, 3, 4], [(1, 2), (3, 1), (2, 4), (1, 4), (4, 3)]),
    )
    write(
        "fig2_right.json",
        graph([1, 2, 3, 4], [(1, 2), (1, 3), (2, 4), (1, 4), (3, 4)]),
    )

    d4 = REP4.dim
    boost = np.eye(4)
    boost[0, 0] = boost[1, 1] = 5 / 4
    boost[0, 1] = boost[1, 0] = 3 / 4
    rotation = np.eye(4)
    rotation[1, 1] = rotation[2, 2] = 3 / 5
    rotation[1, 2] = -4 / 5
    rotation[2, 1] = 4 / 5

    triangle = graph([1, 2, 3], [(1, 2), (2, 3), (3, 1)])
    write(
        "boost_triangle.json",
        {
            "graph": triangle,
            "n": 4,
            "edges": [timelike_edge(d4), timelike_edge(d4), lorentz_edge(boost)],
        },
    )
    write(
        "rotation_triangle.json",
        {
            "graph": triangle,
            "n": 4,
            "edges": [timelike_edge(d4), timelike_edge(d4), lorentz_edge(rotation)],
        },
    )

    write(
        "mixed4.json",
        {
            "graph": graph([1, 2, 3, 4], [(1, 2), (2, 3), (3, 4), (1, 4)]),
            "n": 4,
            "edges": [
                timelike_edge(d4),
                sigma_plus_edge(d4),
                timelike_edge(d4),
                sigma_plus_edge(d4),
            ],
        },
    )
    write(
        "figsc.json",
        {
            "graph": graph([1, 2, 3, 4, 5], [(2, 1), (4, 2), (5, 3), (1, 5), (4, 3)]),
            "n": 4,
            "edges": [
                timelike_edge(d4),
                timelike_edge(d4),
                timelike_edge(d4),
                sigma_plus_edge(d4),
                sigma_plus_edge(d4),
            ],
        },
    )

    d2 = REP2.dim
    spatial = {"vector": [0, 1]}

    def flat_edge():
        return {"h": identity_h(d2), "gamma_plus": dict(spatial), "gamma_minus": dict(spatial)}

    write(
        "mvs_flat.json",
        {
            "graph": graph([1, 2, 3, 4], [(1, 2), (2, 3), (3, 4), (4, 1)]),
            "n": 2,
            "edges": [flat_edge() for _ in range(4)],
        },
    )
    write(
        "mvs_nonregular.json",
        {
            "graph": graph([1, 2, 3], [(1, 2), (2, 3)]),
            "n": 2,
            "edges": [flat_edge() for _ in range(2)],
        },
    )


if __name__ == "__main__":
    main()
