"""Random generators for graphs, matrices and split structures.

Seeded from the caller's rng; nothing here touches the verifiers, so a
structure built as "valid" is valid by construction, not by the code under
test agreeing with itself.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from scipy.linalg import expm

from ksw.clifford import CliffordRep, build_clifford, spin_lift
from ksw.graphs import Edge, WeightedDigraph
from ksw.splitdirac import SplitDiracStructure, build_split


def random_weight(rng) -> Fraction:
    return Fraction(int(rng.integers(1, 10)), int(rng.integers(1, 5)))


def random_graph(rng, max_vertices: int = 10, max_edges: int = 20) -> WeightedDigraph:
    """Connected, randomly oriented, rational weights; never parallel edges."""
    nv = int(rng.integers(2, max_vertices + 1))
    vertices = tuple(range(1, nv + 1))
    edges: list[Edge] = []
    used = set()
    for v in range(2, nv + 1):
        u = int(rng.integers(1, v))
        src, dst = (u, v) if rng.random() < 0.5 else (v, u)
        edges.append(Edge(src, dst, random_weight(rng)))
        used.add(frozenset((u, v)))
    extra = int(rng.integers(0, max(1, max_edges - len(edges) + 1)))
    for _ in range(extra):
        u, v = rng.choice(nv, size=2, replace=False) + 1
        pair = frozenset((int(u), int(v)))
        if pair in used:
            continue
        used.add(pair)
        edges.append(Edge(int(u), int(v), random_weight(rng)))
    return WeightedDigraph(vertices, tuple(edges))


def random_unitary(rng, dim: int) -> np.ndarray:
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def heisenberg_pair(rng, dim: int = 3) -> tuple[np.ndarray, np.ndarray]:
    """A pair with [A,[A,B]] = 0 and [A,B] nilpotent, up to a random unitary.

    Core: A = a E12 + c E13, B = b E23 + d E13 + f E12 gives [A,B] = ab E13,
    which is central for both.  Padding with commuting diagonals and scalar
    shifts preserves the hypothesis; unitary conjugation preserves traces.
    """
    if dim < 3:
        raise ValueError("need dim >= 3")

    def coeff() -> complex:
        return complex(rng.standard_normal(), rng.standard_normal())

    a = np.zeros((dim, dim), dtype=complex)
    b = np.zeros((dim, dim), dtype=complex)
    a[0, 1], a[0, 2] = coeff(), coeff()
    b[1, 2], b[0, 2], b[0, 1] = coeff(), coeff(), coeff()
    for k in range(3, dim):
        a[k, k] = coeff()
        b[k, k] = coeff()
    a += coeff() * np.eye(dim)
    b += coeff() * np.eye(dim)
    u = random_unitary(rng, dim)
    uh = np.conj(u).T
    return u @ a @ uh, u @ b @ uh


def random_lorentz(rng, n: int, scale: float = 0.7) -> np.ndarray:
    """A proper orthochronous transformation via the exponential map."""
    g = np.diag([1.0] + [-1.0] * (n - 1))
    w = rng.standard_normal((n, n)) * scale
    w = w - w.T
    return expm(g @ w)


def random_timelike(rng, n: int, future: bool = True) -> np.ndarray:
    space = rng.standard_normal(n - 1)
    t = float(np.linalg.norm(space)) + float(rng.uniform(0.2, 1.5))
    v = np.concatenate(([t if future else -t], space))
    return v


def random_spacelike(rng, n: int) -> np.ndarray:
    space = rng.standard_normal(n - 1)
    space *= (1.0 + rng.uniform(0.2, 1.5)) / max(np.linalg.norm(space), 1e-9)
    t = float(rng.uniform(-0.8, 0.8)) * np.linalg.norm(space) * 0.5
    return np.concatenate(([t], space))


def _chirality_blocks_ok(gamma: np.ndarray, chi: np.ndarray) -> bool:
    dim = gamma.shape[0]
    p_plus = (np.eye(dim) + chi) / 2
    p_minus = (np.eye(dim) - chi) / 2
    scale = max(1.0, np.linalg.norm(gamma, 2))
    low = min(
        np.linalg.norm(p_plus @ gamma @ p_minus, 2),
        np.linalg.norm(p_minus @ gamma @ p_plus, 2),
    )
    return low > 1e-3 * scale


def random_vectorial_split(
    rng,
    n: int = 4,
    max_vertices: int = 6,
    cone_mix: tuple[str, ...] = ("future", "past", "spacelike"),
    rep: CliffordRep | None = None,
) -> SplitDiracStructure:
    """Spin-connection vectorial structure: transports are spin lifts,
    gamma- a real vector, gamma+ the transported vector."""
    rep = rep or build_clifford(n)
    graph = random_graph(rng, max_vertices=max_vertices, max_edges=2 * max_vertices)
    h_plus, g_plus, g_minus = [], [], []
    for _ in graph.edges:
        lam = np.eye(n) if rng.random() < 0.4 else random_lorentz(rng, n)
        h = spin_lift(lam, rep)
        while True:
            kind = cone_mix[int(rng.integers(0, len(cone_mix)))]
            if kind == "future":
                u = random_timelike(rng, n, future=True)
            elif kind == "past":
                u = random_timelike(rng, n, future=False)
            else:
                u = random_spacelike(rng, n)
            if _chirality_blocks_ok(rep.rho(u), rep.chi) and _chirality_blocks_ok(
                rep.rho(lam @ u), rep.chi
            ):
                break
        h_plus.append(h)
        g_minus.append(rep.rho(u))
        g_plus.append(rep.rho(lam @ u))
    return build_split(graph, rep, h_plus, g_plus, g_minus)
