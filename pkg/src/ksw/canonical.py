"""Canonical structures attached to a positively weighted oriented graph.

The Hilbert space is two slots per edge, ordered block by block as
[(e, -), (e, +)] in the graph's edge order, with the slot (e, -) at the
edge's source and (e, +) at its target.  Functions on vertices act
diagonally through the slot endpoints.  With theta_e the edge phase and
delta_e the weight, the Euclidean triple per block is

    D = (1/delta) [[0, e^{i theta}], [e^{-i theta}, 0]]
    chi = diag(-1, +1)
    J = diag(e^{i theta}, e^{-i theta}) . conj

on the flat product, and the antilorentzian spacetime is its rotation
along the distinguished form

    omega = [[0, i e^{i theta}], [-i e^{-i theta}, 0]]

giving D_s = -i D, chi_s = -chi, J_s = [[0, i], [-i, 0]] . conj and the
Krein metric j = omega itself.  Default phases differ by presentation:
0 when building the triple first, -pi/2 when building the spacetime
first, so that a single edge reproduces the familiar two-point examples
on the nose in both pictures.

The admissible one-forms are exactly the blocks x_e * omega_e with real
x_e; positivity of an orientation form means all x_e > 0, and a form is
exact with real potential f iff x_e = (f(e+) - f(e-)) / delta_e, which
is what the cycle-integral test below decides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

import numpy as np

from .graphs import (
    Acyclic,
    Cyclic,
    Vertex,
    WeightedDigraph,
    acyclicity_witness,
    bellman_ford_undirected,
    fundamental_cycles,
)
from .kreinlin import (
    DEFAULT_TOL,
    AntilinearOperator,
    KreinSpace,
    as_matrix,
    commutator,
    krein_adjoint,
    rel_err,
)
from .spectral import (
    AlgebraRep,
    OrientationReport,
    SpectralStructure,
    TimeOrientationForm,
    verify_time_orientation,
)

Array = np.ndarray

TRIPLE_DEFAULT_PHASE = 0.0
SPACETIME_DEFAULT_PHASE = -math.pi / 2


def vertex_slots(g: WeightedDigraph) -> list[Vertex]:
    """Slot-to-vertex assignment: source then target for each edge in order."""
    slots: list[Vertex] = []
    for e in g.edges:
        slots.append(e.src)
        slots.append(e.dst)
    return slots


def edge_phases(g: WeightedDigraph, default: float) -> tuple[float, ...]:
    return tuple(e.phase if e.phase is not None else default for e in g.edges)


def pi_of(g: WeightedDigraph, values: Mapping[Vertex, complex]) -> Array:
    """The diagonal action of a vertex function on the split-edge space."""
    return np.diag([complex(values[v]) for v in vertex_slots(g)])


def vertex_algebra(g: WeightedDigraph) -> AlgebraRep:
    """Vertex indicator functions as diagonal operators, one per vertex.

    Isolated vertices act as zero, which would kill faithfulness, so they
    are rejected up front.
    """
    for v in g.vertices:
        if g.degree(v) == 0:
            raise ValueError(f"vertex {v!r} is isolated; vertex functions would not act faithfully")
    slots = vertex_slots(g)
    basis = []
    for v in g.vertices:
        basis.append(np.diag([1.0 + 0.0j if s == v else 0.0j for s in slots]))
    return AlgebraRep(tuple(basis), tuple(str(v) for v in g.vertices))


@dataclass(frozen=True)
class CanonicalTriple:
    """Euclidean triple of a weighted graph, KO dimension 0."""

    graph: WeightedDigraph
    triple: SpectralStructure
    phases: tuple[float, ...]

    @property
    def structure(self) -> SpectralStructure:
        return self.triple


@dataclass(frozen=True)
class CanonicalSpacetime:
    """Antilorentzian spacetime of an oriented weighted graph, KO dimension 2.

    The Krein metric coincides with the distinguished orientation form, so
    ``omega`` is just the fundamental symmetry itself.
    """

    graph: WeightedDigraph
    spacetime: SpectralStructure
    phases: tuple[float, ...]

    @property
    def structure(self) -> SpectralStructure:
        return self.spacetime

    @property
    def omega(self) -> Array:
        return np.array(self.spacetime.space.j)


CanonicalLike = Union[CanonicalTriple, CanonicalSpacetime]


def _edge_data(g: WeightedDigraph, phases: Sequence[float]):
    for k, e in enumerate(g.edges):
        yield k, float(e.weight), np.exp(1j * phases[k])


def build_canonical_triple(g: WeightedDigraph) -> CanonicalTriple:
    """Euclidean triple with per-edge off-diagonal D and diagonal-phase J."""
    if not g.edges:
        raise ValueError("graph has no edges")
    phases = edge_phases(g, TRIPLE_DEFAULT_PHASE)
    dim = 2 * len(g.edges)
    dirac = np.zeros((dim, dim), dtype=complex)
    m = np.zeros((dim, dim), dtype=complex)
    chi = np.zeros((dim, dim), dtype=complex)
    for k, delta, a in _edge_data(g, phases):
        i = 2 * k
        dirac[i, i + 1] = a / delta
        dirac[i + 1, i] = np.conj(a) / delta
        m[i, i] = a
        m[i + 1, i + 1] = np.conj(a)
        chi[i, i] = -1.0
        chi[i + 1, i + 1] = 1.0
    triple = SpectralStructure(
        space=KreinSpace(np.eye(dim)),
        algebra=vertex_algebra(g),
        dirac=dirac,
        real=AntilinearOperator(m),
        chi=chi,
        signature="euclidean",
        ko_dim=0,
    )
    return CanonicalTriple(g, triple, phases)


def build_canonical_spacetime(g: WeightedDigraph) -> CanonicalSpacetime:
    """Antilorentzian spacetime whose Krein metric is the orientation form.

    The graph's own orientation is the time orientation (all block signs
    +1), which is the canonical representative.
    """
    if not g.edges:
        raise ValueError("graph has no edges")
    phases = edge_phases(g, SPACETIME_DEFAULT_PHASE)
    dim = 2 * len(g.edges)
    dirac = np.zeros((dim, dim), dtype=complex)
    omega = np.zeros((dim, dim), dtype=complex)
    m = np.zeros((dim, dim), dtype=complex)
    chi = np.zeros((dim, dim), dtype=complex)
    for k, delta, a in _edge_data(g, phases):
        i = 2 * k
        dirac[i, i + 1] = -1j * a / delta
        dirac[i + 1, i] = -1j * np.conj(a) / delta
        omega[i, i + 1] = 1j * a
        omega[i + 1, i] = -1j * np.conj(a)
        m[i, i + 1] = 1j
        m[i + 1, i] = -1j
        chi[i, i] = 1.0
        chi[i + 1, i + 1] = -1.0
    spacetime = SpectralStructure(
        space=KreinSpace(omega),
        algebra=vertex_algebra(g),
        dirac=dirac,
        real=AntilinearOperator(m),
        chi=chi,
        signature="antilorentzian",
        ko_dim=2,
    )
    return CanonicalSpacetime(g, spacetime, phases)


def connes_distance(t: CanonicalTriple | WeightedDigraph, i: Vertex, j: Vertex) -> Fraction | float:
    """sup |a(i) - a(j)| over real functions with commutator norm at most 1.

    The constraint system |a(e+) - a(e-)| <= delta_e is totally dual
    integral, so the supremum is the shortest undirected path value,
    computed exactly; disconnected pairs give math.inf.
    """
    g = t.graph if isinstance(t, CanonicalTriple) else t
    g.require_vertex(j)
    value = bellman_ford_undirected(g, i).get(j)
    return value if value is not None else math.inf


def phase_unitary(phases_from: Sequence[float], phases_to: Sequence[float]) -> Array:
    """Diagonal unitary carrying one phase vector's structures to another's.

    Per edge the block is diag(e^{i d/2}, e^{-i d/2}) with d the phase
    difference; it intertwines both the triples and the spacetimes.
    """
    if len(phases_from) != len(phases_to):
        raise ValueError("phase vectors differ in length")
    entries = []
    for old, new in zip(phases_from, phases_to):
        half = (new - old) / 2.0
        entries.append(np.exp(1j * half))
        entries.append(np.exp(-1j * half))
    return np.diag(entries)


def form_coefficients(s: CanonicalLike, beta, tol: float = DEFAULT_TOL) -> Array:
    """Real per-edge coefficients x_e of an admissible form, in edge order.

    Admissible means a member of the family ⊕ x_e omega_e with real x_e,
    which is exactly the Krein-self-adjoint imaginary one-forms; anything
    else raises ValueError.
    """
    mat = as_matrix(beta.beta if isinstance(beta, TimeOrientationForm) else beta)
    g = s.graph
    dim = 2 * len(g.edges)
    if mat.shape != (dim, dim):
        raise ValueError("operator dimension does not match the graph")
    coeffs = np.zeros(len(g.edges))
    rebuilt = np.zeros_like(mat)
    for k, _, a in _edge_data(g, s.phases):
        i = 2 * k
        x = mat[i, i + 1] / (1j * a)
        if abs(x.imag) > tol * max(1.0, abs(x)):
            raise ValueError("beta outside the admissible family")
        coeffs[k] = x.real
        rebuilt[i, i + 1] = x.real * 1j * a
        rebuilt[i + 1, i] = x.real * -1j * np.conj(a)
    if rel_err(rebuilt, mat) > tol:
        raise ValueError("beta outside the admissible family")
    return coeffs


def path_integral(s: CanonicalLike, beta, path: Sequence[Vertex]) -> float:
    """Signed weighted sum of the form's coefficients along a vertex path.

    Traversal with the edge orientation counts +x_e delta_e, against it
    -x_e delta_e.  A path with fewer than two vertices integrates to zero.
    """
    coeffs = form_coefficients(s, beta)
    for v in path:
        s.graph.require_vertex(v)
    total = 0.0
    for u, v in zip(path, path[1:]):
        hit = s.graph.edge_between(u, v)
        if hit is None:
            raise ValueError(f"vertices {u!r} and {v!r} are not adjacent")
        k, direction = hit
        total += direction * coeffs[k] * float(s.graph.edges[k].weight)
    return total


def _tree_potential(g: WeightedDigraph, coeffs: Array) -> dict[Vertex, float]:
    """Integrate x_e = (f(e+) - f(e-))/delta_e over a spanning forest, f(root) = 0."""
    f: dict[Vertex, float] = {}
    for comp in g.components():
        root = comp[0]
        f[root] = 0.0
        stack = [root]
        while stack:
            v = stack.pop()
            for k, other in g.incident(v):
                if other in f:
                    continue
                step = coeffs[k] * float(g.edges[k].weight)
                f[other] = f[v] + step if g.edges[k].src == v else f[v] - step
                stack.append(other)
    return f


def morera_exactness(s: CanonicalLike, beta, tol: float = DEFAULT_TOL) -> bool:
    """Exactness of an admissible form via its fundamental-cycle integrals.

    All integrals vanish iff the form has a potential; on success the
    potential is rebuilt by tree integration and checked against the form,
    so a True return is self-validating (RuntimeError if that fails, which
    would mean an internal inconsistency, not bad input).
    """
    coeffs = form_coefficients(s, beta, tol)
    scale = max(1.0, max((abs(c) * float(e.weight) for c, e in zip(coeffs, s.graph.edges)), default=1.0))
    for cycle in fundamental_cycles(s.graph):
        if abs(path_integral(s, beta, cycle)) > tol * scale:
            return False
    f = _tree_potential(s.graph, coeffs)
    twist = 1j if s.structure.is_spacetime else 1.0
    element = pi_of(s.graph, {v: twist * f[v] for v in s.graph.vertices})
    rebuilt = 1j * commutator(s.structure.dirac, element)
    mat = as_matrix(beta.beta if isinstance(beta, TimeOrientationForm) else beta)
    if rel_err(rebuilt, mat) > 10 * tol * max(1.0, scale):
        raise RuntimeError("cycle integrals vanish but the tree potential does not reproduce the form")
    return True


@dataclass(frozen=True)
class StablyCausal:
    """Topological-order potential with its verified exact positive form.

    ``delta`` holds algebra coefficients with beta = i [D, pi(delta)]; for
    a real order function f that element is i*f.
    """

    potential: dict[Vertex, Fraction]
    delta: Array
    beta: Array
    report: OrientationReport


@dataclass(frozen=True)
class NotStablyCausal:
    """Directed cycle whose strictly positive integral blocks every
    exact positive form (exact forms integrate to zero around cycles,
    positive ones to a positive number)."""

    cycle: tuple[Vertex, ...]
    integral: float


def stable_causality_canonical(
    s: CanonicalSpacetime, tol: float = DEFAULT_TOL
) -> StablyCausal | NotStablyCausal:
    """Decide stable causality of the canonical spacetime by acyclicity."""
    witness = acyclicity_witness(s.graph)
    if isinstance(witness, Cyclic):
        return NotStablyCausal(witness.cycle, path_integral(s, s.omega, witness.cycle))
    order = {v: Fraction(idx) for idx, v in enumerate(witness.order)}
    delta = np.array([1j * float(order[v]) for v in s.graph.vertices])
    element = pi_of(s.graph, {v: 1j * float(order[v]) for v in s.graph.vertices})
    beta = 1j * commutator(s.spacetime.dirac, element)
    report = verify_time_orientation(s.spacetime, TimeOrientationForm(beta, potential=delta), tol)
    if not report.ok:
        raise RuntimeError("acyclic orientation produced a failing orientation form")
    return StablyCausal(order, delta, beta, report)


@dataclass(frozen=True)
class XClosureWitness:
    """Vertex whose indicator has a Krein adjoint outside the algebra span."""

    vertex: str
    residual: float


def x_closure_witness(s: CanonicalSpacetime, tol: float = DEFAULT_TOL) -> XClosureWitness | None:
    """Search vertex indicators for a failure of adjoint-closedness.

    On a spacetime the Krein adjoint of a vertex function swaps the two
    slots of every edge, so any vertex with a degree-two neighbour breaks
    closedness and some indicator witnesses it.  Disjoint single edges are
    genuinely closed and give None.
    """
    st = s.spacetime
    for idx, a in enumerate(st.algebra.basis):
        fit = st.algebra.project(krein_adjoint(a, st.space), tol)
        if not fit.ok:
            return XClosureWitness(st.algebra.labels[idx], fit.residual)
    return None
