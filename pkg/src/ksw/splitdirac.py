"""Split Dirac structures over oriented weighted graphs.

The state space carries one spinor copy per edge end, ordered
[(e, -), (e, +)] block by block in edge order, with (e, -) at the source.
Construction stores the raw per-edge data (transports h_e+, endomorphisms
gamma_e+-, weights delta_e) and assembles operators lazily: the Krein
metric

    (F, G) = sum_e (F(e,+), h+ G(e,-)) + (F(e,-), h- G(e,+))

is hermitian exactly when the connection is metric, so eager validation
would crash on the very inputs the theorem checks must be able to
diagnose.  With j the spinor Krein form, M the spinor real structure and
chi the spinor grading, the assembled blocks per edge are

    metric   [(-),(+)] = j h-          [(+),(-)] = j h+
    Dirac    [(-),(+)] = (1/d) g- h-   [(+),(-)] = -(1/d) g+ h+
    real     [(-),(+)] = h- M          [(+),(-)] = h+ M
    grading  chi on every slot

and functions into the even Clifford algebra act slotwise through the
edge endpoints.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Optional, Sequence

import numpy as np

from .clifford import (
    CliffordRep,
    even_basis_indices,
    gamma_product,
    is_future_timelike,
    vector_part,
)
from .feasibility import Feasible, solve_strict_inequalities
from .graphs import Vertex, WeightedDigraph, acyclicity_witness, Cyclic
from .kreinlin import (
    DEFAULT_TOL,
    AntilinearOperator,
    KreinSpace,
    as_matrix,
    is_krein_positive,
    krein_adjoint,
    op_norm,
    rel_err,
)
from .spectral import (
    AlgebraRep,
    AxiomReport,
    CheckResult,
    ReconstructibilityReport,
    SpectralStructure,
    TimeOrientationForm,
    check_reconstructibility,
    verify_axioms,
    verify_time_orientation,
)

Array = np.ndarray


def _as_square(mat, dim: int, what: str) -> Array:
    out = as_matrix(mat)
    if out.shape != (dim, dim):
        raise ValueError(f"{what} has shape {out.shape}, expected {(dim, dim)}")
    return out


@dataclass(frozen=True)
class SplitDiracStructure:
    """Raw split data; operators and the Krein structure assemble on demand."""

    graph: WeightedDigraph
    rep: CliffordRep
    h_plus: tuple[Array, ...]
    h_minus: tuple[Array, ...]
    gamma_plus: tuple[Array, ...]
    gamma_minus: tuple[Array, ...]
    delta: tuple[float, ...]

    @property
    def spinor_dim(self) -> int:
        return self.rep.dim

    @property
    def dim(self) -> int:
        return 2 * len(self.graph.edges) * self.rep.dim

    def slot(self, k: int, sign: int) -> slice:
        """Index range of the (edge k, sign) spinor block; sign is -1 or +1."""
        d = self.rep.dim
        base = (2 * k if sign < 0 else 2 * k + 1) * d
        return slice(base, base + d)

    @cached_property
    def algebra(self) -> AlgebraRep:
        return split_algebra(self.graph, self.rep)

    @cached_property
    def structure(self) -> SpectralStructure:
        return SpectralStructure(
            space=KreinSpace(split_metric_matrix(self)),
            algebra=self.algebra,
            dirac=split_dirac_matrix(self),
            real=AntilinearOperator(split_real_matrix(self)),
            chi=split_chi_matrix(self),
            signature="antilorentzian",
            ko_dim=self.rep.signs.ko_dim_mod8,
        )


def build_split(
    graph: WeightedDigraph,
    rep: CliffordRep,
    h_plus: Sequence,
    gamma_plus: Sequence,
    gamma_minus: Sequence,
    delta: Optional[Sequence] = None,
) -> SplitDiracStructure:
    """Validate shapes and invertibility; defer everything structural.

    ``delta`` defaults to the graph's own edge weights.  Isolated vertices
    are rejected because the even-section algebra would not act faithfully.
    """
    edges = graph.edges
    for v in graph.vertices:
        if graph.degree(v) == 0:
            raise ValueError(f"vertex {v!r} is isolated; even sections would not act faithfully")
    if not (len(h_plus) == len(gamma_plus) == len(gamma_minus) == len(edges)):
        raise ValueError("per-edge data length does not match the edge count")
    d = rep.dim
    hp, hm, gp, gm = [], [], [], []
    for k in range(len(edges)):
        h = _as_square(h_plus[k], d, f"h_plus on edge {k}")
        with np.errstate(all="ignore"):
            cond = np.linalg.cond(h)
        if not np.isfinite(cond) or cond > 1e12:
            raise ValueError(f"h_plus on edge {k} is singular")
        hp.append(h)
        hm.append(np.linalg.inv(h))
        gp.append(_as_square(gamma_plus[k], d, f"gamma_plus on edge {k}"))
        gm.append(_as_square(gamma_minus[k], d, f"gamma_minus on edge {k}"))
    if delta is None:
        weights = [float(e.weight) for e in edges]
    else:
        if len(delta) != len(edges):
            raise ValueError("delta length does not match the edge count")
        weights = [float(x) for x in delta]
    if any(w <= 0 for w in weights):
        raise ValueError("delta weights must be positive")
    return SplitDiracStructure(
        graph=graph,
        rep=rep,
        h_plus=tuple(hp),
        h_minus=tuple(hm),
        gamma_plus=tuple(gp),
        gamma_minus=tuple(gm),
        delta=tuple(weights),
    )


def _even_label(idx: tuple[int, ...]) -> str:
    return "1" if not idx else "g" + "".join(str(mu) for mu in idx)


def split_algebra(graph: WeightedDigraph, rep: CliffordRep) -> AlgebraRep:
    """Even Clifford sections: per vertex, every even product acting on the
    slots whose endpoint is that vertex.  |V| * 2^(n-1) basis elements."""
    d = rep.dim
    n_slots = 2 * len(graph.edges)
    slots: list[Vertex] = []
    for e in graph.edges:
        slots.extend((e.src, e.dst))
    basis, labels = [], []
    for v in graph.vertices:
        placements = [i for i, s in enumerate(slots) if s == v]
        if not placements:
            raise ValueError(f"vertex {v!r} is isolated; even sections would not act faithfully")
        for idx in even_basis_indices(rep.n):
            block = gamma_product(rep, idx)
            op = np.zeros((n_slots * d, n_slots * d), dtype=complex)
            for i in placements:
                op[i * d : (i + 1) * d, i * d : (i + 1) * d] = block
            basis.append(op)
            labels.append(f"{v}:{_even_label(idx)}")
    return AlgebraRep(tuple(basis), tuple(labels))


def split_metric_matrix(s: SplitDiracStructure) -> Array:
    j = s.rep.space.j
    out = np.zeros((s.dim, s.dim), dtype=complex)
    for k in range(len(s.graph.edges)):
        out[s.slot(k, -1), s.slot(k, +1)] = j @ s.h_minus[k]
        out[s.slot(k, +1), s.slot(k, -1)] = j @ s.h_plus[k]
    return out


def split_dirac_matrix(s: SplitDiracStructure) -> Array:
    out = np.zeros((s.dim, s.dim), dtype=complex)
    for k in range(len(s.graph.edges)):
        w = 1.0 / s.delta[k]
        out[s.slot(k, -1), s.slot(k, +1)] = w * (s.gamma_minus[k] @ s.h_minus[k])
        out[s.slot(k, +1), s.slot(k, -1)] = -w * (s.gamma_plus[k] @ s.h_plus[k])
    return out


def split_real_matrix(s: SplitDiracStructure) -> Array:
    m = s.rep.J.m
    out = np.zeros((s.dim, s.dim), dtype=complex)
    for k in range(len(s.graph.edges)):
        out[s.slot(k, -1), s.slot(k, +1)] = s.h_minus[k] @ m
        out[s.slot(k, +1), s.slot(k, -1)] = s.h_plus[k] @ m
    return out


def split_chi_matrix(s: SplitDiracStructure) -> Array:
    blocks = 2 * len(s.graph.edges)
    return np.kron(np.eye(blocks), s.rep.chi)


# -- connection properties ----------------------------------------------------


@dataclass(frozen=True)
class ConnectionReport:
    metric: bool
    spin_preserving: bool
    orientation_preserving: bool
    clifford: bool
    levi_civita: tuple[Optional[Array], ...]
    residuals: dict[str, float]

    @property
    def spin_connection(self) -> bool:
        return self.metric and self.spin_preserving and self.orientation_preserving and self.clifford


def _clifford_action(h: Array, rep: CliffordRep, tol: float) -> tuple[Optional[Array], float]:
    """Vector action of conjugation by h, or None with the worst residual."""
    hinv = np.linalg.inv(h)
    cols = []
    worst = 0.0
    for mu in range(rep.n):
        moved = h @ rep.gamma[mu] @ hinv
        coeffs, res = vector_part(moved, rep)
        worst = max(worst, res / max(1.0, op_norm(moved)))
        cols.append(coeffs)
    if worst > tol:
        return None, worst
    lam = np.stack(cols, axis=1)
    worst = max(worst, float(op_norm(np.imag(lam))))
    if worst > tol:
        return None, worst
    return np.real(lam), worst


def connection_properties(s: SplitDiracStructure, tol: float = DEFAULT_TOL) -> ConnectionReport:
    """Edge-by-edge tests of the four connection properties.

    metric: h+ preserves the spinor Krein form; spin: h+ commutes with the
    real structure; orientation: h+ commutes with the grading; clifford:
    conjugation by h+ preserves the vector subspace, in which case the
    per-edge vector actions are returned.
    """
    j = s.rep.space.j
    m = s.rep.J.m
    chi = s.rep.chi
    worst = {"metric": 0.0, "spin": 0.0, "orientation": 0.0, "clifford": 0.0}
    lams: list[Optional[Array]] = []
    for h in s.h_plus:
        worst["metric"] = max(worst["metric"], rel_err(np.conj(h).T @ j @ h, j))
        worst["spin"] = max(worst["spin"], rel_err(h @ m, m @ np.conj(h)))
        worst["orientation"] = max(worst["orientation"], rel_err(chi @ h, h @ chi))
        lam, res = _clifford_action(h, s.rep, tol)
        worst["clifford"] = max(worst["clifford"], res)
        lams.append(lam)
    return ConnectionReport(
        metric=worst["metric"] <= tol,
        spin_preserving=worst["spin"] <= tol,
        orientation_preserving=worst["orientation"] <= tol,
        clifford=all(lam is not None for lam in lams),
        levi_civita=tuple(lams),
        residuals=worst,
    )


# -- theorem 6 ----------------------------------------------------------------


@dataclass(frozen=True)
class Theorem6Report:
    checks: tuple[CheckResult, ...]
    connection: ConnectionReport
    axioms: Optional[AxiomReport]
    vectorial: bool
    complete: bool

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks) and self.axioms is not None and self.axioms.ok

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.ok]

    def lines(self) -> list[str]:
        out = [f"{'PASS' if c.ok else 'FAIL'} {c.name} (residual {c.residual:.3e})" for c in self.checks]
        if self.axioms is not None:
            out.extend(self.axioms.lines())
        return out


def _edge_vectors(s: SplitDiracStructure, tol: float):
    """Per edge and sign, the vector coefficients of gamma, or None."""
    out: dict[tuple[int, int], Optional[np.ndarray]] = {}
    for k in range(len(s.graph.edges)):
        for sign, gam in ((-1, s.gamma_minus[k]), (+1, s.gamma_plus[k])):
            coeffs, res = vector_part(gam, s.rep)
            scale = max(1.0, op_norm(gam))
            ok = res <= tol * scale and float(np.linalg.norm(coeffs)) > tol * scale
            ok = ok and float(np.linalg.norm(np.imag(coeffs))) <= tol * scale
            out[(k, sign)] = np.real(coeffs) if ok else None
    return out


def verify_theorem6(s: SplitDiracStructure, tol: float = DEFAULT_TOL) -> Theorem6Report:
    """All hypotheses of the split-structure theorem, named per edge.

    Per edge: both gammas Krein-self-adjoint, odd and nonvanishing on both
    chirality components; the twist relation J g+ J^{-1} = -h+ g- h-; the
    connection metric, spin and orientation preserving.  Only when every
    hypothesis holds is the global structure assembled and pushed through
    the axiom checks at the representation's KO dimension, whose real_square
    and real_chirality entries are exactly the predicted-sign confirmation.
    """
    rep = s.rep
    j, m, chi = rep.space.j, rep.J.m, rep.chi
    p_plus = (np.eye(rep.dim) + chi) / 2
    p_minus = (np.eye(rep.dim) - chi) / 2
    checks: list[CheckResult] = []
    for k in range(len(s.graph.edges)):
        for tag, gam in (("+", s.gamma_plus[k]), ("-", s.gamma_minus[k])):
            scale = max(1.0, op_norm(gam))
            r = rel_err(krein_adjoint(gam, rep.space), gam)
            checks.append(CheckResult(f"krein_self_adjoint[{k}{tag}]", r, r <= tol))
            r = rel_err(chi @ gam, -(gam @ chi))
            checks.append(CheckResult(f"odd[{k}{tag}]", r, r <= tol))
            left = float(op_norm(p_plus @ gam @ p_minus))
            right = float(op_norm(p_minus @ gam @ p_plus))
            smaller = min(left, right) / scale
            checks.append(
                CheckResult(
                    f"nonvanishing[{k}{tag}]",
                    smaller,
                    smaller > tol,
                    "both chirality components must be nonzero",
                )
            )
        lhs = rep.J.sandwich(s.gamma_plus[k])
        rhs = -(s.h_plus[k] @ s.gamma_minus[k] @ s.h_minus[k])
        r = rel_err(lhs, rhs)
        checks.append(CheckResult(f"eq83[{k}]", r, r <= tol))
        h = s.h_plus[k]
        r = rel_err(np.conj(h).T @ j @ h, j)
        checks.append(CheckResult(f"metric[{k}]", r, r <= tol))
        r = rel_err(h @ m, m @ np.conj(h))
        checks.append(CheckResult(f"spin[{k}]", r, r <= tol))
        r = rel_err(chi @ h, h @ chi)
        checks.append(CheckResult(f"orientation[{k}]", r, r <= tol))

    connection = connection_properties(s, tol)
    axioms = None
    if all(c.ok for c in checks):
        axioms = verify_axioms(s.structure, tol)

    vectors = _edge_vectors(s, tol)
    vectorial = all(v is not None for v in vectors.values())
    complete = False
    if vectorial:
        complete = True
        for v in s.graph.vertices:
            rows = []
            for k, e in enumerate(s.graph.edges):
                if e.src == v:
                    rows.append(vectors[(k, -1)])
                if e.dst == v:
                    rows.append(vectors[(k, +1)])
            rank = np.linalg.matrix_rank(np.stack(rows)) if rows else 0
            if rank < rep.n:
                complete = False
                break
    return Theorem6Report(tuple(checks), connection, axioms, vectorial, complete)


# -- orientation forms --------------------------------------------------------


def orientation_form_family(
    s: SplitDiracStructure,
    gamma_minus_forms: Sequence,
    tol: float = DEFAULT_TOL,
) -> TimeOrientationForm:
    """Assemble the positive orientation form with the given minus-side data.

    Each Gamma_e- must be Krein-positive and imaginary; the plus side is
    forced by h- G+ h+ = -J G- J^{-1}, and the form's blocks are
    [(-),(+)] = G- h-, [(+),(-)] = G+ h+.  The result is certified through
    the full orientation checks; failure there raises RuntimeError because
    it indicates inconsistent structure data, not a bad Gamma.
    """
    edges = s.graph.edges
    if len(gamma_minus_forms) != len(edges):
        raise ValueError("need one Gamma_minus per edge")
    d = s.rep.dim
    beta = np.zeros((s.dim, s.dim), dtype=complex)
    for k in range(len(edges)):
        gminus = _as_square(gamma_minus_forms[k], d, f"Gamma_minus on edge {k}")
        pos = is_krein_positive(gminus, s.rep.space, tol)
        if not pos.ok:
            raise ValueError(f"Gamma_minus on edge {k} is not Krein-positive (margin {pos.margin:.3e})")
        r = rel_err(s.rep.J.sandwich(gminus), -gminus)
        if r > tol:
            raise ValueError(f"Gamma_minus on edge {k} is not imaginary (residual {r:.3e})")
        gplus = s.h_plus[k] @ (-s.rep.J.sandwich(gminus)) @ s.h_minus[k]
        beta[s.slot(k, -1), s.slot(k, +1)] = gminus @ s.h_minus[k]
        beta[s.slot(k, +1), s.slot(k, -1)] = gplus @ s.h_plus[k]
    form = TimeOrientationForm(beta)
    report = verify_time_orientation(s.structure, form, tol)
    if not report.ok:
        names = ", ".join(c.name for c in report.failures())
        raise RuntimeError(f"assembled orientation form failed verification: {names}")
    return form


# -- holonomy -----------------------------------------------------------------


def _bfs_tree(graph: WeightedDigraph, base: Vertex):
    """Deterministic BFS tree: parent pointers (vertex, edge index) and the
    set of tree edge indices."""
    graph.require_vertex(base)
    parent: dict[Vertex, tuple[Vertex, int]] = {}
    seen = {base}
    queue = [base]
    tree_edges: set[int] = set()
    while queue:
        v = queue.pop(0)
        for k, other in graph.incident(v):
            if other in seen:
                continue
            seen.add(other)
            parent[other] = (v, k)
            tree_edges.add(k)
            queue.append(other)
    if len(seen) != len(graph.vertices):
        raise ValueError("graph is not connected")
    return parent, tree_edges


def _tree_transports(s: SplitDiracStructure, base: Vertex, parent) -> dict[Vertex, Array]:
    """Spinor transport from the basepoint to every vertex along the tree."""
    t: dict[Vertex, Array] = {base: np.eye(s.rep.dim, dtype=complex)}

    def visit(v: Vertex) -> Array:
        if v in t:
            return t[v]
        p, k = parent[v]
        step = s.h_plus[k] if s.graph.edges[k].src == p else s.h_minus[k]
        t[v] = step @ visit(p)
        return t[v]

    for v in s.graph.vertices:
        visit(v)
    return t


def holonomy_generators(
    s: SplitDiracStructure,
    basepoint: Vertex,
    tol: float = DEFAULT_TOL,
) -> list[tuple[Array, Array]]:
    """One (spinor holonomy, vector holonomy) pair per fundamental cycle.

    The loop for a non-tree edge (u, v) goes base -> u through the tree,
    across the edge by h+, and back from v; the vector matrix is the
    action of conjugation on the vector subspace, which needs a Clifford
    connection.
    """
    conn = connection_properties(s, tol)
    if not conn.clifford:
        raise ValueError("connection is not Clifford; vector holonomy is undefined")
    parent, tree_edges = _bfs_tree(s.graph, basepoint)
    transports = _tree_transports(s, basepoint, parent)
    gens: list[tuple[Array, Array]] = []
    for k, e in enumerate(s.graph.edges):
        if k in tree_edges:
            continue
        hol = np.linalg.solve(transports[e.dst], s.h_plus[k] @ transports[e.src])
        lam, res = _clifford_action(hol, s.rep, tol)
        if lam is None:
            raise RuntimeError(f"holonomy of edge {k} left the vector subspace (residual {res:.3e})")
        gens.append((hol, lam))
    return gens


# -- reconstructibility -------------------------------------------------------


class CriterionUnavailable(ValueError):
    """The parallel-field criterion does not cover this structure."""


@dataclass(frozen=True)
class Reconstructible:
    field: Optional[dict[Vertex, Array]]
    form: TimeOrientationForm
    cross_check: ReconstructibilityReport


@dataclass(frozen=True)
class NotReconstructible:
    reason: str
    cross_check: Optional[ReconstructibilityReport]


def _e0_form(s: SplitDiracStructure, tol: float) -> TimeOrientationForm:
    e0 = np.zeros(s.rep.n)
    e0[0] = 1.0
    gamma0 = s.rep.rho(e0)
    return orientation_form_family(s, [gamma0] * len(s.graph.edges), tol)


def check_reconstructible_split(
    s: SplitDiracStructure,
    tol: float = DEFAULT_TOL,
) -> Reconstructible | NotReconstructible:
    """Reconstructibility via future-directed timelike parallel vector fields.

    n = 2 structures are always reconstructible (no field needed, so the
    field slot is None).  For n > 2 with a Clifford connection, the common
    fixed subspace of the holonomy generators is searched for a timelike
    direction by restricting the metric and taking the top eigenvalue; a
    hit is oriented to the future, transported everywhere, and turned into
    the converse construction's form.  Non-Clifford connections at n > 2
    raise CriterionUnavailable.  Both outcomes are cross-validated against
    the operator-level reconstructibility check.
    """
    t6 = verify_theorem6(s, tol)
    if not t6.ok:
        names = ", ".join(c.name for c in t6.failures()) or "axioms"
        raise ValueError(f"structure fails the theorem 6 checks: {names}")
    rep = s.rep
    if rep.n == 2:
        form = _e0_form(s, tol)
        cross = check_reconstructibility(s.structure, form, tol)
        if not cross.ok:
            raise RuntimeError("n = 2 structure failed the operator-level cross-check")
        return Reconstructible(None, form, cross)

    conn = connection_properties(s, tol)
    if not conn.clifford:
        raise CriterionUnavailable("criterion unavailable: n > 2 with a non-Clifford connection")

    base = s.graph.vertices[0]
    gens = holonomy_generators(s, base, tol)
    n = rep.n
    if gens:
        stacked = np.vstack([lam - np.eye(n) for _, lam in gens])
        _, sing, vt = np.linalg.svd(stacked)
        rank = int(np.sum(sing > tol * max(1.0, sing[0] if sing.size else 1.0)))
        fixed = vt[rank:].T
    else:
        fixed = np.eye(n)
    if fixed.shape[1] == 0:
        cross = check_reconstructibility(s.structure, _e0_form(s, tol), tol)
        return NotReconstructible("holonomy fixes no nonzero vector", cross)

    g_restricted = fixed.T @ (rep.g_diag[:, None] * fixed)
    g_restricted = (g_restricted + g_restricted.T) / 2
    eigvals, eigvecs = np.linalg.eigh(g_restricted)
    top = float(eigvals[-1])
    if top <= tol:
        cross = check_reconstructibility(s.structure, _e0_form(s, tol), tol)
        return NotReconstructible("the holonomy-fixed subspace contains no timelike vector", cross)
    u = fixed @ eigvecs[:, -1]
    if not is_future_timelike(u, rep, tol):
        u = -u
    if not is_future_timelike(u, rep, tol):
        raise RuntimeError("timelike fixed vector failed the future-cone orientation")

    parent, _ = _bfs_tree(s.graph, base)
    field: dict[Vertex, Array] = {base: u}

    def assign(v: Vertex) -> Array:
        if v in field:
            return field[v]
        p, k = parent[v]
        lam = conn.levi_civita[k]
        step = lam if s.graph.edges[k].src == p else np.linalg.inv(lam)
        field[v] = step @ assign(p)
        return field[v]

    for v in s.graph.vertices:
        assign(v)
    for k, e in enumerate(s.graph.edges):
        lam = conn.levi_civita[k]
        if float(np.linalg.norm(lam @ field[e.src] - field[e.dst])) > 1e-6 * max(1.0, float(np.linalg.norm(u))):
            raise RuntimeError("transported field is not parallel; holonomy computation is inconsistent")

    form = orientation_form_family(s, [rep.rho(field[e.src]) for e in s.graph.edges], tol)
    cross = check_reconstructibility(s.structure, form, tol)
    if not cross.ok:
        raise RuntimeError("parallel-field form failed the operator-level cross-check")
    return Reconstructible(field, form, cross)


# -- n = 4 stable causality ---------------------------------------------------


class EdgeCausalType(enum.Enum):
    TimelikeFuture = "timelike-future"
    TimelikePast = "timelike-past"
    SigmaPlus = "sigma-plus"
    SigmaMinus = "sigma-minus"
    Other = "other"


@dataclass(frozen=True)
class CausalPotential:
    f: dict[Vertex, Fraction]
    h: dict[Vertex, Fraction]


@dataclass(frozen=True)
class StablyCausal:
    potential: CausalPotential
    margins: tuple[tuple[Fraction, Fraction], ...]


@dataclass(frozen=True)
class NotStablyCausal:
    certificate: dict[int, Fraction]
    rows: tuple[tuple[Fraction, ...], ...]
    row_labels: tuple[str, ...]
    cycle: Optional[tuple[Vertex, ...]] = None
    note: str = ""


@dataclass(frozen=True)
class Indeterminate:
    note: str


def edge_causal_types(s: SplitDiracStructure, tol: float = DEFAULT_TOL) -> list[EdgeCausalType]:
    """Classify edges by the cone positions of v+w and v-w.

    gamma_e+ decomposes as rho(v) + chi rho(w); strict cone membership of
    both combinations decides the type, anything on or near the boundary
    is Other.
    """
    rep = s.rep
    if rep.n != 4:
        raise ValueError("edge classification requires metric dimension 4")
    types: list[EdgeCausalType] = []
    for k in range(len(s.graph.edges)):
        gam = s.gamma_plus[k]
        v, _ = vector_part(gam, rep)
        w, _ = vector_part(rep.chi @ gam, rep)
        scale = max(1.0, op_norm(gam))
        recon = rep.rho(np.real(v)) + rep.chi @ rep.rho(np.real(w))
        if rel_err(recon, gam) > tol * scale or op_norm(np.imag(np.concatenate([v, w]))) > tol * scale:
            types.append(EdgeCausalType.Other)
            continue
        y_plus = np.real(v + w)
        y_minus = np.real(v - w)
        plus_future = is_future_timelike(y_plus, rep, tol)
        plus_past = is_future_timelike(-y_plus, rep, tol)
        minus_future = is_future_timelike(y_minus, rep, tol)
        minus_past = is_future_timelike(-y_minus, rep, tol)
        if plus_future and minus_future:
            types.append(EdgeCausalType.TimelikeFuture)
        elif plus_past and minus_past:
            types.append(EdgeCausalType.TimelikePast)
        elif plus_future and minus_past:
            types.append(EdgeCausalType.SigmaPlus)
        elif plus_past and minus_future:
            types.append(EdgeCausalType.SigmaMinus)
        else:
            types.append(EdgeCausalType.Other)
    return types


def causality_rows(
    graph: WeightedDigraph,
    types: Sequence[EdgeCausalType],
) -> tuple[list[tuple[Fraction, ...]], list[str]]:
    """Strict rows over variables (f(v0..), h(v0..)): two per edge.

    Timelike future: df +- sh > 0; past: -df +- sh > 0; sigma plus:
    sh +- df > 0; sigma minus: -sh +- df > 0, with df = f(dst) - f(src)
    and sh = h(src) + h(dst).
    """
    index = {v: i for i, v in enumerate(graph.vertices)}
    nv = len(graph.vertices)
    rows: list[tuple[Fraction, ...]] = []
    labels: list[str] = []

    def base_rows(k: int):
        e = graph.edges[k]
        df = [Fraction(0)] * (2 * nv)
        df[index[e.dst]] += 1
        df[index[e.src]] -= 1
        sh = [Fraction(0)] * (2 * nv)
        sh[nv + index[e.src]] += 1
        sh[nv + index[e.dst]] += 1
        return df, sh

    for k, t in enumerate(types):
        df, sh = base_rows(k)
        if t is EdgeCausalType.TimelikeFuture:
            first, second = [a - b for a, b in zip(df, sh)], [a + b for a, b in zip(df, sh)]
            tags = ("df-sh", "df+sh")
        elif t is EdgeCausalType.TimelikePast:
            first, second = [-a - b for a, b in zip(df, sh)], [-a + b for a, b in zip(df, sh)]
            tags = ("-df-sh", "-df+sh")
        elif t is EdgeCausalType.SigmaPlus:
            first, second = [b - a for a, b in zip(df, sh)], [b + a for a, b in zip(df, sh)]
            tags = ("sh-df", "sh+df")
        elif t is EdgeCausalType.SigmaMinus:
            first, second = [-b - a for a, b in zip(df, sh)], [-b + a for a, b in zip(df, sh)]
            tags = ("-sh-df", "-sh+df")
        else:
            raise ValueError(f"edge {k} has type Other; no rows exist")
        rows.append(tuple(first))
        labels.append(f"e{k}:{tags[0]}")
        rows.append(tuple(second))
        labels.append(f"e{k}:{tags[1]}")
    return rows, labels


def causal_margins(
    graph: WeightedDigraph,
    types: Sequence[EdgeCausalType],
    potential: CausalPotential,
) -> tuple[tuple[Fraction, Fraction], ...]:
    """Evaluate both strict rows of every edge at the claimed potential."""
    rows, _ = causality_rows(graph, types)
    values = [Fraction(potential.f[v]) for v in graph.vertices]
    values += [Fraction(potential.h[v]) for v in graph.vertices]
    slacks = [sum(c * x for c, x in zip(row, values)) for row in rows]
    return tuple((slacks[2 * k], slacks[2 * k + 1]) for k in range(len(types)))


def _future_digraph(graph: WeightedDigraph, types: Sequence[EdgeCausalType]) -> tuple[WeightedDigraph, dict[tuple, int]]:
    from .graphs import Edge

    arcs = []
    arc_of: dict[tuple, int] = {}
    for k, e in enumerate(graph.edges):
        if types[k] is EdgeCausalType.TimelikeFuture:
            u, v = e.src, e.dst
        else:
            u, v = e.dst, e.src
        arcs.append(Edge(u, v, e.weight))
        arc_of[(u, v)] = k
    return WeightedDigraph(graph.vertices, tuple(arcs)), arc_of


def n4_stable_causality(
    s: SplitDiracStructure,
    method: str = "auto",
    tol: float = DEFAULT_TOL,
) -> StablyCausal | NotStablyCausal | Indeterminate:
    """Strict feasibility of the (f, h) system determined by the edge types.

    method "criterion" only applies the closed forms (all edges timelike:
    causal iff the future orientation is acyclic; all sigma of one sign:
    always causal; vectorial: causal iff all edges timelike with no loop)
    and abstains otherwise; "fourier_motzkin" always solves the full system
    exactly; "auto" prefers the closed forms.  Outside the vectorial case,
    any edge of type Other makes the strict analysis inapplicable:
    Indeterminate.
    """
    if s.rep.n != 4:
        raise ValueError("stable causality analysis requires metric dimension 4")
    if method not in ("auto", "fourier_motzkin", "criterion"):
        raise ValueError(f"unknown method {method!r}")
    types = edge_causal_types(s, tol)
    timelike = {EdgeCausalType.TimelikeFuture, EdgeCausalType.TimelikePast}
    if method in ("auto", "criterion"):
        # A vectorial edge has y+ = y- so it is timelike or nothing; a
        # non-timelike tangent admits no positive form at all.
        vectors = _edge_vectors(s, tol)
        if all(v is not None for v in vectors.values()):
            bad = [k for k, t in enumerate(types) if t not in timelike]
            if bad:
                return NotStablyCausal(
                    {},
                    (),
                    (),
                    note=f"vectorial structure with non-timelike tangents on edges {bad}",
                )
    for k, t in enumerate(types):
        if t is EdgeCausalType.Other:
            return Indeterminate(
                f"edge {k} is on or inside the cone boundary (type Other); "
                "the strict inequality analysis does not apply"
            )
    all_timelike = all(t in timelike for t in types)
    all_plus = all(t is EdgeCausalType.SigmaPlus for t in types)
    all_minus = all(t is EdgeCausalType.SigmaMinus for t in types)

    if method in ("auto", "criterion"):
        if all_timelike:
            future, arc_of = _future_digraph(s.graph, types)
            witness = acyclicity_witness(future)
            if isinstance(witness, Cyclic):
                rows, labels = causality_rows(s.graph, types)
                certificate: dict[int, Fraction] = {}
                for a, b in zip(witness.cycle, witness.cycle[1:]):
                    k = arc_of[(a, b)]
                    certificate[2 * k] = certificate.get(2 * k, Fraction(0)) + Fraction(1, 2)
                    certificate[2 * k + 1] = certificate.get(2 * k + 1, Fraction(0)) + Fraction(1, 2)
                return NotStablyCausal(certificate, tuple(rows), tuple(labels), witness.cycle)
            f = {v: Fraction(i) for i, v in enumerate(witness.order)}
            h = {v: Fraction(0) for v in s.graph.vertices}
            potential = CausalPotential(f, h)
            return StablyCausal(potential, causal_margins(s.graph, types, potential))
        if all_plus or all_minus:
            f = {v: Fraction(0) for v in s.graph.vertices}
            h = {v: Fraction(1 if all_plus else -1) for v in s.graph.vertices}
            potential = CausalPotential(f, h)
            return StablyCausal(potential, causal_margins(s.graph, types, potential))
        if method == "criterion":
            return Indeterminate("mixed edge types have no closed-form criterion; use fourier_motzkin")

    rows, labels = causality_rows(s.graph, types)
    outcome = solve_strict_inequalities(rows)
    if isinstance(outcome, Feasible):
        nv = len(s.graph.vertices)
        f = {v: outcome.point[i] for i, v in enumerate(s.graph.vertices)}
        h = {v: outcome.point[nv + i] for i, v in enumerate(s.graph.vertices)}
        potential = CausalPotential(f, h)
        return StablyCausal(potential, causal_margins(s.graph, types, potential))
    return NotStablyCausal(outcome.certificate, tuple(rows), tuple(labels))


# -- discretized Dirac comparison ---------------------------------------------


def build_mvs_dirac(
    graph: WeightedDigraph,
    rep: CliffordRep,
    gammas: Mapping[int, tuple],
    holonomy: Mapping[int, Array],
    lengths: Mapping[int, float],
) -> Array:
    """Vertex-space discretized Dirac operator.

    ``gammas[k]`` is the pair (tangent gamma at the source for the reversed
    traversal, tangent gamma at the target for the forward traversal) of
    edge k; ``holonomy[k]`` transports source to target and its inverse is
    used backwards.  Contributions: target block gains
    (i/2l) gamma_fwd Hol, source block gains (i/2l) gamma_back Hol^{-1}.
    """
    d = rep.dim
    index = {v: i for i, v in enumerate(graph.vertices)}
    out = np.zeros((len(graph.vertices) * d, len(graph.vertices) * d), dtype=complex)
    for k, e in enumerate(graph.edges):
        if k not in gammas:
            raise ValueError(f"missing gamma data for edge {k}")
        if k not in holonomy:
            raise ValueError(f"missing holonomy for edge {k}")
        length = float(lengths[k])
        if length <= 0:
            raise ValueError(f"length of edge {k} must be positive")
        g_back, g_fwd = (as_matrix(x) for x in gammas[k])
        hol = _as_square(holonomy[k], d, f"holonomy on edge {k}")
        src = slice(index[e.src] * d, (index[e.src] + 1) * d)
        dst = slice(index[e.dst] * d, (index[e.dst] + 1) * d)
        out[dst, src] += (1j / (2 * length)) * (g_fwd @ hol)
        out[src, dst] += (1j / (2 * length)) * (g_back @ np.linalg.inv(hol))
    return out


@dataclass(frozen=True)
class DiagramReport:
    factors: dict[Vertex, Optional[complex]]
    claimed: dict[Vertex, complex]
    matches_claimed: bool
    regular: bool
    consistent: bool
    identity_ok: bool
    projector_ok: bool
    note: str


def check_commuting_diagram(
    s: SplitDiracStructure,
    dtilde: Array,
    tol: float = DEFAULT_TOL,
) -> DiagramReport:
    """Compare averaging(split Dirac)(embedding) against the vertex Dirac.

    The embedding repeats the vertex spinor on every incident slot; the
    averaging map divides by the degree.  Per vertex the report fits the
    scalar relating the corresponding block rows of the composite and of
    dtilde, alongside the claimed constant -i*degree/2; on non-regular
    graphs the fitted constants necessarily differ and ``consistent`` is
    the flag for that.
    """
    d = s.rep.dim
    graph = s.graph
    nv = len(graph.vertices)
    dtilde = as_matrix(dtilde)
    if dtilde.shape != (nv * d, nv * d):
        raise ValueError("shape mismatch between the graph and split state spaces")
    index = {v: i for i, v in enumerate(graph.vertices)}
    embed = np.zeros((s.dim, nv * d), dtype=complex)
    average = np.zeros((nv * d, s.dim), dtype=complex)
    eye = np.eye(d)
    for k, e in enumerate(graph.edges):
        src = slice(index[e.src] * d, (index[e.src] + 1) * d)
        dst = slice(index[e.dst] * d, (index[e.dst] + 1) * d)
        embed[s.slot(k, +1), dst] = eye
        embed[s.slot(k, -1), src] = eye
        average[dst, s.slot(k, +1)] += eye / graph.degree(e.dst)
        average[src, s.slot(k, -1)] += eye / graph.degree(e.src)
    identity_ok = rel_err(average @ embed, np.eye(nv * d)) <= tol
    proj = embed @ average
    projector_ok = rel_err(proj @ proj, proj) <= tol

    composite = average @ split_dirac_matrix(s) @ embed
    factors: dict[Vertex, Optional[complex]] = {}
    claimed: dict[Vertex, complex] = {}
    matches = True
    for v in graph.vertices:
        block = slice(index[v] * d, (index[v] + 1) * d)
        c_row = composite[block, :].ravel()
        t_row = dtilde[block, :].ravel()
        claimed[v] = -1j * graph.degree(v) / 2
        t_norm = float(np.linalg.norm(t_row))
        if t_norm <= tol:
            factors[v] = None
            matches = matches and float(np.linalg.norm(c_row)) <= tol
            continue
        fit = complex(np.vdot(t_row, c_row) / np.vdot(t_row, t_row))
        if float(np.linalg.norm(c_row - fit * t_row)) > tol * max(1.0, float(np.linalg.norm(c_row))):
            factors[v] = None
            matches = False
            continue
        factors[v] = fit
        matches = matches and abs(fit - claimed[v]) <= tol * max(1.0, abs(claimed[v]))
    degrees = {graph.degree(v) for v in graph.vertices}
    regular = len(degrees) == 1
    fitted = [f for f in factors.values() if f is not None]
    consistent = bool(fitted) and all(abs(f - fitted[0]) <= tol * max(1.0, abs(fitted[0])) for f in fitted)
    if not fitted:
        note = "no nonzero blocks to compare"
    elif consistent:
        note = f"single proportionality constant {fitted[0]:.6g}"
    else:
        note = "per-vertex constants differ (non-regular graph)"
    return DiagramReport(
        factors=factors,
        claimed=claimed,
        matches_claimed=matches,
        regular=regular,
        consistent=consistent,
        identity_ok=identity_ok,
        projector_ok=projector_ok,
        note=note,
    )
