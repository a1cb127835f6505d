"""Spectral structures on Krein spaces and their defining checks.

A structure bundles an algebra representation, a Dirac operator, an
antilinear real structure, a chirality, and a declared (signature, KO
dimension) pair.  Construction only checks shapes: `verify_axioms` is the
gatekeeper, so deliberately broken structures can be built and handed to it.

Sign conventions, fixed once and used everywhere:

* ``J^2 = epsilon``
* ``J chi = epsilon'' chi J``
* ``J^x J = kappa`` (Krein adjoint of the antilinear map, so kappa = -1
  means J is a Krein anti-isometry)
* ``J D = D J`` with no sign, in every signature.

The chirality is Krein-self-adjoint in the Euclidean case and
anti-self-adjoint otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .clifford import KOSignEntry, ko_signs
from .kreinlin import (
    DEFAULT_TOL,
    AntilinearOperator,
    KreinSpace,
    PositivityReport,
    SpanFit,
    antilinear_adjoint,
    as_matrix,
    commutator,
    gram_positivity,
    hilbert_space,
    in_span,
    krein_adjoint,
    rel_err,
    span_basis,
)

Array = np.ndarray

SIGNATURES = ("antilorentzian", "lorentzian", "euclidean")


def _rdiv(x: Array, a: Array) -> Array:
    """x @ a^{-1} without forming the inverse."""
    return np.linalg.solve(a.T, x.T).T


@dataclass(frozen=True)
class AlgebraReport:
    unit_residual: float
    product_residual: float
    ok: bool


@dataclass(frozen=True)
class AlgebraRep:
    """Image pi(A) of an algebra, given by an explicit operator basis.

    Abstract algebra elements are coefficient vectors against `basis`.  The
    basis must be linearly independent; since these are images of a faithful
    representation, independence IS faithfulness, and it makes coefficient
    vectors unique.  Multiplicative closure and the unit are span-level facts
    checked by `closure_report`, not here.
    """

    basis: tuple[Array, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        mats = tuple(as_matrix(b) for b in self.basis)
        if not mats:
            raise ValueError("algebra basis is empty")
        object.__setattr__(self, "basis", mats)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"a{i}" for i in range(len(mats))))
        if len(self.labels) != len(mats):
            raise ValueError("need exactly one label per basis element")
        stack = np.stack([m.ravel() for m in mats])
        if np.linalg.matrix_rank(stack) < len(mats):
            raise ValueError("algebra basis is linearly dependent")

    @property
    def dim(self) -> int:
        return self.basis[0].shape[0]

    def __len__(self) -> int:
        return len(self.basis)

    def combine(self, coeffs) -> Array:
        c = np.asarray(coeffs, dtype=complex)
        if c.shape != (len(self.basis),):
            raise ValueError(f"expected {len(self.basis)} coefficients")
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for ci, b in zip(c, self.basis):
            out += ci * b
        return out

    def project(self, op, tol: float = DEFAULT_TOL) -> SpanFit:
        return in_span(as_matrix(op), self.basis, tol)

    def closure_report(self, tol: float = DEFAULT_TOL) -> AlgebraReport:
        unit = self.project(np.eye(self.dim), tol)
        worst = 0.0
        for a in self.basis:
            for b in self.basis:
                worst = max(worst, self.project(a @ b, tol).residual)
        return AlgebraReport(unit.residual, worst, ok=unit.ok and worst <= tol)


@dataclass(frozen=True)
class SpectralStructure:
    """A finite spectral spacetime or triple, depending on `signature`.

    The KO dimension is declared data, never inferred; `verify_axioms` looks
    the declared value up in the sign table and can therefore fail, which is
    the point.
    """

    space: KreinSpace
    algebra: AlgebraRep
    dirac: Array
    real: AntilinearOperator
    chi: Array
    signature: str
    ko_dim: int

    def __post_init__(self) -> None:
        if self.signature not in SIGNATURES:
            raise ValueError(f"unknown signature {self.signature!r}")
        n = self.space.dim
        object.__setattr__(self, "dirac", as_matrix(self.dirac))
        object.__setattr__(self, "chi", as_matrix(self.chi))
        for name, m in (("dirac", self.dirac), ("chi", self.chi)):
            if m.shape != (n, n):
                raise ValueError(f"{name} must be {n}x{n}")
        if self.real.dim != n or self.algebra.dim != n:
            raise ValueError("operator dimensions disagree")

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def signs(self) -> KOSignEntry:
        return ko_signs(self.signature, self.ko_dim)

    @property
    def is_spacetime(self) -> bool:
        return self.signature != "euclidean"


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    ok: bool
    note: str = ""


@dataclass(frozen=True)
class AxiomReport:
    signature: str
    ko_dim: int
    signs: KOSignEntry
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def __bool__(self) -> bool:  # pragma: no cover - trivial
        return self.ok

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.ok]

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            tag = "PASS" if c.ok else "FAIL"
            extra = f" [{c.note}]" if c.note else ""
            out.append(f"{tag} {c.name} (residual {c.residual:.3e}){extra}")
        return out


def verify_axioms(s: SpectralStructure, tol: float = DEFAULT_TOL) -> AxiomReport:
    """Check every defining identity at the declared signature and KO signs.

    Raises ValueError when the declared KO dimension has no row in the table
    for the declared signature; any other defect is reported, never raised.
    """
    signs = ko_signs(s.signature, s.ko_dim)
    eye = np.eye(s.dim)
    m = s.real.m
    checks: list[CheckResult] = []

    def add(name: str, x: Array, y: Array, note: str = "") -> None:
        r = rel_err(x, y)
        checks.append(CheckResult(name, r, r <= tol, note))

    if s.signature == "euclidean":
        pos = gram_positivity(s.space.j, tol)
        checks.append(
            CheckResult(
                "gram_positive",
                pos.hermiticity_residual + max(0.0, -pos.margin),
                pos.ok,
                f"margin {pos.margin:.3e}",
            )
        )
    alg = s.algebra.closure_report(tol)
    checks.append(
        CheckResult(
            "algebra_closed",
            max(alg.unit_residual, alg.product_residual),
            alg.ok,
        )
    )

    add("dirac_krein_selfadjoint", krein_adjoint(s.dirac, s.space), s.dirac)
    add("chirality_square", s.chi @ s.chi, eye)
    worst = max(rel_err(a @ s.chi, s.chi @ a) for a in s.algebra.basis)
    checks.append(CheckResult("chirality_commutes_algebra", worst, worst <= tol))
    add("chirality_anticommutes_dirac", s.chi @ s.dirac, -s.dirac @ s.chi)
    chi_sign = 1.0 if s.signature == "euclidean" else -1.0
    add("chirality_adjoint", krein_adjoint(s.chi, s.space), chi_sign * s.chi)
    add("real_square", s.real.square(), signs.epsilon * eye, f"epsilon {signs.epsilon:+d}")
    add("real_commutes_dirac", m @ np.conj(s.dirac), s.dirac @ m)
    add(
        "real_chirality",
        m @ np.conj(s.chi),
        signs.epsilon2 * (s.chi @ m),
        f"epsilon'' {signs.epsilon2:+d}",
    )
    adj = antilinear_adjoint(s.real, s.space)
    add("real_isometry", adj.m @ np.conj(m), signs.kappa * eye, f"kappa {signs.kappa:+d}")
    return AxiomReport(s.signature, s.ko_dim % 8, signs, tuple(checks))


# -- one-forms ---------------------------------------------------------------


@dataclass(frozen=True)
class OneFormBasis:
    """Basis of the bimodule spanned by pi(a) [D, pi(b)]."""

    basis: tuple[Array, ...]

    def __len__(self) -> int:
        return len(self.basis)

    def project(self, op, tol: float = DEFAULT_TOL) -> SpanFit:
        return in_span(as_matrix(op), self.basis, tol)

    def closure_residual(self, algebra: AlgebraRep, tol: float = DEFAULT_TOL) -> float:
        worst = 0.0
        for w in self.basis:
            for a in algebra.basis:
                worst = max(worst, self.project(a @ w, tol).residual)
                worst = max(worst, self.project(w @ a, tol).residual)
        return worst


def one_form_basis(s: SpectralStructure, tol: float = DEFAULT_TOL) -> OneFormBasis:
    products = []
    for b in s.algebra.basis:
        db = commutator(s.dirac, b)
        for a in s.algebra.basis:
            products.append(a @ db)
    return OneFormBasis(tuple(span_basis(products, tol)))


# -- time orientation --------------------------------------------------------


@dataclass(frozen=True)
class TimeOrientationForm:
    """A candidate orientation form, optionally with its exactness potential.

    `potential` is a coefficient vector against the algebra basis with
    beta = i [D, pi(potential)].
    """

    beta: Array
    potential: Array | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", as_matrix(self.beta))
        if self.potential is not None:
            object.__setattr__(self, "potential", np.asarray(self.potential, dtype=complex))


def _as_form(f) -> TimeOrientationForm:
    return f if isinstance(f, TimeOrientationForm) else TimeOrientationForm(f)


@dataclass(frozen=True)
class OrientationReport:
    checks: tuple[CheckResult, ...]
    positivity: PositivityReport
    normalized: bool

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def __bool__(self) -> bool:  # pragma: no cover - trivial
        return self.ok

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.ok]


def verify_time_orientation(
    s: SpectralStructure,
    f,
    tol: float = DEFAULT_TOL,
    one_forms: OneFormBasis | None = None,
) -> OrientationReport:
    """Full verification of a positive time-orientation form.

    Checks membership in the one-form bimodule, Krein self-adjointness,
    imaginarity (J beta J^{-1} = -beta), and positive definiteness of the
    beta-deformed product: (., beta^{-1} .) in the antilorentzian case,
    (., beta^{-1} chi .) in the Lorentzian one.  Whether beta^2 = 1 is
    reported as the `normalized` flag but has no bearing on `ok`.
    """
    if not s.is_spacetime:
        raise ValueError("time-orientation forms live on spacetimes")
    form = _as_form(f)
    beta = form.beta
    forms = one_forms if one_forms is not None else one_form_basis(s, tol)
    checks: list[CheckResult] = []

    fit = forms.project(beta, tol)
    checks.append(CheckResult("one_form", fit.residual, fit.ok))
    r = rel_err(krein_adjoint(beta, s.space), beta)
    checks.append(CheckResult("krein_selfadjoint", r, r <= tol))
    r = rel_err(s.real.sandwich(beta), -beta)
    checks.append(CheckResult("imaginary", r, r <= tol))

    with np.errstate(all="ignore"):
        cond = np.linalg.cond(beta)
    if not np.isfinite(cond) or cond > 1e12:
        pos = PositivityReport(False, float("-inf"), float("inf"))
        checks.append(CheckResult("positive", float("inf"), False, "beta is singular"))
    else:
        target = s.chi if s.signature == "lorentzian" else np.eye(s.dim)
        gram = s.space.j @ np.linalg.solve(beta, target)
        pos = gram_positivity(gram, tol)
        checks.append(
            CheckResult(
                "positive",
                pos.hermiticity_residual + max(0.0, -pos.margin),
                pos.ok,
                f"margin {pos.margin:.3e}",
            )
        )

    if form.potential is not None:
        built = 1j * commutator(s.dirac, s.algebra.combine(form.potential))
        r = rel_err(built, beta)
        checks.append(CheckResult("potential_consistent", r, r <= tol))

    normalized = rel_err(beta @ beta, np.eye(s.dim)) <= tol
    return OrientationReport(tuple(checks), pos, normalized)


def is_exact(s: SpectralStructure, beta, tol: float = DEFAULT_TOL) -> Array | None:
    """Solve i [D, pi(delta)] = beta for delta in the algebra span.

    Returns the coefficient vector of a solution, or None when the system has
    no solution within tolerance.  The zero form is exact with delta = 0.
    """
    columns = [1j * commutator(s.dirac, a) for a in s.algebra.basis]
    fit = in_span(as_matrix(beta), columns, tol)
    return fit.coefficients if fit.ok else None


@dataclass(frozen=True)
class ReconstructibilityReport:
    ok: bool
    faithful: bool
    worst_residual: float
    note: str = ""

    def __bool__(self) -> bool:  # pragma: no cover - trivial
        return self.ok


def check_reconstructibility(s: SpectralStructure, f, tol: float = DEFAULT_TOL) -> ReconstructibilityReport:
    """Does Ad_beta map the Krein adjoint of the algebra back into it?

    Verifies faithfulness (basis independence) and, for every basis element
    a, that beta pi(a)^x beta^{-1} lies in span pi(A).
    """
    beta = _as_form(f).beta
    stack = np.stack([a.ravel() for a in s.algebra.basis])
    faithful = bool(np.linalg.matrix_rank(stack) == len(s.algebra.basis))
    with np.errstate(all="ignore"):
        cond = np.linalg.cond(beta)
    if not np.isfinite(cond) or cond > 1e12:
        return ReconstructibilityReport(False, faithful, float("inf"), "beta is singular")
    worst = 0.0
    for a in s.algebra.basis:
        transported = _rdiv(beta @ krein_adjoint(a, s.space), beta)
        worst = max(worst, s.algebra.project(transported, tol).residual)
    return ReconstructibilityReport(faithful and worst <= tol, faithful, worst)


# -- order conditions --------------------------------------------------------


def right_representation(s: SpectralStructure) -> list[Array]:
    """pi^o(a) = J pi(a)^x J^{-1}, evaluated on the algebra basis."""
    return [s.real.sandwich(krein_adjoint(a, s.space)) for a in s.algebra.basis]


@dataclass(frozen=True)
class OrderReport:
    order0_residual: float
    order1_residual: float
    order0_ok: bool
    order1_ok: bool
    form_commutation: tuple[float, ...]


def order_conditions(s: SpectralStructure, forms: Sequence = (), tol: float = DEFAULT_TOL) -> OrderReport:
    """Residuals of the order-zero and order-one conditions.

    Also reports, for each supplied orientation form, how far it is from
    commuting with pi(A); an exact zero there is what the order conditions
    would force.
    """
    right = right_representation(s)
    order0 = 0.0
    order1 = 0.0
    for a in s.algebra.basis:
        da = commutator(s.dirac, a)
        for bo in right:
            order0 = max(order0, rel_err(a @ bo, bo @ a))
            order1 = max(order1, rel_err(da @ bo, bo @ da))
    comm = []
    for f in forms:
        beta = _as_form(f).beta
        comm.append(max(rel_err(beta @ a, a @ beta) for a in s.algebra.basis))
    return OrderReport(order0, order1, order0 <= tol, order1 <= tol, tuple(comm))


# -- equivalence -------------------------------------------------------------


@dataclass(frozen=True)
class EquivalenceReport:
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def __bool__(self) -> bool:  # pragma: no cover - trivial
        return self.ok

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.ok]


def unitary_equivalence_check(
    s1: SpectralStructure,
    s2: SpectralStructure,
    u: Array,
    forms: Sequence = (),
    tol: float = DEFAULT_TOL,
) -> EquivalenceReport:
    """Is u: K1 -> K2 a Krein-unitary equivalence of the two structures?

    Intertwining of the algebra is a statement about images, so it is checked
    as span membership in both directions, not elementwise.  Positivity
    transport is checked on the supplied sample of forms (u must send forms
    that pass on s1 to forms that pass on s2).
    """
    u = as_matrix(u)
    if s1.dim != s2.dim or u.shape != (s1.dim, s1.dim):
        raise ValueError("operator dimensions disagree")
    with np.errstate(all="ignore"):
        cond = np.linalg.cond(u)
    if not np.isfinite(cond) or cond > 1e12:
        raise ValueError("u is singular")
    uinv = np.linalg.inv(u)
    checks: list[CheckResult] = []

    def add(name: str, x: Array, y: Array, note: str = "") -> None:
        r = rel_err(x, y)
        checks.append(CheckResult(name, r, r <= tol, note))

    add("krein_unitary", np.conj(u).T @ s2.space.j @ u, s1.space.j)
    add("dirac", u @ s1.dirac @ uinv, s2.dirac)
    add("chirality", u @ s1.chi @ uinv, s2.chi)
    add("real", u @ s1.real.m @ np.conj(uinv), s2.real.m)
    worst = 0.0
    for a in s1.algebra.basis:
        worst = max(worst, s2.algebra.project(u @ a @ uinv, tol).residual)
    for b in s2.algebra.basis:
        worst = max(worst, s1.algebra.project(uinv @ b @ u, tol).residual)
    checks.append(CheckResult("algebra", worst, worst <= tol))

    if forms and s1.is_spacetime and s2.is_spacetime:
        fw1 = one_form_basis(s1, tol)
        fw2 = one_form_basis(s2, tol)
        bad = 0
        for f in forms:
            beta = _as_form(f).beta
            before = verify_time_orientation(s1, beta, tol, one_forms=fw1).ok
            after = verify_time_orientation(s2, u @ beta @ uinv, tol, one_forms=fw2).ok
            if before and not after:
                bad += 1
        checks.append(
            CheckResult("positive_forms", float(bad), bad == 0, f"{len(forms)} forms sampled")
        )
    return EquivalenceReport(tuple(checks))


# -- concrete two-dimensional families ---------------------------------------


def build_c2_spacetime(b: float, theta: float = 0.0, r: float = 1.0) -> SpectralStructure:
    """The one-parameter-up-to-equivalence family on C^2, KO dimension 2.

    j = r [[0, e^{i theta}], [e^{-i theta}, 0]], D = b [[0, e^{i theta}],
    [-e^{-i theta}, 0]], chi = diag(-1, 1), J = [[0, -1], [1, 0]] after
    conjugation.  Different theta values are unitarily equivalent through a
    diagonal phase.
    """
    if b == 0:
        raise ValueError("b must be nonzero")
    if r <= 0:
        raise ValueError("r must be positive")
    ph = np.exp(1j * theta)
    j = r * np.array([[0, ph], [np.conj(ph), 0]])
    dirac = b * np.array([[0, ph], [-np.conj(ph), 0]])
    chi = np.diag([-1.0, 1.0])
    real = AntilinearOperator(np.array([[0.0, -1.0], [1.0, 0.0]]))
    algebra = AlgebraRep(
        (np.diag([1.0, 0.0]), np.diag([0.0, 1.0])), ("e1", "e2")
    )
    return SpectralStructure(KreinSpace(j), algebra, dirac, real, chi, "antilorentzian", 2)


def c2_orientation_form(lam: float, mu: float, theta: float = 0.0) -> Array:
    """The general Krein-self-adjoint imaginary one-form of the C^2 family."""
    ph = np.exp(1j * theta)
    return np.array([[0, lam * ph], [mu * np.conj(ph), 0]])


def build_two_point_triple(b: float = 1.0, ko_dim: int = 0) -> SpectralStructure:
    """The two Euclidean structures on C^2 with off-diagonal Dirac.

    KO dimension 0 carries plain conjugation; KO dimension 6 conjugates
    across the flip.  Only these two occur in the family.
    """
    if b == 0:
        raise ValueError("b must be nonzero")
    ko = ko_dim % 8
    if ko not in (0, 6):
        raise ValueError("only KO dimensions 0 and 6 occur in this family")
    dirac = b * np.array([[0.0, 1.0], [1.0, 0.0]])
    chi = np.diag([1.0, -1.0])
    m = np.eye(2) if ko == 0 else np.array([[0.0, 1.0], [1.0, 0.0]])
    algebra = AlgebraRep((np.diag([1.0, 0.0]), np.diag([0.0, 1.0])), ("e1", "e2"))
    return SpectralStructure(
        hilbert_space(2), algebra, dirac, AntilinearOperator(m), chi, "euclidean", ko
    )
