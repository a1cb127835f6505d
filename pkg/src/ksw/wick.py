"""Rotation between antilorentzian and Euclidean structures.

Both directions mix the Dirac operator with its conjugate by the rotation
form using quarter-turn coefficients, flip the chirality sign, multiply the
real structure by the form on the left, and step the KO dimension by
``n -> (2 - n) mod 8``.  The coefficients are chosen so the two constructions
invert each other exactly when the form is normalized:

    to Euclidean:       D_beta  = (1+i)/2 D + (1-i)/2 beta D beta
    to antilorentzian:  D_omega = (1-i)/2 D + (1+i)/2 omega D omega

A certified normalized form is its own inverse, so conjugation never inverts
a matrix on the construction path; genuine inversion appears only while
probing preconditions that are allowed to fail.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .kreinlin import (
    DEFAULT_TOL,
    AntilinearOperator,
    KreinSpace,
    as_matrix,
    commutator,
    in_span,
    krein_adjoint,
    rel_err,
)
from .spectral import (
    SpectralStructure,
    TimeOrientationForm,
    check_reconstructibility,
    one_form_basis,
    verify_time_orientation,
)

Array = np.ndarray

_TO_EUCLIDEAN = (1.0 + 1.0j) / 2.0
_TO_ANTILORENTZIAN = (1.0 - 1.0j) / 2.0


class WickError(ValueError):
    """A rotation precondition failed."""


class NotNormalized(WickError):
    """The form does not square to the identity."""


class NotReconstructible(WickError):
    """The spacetime algebra is not recovered from its shadow."""


class NotAnOrientation(WickError):
    """The form fails the time-orientation checks."""


class NotSelfAdjoint(WickError):
    """The form is not Krein-self-adjoint."""


class FailsNec12(WickError):
    """The form fails one of the rotation conditions.

    ``conditions`` names the offenders among ``imaginary`` (J omega J^{-1}
    must equal -omega), ``normalized`` (omega squared must be 1) and
    ``membership`` (omega must be a one-form, of D before rotating and of
    D_omega after).
    """

    def __init__(self, conditions: Sequence[str], message: str):
        self.conditions = tuple(conditions)
        super().__init__(message)


@dataclass(frozen=True)
class WickCertificate:
    """Record of the three facts checked before a rotation."""

    direction: str
    form: Array
    normalized: bool
    imaginary: bool
    membership: bool

    @property
    def valid(self) -> bool:
        return self.normalized and self.imaginary and self.membership


def _rotated_dirac(dirac: Array, form: Array, form_inv: Array, coeff: complex) -> Array:
    return coeff * dirac + np.conj(coeff) * (form @ dirac @ form_inv)


def _hermitized(a: Array) -> Array:
    return (a + np.conj(a).T) / 2.0


def wick_certificate(
    structure: SpectralStructure,
    form: Array | TimeOrientationForm,
    direction: str,
    tol: float = DEFAULT_TOL,
) -> WickCertificate:
    """Probe the rotation conditions without raising.

    For ``direction="to_euclidean"`` membership means the form lies in the
    one-form bimodule of the structure's own Dirac operator; for
    ``direction="to_antilorentzian"`` it means membership for the rotated
    operator ``D_omega``.  A singular form short-circuits the rotated
    membership check to False.
    """
    if direction not in ("to_euclidean", "to_antilorentzian"):
        raise ValueError(f"unknown direction {direction!r}")
    beta = as_matrix(form.beta if isinstance(form, TimeOrientationForm) else form)
    eye = np.eye(structure.dim)
    normalized = rel_err(beta @ beta, eye) <= tol
    imaginary = rel_err(structure.real.sandwich(beta), -beta) <= tol
    if direction == "to_euclidean":
        membership = one_form_basis(structure, tol).project(beta, tol).ok
    else:
        if normalized:
            beta_inv = beta
        elif np.linalg.cond(beta) < 1e12:
            beta_inv = np.linalg.solve(beta, eye)
        else:
            return WickCertificate(direction, beta, normalized, imaginary, False)
        rotated = _rotated_dirac(structure.dirac, beta, beta_inv, _TO_ANTILORENTZIAN)
        basis = structure.algebra.basis
        products = [a @ commutator(rotated, b) for a in basis for b in basis]
        membership = in_span(beta, products, tol).ok
    return WickCertificate(direction, beta, normalized, imaginary, membership)


def to_euclidean(
    s: SpectralStructure,
    form: Array | TimeOrientationForm,
    tol: float = DEFAULT_TOL,
) -> SpectralStructure:
    """Rotate an antilorentzian structure to Euclidean along a certified form.

    The form must pass the time-orientation checks, witness
    reconstructibility, and square to the identity; failures raise
    :class:`NotAnOrientation`, :class:`NotReconstructible` and
    :class:`NotNormalized` in that order.  The result carries the positive
    definite Gram ``j @ beta``, the mixed Dirac operator, real structure
    ``beta J`` and chirality ``-chi``.
    """
    if s.signature != "antilorentzian":
        raise ValueError("input structure must be antilorentzian")
    oriented = form if isinstance(form, TimeOrientationForm) else TimeOrientationForm(as_matrix(form))
    beta = oriented.beta
    report = verify_time_orientation(s, oriented, tol)
    if not report.ok:
        names = ", ".join(c.name for c in report.failures())
        raise NotAnOrientation(f"form fails orientation checks: {names}")
    rec = check_reconstructibility(s, oriented, tol)
    if not rec.ok:
        raise NotReconstructible(rec.note or f"worst residual {rec.worst_residual:.3e}")
    if not report.normalized:
        raise NotNormalized("form does not square to the identity")
    dirac = _rotated_dirac(s.dirac, beta, beta, _TO_EUCLIDEAN)
    gram = _hermitized(s.space.j @ beta)
    return SpectralStructure(
        space=KreinSpace(gram, tol=s.space.tol),
        algebra=s.algebra,
        dirac=dirac,
        real=AntilinearOperator(beta @ s.real.m),
        chi=-s.chi,
        signature="euclidean",
        ko_dim=(2 - s.ko_dim) % 8,
    )


def to_antilorentzian(
    t: SpectralStructure,
    omega: Array,
    tol: float = DEFAULT_TOL,
) -> SpectralStructure:
    """Rotate a Euclidean structure to antilorentzian along a form omega.

    Omega must be Krein-self-adjoint (:class:`NotSelfAdjoint` otherwise) and
    satisfy the three rotation conditions: J-imaginary, normalized, and a
    one-form both before and after rotating.  Violations raise
    :class:`FailsNec12` naming every failed condition.
    """
    if t.signature != "euclidean":
        raise ValueError("input structure must be euclidean")
    omega = as_matrix(omega)
    if omega.shape != (t.dim, t.dim):
        raise ValueError("form dimension does not match the structure")
    sa_residual = rel_err(krein_adjoint(omega, t.space), omega)
    if sa_residual > tol:
        raise NotSelfAdjoint(f"Krein self-adjointness residual {sa_residual:.3e}")

    failed: list[str] = []
    notes: list[str] = []
    eye = np.eye(t.dim)

    pre = one_form_basis(t, tol).project(omega, tol)
    if not pre.ok:
        failed.append("membership")
        notes.append(f"not a one-form of the unrotated Dirac (residual {pre.residual:.3e})")

    norm_residual = rel_err(omega @ omega, eye)
    if norm_residual > tol:
        failed.append("normalized")
        notes.append(f"omega squared misses the identity by {norm_residual:.3e}")

    imag_residual = rel_err(t.real.sandwich(omega), -omega)
    if imag_residual > tol:
        failed.append("imaginary")
        notes.append(f"J omega J^{{-1}} + omega has residual {imag_residual:.3e}")

    if norm_residual <= tol:
        omega_inv = omega
    elif np.linalg.cond(omega) < 1e12:
        omega_inv = np.linalg.solve(omega, eye)
    else:
        omega_inv = None
        notes.append("omega is singular; rotated membership not probed")

    dirac = None
    if omega_inv is not None:
        dirac = _rotated_dirac(t.dirac, omega, omega_inv, _TO_ANTILORENTZIAN)
        basis = t.algebra.basis
        products = [a @ commutator(dirac, b) for a in basis for b in basis]
        post = in_span(omega, products, tol)
        if not post.ok:
            if "membership" not in failed:
                failed.append("membership")
            notes.append(f"not a one-form of the rotated Dirac (residual {post.residual:.3e})")

    if failed:
        raise FailsNec12(failed, "; ".join(notes))

    gram = _hermitized(t.space.j @ omega)
    return SpectralStructure(
        space=KreinSpace(gram, tol=t.space.tol),
        algebra=t.algebra,
        dirac=dirac,
        real=AntilinearOperator(omega @ t.real.m),
        chi=-t.chi,
        signature="antilorentzian",
        ko_dim=(2 - t.ko_dim) % 8,
    )


def _canonical_block_form(obj, sigma: Optional[Sequence[float]]) -> Array:
    graph = obj.graph
    k = len(graph.edges)
    if sigma is None:
        signs = [1.0] * k
    else:
        signs = [float(x) for x in sigma]
        if len(signs) != k:
            raise ValueError("sigma must assign one sign per edge")
        if any(abs(x) != 1.0 for x in signs):
            raise ValueError("sigma entries must be +1 or -1")
    stored = getattr(obj, "phases", None)
    out = np.zeros((2 * k, 2 * k), dtype=complex)
    for idx, edge in enumerate(graph.edges):
        if stored is not None:
            theta = stored[idx]
        else:
            theta = edge.phase if edge.phase is not None else 0.0
        phase = np.exp(1j * theta)
        out[2 * idx, 2 * idx + 1] = signs[idx] * 1j * phase
        out[2 * idx + 1, 2 * idx] = -signs[idx] * 1j / phase
    return out


def _structure_of(t) -> SpectralStructure:
    inner = getattr(t, "triple", None)
    if isinstance(inner, SpectralStructure):
        return inner
    if isinstance(t, SpectralStructure):
        return t
    raise TypeError("expected a Euclidean structure or an object carrying one")


def _candidate_nullspace(struct: SpectralStructure, tol: float):
    """Real-linear solution space of ``b* = b`` (Krein) and ``JbJ^-1 = -b``.

    Returns (forms, null) where null's columns are coordinates over the
    realified span of the one-form basis.  An empty basis gives null with
    zero columns.
    """
    forms = one_form_basis(struct, tol).basis
    if not forms:
        return forms, np.zeros((0, 0))

    def constraint_residuals(op: Array) -> Array:
        sa = krein_adjoint(op, struct.space) - op
        im = struct.real.sandwich(op) + op
        stacked = np.concatenate([sa.ravel(), im.ravel()])
        return np.concatenate([stacked.real, stacked.imag])

    columns = []
    for b in forms:
        columns.append(constraint_residuals(b))
        columns.append(constraint_residuals(1j * b))
    system = np.stack(columns, axis=1)
    _, sing, vt = np.linalg.svd(system)
    cutoff = tol * (sing[0] if sing.size and sing[0] > 0 else 1.0)
    rank = int(np.sum(sing > cutoff))
    return forms, vt[rank:].T


def orientation_candidate_dimension(struct: SpectralStructure, tol: float = DEFAULT_TOL) -> int:
    """Dimension of the space of Krein-self-adjoint imaginary one-forms.

    Zero is a proof that no rotating form (and no time-orientation built
    from one-forms) can exist on ``struct``; the individual constraints
    may each admit solutions while their intersection is trivial.
    """
    _, null = _candidate_nullspace(struct, tol)
    return int(null.shape[1])


def find_distinguished_form(
    t,
    sigma: Optional[Sequence[float]] = None,
    tol: float = DEFAULT_TOL,
    rng: Optional[np.random.Generator] = None,
    samples: int = 64,
) -> Optional[Array]:
    """Search for a form that rotates a Euclidean structure to antilorentzian.

    Graph-built triples (anything carrying both ``graph`` and ``triple``)
    have a closed-form answer: the block form with one ``sigma``-signed
    antisymmetric phase block per edge.  For everything else the search is
    generic: solve the real-linear system cutting out Krein-self-adjoint
    J-imaginary one-forms, then look for involutions among the solution
    basis, pairwise combinations, and ``samples`` random combinations.

    Returns the form, or None.  An empty solution space makes None a proof
    that no form exists; an exhausted search does not.
    """
    if getattr(t, "graph", None) is not None and getattr(t, "triple", None) is not None:
        return _canonical_block_form(t, sigma)

    struct = _structure_of(t)
    if struct.signature != "euclidean":
        raise ValueError("input structure must be euclidean")
    forms, null = _candidate_nullspace(struct, tol)
    if null.shape[1] == 0:
        return None
    dim = struct.dim

    def assemble(coords: Array) -> Array:
        coeffs = coords[0::2] + 1j * coords[1::2]
        return np.tensordot(coeffs, np.stack(forms), axes=1)

    def try_candidate(op: Array) -> Optional[Array]:
        square = op @ op
        scale = np.trace(square) / dim
        if abs(scale.imag) > tol or scale.real <= tol:
            return None
        if rel_err(square, scale * np.eye(dim)) > tol:
            return None
        candidate = op / np.sqrt(scale.real)
        cert = wick_certificate(struct, candidate, "to_antilorentzian", tol)
        if cert.valid:
            return candidate
        return None

    candidates: list[Array] = [null[:, j] for j in range(null.shape[1])]
    for a in range(null.shape[1]):
        for b in range(a + 1, null.shape[1]):
            candidates.append(null[:, a] + null[:, b])
            candidates.append(null[:, a] - null[:, b])
    if rng is None:
        rng = np.random.default_rng(0)
    for _ in range(samples):
        candidates.append(rng.standard_normal(null.shape[1]))

    for coords in candidates:
        found = try_candidate(assemble(np.asarray(coords, dtype=float)))
        if found is not None:
            return found
    return None
