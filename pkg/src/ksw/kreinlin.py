"""Dense linear algebra over finite-dimensional Krein spaces.

A Krein space here is C^n equipped with the (generally indefinite) product
(x, y) = <x, j y>, where j is an invertible hermitian matrix and <.,.> is the
standard scalar product, antilinear in the first slot.  The module supplies
the x-adjoint for this product, the beta-twisted adjoint, operator positivity
with respect to the induced forms, a nilpotency check for commutators, and a
small calculus of antilinear maps.

Antilinear maps are a distinct type, never a "matrix plus flag": an
:class:`AntilinearOperator` stores a matrix ``m`` and acts by
``x -> m @ conj(x)``.  Composition of two antilinear maps is an ordinary
matrix (``m1 @ conj(m2)``), so mixed products stay total and unambiguous.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

Array = np.ndarray

# Relative tolerance for predicate checks (hermiticity, positivity, equality).
DEFAULT_TOL = 1e-9
# Tolerance for algebraic identities on well-conditioned inputs.
IDENTITY_TOL = 1e-12


def as_matrix(a) -> Array:
    """Coerce to a square complex matrix, rejecting junk early."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.size and not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def op_norm(a: Array) -> float:
    return float(np.linalg.norm(a, 2)) if a.size else 0.0


def rel_err(x: Array, y: Array) -> float:
    """‖x − y‖ scaled by max(1, ‖x‖, ‖y‖)."""
    scale = max(1.0, op_norm(x), op_norm(y))
    return op_norm(x - y) / scale


def is_hermitian(a: Array, tol: float = DEFAULT_TOL) -> bool:
    return rel_err(a, a.conj().T) < tol


def commutator(a: Array, b: Array) -> Array:
    return a @ b - b @ a


def anticommutator(a: Array, b: Array) -> Array:
    return a @ b + b @ a


@dataclass
class KreinSpace:
    """C^dim with the product (x,y) = <x, j y>; j hermitian and invertible."""

    j: Array
    tol: float = DEFAULT_TOL

    def __post_init__(self) -> None:
        self.j = as_matrix(self.j)
        if not is_hermitian(self.j, self.tol):
            raise ValueError("form matrix must be hermitian")
        # Invertibility guard: a huge condition number means the product is
        # degenerate for all practical purposes.
        if np.linalg.cond(self.j) > 1.0 / max(self.tol, 1e-15):
            raise ValueError("form matrix must be invertible")
        self.j.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.j.shape[0]

    def product(self, x: Array, y: Array) -> complex:
        return complex(np.vdot(x, self.j @ y))


def hilbert_space(dim: int) -> KreinSpace:
    """The definite case j = 1."""
    return KreinSpace(np.eye(dim))


def krein_adjoint(a: Array, space: KreinSpace) -> Array:
    """A× = j⁻¹ A† j, the adjoint for (x,y) = <x, j y>."""
    a = as_matrix(a)
    if a.shape[0] != space.dim:
        raise ValueError("operator and space dimensions differ")
    return np.linalg.solve(space.j, a.conj().T @ space.j)


@dataclass
class AntilinearOperator:
    """The map x -> m @ conj(x)."""

    m: Array

    def __post_init__(self) -> None:
        self.m = as_matrix(self.m)
        self.m.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.m.shape[0]

    def __call__(self, x: Array) -> Array:
        return self.m @ np.conj(x)

    def compose(self, other: "AntilinearOperator") -> Array:
        """self ∘ other is linear, with matrix m1 @ conj(m2)."""
        return self.m @ np.conj(other.m)

    def compose_linear(self, a: Array) -> "AntilinearOperator":
        """self ∘ A (antilinear): matrix m @ conj(A)."""
        return AntilinearOperator(self.m @ np.conj(as_matrix(a)))

    def after_linear(self, a: Array) -> "AntilinearOperator":
        """A ∘ self (antilinear): matrix A @ m."""
        return AntilinearOperator(as_matrix(a) @ self.m)

    def inverse(self) -> "AntilinearOperator":
        return AntilinearOperator(np.conj(np.linalg.inv(self.m)))

    def sandwich(self, a: Array) -> Array:
        """J A J⁻¹, linear, with matrix m @ conj(A) @ m⁻¹."""
        right = np.linalg.solve(self.m.T, np.conj(as_matrix(a)).T).T
        return self.m @ right

    def square(self) -> Array:
        """J² as a linear operator: m @ conj(m)."""
        return self.m @ np.conj(self.m)


def antilinear_adjoint(J: AntilinearOperator, space: KreinSpace) -> AntilinearOperator:
    """The Krein adjoint J× of an antilinear map, via (Jx, y) = conj((x, J×y)).

    Written out against the form matrix this is m× = j⁻¹ mᵀ conj(j).
    """
    if J.dim != space.dim:
        raise ValueError("operator and space dimensions differ")
    return AntilinearOperator(np.linalg.solve(space.j, J.m.T @ np.conj(space.j)))


@dataclass
class PositivityReport:
    ok: bool
    margin: float
    hermiticity_residual: float

    def __bool__(self) -> bool:  # pragma: no cover - trivial
        return self.ok


def gram_positivity(gram: Array, tol: float = DEFAULT_TOL) -> PositivityReport:
    """Decide positive definiteness of a candidate Gram matrix.

    Eigenvalues of the hermitized matrix are used rather than a pivoted
    factorization so the margin (smallest eigenvalue) can be reported.
    """
    gram = as_matrix(gram)
    herm = rel_err(gram, gram.conj().T)
    eigs = np.linalg.eigvalsh((gram + gram.conj().T) / 2.0)
    margin = float(eigs[0]) if eigs.size else 0.0
    scale = max(1.0, op_norm(gram))
    ok = herm < tol and margin > tol * scale
    return PositivityReport(ok=ok, margin=margin, hermiticity_residual=herm)


def is_krein_positive(b: Array, space: KreinSpace, tol: float = DEFAULT_TOL) -> PositivityReport:
    """True iff (., b .) is positive definite, i.e. j b is hermitian positive."""
    b = as_matrix(b)
    if b.shape[0] != space.dim:
        raise ValueError("operator and space dimensions differ")
    return gram_positivity(space.j @ b, tol)


def star_beta_adjoint(a: Array, beta: Array, space: KreinSpace) -> Array:
    """A^{*β} = β A× β⁻¹.

    When β is Krein-positive this is the adjoint for the scalar product
    <x,y>_β = (x, β⁻¹ y).
    """
    beta = as_matrix(beta)
    if np.linalg.cond(beta) > 1e12:
        raise ValueError("beta must be invertible")
    ax = krein_adjoint(a, space)
    return beta @ np.linalg.solve(beta.T, ax.T).T


def beta_gram(beta: Array, space: KreinSpace) -> Array:
    """Gram matrix of <x,y>_β = (x, β⁻¹ y), namely j β⁻¹."""
    beta = as_matrix(beta)
    return np.linalg.solve(beta.T, space.j.T).T


@dataclass
class NilpotencyReport:
    nilpotent: bool
    traces: tuple[complex, ...]
    hypothesis_residual: float
    power_residual: float

    def __bool__(self) -> bool:  # pragma: no cover - trivial
        return self.nilpotent


def jacobson_nilpotency(a: Array, b: Array, tol: float = DEFAULT_TOL) -> NilpotencyReport:
    """If [[A,B],A] = 0 then [A,B] is nilpotent; verify it numerically.

    Returns the traces tr([A,B]^k), k = 1..dim, which all vanish under the
    hypothesis, plus the residual of [A,B]^dim.  Raises if the hypothesis
    itself fails.
    """
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError("operators must share a dimension")
    c = commutator(a, b)
    hyp = commutator(c, a)
    scale = max(1.0, op_norm(a) ** 2 * op_norm(b))
    hyp_res = op_norm(hyp) / scale
    if hyp_res > tol:
        raise ValueError(
            f"hypothesis violated: [[A,B],A] != 0 (relative residual {hyp_res:.3e})"
        )
    dim = a.shape[0]
    traces = []
    power = np.eye(dim, dtype=complex)
    for _ in range(dim):
        power = power @ c
        traces.append(complex(np.trace(power)))
    power_scale = max(1.0, op_norm(c)) ** dim
    power_res = op_norm(power) / power_scale
    nilpotent = power_res < tol and all(abs(t) < tol * power_scale for t in traces)
    return NilpotencyReport(
        nilpotent=nilpotent,
        traces=tuple(traces),
        hypothesis_residual=hyp_res,
        power_residual=power_res,
    )


@dataclass
class SpanFit:
    coefficients: Array
    residual: float
    ok: bool

    def __bool__(self) -> bool:  # pragma: no cover - trivial
        return self.ok


def in_span(candidate: Array, basis: Sequence[Array], tol: float = DEFAULT_TOL) -> SpanFit:
    """Least-squares membership of a matrix in the span of a matrix family.

    The residual is relative to max(1, ‖candidate‖), the criterion used for
    every span decision in the package.
    """
    candidate = as_matrix(candidate)
    if not basis:
        res = op_norm(candidate) / max(1.0, op_norm(candidate))
        return SpanFit(np.zeros(0), res, res < tol)
    stack = np.stack([np.asarray(m, dtype=complex).ravel() for m in basis], axis=1)
    coeffs, *_ = np.linalg.lstsq(stack, candidate.ravel(), rcond=None)
    resid = candidate.ravel() - stack @ coeffs
    res = float(np.linalg.norm(resid)) / max(1.0, op_norm(candidate))
    return SpanFit(coeffs, res, res < tol)


def span_basis(mats: Sequence[Array], tol: float = DEFAULT_TOL) -> list[Array]:
    """Orthonormal basis (Frobenius) of the span of a matrix family, via SVD."""
    mats = [np.asarray(m, dtype=complex) for m in mats if op_norm(np.asarray(m)) > 0.0]
    if not mats:
        return []
    shape = mats[0].shape
    stack = np.stack([m.ravel() for m in mats], axis=0)
    u, s, vh = np.linalg.svd(stack, full_matrices=False)
    cutoff = tol * max(1.0, float(s[0]))
    return [vh[k].reshape(shape) for k in range(len(s)) if s[k] > cutoff]
