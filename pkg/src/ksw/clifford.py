"""Irreducible complex Clifford representations in even dimension.

The metric is g = diag(+1, -1, ..., -1) ("mostly minus", one time direction).
Gammas come from a fixed recursive tensor construction; the exact base
matrices are an implementation choice and everything downstream is validated
only through invariants (anticommutation, Krein self-adjointness, the sign
table), never against golden matrices.

The Krein form is j = gamma^0, so e0 is future-directed by construction and
every gamma is Krein self-adjoint.  Charge conjugation J is obtained by
solving the antilinear intertwining equations J gamma^mu J^-1 = -gamma^mu
(vectors are J-imaginary), scaled so J^2 hits +-1 exactly and with the free
phase pinned by making the first nonzero entry of its matrix real positive.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kreinlin import (
    AntilinearOperator,
    Array,
    DEFAULT_TOL,
    KreinSpace,
    anticommutator,
    as_matrix,
    is_krein_positive,
    op_norm,
    rel_err,
)

_SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SIGMA2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@dataclass(frozen=True)
class KOSignEntry:
    """One row of the sign tables: (epsilon, epsilon'', kappa) at a KO dim."""

    signature: str
    metric_dim_mod8: int | None
    ko_dim_mod8: int
    epsilon: int
    epsilon2: int
    kappa: int


def _table(signature: str, rows: dict[int, tuple[int, int, int, int]]) -> dict[int, KOSignEntry]:
    out = {}
    for metric, (ko, eps, eps2, kap) in rows.items():
        out[metric] = KOSignEntry(signature, metric, ko, eps, eps2, kap)
    return out


# Indexed by metric dimension mod 8.  Only even entries exist.
ANTILORENTZIAN_TABLE = _table(
    "antilorentzian",
    {0: (2, -1, -1, -1), 2: (0, 1, 1, -1), 4: (6, 1, -1, -1), 6: (4, -1, 1, -1)},
)
LORENTZIAN_TABLE = _table(
    "lorentzian",
    {0: (6, 1, -1, 1), 2: (0, 1, 1, -1), 4: (2, -1, -1, 1), 6: (4, -1, 1, -1)},
)
# The Euclidean entries are derived from the antilorentzian ones by the
# rotation relations eps -> -eps, eps'' -> -eps'', kappa -> -kappa and
# ko -> (2 - ko) mod 8; they are indexed by KO dimension directly.
EUCLIDEAN_TABLE = {
    (2 - e.ko_dim_mod8) % 8: KOSignEntry(
        "euclidean", None, (2 - e.ko_dim_mod8) % 8, -e.epsilon, -e.epsilon2, -e.kappa
    )
    for e in ANTILORENTZIAN_TABLE.values()
}


def ko_signs(signature: str, ko_dim: int) -> KOSignEntry:
    """Look up (epsilon, epsilon'', kappa) by declared KO dimension."""
    ko = ko_dim % 8
    if signature == "euclidean":
        table = EUCLIDEAN_TABLE
        if ko in table:
            return table[ko]
    else:
        table = {
            "antilorentzian": ANTILORENTZIAN_TABLE,
            "lorentzian": LORENTZIAN_TABLE,
        }.get(signature)
        if table is None:
            raise ValueError(f"unknown signature {signature!r}")
        for entry in table.values():
            if entry.ko_dim_mod8 == ko:
                return entry
    raise ValueError(f"KO dimension {ko_dim} not present in the {signature} table")


@dataclass
class CliffordRep:
    n: int
    gamma: tuple[Array, ...]
    chi: Array
    space: KreinSpace
    J: AntilinearOperator
    signs: KOSignEntry

    @property
    def dim(self) -> int:
        return self.gamma[0].shape[0]

    @property
    def g_diag(self) -> Array:
        g = -np.ones(self.n)
        g[0] = 1.0
        return g

    def rho(self, v) -> Array:
        """rho(v) = sum_mu v_mu gamma^mu for coefficient vectors v."""
        v = np.asarray(v, dtype=complex)
        if v.shape != (self.n,):
            raise ValueError(f"expected {self.n} coefficients")
        return sum(v[mu] * self.gamma[mu] for mu in range(self.n))


def _raw_gammas(n: int) -> list[Array]:
    gammas = [_SIGMA1.copy(), 1j * _SIGMA2]
    while len(gammas) < n:
        eye = np.eye(gammas[0].shape[0], dtype=complex)
        gammas = [np.kron(g, _SIGMA3) for g in gammas]
        gammas.append(np.kron(eye, 1j * _SIGMA1))
        gammas.append(np.kron(eye, 1j * _SIGMA2))
    return gammas


def _charge_conjugation(gammas: list[Array]) -> Array:
    """Solve M conj(gamma^mu) = -gamma^mu M; the solution space is a line."""
    dim = gammas[0].shape[0]
    eye = np.eye(dim, dtype=complex)
    rows = []
    for g in gammas:
        # Row-major vec: vec(A X B) = (A kron B^T) vec(X), so the equation
        # M conj(g) + g M = 0 becomes (1 kron conj(g)^T + g kron 1) vec(M) = 0.
        rows.append(np.kron(eye, np.conj(g).T) + np.kron(g, eye))
    system = np.vstack(rows)
    _, s, vh = np.linalg.svd(system)
    null_dim = int(np.sum(s < 1e-9 * s[0]))
    if null_dim != 1:
        raise RuntimeError(f"charge conjugation solution space has dimension {null_dim}")
    m = vh[-1].reshape(dim, dim)
    # Scale so that M conj(M) = +-1 exactly; zeta is real for an irreducible
    # representation.
    square = m @ np.conj(m)
    zeta = complex(square[0, 0])
    if abs(zeta.imag) > 1e-9 or rel_err(square, zeta * eye) > 1e-9:
        raise RuntimeError("M conj(M) is not a real scalar")
    m = m / np.sqrt(abs(zeta.real))
    # Pin the phase: first nonzero entry (row-major) real positive.
    flat = m.ravel()
    lead = flat[np.flatnonzero(np.abs(flat) > 1e-9)[0]]
    m = m * (abs(lead) / lead)
    return m


def build_clifford(n: int) -> CliffordRep:
    """Representation of the even-dimensional Clifford algebra, 2 <= n <= 8."""
    if n % 2 != 0:
        raise ValueError("metric dimension must be even")
    if not 2 <= n <= 8:
        raise ValueError("metric dimension out of the supported range [2, 8]")
    gammas = _raw_gammas(n)

    prod = gammas[0]
    for g in gammas[1:]:
        prod = prod @ g
    square = prod @ prod
    z = complex(square[0, 0])
    if rel_err(square, z * np.eye(square.shape[0])) > 1e-10:
        raise RuntimeError("gamma product squared is not scalar")
    # chi = c gamma^0 ... gamma^{n-1} with c in {1, i} chosen so chi^2 = 1.
    c = 1.0 if abs(z - 1.0) < 1e-9 else 1.0j
    chi = c * prod

    space = KreinSpace(gammas[0])
    m = _charge_conjugation(gammas)
    entry = ANTILORENTZIAN_TABLE[n % 8]
    return CliffordRep(
        n=n,
        gamma=tuple(gammas),
        chi=chi,
        space=space,
        J=AntilinearOperator(m),
        signs=entry,
    )


def vector_part(a: Array, rep: CliffordRep) -> tuple[Array, float]:
    """Coefficients v minimizing ‖a − Σ v_mu gamma^mu‖, plus the residual.

    The gammas are trace-orthogonal, so the least-squares fit is the exact
    orthogonal projection onto the vector subspace.
    """
    a = as_matrix(a)
    stack = np.stack([g.ravel() for g in rep.gamma], axis=1)
    coeffs, *_ = np.linalg.lstsq(stack, a.ravel(), rcond=None)
    resid = a.ravel() - stack @ coeffs
    return coeffs, float(np.linalg.norm(resid))


def is_future_timelike(v, rep: CliffordRep, tol: float = DEFAULT_TOL) -> bool:
    """Timelike vectors whose rho(v) turns (.,.) into a positive product."""
    v = np.asarray(v, dtype=float)
    norm2 = float(np.sum(rep.g_diag * v * v))
    if norm2 <= tol:
        return False
    return bool(is_krein_positive(rep.rho(v), rep.space, tol))


def normalized_trace(a: Array, rep: CliffordRep) -> complex:
    a = as_matrix(a)
    return complex(np.trace(a)) / rep.dim


def vector_action(s: Array, rep: CliffordRep, tol: float = DEFAULT_TOL) -> Array:
    """The matrix Lambda with s rho(v) s⁻¹ = rho(Lambda v), for even s.

    Raises if conjugation by s does not preserve the vector subspace.
    """
    s = as_matrix(s)
    sinv = np.linalg.inv(s)
    cols = []
    for mu in range(rep.n):
        conj = s @ rep.gamma[mu] @ sinv
        coeffs, res = vector_part(conj, rep)
        if res > tol * max(1.0, op_norm(conj)):
            raise ValueError("conjugation does not preserve the vector subspace")
        cols.append(coeffs)
    lam = np.stack(cols, axis=1)
    if op_norm(np.imag(lam)) > 1e-7:
        raise ValueError("vector action is not real")
    return np.real(lam)


def spin_lift(lam: Array, rep: CliffordRep, tol: float = 1e-7) -> Array:
    """A spinor lift S of a proper orthochronous Lorentz matrix Lambda.

    Computed as expm(¼ A_{mu nu} gamma^mu gamma^nu) with A = logm(Lambda)
    lowered on its second index, the choice that makes conjugation act as
    Lambda itself rather than its inverse.  The lift is two-valued; the
    branch is fixed
    deterministically: real trace made nonnegative, ties broken by making the
    first nonzero entry's real part positive.
    """
    from scipy.linalg import expm, logm

    lam = np.asarray(lam, dtype=float)
    if lam.shape != (rep.n, rep.n):
        raise ValueError("Lorentz matrix has the wrong shape")
    x = logm(lam)
    if op_norm(np.imag(x)) > 1e-8:
        raise ValueError("matrix logarithm left the real Lie algebra")
    x = np.real(x)
    g = rep.g_diag
    lowered = x * g[None, :]  # A_{mu nu} = X^mu_alpha g_{alpha nu}; antisymmetric
    gen = np.zeros((rep.dim, rep.dim), dtype=complex)
    for mu in range(rep.n):
        for nu in range(rep.n):
            if lowered[mu, nu] != 0.0:
                gen += 0.25 * lowered[mu, nu] * (rep.gamma[mu] @ rep.gamma[nu])
    s = expm(gen)
    tr = complex(np.trace(s))
    if tr.real < -tol:
        s = -s
    elif abs(tr.real) <= tol:
        flat = s.ravel()
        lead = flat[np.flatnonzero(np.abs(flat) > tol)[0]]
        if lead.real < 0 or (abs(lead.real) <= tol and lead.imag < 0):
            s = -s
    # The defining property is non-negotiable.
    back = vector_action(s, rep)
    if rel_err(back, lam) > 1e-6:
        raise ValueError("spin lift failed to reproduce the vector action")
    return s


def even_basis_indices(n: int) -> list[tuple[int, ...]]:
    """Sorted multi-indices I with |I| even; basis labels for Cl^0."""
    out: list[tuple[int, ...]] = []
    for mask in range(1 << n):
        idx = tuple(mu for mu in range(n) if mask >> mu & 1)
        if len(idx) % 2 == 0:
            out.append(idx)
    out.sort(key=lambda t: (len(t), t))
    return out


def gamma_product(rep: CliffordRep, idx: tuple[int, ...]) -> Array:
    out = np.eye(rep.dim, dtype=complex)
    for mu in idx:
        out = out @ rep.gamma[mu]
    return out
