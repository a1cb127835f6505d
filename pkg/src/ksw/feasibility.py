"""Exact feasibility for systems of strict homogeneous inequalities.

Every constraint is a rational row c with meaning sum_i c_i x_i > 0.
Fourier-Motzkin elimination keeps, for each derived row, the positive
rational combination of input rows it came from, so an infeasible system
yields a checkable certificate: multipliers whose weighted sum of strict
inequalities is the zero row, i.e. the contradiction 0 > 0.  A feasible
system yields an exact rational point, reconstructed by midpoint
back-substitution through the elimination stages.

Variables are eliminated in index order; this makes the emitted
certificate deterministic.  Duplicate rows (equal up to positive scaling)
are merged, keeping the first provenance, which preserves certificate
validity since the dropped row states the same inequality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

__all__ = ["Feasible", "Infeasible", "solve_strict_inequalities", "certificate_is_valid"]


@dataclass(frozen=True)
class Feasible:
    point: tuple[Fraction, ...]


@dataclass(frozen=True)
class Infeasible:
    """certificate maps input row index -> positive multiplier; the
    weighted row sum is identically zero."""

    certificate: dict[int, Fraction]


@dataclass(frozen=True)
class _Row:
    coeffs: tuple[Fraction, ...]
    provenance: dict[int, Fraction]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)


def _parse(rows: Sequence[Sequence]) -> list[tuple[Fraction, ...]]:
    parsed = [tuple(Fraction(c) for c in row) for row in rows]
    widths = {len(r) for r in parsed}
    if len(widths) > 1:
        raise ValueError("rows have inconsistent lengths")
    return parsed

def _dedup_key(coeffs: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    scale = next((abs(c) for c in coeffs if c != 0), Fraction(1))
    return tuple(c / scale for c in coeffs)


def _combine(pos: _Row, neg: _Row, k: int) -> _Row:
    wp = 1 / pos.coeffs[k]
    wn = 1 / -neg.coeffs[k]
    coeffs = tuple(wp * a + wn * b for a, b in zip(pos.coeffs, neg.coeffs))
    provenance = {i: wp * m for i, m in pos.provenance.items()}
    for i, m in neg.provenance.items():
        provenance[i] = provenance.get(i, Fraction(0)) + wn * m
    return _Row(coeffs, provenance)


def solve_strict_inequalities(rows: Sequence[Sequence]) -> Feasible | Infeasible:
    """Decide {x : row . x > 0 for every row} exactly.

    Accepts anything Fraction() accepts as coefficients (Fraction, int,
    "p/q" strings).  An empty system is feasible at the origin.
    """
    parsed = _parse(rows)
    if not parsed:
        return Feasible(())
    n = len(parsed[0])
    work = [_Row(coeffs, {i: Fraction(1)}) for i, coeffs in enumerate(parsed)]
    stages: list[list[_Row]] = []

    for k in range(n):
        for row in work:
            if row.is_zero():
                return Infeasible(dict(row.provenance))
        stages.append(work)
        lower = [r for r in work if r.coeffs[k] > 0]
        upper = [r for r in work if r.coeffs[k] < 0]
        passed = [r for r in work if r.coeffs[k] == 0]
        combined = passed + [_combine(p, q, k) for p in lower for q in upper]
        seen: dict[tuple, None] = {}
        deduped = []
        for r in combined:
            key = _dedup_key(r.coeffs)
            if key in seen:
                continue
            seen[key] = None
            deduped.append(r)
        work = deduped

    for row in work:
        # every variable is eliminated, so any survivor asserts 0 > 0
        return Infeasible(dict(row.provenance))

    point = [Fraction(0)] * n
    for k in reversed(range(n)):
        lowers: list[Fraction] = []
        uppers: list[Fraction] = []
        for r in stages[k]:
            c = r.coeffs[k]
            if c == 0:
                continue
            rest = sum((r.coeffs[m] * point[m] for m in range(k + 1, n)), Fraction(0))
            bound = -rest / c
            (lowers if c > 0 else uppers).append(bound)
        if lowers and uppers:
            point[k] = (max(lowers) + min(uppers)) / 2
        elif lowers:
            point[k] = max(lowers) + 1
        elif uppers:
            point[k] = min(uppers) - 1
    return Feasible(tuple(point))


def certificate_is_valid(rows: Sequence[Sequence], certificate: dict[int, Fraction]) -> bool:
    """Exact check that the multipliers combine the rows to the zero row."""
    parsed = _parse(rows)
    if not certificate:
        return False
    if any(m <= 0 for m in certificate.values()):
        return False
    if any(i not in range(len(parsed)) for i in certificate):
        return False
    n = len(parsed[0]) if parsed else 0
    total = [Fraction(0)] * n
    for i, m in certificate.items():
        for j, c in enumerate(parsed[i]):
            total[j] += m * c
    return all(t == 0 for t in total)
