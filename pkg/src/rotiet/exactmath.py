"""Exact rational linear algebra for homogeneous systems.

All arithmetic uses :class:`fractions.Fraction`; nothing here ever touches a
float.  The three services are

* :func:`positive_solution` -- a strictly positive solution of ``A v = 0``,
* :func:`in_row_space` -- membership of a linear functional in the row span,
* :func:`nullspace_basis` -- an exact basis of ``{v : A v = 0}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

Row = Dict[Hashable, Fraction]


@dataclass(frozen=True)
class LinearSystem:
    """Homogeneous equalities ``sum(coeff * var) = 0`` over ordered variables."""

    variables: Tuple[Hashable, ...]
    equalities: Tuple[Mapping[Hashable, Fraction], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        rows = []
        known = set(self.variables)
        if len(known) != len(self.variables):
            raise ValueError("duplicate variable labels")
        for row in self.equalities:
            unknown = set(row) - known
            if unknown:
                raise ValueError(f"coefficients for unknown variables {sorted(map(str, unknown))}")
            rows.append({k: Fraction(c) for k, c in row.items() if c != 0})
        object.__setattr__(self, "equalities", tuple(rows))

    def matrix(self) -> List[List[Fraction]]:
        return [[row.get(v, Fraction(0)) for v in self.variables] for row in self.equalities]

    def evaluate(self, values: Mapping[Hashable, Fraction]) -> List[Fraction]:
        """Left-hand sides of every equality at ``values``."""
        return [sum((c * values[k] for k, c in row.items()), Fraction(0)) for row in self.equalities]


def _rref(matrix: List[List[Fraction]], ncols: int) -> Tuple[List[List[Fraction]], List[int]]:
    m = [list(r) for r in matrix]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(sys: LinearSystem) -> int:
    return len(_rref(sys.matrix(), len(sys.variables))[1])


def nullspace_basis(sys: LinearSystem) -> List[Dict[Hashable, Fraction]]:
    """Exact basis of the solution space, one vector per free variable."""
    n = len(sys.variables)
    reduced, pivots = _rref(sys.matrix(), n)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * n
        vec[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            vec[p] = -row[f]
        basis.append(dict(zip(sys.variables, vec)))
    return basis


def in_row_space(target: Mapping[Hashable, Fraction], sys: LinearSystem) -> bool:
    """True iff ``target`` is a rational combination of the equalities."""
    n = len(sys.variables)
    extra = set(target) - set(sys.variables)
    if any(target[k] != 0 for k in extra):
        return False
    trow = [Fraction(target.get(v, 0)) for v in sys.variables]
    if all(x == 0 for x in trow):
        return True
    base = _rref(sys.matrix(), n)[1]
    grown = _rref(sys.matrix() + [trow], n)[1]
    return len(grown) == len(base)


def _phase_one(a: List[List[Fraction]], b: List[Fraction]) -> Optional[List[Fraction]]:
    """Solve ``a z = b, z >= 0`` by the phase-1 simplex method with Bland's rule.

    Returns a basic feasible ``z`` or ``None`` when the system is infeasible.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    if m == 0:
        return [Fraction(0)] * n
    rows = []
    for i in range(m):
        sign = -1 if b[i] < 0 else 1
        rows.append([sign * x for x in a[i]] + [Fraction(1 if j == i else 0) for j in range(m)] + [sign * b[i]])
    width = n + m
    basis = [n + i for i in range(m)]
    # reduced costs of the auxiliary objective (sum of artificials)
    cost = [Fraction(0)] * (width + 1)
    for j in range(n):
        cost[j] = -sum((rows[i][j] for i in range(m)), Fraction(0))
    cost[width] = -sum((rows[i][width] for i in range(m)), Fraction(0))

    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            if rows[i][enter] > 0:
                ratio = rows[i][width] / rows[i][enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:  # unbounded; cannot happen for the auxiliary problem
            break
        r = best[1]
        piv = rows[r][enter]
        rows[r] = [x / piv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][enter] != 0:
                f = rows[i][enter]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, rows[r])]
        basis[r] = enter

    if cost[width] != 0:
        return None
    z = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            z[j] = rows[i][width]
    return z


def positive_solution(sys: LinearSystem) -> Optional[Dict[Hashable, Fraction]]:
    """A solution with every component ``>= 1``, or ``None`` if no positive one exists.

    Homogeneity makes "some solution > 0" equivalent to "some solution >= 1".
    """
    mat = sys.matrix()
    shift = [-sum(row, Fraction(0)) for row in mat]
    z = _phase_one(mat, shift)
    if z is None:
        return None
    return {v: 1 + x for v, x in zip(sys.variables, z)}


def positivity_obstruction(sys: LinearSystem) -> Optional[Dict[Hashable, Fraction]]:
    """A non-negative, non-zero functional in the row space, if one exists.

    Such a functional ``r`` certifies that no positive solution exists, since
    every solution ``v`` satisfies ``r . v = 0``.  The result is scaled to
    coprime integers.
    """
    mat = sys.matrix()
    k, n = len(mat), len(sys.variables)
    if k == 0:
        return None
    # unknowns: y+ (k), y- (k), s (n);  A^T (y+ - y-) - s = 0,  sum(s) = 1
    a = []
    for j in range(n):
        col = [mat[i][j] for i in range(k)]
        a.append(col + [-x for x in col] + [Fraction(-1 if t == j else 0) for t in range(n)])
    a.append([Fraction(0)] * (2 * k) + [Fraction(1)] * n)
    z = _phase_one(a, [Fraction(0)] * n + [Fraction(1)])
    if z is None:
        return None
    s = z[2 * k:]
    return _integral({v: x for v, x in zip(sys.variables, s) if x != 0})


def _integral(vec: Mapping[Hashable, Fraction]) -> Dict[Hashable, Fraction]:
    from math import gcd, lcm

    den = 1
    for x in vec.values():
        den = lcm(den, x.denominator)
    nums = [int(x * den) for x in vec.values()]
    g = 0
    for x in nums:
        g = gcd(g, x)
    g = g or 1
    return {k: Fraction(int(x * den) // g) for k, x in vec.items()}


def dot(a: Mapping[Hashable, Fraction], b: Mapping[Hashable, Fraction]) -> Fraction:
    return sum((c * b.get(k, 0) for k, c in a.items()), Fraction(0))


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or an integer literal; no decimals, no whitespace inside."""
    t = text.strip()
    if not t:
        raise ValueError("empty rational")
    num, sep, den = t.partition("/")
    for part in (num, den) if sep else (num,):
        body = part[1:] if part[:1] in "+-" else part
        if not body.isdigit():
            raise ValueError(f"not a rational literal: {text!r}")
    if sep and den[:1] in "+-":
        raise ValueError(f"sign not allowed on denominator: {text!r}")
    value = Fraction(int(num), int(den)) if sep else Fraction(int(num))
    return value


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def combine(vectors: Sequence[Mapping[Hashable, Fraction]], coeffs: Sequence[Fraction]) -> Dict[Hashable, Fraction]:
    out: Dict[Hashable, Fraction] = {}
    for vec, c in zip(vectors, coeffs):
        for k, x in vec.items():
            out[k] = out.get(k, Fraction(0)) + c * x
    return out
