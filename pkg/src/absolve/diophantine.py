"""Exact projection solver for integer linear systems.

Works entirely in Python integers (arbitrary precision, no rounding). One
equation is absorbed per step: the projected row ``s = H a_i`` is reduced to
its gcd ``delta`` with an explicit certificate vector ``z`` (``z . s =
delta``), the step length is the exact quotient ``tau / delta``, and the
projector update divides ``s`` by ``delta`` so ``H`` stays integral.

Solvability splits into three levels per equation and the report records
which one each equation hit:

* ``independent``: the equation fixed one more degree of freedom,
* ``redundant``: implied by earlier equations,
* real incompatibility (no rational solution) raises
  :class:`~absolve.errors.IncompatibleSystem`,
* divisibility failure (rational solutions exist, integer ones do not)
  raises :class:`~absolve.errors.IntegerInconsistent` carrying the witness
  ``(row, delta, tau)``: ``delta`` divides every integer combination of the
  remaining unknowns, ``tau`` is not a multiple of it.

After a completed run the rows of ``H`` span the integer null lattice of the
processed rows, so ``x + H^T q`` over all integer ``q`` enumerates every
integer solution exactly.
"""

from dataclasses import dataclass
from itertools import product
from math import gcd

from .errors import IncompatibleSystem, IntegerInconsistent

INDEPENDENT = "independent"
REDUNDANT = "redundant"
INCOMPATIBLE = "incompatible"
INTEGER_INCOMPATIBLE = "incompatible_integer"


def _as_int_matrix(a, what="matrix"):
    rows = []
    for r in a:
        row = []
        for v in r:
            iv = int(v)
            if iv != v:
                raise ValueError(f"{what} entry {v!r} is not an integer")
            row.append(iv)
        rows.append(row)
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValueError(f"{what} rows have unequal lengths")
    return rows


def _as_int_vector(b, what="vector"):
    out = []
    for v in b:
        iv = int(v)
        if iv != v:
            raise ValueError(f"{what} entry {v!r} is not an integer")
        out.append(iv)
    return out


def bezout_gcd(values):
    """Greatest common divisor with a certificate combination.

    Returns ``(g, z)`` with ``g = gcd(values) >= 0`` and
    ``sum(z[i] * values[i]) == g``. The reduction always folds the two
    currently largest magnitudes into each other, which keeps the
    certificate entries small. All-zero input gives ``(0, [0, ...])``.
    """
    values = list(values)
    m = len(values)
    active = []  # (magnitude, coefficient vector)
    for i, v in enumerate(values):
        if v == 0:
            continue
        coeff = [0] * m
        coeff[i] = 1 if v > 0 else -1
        active.append([abs(v), coeff])
    if not active:
        return 0, [0] * m

    while len(active) > 1:
        active.sort(key=lambda e: e[0], reverse=True)
        a, b = active[0], active[1]
        q = a[0] // b[0]
        a[0] -= q * b[0]
        a[1] = [ca - q * cb for ca, cb in zip(a[1], b[1])]
        if a[0] == 0:
            active.pop(0)
    g, z = active[0]
    return g, z


def bareiss_det(mat):
    """Exact determinant of a square integer matrix (fraction-free)."""
    a = [list(map(int, r)) for r in mat]
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("need a square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(k + 1, n):
            for c in range(k + 1, n):
                a[r][c] = (a[r][c] * a[k][k] - a[r][k] * a[k][c]) // prev
            a[r][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def bareiss_rank(mat):
    """Exact rank (over the rationals) of an integer matrix."""
    a = [list(map(int, r)) for r in mat]
    if not a or not a[0]:
        return 0
    m, n = len(a), len(a[0])
    prev = 1
    rank = 0
    row = 0
    for col in range(n):
        pivot_row = None
        for r in range(row, m):
            if a[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        a[row], a[pivot_row] = a[pivot_row], a[row]
        for r in range(row + 1, m):
            for c in range(col + 1, n):
                a[r][c] = (a[r][c] * a[row][col] - a[r][col] * a[row][c]) \
                    // prev
            a[r][col] = 0
        prev = a[row][col]
        rank += 1
        row += 1
        if row == m:
            break
    return rank


@dataclass
class DioReport:
    """Outcome of an integer projection solve.

    ``x`` is a particular integer solution, ``h`` the final projector
    whose rows span the integer null lattice of the processed rows,
    ``deltas`` the gcd absorbed per independent equation (the invariant
    factors of the elimination order).
    """

    x: list
    rank: int
    eq_status: list
    h: list
    deltas: list
    matrix: list
    rhs: list


def solve(a, b, h1=None, x1=None):
    """Find an integer solution of ``A x = b`` and the full solution lattice.

    Parameters
    ----------
    a, b : integer matrix (m x n) and integer right-hand side (m,).
    h1 : optional initial projector; must be unimodular (determinant +-1)
        so that its rows span the full integer lattice.
    x1 : optional integer starting point.

    Returns a :class:`DioReport`; see the module docstring for the failure
    exceptions. Arithmetic is exact and unmetered.
    """
    a = _as_int_matrix(a)
    b = _as_int_vector(b, "rhs")
    m = len(a)
    if len(b) != m:
        raise ValueError("rhs length must equal the row count")
    n = len(a[0]) if m else 0

    if h1 is None:
        h = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    else:
        h = _as_int_matrix(h1, "initial projector")
        if len(h) != n or (h and len(h[0]) != n):
            raise ValueError("initial projector must be n x n")
        if bareiss_det(h) not in (1, -1):
            raise ValueError("initial projector must be unimodular")
    x = [0] * n if x1 is None else _as_int_vector(x1, "x1")
    if len(x) != n:
        raise ValueError("x1 length must equal the column count")

    eq_status = []
    deltas = []
    for i in range(m):
        row = a[i]
        tau = sum(rv * xv for rv, xv in zip(row, x)) - b[i]
        s = [sum(hr[k] * row[k] for k in range(n)) for hr in h]
        if all(sv == 0 for sv in s):
            if tau == 0:
                eq_status.append(REDUNDANT)
                continue
            eq_status.append(INCOMPATIBLE)
            raise IncompatibleSystem(
                i, report=_partial(x, eq_status, h, deltas, a, b),
                detail=f"projected row vanished, residual {tau}")
        delta, z = bezout_gcd(s)
        if tau % delta != 0:
            eq_status.append(INTEGER_INCOMPATIBLE)
            raise IntegerInconsistent(i, delta, tau)
        alpha = tau // delta

        # p = H^T z is both the integer step direction and the row the
        # projector update subtracts
        zh = [sum(z[j] * h[j][k] for j in range(n)) for k in range(n)]
        x = [xv - alpha * pv for xv, pv in zip(x, zh)]

        # H <- H - (s/delta) (z^T H); the new rows still span the null
        # lattice of the rows processed so far
        for j in range(n):
            f = s[j] // delta
            if f:
                hj = h[j]
                h[j] = [hv - f * zv for hv, zv in zip(hj, zh)]
        eq_status.append(INDEPENDENT)
        deltas.append(delta)

    return DioReport(x=x, rank=len(deltas), eq_status=eq_status, h=h,
                     deltas=deltas, matrix=a, rhs=b)


def _partial(x, eq_status, h, deltas, a, b):
    return DioReport(x=None, rank=len(deltas), eq_status=eq_status, h=h,
                     deltas=deltas, matrix=a, rhs=b)


def general_solution(report, q):
    """Integer solution ``x + H^T q`` for an integer parameter vector q."""
    if report.x is None:
        raise ValueError("no particular solution: the run was incompatible")
    q = _as_int_vector(q, "parameter vector")
    n = len(report.x)
    if len(q) != n:
        raise ValueError("parameter vector length must equal the unknowns")
    h = report.h
    return [report.x[k] + sum(q[j] * h[j][k] for j in range(n))
            for k in range(n)]


def _lattice_basis(rows):
    """Row basis of the integer lattice generated by ``rows``.

    Euclidean row echelon: entries below each pivot are cleared by
    subtracting integer multiples of the smallest-magnitude row, which
    are unimodular operations, so the generated lattice is unchanged and
    the surviving rows are independent.
    """
    work = [list(r) for r in rows if any(r)]
    if not work:
        return []
    n = len(work[0])
    done = 0
    for col in range(n):
        live = [i for i in range(done, len(work)) if work[i][col] != 0]
        if not live:
            continue
        while len(live) > 1:
            live.sort(key=lambda i: abs(work[i][col]))
            pivot = work[live[0]]
            pv = pivot[col]
            kept = [live[0]]
            for i in live[1:]:
                f = work[i][col] // pv
                if f:
                    work[i] = [a - f * p for a, p in zip(work[i], pivot)]
                if work[i][col] != 0:
                    kept.append(i)
            live = kept
        work[done], work[live[0]] = work[live[0]], work[done]
        done += 1
    return work[:done]


def _adjugate(mat):
    """Exact adjugate of a small square integer matrix via minors."""
    k = len(mat)
    if k == 0:
        return []
    adj = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            minor = [[mat[r][c] for c in range(k) if c != j]
                     for r in range(k) if r != i]
            adj[j][i] = (-1) ** (i + j) * bareiss_det(minor)
    return adj


def solutions_in_box(report, radius):
    """All integer solutions with every component in [-radius, radius].

    Reduces the projector rows to a lattice basis, then enumerates the
    parameter lattice inside an exact per-coordinate bound derived from
    the adjugate of the basis Gram matrix, so the returned tuple list is
    complete. Intended for small systems; the enumeration is exponential
    in the lattice dimension.
    """
    if report.x is None:
        raise ValueError("no particular solution: the run was incompatible")
    radius = int(radius)
    x = report.x
    rows = _lattice_basis(report.h)
    k = len(rows)
    if k == 0:
        if all(abs(v) <= radius for v in x):
            return [tuple(x)]
        return []

    # q is recovered from a target y by q = (H H^T)^{-1} H (y - x); bound
    # each |q_j| through the adjugate so the box below cannot miss one
    gram = [[sum(ra[c] * rb[c] for c in range(len(ra))) for rb in rows]
            for ra in rows]
    det = bareiss_det(gram)
    adj = _adjugate(gram)
    hy_bound = [sum(abs(c) * (radius + abs(xv)) for c, xv in zip(r, x))
                for r in rows]
    q_bounds = []
    for j in range(k):
        num = sum(abs(adj[j][l]) * hy_bound[l] for l in range(k))
        q_bounds.append(num // abs(det) + 1)

    out = []
    for q in product(*(range(-qb, qb + 1) for qb in q_bounds)):
        y = list(x)
        for j, qj in enumerate(q):
            if qj:
                rj = rows[j]
                y = [yv + qj * rv for yv, rv in zip(y, rj)]
        if all(abs(v) <= radius for v in y):
            out.append(tuple(y))
    out.sort()
    return out
