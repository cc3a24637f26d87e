"""Scaled projection engine for general linear systems.

The engine processes one scaled equation per step. Step ``i`` works on the
scaled row ``y_i = A^T v_i`` (for the default unit scalings ``v_i = e_i`` this
is just row ``i`` of ``A``), projects it through the running projector matrix
``H``, and either

* classifies the equation as redundant (projected row and scaled residual
  both vanish),
* raises :class:`~absolve.errors.IncompatibleSystem` (projected row vanishes,
  scaled residual does not), or
* takes a step ``x <- x - alpha p`` along the search vector ``p = H^T z`` and
  deflates ``H`` by the rank-one oblique update
  ``H <- H - (H y) (w^T H) / (w^T H y)``.

``H`` starts from any nonsingular matrix (identity by default) and after the
run annihilates every processed scaled row from the right and every accepted
``w`` from the left. The accepted search vectors ``P``, scalings ``V``, and
pivots ``v_i^T A p_i`` give the implicit factorization ``V^T A P = L`` with
``L`` lower triangular.

Row indices in reports and exceptions are 0-based.

Multiplication counts are exact: every scalar multiply or divide the loop
performs is added to the counter, including the arithmetic inside tolerance
tests (norms and scale factors).
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .counting import OpCounter
from .errors import IncompatibleSystem, NotFullRank, StrategyBreakdown

# Classification tolerances default to 1e-12 * n, scaled by the problem data
# (see Tolerances.resolve).
BASE_TOL = 1e-12

INDEPENDENT = "independent"
REDUNDANT = "redundant"
INCOMPATIBLE = "incompatible"


@dataclass
class Tolerances:
    """Relative thresholds for the engine's zero tests.

    ``None`` fields resolve to ``1e-12 * n`` at solve time. The dependency
    test compares ``|H y_i|`` against ``dependency * |y_i| * |H_1|_F``; the
    residual test compares the scaled residual ``tau_i`` against
    ``residual`` times the per-equation magnitudes (``|y_i| |x| + |b_i|``
    for unit scalings, ``|y_i| |x| + |v| |b|`` for general ones) plus the
    whole-system floor ``|v| (|A|_F |x| + |b|)``, so a numerically zero
    equation of a derived system reads as redundant rather than as a
    contradiction between round-off terms; the pivot test compares
    ``|v^T A p|`` against ``pivot * |y_i| * |p|``.
    """

    dependency: float | None = None
    residual: float | None = None
    pivot: float | None = None

    def resolve(self, n):
        base = BASE_TOL * max(n, 1)
        dep = base if self.dependency is None else self.dependency
        res = base if self.residual is None else self.residual
        piv = base if self.pivot is None else self.pivot
        return dep, res, piv


@dataclass
class ProjectorState:
    """Running state of a projection solve.

    ``h`` is the current projector, ``step`` the number of processed
    equations. ``p_cols`` / ``v_cols`` / ``pivots`` record the accepted search
    vectors, their scalings (an ``int`` entry means a unit vector ``e_i``),
    and the pivots ``v_i^T A p_i`` (the diagonal of the implicit ``L``).
    """

    h: np.ndarray
    step: int = 0
    p_cols: list = field(default_factory=list)
    v_cols: list = field(default_factory=list)
    pivots: list = field(default_factory=list)
    matrix: np.ndarray | None = None
    rhs: np.ndarray | None = None
    counter: OpCounter = field(default_factory=OpCounter)

    @property
    def n(self):
        if self.h is not None:
            return self.h.shape[0]
        return self.matrix.shape[1]

    def p_matrix(self):
        """Accepted search vectors as columns (n x rank)."""
        if not self.p_cols:
            return np.empty((self.n, 0))
        return np.column_stack(self.p_cols)

    def v_matrix(self, m=None):
        """Accepted scaling vectors as columns (m x rank)."""
        if m is None:
            m = self.matrix.shape[0]
        if not self.v_cols:
            return np.empty((m, 0))
        cols = []
        for v in self.v_cols:
            if isinstance(v, (int, np.integer)):
                e = np.zeros(m)
                e[v] = 1.0
                cols.append(e)
            else:
                cols.append(v)
        return np.column_stack(cols)

    def diag_l(self):
        return np.asarray(self.pivots, dtype=float)


@dataclass
class SolveReport:
    """Outcome of a projection solve.

    ``x`` is the final iterate (``None`` when the run aborted on an
    incompatible equation), ``rank`` the number of equations classified
    independent, ``eq_status`` one tag per processed equation, ``state`` the
    final projector state, ``mult_count`` the exact multiply count, and
    ``residual_norm`` the final ``|A x - b|_2``. ``iterates`` holds the
    iterate history (x_1 first) when the solve was asked to keep it.
    """

    x: np.ndarray | None
    rank: int
    eq_status: list
    state: ProjectorState
    mult_count: int
    residual_norm: float | None
    iterates: list | None = None
    workspace: object | None = None


def _as_system(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2:
        raise ValueError("matrix must be 2-D")
    if b.shape != (a.shape[0],):
        raise ValueError("rhs length must equal the row count")
    return a, b


def solve(a, b, strategy="huang", x1=None, tol=None, keep_iterates=False,
          counter=None):
    """Solve ``A x = b`` with a scaled projection strategy.

    Parameters
    ----------
    a, b : array_like
        System matrix (m x n) and right-hand side (m,). m > n is allowed;
        extra consistent equations are classified redundant, and the
        orthogonally scaled strategy resolves inconsistent ones in the
        least-squares sense.
    strategy : str or strategy object
        A name accepted by :func:`absolve.strategies.make_strategy` or an
        instantiated strategy.
    x1 : array_like, optional
        Starting iterate (default zero, which makes the norm-minimizing
        strategies return least-norm solutions).
    tol : Tolerances, optional
        Zero-test thresholds; fields default to ``1e-12 * n``.
    keep_iterates : bool
        Record the iterate after every equation (x_1 included).
    counter : OpCounter, optional
        Accumulate multiply counts into an existing counter.

    Returns
    -------
    SolveReport

    Raises
    ------
    IncompatibleSystem
        If a dependent equation has a nonvanishing scaled residual. The
        partial report is attached to the exception.
    StrategyBreakdown
        If the strategy's direction seed yields a vanishing pivot
        (:class:`~absolve.errors.RegularityFailure` for implicit LU).
    """
    a, b = _as_system(a, b)
    m, n = a.shape
    if isinstance(strategy, str):
        from .strategies import make_strategy
        strategy = make_strategy(strategy)
    dep_tol, res_tol, piv_tol = (tol or Tolerances()).resolve(n)
    counter = counter if counter is not None else OpCounter()

    x = np.zeros(n) if x1 is None else np.array(x1, dtype=float)
    if x.shape != (n,):
        raise ValueError("x1 length must equal the column count")
    state = ProjectorState(h=strategy.initial_h(n), matrix=a, rhs=b,
                           counter=counter)
    strategy.begin(a)

    # dependency tests compare against the initial projector's magnitude:
    # the current one shrinks to round-off as rows are absorbed, and
    # s = H y is bounded by it, so a live ||H|| can never flag anything
    h_ref = float(np.linalg.norm(state.h))
    counter.add(n * n)

    norm_b = float(np.linalg.norm(b))
    counter.add(m)
    # whole-system scale for the consistency test: a numerically zero row
    # of a derived system has y and b_i both at round-off, and comparing
    # noise against noise would turn it into a false contradiction
    a_ref = float(np.linalg.norm(a))
    counter.add(m * n)
    eq_status = []
    iterates = [x.copy()] if keep_iterates else None

    for i in range(m):
        v = strategy.scaling(i, state)
        if v is None:
            # unit scaling: the scaled row is row i itself
            y = a[i]
            tau = float(y @ x - b[i])
            counter.add(n)
            v_norm = 1.0
            b_scale = abs(b[i])
            v_rec = i
        else:
            y = a.T @ v
            r = a @ x - b
            tau = float(v @ r)
            counter.add(2 * m * n + m)
            v_norm = float(np.linalg.norm(v))
            b_scale = v_norm * norm_b
            counter.add(m + 1)
            v_rec = v

        s = state.h @ y
        counter.add(n * n)
        y_norm = float(np.linalg.norm(y))
        counter.add(n)

        test_vec, test_scale = strategy.classify_vector(i, state, s, y_norm,
                                                        h_ref)
        if float(np.linalg.norm(test_vec)) <= dep_tol * test_scale:
            counter.add(n)
            x_norm = float(np.linalg.norm(x))
            counter.add(n)
            resolved = strategy.resolves_inconsistency
            res_scale = y_norm * x_norm + b_scale \
                + v_norm * (a_ref * x_norm + norm_b)
            if resolved or abs(tau) <= res_tol * (res_scale + 1e-300):
                counter.add(1)
                eq_status.append(REDUNDANT)
                state.step += 1
                if keep_iterates:
                    iterates.append(x.copy())
                continue
            eq_status.append(INCOMPATIBLE)
            partial = SolveReport(x=None, rank=len(state.pivots),
                                  eq_status=eq_status, state=state,
                                  mult_count=counter.mults,
                                  residual_norm=None, iterates=iterates)
            raise IncompatibleSystem(i, report=partial,
                                     detail=f"scaled residual {tau:.3e}")
        counter.add(n)

        z = strategy.direction_seed(i, state, s)
        p = strategy.search_vector(i, state, s, z)
        den = float(y @ p)
        counter.add(n)
        p_norm = float(np.linalg.norm(p))
        counter.add(n)
        strategy.validate_pivot(i, den, y_norm * p_norm, piv_tol)
        if abs(den) <= piv_tol * y_norm * p_norm:
            raise StrategyBreakdown(i, detail=f"pivot {den:.3e}")

        alpha = tau / den
        counter.add(1)
        x -= alpha * p
        counter.add(n)

        w = strategy.projection_seed(i, state, s, z)
        strategy.update_h(state, s, w, p, den)

        state.p_cols.append(p.copy())
        state.v_cols.append(v_rec)
        state.pivots.append(den)
        state.step += 1
        eq_status.append(INDEPENDENT)
        if keep_iterates:
            iterates.append(x.copy())

    res = float(np.linalg.norm(a @ x - b))
    counter.add(m * n + m)
    return SolveReport(x=x, rank=len(state.pivots), eq_status=eq_status,
                       state=state, mult_count=counter.mults,
                       residual_norm=res, iterates=iterates)


def update_projector(state, scaled_row, w, tol=None):
    """Apply one rank-one oblique projector update; returns a new state.

    ``scaled_row`` is ``A^T v`` for the equation being absorbed (for unit
    scalings, the row itself). Requires ``|w^T H scaled_row|`` bounded away
    from zero, else :class:`~absolve.errors.DivisionByZero`.
    """
    from .errors import DivisionByZero

    h = np.asarray(state.h, dtype=float)
    y = np.asarray(scaled_row, dtype=float)
    w = np.asarray(w, dtype=float)
    s = h @ y
    wh = w @ h
    den = float(w @ s)
    n = h.shape[0]
    threshold = (BASE_TOL * n if tol is None else tol)
    # scale by the inputs, not by s: once the row is annihilated s is
    # round-off and a test relative to ||s|| could never fire
    scale = float(np.linalg.norm(y) * np.linalg.norm(w))
    if abs(den) <= threshold * (scale + 1e-300):
        raise DivisionByZero(f"update pivot w.s = {den:.3e} vanishes")
    new_h = h - np.outer(s, wh / den)
    return ProjectorState(h=new_h, step=state.step + 1,
                          p_cols=list(state.p_cols),
                          v_cols=list(state.v_cols),
                          pivots=list(state.pivots),
                          matrix=state.matrix, rhs=state.rhs,
                          counter=state.counter)


def general_solution(report, q):
    """Map a parameter vector q to the solution ``x + H_final^T q``.

    Over all q this sweeps the full solution set of the processed system
    (``H_final`` annihilates every processed row, so each image point solves
    the system; rank-deficiency leaves ``H_final`` with rank n - rank).
    """
    if report.x is None:
        raise ValueError("no particular solution: the run was incompatible")
    q = np.asarray(q, dtype=float)
    return report.x + report.state.h.T @ q


def implicit_factorization(report):
    """Return (P, L, V) with ``V^T A P = L`` lower triangular.

    Requires a completed full-rank square run, else
    :class:`~absolve.errors.NotFullRank`. ``A^{-1} = P L^{-1} V^T`` follows;
    see :func:`reconstruct_inverse`.
    """
    a = report.state.matrix
    m, n = a.shape
    if report.rank != n or m != n:
        raise NotFullRank(
            f"need a full-rank square run (m={m}, n={n}, rank={report.rank})")
    p = report.state.p_matrix()
    v = report.state.v_matrix(m)
    l = v.T @ (a @ p)
    return p, l, v


def reconstruct_inverse(p, l, v):
    """Rebuild ``A^{-1} = P L^{-1} V^T`` from the implicit factors."""
    return p @ scipy.linalg.solve_triangular(l, v.T, lower=True)


def strongly_nonsingular(q, tol=1e-10):
    """True when Gaussian elimination without pivoting succeeds on ``q``.

    Equivalently: every leading principal minor is nonzero (within ``tol``
    relative to the largest entry), which is the admissibility condition for
    a scaled parameter set.
    """
    u = np.array(q, dtype=float)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError("need a square matrix")
    k = u.shape[0]
    scale = max(1.0, float(np.abs(u).max())) if u.size else 1.0
    for j in range(k):
        if abs(u[j, j]) <= tol * scale:
            return False
        factors = u[j + 1:, j] / u[j, j]
        u[j + 1:, j + 1:] -= np.outer(factors, u[j, j + 1:])
    return True
