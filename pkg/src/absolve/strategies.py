"""Named parameter policies for the scaled projection engine.

Each strategy fixes the free choices of the engine loop: the scaling vector
applied to the current equation, the seed of the search vector, the seed of
the projector update, and the update formula itself. The engine calls the
hooks in a fixed order per step:

    scaling -> classify_vector -> direction_seed -> search_vector
            -> validate_pivot -> projection_seed -> update_h

Strategies count every multiply they perform themselves through
``state.counter``; the engine counts the shared work (scaled row, projected
row, tolerance arithmetic).

Besides the engine-pluggable classes this module provides two standalone
solvers that exploit structure the generic loop cannot:

* :func:`implicit_lu_solve` keeps only the nonzero block of the projector and
  meters its auxiliary storage (peak <= n^2/4 + n entries).
* :func:`gilu_solve` runs the deflation on a set of direction vectors without
  ever forming the projector.
"""

from dataclasses import dataclass

import numpy as np

from . import core
from .counting import OpCounter, StorageMeter
from .errors import (DependentRow, DivisionByZero, RegularityFailure,
                     StrategyBreakdown, UnsupportedShape)


class ParameterStrategy:
    """Base policy: unit scalings, seeds equal to the scaled row.

    Subclasses override individual hooks. ``resolves_inconsistency`` marks
    strategies whose dependent equations never signal incompatibility (the
    scaled residual of a dependent equation vanishes identically, as for
    orthogonal scalings on least-squares runs).
    """

    kind = "base"
    resolves_inconsistency = False

    def initial_h(self, n):
        return np.eye(n)

    def begin(self, a):
        """Validate the system shape and reset per-run caches."""

    def scaling(self, i, state):
        """Return the scaling vector v_i, or None for the unit vector e_i."""
        return None

    def classify_vector(self, i, state, s, y_norm, h_norm):
        """Vector and scale for the dependency test on equation i.

        ``h_norm`` is the norm of the *initial* projector, not the
        current one: s = H y shrinks with the live projector, so only a
        fixed reference can separate dependent rows from small ones.
        """
        return s, y_norm * h_norm

    def direction_seed(self, i, state, s):
        """Seed z_i of the search vector (default: the equation's row)."""
        return state.matrix[i]

    def search_vector(self, i, state, s, z):
        p = state.h.T @ z
        state.counter.add(state.n * state.n)
        return p

    def validate_pivot(self, i, den, scale, piv_tol):
        """Strategy-specific pivot check; the engine re-checks generically."""

    def projection_seed(self, i, state, s, z):
        """Seed w_i of the projector update (default: same as z_i)."""
        return z

    def update_h(self, state, s, w, p, den):
        wh = w @ state.h
        den_w = float(w @ s)
        n = state.n
        state.counter.add(n * n + n)
        if den_w == 0.0:
            raise DivisionByZero("projector update pivot w.H.y vanished")
        state.h -= np.outer(s, wh / den_w)
        state.counter.add(n * n + n)


class HuangStrategy(ParameterStrategy):
    """Unit scalings with row seeds; the projector stays symmetric.

    Search vectors are mutually orthogonal and, from a zero start, every
    iterate is the least-norm solution of the equations processed so far.
    """

    kind = "huang"

    def direction_seed(self, i, state, s):
        return state.matrix[i]

    def search_vector(self, i, state, s, z):
        # p = H^T a_i = H a_i = s up to symmetric round-off
        return s

    def update_h(self, state, s, w, p, den):
        n = state.n
        state.h -= np.outer(s, s / den)
        state.counter.add(n * n + n)


class OptimallyStableStrategy(HuangStrategy):
    """Huang parameter choice tagged as the error-stable variant.

    Among all admissible policies this choice minimizes the worst-case
    amplification of a perturbation of one iterate into the final solution,
    so it is the preferred default when inputs carry noise.
    """

    kind = "stable"


class ModifiedHuangStrategy(ParameterStrategy):
    """Reprojected Huang update for sharper rank decisions.

    The search vector is projected twice (p = H (H a_i)) and the projector
    update divides by p.p, which keeps H symmetric idempotent in exact
    arithmetic. The double projection pushes the dependent-row signal down
    to round-off level, which makes the rank count reliable on nearly
    dependent rows.
    """

    kind = "mhuang"

    def begin(self, a):
        self._cache = {}

    def classify_vector(self, i, state, s, y_norm, h_norm):
        p2 = state.h @ s
        state.counter.add(state.n * state.n)
        self._cache[i] = p2
        return p2, y_norm * h_norm

    def search_vector(self, i, state, s, z):
        p2 = self._cache.pop(i, None)
        if p2 is None:
            p2 = state.h @ s
            state.counter.add(state.n * state.n)
        return p2

    def update_h(self, state, s, w, p, den):
        n = state.n
        den_p = float(p @ p)
        state.counter.add(n)
        if den_p == 0.0:
            raise DivisionByZero("reprojected direction vanished")
        state.h -= np.outer(p, p / den_p)
        state.counter.add(n * n + n)


def modified_huang_direction(state, row, tol=None):
    """Search direction of the reprojected Huang update for one more row.

    Projects ``row`` twice through ``state.h`` and returns the direction,
    or raises :class:`~absolve.errors.DependentRow` when the projection
    vanishes (the row lies in the span of the processed ones).
    """
    h = state.h
    a = np.asarray(row, dtype=float)
    s = h @ a
    p = h @ s
    n = h.shape[0]
    threshold = core.BASE_TOL * n if tol is None else tol
    # reference the row's own size (plus the projector's while it is
    # still large): a nearly exhausted projector must not shrink the
    # scale, or the vanishing test could never fire
    h_norm = float(np.linalg.norm(h))
    scale = float(np.linalg.norm(a)) * (1.0 + h_norm) ** 2
    if float(np.linalg.norm(p)) <= threshold * (scale + 1e-300):
        raise DependentRow(
            f"row lies in the span of the processed rows (|p| <= "
            f"{threshold:.1e} * scale)")
    return p


class ImplicitLUStrategy(ParameterStrategy):
    """Unit scalings and unit seeds; pivots are the projected diagonal.

    Requires every leading principal submatrix of the processed rows to be
    nonsingular (:class:`~absolve.errors.RegularityFailure` otherwise) and
    m <= n. The projector keeps rows 0..i-1 zero, so search vectors come
    out of it for free; see :func:`implicit_lu_solve` for the variant that
    also exploits the sparsity for storage.
    """

    kind = "ilu"

    def begin(self, a):
        m, n = a.shape
        if m > n:
            raise UnsupportedShape(
                f"implicit LU needs m <= n, got {m} rows, {n} columns")

    def direction_seed(self, i, state, s):
        e = np.zeros(state.n)
        e[i] = 1.0
        return e

    def search_vector(self, i, state, s, z):
        return state.h[i].copy()

    def validate_pivot(self, i, den, scale, piv_tol):
        if abs(den) <= piv_tol * scale:
            raise RegularityFailure(i)

    def update_h(self, state, s, w, p, den):
        n = state.n
        pivot = float(s[state.step])
        if pivot == 0.0:
            raise DivisionByZero("projected diagonal entry vanished")
        # dividing on the s side zeroes row state.step exactly (s_k/s_k == 1)
        state.h -= np.outer(s / pivot, state.h[state.step])
        state.counter.add(n * n + n)


class GiluStrategy(ImplicitLUStrategy):
    """Implicit LU deflation started from a caller-supplied projector.

    The initial projector must be nonsingular; pivot failures mean the
    interaction matrix of the chosen projector with the system rows has a
    singular leading block, reported as the engine's generic breakdown.
    """

    kind = "gilu"

    def __init__(self, h1):
        self.h1 = np.array(h1, dtype=float)
        if self.h1.ndim != 2 or self.h1.shape[0] != self.h1.shape[1]:
            raise ValueError("initial projector must be square")

    def initial_h(self, n):
        if self.h1.shape != (n, n):
            raise ValueError(
                f"initial projector is {self.h1.shape}, system needs "
                f"({n}, {n})")
        return self.h1.copy()

    def validate_pivot(self, i, den, scale, piv_tol):
        pass  # generic breakdown check applies


class ImplicitLXStrategy(ParameterStrategy):
    """Unit scalings with a column-pivoted unit seed.

    Each step seeds on the component of the projected row that is largest
    in magnitude (ties: smallest unused index), which keeps the division
    well scaled without touching the row order. Components chosen earlier
    are exactly zero in later projected rows, so each index is picked at
    most once.
    """

    kind = "ilx"

    def begin(self, a):
        self._used = set()
        self._k = None

    def direction_seed(self, i, state, s):
        scores = np.abs(s)
        for k in self._used:
            scores[k] = -1.0
        k = int(np.argmax(scores))  # argmax ties break to the smallest index
        self._used.add(k)
        self._k = k
        e = np.zeros(state.n)
        e[k] = 1.0
        return e

    def search_vector(self, i, state, s, z):
        return state.h[self._k].copy()

    def update_h(self, state, s, w, p, den):
        n = state.n
        k = self._k
        pivot = float(s[k])
        if pivot == 0.0:
            raise DivisionByZero("pivot component of the projected row is 0")
        state.h -= np.outer(s / pivot, state.h[k])
        state.counter.add(n * n + n)


class ImplicitQRStrategy(ParameterStrategy):
    """Orthogonal scalings: v_i = A H^T a_i.

    Scaled rows are orthogonal in the column space of A, the residual norm
    never increases, and on overdetermined systems the run lands on the
    least-squares solution after rank(A) steps; the remaining equations
    are dependent under this scaling and classified redundant even when
    their raw residuals stay nonzero.
    """

    kind = "iqr"
    resolves_inconsistency = True

    def begin(self, a):
        self._cache = {}

    def scaling(self, i, state):
        a = state.matrix
        m, n = a.shape
        row = a[i]
        pt = state.h.T @ row
        v = a @ pt
        a_norm = float(np.linalg.norm(row))
        state.counter.add(n * n + m * n + n)
        self._cache[i] = (pt, a_norm)
        return v

    def classify_vector(self, i, state, s, y_norm, h_norm):
        pt, a_norm = self._cache[i]
        return pt, a_norm * h_norm

    def direction_seed(self, i, state, s):
        return state.matrix[i]

    def search_vector(self, i, state, s, z):
        pt, _ = self._cache.pop(i)
        return pt


class ConjugateDirectionStrategy(ParameterStrategy):
    """Search vectors conjugate in the (symmetric positive definite) matrix.

    Scalings equal the search vectors, so pivots are energy norms and must
    stay positive; a nonpositive pivot or an asymmetric matrix raises
    :class:`~absolve.errors.UnsupportedShape`. The error decreases
    monotonically in the energy norm.
    """

    kind = "cgdir"

    def begin(self, a):
        m, n = a.shape
        if m != n:
            raise UnsupportedShape("conjugate directions need a square matrix")
        skew = float(np.abs(a - a.T).max())
        if skew > 1e-10 * (1.0 + float(np.abs(a).max())):
            raise UnsupportedShape(
                f"matrix is not symmetric (max asymmetry {skew:.3e})")
        self._cache = {}

    def scaling(self, i, state):
        row = state.matrix[i]
        pt = state.h.T @ row
        n = state.n
        state.counter.add(n * n)
        self._cache[i] = (pt, float(np.linalg.norm(row)))
        state.counter.add(n)
        return pt

    def classify_vector(self, i, state, s, y_norm, h_norm):
        pt, a_norm = self._cache[i]
        return pt, a_norm * h_norm

    def direction_seed(self, i, state, s):
        return state.matrix[i]

    def search_vector(self, i, state, s, z):
        pt, _ = self._cache.pop(i)
        return pt

    def validate_pivot(self, i, den, scale, piv_tol):
        if den <= piv_tol * scale:
            raise UnsupportedShape(
                f"pivot p.A.p = {den:.3e} is not positive: matrix is not "
                f"positive definite")


class GeneralStrategy(ParameterStrategy):
    """Explicitly supplied scalings/seeds, one column per equation.

    ``v``, ``z``, ``w`` are matrices whose column i is used at step i; any
    of them may be None to fall back to the default (unit scaling, row
    seed, w = z). ``h1`` replaces the identity start. Admissibility of a
    full choice can be checked up front with
    :func:`absolve.core.strongly_nonsingular` on V^T A H1^T W.
    """

    kind = "general"

    def __init__(self, v=None, z=None, w=None, h1=None):
        self.v = None if v is None else np.asarray(v, dtype=float)
        self.z = None if z is None else np.asarray(z, dtype=float)
        self.w = None if w is None else np.asarray(w, dtype=float)
        self.h1 = None if h1 is None else np.array(h1, dtype=float)

    def initial_h(self, n):
        if self.h1 is None:
            return np.eye(n)
        if self.h1.shape != (n, n):
            raise ValueError("initial projector shape mismatch")
        return self.h1.copy()

    def scaling(self, i, state):
        if self.v is None:
            return None
        return self.v[:, i]

    def direction_seed(self, i, state, s):
        if self.z is not None:
            return self.z[:, i]
        if self.v is None:
            return state.matrix[i]
        # no explicit seed: fall back to the scaled row
        y = state.matrix.T @ self.v[:, i]
        state.counter.add(state.matrix.size)
        return y

    def projection_seed(self, i, state, s, z):
        if self.w is None:
            return z
        return self.w[:, i]


_REGISTRY = {
    "huang": HuangStrategy,
    "stable": OptimallyStableStrategy,
    "mhuang": ModifiedHuangStrategy,
    "ilu": ImplicitLUStrategy,
    "ilx": ImplicitLXStrategy,
    "iqr": ImplicitQRStrategy,
    "cgdir": ConjugateDirectionStrategy,
    "gilu": GiluStrategy,
}


def make_strategy(name, **kwargs):
    """Instantiate a strategy by its short name.

    Names: huang, stable, mhuang, ilu, ilx, iqr, cgdir, gilu. ``gilu``
    requires the initial projector as ``h1=...``.
    """
    key = name.lower().strip()
    cls = _REGISTRY.get(key)
    if cls is None:
        raise ValueError(
            f"unknown strategy {name!r}; choose from {sorted(_REGISTRY)}")
    return cls(**kwargs)


@dataclass
class CompactLUWorkspace:
    """Auxiliary-storage accounting of :func:`implicit_lu_solve`.

    The meter counts array entries the algorithm still needs: the packed
    nonzero block of the projector (stored column-wise), the current
    update column, and the gathered search prefix. Inputs and outputs
    (matrix, right-hand side, solution, returned factors) are excluded.
    The Python arrays retain consumed cells until the run ends; a packed
    buffer would reclaim them, and the meter accounts for that layout.
    """

    storage: StorageMeter
    n: int


def implicit_lu_solve(a, b, tol=None, keep_factors=True, counter=None):
    """Solve a regular square system by projection, storing only the
    nonzero projector block.

    After step i the projector has rows 0..i-1 zero and an identity in
    its trailing columns, so only an (n-i) x i block carries information.
    The block is held column-wise and each step shrinks every column by
    one entry in place, so peak auxiliary storage stays at or below
    n^2/4 + n entries (reported in ``report.workspace.storage.peak``) and
    the multiply count stays within ~10% of n^3/3.

    Raises :class:`~absolve.errors.RegularityFailure` when a leading
    principal submatrix is singular (within tolerance).
    """
    a, b = core._as_system(a, b)
    m, n = a.shape
    if m != n:
        raise UnsupportedShape(f"need a square system, got {m} x {n}")
    _, _, piv_tol = (tol or core.Tolerances()).resolve(n)
    counter = counter if counter is not None else OpCounter()
    meter = StorageMeter()

    x = np.zeros(n)
    cols = []  # cols[c][r] = projector entry (row i+r, column c) at step i
    p_out = []
    pivots = []
    for i in range(n):
        row = a[i]
        heads = np.empty(i)
        meter.alloc(i)
        for c in range(i):
            heads[c] = cols[c][0]

        # pivot: projected diagonal entry (H a_i)_i
        d = float(row[:i] @ heads) + float(row[i])
        counter.add(i)
        a_norm = float(np.linalg.norm(row))
        counter.add(n)
        p_bound = max(1.0, float(np.abs(heads).max()) if i else 1.0) \
            * float(np.sqrt(i + 1))
        counter.add(1)
        if abs(d) <= piv_tol * a_norm * p_bound:
            raise RegularityFailure(i)

        # x has support 0..i-1 before this step
        tau = float(row[:i] @ x[:i]) - float(b[i])
        counter.add(i)
        alpha = tau / d
        counter.add(1)
        x[:i] -= alpha * heads
        counter.add(i)
        x[i] = -alpha

        if keep_factors:
            p_out.append(np.append(heads, 1.0))  # output, not metered
        pivots.append(d)

        if i < n - 1:
            # sub-diagonal projected entries, then the new column -t/d
            t = row[i + 1:].copy()
            meter.alloc(n - i - 1)
            for c in range(i):
                t += cols[c][1:] * row[c]
                counter.add(n - i - 1)
            t /= d
            counter.add(n - i - 1)
            np.negative(t, out=t)
            for c in range(i):
                head = cols[c][0]
                body = cols[c][1:]
                body += head * t
                counter.add(n - i - 1)
                cols[c] = body
                meter.free(1)
            cols.append(t)
        meter.free(i)

    for c in cols:
        meter.free(len(c))

    res = float(np.linalg.norm(a @ x - b))
    counter.add(n * n + n)
    state = core.ProjectorState(h=np.zeros((n, n)), step=n, p_cols=p_out,
                                v_cols=list(range(n)), pivots=pivots,
                                matrix=a, rhs=b, counter=counter)
    return core.SolveReport(x=x, rank=n,
                            eq_status=[core.INDEPENDENT] * n, state=state,
                            mult_count=counter.mults, residual_norm=res,
                            workspace=CompactLUWorkspace(storage=meter, n=n))


def gilu_solve(a, b, h1, z=None, tol=None, counter=None):
    """Implicit LU deflation carried on direction vectors only.

    Starts from the columns of ``h1^T z`` (``z=None`` means unit seeds,
    which costs no setup multiplies) and deflates the trailing vectors
    against each processed equation instead of updating a projector.
    The surviving vector of step i equals the search vector the engine
    run with the same initial projector would use, and the multiply
    count stays at or below n^3 + 6 n^2 for the unit-seed form (with an
    explicit ``z`` the setup product adds m n^2).

    Returns a report whose ``state.p_cols`` are the used direction
    vectors; the projector itself is never formed (``state.h`` is None).
    """
    a, b = core._as_system(a, b)
    m, n = a.shape
    if m > n:
        raise UnsupportedShape(f"need m <= n, got {m} rows, {n} columns")
    h1 = np.asarray(h1, dtype=float)
    if h1.shape != (n, n):
        raise ValueError(f"initial projector is {h1.shape}, need ({n}, {n})")
    _, _, piv_tol = (tol or core.Tolerances()).resolve(n)
    counter = counter if counter is not None else OpCounter()

    if z is None:
        u = h1.T[:, :m].copy()
    else:
        z = np.asarray(z, dtype=float)
        if z.shape != (n, m):
            raise ValueError(f"seed matrix is {z.shape}, need ({n}, {m})")
        u = h1.T @ z
        counter.add(m * n * n)

    x = np.zeros(n)
    p_out = []
    pivots = []
    for i in range(m):
        row = a[i]
        ui = u[:, i]
        den = float(row @ ui)
        counter.add(n)
        row_norm = float(np.linalg.norm(row))
        ui_norm = float(np.linalg.norm(ui))
        counter.add(2 * n)
        if abs(den) <= piv_tol * row_norm * ui_norm:
            raise StrategyBreakdown(
                i, detail=f"direction pivot {den:.3e} vanishes")
        tau = float(row @ x) - float(b[i])
        counter.add(n)
        alpha = tau / den
        counter.add(1)
        x -= alpha * ui
        counter.add(n)
        if i + 1 < m:
            coeff = (row @ u[:, i + 1:]) / den
            counter.add(n * (m - i - 1) + (m - i - 1))
            u[:, i + 1:] -= np.outer(ui, coeff)
            counter.add(n * (m - i - 1))
        p_out.append(ui.copy())
        pivots.append(den)

    res = float(np.linalg.norm(a @ x - b))
    counter.add(m * n + m)
    state = core.ProjectorState(h=None, step=m, p_cols=p_out,
                                v_cols=list(range(m)), pivots=pivots,
                                matrix=a, rhs=b, counter=counter)
    return core.SolveReport(x=x, rank=m,
                            eq_status=[core.INDEPENDENT] * m, state=state,
                            mult_count=counter.mults, residual_norm=res)
