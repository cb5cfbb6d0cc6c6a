"""Continuous and discrete norms, best approximations, and related constants.

Torus integrals are computed with equispaced product quadrature. For even
integer exponents the rule with at least ``p * degree + 1`` nodes per
dimension is exact, because ``|f|^p`` is itself a trigonometric polynomial
of per-coordinate degree at most ``p * degree``. For other exponents the
grid is refined dyadically until two successive values agree to the
``quad_stop`` tolerance; the result is then accurate to about 1e-8 in
absolute terms for the well-scaled functions this toolkit produces.

Sup norms of torus functions are grid searches with local refinement and
are therefore lower estimates (documented relative tolerance ``sup_rel``).
Finite-domain norms are exact weighted sums.
"""

from __future__ import annotations

import math

import numpy as np

from . import tolerances
from .errors import (
    DegenerateSpaceError,
    InvalidExponentError,
    InvalidTargetError,
    InvalidWeightError,
    UnsupportedNormError,
)
from .spaces import (
    TWO_PI,
    CoefficientVector,
    DiscreteSpace,
    Subspace,
    TrigSpace,
    evaluate,
)

__all__ = [
    "SampleVector",
    "NikolskiiEstimate",
    "sample_function",
    "norm_p",
    "norm_sup",
    "discrete_norm",
    "best_approx",
    "christoffel_sup",
    "nikolskii_constant",
    "handle_norm_p",
]

_MAX_GRID = 1 << 22  # refinement cap on the total number of quadrature nodes


class SampleVector:
    """The vector of values of a function at the nodes of a point set."""

    def __init__(self, values, source=None):
        self.values = np.asarray(values, dtype=complex).reshape(-1)
        self.source = source

    def __len__(self):
        return self.values.shape[0]


class NikolskiiEstimate:
    """Estimated constant M in ``sup |f| <= M * ||f||_q`` over a subspace.

    ``B = M / N**(1/q)`` is the normalized form used by the sampling
    budgets. ``method`` is "analytic" when M is an exact identity (q = 2)
    and "grid-search" when it is a heuristic lower estimate.
    """

    def __init__(self, q, M, B, method, grid_size=0):
        self.q = float(q)
        self.M = float(M)
        self.B = float(B)
        self.method = method
        self.grid_size = int(grid_size)

    def __repr__(self):
        return f"NikolskiiEstimate(q={self.q}, M={self.M:.6g}, B={self.B:.6g}, method={self.method!r})"


def sample_function(target, pointset, space: Subspace | None = None) -> SampleVector:
    """Build the sample vector of ``target`` at the nodes of ``pointset``.

    ``target`` may be a CoefficientVector or a callable. Callables receive
    the node array (flattened to shape (m,) on one-dimensional domains)
    and must return one value per node.
    """
    pts = np.asarray(pointset.points)
    if isinstance(target, CoefficientVector):
        return SampleVector(evaluate(target, pts), source=pointset)
    if callable(target):
        args = pts[:, 0] if pts.ndim == 2 and pts.shape[1] == 1 else pts
        try:
            vals = np.asarray(target(args), dtype=complex).reshape(-1)
        except Exception as exc:
            raise InvalidTargetError(f"target is not evaluable on the domain: {exc}") from exc
        if vals.shape[0] != pts.shape[0]:
            raise InvalidTargetError("target returned the wrong number of values")
        return SampleVector(vals, source=pointset)
    raise InvalidTargetError(f"cannot evaluate target of type {type(target).__name__}")


# ---------------------------------------------------------------------------
# quadrature grids


def torus_grid(sizes) -> np.ndarray:
    """Equispaced product grid on the torus, shape (prod(sizes), d)."""
    axes = [np.arange(n) * (TWO_PI / n) for n in sizes]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def _even_sizes(space: TrigSpace, p: int):
    return [max(int(p) * deg + 1, 1) for deg in space.degrees]


def _is_even_integer(p) -> bool:
    return p != math.inf and float(p) == int(p) and int(p) % 2 == 0 and int(p) >= 2


def power_rule(space: Subspace, p):
    """Quadrature rule (values matrix, weights) for ``||f||_p^p``.

    Exact for finite domains and for even integer p on the torus. For
    other exponents this is a dense-grid relaxation sized generously for
    the space's degree.
    """
    if isinstance(space, DiscreteSpace):
        s = space.domain.size
        return space.values, np.full(s, 1.0 / s)
    if _is_even_integer(p):
        sizes = _even_sizes(space, int(p))
    else:
        d = space.domain.dim
        floor = {1: 1024, 2: 96}.get(d, 32)
        sizes = [max(16 * deg + 1, floor) for deg in space.degrees]
    grid = torus_grid(sizes)
    return space.basis_values(grid), np.full(grid.shape[0], 1.0 / grid.shape[0])


def norm_p(f: CoefficientVector, p) -> float:
    """The L_p(mu) norm of an element, 1 <= p < infinity.

    Exact for finite domains and for even integer p on the torus;
    otherwise computed by dyadic grid refinement.
    """
    if p == math.inf:
        return norm_sup(f)
    if p < 1:
        raise InvalidExponentError("norm exponent must satisfy p >= 1")
    space = f.space
    if isinstance(space, DiscreteSpace):
        vals = space.values @ f.coefficients
        return float(np.mean(np.abs(vals) ** p) ** (1.0 / p))
    if _is_even_integer(p):
        grid = torus_grid(_even_sizes(space, int(p)))
        vals = evaluate(f, grid)
        return float(np.mean(np.abs(vals) ** p) ** (1.0 / p))
    # dyadic refinement until two successive grids agree
    stop = tolerances.get("quad_stop")
    sizes = [max(2 * deg + 1, 32) for deg in space.degrees]
    prev = None
    while True:
        vals = evaluate(f, torus_grid(sizes))
        cur = float(np.mean(np.abs(vals) ** p) ** (1.0 / p))
        if prev is not None and abs(cur - prev) <= stop * max(1.0, abs(prev)):
            return cur
        if math.prod(sizes) * (2 ** len(sizes)) > _MAX_GRID:
            return cur
        prev = cur
        sizes = [2 * n for n in sizes]


def handle_norm_p(handle, space: TrigSpace, p) -> float:
    """L_p norm of an arbitrary function handle over the space's domain.

    Used when the integrand is not an element of a known subspace (e.g.
    a recovery residual); refines dyadically like :func:`norm_p`.
    """
    if p < 1:
        raise InvalidExponentError("norm exponent must satisfy p >= 1")
    if isinstance(space, DiscreteSpace):
        idx = np.arange(space.domain.size)
        vals = np.asarray(handle(idx), dtype=complex)
        return float(np.mean(np.abs(vals) ** p) ** (1.0 / p))
    stop = tolerances.get("quad_stop")
    sizes = [max(4 * deg + 1, 64) for deg in space.degrees]
    prev = None
    while True:
        grid = torus_grid(sizes)
        args = grid[:, 0] if grid.shape[1] == 1 else grid
        try:
            vals = np.asarray(handle(args), dtype=complex).reshape(-1)
        except Exception as exc:
            raise InvalidTargetError(f"target is not evaluable on the domain: {exc}") from exc
        cur = float(np.mean(np.abs(vals) ** p) ** (1.0 / p))
        if prev is not None and abs(cur - prev) <= stop * max(1.0, abs(prev)):
            return cur
        if math.prod(sizes) * (2 ** len(sizes)) > _MAX_GRID:
            return cur
        prev = cur
        sizes = [2 * n for n in sizes]


# ---------------------------------------------------------------------------
# sup norm


def _golden_max(fn, lo, hi, iters=60):
    """Golden-section maximization of a scalar function on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
    return (c, fc) if fc >= fd else (d, fd)


def sup_argmax(f: CoefficientVector, grid_factor: int = 64):
    """Lower estimate of ``max |f|`` together with a maximizing point.

    Torus search: an equispaced grid with at least ``grid_factor * degree``
    nodes per dimension, followed by coordinate-wise golden-section
    refinement. Finite domains are scanned exactly.
    """
    space = f.space
    if isinstance(space, DiscreteSpace):
        vals = np.abs(space.values @ f.coefficients)
        j = int(np.argmax(vals))
        return float(vals[j]), np.array([j])
    sizes = [max(grid_factor * deg, grid_factor) for deg in space.degrees]
    grid = torus_grid(sizes)
    vals = np.abs(evaluate(f, grid))
    j = int(np.argmax(vals))
    best_val = float(vals[j])
    x = grid[j].copy()
    d = space.domain.dim
    sweeps = 1 if d == 1 else 2
    for _ in range(sweeps):
        for axis in range(d):
            h = TWO_PI / sizes[axis]

            def along(t, _axis=axis):
                y = x.copy()
                y[_axis] += t
                return abs(evaluate(f, y[None, :])[0])

            t_best, v = _golden_max(along, -h, h)
            if v > best_val:
                best_val = v
                x[axis] += t_best
    return best_val, np.mod(x, TWO_PI)


def norm_sup(f: CoefficientVector) -> float:
    """Uniform norm; exact on finite domains, a documented lower estimate
    (relative tolerance ``sup_rel``) on the torus."""
    return sup_argmax(f)[0]


# ---------------------------------------------------------------------------
# discrete norms


def discrete_norm(s, p, weights=None) -> float:
    """Weighted discrete p-norm of a sample vector.

    Default weights are uniform ``1/m``. ``p = inf`` takes the plain
    maximum of moduli and rejects explicit weights, which have no
    counterpart in the sup case.
    """
    vals = np.asarray(getattr(s, "values", s), dtype=complex).reshape(-1)
    m = vals.shape[0]
    if p == math.inf:
        if weights is not None:
            raise UnsupportedNormError("the weighted sup norm is undefined; drop the weights for p=inf")
        return float(np.max(np.abs(vals)))
    if p < 1:
        raise InvalidExponentError("norm exponent must satisfy p >= 1")
    if weights is None:
        w = np.full(m, 1.0 / m)
    else:
        w = np.asarray(weights, dtype=float).reshape(-1)
        if w.shape[0] != m:
            raise InvalidWeightError(f"got {w.shape[0]} weights for {m} values")
        if np.any(w <= 0):
            raise InvalidWeightError("weights must be strictly positive")
    return float(np.sum(w * np.abs(vals) ** p) ** (1.0 / p))


# ---------------------------------------------------------------------------
# best approximation


def pnorm_objective(V, gamma, target_vals, p):
    """Value and gradient of ``J(c) = sum_g gamma_g |t_g - (V c)_g|^p``.

    The gradient is with respect to the complex coefficients in the real
    inner product sense (steepest ascent direction is ``grad``). Exposed
    for finite-difference verification.
    """

    def value(c):
        r = target_vals - V @ c
        return float(np.sum(gamma * np.abs(r) ** p))

    def grad(c):
        r = target_vals - V @ c
        a = np.abs(r)
        a = np.maximum(a, 1e-15)  # keeps |r|^(p-2) finite for p < 2
        return -p * (V.conj().T @ (gamma * a ** (p - 2.0) * r))

    return value, grad


def _target_on_grid(target, space, grid):
    if isinstance(target, CoefficientVector):
        return evaluate(target, grid)
    if isinstance(target, SampleVector):
        raise InvalidTargetError("sample-vector targets are evaluated on their own source grid")
    if callable(target):
        if isinstance(space, DiscreteSpace):
            args = grid
        else:
            args = grid[:, 0] if grid.shape[1] == 1 else grid
        try:
            vals = np.asarray(target(args), dtype=complex).reshape(-1)
        except Exception as exc:
            raise InvalidTargetError(f"target is not evaluable on the domain: {exc}") from exc
        if vals.shape[0] != grid.shape[0]:
            raise InvalidTargetError("target returned the wrong number of values")
        return vals
    raise InvalidTargetError(f"cannot evaluate target of type {type(target).__name__}")


def _approx_grid(target, space, base_floor):
    """Grid, weights, and target values for the approximation solvers."""
    if isinstance(space, DiscreteSpace):
        grid = np.arange(space.domain.size)
        gamma = np.full(grid.shape[0], 1.0 / grid.shape[0])
        return grid, gamma, _target_on_grid(target, space, grid)
    if isinstance(target, SampleVector):
        if target.source is None:
            raise InvalidTargetError("sample-vector target has no source point set")
        grid = np.asarray(target.source.points)
        gamma = np.full(grid.shape[0], 1.0 / grid.shape[0])
        return grid, gamma, target.values
    sizes = [max(64 * deg, base_floor) for deg in space.degrees]
    grid = torus_grid(sizes)
    gamma = np.full(grid.shape[0], 1.0 / grid.shape[0])
    return grid, gamma, _target_on_grid(target, space, grid)


def _project_l2(target, space, refine=True):
    """Orthogonal projection via the exact Gram system; grid right-hand side."""
    B = space.coef_gram()
    last_c = None
    floor = 256 if getattr(space.domain, "dim", 1) == 1 else 64
    while True:
        grid, gamma, t = _approx_grid(target, space, floor)
        V = space.basis_values(grid)
        rhs = V.conj().T @ (gamma * t)
        c = np.linalg.solve(B, rhs)
        dist = float(np.sqrt(np.sum(gamma * np.abs(t - V @ c) ** 2)))
        fixed_grid = isinstance(space, DiscreteSpace) or isinstance(target, SampleVector)
        if not refine or fixed_grid:
            return c, dist, (grid, gamma, t, V)
        if last_c is not None and np.max(np.abs(c - last_c)) <= 1e-10 and abs(dist - last_d) <= 1e-9:
            return c, dist, (grid, gamma, t, V)
        if grid.shape[0] * 2 > _MAX_GRID:
            return c, dist, (grid, gamma, t, V)
        last_c, last_d = c, dist
        floor = 2 * max(floor, max(64 * deg for deg in space.degrees))


def _lawson_minimax(target, space):
    """Discrete minimax fit on a fine grid by Lawson's reweighting."""
    floor = 512 if getattr(space.domain, "dim", 1) == 1 else 128
    grid, _, t = _approx_grid(target, space, floor)
    V = space.basis_values(grid)
    G = grid.shape[0]
    w = np.full(G, 1.0 / G)
    best_val, best_c = math.inf, np.zeros(space.dim, dtype=complex)
    history = []
    rel = tolerances.get("minimax_rel")
    for _ in range(400):
        sw = np.sqrt(w)
        c = np.linalg.lstsq(V * sw[:, None], t * sw, rcond=None)[0]
        r = np.abs(t - V @ c)
        mx = float(np.max(r))
        if mx < best_val:
            best_val, best_c = mx, c
        history.append(mx)
        if len(history) > 12 and abs(history[-1] - history[-12]) <= 0.1 * rel * max(history[-1], 1e-30):
            break
        w = w * (r + 1e-300)
        w /= np.sum(w)
    return best_c, best_val


def best_approx(target, space: Subspace, p):
    """Best approximation of ``target`` from the space in the L_p sense.

    Returns ``(projection, distance)``. The distance is computed on a
    grid and therefore approximates the true distance from below; for
    p = 2 the projection itself is the exact orthogonal one. The p = inf
    branch is a discrete minimax (relative tolerance ``minimax_rel``),
    other exponents use convex descent to the ``descent_tol`` first-order
    tolerance.
    """
    if p != math.inf and p < 1:
        raise InvalidExponentError("norm exponent must satisfy p >= 1")
    c2, dist2, cache = _project_l2(target, space)
    if p == 2:
        return CoefficientVector(space, c2), dist2
    if p == math.inf:
        c, dist = _lawson_minimax(target, space)
        return CoefficientVector(space, c), dist
    grid, gamma, t, V = cache
    value, grad = pnorm_objective(V, gamma, t, p)
    c = c2.copy()
    fc = value(c)
    step = 1.0
    tol = tolerances.get("descent_tol")
    for _ in range(5000):
        g = grad(c)
        gn = float(np.linalg.norm(g))
        if gn <= tol:
            break
        improved = False
        while step > 1e-16:
            cand = c - step * g
            fcand = value(cand)
            if fcand < fc - 1e-16:
                c, fc = cand, fcand
                improved = True
                step *= 1.6
                break
            step *= 0.5
        if not improved:
            break
    dist = fc ** (1.0 / p)
    return CoefficientVector(space, c), float(dist)


# ---------------------------------------------------------------------------
# conditioning constants


def orthonormal_transform(space: Subspace) -> np.ndarray:
    """Matrix T with ``basis @ T`` orthonormal in L2(mu).

    Identity for torus exponential bases. Raises DegenerateSpaceError when
    the Gram matrix is numerically singular.
    """
    if isinstance(space, TrigSpace):
        return np.eye(space.dim)
    B = space.coef_gram()
    lam, Q = np.linalg.eigh(B)
    if lam[0] <= 1e-12 * max(lam[-1], 1e-300):
        raise DegenerateSpaceError("basis is numerically rank-deficient")
    return Q / np.sqrt(lam)


def christoffel_sup(space: Subspace) -> float:
    """The constant t with ``sup_x sum_i |u_i(x)|^2 = N t^2`` for the
    orthonormalized basis.

    Exactly 1 for exponential systems on the torus, where the sum is
    constantly N. Finite domains are scanned exactly.
    """
    if isinstance(space, TrigSpace):
        return 1.0
    T = orthonormal_transform(space)
    W = space.values @ T
    k = np.sum(np.abs(W) ** 2, axis=1)
    return float(math.sqrt(np.max(k) / space.dim))


def _nikolskii_search(space: Subspace, q: float):
    """Local ascent on ``sup |f| / ||f||_q`` from deterministic starts."""
    Vq, gq = power_rule(space, q)
    orthonormal_transform(space)  # rejects rank-deficient bases up front
    n = space.dim
    if isinstance(space, DiscreteSpace):
        sup_grid = np.arange(space.domain.size)
    else:
        sup_grid = torus_grid([max(64 * deg, 64) for deg in space.degrees])
    Vs = space.basis_values(sup_grid)

    def ratio_parts(c):
        sv = np.abs(Vs @ c)
        j = int(np.argmax(sv))
        qv = Vq @ c
        sq = float(np.sum(gq * np.abs(qv) ** q))
        return float(sv[j]), j, qv, sq

    # the conjugated-peak start is the exact extremizer for flat systems
    peak = space.basis_values(np.zeros((1, space.domain.dim)) if isinstance(space, TrigSpace) else np.array([0]))
    starts = [np.conj(peak).ravel(), np.ones(n, dtype=complex)]
    rng = np.random.default_rng((101, n, int(round(q * 1000))))
    for _ in range(6):
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        starts.append(v)
    best = 0.0
    best_c = starts[0]
    for c0 in starts:
        c = c0 / np.linalg.norm(c0)
        sup_v, j, qv, sq = ratio_parts(c)
        fval = math.log(max(sup_v, 1e-300)) - math.log(max(sq, 1e-300)) / q
        step = 0.5
        for _ in range(80):
            y = Vs[j]
            fx = y @ c
            g_sup = np.conj(y) * fx / max(abs(fx) ** 2, 1e-300)
            g_q = (Vq.conj().T @ (gq * np.maximum(np.abs(qv), 1e-300) ** (q - 2.0) * qv)) / max(sq, 1e-300)
            g = g_sup - g_q
            moved = False
            while step > 1e-14:
                cand = c + step * g
                cand = cand / np.linalg.norm(cand)
                s_v, jj, qv2, sq2 = ratio_parts(cand)
                f2 = math.log(max(s_v, 1e-300)) - math.log(max(sq2, 1e-300)) / q
                if f2 > fval + 1e-15:
                    c, fval, j, qv, sq = cand, f2, jj, qv2, sq2
                    step *= 1.5
                    moved = True
                    break
                step *= 0.5
            if not moved:
                break
        f = CoefficientVector(space, c)
        ratio = sup_argmax(f)[0] / max(norm_p(f, q), 1e-300)
        if ratio > best:
            best, best_c = ratio, c
    return best, best_c, Vs.shape[0]


def nikolskii_constant(space: Subspace, q) -> NikolskiiEstimate:
    """Constant of the inequality ``sup |f| <= M ||f||_q`` over the space.

    For q = 2 the constant is an exact identity obtained from the
    orthonormalized Christoffel sum (the pointwise Cauchy-Schwarz bound is
    attained by the kernel at the maximizing point). Other exponents are
    heuristic lower estimates from local ascent.
    """
    if q < 1 or q == math.inf:
        raise InvalidExponentError("Nikolskii exponent must satisfy 1 <= q < inf")
    n = space.dim
    if q == 2:
        t = christoffel_sup(space)
        M = t * math.sqrt(n)
        return NikolskiiEstimate(q, M, M / n ** 0.5, "analytic", 0)
    M, _, grid_size = _nikolskii_search(space, float(q))
    return NikolskiiEstimate(q, M, M / n ** (1.0 / q), "grid-search", grid_size)
