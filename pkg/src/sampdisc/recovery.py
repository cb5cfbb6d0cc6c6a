"""Weighted least-squares-type recovery from samples and its error bound.

The recovery operator returns the element of the subspace minimizing the
weighted discrete p-norm of the sample residual. At p = 2 this is plain
weighted least squares and exact; other exponents run iteratively
reweighted least squares with a gradient fallback, initialized at the
p = 2 solution so the result is deterministic.

The error bound engine converts a certified discretization certificate
into the constant ``2 * C1^(-1) * C2^(1/p) + 1`` multiplying the
sup-distance of the target from the subspace. Heuristic certificates are
refused: an upper bound on the true lower constant cannot establish the
discretization assumption the bound rests on.
"""

from __future__ import annotations

import math

import numpy as np

from . import tolerances
from .discretization import Certificate, PointSet, WeightedPointSet, certify
from .errors import (
    HeuristicCertificateError,
    InvalidExponentError,
    InvalidSampleError,
    InvalidWeightError,
    UnboundedBoundError,
)
from .norms import SampleVector, best_approx, handle_norm_p, sample_function
from .spaces import CoefficientVector, Subspace, evaluate

__all__ = [
    "RecoveryResult",
    "RecoveryBoundReport",
    "lpw_recover",
    "recovery_bound",
    "verify_recovery",
    "LpwRegressor",
]


class RecoveryResult:
    """Outcome of one recovery: coefficients, residual, and solver report."""

    def __init__(self, coefficients, discrete_residual, p, weights_used,
                 optimizer_report, degenerate=False):
        self.coefficients = coefficients
        self.discrete_residual = float(discrete_residual)
        self.p = float(p)
        self.weights_used = weights_used
        self.optimizer_report = optimizer_report
        self.degenerate = bool(degenerate)

    def __repr__(self):
        return (f"RecoveryResult(p={self.p}, residual={self.discrete_residual:.3e}, "
                f"degenerate={self.degenerate})")


class RecoveryBoundReport:
    """One verified instance of the recovery error bound."""

    def __init__(self, c1_norm, c2_weights, bound_constant, lhs, rhs, slack,
                 d_inf, p, advisory=False):
        self.c1_norm = float(c1_norm)
        self.c2_weights = float(c2_weights)
        self.bound_constant = float(bound_constant)
        self.lhs = float(lhs)
        self.rhs = float(rhs)
        self.slack = float(slack)
        self.d_inf = float(d_inf)
        self.p = float(p)
        self.advisory = bool(advisory)

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs * self.slack

    @property
    def violated(self) -> bool:
        return not self.holds

    def to_dict(self) -> dict:
        return {
            "p": None if self.p == math.inf else self.p,
            "c1_norm": self.c1_norm,
            "c2_weights": self.c2_weights,
            "bound_constant": self.bound_constant,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "d_inf": self.d_inf,
            "holds": self.holds,
            "advisory": self.advisory,
        }


def _weighted_lstsq(U, y, w):
    sw = np.sqrt(w)
    c, _, rank, _ = np.linalg.lstsq(U * sw[:, None], y * sw, rcond=None)
    return c, rank


def _sample_gradient(U, y, w, c, p):
    r = y - U @ c
    a = np.maximum(np.abs(r), 1e-300)
    return -p * (U.conj().T @ (w * a ** (p - 2.0) * r)), r


def lpw_recover(samples: SampleVector, space: Subspace, p, weights) -> RecoveryResult:
    """Minimize the weighted discrete p-norm of the sample residual.

    p = 2 solves the weighted normal equations through an orthogonal
    factorization; rank-deficient systems return the minimum-norm
    solution with the ``degenerate`` flag set. Other finite p run damped
    IRLS from the p = 2 solution until the first-order measure drops
    below ``recovery_tol``. p = inf runs the same reweighting in Lawson
    form on the samples (advisory; see the bound's p = inf caveats).
    """
    if samples.source is None:
        raise InvalidSampleError("sample vector must reference its point set")
    if p != math.inf and p < 1:
        raise InvalidExponentError("recovery exponent must satisfy p >= 1")
    y = samples.values
    m = y.shape[0]
    w = np.asarray(weights, dtype=float).reshape(-1)
    if w.shape[0] != m:
        raise InvalidWeightError(f"got {w.shape[0]} weights for {m} samples")
    if np.any(w <= 0):
        raise InvalidWeightError("weights must be strictly positive")
    U = space.basis_values(samples.source.points)

    c, rank = _weighted_lstsq(U, y, w)
    degenerate = rank < space.dim
    if p == 2:
        g, r = _sample_gradient(U, y, w, c, 2.0)
        report = {"iterations": 1, "final_grad_norm": float(np.linalg.norm(g))}
        resid = float(np.sum(w * np.abs(r) ** 2) ** 0.5)
        return RecoveryResult(CoefficientVector(space, c), resid, p, w, report, degenerate)

    if p == math.inf:
        omega = w / np.sum(w)
        best = (math.inf, c)
        for it in range(300):
            c_new, _ = _weighted_lstsq(U, y, omega)
            r = np.abs(y - U @ c_new)
            mx = float(np.max(r))
            if mx < best[0]:
                best = (mx, c_new)
            omega = omega * (r + 1e-300)
            omega /= np.sum(omega)
        report = {"iterations": it + 1, "final_grad_norm": math.nan}
        return RecoveryResult(CoefficientVector(space, best[1]), best[0], p, w, report, degenerate)

    tol = tolerances.get("recovery_tol")
    g, r = _sample_gradient(U, y, w, c, p)
    scale = max(1.0, float(np.linalg.norm(g)))
    obj = float(np.sum(w * np.abs(r) ** p))
    iterations = 0
    for iterations in range(1, 301):
        gnorm = float(np.linalg.norm(g))
        if gnorm <= tol * scale:
            break
        # IRLS proposal; residual moduli and weights clipped below to keep
        # the reweighted system finite near exact fits
        a = np.maximum(np.abs(r), 1e-12)
        omega = np.maximum(w * a ** (p - 2.0), 1e-12)
        c_prop, _ = _weighted_lstsq(U, y, omega)
        moved = False
        t = 1.0
        while t > 1e-14:
            cand = c + t * (c_prop - c)
            r_cand = y - U @ cand
            obj_cand = float(np.sum(w * np.abs(r_cand) ** p))
            if obj_cand < obj - 1e-16:
                c, obj, r = cand, obj_cand, r_cand
                moved = True
                break
            t *= 0.5
        if not moved:
            # gradient fallback with step halving
            t = 1.0
            while t > 1e-16:
                cand = c - t * g
                r_cand = y - U @ cand
                obj_cand = float(np.sum(w * np.abs(r_cand) ** p))
                if obj_cand < obj - 1e-16:
                    c, obj, r = cand, obj_cand, r_cand
                    moved = True
                    break
                t *= 0.5
            if not moved:
                break
        g, r = _sample_gradient(U, y, w, c, p)
    report = {"iterations": iterations,
              "final_grad_norm": float(np.linalg.norm(g))}
    resid = float(np.sum(w * np.abs(r) ** p) ** (1.0 / p))
    return RecoveryResult(CoefficientVector(space, c), resid, p, w, report, degenerate)


def recovery_bound(cert: Certificate, weights, p) -> float:
    """The constant ``2 C1^(-1) C2^(1/p) + 1`` from a certified certificate.

    The certificate's power-form lower constant converts to norm form by
    the 1/p-th power; the weight budget C2 is the plain weight sum. A
    certificate in uniform form is only accepted together with uniform
    weights, since its bounds say nothing about other weightings.
    """
    if cert.status != "certified":
        raise HeuristicCertificateError(
            "recovery bounds need a certified certificate; a heuristic upper "
            "bound on C1 does not establish the discretization assumption")
    if p != cert.p:
        raise InvalidExponentError(f"certificate is for p={cert.p}, not p={p}")
    if cert.c1_pow <= 0:
        raise UnboundedBoundError("lower discretization constant is zero")
    if p == math.inf:
        return 2.0 / cert.c1_pow + 1.0
    w = np.asarray(weights, dtype=float).reshape(-1)
    if not cert.weighted:
        if not np.allclose(w, 1.0 / w.shape[0], rtol=0, atol=1e-12):
            raise InvalidWeightError(
                "certificate is in uniform 1/m form; supply uniform weights")
    c1_norm = cert.c1_pow ** (1.0 / p)
    c2 = float(np.sum(w))
    return 2.0 / c1_norm * c2 ** (1.0 / p) + 1.0


def _as_handle(f):
    if isinstance(f, CoefficientVector):
        return lambda x: evaluate(f, x)
    if callable(f):
        return f
    raise InvalidSampleError("target must be a coefficient vector or callable")


def verify_recovery(f, space: Subspace, sample: PointSet, p,
                    certify_budget: int = 64, allow_heuristic: bool = False) -> RecoveryBoundReport:
    """Recover ``f`` from its samples and check the certified error bound.

    The left side is the measured L_p error of the recovery; the right
    side is the bound constant times the grid-estimated sup-distance of f
    from the space, and the comparison carries the ``recovery_slack``
    factor because that distance estimate is one-sided. With
    ``allow_heuristic`` the p = inf branch accepts a heuristic constant
    and marks the report advisory.
    """
    cert = certify(space, sample, p, budget=certify_budget)
    if isinstance(sample, WeightedPointSet):
        w = sample.weights
    else:
        w = np.full(sample.m, 1.0 / sample.m)
    advisory = False
    if cert.status != "certified" and allow_heuristic and p == math.inf:
        cert = Certificate(cert.p, cert.c1_pow, cert.c2_pow, cert.method,
                           "certified", cert.tolerance, cert.weighted)
        advisory = True
    bound = recovery_bound(cert, w, p)

    samples = sample_function(f, sample)
    rec = lpw_recover(samples, space, p, w)
    u = rec.coefficients
    handle = _as_handle(f)

    def residual(x):
        return np.asarray(handle(x), dtype=complex).reshape(-1) - evaluate(u, x)

    if p == math.inf:
        from .norms import torus_grid
        from .spaces import DiscreteSpace

        if isinstance(space, DiscreteSpace):
            grid = np.arange(space.domain.size)
            args = grid
        else:
            grid = torus_grid([max(64 * d, 512) for d in space.degrees])
            args = grid[:, 0] if grid.shape[1] == 1 else grid
        lhs = float(np.max(np.abs(np.asarray(handle(args), dtype=complex).reshape(-1)
                                  - evaluate(u, grid))))
    else:
        lhs = handle_norm_p(residual, space, p)
    _, d_inf = best_approx(f, space, math.inf)
    c1_norm = cert.c1_pow if p == math.inf else cert.c1_pow ** (1.0 / p)
    rhs = bound * d_inf
    return RecoveryBoundReport(c1_norm, float(np.sum(w)), bound, lhs, rhs,
                               tolerances.get("recovery_slack"), d_inf, p,
                               advisory=advisory)


class LpwRegressor:
    """Estimator-style wrapper around the recovery operator.

    Follows the fit/predict convention with ``get_params``/``set_params``
    so the recovery step drops into standard pipeline tooling. ``X`` is
    the node array (shape (m,) or (m, d) on the torus, integer indices on
    finite domains) and ``y`` holds the sampled values.
    """

    def __init__(self, space: Subspace | None = None, p: float = 2.0):
        self.space = space
        self.p = p

    def get_params(self, deep: bool = True) -> dict:
        return {"space": self.space, "p": self.p}

    def set_params(self, **params) -> "LpwRegressor":
        for key, value in params.items():
            if key not in ("space", "p"):
                raise ValueError(f"unknown parameter {key!r}")
            setattr(self, key, value)
        return self

    def _check_inputs(self, X, y=None):
        if self.space is None:
            raise InvalidSampleError("set the `space` parameter before fitting")
        pts = self.space.check_points(X)
        if y is None:
            return pts, None
        yv = np.asarray(y, dtype=complex).reshape(-1)
        if yv.shape[0] != pts.shape[0]:
            raise InvalidSampleError(f"X has {pts.shape[0]} rows but y has {yv.shape[0]}")
        return pts, yv

    def fit(self, X, y, sample_weight=None) -> "LpwRegressor":
        pts, yv = self._check_inputs(X, y)
        pointset = PointSet(pts, {"mode": "user"})
        if sample_weight is None:
            sample_weight = np.full(pointset.m, 1.0 / pointset.m)
        result = lpw_recover(SampleVector(yv, pointset), self.space, self.p, sample_weight)
        self.result_ = result
        self.coef_ = result.coefficients.coefficients
        return self

    def predict(self, X) -> np.ndarray:
        if not hasattr(self, "coef_"):
            raise InvalidSampleError("this regressor is not fitted yet; call fit first")
        pts, _ = self._check_inputs(X)
        return evaluate(self.result_.coefficients, pts)
