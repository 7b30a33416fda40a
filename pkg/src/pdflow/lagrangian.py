"""Time-dependent augmented Lagrangian, its saddle path, and limit objects.

For a problem (f, A, b) and regularization strength eps(t) = c / t^p the
augmented Lagrangian is

    L_t(x, lam) = f(x) + <A x - b, lam> + (eps(t)/2) (|x|^2 - |lam|^2),

which is eps(t)-strongly convex in x and eps(t)-strongly concave in lam,
so for every t > 0 it has a unique saddle point (x_t, lam_t) solving

    grad f(x_t) + A^T lam_t + eps(t) x_t = 0
    A x_t - b - eps(t) lam_t             = 0.

As t grows the saddle path converges to the minimum-norm point of the
saddle set of the plain Lagrangian f(x) + <lam, A x - b>.  Norms on the
product space are Euclidean: |(x, lam)|^2 = |x|^2 + |lam|^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InfeasibleProblemError, SolverError
from .problem import Problem, QuadraticProblem

__all__ = [
    "RegularizationSpec",
    "SaddlePoint",
    "MinNormSolution",
    "lagrangian_value",
    "grad_x_Lt",
    "grad_lambda_Lt",
    "plain_lagrangian",
    "saddle_point",
    "saddle_path",
    "min_norm_solution",
]


@dataclass(frozen=True)
class RegularizationSpec:
    """Tikhonov schedule eps(t) = c / t^p with c > 0 and 0 < p < 1."""

    c: float
    p: float

    def __post_init__(self):
        if not (self.c > 0):
            raise DomainError(f"c must be positive, got {self.c}")
        if not (0.0 < self.p < 1.0):
            raise DomainError(f"p must lie in (0, 1), got {self.p}")

    def strength(self, t: float) -> float:
        if not (t > 0):
            raise DomainError(f"t must be positive, got {t}")
        return self.c * t**-self.p

    def strength_dot(self, t: float) -> float:
        if not (t > 0):
            raise DomainError(f"t must be positive, got {t}")
        return -self.c * self.p * t ** (-self.p - 1.0)


@dataclass(frozen=True)
class SaddlePoint:
    """Saddle point of L_t at a fixed t, with its time-derivative."""

    t: float
    x_t: np.ndarray
    lambda_t: np.ndarray
    xdot_t: np.ndarray
    lambdadot_t: np.ndarray
    kkt_residual: float


@dataclass(frozen=True)
class MinNormSolution:
    """Minimum-norm primal-dual pair of the limiting saddle set."""

    x_star: np.ndarray
    lambda_star: np.ndarray
    f_star: float
    kkt_residual: float


def lagrangian_value(prob: Problem, reg: RegularizationSpec, t: float, x, lam) -> float:
    x = np.asarray(x, dtype=np.float64)
    lam = np.asarray(lam, dtype=np.float64)
    eps = reg.strength(t)
    resid = prob.A @ x - prob.b
    return float(prob.value(x) + resid @ lam + 0.5 * eps * (x @ x - lam @ lam))


def grad_x_Lt(prob: Problem, reg: RegularizationSpec, t: float, x, lam) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    lam = np.asarray(lam, dtype=np.float64)
    return prob.grad(x) + prob.A.T @ lam + reg.strength(t) * x


def grad_lambda_Lt(prob: Problem, reg: RegularizationSpec, t: float, x, lam) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    lam = np.asarray(lam, dtype=np.float64)
    return prob.A @ x - prob.b - reg.strength(t) * lam


def plain_lagrangian(prob: Problem, x, lam) -> float:
    """Unregularized Lagrangian f(x) + <lam, A x - b>."""
    x = np.asarray(x, dtype=np.float64)
    lam = np.asarray(lam, dtype=np.float64)
    return float(prob.value(x) + lam @ (prob.A @ x - prob.b))


def _kkt_matrix(prob: Problem, eps: float, x=None) -> np.ndarray:
    n, m = prob.dim_x, prob.dim_dual
    M = np.zeros((n + m, n + m))
    if isinstance(prob, QuadraticProblem):
        H = prob.Q
    else:
        # assemble the Hessian column-by-column from Hessian-vector products
        H = np.empty((n, n))
        eye = np.eye(n)
        for j in range(n):
            H[:, j] = prob.hvp(x, eye[j])
    M[:n, :n] = H + eps * np.eye(n)
    M[:n, n:] = prob.A.T
    M[n:, :n] = prob.A
    M[n:, n:] = -eps * np.eye(m)
    return M


def _kkt_residual_vec(prob, reg, t, x, lam) -> np.ndarray:
    return np.concatenate(
        [grad_x_Lt(prob, reg, t, x, lam), grad_lambda_Lt(prob, reg, t, x, lam)]
    )


_RESID_TARGET = 1e-11


def saddle_point(prob: Problem, reg: RegularizationSpec, t: float) -> SaddlePoint:
    """Unique saddle point of L_t plus its velocity (implicit differentiation).

    Quadratic problems: one dense solve with iterative refinement.
    General smooth problems: damped Newton on the first-order system.
    The velocity solves the differentiated system

        (H + eps I) xdot + A^T lamdot = c p t^(-p-1) x_t
        A xdot - eps lamdot           = -c p t^(-p-1) lam_t.
    """
    if not (t > 0):
        raise DomainError(f"t must be positive, got {t}")
    n, m = prob.dim_x, prob.dim_dual
    eps = reg.strength(t)

    if isinstance(prob, QuadraticProblem):
        M = _kkt_matrix(prob, eps)
        rhs = np.concatenate([-prob.k, prob.b])
        z = np.linalg.solve(M, rhs)
        for _ in range(3):
            resid = M @ z - rhs
            if np.linalg.norm(resid) <= 0.1 * _RESID_TARGET:
                break
            z = z - np.linalg.solve(M, resid)
        x, lam = z[:n], z[n:]
        J = M
    else:
        z = np.zeros(n + m)
        x, lam = z[:n], z[n:]
        for _ in range(50):
            F = _kkt_residual_vec(prob, reg, t, x, lam)
            fnorm = np.linalg.norm(F)
            if fnorm <= _RESID_TARGET:
                break
            J = _kkt_matrix(prob, eps, x)
            step = np.linalg.solve(J, -F)
            alpha = 1.0
            while alpha > 2.0**-30:
                trial = z + alpha * step
                tn = np.linalg.norm(
                    _kkt_residual_vec(prob, reg, t, trial[:n], trial[n:])
                )
                if tn <= (1.0 - 1e-4 * alpha) * fnorm:
                    break
                alpha *= 0.5
            z = z + alpha * step
            x, lam = z[:n], z[n:]
        else:
            fnorm = float(np.linalg.norm(_kkt_residual_vec(prob, reg, t, x, lam)))
            raise SolverError(
                f"saddle solve stalled at t={t}: residual {fnorm:.3e}", residual=fnorm
            )
        J = _kkt_matrix(prob, eps, x)

    cpt = reg.c * reg.p * t ** (-reg.p - 1.0)
    vel = np.linalg.solve(J, np.concatenate([cpt * x, -cpt * lam]))
    kkt_res = float(np.linalg.norm(_kkt_residual_vec(prob, reg, t, x, lam)))
    return SaddlePoint(
        t=float(t),
        x_t=x.copy(),
        lambda_t=lam.copy(),
        xdot_t=vel[:n],
        lambdadot_t=vel[n:],
        kkt_residual=kkt_res,
    )


def saddle_path(prob: Problem, reg: RegularizationSpec, times) -> list[SaddlePoint]:
    """Saddle points at each time of an increasing sequence."""
    return [saddle_point(prob, reg, float(t)) for t in np.asarray(times, dtype=np.float64)]


def min_norm_solution(prob: Problem) -> MinNormSolution:
    """Minimum-norm point of the saddle set of the plain Lagrangian.

    Quadratic problems only: the saddle set is the solution set of the
    stacked linear system [[Q, A^T], [A, 0]] z = (-k, b), and the
    pseudoinverse applied to the right-hand side picks out its
    minimum-norm element (this pseudoinverse convention also covers
    rank-deficient A).  An inconsistent system raises
    InfeasibleProblemError.
    """
    if not isinstance(prob, QuadraticProblem):
        raise TypeError("minimum-norm solution is implemented for quadratic problems")
    n, m = prob.dim_x, prob.dim_dual
    K = np.zeros((n + m, n + m))
    K[:n, :n] = prob.Q
    K[:n, n:] = prob.A.T
    K[n:, :n] = prob.A
    rhs = np.concatenate([-prob.k, prob.b])
    z = np.linalg.pinv(K, rcond=1e-12) @ rhs
    resid = float(np.linalg.norm(K @ z - rhs))
    scale = 1.0 + float(np.linalg.norm(rhs)) + float(np.linalg.norm(K, ord=2))
    if resid > 1e-8 * scale:
        raise InfeasibleProblemError(
            f"stacked optimality system is inconsistent (residual {resid:.3e}); "
            "the problem admits no saddle point"
        )
    x, lam = z[:n], z[n:]
    return MinNormSolution(
        x_star=x, lambda_star=lam, f_star=prob.value(x), kkt_residual=resid
    )
