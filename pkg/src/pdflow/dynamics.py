"""The damped primal-dual flow: parameters, mass functions, vector field.

State z = (x, v, lam) with v = dx/dt.  The second-order system

    m(t) x'' + (alpha/t^q) x' + gamma d/dt[grad_x L_t(x, lam)]
        + t^s grad_x L_t(x, lam) = 0
    lam' = (alpha-1) (t^{q+s} - gamma q t^{q-1})
           * grad_lam L_t(x + theta(t) x', lam)

reduces to first order as

    x'   = v
    lam' = (alpha-1) (t^{q+s} - gamma q t^{q-1})
           * (A (x + theta(t) v) - b - eps(t) lam)
    v'   = -(1/m(t)) [ (alpha/t^q) v
                       + gamma (hvp(x, v) + A^T lam' + eps(t) v + eps'(t) x)
                       + t^s (grad f(x) + A^T lam + eps(t) x) ]

with eps(t) = c t^{-p}.  The eps'(t) x term is the explicit time
dependence of grad_x L_t: eps'(t) = -c p t^{-p-1}, so the term carries a
negative sign inside the bracket.  Dropping it is the classic mistake;
it is pinned by a finite-difference-along-the-trajectory test.

The dual evaluation point is shifted along the velocity by

    theta(t) = [ m t^{2q+s} + gamma t^q - 2 m gamma q t^{2q-1}
                 - gamma m'(t) t^{2q} ]
               / [ (alpha-1) (t^{q+s} - gamma q t^{q-1}) ].

The theta denominator is strictly increasing in t (both terms of its
derivative are positive for 0 < q < 1), so positivity at t0 implies
positivity on the whole horizon; it is checked at t0 when a field is
built and at every explicit theta() call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, DivergenceError, DomainError
from .lagrangian import RegularizationSpec
from .problem import Problem, QuadraticProblem

__all__ = [
    "ParameterSet",
    "MassFunction",
    "AssumptionReport",
    "TrajectoryState",
    "RateExponents",
    "RegimeReport",
    "theta",
    "mass_eval",
    "vector_field",
    "build_field",
    "pack_state",
    "unpack_state",
    "validate_and_classify",
]


@dataclass(frozen=True)
class ParameterSet:
    """Flow parameters; constructor enforces the admissible ranges."""

    alpha: float
    q: float
    s: float
    gamma: float
    reg: RegularizationSpec
    t0: float = 1.0

    def __post_init__(self):
        if not (self.alpha > 1):
            raise DomainError(f"alpha must exceed 1, got {self.alpha}")
        if not (0.0 < self.q < 1.0):
            raise DomainError(f"q must lie in (0, 1), got {self.q}")
        if not (self.s > 0):
            raise DomainError(f"s must be positive, got {self.s}")
        if not (self.gamma >= 0):
            # gamma = 0 is the documented curvature-damping-off mode
            raise DomainError(f"gamma must be nonnegative, got {self.gamma}")
        if not (self.t0 > 0):
            raise DomainError(f"t0 must be positive, got {self.t0}")

    @property
    def c(self) -> float:
        return self.reg.c

    @property
    def p(self) -> float:
        return self.reg.p


@dataclass(frozen=True)
class MassFunction:
    """Positive nonincreasing mass m(t) = kappa * t^-sigma (sigma = 0: constant)."""

    kappa: float
    sigma: float

    def __post_init__(self):
        if not (self.kappa > 0):
            raise DomainError(f"kappa must be positive, got {self.kappa}")
        if not (self.sigma >= 0):
            raise DomainError(f"sigma must be nonnegative, got {self.sigma}")

    @property
    def kind(self) -> str:
        return "constant" if self.sigma == 0 else "power_law"

    @classmethod
    def power_law(cls, kappa: float, sigma: float) -> "MassFunction":
        return cls(kappa=float(kappa), sigma=float(sigma))

    @classmethod
    def constant(cls, kappa: float = 1.0) -> "MassFunction":
        return cls(kappa=float(kappa), sigma=0.0)

    def __call__(self, t: float) -> float:
        return self.kappa * t**-self.sigma

    def derivative(self, t: float) -> float:
        return -self.kappa * self.sigma * t ** (-self.sigma - 1.0)

    def second_derivative(self, t: float) -> float:
        return self.kappa * self.sigma * (self.sigma + 1.0) * t ** (-self.sigma - 2.0)

    def assumption_report(self, params: "ParameterSet") -> "AssumptionReport":
        """Check the two mass-growth assumptions for power-law masses.

        A1: gamma / t^{q+s} <= m(t) <= k1 / t^q for all large t.
            Upper bound  <=> sigma >= q          (witness k1 = kappa, t >= 1).
            Lower bound  <=> gamma == 0, or sigma < q+s,
                             or sigma == q+s with kappa >= gamma.
        A2: t |m'| <= k2 m and t^2 |m''| <= k2 m, which for powers holds
            identically with k2 = max(sigma, sigma (sigma + 1)).
        """
        q, s, gamma = params.q, params.s, params.gamma
        upper_ok = self.sigma >= q
        if gamma == 0 or self.sigma < q + s:
            lower_ok = True
        else:
            lower_ok = self.sigma == q + s and self.kappa >= gamma
        warnings = []
        if not upper_ok:
            warnings.append(
                f"mass upper bound fails: sigma={self.sigma} < q={q}, so "
                f"m(t)=kappa*t^-sigma does not decay at least like t^-q"
            )
        if not lower_ok:
            warnings.append(
                f"mass lower bound fails: m(t) eventually drops below "
                f"gamma/t^(q+s) (sigma={self.sigma}, q+s={q + s}, gamma={gamma})"
            )
        k2 = max(self.sigma, self.sigma * (self.sigma + 1.0))
        return AssumptionReport(
            satisfies_a1=bool(upper_ok and lower_ok),
            k1=self.kappa if upper_ok else None,
            satisfies_a2=True,
            k2=k2,
            warnings=warnings,
        )


def mass_eval(mass: MassFunction, t: float) -> tuple[float, float, float]:
    """(m, m', m'') at t > 0, in closed form."""
    if not (t > 0):
        raise DomainError(f"t must be positive, got {t}")
    return mass(t), mass.derivative(t), mass.second_derivative(t)


@dataclass(frozen=True)
class AssumptionReport:
    satisfies_a1: bool
    k1: float | None
    satisfies_a2: bool
    k2: float | None
    warnings: list[str] = field(default_factory=list)


@dataclass
class TrajectoryState:
    """Flow state (t, x, v, lam); entries must be finite."""

    t: float
    x: np.ndarray
    v: np.ndarray
    lam: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=np.float64)
        self.v = np.asarray(self.v, dtype=np.float64)
        self.lam = np.asarray(self.lam, dtype=np.float64)
        if self.x.shape != self.v.shape:
            raise DimensionMismatchError(
                f"x and v must have equal shapes, got {self.x.shape} and {self.v.shape}"
            )
        if not (
            math.isfinite(self.t)
            and np.isfinite(self.x).all()
            and np.isfinite(self.v).all()
            and np.isfinite(self.lam).all()
        ):
            raise ValueError("trajectory state contains non-finite entries")


def pack_state(state: TrajectoryState) -> np.ndarray:
    return np.concatenate([state.x, state.v, state.lam])


def unpack_state(t: float, y: np.ndarray, n: int, m: int) -> TrajectoryState:
    return TrajectoryState(
        t=t, x=y[:n].copy(), v=y[n : 2 * n].copy(), lam=y[2 * n :].copy()
    )


def _dual_coefficient(params: ParameterSet, t: float) -> float:
    return (params.alpha - 1.0) * (
        t ** (params.q + params.s) - params.gamma * params.q * t ** (params.q - 1.0)
    )


def theta(params: ParameterSet, mass: MassFunction, t: float) -> float:
    """Velocity shift applied to the dual gradient's evaluation point."""
    if not (t > 0):
        raise DomainError(f"t must be positive, got {t}")
    q, s, gamma = params.q, params.s, params.gamma
    den = _dual_coefficient(params, t)
    if not (den > 0):
        raise DomainError(
            f"extrapolation denominator (alpha-1)*(t^(q+s) - gamma*q*t^(q-1)) "
            f"is nonpositive at t={t}; the flow requires t^(s+1) > gamma*q"
        )
    m_t, md_t, _ = mass_eval(mass, t)
    num = (
        m_t * t ** (2.0 * q + s)
        + gamma * t**q
        - 2.0 * m_t * gamma * q * t ** (2.0 * q - 1.0)
        - gamma * md_t * t ** (2.0 * q)
    )
    return num / den


def vector_field(
    prob: Problem, params: ParameterSet, mass: MassFunction, state: TrajectoryState
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reference evaluation of (x', v', lam') at the given state."""
    t = state.t
    if not (t > 0):
        raise DomainError(f"t must be positive, got {t}")
    x, v, lam = state.x, state.v, state.lam
    if x.shape != (prob.dim_x,) or lam.shape != (prob.dim_dual,):
        raise DimensionMismatchError(
            f"state dims {x.shape}/{lam.shape} do not match problem "
            f"({prob.dim_x},)/({prob.dim_dual},)"
        )
    alpha, q, s, gamma = params.alpha, params.q, params.s, params.gamma
    eps = params.reg.strength(t)
    epsdot = params.reg.strength_dot(t)
    m_t = mass(t)
    th = theta(params, mass, t)
    w = _dual_coefficient(params, t)

    lamdot = w * (prob.A @ (x + th * v) - prob.b - eps * lam)
    grad_xl = prob.grad(x) + prob.A.T @ lam + eps * x
    ddt_grad_xl = prob.hvp(x, v) + prob.A.T @ lamdot + eps * v + epsdot * x
    vdot = -(1.0 / m_t) * (alpha * t**-q * v + gamma * ddt_grad_xl + t**s * grad_xl)
    if not (np.isfinite(vdot).all() and np.isfinite(lamdot).all()):
        raise DivergenceError(
            f"vector field produced non-finite values at t={t}", t=t, last_state=state
        )
    return v.copy(), vdot, lamdot


# ---------------------------------------------------------------------------
# Packed field for the integrator.  The quadratic fast path compiles the
# same arithmetic with numba when available; it must mirror vector_field
# exactly (a test compares the two paths at random states).  Fallback is
# the plain numpy expression.
# ---------------------------------------------------------------------------

try:  # pragma: no cover - availability depends on the environment
    import numba as _numba
except ImportError:  # pragma: no cover
    _numba = None


def _qp_rhs_py(t, y, Q, A, AT, k, b, par):
    alpha, q, s, gamma, c, p, kappa, sigma = par
    n = Q.shape[0]
    x = y[:n]
    v = y[n : 2 * n]
    lam = y[2 * n :]
    m_t = kappa * t**-sigma
    md_t = -kappa * sigma * t ** (-sigma - 1.0)
    eps = c * t**-p
    epsdot = -c * p * t ** (-p - 1.0)
    w = (alpha - 1.0) * (t ** (q + s) - gamma * q * t ** (q - 1.0))
    num = (
        m_t * t ** (2.0 * q + s)
        + gamma * t**q
        - 2.0 * m_t * gamma * q * t ** (2.0 * q - 1.0)
        - gamma * md_t * t ** (2.0 * q)
    )
    th = num / w
    lamdot = w * (A @ (x + th * v) - b - eps * lam)
    grad_xl = Q @ x + k + AT @ lam + eps * x
    ddt_grad_xl = Q @ v + AT @ lamdot + eps * v + epsdot * x
    vdot = -(1.0 / m_t) * (alpha * t**-q * v + gamma * ddt_grad_xl + t**s * grad_xl)
    out = np.empty(y.shape[0])
    out[:n] = v
    out[n : 2 * n] = vdot
    out[2 * n :] = lamdot
    return out


if _numba is not None:
    _qp_rhs_jit = _numba.njit(cache=True, fastmath=False)(_qp_rhs_py)
else:  # pragma: no cover
    _qp_rhs_jit = None


def build_field(prob: Problem, params: ParameterSet, mass: MassFunction):
    """Packed field (t, y) -> y' for integrate(); y = (x, v, lam) concatenated.

    Validates the extrapolation denominator once at t0; monotonicity
    makes that sufficient for every t >= t0.
    """
    theta(params, mass, params.t0)  # raises DomainError if degenerate at t0
    n = prob.dim_x
    par = np.array(
        [
            params.alpha,
            params.q,
            params.s,
            params.gamma,
            params.c,
            params.p,
            mass.kappa,
            mass.sigma,
        ]
    )
    if isinstance(prob, QuadraticProblem):
        Q = np.ascontiguousarray(prob.Q)
        A = np.ascontiguousarray(prob.A)
        AT = np.ascontiguousarray(prob.A.T)
        k = np.ascontiguousarray(prob.k)
        b = np.ascontiguousarray(prob.b)
        rhs = _qp_rhs_jit if _qp_rhs_jit is not None else _qp_rhs_py

        def packed(t, y):
            return rhs(t, y, Q, A, AT, k, b, par)

        # Marker consumed by the integrator's compiled whole-loop path.
        packed.qp_payload = (Q, A, AT, k, b, par)
        return packed

    def packed_general(t, y):
        state = TrajectoryState(t=t, x=y[:n], v=y[n : 2 * n], lam=y[2 * n :])
        xd, vd, ld = vector_field(prob, params, mass, state)
        return np.concatenate([xd, vd, ld])

    return packed_general


# ---------------------------------------------------------------------------
# Guarantee regimes.  Hypotheses (every regime additionally needs the mass
# assumptions A1 and A2):
#
#   Thm3.1: 0<p<1-q,  4q+s+p-2<0,  3q+s-p-1<0
#       (ii)  (1-q)/2 <= p < 1-q : base exponent 3q+s+p-2+r
#       (iii) 0 < p < (1-q)/2    : base exponent 2q+s-p-1+r
#       where r = max(q, p-q-s)
#   Thm3.2: 0<p<(1-q)/2,  5q+2s-1<0,  4q+s+p-2<0
#       (ii)  p < 2q+s  : base 3q+s-p-1
#       (iii) p >= 2q+s : base q-1
#   Thm3.3: (1-q)/2<=p<1-q,  (1-q)/2<=2q+s<1-q,  4q+s+p-2<0
#       (ii)  (1-q)/2 < p < 2q+s : base 4q+s+p-2
#       (iii) p >= 2q+s          : base 2q+2p-2
#
# Thm3.2/Thm3.3 hypotheses each imply Thm3.1's, and wherever regimes
# overlap the predicted exponents coincide (their bases equal Thm3.1's
# with r resolved to q or p-q-s), so which label is reported is
# cosmetic.  We prefer Thm3.2, then Thm3.1; Thm3.3 coincides with
# Thm3.1(ii) everywhere it applies and is reported inside
# satisfied_regimes only.
#
# Gap/feasibility metrics decay like O( sqrt(m(t)) t^{base/2} + t^{-p} ),
# so with m(t) = kappa t^-sigma the reported exponent is
#     max((base - sigma)/2, -p),
# and the squared-distance metric decays like O(m(t) t^base), exponent
# base - sigma.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RateExponents:
    gap_exp: float
    feas_exp: float
    dist_exp: float


@dataclass(frozen=True)
class RegimeReport:
    regime: str
    r: float
    predicted_exponents: RateExponents | None
    satisfied_regimes: list[str]
    violated_conditions: list[str]
    warnings: list[str]


def _regime_base(regime: str, q: float, s: float, p: float, r: float) -> float:
    return {
        "Thm3.1(ii)": 3 * q + s + p - 2 + r,
        "Thm3.1(iii)": 2 * q + s - p - 1 + r,
        "Thm3.2(ii)": 3 * q + s - p - 1,
        "Thm3.2(iii)": q - 1,
        "Thm3.3(ii)": 4 * q + s + p - 2,
        "Thm3.3(iii)": 2 * q + 2 * p - 2,
    }[regime]


def validate_and_classify(params: ParameterSet, mass: MassFunction) -> RegimeReport:
    """Classify a configuration into its convergence-guarantee regime.

    Returns the applicable regime label, r = max(q, p-q-s), the full list
    of regimes whose hypotheses hold, every violated hypothesis verbatim,
    and the predicted log-log decay exponents for the gap, feasibility,
    and squared-distance metrics (None when outside all guarantees).
    Classification is total: it never raises on admissible parameters.
    """
    q, s, p = params.q, params.s, params.p
    r = max(q, p - q - s)
    sigma = mass.sigma

    conds = {
        "0<p<1-q": 0.0 < p < 1.0 - q,
        "4q+s+p-2<0": 4 * q + s + p - 2 < 0,
        "3q+s-p-1<0": 3 * q + s - p - 1 < 0,
        "0<p<(1-q)/2": 0.0 < p < (1.0 - q) / 2.0,
        "5q+2s-1<0": 5 * q + 2 * s - 1 < 0,
        "(1-q)/2<=p<1-q": (1.0 - q) / 2.0 <= p < 1.0 - q,
        "(1-q)/2<=2q+s<1-q": (1.0 - q) / 2.0 <= 2 * q + s < 1.0 - q,
    }
    h1 = conds["0<p<1-q"] and conds["4q+s+p-2<0"] and conds["3q+s-p-1<0"]
    h2 = conds["0<p<(1-q)/2"] and conds["5q+2s-1<0"] and conds["4q+s+p-2<0"]
    h3 = conds["(1-q)/2<=p<1-q"] and conds["(1-q)/2<=2q+s<1-q"] and conds["4q+s+p-2<0"]

    satisfied = []
    if h2:
        satisfied.append("Thm3.2(ii)" if p < 2 * q + s else "Thm3.2(iii)")
    if h3:
        if (1.0 - q) / 2.0 < p < 2 * q + s:
            satisfied.append("Thm3.3(ii)")
        elif p >= 2 * q + s:
            satisfied.append("Thm3.3(iii)")
    if h1:
        satisfied.append("Thm3.1(ii)" if p >= (1.0 - q) / 2.0 else "Thm3.1(iii)")

    violated = [name for name, ok in conds.items() if not ok]

    assumptions = mass.assumption_report(params)
    warnings = list(assumptions.warnings)
    assumptions_ok = assumptions.satisfies_a1 and assumptions.satisfies_a2
    if not assumptions.satisfies_a1:
        violated.append("A1: gamma/t^(q+s) <= m(t) <= k1/t^q")
    if not assumptions.satisfies_a2:
        violated.append("A2: t|m'(t)| <= k2 m(t), t^2|m''(t)| <= k2 m(t)")

    preferred = None
    for prefix in ("Thm3.2", "Thm3.1", "Thm3.3"):
        for label in satisfied:
            if label.startswith(prefix):
                preferred = label
                break
        if preferred is not None:
            break

    if preferred is None or not assumptions_ok:
        if not satisfied:
            warnings.append("no guarantee regime applies to these parameters")
        return RegimeReport(
            regime="outside_guarantees",
            r=r,
            predicted_exponents=None,
            satisfied_regimes=satisfied,
            violated_conditions=violated,
            warnings=warnings,
        )

    base = _regime_base(preferred, q, s, p, r)
    half = max((base - sigma) / 2.0, -p)
    exps = RateExponents(gap_exp=half, feas_exp=half, dist_exp=base - sigma)
    return RegimeReport(
        regime=preferred,
        r=r,
        predicted_exponents=exps,
        satisfied_regimes=satisfied,
        violated_conditions=violated,
        warnings=warnings,
    )
