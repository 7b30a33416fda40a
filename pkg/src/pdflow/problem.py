"""Problem instances: smooth convex objectives with linear equality constraints.

A problem bundles a differentiable convex objective f on R^n with a
constraint system A x = b, A of shape (m, n).  Oracles exposed: value,
gradient, and Hessian-vector product.
"""

from __future__ import annotations

import io

import numpy as np

from .errors import DimensionMismatchError
from .rng import GaussianStream

__all__ = [
    "Problem",
    "QuadraticProblem",
    "ToyProblem",
    "SmoothProblem",
    "make_random_qp",
    "eval_objective",
    "feasibility_residual",
    "problem_to_text",
    "problem_from_text",
]


def _as_vector(arr, n: int, name: str) -> np.ndarray:
    out = np.asarray(arr, dtype=np.float64)
    if out.shape != (n,):
        raise DimensionMismatchError(f"{name} must have shape ({n},), got {out.shape}")
    return out


class Problem:
    """Base class: objective oracles plus the constraint pair (A, b)."""

    def __init__(self, A, b):
        A = np.atleast_2d(np.asarray(A, dtype=np.float64))
        b = np.asarray(b, dtype=np.float64).ravel()
        if A.ndim != 2:
            raise DimensionMismatchError(f"A must be a matrix, got ndim={A.ndim}")
        if b.shape[0] != A.shape[0]:
            raise DimensionMismatchError(
                f"b has {b.shape[0]} entries but A has {A.shape[0]} rows"
            )
        self.A = A
        self.b = b
        self.A.setflags(write=False)
        self.b.setflags(write=False)

    @property
    def dim_x(self) -> int:
        return self.A.shape[1]

    @property
    def dim_dual(self) -> int:
        return self.A.shape[0]

    def value(self, x) -> float:
        raise NotImplementedError

    def grad(self, x) -> np.ndarray:
        raise NotImplementedError

    def hvp(self, x, v) -> np.ndarray:
        raise NotImplementedError

    def _check_x(self, x) -> np.ndarray:
        return _as_vector(x, self.dim_x, "x")


class QuadraticProblem(Problem):
    """f(x) = 0.5 x^T Q x + k^T x with Q symmetric positive semidefinite."""

    def __init__(self, Q, k, A, b, seed=None):
        super().__init__(A, b)
        Q = np.asarray(Q, dtype=np.float64)
        k = _as_vector(k, self.dim_x, "k")
        if Q.shape != (self.dim_x, self.dim_x):
            raise DimensionMismatchError(
                f"Q must have shape ({self.dim_x}, {self.dim_x}), got {Q.shape}"
            )
        scale = max(1.0, float(np.max(np.abs(Q))))
        if np.max(np.abs(Q - Q.T)) > 1e-12 * scale:
            raise ValueError("Q must be symmetric to machine rounding")
        self.Q = Q
        self.k = k
        self.Q.setflags(write=False)
        self.k.setflags(write=False)
        self.seed = seed

    def value(self, x) -> float:
        x = self._check_x(x)
        return float(0.5 * x @ (self.Q @ x) + self.k @ x)

    def grad(self, x) -> np.ndarray:
        x = self._check_x(x)
        return self.Q @ x + self.k

    def hvp(self, x, v) -> np.ndarray:
        self._check_x(x)
        v = _as_vector(v, self.dim_x, "v")
        return self.Q @ v


class ToyProblem(QuadraticProblem):
    """f(x) = (a x1 + b x2 + c x3)^2 with the single constraint a x1 - b x2 + c x3 = 0.

    The solution set of the constrained problem is the line
    {(x1, 0, -(a/c) x1)}; the minimum-norm solution is the origin.
    """

    def __init__(self, coeff_a: float, coeff_b: float, coeff_c: float):
        if coeff_a == 0 or coeff_b == 0 or coeff_c == 0:
            raise ValueError("all three coefficients must be nonzero")
        u = np.array([coeff_a, coeff_b, coeff_c], dtype=np.float64)
        super().__init__(
            Q=2.0 * np.outer(u, u),
            k=np.zeros(3),
            A=np.array([[coeff_a, -coeff_b, coeff_c]]),
            b=np.zeros(1),
        )
        self.coeffs = (float(coeff_a), float(coeff_b), float(coeff_c))

    def solution_direction(self) -> np.ndarray:
        """Unit vector spanning the solution line {(x1, 0, -(a/c) x1)}."""
        a, _, c = self.coeffs
        d = np.array([1.0, 0.0, -a / c])
        return d / np.linalg.norm(d)


class SmoothProblem(Problem):
    """General smooth convex objective given by callables (value, grad, hvp)."""

    def __init__(self, value_fn, grad_fn, hvp_fn, A, b):
        super().__init__(A, b)
        self._value = value_fn
        self._grad = grad_fn
        self._hvp = hvp_fn

    def value(self, x) -> float:
        return float(self._value(self._check_x(x)))

    def grad(self, x) -> np.ndarray:
        return _as_vector(self._grad(self._check_x(x)), self.dim_x, "grad")

    def hvp(self, x, v) -> np.ndarray:
        x = self._check_x(x)
        v = _as_vector(v, self.dim_x, "v")
        return _as_vector(self._hvp(x, v), self.dim_x, "hvp")


def make_random_qp(seed: int, m: int, n: int) -> QuadraticProblem:
    """Random consistent QP: Q = H^T H with H (n x n) standard normal.

    Draw order from one seeded stream: H row-major, A row-major, k, b.
    Instances are bit-reproducible for a given (seed, m, n).
    """
    if m < 1 or n < 1:
        raise DimensionMismatchError(f"need m >= 1 and n >= 1, got m={m}, n={n}")
    stream = GaussianStream(seed)
    H = stream.normals(n * n).reshape(n, n)
    A = stream.normals(m * n).reshape(m, n)
    k = stream.normals(n)
    b = stream.normals(m)
    return QuadraticProblem(Q=H.T @ H, k=k, A=A, b=b, seed=int(seed))


def eval_objective(prob: Problem, x):
    """(value, gradient, hvp handle) at x; the handle closes over x."""
    x = np.asarray(x, dtype=np.float64)
    return prob.value(x), prob.grad(x), lambda v: prob.hvp(x, v)


def feasibility_residual(prob: Problem, x) -> float:
    """Euclidean norm of A x - b."""
    x = _as_vector(x, prob.dim_x, "x")
    return float(np.linalg.norm(prob.A @ x - prob.b))


# ---------------------------------------------------------------------------
# Plain-text serialization (round-trip exact via 17-significant-digit floats)
#
#   pdflow-problem v1
#   kind qp | toy
#   seed <int> | none
#   dims <n> <m>
#   coeffs <a> <b> <c>          (toy only)
#   matrix Q <n> <n>            (qp only; one row per line)
#   ...
#   vector k <n>                (qp only)
#   matrix A <m> <n>
#   vector b <m>
# ---------------------------------------------------------------------------

_MAGIC = "pdflow-problem v1"


def _fmt_row(row) -> str:
    return " ".join(f"{v:.17g}" for v in np.atleast_1d(row))


def problem_to_text(prob: Problem) -> str:
    out = io.StringIO()
    out.write(_MAGIC + "\n")
    if isinstance(prob, ToyProblem):
        out.write("kind toy\n")
        out.write("seed none\n")
        out.write(f"dims {prob.dim_x} {prob.dim_dual}\n")
        out.write("coeffs " + _fmt_row(prob.coeffs) + "\n")
    elif isinstance(prob, QuadraticProblem):
        out.write("kind qp\n")
        out.write(f"seed {prob.seed if prob.seed is not None else 'none'}\n")
        out.write(f"dims {prob.dim_x} {prob.dim_dual}\n")
        out.write(f"matrix Q {prob.dim_x} {prob.dim_x}\n")
        for row in prob.Q:
            out.write(_fmt_row(row) + "\n")
        out.write(f"vector k {prob.dim_x}\n")
        out.write(_fmt_row(prob.k) + "\n")
    else:
        raise TypeError("only quadratic and toy problems serialize to text")
    if not isinstance(prob, ToyProblem):
        out.write(f"matrix A {prob.dim_dual} {prob.dim_x}\n")
        for row in prob.A:
            out.write(_fmt_row(row) + "\n")
        out.write(f"vector b {prob.dim_dual}\n")
        out.write(_fmt_row(prob.b) + "\n")
    return out.getvalue()


def problem_from_text(text: str) -> Problem:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0] != _MAGIC:
        raise ValueError(f"missing '{_MAGIC}' header")
    fields = {}
    i = 1

    def take(prefix):
        nonlocal i
        if i >= len(lines) or not lines[i].startswith(prefix + " "):
            raise ValueError(f"expected '{prefix} ...' at line {i + 1}")
        val = lines[i][len(prefix) + 1 :]
        i += 1
        return val

    def take_matrix(name, rows, cols):
        nonlocal i
        head = take("matrix")
        got_name, r, c = head.split()
        if got_name != name or (int(r), int(c)) != (rows, cols):
            raise ValueError(f"expected 'matrix {name} {rows} {cols}', got '{head}'")
        block = np.array(
            [[float(v) for v in lines[i + j].split()] for j in range(rows)]
        )
        i += rows
        if block.shape != (rows, cols):
            raise ValueError(f"matrix {name} has shape {block.shape}")
        return block

    def take_vector(name, size):
        nonlocal i
        head = take("vector")
        got_name, sz = head.split()
        if got_name != name or int(sz) != size:
            raise ValueError(f"expected 'vector {name} {size}', got '{head}'")
        vec = np.array([float(v) for v in lines[i].split()])
        i += 1
        if vec.shape != (size,):
            raise ValueError(f"vector {name} has shape {vec.shape}")
        return vec

    fields["kind"] = take("kind")
    seed_txt = take("seed")
    seed = None if seed_txt == "none" else int(seed_txt)
    n, m = (int(v) for v in take("dims").split())
    if fields["kind"] == "toy":
        a, b_, c = (float(v) for v in take("coeffs").split())
        return ToyProblem(a, b_, c)
    if fields["kind"] != "qp":
        raise ValueError(f"unknown problem kind '{fields['kind']}'")
    Q = take_matrix("Q", n, n)
    k = take_vector("k", n)
    A = take_matrix("A", m, n)
    b = take_vector("b", m)
    return QuadraticProblem(Q=Q, k=k, A=A, b=b, seed=seed)
