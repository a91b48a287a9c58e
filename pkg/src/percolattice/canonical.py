"""Deterministic-equivalent Stieltjes transform for percolated lattices.

The 2^D rational system for the resolvent coefficients reduces to one
scalar self-consistency equation for the principal coefficient,

    alpha = (1/N) sum_j m_j / (b_j - z - sigma^2 * alpha),

whose unique solution with Im z * Im alpha > 0 is the transform of the
deterministic equivalent distribution.  The reduction is not trusted on
its own: matrix_k1_oracle iterates the full N x N canonical system and is
used to validate it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .lattice import (
    LatticeSpec,
    SizeLimitError,
    _kron_chain,
    _complete_graph,
    branch_table,
    dimension_adjacency,
    expected_degree,
    expected_matrix,
    node_count,
)

ORACLE_NODE_LIMIT = 600


class SolverError(RuntimeError):
    """Scalar fixed-point solver failed to converge."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class OracleError(RuntimeError):
    """Matrix-level canonical iteration failed or contradicted the solution form."""


@dataclass(frozen=True)
class CanonicalProblem:
    """Precomputed scalars of the 2^D rational system."""

    spec: LatticeSpec
    gamma: float
    variance_sum: float
    branch_values: np.ndarray      # b_j, product order over j in {0,1}^D
    branch_multiplicities: np.ndarray
    branch_index: tuple            # the j tuples, same order
    node_count: int


@dataclass(frozen=True)
class CanonicalSolution:
    z: complex
    alpha_principal: complex
    residual: float
    iterations: int


@dataclass(frozen=True)
class AlphaVector:
    """All 2^D resolvent coefficients, keyed by the index tuple i."""

    coefficients: dict


def build_problem(spec: LatticeSpec) -> CanonicalProblem:
    gamma = expected_degree(spec)
    sigma2 = sum(
        p * (1 - p) * (m - 1) for p, m in zip(spec.probs, spec.dims)
    ) / gamma**2
    values, mults, index = branch_table(spec)
    return CanonicalProblem(
        spec=spec,
        gamma=gamma,
        variance_sum=float(sigma2),
        branch_values=values,
        branch_multiplicities=mults,
        branch_index=tuple(index),
        node_count=node_count(spec),
    )


def solve_alpha(
    problem: CanonicalProblem,
    z: complex,
    tol: float = 1e-12,
    max_iter: int = 100_000,
    initial: complex | None = None,
) -> CanonicalSolution:
    """Solve the scalar self-consistency equation at z (Im z != 0).

    Damped fixed-point iteration with the damping halved whenever the
    candidate would leave the Herglotz branch or fail to shrink the
    residual; a safeguarded Newton step takes over when the fixed point
    stalls (it always does near the real axis, where the map is barely
    contractive).
    """
    z = complex(z)
    if z.imag == 0:
        raise ValueError("solve_alpha requires Im z != 0")
    s = 1.0 if z.imag > 0 else -1.0
    w = problem.branch_multiplicities / problem.node_count
    b = problem.branch_values
    sig2 = problem.variance_sum

    def g(a):
        return complex(np.sum(w / (b - z - sig2 * a)))

    if sig2 == 0.0:
        alpha = g(0.0)
        return CanonicalSolution(z=z, alpha_principal=alpha, residual=0.0, iterations=1)

    alpha = complex(initial) if initial is not None else 1j * s
    if s * alpha.imag <= 0:
        alpha = 1j * s
    r = alpha - g(alpha)
    eta = 1.0
    it = 0
    while abs(r) > tol and it < max_iter:
        it += 1
        accepted = False
        if eta >= 1e-4:
            cand = alpha - eta * r  # = (1 - eta) alpha + eta g(alpha)
            if s * cand.imag > 0:
                rc = cand - g(cand)
                # demand real progress; barely-contractive steps (the rule
                # near the real axis) are handed to Newton instead
                if abs(rc) < 0.9 * abs(r):
                    alpha, r = cand, rc
                    eta = min(1.0, 2.0 * eta)
                    accepted = True
            if not accepted:
                eta *= 0.5
        if not accepted:
            gp = sig2 * complex(np.sum(w / (b - z - sig2 * alpha) ** 2))
            denom = 1.0 - gp
            step = r / denom if denom != 0 else r
            t = 1.0
            while t > 1e-12:
                cand = alpha - t * step
                if s * cand.imag > 0:
                    rc = cand - g(cand)
                    if abs(rc) < abs(r):
                        alpha, r = cand, rc
                        accepted = True
                        break
                t *= 0.5
            if not accepted:
                # stalled from this iterate: restart from the canonical start
                restart = 1j * s
                rr = restart - g(restart)
                if abs(rr) < abs(r):
                    alpha, r = restart, rr
                    eta = 1.0
                else:
                    raise SolverError(
                        f"fixed point stalled at z={z} with residual {abs(r):.3e}",
                        residual=abs(r), iterations=it,
                    )
    if abs(r) > tol:
        raise SolverError(
            f"no convergence at z={z} after {it} iterations (residual {abs(r):.3e})",
            residual=abs(r), iterations=it,
        )
    return CanonicalSolution(z=z, alpha_principal=alpha, residual=abs(r), iterations=max(it, 1))


def deterministic_stieltjes(problem: CanonicalProblem, z: complex, **kwargs) -> complex:
    """Stieltjes transform of the deterministic equivalent: the principal alpha."""
    return solve_alpha(problem, z, **kwargs).alpha_principal


def _lambda_factor(m: int, i_d: int, j_d: int) -> float:
    if i_d == 1:
        return 1.0
    return float(m - 1) if j_d == 0 else -1.0


def recover_all_alphas(problem: CanonicalProblem, solution: CanonicalSolution) -> AlphaVector:
    """Solve the full 2^D linear system for every resolvent coefficient."""
    spec = problem.spec
    d = spec.ndim
    idx = list(product((0, 1), repeat=d))
    size = len(idx)
    mat = np.empty((size, size))
    for r, j in enumerate(idx):
        for c, i in enumerate(idx):
            prod = 1.0
            for m, i_d, j_d in zip(spec.dims, i, j):
                prod *= _lambda_factor(m, i_d, j_d)
            mat[r, c] = prod
    alpha = solution.alpha_principal
    rhs = 1.0 / (
        problem.branch_values - solution.z - problem.variance_sum * alpha
    )
    if np.linalg.cond(mat) > 1e12:
        raise ValueError(
            f"coefficient system is numerically singular for dims {spec.dims}"
        )
    coeff = np.linalg.solve(mat, rhs)
    principal = coeff[idx.index((1,) * d)]
    if abs(principal - alpha) > 1e-10 * max(1.0, abs(alpha)):
        raise ValueError(
            f"recovered principal coefficient {principal} disagrees with "
            f"solver value {alpha}"
        )
    return AlphaVector(coefficients={i: complex(a) for i, a in zip(idx, coeff)})


def variance_matrix(spec: LatticeSpec) -> np.ndarray:
    """Entrywise variances of the centered scaled adjacency, dense."""
    gamma = expected_degree(spec)
    return sum(
        (p * (1 - p) / gamma**2) * dimension_adjacency(spec, d)
        for d, p in enumerate(spec.probs)
    )


def solution_form_basis(spec: LatticeSpec) -> list[np.ndarray]:
    """Kronecker basis matrices for the resolvent solution form, product order."""
    basis = []
    for i in product((0, 1), repeat=spec.ndim):
        blocks = [
            _complete_graph(m) if i_d == 0 else np.eye(m)
            for m, i_d in zip(spec.dims, i)
        ]
        basis.append(_kron_chain(blocks))
    return basis


def solution_form_residual(spec: LatticeSpec, c: np.ndarray) -> float:
    """Relative Frobenius distance of C from the Kronecker solution-form span."""
    basis = solution_form_basis(spec)
    a = np.column_stack([t.ravel() for t in basis]).astype(complex)
    vec = c.ravel()
    coef, *_ = np.linalg.lstsq(a, vec, rcond=None)
    resid = np.linalg.norm(vec - a @ coef)
    return float(resid / max(np.linalg.norm(vec), 1e-300))


def matrix_k1_oracle(
    spec: LatticeSpec,
    z: complex,
    tol: float = 1e-10,
    max_iter: int = 200_000,
    return_matrix: bool = False,
):
    """Matrix-level canonical fixed point; the independent check on solve_alpha.

    Iterates C <- (B - zI - diag_k(sum_s C_ss E[H_ks^2]))^{-1} from
    i*sign(Im z)*I until successive trace-averages differ by < tol, then
    verifies the converged C sits in the Kronecker solution-form span.
    """
    n = node_count(spec)
    if n > ORACLE_NODE_LIMIT:
        raise SizeLimitError(f"oracle refused for N={n} > {ORACLE_NODE_LIMIT}")
    z = complex(z)
    if z.imag == 0:
        raise ValueError("matrix_k1_oracle requires Im z != 0")
    s = 1.0 if z.imag > 0 else -1.0
    base = expected_matrix(spec) - z * np.eye(n)
    v = variance_matrix(spec)
    c = 1j * s * np.eye(n)
    trace_avg = np.trace(c) / n
    eta = 1.0
    prev_delta = np.inf
    converged = False
    for it in range(1, max_iter + 1):
        shift = v @ np.diagonal(c)
        c_next = np.linalg.inv(base - np.diag(shift))
        c = (1.0 - eta) * c + eta * c_next
        new_avg = np.trace(c) / n
        delta = abs(new_avg - trace_avg)
        trace_avg = new_avg
        if delta < tol:
            converged = True
            break
        if delta > prev_delta:
            eta = max(0.25 * eta, 1e-3)
        prev_delta = delta
    if not converged:
        raise OracleError(
            f"canonical matrix iteration did not converge at z={z} "
            f"(last trace step {prev_delta:.3e})"
        )
    residual = solution_form_residual(spec, c)
    if residual > 10.0 * tol:
        raise OracleError(
            f"converged resolvent leaves the Kronecker solution form: "
            f"relative residual {residual:.3e} > {10 * tol:.1e}"
        )
    s_val = complex(np.trace(c) / n)
    if return_matrix:
        return s_val, c
    return s_val


def oracle_z_grid() -> list[complex]:
    """The standard 25-point validation grid: 5 real x 5 imaginary parts."""
    return [
        complex(x, y)
        for x in np.linspace(-1.0, 1.0, 5)
        for y in (0.05, 0.2, 0.5, 1.0, 2.0)
    ]
