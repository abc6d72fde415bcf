"""Generalized gradient descent and alternating minimization.

The objective is the weighted amplitude residual

    f(z) = (1/2m) sum_k b_k (y_k - |(A z)_k|)^2,

whose generalized Wirtinger gradient (the full real gradient in complex
packaging, using the convention phase_unit(0) = 1 at the kink) is

    grad f(z) = (1/m) A* diag(b) (A z - y . phase_unit(A z)).

``gd_solve`` iterates z <- z - tau grad f(z) with either a fixed step
or Armijo backtracking.  ``adm_solve`` alternates the phase assignment
c = y . phase_unit(A z) with the least-squares solve min ||A z - c||,
carried out matrix-free by conjugate gradients on the normal equations.

Stopping: with the ground truth supplied, iteration halts once the
phase-invariant distance falls to ``success_tol``; otherwise once the
objective falls to ``residual_tol``; in both cases no later than
``max_iters`` steps.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.linalg import LinearOperator, cg

from .errors import (
    IllConditionedSystem,
    InvalidParameter,
    NumericalDivergence,
)
from .operators import as_complex_vector, as_observations, phase_unit
from .weighting import WeightingScheme, weights_from_observations

DEFAULT_TAU = 2.02
DEFAULT_MAX_ITERS = 20000
DEFAULT_SUCCESS_TOL = 1e-5
DEFAULT_RESIDUAL_TOL = 1e-12
ADM_CG_MAX_ITERS = 500
ADM_RESIDUAL_CAP = 1e-6


@dataclass(frozen=True)
class FixedStep:
    """Constant step size policy."""

    tau: float = DEFAULT_TAU

    def __post_init__(self):
        if not self.tau > 0:
            raise InvalidParameter(f"tau must be > 0, got {self.tau}")


@dataclass(frozen=True)
class BacktrackingStep:
    """Armijo backtracking from ``init_tau``, shrinking by ``shrink``."""

    init_tau: float = DEFAULT_TAU
    shrink: float = 0.5
    armijo_c: float = 1e-4

    def __post_init__(self):
        if not self.init_tau > 0:
            raise InvalidParameter(f"init_tau must be > 0, got {self.init_tau}")
        if not 0.0 < self.shrink < 1.0:
            raise InvalidParameter(f"shrink must lie in (0, 1), got {self.shrink}")
        if not self.armijo_c > 0:
            raise InvalidParameter(f"armijo_c must be > 0, got {self.armijo_c}")


@dataclass(frozen=True)
class SolverConfig:
    """Solver controls shared by gd_solve and adm_solve."""

    weighting: WeightingScheme = field(default_factory=WeightingScheme.gaussian_smoothed)
    step_policy: object = field(default_factory=FixedStep)
    max_iters: int = DEFAULT_MAX_ITERS
    success_tol: float = DEFAULT_SUCCESS_TOL
    residual_tol: float = DEFAULT_RESIDUAL_TOL
    record_trajectory: bool = False

    def __post_init__(self):
        if not isinstance(self.step_policy, (FixedStep, BacktrackingStep)):
            raise InvalidParameter("step_policy must be FixedStep or BacktrackingStep")
        if self.max_iters < 0:
            raise InvalidParameter(f"max_iters must be >= 0, got {self.max_iters}")
        if not self.success_tol > 0:
            raise InvalidParameter(f"success_tol must be > 0, got {self.success_tol}")
        if not self.residual_tol > 0:
            raise InvalidParameter(f"residual_tol must be > 0, got {self.residual_tol}")


@dataclass
class SolveResult:
    """Terminal state of a solve.

    ``final_dist`` is None when no ground truth was supplied, and
    ``trajectory`` is None unless recording was requested; recorded rows
    are (iteration, dist, objective, tau), with None in fields that were
    not evaluated at that iteration.
    """

    z_hat: np.ndarray
    iterations: int
    converged: bool
    final_dist: float = None
    trajectory: list = None


def objective(model, y, b, z):
    """Weighted amplitude objective f(z)."""
    m = model.shape[0]
    y = as_observations(y, m)
    w = model.forward(z)
    r = y - np.abs(w)
    return 0.5 * float(np.dot(np.asarray(b, dtype=np.float64) * r, r)) / m


def wirtinger_gradient(model, y, b, z):
    """Generalized gradient of the weighted amplitude objective at z."""
    m = model.shape[0]
    y = as_observations(y, m)
    w = model.forward(z)
    return model.adjoint(np.asarray(b, dtype=np.float64) * (w - y * phase_unit(w))) / m


def _dist_to(z, x, x_norm_sq):
    val = np.vdot(z, z).real + x_norm_sq - 2.0 * abs(np.vdot(x, z))
    return math.sqrt(max(val, 0.0))


def _objective_from(w, y, b, m):
    r = y - np.abs(w)
    return 0.5 * float(np.dot(b * r, r)) / m


def gd_solve(model, y, z0, config=None, truth=None):
    """Run weighted generalized gradient descent from z0.

    Parameters
    ----------
    model : operator with forward/adjoint and shape (m, n)
    y : array_like
        Observed magnitudes, length m.
    z0 : array_like
        Initial point, length n.
    config : SolverConfig, optional
        Defaults to the Gaussian-smoothed weighting with a fixed step.
    truth : array_like, optional
        Ground-truth signal; enables the distance-based stopping rule
        and the ``final_dist`` field.

    Returns
    -------
    SolveResult

    Raises
    ------
    NumericalDivergence
        If an iterate becomes non-finite; the message carries the
        iteration index.
    """
    if config is None:
        config = SolverConfig()
    m, n = model.shape
    y = as_observations(y, m)
    z = as_complex_vector(z0, "z0").copy()
    if z.shape[0] != n:
        raise InvalidParameter(f"z0 has length {z.shape[0]}, expected {n}")
    x = None
    x_norm_sq = 0.0
    if truth is not None:
        x = as_complex_vector(truth, "truth")
        if x.shape[0] != n:
            raise InvalidParameter(f"truth has length {x.shape[0]}, expected {n}")
        x_norm_sq = np.vdot(x, x).real

    b = weights_from_observations(y, config.weighting)
    policy = config.step_policy
    backtracking = isinstance(policy, BacktrackingStep)
    fixed_tau = policy.tau if not backtracking else None
    recording = config.record_trajectory
    trajectory = [] if recording else None

    # overflow in a diverging iterate is detected inside the loop and
    # reported as NumericalDivergence, so the transient warnings are off
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        return _gd_loop(
            model.forward, model.adjoint, z, y, b, x, x_norm_sq, config,
            policy, backtracking, fixed_tau, recording, trajectory,
        )


def _gd_loop(forward, adjoint, z, y, b, x, x_norm_sq, config, policy,
             backtracking, fixed_tau, recording, trajectory):
    m = y.shape[0]
    converged = False
    final_dist = None
    iterations = 0

    for it in range(config.max_iters + 1):
        if not np.all(np.isfinite(z)):
            raise NumericalDivergence(f"non-finite iterate at iteration {it}")
        w = forward(z)
        if not np.all(np.isfinite(w)):
            raise NumericalDivergence(f"non-finite iterate at iteration {it}")

        dist = None
        fval = None
        if x is not None:
            dist = _dist_to(z, x, x_norm_sq)
            stop = dist <= config.success_tol
            if recording or backtracking:
                fval = _objective_from(w, y, b, m)
        else:
            fval = _objective_from(w, y, b, m)
            stop = fval <= config.residual_tol

        if stop or it == config.max_iters:
            converged = stop
            iterations = it
            final_dist = dist
            if recording:
                trajectory.append((it, dist, fval, None))
            break

        grad = adjoint(b * (w - y * phase_unit(w))) / m

        if backtracking:
            grad_sq = np.vdot(grad, grad).real
            tau = policy.init_tau
            accepted = False
            if not np.all(np.isfinite(grad)):
                raise NumericalDivergence(f"non-finite gradient at iteration {it}")
            for _ in range(60):
                z_try = z - tau * grad
                f_try = _objective_from(forward(z_try), y, b, m)
                if f_try <= fval - policy.armijo_c * tau * grad_sq:
                    accepted = True
                    break
                tau *= policy.shrink
            if not accepted:
                # no descent step found; the iterate is numerically stationary
                converged = stop
                iterations = it
                final_dist = dist
                if recording:
                    trajectory.append((it, dist, fval, None))
                break
            if recording:
                trajectory.append((it, dist, fval, tau))
            z = z_try
        else:
            if recording:
                trajectory.append((it, dist, fval, fixed_tau))
            z -= fixed_tau * grad

    return SolveResult(
        z_hat=z,
        iterations=iterations,
        converged=converged,
        final_dist=final_dist,
        trajectory=trajectory,
    )


def adm_solve(model, y, z0, config=None, truth=None):
    """Alternating minimization over phases and least-squares fits.

    Each outer iteration fixes c = y . phase_unit(A z) and solves
    min_z ||A z - c|| through conjugate gradients on A* A z = A* c,
    warm started at the current iterate.  Stopping rules match
    ``gd_solve``; step policies do not apply.

    Raises
    ------
    IllConditionedSystem
        If the normal-equation solve stalls with relative residual
        above 1e-6 at the iteration cap.
    """
    if config is None:
        config = SolverConfig()
    m, n = model.shape
    y = as_observations(y, m)
    z = as_complex_vector(z0, "z0").copy()
    if z.shape[0] != n:
        raise InvalidParameter(f"z0 has length {z.shape[0]}, expected {n}")
    x = None
    x_norm_sq = 0.0
    if truth is not None:
        x = as_complex_vector(truth, "truth")
        if x.shape[0] != n:
            raise InvalidParameter(f"truth has length {x.shape[0]}, expected {n}")
        x_norm_sq = np.vdot(x, x).real

    b = weights_from_observations(y, config.weighting)
    recording = config.record_trajectory
    trajectory = [] if recording else None

    def normal_apply(v):
        return model.adjoint(model.forward(np.asarray(v, dtype=np.complex128)))

    normal_op = LinearOperator((n, n), matvec=normal_apply, dtype=np.complex128)

    converged = False
    final_dist = None
    iterations = 0

    for it in range(config.max_iters + 1):
        if not np.all(np.isfinite(z)):
            raise NumericalDivergence(f"non-finite iterate at iteration {it}")
        w = model.forward(z)
        if not np.all(np.isfinite(w)):
            raise NumericalDivergence(f"non-finite iterate at iteration {it}")

        dist = None
        fval = None
        if x is not None:
            dist = _dist_to(z, x, x_norm_sq)
            stop = dist <= config.success_tol
            if recording:
                fval = _objective_from(w, y, b, m)
        else:
            fval = _objective_from(w, y, b, m)
            stop = fval <= config.residual_tol

        if recording:
            trajectory.append((it, dist, fval, None))
        if stop or it == config.max_iters:
            converged = stop
            iterations = it
            final_dist = dist
            break

        c = y * phase_unit(w)
        rhs = model.adjoint(c)
        z_new, info = cg(
            normal_op, rhs, x0=z, rtol=1e-10, atol=0.0, maxiter=ADM_CG_MAX_ITERS
        )
        if info != 0:
            rhs_norm = np.linalg.norm(rhs)
            res = np.linalg.norm(normal_apply(z_new) - rhs)
            rel = res / rhs_norm if rhs_norm > 0 else res
            if rel > ADM_RESIDUAL_CAP:
                raise IllConditionedSystem(
                    f"normal equations stalled at relative residual {rel:.3e} "
                    f"after {ADM_CG_MAX_ITERS} conjugate gradient iterations"
                )
        z = np.asarray(z_new, dtype=np.complex128)

    return SolveResult(
        z_hat=z,
        iterations=iterations,
        converged=converged,
        final_dist=final_dist,
        trajectory=trajectory,
    )
