"""Spectral initialization from magnitude measurements.

The initializer estimates the signal scale from the empirical second
moment of y and its direction from the leading eigenvector of

    Y = (1/m) A* diag(y^2) A,

whose expectation is ||x||^2 I + x x* under the random model, so the
top eigenvector aligns with x.  The eigenvector is found by power
iteration using only forward and adjoint applications.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateOperator, InvalidDimension, InvalidInput, InvalidParameter
from .operators import as_complex_vector, as_observations

DEFAULT_POWER_ITERS = 100
DEFAULT_POWER_REL_TOL = 1e-8


@dataclass(frozen=True)
class PowerResult:
    """Outcome of a power iteration.

    Attributes
    ----------
    eigvec : numpy.ndarray
        Unit-norm iterate after the final application.
    eigval : float
        Last Rayleigh quotient Re <v, apply(v)>.
    iterations : int
        Number of operator applications performed.
    rayleigh_history : tuple of float
        Rayleigh quotient at every iteration, in order.
    """

    eigvec: np.ndarray
    eigval: float
    iterations: int
    rayleigh_history: tuple


@dataclass(frozen=True)
class InitResult:
    """Spectral initializer output.

    Attributes
    ----------
    z0 : numpy.ndarray
        Initial point lam * eigvec.
    lam : float
        Scale estimate sqrt(mean(y^2)).
    eigvec : numpy.ndarray
        Unit leading eigenvector estimate.
    eigval_estimate : float
        Rayleigh quotient at the final iterate.
    power_iters_used : int
        Power iterations actually performed.
    """

    z0: np.ndarray
    lam: float
    eigvec: np.ndarray
    eigval_estimate: float
    power_iters_used: int


def norm_estimate(y):
    """Scale estimate sqrt(mean(y^2)) of ||x||."""
    y = as_observations(y)
    return float(np.sqrt(np.mean(y**2)))


def apply_Y(model, y, v):
    """One application of (1/m) A* diag(y^2) A to v."""
    m = model.shape[0]
    y = as_observations(y, m)
    w = model.forward(v)
    return model.adjoint((y * y) * w) / m


def power_method(apply, n, max_iters=DEFAULT_POWER_ITERS,
                 rel_tol=DEFAULT_POWER_REL_TOL, rng=None, start=None):
    """Power iteration for a Hermitian PSD operator given as a callable.

    Starts from ``start`` if given, otherwise from a random complex
    Gaussian vector drawn from ``rng``.  Stops after ``max_iters``
    applications or once the Rayleigh quotient changes by a relative
    amount below ``rel_tol``.

    Parameters
    ----------
    apply : callable
        Maps a length-n complex vector to another.
    n : int
        Dimension of the iterate.
    max_iters : int
        Application budget, >= 1.
    rel_tol : float
        Relative tolerance on successive Rayleigh quotients.
    rng : numpy.random.Generator or seed, optional
        Source for the random start.
    start : array_like, optional
        Explicit start vector, nonzero.

    Returns
    -------
    PowerResult

    Raises
    ------
    DegenerateOperator
        If the operator maps an iterate to (numerically) zero.
    """
    n = int(n)
    if n < 1:
        raise InvalidDimension(f"n must be >= 1, got {n}")
    if max_iters < 1:
        raise InvalidParameter(f"max_iters must be >= 1, got {max_iters}")
    if rel_tol < 0:
        raise InvalidParameter(f"rel_tol must be >= 0, got {rel_tol}")
    if start is not None:
        v = as_complex_vector(start, "start").copy()
        if v.shape[0] != n:
            raise InvalidDimension(f"start has length {v.shape[0]}, expected {n}")
    else:
        gen = np.random.default_rng(rng)
        v = gen.standard_normal(n) + 1j * gen.standard_normal(n)
    nv = np.linalg.norm(v)
    if nv == 0:
        raise InvalidInput("start vector is zero")
    v = v / nv

    history = []
    prev = None
    iters = 0
    tiny = np.finfo(np.float64).tiny
    for _ in range(max_iters):
        w = np.asarray(apply(v), dtype=np.complex128)
        if w.shape != v.shape:
            raise InvalidDimension("apply changed the vector length")
        nw = np.linalg.norm(w)
        if not np.isfinite(nw) or nw == 0:
            raise DegenerateOperator(
                "operator produced a zero or non-finite vector under power iteration"
            )
        rayleigh = float(np.vdot(v, w).real)
        history.append(rayleigh)
        v = w / nw
        iters += 1
        if prev is not None and abs(rayleigh - prev) <= rel_tol * max(abs(rayleigh), tiny):
            break
        prev = rayleigh
    return PowerResult(v, history[-1], iters, tuple(history))


def spectral_init(model, y, max_iters=DEFAULT_POWER_ITERS,
                  rel_tol=DEFAULT_POWER_REL_TOL, rng=None):
    """Spectral initial point for the measurement model and observations y.

    Parameters
    ----------
    model : operator with forward/adjoint and shape (m, n)
    y : array_like
        Observed magnitudes, length m.
    max_iters, rel_tol :
        Power iteration controls.
    rng : numpy.random.Generator or seed, optional
        Source for the power iteration start.

    Returns
    -------
    InitResult
    """
    m, n = model.shape
    y = as_observations(y, m)
    y_sq = y * y

    def op(v):
        return model.adjoint(y_sq * model.forward(v)) / m

    result = power_method(op, n, max_iters=max_iters, rel_tol=rel_tol, rng=rng)
    lam = float(np.sqrt(np.mean(y_sq)))
    z0 = lam * result.eigvec
    return InitResult(
        z0=z0,
        lam=lam,
        eigvec=result.eigvec,
        eigval_estimate=result.eigval,
        power_iters_used=result.iterations,
    )
