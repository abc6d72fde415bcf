"""Gaussian-smoothed weighting functions and the uniform-gap bound.

The smoothing kernel is the planar Gaussian density

    xi_s2(t) = exp(-|t|^2 / (2 s2)) / (2 pi s2),

and the weight applied to an observed magnitude t is

    zeta_s2(t) = 1 - exp(-|t|^2 / (2 s2)),

which downweights measurements near zero where the phase of the
residual is unreliable.  ``eta`` and ``nu`` are the companion profiles
whose Gaussian smoothings reproduce ``zeta`` exactly:

    E[eta_s2(t + s)] = zeta_s2(t),
    E[(t + s) nu_s2(t + s)] = t zeta_s2(t),    s ~ CN(0, 1).

``psi`` and its smoothing ``h_closed_form`` quantify how much a unit
phase can rotate under additive complex Gaussian noise.  All profile
functions accept scalars or arrays and require sigma_sq > 1/2 where
the definition involves 2 sigma_sq - 1.
"""

import numpy as np

from .errors import InvalidInput, InvalidParameter
from .operators import phase_unit

DEFAULT_SIGMA_SQ = 0.51


def _abs_sq(t):
    arr = np.asarray(t)
    if np.iscomplexobj(arr):
        return arr.real**2 + arr.imag**2
    return np.asarray(arr, dtype=np.float64) ** 2


def _require_sigma_sq(sigma_sq, lower, label):
    s2 = float(sigma_sq)
    if not s2 > lower:
        raise InvalidParameter(f"sigma_sq must be > {label}, got {sigma_sq}")
    return s2


def xi(t, sigma_sq):
    """Planar Gaussian density with total mass one, variance sigma_sq per plane."""
    s2 = _require_sigma_sq(sigma_sq, 0.0, "0")
    out = np.exp(-_abs_sq(t) / (2.0 * s2)) / (2.0 * np.pi * s2)
    return float(out) if np.ndim(t) == 0 else out


def zeta(t, sigma_sq=DEFAULT_SIGMA_SQ):
    """Weight profile 1 - exp(-|t|^2 / (2 sigma_sq)); requires sigma_sq > 1/2."""
    s2 = _require_sigma_sq(sigma_sq, 0.5, "1/2")
    out = -np.expm1(-_abs_sq(t) / (2.0 * s2))
    return float(out) if np.ndim(t) == 0 else out


def eta(t, sigma_sq=DEFAULT_SIGMA_SQ):
    """Profile whose CN(0,1) smoothing is zeta: E[eta(t + s)] = zeta(t).

    Explicitly eta(t) = 1 - (sigma_sq / (sigma_sq - 1/2)) exp(-|t|^2 / (2 sigma_sq - 1)).
    """
    s2 = _require_sigma_sq(sigma_sq, 0.5, "1/2")
    coeff = s2 / (s2 - 0.5)
    out = 1.0 - coeff * np.exp(-_abs_sq(t) / (2.0 * s2 - 1.0))
    return float(out) if np.ndim(t) == 0 else out


def nu(t, sigma_sq=DEFAULT_SIGMA_SQ):
    """Profile whose tilted smoothing is zeta: E[(t+s) nu(t+s)] = t zeta(t).

    Explicitly nu(t) = 1 - (4 sigma_sq^2 / (2 sigma_sq - 1)^2)
    exp(-|t|^2 / (2 sigma_sq - 1)).
    """
    s2 = _require_sigma_sq(sigma_sq, 0.5, "1/2")
    coeff = 4.0 * s2 * s2 / (2.0 * s2 - 1.0) ** 2
    out = 1.0 - coeff * np.exp(-_abs_sq(t) / (2.0 * s2 - 1.0))
    return float(out) if np.ndim(t) == 0 else out


def psi(t):
    """Squared conjugate phase, conj(t/|t|)^2, with psi(0) = 1."""
    unit = phase_unit(t)
    if np.ndim(t) == 0:
        return complex(np.conj(unit) ** 2)
    return np.conj(unit) ** 2


def h_closed_form(t):
    """CN(0,1) smoothing of psi at real t >= 0.

    Equals 1 - (1 - exp(-t^2)) / t^2 for t > 0 and 0 at t = 0.  Below
    t = 1e-4 the value is taken from the series
    exp(-t^2) (t^2/2 + t^4/3 + t^6/8), which avoids the cancellation in
    the closed form; the two branches agree to machine precision at the
    crossover.
    """
    arr = np.asarray(t, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise InvalidInput("t contains non-finite entries")
    if np.any(arr < 0):
        raise InvalidParameter("t must be nonnegative")
    flat = np.atleast_1d(arr)
    tsq = flat**2
    out = np.empty_like(flat)
    small = flat < 1e-4
    if np.any(small):
        u = tsq[small]
        out[small] = np.exp(-u) * (u / 2.0 + u * u / 3.0 + u**3 / 8.0)
    big = ~small
    if np.any(big):
        u = tsq[big]
        out[big] = 1.0 + np.expm1(-u) / u
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


class WeightingScheme:
    """Rule mapping observations y to per-measurement weights b.

    ``uniform`` sets b = 1.  ``gaussian`` sets b = zeta_sigma_sq(y),
    which requires sigma_sq > 1/2.
    """

    __slots__ = ("kind", "sigma_sq")

    def __init__(self, kind, sigma_sq=DEFAULT_SIGMA_SQ):
        if kind not in ("uniform", "gaussian"):
            raise InvalidParameter(f"unknown weighting kind {kind!r}")
        if kind == "gaussian":
            sigma_sq = _require_sigma_sq(sigma_sq, 0.5, "1/2")
        else:
            sigma_sq = float(sigma_sq)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "sigma_sq", sigma_sq)

    def __setattr__(self, name, value):
        raise AttributeError("WeightingScheme is immutable")

    def __reduce__(self):
        return (WeightingScheme, (self.kind, self.sigma_sq))

    def __eq__(self, other):
        if not isinstance(other, WeightingScheme):
            return NotImplemented
        return self.kind == other.kind and self.sigma_sq == other.sigma_sq

    def __hash__(self):
        return hash((self.kind, self.sigma_sq))

    def __repr__(self):
        return f"WeightingScheme(kind={self.kind!r}, sigma_sq={self.sigma_sq})"

    @classmethod
    def uniform(cls):
        return cls("uniform")

    @classmethod
    def gaussian_smoothed(cls, sigma_sq=DEFAULT_SIGMA_SQ):
        return cls("gaussian", sigma_sq)


def weights_from_observations(y, scheme):
    """Evaluate the scheme on observed magnitudes, returning b >= 0."""
    arr = np.asarray(y, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInput("y must be a nonempty 1-D real array")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise InvalidInput("y must be finite and nonnegative")
    if scheme.kind == "uniform":
        return np.ones_like(arr)
    return zeta(arr, scheme.sigma_sq)


def delta_infty(sigma_sq, epsilon, grid=(50.0, 1e-3)):
    """Uniform bound on (1 + 2 sigma_sq) |(1 + eps) h(t) - zeta_sigma_sq(t)|.

    Scans t over [0, t_max] with the given step and combines the grid
    maximum with the analytic tail bound (1 + 2 sigma_sq) * eps, which
    dominates for t beyond a few standard deviations where both h and
    zeta are within eps of one.

    Parameters
    ----------
    sigma_sq : float
        Smoothing variance, > 1/2.
    epsilon : float
        Amplification slack in [0, 1).
    grid : (float, float)
        Pair (t_max, step) describing the scan grid.

    Returns
    -------
    float
        The uniform gap bound.
    """
    s2 = _require_sigma_sq(sigma_sq, 0.5, "1/2")
    eps = float(epsilon)
    if not 0.0 <= eps < 1.0:
        raise InvalidParameter(f"epsilon must lie in [0, 1), got {epsilon}")
    t_max, step = float(grid[0]), float(grid[1])
    if t_max <= 0 or step <= 0 or step > t_max:
        raise InvalidParameter(f"bad grid spec {grid!r}")
    t = np.arange(0.0, t_max + step, step)
    gap = np.abs((1.0 + eps) * h_closed_form(t) - zeta(t, s2))
    scale = 1.0 + 2.0 * s2
    return float(max(scale * gap.max(), scale * eps))
