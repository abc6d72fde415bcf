"""Measurement operators for magnitude-only cyclic convolution.

Measurements have the form y = |a (*) x| where (*) is circular
convolution modulo m and the length-n signal x is zero padded to
length m.  Equivalently y = |A x| with A the first n columns of the
circulant matrix generated by the kernel a.  The convolutional
operator applies A and its adjoint in O(m log m) via length-m FFTs.
A dense operator wraps an explicit matrix; it covers the i.i.d.
comparison model and doubles as a brute-force oracle for the FFT path.

Conventions pinned here and relied on throughout the package:

* DFT: numpy's unnormalized forward transform, with the 1/m factor on
  the inverse.  Under this convention ``adjoint(w)`` computed as
  ``ifft(conj(fft(a)) * fft(w))[:n]`` satisfies <A z, w> = <z, A* w>
  exactly, not only up to scaling.
* Inner products are conjugate linear in the first argument,
  <x, z> = sum(conj(x) * z), matching ``np.vdot``.
* ``phase_unit(0) = 1``, extending u/|u| to all of C.
"""

import math

import numpy as np

from .errors import InvalidDimension, InvalidInput


def as_complex_vector(v, name="vector"):
    """Coerce to a 1-D complex128 array, rejecting empty or non-finite input.

    Parameters
    ----------
    v : array_like
        Input vector.
    name : str
        Label used in error messages.

    Returns
    -------
    numpy.ndarray
        1-D complex128 array.
    """
    arr = np.asarray(v, dtype=np.complex128)
    if arr.ndim != 1:
        raise InvalidDimension(f"{name} must be 1-D, got ndim={arr.ndim}")
    if arr.size == 0:
        raise InvalidDimension(f"{name} must be nonempty")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name} contains non-finite entries")
    return arr


def as_observations(y, m=None, name="y"):
    """Coerce to a 1-D nonnegative float64 array of magnitudes."""
    arr = np.asarray(y, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidDimension(f"{name} must be a nonempty 1-D real array")
    if m is not None and arr.shape[0] != m:
        raise InvalidDimension(f"{name} has length {arr.shape[0]}, expected {m}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name} contains non-finite entries")
    if np.any(arr < 0):
        raise InvalidInput(f"{name} contains negative magnitudes")
    return arr


def complex_gaussian(rng, shape):
    """Draw CN(0, 1) variates: (g1 + i g2) * sqrt(1/2) with g1, g2 ~ N(0, 1).

    Each entry has E|.|^2 = 1, with independent real and imaginary parts
    of variance 1/2.
    """
    out = 1j * rng.standard_normal(shape)
    out += rng.standard_normal(shape)
    out *= np.sqrt(0.5)
    return out


def phase_unit(u):
    """Entrywise phase u/|u|, with the convention phase_unit(0) = 1.

    Accepts scalars or arrays; scalars come back as python complex.
    """
    arr = np.asarray(u, dtype=np.complex128)
    mag = np.abs(arr)
    out = np.divide(arr, mag, out=np.ones_like(arr), where=mag > 0)
    if arr.ndim == 0:
        return complex(out)
    return out


def dist_mod_phase(z, x):
    """Distance min over unit phases c of ||z - c x||.

    Computed in closed form as
    sqrt(||z||^2 + ||x||^2 - 2 |<x, z>|), clipped at zero against
    roundoff.
    """
    z = as_complex_vector(z, "z")
    x = as_complex_vector(x, "x")
    if z.shape != x.shape:
        raise InvalidDimension(f"shape mismatch: {z.shape} vs {x.shape}")
    val = (
        np.vdot(z, z).real
        + np.vdot(x, x).real
        - 2.0 * abs(np.vdot(x, z))
    )
    return math.sqrt(max(val, 0.0))


def optimal_phase(z, x):
    """Unit phase c minimizing ||z - c x||, i.e. phase_unit(<x, z>).

    Returns 1 when the inner product vanishes, consistent with
    ``phase_unit``.
    """
    z = as_complex_vector(z, "z")
    x = as_complex_vector(x, "x")
    if z.shape != x.shape:
        raise InvalidDimension(f"shape mismatch: {z.shape} vs {x.shape}")
    return phase_unit(np.vdot(x, z))


class ConvolutionalMeasurement:
    """Magnitude-free linear part of the convolutional model.

    Applies A = C_a E where C_a is the m x m circulant matrix of the
    kernel (column l of C_a is the kernel cyclically shifted down by l)
    and E embeds C^n into C^m by zero padding.  Both directions cost two
    length-m FFTs; the kernel spectrum is computed once and cached.

    Parameters
    ----------
    kernel : array_like
        Length-m kernel a.
    signal_dim : int
        Signal length n, 1 <= n <= m.
    """

    def __init__(self, kernel, signal_dim):
        kernel = as_complex_vector(kernel, "kernel").copy()
        m = kernel.shape[0]
        n = int(signal_dim)
        if not 1 <= n <= m:
            raise InvalidDimension(
                f"signal_dim must satisfy 1 <= n <= m, got n={n}, m={m}"
            )
        spectrum = np.fft.fft(kernel)
        kernel.setflags(write=False)
        spectrum.setflags(write=False)
        self._kernel = kernel
        self._spectrum = spectrum
        self._m = m
        self._n = n

    @property
    def shape(self):
        """Pair (m, n)."""
        return (self._m, self._n)

    @property
    def kernel(self):
        """The kernel a (read-only view)."""
        return self._kernel

    @property
    def kernel_spectrum(self):
        """Cached DFT of the kernel (read-only view)."""
        return self._spectrum

    def forward(self, z):
        """Apply A: zero pad z to length m and circularly convolve with a."""
        z = as_complex_vector(z, "z")
        if z.shape[0] != self._n:
            raise InvalidDimension(
                f"z has length {z.shape[0]}, expected {self._n}"
            )
        padded = np.zeros(self._m, dtype=np.complex128)
        padded[: self._n] = z
        return np.fft.ifft(self._spectrum * np.fft.fft(padded))

    def adjoint(self, w):
        """Apply A*: correlate with the kernel, keep the first n entries."""
        w = np.asarray(w, dtype=np.complex128)
        if w.ndim != 1 or w.shape[0] != self._m:
            raise InvalidDimension(f"w must have length {self._m}")
        full = np.fft.ifft(np.conj(self._spectrum) * np.fft.fft(w))
        return full[: self._n].copy()

    def measure(self, x):
        """Magnitudes |A x| as a real array."""
        return np.abs(self.forward(x))


class DenseMeasurement:
    """Explicit m x n matrix measurement, A z = matrix @ z.

    Used for the i.i.d. Gaussian comparison model and as an oracle for
    the FFT-based operator.
    """

    def __init__(self, matrix):
        arr = np.asarray(matrix, dtype=np.complex128)
        if arr.ndim != 2 or arr.size == 0:
            raise InvalidDimension("matrix must be a nonempty 2-D array")
        if not np.all(np.isfinite(arr)):
            raise InvalidInput("matrix contains non-finite entries")
        arr = arr.copy()
        arr.setflags(write=False)
        self._matrix = arr

    @property
    def shape(self):
        return self._matrix.shape

    @property
    def matrix(self):
        """The underlying matrix (read-only view)."""
        return self._matrix

    def forward(self, z):
        z = as_complex_vector(z, "z")
        if z.shape[0] != self._matrix.shape[1]:
            raise InvalidDimension(
                f"z has length {z.shape[0]}, expected {self._matrix.shape[1]}"
            )
        return self._matrix @ z

    def adjoint(self, w):
        w = np.asarray(w, dtype=np.complex128)
        if w.ndim != 1 or w.shape[0] != self._matrix.shape[0]:
            raise InvalidDimension(f"w must have length {self._matrix.shape[0]}")
        return self._matrix.conj().T @ w

    def measure(self, x):
        return np.abs(self.forward(x))


def build_circulant_dense(a, n):
    """Materialize the first n columns of circ(a) as a DenseMeasurement.

    Column l holds the kernel cyclically shifted down by l entries, so
    the result agrees with ConvolutionalMeasurement(a, n) applied to any
    vector.  Intended for small sizes and cross-checks.
    """
    a = as_complex_vector(a, "kernel")
    m = a.shape[0]
    n = int(n)
    if not 1 <= n <= m:
        raise InvalidDimension(f"need 1 <= n <= m, got n={n}, m={m}")
    cols = np.empty((m, n), dtype=np.complex128)
    for shift in range(n):
        cols[:, shift] = np.roll(a, shift)
    return DenseMeasurement(cols)


def circulant_operator_norm(x, m):
    """Spectral norm of the m x m circulant matrix generated by pad(x).

    Equals the largest magnitude among the length-m DFT coefficients of
    the zero-padded signal.
    """
    x = as_complex_vector(x, "x")
    n = x.shape[0]
    m = int(m)
    if m < n:
        raise InvalidDimension(f"need m >= n, got m={m}, n={n}")
    padded = np.zeros(m, dtype=np.complex128)
    padded[:n] = x
    return float(np.max(np.abs(np.fft.fft(padded))))
