"""Monte Carlo checks of the expectation identities behind the analysis.

Scalar identities (Gaussian smoothings of the weight profiles, moments
of zeta) are estimated by sample means and scored with the usual
standard error; complex-valued estimates are scored on the worse of
the real and imaginary components.

Matrix identities are scored on the Frobenius distance between the
sample mean and the closed-form target.  That distance is a norm of a
near-zero-mean average, so it concentrates around a strictly positive
noise floor rather than zero; the check therefore compares it against
the plug-in floor sqrt(sum of entrywise variances / N) and uses a
leave-one-out jackknife standard error for the fluctuation around the
floor.  Sample matrices are regenerated from the seed for the jackknife
pass instead of being stored.

Deterministic phase inequalities are sampled densely and must hold with
zero violations up to a 1e-12 slack.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidDimension, InvalidInput, InvalidParameter
from .operators import as_complex_vector, complex_gaussian, phase_unit
from .weighting import (
    DEFAULT_SIGMA_SQ,
    delta_infty,
    eta,
    h_closed_form,
    nu,
    psi,
    xi,
    zeta,
)

MIN_SAMPLES = 10_000
Z_THRESHOLD = 4.0
INEQUALITY_SLACK = 1e-12
MAX_DENSE_DIM = 16


@dataclass(frozen=True)
class McCheckReport:
    """Scored outcome of one check.

    For scalar and matrix Monte Carlo checks, ``z_score`` is the
    discrepancy in standard errors and ``passed`` means z <= 4.  For
    deterministic inequality checks, ``estimate`` holds the worst margin
    observed, ``standard_error`` is 0, and ``passed`` means no sample
    violated the inequality beyond the slack.
    """

    name: str
    estimate: object
    target: object
    standard_error: float
    z_score: float
    passed: bool

    def to_dict(self):
        def enc(v):
            if isinstance(v, complex):
                return [v.real, v.imag]
            return float(v)

        return {
            "name": self.name,
            "estimate": enc(self.estimate),
            "target": enc(self.target),
            "se": float(self.standard_error),
            "z_score": float(self.z_score),
            "pass": bool(self.passed),
        }


def _require_samples(count):
    count = int(count)
    if count < MIN_SAMPLES:
        raise InvalidParameter(f"need at least {MIN_SAMPLES} samples, got {count}")
    return count


def _ratio(diff, se):
    if se == 0.0:
        return 0.0 if diff == 0.0 else math.inf
    return diff / se


def _scalar_report(name, samples, target):
    n = samples.size
    if np.iscomplexobj(samples):
        est_re = float(np.mean(samples.real))
        est_im = float(np.mean(samples.imag))
        se_re = float(np.std(samples.real, ddof=1)) / math.sqrt(n)
        se_im = float(np.std(samples.imag, ddof=1)) / math.sqrt(n)
        target = complex(target)
        z = max(
            _ratio(abs(est_re - target.real), se_re),
            _ratio(abs(est_im - target.imag), se_im),
        )
        estimate = complex(est_re, est_im)
        se = max(se_re, se_im)
    else:
        estimate = float(np.mean(samples))
        se = float(np.std(samples, ddof=1)) / math.sqrt(n)
        target = float(target)
        z = _ratio(abs(estimate - target), se)
    return McCheckReport(name, estimate, target, se, z, z <= Z_THRESHOLD)


def mc_psi_smoothing(t, n_samples=1_000_000, seed=0):
    """Check E[psi(t + s)] = h(t) for s ~ CN(0,1) at real t >= 0."""
    t = float(t)
    if t < 0:
        raise InvalidParameter(f"t must be >= 0, got {t}")
    n = _require_samples(n_samples)
    rng = np.random.default_rng(seed)
    samples = psi(t + complex_gaussian(rng, n))
    return _scalar_report(f"psi_smoothing[t={t:g}]", samples, complex(h_closed_form(t)))


def mc_xi_smoothing(t, sigma_sq, n_samples=1_000_000, seed=0):
    """Check E[xi_s2(t + s)] = xi_{s2 + 1/2}(t) for s ~ CN(0,1)."""
    n = _require_samples(n_samples)
    rng = np.random.default_rng(seed)
    samples = xi(complex(t) + complex_gaussian(rng, n), sigma_sq)
    return _scalar_report(
        f"xi_smoothing[t={t:g},sigma_sq={sigma_sq:g}]",
        samples,
        xi(t, float(sigma_sq) + 0.5),
    )


def mc_eta_smoothing(t, sigma_sq=DEFAULT_SIGMA_SQ, n_samples=1_000_000, seed=0):
    """Check E[eta_s2(t + s)] = zeta_s2(t) for s ~ CN(0,1)."""
    n = _require_samples(n_samples)
    rng = np.random.default_rng(seed)
    samples = eta(complex(t) + complex_gaussian(rng, n), sigma_sq)
    return _scalar_report(
        f"eta_smoothing[t={t:g},sigma_sq={sigma_sq:g}]",
        samples,
        zeta(t, sigma_sq),
    )


def mc_nu_tilt(t, sigma_sq=DEFAULT_SIGMA_SQ, n_samples=1_000_000, seed=0):
    """Check E[(t + s) nu_s2(t + s)] = t zeta_s2(t) for s ~ CN(0,1)."""
    n = _require_samples(n_samples)
    rng = np.random.default_rng(seed)
    shifted = complex(t) + complex_gaussian(rng, n)
    samples = shifted * nu(shifted, sigma_sq)
    return _scalar_report(
        f"nu_tilt[t={t:g},sigma_sq={sigma_sq:g}]",
        samples,
        complex(t) * zeta(t, sigma_sq),
    )


def mc_zeta_moments(sigma_sq=DEFAULT_SIGMA_SQ, n_samples=1_000_000, seed=0):
    """Check E[zeta(s)] and E[|s|^2 zeta(s)] for s ~ CN(0,1).

    Since |s|^2 is a unit-mean exponential, the closed forms are
    E[zeta(s)] = 1/(2 s2 + 1) and
    E[|s|^2 zeta(s)] = (4 s2 + 1)/(2 s2 + 1)^2.

    Returns
    -------
    (McCheckReport, McCheckReport)
    """
    s2 = float(sigma_sq)
    n = _require_samples(n_samples)
    rng = np.random.default_rng(seed)
    s = complex_gaussian(rng, n)
    zs = zeta(s, s2)
    mean_target = 1.0 / (2.0 * s2 + 1.0)
    second_target = (4.0 * s2 + 1.0) / (2.0 * s2 + 1.0) ** 2
    rep_mean = _scalar_report(f"zeta_mean[sigma_sq={s2:g}]", zs, mean_target)
    rep_second = _scalar_report(
        f"zeta_second_moment[sigma_sq={s2:g}]",
        (s.real**2 + s.imag**2) * zs,
        second_target,
    )
    return rep_mean, rep_second


class _FrobeniusCheck:
    """Two-pass Frobenius-distance scorer for a matrix mean.

    Pass 1 accumulates the entrywise sum and sum of squared magnitudes;
    pass 2 revisits the same samples to form leave-one-out distances for
    the jackknife standard error.
    """

    def __init__(self, name, target):
        self.name = name
        self.target = np.asarray(target, dtype=np.complex128)
        self.count = 0
        self.acc = np.zeros_like(self.target)
        self.acc_sq = np.zeros(self.target.shape, dtype=np.float64)
        self._loo_count = 0
        self._theta_sum = 0.0
        self._theta_sq_sum = 0.0

    def add(self, batch):
        self.acc += batch.sum(axis=0)
        self.acc_sq += (batch.real**2 + batch.imag**2).sum(axis=0)
        self.count += batch.shape[0]

    def add_leave_one_out(self, batch):
        rest = (self.acc[None, :, :] - batch) / (self.count - 1)
        diff = rest - self.target[None, :, :]
        theta = np.sqrt((diff.real**2 + diff.imag**2).sum(axis=(1, 2)))
        self._theta_sum += float(theta.sum())
        self._theta_sq_sum += float((theta**2).sum())
        self._loo_count += batch.shape[0]

    def report(self):
        n = self.count
        if n < 2 or self._loo_count != n:
            raise InvalidInput("jackknife pass incomplete")
        mean = self.acc / n
        dist = float(np.linalg.norm(mean - self.target))
        entry_var = np.clip(self.acc_sq / n - (mean.real**2 + mean.imag**2), 0.0, None)
        floor = math.sqrt(float(entry_var.sum()) / n)
        theta_bar = self._theta_sum / n
        ss = max(self._theta_sq_sum - n * theta_bar * theta_bar, 0.0)
        se = math.sqrt((n - 1) / n * ss)
        z = _ratio(dist - floor, se)
        passed = dist <= floor + Z_THRESHOLD * se or dist == 0.0
        return McCheckReport(self.name, dist, floor, se, z, passed)


def _run_matrix_checks(checks, batches_for):
    """Drive the two passes: ``batches_for`` maps a pass index to an iterator
    yielding one tuple of (k, n, n) stacks per chunk, aligned with ``checks``."""
    for batch_tuple in batches_for():
        for check, batch in zip(checks, batch_tuple):
            check.add(batch)
    for batch_tuple in batches_for():
        for check, batch in zip(checks, batch_tuple):
            check.add_leave_one_out(batch)
    return tuple(check.report() for check in checks)


def _chunk_sizes(total, chunk):
    sizes = [chunk] * (total // chunk)
    if total % chunk:
        sizes.append(total % chunk)
    return sizes


def mc_fourth_moment(x, n_samples=200_000, seed=0):
    """Check the rank-one fourth-moment identities of a ~ CN(0, I_n):

        E[|<a, x>|^2 a a*] = x x* + ||x||^2 I,
        E[<a, x>^2 a a^T] = 2 x x^T (no conjugations).

    Returns
    -------
    (McCheckReport, McCheckReport)
    """
    x = as_complex_vector(x, "x")
    n = x.shape[0]
    if n > MAX_DENSE_DIM:
        raise InvalidDimension(f"n must be <= {MAX_DENSE_DIM} for dense checks")
    total = _require_samples(n_samples)
    norm_sq = float(np.vdot(x, x).real)
    target_h = np.outer(x, x.conj()) + norm_sq * np.eye(n)
    target_t = 2.0 * np.outer(x, x)
    chunk = max(1, 4_000_000 // (n * n))
    sizes = _chunk_sizes(total, chunk)

    def batches_for():
        rng = np.random.default_rng(seed)
        for k in sizes:
            a = complex_gaussian(rng, (k, n))
            inner = a.conj() @ x
            herm = np.einsum("k,ki,kj->kij", np.abs(inner) ** 2, a, a.conj())
            trans = np.einsum("k,ki,kj->kij", inner**2, a, a)
            yield herm, trans

    checks = (
        _FrobeniusCheck(f"fourth_moment_hermitian[n={n}]", target_h),
        _FrobeniusCheck(f"fourth_moment_transpose[n={n}]", target_t),
    )
    return _run_matrix_checks(checks, batches_for)


def _padded_identity_spectrum(m, n):
    embed = np.zeros((m, n), dtype=np.complex128)
    embed[np.arange(n), np.arange(n)] = 1.0
    return np.fft.fft(embed, axis=0)


def _row_batches(x, m, sizes, seed):
    """Yield (k, m, n) stacks of measurement matrices A and the complex
    values (A x) for kernels drawn CN(0, I_m), via batched FFTs."""
    x = np.asarray(x, dtype=np.complex128)
    n = x.shape[0]
    padded = np.zeros(m, dtype=np.complex128)
    padded[:n] = x
    x_hat = np.fft.fft(padded)
    embed_hat = _padded_identity_spectrum(m, n)

    def generate():
        rng = np.random.default_rng(seed)
        for k in sizes:
            g_hat = np.fft.fft(complex_gaussian(rng, (k, m)), axis=1)
            vals = np.fft.ifft(g_hat * x_hat[None, :], axis=1)
            mats = np.fft.ifft(
                g_hat[:, :, None] * embed_hat[None, :, :], axis=1
            )
            yield mats, vals

    return generate


def mc_Y_expectation(x, m, n_kernels=100_000, seed=0):
    """Check E[(1/m) A* diag(|A x|^2) A] = x x* + ||x||^2 I over random kernels."""
    x = as_complex_vector(x, "x")
    n = x.shape[0]
    if n > MAX_DENSE_DIM:
        raise InvalidDimension(f"n must be <= {MAX_DENSE_DIM} for dense checks")
    m = int(m)
    if m < n:
        raise InvalidDimension(f"need m >= n, got m={m}, n={n}")
    total = _require_samples(n_kernels)
    norm_sq = float(np.vdot(x, x).real)
    target = np.outer(x, x.conj()) + norm_sq * np.eye(n)
    chunk = max(1, 4_000_000 // (m * n))
    sizes = _chunk_sizes(total, chunk)
    generate = _row_batches(x, m, sizes, seed)

    def batches_for():
        for mats, vals in generate():
            w = vals.real**2 + vals.imag**2
            yield (np.einsum("kmi,km,kmj->kij", mats.conj(), w, mats) / m,)

    checks = (_FrobeniusCheck(f"Y_expectation[n={n},m={m}]", target),)
    return _run_matrix_checks(checks, batches_for)[0]


def mc_M_expectation(x, sigma_sq=DEFAULT_SIGMA_SQ, m=64, n_kernels=100_000, seed=0):
    """Check the weighted curvature identities over random kernels:

        E[M] = P_perp + ((1 + 4 s2)/(1 + 2 s2)) x x*,
        E[P_perp M P_perp] = P_perp,

    where M = ((2 s2 + 1)/m) A* diag(zeta_s2(|A x|)) A and P_perp
    projects onto the orthogonal complement of the unit vector x.

    Returns
    -------
    (McCheckReport, McCheckReport)
    """
    x = as_complex_vector(x, "x")
    n = x.shape[0]
    if n > MAX_DENSE_DIM:
        raise InvalidDimension(f"n must be <= {MAX_DENSE_DIM} for dense checks")
    norm = float(np.linalg.norm(x))
    if abs(norm - 1.0) > 1e-9:
        raise InvalidParameter("x must be a unit vector")
    s2 = float(sigma_sq)
    if not s2 > 0.5:
        raise InvalidParameter(f"sigma_sq must be > 1/2, got {sigma_sq}")
    m = int(m)
    if m < n:
        raise InvalidDimension(f"need m >= n, got m={m}, n={n}")
    total = _require_samples(n_kernels)
    proj_perp = np.eye(n) - np.outer(x, x.conj())
    target_m = proj_perp + ((1.0 + 4.0 * s2) / (1.0 + 2.0 * s2)) * np.outer(x, x.conj())
    scale = (2.0 * s2 + 1.0) / m
    chunk = max(1, 4_000_000 // (m * n))
    sizes = _chunk_sizes(total, chunk)
    generate = _row_batches(x, m, sizes, seed)

    def batches_for():
        for mats, vals in generate():
            w = zeta(np.abs(vals), s2)
            mats_m = scale * np.einsum("kmi,km,kmj->kij", mats.conj(), w, mats)
            mats_h = proj_perp[None] @ mats_m @ proj_perp[None]
            yield mats_m, mats_h

    checks = (
        _FrobeniusCheck(f"M_expectation[n={n},m={m},sigma_sq={s2:g}]", target_m),
        _FrobeniusCheck(f"H_expectation[n={n},m={m},sigma_sq={s2:g}]", proj_perp),
    )
    return _run_matrix_checks(checks, batches_for)


def check_phase_diff_inequality(rho, n_samples=1_000_000, seed=0):
    """Check |phase_unit(z' + z) - phase_unit(z')| against its bound.

    The bound is 2 . 1{|z| >= rho |z'|} + |Im(z / z')| / (1 - rho) for
    0 < rho < 1.  Samples are complex Gaussian pairs with spread scales;
    a handful of deterministic edge probes (z = 0, aligned pairs) are
    appended.  Passing requires zero violations beyond a 1e-12 slack.
    """
    rho = float(rho)
    if not 0.0 < rho < 1.0:
        raise InvalidParameter(f"rho must lie in (0, 1), got {rho}")
    n = _require_samples(n_samples)
    rng = np.random.default_rng(seed)
    z_prime = complex_gaussian(rng, n)
    z = complex_gaussian(rng, n) * np.exp(rng.uniform(-3.0, 3.0, n))
    z_prime = np.concatenate([z_prime, [1.0 + 0j, 1.0 + 0j, 2.0 - 1j]])
    z = np.concatenate([z, [0.0 + 0j, 3.0 + 0j, 4.0 - 2j]])
    keep = np.abs(z_prime) > 0
    z_prime = z_prime[keep]
    z = z[keep]
    lhs = np.abs(phase_unit(z_prime + z) - phase_unit(z_prime))
    indicator = (np.abs(z) >= rho * np.abs(z_prime)).astype(np.float64)
    rhs = 2.0 * indicator + np.abs((z / z_prime).imag) / (1.0 - rho)
    margin = rhs - lhs
    worst = float(margin.min())
    violations = int(np.count_nonzero(margin < -INEQUALITY_SLACK))
    return McCheckReport(
        f"phase_diff_inequality[rho={rho:g}]",
        worst,
        0.0,
        0.0,
        0.0,
        violations == 0,
    )


def check_phase_approx_inequality(rho, n_samples=1_000_000, seed=0):
    """Check the second-order phase linearization bound on |z| <= rho < 1:

        |1 - phase_unit(1 + z) + i Im(z)| <= (2 - rho)/(1 - rho)^2 |z|^2.

    Samples are drawn uniformly on the disk of radius rho; z = 0 is
    included.  Passing requires zero violations beyond a 1e-12 slack.
    """
    rho = float(rho)
    if not 0.0 < rho < 1.0:
        raise InvalidParameter(f"rho must lie in (0, 1), got {rho}")
    n = _require_samples(n_samples)
    rng = np.random.default_rng(seed)
    radius = rho * np.sqrt(rng.uniform(0.0, 1.0, n))
    angle = rng.uniform(0.0, 2.0 * np.pi, n)
    z = radius * np.exp(1j * angle)
    z = np.concatenate([z, [0.0 + 0j, rho + 0j, -rho + 0j, 1j * rho]])
    lhs = np.abs(1.0 - phase_unit(1.0 + z) + 1j * z.imag)
    rhs = (2.0 - rho) / (1.0 - rho) ** 2 * (z.real**2 + z.imag**2)
    margin = rhs - lhs
    worst = float(margin.min())
    violations = int(np.count_nonzero(margin < -INEQUALITY_SLACK))
    return McCheckReport(
        f"phase_approx_inequality[rho={rho:g}]",
        worst,
        0.0,
        0.0,
        0.0,
        violations == 0,
    )


def dense_leading_eigenpair(matrix):
    """Leading eigenpair of a Hermitian matrix by full diagonalization.

    Serves as the oracle for the matrix-free power iteration.  Raises
    InvalidInput if the matrix is not Hermitian to working precision.
    """
    arr = np.asarray(matrix, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.size == 0:
        raise InvalidDimension("matrix must be square and nonempty")
    scale = max(float(np.linalg.norm(arr)), 1.0)
    if float(np.linalg.norm(arr - arr.conj().T)) > 1e-10 * scale:
        raise InvalidInput("matrix is not Hermitian")
    evals, evecs = np.linalg.eigh(arr)
    return evecs[:, -1].copy(), float(evals[-1])


def _unit_vector(rng, n):
    v = complex_gaussian(rng, n)
    return v / np.linalg.norm(v)


def run_all_checks(seed=0, scalar_samples=1_000_000, kernel_samples=100_000):
    """Run the full identity suite and return the list of reports.

    The suite covers the scalar smoothing identities at several
    arguments, the zeta moments, the dense fourth-moment identities,
    the spectral and curvature matrix identities under the random
    kernel model, the uniform gap bound at the default parameters, and
    both deterministic phase inequalities.
    """
    seed_rng = np.random.default_rng(seed)

    def next_seed():
        return int(seed_rng.integers(0, 2**63))

    reports = []
    for t in (0.0, 0.25, 1.0, 2.5):
        reports.append(mc_psi_smoothing(t, scalar_samples, next_seed()))
    reports.append(mc_xi_smoothing(1.0, 1.0, scalar_samples, next_seed()))
    reports.append(mc_eta_smoothing(1.0, DEFAULT_SIGMA_SQ, scalar_samples, next_seed()))
    reports.append(mc_nu_tilt(1.0, DEFAULT_SIGMA_SQ, scalar_samples, next_seed()))
    for s2 in (DEFAULT_SIGMA_SQ, 1.0):
        reports.extend(mc_zeta_moments(s2, scalar_samples, next_seed()))

    x8 = _unit_vector(seed_rng, 8)
    reports.extend(mc_fourth_moment(x8, max(kernel_samples, MIN_SAMPLES), next_seed()))
    reports.append(mc_Y_expectation(x8, 64, kernel_samples, next_seed()))
    reports.extend(mc_M_expectation(x8, DEFAULT_SIGMA_SQ, 64, kernel_samples, next_seed()))

    gap = delta_infty(DEFAULT_SIGMA_SQ, 0.2)
    reports.append(
        McCheckReport("delta_infty[sigma_sq=0.51,eps=0.2]", gap, 0.405, 0.0, 0.0, gap <= 0.405)
    )

    reports.append(check_phase_diff_inequality(0.5, scalar_samples, next_seed()))
    reports.append(check_phase_approx_inequality(0.5, scalar_samples, next_seed()))
    return reports
