"""Covariance-matrix algebra for multimode Gaussian states.

Quadratures are ordered (x1, p1, ..., xn, pn) and the vacuum carries shot
noise 1/2 (hbar = 1).  A state is a 2n x 2n covariance matrix plus an
optional mean vector; everything here is a pure function of those values.

The squeezing/energy parameter ``mu`` equals N_S + 1/2 for mean photon
number N_S per mode, so ``mu = 1/2`` is the vacuum.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, EnergyError, NumericError, PartitionError

SHOT_NOISE = 0.5

# Bona fide and fidelity-range slack.  Double-precision eigensolves on the
# matrices used here (up to ~40 x 40) stay below ~1e-12, so 1e-9 is margin.
BONA_FIDE_TOL = 1e-9
FIDELITY_RANGE_TOL = 1e-9

# States whose smallest symplectic eigenvalue sits this close to 1/2 are
# treated as pure; the fidelity then uses the exact overlap formula, which
# is stable where the general formula hits a square-root branch point.
PURITY_TOL = 1e-10

# Auxiliary-spectrum values within this band of 1/2 come from exactly-pure
# tensor factors (their true contribution is log 1 = 0); eigensolver noise
# inside the band would otherwise be amplified as sqrt(noise).
BRANCH_TOL = 1e-10

_EPS = float(np.finfo(float).eps)


def _scale_tol(base: float, scale: float) -> float:
    """Absolute tolerance for eigenvalues of a matrix with entries ~scale.

    States built at saturated correlations have zero analytic margin, and
    storing their CM in doubles already moves the critical eigenvalue by
    O(eps * scale^2) (the sensitivity is ~2*scale at the saturation point),
    so the slack must widen quadratically with the matrix scale.
    """
    return max(base, 64.0 * _EPS * scale * scale)


def symplectic_form(n: int) -> np.ndarray:
    """Symplectic form matching the interleaved (x1, p1, ...) ordering."""
    omega = np.zeros((2 * n, 2 * n))
    for k in range(n):
        omega[2 * k, 2 * k + 1] = 1.0
        omega[2 * k + 1, 2 * k] = -1.0
    return omega


def _spectrum_of(data: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues |eig(i Omega V)|, ascending, one per mode."""
    if not np.all(np.isfinite(data)):
        raise NumericError("covariance matrix has non-finite entries")
    n = data.shape[0] // 2
    eigs = np.linalg.eigvals(symplectic_form(n) @ data)
    vals = np.sort(np.abs(eigs))
    lo, hi = vals[::2], vals[1::2]
    scale = max(1.0, float(vals[-1]))
    if np.any(np.abs(hi - lo) > 1e-8 * scale):
        raise NumericError("symplectic spectrum does not come in +/- pairs")
    return (lo + hi) / 2.0


class CovMatrix:
    """Covariance matrix of an n-mode Gaussian state, optionally displaced.

    The matrix is symmetrised on construction and checked bona fide: every
    symplectic eigenvalue must be >= 1/2 - BONA_FIDE_TOL.  Instances are
    treated as immutable values.
    """

    __slots__ = ("n_modes", "data", "mean", "spectrum")

    def __init__(self, data, mean=None):
        data = np.array(data, dtype=float)
        if data.ndim != 2 or data.shape[0] != data.shape[1] or data.shape[0] % 2:
            raise DimensionError(f"covariance matrix must be 2n x 2n, got {data.shape}")
        n = data.shape[0] // 2
        data = 0.5 * (data + data.T)
        if mean is None:
            mean = np.zeros(2 * n)
        else:
            mean = np.array(mean, dtype=float)
            if mean.shape != (2 * n,):
                raise DimensionError(f"mean vector must have length {2 * n}, got {mean.shape}")
            if not np.all(np.isfinite(mean)):
                raise NumericError("mean vector has non-finite entries")
        spectrum = _spectrum_of(data)
        scale = max(1.0, float(np.max(np.abs(data))))
        if spectrum[0] < SHOT_NOISE - _scale_tol(BONA_FIDE_TOL, scale):
            raise NumericError(
                f"covariance matrix is not bona fide: min symplectic eigenvalue "
                f"{spectrum[0]:.12g} < 1/2"
            )
        self.n_modes = n
        self.data = data
        self.mean = mean
        self.spectrum = spectrum

    @property
    def is_pure(self) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.data))))
        return bool(self.spectrum[-1] <= SHOT_NOISE + _scale_tol(PURITY_TOL, scale))

    def __repr__(self):
        return f"CovMatrix(n_modes={self.n_modes}, pure={self.is_pure})"


def symplectic_spectrum(state: CovMatrix) -> np.ndarray:
    """Symplectic eigenvalues of a state, sorted ascending."""
    return state.spectrum.copy()


def vacuum_cm(n: int) -> CovMatrix:
    if n < 1:
        raise DimensionError("need at least one mode")
    return CovMatrix(SHOT_NOISE * np.eye(2 * n))


def coherent_cm(alphas) -> CovMatrix:
    """Product of coherent states |alpha_k> (vacuum CM, displaced means).

    With x = (a + a^dag)/sqrt(2) the mean of |alpha> is
    (sqrt(2) Re alpha, sqrt(2) Im alpha).
    """
    alphas = np.atleast_1d(np.asarray(alphas, dtype=complex))
    mean = np.empty(2 * len(alphas))
    mean[0::2] = np.sqrt(2.0) * alphas.real
    mean[1::2] = np.sqrt(2.0) * alphas.imag
    return CovMatrix(SHOT_NOISE * np.eye(2 * len(alphas)), mean)


def max_correlation(mu: float, m: int) -> float:
    """Largest |c| compatible with bona fide for an m-mode symmetric state."""
    return float(np.sqrt(mu * mu - 0.25) / (m - 1))


def ghz_cm(m: int, mu: float) -> CovMatrix:
    """CM of the m-mode bosonic GHZ state at maximal symmetric correlations.

    Diagonal blocks are mu * I, off-diagonal blocks diag(c, -c) with
    c = sqrt(mu^2 - 1/4) / (m - 1), which saturates the bona fide condition.
    For m = 2 this is the standard two-mode squeezed vacuum.
    """
    if m < 2:
        raise PartitionError(f"GHZ state needs at least 2 modes, got m={m}")
    if mu < SHOT_NOISE:
        raise EnergyError(f"squeezing mu must be >= 1/2, got {mu}")
    c = max_correlation(mu, m)
    gamma = np.diag([c, -c])
    data = np.zeros((2 * m, 2 * m))
    for j in range(m):
        data[2 * j : 2 * j + 2, 2 * j : 2 * j + 2] = mu * np.eye(2)
        for k in range(j + 1, m):
            data[2 * j : 2 * j + 2, 2 * k : 2 * k + 2] = gamma
            data[2 * k : 2 * k + 2, 2 * j : 2 * j + 2] = gamma
    return CovMatrix(data)


def tmsv_cm(mu: float) -> CovMatrix:
    """Two-mode squeezed vacuum with energy mu = N_S + 1/2 per mode."""
    return ghz_cm(2, mu)


def ghz_spectrum_closed_form(m: int, mu: float) -> np.ndarray:
    """Expected symplectic spectrum of ghz_cm, ascending.

    The saturated correlation pins one eigenvalue at exactly 1/2; the
    remaining (m-1)-fold degenerate value is sqrt(mu^2 - c^2).
    """
    c = max_correlation(mu, m)
    bulk = float(np.sqrt(mu * mu - c * c))
    return np.sort(np.array([0.5] + [bulk] * (m - 1)))


def tensor(*states: CovMatrix) -> CovMatrix:
    """Tensor product: block-diagonal CM, concatenated means."""
    if not states:
        raise DimensionError("tensor of zero states")
    total = sum(s.n_modes for s in states)
    data = np.zeros((2 * total, 2 * total))
    mean = np.zeros(2 * total)
    at = 0
    for s in states:
        w = 2 * s.n_modes
        data[at : at + w, at : at + w] = s.data
        mean[at : at + w] = s.mean
        at += w
    return CovMatrix(data, mean)


def _log_fid_mixed(v1: np.ndarray, v2: np.ndarray, vsum: np.ndarray, logdet_vsum: float) -> float:
    """log F0 for two mixed states via the auxiliary-matrix spectrum.

    Uses the general Gaussian fidelity in the form
    F0^2 = prod_k (2 w_k + sqrt(4 w_k^2 - 1)) / sqrt(det(V1 + V2))
    where w_k are the paired moduli of eig(V_aux Omega).
    """
    n = v1.shape[0] // 2
    omega = symplectic_form(n)
    try:
        inv_vsum = np.linalg.inv(vsum)
    except np.linalg.LinAlgError as exc:
        raise NumericError("singular V1 + V2 in fidelity") from exc
    vaux = omega.T @ inv_vsum @ (omega / 4.0 + v2 @ omega @ v1)
    eigs = np.linalg.eigvals(vaux @ omega)
    vals = np.sort(np.abs(eigs))
    lo, hi = vals[::2], vals[1::2]
    scale = max(1.0, float(vals[-1]))
    if np.any(np.abs(hi - lo) > 1e-7 * scale):
        raise NumericError("auxiliary spectrum does not pair up; inputs may not be bona fide")
    w = (lo + hi) / 2.0
    terms = np.zeros_like(w)
    mixed = w > 0.5 + _scale_tol(BRANCH_TOL, scale)
    wm = w[mixed]
    terms[mixed] = np.log(2.0 * wm + np.sqrt(np.maximum(4.0 * wm * wm - 1.0, 0.0)))
    return float(0.5 * np.sum(terms) - 0.25 * logdet_vsum)


def gaussian_fidelity(a: CovMatrix, b: CovMatrix) -> float:
    """Bures fidelity F(rho_a, rho_b) = ||sqrt(rho_a) sqrt(rho_b)||_1.

    Covers arbitrary displaced Gaussian states of equal mode count.  When
    either state is pure the exact overlap form
    F = det(V_a + V_b)^(-1/4) * exp(-delta^T (V_a+V_b)^(-1) delta / 4)
    is used; otherwise the general mixed-state formula.  The result is
    clamped to [0, 1]; an excursion beyond the 1e-9 tolerance raises.
    """
    if a.n_modes != b.n_modes:
        raise DimensionError(f"mode counts differ: {a.n_modes} vs {b.n_modes}")
    # canonical argument order makes the symmetry F(a,b) = F(b,a) exact,
    # and identical inputs return exactly 1
    key_a = (a.data.tobytes(), a.mean.tobytes())
    key_b = (b.data.tobytes(), b.mean.tobytes())
    if key_a == key_b:
        return 1.0
    if key_b < key_a:
        a, b = b, a
    vsum = a.data + b.data
    sign, logdet = np.linalg.slogdet(vsum)
    if sign <= 0:
        raise NumericError("det(V_a + V_b) not positive")
    if a.is_pure or b.is_pure:
        log_f = -0.25 * logdet
    else:
        log_f = _log_fid_mixed(a.data, b.data, vsum, logdet)
    delta = a.mean - b.mean
    if np.any(delta):
        log_f -= 0.25 * float(delta @ np.linalg.solve(vsum, delta))
    fid = float(np.exp(log_f))
    if not np.isfinite(fid) or fid > 1.0 + FIDELITY_RANGE_TOL or fid < -FIDELITY_RANGE_TOL:
        raise NumericError(f"fidelity {fid!r} outside [0, 1] beyond tolerance")
    return min(max(fid, 0.0), 1.0)
