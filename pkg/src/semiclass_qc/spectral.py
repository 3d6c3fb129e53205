"""Exact spectral objects of a dense unitary: trace series, characteristic
polynomial via the trace recurrence, the unitarity (resurgence) symmetry,
spectral density, eigenphases."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetError, InconsistencyError, InsufficientDataError, ValidationError

DENSE_DIAG_CAP = 512
MATRIX_POWER_CAP = 4096


@dataclass(frozen=True)
class TraceSeries:
    """tr U^t for t = 1..t_max; values[t-1] = tr U^t."""

    N: int
    values: tuple[complex, ...]

    def __post_init__(self):
        for t, v in enumerate(self.values, start=1):
            if abs(v) > self.N + 1e-8:
                raise ValidationError(f"|tr U^{t}| = {abs(v):.6f} exceeds N = {self.N}")

    def __len__(self):
        return len(self.values)

    def trace(self, t: int) -> complex:
        return self.values[t - 1]


@dataclass(frozen=True)
class CharPoly:
    """Coefficients beta_0..beta_N of det(I - x U)."""

    N: int
    beta: tuple[complex, ...]
    resurgence_residual: float | None = None

    def __post_init__(self):
        if len(self.beta) != self.N + 1:
            raise ValidationError("need N+1 coefficients")


def trace_powers(U: np.ndarray, t_max: int) -> TraceSeries:
    """tr U^t by repeated multiplication; cross-checked against eigenphases
    for N <= DENSE_DIAG_CAP (the two routes must agree to 1e-9)."""
    if t_max < 1:
        raise ValidationError("t_max must be >= 1")
    N = U.shape[0]
    if N > MATRIX_POWER_CAP:
        raise BudgetError(f"N = {N} exceeds matrix-power cap {MATRIX_POWER_CAP}")
    vals = []
    V = np.eye(N, dtype=complex)
    for _ in range(t_max):
        V = V @ U
        vals.append(complex(np.trace(V)))
    if N <= DENSE_DIAG_CAP:
        theta = eigenphases(U)
        for t in range(1, t_max + 1):
            alt = complex(np.sum(np.exp(1j * t * theta)))
            if abs(alt - vals[t - 1]) > 1e-9:
                raise InconsistencyError(
                    f"trace routes disagree at t={t}: {vals[t-1]} vs {alt}")
    return TraceSeries(N=N, values=tuple(vals))


def char_poly_from_traces(traces: TraceSeries, N: int, det_minus_U: complex | None = None) -> CharPoly:
    """Newton-type recurrence beta_k = -(1/k) sum_{t<=k} beta_{k-t} tr U^t.

    With traces up to ceil(N/2) and det(-U) given, the upper half is completed
    through the unitarity symmetry beta_{N-k} = det(-U) conj(beta_k).  When
    full traces are available the symmetry residual is reported.
    """
    if N < 1:
        raise ValidationError("N must be >= 1")
    half = (N + 1) // 2
    have = len(traces)
    if have < N and (have < half or det_minus_U is None):
        raise InsufficientDataError(
            f"need traces to t={N}, or to t={half} plus det(-U); have {have}")
    k_top = N if have >= N else half
    beta = [complex(1.0)]
    for k in range(1, k_top + 1):
        s = sum(beta[k - t] * traces.trace(t) for t in range(1, k + 1))
        beta.append(-s / k)
    residual = None
    if have >= N:
        d = det_minus_U if det_minus_U is not None else beta[N]  # beta_N = det(-U)
        residual = max(
            abs(beta[N - k] - d * np.conj(beta[k])) for k in range(0, N + 1)
        )
    else:
        full = list(beta) + [0j] * (N - k_top)
        for k in range(0, N // 2 + 1):
            full[N - k] = det_minus_U * np.conj(beta[k])
        beta = full
    return CharPoly(N=N, beta=tuple(beta), resurgence_residual=residual)


def char_poly_from_eigenphases(theta: np.ndarray) -> tuple[complex, ...]:
    """Coefficients of prod_k (1 - x e^{i theta_k}), lowest order first."""
    coeffs = np.array([1.0 + 0j])
    for th in theta:
        coeffs = np.convolve(coeffs, np.array([1.0, -np.exp(1j * th)]))
    return tuple(coeffs)


def det_minus_u(U: np.ndarray) -> complex:
    """det(-U) = (-1)^N det U, from eigenphases when feasible, else dense."""
    N = U.shape[0]
    if N <= DENSE_DIAG_CAP:
        theta = eigenphases(U)
        return complex((-1) ** N * np.exp(1j * np.sum(theta)))
    return complex(np.linalg.det(-U))


def spectral_density(traces: TraceSeries, theta_grid: np.ndarray, t_cutoff: int) -> np.ndarray:
    """d(theta) ~ N/2pi + (1/2pi) sum_{t<=cutoff} (e^{-i t theta} tr U^t + c.c.),
    using tr U^{-t} = conj(tr U^t)."""
    if t_cutoff > len(traces):
        raise ValidationError(f"cutoff {t_cutoff} exceeds available traces {len(traces)}")
    th = np.asarray(theta_grid, dtype=float)
    d = np.full(th.shape, traces.N / (2 * np.pi))
    for t in range(1, t_cutoff + 1):
        tr = traces.trace(t)
        d += (np.exp(-1j * t * th) * tr + np.exp(1j * t * th) * np.conj(tr)).real / (2 * np.pi)
    return d


def eigenphases(U: np.ndarray) -> np.ndarray:
    """Sorted angles theta_k in [0, 2pi) with eigenvalues e^{i theta_k}."""
    N = U.shape[0]
    if N > DENSE_DIAG_CAP:
        raise BudgetError(f"N = {N} exceeds dense-diagonalization cap {DENSE_DIAG_CAP}")
    lam = np.linalg.eigvals(U)
    return np.sort(np.angle(lam) % (2 * np.pi))
