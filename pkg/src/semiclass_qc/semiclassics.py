"""Semiclassical trace formula, orbit scaling constants, action extraction
over N, and cat-map period functions.

The trace sum over period-t orbits is

    tau_t = sum_p A_p e^{i phi_p},
    A_p = t_p / |det(I - M_p^r)|^{1/2},
    phi_p = r (2 pi N S_p - nu_p pi / 2),

with each distinct orbit counted once (the t_p factor accounts for its
cyclic points).  For quantizable cat matrices the sum reproduces tr U^t to
machine precision once the per-step Maslov constant is calibrated.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .errors import (BudgetError, InconsistencyError, ResolutionError,
                     UnsupportedModelError, ValidationError)
from .maps import BakerMap, CatMap, CatMatrix, MapModel
from .orbits import enumerate_periodic_orbits, orbit_invariants
from .quantize import quantize, quantize_cat
from .spectral import eigenphases, trace_powers


def worker_count() -> int:
    env = os.environ.get("SEMICLASS_QC_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


@dataclass(frozen=True)
class ScalingConstants:
    """Orbit-growth and amplitude-bound constants for the orbit-sum pipeline.

    lambda_: codeword growth rate (ln 2 for the full binary shift)
    Lambda: amplitude bound exponent, A_p <= e^{-Lambda t} on the enumerated set
    mu: Lambda - lambda_/2
    kappa: fixed-point LSB of the log-amplitude register (x_max / (2^bits - 1))
    x_max: largest encoded value -(ln A_p + Lambda t)
    """

    lambda_: float
    Lambda: float
    mu: float
    kappa: float
    x_max: float
    bits: int


@dataclass(frozen=True)
class TraceReport:
    N: int
    t: int
    exact: complex
    semiclassical: complex
    quantum_estimate: complex | None = None

    @property
    def abs_defect(self) -> float:
        return abs(self.semiclassical - self.exact)

    @property
    def rel_defect(self) -> float:
        mag = abs(self.exact)
        return self.abs_defect / mag if mag > 0 else math.inf


@dataclass(frozen=True)
class PeriodRecord:
    N: int
    g: int
    n: int
    phi: float
    lattice_residual: float | None

    def __post_init__(self):
        if self.n * 2 != self.g and self.n != self.g and self.n != 2 * self.g:
            raise InconsistencyError(f"n/g = {self.n}/{self.g} outside {{1/2, 1, 2}}")


def semiclassical_trace(model: MapModel, t: int, N: int) -> complex:
    """tau_t from the enumerated period-t orbits."""
    if not model.supports_orbits:
        raise UnsupportedModelError(f"no orbit enumeration for {model.kind!r} maps")
    tau = 0j
    for orb in enumerate_periodic_orbits(model, t):
        o = orbit_invariants(model, orb, N)
        tau += o.A_p * np.exp(1j * o.phi_p)
    return complex(tau)


def calibrate_maslov(model: MapModel, N_ref: int, t_ref: int = 1) -> int:
    """Pick the per-step Maslov constant in {0,1,2,3} minimizing
    |tau_{t_ref} - tr U^{t_ref}| at the reference dimension."""
    U = quantize(model, N_ref)
    target = trace_powers(U, t_ref).trace(t_ref)
    best = None
    for step in range(4):
        m = replace(model, maslov_step=step)
        d = abs(semiclassical_trace(m, t_ref, N_ref) - target)
        if best is None or d < best[1]:
            best = (step, d)
    return best[0]


def scaling_constants(model: MapModel, t_max: int, bits: int = 8) -> ScalingConstants:
    """Constants from the enumerated orbits with t <= t_max."""
    if not model.supports_orbits:
        raise UnsupportedModelError(f"no orbit enumeration for {model.kind!r} maps")
    if t_max < 1:
        raise ValidationError("t_max must be >= 1")
    lam = math.log(2)  # full binary shift for both enumerable families
    amps: list[tuple[int, float]] = []
    for t in range(1, t_max + 1):
        for orb in enumerate_periodic_orbits(model, t):
            o = orbit_invariants(model, orb, N=1)
            amps.append((t, o.A_p))
    if not amps:
        raise ValidationError("empty orbit set")
    Lambda = min(-math.log(A) / t for t, A in amps)
    x_max = max(-math.log(A) - Lambda * t for t, A in amps)
    kappa = x_max / (2 ** bits - 1) if x_max > 0 else 1.0 / (2 ** bits - 1)
    return ScalingConstants(lambda_=lam, Lambda=Lambda, mu=Lambda - lam / 2,
                            kappa=kappa, x_max=x_max, bits=bits)


def _trace_for_dimension(model: MapModel, t: int, N: int) -> complex:
    try:
        U = quantize(model, N)
    except Exception:
        return 0j
    V = np.linalg.matrix_power(U, t)
    return complex(np.trace(V))


def action_spectrum(model: MapModel, t: int, N_max: int,
                    threshold_factor: float = 3.0) -> list[tuple[float, float]]:
    """Fourier transform of {tr U_N^t : 0 <= N < N_max} over N.

    Returns (frequency, weight) peaks with frequency read as action mod 1.
    Undefined slots (N = 0; odd N for the baker) are zero-filled; a flat
    window is used.  Peaks are local maxima above threshold_factor x median,
    deduplicated within +-2 bins of a stronger peak.
    """
    if N_max < 8:
        raise ResolutionError("N_max < 8 cannot resolve actions")
    Ns = list(range(1, N_max))
    if isinstance(model, BakerMap):
        Ns = [N for N in Ns if N % 2 == 0]
    series = np.zeros(N_max, dtype=complex)

    def fill(N):
        series[N] = _trace_for_dimension(model, t, N)

    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        list(pool.map(fill, Ns))
    F = np.fft.fft(series)
    mag = np.abs(F)
    nonzero = len(Ns)
    med = float(np.median(mag))
    peaks = []
    for i in range(N_max):
        if mag[i] <= threshold_factor * med:
            continue
        if mag[i] >= mag[(i - 1) % N_max] and mag[i] >= mag[(i + 1) % N_max]:
            peaks.append((i, mag[i]))
    peaks.sort(key=lambda x: -x[1])
    kept: list[tuple[int, float]] = []
    for i, m in peaks:
        if all(min(abs(i - j), N_max - abs(i - j)) > 2 for j, _ in kept):
            kept.append((i, m))
    return [(i / N_max, m / nonzero) for i, m in kept]


def _mat_mod(A, B, mod):
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(2)) % mod for j in range(2))
        for i in range(2)
    )


def classical_period(M: CatMatrix, N: int, budget: int = 1_000_000) -> int:
    """Smallest g with M^g = I (mod N)."""
    if N < 2:
        raise ValidationError("N must be >= 2")
    I = ((1, 0), (0, 1))
    base = tuple(tuple(v % N for v in row) for row in M.rows())
    A = base
    for g in range(1, budget + 1):
        if A == I:
            return g
        A = _mat_mod(A, base, N)
    raise BudgetError(f"no classical period found within {budget} powers")


def quantum_period(M: CatMatrix, N: int, budget: int = 1_000_000) -> int:
    """Smallest n with M^n = I (mod N) for odd N; for even N the off-diagonal
    entries must additionally vanish mod 2N."""
    if N < 2:
        raise ValidationError("N must be >= 2")
    base = tuple(tuple(v % (2 * N) for v in row) for row in M.rows())
    A = base
    for n in range(1, budget + 1):
        if N % 2 == 1:
            if all((A[i][j] - (i == j)) % N == 0 for i in range(2) for j in range(2)):
                return n
        else:
            if (A[0][0] - 1) % N == 0 and (A[1][1] - 1) % N == 0 \
                    and A[0][1] % (2 * N) == 0 and A[1][0] % (2 * N) == 0:
                return n
        A = _mat_mod(A, base, 2 * N)
    raise BudgetError(f"no quantum period found within {budget} powers")


def period_functions(M: CatMatrix, N: int, check_eigenphases: bool = True,
                     budget: int = 1_000_000) -> PeriodRecord:
    """Classical and quantum period functions plus the eigenphase-lattice data.

    phi is extracted numerically as arg((U^n)_00) after verifying that U^n is
    proportional to the identity; the lattice residual is the largest distance
    of n*theta_j - phi from 2 pi Z.
    """
    g = classical_period(M, N, budget)
    n = quantum_period(M, N, budget)
    phi = 0.0
    residual = None
    if check_eigenphases:
        U = quantize_cat(M, N)
        Un = np.linalg.matrix_power(U, n)
        phi = float(np.angle(Un[0, 0]))
        dev = np.abs(Un - Un[0, 0] * np.eye(N)).max()
        if dev > 1e-8:
            raise InconsistencyError(f"U^n not proportional to identity: deviation {dev:.2e}")
        theta = eigenphases(U)
        residual = float(np.abs(np.exp(1j * (n * theta - phi)) - 1).max())
    return PeriodRecord(N=N, g=g, n=n, phi=phi % (2 * np.pi), lattice_residual=residual)


def trace_report(model: MapModel, N: int, t_values: list[int],
                 quantum_estimates: dict[int, complex] | None = None) -> list[TraceReport]:
    """Per-t comparison of exact and semiclassical traces."""
    U = quantize(model, N)
    series = trace_powers(U, max(t_values))
    out = []
    for t in t_values:
        out.append(TraceReport(
            N=N, t=t,
            exact=series.trace(t),
            semiclassical=semiclassical_trace(model, t, N),
            quantum_estimate=(quantum_estimates or {}).get(t),
        ))
    return out
