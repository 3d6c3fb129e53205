"""Dense unitaries for the quantized maps.

Conventions fixed here (and relied on by the trace-formula tests):

* Position-basis cat kernel with the finite winding average

      U[Qf, Qi] = sqrt(i t12 / N) < exp(2 pi i N S(Qi/N, Qf/N + m)) >_m,
      S(q1, q2) = (t11 q1^2 - 2 q1 q2 + t22 q2^2) / (2 t12),

  with m running over one period (2|t12| terms; the summand is periodic in m
  because the parity condition makes all m-coefficients rationals with
  denominator 2 t12).  Phases are evaluated in integer arithmetic mod
  2|t12|N, so entries are exact to machine precision.  A final real rescale
  enforces unitarity.

* Baker: F_N^-1 blockdiag(F_{N/2}, F_{N/2}) with (F_n)_kj = e^{-2 pi i kj/n}/sqrt(n).

* Kicked maps on the 2pi-torus use hbar = 1/N and the grid q_j = p_j = 2 pi j/N:
  U = F^-1 diag(e^{-i T p_j^2 N / 2}) F  diag(e^{-i k V(q_j) N}).
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, NonQuantizableMatrixError, QuantizationFailureError, ValidationError
from .maps import BakerMap, CatMap, CatMatrix, KickedMap, MapModel

UNITARITY_TOL = 1e-10


def dft_matrix(n: int) -> np.ndarray:
    """(F_n)_kj = e^{-2 pi i k j / n} / sqrt(n)."""
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)


def check_unitary(U: np.ndarray, tol: float = UNITARITY_TOL) -> float:
    dev = np.abs(U.conj().T @ U - np.eye(U.shape[0])).max()
    if dev > tol:
        raise QuantizationFailureError(f"matrix not unitary: max deviation {dev:.3e} > {tol:g}")
    return float(dev)


def quantize_cat(M: CatMatrix, N: int) -> np.ndarray:
    if N < 1:
        raise ValidationError("N must be >= 1")
    if M.t12 == 0:
        raise NonQuantizableMatrixError("t12 = 0: position kernel undefined")
    if not M.is_quantizable():
        raise NonQuantizableMatrixError(
            f"parity condition violated: t11*t12={M.t11 * M.t12}, t21*t22={M.t21 * M.t22} must both be even")
    b = M.t12
    sgn = 1 if b > 0 else -1
    D = 2 * abs(b) * N
    Qi = np.arange(N, dtype=np.int64).reshape(1, N, 1)
    Qf = np.arange(N, dtype=np.int64).reshape(N, 1, 1)
    m = np.arange(2 * abs(b), dtype=np.int64).reshape(1, 1, -1)
    Qfm = Qf + m * N
    # 2 pi N S(Qi/N, (Qf + mN)/N) = 2 pi num / (2 t12 N) with integer num
    num = (M.t11 * Qi * Qi - 2 * Qi * Qfm + M.t22 * Qfm * Qfm) * sgn
    phases = np.exp(2j * np.pi * (num % D) / D)
    U = np.sqrt(1j * b / N) * phases.mean(axis=2)
    # enforce unitarity with a real rescale; U^dag U must already be ~ alpha I
    G = U.conj().T @ U
    alpha = np.trace(G).real / N
    if alpha <= 0 or np.abs(G - alpha * np.eye(N)).max() > 1e-8 * max(alpha, 1.0):
        raise QuantizationFailureError("cat kernel is not proportional to a unitary")
    U /= np.sqrt(alpha)
    check_unitary(U)
    return U


def quantize_baker(N: int) -> np.ndarray:
    if N < 2 or N % 2:
        raise DimensionError(f"baker quantization needs even N >= 2, got {N}")
    F = dft_matrix(N)
    half = dft_matrix(N // 2)
    B = np.zeros((N, N), dtype=complex)
    B[: N // 2, : N // 2] = half
    B[N // 2 :, N // 2 :] = half
    U = F.conj().T @ B
    check_unitary(U, 1e-12)
    return U


def quantize_kicked(model: KickedMap, N: int) -> np.ndarray:
    if N < 1:
        raise ValidationError("N must be >= 1")
    j = np.arange(N)
    q = 2 * np.pi * j / N
    p = 2 * np.pi * j / N
    F = dft_matrix(N)
    kick = np.exp(-1j * model.k * model.potential_values(q) * N)       # e^{-i k V(q)/hbar}
    free = np.exp(-1j * model.T * p ** 2 * N / 2)                      # e^{-i T p^2/(2 hbar)}
    U = (F.conj().T * free) @ F * kick  # diag multiplications via broadcasting
    check_unitary(U, 1e-12)
    return U


def quantize(model: MapModel, N: int) -> np.ndarray:
    """Dispatch on the map family."""
    if isinstance(model, CatMap):
        return quantize_cat(model.matrix, N)
    if isinstance(model, BakerMap):
        return quantize_baker(N)
    if isinstance(model, KickedMap):
        return quantize_kicked(model, N)
    raise ValidationError(f"cannot quantize {model.kind!r}")


def random_unitary(N: int, seed: int) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    Q, R = np.linalg.qr(A)
    return Q * (np.diagonal(R) / np.abs(np.diagonal(R)))
