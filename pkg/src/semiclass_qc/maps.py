"""Classical torus maps: cat (SL(2,Z) automorphisms), baker, and kicked rotators.

Cat and baker act on the unit torus [0,1)^2, kicked maps on [0,2pi)^2.
Cat maps follow the (p, q) ordering

    p' = t11 p + t12 q   (mod 1)
    q' = t21 p + t22 q   (mod 1)

so a phase-space state is the column vector (p, q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import UnsupportedModelError, ValidationError

Rational = Fraction


@dataclass(frozen=True)
class TorusPoint:
    """A phase-space point; coordinates live in [0, period)."""

    q: float
    p: float


@dataclass(frozen=True)
class CatMatrix:
    """Integer SL(2,Z) matrix; must be hyperbolic (|trace| > 2)."""

    t11: int
    t12: int
    t21: int
    t22: int

    def __post_init__(self):
        if self.det != 1:
            raise ValidationError(f"cat matrix determinant must be 1, got {self.det}")
        if abs(self.trace) <= 2:
            raise ValidationError(f"cat matrix must be hyperbolic, |trace|={abs(self.trace)} <= 2")

    @property
    def det(self) -> int:
        return self.t11 * self.t22 - self.t12 * self.t21

    @property
    def trace(self) -> int:
        return self.t11 + self.t22

    def rows(self):
        return ((self.t11, self.t12), (self.t21, self.t22))

    def as_array(self) -> np.ndarray:
        return np.array(self.rows(), dtype=np.int64)

    def power(self, t: int):
        """Exact integer matrix power as a pair of row tuples (not a CatMatrix:
        powers of hyperbolic matrices stay in SL(2,Z) but we avoid revalidation)."""
        r = ((1, 0), (0, 1))
        m = self.rows()
        for _ in range(t):
            r = (
                (r[0][0] * m[0][0] + r[0][1] * m[1][0], r[0][0] * m[0][1] + r[0][1] * m[1][1]),
                (r[1][0] * m[0][0] + r[1][1] * m[1][0], r[1][0] * m[0][1] + r[1][1] * m[1][1]),
            )
        return r

    def is_quantizable(self) -> bool:
        """Checkerboard parity condition: t11*t12 and t21*t22 both even."""
        return (self.t11 * self.t12) % 2 == 0 and (self.t21 * self.t22) % 2 == 0


class MapModel:
    """Common surface of the map families.

    Attributes
    ----------
    kind : 'cat' | 'baker' | 'kicked'
    period : torus period (1.0 or 2*pi)
    alphabet : symbolic alphabet size, 0 if no symbolic dynamics
    transition : boolean alphabet x alphabet matrix of allowed symbol pairs
    """

    kind = "?"
    period = 1.0
    alphabet = 0
    transition: np.ndarray | None = None

    def step(self, pt: TorusPoint) -> TorusPoint:
        raise NotImplementedError

    def step_exact(self, x: tuple[Rational, Rational]) -> tuple[Rational, Rational]:
        raise UnsupportedModelError(f"{self.kind} map has no exact rational step")

    @property
    def supports_orbits(self) -> bool:
        return self.alphabet > 0


@dataclass(frozen=True)
class CatMap(MapModel):
    matrix: CatMatrix
    # Per-step Maslov constant; orbits carry nu_p = maslov_step * t_p. The
    # default reproduces tr U^t exactly for quantizable matrices (calibrated
    # once against the quantization; see semiclassics.calibrate_maslov).
    maslov_step: int = 3

    kind = "cat"
    period = 1.0
    alphabet = 2  # enumeration goes through the integer lattice, not codes

    @property
    def transition(self):  # full shift placeholder; cat enumeration is lattice-based
        return np.ones((2, 2), dtype=bool)

    def step(self, pt: TorusPoint) -> TorusPoint:
        m = self.matrix
        # state ordering (p, q) as in the map definition
        p2 = (m.t11 * pt.p + m.t12 * pt.q) % 1.0
        q2 = (m.t21 * pt.p + m.t22 * pt.q) % 1.0
        return TorusPoint(q=q2, p=p2)

    def step_exact(self, x):
        """One exact step of the column vector x = (x0, x1) acted on by the matrix."""
        m = self.matrix
        return ((m.t11 * x[0] + m.t12 * x[1]) % 1, (m.t21 * x[0] + m.t22 * x[1]) % 1)


@dataclass(frozen=True)
class BakerMap(MapModel):
    maslov_step: int = 1  # calibrated at t=1 against the quantized map

    kind = "baker"
    period = 1.0
    alphabet = 2

    @property
    def transition(self):
        return np.ones((2, 2), dtype=bool)  # full binary shift

    def step(self, pt: TorusPoint) -> TorusPoint:
        if pt.q <= 0.5:
            return TorusPoint(q=(2 * pt.q) % 1.0, p=pt.p / 2)
        return TorusPoint(q=2 * pt.q - 1, p=(pt.p + 1) / 2)

    def step_exact(self, x):
        q, p = x
        if q <= Fraction(1, 2):
            return ((2 * q) % 1, p / 2)
        return (2 * q - 1, (p + 1) / 2)


def _potential(name: str):
    if name == "cos":
        return lambda q: np.cos(q)
    if name == "sawtooth":
        # The source convention mixes symbols; we read it as a function of
        # position: V(q) = -(q - pi)^2 / 2.
        return lambda q: -((q - np.pi) ** 2) / 2
    raise ValidationError(f"unknown potential {name!r} (use 'cos' or 'sawtooth')")


@dataclass(frozen=True)
class KickedMap(MapModel):
    """p' = p - k V'(q), q' = q + T p' on the 2pi-torus."""

    k: float = 1.0
    T: float = 1.0
    potential: str = "cos"

    kind = "kicked"
    period = 2 * math.pi
    alphabet = 0
    transition = None

    def potential_values(self, q: np.ndarray) -> np.ndarray:
        return _potential(self.potential)(q)

    def _vprime(self, q: float) -> float:
        if self.potential == "cos":
            return -math.sin(q)
        return -(q - math.pi)

    def step(self, pt: TorusPoint) -> TorusPoint:
        two_pi = 2 * math.pi
        p2 = (pt.p - self.k * self._vprime(pt.q)) % two_pi
        q2 = (pt.q + self.T * p2) % two_pi
        return TorusPoint(q=q2, p=p2)


def make_model(kind: str, **kw) -> MapModel:
    """Build a map model from plain parameters (the CLI/config entry point)."""
    if kind == "cat":
        m = kw["matrix"]
        mat = CatMatrix(int(m[0][0]), int(m[0][1]), int(m[1][0]), int(m[1][1]))
        return CatMap(matrix=mat, maslov_step=int(kw.get("maslov_step", 3)))
    if kind == "baker":
        return BakerMap(maslov_step=int(kw.get("maslov_step", 1)))
    if kind == "kicked":
        return KickedMap(k=float(kw.get("k", 1.0)), T=float(kw.get("T", 1.0)),
                         potential=kw.get("potential", "cos"))
    raise ValidationError(f"unknown map kind {kind!r}")


def iterate_map(model: MapModel, start: TorusPoint, steps: int) -> list[TorusPoint]:
    """Forward trajectory of length steps+1 including the start point."""
    if steps < 0:
        raise ValidationError("steps must be >= 0")
    per = model.period
    if not (0 <= start.q < per and 0 <= start.p < per):
        raise ValidationError(f"start point outside [0, {per}) torus")
    out = [start]
    pt = start
    for _ in range(steps):
        pt = model.step(pt)
        out.append(pt)
    return out
