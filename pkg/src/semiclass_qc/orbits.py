"""Periodic-orbit enumeration and per-orbit invariants.

Cat maps: period-t points solve (M^t - I) x in Z^2; they are enumerated
exactly (as rationals) through the Smith normal form of M^t - I, so the
point count equals |det(M^t - I)| by construction.

Baker map: period-t points are in bijection with the 2^t binary codes;
orbits are codes modulo cyclic rotation.  Code word a_0..a_{t-1} has

    q_j = 0.(a_j a_{j+1} ...) = rot_j(word) / (2^t - 1)
    p_j = 0.(a_{j-1} a_{j-2} ...)

All orbit data (points, actions) is exact rational arithmetic; floats
appear only at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .errors import BudgetError, UnsupportedModelError, ValidationError
from .maps import BakerMap, CatMap, MapModel, Rational, TorusPoint

# enumeration guards
MAX_CAT_T = 10
MAX_CAT_POINTS = 500_000
MAX_BAKER_T = 20


@dataclass(frozen=True)
class PeriodicOrbit:
    """One distinct orbit of total length t = r * t_p.

    points holds the t_p exact phase-space points of the primitive orbit,
    as (x0, x1) rationals in the model's own state ordering (cat: (p, q),
    baker: (q, p)).  Invariants S_p/A_p/nu_p/phi_p are filled by
    orbit_invariants; phi_p additionally needs the Hilbert dimension N.
    """

    t: int
    t_p: int
    r: int
    points: tuple[tuple[Rational, Rational], ...]
    code: str | None = None              # baker symbol word, primitive
    winding: tuple[int, int] | None = None  # cat: (M^t_p - I) x0
    S_p: Rational | None = None
    M_p: tuple[tuple[float, float], tuple[float, float]] | None = None
    nu_p: int | None = None
    A_p: float | None = None
    phi_p: float | None = None

    @property
    def start(self) -> tuple[Rational, Rational]:
        return self.points[0]

    def torus_points(self) -> list[TorusPoint]:
        """Primitive orbit as floats; cat points are (p,q)-ordered, baker (q,p)."""
        out = []
        for x in self.points:
            if self.code is None:
                out.append(TorusPoint(q=float(x[1] % 1), p=float(x[0] % 1)))
            else:
                out.append(TorusPoint(q=float(x[0] % 1), p=float(x[1] % 1)))
        return out


def _smith_normal_form(D):
    """L @ D @ R = diag(s1, s2) with L, R unimodular. Integer 2x2 matrices."""
    Dm = np.array(D, dtype=object)
    L = np.eye(2, dtype=object)
    R = np.eye(2, dtype=object)
    while Dm[1][0] != 0 or Dm[0][1] != 0:
        if Dm[0][0] == 0:
            if Dm[1][0] != 0 or Dm[1][1] != 0:
                Dm = Dm[::-1].copy()
                L = L[::-1].copy()
            if Dm[0][0] == 0:
                Dm = Dm[:, ::-1].copy()
                R = R[:, ::-1].copy()
            continue
        if Dm[1][0] % Dm[0][0] != 0:
            f = -(Dm[1][0] // Dm[0][0])
            Dm[1] += f * Dm[0]
            L[1] += f * L[0]
            Dm = Dm[::-1].copy()
            L = L[::-1].copy()
            continue
        if Dm[0][1] % Dm[0][0] != 0:
            f = -(Dm[0][1] // Dm[0][0])
            Dm[:, 1] += f * Dm[:, 0]
            R[:, 1] += f * R[:, 0]
            Dm = Dm[:, ::-1].copy()
            R = R[:, ::-1].copy()
            continue
        f = -(Dm[1][0] // Dm[0][0])
        Dm[1] += f * Dm[0]
        L[1] += f * L[0]
        f = -(Dm[0][1] // Dm[0][0])
        Dm[:, 1] += f * Dm[:, 0]
        R[:, 1] += f * R[:, 0]
    return L, (int(Dm[0][0]), int(Dm[1][1])), R


def cat_fixed_points(model: CatMap, t: int):
    """All x in [0,1)^2 with (M^t - I) x in Z^2, with windings k = (M^t - I) x.

    Returns (list of ((x0, x1), (k0, k1)), |det(M^t - I)|).
    """
    Mt = model.matrix.power(t)
    D = ((Mt[0][0] - 1, Mt[0][1]), (Mt[1][0], Mt[1][1] - 1))
    det = D[0][0] * D[1][1] - D[0][1] * D[1][0]
    if det == 0:
        raise ValidationError("M^t - I singular; matrix is not hyperbolic")
    if abs(det) > MAX_CAT_POINTS:
        raise BudgetError(f"|det(M^{t} - I)| = {abs(det)} exceeds enumeration budget {MAX_CAT_POINTS}")
    _, (s1, s2), R = _smith_normal_form(D)
    pts = []
    for j1 in range(abs(s1)):
        for j2 in range(abs(s2)):
            y = (Fraction(j1, s1), Fraction(j2, s2))
            x = ((R[0][0] * y[0] + R[0][1] * y[1]) % 1, (R[1][0] * y[0] + R[1][1] * y[1]) % 1)
            k0 = D[0][0] * x[0] + D[0][1] * x[1]
            k1 = D[1][0] * x[0] + D[1][1] * x[1]
            pts.append((x, (int(k0), int(k1))))
    assert len({p for p, _ in pts}) == abs(det)
    return pts, abs(det)


def _cat_orbits(model: CatMap, t: int) -> list[PeriodicOrbit]:
    pts, _ = cat_fixed_points(model, t)
    windings = dict(pts)
    seen: set = set()
    orbits = []
    for x, _k in pts:
        if x in seen:
            continue
        cycle = [x]
        y = model.step_exact(x)
        while y != x:
            cycle.append(y)
            seen.add(y)
            y = model.step_exact(y)
        seen.add(x)
        t_p = len(cycle)
        start = min(cycle)  # canonical representative
        i0 = cycle.index(start)
        cycle = cycle[i0:] + cycle[:i0]
        Mtp = model.matrix.power(t_p)
        kp = (
            int(Mtp[0][0] * start[0] + Mtp[0][1] * start[1] - start[0]),
            int(Mtp[1][0] * start[0] + Mtp[1][1] * start[1] - start[1]),
        )
        orbits.append(PeriodicOrbit(t=t, t_p=t_p, r=t // t_p, points=tuple(cycle), winding=kp))
    orbits.sort(key=lambda o: (o.t_p, o.start))
    return orbits


def _baker_code_points(word: list[int]) -> list[tuple[Rational, Rational]]:
    """(q_j, p_j) for the primitive code word, exact over denominator 2^t_p - 1."""
    t_p = len(word)
    den = 2 ** t_p - 1
    pts = []
    for j in range(t_p):
        fwd = word[j:] + word[:j]
        rev = word[:j][::-1] + word[j:][::-1]  # a_{j-1}, a_{j-2}, ...
        q = Fraction(sum(b << (t_p - 1 - i) for i, b in enumerate(fwd)), den)
        p = Fraction(sum(b << (t_p - 1 - i) for i, b in enumerate(rev)), den)
        pts.append((q, p))
    return pts


def _baker_orbits(t: int) -> list[PeriodicOrbit]:
    seen: set[int] = set()
    orbits = []
    for code in range(2 ** t):
        if code in seen:
            continue
        word = [(code >> (t - 1 - j)) & 1 for j in range(t)]
        rotations = set()
        for j in range(t):
            w = word[j:] + word[:j]
            rotations.add(sum(b << (t - 1 - i) for i, b in enumerate(w)))
        seen |= rotations
        # a word whose primitive period is t_p has exactly t_p distinct rotations
        t_p = len(rotations)
        prim = word[:t_p]
        orbits.append(
            PeriodicOrbit(
                t=t,
                t_p=t_p,
                r=t // t_p,
                points=tuple(_baker_code_points(prim)),
                code="".join(map(str, prim)),
            )
        )
    orbits.sort(key=lambda o: (o.t_p, o.code))
    return orbits


def enumerate_periodic_orbits(model: MapModel, t: int) -> list[PeriodicOrbit]:
    """One PeriodicOrbit per distinct orbit of period dividing t, tagged (t_p, r)."""
    if t < 1:
        raise ValidationError("orbit length t must be >= 1")
    if isinstance(model, CatMap):
        if t > MAX_CAT_T:
            raise BudgetError(f"cat enumeration capped at t <= {MAX_CAT_T}")
        return _cat_orbits(model, t)
    if isinstance(model, BakerMap):
        if t > MAX_BAKER_T:
            raise BudgetError(f"baker enumeration capped at t <= {MAX_BAKER_T}")
        return _baker_orbits(t)
    raise UnsupportedModelError(f"orbit enumeration unsupported for {model.kind!r} maps")


def _cat_action(orbit: PeriodicOrbit) -> Rational:
    """Primitive action from winding k and start x: S = (k ^ x + k1 k2)/2 mod 1.

    k ^ x is the symplectic form k0*x1 - k1*x0; the half-integer k1*k2 term is
    the theta characteristic that keeps the fixed-point sum consistent with
    the Gauss-sum phases of the quantization.  Both terms are invariant along
    the orbit (mod 1) for parity-admissible matrices.
    """
    x = orbit.start
    k = orbit.winding
    return ((Fraction(k[0]) * x[1] - Fraction(k[1]) * x[0] + k[0] * k[1]) / 2) % 1


def _baker_action(orbit: PeriodicOrbit) -> Rational:
    """S_p = sum_j a_j q_j over the primitive code (exact).

    Code-word coordinates live in [0,1]: the all-ones word sits at q_j = 1,
    the corner representative of the symbolic fixed point.
    """
    S = Fraction(0)
    for (q, _p), a in zip(orbit.points, (int(c) for c in orbit.code)):
        if a:
            S += q
    return S


def orbit_invariants(model: MapModel, orbit: PeriodicOrbit, N: int) -> PeriodicOrbit:
    """Fill S_p, M_p, nu_p, A_p and the N-bound total phase phi_p."""
    if N < 1:
        raise ValidationError("Hilbert dimension N must be >= 1")
    t = orbit.t
    if isinstance(model, CatMap):
        if model.matrix.t12 == 0:
            raise ValidationError("singular generating function: t12 = 0")
        S = _cat_action(orbit)
        Mtp = model.matrix.power(orbit.t_p)
        M_p = ((float(Mtp[0][0]), float(Mtp[0][1])), (float(Mtp[1][0]), float(Mtp[1][1])))
        Mt = model.matrix.power(t)
        det_full = abs((Mt[0][0] - 1) * (Mt[1][1] - 1) - Mt[0][1] * Mt[1][0])
        A = orbit.t_p / np.sqrt(det_full)
        nu = model.maslov_step * orbit.t_p
    elif isinstance(model, BakerMap):
        S = _baker_action(orbit)
        M_p = ((2.0 ** orbit.t_p, 0.0), (0.0, 2.0 ** -orbit.t_p))
        det_full = (2 ** t - 1) * (1 - 2.0 ** -t)
        A = orbit.t_p / np.sqrt(det_full)
        nu = model.maslov_step * orbit.t_p
    else:
        raise UnsupportedModelError(f"invariants unsupported for {model.kind!r} maps")
    # phi = r (2 pi N S_p - nu pi/2); the fractional part of N S_p carries the
    # whole phase, so reduce exactly before going to float
    frac = (N * S) % 1
    phi = orbit.r * (2 * np.pi * float(frac) - nu * np.pi / 2)
    return replace(orbit, S_p=S, M_p=M_p, nu_p=nu, A_p=float(A), phi_p=float(phi))


def orbit_table_rows(model: MapModel, orbits: list[PeriodicOrbit], N: int):
    """CSV rows: t, t_p, r, code-or-lattice-index, q0, p0, S_p, det_factor, A_p, nu_p."""
    rows = []
    for orb in orbits:
        o = orbit_invariants(model, orb, N)
        if o.code is not None:
            ident = o.code
            q0, p0 = o.points[0]
        else:
            ident = f"{o.winding[0]},{o.winding[1]}"
            p0, q0 = o.points[0]
        det_factor = (o.t_p / o.A_p) ** 2
        rows.append(
            {
                "t": o.t,
                "t_p": o.t_p,
                "r": o.r,
                "code_or_k": ident,
                "q0": float(q0 % 1) if o.code is None else float(q0),
                "p0": float(p0 % 1) if o.code is None else float(p0),
                "S_p": float(o.S_p),
                "abs_det_I_minus_Mp_r": det_factor,
                "A_p": o.A_p,
                "nu_p": o.nu_p,
            }
        )
    return rows
