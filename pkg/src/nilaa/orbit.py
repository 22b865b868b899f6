"""Floating-point dynamical oracle on tori and the Heisenberg quotient.

The module iterates affine maps numerically, searches for forward return
sequences, and runs an empirical version of the almost automorphy test:
find indices k_1 < ... < k_m whose forward images cluster at a point y,
then check whether the backward images of y under the same indices come
back to the start.  A failed backward return with a tight forward cluster
falsifies the property; the converse outcome is only evidence, since the
definition quantifies over all sequences.

Inputs may be floats; they are converted to exact dyadic rationals once
(`Fraction(float)` is exact) and every orbit computation afterwards is
exact rational arithmetic.  Floating error can therefore only enter
through the caller's choice of probe, never through iteration.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from .ratlin import QMatrix

CONSISTENT = "ConsistentWithAA"
FALSIFIED = "Falsified"

ITERATE_CAP = 10 ** 6

# Target points are snapped to this grid before the backward test.  The
# snap moves the candidate limit off the exact orbit by at most 2^-13 per
# coordinate, which a genuine isometry tolerates but polynomial orbit
# drift amplifies.
SNAP_GRID = 2 ** 12


class NotFound(Exception):
    """No forward return was found within the horizon."""


def _fraction(value) -> Fraction:
    if isinstance(value, float):
        return Fraction(value)
    return Fraction(value)


def _point(values) -> tuple:
    return tuple(_fraction(v) for v in values)


def _heis_bracket3(u, v) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def _heis_mult(u, v) -> tuple:
    z = _heis_bracket3(u, v) / 2
    return (u[0] + v[0], u[1] + v[1], u[2] + v[2] + z)


def _heis_neg(u) -> tuple:
    return (-u[0], -u[1], -u[2])


@dataclass(frozen=True)
class NumericAffine:
    """An affine map x -> a * U(x) on a torus or the Heisenberg quotient.

    matrix and translation entries are converted to exact rationals at
    construction.  space selects the state space: "Torus" is R^d / Z^d,
    "Heisenberg3" is the 3-dim Heisenberg group in logarithmic
    coordinates modulo the lattice generated by xi1, xi2, xi3/2.
    """

    dim: int
    matrix: QMatrix
    translation: tuple
    space: str

    def __init__(self, dim, matrix, translation, space="Torus"):
        if space not in ("Torus", "Heisenberg3"):
            raise ValueError("space must be 'Torus' or 'Heisenberg3'")
        if space == "Heisenberg3" and dim != 3:
            raise ValueError("Heisenberg3 requires dim = 3")
        if matrix is None:
            matrix = QMatrix.identity(dim)
        if not isinstance(matrix, QMatrix):
            matrix = QMatrix([[_fraction(e) for e in row] for row in matrix])
        if matrix.shape != (dim, dim):
            raise ValueError("matrix shape does not match dim")
        translation = _point(translation if translation is not None
                             else [0] * dim)
        if len(translation) != dim:
            raise ValueError("translation length does not match dim")
        if space == "Torus":
            if not matrix.is_integral() or abs(matrix.det()) != 1:
                raise ValueError("torus map needs an integer matrix "
                                 "with determinant +-1")
        else:
            self._check_heisenberg_matrix(matrix)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "translation", translation)
        object.__setattr__(self, "space", space)

    @staticmethod
    def _check_heisenberg_matrix(matrix):
        cols = [matrix.column(j) for j in range(3)]
        if cols[2][0] != 0 or cols[2][1] != 0:
            raise ValueError("the center must be preserved")
        det2 = cols[0][0] * cols[1][1] - cols[0][1] * cols[1][0]
        if cols[2][2] != det2:
            raise ValueError("the matrix does not respect the bracket")
        # lattice coordinates rescale the third axis by 2
        for j, col in enumerate(cols):
            if col[0].denominator != 1 or col[1].denominator != 1 \
                    or (2 * col[2]).denominator != 1:
                raise ValueError("the matrix does not preserve the lattice")
        if abs(matrix.det()) != 1:
            raise ValueError("the matrix is not invertible over the lattice")

    # -- one-step dynamics (exact) --

    def reduce(self, x) -> tuple:
        """Reduce into the fundamental domain.

        Torus: coordinates mod 1.  Heisenberg3: right-multiply by lattice
        generators in the order xi1, xi2, xi3 until the coordinates land
        in [0,1) x [0,1) x [0,1/2); the first two steps shift the third
        coordinate through the group law.
        """
        x = _point(x)
        if self.space == "Torus":
            return tuple(v - math.floor(v) for v in x)
        x1, x2, x3 = x
        m = math.floor(x1)
        x1, x3 = x1 - m, x3 + Fraction(m) * x2 / 2
        n = math.floor(x2)
        x2, x3 = x2 - n, x3 - Fraction(n) * x1 / 2
        r = math.floor(2 * x3)
        x3 = x3 - Fraction(r, 2)
        return (x1, x2, x3)

    def step(self, x) -> tuple:
        """One forward application with reduction."""
        x = _point(x)
        ux = self.matrix.matvec(x)
        if self.space == "Torus":
            y = tuple(a + u for a, u in zip(self.translation, ux))
        else:
            y = _heis_mult(self.translation, ux)
        return self.reduce(y)

    def step_back(self, x) -> tuple:
        """One exact backward application with reduction."""
        x = _point(x)
        if self.space == "Torus":
            shifted = tuple(v - a for v, a in zip(x, self.translation))
        else:
            shifted = _heis_mult(_heis_neg(self.translation), x)
        return self.reduce(self._inverse().matvec(shifted))

    def _inverse(self) -> QMatrix:
        cached = self.__dict__.get("_inverse_matrix")
        if cached is None:
            cached = self.matrix.inverse()
            object.__setattr__(self, "_inverse_matrix", cached)
        return cached

    def is_pure_translation(self) -> bool:
        return self.matrix == QMatrix.identity(self.dim)

    # -- metric --

    def distance(self, x, y) -> Fraction:
        """Distance estimate between cosets of reduced points.

        Torus: max-norm of coordinate-wise circle distances.  Heisenberg:
        minimum over the 27 neighboring lattice translates y * gamma of
        the max-norm coordinate difference.
        """
        x, y = _point(x), _point(y)
        if self.space == "Torus":
            best = Fraction(0)
            for a, b in zip(x, y):
                d = a - b
                d = d - math.floor(d)
                d = min(d, 1 - d)
                if d > best:
                    best = d
            return best
        best = None
        for c1, c2, c3 in product((-1, 0, 1), repeat=3):
            gamma = (Fraction(c1), Fraction(c2), Fraction(c3, 2))
            yt = _heis_mult(y, gamma)
            d = max(abs(a - b) for a, b in zip(x, yt))
            if best is None or d < best:
                best = d
        return best


def iterate(affine: NumericAffine, x, k: int) -> tuple:
    """k-fold application (signed), reducing after every step.

    For pure translations the k-th power of the translation is applied in
    one exact closed-form step, which agrees with stepwise reduction.
    """
    if abs(k) > ITERATE_CAP:
        raise ValueError("|k| exceeds the iteration cap")
    p = affine.reduce(x)
    if affine.is_pure_translation():
        ka = tuple(k * a for a in affine.translation)
        if affine.space == "Torus":
            return affine.reduce(tuple(v + w for v, w in zip(p, ka)))
        return affine.reduce(_heis_mult(ka, p))
    step = affine.step if k >= 0 else affine.step_back
    for _ in range(abs(k)):
        p = step(p)
    return p


def _convergent_denominators(value: Fraction, bound: int) -> list:
    """Denominators of the continued-fraction convergents of value."""
    value = value - math.floor(value)
    if value == 0:
        return [1]
    out = []
    h_prev, h = 0, 1  # denominators q_{-1}, q_0
    a = value
    while True:
        q = math.floor(1 / a) if a else None
        if q is None:
            break
        h_prev, h = h, q * h + h_prev
        if h > bound:
            break
        out.append(h)
        a = 1 / a - q
        if a == 0:
            break
    return out


def find_forward_sequence(affine: NumericAffine, x, y, eps, horizon,
                          *, start: int = 0, limit: int = 10) -> tuple:
    """Indices k in [start, horizon] with dist(T^k x, y) < eps.

    Returns up to `limit` indices in increasing order.  For pure torus
    translations the continued-fraction convergent denominators of the
    translation coordinates are tried first (closed-form evaluation); a
    plain incremental scan covers every other case.  Deterministic in
    (map, x, y, eps, horizon).  Raises NotFound when nothing is found.
    """
    eps = _fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    horizon = int(horizon)
    x = affine.reduce(x)
    y = affine.reduce(y)
    hits = []
    if start <= 0 and affine.distance(x, y) < eps:
        hits.append(0)
    lo = max(start, 1)
    if affine.is_pure_translation() and affine.space == "Torus":
        candidates = set()
        for a in affine.translation:
            candidates.update(_convergent_denominators(a, horizon))
        for k in sorted(candidates):
            if k < lo or k > horizon:
                continue
            p = affine.reduce(tuple(
                v + k * a for v, a in zip(x, affine.translation)))
            if affine.distance(p, y) < eps:
                hits.append(k)
                if len(hits) >= limit:
                    return tuple(hits)
        if len(hits) > (1 if hits and hits[0] == 0 else 0):
            return tuple(hits)
    p = x
    for _ in range(lo):
        p = affine.step(p)
    for k in range(lo, horizon + 1):
        if affine.distance(p, y) < eps:
            if k not in hits:
                hits.append(k)
                if len(hits) >= limit:
                    return tuple(hits)
        p = affine.step(p)
    if not hits:
        raise NotFound(f"no return within horizon {horizon}")
    return tuple(sorted(hits))


def _snap(point) -> tuple:
    return tuple(Fraction(round(v * SNAP_GRID), SNAP_GRID) for v in point)


@dataclass(frozen=True)
class FalsificationWitness:
    """The data of one failed backward return (all entries exact)."""

    probe: tuple
    target: tuple
    sequence: tuple
    forward_distance: float
    backward_distance: float


@dataclass(frozen=True)
class AATestReport:
    trials: int
    horizon: int
    epsilon_forward: float
    seed: int
    verdict: str
    witness: Optional[FalsificationWitness]
    notes: tuple = ()


def witness_distances(affine: NumericAffine, probe, target,
                      sequence) -> tuple:
    """Recompute (forward, backward) distances of a witness from scratch.

    forward = max over k in the sequence of dist(T^k probe, target);
    backward = max over k of dist(T^-k target, probe).
    """
    probe = affine.reduce(probe)
    target = affine.reduce(target)
    fwd = Fraction(0)
    bwd = Fraction(0)
    for k in sequence:
        fwd = max(fwd, affine.distance(iterate(affine, probe, k), target))
        bwd = max(bwd, affine.distance(iterate(affine, target, -k), probe))
    return float(fwd), float(bwd)


def _sample_probe(affine: NumericAffine, rng: random.Random) -> tuple:
    den = 2 ** 20
    coords = [Fraction(rng.randrange(den), den) for _ in range(affine.dim)]
    if affine.space == "Heisenberg3":
        coords[2] /= 2
    return tuple(coords)


def _run_trial(affine: NumericAffine, probe, eps, horizon):
    """One probe: forward cluster, snapped target, backward check.

    Returns (witness or None, whether any forward return was found).
    """
    probe = affine.reduce(probe)
    try:
        seq = find_forward_sequence(affine, probe, probe, eps, horizon,
                                    start=1)
    except NotFound:
        return None, False
    target = _snap(iterate(affine, probe, seq[0]))
    eps = _fraction(eps)
    fwd = Fraction(0)
    for k in seq:
        fwd = max(fwd, affine.distance(iterate(affine, probe, k), target))
    if fwd >= eps:
        return None, True  # cluster is not tight around the snapped target
    bwd = Fraction(0)
    for k in seq:
        bwd = max(bwd, affine.distance(iterate(affine, target, -k), probe))
    if bwd <= 10 * eps:
        return None, True
    return FalsificationWitness(probe, target, seq, float(fwd),
                                float(bwd)), True


def aa_empirical_test(affine: NumericAffine, trials: int, eps, horizon,
                      seed: int, probes: Optional[Sequence] = None
                      ) -> AATestReport:
    """Empirical almost-automorphy test.

    Each trial takes a probe x (given, or pseudo-randomly sampled from
    the seeded generator), finds up to ten forward near-returns of x,
    snaps the first return point to the dyadic grid as the candidate
    limit y0, and measures the worst backward distance of T^-k y0 from x
    over the same indices.  A trial with forward cluster below eps and
    backward distance above 10*eps falsifies; otherwise the report stays
    ConsistentWithAA.  Trials are independent; the witness reported is
    the one with the lowest trial index.
    """
    horizon = int(horizon)
    rng = random.Random(seed)
    if probes is None:
        probe_list = [_sample_probe(affine, rng) for _ in range(trials)]
    else:
        probe_list = [affine.reduce(p) for p in probes][:trials]
        while len(probe_list) < trials:
            probe_list.append(_sample_probe(affine, rng))
    witness = None
    found_returns = 0
    for probe in probe_list:
        result, had_returns = _run_trial(affine, probe, eps, horizon)
        if result is not None and witness is None:
            witness = result
        if had_returns:
            found_returns += 1
    notes = (f"forward returns found for {found_returns} of "
             f"{trials} probes",)
    verdict = FALSIFIED if witness is not None else CONSISTENT
    return AATestReport(trials=trials, horizon=horizon,
                        epsilon_forward=float(_fraction(eps)), seed=seed,
                        verdict=verdict, witness=witness, notes=notes)


def trajectory(affine: NumericAffine, x, kmax: int) -> list:
    """Points (k, T^k x) for k = 0..kmax, computed incrementally."""
    p = affine.reduce(x)
    out = [(0, p)]
    for k in range(1, kmax + 1):
        p = affine.step(p)
        out.append((k, p))
    return out
