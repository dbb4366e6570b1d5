"""Formal divisors on E and the sigma-orbit calculus.

A divisor is a finite integer combination of curve points.  The
interesting operations all happen per sigma-orbit, where a divisor
becomes a finitely supported integer sequence indexed by the twist
exponent: p_j = p^(sigma^j) = sigma^(-j)(p).

Orbit membership is decidable only within a bounded twist window
(K_orbit); a match found suspiciously close to the bound raises
OrbitAmbiguity instead of silently mis-partitioning.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import curve
from .curve import CurveParams, Point
from .errors import NegativeMultiplicity, NotVirtuallyEffective, OrbitAmbiguity

_BOUNDARY_MARGIN = 4


@dataclass(frozen=True)
class Divisor:
    """Finite map point -> nonzero integer coefficient."""

    terms: tuple  # sorted tuple of (Point, coeff)

    @classmethod
    def from_dict(cls, d: dict) -> "Divisor":
        items = tuple(sorted((pt, c) for pt, c in d.items() if c != 0))
        return cls(items)

    @classmethod
    def zero(cls) -> "Divisor":
        return cls(())

    @classmethod
    def of_point(cls, pt: Point, coeff: int = 1) -> "Divisor":
        return cls.from_dict({pt: coeff})

    def as_dict(self) -> dict:
        return dict(self.terms)

    @property
    def degree(self) -> int:
        return sum(c for _, c in self.terms)

    @property
    def support(self) -> tuple:
        return tuple(pt for pt, _ in self.terms)

    def is_effective(self) -> bool:
        return all(c >= 0 for _, c in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, pt: Point) -> int:
        for q, c in self.terms:
            if q == pt:
                return c
        return 0

    def __add__(self, other: "Divisor") -> "Divisor":
        d = self.as_dict()
        for pt, c in other.terms:
            d[pt] = d.get(pt, 0) + c
        return Divisor.from_dict(d)

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __neg__(self) -> "Divisor":
        return Divisor(tuple((pt, -c) for pt, c in self.terms))

    def __rmul__(self, k: int) -> "Divisor":
        if k == 0:
            return Divisor.zero()
        return Divisor(tuple((pt, k * c) for pt, c in self.terms))

    def __le__(self, other: "Divisor") -> bool:
        return (other - self).is_effective()

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for pt, c in self.terms:
            coord = ":".join(str(x) for x in pt)
            if c == 1:
                bits.append(f"({coord})")
            else:
                bits.append(f"{c}*({coord})")
        return " + ".join(bits)


@dataclass
class OrbitProfile:
    """One sigma-orbit of a divisor: base point and exponent -> coefficient.

    Exponents are re-based so the minimal occurring one is 0.
    """

    base: Point
    coeffs: dict = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return sum(self.coeffs.values())

    @property
    def spread(self) -> int:
        if not self.coeffs:
            return 0
        return max(self.coeffs) - min(self.coeffs)

    def sequence(self) -> list[int]:
        """Dense coefficient list from exponent 0 to the max exponent."""
        if not self.coeffs:
            return []
        n = max(self.coeffs)
        return [self.coeffs.get(i, 0) for i in range(n + 1)]


def twist(params: CurveParams, d: Divisor, j: int) -> Divisor:
    """d^(sigma^j): apply sigma^(-j) to every support point."""
    if j == 0 or d.is_zero():
        return d
    shift = curve.mult(params, -j, params.s)
    return Divisor.from_dict({curve.add(params, pt, shift): c for pt, c in d.terms})


def truncated(params: CurveParams, x: Divisor, n: int) -> Divisor:
    """[x]_n = x + x^sigma + ... + x^(sigma^(n-1));  [x]_0 = 0."""
    if n < 0:
        raise ValueError("truncation length must be >= 0")
    out = Divisor.zero()
    for i in range(n):
        out = out + twist(params, x, i)
    return out


def _orbit_shift(params: CurveParams, stride: int) -> Point:
    """Translation realising exponent +1 along sigma^stride orbits."""
    return curve.mult(params, -stride, params.s)


def orbit_split(params: CurveParams, d: Divisor, k_orbit: int,
                stride: int = 1) -> list[OrbitProfile]:
    """Partition the support into sigma^stride-orbits with exponent coordinates.

    `stride=3` gives tau-orbits for tau = sigma^3.
    """
    step = _orbit_shift(params, stride)
    remaining = list(d.terms)
    profiles: list[OrbitProfile] = []
    while remaining:
        base, c0 = remaining.pop(0)
        prof = {0: c0}
        unmatched = []
        # walk the orbit of `base` once and mark every support point on it
        translates = {}
        cur = base
        translates[base] = 0
        fwd = bwd = base
        for k in range(1, k_orbit + 1):
            fwd = curve.add(params, fwd, step)
            translates.setdefault(fwd, k)
            bwd = curve.add(params, bwd, curve.neg(params, step))
            translates.setdefault(bwd, -k)
        for pt, c in remaining:
            if pt in translates:
                k = translates[pt]
                if abs(k) > k_orbit - _BOUNDARY_MARGIN:
                    raise OrbitAmbiguity(
                        f"twist relation at exponent {k} too close to bound {k_orbit}")
                prof[k] = prof.get(k, 0) + c
            else:
                unmatched.append((pt, c))
        remaining = unmatched
        # re-base so the minimal exponent is 0; exponent j sits at base + j*step
        kmin = min(prof)
        if kmin != 0:
            base = curve.add(params, base, curve.mult(params, kmin, step))
        rebased = {k - kmin: c for k, c in prof.items()}
        profiles.append(OrbitProfile(base=base, coeffs=rebased))
    return profiles


def is_virtually_effective(params: CurveParams, x: Divisor, k_orbit: int,
                           stride: int = 1) -> bool:
    """Tail criterion: on every orbit all left and right tails are >= 0."""
    for prof in orbit_split(params, x, k_orbit, stride=stride):
        seq = prof.sequence()
        total = 0
        for c in seq:           # left tails
            total += c
            if total < 0:
                return False
        total = 0
        for c in reversed(seq):  # right tails
            total += c
            if total < 0:
                return False
    return True


def decompose_veff(params: CurveParams, x: Divisor, k_orbit: int):
    """Write x = u - v + v^sigma with u effective on distinct orbits,
    v effective, 0 <= v <= [u]_k; returns (u, v, k).

    Per orbit with coefficients (a_i), u places e = sum(a_i) at the orbit
    base and v has the right-tail coefficients c_i = sum_{j>i} a_j; this
    is the unique solution supported in nonnegative exponents.
    """
    if not is_virtually_effective(params, x, k_orbit):
        raise NotVirtuallyEffective(str(x))
    u = Divisor.zero()
    v = Divisor.zero()
    k = 0
    step = _orbit_shift(params, 1)
    for prof in orbit_split(params, x, k_orbit):
        seq = prof.sequence()
        e = sum(seq)
        if e:
            u = u + Divisor.of_point(prof.base, e)
        tail = 0
        tails = []
        for c in reversed(seq):
            tail += c
            tails.append(tail)
        tails.reverse()  # tails[i] = sum_{j>=i} a_j
        orbit_k = 0
        for i in range(len(seq)):
            ci = tails[i + 1] if i + 1 < len(seq) else 0
            if ci:
                v = v + Divisor.of_point(_exp_point(params, prof.base, i, step), ci)
                orbit_k = i + 1
        k = max(k, orbit_k)
    # verify the defining identities exactly
    assert u.is_effective() and v.is_effective()
    assert x == u - v + twist(params, v, 1), "reconstruction identity failed"
    assert v <= truncated(params, u, k), "v <= [u]_k failed"
    return u, v, k


def _exp_point(params: CurveParams, base: Point, i: int, step: Point) -> Point:
    """base^(sigma^i) along the orbit: i steps of the exponent shift."""
    pt = base
    for _ in range(i):
        pt = curve.add(params, pt, step)
    return pt


def normalized_divisor(params: CurveParams, x: Divisor, y: Divisor,
                       k: int, k_orbit: int) -> Divisor:
    """Collapse x orbitwise: e_p = (coefficient sum of x on the orbit) at a
    base point chosen so x and y sit in exponents [0, k'] for some k' >= k.

    The companion divisor y only influences the choice of base point; the
    output degree is deg(x).
    """
    joint = _joint_profiles(params, x, y, k_orbit)
    out = Divisor.zero()
    for base, (x_coeffs, _y_coeffs) in joint.items():
        e = sum(x_coeffs.values())
        if e < 0:
            raise NegativeMultiplicity(f"orbit of {base} has coefficient sum {e}")
        if e:
            out = out + Divisor.of_point(base, e)
    return out


def _joint_profiles(params: CurveParams, x: Divisor, y: Divisor, k_orbit: int):
    """Orbit partition of supp(x) u supp(y) with a common re-based origin."""
    joint_support = Divisor(tuple(
        (pt, 1) for pt in sorted(set(x.support) | set(y.support))))
    profiles = orbit_split(params, joint_support, k_orbit)
    step = _orbit_shift(params, 1)
    out = {}
    for prof in profiles:
        xs, ys = {}, {}
        for i in range(0, prof.spread + 1):
            pt = _exp_point(params, prof.base, i, step)
            cx = x.coeff(pt)
            cy = y.coeff(pt)
            if cx:
                xs[i] = cx
            if cy:
                ys[i] = cy
        out[prof.base] = (xs, ys)
    return out


def sigma_equivalent(params: CurveParams, d1: Divisor, d2: Divisor,
                     k_orbit: int) -> bool:
    """True iff per-orbit degrees agree."""
    joint = _joint_profiles(params, d1, d2, k_orbit)
    for _base, (c1, c2) in joint.items():
        if sum(c1.values()) != sum(c2.values()):
            return False
    return True
