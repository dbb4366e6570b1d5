"""The Hesse cubic E, its group law, and the translation automorphism.

E : (a^3+b^3+c^3)·xyz - abc·(x^3+y^3+z^3) = 0   in P^2 over F_p.

Points are normalized projective triples (first nonzero coordinate 1),
stored as plain int tuples so they can key divisors.  The identity of
the group law is the inflection point O = (1 : -1 : 0).

The algebra's automorphism sigma is a translation q -> q + s.  The
rational formula for it is used once to bootstrap the translation point
and cross-check; afterwards sigma is always the (total) translation.
The product-twist orientation probe folds its sign into `s`, so a single
exponent convention  p^(sigma^j) = sigma^(-j)(p) = p - j*s  holds
everywhere in the package.

The chord-tangent construction is written over an abstract coefficient
ring so the same code adds exact points and jet points (order-m tangent
lifts used for vanishing multiplicities).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateParams,
    FormulaDegenerate,
    NoPointFound,
    NotOnCurve,
    OrientationFailure,
    SingularPoint,
    SmallOrder,
    TranslationMismatch,
)
from .exactalg import Jet, PrimeField

Point = tuple  # normalized projective triple of ints

O_COORDS = (1, -1, 0)


# --- coefficient rings for the chord construction ----------------------------

class _FpOps:
    def __init__(self, p: int):
        self.p = p

    def lift(self, x: int) -> int:
        return x % self.p

    def add(self, x, y):
        return (x + y) % self.p

    def sub(self, x, y):
        return (x - y) % self.p

    def mul(self, x, y):
        return x * y % self.p

    def neg(self, x):
        return -x % self.p

    def is_zero(self, x) -> bool:
        return x % self.p == 0

    def is_unit(self, x) -> bool:
        return x % self.p != 0

    def inv(self, x):
        return pow(x, self.p - 2, self.p)


class _JetOps:
    def __init__(self, p: int, order: int):
        self.p = p
        self.order = order

    def lift(self, x) -> Jet:
        if isinstance(x, Jet):
            return x
        return Jet.constant(self.p, int(x), self.order)

    def add(self, x, y):
        return self.lift(x) + self.lift(y)

    def sub(self, x, y):
        return self.lift(x) - self.lift(y)

    def mul(self, x, y):
        return self.lift(x) * self.lift(y)

    def neg(self, x):
        return -self.lift(x)

    def is_zero(self, x) -> bool:
        return self.lift(x).is_zero()

    def is_unit(self, x) -> bool:
        return self.lift(x).is_unit()

    def inv(self, x):
        j = self.lift(x)
        if not j.is_unit():
            raise SingularPoint("non-unit jet where a division is required")
        return j.inverse()


@dataclass(frozen=True)
class CurveParams:
    """Validated curve/algebra parameters plus the sigma translation data.

    `s` is the translation point of the automorphism used everywhere
    (divisor twists and section-product twists alike); `orient` records
    whether `s` equals the formula bootstrap point (+1) or its negative
    (-1).  `s_raw` keeps the bootstrap point for diagnostics.
    """

    p: int
    a: int
    b: int
    c: int
    s: Point
    s_raw: Point
    orient: int
    order_floor: int

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.p)

    @property
    def origin(self) -> Point:
        return normalize(self.p, O_COORDS)


def normalize(p: int, coords: Sequence[int]) -> Point:
    """Scale so the first nonzero coordinate is exactly 1."""
    c = [x % p for x in coords]
    for x in c:
        if x:
            inv = pow(x, p - 2, p)
            return tuple(v * inv % p for v in c)
    raise NotOnCurve("(0:0:0) is not a projective point")


def normalize_jets(coords: Sequence[Jet]) -> tuple[Jet, ...]:
    """Scale so the first unit coordinate is the constant jet 1."""
    for x in coords:
        if x.is_unit():
            inv = x.inverse()
            return tuple(v * inv for v in coords)
    raise SingularPoint("jet point with no unit coordinate")


def curve_poly(params, coords, ops):
    """F(x, y, z) evaluated in the given coefficient ring."""
    x, y, z = (ops.lift(c) for c in coords)
    m3 = (pow(params.a, 3, params.p) + pow(params.b, 3, params.p)
          + pow(params.c, 3, params.p)) % params.p
    abc = params.a * params.b % params.p * params.c % params.p
    xyz = ops.mul(ops.mul(x, y), z)
    cubes = ops.add(ops.add(ops.mul(ops.mul(x, x), x), ops.mul(ops.mul(y, y), y)),
                    ops.mul(ops.mul(z, z), z))
    return ops.sub(ops.mul(ops.lift(m3), xyz), ops.mul(ops.lift(abc), cubes))


def gradient(params, coords, ops):
    """(dF/dx, dF/dy, dF/dz) in the given ring."""
    x, y, z = (ops.lift(c) for c in coords)
    p = params.p
    m3 = (pow(params.a, 3, p) + pow(params.b, 3, p) + pow(params.c, 3, p)) % p
    t = 3 * params.a * params.b % p * params.c % p
    gx = ops.sub(ops.mul(ops.lift(m3), ops.mul(y, z)), ops.mul(ops.lift(t), ops.mul(x, x)))
    gy = ops.sub(ops.mul(ops.lift(m3), ops.mul(x, z)), ops.mul(ops.lift(t), ops.mul(y, y)))
    gz = ops.sub(ops.mul(ops.lift(m3), ops.mul(x, y)), ops.mul(ops.lift(t), ops.mul(z, z)))
    return gx, gy, gz


def on_curve(params: CurveParams, pt: Point) -> bool:
    ops = _FpOps(params.p)
    return ops.is_zero(curve_poly(params, pt, ops))


def _require_on_curve(params, pt):
    if not on_curve(params, pt):
        raise NotOnCurve(f"{pt} fails the curve equation")


def _chord_coeffs(params, P, Q, ops):
    """c1, c2 of F(P + t·Q) = c1·t + c2·t^2 (c0 = c3 = 0 when P, Q on E)."""
    p0, p1, p2 = (ops.lift(c) for c in P)
    q0, q1, q2 = (ops.lift(c) for c in Q)
    p = params.p
    m3 = (pow(params.a, 3, p) + pow(params.b, 3, p) + pow(params.c, 3, p)) % p
    t3 = 3 * params.a * params.b % p * params.c % p
    mixed1 = ops.add(ops.add(ops.mul(ops.mul(p0, p1), q2), ops.mul(ops.mul(p0, q1), p2)),
                     ops.mul(ops.mul(q0, p1), p2))
    mixed2 = ops.add(ops.add(ops.mul(ops.mul(p0, q1), q2), ops.mul(ops.mul(q0, p1), q2)),
                     ops.mul(ops.mul(q0, q1), p2))
    sq1 = ops.add(ops.add(ops.mul(ops.mul(p0, p0), q0), ops.mul(ops.mul(p1, p1), q1)),
                  ops.mul(ops.mul(p2, p2), q2))
    sq2 = ops.add(ops.add(ops.mul(ops.mul(q0, q0), p0), ops.mul(ops.mul(q1, q1), p1)),
                  ops.mul(ops.mul(q2, q2), p2))
    c1 = ops.sub(ops.mul(ops.lift(m3), mixed1), ops.mul(ops.lift(t3), sq1))
    c2 = ops.sub(ops.mul(ops.lift(m3), mixed2), ops.mul(ops.lift(t3), sq2))
    return c1, c2


def _combine(P, Q, t, ops):
    return tuple(ops.add(ops.lift(pc), ops.mul(t, ops.lift(qc))) for pc, qc in zip(P, Q))


def _third_chord(params, P, Q, ops):
    """Third intersection of E with the line through distinct points P, Q."""
    c1, c2 = _chord_coeffs(params, P, Q, ops)
    if ops.is_unit(c2):
        t = ops.neg(ops.mul(c1, ops.inv(c2)))
        return _combine(P, Q, t, ops)
    if not ops.is_zero(c2):
        raise SingularPoint("degenerate chord over the jet ring")
    if ops.is_unit(c1):
        return tuple(ops.lift(c) for c in Q)
    raise SingularPoint("line meets the cubic improperly")


def _third_tangent(params, P, ops):
    """Third intersection of E with the tangent line at P."""
    g = gradient(params, P, ops)
    # a point d on the tangent line, not proportional to P
    candidates = (
        (g[1], ops.neg(g[0]), ops.lift(0)),
        (g[2], ops.lift(0), ops.neg(g[0])),
        (ops.lift(0), g[2], ops.neg(g[1])),
    )
    d = None
    for cand in candidates:
        if not any(ops.is_unit(c) for c in cand):
            continue
        # cross product unit-ness certifies d not proportional to P
        pl = [ops.lift(c) for c in P]
        cross = (
            ops.sub(ops.mul(pl[1], cand[2]), ops.mul(pl[2], cand[1])),
            ops.sub(ops.mul(pl[2], cand[0]), ops.mul(pl[0], cand[2])),
            ops.sub(ops.mul(pl[0], cand[1]), ops.mul(pl[1], cand[0])),
        )
        if any(ops.is_unit(c) for c in cross):
            d = cand
            break
    if d is None:
        raise SingularPoint("no usable tangent direction; point singular?")
    # F(P + t d) = c2 t^2 + c3 t^3 since F(P) = 0 and grad·d = 0
    _, c2 = _chord_coeffs(params, P, d, ops)
    c3 = curve_poly(params, d, ops)
    if ops.is_unit(c3):
        t = ops.neg(ops.mul(c2, ops.inv(c3)))
        return _combine(P, d, t, ops)
    if not ops.is_zero(c3):
        raise SingularPoint("degenerate tangent over the jet ring")
    if ops.is_unit(c2):
        return d
    return tuple(ops.lift(c) for c in P)  # inflection point


def _third(params, P, Q, ops, same: bool):
    return _third_tangent(params, P, ops) if same else _third_chord(params, P, Q, ops)


def add(params: CurveParams, P: Point, Q: Point) -> Point:
    """Group law with identity O = (1 : -1 : 0):  P + Q = O * (P * Q)."""
    _require_on_curve(params, P)
    _require_on_curve(params, Q)
    ops = _FpOps(params.p)
    R = _third(params, P, Q, ops, same=(P == Q))
    R = normalize(params.p, R)
    Og = params.origin
    S = _third(params, Og, R, ops, same=(Og == R))
    return normalize(params.p, S)


def neg(params: CurveParams, P: Point) -> Point:
    _require_on_curve(params, P)
    ops = _FpOps(params.p)
    Og = params.origin
    R = _third(params, P, Og, ops, same=(P == Og))
    return normalize(params.p, R)


def mult(params: CurveParams, k: int, P: Point) -> Point:
    """k·P by double-and-add."""
    if k < 0:
        return mult(params, -k, neg(params, P))
    acc = params.origin
    base = P
    while k:
        if k & 1:
            acc = add(params, acc, base)
        k >>= 1
        if k:
            base = add(params, base, base)
    return acc


def sigma_pow(params: CurveParams, pt: Point, j: int) -> Point:
    """p^(sigma^j) = sigma^(-j)(p) = p - j·s.  Note the inverted exponent."""
    if j == 0:
        return pt
    return add(params, pt, mult(params, -j, params.s))


def sigma_raw(params_or_tuple, pt: Point):
    """The rational formula for the automorphism; None where undefined."""
    if isinstance(params_or_tuple, CurveParams):
        p, a, b, c = params_or_tuple.p, params_or_tuple.a, params_or_tuple.b, params_or_tuple.c
    else:
        p, a, b, c = params_or_tuple
    x, y, z = pt
    ix = (a * a % p * x % p * z - b * c % p * y % p * y) % p
    iy = (b * b % p * y % p * z - a * c % p * x % p * x) % p
    iz = (c * c % p * x % p * y - a * b % p * z % p * z) % p
    if ix == 0 and iy == 0 and iz == 0:
        return None
    return normalize(p, (ix, iy, iz))


# --- parameter validation -----------------------------------------------------


def _nondegenerate(p: int, a: int, b: int, c: int) -> bool:
    # division-free form of the classical condition: abc != 0 and
    # ((a^3+b^3+c^3)/(3abc))^3 != 1
    if a % p == 0 or b % p == 0 or c % p == 0:
        return False
    m3 = (pow(a, 3, p) + pow(b, 3, p) + pow(c, 3, p)) % p
    return pow(m3, 3, p) != 27 * pow(a, 3, p) % p * pow(b, 3, p) % p * pow(c, 3, p) % p


def _relation_coeffs(a: int, b: int, c: int):
    """The three quadratic relations as lists of (coeff, i, j) with x_i x_j."""
    rels = []
    for i in range(3):
        rels.append([(a, i, (i + 1) % 3), (b, (i + 1) % 3, i), (c, (i + 2) % 3, (i + 2) % 3)])
    return rels


def _relations_vanish(p, a, b, c, q: Point, r: Point) -> bool:
    for rel in _relation_coeffs(a, b, c):
        acc = 0
        for coeff, i, j in rel:
            acc += coeff * q[i] % p * r[j]
        if acc % p != 0:
            return False
    return True


def validate_params(a: int, b: int, c: int, p: int, *, order_floor: int,
                    seed: int = 0, probes: int = 40) -> CurveParams:
    """Build CurveParams: nondegeneracy, sigma bootstrap, order floor, orientation.

    Raises DegenerateParams / FormulaDegenerate / TranslationMismatch /
    SmallOrder / OrientationFailure.
    """
    a %= p
    b %= p
    c %= p
    if p <= 3:
        raise DegenerateParams("p must be an odd prime > 3")
    if not _nondegenerate(p, a, b, c):
        raise DegenerateParams(f"(a,b,c)=({a},{b},{c}) degenerate mod {p}")

    # provisional params with trivial translation; enough for add/neg/mult
    origin = normalize(p, O_COORDS)
    prov = CurveParams(p=p, a=a, b=b, c=c, s=origin, s_raw=origin, orient=1,
                       order_floor=order_floor)
    if not on_curve(prov, origin):
        raise DegenerateParams("base point (1:-1:0) not on E")

    # bootstrap the translation point: sigma(O) - O = sigma(O)
    s_raw = sigma_raw((p, a, b, c), origin)
    if s_raw is None or not on_curve(prov, s_raw):
        # fall back to probing points off the indeterminacy locus
        s_raw = None
        probe_rng = np.random.default_rng([seed, 0xC0FFEE])
        for _ in range(20):
            q = find_point(prov, probe_rng)
            img = sigma_raw((p, a, b, c), q)
            if img is not None and on_curve(prov, img):
                s_raw = add(prov, img, neg(prov, q))
                break
        if s_raw is None:
            raise FormulaDegenerate("automorphism formula undefined at all probes")

    prov = CurveParams(p=p, a=a, b=b, c=c, s=s_raw, s_raw=s_raw, orient=1,
                       order_floor=order_floor)

    # order floor for the translation point
    acc = origin
    for j in range(1, order_floor + 1):
        acc = add(prov, acc, s_raw)
        if acc == origin:
            raise SmallOrder(f"translation point has order {j} <= floor {order_floor}")

    # cross-check: the formula is translation by s_raw
    rng = np.random.default_rng([seed, 0x516117])
    for _ in range(20):
        q = find_point(prov, rng)
        img = sigma_raw((p, a, b, c), q)
        if img is None:
            continue
        if img != add(prov, q, s_raw):
            raise TranslationMismatch(
                f"formula at {q} gives {img}, translation gives {add(prov, q, s_raw)}")

    # orientation: relations must vanish on exactly one of the two graphs
    rng = np.random.default_rng([seed, 0x071E17])
    plus_ok = True
    minus_ok = True
    s_neg = neg(prov, s_raw)
    for _ in range(probes):
        q = find_point(prov, rng)
        if not _relations_vanish(p, a, b, c, q, add(prov, q, s_raw)):
            plus_ok = False
        if not _relations_vanish(p, a, b, c, q, add(prov, q, s_neg)):
            minus_ok = False
        if not plus_ok and not minus_ok:
            break
    if plus_ok == minus_ok:
        raise OrientationFailure(
            f"relation vanishing on graphs: +1 -> {plus_ok}, -1 -> {minus_ok}")
    orient = 1 if plus_ok else -1
    s_eff = s_raw if orient == 1 else s_neg
    return CurveParams(p=p, a=a, b=b, c=c, s=s_eff, s_raw=s_raw, orient=orient,
                       order_floor=order_floor)


# --- deterministic point search ------------------------------------------------


def _poly_trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_mulmod(f, g, h, p):
    out = [0] * (len(f) + len(g) - 1) if f and g else []
    for i, fc in enumerate(f):
        if fc == 0:
            continue
        for j, gc in enumerate(g):
            out[i + j] = (out[i + j] + fc * gc) % p
    return _poly_divmod(out, h, p)[1]


def _poly_divmod(f, g, p):
    f = list(f)
    g = _poly_trim(list(g))
    if not g:
        raise ZeroDivisionError
    dg = len(g) - 1
    inv = pow(g[-1], p - 2, p)
    q = [0] * max(0, len(f) - dg)
    while len(_poly_trim(f)) - 1 >= dg:
        d = len(f) - 1
        coef = f[-1] * inv % p
        q[d - dg] = coef
        for i in range(dg + 1):
            f[d - dg + i] = (f[d - dg + i] - coef * g[i]) % p
        f = _poly_trim(f)
    return q, f


def _poly_gcd(f, g, p):
    f = _poly_trim(list(f))
    g = _poly_trim(list(g))
    while g:
        f, g = g, _poly_divmod(f, g, p)[1]
    if f:
        inv = pow(f[-1], p - 2, p)
        f = [c * inv % p for c in f]
    return f


def _poly_powmod(base, e, h, p):
    result = [1]
    base = _poly_divmod(list(base), h, p)[1]
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, h, p)
        base = _poly_mulmod(base, base, h, p)
        e >>= 1
    return result


def poly_roots(coeffs, p: int, rng) -> list[int]:
    """Distinct roots in F_p of a polynomial given by [c0, c1, ...]; deg <= 3 use."""
    f = _poly_trim([c % p for c in coeffs])
    if not f:
        raise ValueError("zero polynomial")
    if len(f) == 1:
        return []
    # product of distinct linear factors: gcd(x^p - x, f)
    xp = _poly_powmod([0, 1], p, f, p)
    xp_minus_x = list(xp) + [0] * (2 - len(xp)) if len(xp) < 2 else list(xp)
    while len(xp_minus_x) < 2:
        xp_minus_x.append(0)
    xp_minus_x[1] = (xp_minus_x[1] - 1) % p
    g = _poly_gcd(f, xp_minus_x, p)
    return sorted(_split_linear(g, p, rng))


def _split_linear(g, p, rng) -> list[int]:
    g = _poly_trim(list(g))
    deg = len(g) - 1
    if deg <= 0:
        return []
    if deg == 1:
        return [(-g[0]) * pow(g[1], p - 2, p) % p]
    # Cantor-Zassenhaus split on a product of distinct linear factors
    for _ in range(64):
        delta = int(rng.integers(0, p))
        h = _poly_powmod([delta, 1], (p - 1) // 2, g, p)
        h = _poly_trim(list(h))
        if not h:
            continue
        h[0] = (h[0] - 1) % p
        d = _poly_gcd(g, h, p)
        if 0 < len(d) - 1 < deg:
            q, r = _poly_divmod(g, d, p)
            assert not _poly_trim(r)
            return _split_linear(d, p, rng) + _split_linear(q, p, rng)
    raise NoPointFound("root splitting failed to converge")


def find_point(params: CurveParams, rng, avoid: frozenset | set = frozenset(),
               tries: int = 4000) -> Point:
    """Deterministic (given rng state) smooth point search on E.

    Skips the identity, small multiples of the translation point, and
    anything in `avoid`.
    """
    p = params.p
    ops = _FpOps(p)
    m3 = (pow(params.a, 3, p) + pow(params.b, 3, p) + pow(params.c, 3, p)) % p
    abc = params.a * params.b % p * params.c % p
    small = {params.origin}
    if params.s != params.origin:
        for k in range(1, 9):
            small.add(mult(params, k, params.s))
            small.add(mult(params, -k, params.s))
    for _ in range(tries):
        t = int(rng.integers(0, p))
        # chart z = 1, x = t: -abc y^3 + (m3 t) y - abc (t^3 + 1) = 0
        coeffs = [(-abc) * (pow(t, 3, p) + 1) % p, m3 * t % p, 0, (-abc) % p]
        for y0 in poly_roots(coeffs, p, rng):
            pt = normalize(p, (t, y0, 1))
            if pt in small or pt in avoid:
                continue
            if not on_curve(params, pt):
                continue
            g = gradient(params, pt, ops)
            if all(ops.is_zero(c) for c in g):
                continue
            return pt
    raise NoPointFound(f"no usable point after {tries} attempts")


# --- jets ---------------------------------------------------------------------


@dataclass(frozen=True)
class JetPoint:
    """Order-m formal neighbourhood of a smooth point, on the curve mod eps^m."""

    base: Point
    coords: tuple
    order: int


def tangent_jet(params: CurveParams, pt: Point, m: int) -> JetPoint:
    """Jet with eps-linear part a nonzero tangent vector, curve eq 0 mod eps^m."""
    _require_on_curve(params, pt)
    if m == 1:
        jops = _JetOps(params.p, 1)
        return JetPoint(pt, tuple(jops.lift(c) for c in pt), 1)
    p = params.p
    ops = _FpOps(p)
    g = gradient(params, pt, ops)
    ipiv = next(i for i, c in enumerate(pt) if c)
    others = [i for i in range(3) if i != ipiv]
    solved = next((i for i in others if not ops.is_zero(g[i])), None)
    if solved is None:
        raise SingularPoint(f"gradient vanishes transversally at {pt}")
    param = next(i for i in others if i != solved)

    jops = _JetOps(p, m)
    coords = [None, None, None]
    coords[ipiv] = Jet.constant(p, pt[ipiv], m)
    coords[param] = Jet.constant(p, pt[param], m) + Jet.eps(p, m)
    c = Jet.constant(p, pt[solved], m)
    for _ in range(m + 1):
        coords[solved] = c
        fval = curve_poly(params, coords, jops)
        if fval.is_zero():
            break
        deriv = gradient(params, coords, jops)[solved]
        c = c - fval * deriv.inverse()
    coords[solved] = c
    if not curve_poly(params, coords, jops).is_zero():
        raise SingularPoint(f"jet lift failed to converge at {pt}")
    return JetPoint(pt, tuple(coords), m)


def translate_jet(params: CurveParams, jp: JetPoint, q: Point) -> JetPoint:
    """Group-law translate of a jet point by an exact point (chord over jets)."""
    if q == params.origin:
        return jp
    jops = _JetOps(params.p, jp.order)
    Q = tuple(jops.lift(c) for c in q)
    base_sum = add(params, jp.base, q)
    if jp.base == q:
        raise SingularPoint("jet translate hit the doubling locus")
    R = _third_chord(params, jp.coords, Q, jops)
    R = normalize_jets(R)
    Og = tuple(jops.lift(c) for c in params.origin)
    base_R = tuple(c.coeffs[0] for c in R)
    if base_R == params.origin:
        raise SingularPoint("jet translate passed through the identity")
    S = _third_chord(params, Og, R, jops)
    S = normalize_jets(S)
    out = JetPoint(base_sum, S, jp.order)
    if tuple(c.coeffs[0] for c in S) != base_sum:
        raise SingularPoint("jet translate disagreed with the base group law")
    return out
