"""Session configuration and the divisor expression DSL.

Config files are `key = value` lines with `#` comments.  Named points
are declared as `point.P = auto` (derived deterministically from the
seed) or `point.P = x:y:z` with explicit projective coordinates.

Divisor grammar:

    divisor := term (('+'|'-') term)*
    term    := [UINT '*'] NAME ['@' INT]

`P@j` denotes the twist p^(sigma^j) = sigma^(-j)(P).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError, UnknownPoint, ValidationError

MAX_PRIME = 1 << 25  # keeps every int64 accumulation in the kernels exact

_DEFAULTS = {
    "window_s": 12,
    "window_b": 15,
    "jet_cap": 4,
    "seed": 0,
}

_INT_KEYS = {"prime", "a", "b", "c", "seed", "window_s", "window_b",
             "jet_cap", "order_floor", "k_orbit"}


@dataclass
class SessionConfig:
    prime: int
    a: int
    b: int
    c: int
    seed: int = 0
    window_s: int = 12
    window_b: int = 15
    jet_cap: int = 4
    order_floor: int | None = None
    k_orbit: int | None = None
    points: dict = field(default_factory=dict)  # name -> "auto" | (x, y, z)

    def __post_init__(self):
        if self.order_floor is None:
            self.order_floor = 4 * self.window_s + 64
        if self.k_orbit is None:
            self.k_orbit = 2 * self.window_s + 8
        if not self.points:
            self.points = {"P": "auto", "Q": "auto", "R": "auto"}

    def validate(self):
        if not is_prime(self.prime):
            raise ValidationError(f"prime = {self.prime} is not prime")
        if self.prime in (2, 3):
            raise ValidationError("characteristic 2 and 3 are unsupported")
        if self.prime >= MAX_PRIME:
            raise ValidationError(f"prime must be < 2^25, got {self.prime}")
        if self.a % self.prime == 0 or self.b % self.prime == 0 or self.c % self.prime == 0:
            raise ValidationError("a, b, c must be nonzero mod p")
        if self.window_s < 4:
            raise ValidationError("window_s must be at least 4")
        if self.window_b < self.window_s:
            raise ValidationError("window_b must be >= window_s")
        if not 1 <= self.jet_cap <= 8:
            raise ValidationError("jet_cap must be in [1, 8]")
        for name, spec in self.points.items():
            if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", name):
                raise ValidationError(f"bad point name {name!r}")
            if spec != "auto" and (not isinstance(spec, tuple) or len(spec) != 3):
                raise ValidationError(f"point {name}: expected 'auto' or x:y:z")
        return self

    def canonical_text(self) -> str:
        lines = [
            f"prime = {self.prime}",
            f"a = {self.a}",
            f"b = {self.b}",
            f"c = {self.c}",
            f"seed = {self.seed}",
            f"window_s = {self.window_s}",
            f"window_b = {self.window_b}",
            f"jet_cap = {self.jet_cap}",
            f"order_floor = {self.order_floor}",
            f"k_orbit = {self.k_orbit}",
        ]
        for name in sorted(self.points):
            spec = self.points[name]
            val = spec if spec == "auto" else ":".join(str(v) for v in spec)
            lines.append(f"point.{name} = {val}")
        return "\n".join(lines) + "\n"


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for 64-bit inputs."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for base in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(base, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def parse_config(text: str) -> SessionConfig:
    """Parse and validate a config; line numbers are reported on errors."""
    values: dict = {}
    points: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"line {lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if not val:
            raise ParseError(f"line {lineno}: empty value for {key!r}")
        if key.startswith("point."):
            name = key[len("point."):]
            if name in points:
                raise ParseError(f"line {lineno}: duplicate point {name!r}")
            if val == "auto":
                points[name] = "auto"
            else:
                m = re.fullmatch(r"\(?\s*(-?\d+)\s*:\s*(-?\d+)\s*:\s*(-?\d+)\s*\)?", val)
                if not m:
                    raise ParseError(f"line {lineno}: bad coordinates {val!r}")
                points[name] = tuple(int(g) for g in m.groups())
        elif key in _INT_KEYS:
            if key in values:
                raise ParseError(f"line {lineno}: duplicate key {key!r}")
            try:
                values[key] = int(val)
            except ValueError:
                raise ParseError(f"line {lineno}: {key} must be an integer") from None
        else:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
    missing = [k for k in ("prime", "a", "b", "c") if k not in values]
    if missing:
        raise ValidationError(f"missing required keys: {', '.join(missing)}")
    cfg = SessionConfig(
        prime=values["prime"], a=values["a"], b=values["b"], c=values["c"],
        seed=values.get("seed", _DEFAULTS["seed"]),
        window_s=values.get("window_s", _DEFAULTS["window_s"]),
        window_b=values.get("window_b", _DEFAULTS["window_b"]),
        jet_cap=values.get("jet_cap", _DEFAULTS["jet_cap"]),
        order_floor=values.get("order_floor"),
        k_orbit=values.get("k_orbit"),
        points=points,
    )
    return cfg.validate()


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z][A-Za-z0-9_]*)"
                    r"|(?P<op>[+\-*@()])|(?P<bad>\S))")


def tokenize_divisor(expr: str):
    tokens = []
    pos = 0
    expr = expr.strip()
    while pos < len(expr):
        if expr[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(expr, pos)
        if not m or m.group("bad"):
            raise ParseError(f"divisor: unexpected character at {expr[pos:]!r}")
        if m.group("num") is not None:
            tokens.append(("num", int(m.group("num"))))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name")))
        else:
            tokens.append(("op", m.group("op")))
        pos = m.end()
    return tokens


def parse_divisor_terms(expr: str):
    """Parse to a list of (sign*mult, name, twist) without resolving points."""
    tokens = tokenize_divisor(expr)
    if not tokens:
        raise ParseError("empty divisor expression")
    out = []
    i = 0
    sign = 1
    expect_term = True
    while i < len(tokens):
        kind, val = tokens[i]
        if expect_term:
            mult = 1
            if kind == "num":
                mult = val
                i += 1
                if i < len(tokens) and tokens[i] == ("op", "*"):
                    i += 1
                else:
                    raise ParseError("divisor: integer must be followed by '*'")
                if i >= len(tokens):
                    raise ParseError("divisor: dangling '*'")
                kind, val = tokens[i]
            if kind != "name":
                raise ParseError(f"divisor: expected point name, got {val!r}")
            name = val
            i += 1
            twist_j = 0
            if i < len(tokens) and tokens[i] == ("op", "@"):
                i += 1
                neg = False
                if i < len(tokens) and tokens[i] == ("op", "-"):
                    neg = True
                    i += 1
                if i >= len(tokens) or tokens[i][0] != "num":
                    raise ParseError("divisor: '@' needs an integer twist")
                twist_j = -tokens[i][1] if neg else tokens[i][1]
                i += 1
            out.append((sign * mult, name, twist_j))
            expect_term = False
        else:
            if kind != "op" or val not in "+-":
                raise ParseError(f"divisor: expected '+' or '-', got {val!r}")
            sign = 1 if val == "+" else -1
            i += 1
            expect_term = True
    if expect_term:
        raise ParseError("divisor: trailing operator")
    return out


def resolve_divisor(terms, named_points, params):
    """Turn parsed terms into a Divisor using the session's named points."""
    from . import curve as curve_mod
    from .divisors import Divisor

    d = Divisor.zero()
    for mult, name, twist_j in terms:
        if name not in named_points:
            raise UnknownPoint(f"point {name!r} is not declared in the config")
        pt = named_points[name]
        if twist_j:
            pt = curve_mod.sigma_pow(params, pt, twist_j)
        d = d + Divisor.from_dict({pt: mult})
    return d


def parse_divisor(expr: str, named_points, params):
    return resolve_divisor(parse_divisor_terms(expr), named_points, params)
