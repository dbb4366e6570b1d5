"""Exact scalar arithmetic and dense subspace algebra over a prime field.

Scalars are plain Python ints reduced mod p; matrices are int64 numpy
arrays.  A `Subspace` is stored in reduced row echelon form, which makes
it a canonical representative: two subspaces are equal iff their arrays
are identical.

The truncated jet ring k[eps]/(eps^m) lives here too; it is the exact
replacement for "vanishing to order m" at a curve point.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import MixedAmbient, MixedLength
from .kernels import rref_mod


class PrimeField:
    """Arithmetic context for F_p, p an odd prime, p != 3."""

    def __init__(self, p: int):
        self.p = int(p)

    def add(self, x: int, y: int) -> int:
        return (x + y) % self.p

    def sub(self, x: int, y: int) -> int:
        return (x - y) % self.p

    def mul(self, x: int, y: int) -> int:
        return x * y % self.p

    def neg(self, x: int) -> int:
        return -x % self.p

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(x, self.p - 2, self.p)

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            return pow(self.inv(x), -e, self.p)
        return pow(x % self.p, e, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __repr__(self):
        return f"PrimeField({self.p})"


class Jet:
    """Element of k[eps]/(eps^m): coeffs[j] is the eps^j coefficient."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Sequence[int]):
        self.p = p
        self.coeffs = tuple(int(c) % p for c in coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @classmethod
    def constant(cls, p: int, value: int, order: int) -> "Jet":
        return cls(p, (value,) + (0,) * (order - 1))

    @classmethod
    def eps(cls, p: int, order: int) -> "Jet":
        c = [0] * order
        if order > 1:
            c[1] = 1
        return cls(p, c)

    def is_unit(self) -> bool:
        return self.coeffs[0] != 0

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.order != self.order or other.p != self.p:
                raise MixedLength("jet order/modulus mismatch")
            return other
        return Jet.constant(self.p, int(other), self.order)

    def __add__(self, other):
        o = self._coerce(other)
        return Jet(self.p, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return Jet(self.p, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return Jet(self.p, [-a for a in self.coeffs])

    def __mul__(self, other):
        o = self._coerce(other)
        m = self.order
        out = [0] * m
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(m - i):
                out[i + j] = (out[i + j] + a * o.coeffs[j]) % self.p
        return Jet(self.p, out)

    __rmul__ = __mul__

    def inverse(self) -> "Jet":
        """Power-series inverse; requires a unit constant term."""
        if not self.is_unit():
            raise ZeroDivisionError("jet with nilpotent constant term has no inverse")
        p, m = self.p, self.order
        inv0 = pow(self.coeffs[0], p - 2, p)
        out = [inv0] + [0] * (m - 1)
        # solve sum_{j<=i} self[j] * out[i-j] = 0 for i >= 1
        for i in range(1, m):
            acc = 0
            for j in range(1, i + 1):
                acc += self.coeffs[j] * out[i - j]
            out[i] = -acc * inv0 % p
        return Jet(p, out)

    def __eq__(self, other):
        return (
            isinstance(other, Jet)
            and other.p == self.p
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __repr__(self):
        return f"Jet{self.coeffs}"


class Subspace:
    """Row space of an RREF matrix over F_p; the canonical form of a span."""

    __slots__ = ("p", "ambient", "mat", "pivots")

    def __init__(self, p: int, ambient: int, mat: np.ndarray, pivots: np.ndarray):
        self.p = p
        self.ambient = ambient
        self.mat = mat
        self.pivots = pivots

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @classmethod
    def zero(cls, p: int, ambient: int) -> "Subspace":
        return cls(p, ambient, np.zeros((0, ambient), dtype=np.int64),
                   np.empty(0, dtype=np.int64))

    @classmethod
    def full(cls, p: int, ambient: int) -> "Subspace":
        return cls(p, ambient, np.eye(ambient, dtype=np.int64),
                   np.arange(ambient, dtype=np.int64))

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.p == other.p
            and self.ambient == other.ambient
            and self.mat.shape == other.mat.shape
            and np.array_equal(self.mat, other.mat)
        )

    def __hash__(self):
        return hash((self.p, self.ambient, self.mat.tobytes()))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, p={self.p})"

    def reduce(self, vecs: np.ndarray) -> np.ndarray:
        """Residual of row vector(s) after elimination against this basis."""
        v = np.atleast_2d(np.asarray(vecs, dtype=np.int64)) % self.p
        if v.shape[1] != self.ambient:
            raise MixedAmbient("vector length != ambient dimension")
        if self.dim:
            coeff = v[:, self.pivots]
            v = (v - coeff @ self.mat) % self.p
        return v if np.asarray(vecs).ndim > 1 else v[0]

    def contains_vector(self, vec) -> bool:
        return not self.reduce(vec).any()

    def coords(self, vec) -> np.ndarray:
        """Coordinates of `vec` over this basis; raises if not in the span."""
        v = np.asarray(vec, dtype=np.int64) % self.p
        c = v[self.pivots]
        if ((v - c @ self.mat) % self.p).any():
            raise ValueError("vector not in subspace")
        return c

    def complement_conditions(self) -> "Subspace":
        """Annihilator: functionals (as row vectors) vanishing on this space."""
        n, r = self.ambient, self.dim
        free = np.setdiff1d(np.arange(n), self.pivots)
        out = np.zeros((len(free), n), dtype=np.int64)
        for k, f in enumerate(free):
            out[k, f] = 1
            out[k, self.pivots] = (-self.mat[:, f]) % self.p
        return rref_basis(out, self.p, ambient=n)


def rref_basis(rows, p: int, ambient: int | None = None) -> Subspace:
    """Canonical Subspace spanned by `rows` (iterable of equal-length vectors)."""
    if isinstance(rows, np.ndarray):
        mat = np.atleast_2d(rows).astype(np.int64)
    else:
        rows = [np.asarray(r, dtype=np.int64) for r in rows]
        if rows:
            lengths = {len(r) for r in rows}
            if len(lengths) > 1:
                raise MixedLength(f"vector lengths differ: {sorted(lengths)}")
            mat = np.vstack(rows)
        else:
            if ambient is None:
                raise MixedLength("empty row list needs an explicit ambient dimension")
            mat = np.zeros((0, ambient), dtype=np.int64)
    if ambient is None:
        ambient = mat.shape[1]
    elif mat.shape[1] != ambient:
        if mat.shape[0] == 0:
            mat = np.zeros((0, ambient), dtype=np.int64)
        else:
            raise MixedLength("rows do not match the requested ambient dimension")
    red, piv = rref_mod(mat, p)
    return Subspace(p, ambient, red, piv)


def _check_same_ambient(spaces: Iterable[Subspace]):
    spaces = list(spaces)
    if not spaces:
        raise MixedAmbient("need at least one subspace")
    amb = spaces[0].ambient
    p = spaces[0].p
    for s in spaces[1:]:
        if s.ambient != amb or s.p != p:
            raise MixedAmbient("ambient dimensions or moduli differ")
    return spaces, amb, p


def subspace_sum(*spaces: Subspace) -> Subspace:
    spaces, amb, p = _check_same_ambient(spaces)
    mats = [s.mat for s in spaces if s.dim]
    if not mats:
        return Subspace.zero(p, amb)
    return rref_basis(np.vstack(mats), p, ambient=amb)


def subspace_meet(spaces: Sequence[Subspace]) -> Subspace:
    """Intersection, computed through annihilators (valid over any field)."""
    spaces, amb, p = _check_same_ambient(spaces)
    ann = subspace_sum(*[s.complement_conditions() for s in spaces])
    return ann.complement_conditions()


def subspace_contains(big: Subspace, small: Subspace) -> bool:
    _check_same_ambient([big, small])
    if small.dim == 0:
        return True
    return not big.reduce(small.mat).any()


def kernel_of_matrix(a: np.ndarray, p: int) -> Subspace:
    """Right kernel {x : a @ x = 0} as a Subspace of F_p^(a.shape[1])."""
    a = np.atleast_2d(np.asarray(a, dtype=np.int64))
    n = a.shape[1]
    red, piv = rref_mod(a, p)
    rs = Subspace(p, n, red, piv)
    return rs.complement_conditions()


def preimage_under(a: np.ndarray, target: Subspace, p: int) -> Subspace:
    """{x : a @ x in target}, a mapping F_p^n -> F_p^m columnwise."""
    a = np.asarray(a, dtype=np.int64)
    if a.shape[0] != target.ambient:
        raise MixedAmbient("map codomain != target ambient")
    residual = target.reduce(a.T % p)  # one row per source basis vector
    return kernel_of_matrix(residual.T, p)
