"""Exact rational scalars, planar vectors, 2x2 matrices and affine maps.

Everything here is exact. Scalars are ``gmpy2.mpq`` values, which are always
kept in lowest terms with a positive denominator.
"""
from __future__ import annotations

import re
from typing import NamedTuple, Union

from gmpy2 import mpq

Rational = type(mpq(0))
RationalLike = Union[int, str, "Rational"]

_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+(\s*/\s*[+-]?\d+)?\s*$")


def Q(value, den=None) -> Rational:
    """Coerce ``value`` (int, str "p/q", Fraction or mpq) to an exact rational.

    >>> Q("10/4")
    mpq(5,2)
    """
    if den is not None:
        return mpq(value, den)
    if isinstance(value, str):
        if not _RATIONAL_RE.match(value):
            raise ValueError(f"not a rational number: {value!r}")
        num, _, d = value.replace(" ", "").partition("/")
        return mpq(int(num), int(d) if d else 1)
    if isinstance(value, float):
        raise TypeError("floats are not accepted in exact arithmetic")
    return mpq(value)


def rat_str(r) -> str:
    """Serialize as "p/q", or "p" when the denominator is one."""
    return str(mpq(r))


def sign_of(r) -> int:
    if r > 0:
        return 1
    if r < 0:
        return -1
    return 0


class Vec(NamedTuple):
    x: Rational
    y: Rational

    def __add__(self, o):
        return Vec(self.x + o.x, self.y + o.y)

    def __sub__(self, o):
        return Vec(self.x - o.x, self.y - o.y)

    def __neg__(self):
        return Vec(-self.x, -self.y)

    def __mul__(self, s):
        return Vec(self.x * s, self.y * s)

    __rmul__ = __mul__

    def dot(self, o):
        return self.x * o.x + self.y * o.y

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def to_json(self):
        return [rat_str(self.x), rat_str(self.y)]


def vec(x, y) -> Vec:
    return Vec(Q(x), Q(y))


ORIGIN = Vec(mpq(0), mpq(0))


def wedge(u: Vec, v: Vec):
    """Signed area ``u.x*v.y - u.y*v.x`` of the parallelogram spanned by u, v."""
    return u.x * v.y - u.y * v.x


def reflect_x(p: Vec) -> Vec:
    """The mirror ``(x, y) -> (-x, y)`` in the vertical axis."""
    return Vec(-p.x, p.y)


class Mat(NamedTuple):
    """Row-major 2x2 matrix ``[[a, b], [c, d]]``."""

    a: Rational
    b: Rational
    c: Rational
    d: Rational

    def __matmul__(self, o):
        if isinstance(o, Mat):
            return Mat(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                       self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)
        return Vec(self.a * o.x + self.b * o.y, self.c * o.x + self.d * o.y)

    def __neg__(self):
        return Mat(-self.a, -self.b, -self.c, -self.d)

    def det(self):
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "Mat":
        det = self.det()
        if det == 0:
            raise ZeroDivisionError("singular matrix")
        return Mat(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    def to_json(self):
        return [[rat_str(v) for v in row] for row in self.rows()]


def mat(a, b, c, d) -> Mat:
    return Mat(Q(a), Q(b), Q(c), Q(d))


IDENTITY = mat(1, 0, 0, 1)


class AffineMap(NamedTuple):
    """``p -> linear @ p + translation``."""

    linear: Mat
    translation: Vec

    def __call__(self, p: Vec) -> Vec:
        return self.linear @ p + self.translation

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """The map ``p -> self(inner(p))``."""
        return AffineMap(self.linear @ inner.linear, self(inner.translation))

    def inverse(self) -> "AffineMap":
        inv = self.linear.inverse()
        return AffineMap(inv, -(inv @ self.translation))


def translation(v: Vec) -> AffineMap:
    return AffineMap(IDENTITY, v)


def apply_affine(m: AffineMap, p: Vec) -> Vec:
    return m(p)


def orient(a: Vec, b: Vec, c: Vec):
    """Twice the signed area of triangle abc; positive when counterclockwise."""
    return wedge(b - a, c - a)
