"""Group words over the involutions A, B, C and -I, and their matrices at c.

Words use the alphabet {A, B, C, -}; ``-`` is -I. ``D = BA`` and ``E = -CB``
are accepted as abbreviations when parsing, and ``F = CA`` is used internally
by the direction reduction.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product
from math import gcd

from gmpy2 import mpq

from .numeric import IDENTITY, Mat, Q, Vec, mat, rat_str, sign_of, vec, wedge
from .surface import HORIZONTAL, SLOPE_ONE, SurfaceHandle, cylinders

LETTERS = ("A", "B", "C", "N")  # N is -I
ABBREVIATIONS = {"D": ("B", "A"), "E": ("N", "C", "B"), "F": ("C", "A")}
INVERSES = {"D": ("A", "B"), "E": ("N", "B", "C"), "F": ("A", "C")}


@dataclass(frozen=True)
class GroupWord:
    """A word in the involutions; ``N`` stands for -I."""

    letters: tuple[str, ...] = ()

    def __post_init__(self):
        bad = set(self.letters) - set(LETTERS)
        if bad:
            raise ValueError(f"unknown letters {sorted(bad)}")

    @classmethod
    def parse(cls, text: str) -> "GroupWord":
        """Parse a string over A, B, C, D, E and ``-``, e.g. ``"ADE"`` or ``"-CB"``."""
        letters: list[str] = []
        for ch in text.strip():
            if ch == "-":
                letters.append("N")
            elif ch in ABBREVIATIONS:
                letters.extend(ABBREVIATIONS[ch])
            elif ch in "ABC":
                letters.append(ch)
            elif ch in "1 ":
                continue
            else:
                raise ValueError(f"bad word character {ch!r} in {text!r}")
        return cls(tuple(letters))

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + other.letters)

    def inverse(self) -> "GroupWord":
        # every letter is an involution
        return GroupWord(tuple(reversed(self.letters)))

    def reduced(self) -> "GroupWord":
        """Collect -I at the front and cancel adjacent repeated involutions."""
        negs = self.letters.count("N") % 2
        stack: list[str] = []
        for ch in self.letters:
            if ch == "N":
                continue
            if stack and stack[-1] == ch:
                stack.pop()
            else:
                stack.append(ch)
        return GroupWord(("N",) * negs + tuple(stack))

    def __str__(self):
        return "".join("-" if ch == "N" else ch for ch in self.letters)

    def __len__(self):
        return len(self.letters)


def word(text: str = "") -> GroupWord:
    return GroupWord.parse(text)


def generators(c) -> dict[str, Mat]:
    c = Q(c)
    return {
        "A": mat(-1, 0, 0, 1),
        "B": mat(-1, 2, 0, 1),
        "C": Mat(-c, c - 1, -c - 1, c),
        "N": mat(-1, 0, 0, -1),
    }


def matrix_D(c) -> Mat:
    return mat(1, 2, 0, 1)


def matrix_E(c) -> Mat:
    c = Q(c)
    return Mat(-c, c + 1, -c - 1, c + 2)


@dataclass(frozen=True)
class ConcreteMatrix:
    word: GroupWord
    c: mpq
    matrix: Mat

    def to_json(self):
        return {"word": str(self.word), "c": rat_str(self.c), "matrix": self.matrix.to_json()}


def realize(w: GroupWord | str, c, gens: dict[str, Mat] | None = None) -> ConcreteMatrix:
    """Multiply out the generator matrices of ``w`` at parameter ``c``."""
    if isinstance(w, str):
        w = GroupWord.parse(w)
    c = Q(c)
    if c < 1:
        raise ValueError("c must be >= 1")
    gens = gens or generators(c)
    m = IDENTITY
    for ch in w.letters:
        m = m @ gens[ch]
    return ConcreteMatrix(w, c, m)


def verify_relations(c, gens: dict[str, Mat] | None = None) -> dict[str, bool]:
    """Check the defining relations and the D, E abbreviations exactly."""
    c = Q(c)
    g = gens or generators(c)
    A, B, C, N = g["A"], g["B"], g["C"], g["N"]
    return {
        "A^2 = I": A @ A == IDENTITY,
        "B^2 = I": B @ B == IDENTITY,
        "C^2 = I": C @ C == IDENTITY,
        "(-I)^2 = I": N @ N == IDENTITY,
        "D = BA": B @ A == matrix_D(c),
        "E = (-I)CB": N @ C @ B == matrix_E(c),
        "det = +-1": all(m.det() in (1, -1) for m in (A, B, C, N)),
    }


def words_up_to(length: int, alphabet=LETTERS):
    for n in range(length + 1):
        for letters in product(alphabet, repeat=n):
            yield GroupWord(letters)


def freely_reduced_words(length: int, alphabet=("A", "B", "C")):
    """Nonempty words of at most ``length`` letters with no two equal neighbours."""
    frontier = [(ch,) for ch in alphabet]
    while frontier:
        nxt = []
        for letters in frontier:
            yield GroupWord(letters)
            if len(letters) < length:
                nxt.extend(letters + (ch,) for ch in alphabet if ch != letters[-1])
        frontier = nxt


def shear_conjugate(m) -> Mat:
    """``R [[1, m], [0, 1]] R^-1`` for R rotating horizontal to slope one.

    Conjugating by the basis matrix with columns (1, 1) and (-1, 1) gives the
    same result, since it is R scaled by sqrt(2).
    """
    m = Q(m)
    half = mpq(1, 2)
    return Mat((2 - m) * half, m * half, -m * half, (m + 2) * half)


def verify_parabolic(h: SurfaceHandle, direction: str, m, window: int) -> tuple[bool, Mat | None]:
    """Certify a multi-twist with multiplier ``m`` from the cylinder moduli.

    Returns ``(certified, derivative)``; the derivative is None when some
    ``m * modulus`` is not an integer.
    """
    m = Q(m)
    if m == 0:
        raise ValueError("m must be nonzero")
    moduli = [cyl.modulus for cyl in cylinders(h, direction, window)]
    if not all((m * M).denominator == 1 for M in moduli):
        return False, None
    if direction == HORIZONTAL:
        return True, mat(1, m, 0, 1)
    if direction == SLOPE_ONE:
        return True, shear_conjugate(m)
    raise ValueError(f"unknown direction {direction!r}")


class DirectionClass(str, Enum):
    HORIZONTAL_LIKE = "horizontal-like"
    SLOPE_ONE_LIKE = "slope-one-like"
    VERTICAL_LIKE = "vertical-like"


def primitive(v) -> tuple[int, int]:
    """Divide an integer vector by its gcd and make the first nonzero entry positive."""
    p, q = int(v[0]), int(v[1])
    if p == 0 and q == 0:
        raise ValueError("zero direction")
    g = gcd(p, q)
    p, q = p // g, q // g
    if p < 0 or (p == 0 and q < 0):
        p, q = -p, -q
    return p, q


def integer_direction(v: Vec) -> tuple[int, int]:
    """Clear denominators of a rational vector, keeping its ray."""
    x, y = Q(v[0]), Q(v[1])
    den = x.denominator * y.denominator
    p, q = int(x * den), int(y * den)
    g = gcd(p, q)
    if g == 0:
        raise ValueError("zero direction")
    return p // g, q // g


def classify_direction(v) -> DirectionClass:
    p, q = primitive(v)
    if q % 2 == 0:
        return DirectionClass.HORIZONTAL_LIKE
    if p % 2 == 0:
        return DirectionClass.VERTICAL_LIKE
    return DirectionClass.SLOPE_ONE_LIKE


BASES = {
    DirectionClass.HORIZONTAL_LIKE: (1, 0),
    DirectionClass.SLOPE_ONE_LIKE: (1, 1),
    DirectionClass.VERTICAL_LIKE: (0, 1),
}

_STEP_MATRICES = {
    # name -> (integer matrix applied to the vector, letters of its inverse in the word)
    "D": ((1, -2, 0, 1), ABBREVIATIONS["D"]),
    "D'": ((1, 2, 0, 1), INVERSES["D"]),
    "E": ((3, -2, 2, -1), ABBREVIATIONS["E"]),
    "E'": ((-1, 2, -2, 3), INVERSES["E"]),
    "F": ((1, 0, -2, 1), ABBREVIATIONS["F"]),
    "F'": ((1, 0, 2, 1), INVERSES["F"]),
}


def reduce_direction(v) -> tuple[GroupWord, tuple[int, int]]:
    """Write a primitive integer vector as ``+-W_1 . base`` with W over the generators.

    Greedy descent on |p| + |q|: each step applies the inverse of one of
    D, E, F = CA (or their inverses) and keeps the step with the smallest
    result, preferring D over E over F and positive exponents on ties.
    D and F alone always decrease the norm until a base vector is reached,
    so the descent terminates.
    """
    p, q = int(v[0]), int(v[1])
    if (p, q) == (0, 0):
        raise ValueError("zero direction")
    if gcd(p, q) != 1:
        raise ValueError(f"direction {(p, q)} is not primitive")
    letters: list[str] = []
    while abs(p) != abs(q) and p != 0 and q != 0:
        norm = abs(p) + abs(q)
        best = None
        for name, ((a, b, c, d), inv_letters) in _STEP_MATRICES.items():
            np_, nq = a * p + b * q, c * p + d * q
            n2 = abs(np_) + abs(nq)
            if n2 < norm and (best is None or n2 < best[0]):
                best = (n2, np_, nq, inv_letters)
        if best is None:
            raise AssertionError(f"no descent step from {(p, q)}")
        _, p, q, inv_letters = best
        letters.extend(inv_letters)
    if p != 0 and q != 0 and p != q:
        # (1, -1) = -A (1, 1)
        letters.append("A")
        p = -p
    if p != 0 and q != 0:
        base = (1, 1)
    elif q == 0:
        base = (1, 0)
    else:
        base = (0, 1)
    return GroupWord(tuple(letters)).reduced(), base


def phi_pair(w: GroupWord | str, base, c) -> tuple[Vec, Vec]:
    """Corresponding parabolic-fixed rays ``(W_c . base, W_1 . base)``."""
    c = Q(c)
    if c <= 1:
        raise ValueError("c must be > 1")
    b = vec(*base)
    return realize(w, c).matrix @ b, realize(w, 1).matrix @ b


def automorphism_on_holonomy(w: GroupWord | str, c, v: Vec) -> Vec:
    return realize(w, c).matrix @ v


def congruent_to_identity_mod2(m: Mat) -> bool:
    entries = (m.a, m.b, m.c, m.d)
    if any(Q(e).denominator != 1 for e in entries):
        return False
    a, b, c, d = (int(e) for e in entries)
    return a % 2 == 1 and d % 2 == 1 and b % 2 == 0 and c % 2 == 0


def wedge_sign(u: Vec, v: Vec) -> int:
    return sign_of(wedge(u, v))
