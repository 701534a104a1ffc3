"""Concrete groups: Z^n x| F, the discrete Heisenberg group, and word combinatorics.

Semidirect products use the single convention

    (v1, f1)(v2, f2) = (v1 + action(f1) v2, f1 f2)

with F a finite group given by its multiplication table and acting on Z^n
through unimodular integer matrices (column vectors).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .blind import Alphabet, BlindAutomaton, Edge, PreconditionError, Word
from .linalg import to_fraction_matrix
from .semilinear import Vec, vadd, vneg, zero

Matrix = tuple[tuple[int, ...], ...]


class GroupError(ValueError):
    """Group data violates a group law."""


def mat_vec(m: Matrix, v: Sequence[int]) -> Vec:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in m)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b)) if b else []
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def determinant(m: Matrix) -> int:
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in to_fraction_matrix(m)]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return int(det)


@dataclass(frozen=True)
class FiniteGroupTable:
    mult: tuple[tuple[int, ...], ...]
    inverse: tuple[int, ...]
    identity: int

    def __post_init__(self):
        object.__setattr__(self, "mult", tuple(tuple(int(x) for x in row) for row in self.mult))
        object.__setattr__(self, "inverse", tuple(int(x) for x in self.inverse))
        n = self.size
        rng = range(n)
        if any(len(row) != n for row in self.mult) or len(self.inverse) != n:
            raise GroupError("table shape mismatch")
        if not 0 <= self.identity < n:
            raise GroupError("identity out of range")
        if any(not 0 <= x < n for row in self.mult for x in row):
            raise GroupError("table entry out of range")
        m, e = self.mult, self.identity
        for a in rng:
            if m[e][a] != a or m[a][e] != a:
                raise GroupError(f"identity law fails at {a}")
            if m[a][self.inverse[a]] != e or m[self.inverse[a]][a] != e:
                raise GroupError(f"inverse law fails at {a}")
        for a in rng:
            for b in rng:
                for c in rng:
                    if m[m[a][b]][c] != m[a][m[b][c]]:
                        raise GroupError(f"associativity fails at {(a, b, c)}")

    @property
    def size(self) -> int:
        return len(self.mult)

    @classmethod
    def cyclic(cls, order: int) -> "FiniteGroupTable":
        mult = tuple(tuple((a + b) % order for b in range(order)) for a in range(order))
        return cls(mult, tuple((-a) % order for a in range(order)), 0)

    @classmethod
    def trivial(cls) -> "FiniteGroupTable":
        return cls.cyclic(1)


@dataclass(frozen=True)
class GroupElement:
    vec: Vec
    f: int

    def __post_init__(self):
        object.__setattr__(self, "vec", tuple(int(x) for x in self.vec))


@dataclass(frozen=True)
class VAGroup:
    """Z^n x| F with F acting by integer matrices of determinant +-1."""

    n: int
    F: FiniteGroupTable
    action: tuple[Matrix, ...]

    def __post_init__(self):
        action = tuple(tuple(tuple(int(x) for x in row) for row in m) for m in self.action)
        object.__setattr__(self, "action", action)
        if len(action) != self.F.size:
            raise GroupError("one action matrix per element of F is required")
        for f, m in enumerate(action):
            if len(m) != self.n or any(len(row) != self.n for row in m):
                raise GroupError(f"action matrix {f} is not {self.n}x{self.n}")
            if abs(determinant(m)) != 1:
                raise GroupError(f"action matrix {f} is not unimodular")
        if action[self.F.identity] != identity_matrix(self.n):
            raise GroupError("identity of F must act trivially")
        for a in range(self.F.size):
            for b in range(self.F.size):
                if action[self.F.mult[a][b]] != mat_mul(action[a], action[b]):
                    raise GroupError(f"action is not a homomorphism at {(a, b)}")

    @classmethod
    def free_abelian(cls, n: int) -> "VAGroup":
        return cls(n, FiniteGroupTable.trivial(), (identity_matrix(n),))

    @classmethod
    def infinite_dihedral(cls) -> "VAGroup":
        """Z x| C_2 with the generator of C_2 acting by -1."""
        return cls(1, FiniteGroupTable.cyclic(2), (((1,),), ((-1,),)))

    def identity(self) -> GroupElement:
        return GroupElement(zero(self.n), self.F.identity)

    def multiply(self, x: GroupElement, y: GroupElement) -> GroupElement:
        return GroupElement(vadd(x.vec, mat_vec(self.action[x.f], y.vec)), self.F.mult[x.f][y.f])

    def inverse(self, x: GroupElement) -> GroupElement:
        fi = self.F.inverse[x.f]
        return GroupElement(vneg(mat_vec(self.action[fi], x.vec)), fi)

    def contains(self, x: GroupElement) -> bool:
        return len(x.vec) == self.n and 0 <= x.f < self.F.size

    def key(self, x: GroupElement):
        return (x.vec, x.f)


@dataclass(frozen=True)
class GenMap:
    """A symmetric choice of generators: letter -> group element.

    Surjectivity onto the group is the caller's responsibility.
    """

    group: VAGroup
    alphabet: Alphabet
    images: Mapping[str, GroupElement]

    def __post_init__(self):
        images = dict(self.images)
        for x in self.alphabet:
            if x not in images:
                raise GroupError(f"letter {x!r} has no image")
            if not self.group.contains(images[x]):
                raise GroupError(f"image of {x!r} is not in the group")
        for x in self.alphabet:
            if images[self.alphabet.inverse(x)] != self.group.inverse(images[x]):
                raise GroupError(f"image of {self.alphabet.inverse(x)!r} is not the inverse of {x!r}")
        object.__setattr__(self, "images", images)

    @classmethod
    def from_generators(cls, group: VAGroup, gens: Mapping[str, GroupElement]) -> "GenMap":
        """Add x' -> x^-1 for every named generator."""
        alphabet = Alphabet.from_generators(gens)
        images = dict(gens)
        for x, g in gens.items():
            images[x + "'"] = group.inverse(g)
        return cls(group, alphabet, images)

    @classmethod
    def standard(cls, n: int, names: str = "abcdefgh") -> "GenMap":
        """Z^n with the unit vectors as generators."""
        G = VAGroup.free_abelian(n)
        gens = {names[i]: GroupElement(tuple(int(i == j) for j in range(n)), 0) for i in range(n)}
        return cls.from_generators(G, gens)


def evaluate(g: GenMap, w: Sequence[str]) -> GroupElement:
    """Left-to-right product of letter images."""
    G = g.group
    out = G.identity()
    for x in w:
        if x not in g.images:
            raise PreconditionError(f"unknown letter {x!r}")
        out = G.multiply(out, g.images[x])
    return out


def wp_member(g: GenMap, w: Sequence[str]) -> bool:
    return evaluate(g, w) == g.group.identity()


def build_wp_automaton(G: VAGroup, g: GenMap) -> BlindAutomaton:
    """Deterministic Z^n-automaton for the word problem of G.

    States are the elements of F; reading x with image (v_x, f_x) moves f
    to f f_x and adds action(f) v_x, so the state tracks the F-part of the
    prefix product and the counter tracks its Z^n-part.
    """
    if g.group != G:
        raise PreconditionError("generator images must lie in the given group")
    edges = []
    for f in range(G.F.size):
        for x in g.alphabet:
            img = g.images[x]
            edges.append(Edge(f, mat_vec(G.action[f], img.vec), x, G.F.mult[f][img.f]))
    states = tuple(range(G.F.size))
    return BlindAutomaton(G.n, g.alphabet, states, G.F.identity, frozenset({G.F.identity}), tuple(edges))


# ---------------------------------------------------------------------------
# Heisenberg group


@dataclass(frozen=True)
class HeisenbergElement:
    """The unitriangular integer matrix [[1, a, c], [0, 1, b], [0, 0, 1]]."""

    a: int
    b: int
    c: int

    def matrix(self) -> Matrix:
        return ((1, self.a, self.c), (0, 1, self.b), (0, 0, 1))

    @classmethod
    def from_matrix(cls, m: Matrix) -> "HeisenbergElement":
        if m[1][0] or m[2][0] or m[2][1] or m[0][0] != 1 or m[1][1] != 1 or m[2][2] != 1:
            raise GroupError("not unitriangular")
        return cls(m[0][1], m[1][2], m[0][2])

    def __mul__(self, other: "HeisenbergElement") -> "HeisenbergElement":
        return HeisenbergElement.from_matrix(mat_mul(self.matrix(), other.matrix()))

    def inverse(self) -> "HeisenbergElement":
        return HeisenbergElement(-self.a, -self.b, self.a * self.b - self.c)


HEISENBERG_LETTERS = {
    "x": HeisenbergElement(1, 0, 0), "x'": HeisenbergElement(-1, 0, 0),
    "y": HeisenbergElement(0, 1, 0), "y'": HeisenbergElement(0, -1, 0),
    "z": HeisenbergElement(0, 0, 1), "z'": HeisenbergElement(0, 0, -1),
}
HEISENBERG_IDENTITY = HeisenbergElement(0, 0, 0)
HEISENBERG_ALPHABET = Alphabet.from_generators("xyz")


def heisenberg_evaluate(w: Sequence[str]) -> HeisenbergElement:
    out = HEISENBERG_IDENTITY
    for x in w:
        try:
            out = out * HEISENBERG_LETTERS[x]
        except KeyError:
            raise PreconditionError(f"unknown letter {x!r}") from None
    return out


def heisenberg_wp(w: Sequence[str]) -> bool:
    return heisenberg_evaluate(w) == HEISENBERG_IDENTITY


class HeisenbergGroup:
    """Group oracle for ball counting."""

    alphabet = HEISENBERG_ALPHABET

    def identity(self):
        return HEISENBERG_IDENTITY

    def multiply(self, x, y):
        return x * y

    def key(self, x):
        return (x.a, x.b, x.c)


# ---------------------------------------------------------------------------
# two-letter words: exchange index, block swaps, interchange search


def exchange_index(w: Sequence[str], x: str = "x", y: str = "y") -> int:
    """Number of pairs i < j with w_i = y and w_j = x."""
    ys = total = 0
    for letter in w:
        if letter == y:
            ys += 1
        elif letter == x:
            total += ys
        else:
            raise PreconditionError(f"letter {letter!r} is not {x!r} or {y!r}")
    return total


def build_t1(n: int) -> Word:
    """x y x y^2 x y^3 ... x y^n."""
    if n < 1:
        raise PreconditionError("n must be at least 1")
    out: list[str] = []
    for k in range(1, n + 1):
        out.append("x")
        out.extend("y" * k)
    return tuple(out)


def t1_factorization(n: int, tail: Sequence[str] = ()) -> list[Word]:
    """v_1 w_1 ... w_n v_{n+1} with v_i = x, w_i = y^i and v_{n+1} = tail."""
    parts: list[Word] = []
    for k in range(1, n + 1):
        parts.append(("x",))
        parts.append(("y",) * k)
    parts.append(tuple(tail))
    return parts


def _check_factorization(parts: Sequence[Sequence[str]]) -> int:
    if len(parts) % 2 != 1:
        raise PreconditionError("factorization must be v_1 w_1 ... w_p v_{p+1}")
    p = len(parts) // 2
    for i in range(p):
        if len(parts[2 * i + 1]) < 1:
            raise PreconditionError(f"designated factor w_{i + 1} is empty")
    return p


def swap_blocks(parts: Sequence[Sequence[str]], r: int, s: int) -> Word:
    """The word v_1 w_1 ... with w_r and w_s exchanged (1-based, r < s)."""
    p = _check_factorization(parts)
    if not 1 <= r < s <= p:
        raise PreconditionError(f"need 1 <= r < s <= {p}, got r={r}, s={s}")
    parts = [tuple(x) for x in parts]
    parts[2 * r - 1], parts[2 * s - 1] = parts[2 * s - 1], parts[2 * r - 1]
    return tuple(x for part in parts for x in part)


def interchange_search(accept_fn: Callable[[Word], bool], w: Sequence[str],
                       parts: Sequence[Sequence[str]]) -> tuple[int, int] | None:
    """First pair r < s (lexicographic) whose swap keeps the word accepted, or None."""
    w = tuple(w)
    p = _check_factorization(parts)
    if tuple(x for part in parts for x in part) != w:
        raise PreconditionError("factorization does not spell the word")
    if p < 1:
        raise PreconditionError("need at least one designated factor")
    if not accept_fn(w):
        raise PreconditionError("the word itself is not accepted")
    for r in range(1, p + 1):
        for s in range(r + 1, p + 1):
            if accept_fn(swap_blocks(parts, r, s)):
                return r, s
    return None


def invert_word(w: Sequence[str]) -> Word:
    """Inverse with the apostrophe convention: (a b')^-1 = b a'."""
    return tuple(x[:-1] if x.endswith("'") else x + "'" for x in reversed(w))


def all_words(letters: Iterable[str], maxlen: int) -> Iterable[Word]:
    """Shortlex enumeration of words up to ``maxlen``."""
    from itertools import product
    letters = list(letters)
    for length in range(maxlen + 1):
        yield from product(letters, repeat=length)
