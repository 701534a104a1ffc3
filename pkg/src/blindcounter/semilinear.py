"""Linear and semilinear subsets of Z^n with certified search bounds.

Vectors are plain tuples of Python ints. A linear set is an offset plus a
finite list of period vectors; a semilinear set is a finite union of
linear sets. Membership and intersection are decided by searches whose
depth is bounded by the affine preimage constants (L, M) of a linear map,
so a negative answer is a proof of absence rather than a timeout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from . import kernels
from .config import DEFAULT, ResourceLimitError
from .linalg import left_kernel_vector, right_inverse

Vec = tuple[int, ...]


def norm(v: Sequence[int]) -> int:
    """Manhattan norm."""
    return sum(abs(x) for x in v)


def vadd(a: Sequence[int], b: Sequence[int]) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence[int], b: Sequence[int]) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vneg(a: Sequence[int]) -> Vec:
    return tuple(-x for x in a)


def vscale(k: int, a: Sequence[int]) -> Vec:
    return tuple(k * x for x in a)


def zero(n: int) -> Vec:
    return (0,) * n


# ---------------------------------------------------------------------------
# Linear maps and the affine preimage bound


@dataclass(frozen=True)
class LinearMap:
    """u -> u_1 x_1 + ... + u_p x_p from Z^p to Z^n; ``images`` holds the x_i."""

    images: tuple[Vec, ...]
    codomain_dim: int

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(tuple(int(c) for c in x) for x in self.images))
        for x in self.images:
            if len(x) != self.codomain_dim:
                raise ValueError(f"image {x} does not have dimension {self.codomain_dim}")

    @property
    def domain_dim(self) -> int:
        return len(self.images)

    def __call__(self, u: Sequence[int]) -> Vec:
        if len(u) != self.domain_dim:
            raise ValueError("argument has wrong dimension")
        out = [0] * self.codomain_dim
        for ui, x in zip(u, self.images):
            if ui:
                for k, xk in enumerate(x):
                    out[k] += ui * xk
        return tuple(out)


@dataclass(frozen=True)
class BoundConstants:
    """Every v in the image of N^p has a nonnegative preimage u with |u| <= L|v| + M."""

    L: Fraction
    M: Fraction

    def bound(self, v: Sequence[int]) -> Fraction:
        return self.L * norm(v) + self.M


@lru_cache(maxsize=None)
def _kernel(images: tuple[Vec, ...], n: int) -> Vec | None:
    return left_kernel_vector(images, n)


@lru_cache(maxsize=None)
def _inverse(images: tuple[Vec, ...], n: int):
    return right_inverse(images, n)


def _drop(images: tuple[Vec, ...], i: int) -> tuple[Vec, ...]:
    return images[:i] + images[i + 1:]


@lru_cache(maxsize=None)
def _lm(images: tuple[Vec, ...], n: int) -> tuple[Fraction, Fraction]:
    z = _kernel(images, n)
    if z is None:
        rows = _inverse(images, n)
        L = max((sum(abs(q) for q in row) for row in rows), default=Fraction(0))
        return Fraction(L), Fraction(0)
    c = max(z)
    q = max(norm(x) for x in images)
    subs = [_lm(_drop(images, i), n) for i in range(len(images))]
    L = max(s[0] for s in subs)
    M_prime = max(s[1] for s in subs)
    return L, L * c * q + M_prime + c


def compute_LM(sigma: LinearMap) -> BoundConstants:
    """Affine preimage constants for ``sigma``.

    Injective maps use a rational left inverse (L = largest row norm,
    M = 0). Otherwise an integer kernel vector z is found, and the
    constants of the p maps obtained by freezing one coordinate at zero are
    combined as L = max L_i, M = L*c*q + max M_i + c, with c the largest
    entry of z and q the largest image norm.
    """
    L, M = _lm(sigma.images, sigma.codomain_dim)
    return BoundConstants(L, M)


@lru_cache(maxsize=1 << 18)
def _preimage(images: tuple[Vec, ...], n: int, v: Vec) -> Vec | None:
    p = len(images)
    z = _kernel(images, n)
    if z is None:
        if p == 0:
            return () if not any(v) else None
        rows = _inverse(images, n)
        u = []
        for j in range(p):
            s = sum((v[k] * rows[k][j] for k in range(n) if v[k]), Fraction(0))
            if s.denominator != 1 or s < 0:
                return None
            u.append(int(s))
        u = tuple(u)
        return u if LinearMap(images, n)(u) == v else None
    # some nonnegative preimage has u_i < z_i at a coordinate with z_i > 0
    for i in range(p):
        if z[i] <= 0:
            continue
        sub = _drop(images, i)
        x = images[i]
        for ui in range(z[i]):
            rest = _preimage(sub, n, tuple(vk - ui * xk for vk, xk in zip(v, x)))
            if rest is not None:
                return rest[:i] + (ui,) + rest[i:]
    return None


def bounded_preimage(sigma: LinearMap, v: Sequence[int],
                     bounds: BoundConstants | None = None) -> Vec | None:
    """Some u in N^p with sigma(u) == v and |u| <= L|v| + M, or None if v is not in sigma(N^p).

    The search follows the constructive induction behind the bound, so it
    is complete and every result respects ``bounds``.
    """
    v = tuple(int(x) for x in v)
    if len(v) != sigma.codomain_dim:
        raise ValueError("vector has wrong dimension")
    u = _preimage(sigma.images, sigma.codomain_dim, v)
    if u is not None:
        b = bounds or compute_LM(sigma)
        assert norm(u) <= b.bound(v), "preimage exceeds certified bound"
    return u


# ---------------------------------------------------------------------------
# Linear and semilinear sets


@dataclass(frozen=True)
class LinearSet:
    """{offset + sum lambda_i periods_i : lambda in N^p}.

    Duplicate and zero periods are dropped on construction; neither changes
    the denoted set.
    """

    offset: Vec
    periods: tuple[Vec, ...] = ()

    def __post_init__(self):
        off = tuple(int(x) for x in self.offset)
        seen: dict[Vec, None] = {}
        for p in self.periods:
            p = tuple(int(x) for x in p)
            if len(p) != len(off):
                raise ValueError(f"period {p} does not match offset dimension {len(off)}")
            if any(p):
                seen.setdefault(p, None)
        object.__setattr__(self, "offset", off)
        object.__setattr__(self, "periods", tuple(seen))

    @property
    def dim(self) -> int:
        return len(self.offset)

    def period_map(self) -> LinearMap:
        return LinearMap(self.periods, self.dim)

    def negate(self) -> "LinearSet":
        return LinearSet(vneg(self.offset), tuple(vneg(p) for p in self.periods))

    def __add__(self, other: "LinearSet") -> "LinearSet":
        return LinearSet(vadd(self.offset, other.offset), self.periods + other.periods)

    def contains(self, v: Sequence[int]) -> bool:
        return linear_member(self, v) is not None

    def element(self, coeffs: Sequence[int]) -> Vec:
        out = self.offset
        for c, p in zip(coeffs, self.periods):
            out = vadd(out, vscale(c, p))
        return out

    def __str__(self):
        periods = ", ".join(str(p) for p in self.periods) or "-"
        return f"<{self.offset}; {periods}>"


def linear_member(S: LinearSet, v: Sequence[int]) -> Vec | None:
    """Coefficients lambda with S.offset + sum lambda_i S.periods_i == v, or None."""
    if len(v) != S.dim:
        raise ValueError("vector has wrong dimension")
    return bounded_preimage(S.period_map(), vsub(v, S.offset))


@dataclass(frozen=True)
class SemilinearSet:
    dim: int
    components: tuple[LinearSet, ...] = ()
    cap: int = field(default=DEFAULT.component_cap, compare=False, repr=False)

    def __post_init__(self):
        comps = tuple(dict.fromkeys(self.components))
        for c in comps:
            if c.dim != self.dim:
                raise ValueError(f"component {c} does not have dimension {self.dim}")
        if len(comps) > self.cap:
            raise ResourceLimitError(
                f"semilinear set has {len(comps)} components, cap is {self.cap}")
        object.__setattr__(self, "components", comps)

    @classmethod
    def empty(cls, dim: int) -> "SemilinearSet":
        return cls(dim, ())

    @classmethod
    def singleton(cls, v: Sequence[int]) -> "SemilinearSet":
        return cls(len(v), (LinearSet(tuple(v)),))

    @classmethod
    def linear(cls, offset: Sequence[int], periods: Iterable[Sequence[int]] = ()) -> "SemilinearSet":
        return cls(len(offset), (LinearSet(tuple(offset), tuple(map(tuple, periods))),))

    def is_empty(self) -> bool:
        return not self.components

    def __iter__(self) -> Iterator[LinearSet]:
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __contains__(self, v) -> bool:
        return member(self, v)

    def __or__(self, other):
        return union(self, other)

    def __add__(self, other):
        return minkowski_sum(self, other)

    def __neg__(self):
        return negate(self)

    def star(self):
        return star(self)

    def __str__(self):
        if not self.components:
            return "{}"
        return " u ".join(str(c) for c in self.components)


def _check_dims(S: SemilinearSet, T: SemilinearSet):
    if S.dim != T.dim:
        raise ValueError(f"dimension mismatch: {S.dim} vs {T.dim}")


def member(S: SemilinearSet, v: Sequence[int]) -> bool:
    if len(v) != S.dim:
        raise ValueError("vector has wrong dimension")
    return any(linear_member(c, v) is not None for c in S.components)


def negate(S: SemilinearSet) -> SemilinearSet:
    return SemilinearSet(S.dim, tuple(c.negate() for c in S.components), S.cap)


def minkowski_sum(S: SemilinearSet, T: SemilinearSet) -> SemilinearSet:
    """{s + t}: one component per pair of components."""
    _check_dims(S, T)
    cap = min(S.cap, T.cap)
    if len(S) * len(T) > cap:
        raise ResourceLimitError(f"sum would have {len(S) * len(T)} components, cap is {cap}")
    return SemilinearSet(S.dim, tuple(a + b for a in S.components for b in T.components), cap)


def union(S: SemilinearSet, T: SemilinearSet) -> SemilinearSet:
    _check_dims(S, T)
    return SemilinearSet(S.dim, S.components + T.components, min(S.cap, T.cap))


def star(S: SemilinearSet) -> SemilinearSet:
    """Closure under finite sums, the empty sum included."""
    comps = [c for c in S.components if c.periods or any(c.offset)]
    if 1 + (1 << len(comps)) - 1 > S.cap:
        raise ResourceLimitError(
            f"star of {len(comps)} components needs {1 << len(comps)} components, cap is {S.cap}")
    out = [LinearSet(zero(S.dim))]
    for k in range(1, len(comps) + 1):
        for J in combinations(comps, k):
            offset = zero(S.dim)
            periods: list[Vec] = []
            for c in J:
                offset = vadd(offset, c.offset)
                periods.append(c.offset)
                periods.extend(c.periods)
            out.append(LinearSet(offset, tuple(periods)))
    return SemilinearSet(S.dim, tuple(out), S.cap)


def constant_bound(S: SemilinearSet) -> int:
    return max((norm(c.offset) for c in S.components), default=0)


def generator_bound(S: SemilinearSet) -> int:
    return max((norm(p) for c in S.components for p in c.periods), default=0)


def period_vectors(S: SemilinearSet) -> set[Vec]:
    return {p for c in S.components for p in c.periods}


def _subsumed(a: LinearSet, b: LinearSet) -> bool:
    """Sufficient test for a being a subset of b."""
    if a.offset == b.offset and set(a.periods) <= set(b.periods):
        return True
    if linear_member(b, a.offset) is None:
        return False
    pm = b.period_map()
    return all(bounded_preimage(pm, p) is not None for p in a.periods)


def simplify(S: SemilinearSet, deep: bool = True) -> SemilinearSet:
    """Drop components contained in another component; denotation is unchanged.

    With ``deep`` off only the cheap rule (same offset, subset of periods)
    is applied.
    """
    comps = list(S.components)
    alive = [True] * len(comps)
    for i, a in enumerate(comps):
        for j, b in enumerate(comps):
            if i == j or not alive[j]:
                continue
            if deep:
                hit = _subsumed(a, b)
            else:
                hit = a.offset == b.offset and set(a.periods) <= set(b.periods)
            if hit:
                alive[i] = False
                break
    return SemilinearSet(S.dim, tuple(c for c, ok in zip(comps, alive) if ok), S.cap)


# ---------------------------------------------------------------------------
# Intersection with a certified search radius


def difference_map(s_periods: Sequence[Vec], t_periods: Sequence[Vec], n: int) -> LinearMap:
    """(lambda, mu) -> sum lambda_i s_i - sum mu_j t_j."""
    return LinearMap(tuple(s_periods) + tuple(vneg(t) for t in t_periods), n)


@lru_cache(maxsize=None)
def pair_constants(s_periods: tuple[Vec, ...], t_periods: tuple[Vec, ...], n: int) -> tuple[Fraction, Fraction]:
    """(P, Q) for two period lists: P = L*c + 1, Q = c*M with c the largest s-period norm.

    Callers pass sorted period tuples so the value depends only on the sets.
    """
    b = compute_LM(difference_map(s_periods, t_periods, n))
    c = max((norm(s) for s in s_periods), default=0)
    return b.L * c + 1, c * b.M


@dataclass(frozen=True)
class IntersectionBound:
    C: Fraction
    D: Fraction
    m: int

    @property
    def bound(self) -> Fraction:
        return self.C * self.m + self.D


def intersection_bound(S: SemilinearSet, T: SemilinearSet) -> IntersectionBound:
    """Search radius for a common element: S and T meet iff they meet strictly inside C*m + D.

    D is one more than the largest pair Q, which makes the radius strict.
    """
    _check_dims(S, T)
    Ps, Qs = [Fraction(1)], [Fraction(0)]
    for a in S.components:
        for b in T.components:
            P, Q = pair_constants(tuple(sorted(a.periods)), tuple(sorted(b.periods)), S.dim)
            Ps.append(P)
            Qs.append(Q)
    m = max(constant_bound(S), constant_bound(T))
    return IntersectionBound(2 * max(Ps), max(Qs) + 1, m)


def intersect_witness(S: SemilinearSet, T: SemilinearSet) -> Vec | None:
    """A common element of least Manhattan norm, or None if S and T are disjoint.

    Disjointness is decided per component pair by an exact preimage test of
    t0 - s0 under the difference map; a hit seeds a radius, and lattice
    shells up to that radius are scanned in a fixed order for the first
    common point.
    """
    _check_dims(S, T)
    n = S.dim
    best: Vec | None = None
    for a in S.components:
        for b in T.components:
            pm = difference_map(a.periods, b.periods, n)
            pre = bounded_preimage(pm, vsub(b.offset, a.offset))
            if pre is None:
                continue
            v = a.element(pre[:len(a.periods)])
            if best is None or norm(v) < norm(best):
                best = v
    if best is None:
        return None
    for r in range(norm(best) + 1):
        for pt in kernels.shell_points(n, r):
            pt = tuple(int(x) for x in pt)
            if member(S, pt) and member(T, pt):
                return pt
    raise AssertionError("seed witness not found during shell scan")
