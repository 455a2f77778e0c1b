"""Partitions in a box, row indices, and the two-end-value multisegments a_lambda."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import List, Sequence, Tuple

from .core import Multisegment, Segment, leq, below_set, truncate_k
from .weyl import Perm, inverse, is_min_coset_rep


@dataclass(frozen=True)
class GrPartition:
    """Weakly increasing parts 0 <= l_1 <= ... <= l_r <= ell."""

    parts: Tuple[int, ...]
    r: int
    ell: int

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if len(self.parts) != self.r:
            raise ValueError("expected %d parts" % self.r)
        if any(p < 0 or p > self.ell for p in self.parts) or list(self.parts) != sorted(self.parts):
            raise ValueError("parts must be weakly increasing in [0, %d]" % self.ell)

    @property
    def n(self) -> int:
        return self.r + self.ell

    def omega(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """(a_1..a_m; b_0..b_{m-1}): values b_0, b_0+b_1, ... with multiplicities a_i, last value ell."""
        values = sorted(set(self.parts))
        if not values or values[-1] != self.ell:
            values.append(self.ell)
        a = tuple(self.parts.count(v) for v in values)
        b = (values[0],) + tuple(values[i + 1] - values[i] for i in range(len(values) - 1))
        return a, b

    @classmethod
    def from_omega(cls, a: Sequence[int], b: Sequence[int]) -> "GrPartition":
        if len(a) != len(b) or not a:
            raise ValueError("need m entries in both halves")
        m = len(a)
        # a_1..a_{m-1} and b_1..b_{m-1} must be positive
        if any(x <= 0 for x in a[:m - 1]) or any(x <= 0 for x in b[1:]):
            raise ValueError("interior entries must be positive")
        parts: List[int] = []
        v = 0
        for ai, bi in zip(a, b):
            v += bi
            parts.extend([v] * ai)
        return cls(tuple(parts), sum(a), sum(b))

    def __str__(self):
        return "(%s)" % ",".join(map(str, self.parts))


def partitions_in_box(ell: int, r: int) -> List[GrPartition]:
    """P(ell, r): all r-part partitions with parts at most ell."""
    out = []

    def rec(prefix: List[int], lo: int):
        if len(prefix) == r:
            out.append(GrPartition(tuple(prefix), r, ell))
            return
        for p in range(lo, ell + 1):
            rec(prefix + [p], p)

    rec([], 0)
    return out


# row indices ---------------------------------------------------------------------


def row_indices(r: int, n: int) -> List[Tuple[int, ...]]:
    return [tuple(c) for c in combinations(range(1, n + 1), r)]


def contains(x: Sequence[int], y: Sequence[int]) -> bool:
    """x contains y as sets."""
    return set(y) <= set(x)


def dominates(x: Sequence[int], y: Sequence[int]) -> bool:
    """x >= y entrywise (same length)."""
    if len(x) != len(y):
        raise ValueError("length mismatch")
    return all(p >= q for p, q in zip(x, y))


def succeq(x: Sequence[int], y: Sequence[int], n: int) -> bool:
    """x >= y' containing y for some y' of the length of x."""
    if len(x) < len(y):
        return False
    rest = [i for i in range(1, n + 1) if i not in y]
    for extra in combinations(rest, len(x) - len(y)):
        yp = tuple(sorted(tuple(y) + extra))
        if dominates(x, yp):
            return True
    return False


def complement(x: Sequence[int], n: int) -> Tuple[int, ...]:
    s = set(x)
    return tuple(i for i in range(1, n + 1) if i not in s)


# sigma maps ------------------------------------------------------------------------


def sigma2(lam: GrPartition) -> Tuple[int, ...]:
    return tuple(p + i for i, p in enumerate(lam.parts, 1))


def sigma2_inverse(x: Sequence[int], n: int) -> GrPartition:
    r = len(x)
    if list(x) != sorted(set(x)) or (x and (x[0] < 1 or x[-1] > n)):
        raise ValueError("not a row index in [1, %d]" % n)
    return GrPartition(tuple(xi - i for i, xi in enumerate(x, 1)), r, n - r)


def grassmann_J(r: int, ell: int) -> frozenset:
    return frozenset(i for i in range(1, r + ell) if i != r)


def sigma1(w: Perm, r: int) -> Tuple[int, ...]:
    if not is_min_coset_rep(w, grassmann_J(r, len(w) - r)):
        raise ValueError("w is not a minimal coset representative")
    winv = inverse(w)
    return tuple(winv[:r])


def partition_leq(lam: GrPartition, mu: GrPartition) -> bool:
    """lam <= mu, partwise."""
    return dominates(mu.parts, lam.parts)


# the base and a_lambda -----------------------------------------------------------------


@dataclass(frozen=True)
class GrassmannBase:
    """Distinct begins, r segments ending at k-1 then ell ending at k."""

    begins: Tuple[int, ...]
    r: int
    ell: int
    k: int

    @classmethod
    def of(cls, base: Multisegment, k: int) -> "GrassmannBase":
        segs = sorted(base, key=lambda s: s.begin)
        begins = tuple(s.begin for s in segs)
        if len(set(begins)) != len(begins):
            raise ValueError("begins must be distinct")
        ends = [s.end for s in segs]
        r = ends.count(k - 1)
        if any(e not in (k - 1, k) for e in ends) or ends != sorted(ends):
            raise ValueError("base must be a_Id with ends k-1 then k")
        if begins and max(begins) > k - 1:
            raise ValueError("begins must stay below k")
        return cls(begins, r, len(ends) - r, k)

    @classmethod
    def packed(cls, r: int, ell: int, lo: int = 1) -> "GrassmannBase":
        n = r + ell
        return cls(tuple(range(lo, lo + n)), r, ell, lo + n)

    @property
    def n(self) -> int:
        return self.r + self.ell

    def multisegment(self) -> Multisegment:
        return self.of_row_index(tuple(range(1, self.r + 1)))

    def of_row_index(self, x: Sequence[int]) -> Multisegment:
        """Segments indexed by x end at k-1, the rest at k."""
        xs = set(x)
        return Multisegment(Segment(b, self.k - 1 if i in xs else self.k) for i, b in enumerate(self.begins, 1))

    def of_partition(self, lam: GrPartition) -> Multisegment:
        if lam.n != self.n or lam.r < self.r:
            raise ValueError("partition does not fit the base")
        return self.of_row_index(sigma2(lam))

    def row_index_of(self, c: Multisegment) -> Tuple[int, ...]:
        by_begin = {s.begin: s.end for s in c}
        return tuple(i for i, b in enumerate(self.begins, 1) if by_begin[b] == self.k - 1)

    def a1(self, r0: int) -> Multisegment:
        """First r+r0 segments as in the base, the rest extended to k+1."""
        r1 = self.r + r0
        return Multisegment(
            Segment(b, self.k - 1 if i <= self.r else (self.k if i <= r1 else self.k + 1))
            for i, b in enumerate(self.begins, 1))


def multisegment_of_partition(base: Multisegment, lam: GrPartition, k: int) -> Multisegment:
    return GrassmannBase.of(base, k).of_partition(lam)


def mu_flat(mu: GrPartition, r: int) -> GrPartition:
    r0 = mu.r - r
    if r0 < 0:
        raise ValueError("mu has fewer rows than the target")
    x = sigma2(mu)[r0:]
    return sigma2_inverse(x, mu.n)


def sharp_lift(mu: GrPartition, base: Multisegment, k: int) -> Multisegment:
    gb = GrassmannBase.of(base, k)
    r0 = mu.r - gb.r
    if r0 < 0 or mu.n != gb.n:
        raise ValueError("mu does not fit the base")
    x = sigma2(mu)
    y = complement(x, gb.n)
    ends = {}
    for j, xi in enumerate(x):
        ends[xi] = k if j < r0 else k - 1
    for yi in y:
        ends[yi] = k + 1
    return Multisegment(Segment(b, ends[i]) for i, b in enumerate(gb.begins, 1))


def orbit_count_n(mu: GrPartition, base: Multisegment, k: int) -> int:
    """#{c in S(a1): c^(k+1) = a_{mu_flat}, c >= (a_{mu_flat})^sharp}."""
    gb = GrassmannBase.of(base, k)
    r0 = mu.r - gb.r
    if not 0 < r0 <= gb.ell or mu.n != gb.n:
        raise ValueError("need 0 < r0 <= ell")
    a1 = gb.a1(r0)
    flat = gb.of_partition(mu_flat(mu, gb.r))
    sh = sharp_lift(mu, base, k)
    return sum(1 for c in below_set(a1) if truncate_k(c, k + 1) == flat and leq(sh, c))


def derivative_n(mu: GrPartition, base: Multisegment, k: int, route: str = "quantum") -> int:
    """Coefficient of L_{a_mu} in D^k(L_{a_mu_flat}), read off a derivative route."""
    from .derivative import derive_irreducible

    gb = GrassmannBase.of(base, k)
    flat = gb.of_partition(mu_flat(mu, gb.r))
    return derive_irreducible(flat, k, route).coeff(gb.of_row_index(sigma2(mu)))


@dataclass(frozen=True)
class OrbitRow:
    mu: GrPartition
    r0: int
    a_mu: Multisegment
    a_flat: Multisegment
    orbit_count: int
    derivative: int

    @property
    def agree(self) -> bool:
        return self.orbit_count == self.derivative


def orbit_table(base: Multisegment, k: int, route: str = "quantum") -> List[OrbitRow]:
    """Every admissible mu (0 < r0 <= ell) with both sides of the orbit-count formula."""
    gb = GrassmannBase.of(base, k)
    rows = []
    for r0 in range(1, gb.ell + 1):
        for mu in partitions_in_box(gb.ell - r0, gb.r + r0):
            rows.append(OrbitRow(
                mu, r0,
                gb.of_row_index(sigma2(mu)),
                gb.of_partition(mu_flat(mu, gb.r)),
                orbit_count_n(mu, base, k),
                derivative_n(mu, base, k, route),
            ))
    return rows
