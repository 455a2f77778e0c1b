"""Segments, multisegments, weights, the order <= and the truncation poset."""

from __future__ import annotations

import itertools
import re
import threading
from collections import Counter
from typing import Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Tuple


class Segment(NamedTuple):
    begin: int
    end: int

    @property
    def length(self) -> int:
        return self.end - self.begin + 1

    def key(self) -> Tuple[int, int]:
        # canonical order: end ascending, then begin descending
        return (self.end, -self.begin)

    def contains(self, other: "Segment") -> bool:
        return self.begin <= other.begin and other.end <= self.end

    def minus(self) -> Optional["Segment"]:
        """Drop the right end box; None for a singleton."""
        return Segment(self.begin, self.end - 1) if self.end > self.begin else None

    def plus(self) -> "Segment":
        return Segment(self.begin, self.end + 1)

    def left_plus(self) -> "Segment":
        return Segment(self.begin - 1, self.end)

    def left_minus(self) -> Optional["Segment"]:
        return Segment(self.begin + 1, self.end) if self.end > self.begin else None

    def reflect(self) -> "Segment":
        return Segment(-self.end, -self.begin)

    def __str__(self):
        if self.begin == self.end:
            return "[%d]" % self.begin
        return "[%d,%d]" % (self.begin, self.end)


def seg(begin: int, end: Optional[int] = None) -> Segment:
    if end is None:
        end = begin
    if begin > end:
        raise ValueError("segment [%d,%d] is empty" % (begin, end))
    return Segment(begin, end)


class Weight(tuple):
    """Finitely supported map Z -> N, stored as sorted (position, count) pairs."""

    def __new__(cls, data=()):
        if isinstance(data, Weight):
            return data
        if isinstance(data, dict):
            items = data.items()
        else:
            items = data
        acc: Dict[int, int] = {}
        for p, c in items:
            acc[p] = acc.get(p, 0) + c
        for p, c in acc.items():
            if c < 0:
                raise ValueError("negative weight at %d" % p)
        return super().__new__(cls, sorted((p, c) for p, c in acc.items() if c))

    @classmethod
    def chi(cls, k: int, mult: int = 1) -> "Weight":
        return cls({k: mult})

    def as_dict(self) -> Dict[int, int]:
        return dict(self)

    def __call__(self, i: int) -> int:
        for p, c in self:
            if p == i:
                return c
        return 0

    def degree(self) -> int:
        return sum(c for _, c in self)

    def plus(self, other: "Weight") -> "Weight":
        d = self.as_dict()
        for p, c in other:
            d[p] = d.get(p, 0) + c
        return Weight(d)

    def minus(self, other: "Weight") -> "Weight":
        d = self.as_dict()
        for p, c in other:
            d[p] = d.get(p, 0) - c
        return Weight(d)

    def try_minus(self, other: "Weight") -> Optional["Weight"]:
        try:
            return self.minus(other)
        except ValueError:
            return None

    def pairing(self, other: "Weight") -> int:
        """Symmetric Cartan form of type A."""
        d = other.as_dict()
        s = 0
        for p, c in self:
            s += c * (2 * d.get(p, 0) - d.get(p - 1, 0) - d.get(p + 1, 0))
        return s

    def __str__(self):
        return "+".join("%d*chi%d" % (c, p) if c > 1 else "chi%d" % p for p, c in self) or "0"

    def encode(self) -> str:
        return ",".join("%d:%d" % pc for pc in self)


class Multisegment(tuple):
    """Immutable multiset of segments kept in canonical order."""

    def __new__(cls, segments: Iterable = ()):
        segs = [s if isinstance(s, Segment) else seg(*s) for s in segments]
        segs.sort(key=Segment.key)
        return super().__new__(cls, segs)

    @property
    def degree(self) -> int:
        return sum(s.length for s in self)

    def weight(self) -> Weight:
        d: Dict[int, int] = {}
        for s in self:
            for i in range(s.begin, s.end + 1):
                d[i] = d.get(i, 0) + 1
        return Weight(d)

    def counts(self) -> Counter:
        return Counter(self)

    def ending_at(self, k: int) -> Tuple[Segment, ...]:
        """a(k), the segments ending at k."""
        return tuple(s for s in self if s.end == k)

    def beginning_at(self, k: int) -> Tuple[Segment, ...]:
        return tuple(s for s in self if s.begin == k)

    def n_ending(self, k: int) -> int:
        return sum(1 for s in self if s.end == k)

    def ends(self) -> Counter:
        return Counter(s.end for s in self)

    def begins(self) -> Counter:
        return Counter(s.begin for s in self)

    def __add__(self, other):
        return Multisegment(tuple(self) + tuple(other))

    def remove(self, segs: Iterable[Segment]) -> "Multisegment":
        c = Counter(self)
        c.subtract(Counter(segs))
        if any(x < 0 for x in c.values()):
            raise ValueError("not a sub-multiset")
        return Multisegment(c.elements())

    def __str__(self):
        return format_ms(self)

    def __repr__(self):
        return "Multisegment(%r)" % format_ms(self)


EMPTY = Multisegment()


# text grammar ------------------------------------------------------------

_TERM = re.compile(r"\s*(\d*)\s*\[\s*(-?\d+)\s*(?:,\s*(-?\d+)\s*)?\]\s*")
# the longest prefix of a term, to locate where a bad term breaks
_PARTIAL = re.compile(r"\s*\d*\s*(?:\[\s*(?:-?\d+\s*(?:,\s*(?:-?\d+\s*)?)?)?)?")


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__("%s at position %d" % (msg, pos))
        self.pos = pos


def parse_ms(text: str) -> Multisegment:
    """Parse '2[1,3]+[2,5]+[4]'; '0' or '' is the empty multisegment."""
    t = text.strip()
    if t in ("", "0", "()"):
        return EMPTY
    segs: List[Segment] = []
    pos = 0
    while True:
        m = _TERM.match(text, pos)
        if not m:
            stop = _PARTIAL.match(text, pos).end()
            raise ParseError("expected a term like [i,j]", stop)
        mult = int(m.group(1)) if m.group(1) else 1
        b = int(m.group(2))
        e = int(m.group(3)) if m.group(3) is not None else b
        if b > e:
            raise ParseError("empty segment [%d,%d]" % (b, e), m.start(2))
        segs.extend([Segment(b, e)] * mult)
        pos = m.end()
        if pos == len(text):
            break
        if text[pos] != "+":
            raise ParseError("expected '+'", pos)
        pos += 1
    return Multisegment(segs)


def format_ms(a: Iterable[Segment]) -> str:
    a = Multisegment(a)
    if not a:
        return "0"
    out = []
    for s, grp in itertools.groupby(a):
        n = len(list(grp))
        out.append(("%d" % n if n > 1 else "") + str(s))
    return "+".join(out)


def ms(text) -> Multisegment:
    if isinstance(text, Multisegment):
        return text
    if isinstance(text, str):
        return parse_ms(text)
    return Multisegment(text)


# segment arithmetic -------------------------------------------------------

class LinkResult(NamedTuple):
    linked: bool
    union: Optional[Segment]
    intersection: Optional[Segment]


def seg_link_ops(d1: Segment, d2: Segment) -> LinkResult:
    """Linkedness; the intersection is None when the union is a disjoint adjacent pair."""
    x, y = sorted([d1, d2])
    if x.begin < y.begin and x.end < y.end and y.begin <= x.end + 1:
        inter = Segment(y.begin, x.end) if y.begin <= x.end else None
        return LinkResult(True, Segment(x.begin, y.end), inter)
    return LinkResult(False, None, None)


def linked(d1: Segment, d2: Segment) -> bool:
    return seg_link_ops(d1, d2).linked


# truncations ----------------------------------------------------------------

def truncate_k(a: Multisegment, k: int) -> Multisegment:
    """a^(k): every segment ending at k loses its last box."""
    out = []
    for s in a:
        if s.end == k:
            t = s.minus()
            if t is not None:
                out.append(t)
        else:
            out.append(s)
    return Multisegment(out)


def truncate_seq(a: Multisegment, ks: Iterable[int]) -> Multisegment:
    for k in ks:
        a = truncate_k(a, k)
    return a


def gamma_truncation(a: Multisegment, k: int, gamma: Iterable[Segment]) -> Multisegment:
    """a_Gamma: truncate only the members of the sub-multiset Gamma of a(k)."""
    gamma = list(gamma)
    if any(s.end != k for s in gamma):
        raise ValueError("Gamma must consist of segments ending at k")
    rest = a.remove(gamma)
    cut = [t for t in (s.minus() for s in gamma) if t is not None]
    return rest + cut


def reflect(a: Multisegment) -> Multisegment:
    return Multisegment(s.reflect() for s in a)


def left_truncate(a: Multisegment, k: int) -> Multisegment:
    """The left truncation at k, drop the first box of every segment beginning at k."""
    return reflect(truncate_k(reflect(a), -k))


def left_truncate_seq(a: Multisegment, ks: Iterable[int]) -> Multisegment:
    for k in ks:
        a = left_truncate(a, k)
    return a


def sub_multisets(segs: Iterable[Segment]) -> Iterator[Tuple[Segment, ...]]:
    c = sorted(Counter(segs).items(), key=lambda p: p[0].key())
    for choice in itertools.product(*[range(n + 1) for _, n in c]):
        yield tuple(itertools.chain.from_iterable([s] * m for (s, _), m in zip(c, choice)))


def sub_multisets_of_size(segs: Iterable[Segment], size: int) -> Iterator[Tuple[Segment, ...]]:
    for g in sub_multisets(segs):
        if len(g) == size:
            yield g


# the order <= -----------------------------------------------------------------

_lock = threading.Lock()
_below_cache: Dict[Multisegment, FrozenSet[Multisegment]] = {}
_cover_cache: Dict[Multisegment, FrozenSet[Multisegment]] = {}


def elementary_covers(a: Multisegment) -> FrozenSet[Multisegment]:
    """All results of one elementary operation on a linked pair of a."""
    hit = _cover_cache.get(a)
    if hit is not None:
        return hit
    out = set()
    distinct = sorted(set(a), key=Segment.key)
    cnt = Counter(a)
    for i, x in enumerate(distinct):
        for y in distinct[i + 1:]:
            r = seg_link_ops(x, y)
            if not r.linked:
                continue
            c = Counter(cnt)
            c[x] -= 1
            c[y] -= 1
            c[r.union] += 1
            if r.intersection is not None:
                c[r.intersection] += 1
            out.add(Multisegment(c.elements()))
    res = frozenset(out)
    with _lock:
        _cover_cache[a] = res
    return res


def below_set(a: Multisegment) -> FrozenSet[Multisegment]:
    """S(a) = {b : b <= a}, by closure under elementary operations."""
    hit = _below_cache.get(a)
    if hit is not None:
        return hit
    seen = {a}
    todo = [a]
    while todo:
        x = todo.pop()
        done = _below_cache.get(x)
        if done is not None and x is not a:
            seen |= done
            continue
        for y in elementary_covers(x):
            if y not in seen:
                seen.add(y)
                todo.append(y)
    res = frozenset(seen)
    with _lock:
        _below_cache[a] = res
    return res


def leq(b: Multisegment, a: Multisegment) -> bool:
    if b == a:
        return True
    if b.degree != a.degree or len(b) > len(a):
        return False
    return b in below_set(a)


def ell(b: Multisegment, a: Multisegment) -> int:
    """Length of a longest chain from a down to b."""
    if not leq(b, a):
        raise ValueError("ell needs b <= a")
    memo: Dict[Multisegment, int] = {}

    def longest(x: Multisegment) -> int:
        if x == b:
            return 0
        if x in memo:
            return memo[x]
        best = max(1 + longest(y) for y in elementary_covers(x) if leq(b, y))
        memo[x] = best
        return best

    return longest(a)


def is_minimal_unlinked(a: Multisegment) -> bool:
    return not elementary_covers(a)


# the poset preceq_k ----------------------------------------------------------

def _drop(a: Multisegment, b: Multisegment, k: int) -> Optional[int]:
    """j with weight(a) = weight(b) + j*chi_k, else None."""
    diff = a.weight().try_minus(b.weight())
    if diff is None:
        return None
    if not diff:
        return 0
    if len(diff) == 1 and diff[0][0] == k:
        return diff[0][1]
    return None


def prec_k(b: Multisegment, a: Multisegment, k: int) -> bool:
    """Definition: some Gamma inside a(k) has b <= a_Gamma."""
    j = _drop(a, b, k)
    if j is None or j > a.n_ending(k):
        return False
    for g in sub_multisets_of_size(a.ending_at(k), j):
        if leq(b, gamma_truncation(a, k, g)):
            return True
    return False


def prec_k_via_truncated_below(b: Multisegment, a: Multisegment, k: int) -> bool:
    """Second characterisation: b = c_Gamma for some c <= a and Gamma inside c(k)."""
    j = _drop(a, b, k)
    if j is None:
        return False
    for c in below_set(a):
        g = _gamma_from(c, b, k)
        if g is not None and len(g) == j:
            return True
    return False


def _gamma_from(c: Multisegment, b: Multisegment, k: int) -> Optional[Tuple[Segment, ...]]:
    """The unique Gamma inside c(k) with c_Gamma = b, if any."""
    ck = Counter(c.ending_at(k))
    bk = Counter(b.ending_at(k))
    g = ck - bk
    if any(bk[s] > ck[s] for s in bk):
        return None
    gamma = tuple(g.elements())
    return gamma if gamma_truncation(c, k, gamma) == b else None


def gamma_set(a: Multisegment, k: int) -> FrozenSet[Multisegment]:
    """Gamma(a,k) = {b : b preceq_k a}."""
    out = set()
    for c in below_set(a):
        for g in sub_multisets(c.ending_at(k)):
            out.add(gamma_truncation(c, k, g))
    return frozenset(out)


def gamma_i_set(a: Multisegment, k: int, i: int) -> FrozenSet[Multisegment]:
    d = a.degree - i
    return frozenset(b for b in gamma_set(a, k) if b.degree == d)


class QSetResult(NamedTuple):
    members: FrozenSet[Multisegment]
    minimum: Multisegment
    sharp: Multisegment


def sharp(c: Multisegment, b: Multisegment, k: int) -> Multisegment:
    """c^sharp: Gamma members stay, the other end-k segments grow to k+1."""
    gamma = _gamma_from(c, b, k)
    if gamma is None:
        raise ValueError("b is not a Gamma-truncation of c")
    stay = c.remove(c.ending_at(k))
    kept = Counter(c.ending_at(k)) - Counter(gamma)
    return stay + gamma + [s.plus() for s in kept.elements()]


def q_set_min(a: Multisegment, b: Multisegment, k: int) -> QSetResult:
    members = frozenset(c for c in below_set(a) if _gamma_from(c, b, k) is not None)
    if not members:
        raise ValueError("Q(a,b) is empty: b is not below a for this k")
    minimal = [c for c in members if not any(d != c and leq(d, c) for d in members)]
    if len(minimal) != 1:
        raise AssertionError("Q(a,b) has %d minimal elements" % len(minimal))
    c = minimal[0]
    return QSetResult(members, c, sharp(c, b, k))


def assumption_Ak(a: Multisegment, k: int) -> bool:
    if not a:
        raise ValueError("assumption needs a nonempty multisegment")
    sep = max(s.begin for s in a) + 1 < min(s.end for s in a)
    return sep and a.n_ending(k) != 0 and a.n_ending(k + 1) == 0


# enumeration -------------------------------------------------------------------

_weight_cache: Dict[Weight, Tuple[Multisegment, ...]] = {}


def enumerate_weight(phi: Weight) -> Tuple[Multisegment, ...]:
    """All multisegments of weight phi, sorted by (number of segments, text)."""
    phi = Weight(phi)
    hit = _weight_cache.get(phi)
    if hit is not None:
        return hit
    found = [Multisegment(s) for s in _enum(tuple(sorted(phi.as_dict().items())), None)]
    res = tuple(sorted(set(found), key=lambda m: (len(m), format_ms(m))))
    _weight_cache[phi] = res
    return res


def _enum(items: Tuple[Tuple[int, int], ...], last_end: Optional[int]) -> List[Tuple[Segment, ...]]:
    if not items:
        return [()]
    d = dict(items)
    i = items[0][0]
    out = []
    j = i
    # segments starting at i are chosen with ends weakly increasing
    start = i if last_end is None else last_end
    while d.get(j, 0) > 0:
        if j >= start:
            d2 = dict(d)
            for m in range(i, j + 1):
                d2[m] -= 1
            rest = tuple(sorted((p, c) for p, c in d2.items() if c))
            nxt = j if rest and rest[0][0] == i else None
            for tail in _enum(rest, nxt):
                out.append((Segment(i, j),) + tail)
        j += 1
    return out


def all_multisegments(max_degree: int, lo: int, hi: int) -> List[Multisegment]:
    """Every nonempty multisegment with support inside [lo, hi] and degree <= max_degree."""
    segs = [Segment(i, j) for i in range(lo, hi + 1) for j in range(i, hi + 1)]
    segs.sort(key=Segment.key)
    out: List[Multisegment] = []

    def rec(start: int, acc: List[Segment], deg: int):
        if acc:
            out.append(Multisegment(acc))
        for idx in range(start, len(segs)):
            s = segs[idx]
            if deg + s.length <= max_degree:
                acc.append(s)
                rec(idx, acc, deg + s.length)
                acc.pop()

    rec(0, [], 0)
    return out


def normalized_multisegments(max_degree: int) -> List[Multisegment]:
    """Multisegments of degree <= max_degree up to translation (support starts at 1)."""
    return [a for a in all_multisegments(max_degree, 1, max_degree) if min(s.begin for s in a) == 1]
