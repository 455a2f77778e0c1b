"""Symmetric groups: Bruhat order, Kazhdan-Lusztig polynomials, parabolic
quotients, the map Phi from coset representatives to multisegments, and the
theta multiplicities of parabolic pushforwards."""

from __future__ import annotations

import itertools
import threading
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from .core import Multisegment, Segment

Perm = Tuple[int, ...]


# polynomials in q (Laurent allowed, exponents in units of q) ---------------------


class QPoly:
    __slots__ = ("_c",)

    def __init__(self, coeffs: Optional[Mapping[int, int]] = None):
        self._c = {int(e): int(x) for e, x in (coeffs or {}).items() if x}

    @classmethod
    def one(cls) -> "QPoly":
        return cls({0: 1})

    @classmethod
    def from_list(cls, xs: Sequence[int]) -> "QPoly":
        return cls({i: x for i, x in enumerate(xs)})

    def coeff(self, e: int) -> int:
        return self._c.get(e, 0)

    def terms(self) -> Dict[int, int]:
        return dict(self._c)

    def degree(self) -> int:
        return max(self._c) if self._c else -1

    def at_one(self) -> int:
        return sum(self._c.values())

    def nonnegative(self) -> bool:
        return all(x > 0 for x in self._c.values())

    def __bool__(self):
        return bool(self._c)

    def __add__(self, other):
        other = _qp(other)
        c = dict(self._c)
        for e, x in other._c.items():
            c[e] = c.get(e, 0) + x
        return QPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return QPoly({e: -x for e, x in self._c.items()})

    def __sub__(self, other):
        return self + (-_qp(other))

    def __mul__(self, other):
        other = _qp(other)
        c: Dict[int, int] = {}
        for e, x in self._c.items():
            for f, y in other._c.items():
                c[e + f] = c.get(e + f, 0) + x * y
        return QPoly(c)

    __rmul__ = __mul__

    def shift(self, n: int) -> "QPoly":
        return QPoly({e + n: x for e, x in self._c.items()})

    def __eq__(self, other):
        if isinstance(other, int):
            other = QPoly({0: other})
        return isinstance(other, QPoly) and self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __str__(self):
        if not self._c:
            return "0"
        out = []
        for e in sorted(self._c):
            x = self._c[e]
            mono = "" if e == 0 else ("q" if e == 1 else "q^%d" % e)
            body = (str(abs(x)) if (abs(x) != 1 or not mono) else "") + ("*" if abs(x) != 1 and mono else "") + mono
            out.append(("-" if x < 0 else "+", body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sg, b in out[1:]:
            s += " %s %s" % (sg, b)
        return s

    __repr__ = __str__

    def to_list(self) -> List[int]:
        if not self._c:
            return []
        if min(self._c) < 0:
            raise ValueError("negative exponent")
        return [self._c.get(i, 0) for i in range(max(self._c) + 1)]


def _qp(x) -> QPoly:
    if isinstance(x, QPoly):
        return x
    return QPoly({0: int(x)})


# permutations -----------------------------------------------------------------------


def identity(n: int) -> Perm:
    return tuple(range(1, n + 1))


def simple(i: int, n: int) -> Perm:
    p = list(range(1, n + 1))
    p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def compose(x: Perm, y: Perm) -> Perm:
    """(x o y)(i) = x(y(i))."""
    return tuple(x[j - 1] for j in y)


def inverse(x: Perm) -> Perm:
    out = [0] * len(x)
    for i, xi in enumerate(x, 1):
        out[xi - 1] = i
    return tuple(out)


def from_word(word: Iterable[int], n: int) -> Perm:
    """s_{i1} s_{i2} ... as a composition of simple transpositions."""
    p = identity(n)
    for i in word:
        p = compose(p, simple(i, n))
    return p


def length(x: Perm) -> int:
    n = len(x)
    return sum(1 for i in range(n) for j in range(i + 1, n) if x[i] > x[j])


def left_mul_simple(i: int, x: Perm) -> Perm:
    """s_i x: swap the values i and i+1."""
    return tuple(i + 1 if v == i else (i if v == i + 1 else v) for v in x)


def right_mul_simple(x: Perm, i: int) -> Perm:
    p = list(x)
    p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def has_left_descent(x: Perm, i: int) -> bool:
    """l(s_i x) < l(x): i+1 appears before i."""
    return x.index(i + 1) < x.index(i)


def left_descents(x: Perm) -> FrozenSet[int]:
    return frozenset(i for i in range(1, len(x)) if has_left_descent(x, i))


def bruhat_leq(x: Perm, y: Perm) -> bool:
    """Tableau criterion: sorted prefixes compare entrywise."""
    if len(x) != len(y):
        raise ValueError("size mismatch")
    for i in range(1, len(x)):
        a = sorted(x[:i])
        b = sorted(y[:i])
        if any(p > q for p, q in zip(a, b)):
            return False
    return True


def all_perms(n: int) -> List[Perm]:
    return [tuple(p) for p in itertools.permutations(range(1, n + 1))]


def fmt_perm(x: Perm) -> str:
    return " ".join(map(str, x))


def parse_perm(text: str) -> Perm:
    p = tuple(int(t) for t in text.replace(",", " ").split())
    if sorted(p) != list(range(1, len(p) + 1)):
        raise ValueError("not a permutation: %r" % text)
    return p


def fmt_J(J: Iterable[int]) -> str:
    return ",".join("s%d" % i for i in sorted(J))


def parse_J(text: str) -> FrozenSet[int]:
    text = text.strip()
    if not text:
        return frozenset()
    return frozenset(int(t.strip().lstrip("s")) for t in text.split(","))


# Kazhdan-Lusztig polynomials ----------------------------------------------------------

_kl_lock = threading.Lock()
_kl_cols: Dict[Perm, Dict[Perm, Tuple[int, ...]]] = {}
_store = None


def set_store(store) -> None:
    global _store
    _store = store


def _padd(a: Tuple[int, ...], b: Tuple[int, ...], shift: int = 0, sign: int = 1) -> Tuple[int, ...]:
    n = max(len(a), len(b) + shift)
    out = list(a) + [0] * (n - len(a))
    for i, x in enumerate(b):
        out[i + shift] += sign * x
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _mu(p: Tuple[int, ...], lx: int, ly: int) -> int:
    d = ly - lx - 1
    if d < 0 or d % 2:
        return 0
    e = d // 2
    return p[e] if e < len(p) else 0


def kl_column(y: Perm) -> Dict[Perm, Tuple[int, ...]]:
    """{x: coefficient tuple of P_{x,y}} over all x <= y."""
    hit = _kl_cols.get(y)
    if hit is not None:
        return hit
    n = len(y)
    if y == identity(n):
        col = {y: (1,)}
    else:
        s = min(left_descents(y))
        v = left_mul_simple(s, y)
        colv = kl_column(v)
        ly = length(y)
        lv = ly - 1
        cand = set(colv)
        cand.update(left_mul_simple(s, x) for x in colv)
        # z < v with s z < z and mu(z, v) != 0
        mus = []
        for z, pz in colv.items():
            if z != v and has_left_descent(z, s):
                m = _mu(pz, length(z), lv)
                if m:
                    mus.append((z, m, (ly - length(z)) // 2, kl_column(z)))
        col = {}
        for x in cand:
            sx = left_mul_simple(s, x)
            c = 1 if has_left_descent(x, s) else 0
            p: Tuple[int, ...] = ()
            a = colv.get(sx)
            if a:
                p = _padd(p, a, 1 - c)
            b = colv.get(x)
            if b:
                p = _padd(p, b, c)
            for z, m, sh, colz in mus:
                pz = colz.get(x)
                if pz:
                    p = _padd(p, tuple(m * t for t in pz), sh, -1)
            if p:
                col[x] = p
    with _kl_lock:
        _kl_cols[y] = col
    return col


def kl_poly(x: Perm, y: Perm) -> QPoly:
    """P_{x,y}(q); zero when x is not below y."""
    if len(x) != len(y):
        raise ValueError("size mismatch")
    if _store is not None and y not in _kl_cols:
        _store.warm_kl(len(y), _kl_cols)
    p = kl_column(y).get(x)
    return QPoly.from_list(p) if p else QPoly()


def mu(x: Perm, y: Perm) -> int:
    """Leading KL coefficient, symmetrised: mu(x,y) = mu(y,x)."""
    if bruhat_leq(y, x) and x != y:
        x, y = y, x
    return _mu(kl_column(y).get(x, ()), length(x), length(y))


# parabolic quotients --------------------------------------------------------------------


def blocks_of_J(J: Iterable[int], n: int) -> List[Tuple[int, int]]:
    """Maximal runs [a, b] of positions joined by the simple reflections in J."""
    J = set(J)
    out = []
    start = 1
    for i in range(1, n + 1):
        if i not in J:
            out.append((start, i))
            start = i + 1
    return out


def longest_of_J(J: Iterable[int], n: int) -> Perm:
    p = []
    for a, b in blocks_of_J(J, n):
        p.extend(range(b, a - 1, -1))
    return tuple(p)


def is_min_coset_rep(w: Perm, J: Iterable[int]) -> bool:
    return not any(has_left_descent(w, i) for i in J)


def min_coset_reps(J: Iterable[int], n: int) -> List[Perm]:
    J = frozenset(J)
    return _min_coset_reps(J, n)


@lru_cache(maxsize=None)
def _min_coset_reps(J: FrozenSet[int], n: int) -> List[Perm]:
    return sorted((w for w in all_perms(n) if is_min_coset_rep(w, J)), key=lambda w: (length(w), w))


def subgroup(J: Iterable[int], n: int) -> List[Perm]:
    """Elements of the parabolic subgroup S_J."""
    blocks = blocks_of_J(J, n)
    pieces = [list(itertools.permutations(range(a, b + 1))) for a, b in blocks]
    out = []
    for combo in itertools.product(*pieces):
        out.append(tuple(itertools.chain.from_iterable(combo)))
    return out


def parabolic_kl(J: Iterable[int], w: Perm, v: Perm) -> QPoly:
    """P^J_{w,v} = P_{wJ w, wJ v} on minimal coset representatives."""
    J = frozenset(J)
    if not (is_min_coset_rep(w, J) and is_min_coset_rep(v, J)):
        raise ValueError("arguments must be minimal coset representatives")
    wj = longest_of_J(J, len(w))
    return kl_poly(compose(wj, w), compose(wj, v))


# multisegments of parabolic type -----------------------------------------------------------


class ParabolicBase:
    """A base a_Id with distinct begins and weakly increasing ends."""

    def __init__(self, begins: Sequence[int], ends: Sequence[int]):
        if list(begins) != sorted(set(begins)):
            raise ValueError("begins must be distinct and increasing")
        if list(ends) != sorted(ends) or len(ends) != len(begins):
            raise ValueError("ends must be sorted, one per begin")
        self.begins = tuple(begins)
        self.ends = tuple(ends)
        self.n = len(begins)
        self.J = frozenset(i for i in range(1, self.n) if ends[i - 1] == ends[i])

    @classmethod
    def of(cls, a: Multisegment) -> "ParabolicBase":
        return cls(sorted(s.begin for s in a), sorted(s.end for s in a))

    def multisegment(self) -> Multisegment:
        return Multisegment(Segment(b, e) for b, e in zip(self.begins, self.ends))

    def all_valid(self) -> bool:
        """Every Phi image consists of honest segments."""
        return not self.begins or max(self.begins) <= min(self.ends)

    def phi(self, w: Perm) -> Multisegment:
        if not is_min_coset_rep(w, self.J):
            raise ValueError("w is not a minimal coset representative")
        segs = []
        for j in range(self.n):
            b = self.begins[j]
            e = self.ends[w[j] - 1]
            if b > e:
                raise ValueError("Phi(w) has an empty segment")
            segs.append(Segment(b, e))
        return Multisegment(segs)

    def phi_inverse(self, c: Multisegment) -> Perm:
        if sorted(s.begin for s in c) != list(self.begins) or sorted(s.end for s in c) != list(self.ends):
            raise ValueError("%s is not in the image of Phi" % c)
        by_begin = {s.begin: s.end for s in c}
        slots: Dict[int, List[int]] = {}
        for idx, e in enumerate(self.ends, 1):
            slots.setdefault(e, []).append(idx)
        w = []
        for b in self.begins:
            w.append(slots[by_begin[b]].pop(0))
        return tuple(w)

    def reps(self) -> List[Perm]:
        return min_coset_reps(self.J, self.n)

    def __eq__(self, other):
        return isinstance(other, ParabolicBase) and (self.begins, self.ends) == (other.begins, other.ends)

    def __hash__(self):
        return hash((self.begins, self.ends))

    def __repr__(self):
        return "ParabolicBase(%s)" % self.multisegment()


def is_parabolic_type(a: Multisegment) -> bool:
    """Pairwise distinct begins."""
    bs = [s.begin for s in a]
    return len(bs) == len(set(bs))


def phi_map(J: Iterable[int], w: Perm, base: Multisegment) -> Multisegment:
    pb = ParabolicBase.of(base)
    if pb.multisegment() != base:
        raise ValueError("base is not a_Id of parabolic type")
    if frozenset(J) != pb.J:
        raise ValueError("J does not match the equal-end blocks of the base")
    return pb.phi(w)


class Split:
    def __init__(self, J1, J2, a1, a2):
        self.J1 = J1
        self.J2 = J2
        self.a1 = a1
        self.a2 = a2

    def __iter__(self):
        return iter((self.J1, self.J2, self.a1, self.a2))


def parabolic_J_split(a: Multisegment, k: int, r0: int) -> Split:
    """a1 extends the r0 end-k members with the largest begins to k+1,
    a2 truncates the r0 end-k members with the smallest begins to k-1."""
    pb = ParabolicBase.of(a)
    if pb.multisegment() != a:
        raise ValueError("a must be the base a_Id")
    ak = sorted(a.ending_at(k), key=lambda s: s.begin)
    if not ak or a.n_ending(k + 1):
        raise ValueError("need segments ending at k and none ending at k+1")
    if not 0 <= r0 <= len(ak):
        raise ValueError("r0 out of range")
    rest = a.remove(ak)
    top = ak[len(ak) - r0:]
    a1 = rest + ak[:len(ak) - r0] + [s.plus() for s in top]
    low = ak[:r0]
    cut = [s.minus() for s in low]
    if any(c is None for c in cut):
        raise ValueError("truncation would empty a segment")
    a2 = rest + cut + ak[r0:]
    return Split(ParabolicBase.of(a1).J, ParabolicBase.of(a2).J, a1, a2)


# theta --------------------------------------------------------------------------------------


def right_coset_reps_inside(J1: FrozenSet[int], J: FrozenSet[int], n: int) -> List[Perm]:
    """Minimal length representatives of S_J1 \\ S_J."""
    return [r for r in subgroup(J, n) if is_min_coset_rep(r, J1)]


_theta_cache: Dict[Tuple, Dict[Perm, QPoly]] = {}


def theta_column(J: Iterable[int], J1: Iterable[int], t: Perm) -> Dict[Perm, QPoly]:
    """{u: theta(u, t)} by descending induction over the minimal representatives of J."""
    J = frozenset(J)
    J1 = frozenset(J1)
    if not J1 <= J:
        raise ValueError("J1 must be contained in J")
    n = len(t)
    if not is_min_coset_rep(t, J1):
        raise ValueError("t must be a minimal J1 representative")
    key = (J, J1, t)
    hit = _theta_cache.get(key)
    if hit is not None:
        return hit
    rhos = right_coset_reps_inside(J1, J, n)
    reps = min_coset_reps(J, n)
    wj1 = longest_of_J(J1, n)
    wj = longest_of_J(J, n)
    colt = kl_column(compose(wj1, t))
    lhs: Dict[Perm, QPoly] = {}
    for w in reps:
        total = QPoly()
        for r in rhos:
            x = compose(r, w)
            p = colt.get(compose(wj1, x))
            if p:
                total = total + QPoly.from_list(p).shift(length(r))
        lhs[w] = total
    theta: Dict[Perm, QPoly] = {}
    for w in sorted(reps, key=length, reverse=True):
        val = lhs[w]
        for u, th in theta.items():
            p = kl_column(compose(wj, u)).get(compose(wj, w))
            if p:
                val = val - th * QPoly.from_list(p)
        if val:
            theta[w] = val
    _theta_cache[key] = theta
    return theta


def theta(J: Iterable[int], J1: Iterable[int], w: Perm, t: Perm) -> QPoly:
    if not is_min_coset_rep(w, frozenset(J)):
        raise ValueError("w must be a minimal J representative")
    return theta_column(J, J1, t).get(w, QPoly())


def theta_at_one(J, J1, w: Perm, t: Perm) -> int:
    return theta(J, J1, w, t).at_one()


def clear_caches() -> None:
    with _kl_lock:
        _kl_cols.clear()
        _theta_cache.clear()
