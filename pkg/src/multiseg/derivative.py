"""The q=1 Grothendieck ring: standard and irreducible bases, the partial
derivative operator D^k, and three independent ways to expand D^k(L_a)."""

from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import quantum, weyl
from .core import (
    Multisegment,
    Segment,
    gamma_truncation,
    left_truncate,
    prec_k,
    q_set_min,
    reflect,
    truncate_k,
)

STANDARD = "standard"
IRREDUCIBLE = "irreducible"
ROUTES = ("quantum", "basis_change", "parabolic_theta")


class RingVector:
    """Finitely supported integer combination of pi(a) or L_a."""

    __slots__ = ("basis", "terms")

    def __init__(self, basis: str, terms: Optional[Mapping[Multisegment, int]] = None):
        if basis not in (STANDARD, IRREDUCIBLE):
            raise ValueError("unknown basis %r" % basis)
        self.basis = basis
        self.terms = {Multisegment(a): int(c) for a, c in (terms or {}).items() if c}

    @classmethod
    def standard(cls, a: Multisegment) -> "RingVector":
        return cls(STANDARD, {a: 1})

    @classmethod
    def irreducible(cls, a: Multisegment) -> "RingVector":
        return cls(IRREDUCIBLE, {a: 1})

    def coeff(self, a: Multisegment) -> int:
        return self.terms.get(a, 0)

    def __add__(self, other: "RingVector") -> "RingVector":
        self._same(other)
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out.get(a, 0) + c
        return RingVector(self.basis, out)

    def __sub__(self, other: "RingVector") -> "RingVector":
        return self + other.scale(-1)

    def scale(self, s: int) -> "RingVector":
        return RingVector(self.basis, {a: s * c for a, c in self.terms.items()})

    def _same(self, other):
        if self.basis != other.basis:
            raise ValueError("basis mismatch: %s vs %s" % (self.basis, other.basis))

    def __eq__(self, other):
        return isinstance(other, RingVector) and self.basis == other.basis and self.terms == other.terms

    def __hash__(self):
        return hash((self.basis, frozenset(self.terms.items())))

    def sorted_terms(self) -> List[Tuple[int, Multisegment]]:
        return sorted(((c, a) for a, c in self.terms.items()), key=lambda t: (-t[1].degree, str(t[1])))

    def __str__(self):
        sym = "pi" if self.basis == STANDARD else "L"
        if not self.terms:
            return "0"
        parts = []
        for c, a in self.sorted_terms():
            body = "%s(%s)" % (sym, a)
            parts.append(("- " if c < 0 else "+ ") + ("" if abs(c) == 1 else "%d*" % abs(c)) + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    __repr__ = __str__

    def to_json(self) -> List[dict]:
        return [{"coeff": c, "ms": str(a)} for c, a in self.sorted_terms()]


def _acc(d: Dict[Multisegment, int], a: Multisegment, c: int) -> None:
    v = d.get(a, 0) + c
    if v:
        d[a] = v
    else:
        d.pop(a, None)


# basis change ------------------------------------------------------------------------


def m_coeffs(a: Multisegment) -> Dict[Multisegment, int]:
    """pi(a) = sum_b m(b,a) L_b with m(b,a) = P_{a,b}(1)."""
    pm = quantum.interval_basis(a)
    return {b: p.at_one() for b, p in pm.row(a).items() if p.at_one()}


def mtilde_coeffs(a: Multisegment) -> Dict[Multisegment, int]:
    """L_a = sum_b mtilde(b,a) pi(b)."""
    return quantum.interval_basis(a).mtilde_column(a)


def to_irreducible(x: RingVector) -> RingVector:
    if x.basis == IRREDUCIBLE:
        return x
    out: Dict[Multisegment, int] = {}
    for a, c in x.terms.items():
        for b, m in m_coeffs(a).items():
            _acc(out, b, c * m)
    return RingVector(IRREDUCIBLE, out)


def to_standard(x: RingVector) -> RingVector:
    if x.basis == STANDARD:
        return x
    out: Dict[Multisegment, int] = {}
    for a, c in x.terms.items():
        for b, m in mtilde_coeffs(a).items():
            _acc(out, b, c * m)
    return RingVector(STANDARD, out)


def multiply(x: RingVector, y: RingVector) -> RingVector:
    """pi(a) pi(b) = pi(a + b); irreducible inputs go through the standard basis."""
    x._same(y)
    xs, ys = to_standard(x), to_standard(y)
    out: Dict[Multisegment, int] = {}
    for a, c in xs.terms.items():
        for b, d in ys.terms.items():
            _acc(out, a + b, c * d)
    prod = RingVector(STANDARD, out)
    return prod if x.basis == STANDARD else to_irreducible(prod)


# D^k on the standard basis --------------------------------------------------------------


def _gamma_choices(a: Multisegment, k: int) -> Iterable[Tuple[Tuple[Segment, ...], int]]:
    """Sub-multisets of a(k) with the number of index subsets giving each."""
    cnt = Counter(a.ending_at(k))
    items = sorted(cnt.items())

    def rec(i: int, chosen: List[Segment], weight: int):
        if i == len(items):
            yield tuple(chosen), weight
            return
        s, m = items[i]
        for j in range(m + 1):
            yield from rec(i + 1, chosen + [s] * j, weight * comb(m, j))

    yield from rec(0, [], 1)


def dk_standard(x: RingVector, k: int) -> RingVector:
    """D^k(pi(a)) = sum over sub-collections Gamma of a(k) of pi(a_Gamma)."""
    if x.basis != STANDARD:
        raise ValueError("dk_standard needs the standard basis")
    out: Dict[Multisegment, int] = {}
    for a, c in x.terms.items():
        for g, mult in _gamma_choices(a, k):
            _acc(out, gamma_truncation(a, k, g), c * mult)
    return RingVector(STANDARD, out)


def e_prime(x: RingVector, k: int) -> RingVector:
    """The derivation with t_[j,k] -> t_[j,k-1] and t_[k] -> 1."""
    if x.basis != STANDARD:
        raise ValueError("e_prime needs the standard basis")
    out: Dict[Multisegment, int] = {}
    for a, c in x.terms.items():
        cnt = Counter(a)
        for s, m in cnt.items():
            if s.end != k:
                continue
            rest = a.remove([s])
            low = s.minus()
            _acc(out, rest if low is None else rest + [low], c * m)
    return RingVector(STANDARD, out)


def dk_via_exp(x: RingVector, k: int) -> RingVector:
    """sum_n e'^n / n!, with each division checked to be exact."""
    total: Dict[Multisegment, int] = dict(x.terms)
    cur = x
    n = 0
    while True:
        cur = e_prime(cur, k)
        n += 1
        if not cur.terms:
            break
        f = factorial(n)
        for a, c in cur.terms.items():
            if c % f:
                raise ArithmeticError("e'^%d / %d! is not integral at %s" % (n, n, a))
            _acc(total, a, c // f)
    return RingVector(STANDARD, total)


def dk(x: RingVector, k: int) -> RingVector:
    """D^k in whichever basis x is given (irreducible inputs use the basis change)."""
    if x.basis == STANDARD:
        return dk_standard(x, k)
    return to_irreducible(dk_standard(to_standard(x), k))


def left_dk(x: RingVector, k: int) -> RingVector:
    """The left operator, transported through the reflection [i,j] -> [-j,-i]."""
    rx = RingVector(x.basis, {reflect(a): c for a, c in x.terms.items()})
    y = dk(rx, -k)
    return RingVector(x.basis, {reflect(a): c for a, c in y.terms.items()})


# route 1: quantum ----------------------------------------------------------------------------


def derive_quantum(a: Multisegment, k: int) -> RingVector:
    """Divided powers of E_k' applied to G*(a), read off in G* at v = 1."""
    g = quantum.dual_canonical_element(a)
    out: Dict[Multisegment, int] = {}
    for ell in range(a.n_ending(k) + 1):
        acc: Dict[Multisegment, quantum.Laurent] = {}
        for d, c in g.terms.items():
            for b, x in quantum.divided_derivative(d, k, ell).items():
                quantum._acc(acc, b, c * x)
        if not acc:
            continue
        gs = quantum.to_dual_canonical(quantum.QVector("Estar", acc))
        for b, c in gs.terms.items():
            _acc(out, b, c.at_one())
    return RingVector(IRREDUCIBLE, out)


# route 2: basis change -----------------------------------------------------------------------


def derive_basis_change(a: Multisegment, k: int) -> RingVector:
    return to_irreducible(dk_standard(to_standard(RingVector.irreducible(a)), k))


# minimal degree analysis and the membership surrogate -------------------------------------------


@dataclass(frozen=True)
class MinimalDegree:
    clean: bool
    min_term: Optional[Multisegment]
    coefficient: int
    gap: bool


_md_cache: Dict[Tuple[Multisegment, int], MinimalDegree] = {}
_md_lock = threading.Lock()


def minimal_degree_analysis(a: Multisegment, k: int) -> MinimalDegree:
    """Is L_{a^(k)} the minimal degree term of D^k(L_a), with multiplicity one?"""
    key = (a, k)
    hit = _md_cache.get(key)
    if hit is not None:
        return hit
    target = truncate_k(a, k)
    d = derive_basis_change(a, k)
    c = d.coeff(target)
    mindeg = min(b.degree for b in d.terms)
    if c == 1:
        others = [b for b in d.terms if b.degree <= target.degree and b != target]
        res = MinimalDegree(not others, target, 1, not others)
    else:
        gap = c == 0 and mindeg > target.degree
        lows = [b for b in d.terms if b.degree == mindeg]
        res = MinimalDegree(False, lows[0] if len(lows) == 1 else None, c, gap)
    with _md_lock:
        _md_cache[key] = res
    return res


def in_S_right(a: Multisegment, k: int) -> bool:
    """Surrogate for a in S(a)_k."""
    return minimal_degree_analysis(a, k).clean


def in_S_left(a: Multisegment, k: int) -> bool:
    return minimal_degree_analysis(reflect(a), -k).clean


# route 3: parabolic theta --------------------------------------------------------------------


def is_parabolic_ready(c: Multisegment, k: int) -> bool:
    """Distinct begins, max begin <= min end, nothing ends at k+1, and end-k
    segments survive truncation."""
    bs = [s.begin for s in c]
    if len(set(bs)) != len(bs) or not c:
        return False
    if max(bs) > min(s.end for s in c):
        return False
    if c.n_ending(k + 1):
        return False
    return not c.n_ending(k) or max(bs) <= k - 1


def t_of(a: Multisegment, b: Multisegment, k: int, base1: weyl.ParabolicBase) -> weyl.Perm:
    """t_v: the Phi-index of (min Q(a, b))^sharp relative to a1."""
    res = q_set_min(a, b, k)
    return base1.phi_inverse(res.sharp)


def derive_theta_parabolic(c: Multisegment, k: int) -> RingVector:
    """D^k(L_c) for c = Phi(w) of parabolic type, assembled from theta values."""
    if not is_parabolic_ready(c, k):
        raise ValueError("%s is not a reduced parabolic input for k=%d" % (c, k))
    pb = weyl.ParabolicBase.of(c)
    a = pb.multisegment()
    w = pb.phi_inverse(c)
    lk = a.n_ending(k)
    if lk == 0:
        return RingVector.irreducible(c)
    out: Dict[Multisegment, int] = {}
    for r0 in range(lk + 1):
        a2 = weyl.parabolic_J_split(a, k, r0).a2
        a1 = weyl.parabolic_J_split(a, k, lk - r0).a1
        base2 = weyl.ParabolicBase.of(a2)
        base1 = weyl.ParabolicBase.of(a1)
        for v in base2.reps():
            b = base2.phi(v)
            t = t_of(a, b, k, base1)
            th = weyl.theta(pb.J, base1.J, w, t).at_one()
            if th:
                _acc(out, b, th)
    return RingVector(IRREDUCIBLE, out)


@dataclass
class Reduction:
    """c = left truncations (in order) of right truncations (in order) of target."""

    source: Multisegment
    k: int
    target: Multisegment
    lefts: List[int] = field(default_factory=list)
    rights: List[int] = field(default_factory=list)

    def steps(self) -> List[Tuple[str, int]]:
        return [("R", m) for m in self.rights] + [("L", m) for m in self.lefts]

    def replay(self, d: Multisegment) -> Multisegment:
        for side, m in self.steps():
            d = truncate_k(d, m) if side == "R" else left_truncate(d, m)
        return d


def _dup_pass(c: Multisegment) -> Tuple[Multisegment, List[int]]:
    bc = Counter(s.begin for s in c)
    i0 = min(b for b, m in bc.items() if m > 1)
    lower = sorted(b for b in bc if b < i0)
    d0 = max((s for s in c if s.begin == i0), key=lambda s: s.end)
    segs = [s.left_plus() if s.begin < i0 else s for s in c]
    segs.remove(d0)
    segs.append(d0.left_plus())
    undo = [i0 - 1] + [j - 1 for j in reversed(lower)]
    return Multisegment(segs), undo


def _shift_pass(c: Multisegment) -> Tuple[Multisegment, List[int]]:
    bs = sorted(s.begin for s in c)
    return Multisegment(s.left_plus() for s in c), [b - 1 for b in reversed(bs)]


def reduce_to_parabolic(c: Multisegment, k: int, max_shifts: int = 64) -> Reduction:
    if not c.n_ending(k):
        raise ValueError("no segment of %s ends at %d" % (c, k))
    cur = c
    passes: List[List[int]] = []
    guard = 0
    while len({s.begin for s in cur}) != len(cur):
        before = sum(m - 1 for m in Counter(s.begin for s in cur).values())
        cur, undo = _dup_pass(cur)
        after = sum(m - 1 for m in Counter(s.begin for s in cur).values())
        assert after < before, "duplicate beginnings did not decrease"
        passes.append(undo)
        guard += 1
    rights: List[int] = []
    if cur.n_ending(k + 1):
        high = sorted({s.end for s in cur if s.end > k})
        cur = Multisegment(s.plus() if s.end > k else s for s in cur)
        rights = [e + 1 for e in high]
    shifts = 0
    while not is_parabolic_ready(cur, k):
        if shifts >= max_shifts:
            raise RuntimeError("left shifting did not terminate")
        cur, undo = _shift_pass(cur)
        passes.append(undo)
        shifts += 1
    lefts = [m for undo in reversed(passes) for m in undo]
    red = Reduction(c, k, cur, lefts, rights)
    assert red.replay(cur) == c, "reduction does not replay to the source"
    return red


def filter_step(d: Multisegment, a: Multisegment, k: int, side: str, m: int) -> Optional[Tuple[Multisegment, Multisegment]]:
    """One step of the transfer filter; returns the truncated pair or None."""
    if side == "R":
        if d.n_ending(m) != a.n_ending(m) or not in_S_right(d, m):
            return None
        d2, a2 = truncate_k(d, m), truncate_k(a, m)
    else:
        nb = sum(1 for s in d if s.begin == m)
        na = sum(1 for s in a if s.begin == m)
        if nb != na or not in_S_left(d, m):
            return None
        d2, a2 = left_truncate(d, m), left_truncate(a, m)
    if not prec_k(d2, a2, k):
        return None
    return d2, a2


def transfer_filters(a: Multisegment, k: int, steps: Sequence[Tuple[str, int]],
                     candidates: Iterable[Multisegment]) -> Dict[Multisegment, Multisegment]:
    """{d: image of d} for the candidates surviving every filter step."""
    out = {}
    for d in candidates:
        dc, ac = d, a
        ok = True
        for side, m in steps:
            nxt = filter_step(dc, ac, k, side, m)
            if nxt is None:
                ok = False
                break
            dc, ac = nxt
        if ok:
            out[d] = dc
    return out


def derive_theta(c: Multisegment, k: int) -> Tuple[RingVector, Reduction]:
    if not c.n_ending(k):
        return RingVector.irreducible(c), Reduction(c, k, c)
    red = reduce_to_parabolic(c, k)
    top = derive_theta_parabolic(red.target, k)
    images = transfer_filters(red.target, k, red.steps(), top.terms)
    out: Dict[Multisegment, int] = {}
    for d, img in images.items():
        _acc(out, img, top.terms[d])
    return RingVector(IRREDUCIBLE, out), red


def theta_k(b: Multisegment, a: Multisegment, k: int) -> int:
    return derive_theta(a, k)[0].coeff(b)


# dispatch -------------------------------------------------------------------------------------


def derive_irreducible(a: Multisegment, k: int, route: str = "quantum") -> RingVector:
    if route == "quantum":
        return derive_quantum(a, k)
    if route == "basis_change":
        return derive_basis_change(a, k)
    if route == "parabolic_theta":
        return derive_theta(a, k)[0]
    raise ValueError("unknown route %r" % route)


def clear_caches() -> None:
    with _md_lock:
        _md_cache.clear()
