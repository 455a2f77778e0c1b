"""The quantum algebra side: dual PBW monomials, straightening, bar involution,
canonical bases, the Kashiwara form and the q-derivations E_i'.

Elements are stored on the dual PBW side as {Multisegment: Laurent} maps.
Internally products are expanded in ordered monomials M(a) = prod T_s^{a_s}
(canonical segment order); E*(a) = v^(sum binom(a_s, 2)) M(a).
"""

from __future__ import annotations

import random
import threading
from collections import Counter
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .core import (
    Multisegment,
    Segment,
    Weight,
    below_set,
    enumerate_weight,
    seg_link_ops,
)
from .laurent import (
    ONE,
    ZERO,
    Laurent,
    one_minus_q,
    q_factorial,
    qfactorial,
    vpow,
)

Word = Tuple[Segment, ...]
Vec = Dict[Multisegment, Laurent]

DEFAULT_MAX_DEGREE = 10


def _key(s: Segment):
    return PBW_KEY(s)


def _key_t(s: Segment):
    return (s.end, -s.begin)


def _key_convex(s: Segment):
    return (s.end, s.begin)


PBW_KEY = _key_convex


def pbw_word(a) -> Tuple[Segment, ...]:
    return tuple(sorted(a, key=_key))


def seg_pairing(s: Segment, t: Segment) -> int:
    """(wt s, wt t) for the symmetric type A form."""

    def overlap(a0, a1, b0, b1):
        return max(0, min(a1, b1) - max(a0, b0) + 1)

    same = overlap(s.begin, s.end, t.begin, t.end)
    adj = overlap(s.begin, s.end, t.begin + 1, t.end + 1) + overlap(s.begin, s.end, t.begin - 1, t.end - 1)
    return 2 * same - adj


def _binom_exp(a: Multisegment) -> int:
    return sum(m * (m - 1) // 2 for m in Counter(a).values())


def _acc(out: Dict, key, c: Laurent):
    x = out.get(key)
    if x is None:
        out[key] = c
    else:
        y = x + c
        if y:
            out[key] = y
        else:
            del out[key]


# straightening -------------------------------------------------------------------

_insert_cache: Dict[Tuple[Word, Segment], Dict[Word, Laurent]] = {}
_lock = threading.RLock()
_V_MINUS_VINV = Laurent({-1: 1, 1: -1})  # v^-1 - v
_ONE_MINUS_Q = one_minus_q()


def swap_relation(s: Segment, t: Segment):
    """For s after t in canonical order, T_s T_t = A T_t T_s + B (ordered word).

    Returns (A, B, word). B is v^-1 - v when the intersection is nonempty and
    1 - q when the two segments are adjacent; the word is T_cap T_cup in
    canonical order (T_cup alone when adjacent).
    """
    a = vpow(-seg_pairing(s, t))
    r = seg_link_ops(s, t)
    if not r.linked:
        return a, ZERO, ()
    if r.intersection is None:
        return a, _ONE_MINUS_Q, (r.union,)
    w = tuple(sorted([r.intersection, r.union], key=_key))
    return a, _V_MINUS_VINV, w


def _insert(u: Word, s: Segment) -> Dict[Word, Laurent]:
    """Straighten u * T_s where u is already ordered."""
    if not u or _key(u[-1]) <= _key(s):
        return {u + (s,): ONE}
    ck = (u, s)
    hit = _insert_cache.get(ck)
    if hit is not None:
        return hit
    t = u[-1]
    head = u[:-1]
    a, b, extra = swap_relation(t, s)
    out: Dict[Word, Laurent] = {}
    for w, c in _insert(head, s).items():
        for w2, c2 in _insert(w, t).items():
            _acc(out, w2, c * c2 * a)
    if b:
        cur = {head: b}
        for x in extra:
            nxt: Dict[Word, Laurent] = {}
            for w, c in cur.items():
                for w2, c2 in _insert(w, x).items():
                    _acc(nxt, w2, c * c2)
            cur = nxt
        for w, c in cur.items():
            _acc(out, w, c)
    with _lock:
        _insert_cache[ck] = out
    return out


def straighten_word(word: Sequence[Segment]) -> Dict[Word, Laurent]:
    """Expand an arbitrary word in the T_s into ordered monomials."""
    cur: Dict[Word, Laurent] = {(): ONE}
    for s in word:
        nxt: Dict[Word, Laurent] = {}
        for w, c in cur.items():
            for w2, c2 in _insert(w, s).items():
                _acc(nxt, w2, c * c2)
        cur = nxt
    return cur


def _words_to_estar(d: Mapping[Word, Laurent]) -> Vec:
    out: Vec = {}
    for w, c in d.items():
        a = Multisegment(w)
        _acc(out, a, c.shift(-_binom_exp(a)))
    return out


def straighten(word: Sequence[Segment], coeff: Laurent = ONE) -> "QVector":
    """Coordinates of coeff * T_{w1} ... T_{wn} in the dual PBW basis E*."""
    d = straighten_word(tuple(word))
    return QVector("Estar", {a: c * coeff for a, c in _words_to_estar(d).items()})


def rewrite_random(word: Sequence[Segment], rng: random.Random) -> Dict[Word, Laurent]:
    """Straighten by rewriting a randomly chosen out-of-order pair each step."""
    todo: Dict[Word, Laurent] = {tuple(word): ONE}
    done: Dict[Word, Laurent] = {}
    while todo:
        w, c = todo.popitem()
        bad = [i for i in range(len(w) - 1) if _key(w[i]) > _key(w[i + 1])]
        if not bad:
            _acc(done, w, c)
            continue
        i = rng.choice(bad)
        a, b, extra = swap_relation(w[i], w[i + 1])
        _acc(todo, w[:i] + (w[i + 1], w[i]) + w[i + 2:], c * a)
        if b:
            _acc(todo, w[:i] + extra + w[i + 2:], c * b)
    return done


def monomial_word(a: Multisegment) -> Word:
    return pbw_word(a)


# vectors ---------------------------------------------------------------------------


class QVector:
    """Finitely supported vector over Z[v, v^-1] tagged with its basis."""

    __slots__ = ("basis", "terms")

    def __init__(self, basis: str, terms: Optional[Mapping] = None):
        self.basis = basis
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    def __add__(self, other: "QVector") -> "QVector":
        if self.basis != other.basis:
            raise ValueError("basis mismatch")
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        return QVector(self.basis, out)

    def scale(self, c) -> "QVector":
        c = Laurent.coerce(c)
        return QVector(self.basis, {k: x * c for k, x in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, QVector) and self.basis == other.basis and self.terms == other.terms

    def __repr__(self):
        inner = " + ".join("(%s)*%s(%s)" % (c, self.basis, k) for k, c in self.terms.items())
        return inner or "0"

    def weight(self) -> Optional[Weight]:
        ws = {k.weight() for k in self.terms}
        if len(ws) > 1:
            raise ValueError("mixed weights")
        return ws.pop() if ws else None

    def at_one(self) -> Dict:
        return {k: c.at_one() for k, c in self.terms.items() if c.at_one()}


def estar(a: Multisegment) -> QVector:
    return QVector("Estar", {a: ONE})


def multiply(x: QVector, y: QVector) -> QVector:
    """Product in the algebra, both factors in E* coordinates."""
    out: Dict[Word, Laurent] = {}
    for a, ca in x.terms.items():
        pa = ca.shift(_binom_exp(a))
        for b, cb in y.terms.items():
            pb = cb.shift(_binom_exp(b))
            for w, c in straighten_word(pbw_word(a) + pbw_word(b)).items():
                _acc(out, w, c * pa * pb)
    return QVector("Estar", _words_to_estar(out))


# bar involution -----------------------------------------------------------------

_bar_gen_cache: Dict[Segment, Dict[Word, Laurent]] = {}
_bar_cache: Dict[Multisegment, Vec] = {}
_ONE_MINUS_QINV = Laurent({0: 1, -2: -1})


def _mul_words(x: Mapping[Word, Laurent], y: Mapping[Word, Laurent]) -> Dict[Word, Laurent]:
    out: Dict[Word, Laurent] = {}
    for u, a in x.items():
        for w, b in y.items():
            cur = {u: a * b}
            for s in w:
                nxt: Dict[Word, Laurent] = {}
                for w1, c1 in cur.items():
                    for w2, c2 in _insert(w1, s).items():
                        _acc(nxt, w2, c1 * c2)
                cur = nxt
            for w1, c1 in cur.items():
                _acc(out, w1, c1)
    return out


def bar_generator(s: Segment) -> Dict[Word, Laurent]:
    """bar(T_s) in ordered monomials.

    Uses (1-q) T_[i,j] = T_[j] T_[i,j-1] - v T_[i,j-1] T_[j], which is the
    q-commutator definition of the root vector after rescaling.
    """
    hit = _bar_gen_cache.get(s)
    if hit is not None:
        return hit
    if s.begin == s.end:
        res = {(s,): ONE}
    else:
        inner = bar_generator(Segment(s.begin, s.end - 1))
        top = {(Segment(s.end, s.end),): ONE}
        left = _mul_words(top, inner)
        right = _mul_words(inner, top)
        num = dict(left)
        for w, c in right.items():
            _acc(num, w, -c.shift(-1))
        res = {w: c.divexact(_ONE_MINUS_QINV) for w, c in num.items()}
    with _lock:
        _bar_gen_cache[s] = res
    return res


def bar_estar(a: Multisegment) -> Vec:
    """bar(E*(a)) in E* coordinates."""
    hit = _bar_cache.get(a)
    if hit is not None:
        return hit
    d = 1 - min(s.begin for s in a) if a else 0
    if d:
        res = {translate(b, -d): c for b, c in bar_estar(translate(a, d)).items()}
        with _lock:
            _bar_cache[a] = res
        return res
    cur: Dict[Word, Laurent] = {(): vpow(-_binom_exp(a))}
    for s in pbw_word(a):
        cur = _mul_words(cur, bar_generator(s))
    res = _words_to_estar(cur)
    with _lock:
        _bar_cache[a] = res
    return res


def bar(x: QVector) -> QVector:
    if x.basis != "Estar":
        raise ValueError("bar works on E* coordinates")
    out: Vec = {}
    for a, c in x.terms.items():
        cb = c.bar()
        for b, d in bar_estar(a).items():
            _acc(out, b, cb * d)
    return QVector("Estar", out)


# scalars linking E and E* --------------------------------------------------------


def n_boxes_minus_segments(a: Multisegment) -> int:
    return a.degree - len(a)


def c_scalar_parts(a: Multisegment) -> Tuple[Laurent, int]:
    """E*(a) = c_a E(a) with c_a = num / (1-q)^power; returns (num, power)."""
    num = ONE
    for m in Counter(a).values():
        num = num * q_factorial(m)
    return num, n_boxes_minus_segments(a)


def _sym_fact(a: Multisegment) -> Laurent:
    out = ONE
    for m in Counter(a).values():
        out = out * qfactorial(m)
    return out


# canonical basis -------------------------------------------------------------------


class PMatrix:
    """Transition data for one weight: G(a) = sum_{b >= a} P[b,a] E(b)."""

    def __init__(self, weight: Weight, labels: Sequence[Multisegment], entries: Mapping[Tuple[Multisegment, Multisegment], Laurent]):
        self.weight = Weight(weight)
        self.labels = tuple(labels)
        self.entries = {k: c for k, c in entries.items() if c}
        self._inv_one: Optional[Dict[Tuple[Multisegment, Multisegment], int]] = None
        self._inv_cols: Dict[Multisegment, Dict[Multisegment, int]] = {}
        self._rows = None
        self._cols = None
        self._dual = None

    def P(self, b: Multisegment, a: Multisegment) -> Laurent:
        return self.entries.get((b, a), ZERO)

    def m(self, b: Multisegment, a: Multisegment) -> int:
        """Multiplicity of L_b in pi(a)."""
        return self.P(a, b).at_one()

    def _index(self):
        if self._rows is None:
            rows: Dict[Multisegment, Dict[Multisegment, Laurent]] = {}
            cols: Dict[Multisegment, Dict[Multisegment, Laurent]] = {}
            for (b, a), c in self.entries.items():
                rows.setdefault(b, {})[a] = c
                cols.setdefault(a, {})[b] = c
            self._cols = cols
            self._rows = rows
        return self._rows, self._cols

    def column(self, a: Multisegment) -> Dict[Multisegment, Laurent]:
        return dict(self._index()[1].get(a, {}))

    def row(self, a: Multisegment) -> Dict[Multisegment, Laurent]:
        return dict(self._index()[0].get(a, {}))

    def mtilde(self) -> Dict[Tuple[Multisegment, Multisegment], int]:
        """Inverse at v=1: L_a = sum_b mtilde[b,a] pi(b)."""
        if self._inv_one is None:
            rows = self._index()[0]
            order = sorted(self.labels, key=lambda x: len(below_set(x)))
            cols: Dict[Multisegment, Dict[Multisegment, int]] = {}
            # L_a = pi(a) - sum_{b<a} m(b,a) L_b
            for a in order:
                vec = {a: 1}
                for b, p in rows.get(a, {}).items():
                    m = p.at_one()
                    if b == a or not m:
                        continue
                    for c, x in cols[b].items():
                        y = vec.get(c, 0) - m * x
                        if y:
                            vec[c] = y
                        else:
                            vec.pop(c, None)
                cols[a] = vec
            self._inv_one = {(b, a): x for a, v in cols.items() for b, x in v.items()}
            self._inv_cols = cols
        return self._inv_one

    def mtilde_column(self, a: Multisegment) -> Dict[Multisegment, int]:
        self.mtilde()
        return dict(self._inv_cols[a])

    def restrict(self, labels: Iterable[Multisegment]) -> "PMatrix":
        keep = set(labels)
        return PMatrix(self.weight, [x for x in self.labels if x in keep],
                       {(b, a): c for (b, a), c in self.entries.items() if a in keep and b in keep})

    def translate(self, d: int) -> "PMatrix":
        if d == 0:
            return self
        w = Weight({p + d: c for p, c in self.weight})
        return PMatrix(w, [translate(x, d) for x in self.labels],
                       {(translate(b, d), translate(a, d)): c for (b, a), c in self.entries.items()})

    def to_json(self) -> dict:
        from .core import format_ms

        return {
            "weight": [list(p) for p in self.weight],
            "labels": [format_ms(x) for x in self.labels],
            "entries": [[format_ms(b), format_ms(a), c.to_json()] for (b, a), c in sorted(self.entries.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1])))],
        }

    @classmethod
    def from_json(cls, d: Mapping) -> "PMatrix":
        from .core import parse_ms

        w = Weight([tuple(p) for p in d["weight"]])
        labels = [parse_ms(x) for x in d["labels"]]
        entries = {(parse_ms(b), parse_ms(a)): Laurent.from_json(c) for b, a, c in d["entries"]}
        return cls(w, labels, entries)

    def __eq__(self, other):
        return isinstance(other, PMatrix) and self.weight == other.weight and set(self.labels) == set(other.labels) and self.entries == other.entries


class TriangularityError(AssertionError):
    pass


def bar_matrix_E(phi: Weight, labels: Optional[Sequence[Multisegment]] = None) -> Dict[Tuple[Multisegment, Multisegment], Laurent]:
    """B[b,a] with bar(E(a)) = sum_b B[b,a] E(b), restricted to `labels` when given."""
    if labels is None:
        labels = enumerate_weight(phi)
    keep = set(labels)
    out: Dict[Tuple[Multisegment, Multisegment], Laurent] = {}
    for a in labels:
        na = n_boxes_minus_segments(a)
        fa = _sym_fact(a)
        ea = _binom_exp(a)
        for b, coeff in bar_estar(a).items():
            if b not in keep:
                continue
            nb = n_boxes_minus_segments(b)
            # c_b / bar(c_a), assembled to keep the division exact
            num = coeff * _sym_fact(b)
            num = num.shift(_binom_exp(b) + ea - 2 * na)
            if na % 2:
                num = -num
            diff = na - nb
            if diff >= 0:
                num = num * one_minus_q(diff)
                val = num.divexact(fa)
            else:
                val = num.divexact(fa * one_minus_q(-diff))
            if val:
                out[(b, a)] = val
    return out


_pm_cache: Dict[Weight, PMatrix] = {}
_store = None  # optional persistent store, installed by the cache module


def set_store(store) -> None:
    global _store
    _store = store


def translate(a: Multisegment, d: int) -> Multisegment:
    return Multisegment(Segment(x.begin + d, x.end + d) for x in a)


def _normal_shift(phi: Weight) -> int:
    return 1 - phi[0][0] if phi else 0


def canonical_basis(phi: Weight, max_degree: int = DEFAULT_MAX_DEGREE) -> PMatrix:
    """P-matrix of one weight; computed once per translation class."""
    phi = Weight(phi)
    hit = _pm_cache.get(phi)
    if hit is not None:
        return hit
    if phi.degree() > max_degree:
        raise ValueError("weight degree %d exceeds bound %d" % (phi.degree(), max_degree))
    d = _normal_shift(phi)
    if d:
        pm = canonical_basis(Weight({p + d: c for p, c in phi}), max_degree).translate(-d)
        with _lock:
            _pm_cache[phi] = pm
        return pm
    if _store is not None:
        got = _store.load_pmatrix(phi)
        if got is not None:
            with _lock:
                _pm_cache[phi] = got
            return got
    pm = compute_canonical_basis(phi)
    with _lock:
        _pm_cache[phi] = pm
    if _store is not None:
        _store.save_pmatrix(pm)
    return pm


def compute_canonical_basis(phi: Weight, labels: Optional[Sequence[Multisegment]] = None) -> PMatrix:
    """Triangular solve on `labels` (default: the whole weight).

    Any set closed under going down in the order gives the same entries as the
    whole weight, since P[c,a] only involves labels between a and c.
    """
    if labels is None:
        labels = enumerate_weight(phi)
    B = bar_matrix_E(phi, labels)
    for a in labels:
        if B.get((a, a), ZERO) != ONE:
            raise TriangularityError("diagonal of bar at %s is %s" % (a, B.get((a, a), ZERO)))
    ups: Dict[Multisegment, set] = {a: set() for a in labels}
    for c in labels:
        for b in below_set(c):
            if b != c:
                if b not in ups:
                    raise ValueError("label set is not closed downwards at %s" % c)
                ups[b].add(c)
    for (b, a), c in B.items():
        if b != a and b not in ups[a]:
            raise TriangularityError("bar(E(%s)) has a term at %s" % (a, b))
    rank = {x: i for i, x in enumerate(sorted(labels, key=lambda x: len(below_set(x))))}
    brows: Dict[Multisegment, List[Tuple[Multisegment, Laurent]]] = {}
    for (c, b), x in B.items():
        if c != b:
            brows.setdefault(c, []).append((b, x))
    entries: Dict[Tuple[Multisegment, Multisegment], Laurent] = {}
    for a in labels:
        col = {a: ONE}
        colbar = {a: ONE}
        for c in sorted(ups[a], key=rank.__getitem__):
            r = ZERO
            for b, bc in brows.get(c, ()):
                pb = colbar.get(b)
                if pb is not None:
                    r = r + pb * bc
            if r + r.bar():
                raise TriangularityError("non-antisymmetric correction at (%s, %s)" % (c, a))
            p = Laurent({e: x for e, x in r.terms().items() if e > 0})
            if p:
                col[c] = p
                colbar[c] = p.bar()
        for c, p in col.items():
            entries[(c, a)] = p
    return PMatrix(phi, labels, entries)


_iv_cache: Dict[Multisegment, PMatrix] = {}


def interval_basis(a: Multisegment) -> PMatrix:
    """P-matrix on S(a) only; enough for row a, mtilde and G*(a)."""
    a = Multisegment(a)
    hit = _iv_cache.get(a)
    if hit is not None:
        return hit
    full = _pm_cache.get(a.weight())
    if full is not None:
        pm = full.restrict(below_set(a))
    else:
        d = _normal_shift(a.weight())
        if d:
            pm = interval_basis(translate(a, d)).translate(-d)
        else:
            pm = _store.load_interval(a) if _store is not None else None
            if pm is None:
                pm = compute_canonical_basis(a.weight(), sorted(below_set(a), key=str))
                if _store is not None:
                    _store.save_interval(a, pm)
    with _lock:
        _iv_cache[a] = pm
    return pm


def canonical_element(a: Multisegment) -> QVector:
    """G(a) in the E basis."""
    pm = canonical_basis(a.weight())
    return QVector("E", pm.column(a))


def dual_canonical_element(a: Multisegment) -> QVector:
    """G*(a) in E* coordinates (inverse of the unitriangular P^T)."""
    return QVector("Estar", _dual_inverse(interval_basis(a))[a])


def _dual_inverse(pm: PMatrix) -> Dict[Multisegment, Vec]:
    hit = pm._dual
    if hit is not None:
        return hit
    order = sorted(pm.labels, key=lambda x: len(below_set(x)))
    rows = {a: pm.row(a) for a in pm.labels}  # E*(a) = sum_b P[a,b] G*(b)
    res: Dict[Multisegment, Vec] = {}
    for a in order:
        # G*(a) = E*(a) - sum_{b<a} P[a,b] G*(b)
        vec: Vec = {a: ONE}
        for b, p in rows[a].items():
            if b == a:
                continue
            for c, x in res[b].items():
                _acc(vec, c, -(p * x))
        res[a] = vec
    pm._dual = res
    return res


def to_dual_canonical(x: QVector) -> QVector:
    """Re-express E* coordinates in the G* basis: E*(a) = sum_b P[a,b] G*(b)."""
    out: Vec = {}
    for a, ca in x.terms.items():
        for b, p in interval_basis(a).row(a).items():
            _acc(out, b, ca * p)
    return QVector("Gstar", out)


def from_dual_canonical(x: QVector) -> QVector:
    out: Vec = {}
    for a, c in x.terms.items():
        for b, y in _dual_inverse(interval_basis(a))[a].items():
            _acc(out, b, c * y)
    return QVector("Estar", out)


# Kashiwara form ------------------------------------------------------------------


class QFrac:
    """num / den with den a polynomial in v whose constant term is +-1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=ONE):
        num = Laurent.coerce(num)
        den = Laurent.coerce(den)
        if not den:
            raise ZeroDivisionError
        lo = den.low()
        self.num = num.shift(-lo)
        self.den = den.shift(-lo)

    def __add__(self, other):
        other = other if isinstance(other, QFrac) else QFrac(other)
        if self.den == other.den:
            return QFrac(self.num + other.num, self.den)
        return QFrac(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other):
        other = other if isinstance(other, QFrac) else QFrac(other)
        return self + QFrac(-other.num, other.den)

    def __mul__(self, other):
        other = other if isinstance(other, QFrac) else QFrac(other)
        return QFrac(self.num * other.num, self.den * other.den)

    def __eq__(self, other):
        other = other if isinstance(other, QFrac) else QFrac(other)
        return self.num * other.den == other.num * self.den

    def congruent_mod_v(self, target: int) -> bool:
        """self = target in Z[[v]] modulo v (needs a unit constant term in den)."""
        c0 = self.den.coeff(0)
        if c0 not in (1, -1) or self.den.low() < 0:
            raise ValueError("denominator is not a unit at v=0")
        diff = self.num - self.den * target
        return diff.in_vZv()

    def __repr__(self):
        return "(%s)/(%s)" % (self.num, self.den)


def e_norm(a: Multisegment) -> QFrac:
    """(E(a), E(a)) = (1-q)^deg / prod h_{a_s}(q) = 1/c_a."""
    num, power = c_scalar_parts(a)
    return QFrac(one_minus_q(power), num)


def kashiwara_pair(x: QVector, y: QVector) -> QFrac:
    """Bilinear form, diagonal on the E basis.

    Accepts vectors tagged E or Estar; E* coordinates are converted through
    E*(a) = c_a E(a), so (E*(a), E*(b)) = delta c_a.
    """
    total = QFrac(ZERO)
    for a, ca in x.terms.items():
        if a not in y.terms:
            continue
        cb = y.terms[a]
        num, power = c_scalar_parts(a)
        if x.basis == "E" and y.basis == "E":
            total = total + QFrac(ca * cb * one_minus_q(power), num)
        elif x.basis == "Estar" and y.basis == "Estar":
            total = total + QFrac(ca * cb * num, one_minus_q(power))
        elif {x.basis, y.basis} == {"E", "Estar"}:
            total = total + QFrac(ca * cb)
        else:
            raise ValueError("pairing needs E or Estar vectors")
    return total


# q-derivations -------------------------------------------------------------------


def q_derive_words(i: int, d: Mapping[Word, Laurent]) -> Dict[Word, Laurent]:
    out: Dict[Word, Laurent] = {}
    for w, c in d.items():
        pref = 0
        for m, s in enumerate(w):
            if s.end == i:
                rest = () if s.begin == s.end else (Segment(s.begin, s.end - 1),)
                coeff = c.shift(-pref)
                for w2, c2 in straighten_word(w[:m] + rest + w[m + 1:]).items():
                    _acc(out, w2, coeff * c2)
            pref += seg_pairing(Segment(i, i), s)
    return out


def _estar_to_words(x: Mapping[Multisegment, Laurent]) -> Dict[Word, Laurent]:
    return {pbw_word(a): c.shift(_binom_exp(a)) for a, c in x.items()}


def q_derive(i: int, x: QVector) -> QVector:
    """Kashiwara's E_i' on E* coordinates."""
    if x.basis != "Estar":
        raise ValueError("q_derive works on E* coordinates")
    return QVector("Estar", _words_to_estar(q_derive_words(i, _estar_to_words(x.terms))))


_div_cache: Dict[Tuple[Multisegment, int, int], Vec] = {}


def divided_derivative(a: Multisegment, k: int, ell: int) -> Vec:
    """(1/[ell]!) E_k'^ell E*(a), with exact division."""
    ck = (a, k, ell)
    hit = _div_cache.get(ck)
    if hit is not None:
        return hit
    d = _estar_to_words({a: ONE})
    for _ in range(ell):
        d = q_derive_words(k, d)
    f = qfactorial(ell)
    res = {b: c.divexact(f) for b, c in _words_to_estar(d).items()}
    with _lock:
        _div_cache[ck] = res
    return res


def n_poly(b: Multisegment, a: Multisegment, k: int) -> Laurent:
    """n_{b,a}(q): coefficient of G*(b) in (1/[l]!) E_k'^l E*(a)."""
    diff = a.weight().try_minus(b.weight())
    if diff is None or (diff and (len(diff) != 1 or diff[0][0] != k)):
        raise ValueError("weight(a) - weight(b) is not a multiple of chi_k")
    ell = diff[0][1] if diff else 0
    x = divided_derivative(a, k, ell)
    pm = canonical_basis(b.weight())
    total = ZERO
    for d, c in x.items():
        p = pm.P(d, b)
        if p:
            total = total + c * p
    return total


def n_vector(a: Multisegment, k: int) -> Dict[Multisegment, Laurent]:
    """All n_{b,a}(q), over every drop l."""
    out: Dict[Multisegment, Laurent] = {}
    for ell in range(a.n_ending(k) + 1):
        x = divided_derivative(a, k, ell)
        if not x:
            continue
        g = to_dual_canonical(QVector("Estar", x))
        for b, c in g.terms.items():
            _acc(out, b, c)
    return out


def clear_caches() -> None:
    with _lock:
        for c in (_insert_cache, _bar_gen_cache, _bar_cache, _pm_cache, _iv_cache, _div_cache):
            c.clear()
