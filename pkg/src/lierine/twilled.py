"""Pairs of Lie-Rinehart algebras acting on one another.

(A, L', L'') with mutual action tables has a candidate bracket on
L' + L'' combining the component brackets with the action terms

    [x' + x'', y' + y''] = [x', y'] + [x'', y''] + x'.y'' - y''.x'
                          + x''.y' - y'.x''

and the pair is called twilled when that sum satisfies the full axiom
set.  Twilledness is equivalent to square and compatibility conditions
on a pair of formal differentials d' and d'' acting on bigraded forms,
and to the crossed bracket on Alt(L'', Lambda L') being compatible with
d''.  Every equivalence here is checked in both directions on concrete
instances, never assumed.

Conventions fixed by the degenerate cases: with L'' = 0 the operator d'
is the plain cochain differential of L' (so d' carries the global sign
(-1)^q past the q external slots), and d'' uses the Lie-derivative
action on inner form slots.  The total-complex dimension comparison
calibrates the pair globally.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .calgebra import AElem
from .exactla import RatMatrix, _frac, mat_rank
from .gerst import GeneratorOp, generator_to_connection
from .lrcore import (
    LElem,
    LieRinehart,
    LRModule,
    cohomology_dims,
    lr_bracket,
    lr_validate,
    trivial_coefficients,
)
from .reporting import Violation
from .signs import merge_sign, sort_with_sign


class AlmostTwilled:
    """Two structures over one base with mutual action tables.

    act_p_on_s[i][j] = e'_i . e''_j as a coefficient tuple over the
    L''-basis; act_s_on_p[i][j] = e''_i . e'_j over the L'-basis.  The
    tables are connection data; flatness of either action is a computed
    property, not an assumption.
    """

    __slots__ = ("alg", "lprime", "lsecond", "act_p_on_s", "act_s_on_p")

    def __init__(
        self,
        lprime: LieRinehart,
        lsecond: LieRinehart,
        act_p_on_s: Sequence,
        act_s_on_p: Sequence,
    ) -> None:
        if lprime.alg != lsecond.alg:
            raise ValueError("constituents must share the base algebra")
        self.alg = lprime.alg
        self.lprime = lprime
        self.lsecond = lsecond
        self.act_p_on_s = _check_table(lprime, lsecond.rank, act_p_on_s)
        self.act_s_on_p = _check_table(lsecond, lprime.rank, act_s_on_p)

    def module_on_second(self) -> LRModule:
        """L'' as a connection over L'."""
        return LRModule(self.lprime, self.lsecond.rank, self.act_p_on_s)

    def module_on_prime(self) -> LRModule:
        """L' as a connection over L''."""
        return LRModule(self.lsecond, self.lprime.rank, self.act_s_on_p)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlmostTwilled):
            return NotImplemented
        return (
            self.lprime == other.lprime
            and self.lsecond == other.lsecond
            and self.act_p_on_s == other.act_p_on_s
            and self.act_s_on_p == other.act_s_on_p
        )

    def __repr__(self) -> str:
        return f"AlmostTwilled(rank'={self.lprime.rank}, rank''={self.lsecond.rank})"


def _check_table(source: LieRinehart, target_rank: int, table: Sequence) -> Tuple:
    if len(table) != source.rank:
        raise ValueError("action table has wrong outer length")
    rows = []
    for i in range(source.rank):
        if len(table[i]) != target_rank:
            raise ValueError(f"action row {i} has wrong length")
        row = []
        for j in range(target_rank):
            vec = tuple(table[i][j])
            if len(vec) != target_rank:
                raise ValueError(f"action entry ({i},{j}) has wrong length")
            for c in vec:
                if not isinstance(c, AElem) or c.alg != source.alg:
                    raise ValueError("action coefficients must live in the base algebra")
            row.append(vec)
        rows.append(tuple(row))
    return tuple(rows)


def twilled_sum(t: AlmostTwilled) -> LieRinehart:
    """The combined structure on L' + L'' (primed block first)."""
    np, ns = t.lprime.rank, t.lsecond.rank
    n = np + ns
    alg = t.alg
    z = alg.zero()

    def pad(prime_part: Sequence[AElem], second_part: Sequence[AElem]) -> Tuple[AElem, ...]:
        return tuple(prime_part) + tuple(second_part)

    table = [[None] * n for _ in range(n)]
    for i in range(np):
        for j in range(np):
            table[i][j] = pad(t.lprime.bracket[i][j], (z,) * ns)
    for i in range(ns):
        for j in range(ns):
            table[np + i][np + j] = pad((z,) * np, t.lsecond.bracket[i][j])
    for i in range(np):
        for j in range(ns):
            prime_part = tuple(-c for c in t.act_s_on_p[j][i])
            second_part = t.act_p_on_s[i][j]
            table[i][np + j] = pad(prime_part, second_part)
            table[np + j][i] = tuple(-c for c in table[i][np + j])
    anchors = list(t.lprime.anchor) + list(t.lsecond.anchor)
    return LieRinehart(alg, n, table, anchors)


def is_twilled(t: AlmostTwilled) -> List[Violation]:
    """Axiom report for the combined bracket; empty iff twilled."""
    return lr_validate(twilled_sum(t))


class Bigraded:
    """Element of bidegree (q, p): values on pairs of sorted subsets,
    the first over the L''-basis, the second over the L'-basis.

    The same storage carries both the form interpretation (inner values
    are alternating-form values on L') and the multivector one (inner
    values are exterior coefficients); the operators select the meaning.
    """

    __slots__ = ("t", "qdeg", "pdeg", "values")

    def __init__(self, t: AlmostTwilled, qdeg: int, pdeg: int, values: Dict) -> None:
        if qdeg < 0 or pdeg < 0:
            raise ValueError("bidegree must be nonnegative")
        norm: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], AElem] = {}
        for (ss, sp), c in values.items():
            kss, ksp = tuple(ss), tuple(sp)
            if len(kss) != qdeg or list(kss) != sorted(set(kss)):
                raise ValueError(f"bad outer key {kss}")
            if len(ksp) != pdeg or list(ksp) != sorted(set(ksp)):
                raise ValueError(f"bad inner key {ksp}")
            if any(x < 0 or x >= t.lsecond.rank for x in kss):
                raise ValueError("outer index out of range")
            if any(x < 0 or x >= t.lprime.rank for x in ksp):
                raise ValueError("inner index out of range")
            if not isinstance(c, AElem) or c.alg != t.alg:
                raise ValueError("coefficients must live in the base algebra")
            if not c.is_zero():
                norm[(kss, ksp)] = c
        self.t = t
        self.qdeg = qdeg
        self.pdeg = pdeg
        self.values = norm

    @classmethod
    def zero(cls, t: AlmostTwilled, qdeg: int, pdeg: int) -> "Bigraded":
        return cls(t, qdeg, pdeg, {})

    @classmethod
    def term(cls, t: AlmostTwilled, a: AElem, ss, sp) -> "Bigraded":
        return cls(t, len(tuple(ss)), len(tuple(sp)), {(tuple(ss), tuple(sp)): a})

    def coeff(self, ss, sp) -> AElem:
        return self.values.get((tuple(ss), tuple(sp)), self.t.alg.zero())

    def add(self, other: "Bigraded") -> "Bigraded":
        if self.t != other.t:
            raise ValueError("parent mismatch")
        if (self.qdeg, self.pdeg) != (other.qdeg, other.pdeg):
            if self.is_zero():
                return other
            if other.is_zero():
                return self
            raise ValueError("bidegree mismatch")
        keys = set(self.values) | set(other.values)
        vals = {k: self.values.get(k, self.t.alg.zero()) + other.values.get(k, self.t.alg.zero()) for k in keys}
        return Bigraded(self.t, self.qdeg, self.pdeg, vals)

    def sub(self, other: "Bigraded") -> "Bigraded":
        return self.add(other.neg())

    def neg(self) -> "Bigraded":
        return Bigraded(self.t, self.qdeg, self.pdeg, {k: -c for k, c in self.values.items()})

    def scale(self, c) -> "Bigraded":
        if isinstance(c, AElem):
            return Bigraded(self.t, self.qdeg, self.pdeg, {k: c * v for k, v in self.values.items()})
        cc = _frac(c)
        return Bigraded(self.t, self.qdeg, self.pdeg, {k: v * cc for k, v in self.values.items()})

    def is_zero(self) -> bool:
        return not self.values

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Bigraded):
            return NotImplemented
        return (
            self.t == other.t
            and self.qdeg == other.qdeg
            and self.pdeg == other.pdeg
            and self.values == other.values
        )

    def __repr__(self) -> str:
        parts = [f"{k}:{c!r}" for k, c in sorted(self.values.items())]
        return f"Bigraded(q={self.qdeg}, p={self.pdeg}, " + ", ".join(parts) + ")"


def bigraded_labels(t: AlmostTwilled):
    """Canonical rational basis labels (algebra index, outer subset,
    inner subset), all bidegrees."""
    for q in range(t.lsecond.rank + 1):
        for ss in combinations(range(t.lsecond.rank), q):
            for p in range(t.lprime.rank + 1):
                for sp in combinations(range(t.lprime.rank), p):
                    for ta in range(t.alg.dim):
                        yield ta, ss, sp


def _label_elem(t: AlmostTwilled, ta: int, ss, sp) -> Bigraded:
    return Bigraded.term(t, t.alg.basis(ta), ss, sp)


def bigraded_product(u: Bigraded, v: Bigraded) -> Bigraded:
    """(alpha (x) x)(beta (x) y) = (-1)^{p1 q2} (alpha ^ beta) (x) (x ^ y);
    graded commutative for the total degree."""
    if u.t != v.t:
        raise ValueError("parent mismatch")
    out: Dict = {}
    cross = 1 if (u.pdeg * v.qdeg) % 2 == 0 else -1
    for (ss1, sp1), a in u.values.items():
        for (ss2, sp2), b in v.values.items():
            mo = merge_sign(ss1, ss2)
            if mo is None:
                continue
            mi = merge_sign(sp1, sp2)
            if mi is None:
                continue
            kss, so = mo
            ksp, si = mi
            c = a * b
            s = cross * so * si
            key = (kss, ksp)
            cur = out.get(key)
            out[key] = (c if s == 1 else -c) if cur is None else cur + (c if s == 1 else -c)
    return Bigraded(u.t, u.qdeg + v.qdeg, u.pdeg + v.pdeg, out)


def _eval_at(values: Dict, ss_indices, sp_indices) -> Tuple[Optional[Tuple], int]:
    """Sort both index tuples, returning the dict key and sign, or None
    on a repeated index."""
    so = sort_with_sign(ss_indices)
    if so is None:
        return None, 0
    si = sort_with_sign(sp_indices)
    if si is None:
        return None, 0
    return (so[0], si[0]), so[1] * si[1]


def dsecond_form(t: AlmostTwilled, w: Bigraded) -> Bigraded:
    """Raise the outer degree by one, treating inner values as a form on
    L' carried along by the Lie-derivative action of L''."""
    q, p = w.qdeg, w.pdeg
    ns, np = t.lsecond.rank, t.lprime.rank
    alg = t.alg
    out: Dict = {}
    for new_ss in combinations(range(ns), q + 1):
        for sp in combinations(range(np), p):
            total = alg.zero()
            for i, xi in enumerate(new_ss):
                rest = new_ss[:i] + new_ss[i + 1 :]
                sgn = 1 if i % 2 == 0 else -1
                base = w.values.get((rest, sp))
                if base is not None:
                    contrib = t.lsecond.anchor[xi].apply(base)
                    total = total + contrib if sgn == 1 else total - contrib
                for pos in range(p):
                    for m, cm in enumerate(t.act_s_on_p[xi][sp[pos]]):
                        if cm.is_zero():
                            continue
                        key, s2 = _eval_at(w.values, rest, sp[:pos] + (m,) + sp[pos + 1 :])
                        if key is None:
                            continue
                        val = w.values.get(key)
                        if val is None:
                            continue
                        contrib = cm * val
                        if sgn * s2 == 1:
                            total = total - contrib
                        else:
                            total = total + contrib
            for i in range(q + 1):
                for j in range(i + 1, q + 1):
                    rest = tuple(x for z, x in enumerate(new_ss) if z != i and z != j)
                    sgn = 1 if (i + j) % 2 == 0 else -1
                    for k, ck in enumerate(t.lsecond.bracket[new_ss[i]][new_ss[j]]):
                        if ck.is_zero():
                            continue
                        key, s2 = _eval_at(w.values, (k,) + rest, sp)
                        if key is None:
                            continue
                        val = w.values.get(key)
                        if val is None:
                            continue
                        contrib = ck * val
                        total = total + contrib if sgn * s2 == 1 else total - contrib
            if not total.is_zero():
                out[(new_ss, sp)] = total
    return Bigraded(t, q + 1, p, out)


def dprime_form(t: AlmostTwilled, w: Bigraded, line: Optional[Sequence[AElem]] = None) -> Bigraded:
    """Raise the inner degree by one with the global sign (-1)^q.

    The action of a basis vector of L' reaches three places: the value
    (through the anchor, twisted by the optional line connection), the
    outer L''-slots (through the first action table), and the bracket
    terms of L'.  With no outer slots and no line this is exactly the
    plain differential of L'.
    """
    q, p = w.qdeg, w.pdeg
    ns, np = t.lsecond.rank, t.lprime.rank
    alg = t.alg
    gsign = 1 if q % 2 == 0 else -1
    out: Dict = {}
    for ss in combinations(range(ns), q):
        for new_sp in combinations(range(np), p + 1):
            total = alg.zero()
            for i, yi in enumerate(new_sp):
                rest = new_sp[:i] + new_sp[i + 1 :]
                sgn = 1 if i % 2 == 0 else -1
                base = w.values.get((ss, rest))
                if base is not None:
                    contrib = t.lprime.anchor[yi].apply(base)
                    if line is not None:
                        contrib = contrib + line[yi] * base
                    total = total + contrib if sgn == 1 else total - contrib
                for pos in range(q):
                    for m, cm in enumerate(t.act_p_on_s[yi][ss[pos]]):
                        if cm.is_zero():
                            continue
                        key, s2 = _eval_at(w.values, ss[:pos] + (m,) + ss[pos + 1 :], rest)
                        if key is None:
                            continue
                        val = w.values.get(key)
                        if val is None:
                            continue
                        contrib = cm * val
                        if sgn * s2 == 1:
                            total = total - contrib
                        else:
                            total = total + contrib
            for i in range(p + 1):
                for j in range(i + 1, p + 1):
                    rest = tuple(x for z, x in enumerate(new_sp) if z != i and z != j)
                    sgn = 1 if (i + j) % 2 == 0 else -1
                    for k, ck in enumerate(t.lprime.bracket[new_sp[i]][new_sp[j]]):
                        if ck.is_zero():
                            continue
                        key, s2 = _eval_at(w.values, ss, (k,) + rest)
                        if key is None:
                            continue
                        val = w.values.get(key)
                        if val is None:
                            continue
                        contrib = ck * val
                        total = total + contrib if sgn * s2 == 1 else total - contrib
            if not total.is_zero():
                out[(ss, new_sp)] = total if gsign == 1 else -total
    return Bigraded(t, q, p + 1, out)


def build_dprime_dsecond(t: AlmostTwilled):
    """The two formal differentials on bigraded forms, as callables."""

    def dp(w: Bigraded) -> Bigraded:
        return dprime_form(t, w)

    def ds(w: Bigraded) -> Bigraded:
        return dsecond_form(t, w)

    return dp, ds


def dsecond_multi(t: AlmostTwilled, w: Bigraded) -> Bigraded:
    """Outer differential on the multivector carrier: inner subsets are
    exterior factors moved covariantly by the second action table."""
    q, p = w.qdeg, w.pdeg
    ns = t.lsecond.rank
    alg = t.alg
    out: Dict = {}

    def add(key, c: AElem) -> None:
        if c.is_zero():
            return
        cur = out.get(key)
        out[key] = c if cur is None else cur + c

    for new_ss in combinations(range(ns), q + 1):
        for i, xi in enumerate(new_ss):
            rest = new_ss[:i] + new_ss[i + 1 :]
            sgn = 1 if i % 2 == 0 else -1
            for (ss, sp), a in w.values.items():
                if ss != rest:
                    continue
                contrib = t.lsecond.anchor[xi].apply(a)
                add((new_ss, sp), contrib if sgn == 1 else -contrib)
                for pos in range(p):
                    for m, cm in enumerate(t.act_s_on_p[xi][sp[pos]]):
                        if cm.is_zero():
                            continue
                        sorted_sp = sort_with_sign(sp[:pos] + (m,) + sp[pos + 1 :])
                        if sorted_sp is None:
                            continue
                        ksp, s2 = sorted_sp
                        c = a * cm
                        add((new_ss, ksp), c if sgn * s2 == 1 else -c)
        for i in range(q + 1):
            for j in range(i + 1, q + 1):
                rest = tuple(x for z, x in enumerate(new_ss) if z != i and z != j)
                sgn = 1 if (i + j) % 2 == 0 else -1
                for k, ck in enumerate(t.lsecond.bracket[new_ss[i]][new_ss[j]]):
                    if ck.is_zero():
                        continue
                    outer = sort_with_sign((k,) + rest)
                    if outer is None:
                        continue
                    kss, s2 = outer
                    for (ss, sp), a in w.values.items():
                        if ss != kss:
                            continue
                        c = ck * a
                        add((new_ss, sp), c if sgn * s2 == 1 else -c)
    return Bigraded(t, q + 1, p, out)


def _accum(out: Dict, terms: Dict, sign: int) -> None:
    for k, c in terms.items():
        cur = out.get(k)
        add = c if sign == 1 else -c
        out[k] = add if cur is None else cur + add


def _product_into(t: AlmostTwilled, a: AElem, ss, sp, terms: Dict, sign: int, out: Dict) -> None:
    """out += sign * (a e''*_ss (x) e'_sp) . terms, with the bigraded
    cross sign folded in per term."""
    p1 = len(sp)
    for (ss2, sp2), c in terms.items():
        cross = 1 if (p1 * len(ss2)) % 2 == 0 else -1
        mo = merge_sign(ss, ss2)
        if mo is None:
            continue
        mi = merge_sign(sp, sp2)
        if mi is None:
            continue
        kss, so = mo
        ksp, si = mi
        val = a * c
        s = sign * cross * so * si
        key = (kss, ksp)
        cur = out.get(key)
        add = val if s == 1 else -val
        out[key] = add if cur is None else cur + add


def _lie_term(t: AlmostTwilled, a: AElem, i: int, b: AElem, ss2, out: Dict, sign: int) -> None:
    """out += sign * a * (e'_i . (b e''*_{ss2})) (x) 1, the Lie derivative
    of an outer form along a basis vector of L'."""
    q2 = len(ss2)
    ns = t.lsecond.rank
    base = a * t.lprime.anchor[i].apply(b)
    if not base.is_zero():
        key = (tuple(ss2), ())
        cur = out.get(key)
        add = base if sign == 1 else -base
        out[key] = add if cur is None else cur + add
    for T in combinations(range(ns), q2):
        total = t.alg.zero()
        for pos in range(q2):
            for m, cm in enumerate(t.act_p_on_s[i][T[pos]]):
                if cm.is_zero():
                    continue
                sorted_T = sort_with_sign(T[:pos] + (m,) + T[pos + 1 :])
                if sorted_T is None or sorted_T[0] != tuple(ss2):
                    continue
                contrib = cm * b
                total = total - contrib if sorted_T[1] == 1 else total + contrib
        if not total.is_zero():
            val = a * total
            key = (T, ())
            cur = out.get(key)
            add = val if sign == 1 else -val
            out[key] = add if cur is None else cur + add


def _cb_term(t: AlmostTwilled, a: AElem, ss1, sp1, b: AElem, ss2, sp2, out: Dict) -> None:
    """out += [a e''*_{ss1} (x) e'_{sp1}, b e''*_{ss2} (x) e'_{sp2}],
    by splitting factors through the biderivation rules with total
    degrees until the anchor, Lie-derivative, and degree-one bracket
    base cases are reached."""
    p1, q1 = len(sp1), len(ss1)
    p2, q2 = len(sp2), len(ss2)
    if p1 == 0 and p2 == 0:
        return
    if p1 == 0:
        tmp: Dict = {}
        _cb_term(t, b, ss2, sp2, a, ss1, sp1, tmp)
        sign = -1 if ((q1 - 1) * (q2 + p2 - 1)) % 2 == 0 else 1
        _accum(out, tmp, sign)
        return
    if q1 > 0:
        tmp1: Dict = {}
        _cb_term(t, t.alg.one(), (), sp1, b, ss2, sp2, tmp1)
        _product_into(t, a, ss1, (), tmp1, 1, out)
        tmp2: Dict = {}
        _cb_term(t, a, ss1, (), b, ss2, sp2, tmp2)
        sign = 1 if (q1 * p1) % 2 == 0 else -1
        _product_into(t, t.alg.one(), (), sp1, tmp2, sign, out)
        return
    if p1 >= 2:
        head, rest = (sp1[0],), sp1[1:]
        tmp1 = {}
        _cb_term(t, t.alg.one(), (), rest, b, ss2, sp2, tmp1)
        _product_into(t, a, (), head, tmp1, 1, out)
        tmp2 = {}
        _cb_term(t, a, (), head, b, ss2, sp2, tmp2)
        sign = 1 if (p1 - 1) % 2 == 0 else -1
        _product_into(t, t.alg.one(), (), rest, tmp2, sign, out)
        return
    i = sp1[0]
    if p2 == 0:
        _lie_term(t, a, i, b, ss2, out, 1)
        return
    if q2 > 0:
        tmp1 = {}
        _cb_term(t, a, (), (i,), b, ss2, (), tmp1)
        _product_into_right(t, tmp1, t.alg.one(), (), sp2, 1, out)
        tmp2 = {}
        _cb_term(t, a, (), (i,), t.alg.one(), (), sp2, tmp2)
        _product_into(t, b, ss2, (), tmp2, 1, out)
        return
    if p2 >= 2:
        head, rest = (sp2[0],), sp2[1:]
        tmp1 = {}
        _cb_term(t, a, (), (i,), b, (), head, tmp1)
        _product_into_right(t, tmp1, t.alg.one(), (), rest, 1, out)
        tmp2 = {}
        _cb_term(t, a, (), (i,), t.alg.one(), (), rest, tmp2)
        _product_into(t, b, (), head, tmp2, 1, out)
        return
    j = sp2[0]
    lp = t.lprime
    x = [lp.alg.zero()] * lp.rank
    x[i] = a
    y = [lp.alg.zero()] * lp.rank
    y[j] = b
    w = lr_bracket(lp, LElem(lp, x), LElem(lp, y))
    for k, c in enumerate(w.coeffs):
        if c.is_zero():
            continue
        key = ((), (k,))
        cur = out.get(key)
        out[key] = c if cur is None else cur + c


def _product_into_right(t: AlmostTwilled, terms: Dict, b: AElem, ss, sp, sign: int, out: Dict) -> None:
    """out += sign * terms . (b e''*_ss (x) e'_sp)."""
    q2 = len(ss)
    for (ss1, sp1), c in terms.items():
        cross = 1 if (len(sp1) * q2) % 2 == 0 else -1
        mo = merge_sign(ss1, ss)
        if mo is None:
            continue
        mi = merge_sign(sp1, sp)
        if mi is None:
            continue
        kss, so = mo
        ksp, si = mi
        val = c * b
        s = sign * cross * so * si
        key = (kss, ksp)
        cur = out.get(key)
        add = val if s == 1 else -val
        out[key] = add if cur is None else cur + add


def crossed_bracket(t: AlmostTwilled, u: Bigraded, v: Bigraded) -> Bigraded:
    """Bracket on the multivector carrier, rational-bilinear over the
    canonical basis terms; every term bracket expands in the fixed basis
    before summation, so the result is representation independent."""
    if u.t != t or v.t != t:
        raise ValueError("parent mismatch")
    out: Dict = {}
    for (ss1, sp1), a in u.values.items():
        for (ss2, sp2), b in v.values.items():
            _cb_term(t, a, ss1, sp1, b, ss2, sp2, out)
    return Bigraded(t, u.qdeg + v.qdeg, max(u.pdeg + v.pdeg - 1, 0), out)


def bicomplex_square_check(t: AlmostTwilled) -> Dict:
    """Squares and anticommutation of d', d'' on every basis form,
    against twilledness of the sum; the two sides of the equivalence are
    computed independently."""
    dp, ds = build_dprime_dsecond(t)
    flags = {"dprime_square": True, "dsecond_square": True, "anticommute": True}
    witnesses: Dict[str, Tuple] = {}
    for ta, ss, sp in bigraded_labels(t):
        w = _label_elem(t, ta, ss, sp)
        if flags["dprime_square"] and not dp(dp(w)).is_zero():
            flags["dprime_square"] = False
            witnesses["dprime_square"] = (ta, ss, sp)
        if flags["dsecond_square"] and not ds(ds(w)).is_zero():
            flags["dsecond_square"] = False
            witnesses["dsecond_square"] = (ta, ss, sp)
        if flags["anticommute"] and not dp(ds(w)).add(ds(dp(w))).is_zero():
            flags["anticommute"] = False
            witnesses["anticommute"] = (ta, ss, sp)
    twilled = is_twilled(t)
    report = {
        "dprime_square": flags["dprime_square"],
        "dsecond_square": flags["dsecond_square"],
        "anticommute": flags["anticommute"],
        "twilled": not twilled,
        "witnesses": witnesses,
    }
    lhs = flags["dprime_square"] and flags["dsecond_square"] and flags["anticommute"]
    report["equivalent"] = lhs == report["twilled"]
    if twilled:
        report["twilled_witness"] = (twilled[0].axiom, twilled[0].witness)
    return report


def dg_lie_check(t: AlmostTwilled) -> Dict:
    """On the inner-degree-1 carrier: d'' squares to zero and derives the
    crossed bracket; equivalence against twilledness."""
    labels = [
        (ta, ss)
        for q in range(t.lsecond.rank + 1)
        for ss in combinations(range(t.lsecond.rank), q)
        for ta in range(t.alg.dim)
    ]
    inner = range(t.lprime.rank)
    square = True
    derivation = True
    witnesses: Dict[str, Tuple] = {}
    for ta, ss in labels:
        for i in inner:
            w = _label_elem(t, ta, ss, (i,))
            if square and not dsecond_multi(t, dsecond_multi(t, w)).is_zero():
                square = False
                witnesses["square"] = (ta, ss, i)
    for ta1, ss1 in labels:
        if not derivation:
            break
        for i in inner:
            if not derivation:
                break
            u = _label_elem(t, ta1, ss1, (i,))
            du = dsecond_multi(t, u)
            su = 1 if len(ss1) % 2 == 0 else -1
            for ta2, ss2 in labels:
                for j in inner:
                    v = _label_elem(t, ta2, ss2, (j,))
                    lhs = dsecond_multi(t, crossed_bracket(t, u, v))
                    rhs = crossed_bracket(t, du, v).add(
                        crossed_bracket(t, u, dsecond_multi(t, v)).scale(su)
                    )
                    if not lhs.sub(rhs).is_zero():
                        derivation = False
                        witnesses["derivation"] = (ta1, ss1, i, ta2, ss2, j)
                        break
                if not derivation:
                    break
    twilled = is_twilled(t)
    dg = square and derivation
    return {
        "square": square,
        "derivation": derivation,
        "twilled": not twilled,
        "equivalent": dg == (not twilled),
        "witnesses": witnesses,
    }


def dg_gerstenhaber_check(t: AlmostTwilled) -> Dict:
    """d'' is a square-zero odd derivation of the crossed bracket on the
    whole multivector carrier; equivalence against twilledness."""
    labels = list(bigraded_labels(t))
    square = True
    derivation = True
    witnesses: Dict[str, Tuple] = {}
    for ta, ss, sp in labels:
        w = _label_elem(t, ta, ss, sp)
        if not dsecond_multi(t, dsecond_multi(t, w)).is_zero():
            square = False
            witnesses["square"] = (ta, ss, sp)
            break
    for ta1, ss1, sp1 in labels:
        if not derivation:
            break
        u = _label_elem(t, ta1, ss1, sp1)
        du = dsecond_multi(t, u)
        su = 1 if (len(ss1) + len(sp1)) % 2 == 0 else -1
        for ta2, ss2, sp2 in labels:
            v = _label_elem(t, ta2, ss2, sp2)
            lhs = dsecond_multi(t, crossed_bracket(t, u, v))
            rhs = crossed_bracket(t, du, v).sub(
                crossed_bracket(t, u, dsecond_multi(t, v)).scale(su)
            )
            if not lhs.sub(rhs).is_zero():
                derivation = False
                witnesses["derivation"] = (ta1, ss1, sp1, ta2, ss2, sp2)
                break
    twilled = is_twilled(t)
    dg = square and derivation
    return {
        "square": square,
        "derivation": derivation,
        "twilled": not twilled,
        "equivalent": dg == (not twilled),
        "witnesses": witnesses,
    }


def total_complex_cohomology_check(t: AlmostTwilled, max_total_degree: int) -> Dict:
    """Dimensions of the total-complex cohomology against the combined
    structure's own cohomology; requires a twilled instance."""
    bad = is_twilled(t)
    if bad:
        raise ValueError(f"not twilled: {bad[0]}")
    dp, ds = build_dprime_dsecond(t)
    ns, np = t.lsecond.rank, t.lprime.rank
    top = min(max_total_degree, ns + np)

    def labels_at(k: int):
        for q in range(ns + 1):
            p = k - q
            if p < 0 or p > np:
                continue
            for ss in combinations(range(ns), q):
                for sp in combinations(range(np), p):
                    for ta in range(t.alg.dim):
                        yield ta, ss, sp

    def diff_matrix(k: int) -> RatMatrix:
        cols = list(labels_at(k))
        rows = list(labels_at(k + 1))
        index = {lab: pos for pos, lab in enumerate(rows)}
        entries = [Fraction(0)] * (len(rows) * len(cols))
        for cpos, (ta, ss, sp) in enumerate(cols):
            w = _label_elem(t, ta, ss, sp)
            image = dp(w).values.items()
            image2 = ds(w).values.items()
            for (kss, ksp), val in list(image) + list(image2):
                for tt in range(t.alg.dim):
                    c = val.coeffs[tt]
                    if c != 0:
                        rpos = index[(tt, kss, ksp)]
                        entries[rpos * len(cols) + cpos] += c
        return RatMatrix(len(rows), len(cols), entries)

    dims_total = []
    ranks = [mat_rank(diff_matrix(k)) for k in range(top + 1)]
    for k in range(top + 1):
        size = len(list(labels_at(k)))
        below = ranks[k - 1] if k > 0 else 0
        dims_total.append(size - ranks[k] - below)
    s = twilled_sum(t)
    dims_sum = cohomology_dims(s, trivial_coefficients(s), top)
    return {
        "total_dims": dims_total,
        "sum_dims": dims_sum,
        "equal": dims_total == dims_sum,
    }


class BigradedOp:
    """Operator tabulated on the canonical basis of the multivector
    carrier, extended rational-linearly."""

    __slots__ = ("t", "table")

    def __init__(self, t: AlmostTwilled, table: Dict) -> None:
        self.t = t
        norm: Dict[Tuple[int, Tuple[int, ...], Tuple[int, ...]], Bigraded] = {}
        for (ta, ss, sp), val in table.items():
            kss, ksp = tuple(ss), tuple(sp)
            if val.t != t:
                raise ValueError("table value parent mismatch")
            norm[(ta, kss, ksp)] = val
        self.table = norm

    def apply(self, u: Bigraded) -> Bigraded:
        out: Optional[Bigraded] = None
        for (ss, sp), a in u.values.items():
            for ta, c in enumerate(a.coeffs):
                if c == 0:
                    continue
                entry = self.table.get((ta, ss, sp))
                if entry is None or entry.is_zero():
                    continue
                piece = entry.scale(c)
                out = piece if out is None else out.add(piece)
        if out is None:
            return Bigraded.zero(self.t, u.qdeg, max(u.pdeg - 1, 0))
        return out


def bigraded_generator_extend(t: AlmostTwilled, g: GeneratorOp) -> BigradedOp:
    """Extend a generator of the inner exterior algebra over the outer
    form slots.

    The inner contraction transports basis elements to line-valued
    forms, the d'-shaped operator with the connection-twisted value
    action is applied, and the result is contracted back with the same
    per-degree sign family as in the ungraded case.  The plain
    tensor-style extension (sign times the inner operator) is not a
    generator once the mutual actions are nonzero; the conjugated form
    is, and the construction fails loudly if the identity breaks.
    """
    lp = t.lprime
    if g.lr != lp:
        raise ValueError("generator must live on the inner factor")
    conn = generator_to_connection(lp, g)
    omega = conn.omega
    np = lp.rank
    full = set(range(np))
    table: Dict = {}
    for ta, ss, sp in bigraded_labels(t):
        p = len(sp)
        if p == 0:
            table[(ta, ss, sp)] = Bigraded.zero(t, len(ss), 0)
            continue
        comp = tuple(sorted(full - set(sp)))
        ms = merge_sign(sp, comp)
        assert ms is not None
        phi_val = t.alg.basis(ta) if ms[1] == 1 else -t.alg.basis(ta)
        phi = Bigraded(t, len(ss), len(comp), {(ss, comp): phi_val})
        image = dprime_form(t, phi, line=omega)
        out: Dict = {}
        sgn_p = 1 if p % 2 == 0 else -1
        for (kss, ksp), val in image.values.items():
            back = tuple(sorted(full - set(ksp)))
            mb = merge_sign(back, ksp)
            if mb is None:
                continue
            s = sgn_p * mb[1]
            out[(kss, back)] = val if s == 1 else -val
        table[(ta, ss, sp)] = Bigraded(t, len(ss), p - 1, out)
    op = BigradedOp(t, table)
    bad = bigraded_generator_validate(t, op)
    if bad:
        raise RuntimeError(f"extension does not generate the crossed bracket: {bad[0]}")
    return op


def bigraded_generator_validate(t: AlmostTwilled, op: BigradedOp) -> List[Violation]:
    """Generator identity with total degrees against the crossed bracket
    and the bigraded product, on all basis pairs."""
    labels = list(bigraded_labels(t))
    for ta1, ss1, sp1 in labels:
        u = _label_elem(t, ta1, ss1, sp1)
        su = 1 if (len(ss1) + len(sp1)) % 2 == 0 else -1
        for ta2, ss2, sp2 in labels:
            v = _label_elem(t, ta2, ss2, sp2)
            lhs = crossed_bracket(t, u, v)
            inner = op.apply(bigraded_product(u, v)).sub(
                bigraded_product(op.apply(u), v)
            ).sub(bigraded_product(u, op.apply(v)).scale(su))
            if not lhs.sub(inner.scale(su)).is_zero():
                return [
                    Violation(
                        "bigraded-generator-identity",
                        (ta1, ss1, sp1, ta2, ss2, sp2),
                        "",
                    )
                ]
    return []


def bv_commutator_check(t: AlmostTwilled, op: BigradedOp) -> Dict:
    """Graded commutator of the outer differential with a generator on
    every basis element: both operators are odd, so the commutator is
    d''G + Gd''.  Vanishing makes the pair a weak differential
    structure; with an exact generator it upgrades to the full one."""
    commutes = True
    exact = True
    witnesses: Dict[str, Tuple] = {}
    for ta, ss, sp in bigraded_labels(t):
        u = _label_elem(t, ta, ss, sp)
        anti = dsecond_multi(t, op.apply(u)).add(op.apply(dsecond_multi(t, u)))
        if commutes and not anti.is_zero():
            commutes = False
            witnesses["commutator"] = (ta, ss, sp)
        if exact and not op.apply(op.apply(u)).is_zero():
            exact = False
            witnesses["square"] = (ta, ss, sp)
    return {
        "commutes": commutes,
        "exact": exact,
        "full_bv": commutes and exact,
        "witnesses": witnesses,
    }
