"""Lie-Rinehart algebras over a commutative base, with exact cohomology.

The pair (A, L) consists of a commutative algebra A and a free A-module L
of finite rank carrying an A-valued bracket table and an anchor that sends
each basis vector to a derivation of A.  Brackets and actions of general
elements are expanded through the two defining rules

    (a x)(b)   = a * x(b)
    [x, a y]   = x(a) y + a [x, y]

so a structure is fully determined by its basis tables.  Validation,
module flatness, the alternating-form differential, and cohomology
dimensions all reduce to exact rational linear algebra on basis data.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .calgebra import AElem, CommAlg, Derivation, der_bracket, derivation_validate
from .exactla import RatMatrix, _frac, mat_rank
from .reporting import Violation
from .signs import sort_with_sign


class LieRinehart:
    """Structure-constant presentation of a Lie-Rinehart algebra.

    bracket[i][j] is the coefficient tuple (n AElems) of [e_i, e_j]; the
    table is stored literally, so antisymmetry is a checked axiom, not a
    storage convention.  anchor[i] is the derivation attached to e_i.
    """

    __slots__ = ("alg", "rank", "bracket", "anchor", "_validation")

    def __init__(self, alg: CommAlg, rank: int, bracket: Sequence, anchor: Sequence) -> None:
        if rank < 0:
            raise ValueError("rank must be nonnegative")
        if len(bracket) != rank:
            raise ValueError("bracket table has wrong outer length")
        rows = []
        for i in range(rank):
            if len(bracket[i]) != rank:
                raise ValueError(f"bracket row {i} has wrong length")
            row = []
            for j in range(rank):
                entry = bracket[i][j]
                if len(entry) != rank:
                    raise ValueError(f"bracket entry ({i},{j}) has wrong length")
                for c in entry:
                    if not isinstance(c, AElem) or c.alg != alg:
                        raise ValueError("bracket coefficients must live in the base algebra")
                row.append(tuple(entry))
            rows.append(tuple(row))
        if len(anchor) != rank:
            raise ValueError("anchor table has wrong length")
        for dv in anchor:
            if not isinstance(dv, Derivation) or dv.alg != alg:
                raise ValueError("anchor entries must be derivations of the base algebra")
        self.alg = alg
        self.rank = rank
        self.bracket = tuple(rows)
        self.anchor = tuple(anchor)
        self._validation: Optional[List[Violation]] = None

    def lelem(self, coeffs: Sequence[AElem]) -> "LElem":
        return LElem(self, coeffs)

    def zero_l(self) -> "LElem":
        return LElem(self, (self.alg.zero(),) * self.rank)

    def basis_l(self, i: int) -> "LElem":
        c = [self.alg.zero()] * self.rank
        c[i] = self.alg.one()
        return LElem(self, c)

    def bracket_elem(self, i: int, j: int) -> "LElem":
        return LElem(self, self.bracket[i][j])

    def anchor_basis(self, i: int, a: AElem) -> AElem:
        return self.anchor[i].apply(a)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieRinehart):
            return NotImplemented
        return (
            self.alg == other.alg
            and self.rank == other.rank
            and self.bracket == other.bracket
            and self.anchor == other.anchor
        )

    def __hash__(self) -> int:
        return hash((self.alg, self.rank, self.bracket, self.anchor))

    def __repr__(self) -> str:
        return f"LieRinehart(rank={self.rank}, base_dim={self.alg.dim})"


class LElem:
    """Element of L: a tuple of algebra coefficients over the L-basis."""

    __slots__ = ("lr", "coeffs")

    def __init__(self, lr: LieRinehart, coeffs: Sequence[AElem]) -> None:
        cc = tuple(coeffs)
        if len(cc) != lr.rank:
            raise ValueError("coefficient tuple has wrong length")
        for c in cc:
            if c.alg != lr.alg:
                raise ValueError("parent algebra mismatch")
        self.lr = lr
        self.coeffs = cc

    def __add__(self, other: "LElem") -> "LElem":
        self._same(other)
        return LElem(self.lr, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "LElem") -> "LElem":
        self._same(other)
        return LElem(self.lr, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "LElem":
        return LElem(self.lr, tuple(-a for a in self.coeffs))

    def scale(self, a: AElem) -> "LElem":
        return LElem(self.lr, tuple(a * c for c in self.coeffs))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def _same(self, other: "LElem") -> None:
        if self.lr != other.lr:
            raise ValueError("parent structure mismatch")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LElem):
            return NotImplemented
        return self.lr == other.lr and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return "LElem(" + ", ".join(repr(c) for c in self.coeffs) + ")"


def lr_anchor_apply(lr: LieRinehart, u: LElem, a: AElem) -> AElem:
    """rho(u)(a) for a general element u = sum u_k e_k."""
    if u.lr != lr or a.alg != lr.alg:
        raise ValueError("parent mismatch")
    out = lr.alg.zero()
    for k, uk in enumerate(u.coeffs):
        if not uk.is_zero():
            out = out + uk * lr.anchor[k].apply(a)
    return out


def anchor_matrix(lr: LieRinehart, u: LElem) -> RatMatrix:
    """Matrix of rho(u) on algebra coefficient vectors."""
    m = RatMatrix.zero(lr.alg.dim, lr.alg.dim)
    for k, uk in enumerate(u.coeffs):
        if not uk.is_zero():
            m = m.add(lr.alg.mult_matrix(uk).matmul(lr.anchor[k].matrix))
    return m


def lr_bracket(lr: LieRinehart, u: LElem, v: LElem) -> LElem:
    """Bracket of general elements via the full Leibniz expansion:

    [sum a_i e_i, sum b_j e_j]
        = sum a_i b_j [e_i, e_j] + a_i rho(e_i)(b_j) e_j - b_j rho(e_j)(a_i) e_i
    """
    if u.lr != lr or v.lr != lr:
        raise ValueError("parent mismatch")
    out = [lr.alg.zero() for _ in range(lr.rank)]
    for i, ai in enumerate(u.coeffs):
        if ai.is_zero():
            continue
        for j, bj in enumerate(v.coeffs):
            if bj.is_zero():
                continue
            ab = ai * bj
            for k, ck in enumerate(lr.bracket[i][j]):
                if not ck.is_zero():
                    out[k] = out[k] + ab * ck
            out[j] = out[j] + ai * lr.anchor[i].apply(bj)
            out[i] = out[i] - bj * lr.anchor[j].apply(ai)
    return LElem(lr, out)


def lr_validate(lr: LieRinehart) -> List[Violation]:
    """Axiom check on basis data: antisymmetry, Jacobi after full Leibniz
    expansion, anchor entries are derivations, anchor is a bracket morphism.

    One witness per axiom is reported (the first in lexicographic order);
    A-multilinearity of the axioms makes basis tuples sufficient.
    """
    out: List[Violation] = []
    n = lr.rank

    for i in range(n):
        if any(not c.is_zero() for c in lr.bracket[i][i]):
            out.append(Violation("antisymmetry", (i, i), "[e_i,e_i] != 0"))
            break
    else:
        done = False
        for i in range(n):
            for j in range(i + 1, n):
                if any(
                    not (a + b).is_zero()
                    for a, b in zip(lr.bracket[i][j], lr.bracket[j][i])
                ):
                    out.append(Violation("antisymmetry", (i, j), "[e_i,e_j] != -[e_j,e_i]"))
                    done = True
                    break
            if done:
                break

    for i in range(n):
        bad = derivation_validate(lr.alg, lr.anchor[i])
        if bad:
            out.append(Violation("anchor-derivation", (i,), str(bad[0])))
            break

    done = False
    for i in range(n):
        for j in range(i + 1, n):
            lhs = anchor_matrix(lr, lr.bracket_elem(i, j))
            rhs = der_bracket(lr.anchor[i], lr.anchor[j]).matrix
            if lhs != rhs:
                out.append(
                    Violation("anchor-morphism", (i, j), "rho([e_i,e_j]) != [rho(e_i),rho(e_j)]")
                )
                done = True
                break
        if done:
            break

    done = False
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                ei, ej, ek = lr.basis_l(i), lr.basis_l(j), lr.basis_l(k)
                jac = (
                    lr_bracket(lr, ei, lr_bracket(lr, ej, ek))
                    - lr_bracket(lr, lr_bracket(lr, ei, ej), ek)
                    - lr_bracket(lr, ej, lr_bracket(lr, ei, ek))
                )
                if not jac.is_zero():
                    out.append(Violation("jacobi", (i, j, k), "Jacobi identity fails"))
                    done = True
                    break
            if done:
                break
        if done:
            break

    return out


def require_valid(lr: LieRinehart) -> None:
    """Raise on the first axiom violation; validation result is cached."""
    if lr._validation is None:
        lr._validation = lr_validate(lr)
    if lr._validation:
        raise ValueError(f"structure fails validation: {lr._validation[0]}")


class LRModule:
    """Free module over the base with an action table for the L-basis.

    action[i][j] is the element e_i . f_j as an m-tuple of AElems.  The
    table defines at least a connection; ``module_validate`` decides
    whether it is flat (a genuine module).
    """

    __slots__ = ("lr", "rank", "action", "_flat")

    def __init__(self, lr: LieRinehart, rank: int, action: Sequence) -> None:
        if rank < 0:
            raise ValueError("module rank must be nonnegative")
        if len(action) != lr.rank:
            raise ValueError("action table has wrong outer length")
        rows = []
        for i in range(lr.rank):
            if len(action[i]) != rank:
                raise ValueError(f"action row {i} has wrong length")
            row = []
            for j in range(rank):
                vec = tuple(action[i][j])
                if len(vec) != rank:
                    raise ValueError(f"action entry ({i},{j}) has wrong length")
                for c in vec:
                    if not isinstance(c, AElem) or c.alg != lr.alg:
                        raise ValueError("action coefficients must live in the base algebra")
                row.append(vec)
            rows.append(tuple(row))
        self.lr = lr
        self.rank = rank
        self.action = tuple(rows)
        self._flat: Optional[bool] = None

    def zero_vec(self) -> Tuple[AElem, ...]:
        return (self.lr.alg.zero(),) * self.rank

    def basis_vec(self, j: int) -> Tuple[AElem, ...]:
        v = [self.lr.alg.zero()] * self.rank
        v[j] = self.lr.alg.one()
        return tuple(v)

    def act_basis(self, i: int, vec: Sequence[AElem]) -> Tuple[AElem, ...]:
        """e_i . (sum b_j f_j) = sum rho(e_i)(b_j) f_j + b_j (e_i . f_j)."""
        out = [self.lr.alg.zero()] * self.rank
        for j, bj in enumerate(vec):
            if bj.is_zero():
                continue
            out[j] = out[j] + self.lr.anchor[i].apply(bj)
            for k, ck in enumerate(self.action[i][j]):
                if not ck.is_zero():
                    out[k] = out[k] + bj * ck
        return tuple(out)

    def act_lelem(self, u: LElem, vec: Sequence[AElem]) -> Tuple[AElem, ...]:
        """(sum a_i e_i) . m = sum a_i (e_i . m)."""
        out = [self.lr.alg.zero()] * self.rank
        for i, ai in enumerate(u.coeffs):
            if ai.is_zero():
                continue
            step = self.act_basis(i, vec)
            for k in range(self.rank):
                out[k] = out[k] + ai * step[k]
        return tuple(out)

    def is_flat(self) -> bool:
        if self._flat is None:
            self._flat = not module_validate(self.lr, self)
        return self._flat

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LRModule):
            return NotImplemented
        return self.lr == other.lr and self.rank == other.rank and self.action == other.action

    def __repr__(self) -> str:
        return f"LRModule(rank={self.rank})"


def module_validate(lr: LieRinehart, m: LRModule) -> List[Violation]:
    """Flatness on basis tuples: [e_i,e_j].f_k = e_i.(e_j.f_k) - e_j.(e_i.f_k).

    A nonempty report means the table is only a connection.  Requires the
    parent structure to be valid, which also makes basis tuples sufficient.
    """
    if m.lr != lr:
        raise ValueError("parent mismatch")
    out: List[Violation] = []
    for i in range(lr.rank):
        for j in range(i + 1, lr.rank):
            bij = lr.bracket_elem(i, j)
            for k in range(m.rank):
                f = m.basis_vec(k)
                lhs = m.act_lelem(bij, f)
                rhs = m.act_basis(i, m.act_basis(j, f))
                rhs2 = m.act_basis(j, m.act_basis(i, f))
                if any(not (a - (b - c)).is_zero() for a, b, c in zip(lhs, rhs, rhs2)):
                    out.append(
                        Violation("flatness", (i, j, k), "curvature acts nontrivially on f_k")
                    )
                    break
    return out


def trivial_coefficients(lr: LieRinehart) -> LRModule:
    """A itself as a rank-1 module: the basis vector is the unit, so the
    action table is zero and the anchor does all the work."""
    zero = ((lr.alg.zero(),),)
    return LRModule(lr, 1, tuple(zero for _ in range(lr.rank)))


class AltForm:
    """Alternating form on L with values in a module.

    Degree q; values maps sorted q-index-tuples to coefficient tuples of
    the module.  Missing keys are zero; zero values are dropped so equal
    forms have equal dictionaries.
    """

    __slots__ = ("lr", "module", "degree", "values")

    def __init__(self, lr: LieRinehart, module: LRModule, degree: int, values: Dict) -> None:
        if module.lr != lr:
            raise ValueError("module parent mismatch")
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        norm: Dict[Tuple[int, ...], Tuple[AElem, ...]] = {}
        for key, vec in values.items():
            k = tuple(key)
            if len(k) != degree or list(k) != sorted(k) or len(set(k)) != len(k):
                raise ValueError(f"bad subset key {k} for degree {degree}")
            if any(x < 0 or x >= lr.rank for x in k):
                raise ValueError(f"index out of range in key {k}")
            v = tuple(vec)
            if len(v) != module.rank:
                raise ValueError("value has wrong module rank")
            if any(not c.is_zero() for c in v):
                norm[k] = v
        self.lr = lr
        self.module = module
        self.degree = degree
        self.values = norm

    def value(self, key: Tuple[int, ...]) -> Tuple[AElem, ...]:
        return self.values.get(tuple(key), self.module.zero_vec())

    def eval_indices(self, indices: Sequence[int]) -> Tuple[AElem, ...]:
        """Evaluate on a possibly unsorted basis tuple, with sign."""
        ss = sort_with_sign(indices)
        if ss is None:
            return self.module.zero_vec()
        key, sign = ss
        vec = self.value(key)
        if sign == 1:
            return vec
        return tuple(-c for c in vec)

    def add(self, other: "AltForm") -> "AltForm":
        if (self.lr, self.module, self.degree) != (other.lr, other.module, other.degree):
            raise ValueError("form mismatch")
        keys = set(self.values) | set(other.values)
        vals = {
            k: tuple(a + b for a, b in zip(self.value(k), other.value(k))) for k in keys
        }
        return AltForm(self.lr, self.module, self.degree, vals)

    def scale(self, c) -> "AltForm":
        if isinstance(c, AElem):
            vals = {k: tuple(c * x for x in v) for k, v in self.values.items()}
        else:
            cc = _frac(c)
            vals = {k: tuple(cc * x for x in v) for k, v in self.values.items()}
        return AltForm(self.lr, self.module, self.degree, vals)

    def is_zero(self) -> bool:
        return not self.values

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AltForm):
            return NotImplemented
        return (
            self.lr == other.lr
            and self.module == other.module
            and self.degree == other.degree
            and self.values == other.values
        )

    def __repr__(self) -> str:
        return f"AltForm(degree={self.degree}, support={sorted(self.values)})"


def zero_form(lr: LieRinehart, module: LRModule, degree: int) -> AltForm:
    return AltForm(lr, module, degree, {})


def ce_differential(lr: LieRinehart, module: LRModule, w: AltForm, formal: bool = False) -> AltForm:
    """Cochain differential

        (d w)(x_0..x_q) = sum_i (-1)^i x_i . w(..no x_i..)
                        + sum_{i<j} (-1)^{i+j} w([x_i,x_j], ..no x_i, x_j..)

    evaluated on sorted basis tuples; bracket arguments are expanded
    A-linearly back into basis evaluations.  With a non-flat action table
    this is only a formal operator and must be requested with formal=True.
    """
    if w.lr != lr or w.module != module:
        raise ValueError("parent mismatch")
    if not formal and not module.is_flat():
        raise ValueError("action table is not flat; pass formal=True for the formal operator")
    q = w.degree
    n = lr.rank
    if q + 1 > n:
        return zero_form(lr, module, q + 1)
    out: Dict[Tuple[int, ...], Tuple[AElem, ...]] = {}
    for key in combinations(range(n), q + 1):
        total = list(module.zero_vec())
        for i, xi in enumerate(key):
            rest = key[:i] + key[i + 1 :]
            vec = w.value(rest)
            if any(not c.is_zero() for c in vec):
                step = module.act_basis(xi, vec)
                if i % 2 == 0:
                    total = [a + b for a, b in zip(total, step)]
                else:
                    total = [a - b for a, b in zip(total, step)]
        for i in range(q + 1):
            for j in range(i + 1, q + 1):
                rest = tuple(x for t, x in enumerate(key) if t != i and t != j)
                sgn = 1 if (i + j) % 2 == 0 else -1
                for k, ck in enumerate(lr.bracket[key[i]][key[j]]):
                    if ck.is_zero() or k in rest:
                        continue
                    vec = w.eval_indices((k,) + rest)
                    if any(not c.is_zero() for c in vec):
                        if sgn == 1:
                            total = [a + ck * b for a, b in zip(total, vec)]
                        else:
                            total = [a - ck * b for a, b in zip(total, vec)]
        out[key] = tuple(total)
    return AltForm(lr, module, q + 1, out)


def basis_forms(lr: LieRinehart, module: LRModule, q: int):
    """Canonical Q-basis of degree-q forms: (subset, module slot, algebra slot)."""
    for key in combinations(range(lr.rank), q):
        for j in range(module.rank):
            for t in range(lr.alg.dim):
                yield key, j, t


def basis_form(lr: LieRinehart, module: LRModule, key, j: int, t: int) -> AltForm:
    vec = [lr.alg.zero()] * module.rank
    vec[j] = lr.alg.basis(t)
    return AltForm(lr, module, len(key), {tuple(key): tuple(vec)})


def alt_dim(lr: LieRinehart, module: LRModule, q: int) -> int:
    return comb(lr.rank, q) * module.rank * lr.alg.dim


def _diff_matrix(lr: LieRinehart, module: LRModule, q: int, formal: bool = False) -> RatMatrix:
    """Matrix of d: Alt^q -> Alt^{q+1} in the canonical rational basis."""
    rows = alt_dim(lr, module, q + 1)
    cols = alt_dim(lr, module, q)
    index = {
        (key, j, t): pos for pos, (key, j, t) in enumerate(basis_forms(lr, module, q + 1))
    }
    entries = [Fraction(0)] * (rows * cols)
    for cpos, (key, j, t) in enumerate(basis_forms(lr, module, q)):
        img = ce_differential(lr, module, basis_form(lr, module, key, j, t), formal=formal)
        for ikey, vec in img.values.items():
            for jj in range(module.rank):
                for tt in range(lr.alg.dim):
                    c = vec[jj].coeffs[tt]
                    if c != 0:
                        entries[index[(ikey, jj, tt)] * cols + cpos] = c
    return RatMatrix(rows, cols, entries)


def ce_square_witness(lr: LieRinehart, module: LRModule, max_degree: Optional[int] = None):
    """First basis form whose image under d.d is nonzero, or None.

    Works formally, so it is the tool for detecting curvature through the
    failure of d^2 = 0.
    """
    top = lr.rank if max_degree is None else min(max_degree, lr.rank)
    for q in range(top + 1):
        for key, j, t in basis_forms(lr, module, q):
            w = basis_form(lr, module, key, j, t)
            dd = ce_differential(lr, module, ce_differential(lr, module, w, formal=True), formal=True)
            if not dd.is_zero():
                return (q, key, j, t)
    return None


def cohomology_dims(lr: LieRinehart, module: LRModule, max_degree: int) -> List[int]:
    """dim H^q for q = 0..max_degree via exact rank computations:

        dim H^q = dim ker d_q - rank d_{q-1}
                = dim Alt^q - rank d_q - rank d_{q-1}.
    """
    require_valid(lr)
    if not module.is_flat():
        raise ValueError("coefficients are not flat; cohomology undefined")
    top = min(max_degree, lr.rank)
    ranks = [mat_rank(_diff_matrix(lr, module, q)) for q in range(top + 1)]
    dims = []
    for q in range(top + 1):
        below = ranks[q - 1] if q > 0 else 0
        dims.append(alt_dim(lr, module, q) - ranks[q] - below)
    dims.extend(0 for _ in range(max_degree - top))
    return dims
