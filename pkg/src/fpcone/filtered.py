"""The complex F_p of filtered forms and its A-infinity products.

F_p is ``F^p Omega^0 -> ... -> F^p Omega^(n+p) -> bar F^p Omega^(n+p) -> ... -> bar F^p Omega^0``
with ``F^p Omega^k`` in complex degree ``k`` (plain side) and its barred copy
in complex degree ``2n+2p+1-k``.  Elements carry their side explicitly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import faults
from .exterior import ZERO, Form, LieModel, d, wedge
from .identities import (DEFAULT_SAMPLES, DEFAULT_SEED, TUPLE_BUDGET, Identity, Op, Space, Vec,
                         check_identity, insertion_terms, unit)
from .lefschetz import Lefschetz, lefschetz
from .report import IdentityReport

PLAIN = "plain"
BARRED = "barred"


class NotFilteredError(ValueError):
    pass


def check_p(m: LieModel, p: int) -> None:
    if not isinstance(p, int) or p < 0 or p > m.n:
        raise ValueError(f"filtration level p={p} outside 0..{m.n}")


@dataclass(frozen=True)
class FilteredElement:
    """A ``p``-filtered ``k``-form placed on the plain or barred side of F_p."""

    model: LieModel
    p: int
    side: str
    k: int
    form: Form

    @property
    def complex_degree(self) -> int:
        return self.k if self.side == PLAIN else 2 * self.model.n + 2 * self.p + 1 - self.k

    @property
    def plain(self) -> bool:
        return self.side == PLAIN

    def __add__(self, other: "FilteredElement") -> "FilteredElement":
        _same_slot(self, other)
        return FilteredElement(self.model, self.p, self.side, self.k, self.form + other.form)

    def __sub__(self, other: "FilteredElement") -> "FilteredElement":
        _same_slot(self, other)
        return FilteredElement(self.model, self.p, self.side, self.k, self.form - other.form)

    def __neg__(self) -> "FilteredElement":
        return FilteredElement(self.model, self.p, self.side, self.k, -self.form)

    def __mul__(self, c) -> "FilteredElement":
        return FilteredElement(self.model, self.p, self.side, self.k, self.form * c)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.form

    def __str__(self) -> str:
        return side_label(self.side, self.form)


def side_label(side: str, form: Form) -> str:
    if side == PLAIN:
        return str(form)
    return f"bar ({form})" if len(form.terms) > 1 else f"bar {form}"


def _same_slot(a: FilteredElement, b: FilteredElement) -> None:
    if (a.model, a.p, a.side, a.k) != (b.model, b.p, b.side, b.k):
        raise ValueError("cannot add filtered elements in different slots")


def at_degree(m: LieModel, p: int, cdeg: int, form: Form) -> FilteredElement:
    """Element of complex degree ``cdeg``; the side follows from the degree."""
    n = m.n
    if cdeg <= n + p:
        return FilteredElement(m, p, PLAIN, cdeg, form)
    return FilteredElement(m, p, BARRED, 2 * n + 2 * p + 1 - cdeg, form)


def filtered_element(m: LieModel, p: int, form: Form, side: str = PLAIN, k: Optional[int] = None) -> FilteredElement:
    """Validated constructor: ``form`` must be a ``p``-filtered form of degree ``k``."""
    check_p(m, p)
    if side not in (PLAIN, BARRED):
        raise ValueError(f"side must be {PLAIN!r} or {BARRED!r}")
    m.check_labels(form)
    if k is None:
        if not form:
            raise ValueError("degree must be given for the zero element")
        if form.degree is None:
            raise ValueError(f"{form} is not homogeneous")
        k = form.degree
    elif form and form.degree != k:
        raise ValueError(f"{form} does not have degree {k}")
    if not 0 <= k <= m.n + p:
        raise NotFilteredError(f"F^{p} Omega^{k} = 0 for k > n+p = {m.n + p}")
    if form and not lefschetz(m).is_p_filtered(p, form):
        raise NotFilteredError(f"{form} is not {p}-filtered")
    return FilteredElement(m, p, side, k, form)


# --------------------------------------------------------------------------
# operators on forms
# --------------------------------------------------------------------------

def _require_filtered(lef: Lefschetz, p: int, a: Form) -> None:
    if a and (a.degree is None or a.degree > lef.n + p or not lef.is_p_filtered(p, a)):
        raise NotFilteredError(f"{a} is not {p}-filtered")


def d_plus(p: int, a: Form, m: LieModel) -> Form:
    lef = lefschetz(m)
    _require_filtered(lef, p, a)
    return lef.pi_p(p, d(a, m))


def d_minus(p: int, a: Form, m: LieModel) -> Form:
    lef = lefschetz(m)
    _require_filtered(lef, p, a)
    return lef.star_r(d(lef.star_r(a), m))


def _middle(lef: Lefschetz, a: Form) -> Form:
    """``-del_+ del_-`` on ``F^p Omega^(n+p)``."""
    out = -lef.del_plus(lef.del_minus(a))
    return -out if faults.active(faults.MIDDLE_SIGN) else out


def _check_pair(*xs: FilteredElement) -> Tuple[LieModel, int]:
    m, p = xs[0].model, xs[0].p
    for x in xs[1:]:
        if x.model != m or x.p != p:
            raise ValueError("arguments live in different complexes")
    return m, p


def m1(x: FilteredElement) -> FilteredElement:
    m, p = x.model, x.p
    lef = lefschetz(m)
    n = m.n
    if x.plain:
        if x.k < n + p:
            return FilteredElement(m, p, PLAIN, x.k + 1, lef.pi_p(p, d(x.form, m)))
        return FilteredElement(m, p, BARRED, n + p, _middle(lef, x.form))
    return FilteredElement(m, p, BARRED, x.k - 1, -lef.star_r(d(lef.star_r(x.form), m)))


def D_L(p: int, a1: Form, a2: Form, k1: int, m: LieModel) -> Form:
    lef = lefschetz(m)
    q = p + 1
    return (-d(lef.L_neg(q, wedge(a1, a2)), m)
            + wedge(lef.L_neg(q, d(a1, m)), a2)
            + wedge(a1, lef.L_neg(q, d(a2, m))) * (-1) ** k1)


def m2(x: FilteredElement, y: FilteredElement) -> FilteredElement:
    m, p = _check_pair(x, y)
    lef = lefschetz(m)
    n = m.n
    top = 2 * n + 2 * p + 1
    cdeg = x.complex_degree + y.complex_degree
    if x.plain and y.plain:
        w = wedge(x.form, y.form)
        if cdeg <= n + p:
            out = w if faults.active(faults.M2_NO_PROJECTION) else lef.pi_p(p, w)
            return FilteredElement(m, p, PLAIN, cdeg, out)
        out = lef.pi_p(p, lef.star_r(D_L(p, x.form, y.form, x.k, m)))
        return FilteredElement(m, p, BARRED, top - cdeg, out)
    if cdeg > top:
        return at_degree(m, p, cdeg, ZERO)
    if x.plain:
        out = lef.star_r(wedge(x.form, lef.star_r(y.form))) * (-1) ** x.k
    elif y.plain:
        out = lef.star_r(wedge(lef.star_r(x.form), y.form))
    else:
        out = ZERO
    return at_degree(m, p, cdeg, out)


def m3(x: FilteredElement, y: FilteredElement, z: FilteredElement) -> FilteredElement:
    m, p = _check_pair(x, y, z)
    n = m.n
    cdeg = x.complex_degree + y.complex_degree + z.complex_degree - 1
    if not (x.plain and y.plain and z.plain) or cdeg + 1 < n + p + 2 or cdeg > 2 * n + 2 * p + 1:
        return at_degree(m, p, cdeg, ZERO)
    lef = lefschetz(m)
    q = p + 1
    bracket = wedge(x.form, lef.L_neg(q, wedge(y.form, z.form))) - wedge(lef.L_neg(q, wedge(x.form, y.form)), z.form)
    return at_degree(m, p, cdeg, lef.pi_p(p, lef.star_r(bracket)))


def m_op(l: int, *xs: FilteredElement) -> FilteredElement:
    if len(xs) != l:
        raise TypeError(f"m{l} takes {l} arguments")
    if l == 1:
        return m1(*xs)
    if l == 2:
        return m2(*xs)
    if l == 3:
        return m3(*xs)
    m, p = _check_pair(*xs)
    return at_degree(m, p, sum(x.complex_degree for x in xs) + 2 - l, ZERO)


# --------------------------------------------------------------------------
# basis, coordinates and memoised product tables
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BasisEntry:
    side: str
    k: int
    complex_degree: int
    form: Form
    label: str


class FpAlgebra:
    """F_p with a fixed basis: Lefschetz basis elements ``L^j beta`` with ``j <= p`` on each side.

    Product tables are memoised; one instance exists per ``(model, p, active faults)``.
    """

    def __init__(self, m: LieModel, p: int):
        check_p(m, p)
        self.m = m
        self.p = p
        self.n = m.n
        self.lef = lefschetz(m)
        self.top = 2 * m.n + 2 * p + 1
        self.entries: List[BasisEntry] = []
        self._slot: Dict[Tuple[str, int], List[Tuple[int, int]]] = {}
        for side in (PLAIN, BARRED):
            ks = range(0, m.n + p + 1) if side == PLAIN else range(m.n + p, -1, -1)
            for k in ks:
                slot = []
                for pos, b in enumerate(self.lef.lefschetz_basis(k)):
                    if b.j > p:
                        continue
                    cdeg = k if side == PLAIN else self.top - k
                    label = side_label(side, b.form)
                    slot.append((pos, len(self.entries)))
                    self.entries.append(BasisEntry(side, k, cdeg, b.form, label))
                self._slot[(side, k)] = slot
        self.space = Space(f"F_{p}({m.name})", [e.complex_degree for e in self.entries],
                           [e.label for e in self.entries])
        self._lneg_pair: Dict[Tuple[int, int], Form] = {}
        self.ops = {1: Op("m1", 1, 1, self.space, self.space, self._m1_fn),
                    2: Op("m2", 2, 0, self.space, self.space, self._m2_fn, self._m2_support),
                    3: Op("m3", 3, -1, self.space, self.space, self._m3_fn, self._m3_support)}

    def __len__(self) -> int:
        return len(self.entries)

    # -- conversion ------------------------------------------------------
    def element(self, i: int) -> FilteredElement:
        e = self.entries[i]
        return FilteredElement(self.m, self.p, e.side, e.k, e.form)

    def coords(self, x: FilteredElement) -> Vec:
        if x.model != self.m or x.p != self.p:
            raise ValueError("element is from a different complex")
        if not x.form:
            return {}
        if not 0 <= x.k <= self.n + self.p:
            raise NotFilteredError(f"nonzero form {x.form} in degree {x.k} > n+p")
        full = self.lef.lefschetz_coords(x.form, x.k)
        slot = self._slot[(x.side, x.k)]
        keep = {pos for pos, _ in slot}
        for pos, c in enumerate(full):
            if c and pos not in keep:
                raise NotFilteredError(f"{x.form} is not {self.p}-filtered")
        return {g: full[pos] for pos, g in slot if full[pos]}

    def to_element(self, v: Vec) -> List[FilteredElement]:
        """Homogeneous pieces of a coordinate vector."""
        acc: Dict[Tuple[str, int], Form] = {}
        for i, c in v.items():
            e = self.entries[i]
            acc[(e.side, e.k)] = acc.get((e.side, e.k), ZERO) + e.form * c
        return [FilteredElement(self.m, self.p, s, k, f) for (s, k), f in sorted(acc.items())]

    def vec_of(self, xs) -> Vec:
        out: Vec = {}
        for x in ([xs] if isinstance(xs, FilteredElement) else xs):
            for i, c in self.coords(x).items():
                out[i] = out.get(i, 0) + c
        return {i: c for i, c in out.items() if c}

    def basis_of_degree(self, cdeg: int) -> List[int]:
        return self.space.by_degree.get(cdeg, [])

    # -- table functions -------------------------------------------------
    def _m1_fn(self, idx) -> Vec:
        return self.coords(m1(self.element(idx[0])))

    def _m2_support(self, degs) -> bool:
        a, b = degs
        return a <= self.n + self.p or b <= self.n + self.p

    def _m2_fn(self, idx) -> Vec:
        return self.coords(m2(self.element(idx[0]), self.element(idx[1])))

    def _m3_support(self, degs) -> bool:
        return all(dg <= self.n + self.p for dg in degs) and sum(degs) >= self.n + self.p + 2

    def _lneg(self, i: int, j: int) -> Form:
        key = (i, j)
        out = self._lneg_pair.get(key)
        if out is None:
            out = self.lef.L_neg(self.p + 1, wedge(self.entries[i].form, self.entries[j].form))
            self._lneg_pair[key] = out
        return out

    def _m3_fn(self, idx) -> Vec:
        i, j, k = idx
        ei, ek = self.entries[i], self.entries[k]
        bracket = wedge(ei.form, self._lneg(j, k)) - wedge(self._lneg(i, j), ek.form)
        cdeg = ei.k + self.entries[j].k + ek.k - 1
        return self.coords(at_degree(self.m, self.p, cdeg, self.lef.pi_p(self.p, self.lef.star_r(bracket))))

    def unit_index(self) -> int:
        return self._slot[(PLAIN, 0)][0][1]


def fp_algebra(m: LieModel, p: int) -> FpAlgebra:
    key = ("fp", p, faults.active_set())
    alg = m._cache.get(key)
    if alg is None:
        alg = FpAlgebra(m, p)
        m._cache[key] = alg
    return alg


def basis(m: LieModel, p: int) -> List[FilteredElement]:
    alg = fp_algebra(m, p)
    return [alg.element(i) for i in range(len(alg))]


# --------------------------------------------------------------------------
# Stasheff suite
# --------------------------------------------------------------------------

def stasheff_sign(r: int, s: int, t: int) -> int:
    return -1 if (r + s * t) % 2 else 1


def stasheff_identity(alg: FpAlgebra, n: int) -> Identity:
    ident = Identity(f"stasheff_n{n}", n, alg.space, alg.space)
    ident.terms = insertion_terms(alg.ops, alg.ops, n, stasheff_sign)
    return ident


def stasheff_check(p: int, m: LieModel, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
                   budget: int = TUPLE_BUDGET, arities=range(1, 6), sampled_arities=()) -> IdentityReport:
    """A-infinity relations for ``n`` in ``arities``, plus commutativity and unit laws of m2.

    Arities listed in ``sampled_arities`` are always sampled; the others are
    exhaustive whenever the number of live basis tuples is within ``budget``.
    """
    alg = fp_algebra(m, p)
    rep = IdentityReport("stasheff", m.name, p, seed=seed)
    for n in arities:
        check_identity(stasheff_identity(alg, n), rep.add(f"stasheff_n{n}"), budget=budget,
                       samples=samples, seed=seed + n, force_sampling=n in sampled_arities)

    unit_i = alg.unit_index()
    m2op = alg.ops[2]
    comm, unit_res = rep.add("m2_graded_commutative"), rep.add("m2_unit")
    N = len(alg)
    for i in range(N):
        di = alg.space.degrees[i]
        for j in range(i, N):
            dj = alg.space.degrees[j]
            comm.checked += 1
            try:
                lhs = m2op.on_basis((i, j))
                rhs = m2op.on_basis((j, i))
            except ValueError as exc:
                comm.fail((alg.space.labels[i], alg.space.labels[j]), f"error: {exc}")
                continue
            sign = -1 if (di * dj) % 2 else 1
            diff = {k: lhs.get(k, 0) - sign * rhs.get(k, 0) for k in set(lhs) | set(rhs)}
            diff = {k: v for k, v in diff.items() if v}
            if diff:
                comm.fail((alg.space.labels[i], alg.space.labels[j]), alg.space.describe(diff))
        for order in ((unit_i, i), (i, unit_i)):
            unit_res.checked += 1
            try:
                val = m2op.on_basis(order)
            except ValueError as exc:
                unit_res.fail((alg.space.labels[order[0]], alg.space.labels[order[1]]), f"error: {exc}")
                continue
            if val != unit(i):
                unit_res.fail((alg.space.labels[order[0]], alg.space.labels[order[1]]),
                              alg.space.describe(val))

    # 1 as an m3 argument: recorded, not asserted
    nonzero = 0
    total = 0
    m3op = alg.ops[3]
    for pos in range(3):
        for a in range(N):
            for b in range(N):
                idx = [a, b]
                idx.insert(pos, unit_i)
                total += 1
                try:
                    if m3op.on_basis(tuple(idx)):
                        nonzero += 1
                except ValueError:
                    nonzero += 1
    rep.notes.append(f"m3 with the unit in one slot: nonzero on {nonzero} of {total} basis tuples")
    return rep
