"""Maps between F_p and cone(omega^(p+1)): f, g, the homotopy G and the A-infinity component g2.

g is the inclusion of a strong deformation retract with projection f and
homotopy G; together with g2 it is an A-infinity quasi-isomorphism
F_p -> cone.  The last part builds the primitive complex at ``p = 0`` whose
barred half is moved into the image of ``*_r``, with its lift into the cone.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Tuple

from . import faults
from .cone import ConeElement, ConeSpace, cone_d, cone_m2, cone_space
from .exterior import ZERO, Form, LieModel, d, power, wedge
from .filtered import (BARRED, PLAIN, FilteredElement, FpAlgebra, check_p, fp_algebra, m1,
                       stasheff_sign)
from .identities import (DEFAULT_SAMPLES, DEFAULT_SEED, TUPLE_BUDGET, Block, Identity, Op, Term, Vec,
                         check_identity, insertion_terms)
from .lefschetz import lefschetz
from .report import IdentityReport


class G2MismatchError(AssertionError):
    """The definitional and closed forms of g2 disagree: an implementation bug."""


# --------------------------------------------------------------------------
# f, g, G
# --------------------------------------------------------------------------

def map_f(x: ConeElement) -> FilteredElement:
    """Projection cone -> F_p.

    In degree ``j <= n+p`` this keeps ``alpha_j = Pi^p eta``.  Above, with
    ``j = 2n+2p+1-k``, the element is ``*_r(alpha_(k-2p-1) + ...) + theta *_r(alpha_k + ...)``
    and f returns ``-(alpha_k + L^p del_+ beta)`` on the barred side, ``beta``
    being the primitive (``j = 0``) component of ``alpha_(k-2p-1)``.  The
    shorthand ``Pi^p* L^p d alpha_(k-2p-1)`` for the second term agrees with
    this except in degrees where ``Pi^p*`` vanishes; see :func:`map_f_projected`.
    """
    m, p = x.model, x.p
    lef = lefschetz(m)
    n = m.n
    j = x.k
    if j <= n + p:
        return FilteredElement(m, p, PLAIN, j, lef.pi_p(p, x.eta))
    k = 2 * n + 2 * p + 1 - j
    alpha_k = lef.pi_p(p, lef.star_r(x.xi))
    alpha_low = lef.pi_p(p, lef.star_r(x.eta))
    beta = lef.pi_p(0, alpha_low)
    tail = lef.L_pow(lef.del_plus(beta), p)
    return FilteredElement(m, p, BARRED, k, -(alpha_k + tail))


def map_f_projected(x: ConeElement) -> FilteredElement:
    """f with the high-side term written as ``Pi^p* L^p d alpha_(k-2p-1)``, for comparison only."""
    m, p = x.model, x.p
    lef = lefschetz(m)
    j = x.k
    if j <= m.n + p:
        return map_f(x)
    k = 2 * m.n + 2 * p + 1 - j
    alpha_k = lef.pi_p(p, lef.star_r(x.xi))
    alpha_low = lef.pi_p(p, lef.star_r(x.eta))
    tail = lef.pi_p_star(p, lef.L_pow(d(alpha_low, m), p))
    return FilteredElement(m, p, BARRED, k, -(alpha_k + tail))


def map_g(x: FilteredElement) -> ConeElement:
    """Inclusion F_p -> cone: ``alpha - theta L^-(p+1) d alpha`` plain, ``-theta *_r alpha`` barred."""
    m, p = x.model, x.p
    lef = lefschetz(m)
    if x.plain:
        return ConeElement(m, p, x.k, x.form, -lef.L_neg(p + 1, d(x.form, m)))
    return ConeElement(m, p, x.complex_degree, ZERO, -lef.star_r(x.form))


def homotopy_G(x: ConeElement) -> ConeElement:
    """``G(eta + theta xi) = L^p xi + theta L^-(p+1) eta``, of degree -1."""
    m, p = x.model, x.p
    lef = lefschetz(m)
    xi = lef.L_neg(p + 1, x.eta)
    if faults.active(faults.G_THETA_SIGN):
        xi = -xi
    return ConeElement(m, p, x.k - 1, lef.L_pow(x.xi, p), xi)


def theta_L_neg(x: ConeElement) -> ConeElement:
    """The odd operator ``theta L^-(p+1)``; it kills the theta slot."""
    return ConeElement(x.model, x.p, x.k - 1, ZERO, lefschetz(x.model).L_neg(x.p + 1, x.eta))


def g2_definitional(x: FilteredElement, y: FilteredElement) -> ConeElement:
    gx, gy = map_g(x), map_g(y)
    prod = cone_m2(gx, gy)
    out = theta_L_neg(ConeElement(prod.model, prod.p, prod.k, prod.eta, ZERO))
    return -out


def g2_closed(x: FilteredElement, y: FilteredElement) -> ConeElement:
    """``-theta L^-(p+1)(x y)`` when both inputs sit on the plain side, zero otherwise."""
    m, p = x.model, x.p
    cdeg = x.complex_degree + y.complex_degree - 1
    if not (x.plain and y.plain):
        return ConeElement(m, p, cdeg, ZERO, ZERO)
    return ConeElement(m, p, cdeg, ZERO, -lefschetz(m).L_neg(p + 1, wedge(x.form, y.form)))


def g2(x: FilteredElement, y: FilteredElement) -> ConeElement:
    if x.model != y.model or x.p != y.p:
        raise ValueError("arguments live in different complexes")
    a, b = g2_definitional(x, y), g2_closed(x, y)
    if a != b:
        raise G2MismatchError(f"g2({x}, {y}): definition gives {a}, closed form gives {b}")
    return a


# --------------------------------------------------------------------------
# the package of maps as operations on basis coordinates
# --------------------------------------------------------------------------

class EquivalencePackage:
    """f, g, G, g2 between the fixed bases of F_p and of the cone, memoised."""

    def __init__(self, m: LieModel, p: int):
        check_p(m, p)
        self.m, self.p = m, p
        self.F: FpAlgebra = fp_algebra(m, p)
        self.C: ConeSpace = cone_space(m, p)
        F, C = self.F, self.C
        self.g1 = Op("g1", 1, 0, F.space, C.space, lambda idx: C.coords(map_g(F.element(idx[0]))))
        self.g2 = Op("g2", 2, -1, F.space, C.space,
                     lambda idx: C.coords(g2(F.element(idx[0]), F.element(idx[1]))),
                     lambda degs: all(dg <= m.n + p for dg in degs))
        self.f = Op("f", 1, 0, C.space, F.space, lambda idx: F.coords(map_f(C.element(idx[0]))))
        self.G = Op("G", 1, -1, C.space, C.space, lambda idx: C.coords(homotopy_G(C.element(idx[0]))))


def equivalence_package(m: LieModel, p: int) -> EquivalencePackage:
    key = ("equiv", p, faults.active_set())
    pkg = m._cache.get(key)
    if pkg is None:
        pkg = EquivalencePackage(m, p)
        m._cache[key] = pkg
    return pkg


def _sub(a: Vec, b: Vec) -> Vec:
    out = dict(a)
    for k, v in b.items():
        w = out.get(k, 0) - v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def _check_vec(res, space, label, value: Vec) -> None:
    res.checked += 1
    if value:
        res.fail(label, space.describe(value))


def sdr_check(p: int, m: LieModel) -> IdentityReport:
    """f g = id, id - g f = d_C G + G d_C, and f, g chain maps, on every basis element."""
    pkg = equivalence_package(m, p)
    F, C = pkg.F, pkg.C
    m1F, m1C = F.ops[1], C.ops[1]
    rep = IdentityReport("sdr", m.name, p)
    fg, homot, g_chain, f_chain = (rep.add(n) for n in ("f_g_identity", "homotopy", "g_chain_map", "f_chain_map"))
    for i in range(len(F)):
        label = (F.space.labels[i],)
        try:
            gi = pkg.g1.on_basis((i,))
            _check_vec(fg, F.space, label, _sub(_apply(pkg.f, gi), {i: Fraction(1)}))
            _check_vec(g_chain, C.space, label, _sub(_apply(m1C, gi), _apply(pkg.g1, m1F.on_basis((i,)))))
        except ValueError as exc:
            fg.fail(label, f"error: {exc}")
    for i in range(len(C)):
        label = (C.space.labels[i],)
        try:
            lhs = _sub({i: Fraction(1)}, _apply(pkg.g1, pkg.f.on_basis((i,))))
            rhs = _apply(m1C, pkg.G.on_basis((i,)))
            for k, v in _apply(pkg.G, m1C.on_basis((i,))).items():
                rhs[k] = rhs.get(k, 0) + v
            _check_vec(homot, C.space, label, _sub(lhs, {k: v for k, v in rhs.items() if v}))
            _check_vec(f_chain, F.space, label,
                       _sub(_apply(m1F, pkg.f.on_basis((i,))), _apply(pkg.f, m1C.on_basis((i,)))))
        except ValueError as exc:
            homot.fail(label, f"error: {exc}")
    # side conditions are not part of the statement; record them only
    side = {"f G": 0, "G g": 0, "G G": 0}
    for i in range(len(C)):
        side["f G"] += bool(_apply(pkg.f, pkg.G.on_basis((i,))))
        side["G G"] += bool(_apply(pkg.G, pkg.G.on_basis((i,))))
    for i in range(len(F)):
        side["G g"] += bool(_apply(pkg.G, pkg.g1.on_basis((i,))))
    rep.notes.append("side conditions, nonzero on basis elements: " +
                     ", ".join(f"{k}: {v}" for k, v in side.items()))
    return rep


def _apply(op: Op, v: Vec) -> Vec:
    return op(v) if v else {}


# --------------------------------------------------------------------------
# A-infinity map equations
# --------------------------------------------------------------------------

def ainfty_map_sign(indices: Tuple[int, ...]) -> int:
    """``(-1)^u`` with ``u = sum_(k=1)^(q-1) (q-k)(i_k - 1)``."""
    q = len(indices)
    u = sum((q - k) * (indices[k - 1] - 1) for k in range(1, q))
    return -1 if u % 2 else 1


def _compositions(total: int, parts: int, largest: int):
    if parts == 1:
        if 1 <= total <= largest:
            yield (total,)
        return
    for first in range(1, min(largest, total - parts + 1) + 1):
        for rest in _compositions(total - first, parts - 1, largest):
            yield (first,) + rest


def ainfty_map_identity(pkg: EquivalencePackage, n: int) -> Identity:
    """``sum (-1)^(r+st) g^(r+1+t)(1^r m^s 1^t) - sum (-1)^u m_C^q(g^(i_1) ... g^(i_q)) = 0``."""
    gs = {1: pkg.g1, 2: pkg.g2}
    mc = pkg.C.ops
    ident = Identity(f"ainfty_map_n{n}", n, pkg.F.space, pkg.C.space)
    ident.terms = insertion_terms(gs, pkg.F.ops, n, stasheff_sign)
    for q, mq in mc.items():
        for comp in _compositions(n, q, max(gs)):
            blocks = [Block(gs[i], i) for i in comp]
            label = f"{mq.name}(" + " x ".join(gs[i].name for i in comp) + ")"
            ident.terms.append(Term(label, -ainfty_map_sign(comp), blocks, mq))
    return ident


def anticommutator_check(m: LieModel, p: int, rep: IdentityReport) -> None:
    """``{m1_C, theta L^-(p+1)}(eta + theta xi) = w^(p+1) L^-(p+1) eta - theta([d, L^-(p+1)] eta - L^-(p+1) w^(p+1) xi)``."""
    lef = lefschetz(m)
    C = cone_space(m, p)
    res = rep.add("theta_L_anticommutator")
    q = p + 1
    wq = power(m.omega, q)
    for i in range(len(C)):
        x = C.element(i)
        lhs = cone_d(theta_L_neg(x)) + theta_L_neg(cone_d(x))
        comm = d(lef.L_neg(q, x.eta), m) - lef.L_neg(q, d(x.eta, m))
        rhs = ConeElement(m, p, x.k, wedge(wq, lef.L_neg(q, x.eta)), -(comm - lef.L_neg(q, wedge(wq, x.xi))))
        res.checked += 1
        if lhs != rhs:
            res.fail((str(x),), str(lhs - rhs))


def ainfty_map_check(p: int, m: LieModel, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
                     budget: int = TUPLE_BUDGET, arities=range(1, 5), sampled_arities=()) -> IdentityReport:
    """The A-infinity map equations for (g1, g2) in every arity ``n <= 4``, plus the anticommutator formula."""
    pkg = equivalence_package(m, p)
    rep = IdentityReport("ainfty-map", m.name, p, seed=seed)
    for n in arities:
        check_identity(ainfty_map_identity(pkg, n), rep.add(f"ainfty_map_n{n}"), budget=budget,
                       samples=samples, seed=seed + n, force_sampling=n in sampled_arities)
    anticommutator_check(m, p, rep)
    return rep


# --------------------------------------------------------------------------
# the primitive complex with barred half in *_r P and its lift
# --------------------------------------------------------------------------

class ModifiedComplex:
    """``P^0 -> ... -> P^n -> w^0 P^n -> w^1 P^(n-1) -> ... -> w^n P^0`` at ``p = 0``.

    Differentials: ``del_+`` on the plain half, ``-del_+ del_-`` in the middle
    and ``-d`` on the barred half.  Elements are :class:`FilteredElement` with
    ``form`` already in ``w^(n-k) P^k`` on the barred side, ``k`` the primitive degree.
    """

    def __init__(self, m: LieModel):
        self.m = m
        self.n = m.n
        self.lef = lefschetz(m)
        self.entries: List[FilteredElement] = []
        for k in range(0, self.n + 1):
            for b in self.lef.primitive_basis(k):
                self.entries.append(FilteredElement(m, 0, PLAIN, k, b))
        for k in range(self.n, -1, -1):
            for b in self.lef.primitive_basis(k):
                self.entries.append(FilteredElement(m, 0, BARRED, k, self.lef.star_r(b)))

    def differential(self, x: FilteredElement) -> FilteredElement:
        lef, m, n = self.lef, self.m, self.n
        if x.plain:
            if x.k < n:
                return FilteredElement(m, 0, PLAIN, x.k + 1, lef.del_plus(x.form))
            return FilteredElement(m, 0, BARRED, n, -lef.del_plus(lef.del_minus(x.form)))
        return FilteredElement(m, 0, BARRED, x.k - 1, -d(x.form, m))

    def from_filtered(self, x: FilteredElement) -> FilteredElement:
        """F_0 -> this complex: identity on the plain side, ``*_r`` on the barred side."""
        return x if x.plain else FilteredElement(x.model, 0, BARRED, x.k, self.lef.star_r(x.form))


def tilde_lift(x: FilteredElement) -> ConeElement:
    """``beta - theta del_- beta`` on the plain side, ``-theta w^(n-k) beta`` on the barred side."""
    m = x.model
    lef = lefschetz(m)
    if x.p != 0:
        raise ValueError("the lifted complex is defined at p = 0")
    if x.plain:
        return ConeElement(m, 0, x.k, x.form, -lef.del_minus(x.form))
    return ConeElement(m, 0, x.complex_degree, ZERO, -x.form)


def modified_complex_check(m: LieModel) -> IdentityReport:
    """The lift is a chain map, the differential squares to zero and matches F_0 through ``*_r``."""
    mc = ModifiedComplex(m)
    rep = IdentityReport("modified-complex", m.name, 0)
    sq, chain, inter, agree = (rep.add(n) for n in ("d_squared", "lift_chain_map", "star_r_intertwines",
                                                    "lift_matches_g"))
    lef = mc.lef
    for x in mc.entries:
        dx = mc.differential(x)
        sq.checked += 1
        if mc.differential(dx).form:
            sq.fail((str(x),), str(mc.differential(dx)))
        chain.checked += 1
        lhs, rhs = cone_d(tilde_lift(x)), tilde_lift(dx)
        if lhs != rhs:
            chain.fail((str(x),), str(lhs - rhs))
        orig = x if x.plain else FilteredElement(m, 0, BARRED, x.k, lef.star_r(x.form))
        inter.checked += 1
        if mc.from_filtered(m1(orig)).form != dx.form:
            inter.fail((str(x),), f"{mc.from_filtered(m1(orig))} != {dx}")
        agree.checked += 1
        if tilde_lift(x) != map_g(orig):
            agree.fail((str(x),), f"{tilde_lift(x)} != {map_g(orig)}")
    return rep
