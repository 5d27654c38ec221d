"""Cohomology of the de Rham model, of F_p and of the cone; pairings and the Calabi-Yau checks.

Cohomology is computed by exact ranks of the per-degree differential
matrices.  Representatives are the kernel vectors that extend a basis of
the image, chosen greedily in basis order, so they are deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import faults, linalg
from .cone import ConeElement, cone_m2, cone_space
from .equivalence import equivalence_package, map_f, map_g
from .exterior import Form, LieModel, d, integrate, power, wedge
from .filtered import FilteredElement, check_p, fp_algebra, m2, m_op
from .identities import (DEFAULT_SAMPLES, DEFAULT_SEED, TUPLE_BUDGET, Block, Identity, Op, Space, Term, Vec,
                         check_identity)
from .lefschetz import lefschetz
from .report import IdentityReport


# --------------------------------------------------------------------------
# complexes and cohomology
# --------------------------------------------------------------------------

class NotAComplexError(ValueError):
    pass


class Complex:
    """A cochain complex on a graded :class:`Space` with differential ``diff`` of degree +1."""

    def __init__(self, name: str, space: Space, diff: Op, to_element: Optional[Callable[[Vec], object]] = None):
        if diff.degree != 1 or diff.arity != 1:
            raise ValueError("differential must be unary of degree +1")
        self.name = name
        self.space = space
        self.diff = diff
        self.to_element = to_element
        self.degrees = sorted(space.by_degree)
        self._pos = {i: (self.space.degrees[i], pos) for k, idx in space.by_degree.items()
                     for pos, i in enumerate(idx)}
        self._mats: Dict[int, linalg.Matrix] = {}
        for k in self.degrees:
            if k + 1 in space.by_degree and k + 2 in space.by_degree:
                prod = linalg.matmul(self.matrix(k + 1), self.matrix(k))
                if any(x for row in prod for x in row):
                    raise NotAComplexError(f"{name}: d o d != 0 from degree {k}")

    def basis(self, k: int) -> List[int]:
        return self.space.by_degree.get(k, [])

    def matrix(self, k: int) -> linalg.Matrix:
        """``d: C^k -> C^(k+1)`` as rows indexed by the degree ``k+1`` basis."""
        if k not in self._mats:
            src, tgt = self.basis(k), self.basis(k + 1)
            rows = linalg.zeros(len(tgt), len(src))
            for col, i in enumerate(src):
                for j, c in self.diff.on_basis((i,)).items():
                    rows[self._pos[j][1]][col] = c
            self._mats[k] = rows
        return self._mats[k]

    def to_local(self, v: Vec, k: int) -> List[Fraction]:
        out = [Fraction(0)] * len(self.basis(k))
        for i, c in v.items():
            deg, pos = self._pos[i]
            if deg != k:
                raise ValueError(f"vector has a component in degree {deg}, expected {k}")
            out[pos] = c
        return out

    def to_global(self, vec: Sequence[Fraction], k: int) -> Vec:
        return {i: c for i, c in zip(self.basis(k), vec) if c}

    def boundaries(self, k: int) -> List[List[Fraction]]:
        """Spanning vectors of the image of ``d: C^(k-1) -> C^k`` in local coordinates."""
        if not self.basis(k - 1) or not self.basis(k):
            return []
        return linalg.transpose(self.matrix(k - 1))

    def cocycles(self, k: int) -> List[List[Fraction]]:
        n = len(self.basis(k))
        if not self.basis(k + 1):
            return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        return linalg.nullspace(self.matrix(k), n)

    def is_cocycle(self, v: Vec, k: int) -> bool:
        return not (self.diff(v) if v else {})

    def is_exact(self, v: Vec, k: int) -> bool:
        if not v:
            return True
        if not self.is_cocycle(v, k):
            return False
        b = self.boundaries(k)
        return linalg.rank(b + [self.to_local(v, k)], len(self.basis(k))) == linalg.rank(b, len(self.basis(k)))


@dataclass
class CohomologyReport:
    complex_id: str
    dims: Dict[int, int]
    representatives: Dict[int, List[Vec]]
    elements: Dict[int, list] = field(default_factory=dict)

    def dims_tuple(self, start: int = 0, stop: Optional[int] = None) -> Tuple[int, ...]:
        stop = max(self.dims) if stop is None else stop
        return tuple(self.dims.get(k, 0) for k in range(start, stop + 1))


def cohomology(cx: Complex) -> CohomologyReport:
    dims: Dict[int, int] = {}
    reps: Dict[int, List[Vec]] = {}
    elements: Dict[int, list] = {}
    for k in cx.degrees:
        n = len(cx.basis(k))
        b = cx.boundaries(k)
        z = cx.cocycles(k)
        rb = linalg.rank(b, n) if b else 0
        pivots = linalg.pivot_columns(b + z, n)
        chosen = [z[i - len(b)] for i in pivots if i >= len(b)]
        if len(chosen) != len(z) - rb:
            raise AssertionError(f"{cx.name}: inconsistent ranks in degree {k}")
        dims[k] = len(chosen)
        reps[k] = [cx.to_global(v, k) for v in chosen]
        if cx.to_element is not None:
            elements[k] = [cx.to_element(v) for v in reps[k]]
    return CohomologyReport(cx.name, dims, reps, elements)


def _cached(m: LieModel, key, build):
    key = key + (faults.active_set(),)
    out = m._cache.get(key)
    if out is None:
        out = build()
        m._cache[key] = out
    return out


def _derham_space(m: LieModel) -> Tuple[Space, List[Tuple[int, ...]]]:
    keys = [key for k in range(m.dim + 1) for key in m.basis(k)]
    labels = [str(Form._raw({key: Fraction(1)})) for key in keys]
    return Space(f"Omega({m.name})", [len(key) for key in keys], labels), keys


def derham_complex(m: LieModel) -> Complex:
    def build():
        space, keys = _derham_space(m)
        index = {key: i for i, key in enumerate(keys)}

        def fn(idx):
            out = d(Form._raw({keys[idx[0]]: Fraction(1)}), m)
            return {index[key]: c for key, c in out.terms.items()}

        cx = Complex(f"derham({m.name})", space, Op("d", 1, 1, space, space, fn),
                     lambda v: Form._raw({keys[i]: c for i, c in v.items()}))
        cx.keys, cx.index = keys, index
        return cx
    return _cached(m, ("cx-derham",), build)


def filtered_complex(m: LieModel, p: int) -> Complex:
    check_p(m, p)

    def build():
        alg = fp_algebra(m, p)
        return Complex(f"F_{p}({m.name})", alg.space, alg.ops[1], lambda v: alg.to_element(v)[0])
    return _cached(m, ("cx-filtered", p), build)


def cone_complex(m: LieModel, p: int) -> Complex:
    if p < 0:
        raise ValueError("p must be >= 0")

    def build():
        cs = cone_space(m, p)
        return Complex(f"cone_{p}({m.name})", cs.space, cs.ops[1],
                       lambda v: cs.to_element(v, cs.space.degree_of(v)))
    return _cached(m, ("cx-cone", p), build)


def form_vec(m: LieModel, a: Form) -> Vec:
    cx = derham_complex(m)
    return {cx.index[key]: c for key, c in a.terms.items()}


# --------------------------------------------------------------------------
# Gysin-type decomposition
# --------------------------------------------------------------------------

def _mult_rank(m: LieModel, h: CohomologyReport, src: int, power_of: int) -> int:
    """Rank of ``[w^power_of]: H^src -> H^(src + 2 power_of)`` on de Rham cohomology."""
    cx = derham_complex(m)
    tgt = src + 2 * power_of
    reps = h.representatives.get(src, [])
    if not reps or tgt > m.dim or tgt < 0:
        return 0
    wp = power(m.omega, power_of)
    images = [cx.to_local(form_vec(m, wedge(wp, cx.to_element(v))), tgt) for v in reps]
    b = cx.boundaries(tgt)
    width = len(cx.basis(tgt))
    return linalg.rank(b + images, width) - (linalg.rank(b, width) if b else 0)


def gysin_prediction(m: LieModel, p: int) -> List[Tuple[int, int, int]]:
    """Per degree ``j``: (coker of ``[w^(p+1)]`` into ``H^j``, ker of ``[w^(p+1)]`` on ``H^(j-2p-1)``, sum)."""
    h = cohomology(derham_complex(m))
    q = p + 1
    rows = []
    for j in range(0, m.dim + 2 * p + 2):
        dim_j = h.dims.get(j, 0)
        coker = dim_j - _mult_rank(m, h, j - 2 * q, q)
        src = j - 2 * p - 1
        ker = h.dims.get(src, 0) - _mult_rank(m, h, src, q)
        rows.append((coker, ker, coker + ker))
    return rows


def gysin_check(p: int, m: LieModel) -> IdentityReport:
    """Cone and F_p cohomology dimensions against coker + ker of ``[w^(p+1)]``, degree by degree."""
    check_p(m, p)
    rep = IdentityReport("gysin", m.name, p)
    pred = gysin_prediction(m, p)
    cone_h = cohomology(cone_complex(m, p))
    fil_h = cohomology(filtered_complex(m, p))
    res_c, res_f = rep.add("cone_dims"), rep.add("filtered_dims")
    rows = []
    for j, (coker, ker, total) in enumerate(pred):
        c, f = cone_h.dims.get(j, 0), fil_h.dims.get(j, 0)
        rows.append([j, coker, ker, total, c, f])
        for res, got in ((res_c, c), (res_f, f)):
            res.checked += 1
            if got != total:
                res.fail((f"degree {j}",), f"dim {got} != coker {coker} + ker {ker}")
    rep.tables.append({"title": f"Gysin decomposition, p = {p}",
                       "headers": ["degree", "coker", "ker", "predicted", "cone", "filtered"], "rows": rows})
    return rep


def cohomology_maps_check(p: int, m: LieModel) -> IdentityReport:
    """f and g induce mutually inverse isomorphisms on cohomology, degree by degree."""
    pkg = equivalence_package(m, p)
    fcx, ccx = filtered_complex(m, p), cone_complex(m, p)
    hf, hc = cohomology(fcx), cohomology(ccx)
    rep = IdentityReport("cohomology-maps", m.name, p)
    dims, g_inj, fg, gf = (rep.add(n) for n in ("equal_dims", "g_star_injective", "f_star_g_star", "g_star_f_star"))
    for k in sorted(set(hf.dims) | set(hc.dims)):
        dims.checked += 1
        if hf.dims.get(k, 0) != hc.dims.get(k, 0):
            dims.fail((f"degree {k}",), f"{hf.dims.get(k, 0)} != {hc.dims.get(k, 0)}")
        imgs = [pkg.g1(v) for v in hf.representatives.get(k, [])]
        g_inj.checked += 1
        b = ccx.boundaries(k)
        width = len(ccx.basis(k))
        local = [ccx.to_local(v, k) for v in imgs]
        if imgs and linalg.rank(b + local, width) - (linalg.rank(b, width) if b else 0) != len(imgs):
            g_inj.fail((f"degree {k}",), "g* has a kernel")
        for v, gv in zip(hf.representatives.get(k, []), imgs):
            fg.checked += 1
            diff = pkg.f(gv) if gv else {}
            delta = {i: diff.get(i, 0) - v.get(i, 0) for i in set(diff) | set(v)}
            delta = {i: c for i, c in delta.items() if c}
            if not fcx.is_exact(delta, k):
                fg.fail((fcx.space.describe(v),), fcx.space.describe(delta))
        for v in hc.representatives.get(k, []):
            gf.checked += 1
            fv = pkg.f(v)
            back = pkg.g1(fv) if fv else {}
            delta = {i: back.get(i, 0) - v.get(i, 0) for i in set(back) | set(v)}
            delta = {i: c for i, c in delta.items() if c}
            if not ccx.is_exact(delta, k):
                gf.fail((ccx.space.describe(v),), ccx.space.describe(delta))
    return rep


# --------------------------------------------------------------------------
# pairings
# --------------------------------------------------------------------------

def _top(x: FilteredElement) -> int:
    return 2 * x.model.n + 2 * x.p + 1


def pairing(a1: FilteredElement, a2: FilteredElement) -> Fraction:
    """``int (-1)^k a1 *_r a2`` for plain ``a1``, ``int *_r a1 a2`` for plain ``a2``; zero off complementary degrees."""
    if a1.model != a2.model or a1.p != a2.p:
        raise ValueError("arguments live in different complexes")
    m = a1.model
    if a1.complex_degree + a2.complex_degree != _top(a1) or a1.plain == a2.plain:
        return Fraction(0)
    lef = lefschetz(m)
    if a1.plain:
        sign = 1 if faults.active(faults.PAIRING_SIGN) else (-1) ** a1.k
        return integrate(wedge(a1.form, lef.star_r(a2.form)), m) * sign
    return integrate(wedge(lef.star_r(a1.form), a2.form), m)


def pairing_via_m2(a1: FilteredElement, a2: FilteredElement) -> Fraction:
    """``int *_r m2(a1, a2)``, the defining route."""
    if a1.complex_degree + a2.complex_degree != _top(a1):
        return Fraction(0)
    out = m2(a1, a2)
    return integrate(lefschetz(a1.model).star_r(out.form), a1.model)


def cone_pairing(x: ConeElement, y: ConeElement) -> Fraction:
    """Integral of the theta slot of ``x y``, using ``int theta A = int A``."""
    if x.k + y.k != 2 * x.model.n + 2 * x.p + 1:
        return Fraction(0)
    return integrate(cone_m2(x, y).xi, x.model)


@dataclass
class PairingMatrix:
    p: int
    degree: int
    dual_degree: int
    rows: linalg.Matrix
    rank: int

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    @property
    def full_rank(self) -> bool:
        r, c = self.shape
        if not self.rows:
            return True
        return r == c and self.rank == r


def pairing_representatives(p: int, m: LieModel, k: int) -> List[FilteredElement]:
    """Cohomology representatives of F_p in complex degree ``k``, in pivot order."""
    h = cohomology(filtered_complex(m, p))
    alg = fp_algebra(m, p)
    return [alg.to_element(v)[0] for v in h.representatives.get(k, [])]


def _matrix_of(left: List[FilteredElement], right: List[FilteredElement], p: int, k: int, k2: int) -> PairingMatrix:
    rows = [[pairing(a, b) for b in right] for a in left]
    width = len(right)
    r = linalg.rank(rows, width) if rows and width else 0
    return PairingMatrix(p, k, k2, rows, r)


def pairing_matrix(p: int, m: LieModel, k: int) -> PairingMatrix:
    """Pairings between cohomology representatives in complex degrees ``k`` and ``2(n+p)+1-k``."""
    check_p(m, p)
    k2 = 2 * (m.n + p) + 1 - k
    if not 0 <= k <= 2 * (m.n + p) + 1:
        raise ValueError(f"degree {k} outside 0..{2 * (m.n + p) + 1}")
    return _matrix_of(pairing_representatives(p, m, k), pairing_representatives(p, m, k2), p, k, k2)


def perturbed_pairing_matrix(p: int, m: LieModel, k: int) -> PairingMatrix:
    """The same matrix after adding distinct exact terms ``m1(y)`` to every representative."""
    k2 = 2 * (m.n + p) + 1 - k
    alg = fp_algebra(m, p)

    def shift(reps: List[FilteredElement], deg: int) -> List[FilteredElement]:
        prev = alg.basis_of_degree(deg - 1)
        out = []
        for i, a in enumerate(reps):
            v = dict(alg.coords(a))
            for j, b in enumerate(prev):
                for t, c in alg.ops[1].on_basis((b,)).items():
                    v[t] = v.get(t, 0) + c * (i + j + 1)
            v = {t: c for t, c in v.items() if c}
            out.append(alg.to_element(v)[0] if v else a * 0)
        return out

    return _matrix_of(shift(pairing_representatives(p, m, k), k), shift(pairing_representatives(p, m, k2), k2), p, k, k2)


# --------------------------------------------------------------------------
# Calabi-Yau suite
# --------------------------------------------------------------------------

SCALARS = Space("k", [0], ["1"])


def _pairing_op(alg) -> Op:
    top = alg.top

    def fn(idx):
        val = pairing(alg.element(idx[0]), alg.element(idx[1]))
        return {0: val} if val else {}

    def support(degs):
        a, b = degs
        return (a <= alg.n + alg.p) != (b <= alg.n + alg.p)

    return Op("pair", 2, -top, alg.space, SCALARS, fn, support)


def cyclic_identity(alg, pair: Op, l: int) -> Identity:
    """``<m^l(a_1..a_l), a_(l+1)> - (-1)^(l + |a_1|(|a_2|+...)) <m^l(a_2..a_(l+1)), a_1>``."""
    ml = alg.ops[l]
    blocks = [Block(ml, l), Block(None, 1)]
    rot = tuple(range(1, l + 1)) + (0,)

    def sign(degs):
        return -1 if (l + degs[0] * sum(degs[1:])) % 2 else 1

    ident = Identity(f"cyclic_l{l}", l + 1, alg.space, SCALARS)
    ident.terms = [Term(f"<m{l}(a1..a{l}), a{l + 1}>", 1, blocks, pair),
                   Term(f"<m{l}(a2..a{l + 1}), a1>", -1, blocks, pair, perm=rot, sign_fn=sign)]
    return ident


def symmetry_identity(alg, pair: Op) -> Identity:
    ident = Identity("graded_symmetry", 2, alg.space, SCALARS)
    ident.terms = [Term("<a, b>", 1, [Block(None, 1), Block(None, 1)], pair),
                   Term("<b, a>", -1, [Block(None, 1), Block(None, 1)], pair, perm=(1, 0),
                        sign_fn=lambda degs: -1 if degs[0] * degs[1] % 2 else 1)]
    return ident


def cyclic_check(p: int, m: LieModel, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
                 budget: int = TUPLE_BUDGET, levels=(1, 2, 3), nondegeneracy: bool = True) -> IdentityReport:
    """Calabi-Yau structure on F_p: symmetry, cyclic identities, nondegeneracy, and compatibility with the cone."""
    alg = fp_algebra(m, p)
    pair = _pairing_op(alg)
    rep = IdentityReport("cyclic", m.name, p, seed=seed)
    check_identity(symmetry_identity(alg, pair), rep.add("graded_symmetry"), budget=budget,
                   samples=samples, seed=seed)
    for l in levels:
        check_identity(cyclic_identity(alg, pair, l), rep.add(f"cyclic_l{l}"), budget=budget,
                       samples=samples, seed=seed + l)

    via_m2, compat = rep.add("pairing_matches_m2"), rep.add("cone_compatibility")
    pkg = equivalence_package(m, p)
    cs = pkg.C
    for i in range(len(alg)):
        for j in range(len(alg)):
            if alg.space.degrees[i] + alg.space.degrees[j] != alg.top:
                continue
            a, b = alg.element(i), alg.element(j)
            label = (alg.space.labels[i], alg.space.labels[j])
            direct = pairing(a, b)
            via_m2.checked += 1
            other = pairing_via_m2(a, b)
            if direct != other:
                via_m2.fail(label, f"{direct} != int *_r m2 = {other}")
            compat.checked += 1
            lhs = cone_pairing(map_g(a), map_g(b))
            if lhs != -direct:
                compat.fail(label, f"<g a, g b>_C = {lhs}, -<a, b> = {-direct}")

    if nondegeneracy:
        full, invariant = rep.add("pairing_full_rank"), rep.add("pairing_rank_invariant")
        rows = []
        for k in range(0, m.n + p + 1):
            pm = pairing_matrix(p, m, k)
            full.checked += 1
            rows.append([k, pm.dual_degree, f"{pm.shape[0]}x{pm.shape[1]}", pm.rank, pm.full_rank])
            if not pm.full_rank:
                full.fail((f"degree {k}",), f"rank {pm.rank} on a {pm.shape[0]}x{pm.shape[1]} matrix")
            invariant.checked += 1
            pert = perturbed_pairing_matrix(p, m, k)
            if pert.rank != pm.rank:
                invariant.fail((f"degree {k}",), f"rank {pert.rank} after perturbation, {pm.rank} before")
        rep.tables.append({"title": f"pairing matrices, p = {p}",
                           "headers": ["degree", "dual degree", "shape", "rank", "full rank"], "rows": rows})
    return rep


# --------------------------------------------------------------------------
# potential
# --------------------------------------------------------------------------

@dataclass
class PotentialResult:
    value: Fraction
    terms: List[Tuple[int, Tuple[str, ...], Fraction]]
    dropped: int

    def summary(self) -> str:
        return f"Phi = {self.value} ({len(self.terms)} nonzero terms, {self.dropped} dropped by degree)"


def homogeneous_parts(xs: Sequence[FilteredElement]) -> List[FilteredElement]:
    acc: Dict[Tuple[str, int], FilteredElement] = {}
    for x in xs:
        key = (x.side, x.k)
        acc[key] = acc[key] + x if key in acc else x
    return [acc[key] for key in sorted(acc, key=lambda s: (acc[s].complex_degree, s))]


def potential_phi(xs: Sequence[FilteredElement]) -> PotentialResult:
    """``sum_(l=1)^3 1/(l+1) <m^l(x..x), x>`` expanded over the homogeneous parts of ``x = sum(xs)``.

    Tuples of parts whose degrees cannot pair are counted in ``dropped``.
    """
    parts = [x for x in homogeneous_parts(xs) if not x.is_zero()]
    total = Fraction(0)
    terms = []
    dropped = 0
    if not parts:
        return PotentialResult(total, terms, dropped)
    top = _top(parts[0])
    for l in (1, 2, 3):
        for combo in product(parts, repeat=l + 1):
            if sum(c.complex_degree for c in combo) + 2 - l != top:
                dropped += 1
                continue
            val = pairing(m_op(l, *combo[:l]), combo[l]) / (l + 1)
            if val:
                total += val
                terms.append((l, tuple(str(c) for c in combo), val))
    return PotentialResult(total, terms, dropped)
