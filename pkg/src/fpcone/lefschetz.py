"""The sl2 package on a model: L, Lambda, H, primitive forms and everything
built from the Lefschetz decomposition (reflection, negative powers of L,
filtration projections, and the splitting ``d = del_+ + L del_-``).

All operators are linear and are evaluated through per-monomial caches, so
each operator is effectively a matrix built once per model and degree.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, NamedTuple, Tuple

from . import linalg
from .exterior import ZERO, Form, LieModel, MultiIndex, d, power, wedge
from .report import IdentityReport

_BUILD_LOCK = threading.Lock()


class DegenerateFormError(ValueError):
    pass


class LefschetzBasisElement(NamedTuple):
    j: int          # power of omega
    s: int          # degree of the primitive factor
    i: int          # index into the primitive basis of P^s
    form: Form      # L^j beta


@dataclass
class LefschetzDecomposition:
    """``source = sum_j L^j components[j]`` with ``components[j]`` primitive of degree ``k - 2j``."""

    degree: int
    components: Dict[int, Form]

    def reassemble(self, lef: "Lefschetz") -> Form:
        out = ZERO
        for j, beta in self.components.items():
            out = out + lef.L_pow(beta, j)
        return out


class FilterVerdict(NamedTuple):
    verdict: bool
    in_image_of_projection: bool   # (i)
    lambda_power_vanishes: bool    # (ii)
    L_power_vanishes: bool         # (iii)
    reflected_L_power_vanishes: bool  # (iv)

    def __bool__(self) -> bool:
        return self.verdict


class Lefschetz:
    """Operator package for one model.  Obtain instances via :func:`lefschetz`."""

    def __init__(self, m: LieModel):
        self.m = m
        self.n = m.n
        self._omega_pow = [power(m.omega, j) for j in range(m.n + 1)]
        if not self._omega_pow[m.n]:
            raise DegenerateFormError(f"omega is degenerate on model {m.name!r}")
        self._poisson = self._build_poisson()
        self._caches: Dict[tuple, Dict[MultiIndex, object]] = {}
        self._primitive: Dict[int, List[Form]] = {}
        self._lbasis: Dict[int, List[LefschetzBasisElement]] = {}
        self._decomp_matrix: Dict[int, linalg.Matrix] = {}

    # -- construction ----------------------------------------------------
    def _build_poisson(self) -> linalg.Matrix:
        dim = self.m.dim
        gram = linalg.zeros(dim, dim)
        for key, c in self.m.omega.terms.items():
            i, j = key
            gram[i - 1][j - 1] += c
            gram[j - 1][i - 1] -= c
        return linalg.inverse(gram)

    def _cached(self, tag: tuple, key: MultiIndex, build: Callable[[MultiIndex], object]):
        cache = self._caches.setdefault(tag, {})
        out = cache.get(key)
        if out is None:
            out = build(key)
            cache[key] = out
        return out

    def _linear(self, tag: tuple, a: Form, build: Callable[[MultiIndex], Form]) -> Form:
        out: Dict[MultiIndex, Fraction] = {}
        for key, c in a.terms.items():
            img = self._cached(tag, key, build)
            for k2, v in img.terms.items():
                out[k2] = out.get(k2, 0) + c * v
        return Form._raw(out)

    # -- L, Lambda, H ----------------------------------------------------
    def omega_power(self, j: int) -> Form:
        if j < 0:
            raise ValueError("negative power of omega")
        return self._omega_pow[j] if j <= self.n else ZERO

    def L(self, a: Form) -> Form:
        return wedge(self.m.omega, a)

    def L_pow(self, a: Form, j: int) -> Form:
        if j == 0:
            return a
        return wedge(self.omega_power(j), a)

    @staticmethod
    def _contract(j: int, key: MultiIndex) -> Tuple[int, MultiIndex]:
        if j not in key:
            return 0, ()
        r = key.index(j)
        return (-1 if r % 2 else 1), key[:r] + key[r + 1:]

    def _lambda_mono(self, key: MultiIndex) -> Form:
        out: Dict[MultiIndex, Fraction] = {}
        half = Fraction(1, 2)
        for a_ in key:
            for b_ in key:
                if a_ == b_:
                    continue
                coeff = self._poisson[a_ - 1][b_ - 1]
                if not coeff:
                    continue
                s1, k1 = self._contract(b_, key)
                s2, k2 = self._contract(a_, k1)
                out[k2] = out.get(k2, 0) + half * coeff * s1 * s2
        return Form._raw(out)

    def Lambda(self, a: Form) -> Form:
        """Contraction with the Poisson bivector, normalised so ``[Lambda, L] = H``."""
        return self._linear(("Lambda",), a, self._lambda_mono)

    def H(self, a: Form) -> Form:
        out = ZERO
        for k in a.degrees():
            out = out + a.part(k) * (self.n - k)
        return out

    # -- primitive forms and the decomposition ---------------------------
    def primitive_basis(self, s: int) -> List[Form]:
        if s in self._primitive:
            return self._primitive[s]
        m = self.m
        if s < 0 or s > m.dim:
            basis: List[Form] = []
        elif s < 2:
            basis = [Form._raw({key: Fraction(1)}) for key in m.basis(s)]
        else:
            src = m.basis(s)
            tgt_idx = m.index(s - 2)
            rows = linalg.zeros(len(tgt_idx), len(src))
            for col, key in enumerate(src):
                for k2, v in self._lambda_mono(key).terms.items():
                    rows[tgt_idx[k2]][col] = v
            basis = [m.from_coords(v, s) for v in linalg.nullspace(rows, len(src))]
        if s > self.n and basis:
            raise AssertionError(f"kernel of Lambda is nonzero in degree {s} > n")
        self._primitive[s] = basis
        return basis

    def lefschetz_basis(self, k: int) -> List[LefschetzBasisElement]:
        if k in self._lbasis:
            return self._lbasis[k]
        out = []
        for j in range(0, k // 2 + 1):
            s = k - 2 * j
            if s > self.n or j > self.n - s:
                continue
            for i, beta in enumerate(self.primitive_basis(s)):
                out.append(LefschetzBasisElement(j, s, i, self.L_pow(beta, j)))
        if len(out) != len(self.m.basis(k)):
            raise AssertionError(f"Lefschetz basis in degree {k} has {len(out)} elements, "
                                 f"expected {len(self.m.basis(k))}")
        self._lbasis[k] = out
        return out

    def _inverse(self, k: int) -> linalg.Matrix:
        if k not in self._decomp_matrix:
            with _BUILD_LOCK:
                if k not in self._decomp_matrix:
                    cols = [self.m.coords(b.form, k) for b in self.lefschetz_basis(k)]
                    self._decomp_matrix[k] = linalg.inverse(linalg.transpose(cols)) if cols else []
        return self._decomp_matrix[k]

    def _coord_column(self, key: MultiIndex) -> List[Tuple[int, Fraction]]:
        col = self._caches.setdefault(("coord",), {}).get(key)
        if col is None:
            k = len(key)
            inv = self._inverse(k)
            c = self.m.index(k)[key]
            col = [(r, inv[r][c]) for r in range(len(inv)) if inv[r][c]]
            self._caches[("coord",)][key] = col
        return col

    def lefschetz_coords(self, a: Form, k: int) -> List[Fraction]:
        """Coordinates of the degree-``k`` part of ``a`` in :meth:`lefschetz_basis`."""
        out = [Fraction(0)] * len(self.m.basis(k))
        for key, c in a.terms.items():
            if len(key) != k:
                continue
            for r, v in self._coord_column(key):
                out[r] += c * v
        return out

    def _decompose_mono(self, key: MultiIndex) -> Dict[int, Form]:
        k = len(key)
        coords = self.lefschetz_coords(Form._raw({key: Fraction(1)}), k)
        comps: Dict[int, Form] = {}
        for c, b in zip(coords, self.lefschetz_basis(k)):
            if c:
                comps[b.j] = comps.get(b.j, ZERO) + self.primitive_basis(b.s)[b.i] * c
        return {j: f for j, f in comps.items() if f}

    def components(self, a: Form) -> Dict[Tuple[int, int], Form]:
        """Lefschetz components of any form, keyed by ``(j, s)``."""
        acc: Dict[Tuple[int, int], Dict[MultiIndex, Fraction]] = {}
        for key, c in a.terms.items():
            comps = self._cached(("decomp",), key, self._decompose_mono)
            s0 = len(key)
            for j, beta in comps.items():
                slot = acc.setdefault((j, s0 - 2 * j), {})
                for k2, v in beta.terms.items():
                    slot[k2] = slot.get(k2, 0) + c * v
        return {js: Form._raw(t) for js, t in acc.items() if any(t.values())}

    def decompose(self, a: Form) -> LefschetzDecomposition:
        if a and a.degree is None:
            raise ValueError("Lefschetz decomposition needs a homogeneous form")
        k = a.degree if a else 0
        comps = {j: beta for (j, _s), beta in self.components(a).items()}
        return LefschetzDecomposition(k, comps)

    def _via_components(self, tag: tuple, a: Form, rule: Callable[[int, int, Form], Form]) -> Form:
        def build(key: MultiIndex) -> Form:
            out = ZERO
            for (j, s), beta in self.components(Form._raw({key: Fraction(1)})).items():
                out = out + rule(j, s, beta)
            return out
        return self._linear(tag, a, build)

    # -- derived operators -----------------------------------------------
    def star_r(self, a: Form) -> Form:
        """Reflection of the Lefschetz pyramid: ``L^j beta_s -> L^(n-j-s) beta_s``."""
        return self._via_components(("star_r",), a, lambda j, s, b: self.L_pow(b, self.n - j - s))

    def L_neg(self, p: int, a: Form) -> Form:
        """Strip ``omega^p`` from each Lefschetz component, dropping ``j < p``."""
        if p < 0:
            raise ValueError("L_neg takes p >= 0")
        if p == 0:
            return a
        return self._via_components(("L_neg", p), a,
                                    lambda j, s, b: self.L_pow(b, j - p) if j >= p else ZERO)

    def pi_p(self, p: int, a: Form) -> Form:
        """Keep Lefschetz components with ``j <= p``."""
        return self._via_components(("pi", p), a,
                                    lambda j, s, b: self.L_pow(b, j) if j <= p else ZERO)

    def pi_p_star(self, p: int, a: Form) -> Form:
        return a - self.L_neg(p + 1, self.L_pow(a, p + 1))

    def _del_mono(self, key: MultiIndex) -> Tuple[Form, Form]:
        plus, minus = ZERO, ZERO
        for (j, s), beta in self.components(Form._raw({key: Fraction(1)})).items():
            dbeta = self.components(d(beta, self.m))
            for (j2, s2), part in dbeta.items():
                if j2 == 0:
                    plus = plus + self.L_pow(part, j)
                elif j2 == 1:
                    minus = minus + self.L_pow(part, j)
                else:
                    raise AssertionError(f"d of primitive {beta} has an L^{j2} component")
        return plus, minus

    def del_pm(self, a: Form) -> Tuple[Form, Form]:
        """``(del_+ a, del_- a)`` with ``d a = del_+ a + L del_- a``."""
        plus: Dict[MultiIndex, Fraction] = {}
        minus: Dict[MultiIndex, Fraction] = {}
        for key, c in a.terms.items():
            p_img, m_img = self._cached(("del",), key, self._del_mono)
            for k2, v in p_img.terms.items():
                plus[k2] = plus.get(k2, 0) + c * v
            for k2, v in m_img.terms.items():
                minus[k2] = minus.get(k2, 0) + c * v
        return Form._raw(plus), Form._raw(minus)

    def del_plus(self, a: Form) -> Form:
        return self.del_pm(a)[0]

    def del_minus(self, a: Form) -> Form:
        return self.del_pm(a)[1]

    # -- filtration ------------------------------------------------------
    def is_p_filtered(self, p: int, a: Form) -> FilterVerdict:
        """Evaluate the four equivalent characterisations of ``p``-filtered forms.

        Disagreement among them means an operator is wrong, so it raises.
        """
        if a and a.degree is None:
            raise ValueError("is_p_filtered needs a homogeneous form")
        k = a.degree if a else 0
        c1 = self.pi_p(p, a) == a
        lam = a
        for _ in range(p + 1):
            lam = self.Lambda(lam)
        c2_lambda = not lam
        c2_lneg = not self.L_neg(p + 1, a)
        if c2_lambda != c2_lneg:
            raise AssertionError(f"Lambda^{p+1} and L^-{p+1} disagree on {a}")
        r = self.n + p + 1 - k
        c3 = not (self.L_pow(a, r) if r > 0 else a)
        c4 = not self.L_pow(self.star_r(a), p + 1)
        verdicts = (c1, c2_lambda, c3, c4)
        if len(set(verdicts)) != 1:
            raise AssertionError(f"filtered-form conditions disagree on {a} (p={p}): {verdicts}")
        return FilterVerdict(c1, *verdicts)

    def filtered_basis(self, p: int, k: int) -> List[LefschetzBasisElement]:
        """Basis of ``F^p Omega^k``: the Lefschetz basis elements with ``j <= p``."""
        if k < 0 or k > self.n + p:
            return []
        return [b for b in self.lefschetz_basis(k) if b.j <= p]


def lefschetz(m: LieModel) -> Lefschetz:
    """The (cached) operator package of ``m``."""
    lef = m._cache.get("lefschetz")
    if lef is None:
        with _BUILD_LOCK:
            lef = m._cache.get("lefschetz")
            if lef is None:
                lef = Lefschetz(m)
                m._cache["lefschetz"] = lef
    return lef


# convenience wrappers taking the model explicitly
def L_op(a: Form, m: LieModel) -> Form:
    return lefschetz(m).L(a)


def lambda_op(a: Form, m: LieModel) -> Form:
    return lefschetz(m).Lambda(a)


def primitive_basis(s: int, m: LieModel) -> List[Form]:
    return lefschetz(m).primitive_basis(s)


def lefschetz_decompose(a: Form, m: LieModel) -> LefschetzDecomposition:
    return lefschetz(m).decompose(a)


def star_r(a: Form, m: LieModel) -> Form:
    return lefschetz(m).star_r(a)


def L_neg(p: int, a: Form, m: LieModel) -> Form:
    return lefschetz(m).L_neg(p, a)


def pi_p(p: int, a: Form, m: LieModel) -> Form:
    return lefschetz(m).pi_p(p, a)


def pi_p_star(p: int, a: Form, m: LieModel) -> Form:
    return lefschetz(m).pi_p_star(p, a)


def del_pm(a: Form, m: LieModel) -> Tuple[Form, Form]:
    return lefschetz(m).del_pm(a)


def is_p_filtered(p: int, a: Form, m: LieModel) -> FilterVerdict:
    return lefschetz(m).is_p_filtered(p, a)


# --------------------------------------------------------------------------
# sl2 suite
# --------------------------------------------------------------------------

def sl2_check(m: LieModel) -> IdentityReport:
    """Operator identities of the Lefschetz package, on every monomial."""
    lef = lefschetz(m)
    n = m.n
    rep = IdentityReport("sl2", m.name, None)
    res = {name: rep.add(name) for name in (
        "lambda_L_commutator", "H_L_commutator", "H_Lambda_commutator", "star_r_involution",
        "star_r_degree", "L_neg_conjugate", "pi_p_complement", "pi_p_star_complement",
        "d_splitting", "del_plus_squared", "del_minus_squared", "del_anticommute",
        "d_L_neg_commutator", "pyramid_dimensions", "filtered_conditions")}

    def check(name: str, label: str, lhs: Form, rhs: Form) -> None:
        r = res[name]
        r.checked += 1
        if lhs != rhs:
            r.fail((label,), str(lhs - rhs))

    for k in range(0, m.dim + 1):
        cnt = sum(len(lef.primitive_basis(k - 2 * j)) for j in range(k // 2 + 1)
                  if k - 2 * j <= n and j <= n - (k - 2 * j))
        res["pyramid_dimensions"].checked += 1
        if cnt != len(m.basis(k)):
            res["pyramid_dimensions"].fail((f"degree {k}",), f"{cnt} != {len(m.basis(k))}")
        for key in m.basis(k):
            a = Form._raw({key: Fraction(1)})
            label = str(a)
            check("lambda_L_commutator", label, lef.Lambda(lef.L(a)) - lef.L(lef.Lambda(a)), a * (n - k))
            check("H_L_commutator", label, lef.H(lef.L(a)) - lef.L(lef.H(a)), -2 * lef.L(a))
            check("H_Lambda_commutator", label, lef.H(lef.Lambda(a)) - lef.Lambda(lef.H(a)), 2 * lef.Lambda(a))
            sa = lef.star_r(a)
            check("star_r_involution", label, lef.star_r(sa), a)
            res["star_r_degree"].checked += 1
            if sa and sa.degree != m.dim - k:
                res["star_r_degree"].fail((label,), f"degree {sa.degree}")
            for p in range(0, n + 1):
                if p >= 1:
                    check("L_neg_conjugate", f"{label}; p={p}", lef.L_neg(p, a),
                          lef.star_r(lef.L_pow(lef.star_r(a), p)))
                check("pi_p_complement", f"{label}; p={p}",
                      lef.pi_p(p, a) + lef.L_pow(lef.L_neg(p + 1, a), p + 1), a)
                check("pi_p_star_complement", f"{label}; p={p}",
                      lef.pi_p_star(p, a) + lef.L_neg(p + 1, lef.L_pow(a, p + 1)), a)
                # [d, L^-(p+1)] in its two regimes
                comm = d(lef.L_neg(p + 1, a), m) - lef.L_neg(p + 1, d(a, m))
                if k <= n + p:
                    rhs = -lef.L_neg(p + 1, d(lef.pi_p(p, a), m))
                else:
                    rhs = lef.pi_p_star(p, d(lef.L_neg(p + 1, a), m))
                check("d_L_neg_commutator", f"{label}; p={p}", comm, rhs)
                res["filtered_conditions"].checked += 1
                try:
                    lef.is_p_filtered(p, a)
                    lef.is_p_filtered(p, lef.pi_p(p, a))
                except AssertionError as exc:
                    res["filtered_conditions"].fail((f"{label}; p={p}",), str(exc))
            dp, dm = lef.del_pm(a)
            check("d_splitting", label, d(a, m), dp + lef.L(dm))
            check("del_plus_squared", label, lef.del_plus(dp), ZERO)
            check("del_minus_squared", label, lef.del_minus(dm), ZERO)
            check("del_anticommute", label, lef.L(lef.del_plus(dm)), -lef.L(lef.del_minus(dp)))
    return rep
