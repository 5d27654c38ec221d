"""Exterior algebra of invariant forms on a finite model.

A :class:`LieModel` is the finite-dimensional cdga of left-invariant forms on
a nilmanifold or torus: generators ``e_1 .. e_2n`` of degree 1, a
differential fixed by its values on generators, and a symplectic 2-form.
Coefficients are :class:`fractions.Fraction` throughout.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

MultiIndex = Tuple[int, ...]
Number = Union[int, Fraction]


@lru_cache(maxsize=None)
def _merge(a: MultiIndex, b: MultiIndex) -> Tuple[int, MultiIndex]:
    """Sign and sorted index of ``e_a ^ e_b``; sign 0 if they share a generator."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    if set(a).intersection(b):
        return 0, ()
    inversions = sum(1 for x in a for y in b if x > y)
    return (-1 if inversions & 1 else 1), tuple(sorted(a + b))


def _sort_sign(indices: Iterable[int]) -> Tuple[int, MultiIndex]:
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, ()
    inversions = sum(1 for i in range(len(idx)) for j in range(i + 1, len(idx)) if idx[i] > idx[j])
    return (-1 if inversions & 1 else 1), tuple(sorted(idx))


class Form:
    """Sparse element of the exterior algebra, ``{MultiIndex: Fraction}``.

    Immutable by convention: every operation returns a new form and the
    ``terms`` mapping must not be mutated.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Optional[Mapping[MultiIndex, Number]] = None):
        clean: Dict[MultiIndex, Fraction] = {}
        if terms:
            for key, value in terms.items():
                key = tuple(key)
                if any(key[i] >= key[i + 1] for i in range(len(key) - 1)):
                    raise ValueError(f"multi-index {key} is not strictly increasing")
                if value:
                    clean[key] = Fraction(value)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[MultiIndex, Fraction]) -> "Form":
        f = cls.__new__(cls)
        f.terms = {k: v for k, v in terms.items() if v}
        f._hash = None
        return f

    @classmethod
    def scalar(cls, c: Number) -> "Form":
        return cls._raw({(): Fraction(c)})

    # -- structure -------------------------------------------------------
    @property
    def degree(self) -> Optional[int]:
        """Common degree of all terms; ``None`` for zero or inhomogeneous forms."""
        degs = {len(k) for k in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def degrees(self) -> List[int]:
        return sorted({len(k) for k in self.terms})

    def part(self, k: int) -> "Form":
        return Form._raw({key: v for key, v in self.terms.items() if len(key) == k})

    def coefficient(self, index: MultiIndex) -> Fraction:
        return self.terms.get(tuple(index), Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def max_label(self) -> int:
        return max((max(k) for k in self.terms if k), default=0)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other: "Form") -> "Form":
        if not isinstance(other, Form):
            if other == 0:
                return self
            return NotImplemented
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Form._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Form":
        return Form._raw({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "Form") -> "Form":
        if not isinstance(other, Form):
            if other == 0:
                return self
            return NotImplemented
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) - v
        return Form._raw(out)

    def __mul__(self, c: Number) -> "Form":
        if isinstance(c, Form):
            return NotImplemented
        if not c:
            return ZERO
        c = Fraction(c)
        return Form._raw({k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, c: Number) -> "Form":
        return self * (Fraction(1) / Fraction(c))

    def __xor__(self, other: "Form") -> "Form":
        return wedge(self, other)

    def __eq__(self, other) -> bool:
        if isinstance(other, Form):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Form.scalar(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"Form({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms, key=lambda k: (len(k), k)):
            c = self.terms[key]
            mono = "e" + "".join(map(str, key)) if key else ""
            if any(i >= 10 for i in key):
                mono = "e(" + ",".join(map(str, key)) + ")"
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        text = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


ZERO = Form()


def e(*indices: int) -> Form:
    """Monomial ``e_{i1} ^ ... ^ e_{ik}``, with the sign of sorting the labels."""
    sign, key = _sort_sign(indices)
    if not sign:
        return ZERO
    return Form._raw({key: Fraction(sign)})


ONE = e()


def wedge(a: Form, b: Form) -> Form:
    """Exterior product with Koszul signs."""
    if not a.terms or not b.terms:
        return ZERO
    out: Dict[MultiIndex, Fraction] = {}
    for ka, va in a.terms.items():
        for kb, vb in b.terms.items():
            sign, key = _merge(ka, kb)
            if sign:
                out[key] = out.get(key, 0) + (va * vb if sign > 0 else -(va * vb))
    return Form._raw(out)


def wedge_all(*forms: Form) -> Form:
    out = ONE
    for f in forms:
        out = wedge(out, f)
    return out


def power(a: Form, k: int) -> Form:
    out = ONE
    for _ in range(k):
        out = wedge(out, a)
    return out


# --------------------------------------------------------------------------
# models
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LieModel:
    """Invariant-form model of a symplectic nilmanifold of dimension ``2n``.

    ``structure[i - 1]`` is ``d e_i``.  Use :func:`make_model` to build one
    from a sparse mapping.
    """

    name: str
    n: int
    structure: Tuple[Form, ...]
    omega: Form
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def dim(self) -> int:
        return 2 * self.n

    def basis(self, k: int) -> List[MultiIndex]:
        """Monomials of degree ``k`` in lexicographic order."""
        key = ("basis", k)
        if key not in self._cache:
            self._cache[key] = list(combinations(range(1, self.dim + 1), k)) if 0 <= k <= self.dim else []
        return self._cache[key]

    def index(self, k: int) -> Dict[MultiIndex, int]:
        key = ("index", k)
        if key not in self._cache:
            self._cache[key] = {m: i for i, m in enumerate(self.basis(k))}
        return self._cache[key]

    def top(self) -> MultiIndex:
        return tuple(range(1, self.dim + 1))

    def with_omega(self, omega: Form, name: Optional[str] = None) -> "LieModel":
        return LieModel(name or self.name, self.n, self.structure, omega)

    def check_labels(self, a: Form) -> None:
        if a.max_label() > self.dim:
            raise ValueError(f"form {a} uses a generator outside 1..{self.dim} of model {self.name!r}")

    def coords(self, a: Form, k: int) -> List[Fraction]:
        """Coordinate vector of the degree-``k`` part of ``a`` in the monomial basis."""
        idx = self.index(k)
        vec = [Fraction(0)] * len(idx)
        for key, v in a.terms.items():
            if len(key) == k:
                vec[idx[key]] = v
        return vec

    def from_coords(self, vec: Iterable[Fraction], k: int) -> Form:
        return Form._raw({m: c for m, c in zip(self.basis(k), vec) if c})


def make_model(name: str, dim: int, d: Mapping[int, Form], omega: Form) -> LieModel:
    if dim <= 0 or dim % 2:
        raise ValueError(f"model dimension must be a positive even integer, got {dim}")
    for i in d:
        if not 1 <= i <= dim:
            raise ValueError(f"structure constant for generator {i} outside 1..{dim}")
    structure = tuple(d.get(i, ZERO) for i in range(1, dim + 1))
    return LieModel(name, dim // 2, structure, omega)


def _d_monomial(m: LieModel, key: MultiIndex) -> Form:
    cache = m._cache.setdefault("d", {})
    out = cache.get(key)
    if out is None:
        out = ZERO
        for r, i in enumerate(key):
            de = m.structure[i - 1]
            if not de:
                continue
            term = wedge(wedge(Form._raw({key[:r]: Fraction(1)}), de), Form._raw({key[r + 1:]: Fraction(1)}))
            out = out + (term if r % 2 == 0 else -term)
        cache[key] = out
    return out


def d(a: Form, m: LieModel) -> Form:
    """De Rham differential, extended from generators as a degree +1 derivation."""
    m.check_labels(a)
    out: Dict[MultiIndex, Fraction] = {}
    for key, c in a.terms.items():
        for k2, v in _d_monomial(m, key).terms.items():
            out[k2] = out.get(k2, 0) + c * v
    return Form._raw(out)


def integrate(a: Form, m: LieModel) -> Fraction:
    """Coefficient of ``e_{1..2n}``; the model has unit covolume."""
    return a.coefficient(m.top())


# --------------------------------------------------------------------------
# validation
# --------------------------------------------------------------------------

@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    model: str
    checks: List[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]


def validate(m: LieModel) -> ValidationReport:
    """Check ``d^2 = 0``, ``d omega = 0``, ``omega^n != 0`` and unimodularity.

    Never raises on a bad model; every problem becomes a failed check.
    """
    checks: List[Check] = []
    bad = []
    for i, de in enumerate(m.structure, start=1):
        if de and (de.degree != 2 or de.max_label() > m.dim):
            bad.append(f"d e{i} = {de} is not a 2-form on generators 1..{m.dim}")
    if m.omega.degree != 2 or m.omega.max_label() > m.dim:
        bad.append(f"omega = {m.omega} is not a 2-form on generators 1..{m.dim}")
    checks.append(Check("well_formed", not bad, "; ".join(bad)))
    if bad:
        return ValidationReport(m.name, checks)

    dd_fail = []
    for i in range(1, m.dim + 1):
        dd = d(m.structure[i - 1], m)
        if dd:
            dd_fail.append(f"d(d e{i}) = {dd}")
    checks.append(Check("d_squared", not dd_fail, "; ".join(dd_fail)))

    d_omega = d(m.omega, m)
    checks.append(Check("d_omega", not d_omega, f"d omega = {d_omega}" if d_omega else ""))

    top = power(m.omega, m.n)
    checks.append(Check("nondegenerate", bool(top), "" if top else f"omega^{m.n} = 0"))

    stokes_fail = []
    for key in m.basis(m.dim - 1):
        val = integrate(d(Form._raw({key: Fraction(1)}), m), m)
        if val:
            stokes_fail.append(f"integral of d e{''.join(map(str, key))} = {val}")
    checks.append(Check("unimodular", not stokes_fail, "; ".join(stokes_fail)))
    return ValidationReport(m.name, checks)
