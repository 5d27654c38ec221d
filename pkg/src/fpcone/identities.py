"""Generic machinery for checking multilinear identities on graded spaces.

Elements are sparse coordinate vectors ``{basis index: Fraction}`` over a
:class:`Space`.  Operations are multilinear maps memoised on basis tuples.
An :class:`Identity` is a signed sum of composite terms that must vanish;
:func:`check_identity` evaluates it on every basis tuple whose degrees do
not force all terms to vanish (exhaustive mode) or on seeded random tuples
when that count exceeds the budget.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate, product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .report import IdentityResult

Vec = Dict[int, Fraction]

TUPLE_BUDGET = 10 ** 6
DEFAULT_SAMPLES = 10 ** 4
DEFAULT_SEED = 0


class Space:
    """A graded vector space with a fixed ordered basis."""

    def __init__(self, name: str, degrees: Sequence[int], labels: Sequence[str]):
        self.name = name
        self.degrees = list(degrees)
        self.labels = list(labels)
        self.by_degree: Dict[int, List[int]] = {}
        for i, deg in enumerate(self.degrees):
            self.by_degree.setdefault(deg, []).append(i)

    def __len__(self) -> int:
        return len(self.degrees)

    def degree_of(self, v: Vec) -> Optional[int]:
        for i in v:
            return self.degrees[i]
        return None

    def in_range(self, deg: int) -> bool:
        return deg in self.by_degree

    def describe(self, v: Vec) -> str:
        if not v:
            return "0"
        parts = []
        for i in sorted(v):
            c = v[i]
            parts.append(f"{'+' if c > 0 else '-'} {'' if abs(c) == 1 else str(abs(c)) + '*'}[{self.labels[i]}]")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def unit(i: int) -> Vec:
    return {i: Fraction(1)}


def axpy(acc: Vec, c, v: Vec) -> None:
    """``acc += c * v`` in place, dropping zeros."""
    if not c:
        return
    for k, x in v.items():
        y = acc.get(k, 0) + c * x
        if y:
            acc[k] = y
        else:
            acc.pop(k, None)


def scaled(c, v: Vec) -> Vec:
    return {k: c * x for k, x in v.items()} if c else {}


class Op:
    """Multilinear operation ``source^arity -> target`` of fixed degree.

    ``fn`` evaluates on a tuple of basis indices and returns a vector;
    ``support`` receives the tuple of input degrees and returns False when
    the operation vanishes on those degrees by definition.
    """

    def __init__(self, name: str, arity: int, degree: int, source: Space, target: Space,
                 fn: Callable[[Tuple[int, ...]], Vec],
                 support: Optional[Callable[[Tuple[int, ...]], bool]] = None):
        self.name = name
        self.arity = arity
        self.degree = degree
        self.source = source
        self.target = target
        self._fn = fn
        self._support = support
        self._table: Dict[Tuple[int, ...], Vec] = {}

    def supported(self, degs: Tuple[int, ...]) -> bool:
        if not self.target.in_range(sum(degs) + self.degree):
            return False
        return self._support(degs) if self._support else True

    def on_basis(self, idx: Tuple[int, ...]) -> Vec:
        out = self._table.get(idx)
        if out is None:
            degs = tuple(self.source.degrees[i] for i in idx)
            out = self._fn(idx) if self.supported(degs) else {}
            self._table[idx] = out
        return out

    def __call__(self, *vecs: Vec) -> Vec:
        if len(vecs) != self.arity:
            raise TypeError(f"{self.name} takes {self.arity} arguments")
        out: Vec = {}
        if any(not v for v in vecs):
            return out
        for combo in product(*(list(v.items()) for v in vecs)):
            c = Fraction(1)
            for _, x in combo:
                c *= x
            axpy(out, c, self.on_basis(tuple(i for i, _ in combo)))
        return out


@dataclass
class Block:
    """One factor ``op`` applied to a consecutive block of inputs (``op=None`` is the identity)."""

    op: Optional[Op]
    width: int

    @property
    def degree(self) -> int:
        return self.op.degree if self.op else 0


@dataclass
class Term:
    """``sign * outer(block_1 (x) ... (x) block_q)``; ``outer=None`` means a single block, no outer op.

    Koszul signs are applied automatically: block ``i`` contributes
    ``(-1)^(deg(block_i) * total degree of inputs before it)``.  ``perm``
    reorders the inputs first (input ``perm[i]`` goes to position ``i``) and
    ``sign_fn`` multiplies by a sign depending on the original input degrees.
    """

    label: str
    sign: int
    blocks: List[Block]
    outer: Optional[Op] = None
    perm: Optional[Tuple[int, ...]] = None
    sign_fn: Optional[Callable[[Tuple[int, ...]], int]] = None

    @property
    def arity(self) -> int:
        return sum(b.width for b in self.blocks)

    def _block_out_degrees(self, degs: Tuple[int, ...]) -> Optional[Tuple[int, ...]]:
        outs = []
        pos = 0
        for b in self.blocks:
            sub = degs[pos:pos + b.width]
            pos += b.width
            if b.op is None:
                outs.append(sub[0])
            else:
                if not b.op.supported(sub):
                    return None
                outs.append(sum(sub) + b.op.degree)
        return tuple(outs)

    def _permute(self, xs):
        return xs if self.perm is None else tuple(xs[i] for i in self.perm)

    def _sign(self, degs: Tuple[int, ...]) -> int:
        return self.sign if self.sign_fn is None else self.sign * self.sign_fn(degs)

    def supported(self, degs: Tuple[int, ...]) -> bool:
        outs = self._block_out_degrees(self._permute(degs))
        if outs is None:
            return False
        if self.outer is None:
            return True
        return self.outer.supported(outs)

    def evaluate(self, vecs: Sequence[Vec], degs: Tuple[int, ...]) -> Vec:
        sign = self._sign(degs)
        vecs, degs = self._permute(tuple(vecs)), self._permute(degs)
        parts: List[Vec] = []
        pos = 0
        before = 0
        for b in self.blocks:
            sub = vecs[pos:pos + b.width]
            if b.op is None:
                parts.append(sub[0])
            else:
                if b.degree % 2 and before % 2:
                    sign = -sign
                parts.append(b.op(*sub))
            before += sum(degs[pos:pos + b.width])
            pos += b.width
        value = parts[0] if self.outer is None else self.outer(*parts)
        return scaled(sign, value)

    def evaluate_basis(self, idx: Tuple[int, ...], degs: Tuple[int, ...], acc: Vec) -> None:
        """Add this term evaluated on basis inputs ``idx`` into ``acc``."""
        sign = self._sign(degs)
        idx, degs = self._permute(idx), self._permute(degs)
        items = []
        pos = 0
        before = 0
        for b in self.blocks:
            if b.op is None:
                items.append(((idx[pos], 1),))
            else:
                if b.degree % 2 and before % 2:
                    sign = -sign
                val = b.op.on_basis(idx[pos:pos + b.width])
                if not val:
                    return
                items.append(tuple(val.items()))
            before += sum(degs[pos:pos + b.width])
            pos += b.width
        if self.outer is None:
            axpy(acc, sign, dict(items[0]))
            return
        table = self.outer.on_basis
        for combo in product(*items):
            c = sign
            for _, x in combo:
                c *= x
            axpy(acc, c, table(tuple(i for i, _ in combo)))


@dataclass
class Identity:
    """``sum(terms) == 0`` on ``source^arity``; all terms land in ``target``."""

    name: str
    arity: int
    source: Space
    target: Space
    terms: List[Term] = field(default_factory=list)

    def supported(self, degs: Tuple[int, ...]) -> bool:
        return any(t.supported(degs) for t in self.terms)

    def residual(self, vecs: Sequence[Vec]) -> Vec:
        degs = tuple(self.source.degree_of(v) for v in vecs)
        out: Vec = {}
        for t in self.terms:
            if t.supported(degs):
                axpy(out, 1, t.evaluate(vecs, degs))
        return out


def insertion_terms(outer: Dict[int, Op], inner: Dict[int, Op], n: int,
                    sign: Callable[[int, int, int], int]) -> List[Term]:
    """All ``outer^(r+1+t) (1^r (x) inner^s (x) 1^t)`` with ``r+s+t = n``."""
    terms = []
    for s in range(1, n + 1):
        if s not in inner:
            continue
        for r in range(0, n - s + 1):
            t = n - s - r
            l = r + 1 + t
            if l not in outer:
                continue
            blocks = [Block(None, 1) for _ in range(r)] + [Block(inner[s], s)] + [Block(None, 1) for _ in range(t)]
            terms.append(Term(f"{outer[l].name}(1^{r} x {inner[s].name} x 1^{t})", sign(r, s, t), blocks, outer[l]))
    return terms


def _format_inputs(space: Space, vecs: Sequence[Vec]) -> Tuple[str, ...]:
    return tuple(space.describe(v) for v in vecs)


def check_identity(ident: Identity, result: IdentityResult, budget: int = TUPLE_BUDGET,
                   samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
                   force_sampling: bool = False) -> IdentityResult:
    """Evaluate ``ident`` and record counts and counterexamples into ``result``.

    Input degree classes on which every term vanishes by definition are
    counted as pruned.  The rest are enumerated when their tuple count is at
    most ``budget``, otherwise ``samples`` random tuples are drawn.
    """
    src = ident.source
    degrees = sorted(src.by_degree)
    live: List[Tuple[Tuple[int, ...], int]] = []
    for degs in product(degrees, repeat=ident.arity):
        size = 1
        for dg in degs:
            size *= len(src.by_degree[dg])
        if ident.supported(degs):
            live.append((degs, size))
        else:
            result.pruned += size
    total = sum(size for _, size in live)

    def run(vecs: Sequence[Vec]) -> None:
        result.checked += 1
        try:
            res = ident.residual(vecs)
        except (ValueError, ArithmeticError) as exc:
            result.fail(_format_inputs(src, vecs), f"error: {exc}")
            return
        if res:
            result.fail(_format_inputs(src, vecs), ident.target.describe(res))

    if total <= budget and not force_sampling:
        for degs, _ in live:
            terms = [t for t in ident.terms if t.supported(degs)]
            for idx in product(*(src.by_degree[dg] for dg in degs)):
                result.checked += 1
                res: Vec = {}
                try:
                    for t in terms:
                        t.evaluate_basis(idx, degs, res)
                except (ValueError, ArithmeticError) as exc:
                    result.fail(tuple(src.labels[i] for i in idx), f"error: {exc}")
                    continue
                if res:
                    result.fail(tuple(src.labels[i] for i in idx), ident.target.describe(res))
        return result

    result.sampled = True
    if not live:
        # every class vanishes by definition; sample the whole tuple space instead
        live = [(degs, 1) for degs in product(degrees, repeat=ident.arity)]
        for i, (degs, _) in enumerate(live):
            size = 1
            for dg in degs:
                size *= len(src.by_degree[dg])
            live[i] = (degs, size)
    rng = random.Random(seed)
    classes = [dg for dg, _ in live]
    cum = list(accumulate(size for _, size in live))
    for _ in range(samples):
        degs = rng.choices(classes, cum_weights=cum)[0]
        vecs = []
        for dg in degs:
            pool = src.by_degree[dg]
            width = rng.randint(1, min(3, len(pool)))
            vecs.append({i: Fraction(rng.choice((-2, -1, 1, 2))) for i in rng.sample(pool, width)})
        run(vecs)
    return result
