"""Brute-force reference implementation used only by the tests.

Nothing here imports the package's linear algebra or Lefschetz code.  Forms
are plain dicts ``{sorted index tuple: Fraction}``; primitive forms are found
as the kernel of ``L^(n-s+1)`` (not through Lambda), and every operator is
rebuilt from its definition on the Lefschetz decomposition by Gauss-Jordan
elimination over Fraction.
"""
from fractions import Fraction
from itertools import combinations

PLAIN, BARRED = "plain", "barred"


def clean(f):
    return {k: v for k, v in f.items() if v}


def add(*fs):
    out = {}
    for f in fs:
        for k, v in f.items():
            out[k] = out.get(k, 0) + v
    return clean(out)


def scale(c, f):
    return clean({k: c * v for k, v in f.items()})


def inversions(seq):
    return sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])


def wedge(f, g):
    out = {}
    for a, x in f.items():
        for b, y in g.items():
            if set(a) & set(b):
                continue
            sign = -1 if inversions(a + b) % 2 else 1
            key = tuple(sorted(a + b))
            out[key] = out.get(key, 0) + sign * x * y
    return clean(out)


def degree_of(f):
    degs = {len(k) for k in f}
    assert len(degs) <= 1, f"inhomogeneous {f}"
    return degs.pop() if degs else None


# -- exact linear algebra ----------------------------------------------------

def rref(rows, ncols):
    m = [list(map(Fraction, r)) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows, ncols):
    return len(rref(rows, ncols)[1]) if rows else 0


def kernel(rows, ncols):
    """Basis of ``{x : A x = 0}`` for ``A`` given by rows."""
    red, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        out.append(v)
    return out


def solve(columns, b):
    """Unique ``x`` with ``sum x_i columns[i] = b``; raises if not solvable."""
    n = len(columns)
    rows = [[col[i] for col in columns] + [b[i]] for i in range(len(b))]
    red, pivots = rref(rows, n + 1)
    assert n not in pivots, "inconsistent system"
    assert len(pivots) == n, "system not uniquely solvable"
    return [row[n] for row in red]


# -- the model -----------------------------------------------------------------

class Oracle:
    def __init__(self, dim, structure, omega):
        """``structure``: {i: {(a, b): c}} for d e_i; ``omega``: {(a, b): c}."""
        self.dim = dim
        self.n = dim // 2
        self.structure = {i: dict(f) for i, f in structure.items()}
        self.omega = clean(dict(omega))
        self._basis = {}
        self._prims = {}
        self._lef = {}

    @classmethod
    def of(cls, model):
        return cls(model.dim, {i: dict(f.terms) for i, f in enumerate(model.structure, 1)}, dict(model.omega.terms))

    def monomials(self, k):
        return list(combinations(range(1, self.dim + 1), k)) if 0 <= k <= self.dim else []

    def vec(self, f, k):
        mons = self.monomials(k)
        return [Fraction(f.get(m, 0)) for m in mons]

    def form(self, v, k):
        return clean(dict(zip(self.monomials(k), v)))

    def d(self, f):
        out = {}
        for key, c in f.items():
            for r, i in enumerate(key):
                de = self.structure.get(i, {})
                if not de:
                    continue
                term = wedge(wedge({key[:r]: Fraction(1)}, de), {key[r + 1:]: Fraction(1)})
                out = add(out, scale(c * (-1) ** r, term))
        return out

    def L(self, f, j=1):
        for _ in range(j):
            f = wedge(self.omega, f)
        return f

    def integrate(self, f):
        return f.get(tuple(range(1, self.dim + 1)), Fraction(0))

    # -- Lefschetz decomposition from kernels of powers of L ----------------
    def primitives(self, s):
        if s not in self._prims:
            if not 0 <= s <= self.n:
                self._prims[s] = []
            else:
                power = self.n - s + 1
                cols = [self.vec(self.L({m: Fraction(1)}, power), 2 * self.n - s + 2) for m in self.monomials(s)]
                rows = [[col[i] for col in cols] for i in range(len(cols[0]))] if cols and cols[0] else []
                ker = kernel(rows, len(cols)) if rows else [[Fraction(int(i == j)) for i in range(len(cols))]
                                                            for j in range(len(cols))]
                self._prims[s] = [self.form(v, s) for v in ker]
        return self._prims[s]

    def lefschetz_basis(self, k):
        if k not in self._lef:
            basis = []
            for j in range(0, k // 2 + 1):
                s = k - 2 * j
                if s > self.n or j > self.n - s:
                    continue
                for b in self.primitives(s):
                    basis.append((j, s, b, self.L(b, j)))
            assert len(basis) == len(self.monomials(k)), "Lefschetz basis has the wrong size"
            self._lef[k] = basis
        return self._lef[k]

    def components(self, f):
        """{(j, s): beta} with f = sum L^j beta, each beta primitive of degree s."""
        k = degree_of(f)
        if k is None:
            return {}
        basis = self.lefschetz_basis(k)
        x = solve([self.vec(lb, k) for _, _, _, lb in basis], self.vec(f, k))
        out = {}
        for c, (j, s, b, _) in zip(x, basis):
            if c:
                out[(j, s)] = add(out.get((j, s), {}), scale(c, b))
        return {key: v for key, v in out.items() if v}

    def rebuild(self, comps, rule):
        out = {}
        for (j, s), b in comps.items():
            j2 = rule(j, s)
            if j2 is not None and 0 <= j2:
                out = add(out, self.L(b, j2))
        return out

    def star_r(self, f):
        return self.rebuild(self.components(f), lambda j, s: self.n - j - s)

    def L_neg(self, q, f):
        return self.rebuild(self.components(f), lambda j, s: j - q if j >= q else None)

    def pi(self, p, f):
        return self.rebuild(self.components(f), lambda j, s: j if j <= p else None)

    def pi_star(self, p, f):
        return add(f, scale(-1, self.L_neg(p + 1, self.L(f, p + 1))))

    def is_filtered(self, p, f):
        return all(j <= p for j, _ in self.components(f))

    def del_pm(self, f):
        plus, minus = {}, {}
        for (j, s), b in self.components(f).items():
            for (j2, s2), c in self.components(self.d(b)).items():
                assert (j2, s2) in ((0, s + 1), (1, s - 1)), "d of a primitive left the two allowed slots"
                if j2 == 0:
                    plus = add(plus, self.L(c, j))
                else:
                    minus = add(minus, self.L(c, j))
        return plus, minus

    # -- F_p operations on (side, k, form) ---------------------------------
    def cdeg(self, p, x):
        side, k, _ = x
        return k if side == PLAIN else 2 * self.n + 2 * p + 1 - k

    def place(self, p, cdeg, f):
        np_ = self.n + p
        if cdeg <= np_:
            return (PLAIN, cdeg, f)
        return (BARRED, 2 * self.n + 2 * p + 1 - cdeg, f)

    def m1(self, p, x):
        side, k, f = x
        if side == PLAIN and k < self.n + p:
            return (PLAIN, k + 1, self.pi(p, self.d(f)))
        if side == PLAIN:
            plus_of = self.del_pm(self.del_pm(f)[1])[0]
            return (BARRED, k, scale(-1, plus_of))
        return (BARRED, k - 1, scale(-1, self.star_r(self.d(self.star_r(f)))))

    def m2(self, p, x, y):
        (sx, kx, fx), (sy, ky, fy) = x, y
        top = 2 * self.n + 2 * p + 1
        cdeg = self.cdeg(p, x) + self.cdeg(p, y)
        q = p + 1
        if sx == PLAIN and sy == PLAIN:
            w = wedge(fx, fy)
            if cdeg <= self.n + p:
                return (PLAIN, cdeg, self.pi(p, w))
            dl = add(scale(-1, self.d(self.L_neg(q, w))),
                     wedge(self.L_neg(q, self.d(fx)), fy),
                     scale((-1) ** kx, wedge(fx, self.L_neg(q, self.d(fy)))))
            return (BARRED, top - cdeg, self.pi(p, self.star_r(dl)))
        if cdeg > top:
            return self.place(p, cdeg, {})
        if sx == PLAIN:
            return self.place(p, cdeg, scale((-1) ** kx, self.star_r(wedge(fx, self.star_r(fy)))))
        if sy == PLAIN:
            return self.place(p, cdeg, self.star_r(wedge(self.star_r(fx), fy)))
        return self.place(p, cdeg, {})

    def m3(self, p, x, y, z):
        cdeg = sum(self.cdeg(p, a) for a in (x, y, z)) - 1
        if any(a[0] != PLAIN for a in (x, y, z)) or x[1] + y[1] + z[1] < self.n + p + 2:
            return self.place(p, cdeg, {})
        q = p + 1
        bracket = add(wedge(x[2], self.L_neg(q, wedge(y[2], z[2]))),
                      scale(-1, wedge(self.L_neg(q, wedge(x[2], y[2])), z[2])))
        return self.place(p, cdeg, self.pi(p, self.star_r(bracket)))

    def pairing(self, p, x, y):
        (sx, kx, fx), (sy, ky, fy) = x, y
        if sx == sy or self.cdeg(p, x) + self.cdeg(p, y) != 2 * self.n + 2 * p + 1:
            return Fraction(0)
        if sx == PLAIN:
            return (-1) ** kx * self.integrate(wedge(fx, self.star_r(fy)))
        return self.integrate(wedge(self.star_r(fx), fy))

    def filtered_basis(self, p):
        """Basis elements (side, k, form) of F_p, from L^j beta with j <= p."""
        out = []
        for side in (PLAIN, BARRED):
            for k in range(0, self.n + p + 1):
                for j, s, b, lb in self.lefschetz_basis(k):
                    if j <= p:
                        out.append((side, k, lb))
        return out

    # -- cohomology by brute-force ranks -----------------------------------
    def derham_betti(self):
        ranks = {}
        for k in range(0, self.dim + 1):
            cols = [self.vec(self.d({m: Fraction(1)}), k + 1) for m in self.monomials(k)]
            ranks[k] = rank([[c[i] for c in cols] for i in range(len(cols[0]))], len(cols)) if cols and cols[0] else 0
        return [len(self.monomials(k)) - ranks[k] - ranks.get(k - 1, 0) for k in range(self.dim + 1)]

    def closed_forms(self, k):
        mons = self.monomials(k)
        if k + 1 > self.dim:
            return [self.form([Fraction(int(i == j)) for i in range(len(mons))], k) for j in range(len(mons))]
        cols = [self.vec(self.d({m: Fraction(1)}), k + 1) for m in mons]
        rows = [[c[i] for c in cols] for i in range(len(cols[0]))]
        return [self.form(v, k) for v in kernel(rows, len(mons))]

    def exact_forms(self, k):
        if k == 0:
            return []
        return [self.d({m: Fraction(1)}) for m in self.monomials(k - 1)]

    def omega_multiplication_rank(self, src, q):
        """rank of [w^q]: H^src -> H^(src+2q), as dim(w^q Z + B) - dim B."""
        tgt = src + 2 * q
        if src < 0 or tgt > self.dim:
            return 0
        B = [self.vec(b, tgt) for b in self.exact_forms(tgt)]
        WZ = [self.vec(self.L(z, q), tgt) for z in self.closed_forms(src)]
        width = len(self.monomials(tgt))
        return rank(B + WZ, width) - rank(B, width)

    def gysin_dims(self, p):
        """dim coker[w^(p+1)] at j + dim ker[w^(p+1)] at j-2p-1, for j = 0..2n+2p+1."""
        h = self.derham_betti()
        q = p + 1
        out = []
        for j in range(0, self.dim + 2 * p + 2):
            hj = h[j] if j <= self.dim else 0
            coker = hj - self.omega_multiplication_rank(j - 2 * q, q)
            src = j - 2 * p - 1
            hs = h[src] if 0 <= src <= self.dim else 0
            ker = hs - self.omega_multiplication_rank(src, q)
            out.append(coker + ker)
        return out

    def cone_dims(self, p):
        """Cohomology of eta + theta xi with d(eta, xi) = (d eta + w^(p+1) xi, -d xi), by ranks."""
        shift = 2 * p + 1
        top = self.dim + shift

        def basis(k):
            return [("eta", m) for m in self.monomials(k)] + [("xi", m) for m in self.monomials(k - shift)]

        def dmat(k):
            src, tgt = basis(k), basis(k + 1)
            index = {b: i for i, b in enumerate(tgt)}
            cols = []
            for slot, m in src:
                col = [Fraction(0)] * len(tgt)
                mono = {m: Fraction(1)}
                if slot == "eta":
                    parts = [("eta", self.d(mono))]
                else:
                    parts = [("eta", self.L(mono, p + 1)), ("xi", scale(-1, self.d(mono)))]
                for s2, f in parts:
                    for key, c in f.items():
                        col[index[(s2, key)]] += c
                cols.append(col)
            if not cols or not tgt:
                return 0
            return rank([[c[i] for c in cols] for i in range(len(tgt))], len(cols))

        ranks = {k: dmat(k) for k in range(0, top + 1)}
        return [len(basis(k)) - ranks[k] - ranks.get(k - 1, 0) for k in range(top + 1)]

    def filtered_dims(self, p):
        basis = self.filtered_basis(p)
        top = 2 * self.n + 2 * p + 1

        def in_degree(c):
            return [b for b in basis if self.cdeg(p, b) == c]

        def coords(x, c):
            """Coordinates of x in the basis of complex degree c (same side and k)."""
            elems = in_degree(c)
            if not elems:
                return []
            side, k, f = x
            cols = [self.vec(b[2], k) for b in elems]
            return solve(cols, self.vec(f, k))

        ranks = {}
        for c in range(0, top + 1):
            src = in_degree(c)
            if not src or not in_degree(c + 1):
                ranks[c] = 0
                continue
            cols = [coords(self.m1(p, b), c + 1) for b in src]
            rows = [[col[i] for col in cols] for i in range(len(cols[0]))]
            ranks[c] = rank(rows, len(cols))
        return [len(in_degree(c)) - ranks[c] - ranks.get(c - 1, 0) for c in range(top + 1)]
