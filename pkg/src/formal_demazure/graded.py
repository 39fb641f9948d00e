"""Filtrations on D_F and its dual, and comparison with the nil Hecke algebra.

The nil Hecke algebra is the additive-law twisted algebra over the same
series ring, with basis x_w = (-1)^{l(w)} X_{I_w}.  Coefficients stay
polynomials, so nothing is lost to truncation below the working order.
"""
from __future__ import annotations

from .duals import DualElement
from .fga import FormalGroupLaw, Series
from .twisted import TwistedAlgebra, TwistedElement


class FiltrationError(ValueError):
    pass


def _sign(w):
    return -1 if w.length % 2 else 1


class NilHecke:
    """Nil Hecke algebra sharing lattice, slice and series ring with a given algebra."""

    def __init__(self, alg: TwistedAlgebra):
        fga = alg.fga
        law = FormalGroupLaw("additive")
        self.fga = fga if fga.law.kind == "additive" else fga.with_law(law)
        if self.fga.ring is not fga.ring:
            raise AssertionError("additive shadow must share the series ring")
        self.alg = TwistedAlgebra(self.fga, alg.slice)
        self.slice = alg.slice
        self.ring = fga.ring

    def element(self, coeffs):
        return NilHeckeElement(self, coeffs)

    def x(self, w, coeff=1):
        return NilHeckeElement(self, {w: self.ring.one() * coeff})

    def scalar(self, p: Series):
        return NilHeckeElement(self, {self.slice.identity: p})

    def to_demazure(self, a: "NilHeckeElement") -> TwistedElement:
        out = self.alg.zero()
        for w, p in a.coeffs.items():
            out = out + self.alg.X_word(w.word).scale(p * _sign(w))
        return out

    def from_demazure(self, z: TwistedElement) -> "NilHeckeElement":
        ok, coeffs = self.alg.membership(z)
        if not ok:
            raise FiltrationError(f"element is not in the nil Hecke algebra: {coeffs}")
        return NilHeckeElement(self, {w: p * _sign(w) for w, p in coeffs.items()})

    def product(self, a, b):
        return self.from_demazure(self.alg.mul(self.to_demazure(a), self.to_demazure(b)))

    def b(self, v, w):
        """delta_v = sum_w b_{v,w} x_w in the nil Hecke basis."""
        _, bX = self.alg.basis_change("X")
        q = bX[v].get(w)
        if q is None:
            return self.ring.zero()
        return q.to_series() * _sign(w)

    def dual_basis(self, w):
        """x*_w as its values on delta_v."""
        return NilDual(self, {v: self.b(v, w) for v in self.slice})


class NilHeckeElement:
    __slots__ = ("nh", "coeffs")

    def __init__(self, nh, coeffs):
        self.nh = nh
        self.coeffs = {w: p for w, p in coeffs.items() if not p.is_zero()}

    def __mul__(self, other):
        return nil_product(self, other)

    def __add__(self, other):
        keys = set(self.coeffs) | set(other.coeffs)
        z = self.nh.ring.zero()
        return NilHeckeElement(self.nh, {w: self.coeffs.get(w, z) + other.coeffs.get(w, z) for w in keys})

    def __neg__(self):
        return NilHeckeElement(self.nh, {w: -p for w, p in self.coeffs.items()})

    def equals(self, other):
        keys = set(self.coeffs) | set(other.coeffs)
        z = self.nh.ring.zero()
        return all(self.coeffs.get(w, z).equals(other.coeffs.get(w, z)) for w in keys)

    __eq__ = equals
    __hash__ = None

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({p!r})x_{w!r}" for w, p in sorted(self.coeffs.items()))


class NilDual:
    """Functional on the nil Hecke algebra given by its values on delta_w."""

    __slots__ = ("nh", "values")

    def __init__(self, nh, values):
        self.nh = nh
        self.values = {w: p for w, p in values.items() if not p.is_zero()}

    def __getitem__(self, w):
        return self.values.get(w, self.nh.ring.zero())

    def __mul__(self, other):
        return NilDual(self.nh, {w: p * other[w] for w, p in self.values.items()})

    def scale(self, c):
        return NilDual(self.nh, {w: p * c for w, p in self.values.items()})

    def equals(self, other):
        return all(self[w].equals(other[w]) for w in self.nh.slice)

    __eq__ = equals
    __hash__ = None

    def __repr__(self):
        return "{" + ", ".join(f"{w!r}: {p!r}" for w, p in sorted(self.values.items())) + "}"


def nil_product(a: NilHeckeElement, b: NilHeckeElement) -> NilHeckeElement:
    return a.nh.product(a, b)


def filtration_degree(alg: TwistedAlgebra, z: TwistedElement):
    """min over w of deg q_w - l(w) for z = sum q_w X_{I_w}; None for z = 0."""
    ok, coeffs = alg.membership(z)
    if not ok:
        raise FiltrationError(f"element is not in D_F: {coeffs}")
    degs = [p.valuation() - w.length for w, p in coeffs.items() if not p.is_zero()]
    return min(degs) if degs else None


def eta(nh: NilHecke, alg: TwistedAlgebra, z: TwistedElement, i) -> NilHeckeElement:
    """q X_{I_w} -> (-1)^{l(w)} (q)_{i + l(w)} x_w."""
    ok, coeffs = alg.membership(z)
    if not ok:
        raise FiltrationError(f"element is not in D_F: {coeffs}")
    out = {}
    for w, p in coeffs.items():
        if p.valuation() < i + w.length:
            raise FiltrationError(f"coefficient at {w!r} has degree below {i + w.length}")
        out[w] = p.homogeneous(i + w.length) * _sign(w)
    return NilHeckeElement(nh, out)


def dual_filtration_degree(f: DualElement):
    """Largest i with every f(delta_w) in I^i (values must lie in S)."""
    degs = []
    for w, q in f.values.items():
        degs.append(q.to_series().valuation())
    return min(degs) if degs else None


def phi(nh: NilHecke, f: DualElement, i) -> NilDual:
    """Pointwise degree-i part of f(delta_w)."""
    out = {}
    for w in nh.slice:
        q = f[w]
        if q.is_zero():
            continue
        s = q.to_series()
        if s.valuation() < i:
            raise FiltrationError(f"value at {w!r} has degree {s.valuation()} < {i}")
        out[w] = s.homogeneous(i)
    return NilDual(nh, out)


def annihilates_filtration(alg: TwistedAlgebra, f: DualElement, i):
    """Whether f maps the spanning set {q X_{I_v} : deg q - l(v) >= 1 - i} into I_F.

    Only spanning elements with constant q can leave I_F, i.e. those with
    l(v) <= i - 1 and q = 1, so it is enough to test f(X_{I_v}) there.
    """
    for v in alg.slice:
        if v.length <= i - 1:
            val = f(alg.X_word(v.word))
            if not val.is_in_S():
                return False
            if not val.to_series().homogeneous(0).is_zero():
                return False
    return True


def annihilates_graded(alg: TwistedAlgebra, f: DualElement, i):
    """Whether f(D^(j)) lies in I^(i+j) for every j, i.e. f(X_{I_v}) in I^(i - l(v)) on the slice.

    Unlike annihilates_filtration this characterizes (D*)^(i) exactly: the
    ideal-only test accepts x_1 X*_e for i = 2 although its values are not in I^2.
    """
    for v in alg.slice:
        need = i - v.length
        if need <= 0:
            continue
        val = f(alg.X_word(v.word))
        if not val.is_in_S():
            return False
        s = val.to_series()
        if not s.is_zero() and s.valuation() < need:
            return False
    return True


def leading_degree_failures(alg: TwistedAlgebra, nh: NilHecke):
    """For all slice pairs: deg b^X_{v,w} >= l(w) and (b^X_{v,w})_{l(w)} = (-1)^{l(w)} b_{v,w}.

    Returns a list of failing (v, w, reason) triples.
    """
    _, bX = alg.basis_change("X")
    bad = []
    for v in alg.slice:
        for w in alg.slice:
            q = bX[v].get(w)
            s = q.to_series() if q is not None else alg.fga.ring.zero()
            if not s.is_zero() and s.valuation() < w.length:
                bad.append((v, w, "degree"))
                continue
            if not s.homogeneous(w.length).equals(nh.b(v, w) * _sign(w)):
                bad.append((v, w, "leading form"))
    return bad


def delta_subset_expansion(alg: TwistedAlgebra, word):
    """delta_v = prod_k (1 - x_{i_k} X_{i_k}) rewritten as sum_I p_I X_I over position subsets.

    Built by prepending letters: delta_j sum p_I X_I = sum s_j(p_I) X_I - sum s_j(p_I) x_j X_{(j, I)}.
    Each p_I should lie in S with deg p_I >= |I|.
    """
    fga = alg.fga
    terms = {(): fga.ring.one()}
    for k in reversed(range(len(word))):
        j = word[k]
        s = alg.datum.reflections[j]
        xj = fga.x_root(alg.datum.simple_root(j))
        new = {}
        for pos, p in terms.items():
            sp = fga.act(s, p)
            new[pos] = new[pos] + sp if pos in new else sp
            new[(k,) + pos] = -(sp * xj)
        terms = new
    return terms


def random_polynomial(ring, rng, max_degree, min_degree=0, terms=3, coeff_range=3):
    """Small random polynomial in the lattice variables with integer coefficients."""
    out = {}
    for _ in range(terms):
        d = rng.randint(min_degree, max_degree)
        exps = [0] * ring.m
        for _ in range(d):
            exps[rng.randrange(ring.m)] += 1
        c = rng.randint(-coeff_range, coeff_range) or 1
        out[tuple(exps)] = out.get(tuple(exps), 0) + c
    return ring.from_terms(out)


def random_member(alg: TwistedAlgebra, rng, max_length, max_degree=2, size=2):
    """sum q_v X_{I_v} over a few random v with l(v) <= max_length; lies in D_F by construction."""
    pool = [w for w in alg.slice if w.length <= max_length]
    coeffs = {}
    for _ in range(size):
        v = rng.choice(pool)
        coeffs[v] = random_polynomial(alg.fga.ring, rng, max_degree)
    return alg.from_basis(coeffs, "X")


def random_dual(alg: TwistedAlgebra, rng, max_length, max_degree=2, size=2):
    from .duals import dual_from_basis
    pool = [w for w in alg.slice if w.length <= max_length]
    coeffs = {}
    for _ in range(size):
        v = rng.choice(pool)
        coeffs[v] = random_polynomial(alg.fga.ring, rng, max_degree)
    return dual_from_basis(alg, coeffs, "X")


__all__ = ["random_polynomial", "random_member", "random_dual", "NilHecke", "NilHeckeElement", "NilDual", "nil_product", "eta", "phi",
           "filtration_degree", "dual_filtration_degree", "annihilates_filtration", "annihilates_graded",
           "leading_degree_failures", "delta_subset_expansion", "FiltrationError"]
