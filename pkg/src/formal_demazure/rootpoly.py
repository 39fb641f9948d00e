"""Formal root polynomials in Q_W[[Lambda]].

The second family of symbols y_lambda lives in the coefficient ring: the
series ring gets extra variables y_1..y_m (for y_{omega_j}) that count
towards the truncation degree but are never touched by the Weyl group, so
they commute with every delta_w.  Truncation is by joint x/y degree.
"""
from __future__ import annotations

import numpy as np

from .fga import FormalGroupAlgebra, FormalGroupLaw, Series
from .localized import LocalizedElement
from .rootdata import RootDatum, WeylSlice
from .twisted import TwistedAlgebra, TwistedElement


class RootPolyContext:
    def __init__(self, datum: RootDatum, law: FormalGroupLaw, order: int, L: int):
        self.datum = datum
        self.law = law
        self.y_names = tuple(f"y{j + 1}" for j in range(datum.m))
        self.fga = FormalGroupAlgebra(datum, law, order, extra_params=self.y_names)
        self.ring = self.fga.ring
        self.slice = WeylSlice(datum, L)
        self.alg = TwistedAlgebra(self.fga, self.slice)
        self._yfga = FormalGroupAlgebra(datum, law, order)
        self._y = {}
        self._ev_images = None
        start = 1 + datum.m + len(law.symbolic)
        self._y_slice = slice(start, start + datum.m)

    def y(self, lam) -> Series:
        """y_lambda as a series in the y-variables only."""
        lam = tuple(int(c) for c in lam)
        res = self._y.get(lam)
        if res is None:
            src = self._yfga.x(lam)
            m = self.datum.m
            d = {}
            for e, c in src.poly.to_dict().items():
                # source exponents (t, x_1..x_m, params) become (t, 0.., params, y_1..y_m)
                d[(e[0],) + (0,) * m + tuple(e[1 + m:]) + tuple(e[1:1 + m])] = c
            res = Series(self.ring, self.ring.ctx.from_dict(d), self.ring.cap)
            self._y[lam] = res
        return res

    def ev_series(self, s: Series) -> Series:
        """y_lambda -> x_{-lambda}, i.e. y_j -> x_{-omega_j}."""
        if self._ev_images is None:
            self._ev_images = [self.fga.x(tuple(-1 if i == j else 0 for i in range(self.datum.m)))
                               for j in range(self.datum.m)]
        ring = self.ring
        groups = {}
        ys = self._y_slice
        for e, c in s.poly.to_dict().items():
            key = tuple(e[ys])
            rest = list(e)
            rest[0] -= sum(key)
            for j in range(ys.start, ys.stop):
                rest[j] = 0
            groups.setdefault(key, {})[tuple(rest)] = c
        out = ring.zero(s.order)
        for ye, d in groups.items():
            term = Series(ring, ring.ctx.from_dict(d), s.order)
            for j, k in enumerate(ye):
                for _ in range(k):
                    term = term * self._ev_images[j]
            out = out + term
        return out

    def ev_loc(self, q: LocalizedElement) -> LocalizedElement:
        return LocalizedElement(self.fga, self.ev_series(q.num), q.den)


class RootPolynomial:
    """R^X or R^Y for a reduced word, held as an element of Q_W with y-coefficients."""

    def __init__(self, ctx: RootPolyContext, word, flavor, element: TwistedElement):
        self.ctx = ctx
        self.word = tuple(word)
        self.flavor = flavor
        self.element = element

    def equals(self, other):
        return self.element.equals(other.element)

    def __repr__(self):
        return f"R^{self.flavor}[{''.join(str(i + 1) for i in self.word)}]"


def root_sequence(ctx: RootPolyContext, word):
    """beta_k = s_{i_1}...s_{i_{k-1}}(alpha_{i_k}) as lattice vectors."""
    datum = ctx.datum
    prefix = np.eye(datum.m, dtype=np.int64)
    out = []
    for i in word:
        out.append(tuple(int(c) for c in prefix @ datum.simple_roots[i]))
        prefix = prefix @ datum.reflections[i]
    return out


def root_polynomial(ctx: RootPolyContext, word, flavor="X") -> RootPolynomial:
    word = tuple(word)
    w = ctx.slice.reduce_word(word)
    if w.length != len(word):
        raise ValueError(f"word {[i + 1 for i in word]} is not reduced")
    alg = ctx.alg
    out = alg.one()
    for i, beta in zip(word, root_sequence(ctx, word)):
        if flavor == "X":
            y = ctx.y(tuple(-c for c in beta))
            factor = alg.one() - alg.X(i).scale(y)
        elif flavor == "Y":
            factor = alg.one() - alg.Y(i).scale(ctx.y(beta))
        else:
            raise ValueError(f"unknown flavor {flavor!r}")
        out = alg.mul(out, factor)
    return RootPolynomial(ctx, word, flavor, out)


def evaluate(p: RootPolynomial) -> TwistedElement:
    ctx = p.ctx
    return TwistedElement(ctx.alg, {w: ctx.ev_loc(q) for w, q in p.element.coeffs.items()})


def K_coefficients(p: RootPolynomial, flavor=None):
    """Expansion coefficients K(I_v, w) of p in the X_{I_v} (or Y_{I_v}) basis."""
    flavor = flavor or p.flavor
    return p.ctx.alg.expand(p.element, flavor)


def theta(ctx: RootPolyContext, w) -> LocalizedElement:
    """prod over inversions alpha of -x_{-alpha}/x_alpha."""
    fga = ctx.fga
    out = LocalizedElement.of(fga, 1)
    for alpha in ctx.slice.inversion_set(w):
        out = out * LocalizedElement(fga, -fga.x_root(-alpha), (alpha,))
    return out


def tau(ctx: RootPolyContext, q: LocalizedElement) -> LocalizedElement:
    """Involution x_lambda -> x_{-lambda}: substitution by the lattice matrix -1."""
    fga = ctx.fga
    num = fga.act(-np.eye(ctx.datum.m, dtype=np.int64), q.num)
    out = LocalizedElement(fga, num, ())
    for alpha in q.den:
        out = out * LocalizedElement.inv_root(fga, -alpha)
    return out


def coefficient_identity_failures(ctx: RootPolyContext, flavor="X", literal=False):
    """Slice pairs (w, v) where the K-coefficient identity for b_{w,v} fails.

    Consistent form: b^X_{w,v} = ev(K^X(I_v, w)) and theta_w b^Y_{w,v} = ev(K^Y(I_v, w)).
    Literal form: b^X_{w,v} = tau(ev(K^X)) and b^Y_{w,v} = tau(theta_w ev(K^Y)).
    """
    _, b = ctx.alg.basis_change(flavor)
    zero = ctx.alg.zero_q()
    bad = []
    for w in ctx.slice:
        K = K_coefficients(root_polynomial(ctx, w.word, flavor))
        th = theta(ctx, w) if flavor == "Y" else None
        for v in ctx.slice:
            ek = ctx.ev_loc(K.get(v, zero))
            bwv = b[w].get(v, zero)
            if literal:
                lhs = tau(ctx, ek if th is None else th * ek)
                ok = lhs.equals(bwv)
            else:
                ok = ek.equals(bwv if th is None else th * bwv)
            if not ok:
                bad.append((w, v))
    return bad


def reduced_words(slice_: WeylSlice, w):
    """All reduced words of w (0-based), by descent recursion."""
    if w.length == 0:
        return [()]
    out = []
    for i in range(slice_.datum.n):
        u = slice_.find(w.action @ slice_.datum.reflections[i])
        if u is not None and u.length == w.length - 1:
            out.extend(word + (i,) for word in reduced_words(slice_, u))
    return sorted(out)
