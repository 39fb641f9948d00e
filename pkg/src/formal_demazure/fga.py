"""Truncated formal group algebra R[[Lambda]]_F.

A series is stored as a FLINT polynomial in ``(t, x_1..x_m, params...)`` where
the exponent of ``t`` always equals the total degree in the lattice variables
``x_j = x_{omega_j}``.  Truncation to degree ``N`` is then a remainder modulo
``t^(N+1)``, done in C.  Each series carries ``order``: its terms are exact
up to and including that total degree.
"""
from __future__ import annotations

from fractions import Fraction

import flint
from flint.utils.flint_exceptions import DomainError
import numpy as np

from .coefficients import Coefficient, CoefficientRing, _fmpq
from .rootdata import Root, RootDatum


class SeriesError(ArithmeticError):
    pass


class PrecisionError(SeriesError):
    """The guaranteed order dropped below what an operation needs."""


class NotDivisible(SeriesError):
    def __init__(self, msg, term=None):
        super().__init__(msg)
        self.term = term


class SeriesRing:
    """Polynomial ring carrying truncated series in ``m`` lattice variables."""

    _cache: dict = {}

    def __new__(cls, m, params=(), cap=8):
        key = (m, tuple(params), cap)
        ring = cls._cache.get(key)
        if ring is not None:
            return ring
        ring = super().__new__(cls)
        ring.m = m
        ring.params = tuple(params)
        ring.cap = cap
        ring.var_names = tuple(f"x{j + 1}" for j in range(m))
        ring.ctx = flint.fmpq_mpoly_ctx.get(("_t",) + ring.var_names + ring.params, "lex")
        ring.coefficients = CoefficientRing(ring.params)
        gens = ring.ctx.gens()
        ring.t = gens[0]
        ring.xs = gens[1:1 + m]
        ring.param_gens = gens[1 + m:]
        ring.nvars = 1 + m + len(ring.params)
        ring._tpow = [ring.t ** k for k in range(cap + 2)]
        cls._cache[key] = ring
        return ring

    def tpow(self, k):
        if k < len(self._tpow):
            return self._tpow[k]
        return self.t ** k

    def series(self, poly, order=None):
        order = self.cap if order is None else min(order, self.cap)
        return Series(self, poly % self.tpow(order + 1), order)

    def zero(self, order=None):
        return Series(self, self.ctx.from_dict({}), self.cap if order is None else order)

    def one(self):
        return self.const(1)

    def const(self, c):
        if isinstance(c, Coefficient):
            if c.ring.params != self.params:
                raise SeriesError(f"coefficient over {c.ring.params} used in ring over {self.params}")
            pad = (0,) * (1 + self.m)
            return Series(self, self.ctx.from_dict({pad + tuple(e): v for e, v in c.value.to_dict().items()}),
                          self.cap)
        return Series(self, self.ctx.from_dict({(0,) * self.nvars: _fmpq(c)}), self.cap)

    def param(self, name):
        return Series(self, self.param_gens[self.params.index(name)], self.cap)

    def var(self, j):
        return Series(self, self.t * self.xs[j], self.cap)

    def linear(self, coords):
        """Exact linear form sum_j coords[j] x_j."""
        poly = self.ctx.from_dict({})
        for j, c in enumerate(coords):
            if c:
                poly += int(c) * self.t * self.xs[j]
        return Series(self, poly, self.cap)

    def monomial(self, exps, coeff=1):
        e = (sum(exps),) + tuple(exps) + (0,) * len(self.params)
        return self.series(self.ctx.from_dict({e: _fmpq(coeff)}))

    def from_terms(self, terms, order=None):
        """Build from ``{x-exponents (+ param exponents): coefficient}``."""
        d = {}
        k = len(self.params)
        for exps, c in terms.items():
            exps = tuple(exps)
            if len(exps) == self.m:
                exps = exps + (0,) * k
            d[(sum(exps[:self.m]),) + exps] = _fmpq(c)
        return self.series(self.ctx.from_dict(d), order)

    def from_json(self, data):
        order = data.get("order", self.cap)
        poly = self.ctx.from_dict({})
        for exps, c in data["terms"]:
            coeff = self.coefficients.from_json(c)
            mono = self.ctx.from_dict({(sum(exps),) + tuple(exps) + (0,) * len(self.params): 1})
            poly += mono * self.const(coeff).poly
        return self.series(poly, order)


class Series:
    """Immutable truncated series; ``order`` is its guaranteed-valid degree."""

    __slots__ = ("ring", "poly", "order")

    def __init__(self, ring, poly, order):
        self.ring = ring
        self.poly = poly
        self.order = int(order)

    # -- basic queries --------------------------------------------------
    def is_zero(self):
        return self.poly.is_zero()

    def valuation(self):
        """Lowest total degree of a nonzero term (order+1 for the zero series)."""
        if self.poly.is_zero():
            return self.order + 1
        return int(self.poly.monomial(len(self.poly) - 1)[0])

    degree = valuation

    def is_constant(self):
        return self.poly.is_zero() or self.poly.monomial(0)[0] == 0

    def constant_term(self) -> Coefficient:
        return self.homogeneous(0).as_coefficient()

    def as_coefficient(self) -> Coefficient:
        cr = self.ring.coefficients
        if self.poly.is_zero():
            return cr.zero()
        if not self.is_constant():
            raise SeriesError("series is not a constant")
        k = len(self.ring.params)
        d = {e[-k:] if k else (): c for e, c in self.poly.to_dict().items()}
        return Coefficient(cr, cr.ctx.from_dict(d))

    def homogeneous(self, d):
        t = self.ring.tpow
        if d < 0 or d > self.order:
            return Series(self.ring, self.ring.ctx.from_dict({}), self.order)
        part = self.poly % t(d + 1)
        if d:
            part -= self.poly % t(d)
        return Series(self.ring, part, self.ring.cap)

    def truncate(self, k):
        k = min(k, self.order)
        return Series(self.ring, self.poly % self.ring.tpow(k + 1), k)

    def with_order(self, k):
        return self.truncate(k)

    def terms(self):
        """``{(x-exponents, param-exponents): Fraction}`` for inspection."""
        m = self.ring.m
        out = {}
        for e, c in self.poly.to_dict().items():
            out[(e[1:1 + m], e[1 + m:])] = Fraction(int(c.p), int(c.q))
        return out

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Series):
            if other.ring is not self.ring:
                raise SeriesError("series from different rings")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        k = min(self.order, other.order)
        p = self.poly + other.poly
        if self.order != other.order:
            p = p % self.ring.tpow(k + 1)
        return Series(self.ring, p, k)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        k = min(self.order, other.order)
        p = self.poly - other.poly
        if self.order != other.order:
            p = p % self.ring.tpow(k + 1)
        return Series(self.ring, p, k)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return Series(self.ring, -self.poly, self.order)

    def __mul__(self, other):
        if not isinstance(other, Series):
            if isinstance(other, Coefficient):
                other = self.ring.const(other)
            else:
                return Series(self.ring, self.poly * _fmpq(other), self.order)
        elif other.ring is not self.ring:
            raise SeriesError("series from different rings")
        k = min(self.ring.cap, self.order + other.valuation(), other.order + self.valuation())
        return Series(self.ring, (self.poly * other.poly) % self.ring.tpow(k + 1), k)

    __rmul__ = __mul__

    def __pow__(self, e):
        out = self.ring.one()
        for _ in range(e):
            out = out * self
        return out

    def equals(self, other):
        """Equality up to the smaller of the two valid orders."""
        other = self._coerce(other)
        k = min(self.order, other.order)
        return ((self.poly - other.poly) % self.ring.tpow(k + 1)).is_zero()

    def __eq__(self, other):
        if not isinstance(other, (Series, int, Fraction, Coefficient)):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def __repr__(self):
        if self.poly.is_zero():
            return f"O({self.order + 1})"
        s = str(self.poly.subs({"_t": 1}))
        return f"{s} + O({self.order + 1})"

    def to_json(self):
        m = self.ring.m
        terms = []
        by_x = {}
        for e, c in self.poly.to_dict().items():
            by_x.setdefault(tuple(e[1:1 + m]), {})[tuple(e[1 + m:])] = c
        cr = self.ring.coefficients
        for xe in sorted(by_x, key=lambda e: (sum(e), [-v for v in e])):
            coeff = Coefficient(cr, cr.ctx.from_dict(by_x[xe]))
            terms.append([[int(v) for v in xe], coeff.to_json()])
        return {"terms": terms, "order": self.order}


def divide_series(a: Series, g: Series) -> Series:
    """Quotient q with q*g = a up to degree a.order, for g with a nonzero linear part.

    Solved one homogeneous degree at a time: q_d = (a - q_{<d} g)_{d+1} / g_1,
    each step an exact division by the linear form g_1 over Q.
    """
    ring = a.ring
    if a.order < 1:
        raise PrecisionError(f"cannot divide a series known only to order {a.order}")
    if a.poly.is_zero():
        return Series(ring, a.poly, a.order - 1)
    lin = g.homogeneous(1).poly
    if lin.is_zero() or not g.homogeneous(0).is_zero():
        raise SeriesError("divisor must have zero constant term and nonzero linear part")
    order = a.order
    tp = ring.tpow
    r = a.poly
    if not (r % tp(1)).is_zero():
        raise NotDivisible("nonzero constant term", term=Series(ring, r % tp(1), 0))
    if len(lin) == 1 and g.poly == lin:
        # divisor is a single monomial c*t*x_j
        q, rem = divmod(r, lin)
        if not rem.is_zero():
            low = Series(ring, rem, order)
            raise NotDivisible("remainder not divisible", term=low.homogeneous(low.valuation()))
        return Series(ring, q, order - 1)
    gp = g.poly
    q = ring.ctx.from_dict({})
    d = 0
    while d < order:
        if r.is_zero():
            break
        low = Series(ring, r, order).valuation()
        if low > order:
            break
        d = low - 1
        rd = r % tp(low + 1)
        try:
            qd = rd / lin
        except DomainError:
            raise NotDivisible("degree-%d part not divisible" % low,
                               term=Series(ring, rd, ring.cap)) from None
        q += qd
        r = (r - qd * gp) % tp(order + 1)
        d += 1
    return Series(ring, q % tp(order), order - 1)


# -- formal group laws ---------------------------------------------------

class FormalGroupLaw:
    """Additive x+y, multiplicative x+y-beta*xy, or hyperbolic (x+y-mu1*xy)/(1+mu2*xy).

    Parameters given as ``None`` (the default) stay symbolic and become
    polynomial variables of the coefficient ring; numbers are substituted.
    """

    KINDS = {"additive": (), "multiplicative": ("beta",), "hyperbolic": ("mu1", "mu2")}

    def __init__(self, kind, **values):
        if kind not in self.KINDS:
            raise ValueError(f"unknown formal group law {kind!r}")
        self.kind = kind
        self.values = {}
        for name in self.KINDS[kind]:
            v = values.pop(name, None)
            self.values[name] = None if v is None else Fraction(v)
        if values:
            raise ValueError(f"unexpected parameters {sorted(values)} for {kind}")

    @property
    def symbolic(self):
        return tuple(name for name, v in self.values.items() if v is None)

    def __repr__(self):
        vals = ", ".join(f"{k}={v if v is not None else k}" for k, v in self.values.items())
        return f"FormalGroupLaw({self.kind}{', ' + vals if vals else ''})"

    def to_json(self):
        return {"kind": self.kind,
                **{k: (str(v) if v is not None else "symbolic") for k, v in self.values.items()}}

    def param(self, ring, name):
        v = self.values[name]
        return ring.param(name) if v is None else ring.const(v)

    def coefficients(self, ring, N):
        """``{(i, j): Series constant}`` with F(x, y) = sum a_ij x^i y^j up to total degree N."""
        one = ring.one()
        if self.kind == "additive":
            return {(1, 0): one, (0, 1): one}
        if self.kind == "multiplicative":
            return {(1, 0): one, (0, 1): one, (1, 1): -self.param(ring, "beta")}
        mu1, mu2 = self.param(ring, "mu1"), self.param(ring, "mu2")
        out = {}
        power = one
        k = 0
        while 2 * k + 1 <= N:
            out[(k + 1, k)] = out.get((k + 1, k), 0) + power
            out[(k, k + 1)] = out.get((k, k + 1), 0) + power
            if 2 * k + 2 <= N:
                out[(k + 1, k + 1)] = out.get((k + 1, k + 1), 0) - mu1 * power
            power = power * (-mu2)
            k += 1
        return out

    def __call__(self, u: Series, v: Series) -> Series:
        ring = u.ring
        coeffs = self.coefficients(ring, ring.cap)
        imax = max(i for i, _ in coeffs)
        jmax = max(j for _, j in coeffs)
        pu = [ring.one(), u]
        for _ in range(imax - 1):
            pu.append(pu[-1] * u)
        pv = [ring.one(), v]
        for _ in range(jmax - 1):
            pv.append(pv[-1] * v)
        out = ring.zero(min(u.order, v.order))
        for (i, j), c in coeffs.items():
            out = out + c * pu[i] * pv[j]
        return out


class FormalGroupAlgebra:
    """R[[Lambda]]_F truncated at total degree ``order``.

    Caches x_lambda, formal-inverse data and monomial images under the
    Weyl action.
    """

    def __init__(self, datum: RootDatum, law: FormalGroupLaw, order: int, extra_params=()):
        if order < 1:
            raise ValueError("truncation order must be >= 1")
        self.datum = datum
        self.law = law
        self.N = order
        self.params = law.symbolic + tuple(extra_params)
        self.ring = SeriesRing(datum.m, self.params, order)
        # univariate helper ring with headroom for one division
        self.ring1 = SeriesRing(1, self.params, order + 2)
        self._x = {}
        self._mult = {}
        self._images = {}
        self._kappa = {}
        self._unit = {}
        x = self.ring1.var(0)
        self.inverse_series = self._formal_inverse(x)

    def same_ring(self, other):
        return other.ring is self.ring

    def with_law(self, law):
        """Algebra for another law over the same lattice and coefficient variables."""
        extra = tuple(p for p in self.params if p not in law.symbolic)
        return FormalGroupAlgebra(self.datum, law, self.N, extra)

    # -- formal group law data ------------------------------------------
    def _formal_inverse(self, x):
        ring = x.ring
        coeffs = {k: v for k, v in self.law.coefficients(ring, ring.cap).items() if k[0] and k[1]}
        y = -x
        for _ in range(ring.cap):
            s = ring.zero()
            for (i, j), c in coeffs.items():
                s = s + c * x ** i * y ** j
            y = -x - s
        return y

    def _multiple(self, n):
        """Univariate [n]_F(x)."""
        if n in self._mult:
            return self._mult[n]
        x = self.ring1.var(0)
        if n == 0:
            res = self.ring1.zero()
        elif n == 1:
            res = x
        elif n < 0:
            res = self._compose1(self.inverse_series, self._multiple(-n))
        else:
            res = self.law(self._multiple(n - 1), x)
        self._mult[n] = res
        return res

    def _compose1(self, f: Series, g: Series) -> Series:
        """f(g) for univariate f and a series g (val >= 1) in any ring."""
        ring = g.ring
        out = ring.zero()
        power = ring.one()
        top = min(f.order, ring.cap)
        coeffs = {}
        for e, c in f.poly.to_dict().items():
            coeffs.setdefault(e[1], {})[e[2:]] = c
        for deg in range(top + 1):
            if deg:
                power = power * g
            if deg in coeffs:
                pad = (0,) * (1 + ring.m)
                cpoly = ring.ctx.from_dict({pad + pe: c for pe, c in coeffs[deg].items()})
                out = out + Series(ring, cpoly, ring.cap) * power
        return out.truncate(min(ring.cap, f.order))

    def _embed1(self, f: Series, j) -> Series:
        """Univariate series in x placed in lattice variable j."""
        m = self.datum.m
        d = {}
        for e, c in f.poly.to_dict().items():
            xe = [0] * m
            xe[j] = e[1]
            d[(e[0],) + tuple(xe) + tuple(e[2:])] = c
        return self.ring.series(self.ring.ctx.from_dict(d), f.order)

    # -- x_lambda --------------------------------------------------------
    def x(self, lam) -> Series:
        lam = tuple(int(c) for c in lam)
        if len(lam) != self.datum.m:
            raise ValueError(f"weight {lam} has wrong rank")
        res = self._x.get(lam)
        if res is None:
            res = None
            for j, c in enumerate(lam):
                if c == 0:
                    continue
                term = self._embed1(self._multiple(c), j)
                res = term if res is None else self.law(res, term)
            if res is None:
                res = self.ring.zero()
            self._x[lam] = res
        return res

    def x_root(self, root: Root) -> Series:
        return self.x(root.lattice)

    def c(self, roots) -> Series:
        out = self.ring.one()
        for r in roots:
            out = out * self.x_root(r)
        return out

    # -- Weyl action -----------------------------------------------------
    def act(self, w, a: Series) -> Series:
        """w(a) for a Weyl element or an integer lattice matrix."""
        mat = w.action if hasattr(w, "action") else np.asarray(w, dtype=np.int64)
        if a.is_constant():
            return a
        key = np.ascontiguousarray(mat).tobytes()
        cache = self._images.get(key)
        if cache is None:
            imgs = [self.x(tuple(int(c) for c in mat[:, j])) for j in range(self.datum.m)]
            cache = {"imgs": imgs, "powers": [[self.ring.one(), g] for g in imgs], "mono": {}}
            self._images[key] = cache
        ring = self.ring
        m = ring.m
        groups = {}
        for e, c in a.poly.to_dict().items():
            xe = e[1:1 + m]
            # t also counts any graded coefficient variables (root-polynomial y's)
            groups.setdefault(xe, {})[(e[0] - sum(xe),) + (0,) * m + e[1 + m:]] = c
        out = ring.ctx.from_dict({})
        for xe, cd in groups.items():
            out += ring.ctx.from_dict(cd) * self._mono_image(cache, xe).poly
        return Series(ring, out % ring.tpow(a.order + 1), a.order)

    def _mono_image(self, cache, xe):
        img = cache["mono"].get(xe)
        if img is not None:
            return img
        out = self.ring.one()
        for j, k in enumerate(xe):
            if k:
                pw = cache["powers"][j]
                while len(pw) <= k:
                    pw.append(pw[-1] * cache["imgs"][j])
                out = out * pw[k]
        cache["mono"][xe] = out
        return out

    def reflection_matrix(self, root: Root):
        return np.eye(self.datum.m, dtype=np.int64) - np.outer(
            np.asarray(root.lattice, dtype=np.int64), np.asarray(root.coroot, dtype=np.int64))

    # -- division, Demazure and push-pull operators ----------------------
    def divide_by_root(self, a: Series, root: Root) -> Series:
        try:
            return divide_series(a, self.x_root(root))
        except NotDivisible as exc:
            raise NotDivisible(f"x_{root} does not divide the series: {exc}", term=exc.term) from None

    def divides(self, root: Root, a: Series) -> bool:
        try:
            self.divide_by_root(a, root)
        except NotDivisible:
            return False
        return True

    def _root(self, alpha) -> Root:
        return self.datum.simple_root(alpha) if isinstance(alpha, (int, np.integer)) else alpha

    def demazure(self, alpha, a: Series) -> Series:
        alpha = self._root(alpha)
        return self.divide_by_root(a - self.act(self.reflection_matrix(alpha), a), alpha)

    def kappa(self, alpha) -> Series:
        """1/x_alpha + 1/x_{-alpha} via two exact divisions of x_alpha + x_{-alpha}."""
        alpha = self._root(alpha)
        res = self._kappa.get(alpha)
        if res is None:
            num = self.x_root(alpha) + self.x_root(-alpha)
            res = self.divide_by_root(self.divide_by_root(num, alpha), -alpha)
            self._kappa[alpha] = res
        return res

    def pushpull(self, alpha, a: Series) -> Series:
        alpha = self._root(alpha)
        return self.kappa(alpha) * a - self.demazure(alpha, a)

    def unit(self, root: Root) -> Series:
        """The unit x_root / x_{-root} of S."""
        res = self._unit.get(root)
        if res is None:
            x = self.ring1.var(0)
            u = divide_series(x, self.inverse_series)  # x / iota(x)
            res = self._compose1(u, self.x_root(root))
            self._unit[root] = res
        return res

    def leading_form(self, a: Series):
        if a.is_zero():
            raise SeriesError("zero series has no leading form")
        d = a.valuation()
        return LeadingForm(d, a.homogeneous(d))


class LeadingForm:
    """Degree and homogeneous part, read as a polynomial in the lattice symbols."""

    __slots__ = ("degree", "form")

    def __init__(self, degree, form):
        self.degree = degree
        self.form = form

    def __eq__(self, other):
        return (isinstance(other, LeadingForm) and self.degree == other.degree
                and self.form.equals(other.form))

    def __repr__(self):
        return f"LeadingForm({self.degree}, {self.form.poly.subs({'_t': 1})})"


# functional API mirroring the operation names

def x_of(fga: FormalGroupAlgebra, lam):
    return fga.x(lam)


def weyl_act(fga: FormalGroupAlgebra, w, a):
    return fga.act(w, a)


def divide_by_root(fga: FormalGroupAlgebra, a, root):
    return fga.divide_by_root(a, root)


def demazure(fga: FormalGroupAlgebra, i, a):
    return fga.demazure(i, a)


def kappa(fga: FormalGroupAlgebra, alpha):
    return fga.kappa(alpha)


def pushpull(fga: FormalGroupAlgebra, i, a):
    return fga.pushpull(i, a)


def leading_form(fga: FormalGroupAlgebra, a):
    return fga.leading_form(a)
