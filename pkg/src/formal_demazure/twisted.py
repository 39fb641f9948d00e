"""Twisted group algebra Q_W and the formal affine Demazure algebra inside it.

Elements are finite sums q_w delta_w over a length-bounded Weyl slice with
coefficients in the localization Q.  The product is
(q delta_w)(q' delta_v) = q w(q') delta_{wv}.
"""
from __future__ import annotations

from collections import defaultdict

from .fga import FormalGroupAlgebra, Series
from .localized import LocalizedElement, loc_sum
from .rootdata import OutOfSlice, Root, WeylSlice


class TwistedElement:
    __slots__ = ("alg", "coeffs")

    def __init__(self, alg, coeffs):
        self.alg = alg
        self.coeffs = {w: q for w, q in coeffs.items() if not q.is_zero()}

    def __getitem__(self, w):
        q = self.coeffs.get(w)
        return q if q is not None else self.alg.zero_q()

    def support(self):
        return sorted(self.coeffs)

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        return self.alg.add(self, other)

    def __sub__(self, other):
        return self.alg.add(self, -other)

    def __neg__(self):
        return TwistedElement(self.alg, {w: -q for w, q in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, TwistedElement):
            return self.alg.mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, q):
        """Left multiplication by a scalar q in Q (or S)."""
        q = self.alg.q(q)
        return TwistedElement(self.alg, {w: q * c for w, c in self.coeffs.items()})

    def equals(self, other):
        return (self - other).is_zero()

    def __eq__(self, other):
        if not isinstance(other, TwistedElement):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"[{q!r}]d_{w!r}" for w, q in sorted(self.coeffs.items()))

    def to_json(self):
        return {"support": [{"w": [i + 1 for i in w.word], "coeff": q.to_json()}
                            for w, q in sorted(self.coeffs.items())]}


class TensorElement:
    """Element of Q_W (x) Q_W with every scalar moved to the left factor."""

    __slots__ = ("alg", "coeffs")

    def __init__(self, alg, coeffs):
        self.alg = alg
        self.coeffs = {k: q for k, q in coeffs.items() if not q.is_zero()}

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        parts = defaultdict(list)
        for k, q in list(self.coeffs.items()) + list(other.coeffs.items()):
            parts[k].append(q)
        return TensorElement(self.alg, {k: loc_sum(v) for k, v in parts.items()})

    def __neg__(self):
        return TensorElement(self.alg, {k: -q for k, q in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """(q d_a (x) d_b)(q' d_c (x) d_d) = q a(q') d_ac (x) d_bd.

        Only meaningful when the left operand lies in the image of the coproduct.
        """
        sl = self.alg.slice
        parts = defaultdict(list)
        for (a, b), q in self.coeffs.items():
            for (c, d), q2 in other.coeffs.items():
                parts[(sl.mul(a, c), sl.mul(b, d))].append(q * self.alg.act_q(a, q2))
        return TensorElement(self.alg, {k: loc_sum(v) for k, v in parts.items()})

    def equals(self, other):
        return (self - other).is_zero()

    __eq__ = equals
    __hash__ = None

    def __repr__(self):
        return " + ".join(f"[{q!r}]d_{a!r}(x)d_{b!r}" for (a, b), q in sorted(self.coeffs.items()))


class TwistedAlgebra:
    """Q_W over a Weyl slice, with cached X/Y products and basis-change matrices."""

    def __init__(self, fga: FormalGroupAlgebra, slice_: WeylSlice):
        if fga.datum is not slice_.datum:
            raise ValueError("algebra and slice use different root data")
        self.fga = fga
        self.slice = slice_
        self.datum = fga.datum
        self._words = {}
        self._change = {}
        self._roots = None

    # -- scalars ---------------------------------------------------------------
    def q(self, value):
        return LocalizedElement.of(self.fga, value)

    def zero_q(self):
        return self.q(0)

    def act_q(self, w, q):
        return q.act(w)

    # -- basic elements ----------------------------------------------------------
    def element(self, coeffs):
        return TwistedElement(self, {w: self.q(c) for w, c in coeffs.items()})

    def zero(self):
        return TwistedElement(self, {})

    def one(self):
        return self.delta(self.slice.identity)

    def delta(self, w):
        return TwistedElement(self, {w: self.q(1)})

    def scalar(self, q):
        return TwistedElement(self, {self.slice.identity: self.q(q)})

    def _reflection(self, alpha: Root):
        s = self.slice.reflection(alpha)
        if s is None:
            raise OutOfSlice(f"reflection s_{alpha} is outside the slice")
        return s

    def _root(self, alpha):
        return self.datum.simple_root(alpha) if isinstance(alpha, int) else alpha

    def X(self, alpha):
        """X_alpha = (1/x_alpha)(1 - delta_alpha)."""
        alpha = self._root(alpha)
        s = self._reflection(alpha)
        inv = LocalizedElement.inv_root(self.fga, alpha)
        return TwistedElement(self, {self.slice.identity: inv, s: -inv})

    def Y(self, alpha):
        """Y_alpha = kappa_alpha - X_alpha = 1/x_{-alpha} + (1/x_alpha) delta_alpha."""
        alpha = self._root(alpha)
        s = self._reflection(alpha)
        return TwistedElement(self, {self.slice.identity: LocalizedElement.inv_root(self.fga, -alpha),
                                     s: LocalizedElement.inv_root(self.fga, alpha)})

    def root_from_simple(self, coords):
        """The real root with the given simple-root coordinates, found in the slice orbit."""
        coords = tuple(int(c) for c in coords)
        if self._roots is None:
            self._roots = {}
            for w in self.slice:
                for i in range(self.datum.n):
                    r = self.slice.root_image(w, self.datum.simple_root(i))
                    self._roots.setdefault(r.simple, r)
                    self._roots.setdefault((-r).simple, -r)
        r = self._roots.get(coords)
        if r is None:
            raise ValueError(f"{list(coords)} is not a real root reachable in the slice")
        return r

    def loc_from_json(self, data) -> LocalizedElement:
        num = self.fga.ring.from_json(data["num"])
        den = [self.root_from_simple(c) for c in data.get("den", [])]
        out = LocalizedElement(self.fga, num, ())
        for r in den:
            out = out * LocalizedElement.inv_root(self.fga, r)
        return out

    def from_json(self, data) -> TwistedElement:
        coeffs = {}
        for item in data["support"]:
            w = self.slice.reduce_word([i - 1 for i in item["w"]])
            q = self.loc_from_json(item["coeff"])
            coeffs[w] = coeffs[w] + q if w in coeffs else q
        return TwistedElement(self, coeffs)

    def generator(self, kind, i):
        return self.X(i) if kind == "X" else self.Y(i)

    # -- arithmetic --------------------------------------------------------------
    def add(self, a, b):
        parts = defaultdict(list)
        for w, q in list(a.coeffs.items()) + list(b.coeffs.items()):
            parts[w].append(q)
        return TwistedElement(self, {w: loc_sum(v) for w, v in parts.items()})

    def mul(self, a: TwistedElement, b: TwistedElement) -> TwistedElement:
        sl = self.slice
        parts = defaultdict(list)
        for w, q in a.coeffs.items():
            for v, q2 in b.coeffs.items():
                u = sl.try_mul(w, v)
                if u is None:
                    raise OutOfSlice(f"product d_{w!r} d_{v!r} has length > {sl.L}")
                parts[u].append(q * q2.act(w))
        return TwistedElement(self, {u: loc_sum(v) for u, v in parts.items()})

    def word(self, kind, word) -> TwistedElement:
        """X_{i1} ... X_{ik} (or the Y product) for a 0-based word, cached."""
        word = tuple(word)
        key = (kind, word)
        res = self._words.get(key)
        if res is None:
            if not word:
                res = self.one()
            else:
                res = self.mul(self.word(kind, word[:-1]), self.generator(kind, word[-1]))
            self._words[key] = res
        return res

    def X_word(self, word):
        return self.word("X", word)

    def Y_word(self, word):
        return self.word("Y", word)

    def act_on_S(self, z: TwistedElement, u: Series) -> LocalizedElement:
        """z . u = sum_w q_w w(u)."""
        u = self.q(u)
        return loc_sum([q * u.act(w) for w, q in z.coeffs.items()] or [self.zero_q()])

    # -- basis change --------------------------------------------------------------
    def basis_change(self, kind="X"):
        """(a, b): X_{I_v} = sum_w a[v][w] delta_w and delta_v = sum_w b[v][w] X_{I_w}."""
        res = self._change.get(kind)
        if res is not None:
            return res
        a = {}
        b = {}
        for v in self.slice:
            row = self.word(kind, v.word).coeffs
            a[v] = dict(row)
            diag = row.get(v)
            if diag is None:
                raise ArithmeticError(f"{kind}-product for {v!r} has no top coefficient")
            inv_diag = self._invert_product(diag)
            brow = defaultdict(list)
            brow[v].append(inv_diag)
            for w, q in row.items():
                if w == v:
                    continue
                f = -(q * inv_diag)
                for u, bq in b[w].items():
                    brow[u].append(f * bq)
            b[v] = {u: s for u, s in ((u, loc_sum(p)) for u, p in brow.items()) if not s.is_zero()}
        res = (a, b)
        self._change[kind] = res
        return res

    def _invert_product(self, q):
        """Inverse of a diagonal coefficient: a unit times 1/(product of x_roots)."""
        fga = self.fga
        num = fga.ring.one()
        for r in q.den:
            num = num * fga.x_root(r)
        c = q.num
        if not c.is_zero() and c.is_constant():
            coeff = c.as_coefficient()
            if coeff.is_rational():
                return LocalizedElement(fga, num * (1 / coeff.rational()), ())
        # general unit of S: invert the series by Newton iteration on 1 - u
        return LocalizedElement(fga, num * _series_inverse(c), ())

    def expand(self, z: TwistedElement, kind="X"):
        """Coefficients p_v with z = sum_v p_v X_{I_v} (or Y)."""
        _, b = self.basis_change(kind)
        parts = defaultdict(list)
        for w, q in z.coeffs.items():
            for v, bq in b[w].items():
                parts[v].append(q * bq)
        return {v: s for v, s in ((v, loc_sum(p)) for v, p in parts.items()) if not s.is_zero()}

    def from_basis(self, coeffs, kind="X") -> TwistedElement:
        out = self.zero()
        for v, p in coeffs.items():
            out = out + self.word(kind, v.word).scale(p)
        return out

    # -- checks --------------------------------------------------------------------
    def braid_defect(self, i, j, kind="X"):
        """Coefficients of X_{iji...} - X_{jij...} (m_ij factors each) in the basis."""
        m = self.datum.m_ij(i, j)
        if m is None:
            return {}
        w1 = tuple(i if k % 2 == 0 else j for k in range(m))
        w2 = tuple(j if k % 2 == 0 else i for k in range(m))
        diff = self.word(kind, w1) - self.word(kind, w2)
        return self.expand(diff, kind)

    def membership(self, z: TwistedElement):
        """Return (True, {v: series}) if z lies in the Demazure algebra, else (False, (v, root))."""
        coeffs = self.expand(z, "X")
        out = {}
        for v, p in sorted(coeffs.items()):
            ok, val = p.in_S()
            if not ok:
                return False, (v, val)
            out[v] = val
        return True, out

    def residue_check(self, z: TwistedElement):
        """Pole test: for each denominator root alpha and each w, x_alpha q_w and
        q_w + q_{s_alpha w} have no pole along alpha."""
        roots = sorted({r for q in z.coeffs.values() for r in q.den})
        for alpha in roots:
            s = self.fga.reflection_matrix(alpha)
            seen = set()
            for w, q in z.coeffs.items():
                if q.multiplicity(alpha) > 1:
                    return False, (w, alpha)
                if w in seen:
                    continue
                sw = self.slice.find(s @ w.action)
                seen.add(w)
                other = self.zero_q()
                if sw is not None:
                    seen.add(sw)
                    other = z[sw]
                if (q + other).multiplicity(alpha):
                    return False, (w, alpha)
        return True, None

    # -- coproduct -------------------------------------------------------------------
    def coproduct(self, z: TwistedElement) -> TensorElement:
        return TensorElement(self, {(w, w): q for w, q in z.coeffs.items()})

    def counit(self, z: TwistedElement) -> LocalizedElement:
        return loc_sum(list(z.coeffs.values()) or [self.zero_q()])

    def tensor(self, a: TwistedElement, b: TwistedElement) -> TensorElement:
        return TensorElement(self, {(u, v): p * q for u, p in a.coeffs.items()
                                    for v, q in b.coeffs.items()})

    def coproduct_X_expansion(self, word):
        """p_{E1,E2} in S with Delta(X_I) = sum p_{E1,E2} X_{I|E1} (x) X_{I|E2}.

        Built by prepending letters: for I = (i, I') the new terms are
        Delta_i(p') at (E1, E2), s_i(p') at (0+E1, E2) and (E1, 0+E2), and
        -x_i s_i(p') at (0+E1, 0+E2), where E1, E2 are shifted by one.
        """
        fga = self.fga
        terms = {((), ()): fga.ring.one()}
        for i in reversed(tuple(word)):
            s = self.datum.reflections[i]
            xi = fga.x_root(self.datum.simple_root(i))
            new = defaultdict(list)
            for (e1, e2), p in terms.items():
                e1 = tuple(k + 1 for k in e1)
                e2 = tuple(k + 1 for k in e2)
                sp = fga.act(s, p)
                new[(e1, e2)].append(fga.demazure(i, p))
                new[((0,) + e1, e2)].append(sp)
                new[(e1, (0,) + e2)].append(sp)
                new[((0,) + e1, (0,) + e2)].append(-(xi * sp))
            terms = {}
            for k, v in new.items():
                tot = v[0]
                for x in v[1:]:
                    tot = tot + x
                if not tot.is_zero():
                    terms[k] = tot
        return terms

    def tensor_from_expansion(self, word, terms) -> TensorElement:
        word = tuple(word)
        out = TensorElement(self, {})
        for (e1, e2), p in terms.items():
            left = self.X_word(tuple(word[k] for k in e1)).scale(p)
            out = out + self.tensor(left, self.X_word(tuple(word[k] for k in e2)))
        return out


def _series_inverse(u: Series) -> Series:
    """1/u for a series with invertible rational constant term."""
    c0 = u.constant_term()
    if c0.is_zero() or not c0.is_rational():
        raise ArithmeticError("series is not a unit with rational constant term")
    inv0 = 1 / c0.rational()
    rest = u * inv0 - 1  # u/c0 - 1, valuation >= 1
    out = u.ring.one()
    power = u.ring.one()
    for _ in range(u.order):
        power = power * (-rest)
        if power.is_zero():
            break
        out = out + power
    return (out * inv0).truncate(u.order)


# functional API

def qw_product(a, b):
    return a.alg.mul(a, b)


def basis_change(alg: TwistedAlgebra, kind="X"):
    return alg.basis_change(kind)


def braid_defect(alg: TwistedAlgebra, i, j, kind="X"):
    return alg.braid_defect(i, j, kind)


def membership(alg: TwistedAlgebra, z):
    return alg.membership(z)


def residue_check(alg: TwistedAlgebra, z):
    return alg.residue_check(z)


def act_on_S(alg: TwistedAlgebra, z, u):
    return alg.act_on_S(z, u)
