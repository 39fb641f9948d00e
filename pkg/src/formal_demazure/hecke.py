"""Formal affine Hecke algebra over the extended lattice Z*gamma + Lambda.

gamma is the first lattice coordinate, fixed by W and orthogonal to all
coroots, so x_gamma is a central scalar.  T_alpha = x_gamma X_alpha + delta_alpha.
"""
from __future__ import annotations

from .fga import FormalGroupAlgebra, FormalGroupLaw, NotDivisible, divide_series
from .localized import LocalizedElement
from .rootdata import RootDatum, WeylSlice
from .twisted import TwistedAlgebra, TwistedElement


class HeckeAlgebra:
    def __init__(self, datum: RootDatum, law: FormalGroupLaw, order: int, L: int):
        self.base = datum
        self.datum = datum.extended()
        self.fga = FormalGroupAlgebra(self.datum, law, order)
        self.slice = WeylSlice(self.datum, L)
        self.alg = TwistedAlgebra(self.fga, self.slice)
        self.gamma = (1,) + (0,) * datum.m
        self.x_gamma = self.fga.x(self.gamma)
        self._words = {}

    def _root(self, alpha):
        return self.datum.simple_root(alpha) if isinstance(alpha, int) else alpha

    def T(self, alpha) -> TwistedElement:
        alpha = self._root(alpha)
        return self.alg.X(alpha).scale(self.x_gamma) + self.alg.delta(self.alg._reflection(alpha))

    def T_word(self, word) -> TwistedElement:
        word = tuple(word)
        res = self._words.get(word)
        if res is None:
            res = self.alg.one() if not word else self.alg.mul(self.T_word(word[:-1]), self.T(word[-1]))
            self._words[word] = res
        return res

    def top_coefficient(self, w) -> LocalizedElement:
        """prod over inversions alpha of (x_alpha - x_gamma)/x_alpha."""
        out = self.alg.q(1)
        for alpha in self.slice.inversion_set(w):
            out = out * LocalizedElement(self.fga, self.fga.x_root(alpha) - self.x_gamma, (alpha,))
        return out

    def expand(self, z: TwistedElement):
        """Coefficients p_w with z = sum p_w T_{I_w}, by top-down elimination.

        Returns (True, {w: LocalizedElement}) or (False, (w, reason)) when some
        coefficient would need a factor x_alpha - x_gamma in the denominator.
        """
        fga = self.fga
        rest = z
        out = {}
        while not rest.is_zero():
            w = max(rest.coeffs, key=lambda v: (v.length, v.word))
            q = rest.coeffs[w]
            # p = q * c_w / prod (x_alpha - x_gamma)
            num = q.num
            den = list(q.den)
            for alpha in self.slice.inversion_set(w):
                if alpha in den:
                    den.remove(alpha)
                else:
                    num = num * fga.x_root(alpha)
                try:
                    num = divide_series(num, fga.x_root(alpha) - self.x_gamma)
                except NotDivisible:
                    return False, (w, f"x_{alpha!r} - x_gamma does not divide")
            p = LocalizedElement(fga, num, den)
            out[w] = p
            rest = rest - self.T_word(w.word).scale(p)
        return True, out

    def membership(self, z: TwistedElement):
        ok, coeffs = self.expand(z)
        if not ok:
            return False, coeffs
        res = {}
        for w, p in sorted(coeffs.items()):
            good, val = p.in_S()
            if not good:
                return False, (w, f"pole along x_{val!r}")
            res[w] = val
        return True, res

    # -- relations -----------------------------------------------------------
    def quadratic_defect(self, i) -> TwistedElement:
        """T_i^2 - (x_gamma kappa_i T_i + 1 - x_gamma kappa_i)."""
        Ti = self.T(i)
        xk = self.x_gamma * self.fga.kappa(i)
        rhs = Ti.scale(xk) + self.alg.scalar(self.fga.ring.one() - xk)
        return self.alg.mul(Ti, Ti) - rhs

    def commutation_defect(self, i, q) -> TwistedElement:
        """T_i q - s_i(q) T_i - x_gamma Delta_i(q)."""
        alg = self.alg
        Ti = self.T(i)
        sq = self.fga.act(self.datum.reflections[i], q)
        return (alg.mul(Ti, alg.scalar(q)) - Ti.scale(sq)
                - alg.scalar(self.x_gamma * self.fga.demazure(i, q)))

    def conjugation_defect(self, w, i) -> TwistedElement:
        """delta_w T_i delta_{w^-1} - T_{w(alpha_i)}."""
        alg = self.alg
        winv = self.slice.inverse(w)
        lhs = alg.mul(alg.mul(alg.delta(w), self.T(i)), alg.delta(winv))
        beta = self.slice.root_image(w, self.datum.simple_root(i))
        return lhs - self.T(beta)

    def word_difference(self, w1, w2) -> TwistedElement:
        return self.T_word(w1) - self.T_word(w2)


def T_elem(H: HeckeAlgebra, i):
    return H.T(i)


def T_product(H: HeckeAlgebra, word):
    return H.T_word(word)


def T_membership(H: HeckeAlgebra, z):
    return H.membership(z)
