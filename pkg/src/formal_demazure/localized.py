"""Localization Q = S[1/x_alpha : alpha real root].

An element is a numerator series over a sorted multiset of positive roots.
Negative-root denominators are rewritten with the unit x_gamma / x_{-gamma},
and a root is cancelled whenever its x divides the numerator exactly, so the
stored denominator is minimal (to the working precision).
"""
from __future__ import annotations

from collections import Counter

import numpy as np

from .fga import FormalGroupAlgebra, NotDivisible, Series
from .rootdata import Root


class LocalizedElement:
    __slots__ = ("fga", "num", "den")

    def __init__(self, fga: FormalGroupAlgebra, num: Series, den=(), normalize=True):
        self.fga = fga
        self.num = num
        self.den = tuple(sorted(den))
        if normalize:
            self._normalize()

    def _normalize(self):
        if not self.den:
            return
        if self.num.is_zero():
            self.den = ()
            return
        keep = []
        num = self.num
        for root, k in sorted(Counter(self.den).items()):
            while k:
                try:
                    num = self.fga.divide_by_root(num, root)
                except NotDivisible:
                    break
                k -= 1
            keep.extend([root] * k)
        self.num = num
        self.den = tuple(sorted(keep))

    # -- constructors ------------------------------------------------------
    @classmethod
    def of(cls, fga, value):
        if isinstance(value, LocalizedElement):
            return value
        if isinstance(value, Series):
            return cls(fga, value, (), normalize=False)
        return cls(fga, fga.ring.const(value), (), normalize=False)

    @classmethod
    def inv_root(cls, fga, root: Root):
        """1/x_root for any real root."""
        if root.is_positive:
            return cls(fga, fga.ring.one(), (root,), normalize=False)
        pos = -root
        return cls(fga, fga.unit(pos), (pos,), normalize=False)

    # -- queries --------------------------------------------------------------
    @property
    def order(self):
        return self.num.order

    def is_zero(self):
        return self.num.is_zero()

    def is_in_S(self):
        return not self.den

    def in_S(self):
        """(True, series) or (False, offending root)."""
        if self.den:
            return False, self.den[0]
        return True, self.num

    def to_series(self) -> Series:
        if self.den:
            raise NotDivisible(f"denominator {self.den} does not cancel")
        return self.num

    def multiplicity(self, root):
        return self.den.count(root)

    # -- arithmetic -----------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, LocalizedElement):
            return other
        return LocalizedElement.of(self.fga, other)

    def _scale_to(self, den_counter):
        num = self.num
        mine = Counter(self.den)
        for root, k in den_counter.items():
            for _ in range(k - mine.get(root, 0)):
                num = num * self.fga.x_root(root)
        return num

    def __add__(self, other):
        return loc_sum([self, self._lift(other)])

    __radd__ = __add__

    def __sub__(self, other):
        return loc_sum([self, -self._lift(other)])

    def __rsub__(self, other):
        return loc_sum([self._lift(other), -self])

    def __neg__(self):
        return LocalizedElement(self.fga, -self.num, self.den, normalize=False)

    def __mul__(self, other):
        if isinstance(other, LocalizedElement):
            if self.is_zero() or other.is_zero():
                return LocalizedElement(self.fga, self.num * other.num, (), normalize=False)
            return LocalizedElement(self.fga, self.num * other.num, self.den + other.den,
                                    normalize=bool(self.den or other.den))
        if isinstance(other, Series):
            return LocalizedElement(self.fga, self.num * other, self.den)
        return LocalizedElement(self.fga, self.num * other, self.den, normalize=False)

    __rmul__ = __mul__

    def act(self, w) -> "LocalizedElement":
        """w(q) for a Weyl element (or lattice matrix) and its root action."""
        fga = self.fga
        num = fga.act(w, self.num)
        if not self.den:
            return LocalizedElement(fga, num, (), normalize=False)
        den = []
        for root in self.den:
            img = _root_image(fga, w, root)
            if img.is_positive:
                den.append(img)
            else:
                num = num * fga.unit(-img)
                den.append(-img)
        return LocalizedElement(fga, num, den)

    def equals(self, other):
        return (self - self._lift(other)).is_zero()

    def __eq__(self, other):
        if not isinstance(other, (LocalizedElement, Series, int)):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def __repr__(self):
        if not self.den:
            return repr(self.num)
        den = "*".join(f"x{r!r}" for r in self.den)
        return f"({self.num!r})/({den})"

    def to_json(self):
        return {"num": self.num.to_json(), "den": [list(r.simple) for r in self.den]}


def _root_image(fga, w, root):
    """Image of a root under a WeylElement w."""
    simple = tuple(int(c) for c in w.root_action @ np.asarray(root.simple, dtype=np.int64))
    lattice = tuple(int(c) for c in w.action @ np.asarray(root.lattice, dtype=np.int64))
    return Root(simple, lattice, _coroot_image(fga, w, root))


def _coroot_image(fga, w, root):
    # <lambda, w(a^vee)> = <w^{-1} lambda, a^vee>; w^{-1} action = inverse matrix
    inv = np.rint(np.linalg.inv(w.action.astype(float))).astype(np.int64)
    return tuple(int(c) for c in np.asarray(root.coroot, dtype=np.int64) @ inv)


def loc_sum(items) -> LocalizedElement:
    """Sum over a common denominator, normalized once."""
    items = list(items)
    if not items:
        raise ValueError("empty sum needs at least one element")
    fga = items[0].fga
    if len(items) == 1:
        return items[0]
    common = Counter()
    for q in items:
        for root, k in Counter(q.den).items():
            if k > common[root]:
                common[root] = k
    num = None
    for q in items:
        part = q._scale_to(common)
        num = part if num is None else num + part
    den = [r for r, k in common.items() for _ in range(k)]
    return LocalizedElement(fga, num, den)


def loc_arith(a, b, op):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv_root":
        # a * (1/x_b); only root classes are invertible here
        if not isinstance(b, Root):
            raise TypeError(f"inv_root needs a real root, got {type(b).__name__}")
        return a * LocalizedElement.inv_root(a.fga, b)
    raise ValueError(f"unknown op {op!r}")


def is_in_S(q: LocalizedElement):
    return q.in_S()


def weyl_act_loc(w, q: LocalizedElement):
    return q.act(w)
