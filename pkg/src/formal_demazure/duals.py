"""The dual D*_F = Hom_S(D_F, S) on a Weyl slice.

A dual element is stored by its values f(delta_w).  Because the coproduct
sends delta_w to delta_w (x) delta_w, the product is pointwise on these values.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np

from .localized import LocalizedElement, loc_sum
from .twisted import TwistedAlgebra, TwistedElement


class DualElement:
    __slots__ = ("alg", "values")

    def __init__(self, alg: TwistedAlgebra, values):
        self.alg = alg
        self.values = {w: alg.q(q) for w, q in values.items() if not alg.q(q).is_zero()}

    def __call__(self, z: TwistedElement) -> LocalizedElement:
        """S-linear evaluation f(sum q_w delta_w) = sum q_w f(delta_w)."""
        return loc_sum([q * self[w] for w, q in z.coeffs.items()] or [self.alg.zero_q()])

    def __getitem__(self, w):
        q = self.values.get(w)
        return q if q is not None else self.alg.zero_q()

    def __mul__(self, other):
        return dual_product(self, other)

    def __add__(self, other):
        keys = set(self.values) | set(other.values)
        return DualElement(self.alg, {w: self[w] + other[w] for w in keys})

    def __sub__(self, other):
        keys = set(self.values) | set(other.values)
        return DualElement(self.alg, {w: self[w] - other[w] for w in keys})

    def scale(self, q):
        q = self.alg.q(q)
        return DualElement(self.alg, {w: q * v for w, v in self.values.items()})

    def equals(self, other):
        return all(self[w].equals(other[w]) for w in self.alg.slice)

    __eq__ = equals
    __hash__ = None

    def is_zero(self):
        return not self.values

    def coefficients(self, kind="X"):
        """q_v with f = sum q_v X*_{I_v}; q_v = f(X_{I_v})."""
        a, _ = self.alg.basis_change(kind)
        out = {}
        for v in self.alg.slice:
            s = loc_sum([q * self[w] for w, q in a[v].items()])
            if not s.is_zero():
                out[v] = s
        return out

    def in_dual(self):
        return all(q.is_in_S() for q in self.coefficients("Y").values())

    def __repr__(self):
        return "{" + ", ".join(f"{w!r}: {q!r}" for w, q in sorted(self.values.items())) + "}"


def dual_from_basis(alg: TwistedAlgebra, coeffs, basis="X") -> DualElement:
    """f = sum_u q_u X*_{I_u} (or Y*), so f(delta_w) = sum_u q_u b_{w,u}."""
    kind = "X" if basis in ("X", "Xstar") else "Y"
    _, b = alg.basis_change(kind)
    values = {}
    for w in alg.slice:
        parts = [alg.q(q) * b[w][u] for u, q in coeffs.items() if u in b[w]]
        if parts:
            values[w] = loc_sum(parts)
    return DualElement(alg, values)


def dual_basis(alg, w, basis="X"):
    return dual_from_basis(alg, {w: 1}, basis)


def dual_unit(alg) -> DualElement:
    return DualElement(alg, {w: 1 for w in alg.slice})


def dual_product(f: DualElement, g: DualElement) -> DualElement:
    return DualElement(f.alg, {w: q * g[w] for w, q in f.values.items() if w in g.values})


class StructureConstants:
    """p^w_{u,v} for fixed (u, v), keyed by w."""

    def __init__(self, u, v, table, kind, method):
        self.u = u
        self.v = v
        self.table = table
        self.kind = kind
        self.method = method

    def __getitem__(self, w):
        return self.table[w]

    def nonzero(self):
        return {w: p for w, p in self.table.items() if not p.is_zero()}

    def equals(self, other):
        return self.table.keys() == other.table.keys() and all(
            p.equals(other.table[w]) for w, p in self.table.items())

    def all_in_S(self):
        return all(p.is_in_S() for p in self.table.values())

    def to_json(self):
        return {"u": [i + 1 for i in self.u.word], "v": [i + 1 for i in self.v.word],
                "basis": self.kind, "method": self.method,
                "table": [{"w": [i + 1 for i in w.word], "p": p.to_json()}
                          for w, p in sorted(self.nonzero().items())]}


def structure_constants(alg: TwistedAlgebra, u, v, method="triangular", kind="Y"):
    """Coefficients of B*_u B*_v in the dual basis B* (B = Y or X), for every w in the slice."""
    a, b = alg.basis_change(kind)
    table = {}
    if method == "triangular":
        for w in alg.slice:
            parts = [q * b[t][u] * b[t][v] for t, q in a[w].items() if u in b[t] and v in b[t]]
            table[w] = loc_sum(parts) if parts else alg.zero_q()
    elif method == "recursion":
        zero = alg.zero_q()
        for w in alg.slice:
            bw = b[w]
            lead = bw.get(u, zero) * bw.get(v, zero)
            parts = [lead] + [-(table[t] * q) for t, q in bw.items()
                              if t != w and not table[t].is_zero()]
            # 1/b_{w,w} = a_{w,w}
            table[w] = loc_sum(parts) * a[w][w]
    else:
        raise ValueError(f"unknown method {method!r}")
    return StructureConstants(u, v, table, kind, method)


def billey(alg: TwistedAlgebra, u, v):
    """Sum over reduced subwords of I_u spelling v of the products of the roots beta_j.

    Computed with linear forms only, independently of the twisted algebra.
    """
    if alg.fga.law.kind != "additive":
        raise ValueError("closed formula needs the additive formal group law")
    datum = alg.datum
    ring = alg.fga.ring
    word = u.word
    betas = []
    prefix = np.eye(datum.m, dtype=np.int64)
    for i in word:
        betas.append(ring.linear(prefix @ datum.simple_roots[i]))
        prefix = prefix @ datum.reflections[i]
    total = ring.zero()
    k = v.length
    for idx in combinations(range(len(word)), k):
        act = np.eye(datum.m, dtype=np.int64)
        for j in idx:
            act = act @ datum.reflections[word[j]]
        if not np.array_equal(act, v.action):
            continue
        term = ring.one()
        for j in idx:
            term = term * betas[j]
        total = total + term
    return total
