"""Generalized Cartan matrices, Demazure lattices, real roots and Weyl-group slices.

Weyl elements are identified by their integer action matrix on the lattice.
A ``WeylSlice`` holds every element of length at most ``L``, each with its
ShortLex-least reduced word, found by breadth-first search from the identity.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np


class RootDatumError(ValueError):
    pass


class OutOfSlice(LookupError):
    pass


def coxeter_order(a_ij, a_ji):
    """Order of s_i s_j (i != j); ``None`` stands for infinity."""
    return {0: 2, 1: 3, 2: 4, 3: 6}.get(a_ij * a_ji)


def validate_cartan(cartan):
    A = np.asarray(cartan, dtype=np.int64)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise RootDatumError("Cartan matrix must be a non-empty square matrix")
    n = A.shape[0]
    for i in range(n):
        if A[i, i] != 2:
            raise RootDatumError(f"diagonal entry a_{i + 1}{i + 1} = {A[i, i]} != 2")
        for j in range(n):
            if i == j:
                continue
            if A[i, j] > 0:
                raise RootDatumError(f"off-diagonal entry a_{i + 1}{j + 1} = {A[i, j]} > 0")
            if (A[i, j] == 0) != (A[j, i] == 0):
                raise RootDatumError(f"a_{i + 1}{j + 1} = 0 but a_{j + 1}{i + 1} != 0")
    return A


@dataclass(frozen=True, eq=False)
class Root:
    """A real root in simple-root coordinates, lattice coordinates and its coroot covector."""

    simple: tuple
    lattice: tuple
    coroot: tuple

    def __eq__(self, other):
        return isinstance(other, Root) and self.simple == other.simple

    def __hash__(self):
        return hash(self.simple)

    def __lt__(self, other):
        return (sum(self.simple), self.simple) < (sum(other.simple), other.simple)

    def __neg__(self):
        return Root(tuple(-c for c in self.simple), tuple(-c for c in self.lattice),
                    tuple(-c for c in self.coroot))

    @property
    def is_positive(self):
        return all(c >= 0 for c in self.simple)

    @property
    def height(self):
        return sum(self.simple)

    def positive(self):
        return self if self.is_positive else -self

    def __repr__(self):
        return "Root(" + ",".join(map(str, self.simple)) + ")"


class RootDatum:
    """Cartan matrix with an explicit Demazure lattice.

    ``simple_roots[i]`` are the coordinates of alpha_i in the lattice basis and
    ``simple_coroots[i]`` the covector lambda -> <lambda, alpha_i^vee>.
    """

    def __init__(self, cartan, simple_roots, simple_coroots):
        self.cartan = validate_cartan(cartan)
        self.n = self.cartan.shape[0]
        self.simple_roots = np.asarray(simple_roots, dtype=np.int64)
        self.simple_coroots = np.asarray(simple_coroots, dtype=np.int64)
        if self.simple_roots.ndim != 2 or self.simple_roots.shape[0] != self.n:
            raise RootDatumError("need one lattice vector per simple root")
        self.m = self.simple_roots.shape[1]
        if self.simple_coroots.shape != (self.n, self.m):
            raise RootDatumError("need one covector of lattice rank per simple coroot")
        pairing = self.simple_coroots @ self.simple_roots.T
        if not np.array_equal(pairing, self.cartan):
            raise RootDatumError(
                f"pairing <alpha_j, alpha_i^vee> = {pairing.tolist()} does not reproduce the Cartan matrix")
        for i, r in enumerate(self.simple_roots):
            g = 0
            for c in r:
                g = gcd(g, int(c))
            if g != 1:
                raise RootDatumError(f"simple root alpha_{i + 1} = {r.tolist()} is not unimodular")
        if np.linalg.matrix_rank(self.simple_roots.astype(float)) < self.n:
            raise RootDatumError("simple roots are linearly dependent")
        # reflections on lattice columns and on simple-root coordinates
        eye_m = np.eye(self.m, dtype=np.int64)
        eye_n = np.eye(self.n, dtype=np.int64)
        self.reflections = [eye_m - np.outer(self.simple_roots[i], self.simple_coroots[i])
                            for i in range(self.n)]
        self.root_reflections = [eye_n - np.outer(eye_n[i], self.cartan[i]) for i in range(self.n)]

    def simple_root(self, i) -> Root:
        e = [0] * self.n
        e[i] = 1
        return Root(tuple(e), tuple(int(c) for c in self.simple_roots[i]),
                    tuple(int(c) for c in self.simple_coroots[i]))

    def root_lattice_vector(self, simple_coords):
        return tuple(int(c) for c in np.asarray(simple_coords, dtype=np.int64) @ self.simple_roots)

    def m_ij(self, i, j):
        if i == j:
            return 1
        return coxeter_order(int(self.cartan[i, j]), int(self.cartan[j, i]))

    def to_json(self):
        return {"cartan": self.cartan.tolist(),
                "lattice": {"rank": self.m, "roots": self.simple_roots.tolist(),
                            "coroots": self.simple_coroots.tolist()}}

    def extended(self):
        """Datum on Gamma + Lambda: gamma is the first basis vector, fixed by W and
        orthogonal to every coroot."""
        z = np.zeros((self.n, 1), dtype=np.int64)
        return RootDatum(self.cartan, np.hstack([z, self.simple_roots]),
                         np.hstack([z, self.simple_coroots]))


def build_root_datum(cartan, lattice=None) -> RootDatum:
    A = validate_cartan(cartan)
    if lattice is None or lattice == "root":
        n = A.shape[0]
        return RootDatum(A, np.eye(n, dtype=np.int64), A.copy())
    if lattice["rank"] != len(lattice["roots"][0]):
        raise RootDatumError("lattice rank does not match root coordinates")
    return RootDatum(A, lattice["roots"], lattice["coroots"])


class WeylElement:
    """Group element with canonical (ShortLex-least) reduced word and action matrices."""

    __slots__ = ("word", "length", "action", "root_action", "key", "index", "__weakref__")

    def __init__(self, word, action, root_action, index=-1):
        self.word = tuple(word)
        self.length = len(self.word)
        self.action = action
        self.root_action = root_action
        self.key = action.tobytes()
        self.index = index

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __lt__(self, other):
        return (self.length, self.word) < (other.length, other.word)

    def __repr__(self):
        if not self.word:
            return "e"
        return "s" + "".join(str(i + 1) for i in self.word)

    @property
    def name(self):
        return repr(self)


def _fmt_word(word):
    return [i + 1 for i in word]


class WeylSlice:
    """All Weyl group elements of length <= L."""

    def __init__(self, datum: RootDatum, L: int):
        if L < 0:
            raise ValueError("length bound must be non-negative")
        self.datum = datum
        self.L = L
        n, m = datum.n, datum.m
        e = WeylElement((), np.eye(m, dtype=np.int64), np.eye(n, dtype=np.int64), 0)
        self.elements = [e]
        self._by_key = {e.key: e}
        level = [e]
        for _ in range(L):
            nxt = []
            for w in level:  # level is in ShortLex order, so first discovery is least
                for i in range(n):
                    act = w.action @ datum.reflections[i]
                    key = act.tobytes()
                    if key in self._by_key:
                        continue
                    u = WeylElement(w.word + (i,), act, w.root_action @ datum.root_reflections[i],
                                    len(self.elements))
                    self._by_key[key] = u
                    self.elements.append(u)
                    nxt.append(u)
            nxt.sort()
            level = nxt
        self.elements.sort()
        for k, w in enumerate(self.elements):
            w.index = k
        self.identity = e
        self.gens = [self._by_key[datum.reflections[i].tobytes()] for i in range(n)] if L >= 1 else []
        self._inverse = {}
        self._leq = {}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, w):
        return w.key in self._by_key

    def lookup(self, action, what="product"):
        w = self._by_key.get(np.ascontiguousarray(action).tobytes())
        if w is None:
            raise OutOfSlice(f"{what} has length > {self.L}")
        return w

    def find(self, action):
        return self._by_key.get(np.ascontiguousarray(action).tobytes())

    def by_length(self, k):
        return [w for w in self.elements if w.length == k]

    def parse(self, name):
        """Element named like ``"e"`` or ``"s1s2s1"`` (1-based generators)."""
        name = name.strip()
        if name in ("e", "1", ""):
            return self.identity
        return self.reduce_word([int(c) - 1 for c in name.replace("s", "")])

    def reduce_word(self, word):
        act = np.eye(self.datum.m, dtype=np.int64)
        for i in word:
            if not 0 <= i < self.datum.n:
                raise ValueError(f"generator index {i + 1} out of range")
            act = act @ self.datum.reflections[i]
        return self.lookup(act, f"word {_fmt_word(word)}")

    def mul(self, u, v):
        return self.lookup(u.action @ v.action, f"{u}*{v}")

    def try_mul(self, u, v):
        return self.find(u.action @ v.action)

    def inverse(self, w):
        inv = self._inverse.get(w.key)
        if inv is None:
            inv = self.reduce_word(w.word[::-1])
            self._inverse[w.key] = inv
        return inv

    def act_on_weight(self, w, lam):
        return tuple(int(c) for c in w.action @ np.asarray(lam, dtype=np.int64))

    def root_image(self, w, root: Root) -> Root:
        simple = tuple(int(c) for c in w.root_action @ np.asarray(root.simple, dtype=np.int64))
        lattice = tuple(int(c) for c in w.action @ np.asarray(root.lattice, dtype=np.int64))
        winv = self.inverse(w)
        coroot = tuple(int(c) for c in np.asarray(root.coroot, dtype=np.int64) @ winv.action)
        return Root(simple, lattice, coroot)

    def is_descent_left(self, i, w):
        """True iff l(s_i w) < l(w), via the sign of w^{-1}(alpha_i)."""
        return int(self.inverse(w).root_action[:, i].sum()) < 0

    def inversion_set(self, w):
        """Phi_w in the order alpha_{i1}, s_{i1} alpha_{i2}, ... of the canonical word."""
        roots = []
        prefix = self.identity
        for i in w.word:
            roots.append(self.root_image(prefix, self.datum.simple_root(i)))
            prefix = self.lookup(prefix.action @ self.datum.reflections[i])
        return tuple(roots)

    def reflection(self, root: Root):
        """The reflection s_root if it lies in the slice, else None."""
        act = np.eye(self.datum.m, dtype=np.int64) - np.outer(
            np.asarray(root.lattice, dtype=np.int64), np.asarray(root.coroot, dtype=np.int64))
        return self.find(act)

    def bruhat_leq(self, v, w):
        key = (v.index, w.index)
        res = self._leq.get(key)
        if res is None:
            res = self._bruhat(v, w)
            self._leq[key] = res
        return res

    def _bruhat(self, v, w):
        if v.length > w.length:
            return False
        if w.length == 0:
            return v.length == 0
        s = w.word[0]
        sw = self.lookup(self.datum.reflections[s] @ w.action)
        if self.is_descent_left(s, v):
            sv = self.lookup(self.datum.reflections[s] @ v.action)
            return self.bruhat_leq(sv, sw)
        return self.bruhat_leq(v, sw)

    def below(self, w):
        return [v for v in self.elements if self.bruhat_leq(v, w)]

    def to_json(self):
        return [{"word": _fmt_word(w.word), "length": w.length} for w in self.elements]


def weyl_slice(datum: RootDatum, L: int) -> WeylSlice:
    return WeylSlice(datum, L)


def inversion_set(slice_: WeylSlice, w):
    return slice_.inversion_set(w)


def bruhat_leq(slice_: WeylSlice, v, w):
    return slice_.bruhat_leq(v, w)


def act_on_weight(slice_: WeylSlice, w, lam):
    return slice_.act_on_weight(w, lam)


def reduce_word(slice_: WeylSlice, word):
    return slice_.reduce_word(word)
