"""Command-line front end: read a JSON session config, run one computation, emit JSON.

Exit codes: 0 success, 2 invalid config, 3 out of slice, 4 insufficient precision.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .duals import billey, dual_product, structure_constants
from .fga import FormalGroupAlgebra, FormalGroupLaw, NotDivisible, PrecisionError
from .graded import (NilHecke, dual_filtration_degree, eta, filtration_degree, leading_degree_failures,
                     phi, random_dual, random_member, random_polynomial)
from .hecke import HeckeAlgebra
from .rootdata import OutOfSlice, RootDatumError, WeylSlice, build_root_datum
from .rootpoly import (K_coefficients, RootPolyContext, evaluate, coefficient_identity_failures,
                       reduced_words, root_polynomial, theta)
from .twisted import TwistedAlgebra

COMMANDS = ("roots", "weyl", "expand", "braid", "member", "residue", "coproduct", "structconst",
            "billey", "graded", "hecke", "rootpoly")

EXIT_OK, EXIT_CONFIG, EXIT_SLICE, EXIT_PRECISION = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


def _word(w):
    return [i + 1 for i in w.word]


class Session:
    """Validated config plus lazily built algebraic contexts."""

    def __init__(self, cfg: dict, allow_low_precision=False, warn=None):
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a JSON object")
        if "cartan" not in cfg:
            raise ConfigError("config needs a 'cartan' matrix")
        try:
            self.datum = build_root_datum(cfg["cartan"], cfg.get("lattice", "root"))
        except (RootDatumError, KeyError, TypeError, IndexError) as exc:
            raise ConfigError(f"invalid root datum: {exc}") from None
        L = cfg.get("length_bound", 2)
        if not isinstance(L, int) or L < 0:
            raise ConfigError("length_bound must be a non-negative integer")
        self.L = L
        N = cfg.get("N", 2 * L + 6)
        if not isinstance(N, int) or N < 1:
            raise ConfigError("N must be a positive integer")
        if N < 2 * L + 2:
            if not allow_low_precision:
                raise PrecisionError(f"N = {N} < 2L + 2 = {2 * L + 2}; pass --allow-low-precision to override")
            if warn:
                warn(f"warning: N = {N} < 2L + 2 = {2 * L + 2}; results may lose precision")
        self.N = N
        self.law = self._law(cfg.get("fgl", {"kind": "additive"}))
        self.cfg = cfg
        self.slice = WeylSlice(self.datum, L)
        self._alg = None

    @staticmethod
    def _law(spec):
        if isinstance(spec, str):
            spec = {"kind": spec}
        if not isinstance(spec, dict) or "kind" not in spec:
            raise ConfigError("fgl must be an object with a 'kind'")
        kind = spec["kind"]
        if kind not in FormalGroupLaw.KINDS:
            raise ConfigError(f"unknown fgl kind {kind!r}")
        values = {}
        for name in FormalGroupLaw.KINDS[kind]:
            v = spec.get(name, "symbolic")
            if v == "symbolic":
                continue
            try:
                values[name] = Fraction(str(v))
            except (ValueError, ZeroDivisionError):
                raise ConfigError(f"parameter {name} must be 'symbolic' or an exact rational") from None
        extra = set(spec) - {"kind"} - set(FormalGroupLaw.KINDS[kind])
        if extra:
            raise ConfigError(f"unexpected fgl fields {sorted(extra)}")
        return FormalGroupLaw(kind, **values)

    @property
    def alg(self) -> TwistedAlgebra:
        if self._alg is None:
            self._alg = TwistedAlgebra(FormalGroupAlgebra(self.datum, self.law, self.N), self.slice)
        return self._alg

    def parse_word(self, raw, what="word"):
        try:
            word = tuple(int(i) - 1 for i in raw)
        except (TypeError, ValueError):
            raise ConfigError(f"'{what}' must be a list of 1-based generator indices") from None
        if any(not 0 <= i < self.datum.n for i in word):
            raise ConfigError(f"'{what}' has a generator index out of range")
        return word

    def word_arg(self, key="word", default=None):
        raw = self.cfg.get(key, default)
        if raw is None:
            raise ConfigError(f"command needs '{key}'")
        return self.parse_word(raw, key)

    def element_arg(self, alg=None):
        alg = alg or self.alg
        if "element" not in self.cfg:
            raise ConfigError("command needs an 'element'")
        try:
            return alg.from_json(self.cfg["element"])
        except OutOfSlice:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid element: {exc}") from None

    def header(self, command):
        return {"command": command, "datum": self.datum.to_json(), "fgl": self.law.to_json(),
                "N": self.N, "length_bound": self.L}


# -- commands ----------------------------------------------------------------

def cmd_roots(s: Session):
    seen = {}
    for w in s.slice:
        if w.length == s.L:
            continue
        for i in range(s.datum.n):
            u = s.slice.find(w.action @ s.datum.reflections[i])
            if u is None or u.length <= w.length:
                continue
            r = s.slice.root_image(w, s.datum.simple_root(i))
            if r.simple not in seen:
                seen[r.simple] = {"simple": list(r.simple), "lattice": list(r.lattice),
                                  "coroot": list(r.coroot), "witness": {"w": _word(w), "i": i + 1}}
    roots = sorted(seen.values(), key=lambda d: (sum(d["simple"]), d["simple"]))
    return {"roots": roots}


def cmd_weyl(s: Session):
    return {"elements": s.slice.to_json()}


def _table(mat):
    return [{"v": _word(v), "row": [{"w": _word(w), "coeff": q.to_json()} for w, q in sorted(row.items())]}
            for v, row in sorted(mat.items())]


def cmd_expand(s: Session):
    kind = s.cfg.get("basis", "X")
    if kind not in ("X", "Y"):
        raise ConfigError("basis must be 'X' or 'Y'")
    a, b = s.alg.basis_change(kind)
    return {"basis": kind, "words": {repr(w): _word(w) for w in s.slice},
            "a": _table(a), "b": _table(b)}


def cmd_braid(s: Session):
    out = []
    for i in range(s.datum.n):
        for j in range(i + 1, s.datum.n):
            m = s.datum.m_ij(i, j)
            item = {"i": i + 1, "j": j + 1, "m": m if m is not None else "infinity"}
            if m is None:
                item["status"] = "no braid relation"
            elif m > s.L:
                item["status"] = f"m_ij > length bound {s.L}"
            else:
                defect = s.alg.braid_defect(i, j, s.cfg.get("basis", "X"))
                item["defect"] = [{"v": _word(v), "coeff": q.to_json()} for v, q in sorted(defect.items())]
                item["all_in_S"] = all(q.is_in_S() for q in defect.values())
                item["zero"] = not defect
            out.append(item)
    return {"pairs": out}


def cmd_member(s: Session):
    z = s.element_arg()
    ok, res = s.alg.membership(z)
    if ok:
        return {"member": True, "coefficients": [{"v": _word(v), "coeff": p.to_json()}
                                                 for v, p in sorted(res.items())]}
    v, root = res
    return {"member": False, "witness": {"v": _word(v), "root": list(root.simple)}}


def cmd_residue(s: Session):
    z = s.element_arg()
    ok, res = s.alg.residue_check(z)
    member, _ = s.alg.membership(z)
    out = {"passes": ok, "agrees_with_membership": ok == member}
    if not ok:
        w, root = res
        out["witness"] = {"w": _word(w), "root": list(root.simple)}
    return out


def cmd_coproduct(s: Session):
    word = s.word_arg()
    alg = s.alg
    terms = alg.coproduct_X_expansion(word)
    lhs = alg.coproduct(alg.X_word(word))
    rhs = alg.tensor_from_expansion(word, terms)
    table = [{"E1": [k + 1 for k in e1], "E2": [k + 1 for k in e2], "p": p.to_json()}
             for (e1, e2), p in sorted(terms.items(), key=lambda kv: (len(kv[0][0]) + len(kv[0][1]), kv[0]))]
    return {"word": [i + 1 for i in word], "table": table, "verified": lhs.equals(rhs)}


def _pairs(s: Session):
    if "pairs" in s.cfg:
        try:
            return [(s.slice.reduce_word(s.parse_word(u)), s.slice.reduce_word(s.parse_word(v)))
                    for u, v in s.cfg["pairs"]]
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid pairs: {exc}") from None
    els = list(s.slice)
    return [(u, v) for k, u in enumerate(els) for v in els[k:]]


def cmd_structconst(s: Session):
    kind = s.cfg.get("basis", "Y")
    if kind not in ("X", "Y"):
        raise ConfigError("basis must be 'X' or 'Y'")
    out = []
    agree_all = True
    for u, v in _pairs(s):
        tri = structure_constants(s.alg, u, v, "triangular", kind)
        rec = structure_constants(s.alg, u, v, "recursion", kind)
        agree = tri.equals(rec)
        agree_all &= agree
        item = tri.to_json()
        del item["method"]
        item["methods_agree"] = agree
        item["all_in_S"] = tri.all_in_S()
        out.append(item)
    return {"basis": kind, "agree": agree_all, "constants": out}


def cmd_billey(s: Session):
    if s.law.kind != "additive":
        raise ConfigError("billey needs the additive formal group law")
    _, bY = s.alg.basis_change("Y")
    rows = []
    ok_all = True
    for u in s.slice:
        for v in s.slice:
            if not s.slice.bruhat_leq(v, u):
                continue
            val = billey(s.alg, u, v)
            q = bY[u].get(v)
            lead = q.to_series().homogeneous(v.length) if q is not None else s.alg.fga.ring.zero()
            ok = val.equals(lead)
            ok_all &= ok
            rows.append({"u": _word(u), "v": _word(v), "value": val.to_json(), "matches": ok})
    return {"table": rows, "cross_check": ok_all}


def cmd_graded(s: Session):
    rng = random.Random(s.cfg.get("seed", 0))
    samples = s.cfg.get("samples", 10)
    alg = s.alg
    nh = NilHecke(alg)
    half = s.L // 2
    eta_ok = 0
    for _ in range(samples):
        z1 = random_member(alg, rng, half)
        z2 = random_member(alg, rng, s.L - half)
        i1, i2 = filtration_degree(alg, z1), filtration_degree(alg, z2)
        if i1 is None or i2 is None:
            eta_ok += 1
            continue
        lhs = eta(nh, alg, alg.mul(z1, z2), i1 + i2)
        rhs = nh.product(eta(nh, alg, z1, i1), eta(nh, alg, z2, i2))
        eta_ok += lhs.equals(rhs)
    phi_ok = 0
    for _ in range(samples):
        f, g = random_dual(alg, rng, s.L), random_dual(alg, rng, s.L)
        i, j = dual_filtration_degree(f), dual_filtration_degree(g)
        if i is None or j is None:
            phi_ok += 1
            continue
        phi_ok += phi(nh, dual_product(f, g), i + j).equals(phi(nh, f, i) * phi(nh, g, j))
    bad = leading_degree_failures(alg, nh)
    return {"samples": samples, "seed": s.cfg.get("seed", 0),
            "eta_multiplicative": eta_ok, "phi_multiplicative": phi_ok,
            "leading_degree_failures": [[_word(v), _word(w), why] for v, w, why in bad]}


def cmd_hecke(s: Session):
    H = HeckeAlgebra(s.datum, s.law, s.N, s.L)
    n = s.datum.n
    rng = random.Random(s.cfg.get("seed", 0))
    conj = []
    for w in H.slice:
        if 2 * w.length + 1 > s.L:
            continue
        for i in range(n):
            conj.append(H.conjugation_defect(w, i).is_zero())
    report = {
        "quadratic": [H.quadratic_defect(i).is_zero() for i in range(n)],
        "commutation": [H.commutation_defect(i, random_polynomial(H.fga.ring, rng, 3)).is_zero()
                        for i in range(n)],
        "conjugation": {"checked": len(conj), "ok": all(conj)},
    }
    exp = []
    for w in H.slice:
        T = H.T_word(w.word)
        exp.append({"w": _word(w), "expansion": T.to_json()["support"],
                    "top_coefficient_ok": T[w].equals(H.top_coefficient(w))})
    report["T_expansions"] = exp
    if "element" in s.cfg:
        z = s.element_arg(H.alg)
        ok, res = H.membership(z)
        if ok:
            report["membership"] = {"member": True, "coefficients": [
                {"w": _word(w), "coeff": p.to_json()} for w, p in sorted(res.items())]}
        else:
            report["membership"] = {"member": False, "witness": {"w": _word(res[0]), "reason": res[1]}}
    return report


def cmd_rootpoly(s: Session):
    ctx = RootPolyContext(s.datum, s.law, s.N, s.L)
    word = s.word_arg("word", default=[i + 1 for i in s.slice.elements[-1].word])
    w = ctx.slice.reduce_word(word)
    if w.length != len(word):
        raise ConfigError("rootpoly needs a reduced word")
    out = {"word": [i + 1 for i in word], "y_variables": list(ctx.y_names)}
    for flavor in ("X", "Y"):
        R = root_polynomial(ctx, word, flavor)
        K = K_coefficients(R)
        ev = evaluate(R)
        target = ctx.alg.delta(w)
        if flavor == "Y":
            target = target.scale(theta(ctx, w))
        out[flavor] = {
            "R": R.element.to_json()["support"],
            "K": [{"v": _word(v), "coeff": q.to_json()} for v, q in sorted(K.items())],
            "ev_ok": ev.equals(target),
        }
    indep = []
    for u in ctx.slice:
        words = reduced_words(ctx.slice, u)
        if len(words) > 1:
            base = root_polynomial(ctx, words[0], "X")
            same = all(root_polynomial(ctx, x, "X").equals(base) for x in words[1:])
            indep.append({"w": _word(u), "words": [[i + 1 for i in x] for x in words], "independent": same})
    out["independence"] = indep
    out["coefficient_identities"] = {
        flavor: {"failures": [[_word(a), _word(b)] for a, b in coefficient_identity_failures(ctx, flavor)],
                 "literal_failures": len(coefficient_identity_failures(ctx, flavor, literal=True))}
        for flavor in ("X", "Y")}
    return out


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def run(cfg: dict, command: str, allow_low_precision=False, warn=None) -> dict:
    if command not in HANDLERS:
        raise ConfigError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")
    session = Session(cfg, allow_low_precision, warn)
    report = session.header(command)
    report["result"] = HANDLERS[command](session)
    return report


def dumps(report) -> str:
    return json.dumps(report, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"


def main(argv=None):
    p = argparse.ArgumentParser(prog="formal-demazure", description=__doc__.splitlines()[0])
    p.add_argument("--config", required=True, help="JSON session config")
    p.add_argument("--command", required=True, choices=COMMANDS)
    p.add_argument("--out", default="-", help="output path, or - for stdout")
    p.add_argument("--jobs", type=int, default=1, help="worker count (results never depend on it)")
    p.add_argument("--allow-low-precision", action="store_true",
                   help="run even when N < 2L + 2")
    args = p.parse_args(argv)

    def warn(msg):
        print(msg, file=sys.stderr)

    try:
        if args.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
        with open(args.config) as fh:
            cfg = json.load(fh)
        report = run(cfg, args.command, args.allow_low_precision, warn)
    except (ConfigError, json.JSONDecodeError, OSError) as exc:
        warn(f"config error: {exc}")
        return EXIT_CONFIG
    except OutOfSlice as exc:
        warn(f"out of slice: {exc}")
        return EXIT_SLICE
    except (PrecisionError, NotDivisible) as exc:
        warn(f"precision: {exc}")
        return EXIT_PRECISION
    text = dumps(report)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
