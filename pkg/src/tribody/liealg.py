"""Differential-operator realizations of the hidden algebras and their expressions.

Each algebra lives on one chart. Expressions are noncommutative polynomials in
generator names; expanding one composes the realizations left to right.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import sympy

from .diffop import DiffOp
from .exactmath import MultiPoly
from .report import CheckReport
from .spectra import PolySpace, invariance_check

ALGEBRAS = {
    "sl4_b4": ("rho12", "rho13", "rho23"),
    "sl3_b2": ("si2", "si3"),
    "h3": ("tau1", "tau2", "tau3"),
    "g2": ("tau1", "tau2"),
    "sl2": ("tau1",),
}


class UnknownGenerator(KeyError):
    pass


class UnknownExpression(KeyError):
    pass


def chart_of_algebra(alg: str) -> tuple:
    try:
        return ALGEBRAS[alg]
    except KeyError:
        raise KeyError(f"unknown algebra {alg!r}; expected one of {sorted(ALGEBRAS)}") from None


# realizations --------------------------------------------------------------

def _affine(chart, N):
    """Generators of the maximal affine subalgebra of sl(n+1) on an n-variable chart."""
    n = len(chart)
    u = MultiPoly.vars(chart)
    d = [DiffOp.d(chart, i) for i in range(n)]
    euler = sum((u[i] * d[i] for i in range(n)), DiffOp.zero(chart))
    J0 = euler - N
    gens = {"J0": J0}
    for i in range(n):
        gens[f"J-_{i + 1}"] = d[i]
        gens[f"J+_{i + 1}"] = u[i] * J0
        for j in range(n):
            gens[f"J0_{i + 1}{j + 1}"] = u[i] * d[j]
    return gens


def _h3(N):
    chart = ALGEBRAS["h3"]
    t1, t2, t3 = MultiPoly.vars(chart)
    D = lambda *ix: DiffOp.d(chart, *ix)
    T0 = t1 * D(0) + 2 * t2 * D(1) + 3 * t3 * D(2) - N
    one = DiffOp.identity(chart)
    first = {
        "T0^1": D(0), "T0^2": D(1), "T0^3": D(2),
        "T1^1": t1 * D(0), "T2^2": t2 * D(1), "T3^3": t3 * D(2),
        "T1^3": t1 * D(2), "T11^3": t1**2 * D(2), "T111^3": t1**3 * D(2),
        "T1^2": t1 * D(1), "T11^2": t1**2 * D(1), "T2^3": t2 * D(2),
        "T12^3": t1 * t2 * D(2),
        "T2^11": t2 * D(0, 0), "T22^13": t2**2 * D(0, 2), "T222^33": t2**3 * D(2, 2),
        "T3^12": t3 * D(0, 1), "T3^22": t3 * D(1, 1), "T13^22": t1 * t3 * D(1, 1),
        "T3^111": t3 * D(0, 0, 0), "T33^222": t3**2 * D(1, 1, 1),
        "T0": T0,
    }
    second = {
        "T1+": t1 * T0,
        "T2,-1+": t2 * D(0) * T0,
        "T3,-2+": t3 * D(1) * T0,
        "T22,-3+": t2**2 * D(2) * T0,
        "T2+": t2 * T0 * (T0 + one),
        "T3,-11+": t3 * D(0, 0) * T0,
        "T3,-1+": t3 * D(0) * T0 * (T0 + one),
        "T3+": t3 * T0 * (T0 + one) * (T0 + 2 * one),
    }
    return first, second


def _g2(N):
    chart = ALGEBRAS["g2"]
    t1, t2 = MultiPoly.vars(chart)
    d1, d2 = DiffOp.d(chart, 0), DiffOp.d(chart, 1)
    third = Fraction(N, 3)
    return {
        "t1": d1,
        "t2": t1 * d1 - third,
        "t3": 2 * t2 * d2 - third,
        "t4": t1**2 * d1 + 2 * t1 * t2 * d2 - N * t1 * DiffOp.identity(chart),
        "r0": d2, "r1": t1 * d2, "r2": t1**2 * d2,
    }


def _sl2(N):
    chart = ALGEBRAS["sl2"]
    (t,) = MultiPoly.vars(chart)
    d = DiffOp.d(chart, 0)
    return {"J+": t**2 * d - N * t * DiffOp.identity(chart), "J0": 2 * t * d - N, "J-": d}


@lru_cache(maxsize=None)
def generators(alg: str, N: int = 0) -> dict:
    """All generators of alg at parameter N, keyed by canonical name."""
    chart = chart_of_algebra(alg)
    if alg in ("sl4_b4", "sl3_b2"):
        return _affine(chart, N)
    if alg == "h3":
        first, second = _h3(N)
        return {**first, **second}
    if alg == "g2":
        return _g2(N)
    return _sl2(N)


def h3_classes(N: int = 0) -> tuple[dict, dict]:
    return _h3(N)


_SUP = str.maketrans({"⁰": "0", "¹": "1", "²": "2", "³": "3", "⁺": "+", "⁻": "-", "₀": "0",
                      "₁": "1", "₂": "2", "₃": "3"})


def _key(name: str) -> str:
    s = name.translate(_SUP).replace("(N)", "").replace(" ", "")
    for ch in "_{}()":
        s = s.replace(ch, "")
    return s.replace("^+", "+")


def normalize_name(alg: str, name: str) -> str:
    """Map a generator spelling (unicode super/subscripts, '(N)', TeX braces) to its canonical name."""
    gens = generators(alg, 0)
    if name in gens:
        return name
    table = {_key(k): k for k in gens}
    k = _key(name)
    if k in table:
        return table[k]
    raise UnknownGenerator(f"{name!r} is not a generator of {alg}")


def generator(alg: str, name: str, N: int = 0) -> DiffOp:
    return generators(alg, int(N))[normalize_name(alg, name)]


# expressions -----------------------------------------------------------------

@dataclass(frozen=True)
class AlgExpr:
    expr_id: str
    algebra: str
    target: str
    scale: Fraction
    terms: tuple  # ((coefficient source, (word...)), ...)
    params: tuple = ()
    fixed: tuple = ()
    derived_expression: bool = False
    anchor: str = ""

    def words(self):
        return [w for _, w in self.terms]

    def coefficients(self, values: dict) -> list[Fraction]:
        return [_eval_coeff(src, values) for src, _ in self.terms]


@lru_cache(maxsize=None)
def _sym(src: str):
    return sympy.sympify(src, locals={n: sympy.Symbol(n) for n in ("gamma", "omega", "N", "A", "d", "k")})


def _eval_coeff(src, values) -> Fraction:
    e = _sym(str(src))
    subs = {s: sympy.Rational(values[s.name]) for s in e.free_symbols}
    v = sympy.nsimplify(e.subs(subs)) if subs else e
    if not v.is_Rational:
        raise ValueError(f"coefficient {src!r} is not rational at {values}")
    return Fraction(int(v.p), int(v.q))


@lru_cache(maxsize=1)
def load_expressions() -> dict[str, AlgExpr]:
    raw = json.loads(resources.files("tribody").joinpath("data/expressions.json").read_text())
    out = {}
    for e in raw["expressions"]:
        out[e["id"]] = AlgExpr(
            expr_id=e["id"], algebra=e["algebra"], target=e["target"], scale=Fraction(e["scale"]),
            terms=tuple((str(c), tuple(w)) for c, w in e["terms"]),
            params=tuple(e.get("params", ())), fixed=tuple(sorted(e.get("fixed", {}).items())),
            derived_expression=bool(e.get("derived_expression", False)), anchor=e.get("anchor", ""))
    return out


def expression(expr_id: str) -> AlgExpr:
    try:
        return load_expressions()[expr_id]
    except KeyError:
        raise UnknownExpression(f"no Lie expression {expr_id!r}") from None


def expand(expr: AlgExpr | list, alg: str | None = None, N: int = 0, values: dict | None = None) -> DiffOp:
    """Compose the realizations word by word; coefficients are evaluated at values.

    A plain list of (coefficient, word) pairs is accepted too, with alg given.
    """
    if isinstance(expr, AlgExpr):
        alg = alg or expr.algebra
        terms = expr.terms
    else:
        terms = tuple(expr)
    if alg is None:
        raise ValueError("algebra must be given for a bare term list")
    chart = chart_of_algebra(alg)
    vals = dict(values or {})
    vals.setdefault("N", N)
    gens = generators(alg, int(N))
    total = DiffOp.zero(chart)
    for src, word in terms:
        c = _eval_coeff(src, vals) if isinstance(src, str) else Fraction(src)
        if c == 0:
            continue
        op = DiffOp.identity(chart)
        for name in word:
            op = op * gens[normalize_name(alg, name)]
        total = total + c * op
    return total


def verify_realization(expr_id: str, params=None) -> CheckReport:
    """Expand the expression and compare with scale * target from the catalog, exactly.

    If the printed target disagrees but the derived variant of the target
    agrees, the result is reported as an erratum rather than a failure.
    """
    from .models import ModelParams, UnknownModel, operator_of
    ex = expression(expr_id)
    params = params or ModelParams()
    fixed = dict(ex.fixed)
    if fixed:
        params = params.with_(**fixed)
    values = params.to_dict()
    values = {k: v for k, v in values.items() if not isinstance(v, (list, tuple))}
    N = int(params.N)
    lhs = expand(ex, ex.algebra, N, values)
    rep = CheckReport(f"lie:{expr_id}", {"expr": expr_id, "target": ex.target, **{p: values[p] for p in ex.params}})

    def residual(target_id):
        return lhs - ex.scale * operator_of(target_id, params)

    res = residual(ex.target)
    rep.add("target", ex.target, "0" if res.is_zero() else str(res), res.is_zero())
    if ex.derived_expression:
        rep.notes = "expression assembled from the generators, not transcribed"
    if res.is_zero():
        return rep
    try:
        alt = residual(ex.target + "_derived")
    except UnknownModel:
        return rep
    if alt.is_zero():
        rep.add("derived_target", ex.target + "_derived", "0", True)
        rep.as_erratum(f"expansion matches {ex.target}_derived but not the printed {ex.target}")
    else:
        rep.add("derived_target", ex.target + "_derived", str(alt), False)
    return rep


# flags -----------------------------------------------------------------------

def sl4_flag_check(N_max: int = 4, alg: str = "sl4_b4") -> CheckReport:
    """Every generator at parameter N maps P_N into itself, N = 0..N_max."""
    chart = chart_of_algebra(alg)
    rep = CheckReport(f"flag:{alg}", {"N_max": N_max})
    for N in range(N_max + 1):
        space = PolySpace(chart, (1,) * len(chart), N)
        for name, op in sorted(generators(alg, N).items()):
            r = invariance_check(op, space)
            rep.add("generator", f"{name} N={N}", "0" if r.ok else r.failures()[0]["residual"], r.ok)
    return rep


def h3_flag_check(N_max: int = 6, raise_from: int = 2) -> CheckReport:
    """First class preserves P^(1,2,3)_N for all N <= N_max.

    Second class at parameter N preserves P^(1,2,3)_N and leaves P^(1,2,3)_(N+1);
    the escape is tested from N = raise_from on, since below that the lowering
    factor of some raising generators annihilates the whole space.
    """
    chart = ALGEBRAS["h3"]
    rep = CheckReport("flag:h3", {"N_max": N_max})
    for N in range(N_max + 1):
        first, second = h3_classes(N)
        space = PolySpace(chart, (1, 2, 3), N)
        for name, op in sorted(first.items()):
            r = invariance_check(op, space)
            rep.add("first", f"{name} N={N}", "0" if r.ok else r.failures()[0]["residual"], r.ok)
        for name, op in sorted(second.items()):
            r = invariance_check(op, space)
            rep.add("second", f"{name} N={N}", "0" if r.ok else r.failures()[0]["residual"], r.ok)
            if N >= raise_from:
                up = invariance_check(op, PolySpace(chart, (1, 2, 3), N + 1))
                witness = up.failures()[0] if up.failures() else None
                rep.add("second_escape", f"{name} N={N} on N+1",
                        f"{witness['basis']} -> {witness['residual']}" if witness else "no witness",
                        witness is not None)
    return rep


def qpt_image(N: int, a, b, c) -> list:
    """Images of the P^(1,2,3)_N basis under tau2 -> tau2 + a tau1^2, tau3 -> tau3 + b tau1 tau2 + c tau1^3."""
    chart = ALGEBRAS["h3"]
    t1, t2, t3 = MultiPoly.vars(chart)
    images = (t1, t2 + Fraction(a) * t1**2, t3 + Fraction(b) * t1 * t2 + Fraction(c) * t1**3)
    space = PolySpace(chart, (1, 2, 3), N)
    return [(e, space.monomial(e).compose(images)) for e in space.basis]


def qpt_check(N_max: int = 5, draws: int = 3, seed: int = 0) -> CheckReport:
    rng = random.Random(seed)
    rep = CheckReport("qpt:h3", {"N_max": N_max, "draws": draws, "seed": seed})
    for _ in range(draws):
        abc = [Fraction(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(3)]
        for N in range(N_max + 1):
            space = PolySpace(ALGEBRAS["h3"], (1, 2, 3), N)
            bad = [space.label(e) for e, img in qpt_image(N, *abc) if not space.contains_poly(img)]
            rep.add("draw", f"ABC={[str(x) for x in abc]} N={N}", ", ".join(bad) or "0", not bad)
    return rep
