"""The model catalog: operators, potentials, gauge factors, energies, metrics and charts.

Every entry is keyed by a string id and built from a ``ModelParams`` record.
"printed" entries transcribe the published closed forms literally, with the
coefficient of a mixed derivative d_a d_b taken as written. "derived" entries
rebuild the same object from an independent route (chain rule or gauge
rotation) so the two can be compared.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace
from fractions import Fraction
from math import comb
from typing import Callable

import mpmath

from .charts import NumericChart, PolyMap, derive_pushforward, pull_gauge, restrict_to
from .diffop import DiffOp, GaugeFactor, PhaseFunction, extract_scalar, gauge_conjugate
from .exactmath import MultiPoly, RatFunc, rat

R3 = ("r12", "r13", "r23")
RHO = ("rho12", "rho13", "rho23")
TAU = ("tau1", "tau2", "tau3")
TAU12 = ("tau1", "tau2")
TAU1 = ("tau1",)
PST = ("P", "S", "T")
PS = ("P", "S")
P1 = ("P",)
PT = ("P", "T")
RHO_S = ("rho12", "rho13", "S", "rho23")
RHO2 = ("rho12", "rho13", "rho23")
R2 = ("r12", "r23")
RR = ("r12", "r13")
XI = ("xi1", "xi2")
SI = ("si2", "si3")
LA = ("la1", "la2")
Q = ("q1", "q2")
TU = ("t", "u")
W = ("w1", "w2", "w3")
W12 = ("w1", "w2")
WM = ("W1", "W3", "W4")
ANG = ("r12", "r13", "r23", "theta", "Sarea")


# parameters --------------------------------------------------------------

@dataclass(frozen=True)
class ModelParams:
    d: Fraction = Fraction(3)
    gamma: Fraction = Fraction(0)
    gammaTilde: Fraction = Fraction(0)
    omega: Fraction = Fraction(1)
    A: Fraction = Fraction(0)
    N: int = 0
    k: Fraction = Fraction(1)
    p: int = 0
    masses: tuple = (Fraction(1), Fraction(1), Fraction(1))
    alpha: Fraction = Fraction(0)
    beta: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("d", "gamma", "gammaTilde", "omega", "A", "k", "alpha", "beta"):
            val = getattr(self, name)
            if isinstance(val, float):
                raise TypeError(f"parameter {name} must be rational, got a float")
            object.__setattr__(self, name, rat(val))
        for name in ("N", "p"):
            val = getattr(self, name)
            q = rat(val) if not isinstance(val, int) else Fraction(val)
            if q.denominator != 1:
                raise ValueError(f"parameter {name} must be an integer, got {val}")
            object.__setattr__(self, name, int(q))
        ms = tuple(self.masses)
        if len(ms) != 3:
            raise ValueError("masses must be a triple")
        if any(isinstance(m, float) for m in ms):
            raise TypeError("masses must be rational")
        ms = tuple(rat(m) for m in ms)
        object.__setattr__(self, "masses", ms)
        if any(m <= 0 for m in ms):
            raise ValueError("masses must be positive")
        if self.omega < 0:
            raise ValueError("omega must be nonnegative")
        if self.A < 0:
            raise ValueError("A must be nonnegative")
        if self.N < 0:
            raise ValueError("N must be a nonnegative integer")
        if self.k <= 0:
            raise ValueError("k must be positive")

    def with_(self, **kw) -> "ModelParams":
        return replace(self, **kw)

    @classmethod
    def from_dict(cls, data: dict | None) -> "ModelParams":
        data = dict(data or {})
        unknown = set(data) - {f.name for f in fields(cls)}
        if unknown:
            raise ValueError(f"unknown parameters: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self, names=None) -> dict:
        out = asdict(self)
        if names is not None:
            out = {k: v for k, v in out.items() if k in names}
        return out


def _params(params: ModelParams | dict | None, kw: dict) -> ModelParams:
    if params is None:
        params = ModelParams()
    elif isinstance(params, dict):
        params = ModelParams.from_dict(params)
    return params.with_(**kw) if kw else params


# registry ----------------------------------------------------------------

KINDS = ("operator", "potential", "gauge", "energy", "metric", "determinant", "scalar",
         "phase", "invariants", "chart")


@dataclass(frozen=True)
class Entry:
    model_id: str
    kind: str
    chart: tuple
    params: tuple
    anchor: str
    tags: tuple = ()
    variant: str = "printed"
    numeric_only: bool = False
    build: Callable = field(default=None, repr=False, compare=False)

    def to_json(self) -> dict:
        out = {
            "id": self.model_id,
            "kind": self.kind,
            "chart": list(self.chart),
            "params": list(self.params),
            "anchor": self.anchor,
            "tags": list(self.tags),
            "variant": self.variant,
        }
        if self.numeric_only:
            out["numeric_only"] = True
        return out


CATALOG: dict[str, Entry] = {}


def _entry(model_id, kind, chart, params=(), anchor="", tags=(), variant="printed", numeric_only=False):
    assert kind in KINDS, kind

    def deco(fn):
        if model_id in CATALOG:
            raise KeyError(f"duplicate catalog id {model_id}")
        CATALOG[model_id] = Entry(model_id, kind, tuple(chart), tuple(params), anchor, tuple(tags),
                                  variant, numeric_only, fn)
        return fn
    return deco


class UnknownModel(KeyError):
    pass


def entry(model_id: str) -> Entry:
    try:
        return CATALOG[model_id]
    except KeyError:
        raise UnknownModel(model_id) from None


def object_of(model_id: str, params: ModelParams | dict | None = None, **kw):
    e = entry(model_id)
    return e.build(_params(params, kw))


def _typed(kind):
    def get(model_id: str, params: ModelParams | dict | None = None, **kw):
        e = entry(model_id)
        if e.kind != kind:
            raise TypeError(f"{model_id} has kind {e.kind}, expected {kind}")
        return e.build(_params(params, kw))
    get.__name__ = f"{kind}_of"
    get.__doc__ = f"Build the {kind} registered under ``model_id``."
    return get


operator_of = _typed("operator")
potential_of = _typed("potential")
gauge_of = _typed("gauge")
ground_energy_of = _typed("energy")
metric_of = _typed("metric")
determinant_of = _typed("determinant")
chart_of = _typed("chart")


def exact_operator_of(model_id: str, params=None, **kw) -> DiffOp:
    """Like operator_of, but refuses operators that only live on numeric charts."""
    if entry(model_id).numeric_only:
        raise ValueError(f"{model_id} lives on a numeric chart and has no exact chart check")
    return operator_of(model_id, params, **kw)


def catalog_ids(tag: str | None = None, kind: str | None = None) -> list[str]:
    out = []
    for mid, e in CATALOG.items():
        if tag is not None and tag not in e.tags:
            continue
        if kind is not None and e.kind != kind:
            continue
        out.append(mid)
    return sorted(out)


def catalog_json(tag: str | None = None) -> list[dict]:
    return [CATALOG[m].to_json() for m in catalog_ids(tag)]


def write_catalog(path) -> None:
    with open(path, "w") as fh:
        json.dump({"schema": "catalog/v1", "entries": catalog_json()}, fh, indent=2, sort_keys=True)


# small builders ----------------------------------------------------------

def _D(chart):
    return lambda *names: DiffOp.d(chart, *names)


def _euler(chart, weights):
    D = _D(chart)
    xs = MultiPoly.vars(chart)
    return sum((w * x * D(v) for w, x, v in zip(weights, xs, chart)), DiffOp.zero(chart))


def _taus(chart):
    a, b, c = MultiPoly.vars(chart)
    return a + b + c, a * b + a * c + b * c, a * b * c


def _one(chart):
    return DiffOp.identity(chart)


# charts ------------------------------------------------------------------

@_entry("rho_of_r", "chart", RHO, anchor="squared relative distances rho_ij = r_ij^2")
def _rho_of_r(p):
    x = MultiPoly.vars(R3)
    return PolyMap(R3, RHO, [v * v for v in x], "rho_of_r")


@_entry("tau_of_rho", "chart", TAU, anchor="elementary symmetric polynomials of the rho_ij")
def _tau_of_rho(p):
    return PolyMap(RHO, TAU, list(_taus(RHO)), "tau_of_rho")


@_entry("pst_of_rho", "chart", PST, anchor="geometric variables: perimeter-square sum P, squared area S, product T")
def _pst_of_rho(p):
    t1, t2, t3 = _taus(RHO)
    return PolyMap(RHO, PST, [t1, (4 * t2 - t1 * t1) / 16, t3], "pst_of_rho")


@_entry("pst_of_tau", "chart", PST, anchor="geometric variables expressed through tau")
def _pst_of_tau(p):
    t1, t2, t3 = MultiPoly.vars(TAU)
    return PolyMap(TAU, PST, [t1, (4 * t2 - t1 * t1) / 16, t3], "pst_of_tau")


@_entry("S_chart_of_rho", "chart", ("rho12", "rho13", "S"),
        anchor="(rho12, rho13, S) coordinates exposing the degeneration at zero area")
def _s_chart(p):
    r1, r2, r3 = MultiPoly.vars(RHO)
    t1, t2, _ = _taus(RHO)
    return PolyMap(RHO, ("rho12", "rho13", "S"), [r1, r2, (4 * t2 - t1 * t1) / 16], "S_chart_of_rho")


@_entry("pt_of_r", "chart", PT, tags=("d1",), anchor="(P, T) on the line, with r13 = r12 + r23")
def _pt_of_r(p):
    a, b = MultiPoly.vars(R2)
    c = a + b
    return PolyMap(R2, PT, [a * a + b * b + c * c, a * a * b * b * c * c], "pt_of_r")


@_entry("xi_of_r", "chart", XI, tags=("d1",), anchor="S2-symmetric variables xi1 = r12 + r23, xi2 = r12 r23")
def _xi_of_r(p):
    a, b = MultiPoly.vars(R2)
    return PolyMap(R2, XI, [a + b, a * b], "xi_of_r")


@_entry("si_of_xi", "chart", SI, tags=("d1",), anchor="sigma2 = xi2 - xi1^2, sigma3 = -xi1 xi2")
def _si_of_xi(p):
    x1, x2 = MultiPoly.vars(XI)
    return PolyMap(XI, SI, [x2 - x1 * x1, -x1 * x2], "si_of_xi")


@_entry("la_of_xi", "chart", LA, tags=("d1",), anchor="lambda1 = xi2 - xi1^2, lambda2 = xi1^2 xi2^2")
def _la_of_xi(p):
    x1, x2 = MultiPoly.vars(XI)
    return PolyMap(XI, LA, [x2 - x1 * x1, x1 * x1 * x2 * x2], "la_of_xi")


def jacobi_matrix(printed: bool = False):
    """Squared scale factors of (q1, q2) in terms of (r12, r23), with r13 = r12 + r23.

    q1 = s1 r12 and q2 = s2 (r13 + r23) = s2 (r12 + 2 r23); returns (s1^2, s2^2).
    """
    return (Fraction(1, 2), Fraction(2, 3) if printed else Fraction(1, 6))


@_entry("tu_of_q", "chart", TU, ("k",), tags=("d1", "ttw"),
        anchor="dihedral invariants t = q1^2 + q2^2, u = Im((q1 + i q2)^k)^2")
def _tu_of_q(p):
    k = p.k
    if k.denominator != 1:
        raise ValueError(f"tu_of_q has a polynomial form only for integer k, got {k}")
    k = int(k)
    q1, q2 = MultiPoly.vars(Q)
    im = MultiPoly.zero(Q)
    for j in range(1, k + 1, 2):
        sign = -1 if (j // 2) % 2 else 1
        im = im + sign * comb(k, j) * q1 ** (k - j) * q2 ** j
    return PolyMap(Q, TU, [q1 * q1 + q2 * q2, im * im], "tu_of_q")


def _region_a(pt):
    a, b, c = (Fraction(x) if isinstance(x, (int, str)) else x for x in pt)
    return c > b > a > 0 and 2 * (a * b + a * c + b * c) - (a * a + b * b + c * c) > 0


def _w_fn(p, ctx):
    r12, r13, r23 = p
    w1 = r12 + r13 + r23
    w2 = 2 * ctx.sqrt(r12 ** 2 + r13 ** 2 + r23 ** 2 - r12 * r13 - r12 * r23 - r13 * r23)
    s3 = ctx.sqrt(3)
    arg = (2 * ctx.sqrt(2) / w2 ** 3
           * ((2 - s3) * r13 - r23 + (s3 - 1) * r12)
           * (2 * r23 - (1 + s3) * r13 + (s3 - 1) * r12)
           * ((2 + s3) * r12 - (1 + s3) * r13 - r23))
    return [w1, w2, -s3 / 9 * ctx.asin(arg)]


@_entry("w_of_rho", "chart", W, numeric_only=True,
        anchor="coordinates (w1, w2, w3) adapted to the rotation symmetry; region rho23 > rho13 > rho12")
def _w_of_rho(p):
    return NumericChart(RHO, W, _w_fn, _region_a, "w_of_rho")


@_entry("w12_of_rho", "chart", W12, numeric_only=True, anchor="the invariant pair (w1, w2)")
def _w12_of_rho(p):
    return NumericChart(RHO, W12, lambda x, ctx: _w_fn(x, ctx)[:2], _region_a, "w12_of_rho")


def _mass_data(masses):
    m1, m2, m3 = masses
    M = m1 + m2 + m3
    return m1, m2, m3, M


def _AB_exact(masses):
    """A / Omega and B as polynomials on RHO (A itself carries the irrational Omega)."""
    m1, m2, m3, M = _mass_data(masses)
    r12, r13, r23 = MultiPoly.vars(RHO)
    a_over = -(m2 * (m1 + m3) * r12 - m3 * (m1 + m2) * r13) / (m2 * m3 * (m1 + m2) * (m1 + m3))
    B = -((m1 + m2) * (m1 + m3) * r23 - m1 * (m1 + m3) * r12 - m1 * (m1 + m2) * r13) / ((m1 + m2) * (m1 + m3))
    return a_over, B


def _S_region(pt):
    a, b, c = (Fraction(x) if isinstance(x, (int, str)) else x for x in pt)
    return min(a, b, c) > 0 and 2 * (a * b + a * c + b * c) - (a * a + b * b + c * c) > 0


@_entry("W3_chart", "chart", WM, ("masses",), tags=("masses",), numeric_only=True,
        anchor="unequal-mass coordinates (W1, W3, W4) with W3 the angle of (A, B)")
def _w3_chart(p):
    m1, m2, m3, M = _mass_data(p.masses)
    a_over, B = _AB_exact(p.masses)
    W1 = _W1(p.masses)

    def fn(x, ctx):
        om = ctx.sqrt(ctx.mpf(m1.numerator) / m1.denominator * m2 * m3 * M)
        a = a_over.eval_float(x, ctx) * om
        b = B.eval_float(x, ctx)
        mm = ctx.mpf((m1 * m2 * m3).numerator) / (m1 * m2 * m3).denominator
        return [W1.eval_float(x, ctx), mm / (2 * om) * ctx.atan2(b, a), a * a + b * b]
    return NumericChart(RHO, WM, fn, _S_region, "W3_chart")


def _W1(masses):
    m1, m2, m3 = masses
    r12, r13, r23 = MultiPoly.vars(RHO)
    return r12 / m3 + r13 / m2 + r23 / m1


# r-representation --------------------------------------------------------

def _bracket_r(d):
    """The bracketed operator of the r-representation, i.e. twice the radial part."""
    D = _D(R3)
    r12, r13, r23 = MultiPoly.vars(R3)
    op = 2 * (D("r12", "r12") + D("r23", "r23") + D("r13", "r13"))
    op = op + (2 * (d - 1) / r12) * D("r12") + (2 * (d - 1) / r23) * D("r23") + (2 * (d - 1) / r13) * D("r13")
    op = op + ((r12 ** 2 - r13 ** 2 + r23 ** 2) / (r12 * r23)) * D("r12", "r23")
    op = op + ((r12 ** 2 + r13 ** 2 - r23 ** 2) / (r12 * r13)) * D("r12", "r13")
    op = op + ((r13 ** 2 + r23 ** 2 - r12 ** 2) / (r13 * r23)) * D("r23", "r13")
    return op


@_entry("DeltaR_r", "operator", R3, ("d",), anchor="radial kinetic operator in relative distances")
def _deltaR_r(p):
    return Fraction(1, 2) * _bracket_r(p.d)


@_entry("Kinetic_r", "operator", R3, ("d",),
        anchor="full bracket of the r-representation (twice the radial operator)")
def _kinetic_r(p):
    return _bracket_r(p.d)


@_entry("DtildeAngular_d2", "operator", ANG,
        anchor="angular remainder at d = 2; Sarea is a parameter variable (triangle area)")
def _dtilde(p):
    D = _D(ANG)
    r12, r13, r23, th, S = MultiPoly.vars(ANG)
    pr = r12 ** 2 * r23 ** 2 * r13 ** 2
    op = (-12 * S * r12 ** 3 / pr) * D("r12", "theta")
    op = op + (-12 * S * r23 ** 3 / pr) * D("r23", "theta")
    op = op + (-12 * S * r13 ** 3 / pr) * D("r13", "theta")
    return op + (12 * (r12 ** 4 + r23 ** 4 + r13 ** 4) / pr) * D("theta", "theta")


@_entry("Det_r", "determinant", R3, anchor="determinant of the r-metric, proportional to P S^2")
def _det_r(p):
    r12, r13, r23 = MultiPoly.vars(R3)
    heron = (r12 + r13 - r23) * (r12 + r23 - r13) * (r13 + r23 - r12) * (r12 + r13 + r23)
    return 12 * (r12 ** 2 + r23 ** 2 + r13 ** 2) * (heron / 16) / (r12 ** 2 * r23 ** 2 * r13 ** 2)


@_entry("Metric_r", "metric", R3, anchor="contravariant metric of the full r-bracket")
def _metric_r(p):
    r12, r13, r23 = MultiPoly.vars(R3)
    c = lambda a, b, e: (a ** 2 + b ** 2 - e ** 2) / (2 * a * b)
    m = [[2, c(r12, r13, r23), c(r12, r23, r13)],
         [c(r12, r13, r23), 2, c(r13, r23, r12)],
         [c(r12, r23, r13), c(r13, r23, r12), 2]]
    return [[RatFunc.const(R3, x) if isinstance(x, int) else x for x in row] for row in m]


# rho-representation ------------------------------------------------------

def _deltaR_rho_core(d):
    D = _D(RHO)
    r12, r13, r23 = MultiPoly.vars(RHO)
    op = 4 * (r12 * D("rho12", "rho12") + r13 * D("rho13", "rho13") + r23 * D("rho23", "rho23"))
    op = op + 2 * ((r12 + r13 - r23) * D("rho12", "rho13") + (r12 + r23 - r13) * D("rho12", "rho23")
                   + (r13 + r23 - r12) * D("rho13", "rho23"))
    return op + 2 * d * (D("rho12") + D("rho13") + D("rho23"))


@_entry("DeltaR_rho", "operator", RHO, ("d",), tags=("sl4",), anchor="radial operator in squared distances")
def _deltaR_rho(p):
    return _deltaR_rho_core(p.d)


@_entry("Metric_rho", "metric", RHO, anchor="linear contravariant metric in rho")
def _metric_rho(p):
    r12, r13, r23 = MultiPoly.vars(RHO)
    return [[4 * r12, r12 + r13 - r23, r12 + r23 - r13],
            [r12 + r13 - r23, 4 * r13, r13 + r23 - r12],
            [r12 + r23 - r13, r13 + r23 - r12, 4 * r23]]


@_entry("Det_rho", "determinant", RHO, anchor="factorized determinant of the rho-metric")
def _det_rho(p):
    r12, r13, r23 = MultiPoly.vars(RHO)
    return -6 * (r12 + r13 + r23) * (r12 ** 2 + r13 ** 2 + r23 ** 2 - 2 * (r12 * r13 + r12 * r23 + r13 * r23))


@_entry("Det_rho_tau", "determinant", RHO, anchor="determinant of the rho-metric written with tau1, tau2")
def _det_rho_tau(p):
    t1, t2, _ = _taus(RHO)
    return 6 * t1 * (4 * t2 - t1 * t1)


@_entry("DeltaR_rho_S_chart", "operator", RHO_S, ("d",),
        anchor="radial operator in (rho12, rho13, S); rho23 is a dependent variable")
def _deltaR_S(p):
    D = _D(RHO_S)
    r12, r13, S, r23 = MultiPoly.vars(RHO_S)
    P = r12 + r13 + r23
    op = 4 * (r12 * D("rho12", "rho12") + r13 * D("rho13", "rho13")) + (S * P / 2) * D("S", "S")
    op = op + 2 * (r12 + r13 - r23) * D("rho12", "rho13") + 8 * S * (D("rho12", "S") + D("rho13", "S"))
    return op + 2 * p.d * (D("rho12") + D("rho13")) + ((p.d - 1) * P / 4) * D("S")


@_entry("Metric_S_chart", "metric", RHO_S, anchor="metric in the (rho12, S, rho13) ordering")
def _metric_S(p):
    r12, r13, S, r23 = MultiPoly.vars(RHO_S)
    P = r12 + r13 + r23
    return [[4 * r12, 4 * S, r12 + r13 - r23], [4 * S, S * P / 2, 4 * S], [r12 + r13 - r23, 4 * S, 4 * r13]]


@_entry("Det_S_chart", "determinant", RHO_S, anchor="determinant in the S-chart, vanishing with S")
def _det_S(p):
    r12, r13, S, r23 = MultiPoly.vars(RHO_S)
    return -12 * S * (4 * S - r12 * r13) * r23


@_entry("DeltaR_rho_S0_d1", "operator", RHO2, tags=("d1",),
        anchor="d = 1, S = 0 reduction; rho23 = (sqrt(rho12) + sqrt(rho13))^2 is dependent")
def _deltaR_S0(p):
    D = _D(RHO2)
    r12, r13, r23 = MultiPoly.vars(RHO2)
    op = 4 * (r12 * D("rho12", "rho12") + r13 * D("rho13", "rho13"))
    return op + 2 * (r12 + r13 - r23) * D("rho12", "rho13") + 2 * (D("rho12") + D("rho13"))


@_entry("L1_rho", "operator", RHO, tags=("sl4",), anchor="first-order symmetry of the radial operator")
def _L1_rho(p):
    D = _D(RHO)
    r12, r13, r23 = MultiPoly.vars(RHO)
    return (r13 - r23) * D("rho12") + (r23 - r12) * D("rho13") + (r12 - r13) * D("rho23")


@_entry("DeltaLB_rho", "operator", RHO, anchor="d-independent Laplace-Beltrami operator in rho")
def _deltaLB_rho(p):
    D = _D(RHO)
    t1, _, _ = _taus(RHO)
    op = _deltaR_rho_core(0)
    return op - (3 / t1) * _euler(RHO, (1, 1, 1)) + 4 * (D("rho12") + D("rho23") + D("rho13"))


@_entry("Gamma_gauge", "gauge", RHO, ("d",), anchor="determinant gauge factor D^(-1/4) (4 tau2 - tau1^2)^((3-d)/4)")
def _gamma_gauge(p):
    t1, t2, _ = _taus(RHO)
    return GaugeFactor(RHO, [(t1, Fraction(-1, 4)), (4 * t2 - t1 * t1, (2 - p.d) / 4)])


@_entry("Veff", "potential", RHO, ("d",), anchor="effective potential of geometric nature")
def _veff(p):
    t1, t2, _ = _taus(RHO)
    return 9 / (8 * t1) - (p.d - 2) * (p.d - 4) / 2 * (t1 / (t1 * t1 - 4 * t2))


@_entry("RicciScalar_rho", "scalar", RHO, anchor="Ricci scalar of the rho-metric")
def _ricci(p):
    t1, t2, _ = _taus(RHO)
    return -(41 * t1 * t1 - 84 * t2) / (12 * t1 * (t1 * t1 - 4 * t2))


_MOMENTA = tuple("P_" + v for v in RHO)


@_entry("Classical_T", "phase", RHO + _MOMENTA, anchor="classical kinetic energy g^{mu nu} P_mu P_nu")
def _classical_T(p):
    ch = RHO + _MOMENTA
    x = MultiPoly.vars(ch)
    g = _metric_rho(p)
    val = MultiPoly.zero(ch)
    for i in range(3):
        for j in range(3):
            val = val + g[i][j].compose(x[:3]) * x[3 + i] * x[3 + j]
    return PhaseFunction(RHO, _MOMENTA, val)


@_entry("Classical_L1", "phase", RHO + _MOMENTA, anchor="classical counterpart of the symmetry L1")
def _classical_L1(p):
    ch = RHO + _MOMENTA
    r12, r13, r23, p12, p13, p23 = MultiPoly.vars(ch)
    return PhaseFunction(RHO, _MOMENTA, (r13 - r23) * p12 + (r23 - r12) * p13 + (r12 - r13) * p23)


# tau-representation ------------------------------------------------------

@_entry("DeltaR_tau", "operator", TAU, ("d",), tags=("h3",), anchor="radial operator in tau variables")
def _deltaR_tau(p):
    D = _D(TAU)
    t1, t2, t3 = MultiPoly.vars(TAU)
    d = p.d
    op = 6 * t1 * D("tau1", "tau1") + 2 * t1 * (7 * t2 - t1 * t1) * D("tau2", "tau2")
    op = op + 2 * t3 * (6 * t2 - t1 * t1) * D("tau3", "tau3") + 24 * t2 * D("tau1", "tau2")
    op = op + 36 * t3 * D("tau1", "tau3") + 2 * (9 * t3 * t1 + t2 * (4 * t2 - t1 * t1)) * D("tau2", "tau3")
    return op + 6 * d * D("tau1") + 2 * (2 * d + 1) * t1 * D("tau2") + 2 * ((d + 4) * t2 - t1 * t1) * D("tau3")


@_entry("Metric_tau", "metric", TAU, anchor="contravariant metric in tau variables")
def _metric_tau(p):
    t1, t2, t3 = MultiPoly.vars(TAU)
    off = 9 * t3 * t1 + 4 * t2 * t2 - t2 * t1 * t1
    return [[6 * t1, 12 * t2, 18 * t3], [12 * t2, 2 * t1 * (7 * t2 - t1 * t1), off],
            [18 * t3, off, 2 * t3 * (6 * t2 - t1 * t1)]]


@_entry("Det_tau", "determinant", TAU, anchor="determinant of the tau-metric as printed")
def _det_tau(p):
    t1, t2, t3 = MultiPoly.vars(TAU)
    return 6 * t1 * (4 * t2 - t1 * t1) * (2 * t1 * (9 * t2 - 2 * t1 * t1) * t3 - (4 * t2 - t1 * t1) - 27 * t3 ** 3)


@_entry("Det_tau_corrected", "determinant", TAU, variant="derived",
        anchor="determinant of the tau-metric computed from its entries")
def _det_tau_corrected(p):
    t1, t2, t3 = MultiPoly.vars(TAU)
    br = 2 * t1 * (9 * t2 - 2 * t1 * t1) * t3 - t2 * t2 * (4 * t2 - t1 * t1) - 27 * t3 ** 2
    return 6 * t1 * (4 * t2 - t1 * t1) * br


@_entry("L1sq_tau", "operator", TAU, tags=("h3",), anchor="the integral -L1^2 in tau variables")
def _L1sq_tau(p):
    D = _D(TAU)
    t1, t2, t3 = MultiPoly.vars(TAU)
    c2 = 27 * t3 * t3 - 18 * t3 * t2 * t1 + 4 * t3 * t1 ** 3 + 4 * t2 ** 3 - t2 * t2 * t1 * t1
    return c2 * D("tau3", "tau3") + (27 * t3 - 9 * t1 * t2 + 2 * t1 ** 3) * D("tau3")


# QES / ES in rho and tau -------------------------------------------------

@_entry("Psi0_qes", "gauge", TAU, ("gamma", "omega", "A"), tags=("qes",),
        anchor="QES ground-state factor tau1^(1/4) (4 tau2 - tau1^2)^(gamma/2) exp(-omega tau1 - A tau1^2/2)")
def _psi0_qes(p):
    t1, t2, _ = MultiPoly.vars(TAU)
    return GaugeFactor(TAU, [(t1, Fraction(1, 4)), (4 * t2 - t1 * t1, p.gamma / 2)],
                       -p.omega * t1 - p.A / 2 * t1 * t1)


@_entry("Psi0_es", "gauge", TAU, ("gamma", "omega"), tags=("es",), anchor="exactly-solvable ground-state factor (A = 0)")
def _psi0_es(p):
    return _psi0_qes(p.with_(A=0))


def _V_qes_tau(gamma, omega, A, N):
    t1, t2, _ = MultiPoly.vars(TAU)
    out = 9 / (8 * t1) + gamma * (gamma - 1) * (2 * t1 / (4 * t2 - t1 * t1))
    return out + 6 * omega ** 2 * t1 + 6 * A * t1 * (2 * omega * t1 - 2 * gamma - 2 * N - 3) + 6 * A * A * t1 ** 3


@_entry("V0_qes", "potential", TAU, ("gamma", "omega", "A"), tags=("qes",), anchor="d-independent QES potential")
def _v0_qes(p):
    return _V_qes_tau(p.gamma, p.omega, p.A, 0)


@_entry("VN_qes", "potential", TAU, ("gamma", "omega", "A", "N"), tags=("qes",), anchor="two-variable QES potential")
def _vn_qes(p):
    return _V_qes_tau(p.gamma, p.omega, p.A, p.N)


@_entry("Vrel_qes", "potential", TAU, ("d", "gamma", "omega", "A", "N"), tags=("qes",),
        anchor="QES potential in relative distances, effective part removed")
def _vrel_qes(p):
    t1, t2, _ = MultiPoly.vars(TAU)
    g, d, om, A = p.gamma, p.d, p.omega, p.A
    out = (4 * g * (g - 1) - (d - 2) * (d - 4)) / 2 * (t1 / (4 * t2 - t1 * t1))
    return out + 6 * om ** 2 * t1 + 6 * A * t1 * (2 * om * t1 - 2 * g - 2 * p.N - 3) + 6 * A * A * t1 ** 3


@_entry("VES", "potential", TAU, ("gamma", "omega"), tags=("es",), anchor="exactly-solvable single-particle potential")
def _ves(p):
    return _V_qes_tau(p.gamma, p.omega, 0, 0)


@_entry("E0_qes", "energy", (), ("gamma", "omega"), tags=("qes",), anchor="QES ground energy 12 omega (1 + gamma)")
def _e0_qes(p):
    return 12 * p.omega * (1 + p.gamma)


@_entry("E0_es", "energy", (), ("gamma", "omega"), tags=("es",), anchor="ES ground energy 12 omega (1 + gamma)")
def _e0_es(p):
    return 12 * p.omega * (1 + p.gamma)


def _h_rho_half(p, A):
    D = _D(RHO)
    r12, r13, r23 = MultiPoly.vars(RHO)
    op = -2 * (r12 * D("rho12", "rho12") + r13 * D("rho13", "rho13") + r23 * D("rho23", "rho23"))
    op = op - ((r12 + r13 - r23) * D("rho12", "rho13") + (r12 + r23 - r13) * D("rho12", "rho23")
               + (r13 + r23 - r12) * D("rho13", "rho23"))
    op = op - 2 * (1 + p.gamma) * (D("rho12") + D("rho13") + D("rho23")) + 6 * p.omega * _euler(RHO, (1, 1, 1))
    if A:
        op = op - 6 * A * (r12 + r13 + r23) * (_euler(RHO, (1, 1, 1)) - p.N)
    return op


@_entry("hQES_rho", "operator", RHO, ("gamma", "omega", "A", "N"), tags=("qes", "sl4"),
        anchor="QES algebraic operator h in rho (twice the printed half)")
def _hqes_rho(p):
    return 2 * _h_rho_half(p, p.A)


@_entry("hES_rho", "operator", RHO, ("gamma", "omega"), tags=("es", "sl4"),
        anchor="ES algebraic operator h in rho (twice the printed half)")
def _hes_rho(p):
    return 2 * _h_rho_half(p, 0)


def _h_rho_gauge(p):
    """-(K - scalar(K)) - 12 A N tau1 with K = Psi0^-1 DeltaLB Psi0, all on RHO."""
    psi = pull_gauge(_psi0_qes(p), _tau_of_rho(p))
    K = gauge_conjugate(_deltaLB_rho(p), psi)
    K = K - extract_scalar(K)
    t1, _, _ = _taus(RHO)
    return -K - 12 * p.A * p.N * t1


@_entry("hQES_rho_derived", "operator", RHO, ("gamma", "omega", "A", "N"), tags=("qes", "sl4"),
        variant="derived", anchor="QES operator in rho from the gauge rotation of the Laplace-Beltrami operator")
def _hqes_rho_derived(p):
    return _h_rho_gauge(p)


@_entry("hES_rho_derived", "operator", RHO, ("gamma", "omega"), tags=("es", "sl4"), variant="derived",
        anchor="ES operator in rho from the gauge rotation")
def _hes_rho_derived(p):
    return _h_rho_gauge(p.with_(A=0))


def _h_tau_printed(p, A, extra_mixed=True):
    D = _D(TAU)
    t1, t2, t3 = MultiPoly.vars(TAU)
    op = -6 * t1 * D("tau1", "tau1") - 2 * t1 * (7 * t2 - t1 * t1) * D("tau2", "tau2")
    op = op - 2 * t3 * (6 * t2 - t1 * t1) * D("tau3", "tau3") - 24 * t2 * D("tau1", "tau2")
    # printed as d_{tau3,tau3}; see the _derived variant for the chart-consistent term
    op = op - 36 * t3 * D("tau3", "tau3")
    op = op - 2 * (4 * t2 * t2 + 9 * t1 * t3 - t1 * t1 * t2) * D("tau2", "tau3")
    op = op - 18 * D("tau1") - 14 * t1 * D("tau2") - 2 * (7 * t2 - t1 * t1) * D("tau3")
    op = op - 4 * (1 + p.gamma) * (3 * D("tau1") + 2 * t1 * D("tau2") + t2 * D("tau3"))
    op = op + 12 * p.omega * _euler(TAU, (1, 2, 3))
    if A:
        op = op + 12 * A * t1 * (_euler(TAU, (1, 2, 3)) - p.N)
    return op


@_entry("hQES_tau", "operator", TAU, ("gamma", "omega", "A", "N"), tags=("qes", "h3"),
        anchor="QES operator rewritten in tau variables")
def _hqes_tau(p):
    return _h_tau_printed(p, p.A)


@_entry("hES_tau", "operator", TAU, ("gamma", "omega"), tags=("es", "h3"), anchor="ES operator in tau variables")
def _hes_tau(p):
    return _h_tau_printed(p, 0)


@_entry("hQES_tau_derived", "operator", TAU, ("gamma", "omega", "A", "N"), tags=("qes", "h3"), variant="derived",
        anchor="chain-rule image of the rho QES operator in tau variables")
def _hqes_tau_derived(p):
    return derive_pushforward(_h_rho_gauge(p), _tau_of_rho(p))


@_entry("hES_tau_derived", "operator", TAU, ("gamma", "omega"), tags=("es", "h3"), variant="derived",
        anchor="chain-rule image of the rho ES operator in tau variables")
def _hes_tau_derived(p):
    return derive_pushforward(_h_rho_gauge(p.with_(A=0)), _tau_of_rho(p))


@_entry("hQES_tau12", "operator", TAU12, ("gamma", "omega", "A", "N"), tags=("qes", "g2"),
        anchor="QES operator on the (tau1, tau2) subflag")
def _hqes_tau12(p):
    D = _D(TAU12)
    t1, t2 = MultiPoly.vars(TAU12)
    g = p.gamma
    op = -6 * t1 * D("tau1", "tau1") - 2 * t1 * (7 * t2 - t1 * t1) * D("tau2", "tau2") - 24 * t2 * D("tau1", "tau2")
    op = op - 6 * (5 + 2 * g) * D("tau1") - 2 * (11 + 4 * g) * t1 * D("tau2")
    op = op + 12 * p.omega * _euler(TAU12, (1, 2))
    if p.A:
        op = op + 12 * p.A * t1 * (_euler(TAU12, (1, 2)) - p.N)
    return op


@_entry("hES_tau12", "operator", TAU12, ("gamma", "omega"), tags=("es", "g2"),
        anchor="ES operator on the (tau1, tau2) subflag")
def _hes_tau12(p):
    D = _D(TAU12)
    t1, t2 = MultiPoly.vars(TAU12)
    op = -6 * t1 * D("tau1", "tau1") - 2 * t1 * (7 * t2 - t1 * t1) * D("tau2", "tau2") - 24 * t2 * D("tau1", "tau2")
    op = op - 30 * D("tau1") - 22 * t1 * D("tau2")
    op = op - 4 * p.gamma * (3 * D("tau1") + 2 * t1 * D("tau2"))
    return op + 12 * p.omega * _euler(TAU12, (1, 2))


@_entry("hQES_tau1", "operator", TAU1, ("gamma", "omega", "A", "N"), tags=("qes", "sl2"),
        anchor="QES operator on the tau1 subflag (six times the printed sixth)")
def _hqes_tau1(p):
    D = _D(TAU1)
    (t1,) = MultiPoly.vars(TAU1)
    op = -t1 * D("tau1", "tau1") + (2 * p.A * t1 * t1 + 2 * p.omega * t1 - (5 + 2 * p.gamma)) * D("tau1")
    return 6 * (op - 2 * p.A * p.N * t1)


@_entry("hES_tau1", "operator", TAU1, ("gamma", "omega"), tags=("es", "sl2"),
        anchor="ES Laguerre-type operator on the tau1 subflag")
def _hes_tau1(p):
    D = _D(TAU1)
    (t1,) = MultiPoly.vars(TAU1)
    return -6 * t1 * D("tau1", "tau1") + 6 * (2 * p.omega * t1 - 2 * p.gamma - 5) * D("tau1")


def _restricted(p, chart, A):
    return restrict_to(derive_pushforward(_h_rho_gauge(p.with_(A=A)), _tau_of_rho(p)), chart)


@_entry("hQES_tau12_derived", "operator", TAU12, ("gamma", "omega", "A", "N"), tags=("qes", "g2"), variant="derived",
        anchor="restriction of the chain-rule tau operator to functions of (tau1, tau2)")
def _hqes_tau12_derived(p):
    return _restricted(p, TAU12, p.A)


@_entry("hES_tau12_derived", "operator", TAU12, ("gamma", "omega"), tags=("es", "g2"), variant="derived",
        anchor="restriction of the chain-rule ES tau operator to functions of (tau1, tau2)")
def _hes_tau12_derived(p):
    return _restricted(p, TAU12, 0)


@_entry("hQES_tau1_derived", "operator", TAU1, ("gamma", "omega", "A", "N"), tags=("qes", "sl2"), variant="derived",
        anchor="restriction of the chain-rule tau operator to functions of tau1")
def _hqes_tau1_derived(p):
    return _restricted(p, TAU1, p.A)


@_entry("hES_tau1_derived", "operator", TAU1, ("gamma", "omega"), tags=("es", "sl2"), variant="derived",
        anchor="restriction of the chain-rule ES tau operator to functions of tau1")
def _hes_tau1_derived(p):
    return _restricted(p, TAU1, 0)


# geometric variables -----------------------------------------------------

@_entry("DeltaR_pst", "operator", PST, ("d",), tags=("h3", "pst"), anchor="radial operator in (P, S, T)")
def _deltaR_pst(p):
    return _pst_second() + _pst_first(p.d, 0)


def _pst_second():
    D = _D(PST)
    P, S, T = MultiPoly.vars(PST)
    op = 6 * P * D("P", "P") + (P * S / 2) * D("S", "S") + T * (48 * S + P * P) * D("T", "T")
    return op + 36 * T * D("P", "T") + 24 * S * D("P", "S") + 2 * S * (16 * S + P * P) * D("S", "T")


def _pst_first(d, gt):
    D = _D(PST)
    P, S, T = MultiPoly.vars(PST)
    op = 6 * (d + 4 * gt) * D("P") + ((d - 1 + 4 * gt) * P / 4) * D("S")
    return op + ((16 * (d + 4 + 4 * gt) * S + (d + 4 * gt) * P * P) / 2) * D("T")


@_entry("DeltaR_pst_derived", "operator", PST, ("d",), tags=("h3", "pst"), variant="derived",
        anchor="chain-rule image of the rho radial operator in (P, S, T)")
def _deltaR_pst_derived(p):
    return derive_pushforward(_deltaR_rho_core(p.d), _pst_of_rho(p))


@_entry("Metric_pst", "metric", PST, anchor="contravariant metric in (P, S, T)")
def _metric_pst(p):
    P, S, T = MultiPoly.vars(PST)
    return [[6 * P, 12 * S, 18 * T], [12 * S, P * S / 2, S * (16 * S + P * P)],
            [18 * T, S * (16 * S + P * P), T * (48 * S + P * P)]]


@_entry("Det_pst", "determinant", PST, anchor="determinant of the (P, S, T) metric as printed")
def _det_pst(p):
    P, S, T = MultiPoly.vars(PST)
    return -3 * P * S * (54 * T * T - T * P * (P * P + 144 * S) + 2 * S * (P * P + 16 * S) ** 2)


@_entry("DeltaR_pst_d1", "operator", PT, tags=("d1", "pst"), anchor="radial operator at d = 1 in (P, T)")
def _deltaR_pst_d1(p):
    D = _D(PT)
    P, T = MultiPoly.vars(PT)
    return 6 * P * D("P", "P") + T * P * P * D("T", "T") + 36 * T * D("P", "T") + 6 * D("P") + (P * P / 2) * D("T")


@_entry("Metric_pst_d1", "metric", PT, tags=("d1",), anchor="flat metric of the d = 1 operator in (P, T)")
def _metric_pst_d1(p):
    P, T = MultiPoly.vars(PT)
    return [[6 * P, 18 * T], [18 * T, T * P * P]]


@_entry("Det_pst_d1", "determinant", PT, tags=("d1",), anchor="determinant 6 T (P^3 - 54 T)")
def _det_pst_d1(p):
    P, T = MultiPoly.vars(PT)
    return 6 * T * (P ** 3 - 54 * T)


@_entry("Psi0_pst", "gauge", PST, ("gammaTilde", "omega"), tags=("pst", "es"),
        anchor="ground-state factor S^gammaTilde exp(-omega P)")
def _psi0_pst(p):
    P, S, T = MultiPoly.vars(PST)
    return GaugeFactor(PST, [(S, p.gammaTilde)], -p.omega * P)


@_entry("Psi0_pst_qes", "gauge", PST, ("gammaTilde", "omega", "A"), tags=("pst", "qes"),
        anchor="QES ground-state factor S^gammaTilde exp(-omega P - A P^2/2)")
def _psi0_pst_qes(p):
    P, S, T = MultiPoly.vars(PST)
    return GaugeFactor(PST, [(S, p.gammaTilde)], -p.omega * P - p.A / 2 * P * P)


@_entry("Psi0_pst_d1", "gauge", PT, ("omega",), tags=("d1", "pst"), anchor="d = 1 ground-state factor exp(-omega P)")
def _psi0_pst_d1(p):
    P, T = MultiPoly.vars(PT)
    return GaugeFactor(PT, [], -p.omega * P)


@_entry("Psi0_qes_d1", "gauge", PT, ("omega", "A"), tags=("d1", "pst", "qes"),
        anchor="d = 1 QES ground-state factor exp(-omega P - A P^2/2)")
def _psi0_qes_d1(p):
    P, T = MultiPoly.vars(PT)
    return GaugeFactor(PT, [], -p.omega * P - p.A / 2 * P * P)


@_entry("hExact_pst", "operator", PST, ("d", "gammaTilde", "omega"), tags=("pst", "es", "h3"),
        anchor="exactly-solvable algebraic operator in (P, S, T)")
def _hexact_pst(p):
    return _pst_second() - 12 * p.omega * _euler(PST, (1, 2, 3)) + _pst_first(p.d, p.gammaTilde)


@_entry("hQES_pst", "operator", PST, ("d", "gammaTilde", "omega", "A", "N"), tags=("pst", "qes", "h3"),
        anchor="quasi-exactly-solvable algebraic operator in (P, S, T)")
def _hqes_pst(p):
    P, S, T = MultiPoly.vars(PST)
    return _hexact_pst(p) - 12 * p.A * P * (_euler(PST, (1, 2, 3)) - p.N)


def _pst_gauge_h(p, psi, kin):
    K = gauge_conjugate(kin, psi)
    return K - extract_scalar(K)


@_entry("hExact_pst_derived", "operator", PST, ("d", "gammaTilde", "omega"), tags=("pst", "es", "h3"),
        variant="derived", anchor="gauge rotation of the chain-rule (P, S, T) radial operator")
def _hexact_pst_derived(p):
    return _pst_gauge_h(p, _psi0_pst(p), _deltaR_pst_derived(p))


@_entry("hQES_pst_derived", "operator", PST, ("d", "gammaTilde", "omega", "A", "N"), tags=("pst", "qes", "h3"),
        variant="derived", anchor="gauge rotation of the chain-rule operator, plus the 12 A N P term")
def _hqes_pst_derived(p):
    P, S, T = MultiPoly.vars(PST)
    return _pst_gauge_h(p, _psi0_pst_qes(p), _deltaR_pst_derived(p)) + 12 * p.A * p.N * P


@_entry("hExact_pst_r", "operator", PS, ("d", "gammaTilde", "omega"), tags=("pst", "es", "g2"),
        anchor="reduced ES operator on functions of (P, S)")
def _hexact_pst_r(p):
    D = _D(PS)
    P, S = MultiPoly.vars(PS)
    op = 6 * P * D("P", "P") + (P * S / 2) * D("S", "S") + 24 * S * D("P", "S") - 12 * p.omega * _euler(PS, (1, 2))
    g = p.gammaTilde
    return op + 6 * (p.d + 4 * g) * D("P") + ((p.d - 1 + 4 * g) * P / 4) * D("S")


@_entry("hExact_pst_rr", "operator", P1, ("d", "gammaTilde", "omega"), tags=("pst", "es", "sl2"),
        anchor="Laguerre reduction on functions of P")
def _hexact_pst_rr(p):
    D = _D(P1)
    (P,) = MultiPoly.vars(P1)
    return 6 * P * D("P", "P") - 12 * p.omega * P * D("P") + 6 * (p.d + 4 * p.gammaTilde) * D("P")


@_entry("hQES_pst_r", "operator", PS, ("d", "gammaTilde", "omega", "A", "N"), tags=("pst", "qes", "g2"),
        anchor="reduced QES operator on functions of (P, S)")
def _hqes_pst_r(p):
    (P, S) = MultiPoly.vars(PS)
    return _hexact_pst_r(p) - 12 * p.A * P * (_euler(PS, (1, 2)) - p.N)


@_entry("hQES_pst_rr", "operator", P1, ("d", "gammaTilde", "omega", "A", "N"), tags=("pst", "qes", "sl2"),
        anchor="reduced QES operator on functions of P")
def _hqes_pst_rr(p):
    (P,) = MultiPoly.vars(P1)
    return _hexact_pst_rr(p) - 12 * p.A * P * (_euler(P1, (1,)) - p.N)


@_entry("hExact_pst_d1", "operator", PT, ("omega",), tags=("d1", "pst", "es"),
        anchor="d = 1 exactly-solvable operator in (P, T)")
def _hexact_pst_d1(p):
    return _deltaR_pst_d1(p) - 12 * p.omega * _euler(PT, (1, 3))


@_entry("hExact_d1_r", "operator", P1, ("omega",), tags=("d1", "pst", "es"), anchor="d = 1 Laguerre reduction")
def _hexact_d1_r(p):
    D = _D(P1)
    (P,) = MultiPoly.vars(P1)
    return 6 * P * D("P", "P") - 12 * p.omega * P * D("P") + 6 * D("P")


@_entry("hQES_pst_d1", "operator", PT, ("omega", "A", "N"), tags=("d1", "pst", "qes"),
        anchor="d = 1 QES operator in (P, T)")
def _hqes_pst_d1(p):
    P, T = MultiPoly.vars(PT)
    return _hexact_pst_d1(p) - 12 * p.A * P * (_euler(PT, (1, 3)) - p.N)


@_entry("hQES_pst_d1_r", "operator", P1, ("omega", "A", "N"), tags=("d1", "pst", "qes"),
        anchor="d = 1 QES reduction on functions of P")
def _hqes_pst_d1_r(p):
    (P,) = MultiPoly.vars(P1)
    return _hexact_d1_r(p) - 12 * p.A * P * (_euler(P1, (1,)) - p.N)


@_entry("VExact_pst", "potential", PST, ("d", "gammaTilde", "omega"), tags=("pst", "es"),
        anchor="exactly-solvable many-body potential in (P, S)")
def _vexact_pst(p):
    P, S, T = MultiPoly.vars(PST)
    g = p.gammaTilde
    return 6 * p.omega ** 2 * P + g * (2 * g - 3 + p.d) / 4 * (P / S)


@_entry("VQES_pst", "potential", PST, ("d", "gammaTilde", "omega", "A", "N"), tags=("pst", "qes"),
        anchor="quasi-exactly-solvable sextic many-body potential")
def _vqes_pst(p):
    P, S, T = MultiPoly.vars(PST)
    g, om, A = p.gammaTilde, p.omega, p.A
    out = 6 * (om ** 2 - A * (4 * g + 2 * p.N + p.d + 1)) * P + 12 * om * A * P * P + 6 * A * A * P ** 3
    return out + g * (2 * g - 3 + p.d) / 4 * (P / S)


@_entry("VExact_d1", "potential", PT, ("omega",), tags=("d1", "pst", "es"), anchor="d = 1 harmonic potential 6 omega^2 P")
def _vexact_d1(p):
    P, T = MultiPoly.vars(PT)
    return RatFunc.from_poly(6 * p.omega ** 2 * P)


@_entry("VQES_d1", "potential", PT, ("omega", "A", "N"), tags=("d1", "pst", "qes"),
        anchor="d = 1 QES sextic potential without singular part")
def _vqes_d1(p):
    P, T = MultiPoly.vars(PT)
    om, A = p.omega, p.A
    return RatFunc.from_poly(6 * (om ** 2 - 2 * A * (p.N + 1)) * P + 12 * om * A * P * P + 6 * A * A * P ** 3)


@_entry("E0_pst", "energy", (), ("d", "gammaTilde", "omega"), tags=("pst",), anchor="ground energy 6 omega (d + 4 gammaTilde)")
def _e0_pst(p):
    return 6 * p.omega * (p.d + 4 * p.gammaTilde)


@_entry("E0_pst_d1", "energy", (), ("omega",), tags=("d1", "pst"), anchor="d = 1 ground energy 6 omega")
def _e0_pst_d1(p):
    return 6 * p.omega


# primitive QES problems --------------------------------------------------

@_entry("Psi_a", "gauge", TAU, ("gamma", "omega"), tags=("primitive",),
        anchor="primitive factor tau3^(gamma/2) exp(-omega tau1/2)")
def _psi_a(p):
    t1, t2, t3 = MultiPoly.vars(TAU)
    return GaugeFactor(TAU, [(t3, p.gamma / 2)], -p.omega / 2 * t1)


@_entry("Psi_a_r", "gauge", R3, ("gamma", "omega"), tags=("primitive",),
        anchor="primitive factor (r12 r13 r23)^gamma exp(-omega/2 sum r^2)")
def _psi_a_r(p):
    r = MultiPoly.vars(R3)
    return GaugeFactor(R3, [(x, p.gamma) for x in r], -p.omega / 2 * sum((x * x for x in r), MultiPoly.zero(R3)))


@_entry("Psi_b", "gauge", R3, ("gamma", "omega"), tags=("primitive",),
        anchor="primitive factor |product of distance differences|^gamma exp(-omega/2 sum r^2)")
def _psi_b(p):
    r12, r13, r23 = MultiPoly.vars(R3)
    base = (r12 - r13) * (r13 - r23) * (r12 - r23)
    return GaugeFactor(R3, [(base, p.gamma)], -p.omega / 2 * (r12 * r12 + r13 * r13 + r23 * r23))


@_entry("Va", "potential", R3, ("d", "gamma", "omega"), tags=("primitive",),
        anchor="primitive potential reducing to the Calogero potential on the line")
def _va(p):
    r12, r13, r23 = MultiPoly.vars(R3)
    g, d = p.gamma, p.d
    inv = 1 / (r12 * r12) + 1 / (r13 * r13) + 1 / (r23 * r23)
    mix = (r12 ** 2 / (r13 ** 2 * r23 ** 2) + r13 ** 2 / (r12 ** 2 * r23 ** 2) + r23 ** 2 / (r12 ** 2 * r13 ** 2))
    return 2 * g * (d + 2 * g - 2) * inv - g * g * mix + 3 * p.omega ** 2 * (r12 ** 2 + r13 ** 2 + r23 ** 2)


@_entry("Vb", "potential", R3, ("d", "gamma", "omega"), tags=("primitive",),
        anchor="second primitive potential in elementary symmetric polynomials of r_ij")
def _vb(p):
    s1, s2, s3 = _taus(R3)
    g, d = p.gamma, p.d
    disc = 18 * s1 * s2 * s3 + s1 ** 2 * s2 ** 2 - 4 * s1 ** 3 * s3 - 4 * s2 ** 3 - 27 * s3 ** 2
    n1 = (s1 ** 7 - 9 * s1 ** 5 * s2 + 33 * s1 ** 4 * s3 + 20 * s1 ** 3 * s2 ** 2 - 153 * s1 ** 2 * s2 * s3
          + 162 * s1 * s3 ** 2 + 54 * s2 ** 2 * s3)
    n2 = (54 * (d - 2) * s1 * s3 ** 2 + s3 * ((8 * d - 25) * s1 ** 4 - 9 * (4 * d - 13) * s2 * s1 ** 2 - 54 * s2 ** 2)
          - s1 * (s1 ** 2 - 4 * s2) * (2 * (d + 1) * s2 ** 2 + s1 ** 4 - 5 * s2 * s1 ** 2))
    return g * g * n1 / (s3 * disc) + 3 * p.omega ** 2 * (s1 ** 2 - 2 * s2) + g * n2 / (s3 * disc)


@_entry("Ea", "energy", (), ("d", "gamma", "omega"), tags=("primitive",), anchor="ground energy 6 omega (d + 3 gamma)")
def _ea(p):
    return 6 * p.omega * (p.d + 3 * p.gamma)


@_entry("Eb", "energy", (), ("d", "gamma", "omega"), tags=("primitive",), anchor="ground energy 6 omega (d + 3 gamma)")
def _eb(p):
    return 6 * p.omega * (p.d + 3 * p.gamma)


def _second_r():
    D = _D(R3)
    r12, r13, r23 = MultiPoly.vars(R3)
    op = 2 * (D("r12", "r12") + D("r23", "r23") + D("r13", "r13"))
    op = op + ((r12 ** 2 - r13 ** 2 + r23 ** 2) / (r12 * r23)) * D("r12", "r23")
    op = op + ((r12 ** 2 + r13 ** 2 - r23 ** 2) / (r12 * r13)) * D("r12", "r13")
    return op + ((r13 ** 2 + r23 ** 2 - r12 ** 2) / (r13 * r23)) * D("r23", "r13")


@_entry("DeltaPrime_a", "operator", R3, ("d", "gamma", "omega"), tags=("primitive",),
        anchor="gauge-rotated primitive operator (a), annihilates constants")
def _dprime_a(p):
    D = _D(R3)
    r = dict(zip(R3, MultiPoly.vars(R3)))
    g, d, om = p.gamma, p.d, p.omega
    op = _second_r()
    for a, b, c in (("r12", "r13", "r23"), ("r23", "r13", "r12"), ("r13", "r12", "r23")):
        x, y, z = r[a], r[b], r[c]
        num = (2 * (d - 1) * y ** 2 * z ** 2 + g * (6 * y ** 2 * z ** 2 + x ** 2 * (y ** 2 + z ** 2) - y ** 4 - z ** 4)
               - 6 * om * x ** 2 * y ** 2 * z ** 2)
        op = op + (num / (x * y ** 2 * z ** 2)) * D(a)
    return op


@_entry("DeltaPrime_b", "operator", R3, ("d", "gamma", "omega"), tags=("primitive",),
        anchor="gauge-rotated primitive operator (b), annihilates constants")
def _dprime_b(p):
    D = _D(R3)
    r = dict(zip(R3, MultiPoly.vars(R3)))
    g, d, om = p.gamma, p.d, p.omega
    op = _second_r()
    for a, b, c in (("r12", "r13", "r23"), ("r13", "r12", "r23"), ("r23", "r13", "r12")):
        x, y, z = r[a], r[b], r[c]
        s = y + z
        num = 8 * x * y * z * s + x ** 4 + s ** 4 - 5 * y * z * (x ** 2 + s ** 2) - 2 * x ** 2 * s ** 2
        coeff = g * num / (x * y * z * (x - y) * (x - z)) - 2 * (d - 1) / x + 6 * om * x
        op = op - coeff * D(a)
    return op


def _dprime_derived(p, psi):
    K = gauge_conjugate(_bracket_r(p.d), psi)
    return K - extract_scalar(K)


@_entry("DeltaPrime_a_derived", "operator", R3, ("d", "gamma", "omega"), tags=("primitive",), variant="derived",
        anchor="gauge rotation of the full r-bracket by Psi_a, scalar part removed")
def _dprime_a_derived(p):
    return _dprime_derived(p, _psi_a_r(p))


@_entry("DeltaPrime_b_derived", "operator", R3, ("d", "gamma", "omega"), tags=("primitive",), variant="derived",
        anchor="gauge rotation of the full r-bracket by Psi_b, scalar part removed")
def _dprime_b_derived(p):
    return _dprime_derived(p, _psi_b(p))


# d = 1 family ------------------------------------------------------------

@_entry("DeltaLB_d1", "operator", R2, tags=("d1",), anchor="flat Laplacian of relative motion on the line")
def _dlb_d1(p):
    D = _D(R2)
    return 2 * (D("r12", "r12") + D("r23", "r23") - D("r12", "r23"))


@_entry("DeltaR_d1_half", "operator", R2, tags=("d1",), anchor="half the flat Laplacian on the line")
def _dlb_d1_half(p):
    return Fraction(1, 2) * _dlb_d1(p)


@_entry("DeltaR_rr_d1", "operator", RR, tags=("d1",),
        anchor="d = 1, S = 0 operator after rho12 = r12^2, rho13 = r13^2")
def _dr_rr_d1(p):
    D = _D(RR)
    return D("r12", "r12") + D("r13", "r13") - D("r12", "r13")


@_entry("DeltaLB_xi", "operator", XI, tags=("d1", "sl3"), anchor="flat Laplacian in xi variables")
def _dlb_xi(p):
    D = _D(XI)
    x1, x2 = MultiPoly.vars(XI)
    return 2 * (D("xi1", "xi1") + (x1 * x1 - 3 * x2) * D("xi2", "xi2") + x1 * D("xi1", "xi2") - D("xi2"))


@_entry("DeltaLB_si", "operator", SI, tags=("d1", "sl3"), anchor="flat Laplacian in sigma variables (A2 Calogero)")
def _dlb_si(p):
    D = _D(SI)
    s2, s3 = MultiPoly.vars(SI)
    return -2 * (3 * s2 * D("si2", "si2") - s2 * s2 * D("si3", "si3") + 9 * s3 * D("si2", "si3") + 3 * D("si2"))


@_entry("DeltaLB_la", "operator", LA, tags=("d1",), anchor="flat Laplacian in lambda variables (G2 Wolfes)")
def _dlb_la(p):
    D = _D(LA)
    l1, l2 = MultiPoly.vars(LA)
    op = 3 * l1 * D("la1", "la1") - 4 * l1 * l1 * l2 * D("la2", "la2") + 18 * l2 * D("la1", "la2")
    return -2 * (op + 3 * D("la1") - 2 * l1 * l1 * D("la2"))


def _int_k(p):
    if p.k.denominator != 1:
        raise ValueError(f"the (t, u) operator has polynomial coefficients only for integer k, got {p.k}")
    return int(p.k)


@_entry("DeltaLB_tu", "operator", TU, ("k",), tags=("d1", "ttw"), anchor="flat Laplacian in dihedral invariants (t, u)")
def _dlb_tu(p):
    k = _int_k(p)
    D = _D(TU)
    t, u = MultiPoly.vars(TU)
    tk = t ** (k - 1)
    op = -4 * t * D("t", "t") - 8 * k * u * D("t", "u") - 4 * k * k * tk * u * D("u", "u")
    return op - 4 * D("t") - 2 * k * k * tk * D("u")


@_entry("DeltaLB_tu_derived", "operator", TU, ("k",), tags=("d1", "ttw"), variant="derived",
        anchor="chain-rule image of the flat (q1, q2) Laplacian in (t, u)")
def _dlb_tu_derived(p):
    D = _D(Q)
    return derive_pushforward(D("q1", "q1") + D("q2", "q2"), _tu_of_q(p))


@_entry("H_TTW", "operator", TU, ("k", "omega", "alpha", "beta"), tags=("d1", "ttw"),
        anchor="TTW Hamiltonian in (t, u)")
def _h_ttw(p):
    k = _int_k(p)
    t, u = MultiPoly.vars(TU)
    tk = t ** (k - 1)
    V = p.omega ** 2 * t + k * k * p.alpha * tk / (t ** k - u) + k * k * p.beta * tk / u
    return -_dlb_tu(p) + V


@_entry("V_A2", "potential", R2, ("alpha",), tags=("d1",),
        anchor="A2 Calogero potential g sum 1/r^2 on the line; g is read from alpha")
def _v_a2(p):
    a, b = MultiPoly.vars(R2)
    c = a + b
    return p.alpha * (1 / (a * a) + 1 / (b * b) + 1 / (c * c))


@_entry("V_A2_si", "potential", SI, ("alpha",), tags=("d1",), anchor="A2 Calogero potential as g sigma2^2 / sigma3^2")
def _v_a2_si(p):
    s2, s3 = MultiPoly.vars(SI)
    return p.alpha * (s2 * s2) / (s3 * s3)


@_entry("V_G2", "potential", R2, ("alpha", "beta"), tags=("d1",),
        anchor="G2 Wolfes potential; g from alpha, g1 from beta, r31 = -(r12 + r23)")
def _v_g2(p):
    a, b = MultiPoly.vars(R2)
    c = -(a + b)
    pair = 1 / (a * a) + 1 / (b * b) + 1 / (c * c)
    three = 1 / ((a - b) ** 2) + 1 / ((b - c) ** 2) + 1 / ((a - c) ** 2)
    return p.alpha * pair + p.beta * three


# separated coordinates ---------------------------------------------------

@_entry("DeltaR_w", "operator", W, ("d",), numeric_only=True, anchor="one sixth of the radial operator in w coordinates")
def _deltaR_w(p):
    D = _D(W)
    w1, w2, w3 = MultiPoly.vars(W)
    op = w1 * D("w1", "w1") + w1 * D("w2", "w2") + (w1 / (3 * w2 * w2)) * D("w3", "w3")
    return op + 2 * w2 * D("w1", "w2") + p.d * D("w1") + (w1 / w2) * D("w2")


@_entry("L1_w", "operator", W, numeric_only=True, anchor="the symmetry L1 as d/dw3")
def _L1_w(p):
    return DiffOp.d(W, "w3")


@_entry("SeparatedRadial_w", "operator", W12, ("d", "p"), numeric_only=True,
        anchor="separated radial equation in (w1, w2) for angular momentum p and g = 0")
def _sep_w(p):
    D = _D(W12)
    w1, w2 = MultiPoly.vars(W12)
    op = w1 * D("w1", "w1") + w1 * D("w2", "w2") + 2 * w2 * D("w1", "w2") + p.d * D("w1") + (w1 / w2) * D("w2")
    return op - p.p ** 2 * w1 / (3 * w2 * w2)


# unequal masses ----------------------------------------------------------

@_entry("DeltaR_m", "operator", RHO, ("d", "masses"), tags=("masses", "sl4"), anchor="radial operator for unequal masses")
def _deltaR_m(p):
    D = _D(RHO)
    m1, m2, m3, M = _mass_data(p.masses)
    r12, r13, r23 = MultiPoly.vars(RHO)
    iu = lambda a, b: (a + b) / (a * b)
    op = 2 * iu(m1, m3) * r13 * D("rho13", "rho13") + 2 * iu(m2, m3) * r23 * D("rho23", "rho23")
    op = op + 2 * iu(m1, m2) * r12 * D("rho12", "rho12")
    op = op + (2 * (r13 + r12 - r23) / m1) * D("rho13", "rho12") + (2 * (r13 + r23 - r12) / m3) * D("rho13", "rho23")
    op = op + (2 * (r23 + r12 - r13) / m2) * D("rho23", "rho12")
    return op + p.d * (iu(m1, m3) * D("rho13") + iu(m2, m3) * D("rho23") + iu(m1, m2) * D("rho12"))


def _Pm(masses, chart=RHO):
    m1, m2, m3 = masses
    r12, r13, r23 = MultiPoly.vars(chart)
    return m1 * m2 * r12 + m1 * m3 * r13 + m2 * m3 * r23


@_entry("Det_m", "determinant", RHO, ("masses",), tags=("masses",), anchor="factorized unequal-mass determinant")
def _det_m(p):
    m1, m2, m3, M = _mass_data(p.masses)
    r12, r13, r23 = MultiPoly.vars(RHO)
    quad = 2 * r12 * r13 + 2 * r12 * r23 + 2 * r13 * r23 - r12 ** 2 - r13 ** 2 - r23 ** 2
    return 2 * M / (m1 * m2 * m3) ** 2 * _Pm(p.masses) * quad


@_entry("Det_m_area", "determinant", RHO, ("masses",), tags=("masses",),
        anchor="unequal-mass determinant as 32 M P_m S / (m1 m2 m3)^2")
def _det_m_area(p):
    m1, m2, m3, M = _mass_data(p.masses)
    t1, t2, _ = _taus(RHO)
    return 32 * M / (m1 * m2 * m3) ** 2 * _Pm(p.masses) * ((4 * t2 - t1 * t1) / 16)


@_entry("Gamma_m", "gauge", RHO, ("d", "masses"), tags=("masses",), anchor="unequal-mass determinant gauge factor")
def _gamma_m(p):
    t1, t2, _ = _taus(RHO)
    return GaugeFactor(RHO, [(_Pm(p.masses), Fraction(-1, 4)), (4 * t2 - t1 * t1, (2 - p.d) / 4)])


@_entry("Veff_m", "potential", RHO, ("d", "masses"), tags=("masses",), anchor="unequal-mass effective potential")
def _veff_m(p):
    m1, m2, m3, M = _mass_data(p.masses)
    t1, t2, _ = _taus(RHO)
    Pm = _Pm(p.masses)
    return Fraction(3, 8) * M / Pm - (p.d - 2) * (p.d - 4) / 2 * (Pm / (m1 * m2 * m3 * (t1 * t1 - 4 * t2)))


@_entry("L1_m", "operator", RHO, ("masses",), tags=("masses",), anchor="unequal-mass symmetry operator")
def _L1_m(p):
    D = _D(RHO)
    m1, m2, m3, M = _mass_data(p.masses)
    r12, r13, r23 = MultiPoly.vars(RHO)
    op = ((r12 * (m1 - m2) + (r13 - r23) * (m1 + m2)) / (m1 * m2)) * D("rho12")
    op = op + ((r13 * (m3 - m1) + (r23 - r12) * (m1 + m3)) / (m1 * m3)) * D("rho13")
    return op + ((r23 * (m2 - m3) + (r12 - r13) * (m2 + m3)) / (m2 * m3)) * D("rho23")


@_entry("W_invariants", "invariants", RHO, ("masses",), tags=("masses",),
        anchor="invariants W1, W2, W4 of the unequal-mass symmetry and the a_i coefficients")
def _w_invariants(p):
    """W1, W2^2, W4 (corrected and printed), (A/Omega, B), and the a_i in squared/product form."""
    m1, m2, m3, M = _mass_data(p.masses)
    r12, r13, r23 = MultiPoly.vars(RHO)
    W2sq = 4 * (2 * r12 * r13 + 2 * r12 * r23 + 2 * r13 * r23 - r12 ** 2 - r13 ** 2 - r23 ** 2)
    W2sq_printed = 4 * (2 * r12 * r13 + 2 * r12 * r13 + 2 * r13 * r23 - r12 ** 2 - r13 ** 2 + r23 ** 2)
    a_over, B = _AB_exact(p.masses)
    Om2 = m1 * m2 * m3 * M
    W4 = a_over * a_over * Om2 + B * B
    W4_printed = (r23 ** 2 - 2 * m1 / (m1 - m3) * r13 * r23 - 2 * m1 / (m1 + m2) * r12 * r13
                  + m1 / (m1 + m3) * r13 ** 2 + m1 * m3 / (m2 * (m1 + m3)) * r13 ** 2
                  - 2 * m1 * m2 / ((m1 + m2) * (m1 + m3)) * r12 * r13
                  - 2 * m1 * m3 / ((m1 + m2) * (m1 + m3)) * r12 * r13
                  + m1 * m2 / ((m1 + m2) * m3) * r12 ** 2 + m1 / (m1 + m2) * r12 ** 2) if m1 != m3 else None
    # a_i enter the sum of squares only through a_i^2 and the products a1 a2, a3 a4, a5 a6
    k23 = (m2 + m3) * m1 * m3 / m2
    a_sq = {
        "a1": ((m2 + m3) * m1) ** 2 / (k23 * (m1 + m2) ** 2),
        "a2": k23 / (m1 + m3) ** 2,
        "a3": m1 ** 2 * (m2 + m3) / m3 / (m1 + m2) ** 2,
        "a4": m3 / (m2 + m3),
        "a5": m1 ** 2 * (m2 + m3) / (m2 * (m1 + m3) ** 2),
        "a6": m2 / (m2 + m3),
    }
    a_cross = {"a1a2": (m2 + m3) * m1 / ((m1 + m2) * (m1 + m3)),
               "a3a4": m1 / (m1 + m2),
               "a5a6": m1 / (m1 + m3)}
    a3_printed_sq = (m2 + m3) / m3 / (m1 + m2) ** 2
    return {
        "W1": _W1(p.masses), "W2sq": W2sq, "W2sq_printed": W2sq_printed,
        "W4": W4, "W4_printed": W4_printed, "A_over_Omega": a_over, "B": B, "Omega_sq": Om2,
        "a_sq": a_sq, "a_cross": a_cross, "a3_printed_sq": a3_printed_sq,
        "a3a4_printed": Fraction(1) / (m1 + m2),
        "relation": (m1 * M / (4 * (m1 + m2) * (m1 + m3)), m1 * m1 * m2 * m3 / ((m1 + m2) * (m1 + m3))),
    }


@_entry("DeltaR_W", "operator", WM, ("d", "masses"), tags=("masses",), numeric_only=True,
        anchor="unequal-mass radial operator in (W1, W3, W4)")
def _deltaR_W(p):
    D = _D(WM)
    m1, m2, m3, M = _mass_data(p.masses)
    W1, W3, W4 = MultiPoly.vars(WM)
    mm = m1 * m2 * m3
    k = m1 / ((m1 + m2) * (m1 + m3))
    op = (2 * M / mm) * W1 * D("W1", "W1") + 8 * k * M * W1 * W4 * D("W4", "W4")
    op = op + (m1 * k * m2 * m3 / 2) * (W1 / W4) * D("W3", "W3") + (8 * M / mm) * W4 * D("W1", "W4")
    return op + 8 * k * M * W1 * D("W4") + (2 * p.d * M / mm) * D("W1")


@_entry("L1_W", "operator", WM, ("masses",), tags=("masses",), numeric_only=True, anchor="the symmetry as d/dW3")
def _L1_W(p):
    return DiffOp.d(WM, "W3")
