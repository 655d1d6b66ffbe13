"""Graded polynomial flags, operator matrices on them, and their spectra."""
from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .diffop import DiffOp, apply
from .exactmath import MultiPoly, RatFunc, fmt_rat
from .report import CheckReport


class NotInvariant(ValueError):
    pass


# spaces --------------------------------------------------------------------

class PolySpace:
    """Span of monomials x^e with sum f_i e_i <= N.

    A weight of None freezes that variable at exponent zero, which is how
    sub-flags such as P^(1,2)_N inside the tau chart are described.
    """

    def __init__(self, chart, charvec, N: int):
        self.chart = tuple(chart)
        self.charvec = tuple(charvec)
        if len(self.charvec) != len(self.chart):
            raise ValueError("one weight per chart variable")
        if any(w is not None and (int(w) != w or w < 1) for w in self.charvec):
            raise ValueError("weights must be positive integers (or None to exclude a variable)")
        if N < 0:
            raise ValueError("N must be nonnegative")
        self.N = int(N)
        ranges = [range(0, self.N // w + 1) if w is not None else range(1) for w in self.charvec]
        basis = [e for e in product(*ranges) if self.weight(e) <= self.N]
        self.basis = sorted(basis, key=lambda e: (self.weight(e), tuple(-x for x in e)))
        self._index = {e: i for i, e in enumerate(self.basis)}

    def weight(self, e) -> int:
        return sum((w or 0) * k for w, k in zip(self.charvec, e))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return self.dim

    def __contains__(self, e) -> bool:
        return tuple(e) in self._index

    def index(self, e) -> int:
        return self._index[tuple(e)]

    def monomial(self, e) -> MultiPoly:
        return MultiPoly.from_terms(self.chart, {tuple(e): 1})

    def label(self, e) -> str:
        return "*".join(f"{v}^{k}" if k > 1 else v for v, k in zip(self.chart, e) if k) or "1"

    def contains_poly(self, p: MultiPoly) -> bool:
        return all(e in self for e in p.terms)

    def __repr__(self):
        return f"PolySpace({self.chart}, {self.charvec}, N={self.N}, dim={self.dim})"


def basis(chart, charvec, N) -> PolySpace:
    return PolySpace(chart, charvec, N)


def flag_dimension(charvec, N) -> int:
    """Number of e >= 0 with sum f_i e_i <= N, by a coefficient recurrence independent of PolySpace."""
    counts = [1] + [0] * N  # counts[n] = #{e : sum f_i e_i = n}
    for w in charvec:
        if w is None:
            continue
        for n in range(w, N + 1):
            counts[n] += counts[n - w]
    return sum(counts)


# invariance ----------------------------------------------------------------

def _image(op: DiffOp, space: PolySpace, e):
    img = apply(op, space.monomial(e))
    if not img.is_poly():
        return None, img
    return img.as_poly(), img


def invariance_check(op: DiffOp, space: PolySpace, check_id="invariance", params=None) -> CheckReport:
    """Pass iff op maps every basis monomial into the space."""
    if op.chart != space.chart:
        raise ValueError(f"operator on {op.chart}, space on {space.chart}")
    rep = CheckReport(check_id, dict(params or {}, charvec=list(space.charvec), N=space.N))
    for e in space.basis:
        poly, raw = _image(op, space, e)
        if poly is None:
            rep.add("basis", space.label(e), f"non-polynomial image {raw}", False)
            continue
        outside = {k: v for k, v in poly.terms.items() if k not in space}
        if outside:
            rem = MultiPoly.from_terms(space.chart, outside)
            rep.add("basis", space.label(e), str(rem), False)
        else:
            rep.add("basis", space.label(e), "0", True)
    return rep


def reducibility_check(op: DiffOp, sub_charvec, N: int, check_id="reducibility", params=None) -> CheckReport:
    """Invariance of the sub-flag space P^(sub_charvec)_N (None entries drop a variable)."""
    return invariance_check(op, PolySpace(op.chart, sub_charvec, N), check_id, params)


# matrices ------------------------------------------------------------------

@dataclass
class OperatorMatrix:
    space: PolySpace
    entries: list
    gradedTriangular: bool

    @property
    def n(self) -> int:
        return len(self.entries)

    def to_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.entries], dtype=float)

    def diagonal(self) -> list:
        return [self.entries[i][i] for i in range(self.n)]


def matrix_of(op: DiffOp, space: PolySpace) -> OperatorMatrix:
    """Column j holds the coordinates of op applied to basis element j."""
    n = space.dim
    M = [[Fraction(0)] * n for _ in range(n)]
    for j, e in enumerate(space.basis):
        poly, raw = _image(op, space, e)
        if poly is None:
            raise NotInvariant(f"{space.label(e)} maps to a non-polynomial {raw}")
        for k, v in poly.terms.items():
            if k not in space:
                raise NotInvariant(f"{space.label(e)} leaves the space through {space.label(k)}")
            M[space.index(k)][j] = v
    tri = all(M[i][j] == 0
              for j, ej in enumerate(space.basis) for i, ei in enumerate(space.basis)
              if space.weight(ei) > space.weight(ej))
    return OperatorMatrix(space, M, tri)


def eigen_exact(mat: OperatorMatrix) -> list[Fraction]:
    """Diagonal of a graded-triangular matrix whose level blocks are diagonal, sorted."""
    if not mat.gradedTriangular:
        raise ValueError("matrix is not graded-triangular; use eigen_numeric")
    sp = mat.space
    for i, ei in enumerate(sp.basis):
        for j, ej in enumerate(sp.basis):
            if i != j and sp.weight(ei) == sp.weight(ej) and mat.entries[i][j] != 0:
                raise ValueError("a weight level block is not diagonal; use eigen_numeric")
    return sorted(mat.diagonal())


def eigen_numeric(mat, refine: bool = True) -> list[tuple[complex, float]]:
    """All eigenvalues with residuals |Av - lambda v| / |v|, sorted by real then imaginary part.

    LAPACK geev does the balancing, Hessenberg reduction and shifted QR; each
    eigenvector then gets one step of inverse iteration.
    """
    A = mat.to_float() if isinstance(mat, OperatorMatrix) else np.asarray(mat, dtype=float)
    n = A.shape[0]
    if n == 0:
        return []
    try:
        vals, vecs = np.linalg.eig(A)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"eigensolver did not converge: {exc}") from exc
    scale = max(np.abs(A).max(), 1.0)
    out = []
    for k in range(n):
        lam, v = vals[k], vecs[:, k]
        if refine:
            shift = lam + 1e-10 * scale
            try:
                w = np.linalg.solve(A - shift * np.eye(n), v)
                if np.all(np.isfinite(w)) and np.linalg.norm(w) > 0:
                    v = w / np.linalg.norm(w)
            except np.linalg.LinAlgError:
                pass
        res = float(np.linalg.norm(A @ v - lam * v) / np.linalg.norm(v))
        out.append((complex(lam), res))
    out.sort(key=lambda t: (round(t[0].real, 9), round(t[0].imag, 9)))
    return out


def is_submultiset(small, big, tol: float) -> bool:
    """Greedy matching of real parts within tol; both lists sorted beforehand."""
    pool = sorted(float(np.real(x)) for x in big)
    for x in sorted(float(np.real(x)) for x in small):
        hit = next((i for i, y in enumerate(pool) if abs(y - x) <= tol * max(1.0, abs(x))), None)
        if hit is None:
            return False
        pool.pop(hit)
    return True


# conventions and closed forms ------------------------------------------------

@dataclass(frozen=True)
class SpectralModel:
    """How physical energies follow from the h-matrix: E = offset + sign * eig(h)."""
    model_id: str
    charvec: tuple
    sign: int
    energy_id: str | None
    closed_form: str | None


SPECTRAL = {
    "hES_rho": SpectralModel("hES_rho", (1, 1, 1), 1, "E0_es", "rho"),
    "hES_rho_derived": SpectralModel("hES_rho_derived", (1, 1, 1), 1, "E0_es", "rho"),
    "hQES_rho": SpectralModel("hQES_rho", (1, 1, 1), 1, "E0_qes", None),
    "hQES_rho_derived": SpectralModel("hQES_rho_derived", (1, 1, 1), 1, "E0_qes", None),
    "hES_tau": SpectralModel("hES_tau", (1, 2, 3), 1, "E0_es", "tau"),
    "hES_tau_derived": SpectralModel("hES_tau_derived", (1, 2, 3), 1, "E0_es", "tau"),
    "hQES_tau": SpectralModel("hQES_tau", (1, 2, 3), 1, "E0_qes", None),
    "hQES_tau_derived": SpectralModel("hQES_tau_derived", (1, 2, 3), 1, "E0_qes", None),
    "hES_tau12": SpectralModel("hES_tau12", (1, 2), 1, "E0_es", "tau"),
    "hQES_tau12": SpectralModel("hQES_tau12", (1, 2), 1, "E0_qes", None),
    "hES_tau1": SpectralModel("hES_tau1", (1,), 1, None, "laguerre"),
    "hQES_tau1": SpectralModel("hQES_tau1", (1,), 1, None, None),
    "hExact_pst": SpectralModel("hExact_pst", (1, 2, 3), -1, "E0_pst", "pst"),
    "hExact_pst_r": SpectralModel("hExact_pst_r", (1, 2), -1, "E0_pst", "pst"),
    "hExact_pst_rr": SpectralModel("hExact_pst_rr", (1,), -1, "E0_pst", "pst"),
    "hQES_pst": SpectralModel("hQES_pst", (1, 2, 3), -1, "E0_pst", None),
    "hQES_pst_r": SpectralModel("hQES_pst_r", (1, 2), -1, "E0_pst", None),
    "hQES_pst_rr": SpectralModel("hQES_pst_rr", (1,), -1, "E0_pst", None),
    "hExact_pst_d1": SpectralModel("hExact_pst_d1", (1, 3), -1, "E0_pst_d1", "pst_d1"),
    "hExact_d1_r": SpectralModel("hExact_d1_r", (1,), -1, "E0_pst_d1", "pst_d1"),
    "hQES_pst_d1": SpectralModel("hQES_pst_d1", (1, 3), -1, "E0_pst_d1", None),
    "hQES_pst_d1_r": SpectralModel("hQES_pst_d1_r", (1,), -1, "E0_pst_d1", None),
}


def spectral_model(model_id: str) -> SpectralModel:
    try:
        return SPECTRAL[model_id]
    except KeyError:
        raise KeyError(f"{model_id} is not a spectral model") from None


def convention_header(model_id: str) -> str:
    sm = spectral_model(model_id)
    off = sm.energy_id or "0"
    sign = "+" if sm.sign > 0 else "-"
    return f"E = {off} {sign} eig({model_id})"


def _partition_count(n: int, parts) -> int:
    ways = [1] + [0] * n
    for p in parts:
        for k in range(p, n + 1):
            ways[k] += ways[k - p]
    return ways[n]


def closed_form_spectrum(model_id: str, params, N: int) -> list[tuple[Fraction, int]]:
    """Printed closed-form levels up to N with multiplicities from enumeration.

    The charvec of the model decides what is enumerated: ordered triples on
    the rho chart, weighted exponents on the tau and geometric charts.
    """
    from .models import ground_energy_of
    sm = spectral_model(model_id)
    if sm.closed_form is None:
        raise ValueError(f"{model_id} has no printed closed-form spectrum")
    om = params.omega
    space_weights = sm.charvec
    levels = Counter()
    for e in product(*[range(N // w + 1) for w in space_weights]):
        n = sum(w * k for w, k in zip(space_weights, e))
        if n > N:
            continue
        if sm.closed_form in ("rho", "tau"):
            levels[12 * om * (n + params.gamma + 1)] += 1
        elif sm.closed_form == "laguerre":
            levels[12 * om * n] += 1
        elif sm.closed_form == "pst":
            levels[12 * om * n + ground_energy_of("E0_pst", params)] += 1
        elif sm.closed_form == "pst_d1":
            levels[12 * om * n + 6 * om] += 1
    return sorted(levels.items())


def multiset(pairs) -> list[Fraction]:
    out = []
    for v, m in pairs:
        out.extend([v] * m)
    return sorted(out)


def physical_levels(model_id: str, params, eigs) -> list:
    from .models import ground_energy_of
    sm = spectral_model(model_id)
    off = ground_energy_of(sm.energy_id, params) if sm.energy_id else Fraction(0)
    return [off + sm.sign * x for x in eigs]


def degeneracy_note(N: int) -> dict:
    """Ordered (n1, n2, n3) count vs unordered partitions into at most three parts, per level."""
    return {n: {"ordered": (n + 1) * (n + 2) // 2, "partitions_le3": _partition_count(n, (1, 2, 3))}
            for n in range(N + 1)}


# spectrum tables -------------------------------------------------------------

def spectrum_table(model_id: str, params, N: int, op=None) -> dict:
    """Eigenvalues of the model's h on its flag space, with the closed form where printed."""
    from .models import operator_of
    sm = spectral_model(model_id)
    op = op if op is not None else operator_of(model_id, params)
    space = PolySpace(op.chart, sm.charvec, N)
    mat = matrix_of(op, space)
    rows = []
    exact = None
    if mat.gradedTriangular:
        try:
            exact = eigen_exact(mat)
        except ValueError:
            exact = None
    if exact is not None:
        phys = physical_levels(model_id, params, exact)
        for v, m in sorted(Counter(phys).items()):
            rows.append({"eigenvalue": fmt_rat(v), "multiplicity": m, "residual": 0.0, "source": "exact"})
    else:
        num = eigen_numeric(mat)
        from .models import ground_energy_of
        off = float(ground_energy_of(sm.energy_id, params)) if sm.energy_id else 0.0
        for lam, res in sorted(num, key=lambda t: ((off + sm.sign * t[0]).real, (off + sm.sign * t[0]).imag)):
            val = off + sm.sign * lam
            rows.append({"eigenvalue": _fmt_complex(val), "multiplicity": 1, "residual": float(f"{res:.3e}"),
                         "source": "numeric", "imag": float(f"{val.imag:.3e}")})
    out = {"model": model_id, "N": N, "dim": space.dim, "convention": convention_header(model_id), "rows": rows}
    if sm.closed_form is not None:
        cf = closed_form_spectrum(model_id, params, N)
        out["closed_form"] = [{"eigenvalue": fmt_rat(v), "multiplicity": m, "source": "closed-form"} for v, m in cf]
        if exact is not None:
            out["closed_form_match"] = multiset(cf) == sorted(physical_levels(model_id, params, exact))
    return out


def _fmt_complex(z: complex) -> str:
    if abs(z.imag) < 1e-12:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.3g}j"


def table_to_csv(table: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["level", "eigenvalue", "multiplicity", "residual", "source"])
    for i, r in enumerate(table["rows"]):
        w.writerow([i, r["eigenvalue"], r["multiplicity"], r["residual"], r["source"]])
    for r in table.get("closed_form", []):
        w.writerow(["", r["eigenvalue"], r["multiplicity"], "", r["source"]])
    return buf.getvalue()


def table_to_json(table: dict) -> str:
    return json.dumps(table, indent=2, sort_keys=True)
