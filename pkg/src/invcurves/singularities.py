"""Singular points of a projective foliation, their eigenvalue classification,
and the type I / II / III census relative to an invariant nodal curve."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .curves import AlgebraicCurve, NodalReport, is_nodal
from .foliation import HomOneForm, check_curve_invariant, chart_form
from .numkernel import (
    DEFAULT_TOL,
    EigenData,
    InfiniteSolutionSet,
    ToleranceProfile,
    classify_quotient,
    jacobian_eigen,
)
from .points import ProjectivePoint, relative_value, solve_projective
from .polycore import dehomogenize

__all__ = [
    "Singularity", "SingularityCensus", "NonIsolatedSingularities", "CensusError",
    "find_singularities", "classify_singularity", "census", "chart_field", "tangent_slots",
]


class NonIsolatedSingularities(ValueError):
    """The form has a common factor; ``factor`` is the chart gcd when exact."""

    def __init__(self, message, factor=None, chart=None):
        self.factor = factor
        self.chart = chart
        super().__init__(message)


class CensusError(ValueError):
    pass


CLASSES = ("degenerate", "nondegenerate", "simple", "poincare")


@dataclass(frozen=True)
class Singularity:
    point: ProjectivePoint
    chart: int
    multiplicity: int = 1
    eigen: EigenData | None = None
    quotient: complex | None = None
    classification: str | None = None
    quotient_kind: str | None = None
    margin: float | None = None
    kind: str | None = None          # "I", "II" or "III" once typed
    component: int | None = None     # for type II
    along: tuple[int, ...] = ()      # eigen slots (1 or 2) tangent to F
    ambiguous: bool = False
    note: str = ""

    @property
    def lam1(self) -> complex:
        return self.eigen.lam1

    @property
    def lam2(self) -> complex:
        return self.eigen.lam2

    @property
    def is_simple(self) -> bool:
        return self.classification in ("simple", "poincare")

    @property
    def is_degenerate(self) -> bool:
        return self.classification == "degenerate"

    def to_json(self) -> dict:
        def c(z):
            return None if z is None else [z.real, z.imag]
        return {
            "point": self.point.to_json(), "chart": "XYZ"[self.chart],
            "multiplicity": self.multiplicity,
            "eigenvalues": None if self.eigen is None else [c(self.lam1), c(self.lam2)],
            "quotient": c(self.quotient), "class": self.classification,
            "quotient_kind": self.quotient_kind, "margin": self.margin,
            "type": self.kind, "component": self.component, "along": list(self.along),
            "ambiguous": self.ambiguous, "note": self.note,
        }


def chart_field(omega: HomOneForm, chart: int):
    """(P, Q) of the chart restriction, directly from the pulled-back form."""
    f = chart_form(omega, chart)
    return f.dy, -f.dx


def find_singularities(omega: HomOneForm, tol: ToleranceProfile = DEFAULT_TOL) -> list[Singularity]:
    """Zeros of P, Q, R in the projective plane, found chart by chart.

    Each point is kept once, from its home chart (largest coordinate).
    Raises NonIsolatedSingularities when the chart restriction has a common factor.
    """
    comps = [p for p in omega.components() if not p.is_zero()]
    if not comps:
        raise NonIsolatedSingularities("the zero form is singular everywhere")
    systems = {k: chart_field(omega, k) for k in (2, 0, 1)}

    def accept(pt):
        return all(relative_value(p, pt.coords) <= 1e3 * tol.eps_eq for p in comps)

    try:
        sols = solve_projective(systems, tol, accept)
    except InfiniteSolutionSet as exc:
        raise NonIsolatedSingularities(f"singular set is not isolated: {exc}", exc.factor) from exc
    return [Singularity(pt, pt.chart, m) for pt, m in sols]


def classify_singularity(s: Singularity, omega: HomOneForm,
                         tol: ToleranceProfile = DEFAULT_TOL) -> Singularity:
    """Eigen data in the home chart plus the degenerate / simple / Poincare decision."""
    k = s.point.chart
    ed = jacobian_eigen(chart_field(omega, k), s.point.local(k), tol)
    jn = max(abs(x) for row in ed.jacobian for x in row)
    if jn == 0 or abs(ed.lam1 * ed.lam2) <= tol.eps_eq * jn * jn or ed.lam1 == 0:
        return replace(s, chart=k, eigen=ed, quotient=None, classification="degenerate",
                       quotient_kind=None, margin=0.0)
    lam = ed.lam2 / ed.lam1
    qc = classify_quotient(lam, tol)
    if qc.kind == "positive_rational":
        cls = "nondegenerate"
    elif qc.kind == "positive_real_irrational":
        cls = "simple"
    else:
        cls = "poincare"
    return replace(s, chart=k, eigen=ed, quotient=lam, classification=cls,
                   quotient_kind=qc.kind, margin=qc.margin)


@dataclass(frozen=True)
class SingularityCensus:
    singularities: tuple[Singularity, ...]
    n: int
    curve: AlgebraicCurve
    n_I: int
    n_II: tuple[int, ...]
    n_III: int
    nodal_report: NodalReport | None = None
    notes: tuple[str, ...] = field(default=())

    @property
    def expected(self) -> int:
        return self.n * self.n + self.n + 1

    @property
    def total(self) -> int:
        return len(self.singularities)

    @property
    def total_multiplicity(self) -> int:
        return sum(s.multiplicity for s in self.singularities)

    @property
    def ambiguous(self) -> bool:
        return any(s.ambiguous for s in self.singularities)

    def to_json(self) -> dict:
        return {
            "n": self.n, "expected": self.expected, "count": self.total,
            "count_with_multiplicity": self.total_multiplicity,
            "N_I": self.n_I, "N_II": list(self.n_II), "N_III": self.n_III,
            "curve": str(self.curve), "notes": list(self.notes),
            "singularities": [s.to_json() for s in self.singularities],
        }


def _hermitian_cos(u, v) -> float:
    nu = math.sqrt(sum(abs(a) ** 2 for a in u))
    nv = math.sqrt(sum(abs(a) ** 2 for a in v))
    if nu == 0 or nv == 0:
        return 0.0
    return abs(sum(a.conjugate() * b for a, b in zip(u, v))) / (nu * nv)


def _match(eig: EigenData, tangent, tol) -> list[int]:
    """Eigen slots (1, 2) whose direction is tangent to the given branch direction."""
    out = []
    for slot, v in ((1, eig.v1), (2, eig.v2)):
        if 1 - _hermitian_cos(v, tangent) <= tol.eps_eq:
            out.append(slot)
    return out


def census(omega: HomOneForm, curve: AlgebraicCurve, tol: ToleranceProfile = DEFAULT_TOL,
           singularities: list[Singularity] | None = None) -> SingularityCensus:
    """Classify every singularity and type it relative to the curve F.

    Type I: singular point of F. Type II(i): smooth point of F on F_i = 0.
    Type III: off F. For types I and II the eigendirections are paired with
    the branch tangents of F; ambiguous or missing pairings are flagged.
    """
    notes = []
    sings = singularities if singularities is not None else find_singularities(omega, tol)
    sings = [classify_singularity(s, omega, tol) for s in sings]
    report = None
    if curve.is_trivial():
        typed = [replace(s, kind="III") for s in sings]
        return SingularityCensus(tuple(typed), omega.degree, curve, 0, (), len(typed), None, ())
    for comp in curve.components:
        if check_curve_invariant(omega, comp, tol) is None:
            raise CensusError(f"component {comp} is not invariant")
    report = is_nodal(curve.F, tol)
    if not report.nodal:
        raise CensusError(f"curve {curve} is not nodal: {report.reason}")
    typed = []
    n_II = [0] * len(curve.components)
    n_I = n_III = 0
    for s in sings:
        node = next((p for p in report.points if p.point.close_to(s.point, 10 * tol.eps_cluster)), None)
        if node is not None:
            n_I += 1
            typed.append(_type_I(s, node, tol))
            continue
        comp_idx = None
        for i, comp in enumerate(curve.components):
            if relative_value(comp, s.point.coords) <= 1e3 * tol.eps_eq:
                comp_idx = i
                break
        if comp_idx is None:
            n_III += 1
            typed.append(replace(s, kind="III"))
            continue
        n_II[comp_idx] += 1
        typed.append(_type_II(s, curve.components[comp_idx], comp_idx, tol))
    for s in typed:
        if s.ambiguous:
            notes.append(f"ambiguous tangency at {s.point}: {s.note}")
    return SingularityCensus(tuple(typed), omega.degree, curve, n_I, tuple(n_II), n_III,
                             report, tuple(notes))


def _type_I(s: Singularity, node, tol) -> Singularity:
    if s.eigen is None or s.is_degenerate:
        return replace(s, kind="I", along=(1, 2), note="degenerate singularity on a node")
    if node.chart != s.chart:
        # both use the home chart of the same point; a mismatch means a near tie
        return replace(s, kind="I", along=(1, 2), ambiguous=True, note="chart mismatch")
    t1, t2 = node.tangents
    m1, m2 = _match(s.eigen, t1, tol), _match(s.eigen, t2, tol)
    ok = sorted(m1 + m2) == [1, 2] and len(m1) == 1 and len(m2) == 1
    note = "" if ok else "eigendirections do not pair with the two branch tangents"
    return replace(s, kind="I", along=(1, 2), ambiguous=not ok, note=note)


def _tangent_of(comp, s: Singularity):
    k = s.chart
    f = dehomogenize(comp, k).to_float()
    x0 = s.point.local(k)
    gx, gy = complex(f.diff(0)(x0)), complex(f.diff(1)(x0))
    return (-gy, gx)


def tangent_slots(s: Singularity, comp, tol: ToleranceProfile = DEFAULT_TOL) -> list[int]:
    """Eigen slots of a classified singularity tangent to the smooth curve comp = 0 there."""
    if s.eigen is None:
        return []
    return _match(s.eigen, _tangent_of(comp, s), tol)


def _type_II(s: Singularity, comp, idx: int, tol) -> Singularity:
    tangent = _tangent_of(comp, s)
    if s.eigen is None or s.is_degenerate:
        return replace(s, kind="II", component=idx, note="degenerate singularity on F")
    m = _match(s.eigen, tangent, tol)
    if len(m) == 1:
        return replace(s, kind="II", component=idx, along=(m[0],))
    note = "both eigendirections tangent to F" if m else "no eigendirection tangent to F"
    return replace(s, kind="II", component=idx, along=tuple(m), ambiguous=True, note=note)
