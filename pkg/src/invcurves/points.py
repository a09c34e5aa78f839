"""Points of the complex projective plane."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .polycore import chart_coordinates

__all__ = ["ProjectivePoint", "home_chart", "relative_value", "solve_projective"]

# two coordinates whose moduli agree to this relative precision count as tied
_TIE = 1e-9


def home_chart(coords) -> int:
    """Index of the largest-modulus coordinate (first one on near ties).

    This is the chart whose removed line is farthest from the point.
    """
    mods = [abs(complex(c)) for c in coords]
    top = max(mods)
    if top == 0:
        raise ValueError("[0:0:0] is not a projective point")
    return next(i for i, m in enumerate(mods) if m >= (1 - _TIE) * top)


@dataclass(frozen=True)
class ProjectivePoint:
    """[X:Y:Z] scaled so that the home-chart coordinate equals 1."""

    coords: tuple[complex, complex, complex]

    @classmethod
    def from_coords(cls, coords) -> "ProjectivePoint":
        c = [complex(v) for v in coords]
        k = home_chart(c)
        w = c[k]
        out = [v / w for v in c]
        out[k] = 1 + 0j
        # flush rounding noise so that points on coordinate lines read exactly
        out = [complex(0.0 if abs(v.real) < 1e-14 else v.real,
                       0.0 if abs(v.imag) < 1e-14 else v.imag) for v in out]
        return cls(tuple(out))

    @classmethod
    def from_chart(cls, local, chart: int) -> "ProjectivePoint":
        c = [None, None, None]
        keep = [i for i in range(3) if i != chart]
        c[chart] = 1
        c[keep[0]], c[keep[1]] = local
        return cls.from_coords(c)

    @property
    def chart(self) -> int:
        return home_chart(self.coords)

    def local(self, chart: int | None = None) -> tuple[complex, complex]:
        """Affine coordinates in ``chart`` (default: the home chart)."""
        k = self.chart if chart is None else chart
        return tuple(complex(v) for v in chart_coordinates(self.coords, k))

    def distance(self, other: "ProjectivePoint") -> float:
        """Largest 2x2 minor of the coordinate pair over the product of norms."""
        p, q = self.coords, other.coords
        np_ = math.sqrt(sum(abs(v) ** 2 for v in p))
        nq = math.sqrt(sum(abs(v) ** 2 for v in q))
        m = max(abs(p[i] * q[j] - p[j] * q[i]) for i in range(3) for j in range(i + 1, 3))
        return m / (np_ * nq)

    def close_to(self, other: "ProjectivePoint", eps: float) -> bool:
        return self.distance(other) <= eps

    def on_line(self, var: int, eps: float) -> bool:
        return abs(self.coords[var]) <= eps

    def to_json(self) -> list:
        return [[round(v.real, 12) + 0.0, round(v.imag, 12) + 0.0] for v in self.coords]

    def __str__(self):
        def f(z: complex) -> str:
            if abs(z.imag) < 1e-12:
                return f"{z.real:.6g}"
            return f"{z.real:.6g}{z.imag:+.6g}i"
        return "[" + ":".join(f(v) for v in self.coords) + "]"


def relative_value(p, coords) -> float:
    """|p(coords)| over the sum of |coefficient| * max(1, |coordinate|)^exponent."""
    scale = sum(abs(complex(c)) * math.prod(max(1.0, abs(v)) ** k for v, k in zip(coords, e))
                for e, c in p.terms.items())
    if scale == 0:
        return 0.0
    return abs(complex(p.to_float()(coords))) / scale


def solve_projective(systems, tol, accept=None):
    """Common zeros of per-chart polynomial pairs, merged across charts.

    ``systems`` maps a chart index to a pair of affine polynomials in that
    chart's coordinates. Each point is kept once, preferably from its home
    chart; ``accept`` filters candidate points. Returns a list of
    (ProjectivePoint, multiplicity). InfiniteSolutionSet propagates.
    """
    from .numkernel import solve_bivariate

    found: list[tuple[ProjectivePoint, int, int]] = []
    for chart, (p, q) in systems.items():
        for local, mult in solve_bivariate(p, q, tol):
            pt = ProjectivePoint.from_chart(local, chart)
            if accept is not None and not accept(pt):
                continue
            found.append((pt, mult, chart))
    groups: list[list[tuple[ProjectivePoint, int, int]]] = []
    merge_eps = 10 * tol.eps_cluster
    for item in found:
        for g in groups:
            if g[0][0].close_to(item[0], merge_eps):
                g.append(item)
                break
        else:
            groups.append([item])
    out = []
    for g in groups:
        home = [it for it in g if it[2] == it[0].chart]
        best = home[0] if home else max(g, key=lambda it: abs(it[0].coords[it[2]]))
        mult = sum(it[1] for it in g if it[2] == best[2])
        out.append((best[0], mult))
    out.sort(key=lambda t: tuple((round(v.real, 9), round(v.imag, 9)) for v in t[0].coords))
    return out
