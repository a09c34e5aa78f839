"""Compare a computed census of the Kolmogorov family against its closed-form fixture."""

from __future__ import annotations

from invcurves.curves import parse_curve
from invcurves.gallery import kolmogorov, kolmogorov_fixture
from invcurves.obstruction import index_table
from invcurves.points import ProjectivePoint
from invcurves.singularities import census

XYZ = parse_curve("X*Y*Z")


def _pair_error(got, want):
    # unordered pair comparison
    a, b = got
    c, d = want
    return min(max(abs(a - c), abs(b - d)), max(abs(a - d), abs(b - c)))


def fixture_errors(params):
    """(worst numeric error over every fixture entry, list of structural failures)."""
    c = census(kolmogorov(params), XYZ)
    fx = kolmogorov_fixture(params)
    table = index_table(c)
    sings = list(c.singularities)
    worst = 0.0
    fails = []

    def find(p: ProjectivePoint):
        nonlocal worst
        best = min(range(len(sings)), key=lambda j: sings[j].point.distance(p))
        worst = max(worst, sings[best].point.distance(p))
        return best

    if c.total_multiplicity != fx.get("count"):
        fails.append(f"count {c.total_multiplicity} != {fx.get('count')}")
    quots = fx.get("corner_quotients")
    for p in fx.get("corner_points"):
        j = find(p)
        key = "[" + ":".join(str(int(round(v.real))) for v in p.coords) + "]"
        s = sings[j]
        worst = max(worst, _pair_error((s.lam2 / s.lam1, s.lam1 / s.lam2), quots[key]))
    idx = fx.get("type_II_indices")
    for comp, key in enumerate("xyz"):
        along_want, trans_want = idx[key]
        for p in fx.get("type_II_points")[key]:
            j = find(p)
            s = sings[j]
            if s.kind != "II" or s.component != comp:
                fails.append(f"{p} typed {s.kind}/{s.component}")
                continue
            slots = [t for t in table.slots if t.sing == j]
            along = [t.value for t in slots if t.along]
            trans = [t.value for t in slots if not t.along]
            if len(along) != 1 or len(trans) != 1:
                fails.append(f"{p}: tangency slots {len(along)}/{len(trans)}")
                continue
            worst = max(worst, abs(along[0] - along_want), abs(trans[0] - trans_want))
    if complex(params.b) == 0:
        pair = fx.get("type_III_quotients")
        for p in fx.get("type_III_points"):
            j = find(p)
            s = sings[j]
            if s.kind != "III":
                fails.append(f"{p} typed {s.kind}")
            worst = max(worst, _pair_error((s.lam2 / s.lam1, s.lam1 / s.lam2), pair))
    return worst, fails
