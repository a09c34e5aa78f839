"""Camacho-Sad index tables, admissible configurations and the two obstruction tests.

Slot (j, 1) is the separatrix tangent to the first eigendirection of p_j and
carries lambda_2/lambda_1; slot (j, 2) carries lambda_1/lambda_2.

Both tests reduce to fixed-target subset sums over complex numbers. The
search splits the free choices into two halves, enumerates the partial sums
of each half, and finds for every target the closest pair with a k-d tree
(scipy's cKDTree) queried with the current best distance as an upper bound.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np
from scipy.spatial import cKDTree

from . import __version__
from .curves import AlgebraicCurve
from .numkernel import DEFAULT_TOL, ToleranceProfile
from .singularities import SingularityCensus

__all__ = [
    "Slot", "IndexTable", "Configuration", "ObstructionCertificate", "index_table",
    "table_from_values", "sigma", "theorem_d_check", "admissible_configurations",
    "nodal_obstruction_check", "min_distance_to_target", "DEFAULT_BUDGET",
    "CERTIFIED", "OBSTRUCTED", "INCONCLUSIVE",
]

DEFAULT_BUDGET = 200_000_000

CERTIFIED = "Certified"
OBSTRUCTED = "Obstructed"
INCONCLUSIVE = "Inconclusive"

_DIRECT_LIMIT = 1 << 20  # pair counts below this are evaluated exhaustively


@dataclass(frozen=True)
class Slot:
    sing: int          # singularity index j
    which: int         # 1 or 2
    value: complex
    kind: str          # "I", "II", "III"
    component: int | None = None
    along: bool = False  # tangent to F

    @property
    def key(self) -> tuple[int, int]:
        return (self.sing, self.which)


@dataclass(frozen=True)
class IndexTable:
    slots: tuple[Slot, ...]
    points: tuple = ()
    issues: tuple[str, ...] = ()
    n_components: int = 0

    def value(self, key) -> complex:
        return self.slots[self._pos[key]].value

    @property
    def _pos(self):
        return {s.key: i for i, s in enumerate(self.slots)}

    @property
    def n_singularities(self) -> int:
        return len({s.sing for s in self.slots})

    def values(self) -> list[complex]:
        return [s.value for s in self.slots]

    def to_json(self) -> list:
        return [{"sing": s.sing, "slot": s.which, "value": [s.value.real, s.value.imag],
                 "type": s.kind, "component": s.component, "along_F": s.along}
                for s in self.slots]


def index_table(c: SingularityCensus) -> IndexTable:
    """Both indices at every singularity plus type / tangency metadata."""
    slots = []
    issues = []
    for j, s in enumerate(c.singularities):
        if s.eigen is None or s.is_degenerate:
            issues.append(f"degenerate singularity at {s.point}")
            continue
        if s.multiplicity != 1:
            issues.append(f"singularity of multiplicity {s.multiplicity} at {s.point}")
        if not s.is_simple:
            issues.append(f"non-simple singularity at {s.point} (quotient {s.quotient:.6g})")
        if s.ambiguous:
            issues.append(f"ambiguous tangency at {s.point}: {s.note}")
        l1, l2 = s.lam1, s.lam2
        kind = s.kind or "III"
        for which, val in ((1, l2 / l1), (2, l1 / l2)):
            slots.append(Slot(j, which, complex(val), kind, s.component, which in s.along))
    return IndexTable(tuple(slots), tuple(s.point for s in c.singularities), tuple(issues),
                      len(c.curve.components))


def table_from_values(pairs: Sequence[tuple[complex, complex]], kinds=None, components=None,
                      along=None, n_components: int = 0) -> IndexTable:
    """Build a table directly from per-singularity index pairs (for tests and tooling)."""
    slots = []
    for j, (a, b) in enumerate(pairs):
        kind = kinds[j] if kinds else "III"
        comp = components[j] if components else None
        al = along[j] if along else ()
        slots.append(Slot(j, 1, complex(a), kind, comp, 1 in al))
        slots.append(Slot(j, 2, complex(b), kind, comp, 2 in al))
    return IndexTable(tuple(slots), (), (), n_components)


@dataclass(frozen=True)
class Configuration:
    slots: tuple[tuple[int, int], ...]
    k: int
    beta: int
    alpha: int
    counts: tuple[int, ...]

    @property
    def target(self) -> int:
        return self.k * self.k - self.beta


def sigma(A, table: IndexTable) -> complex:
    """Sum of the indices of the selected slots (0 for the empty selection)."""
    keys = A.slots if isinstance(A, Configuration) else A
    pos = table._pos
    return complex(sum((table.slots[pos[tuple(k)]].value for k in keys), 0j))


@dataclass
class ObstructionCertificate:
    mode: str
    verdict: str
    delta_min: float
    witness: tuple | None
    tolerance: ToleranceProfile
    stats: dict
    backend: str = "float"
    reason: str = ""
    issues: tuple[str, ...] = ()
    witness_sigma: complex | None = None
    witness_target: float | None = None

    def to_json(self, table: IndexTable | None = None) -> dict:
        wit = None
        if self.witness is not None:
            wit = []
            for key in self.witness:
                item = {"sing": key[0], "slot": key[1]}
                if table is not None and table.points:
                    item["point"] = table.points[key[0]].to_json()
                if table is not None:
                    v = table.value(key)
                    item["index"] = [v.real, v.imag]
                wit.append(item)
        out = {
            "mode": self.mode, "verdict": self.verdict,
            "delta_min": _json_float(self.delta_min), "witness": wit,
            "tolerance": self.tolerance.to_dict(), "stats": self.stats,
            "backend": self.backend, "reason": self.reason, "issues": list(self.issues),
            "tool_version": __version__,
        }
        if self.witness_sigma is not None:
            out["witness_sigma"] = [self.witness_sigma.real, self.witness_sigma.imag]
            out["witness_target"] = self.witness_target
        return out


def _json_float(x):
    if x is None or math.isinf(x):
        return None
    return x


# -- meet-in-the-middle engine ---------------------------------------------------------


class _BudgetExceeded(Exception):
    pass


@dataclass
class _Item:
    """One independent choice: list of (value, slot keys, tag increment)."""

    options: list


@dataclass
class _Half:
    sums: np.ndarray
    tags: np.ndarray  # (N, ntag) int
    radices: list[int]
    items: list[_Item]

    def decode(self, code: int) -> list:
        keys = []
        for it, r in zip(self.items, self.radices):
            code, opt = divmod(code, 1) if r == 1 else (code // r, code % r)
            keys.extend(it.options[opt][1])
        return keys

    def option_codes(self, choice: list[int]) -> int:
        code = 0
        mult = 1
        for r, c in zip(self.radices, choice):
            code += c * mult
            mult *= r
        return code


def _enumerate(items: list[_Item], ntag: int) -> _Half:
    sums = np.zeros(1, dtype=complex)
    tags = np.zeros((1, ntag), dtype=np.int32)
    for it in items:
        sums = np.concatenate([sums + opt[0] for opt in it.options])
        tags = np.concatenate([tags + np.asarray(opt[2], dtype=np.int32) for opt in it.options])
    return _Half(sums, tags, [len(it.options) for it in items], items)


def _split(items: list[_Item]) -> tuple[list[_Item], list[_Item]]:
    logs = [math.log2(len(it.options)) for it in items]
    total = sum(logs)
    acc = 0.0
    for i, lg in enumerate(logs):
        if acc + lg / 2 >= total / 2 and i > 0:
            return items[:i], items[i:]
        acc += lg
    return items[:-1], items[-1:]


class _Search:
    def __init__(self, budget: int, workers: int):
        self.budget = budget
        self.workers = workers
        self.comparisons = 0
        self.pairs = 0
        self.best = math.inf
        self.best_pair: tuple[int, int] | None = None
        self.best_target = None
        self.best_sum = None

    def _charge(self, n: int):
        self.comparisons += n
        if self.comparisons > self.budget:
            raise _BudgetExceeded()

    def _update(self, d, ia, ib, target, s):
        if d < self.best:
            self.best = float(d)
            self.best_pair = (int(ia), int(ib))
            self.best_target = target
            self.best_sum = complex(s)

    def match(self, A: np.ndarray, ia: np.ndarray, B: np.ndarray, ib: np.ndarray,
              targets: Sequence[float], forbidden: set, exhaustive: bool = False):
        """Closest a + b to any target over rows A[ia] x B[ib], skipping forbidden (ia, ib)."""
        if len(ia) == 0 or len(ib) == 0:
            return
        self.pairs += len(ia) * len(ib) - len(forbidden)
        fa = {p[0] for p in forbidden}
        if fa:
            normal = np.array([i not in fa for i in ia], dtype=bool)
            special = ia[~normal]
            ia = ia[normal]
        else:
            special = ia[:0]
        Av, Bv = A[ia], B[ib]
        direct = exhaustive or len(ia) * len(ib) <= _DIRECT_LIMIT
        if len(ia) and not direct:
            self._charge(len(ib))  # tree construction
        tl = list(targets)
        consecutive = (len(tl) > 1 and all(isinstance(t, (int, float)) and float(t).is_integer() for t in tl)
                       and all(b - a == 1 for a, b in zip(tl, tl[1:])))
        if direct and consecutive and len(ia):
            # one pass: the closest of consecutive integer targets is the clipped rounding
            self._charge(len(ia) + len(ib))
            self._direct(Av, ia, Bv, ib, None, (float(tl[0]), float(tl[-1])))
            tl = []
        for t in tl:
            if len(ia) == 0:
                break
            if direct:
                self._charge(len(ia) + len(ib))
                self._direct(Av, ia, Bv, ib, t)
            else:
                self._tree(Av, ia, Bv, ib, t)
        for ra in special:
            bad = {p[1] for p in forbidden if p[0] == ra}
            keep = np.array([j not in bad for j in ib], dtype=bool)
            if not keep.any():
                continue
            jb = ib[keep]
            for t in targets:
                self._charge(len(jb) + 1)
                self._direct(A[[ra]], np.array([ra]), B[jb], jb, t)

    def _direct(self, Av, ia, Bv, ib, t, span=None):
        step = max(1, _DIRECT_LIMIT // max(1, len(ib)))
        for s in range(0, len(ia), step):
            block = Av[s:s + step, None] + Bv[None, :]
            tt = t if span is None else np.clip(np.round(block.real), span[0], span[1])
            d = np.abs(block - tt)
            k = int(np.argmin(d))
            r, c = divmod(k, d.shape[1])
            tk = t if span is None else float(tt[r, c])
            self._update(d[r, c], ia[s + r], ib[c], tk, block[r, c])

    def _tree(self, Av, ia, Bv, ib, t):
        if not hasattr(self, "_tree_cache") or self._tree_cache[0] is not Bv:
            pts = np.column_stack([Bv.real, Bv.imag])
            self._tree_cache = (Bv, cKDTree(pts), Bv.real.min(), Bv.real.max(),
                                Bv.imag.min(), Bv.imag.max())
        _, tree, rmin, rmax, imin, imax = self._tree_cache
        q = t - Av
        bound = self.best
        if math.isfinite(bound):
            # prune rows whose partner would have to lie outside B's bounding box
            m = ((q.real >= rmin - bound) & (q.real <= rmax + bound)
                 & (q.imag >= imin - bound) & (q.imag <= imax + bound))
            rows = np.nonzero(m)[0]
        else:
            rows = np.arange(len(q))
        self._charge(len(rows) + 1)
        if len(rows) == 0:
            return
        qq = np.column_stack([q.real[rows], q.imag[rows]])
        ub = bound * (1 + 1e-12) + 1e-300 if math.isfinite(bound) else np.inf
        d, j = tree.query(qq, k=1, distance_upper_bound=ub, workers=self.workers)
        ok = np.isfinite(d)
        if not ok.any():
            return
        r = int(np.argmin(np.where(ok, d, np.inf)))
        a_idx = rows[r]
        b_idx = int(j[r])
        s = Av[a_idx] + Bv[b_idx]
        self._update(abs(s - t), ia[a_idx], ib[b_idx], t, s)

    def seed(self, A, ia, B, ib, targets, rng, forbidden, nsample=2048):
        if len(ia) == 0 or len(ib) == 0:
            return
        ra = rng.integers(0, len(ia), nsample)
        rb = rng.integers(0, len(ib), nsample)
        s = A[ia[ra]] + B[ib[rb]]
        for t in targets:
            d = np.abs(s - t)
            order = np.argsort(d)
            for k in order[:8]:
                if (int(ia[ra[k]]), int(ib[rb[k]])) in forbidden:
                    continue
                self._update(d[k], ia[ra[k]], ib[rb[k]], t, s[k])
                break


def _positive_integer_targets(lo: float, hi: float, best: float) -> list[int]:
    # nearest positive integer of sigma is max(1, round(Re sigma))
    kmin = max(1, math.floor(lo - (best if math.isfinite(best) else 0)))
    kmax = max(1, math.ceil(hi + (best if math.isfinite(best) else 0)))
    return list(range(kmin, kmax + 1))


def _re_range(h: _Half, idx) -> tuple[float, float]:
    if len(idx) == 0:
        return (math.inf, -math.inf)
    r = h.sums.real[idx]
    return float(r.min()), float(r.max())


# -- theorem D ---------------------------------------------------------------------------


def _stats(search: _Search, budget: int, strategy: str, groups: int) -> dict:
    return {"comparisons": int(search.comparisons), "configurations": int(search.pairs),
            "budget": int(budget), "strategy": strategy, "groups": int(groups)}


def theorem_d_check(table: IndexTable, tol: ToleranceProfile = DEFAULT_TOL,
                    budget: int = DEFAULT_BUDGET, threads: int = 1,
                    strategy: str = "mitm", seed: int = 0) -> ObstructionCertificate:
    """Search all proper subsets A of the slots for sigma_A near a positive integer.

    Certified iff the smallest distance from any sigma_A to Z_{>0} exceeds
    eps_obstruction and every singularity is simple.
    """
    values = [s.value for s in table.slots]
    items = [_Item([(0j, [], ()), (v, [s.key], ())]) for v, s in zip(values, table.slots)]
    search = _Search(budget, threads)
    if not items:
        return ObstructionCertificate("theorem_d", INCONCLUSIVE, math.inf, None, tol,
                                      _stats(search, budget, strategy, 0),
                                      reason="empty index table", issues=table.issues)
    left, right = _split(items) if len(items) > 1 else ([], items)
    try:
        H1, H2 = _enumerate(left, 0), _enumerate(right, 0)
        full = (len(H1.sums) - 1, len(H2.sums) - 1)
        forbidden = {full}
        ia, ib = np.arange(len(H1.sums)), np.arange(len(H2.sums))
        lo = _re_range(H1, ia)[0] + _re_range(H2, ib)[0]
        hi = _re_range(H1, ia)[1] + _re_range(H2, ib)[1]
        rng = np.random.default_rng(seed)
        exhaustive = strategy == "brute"
        if not exhaustive:
            search.seed(H1.sums, ia, H2.sums, ib, [1], rng, forbidden)
        targets = _positive_integer_targets(lo, hi, search.best)
        search.match(H1.sums, ia, H2.sums, ib, targets, forbidden, exhaustive)
    except _BudgetExceeded:
        return ObstructionCertificate(
            "theorem_d", INCONCLUSIVE, search.best, None, tol,
            _stats(search, budget, strategy, 1), reason="budget exceeded",
            issues=table.issues)
    witness = None
    if search.best_pair is not None:
        witness = tuple(H1.decode(search.best_pair[0]) + H2.decode(search.best_pair[1]))
    return _verdict("theorem_d", search, witness, tol, budget, strategy, 1, table)


def _verdict(mode, search, witness, tol, budget, strategy, groups, table, extra_issues=()):
    issues = tuple(table.issues) + tuple(extra_issues)
    stats = _stats(search, budget, strategy, groups)
    d = search.best
    if witness is not None and d <= tol.eps_obstruction:
        verdict, reason = OBSTRUCTED, "an obstruction equality holds within eps_obstruction"
    elif issues:
        verdict, reason = INCONCLUSIVE, "hypotheses not met: " + "; ".join(issues)
    elif witness is None and not math.isfinite(d):
        verdict, reason = INCONCLUSIVE, "no configuration to test"
    else:
        verdict, reason = CERTIFIED, ""
    cert = ObstructionCertificate(mode, verdict, d, witness if verdict == OBSTRUCTED or witness else None,
                                  tol, stats, reason=reason, issues=issues)
    if witness is not None:
        cert.witness_sigma = search.best_sum
        cert.witness_target = float(search.best_target)
    return cert


def min_distance_to_target(values: Sequence[complex], target: complex, strategy: str = "mitm",
                           exclude_full: bool = True, exclude_empty: bool = False,
                           budget: int = DEFAULT_BUDGET, threads: int = 1):
    """min |sum(A) - target| over subsets A of ``values``; returns (delta, subset indices)."""
    items = [_Item([(0j, [], ()), (complex(v), [i], ())]) for i, v in enumerate(values)]
    left, right = _split(items) if len(items) > 1 else ([], items)
    H1, H2 = _enumerate(left, 0), _enumerate(right, 0)
    forbidden = set()
    if exclude_full:
        forbidden.add((len(H1.sums) - 1, len(H2.sums) - 1))
    if exclude_empty:
        forbidden.add((0, 0))
    search = _Search(budget, threads)
    ia, ib = np.arange(len(H1.sums)), np.arange(len(H2.sums))
    if strategy != "brute":
        search.seed(H1.sums, ia, H2.sums, ib, [target], np.random.default_rng(0), forbidden)
    search.match(H1.sums, ia, H2.sums, ib, [target], forbidden, strategy == "brute")
    if search.best_pair is None:
        return math.inf, None
    keys = H1.decode(search.best_pair[0]) + H2.decode(search.best_pair[1])
    return search.best, sorted(keys)


# -- admissible configurations --------------------------------------------------------------


def _eligible(table: IndexTable):
    """Type-II transverse slots per component and type-III slot pairs."""
    comps = table.n_components
    ii = [[] for _ in range(comps)]
    iii: dict[int, list[Slot]] = {}
    for s in table.slots:
        if s.kind == "II" and not s.along and s.component is not None:
            ii[s.component].append(s)
        elif s.kind == "III":
            iii.setdefault(s.sing, []).append(s)
    iii_pairs = [sorted(v, key=lambda s: s.which) for _, v in sorted(iii.items())]
    return ii, iii_pairs


def _component_degrees(F: AlgebraicCurve, table: IndexTable) -> list[int]:
    degs = list(F.degrees)
    if len(degs) != table.n_components:
        raise ValueError("curve components do not match the index table")
    return degs


def admissible_configurations(table: IndexTable, F: AlgebraicCurve) -> Iterator[Configuration]:
    """All admissible selections in order of ascending k, then beta, then slot choice.

    Per component i exactly k*deg(F_i) transverse type-II slots are chosen; a
    type-III singularity contributes nothing, one slot, or both. The full
    eligible set and the empty selection are excluded.
    """
    degs = _component_degrees(F, table)
    ii, iii = _eligible(table)
    if not degs:
        # no curve: every proper non-empty subset of all slots
        keys = [s.key for s in table.slots]
        for r in range(1, len(keys)):
            for combo in itertools.combinations(keys, r):
                yield Configuration(tuple(combo), 0, 0, 0, ())
        return
    kmax = min(len(ii[i]) // d for i, d in enumerate(degs))
    n3 = len(iii)
    full_key = None
    if all(len(ii[i]) == kmax * d for i, d in enumerate(degs)):
        full_key = (kmax, n3)
    for k in range(kmax + 1):
        per_comp = [list(itertools.combinations([s.key for s in ii[i]], k * d))
                    for i, d in enumerate(degs)]
        for beta in range(n3 + 1):
            if full_key == (k, beta):
                continue
            for both in itertools.combinations(range(n3), beta):
                rest = [j for j in range(n3) if j not in both]
                # each remaining type-III singularity: none, slot 1, slot 2
                for singles in itertools.product(range(3), repeat=len(rest)):
                    iii_keys = []
                    alpha = 0
                    for j in both:
                        iii_keys += [iii[j][0].key, iii[j][1].key]
                    for j, c in zip(rest, singles):
                        if c:
                            iii_keys.append(iii[j][c - 1].key)
                            alpha += 1
                    for choice in itertools.product(*per_comp):
                        ii_keys = [key for part in choice for key in part]
                        keys = tuple(sorted(ii_keys + iii_keys))
                        if not keys:
                            continue
                        yield Configuration(keys, k, beta, alpha, tuple(k * d for d in degs))


def nodal_obstruction_check(table: IndexTable, census: SingularityCensus | None,
                            F: AlgebraicCurve, tol: ToleranceProfile = DEFAULT_TOL,
                            budget: int = DEFAULT_BUDGET, threads: int = 1,
                            strategy: str = "mitm", seed: int = 0) -> ObstructionCertificate:
    """Certified iff |sigma_A - (k(A)^2 - beta(A))| > eps_obstruction for every admissible A.

    Each (k, beta) group is a fixed-target search. Its free choices are the
    type-II transverse slots (with per-component counts tracked as tags) and
    the type-III singularities (four options each, "both" counted in beta).
    """
    if F.is_trivial():
        cert = theorem_d_check(table, tol, budget, threads, strategy, seed)
        cert.mode = "theorem_d"
        cert.stats["delegated_from"] = "nodal_refined"
        return cert
    extra = []
    if census is not None:
        if census.nodal_report is not None and not census.nodal_report.nodal:
            extra.append("curve is not nodal")
    degs = _component_degrees(F, table)
    C = len(degs)
    ii, iii = _eligible(table)
    items: list[_Item] = []
    for i in range(C):
        for s in ii[i]:
            tag = [0] * (C + 1)
            tag[i] = 1
            items.append(_Item([(0j, [], [0] * (C + 1)), (s.value, [s.key], tag)]))
    for pair in iii:
        a, b = pair
        z = [0] * (C + 1)
        both = [0] * C + [1]
        items.append(_Item([(0j, [], z), (a.value, [a.key], z), (b.value, [b.key], z),
                            (a.value + b.value, [a.key, b.key], both)]))
    search = _Search(budget, threads)
    kmax = min(len(ii[i]) // d for i, d in enumerate(degs))
    n3 = len(iii)
    if not items:
        return ObstructionCertificate("nodal_refined", INCONCLUSIVE, math.inf, None, tol,
                                      _stats(search, budget, strategy, 0),
                                      reason="no eligible separatrix slots", issues=table.issues)
    left, right = _split(items) if len(items) > 1 else ([], items)
    H1, H2 = _enumerate(left, C + 1), _enumerate(right, C + 1)
    g1 = _group_rows(H1.tags)
    g2 = _group_rows(H2.tags)
    # forbidden: the empty selection and the full eligible set
    forbidden_codes = {(0, 0), (len(H1.sums) - 1, len(H2.sums) - 1)}
    rng = np.random.default_rng(seed)
    exhaustive = strategy == "brute"
    groups = 0
    try:
        for k in range(kmax + 1):
            for beta in range(n3 + 1):
                need = np.array([k * d for d in degs] + [beta], dtype=np.int32)
                pairs = []
                for t1, rows1 in g1.items():
                    t2 = tuple(int(v) for v in need - np.asarray(t1))
                    if t2 in g2:
                        pairs.append((rows1, g2[t2]))
                if not pairs:
                    continue
                groups += 1
                target = float(k * k - beta)
                for rows1, rows2 in pairs:
                    forb = {p for p in forbidden_codes if p[0] in set(rows1.tolist()) and p[1] in set(rows2.tolist())} \
                        if len(rows1) * len(rows2) > 0 else set()
                    if not exhaustive:
                        search.seed(H1.sums, rows1, H2.sums, rows2, [target], rng, forb, nsample=256)
                    search.match(H1.sums, rows1, H2.sums, rows2, [target], forb, exhaustive)
    except _BudgetExceeded:
        return ObstructionCertificate(
            "nodal_refined", INCONCLUSIVE, search.best, None, tol,
            _stats(search, budget, strategy, groups), reason="budget exceeded",
            issues=table.issues + tuple(extra))
    witness = None
    if search.best_pair is not None:
        witness = tuple(sorted(H1.decode(search.best_pair[0]) + H2.decode(search.best_pair[1])))
    return _verdict("nodal_refined", search, witness, tol, budget, strategy, groups, table, extra)


def _group_rows(tags: np.ndarray) -> dict[tuple, np.ndarray]:
    if tags.shape[1] == 0:
        return {(): np.arange(len(tags))}
    uniq, inv = np.unique(tags, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    order = np.argsort(inv, kind="stable")
    bounds = np.searchsorted(inv[order], np.arange(len(uniq) + 1))
    return {tuple(int(v) for v in uniq[g]): order[bounds[g]:bounds[g + 1]] for g in range(len(uniq))}


def configuration_of(keys, table: IndexTable, F: AlgebraicCurve) -> Configuration:
    """Recompute k, beta, alpha and the per-component counts from a slot selection."""
    degs = list(F.degrees)
    pos = table._pos
    counts = [0] * len(degs)
    per_sing: dict[int, int] = {}
    for key in keys:
        s = table.slots[pos[tuple(key)]]
        if s.kind == "II":
            counts[s.component] += 1
        elif s.kind == "III":
            per_sing[s.sing] = per_sing.get(s.sing, 0) + 1
    ks = {c // d for c, d in zip(counts, degs) if c % d == 0}
    k = ks.pop() if len(ks) == 1 and all(c % d == 0 for c, d in zip(counts, degs)) else -1
    beta = sum(1 for v in per_sing.values() if v == 2)
    alpha = sum(1 for v in per_sing.values() if v == 1)
    return Configuration(tuple(sorted(tuple(k_) for k_ in keys)), k, beta, alpha, tuple(counts))
