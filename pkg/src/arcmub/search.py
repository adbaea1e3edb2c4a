"""Oval search and census: exhaustive (partitioned across workers), randomized
restarts, class tallies, and the o-polynomial hyperoval search used for the
even-order extension degrees where non-conic ovals live.

Exhaustive mode walks every arc once in lexicographic order; the search space
is statically partitioned by the first two arc points, so counts are exact
and collected arcs arrive in canonical order regardless of worker count.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Iterator

import numpy as np

from ._kernels import backend_name, census_chunk, mask_words, numba_available
from .arcs import build_oval_certificate, conic_drops
from .errors import OrderTooLarge
from .galois import Field
from .plane import Plane, pg2

EXHAUSTIVE_MAX_ORDER = 9
EXHAUSTIVE_LONG_MAX_ORDER = 16
DEFAULT_RESTARTS = 2000
DEFAULT_NODE_CAP = 20000


@dataclass
class SearchResult:
    plane: str
    order: int
    mode: str
    seed: int | None
    workers: int
    budget: int | None
    backend: str
    exhaustive: bool
    arc_counts: dict[int, int]
    complete_counts: dict[int, int]
    ovals: np.ndarray  # (N, d+1) point indices, canonical order
    hyperovals: np.ndarray  # (M, d+2)
    outcome: str = "ok"  # or "budget_exceeded"

    @property
    def n_ovals(self) -> int:
        return len(self.ovals)

    @property
    def n_hyperovals(self) -> int:
        return len(self.hyperovals)

    def max_tangent_arc_size(self) -> int:
        """Largest arc size with a tangent at every point (caps at d+1:
        a (d+2)-arc has none)."""
        sizes = [k for k, v in self.arc_counts.items() if v > 0 and k <= self.order + 1]
        return max(sizes, default=0)

    def census_body(self) -> dict:
        """The deterministic census payload (independent of seed/workers/backend)."""
        return {
            "plane": self.plane,
            "order": self.order,
            "mode": self.mode,
            "exhaustive": self.exhaustive,
            "arc_counts": {str(k): v for k, v in sorted(self.arc_counts.items())},
            "complete_arc_counts": {str(k): v for k, v in sorted(self.complete_counts.items())},
            "n_ovals": self.n_ovals,
            "n_hyperovals": self.n_hyperovals,
            "outcome": self.outcome,
        }


def _pair_chunks(n_points: int, n_chunks: int) -> list[tuple[np.ndarray, np.ndarray]]:
    ii, jj = np.triu_indices(n_points, k=1)
    bounds = np.linspace(0, len(ii), n_chunks + 1, dtype=np.int64)
    return [
        (ii[a:b].astype(np.int32), jj[a:b].astype(np.int32))
        for a, b in zip(bounds[:-1], bounds[1:])
        if b > a
    ]


def search_ovals(
    P: Plane,
    mode: str = "exhaustive",
    budget: int | None = None,
    seed: int | None = 0,
    workers: int = 1,
    allow_long: bool = False,
) -> SearchResult:
    """Enumerate (exhaustive) or sample (randomized) the ovals of a plane.

    Exhaustive mode additionally returns the full arc census: counts of arcs
    and of complete (inextensible) arcs by size, and every (d+2)-arc.
    """
    d = P.order
    if mode == "exhaustive":
        cap = EXHAUSTIVE_LONG_MAX_ORDER if allow_long else EXHAUSTIVE_MAX_ORDER
        if d > cap:
            hint = "" if allow_long else " (allow_long raises the cap to 16)"
            raise OrderTooLarge(f"exhaustive census supports order <= {cap}{hint}")
        return _search_exhaustive(P, workers, seed)
    if mode == "randomized":
        return _search_randomized(P, budget, seed)
    raise ValueError(f"unknown search mode {mode!r}")


def _search_exhaustive(P: Plane, workers: int, seed: int | None) -> SearchResult:
    d = P.order
    n = P.n_points
    max_k = d + 2
    size_a, size_b = d + 1, d + 2
    use_numba = numba_available()
    words = mask_words(P.line_masks, n) if use_numba else None
    lt = P.line_through
    if use_numba:
        # trigger compilation before the thread fan-out
        census_chunk(
            np.zeros(0, np.int32), np.zeros(0, np.int32), lt, P.line_masks, words,
            n, max_k, size_a, size_b, True,
        )
    chunks = _pair_chunks(n, max(workers, 1) * 4)
    args = [
        (pi, pj, lt, P.line_masks, words, n, max_k, size_a, size_b, use_numba)
        for pi, pj in chunks
    ]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda a: census_chunk(*a), args))
    else:
        results = [census_chunk(*a) for a in args]
    arc_counts = np.zeros(max_k + 1, dtype=np.int64)
    complete_counts = np.zeros(max_k + 1, dtype=np.int64)
    ovals_parts, hyper_parts = [], []
    for ac, cc, oa, ob in results:
        arc_counts += ac
        complete_counts += cc
        if len(oa):
            ovals_parts.append(oa)
        if len(ob):
            hyper_parts.append(ob)
    arc_counts[1] = n
    arc_counts[2] = n * (n - 1) // 2
    ovals = np.vstack(ovals_parts) if ovals_parts else np.zeros((0, size_a), np.int32)
    hypers = np.vstack(hyper_parts) if hyper_parts else np.zeros((0, size_b), np.int32)
    return SearchResult(
        plane=P.name,
        order=d,
        mode="exhaustive",
        seed=seed,
        workers=workers,
        budget=None,
        backend=backend_name(),
        exhaustive=True,
        arc_counts={k: int(v) for k, v in enumerate(arc_counts) if v},
        complete_counts={k: int(v) for k, v in enumerate(complete_counts) if v},
        ovals=ovals,
        hyperovals=hypers,
    )


def _random_restart(P: Plane, perm: np.ndarray, node_cap: int) -> tuple[int, ...] | None:
    """Depth-first arc extension in a random point order; first oval found wins."""
    lt = P.line_through
    masks = P.line_masks
    n = P.n_points
    target = P.order + 1
    nodes = 0
    arc: list[int] = []
    best: tuple[int, ...] | None = None

    def dfs(start_idx: int, forb: int) -> None:
        nonlocal nodes, best
        for idx in range(start_idx, n):
            if best is not None or nodes >= node_cap:
                return
            p = int(perm[idx])
            if (forb >> p) & 1:
                continue
            nodes += 1
            acc = forb | (1 << p)
            for a in arc:
                acc |= masks[int(lt[a, p])]
            arc.append(p)
            if len(arc) == target:
                best = tuple(sorted(arc))
                arc.pop()
                return
            dfs(idx + 1, acc)
            arc.pop()

    dfs(0, 0)
    return best


def _search_randomized(P: Plane, budget: int | None, seed: int | None) -> SearchResult:
    d = P.order
    restarts = budget if budget is not None else DEFAULT_RESTARTS
    rng = np.random.default_rng(seed)
    found: dict[tuple[int, ...], None] = {}
    for _ in range(restarts):
        perm = rng.permutation(P.n_points)
        oval = _random_restart(P, perm, DEFAULT_NODE_CAP)
        if oval is not None:
            found.setdefault(oval, None)
    ovals = (
        np.array(sorted(found), dtype=np.int32)
        if found
        else np.zeros((0, d + 1), np.int32)
    )
    return SearchResult(
        plane=P.name,
        order=d,
        mode="randomized",
        seed=seed,
        workers=1,
        budget=restarts,
        backend="python",
        exhaustive=False,
        arc_counts={d + 1: len(found)} if found else {},
        complete_counts={},
        ovals=ovals,
        hyperovals=np.zeros((0, d + 2), np.int32),
        outcome="ok" if found else "budget_exceeded",
    )


# -- class census ---------------------------------------------------------------------


@dataclass
class CensusReport:
    result: SearchResult
    class_counts: dict[str, int] | None  # None when the plane carries no coordinates
    witnesses: list[dict] = dc_field(default_factory=list)  # oval certificates

    def census_body(self) -> dict:
        body = self.result.census_body()
        body["class_counts"] = self.class_counts
        body["witness_ovals"] = [
            {k: w[k] for k in ("points", "class", "nucleus", "conic_coeffs")} for w in self.witnesses
        ]
        return body

    def canonical_json(self) -> str:
        return json.dumps(self.census_body(), sort_keys=True, separators=(",", ":"))


def census_with_classes(
    P: Plane,
    mode: str = "exhaustive",
    budget: int | None = None,
    seed: int | None = 0,
    workers: int = 1,
    allow_long: bool = False,
) -> CensusReport:
    """Search plus classification tallies (conic / pointed conic / irregular).

    Even-order Desarguesian censuses classify through hyperoval completions:
    every oval extends uniquely, so each (d+2)-arc accounts for exactly d+2
    ovals, and the conic content of the completion decides every class.  The
    identity n_ovals = (d+2) * n_hyperovals is asserted, and the per-oval
    classifier cross-checks samples in the test suite.
    """
    result = search_ovals(P, mode=mode, budget=budget, seed=seed, workers=workers, allow_long=allow_long)
    if P.field is None:
        return CensusReport(result, None, _plain_witnesses(P, result))
    F = P.field
    d = P.order
    if F.p != 2:
        class_counts = {"conic": result.n_ovals, "pointed_conic": 0, "irregular": 0}
        return CensusReport(result, class_counts, _plain_witnesses(P, result))
    counts = {"conic": 0, "pointed_conic": 0, "irregular": 0}
    min_by_class: dict[str, tuple[int, ...]] = {}
    if result.exhaustive:
        if result.n_ovals != (d + 2) * result.n_hyperovals:
            raise AssertionError("oval/hyperoval accounting violated (bug)")
        for row in result.hyperovals:
            hyper = [int(p) for p in row]
            drops = conic_drops(F, P, hyper)
            n_conic = len(drops)
            if n_conic:
                counts["conic"] += n_conic
                counts["pointed_conic"] += (d + 2) - n_conic
            else:
                counts["irregular"] += d + 2
            for drop in hyper:
                cls = (
                    "conic"
                    if drop in drops
                    else ("pointed_conic" if n_conic else "irregular")
                )
                oval = tuple(sorted(p for p in hyper if p != drop))
                if cls not in min_by_class or oval < min_by_class[cls]:
                    min_by_class[cls] = oval
    else:
        # randomized: classify the sampled ovals individually
        from .arcs import classify_oval_detail

        for row in result.ovals:
            detail = classify_oval_detail(P, [int(p) for p in row])
            cls = detail.oval_class.value
            counts[cls] += 1
            oval = tuple(int(p) for p in row)
            if cls not in min_by_class or oval < min_by_class[cls]:
                min_by_class[cls] = oval
    witnesses = [
        build_oval_certificate(P, min_by_class[cls], seed=result.seed, workers=result.workers)
        for cls in ("conic", "pointed_conic", "irregular")
        if cls in min_by_class
    ]
    return CensusReport(result, counts, witnesses)


def _plain_witnesses(P: Plane, result: SearchResult) -> list[dict]:
    if result.n_ovals == 0:
        return []
    pts = [int(p) for p in result.ovals[0]]
    return [build_oval_certificate(P, pts, seed=result.seed, workers=result.workers)]


# -- o-polynomial hyperoval search (q = 2^h) --------------------------------------------


@dataclass
class OPolySearchOutcome:
    found_values: list[int] | None  # value table of f, or None
    tables_seen: int
    nodes: int
    budget_exhausted: bool


def opoly_search(
    F: Field,
    want: str = "irregular",
    node_budget: int = 50_000_000,
) -> OPolySearchOutcome:
    """Backtracking search over normalized o-polynomial value tables f
    (f(0)=0, f(1)=1, f a permutation, all point-pair slopes distinct per
    base point), in canonical order.

    want='any' returns the first table; want='irregular' classifies each
    resulting hyperoval and returns the first whose completion contains no
    conic, reporting budget exhaustion honestly otherwise.
    """
    if F.p != 2:
        raise ValueError("o-polynomial search requires characteristic 2")
    q = F.order
    P = pg2(F)
    sub, div = F.sub, F.div
    domain = list(range(2, q))  # f(0)=0, f(1)=1 pinned
    values = [0] * q
    values[1] = 1
    used = [False] * q
    used[0] = used[1] = True
    # slope sets per assigned domain point (including 0 and 1)
    assigned: list[int] = [0, 1]
    slopes: dict[int, set[int]] = {0: set(), 1: {1}}
    # slope between (0, f(0)) and (1, f(1)) is 1
    nodes = 0
    tables_seen = 0

    def extend(k: int) -> list[int] | None:
        nonlocal nodes, tables_seen
        if k == len(domain):
            tables_seen += 1
            if want == "any":
                return list(values)
            hyper_pts = _opoly_point_set(F, P, values)
            if _hyperoval_has_no_conic(F, P, hyper_pts):
                return list(values)
            return None
        t = domain[k]
        for v in range(2, q):
            if used[v]:
                continue
            nodes += 1
            if nodes > node_budget:
                return None
            new_slopes = []
            ok = True
            for a in assigned:
                s = div(sub(values[a], v), sub(a, t))
                if s in slopes[a]:
                    ok = False
                    break
                new_slopes.append((a, s))
            if not ok:
                continue
            values[t] = v
            used[v] = True
            my = set()
            for a, s in new_slopes:
                slopes[a].add(s)
                my.add(s)
            slopes[t] = my
            assigned.append(t)
            hit = extend(k + 1)
            assigned.pop()
            del slopes[t]
            for a, s in new_slopes:
                slopes[a].discard(s)
            used[v] = False
            if hit is not None:
                return hit
            if nodes > node_budget:
                return None
        return None

    hit = extend(0)
    return OPolySearchOutcome(
        found_values=hit,
        tables_seen=tables_seen,
        nodes=nodes,
        budget_exhausted=hit is None and nodes > node_budget,
    )


def _opoly_point_set(F: Field, P: Plane, values: list[int]) -> list[int]:
    from .plane import point_index

    pts = [point_index(P, (0, 1, 0)), point_index(P, (0, 0, 1))]
    pts += [point_index(P, (1, t, values[t])) for t in range(F.order)]
    return sorted(pts)


def _hyperoval_has_no_conic(F: Field, P: Plane, hyper: list[int]) -> bool:
    return not conic_drops(F, P, hyper)
