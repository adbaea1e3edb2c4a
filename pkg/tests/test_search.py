import itertools
import subprocess
import sys

import numpy as np
import pytest

from arcmub import field_new, is_arc, is_oval, pg2
from arcmub._kernels import census_chunk_python, numba_available
from arcmub.arcs import classify_oval_detail, verify_oval_certificate
from arcmub.errors import OrderTooLarge
from arcmub.search import census_with_classes, opoly_search, search_ovals


def brute_force_arc_count(P, k):
    """Independent oracle: scan all k-subsets with the incidence arc test."""
    return sum(
        1 for pts in itertools.combinations(range(P.n_points), k) if is_arc(P, pts, method="incidence")
    )


def python_backend_census(P):
    ii, jj = np.triu_indices(P.n_points, k=1)
    return census_chunk_python(
        ii.astype(np.int32),
        jj.astype(np.int32),
        P.line_through,
        P.line_masks,
        P.n_points,
        P.order + 2,
        P.order + 1,
        P.order + 2,
    )


def test_fano_census_against_brute_force(P2):
    r = search_ovals(P2)
    assert r.n_ovals == 28
    assert r.n_ovals == brute_force_arc_count(P2, 3)
    # the subtraction identity: triangles = C(7,3) - 7 lines
    assert r.n_ovals == 35 - 7
    assert r.complete_counts == {4: 7}
    assert r.arc_counts[4] == brute_force_arc_count(P2, 4)


def test_pg23_census_against_brute_force(P3):
    r = search_ovals(P3)
    assert r.n_ovals == 234 == brute_force_arc_count(P3, 4)
    assert r.arc_counts[3] == brute_force_arc_count(P3, 3)
    # odd order: every oval is complete, no hyperovals
    assert r.complete_counts.get(4) == 234
    assert r.n_hyperovals == 0


def test_pg24_census_counts(P4):
    r = search_ovals(P4)
    assert r.n_ovals == 1008
    assert r.n_hyperovals == 168
    assert r.n_ovals == 6 * r.n_hyperovals
    assert r.complete_counts == {6: 168}


@pytest.mark.slow
def test_pg24_census_against_brute_force(P4):
    r = search_ovals(P4)
    assert r.n_ovals == brute_force_arc_count(P4, 5)
    assert r.arc_counts[6] == brute_force_arc_count(P4, 6)


def test_all_emitted_ovals_verify(P4):
    r = search_ovals(P4)
    for row in r.ovals[:: max(1, len(r.ovals) // 50)]:
        assert is_oval(P4, [int(p) for p in row])


def test_backends_agree():
    for p, n in [(2, 1), (3, 1), (2, 2), (5, 1)]:
        P = pg2(field_new(p, n))
        r = search_ovals(P)  # dispatched backend
        ac, cc, oa, ob = python_backend_census(P)
        assert {k: v for k, v in enumerate(ac) if v and k > 2} == {
            k: v for k, v in r.arc_counts.items() if k > 2
        }
        assert {k: v for k, v in enumerate(cc) if v} == r.complete_counts
        assert np.array_equal(oa, r.ovals)
        assert np.array_equal(ob, r.hyperovals)


def test_worker_counts_give_identical_output(P4):
    reports = [
        census_with_classes(P4, workers=w).canonical_json() for w in (1, 4, 8)
    ]
    assert reports[0] == reports[1] == reports[2]


def test_exhaustive_order_cap(hall):
    P25 = pg2(field_new(5, 2))
    with pytest.raises(OrderTooLarge):
        search_ovals(P25, mode="exhaustive")
    with pytest.raises(OrderTooLarge):
        search_ovals(P25, mode="exhaustive", allow_long=True)


def test_randomized_mode_seeded_and_verifying(hall):
    r1 = search_ovals(hall, mode="randomized", budget=40, seed=11)
    r2 = search_ovals(hall, mode="randomized", budget=40, seed=11)
    assert r1.outcome == "ok"
    assert np.array_equal(r1.ovals, r2.ovals)
    for row in r1.ovals[:5]:
        assert is_oval(hall, [int(p) for p in row])


def test_randomized_budget_exceeded(hall):
    r = search_ovals(hall, mode="randomized", budget=0, seed=1)
    assert r.outcome == "budget_exceeded"
    assert r.n_ovals == 0


def test_class_census_pg24(P4):
    rep = census_with_classes(P4)
    assert rep.class_counts == {"conic": 1008, "pointed_conic": 0, "irregular": 0}
    assert len(rep.witnesses) == 1
    assert verify_oval_certificate(P4, rep.witnesses[0])


def test_class_census_odd(P3):
    rep = census_with_classes(P3)
    assert rep.class_counts == {"conic": 234, "pointed_conic": 0, "irregular": 0}


def test_class_census_randomized_agrees_with_classifier(P4):
    rep = census_with_classes(P4, mode="randomized", budget=20, seed=2)
    assert rep.class_counts is not None
    assert rep.class_counts["pointed_conic"] == 0 == rep.class_counts["irregular"]
    assert rep.class_counts["conic"] == rep.result.n_ovals > 0


def test_class_census_hall_has_no_classes(hall):
    rep = census_with_classes(hall, mode="randomized", budget=10, seed=3)
    assert rep.class_counts is None
    if rep.result.n_ovals:
        assert rep.witnesses and rep.witnesses[0]["class"] is None


def test_hall_randomized_certificates_reverify(hall):
    rep = census_with_classes(hall, mode="randomized", budget=20, seed=4)
    for cert in rep.witnesses:
        assert verify_oval_certificate(hall, cert)


def test_opoly_search_q16_finds_irregular():
    F16 = field_new(2, 4)
    out = opoly_search(F16, want="irregular", node_budget=5_000_000)
    assert out.found_values is not None
    assert out.found_values[0] == 0 and out.found_values[1] == 1
    assert sorted(out.found_values) == list(range(16))  # a permutation


def test_opoly_search_budget_honored():
    F16 = field_new(2, 4)
    out = opoly_search(F16, want="irregular", node_budget=5)
    assert out.found_values is None
    assert out.budget_exhausted


def test_opoly_search_q4_has_no_irregular():
    # exhaustive over all normalized tables at q=4: every hyperoval contains a conic
    F4 = field_new(2, 2)
    out = opoly_search(F4, want="irregular", node_budget=10_000_000)
    assert out.found_values is None
    assert not out.budget_exhausted
    assert out.tables_seen > 0


@pytest.mark.skipif(not numba_available(), reason="numba disabled in this environment")
def test_env_flag_forces_python_backend(P3):
    code = (
        "import os; os.environ['ARCMUB_NUMBA']='0';"
        "from arcmub._kernels import backend_name, numba_available;"
        "from arcmub.search import search_ovals;"
        "from arcmub import field_new, pg2;"
        "assert not numba_available(); assert backend_name()=='python';"
        "r = search_ovals(pg2(field_new(3)));"
        "assert r.n_ovals == 234 and r.backend == 'python'"
    )
    subprocess.run([sys.executable, "-c", code], check=True)
