import itertools

import pytest

from arcmub import (
    Arc,
    canonical_conic,
    classify_oval,
    conic_solutions,
    field_new,
    fit_conic_5pts,
    is_arc,
    is_oval,
    nucleus,
    opoly_hyperoval,
    pg2,
    pointed_conic,
    tangent_lines,
)
from arcmub.arcs import (
    Conic,
    OvalClass,
    build_oval_certificate,
    canonical_conic_coeffs,
    classify_oval_detail,
    collinear_det,
    conic_drops,
    conic_eval,
    conic_is_proper,
    lagrange_coeffs,
    verify_oval_certificate,
)
from arcmub.errors import (
    DuplicatePoints,
    NotAHyperoval,
    NotAnOval,
    NotInArc,
    OddOrder,
    PointNotOnConic,
    UnknownPoint,
    VerificationFailed,
    WrongCharacteristic,
)
from arcmub.plane import point_index

ALL_Q = [(2, (2, 1)), (3, (3, 1)), (4, (2, 2)), (5, (5, 1)), (7, (7, 1)), (8, (2, 3)), (9, (3, 2)), (16, (2, 4))]


# -- arc property ------------------------------------------------------------------


def test_canonical_conic_size_and_arc_everywhere():
    for q, pn in ALL_Q:
        F = field_new(*pn)
        arc = canonical_conic(F)
        assert len(arc) == q + 1
        assert is_arc(arc.plane, arc.points, method="incidence")
        if q <= 9:
            assert is_arc(arc.plane, arc.points, method="determinant")


def test_canonical_conic_gf3_explicit(P3, F3):
    arc = canonical_conic(F3, P3)
    expect = {
        point_index(P3, (1, 0, 0)),
        point_index(P3, (0, 1, 0)),
        point_index(P3, (1, 1, 1)),
        point_index(P3, (1, 1, 2)),
    }
    assert set(arc.points) == expect


def test_canonical_conic_satisfies_equation(P9, F9):
    coeffs = canonical_conic_coeffs(F9)
    for i in canonical_conic(F9, P9).points:
        assert conic_eval(F9, coeffs, P9.points[i]) == 0


def test_full_line_is_not_an_arc(P4):
    line = [int(p) for p in P4.line_points(0)]
    chk = is_arc(P4, line)
    assert not chk
    assert chk.witness is not None and len(chk.witness) == 3


def test_empty_and_tiny_sets_are_arcs(P4):
    assert is_arc(P4, [])
    assert is_arc(P4, [0, 5])


def test_unknown_point_rejected(P4):
    with pytest.raises(UnknownPoint):
        is_arc(P4, [0, 1, 99])


def test_determinant_and_incidence_paths_agree(P9):
    import numpy as np

    rng = np.random.default_rng(0)
    for _ in range(40):
        pts = [int(x) for x in rng.choice(P9.n_points, size=5, replace=False)]
        a = bool(is_arc(P9, pts, method="incidence"))
        b = bool(is_arc(P9, pts, method="determinant"))
        assert a == b


def test_determinant_identities_match_factored_forms():
    # parametrized triples on the canonical conic: the 3x3 determinants reduce
    # to sigma2 - sigma1 and (s1-s2)(s2-s3)(s3-s1) for every parameter choice
    for q, pn in ALL_Q:
        if q > 9:
            continue
        F = field_new(*pn)
        one = 1
        for s1, s2 in itertools.permutations(range(q), 2):
            r1 = (one, 0, 0)
            r2 = (F.mul(s1, s1), 1, s1)
            r3 = (F.mul(s2, s2), 1, s2)
            det = _det3(F, r1, r2, r3)
            assert det == F.sub(s2, s1)
        for s1, s2, s3 in itertools.permutations(range(q), 3):
            rows = [(F.mul(s, s), 1, s) for s in (s1, s2, s3)]
            det = _det3(F, *rows)
            want = F.mul(F.mul(F.sub(s1, s2), F.sub(s2, s3)), F.sub(s3, s1))
            assert det == want


def _det3(F, r1, r2, r3):
    m = (r1, r2, r3)
    acc = 0
    for (j0, j1, j2), sgn in (
        ((0, 1, 2), 1),
        ((1, 2, 0), 1),
        ((2, 0, 1), 1),
        ((2, 1, 0), -1),
        ((1, 0, 2), -1),
        ((0, 2, 1), -1),
    ):
        t = F.mul(F.mul(m[0][j0], m[1][j1]), m[2][j2])
        acc = F.add(acc, t if sgn > 0 else F.neg(t))
    return acc


# -- tangents ---------------------------------------------------------------------


def test_tangent_counts_conic_pg24(P4, F4):
    arc = canonical_conic(F4, P4)
    for x in arc.points:
        info = tangent_lines(P4, arc.points, x)
        assert len(info.tangents) == 1
        assert info.secants == 4


def test_tangent_counts_triangle_fano(P2):
    tri = [0, 1, 3]
    assert is_arc(P2, tri)
    info = tangent_lines(P2, tri, 0)
    assert len(info.tangents) == 1
    assert info.secants == 2


def test_hyperoval_has_no_tangents(P4, F4):
    arc = canonical_conic(F4, P4)
    nuc = nucleus(P4, arc.points)
    hyper = sorted(set(arc.points) | {nuc})
    for x in hyper:
        assert len(tangent_lines(P4, hyper, x).tangents) == 0


def test_tangent_requires_membership(P4, F4):
    arc = canonical_conic(F4, P4)
    outside = next(p for p in range(P4.n_points) if p not in arc.points)
    with pytest.raises(NotInArc):
        tangent_lines(P4, arc.points, outside)


# -- ovals -------------------------------------------------------------------------


def test_is_oval(P5_F5=None):
    F5 = field_new(5)
    P5 = pg2(F5)
    arc = canonical_conic(F5, P5)
    assert is_oval(P5, arc.points)
    assert not is_oval(P5, arc.points[:-1])  # size d


def test_conic_plus_nucleus_is_not_an_oval_but_is_an_arc(P4, F4):
    arc = canonical_conic(F4, P4)
    nuc = nucleus(P4, arc.points)
    hyper = sorted(set(arc.points) | {nuc})
    assert not is_oval(P4, hyper)  # size d+2
    assert is_arc(P4, hyper)


# -- conic machinery -----------------------------------------------------------------


def test_conic_solutions_canonical(P3, F3):
    sols = conic_solutions(F3, canonical_conic_coeffs(F3), P3)
    assert set(sols) == set(canonical_conic(F3, P3).points)


def test_conic_solutions_degenerate_line(F3, P3):
    # z1^2 = 0 cuts out the line z1 = 0 (q+1 collinear points)
    sols = conic_solutions(F3, (1, 0, 0, 0, 0, 0), P3)
    assert len(sols) == 4
    assert not is_arc(P3, sols)
    assert not conic_is_proper(F3, (1, 0, 0, 0, 0, 0))


def test_proper_conic_gf8_is_arc(F8, P8):
    sols = conic_solutions(F8, canonical_conic_coeffs(F8), P8)
    assert len(sols) == 9
    assert is_arc(P8, sols)


def test_properness_flag_matches_brute_force_point_structure():
    # oracle: a 6-vector is proper iff its zero set is a (q+1)-arc
    for q, pn in [(2, (2, 1)), (3, (3, 1)), (4, (2, 2)), (5, (5, 1))]:
        F = field_new(*pn)
        P = pg2(F)
        proper_count = 0
        seen = set()
        for raw in itertools.product(range(q), repeat=6):
            if all(c == 0 for c in raw):
                continue
            conic = Conic.from_coeffs(F, raw)
            if conic.coeffs in seen:
                continue
            seen.add(conic.coeffs)
            sols = conic_solutions(F, conic.coeffs, P)
            brute_proper = len(sols) == q + 1 and bool(is_arc(P, sols, method="incidence"))
            assert conic.proper == brute_proper, (q, conic.coeffs, sols)
            proper_count += conic.proper
        assert proper_count == q**5 - q**2


def test_fit_conic_recovers_canonical(F9=None):
    F7 = field_new(7)
    P7 = pg2(F7)
    arc = canonical_conic(F7, P7)
    conic = fit_conic_5pts(F7, arc.points[:5], P7)
    assert conic is not None
    want = Conic.from_coeffs(F7, canonical_conic_coeffs(F7))
    assert conic.coeffs == want.coeffs


def test_fit_conic_collinear_points_absent(P3):
    line = [int(p) for p in P3.line_points(0)]
    others = [p for p in range(P3.n_points) if p not in line]
    pts = line[:3] + others[:2]
    assert fit_conic_5pts(P3.field, pts, P3) is None


def test_fit_conic_duplicate_points(P9, F9):
    arc = canonical_conic(F9, P9)
    with pytest.raises(DuplicatePoints):
        fit_conic_5pts(F9, list(arc.points[:4]) + [arc.points[0]], P9)
    with pytest.raises(DuplicatePoints):
        fit_conic_5pts(F9, arc.points[:4], P9)


def test_fit_through_expoint_misses_pointed_conic(F8, P8):
    # 5 points of a pointed conic including the adjoined nucleus determine a
    # conic that does NOT contain the remaining pointed-conic points
    arc = canonical_conic(F8, P8)
    nuc = nucleus(P8, arc.points)
    pc = pointed_conic(F8, arc, arc.points[0])
    assert nuc in pc.points
    five = [nuc] + [p for p in pc.points if p != nuc][:4]
    conic = fit_conic_5pts(F8, five, P8)
    assert conic is not None
    missed = [p for p in pc.points if conic.value_at(P8.points[p]) != 0]
    assert missed


# -- nucleus and pointed conics ---------------------------------------------------------


def test_nucleus_values_even_order():
    for q, pn in [(2, (2, 1)), (4, (2, 2)), (8, (2, 3)), (16, (2, 4))]:
        F = field_new(*pn)
        P = pg2(F)
        arc = canonical_conic(F, P)
        nuc = nucleus(P, arc.points)
        # coefficient nucleus of z1 z2 - z3^2 is (0, 0, 1)
        assert P.points[nuc] == (0, 0, 1)
        hyper = sorted(set(arc.points) | {nuc})
        assert len(hyper) == q + 2
        assert is_arc(P, hyper)


def test_nucleus_odd_order_raises():
    for q, pn in [(3, (3, 1)), (5, (5, 1)), (7, (7, 1)), (9, (3, 2))]:
        F = field_new(*pn)
        P = pg2(F)
        arc = canonical_conic(F, P)
        with pytest.raises(OddOrder):
            nucleus(P, arc.points)


def test_nucleus_requires_oval(P4):
    with pytest.raises(NotAnOval):
        nucleus(P4, [0, 1, 2])


def test_pointed_conic_gf8(F8, P8):
    arc = canonical_conic(F8, P8)
    x = arc.points[0]
    pc = pointed_conic(F8, arc, x)
    assert len(pc) == 9
    assert is_oval(P8, pc.points)
    assert nucleus(P8, arc.points) in pc.points
    assert len(set(pc.points) & set(arc.points)) == 8  # shares d = 2^n points


def test_pointed_conic_errors(F8, F9, P8):
    arc8 = canonical_conic(F8, P8)
    with pytest.raises(PointNotOnConic):
        pointed_conic(F8, arc8, nucleus(P8, arc8.points))
    arc9 = canonical_conic(F9)
    with pytest.raises(WrongCharacteristic):
        pointed_conic(F9, arc9, arc9.points[0])


# -- o-polynomial hyperovals --------------------------------------------------------------


def test_opoly_square_gives_regular_hyperoval(F4, P4):
    hyper = opoly_hyperoval(F4, [0, 0, 1], P4)
    assert len(hyper) == 6
    assert is_arc(P4, hyper.points)


def test_opoly_identity_fails(F4, F8):
    for F in (F4, F8):
        with pytest.raises(NotAHyperoval):
            opoly_hyperoval(F, [0, 1])


def test_opoly_square_gf2(F2, P2):
    hyper = opoly_hyperoval(F2, [0, 0, 1], P2)
    assert len(hyper) == 4


def test_opoly_odd_characteristic_rejected(F3):
    with pytest.raises(WrongCharacteristic):
        opoly_hyperoval(F3, [0, 0, 1])


def test_lagrange_interpolation_roundtrip(F8):
    import numpy as np

    rng = np.random.default_rng(5)
    values = [int(v) for v in rng.integers(0, 8, size=8)]
    coeffs = lagrange_coeffs(F8, values)

    def horner(t):
        acc = 0
        for c in reversed(coeffs):
            acc = F8.add(F8.mul(acc, t), c)
        return acc

    assert [horner(t) for t in range(8)] == values


# -- classification -------------------------------------------------------------------


def test_classify_canonical_conics():
    for q, pn in [(2, (2, 1)), (4, (2, 2)), (8, (2, 3)), (16, (2, 4))]:
        F = field_new(*pn)
        P = pg2(F)
        arc = canonical_conic(F, P)
        assert classify_oval(P, arc.points) is OvalClass.CONIC


def test_classify_pointed_conic_dichotomy():
    for q, pn, want in [
        (4, (2, 2), OvalClass.CONIC),
        (8, (2, 3), OvalClass.POINTED_CONIC),
        (16, (2, 4), OvalClass.POINTED_CONIC),
    ]:
        F = field_new(*pn)
        P = pg2(F)
        arc = canonical_conic(F, P)
        pc = pointed_conic(F, arc, arc.points[0])
        assert classify_oval(P, pc.points) is want


def test_classify_odd_order_short_circuit(P9, F9):
    arc = canonical_conic(F9, P9)
    assert classify_oval(P9, arc.points) is OvalClass.CONIC
    # cross-check the fit on odd order anyway
    for q, pn in [(3, (3, 1)), (5, (5, 1)), (7, (7, 1)), (9, (3, 2))]:
        F = field_new(*pn)
        P = pg2(F)
        a = canonical_conic(F, P)
        conic = fit_conic_5pts(F, a.points[:5], P) if len(a) >= 5 else None
        if conic is not None:
            assert all(conic.value_at(P.points[i]) == 0 for i in a.points)


def test_classify_rejects_non_oval(P4):
    with pytest.raises(NotAnOval):
        classify_oval(P4, [0, 1, 2])


def test_conic_drops_matches_per_subset_scan(F8, P8):
    arc = canonical_conic(F8, P8)
    nuc = nucleus(P8, arc.points)
    hyper = sorted(set(arc.points) | {nuc})
    drops = conic_drops(F8, P8, hyper)
    assert drops == [nuc]  # dropping the nucleus leaves the conic


# -- certificates ----------------------------------------------------------------------


def test_oval_certificate_roundtrip(P8, F8):
    arc = canonical_conic(F8, P8)
    cert = build_oval_certificate(P8, arc.points)
    assert cert["class"] == "conic"
    assert cert["conic_coeffs"] is not None
    assert verify_oval_certificate(P8, cert)


def test_oval_certificate_detects_tampering(P8, F8):
    arc = canonical_conic(F8, P8)
    cert = build_oval_certificate(P8, arc.points)
    bad = dict(cert)
    pts = list(cert["points"])
    pts[0] = (pts[0] + 1) % P8.n_points
    bad["points"] = pts
    with pytest.raises(VerificationFailed):
        verify_oval_certificate(P8, bad)


def test_oval_certificate_class_mismatch(P8, F8):
    arc = canonical_conic(F8, P8)
    pc = pointed_conic(F8, arc, arc.points[0])
    cert = build_oval_certificate(P8, pc.points)
    assert cert["class"] == "pointed_conic"
    bad = dict(cert)
    bad["class"] = "conic"
    with pytest.raises(VerificationFailed):
        verify_oval_certificate(P8, bad)


def test_arc_container_validates(P4):
    line = [int(p) for p in P4.line_points(0)]
    with pytest.raises(ValueError):
        Arc(P4, tuple(line))
