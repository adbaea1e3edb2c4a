"""Arcs, conics, ovals, nuclei, pointed conics and oval classification.

A k-arc is a point set with no three members collinear.  Collinearity is
decided two independent ways: by 3x3 coordinate determinants when the plane
carries homogeneous coordinates, and by pure incidence lookups otherwise;
the test suite cross-checks the two paths against each other.

Conics are coefficient 6-vectors (c11,c12,c13,c22,c23,c33) acting on
homogeneous coordinates.  Properness is always computed, never assumed:
odd characteristic uses the determinant of the symmetric matrix of the
form, characteristic 2 uses the radical of the polar form (whose generator
is the would-be nucleus) plus the value of the form there.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
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
from .galois import Field
from .plane import Plane, canonicalize_triple, pg2, point_index


# -- arc property ---------------------------------------------------------------


@dataclass
class ArcCheck:
    ok: bool
    witness: tuple[int, int, int] | None = None  # a collinear triple when not ok

    def __bool__(self) -> bool:
        return self.ok


def _validate_points(P: Plane, pts: Iterable[int]) -> list[int]:
    out = []
    for p in pts:
        p = int(p)
        if not 0 <= p < P.n_points:
            raise UnknownPoint(f"point {p} outside plane with {P.n_points} points")
        out.append(p)
    return out


def collinear_det(F: Field, t1: Sequence[int], t2: Sequence[int], t3: Sequence[int]) -> bool:
    """Coordinate test: vanishing of the 3x3 determinant of the triple."""
    m = (t1, t2, t3)
    det = 0
    for j0, j1, j2, sign in ((0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1), (2, 1, 0, -1), (1, 0, 2, -1), (0, 2, 1, -1)):
        term = F.mul(F.mul(m[0][j0], m[1][j1]), m[2][j2])
        det = F.add(det, term if sign > 0 else F.neg(term))
    return det == 0


def is_arc(P: Plane, pts: Iterable[int], method: str = "auto") -> ArcCheck:
    """True iff no three of the points are collinear; witness triple otherwise.

    method: 'incidence' counts members per line (works in any plane),
    'determinant' runs the coordinate test per triple (Desarguesian planes),
    'auto' picks the determinant route when coordinates exist and the set is
    small, else incidence.
    """
    pts = sorted(set(_validate_points(P, pts)))
    if len(pts) < 3:
        return ArcCheck(True)
    if method == "auto":
        method = "determinant" if P.points is not None and len(pts) <= 24 else "incidence"
    if method == "determinant":
        if P.points is None or P.field is None:
            raise ValueError("determinant method needs a coordinatized plane")
        F = P.points, P.field
        coords, fld = F
        for a, b, c in itertools.combinations(pts, 3):
            if collinear_det(fld, coords[a], coords[b], coords[c]):
                return ArcCheck(False, (a, b, c))
        return ArcCheck(True)
    if method != "incidence":
        raise ValueError(f"unknown method {method!r}")
    counts = P.incidence[:, pts].sum(axis=1)
    bad = np.flatnonzero(counts >= 3)
    if len(bad):
        row = P.line_points(int(bad[0]))
        hit = [int(p) for p in row if p in set(pts)][:3]
        return ArcCheck(False, tuple(hit))  # type: ignore[arg-type]
    return ArcCheck(True)


@dataclass(frozen=True)
class Arc:
    """A validated arc: sorted point indices of a plane, no three collinear."""

    plane: Plane
    points: tuple[int, ...]

    def __post_init__(self):
        chk = is_arc(self.plane, self.points, method="incidence")
        if not chk:
            raise ValueError(f"not an arc: collinear triple {chk.witness}")
        object.__setattr__(self, "points", tuple(sorted(int(p) for p in self.points)))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


# -- tangents and ovals ------------------------------------------------------------


@dataclass
class TangentInfo:
    tangents: tuple[int, ...]  # line indices meeting the arc exactly at x
    secants: int  # lines through x meeting the arc twice

    def __len__(self) -> int:
        return len(self.tangents)


def tangent_lines(P: Plane, arc_pts: Iterable[int], x: int) -> TangentInfo:
    pts = set(_validate_points(P, arc_pts))
    x = int(x)
    if x not in pts:
        raise NotInArc(f"point {x} is not a member of the arc")
    tangents = []
    secants = 0
    for lid in P.lines_through_point(x):
        hits = pts.intersection(int(p) for p in P.line_points(int(lid)))
        if len(hits) == 1:
            tangents.append(int(lid))
        elif len(hits) == 2:
            secants += 1
    return TangentInfo(tuple(tangents), secants)


def is_oval(P: Plane, pts: Iterable[int]) -> bool:
    """A (d+1)-arc; when the size and arc property hold, the one-tangent-per-point
    law is asserted as an internal consistency check (it is forced by counting)."""
    pts = sorted(set(_validate_points(P, pts)))
    if len(pts) != P.order + 1:
        return False
    if not is_arc(P, pts, method="incidence"):
        return False
    for x in pts:
        info = tangent_lines(P, pts, x)
        assert len(info.tangents) == 1 and info.secants == P.order, "tangent count violated (bug)"
    return True


# -- conics -----------------------------------------------------------------------


MONOMIALS = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))  # z_i z_j, i <= j


def conic_eval(F: Field, coeffs: Sequence[int], z: Sequence[int]) -> int:
    acc = 0
    for c, (i, j) in zip(coeffs, MONOMIALS):
        acc = F.add(acc, F.mul(c, F.mul(z[i], z[j])))
    return acc


def conic_is_proper(F: Field, coeffs: Sequence[int]) -> bool:
    c11, c12, c13, c22, c23, c33 = coeffs
    if F.p != 2:
        two = F.add(1, 1)
        a = [
            [F.mul(two, c11), c12, c13],
            [c12, F.mul(two, c22), c23],
            [c13, c23, F.mul(two, c33)],
        ]
        det = 0
        for (j0, j1, j2), sgn in (
            ((0, 1, 2), 1),
            ((1, 2, 0), 1),
            ((2, 0, 1), 1),
            ((2, 1, 0), -1),
            ((1, 0, 2), -1),
            ((0, 2, 1), -1),
        ):
            term = F.mul(F.mul(a[0][j0], a[1][j1]), a[2][j2])
            det = F.add(det, term if sgn > 0 else F.neg(term))
        return det != 0
    # char 2: polar form is alternating with radical spanned by (c23, c13, c12);
    # the form is nondegenerate iff that vector is nonzero and not on the curve
    if c12 == 0 and c13 == 0 and c23 == 0:
        return False
    return conic_eval(F, coeffs, (c23, c13, c12)) != 0


@dataclass(frozen=True)
class Conic:
    """Projective conic: canonicalized coefficient vector with computed properness."""

    field: Field
    coeffs: tuple[int, int, int, int, int, int]
    proper: bool

    @classmethod
    def from_coeffs(cls, F: Field, coeffs: Sequence[int]) -> Conic:
        c = [int(v) for v in coeffs]
        if len(c) != 6:
            raise ValueError("a conic needs 6 coefficients")
        if all(v == 0 for v in c):
            raise ValueError("zero coefficient vector is not a conic")
        lead = next(v for v in c if v != 0)
        s = F.inv(lead)
        canon = tuple(F.mul(s, v) for v in c)
        return cls(F, canon, conic_is_proper(F, canon))  # type: ignore[arg-type]

    def value_at(self, z: Sequence[int]) -> int:
        return conic_eval(self.field, self.coeffs, z)

    def nucleus_coords(self) -> tuple[int, int, int]:
        """Radical generator of the polar form (characteristic 2 only)."""
        if self.field.p != 2:
            raise WrongCharacteristic("coefficient nucleus exists only in characteristic 2")
        c11, c12, c13, c22, c23, c33 = self.coeffs
        return (c23, c13, c12)


def canonical_conic(F: Field, P: Plane | None = None) -> Arc:
    """The arc z1 z2 = z3^2: the point (1,0,0) plus (s^2, 1, s) for all s."""
    P = P if P is not None else pg2(F)
    pts = [point_index(P, (1, 0, 0))]
    for s in range(F.order):
        pts.append(point_index(P, (F.mul(s, s), 1, s)))
    return Arc(P, tuple(sorted(pts)))


def canonical_conic_coeffs(F: Field) -> tuple[int, ...]:
    """Coefficients of z1 z2 - z3^2."""
    return (0, 1, 0, 0, 0, F.neg(1))


def conic_solutions(F: Field, coeffs: Sequence[int], P: Plane | None = None) -> tuple[int, ...]:
    """All plane points on the conic, by exhaustive evaluation."""
    P = P if P is not None else pg2(F)
    assert P.points is not None
    out = [i for i, z in enumerate(P.points) if conic_eval(F, coeffs, z) == 0]
    return tuple(out)


def _solve_nullspace(F: Field, rows: list[list[int]], width: int) -> list[list[int]]:
    """Basis of the right nullspace of a matrix over F (Gaussian elimination)."""
    mat = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(width):
        piv = next((i for i in range(r, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = F.inv(mat[r][col])
        mat[r] = [F.mul(inv, v) for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [F.sub(v, F.mul(f, w)) for v, w in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * width
        vec[fc] = 1
        for i, pc in enumerate(pivots):
            vec[pc] = F.neg(mat[i][fc])
        basis.append(vec)
    return basis


def _monomial_row(F: Field, z: Sequence[int]) -> list[int]:
    return [F.mul(z[i], z[j]) for i, j in MONOMIALS]


def fit_conic_5pts(F: Field, pts: Sequence[int], P: Plane | None = None) -> Conic | None:
    """The conic through 5 distinct points, if unique and proper; else None."""
    P = P if P is not None else pg2(F)
    assert P.points is not None
    idxs = [int(p) for p in pts]
    if len(idxs) != 5:
        raise DuplicatePoints("exactly 5 points required")
    if len(set(idxs)) != 5:
        raise DuplicatePoints("points must be distinct")
    rows = [_monomial_row(F, P.points[i]) for i in idxs]
    basis = _solve_nullspace(F, rows, 6)
    if len(basis) != 1:
        return None
    conic = Conic.from_coeffs(F, basis[0])
    return conic if conic.proper else None


def _conics_through(F: Field, P: Plane, idxs: Sequence[int]) -> list[Conic]:
    """All proper conics through a (small) point set, by nullspace sweep.

    Needed below the 5-point regime (PG(2,2) ovals have only 3 points)."""
    rows = [_monomial_row(F, P.points[i]) for i in idxs]  # type: ignore[index]
    basis = _solve_nullspace(F, rows, 6)
    if not basis:
        return []
    q = F.order
    out = []
    seen = set()
    # all projective combinations of the nullspace basis
    def combos(k: int) -> Iterable[list[int]]:
        if k == len(basis):
            yield [0] * 6
            return
        for rest in combos(k + 1):
            for s in range(q):
                yield [F.add(F.mul(s, b), r) for b, r in zip(basis[k], rest)]

    for vec in combos(0):
        if all(v == 0 for v in vec):
            continue
        conic = Conic.from_coeffs(F, vec)
        if conic.coeffs in seen:
            continue
        seen.add(conic.coeffs)
        if conic.proper:
            out.append(conic)
    return out


# -- nucleus / pointed conics --------------------------------------------------------


def nucleus(P: Plane, oval_pts: Iterable[int]) -> int:
    """Common point of all tangents of an oval; raises OddOrder when the
    tangents do not concur (they never do in odd order)."""
    pts = sorted(set(_validate_points(P, oval_pts)))
    if not is_oval(P, pts):
        raise NotAnOval(f"{len(pts)} points do not form an oval of order {P.order}")
    tangents = [tangent_lines(P, pts, x).tangents[0] for x in pts]
    cand = P.meet(tangents[0], tangents[1])
    if all(P.incidence[t, cand] for t in tangents[2:]):
        return int(cand)
    raise OddOrder("tangent lines are not concurrent")


def pointed_conic(F: Field, conic_arc: Arc, x: int) -> Arc:
    """Swap a conic point for the nucleus: (C + nucleus) minus x."""
    if F.p != 2:
        raise WrongCharacteristic("pointed conics require characteristic 2")
    if int(x) not in conic_arc.points:
        raise PointNotOnConic(f"{x} is not on the conic arc")
    P = conic_arc.plane
    nuc = nucleus(P, conic_arc.points)
    pts = set(conic_arc.points) | {nuc}
    pts.discard(int(x))
    return Arc(P, tuple(sorted(pts)))


def opoly_hyperoval(F: Field, f_coeffs: Sequence[int], P: Plane | None = None) -> Arc:
    """Hyperoval {(1, t, f(t))} + {(0,1,0), (0,0,1)} from a polynomial, validated
    as a (q+2)-arc before return (this check IS the o-polynomial criterion)."""
    if F.p != 2:
        raise WrongCharacteristic("o-polynomial hyperovals require characteristic 2")
    P = P if P is not None else pg2(F)
    coeffs = [int(c) for c in f_coeffs]

    def f(t: int) -> int:
        acc = 0
        for c in reversed(coeffs):
            acc = F.add(F.mul(acc, t), c)
        return acc

    pts = [point_index(P, (0, 1, 0)), point_index(P, (0, 0, 1))]
    pts += [point_index(P, (1, t, f(t))) for t in range(F.order)]
    if len(set(pts)) != F.order + 2:
        raise NotAHyperoval("image points collide")
    chk = is_arc(P, pts, method="incidence")
    if not chk:
        raise NotAHyperoval(f"collinear triple {chk.witness}: not an o-polynomial")
    return Arc(P, tuple(sorted(pts)))


def lagrange_coeffs(F: Field, values: Sequence[int]) -> list[int]:
    """Coefficient list of the unique polynomial of degree < q with f(t) = values[t]."""
    q = F.order
    if len(values) != q:
        raise ValueError("need one value per field element")
    coeffs = [0] * q
    for a in range(q):
        if values[a] == 0:
            continue
        # basis polynomial 1 - (x - a)^(q-1), expanded
        basis = [1]
        for _ in range(q - 1):
            nxt = [0] * (len(basis) + 1)
            for i, c in enumerate(basis):
                nxt[i + 1] = F.add(nxt[i + 1], c)
                nxt[i] = F.add(nxt[i], F.mul(c, F.neg(a)))
            basis = nxt
        scaled = [F.mul(values[a], F.neg(c)) for c in basis]
        scaled[0] = F.add(scaled[0], values[a])
        for i, c in enumerate(scaled):
            coeffs[i] = F.add(coeffs[i], c)
    return coeffs


# -- classification -------------------------------------------------------------------


class OvalClass(enum.Enum):
    CONIC = "conic"
    POINTED_CONIC = "pointed_conic"
    IRREGULAR = "irregular"


@dataclass
class ClassifiedOval:
    oval_class: OvalClass
    conic: Conic | None  # witness when the oval itself is a conic
    nucleus: int | None  # nucleus point (even order)
    hyperoval: tuple[int, ...] | None  # completion (even order)


def _point_set_is_conic(F: Field, P: Plane, pts: Sequence[int]) -> Conic | None:
    """The proper conic whose solution set equals pts, if one exists."""
    pts = sorted(pts)
    if len(pts) >= 5:
        conic = fit_conic_5pts(F, pts[:5], P)
        if conic is None:
            return None
        if all(conic.value_at(P.points[i]) == 0 for i in pts):  # type: ignore[index]
            return conic
        return None
    for conic in _conics_through(F, P, pts):
        if set(conic_solutions(F, conic.coeffs, P)) == set(pts):
            return conic
    return None


def conic_drops(F: Field, P: Plane, hyper: Sequence[int]) -> list[int]:
    """Points x of a hyperoval H such that H minus x is a conic.

    For |H| >= 10 every (|H|-1)-subset fully contains one of the two disjoint
    5-sets H[:5], H[5:10], and 5 points of an arc pin the conic, so two fits
    plus containment sweeps find every conic subset."""
    hyper = sorted(int(p) for p in hyper)
    if len(hyper) >= 10:
        drops: set[int] = set()
        for five in (hyper[:5], hyper[5:10]):
            conic = fit_conic_5pts(F, five, P)
            if conic is None:
                continue
            miss = [p for p in hyper if conic.value_at(P.points[p]) != 0]  # type: ignore[index]
            if len(miss) == 1:
                drops.add(miss[0])
        return sorted(drops)
    out = []
    for drop in hyper:
        sub = [p for p in hyper if p != drop]
        if _point_set_is_conic(F, P, sub) is not None:
            out.append(drop)
    return out


def classify_oval_detail(P: Plane, oval_pts: Iterable[int]) -> ClassifiedOval:
    """Classify an oval of a Desarguesian plane as conic / pointed conic / irregular.

    Odd order short-circuits to conic (every oval is one); the fit is still
    exercised by the test suite as a cross-check.  Even order: the oval is a
    conic iff the conic through 5 of its points contains it; otherwise it is
    a pointed conic iff its hyperoval completion contains a full conic.
    """
    if P.field is None or P.points is None:
        raise NotAnOval("classification needs a Desarguesian plane")
    F = P.field
    pts = sorted(set(_validate_points(P, oval_pts)))
    if len(pts) != P.order + 1 or not is_arc(P, pts, method="incidence"):
        raise NotAnOval(f"{len(pts)} points do not form an oval of order {P.order}")
    if F.p != 2:
        return ClassifiedOval(OvalClass.CONIC, None, None, None)
    conic = _point_set_is_conic(F, P, pts)
    nuc = nucleus(P, pts)
    hyper = tuple(sorted(set(pts) | {nuc}))
    if conic is not None:
        return ClassifiedOval(OvalClass.CONIC, conic, nuc, hyper)
    for drop in hyper:
        sub = [p for p in hyper if p != drop]
        sub_conic = _point_set_is_conic(F, P, sub)
        if sub_conic is not None:
            return ClassifiedOval(OvalClass.POINTED_CONIC, None, nuc, hyper)
    return ClassifiedOval(OvalClass.IRREGULAR, None, nuc, hyper)


def classify_oval(P: Plane, oval_pts: Iterable[int]) -> OvalClass:
    return classify_oval_detail(P, oval_pts).oval_class


# -- certificates ----------------------------------------------------------------------


def build_oval_certificate(P: Plane, pts: Iterable[int], seed: int | None = None, workers: int = 1) -> dict:
    from . import __version__

    pts = sorted(set(_validate_points(P, pts)))
    cert: dict = {
        "type": "oval",
        "plane": P.name,
        "points": [int(p) for p in pts],
        "class": None,
        "nucleus": None,
        "conic_coeffs": None,
        "meta": {"tool_version": __version__, "seed": seed, "workers": workers},
    }
    if P.field is not None:
        cert["field"] = P.field.describe()
        detail = classify_oval_detail(P, pts)
        cert["class"] = detail.oval_class.value
        cert["nucleus"] = detail.nucleus
        if detail.conic is not None:
            cert["conic_coeffs"] = [int(c) for c in detail.conic.coeffs]
    return cert


def verify_oval_certificate(P: Plane, cert: dict) -> bool:
    """Re-check an oval certificate by incidence (and coordinates when classed)."""
    pts = [int(p) for p in cert.get("points", [])]
    if len(pts) != P.order + 1 or len(set(pts)) != len(pts):
        raise VerificationFailed("certificate does not list d+1 distinct points")
    if any(not 0 <= p < P.n_points for p in pts):
        raise VerificationFailed("point index out of range")
    chk = is_arc(P, pts, method="incidence")
    if not chk:
        raise VerificationFailed(f"points are not an arc: collinear triple {chk.witness}")
    claimed = cert.get("class")
    if claimed is None:
        return True
    if P.field is None:
        raise VerificationFailed("class claim on a plane without coordinates")
    detail = classify_oval_detail(P, pts)
    if detail.oval_class.value != claimed:
        raise VerificationFailed(f"class mismatch: found {detail.oval_class.value}, claimed {claimed}")
    if cert.get("nucleus") is not None and detail.nucleus != int(cert["nucleus"]):
        raise VerificationFailed("nucleus mismatch")
    if cert.get("conic_coeffs") is not None:
        coeffs = [int(c) for c in cert["conic_coeffs"]]
        F = P.field
        if any(conic_eval(F, coeffs, P.points[i]) != 0 for i in pts):  # type: ignore[index]
            raise VerificationFailed("claimed conic does not contain the oval")
        if not conic_is_proper(F, coeffs):
            raise VerificationFailed("claimed conic is degenerate")
    return True
