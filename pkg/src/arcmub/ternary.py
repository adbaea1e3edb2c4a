"""Planar-ternary-ring extraction: coordinatize a plane over a quadrilateral.

Given an ordered frame (origin O, x-direction X, y-direction Y, unit I) the
line XY plays the line at infinity and OI the diagonal; every other point
receives coordinates by projecting onto OI from X and from Y.  The ternary
table is read straight off incidence: T(a,b,c) is the y-coordinate of the
point with x-coordinate a on the line joining the slope-b ideal point to the
y-intercept (0,c).  The four planar-ternary-ring axioms are re-verified by
exhaustive table scan before the table is returned, so downstream property
profiling never trusts the construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CoordinatizationFailure, NotAQuadrilateral
from .plane import Plane


@dataclass
class TernaryRing:
    """A ternary operation table on symbols 0..d-1 with distinguished 0 and 1."""

    size: int
    table: np.ndarray  # (d, d, d) int16, entry [a, b, c] = T(a, b, c)
    plane_name: str
    frame: tuple[int, int, int, int]
    symbol_points: tuple[int, ...]  # plane point carrying each symbol

    def t(self, a: int, b: int, c: int) -> int:
        return int(self.table[a, b, c])

    def add(self, a: int, c: int) -> int:
        """Derived addition a + c := T(a, 1, c)."""
        return int(self.table[a, 1, c])

    def mul(self, a: int, b: int) -> int:
        """Derived multiplication a * b := T(a, b, 0)."""
        return int(self.table[a, b, 0])

    def verify_axioms(self) -> None:
        d, t = self.size, self.table
        for a in range(d):
            for c in range(d):
                if t[a, 0, c] != c or t[0, a, c] != c:
                    raise CoordinatizationFailure(f"identity law fails at ({a},{c})")
        for a in range(d):
            if t[a, 1, 0] != a or t[1, a, 0] != a:
                raise CoordinatizationFailure(f"unit law fails at {a}")
        for a in range(d):
            for b in range(d):
                if sorted(int(t[a, b, x]) for x in range(d)) != list(range(d)):
                    raise CoordinatizationFailure(f"T({a},{b},.) is not a bijection")
        # unique (b,x) with T(a,b,x)=c and T(a',b,x)=c' for a != a'
        for a in range(d):
            for a2 in range(d):
                if a2 == a:
                    continue
                for c in range(d):
                    for c2 in range(d):
                        hits = 0
                        for b in range(d):
                            for x in range(d):
                                if t[a, b, x] == c and t[a2, b, x] == c2:
                                    hits += 1
                        if hits != 1:
                            raise CoordinatizationFailure(
                                f"joining law fails at a={a},a'={a2},c={c},c'={c2} ({hits} solutions)"
                            )
        # unique a with T(a,b,c) = T(a,b',c') for b != b'
        for b in range(d):
            for b2 in range(d):
                if b2 == b:
                    continue
                for c in range(d):
                    for c2 in range(d):
                        hits = sum(1 for a in range(d) if t[a, b, c] == t[a, b2, c2])
                        if hits != 1:
                            raise CoordinatizationFailure(
                                f"meet law fails at b={b},b'={b2},c={c},c'={c2} ({hits} solutions)"
                            )


@dataclass
class PtrProperties:
    linear: bool
    add_associative: bool
    add_commutative: bool
    mul_associative: bool
    mul_commutative: bool
    left_distributive: bool
    right_distributive: bool

    @property
    def field_profile(self) -> bool:
        return all(
            (
                self.linear,
                self.add_associative,
                self.add_commutative,
                self.mul_associative,
                self.mul_commutative,
                self.left_distributive,
                self.right_distributive,
            )
        )

    def failures(self) -> list[str]:
        return [k for k, v in self.__dict__.items() if not v]


def ptr_properties(T: TernaryRing) -> PtrProperties:
    """Exhaustive profile of the derived operations of a planar ternary ring."""
    d, t = T.size, T.table
    add = t[:, 1, :]
    mul = t[:, :, 0]
    linear = True
    for a in range(d):
        for b in range(d):
            for c in range(d):
                if t[a, b, c] != add[mul[a, b], c]:
                    linear = False
                    break
            if not linear:
                break
        if not linear:
            break
    add_assoc = all(
        add[add[a, b], c] == add[a, add[b, c]] for a in range(d) for b in range(d) for c in range(d)
    )
    add_comm = bool((add == add.T).all())
    mul_assoc = all(
        mul[mul[a, b], c] == mul[a, mul[b, c]] for a in range(d) for b in range(d) for c in range(d)
    )
    mul_comm = bool((mul == mul.T).all())
    left_dist = all(
        mul[a, add[b, c]] == add[mul[a, b], mul[a, c]]
        for a in range(d)
        for b in range(d)
        for c in range(d)
    )
    right_dist = all(
        mul[add[a, b], c] == add[mul[a, c], mul[b, c]]
        for a in range(d)
        for b in range(d)
        for c in range(d)
    )
    return PtrProperties(linear, add_assoc, add_comm, mul_assoc, mul_comm, left_dist, right_dist)


def extract_ternary_ring(P: Plane, quad: tuple[int, int, int, int]) -> TernaryRing:
    """Coordinatize P over the ordered frame (O, X, Y, I); see module docstring.

    Symbols: O carries 0, I carries 1, remaining points of the diagonal OI get
    2.. in point-index order.  Raises NotAQuadrilateral unless the frame is in
    general position, CoordinatizationFailure if the incidence data does not
    yield a planar ternary ring (never expected for a verified plane).
    """
    o, x, y, i = (int(v) for v in quad)
    if len({o, x, y, i}) != 4:
        raise NotAQuadrilateral("frame points must be distinct")
    for tri in ((o, x, y), (o, x, i), (o, y, i), (x, y, i)):
        if P.collinear(*tri):
            raise NotAQuadrilateral(f"collinear triple {tri} in frame")
    d = P.order
    lt = P.line_through
    lm = P.line_meet
    l_inf = int(lt[x, y])
    l_oi = int(lt[o, i])
    e = int(lm[l_oi, l_inf])
    diag_pts = [int(p) for p in P.line_points(l_oi) if int(p) != e]
    rest = sorted(p for p in diag_pts if p not in (o, i))
    symbol_points = tuple([o, i] + rest)
    sym_of = {p: s for s, p in enumerate(symbol_points)}

    def x_coord(p: int) -> int:
        return sym_of[int(lm[lt[y, p], l_oi])]

    def y_coord(p: int) -> int:
        return sym_of[int(lm[lt[x, p], l_oi])]

    vert = [int(lt[y, rp]) for rp in symbol_points]  # line x = a, through Y and R_a
    l_y = int(lt[o, y])
    # y-axis intercept points (0, c)
    yaxis_pt = [int(lm[l_y, lt[x, rp]]) for rp in symbol_points]
    # slope labels for ideal points other than Y
    slope_of_point: dict[int, int] = {}
    for mpt in (int(p) for p in P.line_points(l_inf)):
        if mpt == y:
            continue
        ray = int(lt[mpt, o])
        hit = int(lm[ray, vert[1]])
        if P.incidence[l_inf, hit]:
            raise CoordinatizationFailure("slope probe left the affine part")
        slope_of_point[mpt] = y_coord(hit)
    if sorted(slope_of_point.values()) != list(range(d)):
        raise CoordinatizationFailure("slope labels do not biject onto symbols")
    point_of_slope = {m: p for p, m in slope_of_point.items()}

    table = np.zeros((d, d, d), dtype=np.int16)
    for b in range(d):
        mb = point_of_slope[b]
        for c in range(d):
            ell = int(lt[mb, yaxis_pt[c]])
            for a in range(d):
                pt = int(lm[ell, vert[a]])
                if P.incidence[l_inf, pt]:
                    raise CoordinatizationFailure("coordinate read-off hit the infinite line")
                table[a, b, c] = y_coord(pt)
    ring = TernaryRing(
        size=d,
        table=table,
        plane_name=P.name,
        frame=(o, x, y, i),
        symbol_points=symbol_points,
    )
    ring.verify_axioms()
    return ring
