"""Mutually unbiased bases with exact cyclotomic verification.

Constructed bases hold only roots of unity (or zeros), so each basis is an
exponent matrix over a fixed root order; inner products are then exponent
bincounts, which stay in integer arithmetic end to end.  Imported bases are
full cyclotomic-integer matrices and go through the generic slow path.

Normalization convention: vectors are stored un-normalized, so a quadratic
phase vector has squared norm d while a standard basis vector has 1.  All
checks therefore use the scale-free criteria

    within a basis:   <u|v> = 0 for u != v,  <u|u> constant across the basis
    across bases:     d * |<u|v>|^2 = <u|u> * <v|v>

which reduce to |<u|v>|^2 = d exactly when both bases carry phase vectors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from .cyclotomic import CycInt, weil_survey
from .errors import DimensionMismatch, EvenCharacteristic
from .galois import Field


@dataclass
class MubVector:
    dimension: int
    entries: list[CycInt]


class MubSet:
    """A list of bases in dimension d; entries exact cyclotomic integers."""

    def __init__(
        self,
        d: int,
        root_order: int,
        exp_bases: list[np.ndarray] | None = None,
        cyc_bases: list[list[list[CycInt]]] | None = None,
        provenance: str = "constructed",
    ):
        if (exp_bases is None) == (cyc_bases is None):
            raise ValueError("exactly one of exp_bases / cyc_bases required")
        self.d = d
        self.root_order = root_order
        self.exp_bases = exp_bases
        self.cyc_bases = cyc_bases
        self.provenance = provenance

    @property
    def n_bases(self) -> int:
        src = self.exp_bases if self.exp_bases is not None else self.cyc_bases
        return len(src)  # type: ignore[arg-type]

    def entry(self, basis: int, vec: int, coord: int) -> CycInt:
        if self.cyc_bases is not None:
            return self.cyc_bases[basis][vec][coord]
        e = int(self.exp_bases[basis][vec, coord])  # type: ignore[index]
        if e < 0:
            return CycInt.zero(self.root_order)
        raw = [0] * self.root_order
        raw[e] = 1
        return CycInt(self.root_order, raw)

    def vector(self, basis: int, vec: int) -> MubVector:
        return MubVector(self.d, [self.entry(basis, vec, k) for k in range(self.d)])

    def to_json_dict(self) -> dict:
        bases = []
        for b in range(self.n_bases):
            mat = []
            for v in range(self.d):
                mat.append([list(self.entry(b, v, k).coeffs) for k in range(self.d)])
            bases.append(mat)
        return {"d": self.d, "root_order": self.root_order, "bases": bases}

    @classmethod
    def from_json_dict(cls, obj: dict) -> MubSet:
        d = int(obj["d"])
        m = int(obj["root_order"])
        bases = []
        for mat in obj["bases"]:
            if len(mat) != d:
                raise DimensionMismatch("basis with wrong vector count")
            rows = []
            for row in mat:
                if len(row) != d:
                    raise DimensionMismatch("vector with wrong entry count")
                rows.append([CycInt(m, coeffs) for coeffs in row])
            bases.append(rows)
        return cls(d, m, cyc_bases=bases, provenance="imported")


def inner_product(u: MubVector | Sequence[CycInt], v: MubVector | Sequence[CycInt]) -> CycInt:
    """Conjugate-linear pairing sum_k conj(u_k) * v_k, exact."""
    ue = u.entries if isinstance(u, MubVector) else list(u)
    ve = v.entries if isinstance(v, MubVector) else list(v)
    if len(ue) != len(ve):
        raise DimensionMismatch(f"vector lengths {len(ue)} != {len(ve)}")
    acc = CycInt.zero(1)
    for a, b in zip(ue, ve):
        acc = acc + a.conj() * b
    return acc


# -- construction ---------------------------------------------------------------------


def wf_mub_set(F: Field) -> MubSet:
    """The d+1 bases of odd prime-power dimension d: the standard basis plus,
    for each a in GF(d), the basis of quadratic-phase vectors with exponent
    Tr(a k^2 + b k) at coordinate k."""
    if F.p == 2:
        raise EvenCharacteristic(
            "quadratic phases do not yield unbiased bases in characteristic 2; "
            "see char2_failure_demo"
        )
    d, p = F.order, F.p
    if d > 81:
        raise DimensionMismatch("construction capped at dimension 81")
    bases = [np.where(np.eye(d, dtype=np.int16), 0, -1).astype(np.int16)]
    ks = np.arange(d)
    tr = np.array([F.trace(x) for x in range(d)], dtype=np.int16)
    mul, add = F._mul, F._add
    sq = mul[ks, ks]
    for a in range(d):
        mat = np.zeros((d, d), dtype=np.int16)
        ak2 = mul[a, sq]
        for b in range(d):
            mat[b, :] = tr[add[ak2, mul[b, ks]]]
        bases.append(mat)
    return MubSet(d, p, exp_bases=bases, provenance="constructed")


def mub_fixture_d2() -> MubSet:
    """The complete dimension-2 set over fourth roots of unity; ships as a
    fixture because the quadratic-phase construction fails at p = 2."""
    std = np.array([[0, -1], [-1, 0]], dtype=np.int16)
    b1 = np.array([[0, 0], [0, 2]], dtype=np.int16)  # (1,1), (1,-1)
    b2 = np.array([[0, 1], [0, 3]], dtype=np.int16)  # (1,i), (1,-i)
    return MubSet(2, 4, exp_bases=[std, b1, b2], provenance="fixture")


# -- verification ----------------------------------------------------------------------


@dataclass
class PairResult:
    basis_a: int
    basis_b: int
    passed: bool
    witness: str | None = None


@dataclass
class MubReport:
    d: int
    n_bases: int
    bound_ok: bool  # n_bases <= d+1
    basis_checks: list[PairResult] = dc_field(default_factory=list)
    cross_checks: list[PairResult] = dc_field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return (
            self.bound_ok
            and all(c.passed for c in self.basis_checks)
            and all(c.passed for c in self.cross_checks)
        )

    def first_failure(self) -> str | None:
        for c in self.basis_checks + self.cross_checks:
            if not c.passed:
                return f"bases ({c.basis_a},{c.basis_b}): {c.witness}"
        if not self.bound_ok:
            return f"{self.n_bases} bases exceed the d+1 bound"
        return None

    def lines_of_text(self) -> list[str]:
        out = [
            f"{self.n_bases} bases in dimension {self.d} "
            f"(bound d+1 = {self.d + 1}: {'ok' if self.bound_ok else 'EXCEEDED'})"
        ]
        fails = [c for c in self.basis_checks + self.cross_checks if not c.passed]
        if not fails:
            out.append("all orthonormality and unbiasedness checks pass exactly")
        for c in fails:
            out.append(f"FAIL bases ({c.basis_a},{c.basis_b}): {c.witness}")
        return out


def _counts_inner_table(X: np.ndarray, Y: np.ndarray, m: int) -> np.ndarray:
    """counts[i,j,t] = #coords where conj(X_i)*Y_j contributes zeta^t (exponent path)."""
    d = X.shape[0]
    diff = (Y[None, :, :].astype(np.int64) - X[:, None, :].astype(np.int64)) % m
    valid = (X[:, None, :] >= 0) & (Y[None, :, :] >= 0)
    counts = np.zeros((d, d, m), dtype=np.int64)
    ii, jj, _ = np.nonzero(valid)
    np.add.at(counts, (ii, jj, diff[valid]), 1)
    return counts


def _prime_root_zero(counts: np.ndarray) -> np.ndarray:
    """Which (i,j) inner products are exactly zero (root order prime):
    a count vector reduces to zero iff it is constant."""
    return (counts == counts[..., :1]).all(axis=-1)


def _prime_root_magnitude(counts: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """(rational?, magnitude^2) per (i,j) for prime root order: the squared
    magnitude is the lag-0 autocorrelation minus the (constant) other lags."""
    d = counts.shape[0]
    auto = np.zeros((d, d, m), dtype=np.int64)
    for s in range(m):
        auto[..., s] = (counts * np.roll(counts, -s, axis=-1)).sum(axis=-1)
    if m == 1:
        return np.ones((d, d), dtype=bool), auto[..., 0]
    rational = (auto[..., 1:] == auto[..., 1:2]).all(axis=-1)
    return rational, auto[..., 0] - auto[..., 1]


def _is_prime(m: int) -> bool:
    return m >= 2 and all(m % k for k in range(2, int(m**0.5) + 1))


def verify_mub_set(S: MubSet) -> MubReport:
    """Exact orthonormality and pairwise-unbiasedness check of every basis pair."""
    d = S.d
    rep = MubReport(d, S.n_bases, bound_ok=S.n_bases <= d + 1)
    fast = S.exp_bases is not None and _is_prime(S.root_order)
    if fast:
        m = S.root_order
        norms = []
        for bi, X in enumerate(S.exp_bases):  # type: ignore[union-attr]
            counts = _counts_inner_table(X, X, m)
            zero = _prime_root_zero(counts)
            ns = counts.sum(axis=-1)  # present-coordinate counts = <u|u>
            diag = np.diag(ns)
            ok = True
            witness = None
            if not (diag == diag[0]).all():
                ok, witness = False, f"norms not uniform: {sorted(set(diag.tolist()))}"
            off = ~np.eye(d, dtype=bool)
            if ok and not zero[off].all():
                i, j = np.argwhere(~zero & off)[0]
                ok, witness = False, f"vectors {i},{j} not orthogonal"
            norms.append(int(diag[0]))
            rep.basis_checks.append(PairResult(bi, bi, ok, witness))
        for a in range(S.n_bases):
            for b in range(a + 1, S.n_bases):
                counts = _counts_inner_table(S.exp_bases[a], S.exp_bases[b], m)  # type: ignore[index]
                rational, mag = _prime_root_magnitude(counts, m)
                want = norms[a] * norms[b]
                good = rational & (mag * d == want)
                if good.all():
                    rep.cross_checks.append(PairResult(a, b, True))
                else:
                    i, j = np.argwhere(~good)[0]
                    val = int(mag[i, j]) if rational[i, j] else "irrational"
                    rep.cross_checks.append(
                        PairResult(
                            a,
                            b,
                            False,
                            f"|<{i}|{j}>|^2 = {val}, need {want}/{d}",
                        )
                    )
        return rep
    # generic exact path (imported sets, non-prime root orders)
    vectors = [[S.vector(b, v) for v in range(d)] for b in range(S.n_bases)]
    norms = []
    for bi, vecs in enumerate(vectors):
        ok, witness = True, None
        nrm = inner_product(vecs[0], vecs[0])
        for i in range(d):
            for j in range(i, d):
                ip = inner_product(vecs[i], vecs[j])
                if i == j:
                    if ip != nrm:
                        ok, witness = False, f"norms not uniform at vector {i}"
                        break
                elif not ip.is_zero():
                    ok, witness = False, f"vectors {i},{j} not orthogonal"
                    break
            if not ok:
                break
        if not nrm.is_rational():
            ok, witness = False, "norm is not rational"
        norms.append(nrm.coeffs[0] if nrm.coeffs else 0)
        rep.basis_checks.append(PairResult(bi, bi, ok, witness))
    for a in range(S.n_bases):
        for b in range(a + 1, S.n_bases):
            ok, witness = True, None
            want = norms[a] * norms[b]
            for i in range(d):
                for j in range(d):
                    mag = inner_product(vectors[a][i], vectors[b][j]).magnitude_sq()
                    if mag is None or mag * d != want:
                        ok = False
                        witness = f"|<{i}|{j}>|^2 = {mag}, need {want}/{d}"
                        break
                if not ok:
                    break
            rep.cross_checks.append(PairResult(a, b, ok, witness))
    return rep


# -- characteristic-2 failure demonstration --------------------------------------------


@dataclass
class Char2Report:
    d: int
    zero_witness: tuple[int, int, int, int] | None  # (a, b, a2, b2) with exact zero
    n_zero_pairs: int
    survey_consistent: bool  # inner magnitudes match the character-sum table

    def lines_of_text(self) -> list[str]:
        out = [f"dimension {self.d}: quadratic-phase bases are NOT mutually unbiased"]
        if self.zero_witness:
            a, b, a2, b2 = self.zero_witness
            out.append(
                f"exact zero: <B{a} vector {b} | B{a2} vector {b2}> = 0 "
                f"({self.n_zero_pairs} zero cross pairs in total)"
            )
        out.append(
            "cross magnitudes match the character-sum survey: "
            + ("yes" if self.survey_consistent else "NO")
        )
        return out


def char2_failure_demo(F: Field) -> Char2Report:
    """Build the sign-phase bases naively in characteristic 2 and report how
    unbiasedness fails; the vanishing pattern is cross-checked against the
    character-sum survey table."""
    if F.p != 2:
        raise EvenCharacteristic("the failure demo is for characteristic 2")
    d = F.order
    ks = np.arange(d)
    tr = np.array([F.trace(x) for x in range(d)], dtype=np.int64)
    mul, add = F._mul, F._add
    sq = mul[ks, ks]
    mats = []
    for a in range(d):
        mat = np.zeros((d, d), dtype=np.int64)
        for b in range(d):
            mat[b, :] = tr[add[mul[a, sq], mul[b, ks]]]
        mats.append(mat)
    signs = [1 - 2 * m for m in mats]  # (-1)^Tr(...)
    survey = weil_survey(F)
    zero_witness = None
    n_zero = 0
    consistent = True
    for a in range(d):
        for a2 in range(a + 1, d):
            gram = signs[a] @ signs[a2].T  # <u_b | v_b2> over the reals (entries +-1)
            for b in range(d):
                for b2 in range(d):
                    val = int(gram[b, b2])
                    if val == 0:
                        n_zero += 1
                        if zero_witness is None:
                            zero_witness = (a, b, a2, b2)
                    m = F.sub(a2, a)
                    n = F.sub(b2, b)
                    if val * val != int(survey.table[m, n]):
                        consistent = False
    return Char2Report(d, zero_witness, n_zero, consistent)


# -- cardinality analogy -----------------------------------------------------------------


@dataclass
class AnalogyReport:
    d: int
    plane_name: str
    max_arc_with_tangents: int
    theoretical_bound: int  # d + 1
    mub_bases: int | None
    mub_verified: bool | None
    match: bool
    triangle_exists: bool
    three_basis_subset_ok: bool | None

    def lines_of_text(self) -> list[str]:
        out = [
            f"order/dimension {self.d}: largest tangent-bearing arc found = "
            f"{self.max_arc_with_tangents}, bound d+1 = {self.theoretical_bound}"
        ]
        if self.mub_bases is not None:
            out.append(
                f"verified basis count = {self.mub_bases} "
                f"({'exact pass' if self.mub_verified else 'VERIFICATION FAILED'})"
            )
            out.append("cardinality match: " + ("yes" if self.match else "NO"))
        else:
            out.append("no basis set constructed for this dimension")
        out.append(
            f"minimum side: triangle exists = {self.triangle_exists}"
            + (
                f", 3-basis subset verifies = {self.three_basis_subset_ok}"
                if self.three_basis_subset_ok is not None
                else ""
            )
        )
        return out


def analogy_report(d: int, P, S: MubSet | None, census=None, seed: int | None = 0, workers: int = 1):
    """Juxtapose the largest tangent-bearing arc of a plane with the verified
    basis count of a MUB set of matching dimension."""
    from .search import search_ovals

    if P.order != d:
        raise DimensionMismatch(f"plane order {P.order} != {d}")
    if S is not None and S.d != d:
        raise DimensionMismatch(f"MUB dimension {S.d} != {d}")
    if census is None:
        census = search_ovals(P, mode="exhaustive", seed=seed, workers=workers)
    max_arc = census.max_tangent_arc_size()
    triangle = census.arc_counts.get(3, 0) > 0
    mub_bases = mub_ok = subset_ok = None
    if S is not None:
        rep = verify_mub_set(S)
        mub_bases, mub_ok = rep.n_bases, rep.all_pass
        if S.n_bases >= 3:
            sub = (
                MubSet(S.d, S.root_order, exp_bases=S.exp_bases[:3])
                if S.exp_bases is not None
                else MubSet(S.d, S.root_order, cyc_bases=S.cyc_bases[:3])
            )
            subset_ok = verify_mub_set(sub).all_pass
    match = bool(mub_ok) and max_arc == d + 1 and mub_bases == d + 1
    return AnalogyReport(
        d=d,
        plane_name=P.name,
        max_arc_with_tangents=max_arc,
        theoretical_bound=d + 1,
        mub_bases=mub_bases,
        mub_verified=mub_ok,
        match=bool(match),
        triangle_exists=triangle,
        three_basis_subset_ok=subset_ok,
    )


def save_mub_json(S: MubSet, fh) -> None:
    json.dump(S.to_json_dict(), fh)


def load_mub_json(fh) -> MubSet:
    return MubSet.from_json_dict(json.load(fh))
