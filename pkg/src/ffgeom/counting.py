"""Exhaustive counting kernels: dot-product histograms, the energies D and M,
the apex reduction to isosceles triples one dimension down, and triangle
counts in every variant used by the experiments.

Conventions, fixed once for the whole package:

* All tuple counts are over ordered tuples, so they match the sum-of-squares
  algebra of histograms exactly (D = sum over apexes of sum_t n_t^2, etc.).
* "Distance" means the finite-field norm of the difference; it can vanish
  for distinct points.
* Triangle taxonomy over ordered triples (x, y, z) with ||x-y|| = ||x-z||:
    t_nde   equal sides nonzero and base ||y-z|| nonzero
    t_de    a zero side: equal sides zero, or base zero
    t_star  base nonzero (equal sides unconstrained)
  t_nde + t_de partitions the isosceles triples and t_nde <= t_star. The raw
  count with equal nonzero sides but unconstrained base is kept alongside as
  t_nde_raw, and t_zero_triples counts triples with all three sides zero.
* degenerate_pairs counts ordered pairs (x, y), diagonal included, with
  ||x-y|| = 0.

Counts are returned as Python ints (arbitrary precision); numpy int64 is
used only for intermediates whose ranges stay well inside 63 bits at the
supported set sizes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import PrimeField
from .varieties import (
    PointSet,
    ResourceLimitError,
    bar_projection,
    on_paraboloid,
    restrict_nonzero_base,
)

# Pairwise kernels materialize an |X|^2 matrix; guard against accidents.
PAIR_MATRIX_CAP = 100_000_000

_ROW_BLOCK = 512


def _require_compatible(a: PointSet, b: PointSet) -> None:
    if a.field != b.field or a.dim != b.dim:
        raise ValueError("point sets must share field and dimension")


@dataclass(frozen=True)
class DotHistogram:
    """r(t) = number of ordered pairs (x, y) in E x F with x.y = t."""

    field: PrimeField
    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)

    def as_dict(self) -> dict[int, int]:
        return {t: c for t, c in enumerate(self.counts) if c}


def dot_histogram(E: PointSet, F: PointSet | None = None) -> DotHistogram:
    F = E if F is None else F
    _require_compatible(E, F)
    p = E.field.p
    counts = np.zeros(p, dtype=np.int64)
    if len(E) and len(F):
        ft = F.array.T
        for lo in range(0, len(E), _ROW_BLOCK):
            block = (E.array[lo : lo + _ROW_BLOCK] @ ft) % p
            counts += np.bincount(block.ravel(), minlength=p)
    return DotHistogram(E.field, tuple(int(c) for c in counts))


def product_set(E: PointSet, F: PointSet | None = None) -> set[int]:
    """The set of dot products {x.y : x in E, y in F}."""
    return set(dot_histogram(E, F).as_dict())


def count_M(E: PointSet) -> int:
    """Ordered quadruples (x, y, w, z) in E^4 with x.y = w.z."""
    return sum(c * c for c in dot_histogram(E).counts)


def _per_apex_square_sums(dots_block: np.ndarray, p: int) -> tuple[int, np.ndarray]:
    """For each row: histogram the values, return (sum of squared bin sizes
    over all rows, per-row count of zeros)."""
    rows = dots_block.shape[0]
    offsets = dots_block + p * np.arange(rows, dtype=np.int64)[:, None]
    hist = np.bincount(offsets.ravel(), minlength=p * rows).reshape(rows, p)
    return int((hist * hist).sum()), hist[:, 0].copy()


def count_D(E: PointSet) -> int:
    """Ordered triples (x, y, z) in E^3 with x.y = x.z."""
    if not len(E):
        return 0
    p = E.field.p
    et = E.array.T
    total = 0
    for lo in range(0, len(E), _ROW_BLOCK):
        block = (E.array[lo : lo + _ROW_BLOCK] @ et) % p
        sq, _ = _per_apex_square_sums(block, p)
        total += sq
    return total


def count_D_star(E: PointSet, allow_ambient_base: bool = False) -> int:
    """Ordered triples with x.y = x.z whose base projections y, z are at
    nonzero distance.

    For sets on a paraboloid the base is the first dim-1 coordinates; with
    allow_ambient_base=True non-paraboloid sets use all coordinates.
    """
    if on_paraboloid(E):
        base = E.array[:, :-1]
    elif allow_ambient_base:
        base = E.array
    else:
        raise ValueError("count_D_star requires a point set on a paraboloid")
    n = len(E)
    if not n:
        return 0
    p = E.field.p
    d_total = count_D(E)
    pairs_i, pairs_j = _zero_distance_pairs(base, p)
    diffs = (E.array[pairs_i] - E.array[pairs_j]) % p
    uniq, mult = np.unique(diffs, axis=0, return_counts=True)
    correction = 0
    et = E.array
    for w, m in zip(uniq, mult):
        zeros = int(((et @ w) % p == 0).sum())
        correction += int(m) * zeros
    return d_total - correction


def _zero_distance_pairs(arr: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs (i, j), diagonal included, with ||arr_i - arr_j|| = 0."""
    n = arr.shape[0]
    if n * n > PAIR_MATRIX_CAP:
        raise ResourceLimitError(f"pairwise kernel on {n} points exceeds cap")
    gram = (arr @ arr.T) % p
    nrm = np.diag(gram)
    dist = (nrm[:, None] + nrm[None, :] - 2 * gram) % p
    ii, jj = np.nonzero(dist == 0)
    return ii, jj


def apex(field: PrimeField, x: tuple[int, ...]) -> tuple[int, ...]:
    """Map a paraboloid point to -xbar / (2 ||xbar||) one dimension down."""
    xbar = x[:-1]
    nb = field.norm(xbar)
    if nb == 0:
        raise ValueError("apex undefined: base norm is zero")
    scale = field.neg(field.inv(2 * nb))
    return tuple(c * scale % field.p for c in xbar)


def apex_set(E: PointSet) -> PointSet:
    """Apply the apex map to every point (all must have nonzero base norm)."""
    return PointSet.build(E.field, E.dim - 1, (apex(E.field, x) for x in E.points))


def reduction_equiv(
    field: PrimeField,
    x: tuple[int, ...],
    y: tuple[int, ...],
    z: tuple[int, ...],
) -> tuple[bool, bool]:
    """Evaluate both sides of the dot-product-to-distance reduction.

    Returns (x.y == x.z, ||a - ybar|| == ||a - zbar||) where a is the apex
    of x; the two booleans agree for every triple on a paraboloid.
    """
    lhs = field.dot(x, y) == field.dot(x, z)
    a = apex(field, x)
    dy = tuple(u - v for u, v in zip(a, y[:-1]))
    dz = tuple(u - v for u, v in zip(a, z[:-1]))
    rhs = field.norm(dy) == field.norm(dz)
    return lhs, rhs


def scan_reduction_identity(E: PointSet) -> tuple[int, int]:
    """Check the reduction over all triples (x, y, z) in E^3 with apex x
    restricted to nonzero base norm. Returns (triples checked, mismatches)."""
    fld = E.field
    p = fld.p
    arr = E.array
    ybar = arr[:, :-1]
    ynrm = (ybar * ybar).sum(axis=1) % p
    checked = 0
    mismatches = 0
    for x in E.points:
        if fld.norm(x[:-1]) == 0:
            continue
        a = np.array(apex(fld, x), dtype=np.int64)
        dx = (arr @ np.array(x, dtype=np.int64)) % p
        anrm = int((a * a).sum() % p)
        adist = (anrm - 2 * (ybar @ a) + ynrm) % p
        lhs = dx[:, None] == dx[None, :]
        rhs = adist[:, None] == adist[None, :]
        checked += lhs.size
        mismatches += int((lhs != rhs).sum())
    return checked, mismatches


@dataclass(frozen=True)
class TriangleCounts:
    """Ordered-triple isosceles counts; see the module docstring taxonomy."""

    t_nde: int
    t_de: int
    t_star: int
    degenerate_pairs: int
    t_nde_raw: int
    t_zero_triples: int

    @property
    def isosceles_total(self) -> int:
        return self.t_nde + self.t_de

    def as_dict(self) -> dict[str, int]:
        return {
            "t_nde": self.t_nde,
            "t_de": self.t_de,
            "t_star": self.t_star,
            "degenerate_pairs": self.degenerate_pairs,
            "t_nde_raw": self.t_nde_raw,
            "t_zero_triples": self.t_zero_triples,
            "isosceles_total": self.isosceles_total,
        }


def isosceles_counts(X: PointSet) -> TriangleCounts:
    """All triangle counts of X in O(|X|^2) via per-apex distance histograms."""
    n = len(X)
    if n == 0:
        return TriangleCounts(0, 0, 0, 0, 0, 0)
    p = X.field.p
    arr = X.array
    if n * n > PAIR_MATRIX_CAP:
        raise ResourceLimitError(f"triangle kernel on {n} points exceeds cap")
    gram = (arr @ arr.T) % p
    nrm = np.diag(gram)
    dist = (nrm[:, None] + nrm[None, :] - 2 * gram) % p

    total_iso = 0
    eq_zero_sides = 0
    for lo in range(0, n, _ROW_BLOCK):
        sq, zeros = _per_apex_square_sums(dist[lo : lo + _ROW_BLOCK], p)
        total_iso += sq
        eq_zero_sides += int((zeros * zeros).sum())

    ii, jj = np.nonzero(dist == 0)
    degenerate_pairs = len(ii)

    # Base-zero corrections: for each ordered pair (y, z) at distance zero,
    # count apexes x equidistant from (resp. at distance zero from) both.
    c_base = 0
    c_both = 0
    chunk = max(1, 2_000_000 // max(n, 1))
    for lo in range(0, len(ii), chunk):
        ci = dist[:, ii[lo : lo + chunk]]
        cj = dist[:, jj[lo : lo + chunk]]
        c_base += int((ci == cj).sum())
        c_both += int(((ci == 0) & (cj == 0)).sum())

    t_de = eq_zero_sides + c_base - c_both
    return TriangleCounts(
        t_nde=total_iso - t_de,
        t_de=t_de,
        t_star=total_iso - c_base,
        degenerate_pairs=degenerate_pairs,
        t_nde_raw=total_iso - eq_zero_sides,
        t_zero_triples=c_both,
    )


@dataclass(frozen=True)
class InequalityReport:
    """Exact integer checks tying product sets, energies, and triangles."""

    size: int
    prod_size: int
    m_value: int
    d_value: int
    cs_product_ok: bool  # prod_size * M >= |E|^4
    cs_energy_ok: bool  # M <= |E| * D
    restricted_size: int | None = None
    restricted_d: int | None = None
    reduction_iso_total: int | None = None
    reduction_ok: bool | None = None

    @property
    def ok(self) -> bool:
        checks = [self.cs_product_ok, self.cs_energy_ok]
        if self.reduction_ok is not None:
            checks.append(self.reduction_ok)
        return all(checks)


def inequality_chain(E: PointSet) -> InequalityReport:
    """Verify |prod(E)| * M >= |E|^4, M <= |E| * D, and (for paraboloid sets)
    that D of the base-restricted set is at most the isosceles-triple total
    of the apex-union-base projection."""
    prod_size = len(product_set(E))
    m_value = count_M(E)
    d_value = count_D(E)
    n = len(E)
    report = dict(
        size=n,
        prod_size=prod_size,
        m_value=m_value,
        d_value=d_value,
        cs_product_ok=prod_size * m_value >= n**4,
        cs_energy_ok=m_value <= n * d_value,
    )
    if on_paraboloid(E) and E.dim >= 2:
        Er = restrict_nonzero_base(E)
        d_r = count_D(Er)
        if len(Er):
            X = bar_projection(Er).union(apex_set(Er))
            iso = isosceles_counts(X).isosceles_total
        else:
            iso = 0
        report.update(
            restricted_size=len(Er),
            restricted_d=d_r,
            reduction_iso_total=iso,
            reduction_ok=d_r <= iso,
        )
    return InequalityReport(**report)


@dataclass(frozen=True)
class TriangleBoundReport:
    """Isosceles totals against the three-term envelope in |X|, q."""

    size: int
    isosceles_total: int
    bound: float
    constant: float

    @property
    def ok(self) -> bool:
        return self.isosceles_total <= self.constant * self.bound

    @property
    def ratio(self) -> float:
        return self.isosceles_total / self.bound if self.bound else float("inf")


def triangle_bound_report(X: PointSet, constant: float = 100.0) -> TriangleBoundReport:
    """Compare t_nde + t_de with |X|^3/q + q^(n-1) |X|^((n+4)/(n+2))
    + q^((n-2)/2) |X|^2, scaled by a generous constant."""
    q = X.field.p
    n = X.dim
    m = len(X)
    tc = isosceles_counts(X)
    bound = m**3 / q + q ** (n - 1) * m ** ((n + 4) / (n + 2)) + q ** ((n - 2) / 2) * m**2
    return TriangleBoundReport(m, tc.isosceles_total, bound, constant)


def counts_json(E: PointSet) -> dict:
    """The fixed-key JSON rendering of every count for one point set."""
    tri = isosceles_counts(E)
    d_star = count_D_star(E) if on_paraboloid(E) else count_D_star(E, allow_ambient_base=True)
    return {
        "p": E.field.p,
        "d": E.dim,
        "set_size": len(E),
        "prod_size": len(product_set(E)),
        "D": count_D(E),
        "D_star": d_star,
        "M": count_M(E),
        "t_nde": tri.t_nde,
        "t_de": tri.t_de,
        "t_star": tri.t_star,
        "degenerate_pairs": tri.degenerate_pairs,
    }
