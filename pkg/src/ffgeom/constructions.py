"""Extremal point-set constructions on paraboloids: multiplicative-subgroup
families whose dot products collapse to the image of a + a^2, built over
totally isotropic frames, plus the isotropic-slope lines obstruction set.

Every emitted construction is re-verified point by point (paraboloid
membership, exact size, product-set containment); a violated guarantee
raises instead of returning a bad set.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .counting import product_set
from .field import PrimeField
from .varieties import PointSet, on_paraboloid

FRAME_EXHAUSTIVE_LIMIT = 1_000_000


class FrameSearchError(RuntimeError):
    """Isotropic-frame search exhausted its budget without a witness."""


class ConstructionError(RuntimeError):
    """A construction's postcondition failed verification."""


# -- linear algebra over F_p (small dimensions) ----------------------------


def rank_mod_p(vectors, p: int) -> int:
    rows = [list(v) for v in vectors]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    col = 0
    while rank < len(rows) and col < ncols:
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] % p), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        rows[rank] = [c * inv % p for c in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] % p:
                f = rows[r][col]
                rows[r] = [(a - f * b) % p for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def kernel_basis(constraints, p: int, dim: int) -> list[tuple[int, ...]]:
    """Basis of {v : v . c = 0 for every constraint row c}."""
    rows = [list(c) for c in constraints]
    if not rows:
        return [tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim)]
    # reduced row echelon form
    pivots = []
    rank = 0
    for col in range(dim):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        rows[rank] = [c * inv % p for c in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] % p:
                f = rows[r][col]
                rows[r] = [(a - f * b) % p for a, b in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(dim) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * dim
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = (-rows[r][fc]) % p
        basis.append(tuple(v))
    return basis


def _combine(coeffs, basis, p: int) -> tuple[int, ...]:
    dim = len(basis[0])
    out = [0] * dim
    for c, b in zip(coeffs, basis):
        if c:
            for i in range(dim):
                out[i] = (out[i] + c * b[i]) % p
    return tuple(out)


# -- domain types ----------------------------------------------------------


@dataclass(frozen=True)
class SubgroupSpec:
    """A multiplicative subgroup of F_p^* of order k | p-1."""

    field: PrimeField
    order: int
    elements: frozenset

    def verify(self) -> None:
        p = self.field.p
        if len(self.elements) != self.order:
            raise ConstructionError("subgroup has wrong size")
        if 1 not in self.elements:
            raise ConstructionError("subgroup missing identity")
        if self.order * self.order <= 1_000_000:
            for a in self.elements:
                for b in self.elements:
                    if a * b % p not in self.elements:
                        raise ConstructionError("subgroup not closed")
        else:
            for a in self.elements:
                if pow(a, self.order, p) != 1:
                    raise ConstructionError("element order does not divide k")


@dataclass(frozen=True)
class IsotropicFrame:
    """Linearly independent vectors with all pairwise and self dots zero."""

    field: PrimeField
    ambient_dim: int
    vectors: tuple[tuple[int, ...], ...]

    def verify(self) -> None:
        fld = self.field
        for i, u in enumerate(self.vectors):
            for v in self.vectors[i:]:
                if fld.dot(u, v) != 0:
                    raise ConstructionError(f"frame vectors {u} and {v} not orthogonal")
        if rank_mod_p(self.vectors, fld.p) != len(self.vectors):
            raise ConstructionError("frame vectors linearly dependent")


def mult_subgroup(field: PrimeField, k: int) -> SubgroupSpec:
    """The unique multiplicative subgroup of order k (k must divide p-1)."""
    p = field.p
    if k < 1 or (p - 1) % k != 0:
        raise ValueError(f"subgroup order {k} does not divide p-1 = {p - 1}")
    base = pow(field.primitive_root(), (p - 1) // k, p)
    elements = set()
    x = 1
    for _ in range(k):
        elements.add(x)
        x = x * base % p
    spec = SubgroupSpec(field, k, frozenset(elements))
    spec.verify()
    return spec


def isotropic_frame(
    field: PrimeField,
    ambient_dim: int,
    count: int,
    seed: int = 0,
    budget: int = 20_000,
    initial=(),
) -> IsotropicFrame:
    """Greedy search: extend by one isotropic vector orthogonal to everything
    found so far, randomized tries first, exhaustive fallback when the
    candidate space is small. Failure means "not found within budget", never
    a nonexistence claim."""
    if count > ambient_dim // 2:
        raise ValueError(f"at most dim/2 = {ambient_dim // 2} mutually isotropic vectors")
    p = field.p
    vectors = [tuple(c % p for c in v) for v in initial]
    rng = random.Random(seed)
    while len(vectors) < count:
        v = _extend_frame(field, ambient_dim, vectors, rng, budget)
        if v is None:
            raise FrameSearchError(
                f"isotropic frame of {count} vectors in dim {ambient_dim} over "
                f"F_{p}: not found within budget"
            )
        vectors.append(v)
    frame = IsotropicFrame(field, ambient_dim, tuple(vectors))
    frame.verify()
    return frame


def _extend_frame(field, dim, vectors, rng, budget):
    p = field.p
    basis = kernel_basis(vectors, p, dim)
    kdim = len(basis)
    if not kdim:
        return None

    def admissible(v):
        return (
            any(v)
            and field.norm(v) == 0
            and rank_mod_p(vectors + [v], p) == len(vectors) + 1
        )

    for _ in range(budget):
        v = _combine([rng.randrange(p) for _ in range(kdim)], basis, p)
        if admissible(v):
            return v
    if p**kdim <= FRAME_EXHAUSTIVE_LIMIT:
        for coeffs in itertools.product(range(p), repeat=kdim):
            v = _combine(coeffs, basis, p)
            if admissible(v):
                return v
    return None


def span_points(field: PrimeField, vectors, dim: int) -> list[tuple[int, ...]]:
    """All linear combinations of the given (independent) vectors."""
    p = field.p
    if not vectors:
        return [(0,) * dim]
    out = []
    for coeffs in itertools.product(range(p), repeat=len(vectors)):
        out.append(_combine(coeffs, vectors, p))
    return out


# -- the constructions -----------------------------------------------------


def _verify(E: PointSet, expected_size: int, allowed_products: set[int], label: str) -> None:
    if len(E) != expected_size:
        raise ConstructionError(f"{label}: size {len(E)} != expected {expected_size}")
    if not on_paraboloid(E):
        raise ConstructionError(f"{label}: a point misses the paraboloid")
    prods = product_set(E)
    if not prods <= allowed_products:
        raise ConstructionError(f"{label}: products {prods - allowed_products} escape")


def _ap_a2(field: PrimeField, elements) -> set[int]:
    return {(a + a * a) % field.p for a in elements}


def _am_a2(field: PrimeField, elements) -> set[int]:
    return {(a - a * a) % field.p for a in elements}


def construct_even_2mod4(field: PrimeField, d: int, k: int, seed: int = 0) -> PointSet:
    """E = (totally isotropic subspace of F_p^(d-2)) x {(a, a^2) : a in A}
    for d = 2 mod 4; dot products land in {a + a^2 : a in A}."""
    if d % 4 != 2 or d < 2:
        raise ValueError("construction requires d = 2 mod 4")
    A = mult_subgroup(field, k)
    m = (d - 2) // 2
    S = _frame_span(field, d - 2, m, seed)
    pts = [s + (a, a * a % field.p) for s in S for a in sorted(A.elements)]
    E = PointSet.build(field, d, pts)
    _verify(E, k * field.p**m, _ap_a2(field, A.elements), "even_2mod4")
    return E


def construct_odd_3mod4(field: PrimeField, d: int, k: int, seed: int = 0) -> PointSet:
    """Odd-dimension variant, d = 3 mod 4: pad the isotropic subspace of
    F_p^(d-3) with a zero coordinate; at d = 3 this is {(0, a, a^2)}."""
    if field.p % 4 != 3:
        raise ValueError("construction requires p = 3 mod 4")
    if d % 4 != 3 or d < 3:
        raise ValueError("construction requires d = 3 mod 4")
    A = mult_subgroup(field, k)
    m = (d - 3) // 2
    S = _frame_span(field, d - 3, m, seed)
    pts = [s + (0,) + (a, a * a % field.p) for s in S for a in sorted(A.elements)]
    E = PointSet.build(field, d, pts)
    _verify(E, k * field.p**m, _ap_a2(field, A.elements), "odd_3mod4")
    return E


def _frame_span(field, ambient_dim, count, seed):
    if count == 0:
        return [()] if ambient_dim == 0 else [(0,) * ambient_dim]
    frame = isotropic_frame(field, ambient_dim, count, seed)
    return span_points(field, list(frame.vectors), ambient_dim)


def construct_even_0mod4(field: PrimeField, d: int, k: int, seed: int = 0) -> PointSet:
    """d = 0 mod 4 variant: needs i with i^2 = -1, hence p = 1 mod 4. The
    isotropic frame is padded with the vector (0, ..., 0, 1, i); squaring the
    subgroup coordinate through it yields products of the form c +- c^2
    (the realized sign is recorded by construction_report)."""
    if field.p % 4 != 1:
        raise ValueError(
            "construction requires p = 1 mod 4: the frame closes with (0,...,0,1,i) "
            "and i^2 = -1 has no root here"
        )
    if d % 4 != 0 or d < 4:
        raise ValueError("construction requires d = 0 mod 4")
    p = field.p
    i = field.sqrt_minus_one()
    A = mult_subgroup(field, k)
    m = d // 2 - 1
    v_last = (0,) * (d - 2) + (1, i)
    embedded = []
    if m:
        small = isotropic_frame(field, d - 2, m, seed)
        embedded = [u + (0, 0) for u in small.vectors]
    IsotropicFrame(field, d, tuple(embedded) + (v_last,)).verify()
    W = span_points(field, embedded, d)
    pts = []
    for w in W:
        for a in sorted(A.elements):
            x = tuple((wc + a * vc) % p for wc, vc in zip(w, v_last))
            pts.append(x[:-1] + ((-(x[-1] * x[-1])) % p,))
    E = PointSet.build(field, d, pts)
    allowed = _ap_a2(field, A.elements) | _am_a2(field, A.elements)
    _verify(E, k * p**m, allowed, "even_0mod4")
    return E


def isotropic_lines_set(
    field: PrimeField, num_lines: int, points_per_line: int, seed: int = 0
) -> PointSet:
    """Union of num_lines parallel lines in F_p^2 with isotropic direction
    (1, i), points_per_line points each, distinct offsets. Every within-line
    triple has all sides of norm zero, so the set carries at least
    num_lines * points_per_line^3 fully degenerate triples."""
    p = field.p
    if p % 4 != 1:
        raise ValueError("lines of slope i require p = 1 mod 4")
    if num_lines < 1 or points_per_line < 1:
        raise ValueError("need at least one line and one point per line")
    if points_per_line > p or num_lines > p:
        raise ValueError("at most p points per line and p distinct offsets")
    i = field.sqrt_minus_one()
    rng = random.Random(seed)
    offsets = sorted(rng.sample(range(p), num_lines))
    pts = []
    for c in offsets:
        for x in sorted(rng.sample(range(p), points_per_line)):
            pts.append((x, (i * x + c) % p))
    E = PointSet.build(field, 2, pts)
    if len(E) != num_lines * points_per_line:
        raise ConstructionError("lines construction produced overlapping points")
    return E


def construction_report(
    kind: str,
    field: PrimeField,
    E: PointSet,
    k: int | None = None,
    num_lines: int | None = None,
    points_per_line: int | None = None,
) -> dict:
    """Verification sidecar: sizes, membership, product containment, and for
    the d = 0 mod 4 case which of c + c^2 / c - c^2 actually contains the
    products."""
    prods = product_set(E)
    report: dict = {
        "kind": kind,
        "p": field.p,
        "d": E.dim,
        "size": len(E),
        "prod_size": len(prods),
    }
    if kind in {"even2mod4", "odd3mod4", "even0mod4"}:
        A = mult_subgroup(field, k)
        plus, minus = _ap_a2(field, A.elements), _am_a2(field, A.elements)
        report["k"] = k
        report["on_paraboloid"] = on_paraboloid(E)
        report["products_in_a_plus_a2"] = prods <= plus
        report["products_in_a_minus_a2"] = prods <= minus
        if kind == "even0mod4":
            report["products_contained"] = prods <= (plus | minus)
        else:
            report["products_contained"] = prods <= plus
    elif kind == "lines":
        from .counting import isosceles_counts

        tri = isosceles_counts(E)
        floor = num_lines * points_per_line**3
        report["num_lines"] = num_lines
        report["points_per_line"] = points_per_line
        report["zero_triples"] = tri.t_zero_triples
        report["zero_triple_floor"] = floor
        report["floor_ok"] = tri.t_zero_triples >= floor
    report["products"] = sorted(prods) if len(prods) <= 64 else None
    return report
