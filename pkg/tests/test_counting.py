import json
import random

import pytest

from ffgeom import counting, oracle
from ffgeom.field import PrimeField
from ffgeom.varieties import PointSet, enum_paraboloid, random_subset, restrict_nonzero_base


def rand_paraboloid_subset(p, d, size, seed):
    f = PrimeField(p)
    return random_subset(enum_paraboloid(f, d), size, seed)


def rand_plane_subset(p, size, seed):
    f = PrimeField(p)
    grid = PointSet.build(f, 2, ((a, b) for a in range(p) for b in range(p)))
    return random_subset(grid, size, seed)


def test_product_set_example():
    f = PrimeField(7)
    E = PointSet.build(f, 3, [(0, 1, 1), (0, 2, 4)])
    assert counting.product_set(E) == {2, 6}


def test_product_set_single_point_and_symmetry():
    f = PrimeField(11)
    E = PointSet.build(f, 3, [(2, 3, 5)])
    assert counting.product_set(E) == {f.norm((2, 3, 5))}
    A = rand_paraboloid_subset(11, 3, 9, 1)
    B = rand_paraboloid_subset(11, 3, 7, 2)
    assert counting.product_set(A, B) == counting.product_set(B, A)


def test_histogram_total():
    E = rand_paraboloid_subset(11, 3, 15, seed=4)
    F = rand_paraboloid_subset(11, 3, 9, seed=5)
    assert counting.dot_histogram(E, F).total == len(E) * len(F)


def test_dimension_mismatch_rejected():
    f = PrimeField(7)
    A = PointSet.build(f, 2, [(0, 1)])
    B = PointSet.build(f, 3, [(0, 1, 1)])
    with pytest.raises(ValueError):
        counting.product_set(A, B)


def test_energy_trivial_cases():
    E = PointSet.build(PrimeField(7), 3, [(1, 2, 5)])
    assert counting.count_M(E) == 1
    assert counting.count_D(E) == 1


def test_energy_lower_bounds_and_oracles():
    rng = random.Random(7)
    for _ in range(12):
        p = rng.choice([7, 11, 13])
        E = rand_paraboloid_subset(p, 3, rng.randint(2, 24), rng.randrange(2**32))
        D = counting.count_D(E)
        M = counting.count_M(E) if len(E) <= 18 else None
        assert D >= len(E) ** 2
        assert D == oracle.oracle_D(E)
        if M is not None:
            assert M >= len(E) ** 2
            assert M == oracle.oracle_M(E)
            assert M <= len(E) * D


def test_d_star_oracle_and_diagonal():
    rng = random.Random(11)
    for _ in range(8):
        p = rng.choice([7, 11])
        E = rand_paraboloid_subset(p, 3, rng.randint(2, 20), rng.randrange(2**32))
        assert counting.count_D_star(E) == oracle.oracle_D_star(E)
    # p = 3 mod 4, d = 3: zero base distance forces y = z, so the correction
    # is exactly the diagonal
    E = rand_paraboloid_subset(19, 3, 25, seed=0)
    assert counting.count_D_star(E) == counting.count_D(E) - len(E) ** 2


def test_d_star_requires_paraboloid():
    X = rand_plane_subset(13, 10, seed=2)
    with pytest.raises(ValueError):
        counting.count_D_star(X)
    assert counting.count_D_star(X, allow_ambient_base=True) == oracle.oracle_D_star(
        X, allow_ambient_base=True
    )


def test_apex_example():
    f = PrimeField(7)
    assert counting.apex(f, (1, 2, 5)) == (2, 4)
    with pytest.raises(ValueError):
        counting.apex(f, (0, 0, 0))


def test_apex_unit_base():
    f = PrimeField(11)
    x = (1, 0, 1)
    inv2 = f.inv(2)
    assert counting.apex(f, x) == (f.neg(inv2), 0)


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_apex_injective_on_restricted_paraboloid(p):
    f = PrimeField(p)
    Er = restrict_nonzero_base(enum_paraboloid(f, 3))
    assert len(counting.apex_set(Er)) == len(Er)


def test_reduction_equiv_trivial_and_counterexample():
    f = PrimeField(7)
    P = enum_paraboloid(f, 3)
    x = (1, 2, 5)
    y, z = (0, 1, 1), (0, 1, 1)
    assert counting.reduction_equiv(f, x, y, z) == (True, True)
    # any triple with x.y != x.z must report (False, False)
    found = False
    for y in P.points:
        for z in P.points:
            if f.dot(x, y) != f.dot(x, z):
                assert counting.reduction_equiv(f, x, y, z) == (False, False)
                found = True
                break
        if found:
            break
    assert found


@pytest.mark.parametrize("p", [3, 7])
def test_reduction_equiv_exhaustive_small(p):
    f = PrimeField(p)
    P = enum_paraboloid(f, 3)
    apexes = [x for x in P.points if f.norm(x[:2]) != 0]
    for x in apexes:
        for y in P.points:
            for z in P.points:
                lhs, rhs = counting.reduction_equiv(f, x, y, z)
                assert lhs == rhs


def test_scan_matches_scalar_reduction():
    f = PrimeField(11)
    P = enum_paraboloid(f, 3)
    checked, mismatches = counting.scan_reduction_identity(P)
    apex_count = sum(1 for x in P.points if f.norm(x[:2]) != 0)
    assert checked == apex_count * len(P) ** 2
    assert mismatches == 0


def test_two_point_triangle_taxonomy():
    f = PrimeField(7)
    X = PointSet.build(f, 2, [(0, 0), (1, 0)])
    tc = counting.isosceles_counts(X)
    # ordered pairs (x, x) sit at distance zero, so both count
    assert tc.degenerate_pairs == 2
    # the raw equal-nonzero-sides count keeps the y = z triples ...
    assert tc.t_nde_raw == 2
    # ... which the partitioned counts classify as degenerate (zero base)
    assert tc.t_nde == 0 and tc.t_de == 4 and tc.t_star == 0
    assert tc.isosceles_total == 4


def test_isotropic_line_triangles():
    # direction (1, 5) has norm 26 = 0 mod 13
    f = PrimeField(13)
    X = PointSet.build(f, 2, [(t, 5 * t % 13) for t in range(3)])
    tc = counting.isosceles_counts(X)
    assert tc.degenerate_pairs == 9
    assert tc.t_zero_triples == 27
    assert tc.isosceles_total == 27
    assert tc.t_nde == tc.t_star == tc.t_nde_raw == 0


def test_triangles_match_oracle():
    rng = random.Random(23)
    for _ in range(15):
        p = rng.choice([7, 11, 13])
        X = rand_plane_subset(p, rng.randint(2, 40), rng.randrange(2**32))
        fast = counting.isosceles_counts(X).as_dict()
        assert fast == oracle.oracle_triangles(X)


def test_triangles_nonplanar_match_oracle():
    rng = random.Random(29)
    for _ in range(6):
        X = rand_paraboloid_subset(7, 4, rng.randint(2, 30), rng.randrange(2**32))
        assert counting.isosceles_counts(X).as_dict() == oracle.oracle_triangles(X)


def test_inequality_chain_singleton():
    E = PointSet.build(PrimeField(7), 3, [(1, 2, 5)])
    rep = counting.inequality_chain(E)
    assert rep.ok
    assert rep.prod_size * rep.m_value >= 1 and rep.m_value <= rep.d_value


def test_inequality_chain_random_and_full():
    rng = random.Random(31)
    for _ in range(10):
        E = rand_paraboloid_subset(11, 3, rng.randint(2, 30), rng.randrange(2**32))
        assert counting.inequality_chain(E).ok
    full = enum_paraboloid(PrimeField(7), 3)
    rep = counting.inequality_chain(full)
    assert rep.ok and rep.reduction_ok is not None


def test_degenerate_pair_bound_planar():
    # n = 2, q = 3 mod 4: pairs at distance zero obey |X|^2/q + |X|
    rng = random.Random(37)
    for p in [7, 11, 19]:
        for _ in range(5):
            X = rand_plane_subset(p, rng.randint(2, 40), rng.randrange(2**32))
            z = counting.isosceles_counts(X).degenerate_pairs
            assert z * p <= len(X) ** 2 + p * len(X)


def test_triangle_bound_generous_constant():
    rng = random.Random(41)
    for p in [7, 11, 19]:
        for _ in range(5):
            X = rand_plane_subset(p, rng.randint(4, 45), rng.randrange(2**32))
            assert counting.triangle_bound_report(X).ok


def test_counts_json_fixed_keys():
    E = rand_paraboloid_subset(7, 3, 12, seed=8)
    doc = counting.counts_json(E)
    assert list(doc) == [
        "p",
        "d",
        "set_size",
        "prod_size",
        "D",
        "D_star",
        "M",
        "t_nde",
        "t_de",
        "t_star",
        "degenerate_pairs",
    ]
    json.dumps(doc)
    assert doc["set_size"] == 12 and doc["p"] == 7
