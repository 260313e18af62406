import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffgeom.field import PrimeField
from ffgeom.varieties import (
    PointSet,
    ResourceLimitError,
    bar_projection,
    enum_paraboloid,
    enum_sphere,
    on_paraboloid,
    random_subset,
    restrict_nonzero_base,
)


def brute_circle_count(p, r):
    return sum(1 for x in range(p) for y in range(p) if (x * x + y * y) % p == r % p)


def test_paraboloid_small():
    ps = enum_paraboloid(PrimeField(3), 3)
    assert len(ps) == 9
    assert (1, 2, 2) in ps  # 1 + 4 = 5 = 2 mod 3
    assert (0, 0, 0) in ps


def test_paraboloid_defining_equation():
    f = PrimeField(7)
    ps = enum_paraboloid(f, 3)
    assert len(ps) == 49
    assert on_paraboloid(ps)
    assert all(pt[2] == (pt[0] ** 2 + pt[1] ** 2) % 7 for pt in ps)


def test_sphere_examples():
    assert set(enum_sphere(PrimeField(3), 2, 1).points) == {(1, 0), (2, 0), (0, 1), (0, 2)}
    assert enum_sphere(PrimeField(7), 2, 0).points == ((0, 0),)
    assert len(enum_sphere(PrimeField(13), 2, 0)) == 25  # two isotropic lines y = +-5x


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19, 23, 29, 31])
def test_circle_size_formula(p):
    f = PrimeField(p)
    for r in range(1, p):
        assert len(enum_sphere(f, 2, r)) == p - f.legendre(p - 1) == brute_circle_count(p, r)


@pytest.mark.parametrize("p", [3, 7, 13, 31])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_sphere_size_envelope(p, n):
    f = PrimeField(p)
    lo = p ** (n - 1) - 2 * p ** (n / 2)
    hi = p ** (n - 1) + 2 * p ** (n / 2)
    for r in range(p):
        assert lo <= len(enum_sphere(f, n, r)) <= hi


def test_sphere_dimension_one():
    f = PrimeField(7)
    assert enum_sphere(f, 1, 2).points == ((3,), (4,))
    assert enum_sphere(f, 1, 3).points == ()


def test_enumeration_cap():
    with pytest.raises(ResourceLimitError):
        enum_paraboloid(PrimeField(101), 4, cap=1000)
    with pytest.raises(ResourceLimitError):
        enum_sphere(PrimeField(101), 4, 1, cap=1000)


def test_random_subset_contracts():
    f = PrimeField(11)
    P = enum_paraboloid(f, 3)
    full = random_subset(P, len(P), seed=5)
    assert full.points == P.points
    a = random_subset(P, 17, seed=99)
    b = random_subset(P, 17, seed=99)
    assert a.points == b.points
    assert len(a) == 17
    assert random_subset(P, 17, seed=100).points != a.points
    with pytest.raises(ValueError):
        random_subset(P, len(P) + 1, seed=0)


def test_restrict_nonzero_base():
    # p = 3 mod 4: only the origin's base is isotropic
    E7 = enum_paraboloid(PrimeField(7), 3)
    r7 = restrict_nonzero_base(E7)
    assert len(r7) == 48 and (0, 0, 0) not in r7
    # p = 1 mod 4: the base cone has 2p - 1 points
    E13 = enum_paraboloid(PrimeField(13), 3)
    r13 = restrict_nonzero_base(E13)
    assert len(r13) == 169 - 25
    f13 = PrimeField(13)
    assert all(f13.norm(pt[:2]) != 0 for pt in r13)


def test_bar_projection_dedupes():
    f = PrimeField(5)
    ps = PointSet.build(f, 2, [(1, 2), (1, 3), (2, 0)])
    assert bar_projection(ps).points == ((1,), (2,))


def test_points_sorted_and_deduped():
    f = PrimeField(5)
    ps = PointSet.build(f, 2, [(4, 4), (0, 1), (4, 4), (9, 6)])  # (9,6) reduces to (4,1)
    assert ps.points == ((0, 1), (4, 1), (4, 4))
    with pytest.raises(ValueError):
        PointSet.build(f, 2, [(1, 2, 3)])


@settings(max_examples=40, deadline=None)
@given(
    st.sets(st.tuples(st.integers(0, 10), st.integers(0, 10)), max_size=25),
    st.tuples(st.integers(0, 10), st.integers(0, 10)),
)
def test_membership_matches_sequence(pts, probe):
    ps = PointSet.build(PrimeField(11), 2, pts)
    assert (probe in ps) == (probe in set(ps.points))
    assert len(set(ps.points)) == len(ps)


def test_text_round_trip_bit_exact(tmp_path):
    f = PrimeField(13)
    ps = random_subset(enum_paraboloid(f, 3), 29, seed=3)
    path = tmp_path / "set.txt"
    ps.save(path)
    loaded = PointSet.load(path)
    assert loaded == ps
    loaded.save(tmp_path / "again.txt")
    assert (tmp_path / "again.txt").read_bytes() == path.read_bytes()


def test_from_text_rejects_malformed():
    with pytest.raises(ValueError):
        PointSet.from_text("")
    with pytest.raises(ValueError):
        PointSet.from_text("7 2\n0 0\n")
    with pytest.raises(ValueError):
        PointSet.from_text("7 2 2\n0 0\n")
