import itertools
import random
from fractions import Fraction
from math import gcd

import pytest

from orientifold_td.exact_linalg import (
    AbelianGroup,
    IntMatrix,
    Subquotient,
    cohomology_group,
    determinant,
    ext_nonzero,
    gf2_rank,
    hom_cokernel,
    hom_kernel,
    in_lattice,
    rational_rank,
    smith_form,
    smith_normal_form,
    with_coefficients,
)


def _gcd_of_minors(rows, k):
    """Determinantal divisor d_1 ... d_k computed from all k x k minors (brute-force oracle)."""
    n, m = len(rows), len(rows[0])
    g = 0
    for rs in itertools.combinations(range(n), k):
        for cs in itertools.combinations(range(m), k):
            g = gcd(g, determinant([[rows[i][j] for j in cs] for i in rs]))
    return g


def _check_snf(m: IntMatrix):
    u, d, v = smith_normal_form(m)
    assert u @ m @ v == d
    assert abs(determinant(u)) == 1 and abs(determinant(v)) == 1
    r, c = m.shape
    diag = [d.rows[i][i] for i in range(min(r, c))]
    assert all(d.rows[i][j] == 0 for i in range(r) for j in range(c) if i != j)
    nz = [x for x in diag if x]
    assert all(x > 0 for x in nz) and diag[:len(nz)] == nz
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
    return diag


def test_snf_trivial_examples():
    assert _check_snf(IntMatrix.from_rows([[2]])) == [2]
    u, d, v = smith_normal_form(IntMatrix.from_rows([[1, 0], [0, 0]]))
    assert d.tolist() == [[1, 0], [0, 0]]
    assert u == IntMatrix.identity(2) and v == IntMatrix.identity(2)


def test_snf_derived_example():
    m = [[2, 4], [2, 2]]
    diag = _check_snf(IntMatrix.from_rows(m))
    # oracle: d1 = gcd of entries, d1 d2 = |det|
    assert diag[0] == _gcd_of_minors(m, 1) == 2
    assert diag[0] * diag[1] == abs(determinant(m)) == 4


def test_snf_empty_shapes():
    for shape in ((0, 3), (3, 0), (0, 0)):
        m = IntMatrix.zeros(*shape)
        u, d, v = smith_normal_form(m)
        assert d.shape == shape and u.shape == (shape[0],) * 2 and v.shape == (shape[1],) * 2


def test_snf_matches_determinantal_divisors():
    rng = random.Random(7)
    for _ in range(40):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        rows = [[rng.randint(-6, 6) for _ in range(c)] for _ in range(r)]
        diag = _check_snf(IntMatrix.from_rows(rows))
        prod = 1
        for k in range(1, min(r, c) + 1):
            prod *= diag[k - 1]
            assert prod == _gcd_of_minors(rows, k)


def test_snf_random_contract():
    rng = random.Random(11)
    for _ in range(60):
        r, c = rng.randint(1, 15), rng.randint(1, 15)
        _check_snf(IntMatrix.from_rows([[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]))


def test_smith_form_inverses():
    rng = random.Random(3)
    rows = [[rng.randint(-9, 9) for _ in range(6)] for _ in range(5)]
    sf = smith_form(rows)
    ident = lambda n: [[int(i == j) for j in range(n)] for i in range(n)]  # noqa: E731
    mul = lambda a, b: [[sum(x * y for x, y in zip(r, col)) for col in zip(*b)] for r in a]  # noqa: E731
    assert mul(sf.u, sf.u_inv) == ident(5)
    assert mul(sf.v, sf.v_inv) == ident(6)


def test_abelian_group_canonical_form():
    assert str(AbelianGroup(0, (6, 2))) == "Z/2 + Z/6"
    assert AbelianGroup(0, (2, 3)) == AbelianGroup(0, (6,))
    assert str(AbelianGroup(2, (4,))) == "Z^2 + Z/4"
    assert str(AbelianGroup()) == "0"
    assert AbelianGroup.parse("Z + Z/2") == AbelianGroup(1, (2,))
    assert AbelianGroup.from_orders([0, 1, 4, 6]) == AbelianGroup(1, (2, 12))
    with pytest.raises(ValueError):
        AbelianGroup.parse("Q")


def test_cohomology_group_examples():
    one_to_empty = IntMatrix.zeros(1, 0)
    assert cohomology_group(one_to_empty, IntMatrix.zeros(0, 1)) == AbelianGroup(1)
    assert cohomology_group(one_to_empty, IntMatrix.from_rows([[2]])) == AbelianGroup()
    assert cohomology_group(IntMatrix.from_rows([[2]]), IntMatrix.zeros(0, 1)) == AbelianGroup(0, (2,))


def test_cohomology_group_rejects_noncomposable():
    with pytest.raises(ValueError):
        cohomology_group(IntMatrix.from_rows([[1]]), IntMatrix.from_rows([[1]]))


def _unimodular(n, rng):
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        k = rng.randint(-2, 2)
        m[i] = [a + k * b for a, b in zip(m[i], m[j])]
    return IntMatrix.from_rows(m)


def test_cohomology_group_invariant_under_basis_change():
    rng = random.Random(5)
    for _ in range(20):
        n0, n1, n2 = rng.randint(1, 5), rng.randint(1, 5), rng.randint(1, 5)
        # d_out d_in = 0 by construction: d_in = K A with K a kernel basis of d_out
        d_out = IntMatrix.from_rows([[rng.randint(-3, 3) for _ in range(n1)] for _ in range(n2)])
        sf = smith_form(d_out)
        kernel = [[sf.v[i][j] for j in range(sf.rank, n1)] for i in range(n1)]
        a = [[rng.randint(-3, 3) for _ in range(n0)] for _ in range(n1 - sf.rank)]
        d_in = IntMatrix.from_rows([[sum(kernel[i][t] * a[t][j] for t in range(len(a))) for j in range(n0)]
                                    for i in range(n1)], n0)
        g = cohomology_group(d_in, d_out)
        p, q, r = _unimodular(n0, rng), _unimodular(n1, rng), _unimodular(n2, rng)
        sq = smith_form(q.tolist())
        q_inv = IntMatrix.from_rows([[sum(a * b for a, b in zip(row, col)) for col in zip(*sq.u)]
                                     for row in sq.v], n1)  # q^-1 = v u
        assert q_inv @ q == IntMatrix.identity(n1)
        assert cohomology_group(q @ d_in @ p, r @ d_out @ q_inv) == g
        assert g.rank == n1 - rational_rank(d_out) - rational_rank(d_in)


def test_subquotient_coordinates_and_representatives():
    d_in = IntMatrix.from_rows([[2], [0]])
    d_out = IntMatrix.zeros(0, 2)
    sq = Subquotient(d_in, d_out)
    assert sq.group == AbelianGroup(1, (2,))
    for j in range(sq.ngens):
        coords = sq.coordinates(sq.representative(j))
        assert coords == [int(i == j) for i in range(sq.ngens)]
    assert sq.is_zero_class([2, 0])
    assert not sq.is_zero_class([1, 0])
    with pytest.raises(ValueError):
        Subquotient(IntMatrix.zeros(2, 0), IntMatrix.from_rows([[1, 0]])).coordinates([1, 0])


def test_hom_kernel_and_cokernel():
    # multiplication by 2: Z -> Z
    assert hom_cokernel([[2]], 1, [0]) == AbelianGroup(0, (2,))
    assert hom_kernel([[2]], [0], [0]) == AbelianGroup()
    # Z/4 -> Z/2, 1 -> 1
    assert hom_kernel([[1]], [4], [2]) == AbelianGroup(0, (2,))
    assert hom_cokernel([[1]], 1, [2]) == AbelianGroup()
    # Z -> Z/6, 1 -> 2
    assert hom_cokernel([[2]], 1, [6]) == AbelianGroup(0, (2,))
    assert hom_kernel([[2]], [0], [6]) == AbelianGroup(1)


def test_in_lattice():
    assert in_lattice([[2, 0], [0, 3]], [4, 3])
    assert not in_lattice([[2, 0], [0, 3]], [1, 0])
    assert in_lattice([], [0, 0]) and not in_lattice([], [1, 0])


def test_gf2_rank_and_rational_rank():
    m = [[1, 1], [1, 1], [0, 2]]
    assert gf2_rank(m) == 1
    assert rational_rank(m) == 2


def test_universal_coefficients():
    groups = [AbelianGroup(1), AbelianGroup(1), AbelianGroup(0, (2,))]  # Klein bottle
    assert with_coefficients(groups, "Z/2") == [AbelianGroup(0, (2,)), AbelianGroup(0, (2, 2)),
                                                AbelianGroup(0, (2,))]
    assert with_coefficients(groups, "Q") == [AbelianGroup(1), AbelianGroup(1), AbelianGroup()]
    assert with_coefficients(groups, "Z/3") == [AbelianGroup(0, (3,)), AbelianGroup(0, (3,)), AbelianGroup()]


def test_ext_nonzero():
    z, z2, z3 = AbelianGroup(1), AbelianGroup(0, (2,)), AbelianGroup(0, (3,))
    assert not ext_nonzero(z, z2)
    assert ext_nonzero(z2, z)
    assert ext_nonzero(z2, z2)
    assert not ext_nonzero(z2, z3)


def test_determinant_bareiss():
    assert determinant([[2, 1], [1, 1]]) == 1
    assert determinant([[1, 2, 3], [4, 5, 6], [7, 8, 10]]) == -3
    assert Fraction(determinant([[0]])) == 0
