import pytest

from orientifold_td.cellular import TwistClass, catalog, circle, cohomology, cup_z2, z2_classes, z2_is_coboundary
from orientifold_td.exact_linalg import AbelianGroup
from orientifold_td.exterior import invariant_twisted_cohomology
from orientifold_td.kr import bockstein_vanishes, kr_ahss, kr_table
from orientifold_td.tdtransform import DifferentialTriple, invariant_cohomology_pair

G = AbelianGroup.parse


def _assembled(x, eps, degrees=range(4)):
    return [str(r.assembled) for r in kr_table(x, eps, degrees)]


def test_torus_table():
    t2 = catalog("t2")
    assert _assembled(t2, TwistClass.named(t2, "x")) == ["Z + Z/2", "Z^2", "Z", "Z/2"]


def test_klein_table():
    kb = catalog("klein_bottle")
    assert _assembled(kb, TwistClass.named(kb, "base")) == ["Z^2", "Z", "Z/2", "Z + Z/2"]


def test_circle_and_point():
    s1 = catalog("s1")
    assert _assembled(s1, TwistClass.named(s1, "theta")) == ["Z", "Z", "0", "Z/2"]
    assert _assembled(catalog("point"), None, range(2)) == ["Z", "0"]


def test_circle_independent_of_cell_structure():
    for cells in (2, 4, 6):
        c = circle(cells)
        eps = TwistClass(c, (1,) + (0,) * (c.count(1) - 1))
        assert _assembled(c, eps) == ["Z", "Z", "0", "Z/2"]


def test_graded_pieces_have_even_q():
    t2 = catalog("t2")
    r = kr_ahss(t2, TwistClass.named(t2, "x"), 0)
    assert r.graded() == [(0, 0, G("Z")), (2, -2, G("Z/2"))]
    for n in range(8):
        assert all(q % 2 == 0 for _, q, _ in kr_ahss(t2, TwistClass.named(t2, "x"), n).graded())


@pytest.mark.parametrize("name, twist", [("t2", "x"), ("t2", "y"), ("klein_bottle", "base"), ("s1", "theta")])
def test_four_periodicity(name, twist):
    x = catalog(name)
    eps = TwistClass.named(x, twist)
    assert bockstein_vanishes(x, eps)
    rows = kr_table(x, eps, range(8))
    for n in range(4):
        assert rows[n].graded() == [(p, q - 4, g) for p, q, g in rows[n + 4].graded()]
        assert rows[n].periodicity == 4


def test_bockstein_on_klein_bottle():
    # H^2(K; Z) = Z/2 reduces isomorphically mod 2, so beta(w) != 0 exactly when Sq^1 w = w^2 != 0
    kb = catalog("klein_bottle")
    nonvanishing = 0
    for c in z2_classes(kb, 1):
        eps = TwistClass(kb, c.values)
        expected = z2_is_coboundary(cup_z2(kb, c, c))
        assert bockstein_vanishes(kb, eps) == expected
        assert kr_ahss(kb, eps, 0).periodicity == (4 if expected else 8)
        nonvanishing += not expected
    assert nonvanishing == 2


def test_bockstein_vanishes_on_torus():
    t2 = catalog("t2")
    assert all(bockstein_vanishes(t2, TwistClass(t2, c.values)) for c in z2_classes(t2, 1))


def test_untwisted_collapse_is_complex_k_theory():
    for name in ("point", "s1", "s2", "t2", "klein_bottle"):
        x = catalog(name)
        groups = cohomology(x)
        for n in range(4):
            expected = AbelianGroup()
            for p in range(n % 2, x.dim + 1, 2):
                expected = expected + groups[p]
            assert kr_ahss(x, None, n).assembled == expected


def test_rank_matches_invariant_twisted_cohomology():
    t2 = catalog("t2")
    ranks = [r.assembled.rank for r in kr_table(t2, TwistClass.named(t2, "x"))]
    assert ranks == [invariant_twisted_cohomology(2, 0, (1, 0), None, n) for n in range(4)] == [1, 2, 1, 0]
    kb = catalog("klein_bottle")
    ranks = [r.assembled.rank for r in kr_table(kb, TwistClass.named(kb, "base"))]
    assert ranks == list(invariant_cohomology_pair(DifferentialTriple(1, eps=1)).dual_side) == [2, 1, 0, 1]


def test_no_extension_problem_up_to_dimension_two():
    # at most the p = 0 and p = 2 pieces meet, and the quotient H^0 is 0 or Z
    for name in ("point", "s1", "s2", "t2", "klein_bottle"):
        x = catalog(name)
        for c in z2_classes(x, 1):
            for r in kr_table(x, TwistClass(x, c.values)):
                assert not r.extension_ambiguous


def test_rejects_dimension_three_and_foreign_twists():
    t3 = catalog("t3")
    with pytest.raises(ValueError, match="dimension 3 > 2"):
        kr_ahss(t3, None, 0)
    t2, kb = catalog("t2"), catalog("klein_bottle")
    with pytest.raises(ValueError):
        kr_ahss(t2, TwistClass.named(kb, "base"), 0)
