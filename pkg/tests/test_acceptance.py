"""Acceptance criteria C1-C8 with their time budgets; each prints a PASS/FAIL line in the summary."""

import itertools
import random
import time

import pytest
from helpers import configurations, random_pair, random_section, random_triple

from orientifold_td.backgrounds import (
    canonical_invariants,
    catalog_backgrounds,
    is_t_dual_pair,
    same_z2_class,
    spin_duality_holds,
    t_dual,
)
from orientifold_td.bundles import CircleBundle, gysin_sequence, total_cohomology
from orientifold_td.cellular import TwistClass, catalog, cohomology, twisted_coboundary, z2_classes
from orientifold_td.exact_linalg import AbelianGroup, IntMatrix, determinant, smith_normal_form
from orientifold_td.exterior import AXIOMS, FluxForm, RandomSource, axiom_suite, d_twisted
from orientifold_td.kr import kr_table
from orientifold_td.tdtransform import (
    DifferentialTriple,
    check_ccaiso,
    invariant_clifford,
    invariant_cohomology_pair,
    invariant_d,
    phi,
    t_transform,
)

G = AbelianGroup.parse


class Budget:
    def __init__(self, seconds: float):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.2f} s, budget {self.seconds} s"


def _kr_tables():
    t2, kb = catalog("t2"), catalog("klein_bottle")
    return (kr_table(t2, TwistClass.named(t2, "x")), kr_table(kb, TwistClass.named(kb, "base")))


@pytest.mark.criterion("C1", "KR table for (T^2, eps) and (Klein, eps)")
def test_c1_kr_table():
    with Budget(1.0):
        torus, klein = _kr_tables()
        assert [r.assembled for r in torus] == [G("Z + Z/2"), G("Z^2"), G("Z"), G("Z/2")]
        assert [r.assembled for r in klein] == [G("Z^2"), G("Z"), G("Z/2"), G("Z + Z/2")]


@pytest.mark.criterion("C2", "invariant cohomology pair with degree shift, ranks match KR")
def test_c2_cohomology_pair():
    with Budget(1.0):
        pair = invariant_cohomology_pair(DifferentialTriple(1, eps=1, xi=0))
        assert pair.side == (1, 2, 1, 0)
        assert pair.dual_side == (2, 1, 0, 1)
        assert pair.shift_ok
        torus, klein = _kr_tables()
        assert tuple(r.assembled.rank for r in torus) == pair.side
        assert tuple(r.assembled.rank for r in klein) == pair.dual_side


@pytest.mark.criterion("C3", "algebroid identity suite, 200 seeded instances")
def test_c3_axiom_suite():
    with Budget(30.0):
        results = axiom_suite(seed=2024, count=200)
    assert len(results) >= 200
    assert {r.n for r in results} == {2, 3}
    assert {r.eps for r in results if r.n == 3} == set(range(8))
    assert any(r.has_flux for r in results) and any(not r.has_flux for r in results)
    assert {"L1", "CC1", "CC2", "id1", "id2", "id3", "db", "anticommutator", "jacobiator",
            "b_conjugation"} <= set(AXIOMS)
    failing = [(i, r.failures) for i, r in enumerate(results) if r.failures]
    assert not failing


@pytest.mark.criterion("C4", "differentials square to zero, violated triple rejected")
def test_c4_d_squared():
    rs = RandomSource(4)
    for _ in range(100):
        eps = rs.rng.randrange(8)
        h = rs.flux(3, eps)
        w = rs.form(3, rs.rng.randint(0, 3), rs.rng.randrange(8), eps)
        assert d_twisted(d_twisted(w, h), h).is_zero()
    for k in (1, 2, -3):
        h = FluxForm(3, 0, {((0, 1, 2), (0, 0, 0)): k})
        w = rs.form(3, rs.rng.randint(0, 3), rs.rng.randrange(8))
        assert d_twisted(d_twisted(w, h), h).is_zero()
    for m, eps, xi in configurations():
        tr = random_triple(rs, m, eps, xi)
        for _ in range(3):
            w = random_pair(rs, m, eps, xi)
            assert invariant_d(invariant_d(w, tr), tr).is_zero()
    z4 = (0, 0, 0, 0)
    with pytest.raises(ValueError, match="invalid triple"):
        DifferentialTriple(4, F={((0, 1), z4): 1}, Fhat={((2, 3), z4): 1})


@pytest.mark.criterion("C5", "T-dual constructor on the background catalog")
def test_c5_t_duality_constructor():
    backgrounds = catalog_backgrounds()
    assert len(backgrounds) >= 5
    assert {"s1", "t2", "klein_bottle"} <= {bg.base.name for bg in backgrounds.values()}
    for bg in backgrounds.values():
        dual = t_dual(bg)
        assert is_t_dual_pair(bg, dual).passed, bg.name
        twice = t_dual(dual)
        assert twice.bundle == bg.bundle and twice.t == bg.t - 2
        assert same_z2_class(twice.alpha, bg.alpha + bg.eps)
        assert twice.h_base == bg.h_base and twice.h_fib == bg.h_fib
        i, a = canonical_invariants(bg)
        j, b = canonical_invariants(twice)
        assert i == j and same_z2_class(a, b)


@pytest.mark.criterion("C6", "spin obstruction duality, exhaustive over mod-2 classes")
def test_c6_spin_duality():
    checked_t2 = 0
    for bg in catalog_backgrounds().values():
        k = bg.base
        for w1, w2 in itertools.product(z2_classes(k, 1), z2_classes(k, 2)):
            assert spin_duality_holds(bg, w1, w2), (bg.name, w1.values, w2.values)
            checked_t2 += k.name == "t2"
    assert checked_t2 == 3 * 4 * 2


@pytest.mark.criterion("C7", "chain map, Clifford intertwining, 100 isomorphism checks")
def test_c7_chain_map_and_ccaiso():
    rs = RandomSource(7)
    for m, eps, xi in configurations():
        tr = random_triple(rs, m, eps, xi)
        for _ in range(2):
            w = random_pair(rs, m, eps, xi)
            a = random_section(rs, m, eps, xi)
            assert t_transform(invariant_d(w, tr)) == invariant_d(t_transform(w), tr.dual())
            assert t_transform(invariant_clifford(a, w)) == invariant_clifford(phi(a), t_transform(w))
    # T^3 total space over T^2 with F = 2 dxdy, Fhat = 3 dxdy, and a T^3 base carrying H3 flux
    z2, z3 = (0, 0), (0, 0, 0)
    flux_triples = (
        DifferentialTriple(2, F={((0, 1), z2): 2}, Fhat={((0, 1), z2): 3}),
        DifferentialTriple(3, F={((0, 1), z3): 2}, Fhat={((0, 2), z3): 3}, H3={((0, 1, 2), z3): 5}),
    )
    for tr in flux_triples:
        for _ in range(100):
            a, b = random_section(rs, tr.m, 0, 0), random_section(rs, tr.m, 0, 0)
            assert check_ccaiso(a, b, tr)


def _check_snf(rows):
    m = IntMatrix.from_rows(rows)
    u, d, v = smith_normal_form(m)
    assert u @ m @ v == d
    assert abs(determinant(u.tolist())) == 1 and abs(determinant(v.tolist())) == 1
    r, c = m.shape
    assert all(d.rows[i][j] == 0 for i in range(r) for j in range(c) if i != j)
    diag = [d.rows[i][i] for i in range(min(r, c))]
    nz = [x for x in diag if x]
    assert all(x > 0 for x in nz) and diag[:len(nz)] == nz
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


def _gysin_exact(seq):
    incoming = 0
    for _, dim, out_rank in seq:
        assert dim == incoming + out_rank
        incoming = out_rank
    assert incoming == 0


@pytest.mark.criterion("C8", "SNF contract on 500 matrices, Gysin and total-space agreement")
def test_c8_linear_algebra():
    rng = random.Random(8)
    with Budget(60.0):
        for j in range(500):
            r, c = (40, 40) if j % 50 == 0 else (rng.randint(1, 40), rng.randint(1, 40))
            _check_snf([[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)])
        s1 = catalog("s1")
        theta = TwistClass.named(s1, "theta")
        for bundle, total in ((CircleBundle.trivial(s1), "t2"), (CircleBundle.trivial(s1, theta), "klein_bottle")):
            x = catalog(total)
            for base_twist, total_twist in ((None, None), (theta, TwistClass.named(x, "base"))):
                direct = cohomology(x, total_twist)
                assert [total_cohomology(bundle, base_twist, n).assembled for n in range(3)] == direct
                _gysin_exact(gysin_sequence(bundle, base_twist))
        assert twisted_coboundary(s1, theta, 0).tolist() == [[-2]]
