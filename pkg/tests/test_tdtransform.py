import itertools

import pytest
from helpers import configurations, random_pair, random_section, random_triple

from orientifold_td.backgrounds import _generator
from orientifold_td.bundles import CircleBundle, total_cohomology
from orientifold_td.cellular import TwistClass, catalog
from orientifold_td.exterior import RandomSource, _wedge, d_flat
from orientifold_td.tdtransform import (
    DifferentialTriple,
    InvariantGenSection,
    InvariantPair,
    check_ccaiso,
    invariant_clifford,
    invariant_cohomology,
    invariant_cohomology_pair,
    invariant_d,
    invariant_derived_bracket,
    invariant_dorfman,
    invariant_pairing,
    phi,
    retag,
    t_transform,
)

Z2, Z3 = (0, 0), (0, 0, 0)
DXDY2 = {((0, 1), Z2): 1}


def _cases(seed, per_config=2):
    rs = RandomSource(seed)
    for m, eps, xi in configurations():
        tr = random_triple(rs, m, eps, xi)
        for _ in range(per_config):
            yield rs, tr


def test_invariant_d_squares_to_zero():
    for rs, tr in _cases(1):
        w = random_pair(rs, tr.m, tr.eps, tr.xi)
        assert invariant_d(invariant_d(w, tr), tr).is_zero()


def test_invariant_d_squares_to_zero_nilmanifold_triple():
    tr = DifferentialTriple(2, F=DXDY2)
    rs = RandomSource(2)
    for _ in range(20):
        w = random_pair(rs, 2, 0, 0)
        assert invariant_d(invariant_d(w, tr), tr).is_zero()


def test_zero_triple_is_componentwise_d():
    tr = DifferentialTriple(3)
    rs = RandomSource(3)
    w = random_pair(rs, 3, 0, 0)
    dw = invariant_d(w, tr)
    assert dw.top == d_flat(w.top) and dw.bottom == d_flat(w.bottom)


def test_unit_pair_example():
    # w = (1, 0) in degree 0: top -> 0, bottom -> (-1)^0 Fhat ^ 1 = +Fhat
    f, fh = {((0, 1), Z2): 2}, {((0, 1), Z2): 3}
    tr = DifferentialTriple(2, F=f, Fhat=fh)
    w = InvariantPair.build(2, 0, 0, 0, 0, top={((), Z2): 1})
    dw = invariant_d(w, tr)
    assert dw.top.is_zero()
    assert dw.bottom.terms == DifferentialTriple(2, F=fh).F


def test_violated_triples_rejected():
    with pytest.raises(ValueError, match="invalid triple"):
        DifferentialTriple(4, F={((0, 1), (0,) * 4): 1}, Fhat={((2, 3), (0,) * 4): 1})
    with pytest.raises(ValueError, match="invalid triple"):
        DifferentialTriple(3, F={((0, 1), (0, 0, 2)): 1})
    with pytest.raises(ValueError, match="2-form"):
        DifferentialTriple(2, Fhat={((0,), Z2): 1})
    with pytest.raises(ValueError):
        DifferentialTriple(2, eps=(1, 0), F=DXDY2, Fhat=DXDY2)


def test_t_transform_examples():
    w = InvariantPair.build(2, 0, 0, 0, 0, top={((), Z2): 1})
    tw = t_transform(w)
    assert tw.top.terms == {} and tw.bottom.terms == {((), Z2): 1}
    rs = RandomSource(4)
    for m, eps, xi in configurations():
        w = random_pair(rs, m, eps, xi)
        assert t_transform(t_transform(w)) == retag(w)
        assert t_transform(w).i == w.i - 1


def test_chain_map():
    for rs, tr in _cases(5):
        w = random_pair(rs, tr.m, tr.eps, tr.xi)
        assert t_transform(invariant_d(w, tr)) == invariant_d(t_transform(w), tr.dual())


def test_clifford_intertwining():
    for rs, tr in _cases(6):
        w = random_pair(rs, tr.m, tr.eps, tr.xi)
        a = random_section(rs, tr.m, tr.eps, tr.xi)
        assert t_transform(invariant_clifford(a, w)) == invariant_clifford(phi(a), t_transform(w))


def test_clifford_anticommutator():
    for rs, tr in _cases(7):
        w = random_pair(rs, tr.m, tr.eps, tr.xi)
        a, b = (random_section(rs, tr.m, tr.eps, tr.xi) for _ in range(2))
        lhs = invariant_clifford(a, invariant_clifford(b, w)) + invariant_clifford(b, invariant_clifford(a, w))
        p = invariant_pairing(a, b).terms
        rhs = InvariantPair(w.top._like(_wedge(p, w.top.terms), i=w.i - 2),
                            w.bottom._like(_wedge(p, w.bottom.terms), i=w.i - 3))
        assert lhs == rhs


def test_closed_form_bracket_is_derived_bracket():
    for rs, tr in _cases(8):
        w = random_pair(rs, tr.m, tr.eps, tr.xi)
        a, b = (random_section(rs, tr.m, tr.eps, tr.xi) for _ in range(2))
        assert invariant_derived_bracket(a, b, tr, w) == invariant_clifford(invariant_dorfman(a, b, tr), w)


def test_phi_examples():
    m = 2
    y = InvariantGenSection(m, 0, 0, Y={(0, Z2): 1})
    assert phi(y).Y == y.Y and not phi(y).f and not phi(y).g
    s = InvariantGenSection(m, 0, 0, f={Z2: 2}, g={Z2: 5})
    assert phi(s) == InvariantGenSection(m, 0, 0, f={Z2: 5}, g={Z2: 2})
    rs = RandomSource(9)
    for m, eps, xi in configurations():
        a, b = random_section(rs, m, eps, xi), random_section(rs, m, eps, xi)
        assert invariant_pairing(phi(a), phi(b)) == invariant_pairing(a, b)
        assert phi(phi(a)) == a


def test_ccaiso_random_and_nilmanifold_flux_model():
    for rs, tr in _cases(10):
        a, b = (random_section(rs, tr.m, tr.eps, tr.xi) for _ in range(2))
        assert check_ccaiso(a, b, tr)
    # nilmanifold / flux desk model: F = n dx^dy, Fhat = m dx^dy on a T^2 base
    tr = DifferentialTriple(2, F={((0, 1), Z2): 2}, Fhat={((0, 1), Z2): 3})
    rs = RandomSource(11)
    for _ in range(20):
        a, b = random_section(rs, 2, 0, 0), random_section(rs, 2, 0, 0)
        assert check_ccaiso(a, b, tr)


def test_ccaiso_trivial_triple_brackets_agree():
    tr = DifferentialTriple(2)
    rs = RandomSource(12)
    a, b = random_section(rs, 2, 0, 0), random_section(rs, 2, 0, 0)
    assert check_ccaiso(a, b, tr)


def test_corrupted_phi_fails():
    tr = DifferentialTriple(3, F={((0, 1), Z3): 1}, H3={((0, 1, 2), Z3): 1})
    a = InvariantGenSection(3, 0, 0, {(0, Z3): 1}, {Z3: 1}, {Z3: 2}, {(1, Z3): 1})
    b = InvariantGenSection(3, 0, 0, {(1, Z3): 1}, {Z3: 3}, {}, {(2, Z3): 1})
    assert check_ccaiso(a, b, tr)
    no_swap = lambda s: InvariantGenSection(s.m, s.eps, s.xi ^ s.eps, s.Y, s.f, s.g, s.eta)  # noqa: E731
    assert not check_ccaiso(a, b, tr, no_swap)


# ---------------------------------------------------------------------------
# invariant cohomology


def test_cohomology_pair_torus_and_klein():
    pair = invariant_cohomology_pair(DifferentialTriple(1, eps=1, xi=0))
    assert pair.side == (1, 2, 1, 0)
    assert pair.dual_side == (2, 1, 0, 1)
    assert pair.shift_ok


def test_cohomology_pair_trivial_t2_base_is_kunneth():
    pair = invariant_cohomology_pair(DifferentialTriple(2))
    # T^3 de Rham folded 2-periodically: even = 1 + 3, odd = 3 + 1
    assert pair.side == pair.dual_side == (4, 4, 4, 4)


def test_cohomology_pair_matches_gysin_for_nilmanifold():
    # F = dx^dy: the total space is the Heisenberg nilmanifold; Betti numbers from the Gysin oracle
    t2 = catalog("t2")
    z = TwistClass.zero(t2)
    nil = CircleBundle(t2, z, _generator(t2, z, 2))
    betti = [total_cohomology(nil, None, n).assembled.rank for n in range(4)]
    assert betti == [1, 2, 2, 1]
    even, odd = betti[0] + betti[2], betti[1] + betti[3]
    pair = invariant_cohomology_pair(DifferentialTriple(2, F=DXDY2))
    assert pair.side == (even, odd, even, odd)
    assert pair.shift_ok


def test_shift_holds_for_all_constant_twists_on_t2_base():
    for eps, xi, alpha in itertools.product(range(4), repeat=3):
        assert invariant_cohomology_pair(DifferentialTriple(2, eps, xi), alpha).shift_ok


def test_t3_flux_triple_cohomology():
    tr = DifferentialTriple(3, H3={((0, 1, 2), Z3): 5})
    pair = invariant_cohomology_pair(tr)
    assert pair.shift_ok and pair.side == pair.dual_side


def test_cohomology_requires_constant_triple():
    tr = DifferentialTriple(3, F={((0, 1), (0, 0, 0)): 1}, H3={((0, 1, 2), (2, 0, 0)): 1})
    with pytest.raises(ValueError):
        invariant_cohomology(tr, 0, 0)
