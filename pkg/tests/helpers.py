"""Seeded generators of invariant pairs, sections and triples shared by the test modules."""

from orientifold_td.exterior import RandomSource, _d
from orientifold_td.tdtransform import DifferentialTriple, InvariantGenSection, InvariantPair


def random_triple(rs: RandomSource, m: int, eps: int, xi: int) -> DifferentialTriple:
    """Exact curvatures ``F = d(...)``, ``F^ = d(...)``; a random ``H3`` on ``T^3`` (closed since ``F^ ^ F`` is a 4-form)."""
    if m < 2:
        return DifferentialTriple(m, eps, xi)
    f = _d({((0,), k): c for (_, k), c in rs.scalar_terms(m, xi, 1).items()})
    fh = _d({((1,), k): c for (_, k), c in rs.scalar_terms(m, xi ^ eps, 1).items()})
    h3 = {((0, 1, 2), k): c for (_, k), c in rs.scalar_terms(m, eps, 1).items()} if m == 3 else {}
    return DifferentialTriple(m, eps, xi, f, fh, h3)


def random_pair(rs: RandomSource, m: int, eps: int, xi: int) -> InvariantPair:
    i, a = rs.rng.randint(0, 3), rs.rng.randrange(1 << m)
    return InvariantPair(rs.form(m, i, a, eps), rs.form(m, i - 1, a ^ xi, eps))


def random_section(rs: RandomSource, m: int, eps: int, xi: int) -> InvariantGenSection:
    s = rs.section(m, eps)
    return InvariantGenSection(m, eps, xi, s.vec, rs.scalar_terms(m, xi), rs.scalar_terms(m, xi ^ eps), s.cov)


def configurations(ms=(2, 3)):
    for m in ms:
        for eps in range(1 << m):
            for xi in range(1 << m):
                yield m, eps, xi
