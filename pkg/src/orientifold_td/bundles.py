"""Circle bundles over Delta-complexes and their two-row spectral sequence.

A circle bundle is recorded by its orientation class ``xi`` and its twisted
Chern cocycle ``c`` (degree 2, coefficients ``Z_xi``).  Cohomology of the total
space is computed from the base: the only differential is ``d2 = c cup -``,
so ``E3 = E_inf`` and each total degree has a base piece (a cokernel) and a
fibre piece (a kernel).
"""

from __future__ import annotations

from dataclasses import dataclass

from .cellular import (
    DeltaComplex,
    TwistClass,
    TwistedCochain,
    cohomology,
    cohomology_presentation,
    is_coboundary,
    twisted_cup,
)
from .exact_linalg import AbelianGroup, Subquotient, ext_nonzero, field_rank, hom_cokernel, hom_kernel

__all__ = [
    "CircleBundle",
    "GradedTotalClass",
    "TotalCohomology",
    "d2_pairing",
    "cup_c_matrix",
    "total_cohomology",
    "gysin_pushforward",
    "pullback",
    "gysin_sequence",
]


def _normalized(c: TwistedCochain) -> TwistedCochain:
    for v in c.values:
        if v:
            return c if v > 0 else -c
    return c


@dataclass(frozen=True)
class CircleBundle:
    """Circle bundle with ``w1 = xi`` and twisted Chern class ``c`` in ``H^2(base; Z_xi)``.

    ``c`` and ``-c`` describe the same bundle, so the cocycle is normalized to
    have a positive first nonzero entry.
    """

    base: DeltaComplex
    w1: TwistClass
    chern: TwistedCochain

    def __post_init__(self) -> None:
        c = self.chern
        if c.complex is not self.base or self.w1.complex is not self.base:
            raise ValueError("bundle data must live on the base complex")
        if c.degree != 2 or c.coeffs != "Z":
            raise ValueError("the Chern cocycle must be an integral 2-cochain")
        if c.twist != self.w1:
            raise ValueError("the Chern cocycle must be twisted by w1")
        if not c.is_cocycle():
            raise ValueError("the Chern cochain is not a twisted cocycle")
        object.__setattr__(self, "chern", _normalized(c))

    @classmethod
    def trivial(cls, base: DeltaComplex, w1: TwistClass | None = None) -> "CircleBundle":
        w1 = w1 or TwistClass.zero(base)
        return cls(base, w1, TwistedCochain.zero(base, 2, w1))

    @property
    def xi(self) -> TwistClass:
        return self.w1

    def flipped(self) -> "CircleBundle":
        """The same bundle presented with ``-c`` (normalization undoes the sign again)."""
        return CircleBundle(self.base, self.w1, -self.chern)


def d2_pairing(b: CircleBundle, x: TwistedCochain, twist: TwistClass | None = None) -> TwistedCochain:
    """Representative of ``c cup x``: ``H^p(base; Z_{A+xi}) -> H^{p+2}(base; Z_A)``.

    If ``twist`` (the target coefficient twist ``A``) is given, ``x`` must carry ``A + xi``.
    """
    if x.complex is not b.base:
        raise ValueError("class lives on a different complex")
    if twist is not None and x.twist != twist + b.xi:
        raise ValueError("coefficient twist of the class does not match A + xi")
    if not x.is_cocycle():
        raise ValueError("d2_pairing expects a twisted cocycle")
    return twisted_cup(b.chern, x)


def _presentation(k: DeltaComplex, twist: TwistClass, p: int) -> Subquotient | None:
    if p < 0 or p > k.dim:
        return None
    return cohomology_presentation(k, twist, p)


def cup_c_matrix(b: CircleBundle, twist: TwistClass, p: int):
    """Matrix of ``c cup -: H^p(Z_{twist+xi}) -> H^{p+2}(Z_twist)`` on presentation generators.

    Returns ``(matrix, source, target)``; missing groups are ``None`` with empty matrix.
    """
    src = _presentation(b.base, twist + b.xi, p)
    dst = _presentation(b.base, twist, p + 2)
    if src is None or dst is None:
        return [], src, dst
    cols = []
    for j in range(src.ngens):
        x = TwistedCochain(b.base, p, tuple(src.representative(j)), twist + b.xi)
        cols.append(dst.coordinates(list(twisted_cup(b.chern, x).values)))
    matrix = [[cols[j][i] for j in range(src.ngens)] for i in range(dst.ngens)]
    return matrix, src, dst


@dataclass(frozen=True)
class TotalCohomology:
    """Degree-``n`` cohomology of a total space.

    ``graded = (fibre piece, base piece)``: the kernel of ``c cup -`` on
    ``H^{n-1}(base; Z_{twist+xi})`` and the cokernel of ``c cup -`` into
    ``H^n(base; Z_twist)``.  ``assembled`` is their direct sum; the extension
    (base piece is the subgroup) is undetermined exactly when ``Ext(fibre, base) != 0``.
    """

    degree: int
    graded: tuple[AbelianGroup, AbelianGroup]
    assembled: AbelianGroup
    extension_ambiguous: bool

    @property
    def fiber_part(self) -> AbelianGroup:
        return self.graded[0]

    @property
    def base_part(self) -> AbelianGroup:
        return self.graded[1]


def _kernel_part(b: CircleBundle, twist: TwistClass, p: int) -> AbelianGroup:
    matrix, src, dst = cup_c_matrix(b, twist, p)
    if src is None:
        return AbelianGroup()
    if dst is None:
        return src.group
    return hom_kernel(matrix, src.orders, dst.orders)


def _cokernel_part(b: CircleBundle, twist: TwistClass, p: int) -> AbelianGroup:
    matrix, src, dst = cup_c_matrix(b, twist, p)
    if dst is None:
        return AbelianGroup()
    if src is None:
        return dst.group
    return hom_cokernel(matrix, src.ngens, dst.orders)


def total_cohomology(b: CircleBundle, twist: TwistClass | None, n: int) -> TotalCohomology:
    """``H^n(X; Z_twist)`` of the total space, for a twist pulled back from the base."""
    twist = twist or TwistClass.zero(b.base)
    if twist.complex is not b.base:
        raise ValueError("twist must live on the base")
    fibre = _kernel_part(b, twist, n - 1)
    base = _cokernel_part(b, twist, n - 2)
    return TotalCohomology(n, (fibre, base), fibre + base, ext_nonzero(fibre, base))


@dataclass(frozen=True)
class GradedTotalClass:
    """A total-space class in two-row form.

    ``base_part`` is a degree-``n`` cocycle with twist ``twist`` (taken modulo
    the image of ``c cup -``); ``fiber_part`` is a degree-``n-1`` cocycle with
    twist ``twist + xi`` whose product with ``c`` is exact.
    """

    bundle: CircleBundle
    twist: TwistClass
    degree: int
    base_part: TwistedCochain
    fiber_part: TwistedCochain

    def __post_init__(self) -> None:
        b, n = self.bundle, self.degree
        if self.base_part.degree != n or self.base_part.twist != self.twist:
            raise ValueError(f"base part must be a degree-{n} cochain with the class twist")
        if self.fiber_part.degree != n - 1 or self.fiber_part.twist != self.twist + b.xi:
            raise ValueError(f"fibre part must be a degree-{n - 1} cochain twisted by twist + xi")
        for part in (self.base_part, self.fiber_part):
            if part.complex is not b.base:
                raise ValueError("graded parts must live on the base")
            if part.degree <= b.base.dim and not part.is_cocycle():
                raise ValueError("graded parts must be cocycles")
        if n + 1 <= b.base.dim and not is_coboundary(twisted_cup(b.chern, self.fiber_part)):
            raise ValueError("fibre part does not survive: c cup fibre part is not exact")

    @classmethod
    def build(cls, bundle: CircleBundle, twist: TwistClass | None, degree: int,
              base_part: TwistedCochain | None = None,
              fiber_part: TwistedCochain | None = None) -> "GradedTotalClass":
        twist = twist or TwistClass.zero(bundle.base)
        k = bundle.base
        if base_part is None:
            base_part = TwistedCochain.zero(k, degree, twist) if degree >= 0 else None
        if fiber_part is None:
            fiber_part = TwistedCochain.zero(k, degree - 1, twist + bundle.xi)
        return cls(bundle, twist, degree, base_part, fiber_part)


def gysin_pushforward(b: CircleBundle, x: GradedTotalClass) -> TwistedCochain:
    """``pi_*: H^n(X; Z_A) -> H^{n-1}(base; Z_{A+xi})`` (projection to the fibre row)."""
    if x.bundle != b:
        raise ValueError("class belongs to a different bundle")
    return x.fiber_part


def pullback(b: CircleBundle, y: TwistedCochain) -> GradedTotalClass:
    """``pi^* y`` for a base cocycle ``y``."""
    return GradedTotalClass.build(b, y.twist, y.degree, base_part=y)


def gysin_sequence(b: CircleBundle, twist: TwistClass | None = None) -> list[tuple[str, int, int]]:
    """Rational Gysin sequence ``... -> H^k(M) -> H^k(X) -> H^{k-1}(M, xi) -> H^{k+1}(M) -> ...``.

    Returns ``(label, dim, rank of the outgoing map)`` for every term in order,
    where the map ranks are computed independently (``c cup -`` from matrices,
    ``pi^*`` and ``pi_*`` from the graded pieces).  Exactness means
    ``dim = rank(incoming) + rank(outgoing)`` at every term.
    """
    twist = twist or TwistClass.zero(b.base)
    k = b.base
    base_q = cohomology(k, twist, "Q")
    fib_q = cohomology(k, twist + b.xi, "Q")

    def dim_base(p: int) -> int:
        return base_q[p].rank if 0 <= p <= k.dim else 0

    def dim_fib(p: int) -> int:
        return fib_q[p].rank if 0 <= p <= k.dim else 0

    def cup_rank(p: int) -> int:
        matrix, src, dst = cup_c_matrix(b, twist, p)
        if src is None or dst is None:
            return 0
        free_rows = [i for i, o in enumerate(dst.orders) if o == 0]
        free_cols = [j for j, o in enumerate(src.orders) if o == 0]
        from fractions import Fraction
        return field_rank([[Fraction(matrix[i][j]) for j in free_cols] for i in free_rows]) if free_cols else 0

    out = []
    for n in range(0, k.dim + 2):
        tc = total_cohomology(b, twist, n)
        out.append((f"H^{n}(M)", dim_base(n), tc.base_part.rank))
        out.append((f"H^{n}(X)", tc.assembled.rank, tc.fiber_part.rank))
        out.append((f"H^{n - 1}(M,xi)", dim_fib(n - 1), cup_rank(n - 1)))
    return out
