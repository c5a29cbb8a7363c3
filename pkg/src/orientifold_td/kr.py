"""KR-theory of a free involution from its spectral sequence.

For the double cover classified by ``eps`` the ``E_3`` page is
``H^p(X; Z_{(q/2) eps})`` for even ``q`` and zero for odd ``q``.  On complexes
of dimension at most 2 every later differential leaves the page, so the
page is ``E_inf`` and ``KR^n_eps(X)`` has one graded piece for each ``p``
with ``n - p`` even.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cellular import DeltaComplex, TwistClass, TwistedCochain, cohomology, is_coboundary, twisted_coboundary
from .exact_linalg import AbelianGroup, ext_nonzero

__all__ = ["KRPiece", "KRResult", "bockstein_vanishes", "kr_ahss", "kr_table"]


@dataclass(frozen=True)
class KRPiece:
    p: int
    q: int
    group: AbelianGroup


@dataclass(frozen=True)
class KRResult:
    """Graded pieces of ``KR^n_eps(X)`` ordered by ``p`` (larger ``p`` is deeper in the filtration)."""

    degree: int
    pieces: tuple[KRPiece, ...]
    assembled: AbelianGroup
    extension_ambiguous: bool
    periodicity: int

    def graded(self) -> list[tuple[int, int, AbelianGroup]]:
        return [(x.p, x.q, x.group) for x in self.pieces]


def bockstein_vanishes(x: DeltaComplex, eps: TwistClass) -> bool:
    """Whether ``beta(eps) = [delta(lift of eps) / 2]`` vanishes in ``H^2(X; Z)``."""
    if eps.complex is not x:
        raise ValueError("twist lives on a different complex")
    if x.dim < 2:
        return True
    lifted = twisted_coboundary(x, None, 1).apply(list(eps.values))
    half = TwistedCochain(x, 2, tuple(v // 2 for v in lifted), TwistClass.zero(x))
    return is_coboundary(half)


def _groups(x: DeltaComplex, eps: TwistClass) -> tuple[list[AbelianGroup], list[AbelianGroup]]:
    return cohomology(x, TwistClass.zero(x)), cohomology(x, eps)


def _result(x: DeltaComplex, eps: TwistClass, n: int, groups, periodicity: int) -> KRResult:
    plain, twisted = groups
    pieces = []
    for p in range(x.dim + 1):
        q = n - p
        if q % 2:
            continue
        group = twisted[p] if (q // 2) % 2 else plain[p]
        if not group.is_zero():
            pieces.append(KRPiece(p, q, group))
    assembled = AbelianGroup()
    for piece in pieces:
        assembled = assembled + piece.group
    ambiguous = any(ext_nonzero(low.group, high.group)
                    for i, low in enumerate(pieces) for high in pieces[i + 1:])
    return KRResult(n, tuple(pieces), assembled, ambiguous, periodicity)


def _check(x: DeltaComplex, eps: TwistClass) -> None:
    if eps.complex is not x:
        raise ValueError("twist lives on a different complex")
    if x.dim > 2:
        raise ValueError(f"KR computation unsupported for dimension {x.dim} > 2: "
                         "higher differentials are not determined")


def kr_ahss(x: DeltaComplex, eps: TwistClass | None, n: int) -> KRResult:
    """``KR^n_eps(X)`` with direct-sum assembly; rejects complexes of dimension above 2."""
    eps = eps or TwistClass.zero(x)
    _check(x, eps)
    periodicity = 4 if bockstein_vanishes(x, eps) else 8
    return _result(x, eps, n, _groups(x, eps), periodicity)


def kr_table(x: DeltaComplex, eps: TwistClass | None = None, degrees=range(4)) -> list[KRResult]:
    """``kr_ahss`` for several degrees, computing the cohomology groups once."""
    eps = eps or TwistClass.zero(x)
    _check(x, eps)
    periodicity = 4 if bockstein_vanishes(x, eps) else 8
    groups = _groups(x, eps)
    return [_result(x, eps, n, groups, periodicity) for n in degrees]
