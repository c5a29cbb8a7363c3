"""Differential T-duality on a torus base.

An invariant form on a circle-bundle total space is stored as a pair
``(top, bottom)`` of base forms: ``omega = top + A ^ bottom`` where ``A`` is the
connection.  The bundle enters only through the curvatures ``F`` (bundle),
``F^`` (dual bundle) and the base flux ``H3``.  T-duality swaps the two
components, and on generalized sections it swaps the fibre scalar with the
dual fibre scalar.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Mapping

from .exact_linalg import field_rank
from .exterior import (
    GR,
    FourierScalar,
    TwistedPolyForm,
    _acc,
    _basis,
    _d,
    _interior,
    _lie_bracket,
    _lie_form,
    _lin,
    _mask,
    _mask_tuple,
    _parity,
    _scalar_times_vec,
    _vec_apply,
    _wedge,
    format_terms,
)

__all__ = [
    "DifferentialTriple",
    "InvariantPair",
    "InvariantGenSection",
    "invariant_d",
    "t_transform",
    "invariant_clifford",
    "invariant_pairing",
    "invariant_dorfman",
    "invariant_derived_bracket",
    "phi",
    "check_ccaiso",
    "invariant_cohomology",
    "invariant_cohomology_pair",
    "CohomologyPair",
]


def _check_form(terms: Mapping, m: int, degree: int, parity: int, label: str) -> dict:
    if any(len(tuple(idx)) != degree for idx, _ in terms):
        raise ValueError(f"{label} must be a {degree}-form")
    return TwistedPolyForm(m, degree, parity, 0, terms).terms


@dataclass(frozen=True, eq=False)
class DifferentialTriple:
    """Curvature data ``(F, F^, H3)`` on ``T^m`` with orientifold twist ``eps`` and bundle twist ``xi``.

    ``F`` has parity ``xi``, ``F^`` parity ``xi + eps``, ``H3`` parity ``eps``;
    construction enforces ``dF = 0``, ``dF^ = 0`` and ``dH3 + F^ ^ F = 0``.
    """

    m: int
    eps: int
    xi: int
    F: dict
    Fhat: dict
    H3: dict

    def __init__(self, m: int, eps=0, xi=0, F: Mapping | None = None, Fhat: Mapping | None = None,
                 H3: Mapping | None = None):
        eps, xi = _mask(eps, m), _mask(xi, m)
        f = _check_form(F or {}, m, 2, xi, "F")
        fh = _check_form(Fhat or {}, m, 2, xi ^ eps, "Fhat")
        h3 = _check_form(H3 or {}, m, 3, eps, "H3")
        if _d(f):
            raise ValueError("invalid triple: dF != 0")
        if _d(fh):
            raise ValueError("invalid triple: dFhat != 0")
        if _lin((1, _d(h3)), (1, _wedge(fh, f))):
            raise ValueError("invalid triple: dH3 + Fhat ^ F != 0")
        for name, value in (("m", m), ("eps", eps), ("xi", xi), ("F", f), ("Fhat", fh), ("H3", h3)):
            object.__setattr__(self, name, value)

    @property
    def xi_hat(self) -> int:
        return self.xi ^ self.eps

    def dual(self) -> "DifferentialTriple":
        return DifferentialTriple(self.m, self.eps, self.xi_hat, self.Fhat, self.F, self.H3)

    def is_constant(self) -> bool:
        return all(not any(k) for d in (self.F, self.Fhat, self.H3) for _, k in d)

    def __str__(self) -> str:
        bits = lambda mask: "".join(map(str, _mask_tuple(mask, self.m)))  # noqa: E731
        return (f"T^{self.m} eps={bits(self.eps)} xi={bits(self.xi)}: "
                f"F={format_terms(self.F) or '0'}; Fhat={format_terms(self.Fhat) or '0'}; "
                f"H3={format_terms(self.H3) or '0'}")


@dataclass(frozen=True, eq=False)
class InvariantPair:
    """Invariant form ``top + A ^ bottom`` with ``top`` in ``S^{i,A}_L`` and ``bottom`` in ``S^{i-1,A+xi}_L``."""

    top: TwistedPolyForm
    bottom: TwistedPolyForm

    def __post_init__(self) -> None:
        t, b = self.top, self.bottom
        if t.n != b.n or t.l_twist != b.l_twist:
            raise ValueError("components live on different tori or L-twists")
        if b.i != t.i - 1:
            raise ValueError("bottom component must have degree one less than the top")

    @property
    def i(self) -> int:
        return self.top.i

    @property
    def xi(self) -> int:
        return self.top.a_twist ^ self.bottom.a_twist

    @classmethod
    def build(cls, m: int, i: int, a_twist, eps, xi, top: Mapping | None = None,
              bottom: Mapping | None = None) -> "InvariantPair":
        a, e, x = _mask(a_twist, m), _mask(eps, m), _mask(xi, m)
        return cls(TwistedPolyForm(m, i, a, e, top or {}), TwistedPolyForm(m, i - 1, a ^ x, e, bottom or {}))

    def __eq__(self, other) -> bool:
        return isinstance(other, InvariantPair) and self.top == other.top and self.bottom == other.bottom

    __hash__ = None

    def is_zero(self) -> bool:
        return self.top.is_zero() and self.bottom.is_zero()

    def __add__(self, other: "InvariantPair") -> "InvariantPair":
        return InvariantPair(self.top + other.top, self.bottom + other.bottom)

    def __sub__(self, other: "InvariantPair") -> "InvariantPair":
        return InvariantPair(self.top - other.top, self.bottom - other.bottom)

    def __str__(self) -> str:
        return f"({self.top}, {self.bottom})"


def _sign(p: int) -> int:
    return -1 if p % 2 else 1


def _check_pair(w: InvariantPair, tr: DifferentialTriple) -> None:
    if w.top.n != tr.m or w.top.l_twist != tr.eps:
        raise ValueError("pair and triple live on different tori or L-twists")
    if w.xi != tr.xi:
        raise ValueError("pair parities do not match the bundle twist of the triple")


def invariant_d(w: InvariantPair, tr: DifferentialTriple) -> InvariantPair:
    """Twisted differential on invariant forms.

    ``top -> d top + H3 ^ top + (-1)^(i-1) F ^ bottom`` and
    ``bottom -> d bottom + H3 ^ bottom + (-1)^i F^ ^ top``.
    """
    _check_pair(w, tr)
    i = w.i
    t, b = w.top.terms, w.bottom.terms
    top = _lin((1, _d(t)), (1, _wedge(tr.H3, t)), (_sign(i - 1), _wedge(tr.F, b)))
    bottom = _lin((1, _d(b)), (1, _wedge(tr.H3, b)), (_sign(i), _wedge(tr.Fhat, t)))
    return InvariantPair(w.top._like(top, i=i + 1), w.bottom._like(bottom, i=i))


def t_transform(w: InvariantPair) -> InvariantPair:
    """``(top, bottom) -> (bottom, top)``; the old top is re-tagged ``S^{i,A} = S^{i-2,A+eps}``."""
    t, b = w.top, w.bottom
    new_bottom = TwistedPolyForm._raw(t.n, t.i - 2, t.a_twist ^ t.l_twist, t.l_twist, dict(t.terms))
    return InvariantPair(b, new_bottom)


def retag(w: InvariantPair) -> InvariantPair:
    """The canonical identification ``S^{i,A} = S^{i-2,A+eps}`` applied to both components."""
    def one(f: TwistedPolyForm) -> TwistedPolyForm:
        return TwistedPolyForm._raw(f.n, f.i - 2, f.a_twist ^ f.l_twist, f.l_twist, dict(f.terms))
    return InvariantPair(one(w.top), one(w.bottom))


# ---------------------------------------------------------------------------
# invariant generalized sections


class InvariantGenSection:
    """Invariant section ``Y + f + g + eta`` of ``TM + V + (L (x) V) + (L (x) T*M)``.

    ``f`` has parity ``xi``, ``g`` parity ``xi + eps`` and ``eta`` parity ``eps``.
    """

    __slots__ = ("m", "eps", "xi", "Y", "f", "g", "eta")

    def __init__(self, m: int, eps, xi, Y: Mapping | None = None, f: Mapping | None = None,
                 g: Mapping | None = None, eta: Mapping | None = None, check: bool = True):
        self.m, self.eps, self.xi = m, _mask(eps, m), _mask(xi, m)
        if not check:
            self.Y, self.f, self.g, self.eta = dict(Y or {}), dict(f or {}), dict(g or {}), dict(eta or {})
            return
        self.Y = {}
        for (j, k), c in (Y or {}).items():
            k = tuple(k)
            if _parity(k) or not 0 <= j < m:
                raise ValueError("base vector part must be untwisted")
            _acc(self.Y, (j, k), GR.coerce(c))
        self.f = FourierScalar(m, self.xi, f or {}).terms
        self.g = FourierScalar(m, self.xi ^ self.eps, g or {}).terms
        self.eta = {}
        for (j, k), c in (eta or {}).items():
            idx = (j,) if isinstance(j, int) else tuple(j)
            k = tuple(k)
            if _parity(k) != self.eps or len(idx) != 1:
                raise ValueError("covector part must have the parity of L")
            _acc(self.eta, (idx, k), GR.coerce(c))

    @classmethod
    def _raw(cls, m, eps, xi, Y, f, g, eta) -> "InvariantGenSection":
        return cls(m, eps, xi, Y, f, g, eta, check=False)

    def _same(self, other: "InvariantGenSection") -> None:
        if (self.m, self.eps, self.xi) != (other.m, other.eps, other.xi):
            raise ValueError("sections live on different algebroids")

    def __add__(self, other: "InvariantGenSection") -> "InvariantGenSection":
        self._same(other)
        return InvariantGenSection._raw(self.m, self.eps, self.xi, _lin((1, self.Y), (1, other.Y)),
                                        _lin((1, self.f), (1, other.f)), _lin((1, self.g), (1, other.g)),
                                        _lin((1, self.eta), (1, other.eta)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, InvariantGenSection):
            return NotImplemented
        return ((self.m, self.eps, self.xi) == (other.m, other.eps, other.xi) and self.Y == other.Y
                and self.f == other.f and self.g == other.g and self.eta == other.eta)

    __hash__ = None

    def __repr__(self) -> str:
        vec = " + ".join(f"({format_terms({((), k): c})})*d/dx{j + 1}" for (j, k), c in sorted(self.Y.items()))
        return (f"InvariantGenSection(Y={vec or '0'}; f={format_terms(self.f) or '0'}; "
                f"g={format_terms(self.g) or '0'}; eta={format_terms(self.eta) or '0'})")


def _check_section(a: InvariantGenSection, tr: DifferentialTriple) -> None:
    if (a.m, a.eps, a.xi) != (tr.m, tr.eps, tr.xi):
        raise ValueError("section does not match the triple")


def invariant_clifford(a: InvariantGenSection, w: InvariantPair) -> InvariantPair:
    """Clifford action on pairs.

    ``top -> i_Y top + eta ^ top + (-1)^(i-1) f bottom`` and
    ``bottom -> i_Y bottom + eta ^ bottom + (-1)^i g top``.
    """
    if (a.m, a.eps, a.xi) != (w.top.n, w.top.l_twist, w.xi):
        raise ValueError("section and pair do not match")
    i = w.i
    t, b = w.top.terms, w.bottom.terms
    top = _lin((1, _interior(a.Y, t)), (1, _wedge(a.eta, t)), (_sign(i - 1), _wedge(a.f, b)))
    bottom = _lin((1, _interior(a.Y, b)), (1, _wedge(a.eta, b)), (_sign(i), _wedge(a.g, t)))
    return InvariantPair(w.top._like(top, i=i - 1), w.bottom._like(bottom, i=i - 2))


def invariant_pairing(a: InvariantGenSection, b: InvariantGenSection) -> FourierScalar:
    """``<a, b> = i_Y zeta + i_Z eta + f1 g2 + f2 g1``."""
    a._same(b)
    terms = _lin((1, _interior(a.Y, b.eta)), (1, _interior(b.Y, a.eta)),
                 (1, _wedge(a.f, b.g)), (1, _wedge(b.f, a.g)))
    return FourierScalar._raw(a.m, a.eps, terms)


def invariant_dorfman(a: InvariantGenSection, b: InvariantGenSection, tr: DifferentialTriple) -> InvariantGenSection:
    """Bracket of invariant sections, the reduction of the total-space bracket to the base."""
    _check_section(a, tr)
    _check_section(b, tr)
    m = tr.m
    Y, f1, g1, eta = a.Y, a.f, a.g, a.eta
    Z, f2, g2, zeta = b.Y, b.f, b.g, b.eta
    vec = _lie_bracket(Y, Z, m)
    f = _lin((1, _vec_apply(Y, f2)), (-1, _vec_apply(Z, f1)), (-1, _interior(Z, _interior(Y, tr.F))))
    g = _lin((1, _vec_apply(Y, g2)), (-1, _vec_apply(Z, g1)), (-1, _interior(Z, _interior(Y, tr.Fhat))))
    eta_new = _lin(
        (1, _lie_form(Y, zeta)),
        (-1, _interior(Z, _d(eta))),
        (1, _wedge(g2, _d(f1))),
        (1, _wedge(f2, _d(g1))),
        (1, _wedge(g2, _interior(Y, tr.F))),
        (-1, _wedge(g1, _interior(Z, tr.F))),
        (-1, _interior(Z, _interior(Y, tr.H3))),
        (1, _wedge(f2, _interior(Y, tr.Fhat))),
        (-1, _wedge(f1, _interior(Z, tr.Fhat))),
    )
    return InvariantGenSection._raw(m, tr.eps, tr.xi, vec, f, g, eta_new)


def invariant_derived_bracket(a: InvariantGenSection, b: InvariantGenSection, tr: DifferentialTriple,
                              w: InvariantPair) -> InvariantPair:
    """``[[D, gamma_a], gamma_b] w`` with ``D`` the invariant differential."""
    def lie(u: InvariantPair) -> InvariantPair:
        return invariant_d(invariant_clifford(a, u), tr) + invariant_clifford(a, invariant_d(u, tr))
    return lie(invariant_clifford(b, w)) - invariant_clifford(b, lie(w))


def phi(s: InvariantGenSection) -> InvariantGenSection:
    """T-duality on sections: swap the fibre scalar ``f`` and the dual fibre scalar ``g``."""
    return InvariantGenSection._raw(s.m, s.eps, s.xi ^ s.eps, dict(s.Y), dict(s.g), dict(s.f), dict(s.eta))


def check_ccaiso(a: InvariantGenSection, b: InvariantGenSection, tr: DifferentialTriple,
                 phi_map: Callable[[InvariantGenSection], InvariantGenSection] = phi) -> bool:
    """Whether ``phi_map`` intertwines brackets, pairings and anchors of the two algebroids."""
    dual = tr.dual()
    try:
        pa, pb = phi_map(a), phi_map(b)
        bracket_ok = phi_map(invariant_dorfman(a, b, tr)) == invariant_dorfman(pa, pb, dual)
        pairing_ok = invariant_pairing(pa, pb) == invariant_pairing(a, b)
        anchor_ok = pa.Y == a.Y and pb.Y == b.Y
    except ValueError:
        return False
    return bracket_ok and pairing_ok and anchor_ok


# ---------------------------------------------------------------------------
# invariant cohomology


def _pair_block(m: int, i: int, a: int, eps: int, xi: int) -> list[tuple[str, tuple[int, ...]]]:
    """Frequency-zero basis of pairs in degree ``i``: ``("t", I)`` and ``("b", I)`` entries."""
    out = []
    for label, deg, twist in (("t", i, a), ("b", i - 1, a ^ xi)):
        for d in range(m + 1):
            if (d - deg) % 2:
                continue
            j = (d - deg) // 2
            if twist ^ (eps if j % 2 else 0):
                continue
            out.extend((label, idx) for idx in _basis(m, d))
    return out


def _pair_rank(tr: DifferentialTriple, i: int, a: int) -> int:
    src = _pair_block(tr.m, i, a, tr.eps, tr.xi)
    dst = _pair_block(tr.m, i + 1, a, tr.eps, tr.xi)
    if not src or not dst:
        return 0
    zero = (0,) * tr.m
    index = {key: r for r, key in enumerate(dst)}
    rows = [[GR(0)] * len(src) for _ in dst]
    for col, (label, idx) in enumerate(src):
        top = {(idx, zero): GR(1)} if label == "t" else {}
        bottom = {(idx, zero): GR(1)} if label == "b" else {}
        out = invariant_d(InvariantPair(TwistedPolyForm._raw(tr.m, i, a, tr.eps, top),
                                        TwistedPolyForm._raw(tr.m, i - 1, a ^ tr.xi, tr.eps, bottom)), tr)
        for lab, part in (("t", out.top.terms), ("b", out.bottom.terms)):
            for (jdx, k), c in part.items():
                if any(k):
                    raise ValueError("invariant cohomology needs a constant triple")
                rows[index[(lab, jdx)]][col] = c
    return field_rank(rows)


def invariant_cohomology(tr: DifferentialTriple, a_twist, i: int) -> int:
    """Dimension of degree-``i`` cohomology of translation-invariant pairs with differential :func:`invariant_d`."""
    if not tr.is_constant():
        raise ValueError("invariant cohomology needs a constant triple")
    a = _mask(a_twist, tr.m)
    size = len(_pair_block(tr.m, i, a, tr.eps, tr.xi))
    return size - _pair_rank(tr, i, a) - _pair_rank(tr, i - 1, a)


@dataclass(frozen=True)
class CohomologyPair:
    side: tuple[int, int, int, int]
    dual_side: tuple[int, int, int, int]

    @property
    def shift_ok(self) -> bool:
        """``dim H^i(side) = dim H^{i-1}(dual side)`` for all ``i`` (indices mod 4)."""
        return all(self.side[i] == self.dual_side[(i - 1) % 4] for i in range(4))


def invariant_cohomology_pair(tr: DifferentialTriple, alpha=0) -> CohomologyPair:
    """Invariant cohomology of both sides of a T-duality: ``H^{i,alpha}`` and ``H^{i,alpha+xi}`` of the dual."""
    a = _mask(alpha, tr.m)
    dual = tr.dual()
    side = tuple(invariant_cohomology(tr, a, i) for i in range(4))
    dual_side = tuple(invariant_cohomology(dual, a ^ tr.xi, i) for i in range(4))
    return CohomologyPair(side, dual_side)
