"""Exact exterior calculus on tori with flat Z/2 line-bundle twists.

Coordinates ``x_1..x_n`` have period ``2 pi``.  A scalar is a finite Fourier
polynomial ``sum c_k exp(i k.x)`` with Gaussian-rational coefficients; a
coordinate twisted by a flat line bundle carries half-integer frequencies
(anti-periodic sections), untwisted coordinates carry integer frequencies.
Frequencies are stored doubled so they are plain integers.

Forms are dictionaries ``{(I, k): c}`` with ``I`` a sorted index tuple.  On
top of them sit the twisted form complex ``S^{i,A}_L``, generalized sections
of ``TM + T*M (x) L``, the Dorfman and Courant brackets, the Clifford action,
B-transforms and the Lie-2 brackets.  Every identity is an exact equality.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exact_linalg import field_rank

__all__ = [
    "GaussianRational",
    "FourierScalar",
    "TwistedPolyForm",
    "GenSection",
    "FluxForm",
    "d_flat",
    "d_twisted",
    "pairing",
    "dorfman",
    "courant",
    "clifford",
    "l_multiply",
    "lie_derivative",
    "derived_bracket_check",
    "b_transform",
    "lie2_brackets",
    "jacobiator",
    "nabla",
    "function_multiply",
    "dirac_check",
    "invariant_twisted_cohomology",
    "ball_twisted_cohomology",
    "RandomSource",
    "AXIOMS",
    "SuiteInstance",
    "axiom_suite",
]


# ---------------------------------------------------------------------------
# Gaussian rationals


class GaussianRational:
    """Exact element ``re + im*i`` of ``Q(i)``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("floating-point complex numbers are not exact")
        return cls(x, 0)

    def __add__(self, other):
        o = other if isinstance(other, GaussianRational) else GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = other if isinstance(other, GaussianRational) else GaussianRational.coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            if not b and not d:
                return GaussianRational(a * c, 0)
            return GaussianRational(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        n = o.re * o.re + o.im * o.im
        if not n:
            raise ZeroDivisionError("division by zero in Q(i)")
        num = self * o.conjugate()
        return GaussianRational(num.re / n, num.im / n)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"GaussianRational({self})"

    def __str__(self) -> str:
        def q(x: Fraction) -> str:
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

        if not self.im:
            return q(self.re)
        im = "i" if self.im == 1 else "-i" if self.im == -1 else f"{q(self.im)}i"
        if not self.re:
            return im
        sign = "+" if self.im > 0 else "-"
        return f"{q(self.re)}{sign}{im.lstrip('-')}"


GR = GaussianRational
_ONE = GR(1)
_HALF = Fraction(1, 2)


def _parity(k: tuple[int, ...]) -> int:
    out = 0
    for j, x in enumerate(k):
        if x & 1:
            out |= 1 << j
    return out


def _mask(twist: Iterable[int] | int, n: int) -> int:
    if isinstance(twist, int):
        if twist < 0 or twist >> n:
            raise ValueError("twist mask out of range")
        return twist
    t = tuple(twist)
    if len(t) != n:
        raise ValueError(f"twist needs {n} entries")
    return _parity(tuple(int(v) % 2 for v in t))


def _mask_tuple(mask: int, n: int) -> tuple[int, ...]:
    return tuple((mask >> j) & 1 for j in range(n))


def _double(k: Sequence) -> tuple[int, ...]:
    out = []
    for x in k:
        f = Fraction(x) * 2
        if f.denominator != 1:
            raise ValueError(f"frequency {x} is not a half-integer")
        out.append(int(f))
    return tuple(out)


# ---------------------------------------------------------------------------
# raw form dictionaries: {(I, k): c}


def _acc(out: dict, key, c) -> None:
    v = out.get(key)
    if v is None:
        if c:
            out[key] = c
    else:
        s = v + c
        if s:
            out[key] = s
        else:
            del out[key]


def _lin(*pairs) -> dict:
    """``sum scale * dict`` for ``(scale, dict)`` pairs."""
    out: dict = {}
    for scale, d in pairs:
        if scale == 1:
            for key, c in d.items():
                _acc(out, key, c)
        else:
            for key, c in d.items():
                _acc(out, key, c * scale)
    return out


def _addk(k1: tuple[int, ...], k2: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(a + b for a, b in zip(k1, k2))


def _merge(i1: tuple[int, ...], i2: tuple[int, ...]):
    """Sign and sorted union of two index tuples (``None`` if they overlap)."""
    if not i1:
        return 1, i2
    if not i2:
        return 1, i1
    s1 = set(i1)
    if s1.intersection(i2):
        return None
    # sign of the shuffle: count pairs (a in i1, b in i2) with a > b
    inv = 0
    for a in i1:
        for b in i2:
            if a > b:
                inv += 1
    return (-1 if inv % 2 else 1), tuple(sorted(i1 + i2))


def _wedge(a: dict, b: dict) -> dict:
    out: dict = {}
    for (i1, k1), c1 in a.items():
        for (i2, k2), c2 in b.items():
            m = _merge(i1, i2)
            if m is None:
                continue
            sign, idx = m
            c = c1 * c2
            _acc(out, (idx, _addk(k1, k2)), c if sign == 1 else -c)
    return out


_I_HALF: dict[int, GaussianRational] = {}


def _ik(kd: int) -> GaussianRational:
    """``i * k`` for a doubled frequency ``kd``."""
    v = _I_HALF.get(kd)
    if v is None:
        v = GR(0, Fraction(kd, 2))
        _I_HALF[kd] = v
    return v


def _d(a: dict) -> dict:
    out: dict = {}
    for (idx, k), c in a.items():
        for j, kj in enumerate(k):
            if not kj or j in idx:
                continue
            pos = sum(1 for m in idx if m < j)
            new = tuple(sorted(idx + (j,)))
            v = c * _ik(kj)
            _acc(out, (new, k), -v if pos % 2 else v)
    return out


def _interior(x: dict, a: dict) -> dict:
    """``i_X a`` for a vector dictionary ``{(j, k): c}``."""
    out: dict = {}
    for (j, kx), cx in x.items():
        for (idx, k), c in a.items():
            if j not in idx:
                continue
            pos = idx.index(j)
            v = cx * c
            _acc(out, (idx[:pos] + idx[pos + 1:], _addk(kx, k)), -v if pos % 2 else v)
    return out


def _partial(f: dict, j: int) -> dict:
    out: dict = {}
    for (idx, k), c in f.items():
        if k[j]:
            _acc(out, (idx, k), c * _ik(k[j]))
    return out


def _vec_apply(x: dict, f: dict) -> dict:
    """``X(f)`` for a scalar dictionary ``f`` (keys with ``I = ()``)."""
    out: dict = {}
    for (j, kx), cx in x.items():
        for ((), k), c in f.items():
            if k[j]:
                _acc(out, ((), _addk(kx, k)), cx * c * _ik(k[j]))
    return out


def _vec_component(x: dict, j: int) -> dict:
    return {((), k): c for (m, k), c in x.items() if m == j}


def _lie_bracket(x: dict, y: dict, n: int) -> dict:
    out: dict = {}
    for j in range(n):
        for sign, (u, v) in ((1, (x, y)), (-1, (y, x))):
            comp = _vec_apply(u, _vec_component(v, j))
            for ((), k), c in comp.items():
                _acc(out, (j, k), c if sign == 1 else -c)
    return out


def _scalar_times_vec(f: dict, x: dict) -> dict:
    out: dict = {}
    for ((), kf), cf in f.items():
        for (j, k), c in x.items():
            _acc(out, (j, _addk(kf, k)), cf * c)
    return out


def _lie_form(x: dict, a: dict) -> dict:
    """Cartan formula ``L_X a = i_X d a + d i_X a``."""
    return _lin((1, _interior(x, _d(a))), (1, _d(_interior(x, a))))


# ---------------------------------------------------------------------------
# scalars


class FourierScalar:
    """Fourier polynomial on ``T^n`` whose frequencies have a fixed parity mask."""

    __slots__ = ("n", "parity", "terms")

    def __init__(self, n: int, parity: int | Sequence[int], terms: Mapping | None = None):
        self.n = n
        self.parity = _mask(parity, n)
        clean: dict = {}
        for key, c in (terms or {}).items():
            k = key[1] if isinstance(key, tuple) and len(key) == 2 and isinstance(key[0], tuple) else key
            k = tuple(k)
            if len(k) != n:
                raise ValueError("frequency vector has the wrong length")
            if _parity(k) != self.parity:
                raise ValueError(f"frequency {k} violates the parity mask {_mask_tuple(self.parity, n)}")
            _acc(clean, ((), k), GR.coerce(c))
        self.terms = clean

    @classmethod
    def constant(cls, n: int, c=1) -> "FourierScalar":
        return cls(n, 0, {(0,) * n: c})

    @classmethod
    def mode(cls, n: int, freq: Sequence, c=1) -> "FourierScalar":
        """``c * exp(i k.x)`` for half-integer frequencies ``freq``."""
        k = _double(freq)
        return cls(n, _parity(k), {k: c})

    @classmethod
    def _raw(cls, n: int, parity: int, terms: dict) -> "FourierScalar":
        obj = cls.__new__(cls)
        obj.n, obj.parity, obj.terms = n, parity, terms
        return obj

    def _same(self, other: "FourierScalar") -> None:
        if other.n != self.n or other.parity != self.parity:
            raise ValueError("scalars differ in dimension or parity")

    def __add__(self, other: "FourierScalar") -> "FourierScalar":
        self._same(other)
        return FourierScalar._raw(self.n, self.parity, _lin((1, self.terms), (1, other.terms)))

    def __sub__(self, other: "FourierScalar") -> "FourierScalar":
        self._same(other)
        return FourierScalar._raw(self.n, self.parity, _lin((1, self.terms), (-1, other.terms)))

    def __neg__(self) -> "FourierScalar":
        return self.scale(-1)

    def scale(self, c) -> "FourierScalar":
        return FourierScalar._raw(self.n, self.parity, _lin((GR.coerce(c), self.terms)))

    def __mul__(self, other):
        if isinstance(other, FourierScalar):
            return FourierScalar._raw(self.n, self.parity ^ other.parity, _wedge(self.terms, other.terms))
        return self.scale(other)

    def derivative(self, j: int) -> "FourierScalar":
        return FourierScalar._raw(self.n, self.parity, _partial(self.terms, j))

    def d(self) -> dict:
        return _d(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __eq__(self, other) -> bool:
        if isinstance(other, FourierScalar):
            return self.n == other.n and self.terms == other.terms and (
                self.parity == other.parity or not self.terms)
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        return f"FourierScalar({format_terms(self.terms) or '0'})"


# ---------------------------------------------------------------------------
# formatting


def _fmt_freq(k: tuple[int, ...]) -> str:
    def one(x: int) -> str:
        return str(x // 2) if x % 2 == 0 else f"{x}/2"
    return "exp(" + ",".join(one(x) for x in k) + ")"


def format_terms(terms: Mapping) -> str:
    """Canonical text for a form dictionary, e.g. ``(1+i)*exp(1/2,0)*dx1^dx2``."""
    parts = []
    for (idx, k), c in sorted(terms.items(), key=lambda kv: (len(kv[0][0]), kv[0][0], kv[0][1])):
        coeff = str(c)
        pieces = []
        if any(k):
            pieces.append(_fmt_freq(k))
        if idx:
            pieces.append("^".join(f"dx{j + 1}" for j in idx))
        if not pieces:
            parts.append(coeff if not ("+" in coeff[1:] or "-" in coeff[1:]) else f"({coeff})")
            continue
        if coeff == "1":
            lead = ""
        elif coeff == "-1":
            lead = "-"
        elif "+" in coeff[1:] or "-" in coeff[1:]:
            lead = f"({coeff})*"
        else:
            lead = f"{coeff}*"
        parts.append(lead + "*".join(pieces))
    out = " + ".join(parts)
    return out.replace("+ -", "- ")


# ---------------------------------------------------------------------------
# twisted forms


class TwistedPolyForm:
    """Section of ``S^{i,A}_L = sum_j A (x) L^j (x) Lambda^{i+2j} T*`` on ``T^n``.

    ``terms`` maps ``(I, k)`` to coefficients; the piece of form degree ``d``
    has ``j = (d - i)/2`` and its frequencies must have parity ``A + j eps``.
    """

    __slots__ = ("n", "i", "a_twist", "l_twist", "terms")

    def __init__(self, n: int, i: int, a_twist=0, l_twist=0, terms: Mapping | None = None,
                 check: bool = True):
        self.n, self.i = n, i
        self.a_twist = _mask(a_twist, n)
        self.l_twist = _mask(l_twist, n)
        if check:
            clean: dict = {}
            for (idx, k), c in (terms or {}).items():
                idx, k = tuple(idx), tuple(k)
                if len(set(idx)) != len(idx):
                    continue
                if any(not 0 <= m < n for m in idx) or len(k) != n:
                    raise ValueError("form term out of range")
                order = sorted(range(len(idx)), key=lambda p: idx[p])
                sign = _perm_sign(order)
                _acc(clean, (tuple(sorted(idx)), k), GR.coerce(c) * sign)
            self.terms = clean
            self._validate()
        else:
            self.terms = dict(terms or {})

    def _validate(self) -> None:
        for (idx, k) in self.terms:
            want = self.piece_parity(len(idx))
            if want is None:
                raise ValueError(f"form degree {len(idx)} has the wrong parity for S^{self.i}")
            if _parity(k) != want:
                raise ValueError(
                    f"degree-{len(idx)} term with frequency {k} violates parity "
                    f"{_mask_tuple(want, self.n)}")

    def piece_parity(self, degree: int) -> int | None:
        if (degree - self.i) % 2:
            return None
        j = (degree - self.i) // 2
        return self.a_twist ^ (self.l_twist if j % 2 else 0)

    @classmethod
    def _raw(cls, n: int, i: int, a: int, l: int, terms: dict) -> "TwistedPolyForm":
        obj = cls.__new__(cls)
        obj.n, obj.i, obj.a_twist, obj.l_twist, obj.terms = n, i, a, l, terms
        return obj

    def _like(self, terms: dict, i: int | None = None, a: int | None = None) -> "TwistedPolyForm":
        return TwistedPolyForm._raw(self.n, self.i if i is None else i,
                                    self.a_twist if a is None else a, self.l_twist, terms)

    @classmethod
    def unit(cls, n: int, l_twist=0) -> "TwistedPolyForm":
        return cls(n, 0, 0, l_twist, {((), (0,) * n): 1})

    @classmethod
    def zero(cls, n: int, i: int, a_twist=0, l_twist=0) -> "TwistedPolyForm":
        return cls(n, i, a_twist, l_twist, {})

    def _same(self, other: "TwistedPolyForm") -> None:
        if (other.n, other.i % 4, other.a_twist, other.l_twist) != (self.n, self.i % 4, self.a_twist,
                                                                     self.l_twist):
            raise ValueError("forms live in different spaces S^{i,A}_L")

    def __add__(self, other: "TwistedPolyForm") -> "TwistedPolyForm":
        self._same(other)
        return self._like(_lin((1, self.terms), (1, other.terms)))

    def __sub__(self, other: "TwistedPolyForm") -> "TwistedPolyForm":
        self._same(other)
        return self._like(_lin((1, self.terms), (-1, other.terms)))

    def __neg__(self) -> "TwistedPolyForm":
        return self.scale(-1)

    def scale(self, c) -> "TwistedPolyForm":
        return self._like(_lin((GR.coerce(c), self.terms)))

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, TwistedPolyForm):
            return NotImplemented
        same_space = (self.n, self.i % 4, self.a_twist, self.l_twist) == (
            other.n, other.i % 4, other.a_twist, other.l_twist)
        return self.terms == other.terms and (same_space or not self.terms)

    __hash__ = None

    def piece(self, degree: int) -> dict:
        return {key: c for key, c in self.terms.items() if len(key[0]) == degree}

    def __repr__(self) -> str:
        return (f"TwistedPolyForm(S^{self.i}, A={_mask_tuple(self.a_twist, self.n)}, "
                f"L={_mask_tuple(self.l_twist, self.n)}: {format_terms(self.terms) or '0'})")

    def __str__(self) -> str:
        return format_terms(self.terms) or "0"


def _perm_sign(order: Sequence[int]) -> int:
    sign = 1
    seen = list(order)
    for a in range(len(seen)):
        for b in range(a + 1, len(seen)):
            if seen[a] > seen[b]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class FluxForm:
    """Closed ``L``-valued 3-form ``H`` on ``T^n`` (frequencies of parity ``eps``)."""

    n: int
    l_twist: int
    terms: dict

    def __init__(self, n: int, l_twist=0, terms: Mapping | None = None):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "l_twist", _mask(l_twist, n))
        form = TwistedPolyForm(n, 3, l_twist, 0, terms or {})
        if any(len(idx) != 3 for idx, _ in form.terms):
            raise ValueError("a flux must be a pure 3-form")
        if _d(form.terms):
            raise ValueError("flux is not closed: d H != 0")
        object.__setattr__(self, "terms", form.terms)

    @classmethod
    def zero(cls, n: int, l_twist=0) -> "FluxForm":
        return cls(n, l_twist, {})

    def is_constant(self) -> bool:
        return all(not any(k) for _, k in self.terms)

    def plus(self, extra: dict) -> "FluxForm":
        return FluxForm(self.n, self.l_twist, _lin((1, self.terms), (1, extra)))

    def __hash__(self) -> int:
        return hash((self.n, self.l_twist, tuple(sorted((k, str(c)) for k, c in self.terms.items()))))

    def __str__(self) -> str:
        return format_terms(self.terms) or "0"


def _flux_for(w: TwistedPolyForm, h: FluxForm | None) -> dict:
    if h is None:
        return {}
    if h.n != w.n:
        raise ValueError("flux and form live on different tori")
    if h.terms and h.l_twist != w.l_twist:
        raise ValueError("flux parity does not match the L-twist of the form")
    return h.terms


def d_flat(w: TwistedPolyForm) -> TwistedPolyForm:
    """Exterior derivative with the flat connection; ``S^i -> S^{i+1}``."""
    return w._like(_d(w.terms), i=w.i + 1)


def d_twisted(w: TwistedPolyForm, h: FluxForm | None) -> TwistedPolyForm:
    """``d_{H} w = d w + H ^ w``; ``S^i -> S^{i+1}``."""
    hterms = _flux_for(w, h)
    return w._like(_lin((1, _d(w.terms)), (1, _wedge(hterms, w.terms))), i=w.i + 1)


def l_multiply(s: FourierScalar, w: TwistedPolyForm) -> TwistedPolyForm:
    """Multiplication by a section of ``L``: ``S^i -> S^{i-2}``."""
    if s.terms and s.parity != w.l_twist:
        raise ValueError("scalar is not a section of L")
    return w._like(_wedge(s.terms, w.terms), i=w.i - 2)


def function_multiply(f: FourierScalar, w: TwistedPolyForm) -> TwistedPolyForm:
    if f.terms and f.parity:
        raise ValueError("expected an untwisted function")
    return w._like(_wedge(f.terms, w.terms))


# ---------------------------------------------------------------------------
# generalized sections


class GenSection:
    """Section ``X + xi`` of ``TM + T*M (x) L``: vector part untwisted, covector part of parity ``eps``."""

    __slots__ = ("n", "l_twist", "vec", "cov")

    def __init__(self, n: int, l_twist=0, vec: Mapping | None = None, cov: Mapping | None = None,
                 check: bool = True):
        self.n = n
        self.l_twist = _mask(l_twist, n)
        if not check:
            self.vec, self.cov = dict(vec or {}), dict(cov or {})
            return
        v: dict = {}
        for (j, k), c in (vec or {}).items():
            k = tuple(k)
            if not 0 <= j < n or len(k) != n:
                raise ValueError("vector term out of range")
            if _parity(k):
                raise ValueError("vector fields must be untwisted")
            _acc(v, (j, k), GR.coerce(c))
        cv: dict = {}
        for key, c in (cov or {}).items():
            j, k = key
            idx = (j,) if isinstance(j, int) else tuple(j)
            k = tuple(k)
            if len(idx) != 1 or not 0 <= idx[0] < n or len(k) != n:
                raise ValueError("covector term out of range")
            if _parity(k) != self.l_twist:
                raise ValueError("covector part must have the parity of L")
            _acc(cv, (idx, k), GR.coerce(c))
        self.vec, self.cov = v, cv

    @classmethod
    def _raw(cls, n: int, l: int, vec: dict, cov: dict) -> "GenSection":
        obj = cls.__new__(cls)
        obj.n, obj.l_twist, obj.vec, obj.cov = n, l, vec, cov
        return obj

    @classmethod
    def coordinate_vector(cls, n: int, j: int, l_twist=0) -> "GenSection":
        return cls(n, l_twist, {(j, (0,) * n): 1})

    @classmethod
    def coordinate_covector(cls, n: int, j: int) -> "GenSection":
        return cls(n, 0, cov={(j, (0,) * n): 1})

    @classmethod
    def zero(cls, n: int, l_twist=0) -> "GenSection":
        return cls(n, l_twist)

    def _same(self, other: "GenSection") -> None:
        if other.n != self.n or other.l_twist != self.l_twist:
            raise ValueError("sections live on different algebroids")

    def __add__(self, other: "GenSection") -> "GenSection":
        self._same(other)
        return GenSection._raw(self.n, self.l_twist, _lin((1, self.vec), (1, other.vec)),
                               _lin((1, self.cov), (1, other.cov)))

    def __sub__(self, other: "GenSection") -> "GenSection":
        self._same(other)
        return GenSection._raw(self.n, self.l_twist, _lin((1, self.vec), (-1, other.vec)),
                               _lin((1, self.cov), (-1, other.cov)))

    def __neg__(self) -> "GenSection":
        return self.scale(-1)

    def scale(self, c) -> "GenSection":
        c = GR.coerce(c)
        return GenSection._raw(self.n, self.l_twist, _lin((c, self.vec)), _lin((c, self.cov)))

    def times(self, f: FourierScalar) -> "GenSection":
        """Multiplication by an untwisted function."""
        if f.terms and f.parity:
            raise ValueError("expected an untwisted function")
        return GenSection._raw(self.n, self.l_twist, _scalar_times_vec(f.terms, self.vec),
                               _wedge(f.terms, self.cov))

    def anchor(self, f: FourierScalar) -> FourierScalar:
        """``X(f)``."""
        return FourierScalar._raw(self.n, f.parity, _vec_apply(self.vec, f.terms))

    def is_zero(self) -> bool:
        return not self.vec and not self.cov

    def __eq__(self, other) -> bool:
        if not isinstance(other, GenSection):
            return NotImplemented
        return self.n == other.n and self.vec == other.vec and self.cov == other.cov

    __hash__ = None

    def __repr__(self) -> str:
        vec = " + ".join(f"({format_terms({((), k): c})})*d/dx{j + 1}"
                         for (j, k), c in sorted(self.vec.items())) or "0"
        return f"GenSection(X={vec}; xi={format_terms(self.cov) or '0'})"


def nabla(s: FourierScalar, l_twist: int | None = None) -> GenSection:
    """``l_1(s) = (0, d s)`` for a section ``s`` of ``L``."""
    l = s.parity if l_twist is None else l_twist
    if s.terms and s.parity != l:
        raise ValueError("scalar is not a section of L")
    return GenSection._raw(s.n, l, {}, _d(s.terms))


def pairing(a: GenSection, b: GenSection) -> FourierScalar:
    """``<X + xi, Y + eta> = i_X eta + i_Y xi`` (a section of ``L``)."""
    a._same(b)
    terms = _lin((1, _interior(a.vec, b.cov)), (1, _interior(b.vec, a.cov)))
    return FourierScalar._raw(a.n, a.l_twist, terms)


FLUX_SIGN = -1
"""Sign of the ``i_Y i_X H`` term of the bracket; ``-1`` makes the bracket derived from ``d + H^``."""


def dorfman(a: GenSection, b: GenSection, h: FluxForm | None = None, flux_sign: int = FLUX_SIGN) -> GenSection:
    """``[X+xi, Y+eta]_H = [X,Y] + L_X eta - i_Y d xi - i_Y i_X H``.

    The flux enters as ``i_X i_Y H = -i_Y i_X H``; this is the sign for which
    ``gamma_[a,b] = [[d + H^, gamma_a], gamma_b]`` holds.
    """
    a._same(b)
    n = a.n
    vec = _lie_bracket(a.vec, b.vec, n)
    pieces = [(1, _lie_form(a.vec, b.cov)), (-1, _interior(b.vec, _d(a.cov)))]
    if h is not None and h.terms:
        if h.n != n or h.l_twist != a.l_twist:
            raise ValueError("flux does not match the algebroid")
        pieces.append((flux_sign, _interior(b.vec, _interior(a.vec, h.terms))))
    return GenSection._raw(n, a.l_twist, vec, _lin(*pieces))


def courant(a: GenSection, b: GenSection, h: FluxForm | None = None) -> GenSection:
    """Skew bracket ``[a,b]_C = ([a,b] - [b,a]) / 2``."""
    return (dorfman(a, b, h) - dorfman(b, a, h)).scale(_HALF)


def clifford(a: GenSection, w: TwistedPolyForm) -> TwistedPolyForm:
    """``gamma_{X+xi} w = i_X w + xi ^ w``; ``S^i -> S^{i-1}``."""
    if a.n != w.n or a.l_twist != w.l_twist:
        raise ValueError("section and form use different L-twists")
    return w._like(_lin((1, _interior(a.vec, w.terms)), (1, _wedge(a.cov, w.terms))), i=w.i - 1)


def lie_derivative(a: GenSection, w: TwistedPolyForm, h: FluxForm | None = None) -> TwistedPolyForm:
    """``L_a = gamma_a d_H + d_H gamma_a``; preserves ``S^i``."""
    return clifford(a, d_twisted(w, h)) + d_twisted(clifford(a, w), h)


def derived_bracket_check(a: GenSection, b: GenSection, h: FluxForm | None, w: TwistedPolyForm,
                          bracket=None) -> bool:
    """Whether ``gamma_{[a,b]} w = [[d_H, gamma_a], gamma_b] w`` (``bracket`` defaults to :func:`dorfman`)."""
    bracket = bracket or dorfman
    lhs = clifford(bracket(a, b, h), w)
    dg = lambda u: d_twisted(clifford(a, u), h) + clifford(a, d_twisted(u, h))  # noqa: E731
    rhs = dg(clifford(b, w)) - clifford(b, dg(w))
    return lhs == rhs


def _exp_wedge(bterms: dict, w: dict) -> dict:
    out = dict(w)
    term = w
    k = 1
    while True:
        term = _lin((Fraction(1, k), _wedge(bterms, term)))
        if not term:
            break
        out = _lin((1, out), (1, term))
        k += 1
    return out


def b_transform(bform: Mapping | TwistedPolyForm, target, sign: int = 1):
    """``e^{sign B}`` acting on a form (``e^B ^ w``) or a section (``X + xi + i_X B``).

    ``bform`` is an ``L``-valued 2-form, given as a term dictionary or a
    :class:`TwistedPolyForm` whose terms are all of degree 2.
    """
    bterms = bform.terms if isinstance(bform, TwistedPolyForm) else dict(bform)
    if any(len(idx) != 2 for idx, _ in bterms):
        raise ValueError("B must be a 2-form")
    bterms = _lin((sign, bterms))
    if isinstance(target, TwistedPolyForm):
        if bterms and any(_parity(k) != target.l_twist for _, k in bterms):
            raise ValueError("B must have the parity of L")
        return target._like(_exp_wedge(bterms, target.terms))
    if isinstance(target, GenSection):
        if bterms and any(_parity(k) != target.l_twist for _, k in bterms):
            raise ValueError("B must have the parity of L")
        return GenSection._raw(target.n, target.l_twist, dict(target.vec),
                               _lin((1, target.cov), (1, _interior(target.vec, bterms))))
    raise TypeError("b_transform acts on TwistedPolyForm or GenSection")


def lie2_brackets(a: GenSection, b: GenSection, c: GenSection, s: FourierScalar,
                  h: FluxForm | None = None) -> dict:
    """Brackets of the Lie 2-algebra: ``l1(s)``, ``l2(a,b)``, ``l2(a,s)``, ``l3(a,b,c)``."""
    ab = courant(a, b, h)
    bc = courant(b, c, h)
    ca = courant(c, a, h)
    l3 = (pairing(ab, c) + pairing(bc, a) + pairing(ca, b)).scale(Fraction(1, 6))
    return {
        "l1": nabla(s, a.l_twist),
        "l2_ab": ab,
        "l2_as": a.anchor(s).scale(_HALF),
        "l3": l3,
    }


def jacobiator(a: GenSection, b: GenSection, c: GenSection, h: FluxForm | None = None) -> GenSection:
    """``[[a,b]_C,c]_C + [[b,c]_C,a]_C + [[c,a]_C,b]_C``, which equals ``nabla l3(a,b,c)``.

    The nesting matters: ``[a,[b,c]_C]_C + cyclic`` is the negative of this.
    """
    return (courant(courant(a, b, h), c, h) + courant(courant(b, c, h), a, h)
            + courant(courant(c, a, h), b, h))


# ---------------------------------------------------------------------------
# Dirac structures


def _scalar_det(rows: list[list[dict]]) -> dict:
    out: dict = {}
    for perm in itertools.permutations(range(len(rows))):
        term = _lin((_perm_sign(perm), rows[0][perm[0]]))
        for r in range(1, len(rows)):
            if not term:
                break
            term = _wedge(term, rows[r][perm[r]])
        out = _lin((1, out), (1, term))
    return out


def dirac_check(generators: Sequence[GenSection], h: FluxForm | None = None) -> bool:
    """Whether the span of ``generators`` is a Dirac structure (closed under the bracket).

    Raises ``ValueError`` if the generators are not pairwise isotropic or do not
    span a rank-``n`` subbundle at every point (certified by a nowhere-vanishing
    maximal minor).
    """
    if not generators:
        raise ValueError("no generators")
    n = generators[0].n
    if len(generators) != n:
        raise ValueError(f"a maximal isotropic subbundle on T^{n} needs {n} generators")
    for g in generators[1:]:
        generators[0]._same(g)
    for a, b in itertools.combinations_with_replacement(generators, 2):
        if not pairing(a, b).is_zero():
            raise ValueError("generators are not isotropic")
    # coefficient matrix: 2n components (n vector, n covector) per generator
    cols = []
    for g in generators:
        comps = [_vec_component(g.vec, j) for j in range(n)]
        comps += [{((), k): c for (idx, k), c in g.cov.items() if idx == (j,)} for j in range(n)]
        cols.append(comps)
    certified = False
    for rows_sel in itertools.combinations(range(2 * n), n):
        minor = [[cols[g][r] for g in range(n)] for r in rows_sel]
        det = _scalar_det(minor)
        if len(det) == 1:
            certified = True
            break
    if not certified:
        raise ValueError("generators do not certifiably span a maximal isotropic subbundle")
    for a, b, c in itertools.product(generators, repeat=3):
        if not pairing(dorfman(a, b, h), c).is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# invariant twisted cohomology


def _basis(n: int, degree: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(n), degree))


def _complex_block(n: int, i: int, a: int, l: int, k: tuple[int, ...]) -> list[tuple[tuple[int, ...], tuple]]:
    """Basis ``(I, k)`` of ``S^{i,A}_L`` at frequency ``k``."""
    out = []
    for degree in range(n + 1):
        if (degree - i) % 2:
            continue
        j = (degree - i) // 2
        if _parity(k) != (a ^ (l if j % 2 else 0)):
            continue
        out.extend((idx, k) for idx in _basis(n, degree))
    return out


def _operator_rank(src: list, dst: list, op) -> int:
    if not src or not dst:
        return 0
    index = {key: r for r, key in enumerate(dst)}
    rows = [[GR(0)] * len(src) for _ in dst]
    for col, key in enumerate(src):
        for out_key, c in op({key: _ONE}).items():
            rows[index[out_key]][col] = c
    return field_rank(rows)


def _cohomology_at(n: int, i: int, a: int, l: int, hterms: dict, k: tuple[int, ...]) -> int:
    def op(terms: dict) -> dict:
        return _lin((1, _d(terms)), (1, _wedge(hterms, terms)))

    prev = _complex_block(n, i - 1, a, l, k)
    cur = _complex_block(n, i, a, l, k)
    nxt = _complex_block(n, i + 1, a, l, k)
    return len(cur) - _operator_rank(cur, nxt, op) - _operator_rank(prev, cur, op)


def _check_constant_flux(n: int, l: int, h: FluxForm | None) -> dict:
    if h is None:
        return {}
    if h.n != n:
        raise ValueError("flux lives on a different torus")
    if not h.is_constant():
        raise ValueError("invariant cohomology needs a constant-coefficient flux")
    if h.terms and h.l_twist != l:
        raise ValueError("flux parity does not match the L-twist")
    return h.terms


def invariant_twisted_cohomology(n: int, a_twist, l_twist, h: FluxForm | None, i: int) -> int:
    """Dimension of degree-``i`` cohomology of translation-invariant sections of ``(S^{i,A}_L, d_H)``.

    Only frequency zero contributes, so pieces whose parity ``A + j eps`` is
    nonzero drop out entirely.
    """
    a, l = _mask(a_twist, n), _mask(l_twist, n)
    hterms = _check_constant_flux(n, l, h)
    return _cohomology_at(n, i, a, l, hterms, (0,) * n)


def ball_twisted_cohomology(n: int, a_twist, l_twist, h: FluxForm | None, i: int, radius: int) -> int:
    """Cohomology dimension of the full complex truncated to frequencies with ``|k_j| <= radius``.

    With a constant flux the differential preserves frequencies, so the
    truncation is a subcomplex and the answer is a sum over frequencies.
    """
    a, l = _mask(a_twist, n), _mask(l_twist, n)
    hterms = _check_constant_flux(n, l, h)
    total = 0
    values = range(-2 * radius, 2 * radius + 1)
    for k in itertools.product(values, repeat=n):
        total += _cohomology_at(n, i, a, l, hterms, k)
    return total


# ---------------------------------------------------------------------------
# random generators


_COEFFS = (GR(1), GR(-1), GR(2), GR(Fraction(1, 2)), GR(0, 1), GR(0, -1), GR(1, 1), GR(-3, 2))


class RandomSource:
    """Seeded generator of scalars, sections, forms and fluxes (frequencies bounded by 2)."""

    def __init__(self, seed: int = 0, max_terms: int = 2):
        self.rng = random.Random(seed)
        self.max_terms = max_terms

    def frequency(self, n: int, parity: int) -> tuple[int, ...]:
        out = []
        for j in range(n):
            if (parity >> j) & 1:
                out.append(self.rng.choice((-3, -1, 1, 3)))
            else:
                out.append(2 * self.rng.randint(-2, 2))
        return tuple(out)

    def coefficient(self) -> GaussianRational:
        return self.rng.choice(_COEFFS)

    def scalar_terms(self, n: int, parity: int, min_terms: int = 0) -> dict:
        out: dict = {}
        for _ in range(self.rng.randint(min_terms, self.max_terms)):
            _acc(out, ((), self.frequency(n, parity)), self.coefficient())
        return out

    def scalar(self, n: int, parity: int = 0) -> FourierScalar:
        return FourierScalar._raw(n, parity, self.scalar_terms(n, parity, 1))

    def section(self, n: int, l_twist: int = 0, density: float = 0.5) -> GenSection:
        vec: dict = {}
        cov: dict = {}
        for j in range(n):
            if self.rng.random() < density:
                for (_, k), c in self.scalar_terms(n, 0, 1).items():
                    _acc(vec, (j, k), c)
            if self.rng.random() < density:
                for (_, k), c in self.scalar_terms(n, l_twist, 1).items():
                    _acc(cov, ((j,), k), c)
        return GenSection._raw(n, l_twist, vec, cov)

    def form(self, n: int, i: int, a_twist: int = 0, l_twist: int = 0, density: float = 0.4) -> TwistedPolyForm:
        terms: dict = {}
        for degree in range(n + 1):
            if (degree - i) % 2:
                continue
            j = (degree - i) // 2
            parity = a_twist ^ (l_twist if j % 2 else 0)
            for idx in _basis(n, degree):
                if self.rng.random() < density:
                    for (_, k), c in self.scalar_terms(n, parity, 1).items():
                        _acc(terms, (idx, k), c)
        return TwistedPolyForm._raw(n, i, a_twist, l_twist, terms)

    def two_form(self, n: int, l_twist: int = 0, density: float = 0.4) -> dict:
        terms: dict = {}
        for idx in _basis(n, 2):
            if self.rng.random() < density:
                for (_, k), c in self.scalar_terms(n, l_twist, 1).items():
                    _acc(terms, (idx, k), c)
        return terms

    def flux(self, n: int, l_twist: int = 0) -> FluxForm:
        if n < 3:
            return FluxForm.zero(n, l_twist)
        if n > 3:
            # closed by construction
            return FluxForm(n, l_twist, _d(self.two_form(n, l_twist)))
        terms = {((0, 1, 2), k): c for (_, k), c in self.scalar_terms(n, l_twist, 1).items()}
        return FluxForm(n, l_twist, terms)


# ---------------------------------------------------------------------------
# identity suite


AXIOMS = ("L1", "CC1", "CC2", "id1", "id2", "id3", "db", "anticommutator", "jacobiator",
          "b_conjugation", "b_shift", "dd")


@dataclass(frozen=True)
class SuiteInstance:
    n: int
    eps: int
    has_flux: bool
    failures: tuple[str, ...]


def _instance_checks(rs: RandomSource, n: int, eps: int, h: FluxForm, bracket) -> list[str]:
    a, b, c = rs.section(n, eps), rs.section(n, eps), rs.section(n, eps)
    i = rs.rng.randint(0, 3)
    w = rs.form(n, i, rs.rng.randrange(1 << n), eps)
    bform = rs.two_form(n, eps)
    hb = h.plus(_d(bform))

    def br(x, y, flux=h):
        return bracket(x, y, flux)

    def cour(x, y):
        return (br(x, y) - br(y, x)).scale(_HALF)

    def lie(x, u):
        return clifford(x, d_twisted(u, h)) + d_twisted(clifford(x, u), h)

    ab, bc, ca = cour(a, b), cour(b, c), cour(c, a)
    l3 = (pairing(ab, c) + pairing(bc, a) + pairing(ca, b)).scale(Fraction(1, 6))
    checks = {
        "L1": lambda: br(a, br(b, c)) == br(br(a, b), c) + br(b, br(a, c)),
        "CC1": lambda: a.anchor(pairing(b, c)) == pairing(br(a, b), c) + pairing(b, br(a, c)),
        "CC2": lambda: br(a, b) + br(b, a) == nabla(pairing(a, b), eps),
        "id1": lambda: lie(a, d_twisted(w, h)) == d_twisted(lie(a, w), h),
        "id2": lambda: lie(a, clifford(b, w)) - clifford(b, lie(a, w)) == clifford(br(a, b), w),
        "id3": lambda: lie(a, lie(b, w)) - lie(b, lie(a, w)) == lie(br(a, b), w),
        "db": lambda: derived_bracket_check(a, b, h, w, bracket=bracket),
        "anticommutator": lambda: clifford(a, clifford(b, w)) + clifford(b, clifford(a, w))
        == l_multiply(pairing(a, b), w),
        "jacobiator": lambda: cour(ab, c) + cour(bc, a) + cour(ca, b) == nabla(l3, eps),
        "b_conjugation": lambda: b_transform(bform, d_twisted(b_transform(bform, w), h), -1)
        == d_twisted(w, hb),
        "b_shift": lambda: b_transform(bform, br(b_transform(bform, a, -1), b_transform(bform, b, -1)))
        == br(a, b, hb),
        "dd": lambda: d_twisted(d_twisted(w, h), h).is_zero(),
    }
    return [name for name in AXIOMS if not checks[name]()]


def _transposed(a: GenSection, b: GenSection, h: FluxForm | None = None) -> GenSection:
    return dorfman(b, a, h)


def axiom_suite(seed: int = 0, count: int = 200, corrupt: bool = False) -> list[SuiteInstance]:
    """Run every algebroid identity on ``count`` seeded instances over ``T^2`` and ``T^3``.

    Instances cycle through both tori, all ``L``-twists and, on ``T^3``, zero
    and random nonconstant fluxes.  ``corrupt`` swaps the bracket arguments,
    a deliberately wrong bracket used as a falsification witness.
    """
    rs = RandomSource(seed)
    bracket = _transposed if corrupt else dorfman
    configs = [(n, eps, flux) for n in (2, 3) for eps in range(1 << n)
               for flux in ((False, True) if n == 3 else (False,))]
    out = []
    for j in range(count):
        n, eps, flux = configs[j % len(configs)]
        h = rs.flux(n, eps) if flux else FluxForm.zero(n, eps)
        out.append(SuiteInstance(n, eps, flux, tuple(_instance_checks(rs, n, eps, h, bracket))))
    return out
