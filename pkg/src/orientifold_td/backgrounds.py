"""T-duality backgrounds, the T-dual constructor and twisted-spin obstructions."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .bundles import CircleBundle, GradedTotalClass
from .cellular import (
    TwistClass,
    TwistedCochain,
    cohomology_presentation,
    cup_z2,
    same_class,
    twisted_cup,
    z2_is_cocycle,
    z2_same_class,
)
from .exact_linalg import in_lattice

__all__ = [
    "Background",
    "DualityReport",
    "SpinObstructions",
    "t_dual",
    "is_t_dual_pair",
    "canonical_invariants",
    "spin_obstructions",
    "same_z2_class",
]


@dataclass(frozen=True)
class Background:
    """Circle bundle with orientifold class ``eps``, integer ``t``, grading ``alpha`` and flux ``h``.

    The flux is stored in graded form: ``h_base`` in ``H^3(M; Z_eps)`` and
    ``h_fib = pi_* h`` in ``H^2(M; Z_{xi+eps})``.
    """

    bundle: CircleBundle
    eps: TwistClass
    t: int
    alpha: TwistClass
    flux: GradedTotalClass
    name: str = ""

    def __post_init__(self) -> None:
        k = self.bundle.base
        if self.eps.complex is not k or self.alpha.complex is not k:
            raise ValueError("eps and alpha must live on the base")
        if self.flux.bundle != self.bundle or self.flux.degree != 3 or self.flux.twist != self.eps:
            raise ValueError("flux must be a degree-3 class of this bundle twisted by eps")

    @classmethod
    def build(cls, bundle: CircleBundle, eps: TwistClass | None = None, t: int = 0,
              alpha: TwistClass | None = None, h_base: TwistedCochain | None = None,
              h_fib: TwistedCochain | None = None, name: str = "") -> "Background":
        k = bundle.base
        eps = eps or TwistClass.zero(k)
        alpha = alpha or TwistClass.zero(k)
        flux = GradedTotalClass.build(bundle, eps, 3, h_base, h_fib)
        return cls(bundle, eps, t, alpha, flux, name)

    @property
    def base(self):
        return self.bundle.base

    @property
    def xi(self) -> TwistClass:
        return self.bundle.xi

    @property
    def c(self) -> TwistedCochain:
        return self.bundle.chern

    @property
    def h_base(self) -> TwistedCochain:
        return self.flux.base_part

    @property
    def h_fib(self) -> TwistedCochain:
        return self.flux.fiber_part


def t_dual(bg: Background) -> Background:
    """The T-dual background.

    ``xi^ = xi + eps``, ``c^ = pi_* h``, ``eps^ = eps``, ``alpha^ = alpha + xi``,
    ``t^ = t - 1``; the dual flux keeps the base part and has ``pi^_* h^ = c``.
    The sign of ``c^`` is normalized, and the dual fibre part carries the same sign
    so that applying the construction twice returns ``h`` exactly.
    """
    k = bg.base
    xi_hat = bg.xi + bg.eps
    h_fib = bg.h_fib
    dual_bundle = CircleBundle(k, xi_hat, h_fib)
    sign = 1 if dual_bundle.chern.values == h_fib.values else -1
    c_hat_fib = bg.c.scale(sign)
    dual_flux = GradedTotalClass(dual_bundle, bg.eps, 3, bg.h_base, c_hat_fib)
    return Background(dual_bundle, bg.eps, bg.t - 1, bg.alpha + bg.xi, dual_flux,
                      name=f"{bg.name}^" if bg.name else "")


def same_z2_class(a: TwistClass, b: TwistClass) -> bool:
    """Equality of two twists in ``H^1(M; Z/2)``."""
    return z2_same_class(a.as_cochain(), b.as_cochain())


def _same_up_to_sign(x: TwistedCochain, y: TwistedCochain) -> bool:
    return same_class(x, y) or same_class(x, -y)


def _flux_base_equivalent(a: Background, b: Background) -> bool:
    """``h_base(a) - h_base(b)`` lies in ``c cup H^1(Z_{xi^}) + c^ cup H^1(Z_xi)`` in ``H^3(M; Z_eps)``."""
    k = a.base
    if k.dim < 3:
        return True
    target = cohomology_presentation(k, a.eps, 3)
    diff = a.h_base - b.h_base
    coords = target.coordinates(list(diff.values))
    columns = []
    for c, twist in ((a.c, a.eps + a.xi), (b.c, b.eps + b.xi)):
        src = cohomology_presentation(k, twist, 1)
        for j in range(src.ngens):
            e = TwistedCochain(k, 1, tuple(src.representative(j)), twist)
            columns.append(target.coordinates(list(twisted_cup(c, e).values)))
    for i, o in enumerate(target.orders):
        if o:
            columns.append([o if r == i else 0 for r in range(target.ngens)])
    return in_lattice(columns, coords)


@dataclass(frozen=True)
class DualityReport:
    t1: bool
    t2: bool
    t3: bool
    t4: bool
    t5: bool

    @property
    def passed(self) -> bool:
        return all(self.as_tuple())

    def as_tuple(self) -> tuple[bool, ...]:
        return (self.t1, self.t2, self.t3, self.t4, self.t5)

    def lines(self) -> list[str]:
        labels = ("T1 eps^ = eps", "T2 xi^ = xi + eps", "T3 alpha^ = alpha + xi",
                  "T4 c^ = pi_* h, c = pi^_* h^", "T5 base flux agrees")
        out = [f"{label}: {'pass' if ok else 'FAIL'}" for label, ok in zip(labels, self.as_tuple())]
        out.append(f"verdict: {'T-dual' if self.passed else 'not T-dual'}")
        return out


def is_t_dual_pair(a: Background, b: Background) -> DualityReport:
    """Check the five T-duality conditions between two backgrounds over the same base."""
    if a.base is not b.base:
        raise ValueError("backgrounds live over different base complexes")
    t1 = same_z2_class(a.eps, b.eps)
    t2 = same_z2_class(b.xi, a.xi + a.eps)
    t3 = same_z2_class(b.alpha, a.alpha + a.xi)
    t4 = False
    if t1 and t2:
        t4 = (b.c.twist == a.h_fib.twist and a.c.twist == b.h_fib.twist
              and _same_up_to_sign(b.c, a.h_fib) and _same_up_to_sign(a.c, b.h_fib))
    t5 = t1 and t2 and _flux_base_equivalent(a, b)
    return DualityReport(t1, t2, t3, t4, t5)


def canonical_invariants(bg: Background) -> tuple[int, TwistClass]:
    """``(i, a) = (t mod 2, alpha + t(t-1)/2 eps)``; constant on ``(t, alpha) ~ (t-2, alpha+eps)``."""
    i = bg.t % 2
    a = bg.alpha + bg.eps if (bg.t * (bg.t - 1) // 2) % 2 else bg.alpha
    return i, a


@dataclass(frozen=True)
class SpinObstructions:
    o1: TwistedCochain
    o2: TwistedCochain

    def same_as(self, other: "SpinObstructions") -> bool:
        return z2_same_class(self.o1, other.o1) and z2_same_class(self.o2, other.o2)


def _z2(x: TwistClass | TwistedCochain) -> TwistedCochain:
    return x.as_cochain() if isinstance(x, TwistClass) else x.mod2()


def _z2_sum(*terms: TwistedCochain) -> TwistedCochain:
    first = terms[0]
    vals = [0] * len(first.values)
    for t in terms:
        vals = [(a + b) % 2 for a, b in zip(vals, t.values)]
    return TwistedCochain(first.complex, first.degree, tuple(vals), first.twist, "Z/2")


def spin_obstructions(bg: Background, w1_tm: TwistClass | TwistedCochain,
                      w2_tm: TwistedCochain) -> SpinObstructions:
    """``O1 = w1(TM) + xi + t eps`` and ``O2 = w2(TM) + w1(TM) xi + t(t+1)/2 eps^2 + alpha eps``."""
    k = bg.base
    w1, w2 = _z2(w1_tm), w2_tm.mod2()
    if w1.complex is not k or w2.complex is not k or w1.degree != 1 or w2.degree != 2:
        raise ValueError("w1(TM) and w2(TM) must be degree 1 and 2 classes on the base")
    for w in (w1, w2):
        if not z2_is_cocycle(w):
            raise ValueError(f"w{w.degree}(TM) is not a mod-2 cocycle")
    eps, xi, alpha = _z2(bg.eps), _z2(bg.xi), _z2(bg.alpha)
    zero1 = TwistedCochain.zero(k, 1, None, "Z/2")
    o1 = _z2_sum(w1, xi, eps if bg.t % 2 else zero1)
    zero2 = TwistedCochain.zero(k, 2, None, "Z/2")
    terms = [w2, cup_z2(k, w1, xi), cup_z2(k, alpha, eps)]
    if (bg.t * (bg.t + 1) // 2) % 2:
        terms.append(cup_z2(k, eps, eps))
    o2 = _z2_sum(zero2, *terms)
    return SpinObstructions(o1, o2)


def spin_duality_holds(bg: Background, w1_tm: TwistClass | TwistedCochain, w2_tm: TwistedCochain) -> bool:
    """``O1^ = O1`` and ``O2^ = O2 + eps O1`` in cohomology for the T-dual background."""
    k = bg.base
    ob = spin_obstructions(bg, w1_tm, w2_tm)
    dual = spin_obstructions(t_dual(bg), w1_tm, w2_tm)
    expected_o2 = _z2_sum(ob.o2, cup_z2(k, _z2(bg.eps), ob.o1))
    return z2_same_class(dual.o1, ob.o1) and z2_same_class(dual.o2, expected_o2)


def with_flux(bg: Background, h_base: TwistedCochain | None = None,
              h_fib: TwistedCochain | None = None) -> Background:
    """Copy of ``bg`` with one or both flux parts replaced."""
    flux = GradedTotalClass.build(bg.bundle, bg.eps, 3,
                                  h_base if h_base is not None else bg.h_base,
                                  h_fib if h_fib is not None else bg.h_fib)
    return replace(bg, flux=flux)


# ---------------------------------------------------------------------------
# catalog


def _generator(k, twist: TwistClass, p: int, multiple: int = 1) -> TwistedCochain:
    sq = cohomology_presentation(k, twist, p)
    if not sq.ngens:
        raise ValueError(f"H^{p} is zero for this twist")
    return TwistedCochain(k, p, tuple(multiple * v for v in sq.representative(0)), twist)


def catalog_backgrounds() -> dict[str, Background]:
    """Built-in backgrounds over S^1, S^2, T^2, the Klein bottle and T^3."""
    from .cellular import catalog

    out: dict[str, Background] = {}
    s1 = catalog("s1")
    g = TwistClass(s1, (1,))
    z = TwistClass.zero(s1)
    out["torus_eps"] = Background.build(CircleBundle.trivial(s1), eps=g, name="torus_eps")
    out["trivial_s1"] = Background.build(CircleBundle.trivial(s1), name="trivial_s1")
    out["klein_s1"] = Background.build(CircleBundle.trivial(s1, g), eps=g, t=3, alpha=g, name="klein_s1")
    out["s1_xi"] = Background.build(CircleBundle.trivial(s1, g), eps=z, t=1, name="s1_xi")

    s2 = catalog("s2")
    z2 = TwistClass.zero(s2)
    out["hopf_s2"] = Background.build(CircleBundle(s2, z2, _generator(s2, z2, 2)),
                                      h_fib=_generator(s2, z2, 2, 3), name="hopf_s2")

    t2 = catalog("t2")
    zt, x, y = TwistClass.zero(t2), TwistClass.named(t2, "x"), TwistClass.named(t2, "y")
    out["nil_t2"] = Background.build(CircleBundle(t2, zt, _generator(t2, zt, 2)),
                                     h_fib=_generator(t2, zt, 2, 2), name="nil_t2")
    out["t2_twisted"] = Background.build(CircleBundle(t2, x, _generator(t2, x, 2)), eps=y, t=1, alpha=y,
                                         h_fib=_generator(t2, x + y, 2), name="t2_twisted")
    out["t2_eps"] = Background.build(CircleBundle.trivial(t2), eps=x, t=1, alpha=y, name="t2_eps")

    kb = catalog("klein_bottle")
    zk, b = TwistClass.zero(kb), TwistClass.named(kb, "base")
    out["klein_eps"] = Background.build(CircleBundle(kb, zk, _generator(kb, zk, 2)), eps=b, t=2,
                                        h_fib=_generator(kb, b, 2), name="klein_eps")
    out["klein_xi"] = Background.build(CircleBundle.trivial(kb, b), eps=b, t=0, alpha=b,
                                       h_fib=TwistedCochain.zero(kb, 2, zk), name="klein_xi")

    t3 = catalog("t3")
    z3 = TwistClass.zero(t3)
    out["t3_flux"] = Background.build(CircleBundle.trivial(t3), h_base=_generator(t3, z3, 3), name="t3_flux")
    return out
