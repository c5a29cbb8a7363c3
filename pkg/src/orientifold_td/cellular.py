"""Finite Delta-complexes with Z/2-twisted local systems.

A complex stores, for every dimension ``p >= 1``, the tuple of face indices
``(d_0 s, ..., d_p s)`` of each ``p``-simplex.  A local system ``Z_tau`` is an
edge cocycle ``tau``; the twisted coboundary transports the zeroth face term
back to the leading vertex, picking up ``(-1)^tau(v0 v1)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from .exact_linalg import (
    AbelianGroup,
    IntMatrix,
    Subquotient,
    cohomology_group,
    gf2_cohomology_basis,
    gf2_is_coboundary,
    with_coefficients,
)

__all__ = [
    "DeltaComplex",
    "TwistClass",
    "TwistedCochain",
    "twisted_coboundary",
    "cohomology",
    "cohomology_presentation",
    "cup_z2",
    "twisted_cup",
    "same_class",
    "is_coboundary",
    "z2_classes",
    "z2_same_class",
    "catalog",
    "point",
    "circle",
    "sphere",
    "torus",
    "klein_bottle",
    "torus3",
    "mapping_torus",
    "CATALOG",
]


class DeltaComplex:
    """Semi-simplicial complex given by face tuples.

    ``faces[p][s]`` is the tuple of indices of the ``(p-1)``-simplices
    ``d_0 s, ..., d_p s``; ``faces[0]`` is a tuple of empty tuples, one per
    vertex.  ``named`` holds distinguished integral 1-cocycles (for example
    the pulled-back generator of a base circle).
    """

    def __init__(self, faces: Sequence[Sequence[Sequence[int]]], name: str = "",
                 named: Mapping[str, Sequence[int]] | None = None):
        self.faces = tuple(tuple(tuple(f) for f in level) for level in faces)
        self.name = name
        while len(self.faces) > 1 and not self.faces[-1]:
            self.faces = self.faces[:-1]
        self._validate()
        self.named = {k: tuple(v) for k, v in (named or {}).items()}
        for key, values in self.named.items():
            if len(values) != self.count(1):
                raise ValueError(f"named cocycle {key!r} has the wrong length")

    def _validate(self) -> None:
        if not self.faces:
            raise ValueError("a complex needs at least one vertex level")
        if any(f for f in self.faces[0]):
            raise ValueError("vertices have no faces")
        for p in range(1, len(self.faces)):
            for s, fs in enumerate(self.faces[p]):
                if len(fs) != p + 1:
                    raise ValueError(f"{p}-simplex {s} needs {p + 1} faces, got {len(fs)}")
                if any(not 0 <= f < len(self.faces[p - 1]) for f in fs):
                    raise ValueError(f"{p}-simplex {s} refers to a missing face")
                if p >= 2:
                    # simplicial identities d_i d_j = d_{j-1} d_i for i < j
                    for j in range(p + 1):
                        for i in range(j):
                            lhs = self.faces[p - 1][fs[j]][i]
                            rhs = self.faces[p - 1][fs[i]][j - 1]
                            if lhs != rhs:
                                raise ValueError(
                                    f"{p}-simplex {s} violates a simplicial identity at (i={i}, j={j})")

    @property
    def dim(self) -> int:
        return len(self.faces) - 1

    def count(self, p: int) -> int:
        return len(self.faces[p]) if 0 <= p < len(self.faces) else 0

    def counts(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.faces)

    def euler_characteristic(self) -> int:
        return sum((-1) ** p * n for p, n in enumerate(self.counts()))

    def face(self, p: int, s: int, keep: Sequence[int]) -> int:
        """Index of the face of the ``p``-simplex ``s`` spanned by vertex positions ``keep``."""
        keep = sorted(keep)
        positions = list(range(p + 1))
        idx = s
        dim = p
        for pos in reversed(positions):
            if pos in keep:
                continue
            idx = self.faces[dim][idx][positions.index(pos)]
            positions.remove(pos)
            dim -= 1
        return idx

    def vertices(self, p: int, s: int) -> tuple[int, ...]:
        return tuple(self.face(p, s, [k]) for k in range(p + 1))

    @cached_property
    def leading_edges(self) -> tuple[tuple[int, ...], ...]:
        out: list[tuple[int, ...]] = [()]
        for p in range(1, self.dim + 1):
            out.append(tuple(self.face(p, s, [0, 1]) for s in range(self.count(p))))
        return tuple(out)

    def __repr__(self) -> str:
        return f"DeltaComplex({self.name or 'unnamed'}, counts={self.counts()})"

    @classmethod
    def from_simplices(cls, top: Iterable[Sequence[int]], name: str = "") -> "DeltaComplex":
        """Ordered simplicial complex generated by vertex tuples (each sorted internally)."""
        simplices: list[set[tuple[int, ...]]] = []
        for t in top:
            t = tuple(sorted(t))
            if not t or len(set(t)) != len(t):
                raise ValueError(f"simplex {t} must list distinct vertices")
            for k in range(1, len(t) + 1):
                while len(simplices) < k:
                    simplices.append(set())
                simplices[k - 1].update(itertools.combinations(t, k))
        if not simplices:
            raise ValueError("no simplices given")
        levels = [sorted(level) for level in simplices]
        index = [{s: i for i, s in enumerate(level)} for level in levels]
        faces: list[list[tuple[int, ...]]] = [[() for _ in levels[0]]]
        for p in range(1, len(levels)):
            faces.append([tuple(index[p - 1][s[:i] + s[i + 1:]] for i in range(p + 1)) for s in levels[p]])
        return cls(faces, name=name)


@dataclass(frozen=True)
class TwistClass:
    """Z/2-valued edge cocycle defining the local system ``Z_tau``."""

    complex: DeltaComplex
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        vals = tuple(int(v) % 2 for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != self.complex.count(1):
            raise ValueError(f"twist has {len(vals)} entries, complex has {self.complex.count(1)} edges")
        for s, fs in enumerate(self.complex.faces[2] if self.complex.dim >= 2 else ()):
            if (vals[fs[0]] + vals[fs[1]] + vals[fs[2]]) % 2:
                raise ValueError(f"twist is not a cocycle: odd on triangle {s}")

    @classmethod
    def zero(cls, k: DeltaComplex) -> "TwistClass":
        return cls(k, (0,) * k.count(1))

    @classmethod
    def named(cls, k: DeltaComplex, name: str) -> "TwistClass":
        if name not in k.named:
            raise KeyError(f"complex {k.name!r} has no named cocycle {name!r}")
        return cls(k, k.named[name])

    def __add__(self, other: "TwistClass") -> "TwistClass":
        if other.complex is not self.complex:
            raise ValueError("twists live on different complexes")
        return TwistClass(self.complex, tuple(a ^ b for a, b in zip(self.values, other.values)))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TwistClass) and other.complex is self.complex and other.values == self.values

    def __hash__(self) -> int:
        return hash((id(self.complex), self.values))

    def is_zero(self) -> bool:
        return not any(self.values)

    def as_cochain(self) -> "TwistedCochain":
        return TwistedCochain(self.complex, 1, self.values, TwistClass.zero(self.complex), "Z/2")

    def __repr__(self) -> str:
        return f"TwistClass({''.join(map(str, self.values))})"


@dataclass(frozen=True)
class TwistedCochain:
    """Cochain of degree ``degree`` with coefficients ``Z``, ``Z/m`` or ``Q`` twisted by ``twist``."""

    complex: DeltaComplex
    degree: int
    values: tuple
    twist: TwistClass
    coeffs: str = "Z"

    def __post_init__(self) -> None:
        if len(self.values) != self.complex.count(self.degree):
            raise ValueError(f"cochain of degree {self.degree} needs {self.complex.count(self.degree)} values")
        if self.twist.complex is not self.complex:
            raise ValueError("twist lives on a different complex")
        if self.coeffs.startswith("Z/"):
            m = int(self.coeffs[2:])
            object.__setattr__(self, "values", tuple(int(v) % m for v in self.values))
        elif self.coeffs == "Z":
            object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        elif self.coeffs != "Q":
            raise ValueError(f"unknown coefficient domain {self.coeffs!r}")

    @classmethod
    def zero(cls, k: DeltaComplex, degree: int, twist: TwistClass | None = None,
             coeffs: str = "Z") -> "TwistedCochain":
        return cls(k, degree, (0,) * k.count(degree), twist or TwistClass.zero(k), coeffs)

    @classmethod
    def unit(cls, k: DeltaComplex, coeffs: str = "Z") -> "TwistedCochain":
        return cls(k, 0, (1,) * k.count(0), TwistClass.zero(k), coeffs)

    def _compatible(self, other: "TwistedCochain") -> None:
        if (other.complex is not self.complex or other.degree != self.degree
                or other.twist != self.twist or other.coeffs != self.coeffs):
            raise ValueError("cochains differ in complex, degree, twist or coefficients")

    def __add__(self, other: "TwistedCochain") -> "TwistedCochain":
        self._compatible(other)
        return TwistedCochain(self.complex, self.degree, tuple(a + b for a, b in zip(self.values, other.values)),
                              self.twist, self.coeffs)

    def __sub__(self, other: "TwistedCochain") -> "TwistedCochain":
        self._compatible(other)
        return TwistedCochain(self.complex, self.degree, tuple(a - b for a, b in zip(self.values, other.values)),
                              self.twist, self.coeffs)

    def __neg__(self) -> "TwistedCochain":
        return self.scale(-1)

    def scale(self, k: int) -> "TwistedCochain":
        return TwistedCochain(self.complex, self.degree, tuple(k * a for a in self.values), self.twist, self.coeffs)

    def mod2(self) -> "TwistedCochain":
        return TwistedCochain(self.complex, self.degree, self.values, TwistClass.zero(self.complex), "Z/2")

    def is_zero(self) -> bool:
        return not any(self.values)

    def coboundary(self) -> "TwistedCochain":
        d = twisted_coboundary(self.complex, self.twist, self.degree)
        return TwistedCochain(self.complex, self.degree + 1, tuple(d.apply(self.values)), self.twist, self.coeffs)

    def is_cocycle(self) -> bool:
        return self.coboundary().is_zero()


# ---------------------------------------------------------------------------
# coboundaries and cohomology


def _twist_values(k: DeltaComplex, twist: TwistClass | Sequence[int] | None) -> tuple[int, ...]:
    if twist is None:
        return (0,) * k.count(1)
    if isinstance(twist, TwistClass):
        if twist.complex is not k:
            raise ValueError("twist lives on a different complex")
        return twist.values
    return TwistClass(k, tuple(twist)).values


def twisted_coboundary(k: DeltaComplex, twist: TwistClass | Sequence[int] | None, p: int,
                       coeffs: str = "Z") -> IntMatrix:
    """Matrix of ``delta_tau: C^p -> C^{p+1}`` (rows indexed by ``(p+1)``-simplices).

    The matrix is integral; for ``Z/m`` coefficients reduce entries mod ``m``.
    """
    tw = _twist_values(k, twist)
    n_src, n_dst = k.count(p), k.count(p + 1)
    if p < 0:
        return IntMatrix.zeros(n_dst, 0)
    rows = []
    lead = k.leading_edges[p + 1] if p + 1 <= k.dim else ()
    for s in range(n_dst):
        row = [0] * n_src
        fs = k.faces[p + 1][s]
        for i, f in enumerate(fs):
            sign = -1 if i % 2 else 1
            if i == 0 and tw[lead[s]]:
                sign = -sign
            row[f] += sign
        rows.append(tuple(row))
    mat = IntMatrix(n_dst, n_src, tuple(rows))
    if coeffs.startswith("Z/"):
        m = int(coeffs[2:])
        mat = IntMatrix(n_dst, n_src, tuple(tuple(x % m for x in r) for r in mat.rows))
    return mat


def cohomology(k: DeltaComplex, twist: TwistClass | Sequence[int] | None = None,
               coeffs: str = "Z") -> list[AbelianGroup]:
    """Canonical cohomology groups ``H^p(k; Z_tau (x) coeffs)`` for ``p = 0..dim``."""
    mats = [twisted_coboundary(k, twist, p) for p in range(-1, k.dim + 1)]
    integral = [cohomology_group(mats[p], mats[p + 1]) for p in range(k.dim + 1)]
    return with_coefficients(integral, coeffs)


_PRESENTATIONS: dict = {}


def cohomology_presentation(k: DeltaComplex, twist: TwistClass | None, p: int) -> Subquotient:
    """Generators and coordinates for ``H^p(k; Z_tau)`` (cached per complex, twist, degree)."""
    tw = _twist_values(k, twist)
    key = (id(k), tw, p)
    hit = _PRESENTATIONS.get(key)
    if hit is not None and hit[0] is k:
        return hit[1]
    d_in = twisted_coboundary(k, tw, p - 1) if p > 0 else IntMatrix.zeros(k.count(p), 0)
    d_out = twisted_coboundary(k, tw, p)
    sq = Subquotient(d_in, d_out)
    _PRESENTATIONS[key] = (k, sq)
    return sq


def is_coboundary(x: TwistedCochain) -> bool:
    """Whether an integral twisted cocycle is exact."""
    if x.coeffs == "Z/2":
        return z2_is_coboundary(x)
    sq = cohomology_presentation(x.complex, x.twist, x.degree)
    return sq.is_zero_class(list(x.values))


def same_class(x: TwistedCochain, y: TwistedCochain) -> bool:
    return is_coboundary(x - y)


# ---------------------------------------------------------------------------
# mod 2


def _d2(k: DeltaComplex, p: int) -> IntMatrix:
    if p < 0:
        return IntMatrix.zeros(k.count(0), 0)
    return twisted_coboundary(k, None, p, "Z/2")


def z2_is_cocycle(x: TwistedCochain) -> bool:
    return all(v % 2 == 0 for v in _d2(x.complex, x.degree).apply(x.values))


def z2_is_coboundary(x: TwistedCochain) -> bool:
    if x.degree == 0:
        return all(v % 2 == 0 for v in x.values)
    return gf2_is_coboundary(_d2(x.complex, x.degree - 1), [v % 2 for v in x.values])


def z2_same_class(x: TwistedCochain, y: TwistedCochain) -> bool:
    if x.complex is not y.complex or x.degree != y.degree:
        raise ValueError("classes live in different groups")
    diff = TwistedCochain(x.complex, x.degree, tuple(a + b for a, b in zip(x.values, y.values)),
                          TwistClass.zero(x.complex), "Z/2")
    return z2_is_coboundary(diff)


def z2_classes(k: DeltaComplex, p: int) -> list[TwistedCochain]:
    """Cocycle representatives of every class in ``H^p(k; Z/2)`` (the whole group, not a basis)."""
    d_in = _d2(k, p - 1) if p > 0 else IntMatrix.zeros(k.count(p), 0)
    d_out = _d2(k, p)
    basis = gf2_cohomology_basis(d_in, d_out)
    out = []
    for bits in itertools.product((0, 1), repeat=len(basis)):
        vals = [0] * k.count(p)
        for b, vec in zip(bits, basis):
            if b:
                vals = [(x + y) % 2 for x, y in zip(vals, vec)]
        out.append(TwistedCochain(k, p, tuple(vals), TwistClass.zero(k), "Z/2"))
    return out


def _cup_values(k: DeltaComplex, a: TwistedCochain, b: TwistedCochain,
                transport: Sequence[int] | None) -> list[int]:
    p, q = a.degree, b.degree
    n = p + q
    out = []
    front_keep = list(range(p + 1))
    back_keep = list(range(p, n + 1))
    for s in range(k.count(n)):
        v = a.values[k.face(n, s, front_keep)] * b.values[k.face(n, s, back_keep)]
        if transport is not None and p > 0 and transport[k.face(n, s, [0, p])]:
            v = -v
        out.append(v)
    return out


def cup_z2(k: DeltaComplex, a: TwistedCochain, b: TwistedCochain) -> TwistedCochain:
    """Front-face/back-face cup product of mod-2 cocycles."""
    for x in (a, b):
        if x.complex is not k:
            raise ValueError("cochain lives on a different complex")
        if not z2_is_cocycle(x):
            raise ValueError(f"degree-{x.degree} input is not a mod-2 cocycle")
    n = a.degree + b.degree
    if n > k.dim:
        return TwistedCochain.zero(k, n, None, "Z/2")
    vals = _cup_values(k, a, b, None)
    return TwistedCochain(k, n, tuple(v % 2 for v in vals), TwistClass.zero(k), "Z/2")


def twisted_cup(a: TwistedCochain, b: TwistedCochain) -> TwistedCochain:
    """Integral cup product ``Z_s (x) Z_t -> Z_{s+t}``.

    The back-face value of ``b`` sits at vertex ``v_p`` and is transported to
    ``v_0`` along the edge ``v_0 v_p`` using the twist of ``b``.
    """
    k = a.complex
    if b.complex is not k:
        raise ValueError("cochains live on different complexes")
    if a.coeffs != "Z" or b.coeffs != "Z":
        raise ValueError("twisted_cup expects integral cochains")
    n = a.degree + b.degree
    twist = a.twist + b.twist
    if n > k.dim:
        return TwistedCochain(k, n, (), twist)
    return TwistedCochain(k, n, tuple(_cup_values(k, a, b, b.twist.values)), twist)


# ---------------------------------------------------------------------------
# catalog


def point() -> DeltaComplex:
    return DeltaComplex([[()]], name="point")


def circle(vertices: int = 1) -> DeltaComplex:
    """Circle with one vertex, or with an even number of vertices and alternating edge orientations.

    In the alternating model edge ``k`` joins ``k`` and ``k+1`` and starts at the
    even endpoint, so the reflection ``k -> -k`` is simplicial.  The named
    cocycle ``theta`` is the integral generator of ``H^1``.
    """
    if vertices == 1:
        return DeltaComplex([[()], [(0, 0)]], name="s1", named={"theta": (1,)})
    if vertices < 2 or vertices % 2:
        raise ValueError("circle needs 1 or an even number of vertices")
    n = vertices
    edges = []
    for e in range(n):
        tail, head = (e, (e + 1) % n) if e % 2 == 0 else ((e + 1) % n, e)
        edges.append((head, tail))
    theta = tuple(1 if e == 0 else 0 for e in range(n))
    return DeltaComplex([[()] * n, edges], name=f"s1_{n}", named={"theta": theta})


def circle_reflection(vertices: int) -> tuple[list[int], list[int]]:
    """Vertex and edge maps of the reflection ``k -> -k`` of the alternating circle."""
    n = vertices
    return [(-v) % n for v in range(n)], [(-e - 1) % n for e in range(n)]


def sphere(n: int) -> DeltaComplex:
    """Boundary of the ``(n+1)``-simplex."""
    top = [tuple(v for v in range(n + 2) if v != skip) for skip in range(n + 2)]
    return DeltaComplex.from_simplices(top, name=f"s{n}")


def mapping_torus(k: DeltaComplex, maps: Sequence[Sequence[int]] | None = None, name: str = "",
                  extend: Mapping[str, str] | None = None) -> DeltaComplex:
    """Mapping torus of a simplicial self-map of ``k`` (identity by default).

    ``maps[p][s]`` is the image of the ``p``-simplex ``s``.  Each ``p``-simplex
    ``[v0..vp]`` contributes prism simplices ``B(s, i) = [v0..vi, vi'..vp']`` and
    the intermediate ``A(s, i) = [v0..v_{i-1}, vi'..vp']`` for ``1 <= i <= p+1``;
    the top copy ``A(s, 0)`` is glued to the bottom copy ``A(f(s), p+1)``.

    The result carries the named cocycle ``base`` (pullback of the generator of
    the base circle) and, for each ``old: new`` entry of ``extend``, the prism
    extension of the named cocycle ``old`` of ``k`` (which must be invariant
    under the map) stored as ``new``.
    """
    if maps is None:
        maps = [list(range(k.count(p))) for p in range(k.dim + 1)]
    dim = k.dim
    a_index: dict[tuple[int, int, int], int] = {}
    b_index: dict[tuple[int, int, int], int] = {}
    levels: list[list] = [[] for _ in range(dim + 2)]
    for p in range(dim + 1):
        for s in range(k.count(p)):
            for i in range(1, p + 2):
                a_index[(p, s, i)] = len(levels[p])
                levels[p].append(("A", s, i))
    for p in range(dim + 1):
        for s in range(k.count(p)):
            for i in range(p + 1):
                b_index[(p, s, i)] = len(levels[p + 1])
                levels[p + 1].append(("B", s, i))

    def a_of(p: int, s: int, i: int) -> int:
        if i == 0:
            return a_index[(p, maps[p][s], p + 1)]
        return a_index[(p, s, i)]

    faces: list[list[tuple[int, ...]]] = []
    for q, level in enumerate(levels):
        out = []
        for kind, s, i in level:
            if q == 0:
                out.append(())
                continue
            if kind == "A":
                p = q
                fs = k.faces[p][s]
                out.append(tuple(a_of(p - 1, fs[m], i - 1 if m < i else i) for m in range(p + 1)))
            else:
                p = q - 1
                fs = k.faces[p][s] if p > 0 else ()
                row = []
                for m in range(p + 2):
                    if m <= i - 1:
                        row.append(b_index[(p - 1, fs[m], i - 1)])
                    elif m == i:
                        row.append(a_of(p, s, i))
                    elif m == i + 1:
                        row.append(a_of(p, s, i + 1))
                    else:
                        row.append(b_index[(p - 1, fs[m - 1], i)])
                out.append(tuple(row))
        faces.append(out)

    edges = levels[1]
    base = tuple(1 if (kind == "B" or (kind == "A" and i == 1)) else 0 for kind, s, i in edges)
    named = {"base": base}
    for key, new in (extend or {}).items():
        c = k.named[key]
        if any(c[maps[1][e]] != c[e] for e in range(k.count(1))):
            raise ValueError(f"named cocycle {key!r} is not invariant under the map")
        named[new] = tuple(0 if kind == "B" else c[s] for kind, s, i in edges)
    return DeltaComplex(faces, name=name or f"T({k.name})", named=named)


def torus() -> DeltaComplex:
    """T^2 as the mapping torus of the identity of the 4-vertex circle (8 triangles).

    Named cocycles: ``theta`` (the fibre circle) and ``base`` (the mapping
    direction), aliased as ``x`` and ``y``.
    """
    k = mapping_torus(circle(4), name="t2", extend={"theta": "theta"})
    k.named["x"] = k.named["theta"]
    k.named["y"] = k.named["base"]
    return k


def klein_bottle() -> DeltaComplex:
    """Klein bottle as the mapping torus of the reflection of the 4-vertex circle (8 triangles)."""
    vmap, emap = circle_reflection(4)
    return mapping_torus(circle(4), [vmap, emap], name="klein_bottle")


def torus3() -> DeltaComplex:
    """T^3 as the mapping torus of the identity of the 8-triangle T^2.

    Named cocycles ``x``, ``y`` come from the torus, ``z`` (also ``base``) is
    the new mapping direction.
    """
    k = mapping_torus(torus(), name="t3", extend={"x": "x", "y": "y"})
    k.named["z"] = k.named["base"]
    return k


def _catalog_builders() -> dict[str, Callable[[], DeltaComplex]]:
    return {
        "point": point,
        "s1": circle,
        "s2": lambda: sphere(2),
        "s3": lambda: sphere(3),
        "t2": torus,
        "klein_bottle": klein_bottle,
        "t3": torus3,
    }


CATALOG = tuple(_catalog_builders())
_CATALOG_CACHE: dict[str, DeltaComplex] = {}


def catalog(name: str) -> DeltaComplex:
    """Shared instance of a built-in complex (``point, s1, s2, s3, t2, klein_bottle, t3``)."""
    builders = _catalog_builders()
    if name not in builders:
        raise KeyError(f"unknown catalog complex {name!r}; known: {', '.join(CATALOG)}")
    if name not in _CATALOG_CACHE:
        _CATALOG_CACHE[name] = builders[name]()
    return _CATALOG_CACHE[name]
