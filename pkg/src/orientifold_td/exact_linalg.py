"""Exact integer, rational and mod-2 linear algebra.

Everything here works on plain nested lists of Python integers (or of any
exact field elements for the rank routines), so no floating point ever
enters a cohomology computation.  The central tool is the Smith normal form;
on top of it sit canonical finitely generated abelian groups, subquotient
presentations ``ker d_out / im d_in`` with explicit generators, and kernels
and cokernels of homomorphisms between such presentations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "IntMatrix",
    "AbelianGroup",
    "SmithForm",
    "Subquotient",
    "smith_normal_form",
    "smith_form",
    "determinant",
    "cohomology_group",
    "integer_kernel",
    "hom_kernel",
    "hom_cokernel",
    "in_lattice",
    "field_rank",
    "rational_rank",
    "gf2_rank",
    "gf2_solve",
    "gf2_cohomology_basis",
    "gf2_is_coboundary",
    "with_coefficients",
    "ext_nonzero",
]


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix with explicit shape (so 0 x n and n x 0 are representable)."""

    nrows: int
    ncols: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.nrows or any(len(r) != self.ncols for r in self.rows):
            raise ValueError("IntMatrix: entries do not match the declared shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "IntMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        return cls(len(rows), ncols, tuple(rows))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls(nrows, ncols, tuple((0,) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def column(self, j: int) -> list[int]:
        return [r[j] for r in self.rows]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.ncols, self.nrows, tuple(zip(*self.rows)) if self.nrows else
                         tuple(() for _ in range(self.ncols)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.transpose().rows
        return IntMatrix(self.nrows, other.ncols,
                         tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows))

    def apply(self, vec: Sequence[int]) -> list[int]:
        if len(vec) != self.ncols:
            raise ValueError("vector length does not match matrix")
        return [sum(a * b for a, b in zip(r, vec)) for r in self.rows]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def __repr__(self) -> str:
        return f"IntMatrix({self.nrows}x{self.ncols}, {self.tolist()})"


def _as_lists(m: IntMatrix | Sequence[Sequence[int]]) -> tuple[list[list[int]], int, int]:
    if isinstance(m, IntMatrix):
        return m.tolist(), m.nrows, m.ncols
    rows = [list(r) for r in m]
    return rows, len(rows), (len(rows[0]) if rows else 0)


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _matmul(a: list[list[int]], b: list[list[int]], inner: int, ncols: int) -> list[list[int]]:
    bt = list(zip(*b)) if b else [()] * ncols
    return [[sum(x * y for x, y in zip(r, c)) for c in bt] for r in a] if inner else \
        [[0] * ncols for _ in a]


# ---------------------------------------------------------------------------
# Smith normal form


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _round_div(b: int, p: int) -> int:
    q, rem = divmod(b, p)
    if 2 * abs(rem) > abs(p):
        q += 1
    return q


@dataclass(frozen=True)
class SmithForm:
    """Result of a Smith reduction ``d = u m v`` together with ``u^-1`` and ``v^-1``."""

    u: list[list[int]]
    d: list[list[int]]
    v: list[list[int]]
    u_inv: list[list[int]]
    v_inv: list[list[int]]
    diagonal: list[int]
    nrows: int
    ncols: int

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x != 0)


def smith_form(m: IntMatrix | Sequence[Sequence[int]], ncols: int | None = None) -> SmithForm:
    """Smith normal form with transforms and their inverses.

    Row operations act on ``u`` (and inversely on the columns of ``u_inv``),
    column operations act on ``v`` (and inversely on the rows of ``v_inv``).
    """
    a, r, c = _as_lists(m)
    if ncols is not None:
        c = ncols
    u, ui = _identity(r), _identity(r)
    v, vi = _identity(c), _identity(c)

    def row_comb(i: int, j: int, p: int, q: int, s: int, t: int) -> None:
        # rows (i, j) <- (p*row_i + q*row_j, s*row_i + t*row_j), det = pt - qs = +-1
        for mat in (a, u):
            ri, rj = mat[i], mat[j]
            mat[i] = [p * x + q * y for x, y in zip(ri, rj)]
            mat[j] = [s * x + t * y for x, y in zip(ri, rj)]
        # inverse acts on columns of ui: cols (i, j) <- (col_i, col_j) @ inv([[p, q], [s, t]])
        det = p * t - q * s
        ip, iq, is_, it = t * det, -q * det, -s * det, p * det
        for row in ui:
            x, y = row[i], row[j]
            row[i] = x * ip + y * is_
            row[j] = x * iq + y * it

    def col_comb(i: int, j: int, p: int, q: int, s: int, t: int) -> None:
        # cols (i, j) <- (p*col_i + q*col_j, s*col_i + t*col_j)
        for mat in (a, v):
            for row in mat:
                x, y = row[i], row[j]
                row[i] = p * x + q * y
                row[j] = s * x + t * y
        det = p * t - q * s
        ip, iq, is_, it = t * det, -q * det, -s * det, p * det
        # inverse acts on rows of vi: rows (i, j) <- inv^T-style combination
        ri, rj = vi[i], vi[j]
        vi[i] = [ip * x + is_ * y for x, y in zip(ri, rj)]
        vi[j] = [iq * x + it * y for x, y in zip(ri, rj)]

    def swap_rows(i: int, j: int) -> None:
        if i != j:
            row_comb(i, j, 0, 1, 1, 0)

    def swap_cols(i: int, j: int) -> None:
        if i != j:
            col_comb(i, j, 0, 1, 1, 0)

    t = 0
    while t < min(r, c):
        # pivot: smallest nonzero absolute value in the trailing block
        best = None
        for i in range(t, r):
            row = a[i]
            for j in range(t, c):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            # Euclid-style reduction with nearest-integer quotients and the
            # smallest remainder promoted to pivot; keeps entries (and the
            # transforms) much smaller than extended-gcd combinations.
            p = a[t][t]
            best = None
            for i in range(t + 1, r):
                b = a[i][t]
                if b:
                    q = _round_div(b, p)
                    if q:
                        row_comb(t, i, 1, 0, -q, 1)
                    b = a[i][t]
                    if b and (best is None or abs(b) < best[0]):
                        best = (abs(b), i)
            if best is not None:
                swap_rows(t, best[1])
                continue
            best = None
            for j in range(t + 1, c):
                b = a[t][j]
                if b:
                    q = _round_div(b, p)
                    if q:
                        col_comb(t, j, 1, 0, -q, 1)
                    b = a[t][j]
                    if b and (best is None or abs(b) < best[0]):
                        best = (abs(b), j)
            if best is not None:
                swap_cols(t, best[1])
                continue
            bad = None
            for i in range(t + 1, r):
                row = a[i]
                for j in range(t + 1, c):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_comb(t, bad, 1, 1, 0, 1)
        if a[t][t] < 0:
            _negate_row(a, u, ui, t)
        t += 1
    diag = [a[i][i] for i in range(min(r, c))]
    return SmithForm(u, a, v, ui, vi, diag, r, c)


def _negate_row(a: list[list[int]], u: list[list[int]], ui: list[list[int]], t: int) -> None:
    a[t] = [-x for x in a[t]]
    u[t] = [-x for x in u[t]]
    for row in ui:
        row[t] = -row[t]


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(u, d, v)`` with ``d = u m v``, ``u, v`` unimodular and ``d`` a divisor-chain diagonal."""
    sf = smith_form(m, m.ncols)
    return (IntMatrix(m.nrows, m.nrows, tuple(map(tuple, sf.u))),
            IntMatrix(m.nrows, m.ncols, tuple(map(tuple, sf.d))),
            IntMatrix(m.ncols, m.ncols, tuple(map(tuple, sf.v))))


def determinant(m: IntMatrix | Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    a, n, c = _as_lists(m)
    if n != c:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            ri, rk = a[i], a[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# abelian groups


def _prime_powers(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 1) * p
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 1) * n
    return out


@dataclass(frozen=True, order=True)
class AbelianGroup:
    """Finitely generated abelian group ``Z^rank + Z/d1 + ... + Z/dk`` with ``d1 | d2 | ... | dk``."""

    rank: int = 0
    torsion: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        t = tuple(int(d) for d in self.torsion)
        if any(d < 2 for d in t) or any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            object.__setattr__(self, "torsion", _divisor_chain(abs(d) for d in t))
        else:
            object.__setattr__(self, "torsion", t)

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> "AbelianGroup":
        """Direct sum of cyclic groups; order 0 means a free summand, order 1 is dropped."""
        orders = list(orders)
        return cls(sum(1 for o in orders if o == 0), _divisor_chain(o for o in orders if o != 0))

    def __add__(self, other: "AbelianGroup") -> "AbelianGroup":
        return AbelianGroup(self.rank + other.rank, _divisor_chain(self.torsion + other.torsion))

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    @property
    def has_torsion(self) -> bool:
        return bool(self.torsion)

    def tensor_mod(self, m: int) -> "AbelianGroup":
        """``G (x) Z/m``."""
        from math import gcd
        return AbelianGroup.from_orders([m] * self.rank + [gcd(d, m) for d in self.torsion])

    def tor_mod(self, m: int) -> "AbelianGroup":
        """``Tor(G, Z/m)``."""
        from math import gcd
        return AbelianGroup.from_orders([gcd(d, m) for d in self.torsion])

    def __str__(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    @classmethod
    def parse(cls, text: str) -> "AbelianGroup":
        text = text.strip()
        if text == "0":
            return cls()
        rank, orders = 0, []
        for part in text.split("+"):
            part = part.strip()
            if part == "Z":
                rank += 1
            elif part.startswith("Z^"):
                rank += int(part[2:])
            elif part.startswith("Z/"):
                orders.append(int(part[2:]))
            else:
                raise ValueError(f"cannot parse group summand {part!r}")
        return cls(rank, _divisor_chain(orders))


def ext_nonzero(quotient: AbelianGroup, sub: AbelianGroup) -> bool:
    """Whether ``Ext(quotient, sub)`` is nonzero, i.e. an extension ``sub -> ? -> quotient`` may be nonsplit."""
    from math import gcd
    return any(sub.rank or any(gcd(d, t) > 1 for t in sub.torsion) for d in quotient.torsion)


def _divisor_chain(orders: Iterable[int]) -> tuple[int, ...]:
    by_prime: dict[int, list[int]] = {}
    for o in orders:
        if o < 0:
            o = -o
        if o <= 1:
            continue
        for p, q in _prime_powers(o).items():
            by_prime.setdefault(p, []).append(q)
    if not by_prime:
        return ()
    length = max(len(v) for v in by_prime.values())
    chain = [1] * length
    for powers in by_prime.values():
        powers.sort(reverse=True)
        for k, q in enumerate(powers):
            chain[length - 1 - k] *= q
    return tuple(chain)


# ---------------------------------------------------------------------------
# subquotients ker d_out / im d_in


def _check_composable(d_in: IntMatrix, d_out: IntMatrix) -> None:
    if d_out.ncols != d_in.nrows:
        raise ValueError(f"coboundaries are not composable: {d_out.shape} after {d_in.shape}")
    if d_in.ncols and d_out.nrows and not (d_out @ d_in).is_zero():
        raise ValueError("invalid complex: d_out . d_in != 0")


class Subquotient:
    """Presentation of ``ker d_out / im d_in`` with explicit generators.

    ``orders[j]`` is 0 for a free generator and ``>= 2`` for a torsion one.
    ``coordinates(x)`` maps a cocycle to its coordinate vector (torsion entries
    reduced into ``[0, order)``) and ``representative(j)`` returns a cocycle for
    generator ``j``.
    """

    def __init__(self, d_in: IntMatrix, d_out: IntMatrix):
        _check_composable(d_in, d_out)
        n = d_in.nrows
        self.ambient = n
        sf_out = smith_form(d_out, n)
        r = sf_out.rank
        # kernel basis K = columns r.. of v; coordinates via rows r.. of v^-1
        self._kernel_cols = [[sf_out.v[i][j] for i in range(n)] for j in range(r, n)]
        self._kernel_coord_rows = sf_out.v_inv[r:]
        z = n - r
        # express the columns of d_in in kernel coordinates
        a_prime = [[sum(x * y for x, y in zip(row, d_in.column(j))) for j in range(d_in.ncols)]
                   for row in self._kernel_coord_rows]
        sf = smith_form(a_prime, d_in.ncols)
        diag = sf.diagonal + [0] * (z - len(sf.diagonal))
        self._u = sf.u
        self._u_inv = sf.u_inv
        self._gen_index = [i for i in range(z) if diag[i] != 1]
        self.orders = [diag[i] for i in self._gen_index]
        self.group = AbelianGroup.from_orders(self.orders)

    @property
    def ngens(self) -> int:
        return len(self.orders)

    def kernel_coordinates(self, x: Sequence[int]) -> list[int]:
        return [sum(a * b for a, b in zip(row, x)) for row in self._kernel_coord_rows]

    def coordinates(self, x: Sequence[int]) -> list[int]:
        """Coordinates of the class of the cocycle ``x``; raises if ``x`` is not a cocycle."""
        if len(x) != self.ambient:
            raise ValueError("cochain length does not match the complex")
        y = self.kernel_coordinates(x)
        back = [sum(col[i] * y[k] for k, col in enumerate(self._kernel_cols)) for i in range(self.ambient)]
        if list(back) != list(x):
            raise ValueError("cochain is not a cocycle")
        w = [sum(a * b for a, b in zip(row, y)) for row in self._u]
        out = []
        for idx, o in zip(self._gen_index, self.orders):
            out.append(w[idx] % o if o else w[idx])
        return out

    def is_zero_class(self, x: Sequence[int]) -> bool:
        return all(c == 0 for c in self.coordinates(x))

    def representative(self, j: int) -> list[int]:
        idx = self._gen_index[j]
        y = [row[idx] for row in self._u_inv]
        return [sum(col[i] * y[k] for k, col in enumerate(self._kernel_cols)) for i in range(self.ambient)]

    def combination(self, coeffs: Sequence[int]) -> list[int]:
        out = [0] * self.ambient
        for j, c in enumerate(coeffs):
            if c:
                rep = self.representative(j)
                out = [a + c * b for a, b in zip(out, rep)]
        return out


def cohomology_group(d_in: IntMatrix, d_out: IntMatrix) -> AbelianGroup:
    """Canonical form of ``ker d_out / im d_in``; rejects pairs with ``d_out d_in != 0``."""
    _check_composable(d_in, d_out)
    n = d_in.nrows
    rank_out = smith_form(d_out, n).rank
    sf_in = smith_form(d_in, d_in.ncols)
    free = n - rank_out - sf_in.rank
    return AbelianGroup(free, _divisor_chain(x for x in sf_in.diagonal if abs(x) > 1))


# ---------------------------------------------------------------------------
# homomorphisms between presented groups


def integer_kernel(m: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Basis (as a list of vectors) of the integer kernel of ``m``."""
    sf = smith_form(m, ncols)
    r = sf.rank
    return [[sf.v[i][j] for i in range(ncols)] for j in range(r, ncols)]


def hom_cokernel(matrix: Sequence[Sequence[int]], src_ngens: int, dst_orders: Sequence[int]) -> AbelianGroup:
    """Cokernel of ``f: G -> H`` where ``H = (+) Z/dst_orders`` and ``matrix`` gives ``f`` on generators."""
    m = len(dst_orders)
    rel = [list(matrix[i]) + [dst_orders[i] if k == i else 0 for k in range(m)] for i in range(m)]
    sf = smith_form(rel, src_ngens + m)
    return AbelianGroup(m - sf.rank, _divisor_chain(x for x in sf.diagonal if abs(x) > 1))


def hom_kernel(matrix: Sequence[Sequence[int]], src_orders: Sequence[int],
               dst_orders: Sequence[int]) -> AbelianGroup:
    """Kernel of ``f: (+) Z/src_orders -> (+) Z/dst_orders`` given by an integer matrix on generators."""
    s, m = len(src_orders), len(dst_orders)
    if s == 0:
        return AbelianGroup()
    # lattice L = { y in Z^s : M y in im diag(dst) }
    aug = [list(matrix[i]) + [dst_orders[i] if k == i else 0 for k in range(m)] for i in range(m)]
    gens = [vec[:s] for vec in integer_kernel(aug, s + m)] if m else [[int(i == j) for i in range(s)]
                                                                         for j in range(s)]
    if not gens:
        return AbelianGroup()
    p_mat = [[g[i] for g in gens] for i in range(s)]
    sf = smith_form(p_mat, len(gens))
    r = sf.rank
    dvals = sf.diagonal[:r]
    # basis of L: columns d_k * u_inv[:, k]; express diag(src) in that basis
    w = []
    for k in range(r):
        row = []
        for j in range(s):
            val = sf.u[k][j] * src_orders[j]
            if val % dvals[k]:
                raise ArithmeticError("relation lattice not contained in kernel lattice")
            row.append(val // dvals[k])
        w.append(row)
    sf2 = smith_form(w, s)
    return AbelianGroup(r - sf2.rank, _divisor_chain(x for x in sf2.diagonal if abs(x) > 1))


def in_lattice(columns: Sequence[Sequence[int]], target: Sequence[int]) -> bool:
    """Whether ``target`` is an integer combination of the given column vectors."""
    n = len(target)
    if not columns:
        return all(x == 0 for x in target)
    mat = [[col[i] for col in columns] for i in range(n)]
    sf = smith_form(mat, len(columns))
    y = [sum(a * b for a, b in zip(row, target)) for row in sf.u]
    for i, yi in enumerate(y):
        di = sf.diagonal[i] if i < len(sf.diagonal) else 0
        if di == 0:
            if yi:
                return False
        elif yi % di:
            return False
    return True


# ---------------------------------------------------------------------------
# fields


def field_rank(rows: Sequence[Sequence], zero=0) -> int:
    """Rank over an exact field by Gaussian elimination (entries need ``+ - * /`` and ``== 0``)."""
    a = [list(r) for r in rows]
    if not a:
        return 0
    ncols = len(a[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][col] != zero), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        pr = a[rank]
        inv = 1 / pr[col] if not isinstance(pr[col], int) else Fraction(1, pr[col])
        for i in range(rank + 1, len(a)):
            f = a[i][col]
            if f != zero:
                f = f * inv
                a[i] = [x - f * y for x, y in zip(a[i], pr)]
        rank += 1
        if rank == len(a):
            break
    return rank


def rational_rank(m: IntMatrix | Sequence[Sequence[int]]) -> int:
    rows, _, _ = _as_lists(m)
    return field_rank([[Fraction(x) for x in r] for r in rows])


# ---------------------------------------------------------------------------
# GF(2)


def _to_bits(vec: Sequence[int]) -> int:
    out = 0
    for i, x in enumerate(vec):
        if x & 1:
            out |= 1 << i
    return out


def _from_bits(bits: int, n: int) -> list[int]:
    return [(bits >> i) & 1 for i in range(n)]


def _gf2_reduce(basis: dict[int, int], v: int) -> int:
    while v:
        lead = v.bit_length() - 1
        if lead not in basis:
            return v
        v ^= basis[lead]
    return 0


def _gf2_echelon(vectors: Iterable[int]) -> dict[int, int]:
    basis: dict[int, int] = {}
    for v in vectors:
        v = _gf2_reduce(basis, v)
        if v:
            basis[v.bit_length() - 1] = v
    return basis


def gf2_rank(m: IntMatrix | Sequence[Sequence[int]]) -> int:
    rows, _, _ = _as_lists(m)
    return len(_gf2_echelon(_to_bits(r) for r in rows))


def _gf2_columns(m: IntMatrix) -> list[int]:
    return [_to_bits(m.column(j)) for j in range(m.ncols)]


def gf2_solve(columns: Sequence[Sequence[int]], target: Sequence[int]) -> bool:
    """Whether ``target`` lies in the GF(2)-span of ``columns``."""
    basis = _gf2_echelon(_to_bits(c) for c in columns)
    return _gf2_reduce(basis, _to_bits(target)) == 0


def _gf2_nullspace(m: IntMatrix) -> list[int]:
    """Kernel of ``m`` over GF(2) as bit vectors of length ``m.ncols``."""
    n = m.ncols
    # eliminate on augmented columns [m^T | I]
    rows = [(_to_bits(m.column(j)), 1 << j) for j in range(n)]
    pivots: dict[int, tuple[int, int]] = {}
    kernel = []
    for v, tag in rows:
        while v:
            lead = v.bit_length() - 1
            if lead not in pivots:
                pivots[lead] = (v, tag)
                break
            pv, pt = pivots[lead]
            v ^= pv
            tag ^= pt
        if not v:
            kernel.append(tag)
    return kernel


def gf2_cohomology_basis(d_in: IntMatrix, d_out: IntMatrix) -> list[list[int]]:
    """Cocycle representatives of a basis of ``ker d_out / im d_in`` over GF(2)."""
    n = d_in.nrows
    basis = _gf2_echelon(_gf2_columns(d_in))
    out = []
    for z in _gf2_nullspace(d_out) if d_out.nrows else [1 << i for i in range(n)]:
        r = _gf2_reduce(basis, z)
        if r:
            basis[r.bit_length() - 1] = r
            out.append(_from_bits(z, n))
    return out


def gf2_is_coboundary(d_in: IntMatrix, x: Sequence[int]) -> bool:
    return gf2_solve([d_in.column(j) for j in range(d_in.ncols)], x)


# ---------------------------------------------------------------------------
# coefficients


def with_coefficients(groups: Sequence[AbelianGroup], coeffs: str) -> list[AbelianGroup]:
    """Convert integral cohomology groups to ``Q`` or ``Z/m`` coefficients (universal coefficients)."""
    if coeffs == "Z":
        return list(groups)
    if coeffs == "Q":
        return [AbelianGroup(g.rank) for g in groups]
    if coeffs.startswith("Z/"):
        m = int(coeffs[2:])
        if m < 2:
            raise ValueError(f"invalid modulus in {coeffs!r}")
        out = []
        for p, g in enumerate(groups):
            nxt = groups[p + 1] if p + 1 < len(groups) else AbelianGroup()
            out.append(g.tensor_mod(m) + nxt.tor_mod(m))
        return out
    raise ValueError(f"unknown coefficient domain {coeffs!r}")
