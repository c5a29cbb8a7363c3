"""Command-line interface ``orientifold-td``.

Documents are plain text.  ``#`` starts a comment; each definition reads
``KIND NAME [ON REF] [degree P] [twist T] { body }`` and may span lines.
Names must be defined before use; ``catalog:NAME`` refers to a built-in
complex or background.

Exit codes: 0 success, 1 verification failure, 2 parse or input error.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import backgrounds as bgs
from .backgrounds import Background, canonical_invariants, is_t_dual_pair, t_dual
from .bundles import CircleBundle
from .cellular import CATALOG, DeltaComplex, TwistClass, TwistedCochain, catalog, cohomology, cohomology_presentation
from .exterior import AXIOMS, GR, _mask, _mask_tuple, axiom_suite, format_terms
from .kr import kr_table
from .tdtransform import (
    DifferentialTriple,
    InvariantPair,
    invariant_cohomology_pair,
    invariant_d,
    retag,
    t_transform,
)

__all__ = ["Document", "DocumentError", "parse_document", "parse_terms", "main"]


class DocumentError(Exception):
    """Parse or resolution error tied to a definition and line."""

    def __init__(self, message: str, name: str = "", line: int = 0):
        self.name, self.line = name, line
        where = f"line {line}: " if line else ""
        what = f"definition {name!r}: " if name else ""
        super().__init__(f"{where}{what}{message}")


# ---------------------------------------------------------------------------
# literals


_NUM = r"\d+(?:/\d+)?"


def _gaussian(text: str) -> GR:
    """``3``, ``-1/2``, ``i``, ``2i``, ``1+i``, ``-3/2-1/2i`` as an element of ``Q(i)``."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty coefficient")
    total = GR(0)
    for sign, num, imag in re.findall(rf"([+-]?)({_NUM})?(i?)", s)[:-1]:
        if not num and not imag:
            raise ValueError(f"cannot parse coefficient {text!r}")
        value = Fraction(num) if num else Fraction(1)
        if sign == "-":
            value = -value
        total = total + (GR(0, value) if imag else GR(value))
    if re.sub(rf"[+-]?(?:{_NUM})?i?", "", s):
        raise ValueError(f"cannot parse coefficient {text!r}")
    return total


def _split_terms(text: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and cur.strip():
            out.append(cur)
            cur = ch
        else:
            cur += ch
    if cur.strip():
        out.append(cur)
    return out


def parse_terms(text: str, n: int) -> dict:
    """Form literal such as ``3*dx1^dx2 - (1+i)*exp(1/2,0)*dx1`` into a term dictionary.

    ``exp(k1,...,kn)`` stands for ``exp(i k.x)``; ``0`` is the zero form.
    """
    from .exterior import _acc, _double

    terms: dict = {}
    text = text.strip()
    if text in ("", "0"):
        return terms
    for raw in _split_terms(text):
        term = raw.strip()
        coeff = GR(1)
        if term[0] in "+-":
            if term[0] == "-":
                coeff = -coeff
            term = term[1:].strip()
        k = (0,) * n
        idx: tuple[int, ...] = ()
        sign = 1
        for factor in _split_factors(term):
            if factor.startswith("exp("):
                parts = [p.strip() for p in factor[4:-1].split(",")]
                if len(parts) != n:
                    raise ValueError(f"frequency {factor} needs {n} entries")
                k = _double(Fraction(p) for p in parts)
            elif factor.startswith("dx"):
                found = [int(j) - 1 for j in re.findall(r"dx(\d+)", factor)]
                if "^".join(f"dx{j + 1}" for j in found) != factor or any(not 0 <= j < n for j in found):
                    raise ValueError(f"bad form factor {factor!r}")
                if len(set(found)) != len(found):
                    sign = 0
                order = sorted(range(len(found)), key=lambda p: found[p])
                inv = sum(1 for a in range(len(order)) for b in range(a + 1, len(order)) if order[a] > order[b])
                sign *= -1 if inv % 2 else 1
                idx = tuple(sorted(found))
            else:
                coeff = coeff * _gaussian(factor.strip("()"))
        if sign:
            _acc(terms, (idx, k), coeff * sign)
    return terms


def _split_factors(term: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in term:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "*" and depth == 0:
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
    out.append(cur.strip())
    if any(not f for f in out):
        raise ValueError(f"empty factor in {term!r}")
    return out


def _int_list(text: str) -> list[int]:
    return [int(v) for v in re.findall(r"-?\d+", text)]


def _tuples(text: str) -> list[tuple[int, ...]]:
    found = re.findall(r"\(([^)]*)\)", text)
    if re.sub(r"\([^)]*\)", "", text).strip():
        raise ValueError(f"expected a list of tuples, got {text!r}")
    return [tuple(_int_list(t)) for t in found]


# ---------------------------------------------------------------------------
# documents


@dataclass
class Definition:
    kind: str
    name: str
    line: int
    options: dict
    body: str


@dataclass
class Document:
    complexes: dict = field(default_factory=dict)
    twists: dict = field(default_factory=dict)
    cochains: dict = field(default_factory=dict)
    bundles: dict = field(default_factory=dict)
    backgrounds: dict = field(default_factory=dict)
    triples: dict = field(default_factory=dict)
    forms: dict = field(default_factory=dict)

    def complex(self, ref: str) -> DeltaComplex:
        """Document definition, else catalog entry; ``catalog:NAME`` skips the document."""
        name = ref[len("catalog:"):] if ref.startswith("catalog:") else None
        if name is None and ref in self.complexes:
            return self.complexes[ref]
        name = name or ref
        if name not in CATALOG:
            raise KeyError(f"unknown complex {ref!r}")
        return catalog(name)

    def background(self, ref: str) -> Background:
        name = ref[len("catalog:"):] if ref.startswith("catalog:") else None
        if name is None and ref in self.backgrounds:
            return self.backgrounds[ref]
        known = _catalog_backgrounds()
        if (name or ref) not in known:
            raise KeyError(f"unknown background {ref!r}")
        return known[name or ref]

    def twist(self, text: str, k: DeltaComplex) -> TwistClass:
        """Twist expression: sum of ``0``, defined twists, named cocycles, bit lists or ``i=1`` entries."""
        total = TwistClass.zero(k)
        for part in text.split("+"):
            part = part.strip()
            if part in ("", "0"):
                continue
            if part in self.twists:
                tw = self.twists[part]
                if tw.complex is not k:
                    raise ValueError(f"twist {part!r} lives on another complex")
                total = total + tw
            elif part in k.named:
                total = total + TwistClass.named(k, part)
            elif "=" in part:
                values = [0] * k.count(1)
                for i, v in re.findall(r"(\d+)\s*=\s*(-?\d+)", part):
                    values[int(i)] = int(v)
                total = total + TwistClass(k, tuple(values))
            elif re.fullmatch(r"[\d\s,()\[\]]+", part):
                total = total + TwistClass(k, tuple(_int_list(part)))
            else:
                raise KeyError(f"unknown twist {part!r}")
        return total

    def cochain(self, text: str, k: DeltaComplex, degree: int, twist: TwistClass) -> TwistedCochain:
        text = text.strip()
        if text in ("", "0"):
            return TwistedCochain.zero(k, degree, twist)
        if text in self.cochains:
            c = self.cochains[text]
            if c.complex is not k or c.degree != degree or c.twist != twist:
                raise ValueError(f"cochain {text!r} has the wrong complex, degree or twist")
            return c
        gen = re.fullmatch(r"(?:(-?\d+)\s*\*\s*)?gen(?:\[(\d+)\])?", text)
        if gen:
            sq = cohomology_presentation(k, twist, degree)
            j = int(gen.group(2) or 0)
            if j >= sq.ngens:
                raise ValueError(f"H^{degree} has only {sq.ngens} generators")
            scale = int(gen.group(1) or 1)
            return TwistedCochain(k, degree, tuple(scale * v for v in sq.representative(j)), twist)
        if "=" in text:
            values = [0] * k.count(degree)
            for i, v in re.findall(r"(\d+)\s*=\s*(-?\d+)", text):
                values[int(i)] = int(v)
            return TwistedCochain(k, degree, tuple(values), twist)
        if re.fullmatch(r"[-\d\s,()\[\]]+", text):
            return TwistedCochain(k, degree, tuple(_int_list(text)), twist)
        raise KeyError(f"unknown cochain {text!r}")


_BG_CACHE: dict = {}


def _catalog_backgrounds() -> dict:
    if not _BG_CACHE:
        _BG_CACHE.update(bgs.catalog_backgrounds())
    return _BG_CACHE


_HEADER = re.compile(r"\s*([A-Za-z_]+)\s+([^\s{]+)([^{]*)\{([^}]*)\}", re.S)
_KINDS = ("complex", "twist", "cochain", "bundle", "background", "triple", "form")


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())


def _definitions(text: str) -> list[Definition]:
    text = _strip_comments(text)
    out, pos = [], 0
    while True:
        rest = text[pos:]
        if not rest.strip():
            return out
        m = _HEADER.match(text, pos)
        start = pos + len(rest) - len(rest.lstrip())
        line = text.count("\n", 0, start) + 1
        if not m:
            head = re.match(r"\s*\w+\s+(\w+)", rest)
            raise DocumentError(f"cannot parse definition starting with {rest.strip().splitlines()[0]!r} "
                                "(expected 'KIND NAME [OPTIONS] { ... }')", head.group(1) if head else "", line)
        kind, name, opts, body = m.groups()
        if kind not in _KINDS:
            raise DocumentError(f"unknown definition kind {kind!r}", name, line)
        words = opts.split()
        if len(words) % 2:
            raise DocumentError(f"malformed header options {opts.strip()!r}", name, line)
        options = {words[i].lower(): words[i + 1] for i in range(0, len(words), 2)}
        out.append(Definition(kind, name, line, options, body))
        pos = m.end()


def _items(body: str) -> dict[str, str]:
    out = {}
    for chunk in re.split(r"[;\n]", body):
        chunk = chunk.strip()
        if not chunk:
            continue
        cut = min((chunk.find(c) for c in "=:" if c in chunk), default=-1)
        if cut < 0:
            raise ValueError(f"expected 'key = value', got {chunk!r}")
        key, value = chunk[:cut], chunk[cut + 1:]
        out[" ".join(key.split())] = value.strip()
    return out


def _build_complex(doc: Document, d: Definition) -> DeltaComplex:
    items = _items(d.body)
    named = {}
    for key in [k for k in items if k.startswith("cocycle ")]:
        named[key.split()[1]] = tuple(_int_list(items.pop(key)))
    if "simplices" in items:
        k = DeltaComplex.from_simplices(_tuples(items.pop("simplices")), name=d.name)
        if named:
            k = DeltaComplex(k.faces, d.name, named)
    else:
        nverts = items.pop("vertices", items.pop("dim0", None))
        if nverts is None:
            raise ValueError("complex needs 'simplices' or 'vertices' and 'dimP' face lists")
        levels = [[()] * int(nverts)]
        p = 1
        while f"dim{p}" in items:
            levels.append(_tuples(items.pop(f"dim{p}")))
            p += 1
        k = DeltaComplex(levels, d.name, named)
    if items:
        raise ValueError(f"unknown complex entries: {', '.join(sorted(items))}")
    return k


def _bits(text: str, n: int) -> int:
    """Coordinate mask from ``0``, a bit string such as ``10``, or a list such as ``1,0``."""
    text = text.strip()
    if text in ("", "0"):
        return 0
    if re.fullmatch(r"[01]+", text) and len(text) == n:
        return _mask(tuple(int(c) for c in text), n)
    return _mask(tuple(_int_list(text)), n)


def _build(doc: Document, d: Definition) -> None:
    o = d.options
    if d.kind == "complex":
        doc.complexes[d.name] = _build_complex(doc, d)
    elif d.kind == "twist":
        k = doc.complex(o["on"])
        doc.twists[d.name] = doc.twist(" ".join(d.body.split()), k)
    elif d.kind == "cochain":
        k = doc.complex(o["on"])
        twist = doc.twist(o.get("twist", "0"), k)
        doc.cochains[d.name] = doc.cochain(" ".join(d.body.split()), k, int(o["degree"]), twist)
    elif d.kind == "bundle":
        k = doc.complex(o["on"])
        items = _items(d.body)
        xi = doc.twist(items.pop("xi", "0"), k)
        c = doc.cochain(items.pop("c", "0"), k, 2, xi)
        _no_leftovers(items)
        doc.bundles[d.name] = CircleBundle(k, xi, c)
    elif d.kind == "background":
        items = _items(d.body)
        bref = items.pop("bundle")
        if bref not in doc.bundles:
            raise KeyError(f"unknown bundle {bref!r}")
        b = doc.bundles[bref]
        k = b.base
        eps = doc.twist(items.pop("eps", "0"), k)
        alpha = doc.twist(items.pop("alpha", "0"), k)
        t = int(items.pop("t", "0"))
        h_text = items.pop("h_base", "0")
        if k.dim < 3 and h_text != "0":
            raise ValueError("h_base needs a base of dimension at least 3")
        h_base = doc.cochain(h_text, k, 3, eps) if k.dim >= 3 else None
        h_fib = doc.cochain(items.pop("h_fib", "0"), k, 2, eps + b.xi)
        _no_leftovers(items)
        doc.backgrounds[d.name] = Background.build(b, eps, t, alpha, h_base, h_fib, name=d.name)
    elif d.kind == "triple":
        items = _items(d.body)
        m = int(items.pop("m"))
        eps, xi = _bits(items.pop("eps", "0"), m), _bits(items.pop("xi", "0"), m)
        forms = {key: parse_terms(items.pop(key, "0"), m) for key in ("F", "Fhat", "H3")}
        _no_leftovers(items)
        doc.triples[d.name] = DifferentialTriple(m, eps, xi, forms["F"], forms["Fhat"], forms["H3"])
    elif d.kind == "form":
        tref = o.get("on")
        if tref not in doc.triples:
            raise KeyError(f"unknown triple {tref!r}")
        tr = doc.triples[tref]
        items = _items(d.body)
        i = int(items.pop("degree", "0"))
        alpha = _bits(items.pop("alpha", "0"), tr.m)
        top = parse_terms(items.pop("top", "0"), tr.m)
        bottom = parse_terms(items.pop("bottom", "0"), tr.m)
        _no_leftovers(items)
        doc.forms[d.name] = (tref, InvariantPair.build(tr.m, i, alpha, tr.eps, tr.xi, top, bottom))


def _no_leftovers(items: dict) -> None:
    if items:
        raise ValueError(f"unknown entries: {', '.join(sorted(items))}")


def parse_document(text: str) -> Document:
    doc = Document()
    seen: set[str] = set()
    for d in _definitions(text):
        if (d.kind, d.name) in seen:
            raise DocumentError(f"{d.kind} defined twice", d.name, d.line)
        seen.add((d.kind, d.name))
        try:
            _build(doc, d)
        except (KeyError, ValueError, IndexError, ZeroDivisionError) as exc:
            msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
            raise DocumentError(msg, d.name, d.line) from None
    return doc


# ---------------------------------------------------------------------------
# commands


def _bitstr(t: TwistClass) -> str:
    return "".join(map(str, t.values)) or "-"


def _values(c: TwistedCochain | None) -> str:
    return "[" + " ".join(map(str, c.values)) + "]" if c is not None else "[]"


def _describe(bg: Background, label: str) -> list[str]:
    return [
        f"{label} {bg.name or '(unnamed)'}",
        f"  base = {bg.base.name or '(unnamed)'}",
        f"  xi = {_bitstr(bg.xi)}",
        f"  c = {_values(bg.c)}",
        f"  eps = {_bitstr(bg.eps)}",
        f"  t = {bg.t}",
        f"  alpha = {_bitstr(bg.alpha)}",
        f"  h_base = {_values(bg.h_base)}",
        f"  h_fib = {_values(bg.h_fib)}",
    ]


def _flag(ok: bool) -> str:
    return "pass" if ok else "FAIL"


def cmd_cohomology(doc: Document, args) -> tuple[list[str], bool]:
    k = doc.complex(args.complex)
    twist = doc.twist(args.twist, k)
    groups = cohomology(k, twist, args.coeffs)
    degrees = range(len(groups)) if args.degree is None else [args.degree]
    return [f"H^{p} = {groups[p] if 0 <= p < len(groups) else 0}" for p in degrees], True


def cmd_tdual(doc: Document, args) -> tuple[list[str], bool]:
    bg = doc.background(args.background)
    if args.partner is not None:
        partner = doc.background(args.partner)
        report = is_t_dual_pair(bg, partner)
        return _describe(bg, "background") + _describe(partner, "partner") + report.lines(), report.passed
    dual = t_dual(bg)
    report = is_t_dual_pair(bg, dual)
    twice = t_dual(dual)
    twice_ok = (twice.t == bg.t - 2 and bgs.same_z2_class(twice.alpha, bg.alpha + bg.eps)
                and twice.h_base == bg.h_base and twice.h_fib == bg.h_fib and twice.bundle == bg.bundle)
    inv, inv2 = canonical_invariants(bg), canonical_invariants(twice)
    inv_ok = inv[0] == inv2[0] and bgs.same_z2_class(inv[1], inv2[1])
    lines = _describe(bg, "background") + _describe(dual, "dual") + report.lines()
    lines.append(f"double dual (t-2, alpha+eps, h): {_flag(twice_ok)}")
    lines.append(f"canonical invariants (i={inv[0]}, a={_bitstr(inv[1])}) fixed: {_flag(inv_ok)}")
    return lines, report.passed and twice_ok and inv_ok


def cmd_kr(doc: Document, args) -> tuple[list[str], bool]:
    k = doc.complex(args.complex)
    twist = doc.twist(args.twist, k)
    degrees = range(4) if args.degree is None else [args.degree]
    rows = kr_table(k, twist, degrees)
    lines = []
    for r in rows:
        flag = "  (extension ambiguous)" if r.extension_ambiguous else ""
        lines.append(f"KR^{r.degree} = {r.assembled}{flag}")
        lines.extend(f"  E(p={p},q={q}) = {g}" for p, q, g in r.graded())
    lines.append(f"periodicity = {rows[0].periodicity if rows else 4}")
    return lines, True


def cmd_axioms(doc: Document, args) -> tuple[list[str], bool]:
    results = axiom_suite(args.seed, args.count, corrupt=args.corrupt)
    lines = []
    for name in AXIOMS:
        bad = sum(1 for r in results if name in r.failures)
        lines.append(f"{name}: {len(results) - bad}/{len(results)} {_flag(not bad)}")
    failed = sum(1 for r in results if r.failures)
    lines.append(f"instances = {len(results)}, failing = {failed}")
    lines.append(f"verdict: {_flag(not failed)}")
    return lines, not failed


def _pair_text(w: InvariantPair) -> str:
    return (f"top = {format_terms(w.top.terms) or '0'} in S^{w.top.i}, "
            f"bottom = {format_terms(w.bottom.terms) or '0'} in S^{w.bottom.i}")


def cmd_transform(doc: Document, args) -> tuple[list[str], bool]:
    if args.triple not in doc.triples:
        raise DocumentError(f"unknown triple {args.triple!r}")
    tr = doc.triples[args.triple]
    lines = [f"triple {args.triple}: {tr}"]
    ok = True
    if args.form is not None:
        if args.form not in doc.forms:
            raise DocumentError(f"unknown form {args.form!r}")
        tref, w = doc.forms[args.form]
        if tref != args.triple:
            raise DocumentError(f"form {args.form!r} is defined on triple {tref!r}")
        tw = t_transform(w)
        chain = t_transform(invariant_d(w, tr)) == invariant_d(tw, tr.dual())
        twice = t_transform(tw) == retag(w)
        ok = chain and twice
        lines += [f"form: {_pair_text(w)}", f"transform: {_pair_text(tw)}",
                  f"chain map T d = d^ T: {_flag(chain)}", f"T T = retag: {_flag(twice)}"]
    if tr.is_constant():
        alpha = _bits(args.alpha or "0", tr.m)
        pair = invariant_cohomology_pair(tr, alpha)
        lines.append(f"alpha = {''.join(map(str, _mask_tuple(alpha, tr.m)))}")
        lines.append("side dims H^0..H^3 = " + " ".join(map(str, pair.side)))
        lines.append("dual dims H^0..H^3 = " + " ".join(map(str, pair.dual_side)))
        lines.append(f"degree shift H^i = H^(i-1)^: {_flag(pair.shift_ok)}")
        ok = ok and pair.shift_ok
    return lines, ok


COMMANDS: dict[str, Callable] = {
    "cohomology": cmd_cohomology,
    "tdual": cmd_tdual,
    "kr": cmd_kr,
    "axioms": cmd_axioms,
    "transform": cmd_transform,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orientifold-td", description="Orientifold T-duality computations.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_input(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
        p.add_argument("--input", metavar="FILE", help="definition document (default: catalog only)")
        return p

    p = with_input(sub.add_parser("cohomology", help="twisted cohomology of a complex"))
    p.add_argument("complex")
    p.add_argument("--twist", default="0")
    p.add_argument("--coeffs", default="Z", help="Z, Q or Z/m")
    p.add_argument("--degree", type=int)

    p = with_input(sub.add_parser("tdual", help="T-dual of a background with the T1-T5 report"))
    p.add_argument("background")
    p.add_argument("--partner", help="check this background as the dual instead of constructing one")

    p = with_input(sub.add_parser("kr", help="KR-groups of a free involution"))
    p.add_argument("complex")
    p.add_argument("--twist", default="0")
    p.add_argument("--degree", type=int)

    p = sub.add_parser("axioms", help="seeded algebroid identity suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--corrupt", action="store_true", help="use a deliberately wrong bracket")

    p = with_input(sub.add_parser("transform", help="T-transform of an invariant form"))
    p.add_argument("triple")
    p.add_argument("form", nargs="?")
    p.add_argument("--alpha", help="A-twist bits for the cohomology table")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        doc = Document()
        if getattr(args, "input", None):
            with open(args.input, encoding="utf-8") as fh:
                doc = parse_document(fh.read())
        lines, ok = COMMANDS[args.command](doc, args)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return 2
    print("\n".join(lines))
    return 0 if ok else 1
