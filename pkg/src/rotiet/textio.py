"""Text formats: the scheme language, rotation files and canonical-form lines.

Scheme documents look like::

    # two-row cycles list beginnings on top, endings below
    [g a d | d b] [b | a g]
    LEN a=1 b=2 g=1 d=1

General cycles are written ``(a.b b.e a.e b.b)``.  An optional ``POS`` block
gives endpoint coordinates, e.g. ``POS a.b=0 a.e=1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

from .canonical import CanonicalForm
from .circle import ArcUnion, CircleRotation
from .errors import IREError, ParseError, ValidationError
from .exactmath import format_rational, parse_rational
from .lengths import FixedIRE, FloatingIRE
from .scheme import B, E, Scheme, Sym, twist_number, two_row_render

_TOKEN = re.compile(r"\s+|#[^\n]*|[\[\]()|]|[A-Za-z0-9_]+(?:\.[be])?(?:=[+-]?[0-9]+(?:/[0-9]+)?)?|\S")
_LABEL = re.compile(r"[A-Za-z0-9_]+\Z")


def natural_key(label: str):
    return [int(p) if p.isdigit() else p for p in re.split(r"(\d+)", label)]


@dataclass
class SchemeDocument:
    source: str
    scheme: Scheme
    lengths: Optional[Dict[str, Fraction]] = None
    endpoints: Optional[Dict[Sym, Fraction]] = None

    def floating(self) -> FloatingIRE:
        if self.lengths is None:
            raise ValidationError("document has no LEN block")
        return FloatingIRE(self.scheme, self.lengths)

    def fixed(self) -> FixedIRE:
        if self.endpoints is None:
            raise ValidationError("document has no POS block")
        return FixedIRE(self.scheme, self.endpoints)

    def __eq__(self, other):
        if not isinstance(other, SchemeDocument):
            return NotImplemented
        return (self.scheme, self.lengths, self.endpoints) == (other.scheme, other.lengths, other.endpoints)


def _tokens(text: str) -> Iterator[Tuple[str, int, int]]:
    line, col = 1, 1
    for m in _TOKEN.finditer(text):
        tok = m.group()
        if not tok.isspace() and not tok.startswith("#"):
            yield tok, line, col
        newlines = tok.count("\n")
        if newlines:
            line += newlines
            col = len(tok) - tok.rfind("\n")
        else:
            col += len(tok)


def parse_scheme(text: str) -> SchemeDocument:
    toks = list(_tokens(text))
    pos = 0
    cycles: List[Tuple[Sym, ...]] = []
    order: List[str] = []
    lengths: Optional[Dict[str, Fraction]] = None
    endpoints: Optional[Dict[Sym, Fraction]] = None
    end_line = text.count("\n") + 1

    def fail(msg, at=None):
        if at is None:
            at = toks[pos] if pos < len(toks) else ("", end_line, len(text) - text.rfind("\n"))
        raise ParseError(msg, line=at[1], column=at[2])

    def see(label):
        if label not in order:
            order.append(label)

    def assignment(tok, at, with_marker):
        name, _, value = tok[0].partition("=")
        if not value:
            fail(f"expected name=value, got {tok[0]!r}", at)
        try:
            number = parse_rational(value)
        except ValueError:
            fail(f"bad rational {value!r}", at)
        if with_marker:
            lab, dot, mk = name.rpartition(".")
            if not dot or mk not in (B, E) or not _LABEL.match(lab):
                fail(f"expected label.b or label.e, got {name!r}", at)
            return Sym(lab, mk), number
        if not _LABEL.match(name):
            fail(f"bad label {name!r}", at)
        return name, number

    while pos < len(toks):
        tok = toks[pos]
        word = tok[0]
        if word == "[":
            pos += 1
            rows: List[List[str]] = [[], []]
            row = 0
            while True:
                if pos >= len(toks):
                    fail("unclosed '['")
                w = toks[pos][0]
                if w == "|":
                    if row == 1:
                        fail("second '|' in a two-row cycle")
                    row = 1
                elif w == "]":
                    break
                elif _LABEL.match(w):
                    rows[row].append(w)
                else:
                    fail(f"unexpected {w!r} in two-row cycle")
                pos += 1
            if row == 0:
                fail("two-row cycle needs '|'", tok)
            if not rows[0] and not rows[1]:
                fail("empty cycle", tok)
            for lab in rows[0] + rows[1]:
                see(lab)
            cycles.append(tuple([Sym(a, B) for a in rows[0]] + [Sym(a, E) for a in reversed(rows[1])]))
            pos += 1
        elif word == "(":
            pos += 1
            items = []
            while True:
                if pos >= len(toks):
                    fail("unclosed '('")
                w = toks[pos][0]
                if w == ")":
                    break
                lab, dot, mk = w.rpartition(".")
                if not dot or mk not in (B, E) or not _LABEL.match(lab):
                    fail(f"expected label.b or label.e, got {w!r}")
                see(lab)
                items.append(Sym(lab, mk))
                pos += 1
            if not items:
                fail("empty cycle", tok)
            cycles.append(tuple(items))
            pos += 1
        elif word in ("LEN", "POS"):
            block: Dict = {}
            pos += 1
            while pos < len(toks) and "=" in toks[pos][0]:
                key, val = assignment(toks[pos], toks[pos], word == "POS")
                if key in block:
                    fail(f"duplicate entry for {key}")
                block[key] = val
                pos += 1
            if word == "LEN":
                if lengths is not None:
                    fail("second LEN block", tok)
                lengths = block
            else:
                if endpoints is not None:
                    fail("second POS block", tok)
                endpoints = block
        else:
            fail(f"unexpected {word!r}")

    if not cycles:
        raise ParseError("no cycles in document", line=1, column=1)
    seen = set()
    for c in cycles:
        for x in c:
            if x in seen:
                raise ValidationError(f"symbol {x} appears twice")
            seen.add(x)
    try:
        scheme = Scheme.from_cycles(cycles, alphabet=order)
    except IREError as exc:
        raise ValidationError(str(exc)) from None
    if lengths is not None:
        unknown = set(lengths) - set(order)
        if unknown:
            raise ValidationError(f"LEN names unknown labels {sorted(unknown)}")
        missing = set(order) - set(lengths)
        if missing:
            raise ValidationError(f"LEN lacks labels {sorted(missing)}")
        try:
            FloatingIRE(scheme, lengths)
        except IREError as exc:
            raise ValidationError(str(exc)) from None
    if endpoints is not None:
        try:
            FixedIRE(scheme, endpoints)
        except IREError as exc:
            raise ValidationError(str(exc)) from None
    return SchemeDocument(text, scheme, lengths, endpoints)


def cycle_sort_key(c):
    return min((natural_key(x.label), x.marker) for x in c)


def format_cycle(c) -> str:
    if twist_number(c) == 0:
        top, bottom = two_row_render(c)
        return f"[{' '.join(top)} | {' '.join(bottom)}]"
    start = min(range(len(c)), key=lambda i: (natural_key(c[i].label), c[i].marker))
    rot = c[start:] + c[:start]
    return "(" + " ".join(str(x) for x in rot) + ")"


def format_scheme(s: Scheme) -> str:
    """Deterministic text independent of the order the alphabet was listed in."""
    return " ".join(format_cycle(c) for c in sorted(s.cycles(), key=cycle_sort_key))


def format_lengths(v: Dict[str, Fraction]) -> str:
    return "LEN " + " ".join(f"{a}={format_rational(v[a])}" for a in sorted(v, key=natural_key))


def format_endpoints(x: Dict[Sym, Fraction]) -> str:
    keys = sorted(x, key=lambda s: (natural_key(s.label), s.marker))
    return "POS " + " ".join(f"{k}={format_rational(x[k])}" for k in keys)


def format_document(s: Scheme, lengths=None, endpoints=None) -> str:
    lines = [format_scheme(s)]
    if lengths is not None:
        lines.append(format_lengths(lengths))
    if endpoints is not None:
        lines.append(format_endpoints(endpoints))
    return "\n".join(lines) + "\n"


# rotations -------------------------------------------------------------------

_ARC = re.compile(r"\[\s*([^,\s]+)\s*,\s*([^)\s]+)\s*\)")


def parse_rotation(text: str) -> Tuple[CircleRotation, ArcUnion]:
    rot = None
    arcs: Optional[List[Tuple[Fraction, Fraction]]] = None
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "ROT":
            fields = {}
            for item in rest.split():
                key, eq, val = item.partition("=")
                if not eq or key not in ("L", "M", "X0"):
                    raise ParseError(f"bad ROT field {item!r}", line=n, column=raw.find(item) + 1)
                try:
                    fields[key] = parse_rational(val)
                except ValueError as exc:
                    raise ParseError(str(exc), line=n, column=raw.find(item) + 1) from None
            if set(fields) < {"L", "M"}:
                raise ParseError("ROT needs L and M", line=n, column=1)
            try:
                rot = CircleRotation(fields["L"], fields["M"], fields.get("X0", Fraction(0)))
            except ValueError as exc:
                raise ParseError(str(exc), line=n, column=1) from None
        elif head == "ARCS":
            arcs = []
            body = rest
            consumed = _ARC.sub("", body).strip()
            if consumed:
                raise ParseError(f"unexpected text {consumed!r} in ARCS", line=n, column=raw.find(consumed) + 1)
            for m in _ARC.finditer(body):
                try:
                    arcs.append((parse_rational(m.group(1)), parse_rational(m.group(2))))
                except ValueError as exc:
                    raise ParseError(str(exc), line=n, column=raw.find(m.group()) + 1) from None
        else:
            raise ParseError(f"unknown directive {head!r}", line=n, column=1)
    if rot is None or arcs is None:
        raise ParseError("rotation file needs ROT and ARCS lines", line=1, column=1)
    try:
        return rot, ArcUnion.build(arcs, rot)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def format_rotation(r: CircleRotation, g: ArcUnion) -> str:
    return f"{r.to_text()}\n{g.to_text()}\n"


def parse_canonical(text: str) -> CanonicalForm:
    line = text.strip()
    if not line.startswith("CANON"):
        raise ParseError("expected CANON line", line=1, column=1)
    fields = dict(item.partition("=")[::2] for item in line.split()[1:])
    try:
        form = CanonicalForm(tuple(fields["alpha"].split(",")), tuple(fields["beta"].split(",")),
                             parse_rational(fields["v_alpha"]), parse_rational(fields["v_beta"]))
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad CANON line: {exc}", line=1, column=1) from None
    if str(form.m) != fields.get("m") or str(form.n) != fields.get("n"):
        raise ParseError("m/n disagree with the label lists", line=1, column=1)
    return form
