"""Elementary induction steps, interval merging, and replayable transcripts.

Every step moves a single symbol of the permutation and changes a single
length.  For labels ``a`` and ``c``:

======  ========  ==================  =====================  ==============
kind    dir       applicable when     move                   lengths
======  ========  ==================  =====================  ==============
rb      forward   s(a.b) = c.e        c.e before a.e         v[a] -= v[c]
re      forward   s(a.b) = c.e        a.b after c.b          v[c] -= v[a]
lb      forward   s(c.e) = a.b        c.e after a.e          v[a] -= v[c]
le      forward   s(c.e) = a.b        a.b before c.b         v[c] -= v[a]
rb      inverse   s(c.e) = a.e        c.e after a.b          v[a] += v[c]
re      inverse   s(c.b) = a.b        a.b before c.e         v[c] += v[a]
lb      inverse   s(a.e) = c.e        c.e before a.b         v[a] += v[c]
le      inverse   s(a.b) = c.b        a.b after c.e          v[c] += v[a]
======  ========  ==================  =====================  ==============

"before"/"after" refer to the position along the permutation cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, NamedTuple, Tuple, Union

from .errors import BadSplit, NonPositiveResult, NotApplicable, NotMergeable, ReplayMismatch, IREError
from .exactmath import format_rational, parse_rational
from .lengths import FloatingIRE
from .scheme import B, E, Scheme, Sym

KINDS = ("rb", "re", "lb", "le")
FORWARD = "forward"
INVERSE = "inverse"


class InductionStep(NamedTuple):
    kind: str
    direction: str
    a: str
    b: str

    def inverted(self) -> "InductionStep":
        return self._replace(direction=INVERSE if self.direction == FORWARD else FORWARD)

    def __str__(self):
        return f"STEP {self.kind} {self.direction} {self.a} {self.b}"


@dataclass(frozen=True)
class MergeOp:
    a: str
    b: str
    recorded_length_b: Fraction

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("merge needs two distinct labels")
        object.__setattr__(self, "recorded_length_b", Fraction(self.recorded_length_b))

    def __str__(self):
        return f"MERGE {self.a} {self.b} {format_rational(self.recorded_length_b)}"


Op = Union[InductionStep, MergeOp]


# (symbol whose image is tested, expected image, moved symbol, anchor, where, grown, by)
def _table(step: InductionStep):
    a, c = step.a, step.b
    ab, ae, cb, ce = Sym(a, B), Sym(a, E), Sym(c, B), Sym(c, E)
    if step.direction == FORWARD:
        return {
            "rb": (ab, ce, ce, ae, "before", a, c, -1),
            "re": (ab, ce, ab, cb, "after", c, a, -1),
            "lb": (ce, ab, ce, ae, "after", a, c, -1),
            "le": (ce, ab, ab, cb, "before", c, a, -1),
        }[step.kind]
    return {
        "rb": (ce, ae, ce, ab, "after", a, c, +1),
        "re": (cb, ab, ab, ce, "before", c, a, +1),
        "lb": (ae, ce, ce, ab, "before", a, c, +1),
        "le": (ab, cb, ab, ce, "after", c, a, +1),
    }[step.kind]


def _validate_step(step: InductionStep) -> None:
    if step.kind not in KINDS or step.direction not in (FORWARD, INVERSE):
        raise ValueError(f"unknown step {step}")


def step_applicable(s: Scheme, step: InductionStep) -> bool:
    _validate_step(step)
    if step.a == step.b or step.a not in s.alphabet or step.b not in s.alphabet:
        return False
    src, img = _table(step)[:2]
    return s(src) == img


def _move(succ: Dict[Sym, Sym], x: Sym, anchor: Sym, where: str) -> None:
    pred = {v: k for k, v in succ.items()}
    succ[pred[x]] = succ[x]
    del succ[x]
    if where == "before":
        p = next(k for k, v in succ.items() if v == anchor)
        succ[p] = x
        succ[x] = anchor
    else:
        succ[x] = succ[anchor]
        succ[anchor] = x


def moved_symbol(step: InductionStep) -> Sym:
    """The single symbol whose position ``step`` changes."""
    return _table(step)[2]


def apply_to_scheme(s: Scheme, step: InductionStep) -> Scheme:
    if not step_applicable(s, step):
        raise NotApplicable(f"{step} is not applicable")
    _, _, moved, anchor, where = _table(step)[:5]
    succ = s.perm
    _move(succ, moved, anchor, where)
    return Scheme(s.alphabet, succ)


def apply_step(ire: FloatingIRE, step: InductionStep, guard: bool = True) -> FloatingIRE:
    """Apply one step.  With ``guard`` a forward step on a positive exchange
    must keep every length positive."""
    new_scheme = apply_to_scheme(ire.scheme, step)
    grown, by, sign = _table(step)[5:]
    v = dict(ire.lengths)
    v[grown] = v[grown] + sign * v[by]
    if guard and step.direction == FORWARD and ire.is_positive() and v[grown] <= 0:
        raise NonPositiveResult(f"{step} would leave length {grown} = {v[grown]}")
    return FloatingIRE(new_scheme, v)


def preserves_zero_twist_inverse(s: Scheme, step: InductionStep) -> bool:
    """Whether an inverse step keeps the twist total at zero."""
    if step.direction != INVERSE or not step_applicable(s, step):
        raise NotApplicable(f"{step} is not an applicable inverse step")
    ab, ce = Sym(step.a, B), Sym(step.b, E)
    if step.kind == "rb":
        return s(ab).marker == E
    if step.kind == "re":
        return s.inverse(ce).marker == B
    if step.kind == "lb":
        return s.inverse(ab).marker == E
    return s(ce).marker == B


_DUAL = {
    ("lb", FORWARD): ("re", INVERSE, False),
    ("le", FORWARD): ("le", INVERSE, True),
    ("re", FORWARD): ("lb", INVERSE, False),
    ("rb", FORWARD): ("rb", INVERSE, True),
}
_DUAL.update({(k2, d2): (k1, d1, sw) for (k1, d1), (k2, d2, sw) in list(_DUAL.items())})


def dual_step_correspondence(step: InductionStep) -> InductionStep:
    """The step acting on the dual scheme when ``step`` acts on the scheme."""
    _validate_step(step)
    kind, direction, swap = _DUAL[(step.kind, step.direction)]
    a, c = (step.b, step.a) if swap else (step.a, step.b)
    return InductionStep(kind, direction, a, c)


# merging ---------------------------------------------------------------------


def merge_applicable(s: Scheme, a: str, c: str) -> bool:
    if a == c or a not in s.alphabet or c not in s.alphabet:
        return False
    return s(Sym(a, B)) == Sym(c, B) and s(Sym(c, E)) == Sym(a, E)


def merge_intervals(ire: FloatingIRE, a: str, c: str) -> Tuple[FloatingIRE, MergeOp]:
    """Remove ``c`` by gluing its intervals onto those of ``a``."""
    s = ire.scheme
    if not merge_applicable(s, a, c):
        raise NotMergeable(f"cannot merge {c} into {a}")
    succ = s.perm
    for x in (Sym(c, B), Sym(c, E)):
        pred = next(k for k, v in succ.items() if v == x)
        succ[pred] = succ.pop(x)
    v = dict(ire.lengths)
    vc = v.pop(c)
    v[a] += vc
    alphabet = [x for x in s.alphabet if x != c]
    return FloatingIRE(Scheme(alphabet, succ), v), MergeOp(a, c, vc)


def split_intervals(ire: FloatingIRE, op: MergeOp) -> FloatingIRE:
    s = ire.scheme
    if op.a not in s.alphabet or op.b in s.alphabet:
        raise BadSplit(f"cannot split {op.b} off {op.a}")
    if not 0 < op.recorded_length_b < ire.lengths[op.a]:
        raise BadSplit(f"split length {op.recorded_length_b} outside (0, {ire.lengths[op.a]})")
    succ = s.perm
    ab, ae, cb, ce = Sym(op.a, B), Sym(op.a, E), Sym(op.b, B), Sym(op.b, E)
    succ[cb] = succ[ab]
    succ[ab] = cb
    pred = next(k for k, v in succ.items() if v == ae)
    succ[pred] = ce
    succ[ce] = ae
    alphabet = list(s.alphabet)
    alphabet.insert(alphabet.index(op.a) + 1, op.b)
    v = dict(ire.lengths)
    v[op.a] -= op.recorded_length_b
    v[op.b] = op.recorded_length_b
    return FloatingIRE(Scheme(alphabet, succ), v)


# transcripts -----------------------------------------------------------------


@dataclass(frozen=True)
class Transcript:
    ops: Tuple[Op, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))

    def __len__(self):
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def extended(self, more: Iterable[Op]) -> "Transcript":
        return Transcript(self.ops + tuple(more))

    def to_text(self) -> str:
        return "".join(f"{op}\n" for op in self.ops)

    @classmethod
    def from_text(cls, text: str) -> "Transcript":
        from .errors import ParseError

        ops: List[Op] = []
        for n, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if parts[0] == "STEP" and len(parts) == 5:
                    step = InductionStep(*parts[1:])
                    _validate_step(step)
                    ops.append(step)
                elif parts[0] == "MERGE" and len(parts) == 4:
                    ops.append(MergeOp(parts[1], parts[2], parse_rational(parts[3])))
                else:
                    raise ValueError(f"unrecognised transcript line {line!r}")
            except ValueError as exc:
                raise ParseError(str(exc), line=n, column=1) from None
        return cls(tuple(ops))


def apply_op(ire: FloatingIRE, op: Op, guard: bool = False) -> FloatingIRE:
    if isinstance(op, MergeOp):
        merged, rec = merge_intervals(ire, op.a, op.b)
        if rec.recorded_length_b != op.recorded_length_b:
            raise NotMergeable(f"merged length {rec.recorded_length_b} differs from recorded {op.recorded_length_b}")
        return merged
    return apply_step(ire, op, guard=guard)


def undo_op(ire: FloatingIRE, op: Op) -> FloatingIRE:
    if isinstance(op, MergeOp):
        return split_intervals(ire, op)
    return apply_step(ire, op.inverted(), guard=False)


def replay(ire: FloatingIRE, t: Transcript, direction: str = FORWARD) -> FloatingIRE:
    """Run a transcript forward from its source, or backward from its target."""
    if direction not in (FORWARD, "backward"):
        raise ValueError("direction must be 'forward' or 'backward'")
    ops = list(enumerate(t.ops))
    if direction == "backward":
        ops.reverse()
    cur = ire
    for i, op in ops:
        try:
            cur = apply_op(cur, op) if direction == FORWARD else undo_op(cur, op)
        except IREError as exc:
            raise ReplayMismatch(i, f"{op}: {exc}") from exc
    return cur
