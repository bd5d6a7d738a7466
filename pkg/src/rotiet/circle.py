"""Circle rotations, first return maps onto arc unions, and realizations.

Coordinates on the circle of length ``L`` are projected onto ``[x0, x0 + L)``.
All orbit computations scale every coordinate by a common denominator and run
on Python integers, so coincidences between orbit points are detected exactly.
"""

from __future__ import annotations

import logging
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, List, Optional, Sequence, Tuple

from .canonical import CanonicalForm, canonicalize
from .errors import (BadSplit, Degenerate, Inconsistent, IREError, OutOfDomain, PerturbationTooLarge,
                     RealizationRetryExhausted, TypeMismatch)
from .induction import MergeOp, Transcript, apply_step, moved_symbol, split_intervals, undo_op
from .lengths import FixedIRE, FloatingIRE
from .scheme import B, E, Scheme, Sym, dual, relabelings

log = logging.getLogger(__name__)

Arc = Tuple[Fraction, Fraction]


@dataclass(frozen=True)
class CircleRotation:
    L: Fraction
    M: Fraction
    x0: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("L", "M", "x0"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.L <= 0:
            raise ValueError("circle length must be positive")

    @property
    def rho(self) -> Fraction:
        return (self.M / self.L) % 1

    def contains(self, x: Fraction) -> bool:
        return self.x0 <= x < self.x0 + self.L

    def project(self, x: Fraction) -> Fraction:
        return self.x0 + (Fraction(x) - self.x0) % self.L

    def __call__(self, x: Fraction) -> Fraction:
        return rotate(self, x, 1)

    def to_text(self) -> str:
        return f"ROT L={self.L} M={self.M} X0={self.x0}"


def rotate(r: CircleRotation, x: Fraction, steps: int = 1) -> Fraction:
    x = Fraction(x)
    if not r.contains(x):
        raise OutOfDomain(f"{x} is outside [{r.x0}, {r.x0 + r.L})")
    return r.x0 + (x - r.x0 + steps * r.M) % r.L


@dataclass(frozen=True)
class ArcUnion:
    """Sorted, pairwise non-touching half-open arcs inside one fundamental segment."""

    arcs: Tuple[Arc, ...]

    def __post_init__(self):
        arcs = tuple((Fraction(lo), Fraction(hi)) for lo, hi in self.arcs)
        object.__setattr__(self, "arcs", arcs)
        for lo, hi in arcs:
            if not lo < hi:
                raise ValueError(f"empty or reversed arc [{lo}, {hi})")
        for (_, h1), (l2, _) in zip(arcs, arcs[1:]):
            if not h1 < l2:
                raise ValueError("arcs must be sorted and must not touch")

    @classmethod
    def build(cls, arcs: Sequence[Tuple[object, object]], r: CircleRotation) -> "ArcUnion":
        """Project onto ``[x0, x0 + L)``, unwrap, and unite overlapping or touching arcs."""
        top = r.x0 + r.L
        pieces = []
        for lo, hi in arcs:
            lo, hi = Fraction(lo), Fraction(hi)
            if hi < lo:
                raise ValueError(f"reversed arc [{lo}, {hi})")
            if hi == lo:
                continue
            if hi - lo >= r.L:
                return cls(((r.x0, top),))
            a = r.project(lo)
            b_ = a + (hi - lo)
            if b_ <= top:
                pieces.append((a, b_))
            else:
                pieces += [(a, top), (r.x0, b_ - r.L)]
        pieces.sort()
        merged: List[List[Fraction]] = []
        for lo, hi in pieces:
            if merged and lo <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        if len(merged) > 1 and merged[0][0] == r.x0 and merged[-1][1] == top:
            raise ValueError("arc union straddles the base point; choose another x0")
        return cls(tuple((lo, hi) for lo, hi in merged))

    def total_length(self) -> Fraction:
        return sum((hi - lo for lo, hi in self.arcs), Fraction(0))

    def contains(self, x: Fraction) -> bool:
        i = bisect_right([lo for lo, _ in self.arcs], x) - 1
        return i >= 0 and x < self.arcs[i][1]

    def to_text(self) -> str:
        return "ARCS " + " ".join(f"[{lo},{hi})" for lo, hi in self.arcs)


@dataclass(frozen=True)
class ReturnMapResult:
    ire: FixedIRE
    return_times: Dict[str, int]
    rotation: Optional[CircleRotation] = field(default=None, compare=False)
    arcs: Optional[ArcUnion] = field(default=None, compare=False)


class _Grid:
    """Integer picture of a rotation and an arc union."""

    def __init__(self, r: CircleRotation, g: ArcUnion):
        den = 1
        for x in (r.L, r.M, r.x0, *(p for arc in g.arcs for p in arc)):
            den = lcm(den, x.denominator)
        self.r = r
        self.den = den
        self.L = int(r.L * den)
        self.M = int(r.M * den) % self.L
        self.segs = [(int((lo - r.x0) * den), int((hi - r.x0) * den)) for lo, hi in g.arcs]
        self.los = [lo for lo, _ in self.segs]
        self.period = self.L // gcd(self.M, self.L)

    def seg_index(self, y: int) -> Optional[int]:
        i = bisect_right(self.los, y) - 1
        if i >= 0 and y < self.segs[i][1]:
            return i
        return None

    def point(self, y: int) -> Fraction:
        return self.r.x0 + Fraction(y, self.den)


def first_return_map(r: CircleRotation, g: ArcUnion, max_time: Optional[int] = None,
                     strict: bool = False) -> ReturnMapResult:
    """First return map of ``r`` onto ``g`` as an interval exchange.

    Pieces of constant return time are cut by the first backward hits of the
    arc boundaries.  ``max_time`` bounds every orbit search (default: the
    period of the rotation at this scale, which is always enough).  With
    ``strict`` any coincidence among cut points, or a piece returning only to
    itself, raises :class:`Degenerate`: without coincidences the combinatorics
    is the same as for all nearby irrational rotation numbers.
    """
    g = ArcUnion.build(g.arcs, r)
    if not g.arcs:
        raise ValueError("empty arc union")
    grid = _Grid(r, g)
    horizon = grid.period if max_time is None else max_time
    if strict and grid.M == 0:
        raise Degenerate("rotation is the identity")

    cuts = set(grid.los)
    boundaries = sorted(set(grid.los) | {hi % grid.L for _, hi in grid.segs})
    for z in boundaries:
        y = z
        for _ in range(horizon):
            y = (y - grid.M) % grid.L
            if grid.seg_index(y) is not None:
                if strict and y in cuts:
                    raise Degenerate(f"orbit connection at {grid.point(y)}")
                cuts.add(y)
                break
        else:
            if horizon < grid.period:
                raise Degenerate(f"no backward hit of {grid.point(z)} within {horizon} steps")

    pieces = []  # (start, end, time, image start)
    for lo, hi in grid.segs:
        inner = sorted(c for c in cuts if lo <= c < hi) + [hi]
        for c, nxt in zip(inner, inner[1:]):
            y = c
            for k in range(1, horizon + 1):
                y = (y + grid.M) % grid.L
                if grid.seg_index(y) is not None:
                    break
            else:
                raise Degenerate(f"return time at {grid.point(c)} exceeds {horizon}")
            if strict and k >= grid.period:
                raise Degenerate(f"piece at {grid.point(c)} only returns to itself")
            j = grid.seg_index(y)
            if y + (nxt - c) > grid.segs[j][1]:
                raise Degenerate(f"image of piece at {grid.point(c)} leaves its segment")
            pieces.append((c, nxt, k, y))

    labels = [f"i{i + 1}" for i in range(len(pieces))]
    rows = []
    x: Dict[Sym, Fraction] = {}
    times: Dict[str, int] = {}
    for (c, nxt, k, y), lab in zip(pieces, labels):
        x[Sym(lab, B)] = grid.point(c)
        x[Sym(lab, E)] = grid.point(y + nxt - c)
        times[lab] = k
    for lo, hi in grid.segs:
        tops = [lab for (c, _, _, _), lab in zip(pieces, labels) if lo <= c < hi]
        ends = sorted(((y, y + nxt - c, lab) for (c, nxt, _, y), lab in zip(pieces, labels) if lo <= y < hi))
        cursor = lo
        for a, b_, _ in ends:
            if a != cursor:
                raise Degenerate("return images do not tile a segment")
            cursor = b_
        if cursor != hi:
            raise Degenerate("return images do not tile a segment")
        rows.append((tops, [lab for _, _, lab in ends]))
    scheme = Scheme.from_two_row(rows, alphabet=labels)
    return ReturnMapResult(FixedIRE(scheme, x), times, r, g)


def endpoint_type(s: Scheme, sym: Sym) -> str:
    """One of ``L``, ``R``, ``MB``, ``ME`` read off the predecessor's marker."""
    pred = s.inverse(sym)
    if sym.marker == B:
        return "MB" if pred.marker == B else "L"
    return "R" if pred.marker == B else "ME"


def dual_from_return_map(res: ReturnMapResult) -> Tuple[Scheme, Dict[str, int]]:
    """Rebuild the dual scheme from the trajectories of half-neighbourhoods of
    every middle-beginning endpoint, with the return times as lengths."""
    s = res.ire.scheme
    k = res.return_times
    limit = 2 * len(s) + 1
    cycles = []
    for start in s.symbols():
        if endpoint_type(s, start) != "MB":
            continue
        xi = [start.label]
        while True:
            nxt = s(Sym(xi[-1], E))
            if nxt.marker == E:
                right_stop = nxt.label
                break
            xi.append(nxt.label)
            if len(xi) > limit:
                raise TypeMismatch("right trajectory does not terminate")
        eta = [s.inverse(start).label]
        while True:
            prev = s.inverse(Sym(eta[-1], E))
            if prev.marker == E:
                break
            eta.append(prev.label)
            if len(eta) > limit:
                raise TypeMismatch("left trajectory does not terminate")
        if right_stop != eta[-1]:
            raise TypeMismatch(f"trajectories from {start} end at {right_stop} and {eta[-1]}")
        if sum(k[a] for a in xi) != sum(k[a] for a in eta):
            raise TypeMismatch(f"return times around {start} do not balance")
        cycles.append(tuple([Sym(a, B) for a in xi] + [Sym(a, E) for a in reversed(eta)]))
    try:
        built = Scheme.from_cycles(cycles, alphabet=s.alphabet)
    except IREError as exc:
        raise TypeMismatch(f"trajectory cycles do not form a scheme: {exc}") from exc
    if built != dual(s):
        raise TypeMismatch("trajectory cycles disagree with the dual scheme")
    return built, {a: k[a] for a in s.alphabet}


# realization ---------------------------------------------------------------


def construction_rotation(v_alpha, v_beta, k1: int, k2: int) -> CircleRotation:
    v_alpha, v_beta = Fraction(v_alpha), Fraction(v_beta)
    M = v_beta + k2 * v_alpha
    return CircleRotation(v_alpha + k1 * M, M, -v_alpha)


def _clear(arcs: List[Arc], L: Fraction) -> bool:
    arcs = sorted(arcs)
    for (_, h1), (l2, _) in zip(arcs, arcs[1:]):
        if not h1 < l2:
            return False
    return len(arcs) < 2 or arcs[-1][1] < arcs[0][0] + L


def shift_equivalence(expected: FloatingIRE, got: FloatingIRE) -> Optional[Dict[str, str]]:
    """A relabeling carrying ``expected`` onto ``got`` with equal lengths, if any."""
    for mapping in relabelings(expected.scheme, got.scheme):
        if all(expected.lengths[a] == got.lengths[mapping[a]] for a in expected.scheme.alphabet):
            return mapping
    return None


@dataclass(frozen=True)
class CanonicalRealization:
    rotation: CircleRotation
    arcs: ArcUnion
    labels: Dict[str, str]  # canonical label -> first-return label
    k1: int
    k2: int


def realize_canonical_detailed(c: CanonicalForm, k1: Optional[int] = None, k2: Optional[int] = None,
                               retries: int = 8) -> CanonicalRealization:
    target = c.expand()
    for attempt in range(retries):
        a1 = (k1 if k1 is not None else 2 * c.n + 1) + attempt
        a2 = (k2 if k2 is not None else 2 * c.m + 1) + attempt
        r = construction_rotation(c.v_alpha, c.v_beta, a1, a2)
        chosen = [(-c.v_alpha, c.v_beta)]
        for count, base, width, indices in (
                (c.n - 1, Fraction(0), c.v_beta, range(1, a1)),
                (c.m - 1, -c.v_alpha, c.v_alpha, range(1, a2 * a1 + 1))):
            taken = 0
            for i in indices:
                if taken == count:
                    break
                lo = rotate(r, base, i)
                if _clear(chosen + [(lo, lo + width)], r.L):
                    chosen.append((lo, lo + width))
                    taken += 1
            if taken < count:
                break
        else:
            try:
                g = ArcUnion.build(chosen, r)
                res = first_return_map(r, g)
            except (Degenerate, ValueError) as exc:
                log.info("canonical realization k1=%s k2=%s failed: %s", a1, a2, exc)
                continue
            mapping = shift_equivalence(target, res.ire.floating())
            if mapping is not None:
                return CanonicalRealization(r, g, mapping, a1, a2)
            log.info("canonical realization k1=%s k2=%s: arc choice gave other dynamics", a1, a2)
            continue
        log.info("canonical realization k1=%s k2=%s: not enough separated arcs", a1, a2)
    raise RealizationRetryExhausted(f"no admissible arc choice after {retries} attempts")


def realize_canonical(c: CanonicalForm, k1: Optional[int] = None,
                      k2: Optional[int] = None) -> Tuple[CircleRotation, ArcUnion, Dict[str, str]]:
    out = realize_canonical_detailed(c, k1, k2)
    return out.rotation, out.arcs, out.labels


@dataclass(frozen=True)
class Realization:
    rotation: CircleRotation
    arcs: ArcUnion
    labels: Dict[str, str]  # input label -> first-return label
    canonical: CanonicalForm
    transcript: Transcript
    k1: int
    k2: int


def _left_elements(s: Scheme) -> Dict[Tuple[Sym, ...], Sym]:
    out = {}
    for c in s.cycles():
        out[c] = next(x for x in c if x.marker == B and s.inverse(x).marker == E)
    return out


def realize_detailed(ire: FloatingIRE) -> Realization:
    form, transcript = canonicalize(ire)
    can = realize_canonical_detailed(form)
    res = first_return_map(can.rotation, can.arcs)
    fixed = res.ire
    cur = form.expand()
    # segment of every cycle, keyed by the cycle as listed by the scheme
    seg = {}
    for c, left in _left_elements(cur.scheme).items():
        lo = fixed.endpoints[Sym(can.labels[left.label], B)]
        seg[c] = (lo, lo + sum(cur.lengths[x.label] for x in c if x.marker == B))

    for op in reversed(transcript.ops):
        old = cur
        moved, crop_cycle, crop = None, None, None
        if isinstance(op, MergeOp):
            cur = split_intervals(cur, op)
        else:
            step = op.inverted()
            cur = apply_step(cur, step)
            moved = moved_symbol(step)
            crop_cycle = old.scheme.cycle_of(Sym(step.a, B))
            amount = old.lengths[step.b] if step.kind in ("rb", "lb") else old.lengths[step.a]
            crop = ("right" if step.kind in ("rb", "re") else "left", amount)
        new_seg = {}
        for c in cur.scheme.cycles():
            keep = next(x for x in c if x != moved and x.label in old.scheme.alphabet)
            oc = old.scheme.cycle_of(keep)
            lo, hi = seg[oc]
            if oc == crop_cycle:
                side, amount = crop
                lo, hi = (lo, hi - amount) if side == "right" else (lo + amount, hi)
            if hi - lo != sum(cur.lengths[x.label] for x in c if x.marker == B):
                raise Inconsistent("segment length drifted while undoing the transcript")
            new_seg[c] = (lo, hi)
        if len(set(new_seg.values())) != len(new_seg):
            raise Inconsistent("two cycles were assigned the same segment")
        seg = new_seg

    if cur != ire:
        raise Inconsistent("backward replay did not reproduce the input")
    arcs = ArcUnion(tuple(sorted(seg.values())))
    check = first_return_map(can.rotation, arcs)
    mapping = shift_equivalence(ire, check.ire.floating())
    if mapping is None:
        raise Inconsistent("realized first return map is not shift-equivalent to the input")
    return Realization(can.rotation, arcs, mapping, form, transcript, can.k1, can.k2)


def realize(ire: FloatingIRE) -> Tuple[CircleRotation, ArcUnion]:
    out = realize_detailed(ire)
    return out.rotation, out.arcs


def perturb_to_irrational(c: CanonicalForm, t: Transcript, eps, min_denominator: Optional[int] = None) -> FloatingIRE:
    """Shift every ``beta`` length by ``eps`` and undo the transcript."""
    eps = Fraction(eps)
    if eps < 0:
        raise ValueError("eps must be non-negative")
    if min_denominator is not None:
        rho0 = (c.v_beta + eps) / c.v_alpha
        if rho0.denominator < min_denominator:
            raise ValueError(f"perturbed ratio {rho0} has denominator below {min_denominator}")
    cur = CanonicalForm(c.alphas, c.betas, c.v_alpha, c.v_beta + eps).expand()
    for op in reversed(t.ops):
        try:
            cur = undo_op(cur, op)
        except BadSplit as exc:
            raise PerturbationTooLarge(f"{op}: {exc}") from exc
        if not cur.is_positive():
            raise PerturbationTooLarge(f"undoing {op} gives a non-positive length")
    return cur
