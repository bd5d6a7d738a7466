"""Reduction of rotational interval exchanges to canonical form.

The canonical form on labels ``a1..am`` and ``b1..bn`` has a main cycle
``[a1 b1 | bn am]`` together with two chains of two-element cycles
``[a(i+1) | a(i)]`` and ``[b(j+1) | b(j)]``.  All ``a`` labels share one
length and all ``b`` labels share another.

The reduction is driven by the dual scheme.  Each dual cycle other than the
last is shrunk with forward ``lb``/``le`` steps on the dual until it has two
elements, then removed by a merge on the primal side.  A forward step on the
dual is an inverse step on the primal, so the recorded transcript only holds
inverse steps and merges.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from .errors import (Inconsistent, Necessity, NotIrreducible, NotRotational, NotTwoRow,
                     StepBudgetExceeded, Cancelled)
from .induction import (FORWARD, InductionStep, MergeOp, Op, Transcript, apply_step,
                        dual_step_correspondence, merge_intervals)
from .lengths import FloatingIRE, allowed_with_unequal, is_rotational
from .scheme import B, E, Cycle, Scheme, Sym, dual, is_irreducible, two_row_render


@dataclass(frozen=True)
class CanonicalForm:
    alphas: Tuple[str, ...]
    betas: Tuple[str, ...]
    v_alpha: Fraction
    v_beta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(self.alphas))
        object.__setattr__(self, "betas", tuple(self.betas))
        object.__setattr__(self, "v_alpha", Fraction(self.v_alpha))
        object.__setattr__(self, "v_beta", Fraction(self.v_beta))
        if not self.alphas or not self.betas:
            raise ValueError("both label chains must be non-empty")
        if len(set(self.alphas + self.betas)) != len(self.alphas) + len(self.betas):
            raise ValueError("labels of a canonical form must be distinct")
        if self.v_alpha <= 0 or self.v_beta <= 0:
            raise ValueError("canonical lengths must be positive")

    @property
    def m(self) -> int:
        return len(self.alphas)

    @property
    def n(self) -> int:
        return len(self.betas)

    def scheme(self) -> Scheme:
        a, bt = self.alphas, self.betas
        rows = [((a[0], bt[0]), (bt[-1], a[-1]))]
        rows += [((a[i + 1],), (a[i],)) for i in range(self.m - 1)]
        rows += [((bt[j + 1],), (bt[j],)) for j in range(self.n - 1)]
        return Scheme.from_two_row(rows, alphabet=a + bt)

    def expand(self) -> FloatingIRE:
        v = {x: self.v_alpha for x in self.alphas}
        v.update({x: self.v_beta for x in self.betas})
        return FloatingIRE(self.scheme(), v)

    def dual_cycle(self) -> Tuple[List[str], List[str]]:
        """Two-row form of the single cycle of the dual scheme."""
        return list(self.betas + self.alphas), list(self.alphas + self.betas)

    def to_text(self) -> str:
        return (f"CANON m={self.m} n={self.n} alpha={','.join(self.alphas)} beta={','.join(self.betas)} "
                f"v_alpha={self.v_alpha} v_beta={self.v_beta}")


def _chain(two_cycles: dict, start: str, stop: str, used: set) -> Optional[List[str]]:
    out = [start]
    cur = start
    while cur != stop:
        nxt = two_cycles.get(cur)
        if nxt is None or nxt in used or nxt in out:
            return None
        out.append(nxt)
        cur = nxt
    return out


def is_canonical(ire: FloatingIRE) -> Optional[CanonicalForm]:
    s = ire.scheme
    mains = [c for c in s.cycles() if len(c) != 2]
    if len(mains) != 1 or len(mains[0]) != 4:
        return None
    try:
        top, bottom = two_row_render(mains[0])
    except NotTwoRow:
        return None
    if len(top) != 2:
        return None
    # each [upper | lower] two-element cycle links lower -> upper
    links = {}
    for c in s.cycles():
        if len(c) == 2:
            if {x.marker for x in c} != {B, E}:
                return None
            up = next(x.label for x in c if x.marker == B)
            low = next(x.label for x in c if x.marker == E)
            if low in links or up == low:
                return None
            links[low] = up
    alphas = _chain(links, top[0], bottom[1], set())
    if alphas is None:
        return None
    betas = _chain(links, top[1], bottom[0], set(alphas))
    if betas is None:
        return None
    if len(alphas) + len(betas) != len(s) or set(alphas) & set(betas):
        return None
    va, vb = ire.lengths[alphas[0]], ire.lengths[betas[0]]
    if any(ire.lengths[x] != va for x in alphas) or any(ire.lengths[x] != vb for x in betas):
        return None
    if va <= 0 or vb <= 0:
        return None
    return CanonicalForm(tuple(alphas), tuple(betas), va, vb)


class Situation(enum.Enum):
    TWO_ELEMENT = "TwoElement"
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"
    S4 = "S4"


def classify_situation(dual_scheme: Scheme, c0: Cycle) -> Situation:
    if len(c0) == 2:
        return Situation.TWO_ELEMENT
    top, bottom = two_row_render(c0)
    alpha, beta = top[0], bottom[0]
    ae_in = Sym(alpha, E) in c0
    bb_in = Sym(beta, B) in c0
    if not ae_in and not bb_in:
        return Situation.S1
    if not ae_in:
        return Situation.S2
    if not bb_in:
        return Situation.S3
    return Situation.S4


def _dual_plan(ds: Scheme, c0: Cycle) -> List[InductionStep]:
    """Forward steps on the dual for the next move on cycle ``c0``."""
    top, bottom = two_row_render(c0)
    alpha, beta = top[0], bottom[0]
    situation = classify_situation(ds, c0)

    def lb(times=1):
        # alpha stays put while the bottom row rotates
        return [InductionStep("lb", FORWARD, alpha, bottom[i]) for i in range(times)]

    def le(times=1):
        return [InductionStep("le", FORWARD, top[i], beta) for i in range(times)]

    if situation is Situation.S1:
        try:
            w = allowed_with_unequal(ds, alpha, beta)
        except Necessity as exc:
            raise NotRotational(f"dual lengths of {alpha} and {beta} are forced equal") from exc
        return lb() if w[alpha] > w[beta] else le()
    if situation is Situation.S2:
        return lb()
    if situation is Situation.S3:
        return le()

    m = bottom.index(alpha)
    n = top.index(beta)
    for i in range(1, m):
        if Sym(bottom[i], B) not in c0:
            return lb(i)
    for j in range(1, n):
        if Sym(top[j], E) not in c0:
            return le(j)
    top_set, bottom_set = set(top[1:n]), set(bottom[1:m])
    for i in range(1, m):
        if bottom[i] not in top_set:
            return lb(i)
    for j in range(1, n):
        if top[j] not in bottom_set:
            return le(j)
    raise NotRotational("dual cycle admits no reducing move; scheme is splittable or reducible")


def _anchor_after(step: InductionStep) -> Sym:
    return Sym(step.a, B) if step.kind == "lb" else Sym(step.b, E)


class _Runner:
    """Mutable bookkeeping shared by one canonicalization run."""

    def __init__(self, ire: FloatingIRE, budget: Optional[int], cancel, check: bool, trace: Optional[list]):
        d = len(ire.scheme)
        self.cur = ire
        self.ops: List[Op] = []
        self.steps = 0
        self.budget = budget if budget is not None else 10 * d * 2 ** d
        self.cancel = cancel
        self.check = check
        self.trace = trace

    def _record(self, op: Op, new: FloatingIRE) -> None:
        self.cur = new
        self.ops.append(op)
        if self.check:
            if not is_rotational(new.scheme):
                raise Inconsistent(f"state after {op} is not rotational")
            if not is_irreducible(new.scheme):
                raise Inconsistent(f"state after {op} is reducible")
        if self.trace is not None:
            self.trace.append(("state", new))

    def dual_step(self, step: InductionStep) -> None:
        if self.cancel is not None and self.cancel.is_set():
            raise Cancelled("canonicalization cancelled")
        self.steps += 1
        if self.steps > self.budget:
            raise StepBudgetExceeded(f"more than {self.budget} induction steps")
        primal = dual_step_correspondence(step)
        self._record(primal, apply_step(self.cur, primal))

    def merge_two_element(self, c: Cycle) -> None:
        # a dual cycle [x | y] means the primal merge keeping y and removing x
        x = next(s.label for s in c if s.marker == B)
        y = next(s.label for s in c if s.marker == E)
        if x == y:
            raise NotRotational(f"dual has the cycle [{x} | {x}]")
        new, op = merge_intervals(self.cur, y, x)
        self._record(op, new)

    def merge_all(self) -> None:
        while True:
            cycles = dual(self.cur.scheme).cycles()
            if len(cycles) == 1:
                return
            pair = next((c for c in cycles if len(c) == 2), None)
            if pair is None:
                return
            self.merge_two_element(pair)

    def reduce_once(self, anchor: Sym) -> Sym:
        """Apply dual steps until the cycle holding ``anchor`` loses an element."""
        start = len(dual(self.cur.scheme).cycle_of(anchor))
        while True:
            ds = dual(self.cur.scheme)
            c0 = ds.cycle_of(anchor)
            if len(c0) < start or len(c0) <= 2:
                return anchor
            for step in _dual_plan(ds, c0):
                self.dual_step(step)
                anchor = _anchor_after(step)


def reduce_cycle_once(ire: FloatingIRE, c0: Optional[Sequence[Sym]] = None) -> Tuple[FloatingIRE, List[Op]]:
    """Shrink one dual cycle by one element.

    ``c0`` is a cycle of the dual scheme (or any element of it); by default
    the cycle with the least first element among those longer than two.
    """
    _require(ire)
    ds = dual(ire.scheme)
    if c0 is None:
        c0 = next((c for c in ds.cycles() if len(c) > 2), None)
        if c0 is None:
            return ire, []
    anchor = c0 if isinstance(c0, Sym) else tuple(c0)[0]
    runner = _Runner(ire, None, None, False, None)
    runner.reduce_once(anchor)
    return runner.cur, runner.ops


def _require(ire: FloatingIRE) -> None:
    if not is_irreducible(ire.scheme):
        raise NotIrreducible("scheme is reducible")
    if not is_rotational(ire.scheme):
        raise NotRotational("scheme is not rotational")
    if not ire.is_positive():
        raise NotRotational("lengths must be positive")


def _first_case(runner: _Runner) -> None:
    """Turn a single-cycle dual with a separate lambda chain into the canonical case."""
    s = runner.cur.scheme
    bb = [(x, s(x)) for x in s.symbols() if x.marker == B and s(x).marker == B]
    ee = [(x, s(x)) for x in s.symbols() if x.marker == E and s(x).marker == E]
    if len(bb) != 1 or len(ee) != 1:
        raise NotRotational("single-cycle dual without a unique beginning and ending junction")
    (ab, bb_), (ge, _) = bb[0], ee[0]
    if s.cycle_of(ab) == s.cycle_of(ge):
        return
    alpha, beta = ab.label, bb_.label
    kappa = two_row_render(s.cycle_of(ab))[1][0]
    lam = two_row_render(s.cycle_of(ge))[0][0]
    v = runner.cur.lengths
    if not (v[lam] == v[kappa] == v[alpha] + v[beta]):
        raise Inconsistent("first-case length relation fails")
    if runner.trace is not None:
        runner.trace.append(("first_case", dict(alpha=alpha, beta=beta, lam=lam, kappa=kappa, lengths=dict(v))))
    # the beta chain runs from beta along [next | cur] cycles to delta
    delta = s(ge).label
    links = {}
    for c in s.cycles():
        if len(c) == 2:
            links[next(x.label for x in c if x.marker == E)] = next(x.label for x in c if x.marker == B)
    count, cur = 1, beta
    while cur != delta:
        cur = links[cur]
        count += 1
    for _ in range(count):
        top = two_row_render(dual(runner.cur.scheme).cycles()[0])[0]
        runner.dual_step(InductionStep("le", FORWARD, top[0], alpha))


def canonicalize(ire: FloatingIRE, *, budget: Optional[int] = None, cancel=None,
                 check: bool = False, trace: Optional[list] = None) -> Tuple[CanonicalForm, Transcript]:
    """Canonical form of an irreducible rotational exchange plus the transcript reaching it.

    ``cancel`` may be any object with an ``is_set()`` method.  ``check``
    re-verifies rotationality and irreducibility after every operation.
    ``trace``, if given, collects intermediate states.
    """
    _require(ire)
    runner = _Runner(ire, budget, cancel, check, trace)
    while True:
        runner.merge_all()
        cycles = dual(runner.cur.scheme).cycles()
        if len(cycles) == 1:
            break
        anchor = next(c for c in cycles if len(c) > 2)[0]
        while len(dual(runner.cur.scheme).cycle_of(anchor)) > 2:
            anchor = runner.reduce_once(anchor)
    _first_case(runner)
    form = is_canonical(runner.cur)
    if form is None:
        raise Inconsistent(f"reduction ended outside canonical form: {runner.cur.scheme}")
    return form, Transcript(tuple(runner.ops))
