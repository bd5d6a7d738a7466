"""Length vectors, endpoint vectors and the predicates built on them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Optional, Tuple, Union

from .errors import Inconsistent, KeyMismatch, Necessity, NotAllowed, NotPositive
from .exactmath import LinearSystem, in_row_space, nullspace_basis, positive_solution
from .scheme import B, Cycle, Scheme, Sym, b, dual, e, is_zero_twist

LengthVector = Dict[str, Fraction]
EndpointVector = Dict[Sym, Fraction]


def _check_keys(s: Scheme, v: Mapping[str, Fraction]) -> None:
    if set(v) != set(s.alphabet):
        raise KeyMismatch(f"length keys {sorted(v)} do not match alphabet {sorted(s.alphabet)}")


@dataclass(frozen=True)
class FloatingIRE:
    """A scheme together with an allowed length vector."""

    scheme: Scheme
    lengths: Mapping[str, Fraction]

    def __post_init__(self):
        _check_keys(self.scheme, self.lengths)
        v = {a: Fraction(self.lengths[a]) for a in self.scheme.alphabet}
        object.__setattr__(self, "lengths", v)
        if not is_allowed(self.scheme, v):
            raise NotAllowed("length vector is not allowed by the scheme")

    def __eq__(self, other):
        if not isinstance(other, FloatingIRE):
            return NotImplemented
        return self.scheme == other.scheme and self.lengths == other.lengths

    def __hash__(self):
        return hash((self.scheme, frozenset(self.lengths.items())))

    def is_positive(self) -> bool:
        return all(x > 0 for x in self.lengths.values())


@dataclass(frozen=True)
class FixedIRE:
    """A scheme together with an endpoint vector obeying the endpoint relation.

    The relation reads ``x[a.b] + x[a.e] = x[s(a.b)] + x[s(a.e)]`` for every label.
    """

    scheme: Scheme
    endpoints: Mapping[Sym, Fraction]

    def __post_init__(self):
        x = {Sym(*k): Fraction(val) for k, val in self.endpoints.items()}
        if set(x) != set(self.scheme.symbols()):
            raise KeyMismatch("endpoint keys do not match the doubled alphabet")
        object.__setattr__(self, "endpoints", x)
        s = self.scheme
        for a in s.alphabet:
            if x[b(a)] + x[e(a)] != x[s(b(a))] + x[s(e(a))]:
                raise Inconsistent(f"endpoint relation fails at label {a}")

    def lengths(self) -> LengthVector:
        return lengths_from_endpoints(self)

    def floating(self) -> FloatingIRE:
        return FloatingIRE(self.scheme, self.lengths())

    def beginning_interval(self, a: str) -> Tuple[Fraction, Fraction]:
        lo = self.endpoints[b(a)]
        return lo, self.endpoints[self.scheme(b(a))]

    def ending_interval(self, a: str) -> Tuple[Fraction, Fraction]:
        hi = self.endpoints[e(a)]
        return self.endpoints[self.scheme(e(a))], hi


def cycle_system(s: Scheme) -> LinearSystem:
    """One row per cycle: beginnings count +1, endings count -1."""
    rows = []
    for c in s.cycles():
        row: Dict[str, int] = {}
        for sym in c:
            row[sym.label] = row.get(sym.label, 0) + (1 if sym.marker == B else -1)
        rows.append(row)
    return LinearSystem(tuple(s.alphabet), tuple(rows))


def is_allowed(s: Scheme, v: Mapping[str, Fraction]) -> bool:
    _check_keys(s, v)
    return all(x == 0 for x in cycle_system(s).evaluate(v))


def endpoints_from_lengths(s: Scheme, v: Mapping[str, Fraction],
                           anchors: Optional[Mapping[Union[Cycle, Sym], Fraction]] = None) -> EndpointVector:
    """Walk every cycle from an anchored symbol, adding lengths at beginnings
    and subtracting them at endings.

    ``anchors`` maps a cycle (as returned by ``s.cycles()``) to the coordinate
    of its first symbol, or maps any symbol to its coordinate.  Unanchored
    cycles start at 0.
    """
    if not is_allowed(s, v):
        raise NotAllowed("length vector is not allowed by the scheme")
    anchors = dict(anchors or {})
    x: EndpointVector = {}
    for c in s.cycles():
        start, value = c[0], Fraction(0)
        if c in anchors:
            value = Fraction(anchors[c])
        else:
            hit = [sym for sym in c if sym in anchors]
            if len(hit) > 1:
                raise ValueError(f"several anchors given for one cycle: {hit}")
            if hit:
                start, value = hit[0], Fraction(anchors[hit[0]])
        cur = start
        while True:
            x[cur] = value
            value = value + v[cur.label] if cur.marker == B else value - v[cur.label]
            cur = s(cur)
            if cur == start:
                break
        assert value == x[start]
    return x


def lengths_from_endpoints(f: FixedIRE) -> LengthVector:
    s, x = f.scheme, f.endpoints
    out = {}
    for a in s.alphabet:
        fwd = x[s(b(a))] - x[b(a)]
        back = x[e(a)] - x[s(e(a))]
        if fwd != back:
            raise Inconsistent(f"lengths disagree at label {a}: {fwd} vs {back}")
        out[a] = fwd
    return out


def is_positive_scheme(s: Scheme) -> bool:
    return positive_solution(cycle_system(s)) is not None


def is_interval_exchange_scheme(s: Scheme) -> bool:
    return is_zero_twist(s) and is_positive_scheme(s)


def is_rotational(s: Scheme) -> bool:
    return is_interval_exchange_scheme(s) and is_interval_exchange_scheme(dual(s))


def equal_with_necessity(s: Scheme, a: str, c: str) -> bool:
    if a == c:
        return True
    return in_row_space({a: 1, c: -1}, cycle_system(s))


def sample_positive_allowed(s: Scheme) -> LengthVector:
    w = positive_solution(cycle_system(s))
    if w is None:
        raise NotPositive("scheme allows no positive length vector")
    return dict(w)


def allowed_with_unequal(s: Scheme, a: str, c: str) -> LengthVector:
    """A positive allowed vector whose entries at ``a`` and ``c`` differ."""
    if equal_with_necessity(s, a, c):
        raise Necessity(f"lengths of {a} and {c} are forced equal")
    v0 = sample_positive_allowed(s)
    if v0[a] != v0[c]:
        return v0
    sys = cycle_system(s)
    z = next(z for z in nullspace_basis(sys) if z[a] != z[c])
    neg = [v0[k] / (2 * -z[k]) for k in z if z[k] < 0]
    t = min(neg) if neg else Fraction(1)
    return {k: v0[k] + t * z[k] for k in s.alphabet}


# splittability ---------------------------------------------------------------


@dataclass(frozen=True)
class SplitCertificate:
    cycle: Cycle
    arc1: Tuple[Sym, ...]
    arc2: Tuple[Sym, ...]
    part1: frozenset
    part2: frozenset

    def verify(self, s: Scheme) -> bool:
        """Check the certificate directly against the definition."""
        if not self.part1 or not self.part2 or self.part1 & self.part2:
            return False
        if self.part1 | self.part2 != set(s.alphabet):
            return False
        if self.cycle not in s.cycles() or not self.arc1 or not self.arc2:
            return False
        k = len(self.cycle)
        i = self.cycle.index(self.arc1[0])
        joined = tuple(self.cycle[(i + j) % k] for j in range(k))
        if joined != self.arc1 + self.arc2:
            return False
        if any(x.label not in self.part1 for x in self.arc1):
            return False
        if any(x.label not in self.part2 for x in self.arc2):
            return False
        for c in s.cycles():
            if c == self.cycle:
                continue
            labels = {x.label for x in c}
            if not (labels <= self.part1 or labels <= self.part2):
                return False
        return True


def is_splittable(s: Scheme) -> Optional[SplitCertificate]:
    """Search every cycle and cut pair for a split certificate."""
    if not is_zero_twist(s):
        raise ValueError("splittability is only defined here for zero-twist schemes")
    cycles = s.cycles()
    for idx, c0 in enumerate(cycles):
        k = len(c0)
        if k < 2:
            continue
        others = [cc for j, cc in enumerate(cycles) if j != idx]
        # components of labels glued by the remaining cycles
        parent = {a: a for a in s.alphabet}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for cc in others:
            for sym in cc[1:]:
                ra, rb = find(cc[0].label), find(sym.label)
                if ra != rb:
                    parent[ra] = rb
        for start in range(k):
            for length in range(1, k):
                arc1 = tuple(c0[(start + j) % k] for j in range(length))
                arc2 = tuple(c0[(start + j) % k] for j in range(length, k))
                l1 = {x.label for x in arc1}
                l2 = {x.label for x in arc2}
                if l1 & l2:
                    continue
                r1 = {find(a) for a in l1}
                r2 = {find(a) for a in l2}
                if r1 & r2:
                    continue
                part1 = frozenset(a for a in s.alphabet if find(a) not in r2)
                part2 = frozenset(a for a in s.alphabet if find(a) in r2)
                if part1 and part2:
                    return SplitCertificate(c0, arc1, arc2, part1, part2)
    return None


def obstruction_row(s: Scheme) -> Optional[Dict[str, Fraction]]:
    """A non-negative combination of cycle rows with no positive solution, if any."""
    from .exactmath import positivity_obstruction

    return positivity_obstruction(cycle_system(s))


__all__ = [
    "LengthVector", "EndpointVector", "FloatingIRE", "FixedIRE", "SplitCertificate",
    "cycle_system", "is_allowed", "endpoints_from_lengths", "lengths_from_endpoints",
    "is_positive_scheme", "is_interval_exchange_scheme", "is_rotational",
    "equal_with_necessity", "is_splittable", "sample_positive_allowed", "allowed_with_unequal",
    "obstruction_row",
]
