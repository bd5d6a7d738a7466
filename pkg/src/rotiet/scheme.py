"""Schemes: permutations of the doubled alphabet and their combinatorics.

A label ``a`` contributes two symbols, ``a.b`` (beginning) and ``a.e``
(ending).  A :class:`Scheme` is a bijection of the set of all such symbols.
Cycles are tuples of symbols read along the permutation.

A zero-twist cycle ``(a1.b, ..., am.b, bn.e, ..., b1.e)`` is written in
two-row form as ``[a1 ... am | b1 ... bn]``: the top row lists beginnings left
to right, the bottom row lists endings left to right.
"""

from __future__ import annotations

from typing import Dict, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .errors import NotTwoRow, ValidationError

B = "b"
E = "e"


class Sym(NamedTuple):
    label: str
    marker: str

    def __str__(self):
        return f"{self.label}.{self.marker}"

    def flip(self) -> "Sym":
        return Sym(self.label, E if self.marker == B else B)


def b(label: str) -> Sym:
    return Sym(label, B)


def e(label: str) -> Sym:
    return Sym(label, E)


Cycle = Tuple[Sym, ...]


class Scheme:
    """Immutable bijection of ``alphabet x {b, e}``.

    Equality and hashing depend only on the permutation, not on the order in
    which the alphabet was listed.
    """

    __slots__ = ("alphabet", "_perm", "_inv", "_cycles", "_hash")

    def __init__(self, alphabet: Iterable[str], perm: Mapping[Sym, Sym]):
        alphabet = tuple(alphabet)
        if len(set(alphabet)) != len(alphabet):
            raise ValidationError("duplicate labels in alphabet")
        if not alphabet:
            raise ValidationError("empty alphabet")
        domain = {Sym(a, m) for a in alphabet for m in (B, E)}
        perm = {Sym(*k): Sym(*v) for k, v in perm.items()}
        if set(perm) != domain:
            raise ValidationError("permutation domain is not the doubled alphabet")
        if set(perm.values()) != domain:
            raise ValidationError("permutation is not a bijection of the doubled alphabet")
        self.alphabet = alphabet
        self._perm = perm
        self._inv = {v: k for k, v in perm.items()}
        self._cycles = None
        self._hash = None

    # construction -------------------------------------------------------

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[Sym]], alphabet: Optional[Sequence[str]] = None) -> "Scheme":
        perm = {}
        seen_labels: List[str] = []
        for cyc in cycles:
            cyc = [Sym(*s) for s in cyc]
            if not cyc:
                raise ValidationError("empty cycle")
            for i, s in enumerate(cyc):
                if s in perm:
                    raise ValidationError(f"symbol {s} appears twice")
                perm[s] = cyc[(i + 1) % len(cyc)]
                if s.label not in seen_labels:
                    seen_labels.append(s.label)
        if alphabet is None:
            alphabet = seen_labels
        return cls(alphabet, perm)

    @classmethod
    def from_two_row(cls, rows: Iterable[Tuple[Sequence[str], Sequence[str]]],
                     alphabet: Optional[Sequence[str]] = None) -> "Scheme":
        """Build from two-row cycles ``[(top, bottom), ...]``."""
        return cls.from_cycles((cycle_from_two_row(t, bt) for t, bt in rows), alphabet)

    # permutation access -------------------------------------------------

    def __call__(self, s: Sym) -> Sym:
        return self._perm[s]

    def inverse(self, s: Sym) -> Sym:
        return self._inv[s]

    @property
    def perm(self) -> Dict[Sym, Sym]:
        return dict(self._perm)

    def symbols(self) -> List[Sym]:
        return [Sym(a, m) for a in self.alphabet for m in (B, E)]

    def __len__(self):
        return len(self.alphabet)

    def __eq__(self, other):
        if not isinstance(other, Scheme):
            return NotImplemented
        return self._perm == other._perm

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._perm.items()))
        return self._hash

    def __repr__(self):
        return f"Scheme({' '.join(_cycle_repr(c) for c in self.cycles())})"

    def sort_key(self, s: Sym) -> Tuple[int, int]:
        return (self.alphabet.index(s.label), 0 if s.marker == B else 1)

    def cycles(self) -> List[Cycle]:
        """Disjoint cycles, each rotated to start at its least symbol, sorted."""
        if self._cycles is None:
            order = {a: i for i, a in enumerate(self.alphabet)}

            def key(s):
                return (order[s.label], s.marker)

            seen = set()
            out = []
            for start in sorted(self._perm, key=key):
                if start in seen:
                    continue
                cyc = [start]
                seen.add(start)
                nxt = self._perm[start]
                while nxt != start:
                    cyc.append(nxt)
                    seen.add(nxt)
                    nxt = self._perm[nxt]
                out.append(tuple(cyc))
            self._cycles = out
        return list(self._cycles)

    def cycle_of(self, s: Sym) -> Cycle:
        for c in self.cycles():
            if s in c:
                return c
        raise KeyError(s)

    def image(self, labels: Iterable[str]) -> set:
        """Image under the permutation of ``labels x {b, e}``."""
        return {self._perm[Sym(a, m)] for a in labels for m in (B, E)}

    def relabel(self, mapping: Mapping[str, str]) -> "Scheme":
        perm = {Sym(mapping[k.label], k.marker): Sym(mapping[v.label], v.marker) for k, v in self._perm.items()}
        return Scheme([mapping[a] for a in self.alphabet], perm)


def _cycle_repr(c: Cycle) -> str:
    return "(" + " ".join(map(str, c)) + ")"


def cycle_from_two_row(top: Sequence[str], bottom: Sequence[str]) -> Cycle:
    return tuple([b(a) for a in top] + [e(a) for a in reversed(bottom)])


def cycles(s: Scheme) -> List[Cycle]:
    return s.cycles()


def dual(s: Scheme) -> Scheme:
    """The dual scheme: ``dual(a.b) = s(a.e)`` and ``dual(a.e) = s(a.b)``."""
    perm = {}
    for a in s.alphabet:
        perm[b(a)] = s(e(a))
        perm[e(a)] = s(b(a))
    return Scheme(s.alphabet, perm)


def twist_number(c: Sequence[Sym]) -> int:
    """Count of beginning-followed-by-ending positions in the cycle, minus one."""
    k = len(c)
    return sum(1 for i in range(k) if c[i].marker == B and c[(i + 1) % k].marker == E) - 1


def twist_total(s: Scheme) -> int:
    return sum(twist_number(c) for c in s.cycles())


def twist_total_pair(s: Scheme) -> int:
    return twist_total(s) + twist_total(dual(s))


def is_zero_twist(s: Scheme) -> bool:
    return all(twist_number(c) == 0 for c in s.cycles())


def is_irreducible(s: Scheme) -> bool:
    """No proper non-empty sub-alphabet is mapped onto itself (union-find on labels)."""
    parent = {a: a for a in s.alphabet}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k, v in s.perm.items():
        ra, rb = find(k.label), find(v.label)
        if ra != rb:
            parent[ra] = rb
    return len({find(a) for a in s.alphabet}) == 1


def two_row_render(c: Sequence[Sym]) -> Tuple[List[str], List[str]]:
    """Split a zero-twist cycle into its (top, bottom) label rows."""
    k = len(c)
    if twist_number(c) != 0:
        raise NotTwoRow(f"cycle {_cycle_repr(tuple(c))} has twist number {twist_number(c)}")
    # start at the beginning element that follows an ending element
    start = next(i for i in range(k) if c[i].marker == B and c[i - 1].marker == E)
    rot = [c[(start + i) % k] for i in range(k)]
    top = [s.label for s in rot if s.marker == B]
    bottom = [s.label for s in reversed(rot) if s.marker == E]
    return top, bottom


def relabelings(s1: Scheme, s2: Scheme) -> Iterator[Dict[str, str]]:
    """Every label bijection carrying ``s1`` onto ``s2`` (backtracking search)."""
    if len(s1) != len(s2):
        return
    if sorted(map(len, s1.cycles())) != sorted(map(len, s2.cycles())):
        return
    labels1 = list(s1.alphabet)
    labels2 = list(s2.alphabet)

    def propagate(mapping, seed_a, seed_b):
        trail = []
        stack = [(seed_a, seed_b)]
        used = set(mapping.values())
        while stack:
            x, y = stack.pop()
            if x in mapping:
                if mapping[x] != y:
                    return None, trail
                continue
            if y in used:
                return None, trail
            mapping[x] = y
            used.add(y)
            trail.append(x)
            for m in (B, E):
                img1, img2 = s1(Sym(x, m)), s2(Sym(y, m))
                pre1, pre2 = s1.inverse(Sym(x, m)), s2.inverse(Sym(y, m))
                if img1.marker != img2.marker or pre1.marker != pre2.marker:
                    return None, trail
                stack.append((img1.label, img2.label))
                stack.append((pre1.label, pre2.label))
        return mapping, trail

    def search(mapping):
        free = [a for a in labels1 if a not in mapping]
        if not free:
            yield dict(mapping)
            return
        a = free[0]
        used = set(mapping.values())
        for cand in labels2:
            if cand in used:
                continue
            result, trail = propagate(mapping, a, cand)
            if result is not None:
                yield from search(mapping)
            for x in trail:
                del mapping[x]

    yield from search({})


def scheme_equal_up_to_relabeling(s1: Scheme, s2: Scheme) -> Optional[Dict[str, str]]:
    return next(relabelings(s1, s2), None)
