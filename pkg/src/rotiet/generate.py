"""Seeded random instances for tests and experiments."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Optional, Tuple

from .circle import ArcUnion, CircleRotation, ReturnMapResult, first_return_map
from .errors import Degenerate
from .scheme import Scheme, Sym, cycle_from_two_row


def labels(d: int) -> List[str]:
    return [f"x{i}" for i in range(d)]


def random_scheme(rng: random.Random, d: int) -> Scheme:
    """Uniformly random bijection of the doubled alphabet."""
    alpha = labels(d)
    syms = [Sym(a, m) for a in alpha for m in ("b", "e")]
    image = syms[:]
    rng.shuffle(image)
    return Scheme(alpha, dict(zip(syms, image)))


def random_zero_twist_scheme(rng: random.Random, d: int) -> Scheme:
    """Random scheme whose cycles are all two-row: beginnings and endings are
    each dealt into the same number of non-empty rows."""
    alpha = labels(d)
    k = rng.randint(1, d)
    tops, bottoms = alpha[:], alpha[:]
    rng.shuffle(tops)
    rng.shuffle(bottoms)

    def deal(seq):
        cuts = sorted(rng.sample(range(1, d), k - 1))
        return [seq[i:j] for i, j in zip([0] + cuts, cuts + [d])]

    rows = list(zip(deal(tops), deal(bottoms)))
    return Scheme.from_cycles([cycle_from_two_row(t, b) for t, b in rows], alphabet=alpha)


def random_rotation(rng: random.Random, min_den: int = 10 ** 5, max_den: int = 10 ** 6) -> CircleRotation:
    """Unit circle rotation by ``p/q`` in lowest terms with ``q >= min_den``."""
    while True:
        q = rng.randint(min_den, max_den)
        p = rng.randint(1, q - 1)
        if Fraction(p, q).denominator >= min_den:
            return CircleRotation(1, Fraction(p, q), 0)


def random_arcs(rng: random.Random, r: CircleRotation, max_arcs: int = 5, max_den: int = 1000) -> ArcUnion:
    """Up to ``max_arcs`` arcs with endpoints of denominator at most ``max_den``,
    kept away from the base point so the union never straddles it."""
    while True:
        n = rng.randint(1, max_arcs)
        den = rng.randint(2 * n + 2, max_den)
        ends = sorted(rng.sample(range(1, den), 2 * n))
        arcs = [(r.x0 + Fraction(ends[2 * i], den) * r.L, r.x0 + Fraction(ends[2 * i + 1], den) * r.L)
                for i in range(n)]
        try:
            return ArcUnion.build(arcs, r)
        except ValueError:
            continue


def random_return_map(rng: random.Random, max_arcs: int = 5, max_den: int = 1000,
                      min_q: int = 10 ** 5, max_d: Optional[int] = None) -> Tuple[CircleRotation, ArcUnion, ReturnMapResult]:
    """A strict (coincidence-free) first return map of a random rotation."""
    while True:
        r = random_rotation(rng, min_q)
        g = random_arcs(rng, r, max_arcs, max_den)
        try:
            res = first_return_map(r, g, strict=True)
        except Degenerate:
            continue
        if max_d is not None and len(res.ire.scheme) > max_d:
            continue
        return r, g, res
