import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import return_map_corpus
from rotiet.errors import BadSplit, NonPositiveResult, NotApplicable, NotMergeable, ParseError, ReplayMismatch
from rotiet.generate import random_scheme
from rotiet.induction import (FORWARD, INVERSE, KINDS, InductionStep, MergeOp, Transcript, apply_step,
                              apply_to_scheme, dual_step_correspondence, merge_applicable, merge_intervals,
                              preserves_zero_twist_inverse, replay, split_intervals, step_applicable)
from rotiet.exactmath import nullspace_basis
from rotiet.lengths import (FloatingIRE, cycle_system, is_allowed, is_interval_exchange_scheme, is_rotational,
                            sample_positive_allowed)
from rotiet.scheme import Scheme, Sym, dual, is_zero_twist, twist_total_pair


def all_steps(s, direction=None):
    dirs = (FORWARD, INVERSE) if direction is None else (direction,)
    for kind, d, (a, c) in itertools.product(KINDS, dirs, itertools.permutations(s.alphabet, 2)):
        step = InductionStep(kind, d, a, c)
        if step_applicable(s, step):
            yield step


def all_schemes(labels):
    syms = [Sym(a, m) for a in labels for m in "be"]
    for image in itertools.permutations(syms):
        yield Scheme(labels, dict(zip(syms, image)))


def test_counterexample_inverse_step(sigma_ire):
    step = InductionStep("le", INVERSE, "g", "a")
    assert step_applicable(sigma_ire.scheme, step)
    assert preserves_zero_twist_inverse(sigma_ire.scheme, step)
    out = apply_step(sigma_ire, step)
    assert out.lengths == {"a": 2, "b": 2, "g": 1, "d": 1}
    assert out.scheme == Scheme.from_two_row([("ad", "db"), ("gb", "ag")])


def test_zero_twist_predicate_failure_example():
    """Three-letter instances where the predicate fails: some cycle of the result
    or of its dual is twisted, while the pair total itself stays at zero."""
    failures = 0
    for s in all_schemes("abc"):
        if not (is_zero_twist(s) and is_zero_twist(dual(s))):
            continue
        for step in all_steps(s, INVERSE):
            if not preserves_zero_twist_inverse(s, step):
                t = apply_to_scheme(s, step)
                assert not (is_zero_twist(t) and is_zero_twist(dual(t)))
                assert twist_total_pair(t) == twist_total_pair(s) == 0
                failures += 1
    assert failures > 0


def test_zero_twist_predicate_matches_direct_computation():
    for labels in ("ab", "abc"):
        for s in all_schemes(labels):
            if not (is_zero_twist(s) and is_zero_twist(dual(s))):
                continue
            for step in all_steps(s, INVERSE):
                t = apply_to_scheme(s, step)
                assert preserves_zero_twist_inverse(s, step) == (is_zero_twist(t) and is_zero_twist(dual(t)))


def test_zero_twist_predicate_rejects_forward():
    s = Scheme.from_two_row([("ab", "ba")])
    step = next(all_steps(s, FORWARD))
    with pytest.raises(NotApplicable):
        preserves_zero_twist_inverse(s, step)


def test_quoted_correspondences():
    assert dual_step_correspondence(InductionStep("lb", FORWARD, "x", "y")) == InductionStep("re", INVERSE, "x", "y")
    assert dual_step_correspondence(InductionStep("le", FORWARD, "x", "y")) == InductionStep("le", INVERSE, "y", "x")


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("direction", (FORWARD, INVERSE))
def test_correspondence_is_involution(kind, direction):
    step = InductionStep(kind, direction, "x", "y")
    assert dual_step_correspondence(dual_step_correspondence(step)) == step


def test_correspondence_commutes_with_duality_exhaustively():
    for labels in ("ab", "abc"):
        for s in all_schemes(labels):
            ds = dual(s)
            for kind, d, (a, c) in itertools.product(KINDS, (FORWARD, INVERSE), itertools.permutations(labels, 2)):
                step = InductionStep(kind, d, a, c)
                other = dual_step_correspondence(step)
                assert step_applicable(s, step) == step_applicable(ds, other)
                if step_applicable(s, step):
                    assert dual(apply_to_scheme(s, step)) == apply_to_scheme(ds, other)


def test_forward_guard(sigma_ire):
    ire = FloatingIRE(Scheme.from_two_row([("ab", "ba")]), {"a": 1, "b": 1})
    for step in all_steps(ire.scheme, FORWARD):
        with pytest.raises(NonPositiveResult):
            apply_step(ire, step)
        assert apply_step(ire, step, guard=False).lengths[step.a if step.kind in ("rb", "lb") else step.b] == 0


def test_not_applicable(sigma_ire):
    with pytest.raises(NotApplicable):
        apply_step(sigma_ire, InductionStep("le", FORWARD, "g", "a"))
    with pytest.raises(ValueError):
        step_applicable(sigma_ire.scheme, InductionStep("xx", FORWARD, "g", "a"))


def test_merge_and_split(sigma_ire):
    two = FloatingIRE(Scheme.from_two_row([(("p", "q", "r"), ("r", "q", "p"))]), {"p": 1, "q": 2, "r": 3})
    assert not merge_applicable(two.scheme, "p", "q")
    chain = FloatingIRE(Scheme.from_two_row([(("p", "q"), ("q", "p")), (("r",), ("r",))]), {"p": 1, "q": 2, "r": 3})
    with pytest.raises(NotMergeable):
        merge_intervals(chain, "p", "r")
    split = split_intervals(FloatingIRE(Scheme.from_two_row([("pq", "qp")]), {"p": 3, "q": 2}), MergeOp("p", "x", 1))
    assert split.lengths == {"p": 2, "q": 2, "x": 1}
    back, op = merge_intervals(split, "p", "x")
    assert op == MergeOp("p", "x", 1)
    assert back == FloatingIRE(Scheme.from_two_row([("pq", "qp")]), {"p": 3, "q": 2})
    with pytest.raises(BadSplit):
        split_intervals(back, MergeOp("p", "x", 3))
    with pytest.raises(BadSplit):
        split_intervals(back, MergeOp("p", "q", 1))


def test_transcript_text_round_trip():
    t = Transcript((InductionStep("le", INVERSE, "g", "a"), MergeOp("a", "b", Fraction(3, 7))))
    assert t.to_text() == "STEP le inverse g a\nMERGE a b 3/7\n"
    assert Transcript.from_text(t.to_text()) == t
    with pytest.raises(ParseError) as info:
        Transcript.from_text("STEP le inverse g a\nSTEP zz forward a b\n")
    assert info.value.line == 2


def test_replay(sigma_ire, sigma_prime_ire):
    t = Transcript((InductionStep("le", INVERSE, "g", "a"),))
    assert replay(sigma_ire, Transcript()) == sigma_ire
    assert replay(sigma_ire, t) == sigma_prime_ire
    assert replay(sigma_prime_ire, t, direction="backward") == sigma_ire
    bad = Transcript((InductionStep("le", INVERSE, "g", "a"), InductionStep("le", INVERSE, "g", "a")))
    with pytest.raises(ReplayMismatch) as info:
        replay(sigma_ire, bad)
    assert info.value.index == 1


# properties ------------------------------------------------------------------

schemes = st.builds(random_scheme, st.randoms(use_true_random=False), st.integers(2, 6))


@settings(max_examples=200, deadline=None)
@given(schemes)
def test_steps_keep_allowed_lengths_and_invert(s):
    for step in all_steps(s):
        t = apply_to_scheme(s, step)
        assert apply_to_scheme(t, step.inverted()) == s
        # lengths moved by the table stay allowed by the new scheme
        for z in nullspace_basis(cycle_system(s)):
            v = dict(z)
            out = apply_step(FloatingIRE(s, v), step, guard=False)
            assert is_allowed(t, out.lengths)
            changed = [a for a in s.alphabet if out.lengths[a] != v[a]]
            assert len(changed) <= 1
            back = apply_step(out, step.inverted(), guard=False)
            assert back.lengths == v


@settings(max_examples=200, deadline=None)
@given(schemes)
def test_forward_steps_keep_exchanges_untwisted(s):
    if not is_interval_exchange_scheme(s):
        return
    ire = FloatingIRE(s, sample_positive_allowed(s))
    for step in all_steps(s, FORWARD):
        try:
            out = apply_step(ire, step)
        except NonPositiveResult:
            continue
        assert is_zero_twist(out.scheme)


@settings(max_examples=200, deadline=None)
@given(schemes)
def test_steps_preserve_twist_total_pair(s):
    for step in all_steps(s):
        assert twist_total_pair(apply_to_scheme(s, step)) == twist_total_pair(s)


def test_forward_steps_preserve_rotationality_on_return_maps():
    for _, _, res in return_map_corpus(30, seed=11, max_d=8):
        ire = res.ire.floating()
        for step in all_steps(ire.scheme, FORWARD):
            try:
                out = apply_step(ire, step)
            except NonPositiveResult:
                continue
            assert is_rotational(out.scheme)
            assert sum(out.lengths.values()) < sum(ire.lengths.values())
