import io
import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import SIGMA_TEXT, return_map_corpus
from rotiet.canonical import CanonicalForm
from rotiet.circle import ArcUnion, CircleRotation
from rotiet.cli import dumps_json, format_row, run
from rotiet.errors import ParseError, ValidationError
from rotiet.generate import random_scheme
from rotiet.induction import Transcript, replay
from rotiet.lengths import sample_positive_allowed
from rotiet.scheme import Scheme, Sym, b, e
from rotiet.textio import (format_document, format_rotation, format_scheme, parse_canonical, parse_rotation,
                           parse_scheme)


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


# parsing ---------------------------------------------------------------------


def test_parse_examples(sigma):
    doc = parse_scheme("[a b | b a]")
    assert doc.scheme == Scheme.from_cycles([(b("a"), b("b"), e("a"), e("b"))])
    assert parse_scheme(SIGMA_TEXT).scheme == sigma
    assert parse_scheme("(a.b a.e)").scheme == Scheme.from_cycles([(b("a"), e("a"))])


def test_parse_lengths_and_endpoints(sigma):
    doc = parse_scheme("# comment\n[g a d | d b]\n  [b | a g]  # trailing\nLEN a=1 b=2 g=1 d=1\n")
    assert doc.lengths == {"a": 1, "b": 2, "g": 1, "d": 1}
    assert doc.floating().scheme == sigma
    doc = parse_scheme("(a.b a.e) POS a.b=0 a.e=0")
    assert doc.fixed().endpoints == {b("a"): 0, e("a"): 0}


@pytest.mark.parametrize("text,line,column", [
    ("(a.b a.e", 1, 9),
    ("[a b | b a]\n[c | c", 2, 7),
    ("[a b b a]", 1, 1),
    ("[a | a]\n(a.x)", 2, 2),
    ("[a | a] LEN a=1.5", 1, 16),
    ("[a | a] LEN a=1 LEN a=2", 1, 17),
    ("[a | a] @", 1, 9),
    ("", 1, 1),
    ("[α | α]", 1, 2),
])
def test_parse_errors_carry_position(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_scheme(text)
    assert (info.value.line, info.value.column) == (line, column)


@pytest.mark.parametrize("text", [
    "[a b | b]",
    "[a | a] [a | b] [b | b]",
    "[a | a] LEN b=1",
    "[a b | b a] LEN a=1",
    "[g a d | d b] [b | a g] LEN a=1 b=1 g=1 d=1",
    "(a.b a.e) POS a.b=0 a.e=1 b.b=0",
])
def test_validation_errors(text):
    with pytest.raises(ValidationError):
        parse_scheme(text)


def test_format_examples(sigma):
    assert format_scheme(parse_scheme("[a b | b a]").scheme) == "[a b | b a]"
    assert format_scheme(sigma) == "[g a d | d b] [b | a g]"
    assert format_scheme(parse_scheme("(a.e a.b)").scheme) == "[a | a]"
    assert format_scheme(parse_scheme("(a.b) (a.e)").scheme) == "(a.b) (a.e)"
    assert format_scheme(parse_scheme("(x10.b x2.b) (x10.e x2.e)").scheme) == "(x2.b x10.b) (x2.e x10.e)"


schemes = st.builds(random_scheme, st.randoms(use_true_random=False), st.integers(1, 7))


@settings(max_examples=300, deadline=None)
@given(schemes)
def test_format_parse_round_trip(s):
    text = format_scheme(s)
    assert parse_scheme(text).scheme == s
    assert format_scheme(parse_scheme(text).scheme) == text


@settings(max_examples=100, deadline=None)
@given(schemes)
def test_document_round_trip(s):
    try:
        v = sample_positive_allowed(s)
    except Exception:
        return
    text = format_document(s, v)
    doc = parse_scheme(text)
    assert (doc.scheme, doc.lengths) == (s, v)
    assert format_document(doc.scheme, doc.lengths) == text


def test_rotation_format_round_trip():
    r = CircleRotation(9, 4, -1)
    g = ArcUnion(((Fraction(-1), Fraction(2)), (Fraction(5, 2), Fraction(3))))
    text = format_rotation(r, g)
    assert text == "ROT L=9 M=4 X0=-1\nARCS [-1,2) [5/2,3)\n"
    assert parse_rotation(text) == (r, g)
    with pytest.raises(ParseError):
        parse_rotation("ROT L=1 M=1/3\n")
    with pytest.raises(ParseError):
        parse_rotation("ROT L=1 M=x\nARCS [0,1/2)\n")
    with pytest.raises(ParseError) as info:
        parse_rotation("ROT L=1 M=1/3\nARCS [0,1/2) junk\n")
    assert info.value.line == 2


def test_canonical_line_round_trip():
    form = CanonicalForm(("p", "q"), ("r",), Fraction(1, 2), 3)
    assert parse_canonical(form.to_text()) == form
    with pytest.raises(ParseError):
        parse_canonical("CANON m=3 n=1 alpha=p,q beta=r v_alpha=1/2 v_beta=3")


def test_format_row():
    assert format_row({"g": Fraction(1), "d": Fraction(1), "a": Fraction(0)}) == "d + g = 0"
    assert format_row({"x2": Fraction(2), "x10": Fraction(1)}) == "2*x2 + x10 = 0"


# command line ----------------------------------------------------------------


def test_check_counterexample(tmp_path):
    code, out, _ = invoke("check", write(tmp_path, "s.txt", SIGMA_TEXT + "\nLEN a=1 b=2 g=1 d=1\n"))
    assert code == 0
    assert "rotational: true" in out and "splittable: false" in out
    assert "twist total pair: 0" in out


def test_check_after_inverse_step(tmp_path):
    code, out, _ = invoke("check", write(tmp_path, "sp.txt", "[a d | d b] [g b | a g]\nLEN a=2 b=2 g=1 d=1\n"))
    assert code == 0
    assert "rotational: false" in out and "interval exchange: true" in out
    assert "dual constraint: d + g = 0" in out


def test_check_json_is_stable(tmp_path):
    code, out, _ = invoke("--json", "check", write(tmp_path, "s.txt", SIGMA_TEXT))
    data = json.loads(out)
    assert code == 0 and data["format"] == 1 and data["rotational"] is True
    assert dumps_json({k: v for k, v in data.items() if k != "format"}) == out
    assert out.isascii()


def test_dual_command(tmp_path):
    code, out, _ = invoke("dual", write(tmp_path, "s.txt", SIGMA_TEXT))
    assert code == 0 and parse_scheme(out).scheme == Scheme.from_two_row([("ab", "gbd"), ("dg", "a")])


def test_canonicalize_command(tmp_path, sigma_ire):
    t_path = str(tmp_path / "t.txt")
    code, out, _ = invoke("canonicalize", write(tmp_path, "s.txt", SIGMA_TEXT + " LEN a=1 b=2 g=1 d=1"), "-t", t_path)
    assert code == 0
    form = parse_canonical(out.splitlines()[0])
    with open(t_path) as fh:
        t = Transcript.from_text(fh.read())
    assert replay(form.expand(), t, direction="backward") == sigma_ire


def test_canonicalize_without_lengths_uses_witness(tmp_path):
    code, out, err = invoke("canonicalize", write(tmp_path, "s.txt", SIGMA_TEXT))
    assert code == 0 and out.startswith("CANON") and "no LEN block" in err


def test_realize_and_first_return(tmp_path):
    src = write(tmp_path, "s.txt", SIGMA_TEXT + " LEN a=1 b=2 g=1 d=1")
    plot = tmp_path / "plot.json"
    code, out, _ = invoke("realize", src, "--emit-plot-data", str(plot))
    assert code == 0 and out.startswith("ROT ")
    data = json.loads(plot.read_text())
    assert data["format"] == 1 and len(data["intervals"]) == 4
    code, out, _ = invoke("first-return", write(tmp_path, "r.txt", out))
    assert code == 0
    lines = out.splitlines()
    doc = parse_scheme("\n".join(lines[:3]))
    assert doc.fixed().floating().lengths == doc.lengths
    assert lines[3].startswith("TIMES ") and lines[4].startswith("DUAL ")


def test_verify_roundtrip_on_generated_exchanges(tmp_path):
    for i, (_, _, res) in enumerate(return_map_corpus(5, seed=41, max_d=8)):
        fl = res.ire.floating()
        code, out, _ = invoke("verify-roundtrip", write(tmp_path, f"g{i}.txt", format_document(fl.scheme, fl.lengths)))
        assert code == 0 and "roundtrip: ok" in out


def test_exit_codes(tmp_path):
    assert invoke("check", write(tmp_path, "bad.txt", "(a.b a.e"))[0] == 2
    assert invoke("check", str(tmp_path / "missing.txt"))[0] == 2
    assert invoke("check", write(tmp_path, "inv.txt", "[a b | b]"))[0] == 1
    code, _, err = invoke("realize", write(tmp_path, "sp.txt", "[a d | d b] [g b | a g]\nLEN a=2 b=2 g=1 d=1\n"))
    assert code == 1 and "NotRotational" in err
    code, _, err = invoke("first-return", "--strict", write(tmp_path, "r.txt", "ROT L=1 M=1/4\nARCS [0,1/2)\n"))
    assert code == 1 and "Degenerate" in err
