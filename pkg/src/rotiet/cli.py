"""Command-line front end.

Exit status is 0 on success, 1 when the input is well formed but fails
validation, and 2 when it cannot be read or parsed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .canonical import canonicalize
from .circle import (ReturnMapResult, dual_from_return_map, first_return_map, realize_detailed,
                     shift_equivalence)
from .errors import IREError, ParseError
from .exactmath import format_rational
from .lengths import (FloatingIRE, is_interval_exchange_scheme, is_positive_scheme, is_rotational,
                      is_splittable, obstruction_row, sample_positive_allowed)
from .scheme import Scheme, dual, is_irreducible, is_zero_twist, twist_number, twist_total_pair
from .textio import (SchemeDocument, format_cycle, format_document, format_lengths, format_rotation,
                     format_scheme, natural_key, parse_rotation, parse_scheme, cycle_sort_key)

JSON_FORMAT = 1


class _Out:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines: List[str] = []
        self.data: Dict = {}

    def put(self, key: str, value, text: Optional[str] = None):
        self.data[key] = value
        if text is not None:
            self.lines.append(text)

    def render(self) -> str:
        if self.as_json:
            return dumps_json(self.data)
        return "".join(f"{line}\n" for line in self.lines)


def dumps_json(data: Dict) -> str:
    payload = {"format": JSON_FORMAT, **data}
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


def format_row(row: Dict[str, Fraction]) -> str:
    terms = []
    for label in sorted(row, key=natural_key):
        c = row[label]
        if c == 0:
            continue
        terms.append(label if c == 1 else f"{format_rational(c)}*{label}")
    return " + ".join(terms) + " = 0"


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _lengths_of(doc: SchemeDocument, args) -> FloatingIRE:
    if doc.lengths is not None:
        return doc.floating()
    v = sample_positive_allowed(doc.scheme)
    print(f"note: no LEN block, using {format_lengths(v)}", file=args.stderr)
    return FloatingIRE(doc.scheme, v)


def _exact(v: Dict[str, Fraction]) -> Dict[str, str]:
    return {k: format_rational(x) for k, x in v.items()}


def _sorted_cycles(s: Scheme):
    return sorted(s.cycles(), key=cycle_sort_key)


# subcommands -----------------------------------------------------------------


def cmd_check(args, out: _Out) -> int:
    doc = parse_scheme(_read(args.file))
    s = doc.scheme
    cyc = _sorted_cycles(s)
    out.put("cycles", [format_cycle(c) for c in cyc], "cycles: " + " ".join(format_cycle(c) for c in cyc))
    twists = [twist_number(c) for c in cyc]
    out.put("twist_numbers", twists, "twist numbers: " + " ".join(map(str, twists)))
    total = twist_total_pair(s)
    out.put("twist_total_pair", total, f"twist total pair: {total}")
    flags = {
        "irreducible": is_irreducible(s),
        "positive": is_positive_scheme(s),
        "interval_exchange": is_interval_exchange_scheme(s),
        "rotational": is_rotational(s),
    }
    for key, val in flags.items():
        out.put(key, val, f"{key.replace('_', ' ')}: {str(val).lower()}")
    if is_zero_twist(s):
        cert = is_splittable(s)
        if cert is None:
            out.put("splittable", None, "splittable: false")
        else:
            info = {"cycle": format_cycle(cert.cycle),
                    "arc1": [str(x) for x in cert.arc1], "arc2": [str(x) for x in cert.arc2],
                    "part1": sorted(cert.part1, key=natural_key), "part2": sorted(cert.part2, key=natural_key)}
            out.put("splittable", info,
                    f"splittable: true arcs ({' '.join(info['arc1'])}) ({' '.join(info['arc2'])}) "
                    f"labels {{{','.join(info['part1'])}}} {{{','.join(info['part2'])}}}")
    else:
        out.put("splittable", None, "splittable: n/a (twisted cycles)")
    ds = dual(s)
    out.put("dual", format_scheme(ds), f"dual: {format_scheme(ds)}")
    witness = None
    if not flags["positive"]:
        witness = ("scheme", obstruction_row(s))
    elif flags["interval_exchange"] and not is_positive_scheme(ds):
        witness = ("dual", obstruction_row(ds))
    if witness is not None:
        which, row = witness
        out.put("obstruction", {"scheme": which, "row": _exact(row)}, f"{which} constraint: {format_row(row)}")
    if doc.lengths is not None:
        out.put("lengths", _exact(doc.lengths), format_lengths(doc.lengths))
    return 0


def cmd_dual(args, out: _Out) -> int:
    doc = parse_scheme(_read(args.file))
    ds = dual(doc.scheme)
    out.put("dual", format_scheme(ds), format_scheme(ds))
    return 0


def cmd_canonicalize(args, out: _Out) -> int:
    doc = parse_scheme(_read(args.file))
    form, transcript = canonicalize(_lengths_of(doc, args))
    out.put("canonical", {"alpha": list(form.alphas), "beta": list(form.betas),
                          "v_alpha": format_rational(form.v_alpha), "v_beta": format_rational(form.v_beta)},
            form.to_text())
    ops = [str(op) for op in transcript]
    if args.transcript:
        with open(args.transcript, "w", encoding="ascii") as fh:
            fh.write(transcript.to_text())
        out.put("transcript_file", args.transcript)
        out.put("transcript_length", len(ops), f"transcript: {len(ops)} operations written to {args.transcript}")
    else:
        out.put("transcript", ops, "\n".join(ops) if ops else None)
    return 0


def _plot_data(rot, arcs, fixed) -> Dict:
    def pair(lo, hi):
        return {"exact": [format_rational(lo), format_rational(hi)], "float": [float(lo), float(hi)]}

    data = {"circle": {"x0": format_rational(rot.x0), "L": format_rational(rot.L), "M": format_rational(rot.M)},
            "arcs": [pair(lo, hi) for lo, hi in arcs.arcs]}
    if fixed is not None:
        data["intervals"] = [{"label": a, "beginning": pair(*fixed.beginning_interval(a)),
                              "ending": pair(*fixed.ending_interval(a))} for a in fixed.scheme.alphabet]
    return data


def _emit_plot(args, rot, arcs, fixed=None) -> None:
    if getattr(args, "emit_plot_data", None):
        with open(args.emit_plot_data, "w", encoding="ascii") as fh:
            fh.write(dumps_json(_plot_data(rot, arcs, fixed)))


def cmd_realize(args, out: _Out) -> int:
    doc = parse_scheme(_read(args.file))
    real = realize_detailed(_lengths_of(doc, args))
    text = format_rotation(real.rotation, real.arcs).rstrip("\n")
    out.put("rotation", {"L": format_rational(real.rotation.L), "M": format_rational(real.rotation.M),
                         "X0": format_rational(real.rotation.x0)})
    out.put("arcs", [[format_rational(lo), format_rational(hi)] for lo, hi in real.arcs.arcs], text)
    out.put("labels", dict(real.labels))
    if args.emit_plot_data:
        _emit_plot(args, real.rotation, real.arcs, first_return_map(real.rotation, real.arcs).ire)
    return 0


def _return_map_report(res: ReturnMapResult, out: _Out) -> None:
    fixed = res.ire
    v = fixed.lengths()
    out.put("scheme", format_scheme(fixed.scheme),
            format_document(fixed.scheme, v, fixed.endpoints).rstrip("\n"))
    out.put("lengths", _exact(v))
    out.put("endpoints", {str(k): format_rational(x) for k, x in fixed.endpoints.items()})
    times = " ".join(f"{a}={res.return_times[a]}" for a in fixed.scheme.alphabet)
    out.put("return_times", dict(res.return_times), f"TIMES {times}")
    ds, _ = dual_from_return_map(res)
    out.put("dual", format_scheme(ds), f"DUAL {format_scheme(ds)}")


def cmd_first_return(args, out: _Out) -> int:
    rot, arcs = parse_rotation(_read(args.file))
    res = first_return_map(rot, arcs, max_time=args.max_time, strict=args.strict)
    _return_map_report(res, out)
    _emit_plot(args, rot, arcs, res.ire)
    return 0


def cmd_verify_roundtrip(args, out: _Out) -> int:
    doc = parse_scheme(_read(args.file))
    ire = _lengths_of(doc, args)
    real = realize_detailed(ire)
    res = first_return_map(real.rotation, real.arcs)
    mapping = shift_equivalence(ire, res.ire.floating())
    out.put("rotation", real.rotation.to_text(), format_rotation(real.rotation, real.arcs).rstrip("\n"))
    out.put("canonical", real.canonical.to_text(), real.canonical.to_text())
    out.put("transcript_length", len(real.transcript))
    _emit_plot(args, real.rotation, real.arcs, res.ire)
    if mapping is None:
        out.put("equivalent", False, "roundtrip: FAILED (first return map is not shift-equivalent)")
        return 1
    pairs = " ".join(f"{a}->{mapping[a]}" for a in ire.scheme.alphabet)
    out.put("relabeling", mapping)
    out.put("equivalent", True, f"roundtrip: ok ({pairs})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rotiet", description="Rotational interval exchanges and circle rotations.")
    p.add_argument("--json", action="store_true", help="structured output")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_, plot=False):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file", help="input file, or - for stdin")
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="structured output")
        if plot:
            sp.add_argument("--emit-plot-data", metavar="PATH",
                            help="write interval coordinates as JSON for external plotting")
        sp.set_defaults(func=func)
        return sp

    add("check", cmd_check, "report the properties of a scheme")
    add("dual", cmd_dual, "print the dual scheme")
    sp = add("canonicalize", cmd_canonicalize, "reduce a rotational exchange to canonical form")
    sp.add_argument("-t", "--transcript", metavar="PATH", help="write the transcript here")
    add("realize", cmd_realize, "build a rotation and arcs realizing the exchange", plot=True)
    sp = add("first-return", cmd_first_return, "first return map of a rotation on an arc union", plot=True)
    sp.add_argument("--max-time", type=int, default=None)
    sp.add_argument("--strict", action="store_true", help="reject coincident orbit points")
    add("verify-roundtrip", cmd_verify_roundtrip, "realize, re-induce and compare exactly", plot=True)
    return p


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    args.stderr = stderr
    out = _Out(args.json)
    try:
        code = args.func(args, out)
    except ParseError as exc:
        print(f"parse error: {exc}", file=stderr)
        return 2
    except OSError as exc:
        print(f"cannot read input: {exc}", file=stderr)
        return 2
    except (IREError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=stderr)
        return 1
    stdout.write(out.render())
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
