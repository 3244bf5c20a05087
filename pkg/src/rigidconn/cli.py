"""Problem/certificate file formats and command-line dispatch.

Files are JSON with exact-string scalars only: rationals like "3/4",
cyclotomic expressions like "1/2*z(6)^5 + 3" (z(N) is a primitive N-th
root of unity), polar parts like "t^(-3/2) + 1/2*z(4)*t^(-1)", and
radical atoms rt(c, n) for an n-th root of c.  The canonical printer
round-trips byte-identically with the parser.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from .adk import (
    Certificate,
    NotRigid,
    ReplayMismatch,
    Step,
    Undecided,
    replay_certificate,
    run_adk,
)
from .cyclo import CycloNum, UndecidedSign, minimize_level
from .enumerate import enumerate_candidates
from .formal import (
    INF,
    FormalError,
    FormalType,
    Location,
    Problem,
    RegularPart,
)
from .puiseux import PolarPart
from .radicals import RadicalCoeff, TOWER, cmul, cpow, croot
from .rigidity import rig_index
from .stokes import Arc, BoundaryDirection, FULL_CIRCLE, order_arcs
from .transforms import (
    RankOneData,
    TransformsError,
    fourier_global,
    middle_convolution,
    twist_global,
)


class ParseError(Exception):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


class SemanticError(Exception):
    pass


# -- expression tokenizer / parser -----------------------------------


class _Tokens:
    SYMBOLS = set("+-*/^(),")

    def __init__(self, text: str, line: int = 1, column: int = 1):
        self.toks: list[tuple[str, str, int, int]] = []  # (kind, text, line, col)
        ln, col = line, column
        i = 0
        while i < len(text):
            ch = text[i]
            if ch == "\n":
                ln, col = ln + 1, 1
                i += 1
                continue
            if ch.isspace():
                i += 1
                col += 1
                continue
            if ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.toks.append(("num", text[i:j], ln, col))
                col += j - i
                i = j
                continue
            if ch.isalpha():
                j = i
                while j < len(text) and text[j].isalpha():
                    j += 1
                self.toks.append(("name", text[i:j], ln, col))
                col += j - i
                i = j
                continue
            if ch in self.SYMBOLS:
                self.toks.append(("sym", ch, ln, col))
                i += 1
                col += 1
                continue
            raise ParseError(ln, col, f"unexpected character {ch!r}")
        self.pos = 0
        self.end = (ln, col)

    def peek(self):
        if self.pos < len(self.toks):
            return self.toks[self.pos]
        return ("eof", "", *self.end)

    def next(self):
        t = self.peek()
        self.pos += 1
        return t

    def expect(self, kind: str, text: str | None = None):
        k, s, ln, col = self.next()
        if k != kind or (text is not None and s != text):
            want = text or kind
            raise ParseError(ln, col, f"expected {want!r}, got {s or k!r}")
        return s

    def error(self, message: str):
        _, _, ln, col = self.peek()
        raise ParseError(ln, col, message)


def _parse_uint(tk: _Tokens) -> int:
    k, s, ln, col = tk.next()
    if k != "num":
        raise ParseError(ln, col, f"expected an integer, got {s or k!r}")
    return int(s)


def _parse_rational(tk: _Tokens, allow_sign: bool = True) -> Fraction:
    sign = 1
    if allow_sign and tk.peek()[:2] == ("sym", "-"):
        tk.next()
        sign = -1
    num = _parse_uint(tk)
    if tk.peek()[:2] == ("sym", "/"):
        tk.next()
        den = _parse_uint(tk)
        if den == 0:
            tk.error("zero denominator")
        return Fraction(sign * num, den)
    return Fraction(sign * num)


def _parse_coeff_primary(tk: _Tokens):
    k, s, ln, col = tk.peek()
    if k == "sym" and s == "-":
        tk.next()
        return cmul(_parse_coeff_primary(tk), CycloNum.from_rational(-1))
    if k == "name" and s == "z":
        tk.next()
        tk.expect("sym", "(")
        n = _parse_uint(tk)
        if n < 1:
            raise ParseError(ln, col, "root-of-unity order must be positive")
        tk.expect("sym", ")")
        e = 1
        if tk.peek()[:2] == ("sym", "^"):
            tk.next()
            neg = tk.peek()[:2] == ("sym", "-")
            if neg:
                tk.next()
            e = _parse_uint(tk)
            if neg:
                e = -e
        return CycloNum.zeta(n, e % n)
    if k == "name" and s == "rt":
        tk.next()
        tk.expect("sym", "(")
        base = _parse_coeff_expr(tk)
        tk.expect("sym", ",")
        n = _parse_uint(tk)
        tk.expect("sym", ")")
        val = croot(base, n)
        if tk.peek()[:2] == ("sym", "^"):
            tk.next()
            neg = tk.peek()[:2] == ("sym", "-")
            if neg:
                tk.next()
            val = cpow(val, -_parse_uint(tk) if neg else _parse_uint(tk))
        return val
    if k == "num":
        return CycloNum.from_rational(_parse_rational(tk, allow_sign=False))
    raise ParseError(ln, col, f"expected a coefficient atom, got {s or k!r}")


def _parse_coeff_product(tk: _Tokens):
    acc = _parse_coeff_primary(tk)
    while tk.peek()[:2] == ("sym", "*"):
        nxt = tk.toks[tk.pos + 1][:2] if tk.pos + 1 < len(tk.toks) else None
        if nxt == ("name", "t"):  # the `*` belongs to a polar atom
            break
        tk.next()
        acc = cmul(acc, _parse_coeff_primary(tk))
    return acc


def _parse_coeff_expr(tk: _Tokens):
    negate = False
    if tk.peek()[:2] == ("sym", "-"):
        tk.next()
        negate = True
    acc = _parse_coeff_product(tk)
    if negate:
        acc = cmul(acc, CycloNum.from_rational(-1))
    while tk.peek()[1] in ("+", "-") and tk.peek()[0] == "sym":
        op = tk.next()[1]
        term = _parse_coeff_product(tk)
        if op == "-":
            term = cmul(term, CycloNum.from_rational(-1))
        acc = _c_add(acc, term)
    return acc


def _c_add(a, b):
    from .radicals import cadd

    return cadd(a, b)


def parse_coeff(text: str):
    tk = _Tokens(text)
    val = _parse_coeff_expr(tk)
    if tk.peek()[0] != "eof":
        tk.error("trailing input after coefficient expression")
    if isinstance(val, RadicalCoeff):
        return val
    return minimize_level(val)


def _parse_polar_term(tk: _Tokens):
    """One atom `coeff * t^(-j/p)` (coefficient optional); returns
    (Fraction exponent j/p, coeff)."""
    coeff = None
    if not (tk.peek()[0] == "name" and tk.peek()[1] == "t"):
        coeff = _parse_coeff_product(tk)
        tk.expect("sym", "*")
    tk.expect("name", "t")
    tk.expect("sym", "^")
    tk.expect("sym", "(")
    tk.expect("sym", "-")
    num = _parse_uint(tk)
    den = 1
    if tk.peek()[:2] == ("sym", "/"):
        tk.next()
        den = _parse_uint(tk)
        if den == 0:
            tk.error("zero ramification")
    tk.expect("sym", ")")
    if coeff is None:
        coeff = CycloNum.one()
    return Fraction(num, den), coeff


def parse_polar(text: str) -> PolarPart:
    tk = _Tokens(text)
    if tk.peek()[:2] == ("num", "0"):
        tk.next()
        if tk.peek()[0] != "eof":
            tk.error("trailing input after zero polar part")
        return PolarPart.zero()
    negate_first = False
    if tk.peek()[:2] == ("sym", "-"):
        tk.next()
        negate_first = True
    terms = [_parse_polar_term(tk)]
    if negate_first:
        e, c = terms[0]
        terms[0] = (e, cmul(c, CycloNum.from_rational(-1)))
    while tk.peek()[0] == "sym" and tk.peek()[1] in ("+", "-"):
        op = tk.next()[1]
        e, c = _parse_polar_term(tk)
        if op == "-":
            c = cmul(c, CycloNum.from_rational(-1))
        terms.append((e, c))
    if tk.peek()[0] != "eof":
        tk.error("trailing input after polar part")
    p = math.lcm(*(e.denominator for e, _ in terms))
    return PolarPart.make(p, [(int(e * p), c) for e, c in terms])


# -- canonical printers ----------------------------------------------


def _rational_str(q: Fraction) -> str:
    return str(q)


def _join_terms(parts: list[str]) -> str:
    out = parts[0]
    for p in parts[1:]:
        if p.startswith("-"):
            out += " - " + p[1:]
        else:
            out += " + " + p
    return out


def coeff_str(a) -> str:
    if isinstance(a, (int, Fraction)):
        a = CycloNum.from_rational(a)
    if isinstance(a, CycloNum):
        m = minimize_level(a)
        if m.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(m.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(_rational_str(c))
            elif i == 1:
                parts.append(f"{_rational_str(c)}*z({m.level})")
            else:
                parts.append(f"{_rational_str(c)}*z({m.level})^{i}")
        return _join_terms(parts)
    parts = []
    for mono, c in a.terms:
        cs = coeff_str(c)
        atoms = [f"({cs})" if " + " in cs else cs]
        for idx, e in mono:
            radicand = coeff_str(TOWER.value(idx))
            if " + " in radicand:
                radicand = f"({radicand})"
            atom = f"rt({radicand}, {e.denominator})"
            if e.numerator != 1:
                atom += f"^{e.numerator}"
            atoms.append(atom)
        parts.append("*".join(atoms))
    return _join_terms(parts)


def polar_str(phi: PolarPart) -> str:
    if phi.is_zero():
        return "0"
    parts = []
    for j, c in phi.terms:
        e = Fraction(j, phi.ram)
        tpart = f"t^(-{e.numerator}/{e.denominator})" if e.denominator > 1 else f"t^(-{e.numerator})"
        cs = coeff_str(c)
        if cs == "1":
            parts.append(tpart)
        else:
            if " + " in cs:
                cs = f"({cs})"
            parts.append(f"{cs}*{tpart}")
    return _join_terms(parts)


def loc_str(loc: Location) -> str:
    return "inf" if loc.is_inf else coeff_str(loc.value)


def parse_loc(text: str) -> Location:
    if text.strip() == "inf":
        return INF
    return Location.of(parse_coeff(text))


# -- problem / certificate documents ---------------------------------

_PROBLEM_VERSION = 1


def problem_to_dict(P: Problem) -> dict:
    points = []
    for loc, t in P.points:
        factors = []
        for f in t.factors:
            reg = []
            for exp, size in f.reg.blocks:
                if reg and reg[-1]["exp"] == _rational_str(exp):
                    reg[-1]["blocks"].append(size)
                else:
                    reg.append({"exp": _rational_str(exp), "blocks": [size]})
            factors.append({"phi": polar_str(f.phi), "reg": reg})
        points.append({"loc": loc_str(loc), "factors": factors})
    return {"version": _PROBLEM_VERSION, "N": P.N, "points": points}


def _check_fields(d: dict, allowed: set, where: str):
    extra = set(d) - allowed
    if extra:
        raise SemanticError(f"unknown fields {sorted(extra)} in {where}")


def problem_from_dict(d: dict) -> Problem:
    if not isinstance(d, dict):
        raise SemanticError("problem document must be a JSON object")
    _check_fields(d, {"version", "N", "points"}, "problem")
    if d.get("version") != _PROBLEM_VERSION:
        raise SemanticError(f"unsupported version {d.get('version')!r}")
    N = d.get("N")
    if not isinstance(N, int) or N < 1:
        raise SemanticError("N must be a positive integer")
    points = []
    for pt in d.get("points", []):
        _check_fields(pt, {"loc", "factors"}, "point")
        loc = parse_loc(pt["loc"])
        factors = []
        for f in pt["factors"]:
            _check_fields(f, {"phi", "reg"}, "factor")
            phi = parse_polar(f["phi"])
            blocks = []
            for r in f["reg"]:
                _check_fields(r, {"exp", "blocks"}, "regular part")
                exp = Fraction(r["exp"])
                for size in r["blocks"]:
                    if not isinstance(size, int) or size < 1:
                        raise SemanticError("block sizes must be positive integers")
                    blocks.append((exp, size))
            factors.append((phi, RegularPart.make(blocks)))
        factors_t = FormalType.make(factors)
        points.append((loc, factors_t))
    try:
        return Problem.make(N, points)
    except FormalError as e:
        raise SemanticError(str(e)) from e


def parse_problem(text: str) -> Problem:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.lineno, e.colno, e.msg) from e
    return problem_from_dict(d)


def print_problem(P: Problem) -> str:
    return json.dumps(problem_to_dict(P), indent=2) + "\n"


def _fraction_from_str(s) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise SemanticError(f"bad rational {s!r}") from e


def step_to_dict(s: Step) -> dict:
    d = {"kind": s.kind}
    if s.kind == "moebius":
        d["coeffs"] = [coeff_str(c) for c in s.data]
    elif s.kind == "add_apparent":
        d["loc"] = loc_str(s.data)
    elif s.kind == "twist":
        d["points"] = [
            {"loc": loc_str(l), "phi": polar_str(psi), "shift": _rational_str(b)}
            for l, psi, b in s.data.points
        ]
    elif s.kind == "mc":
        d["chi_exponent"] = _rational_str(s.data)
    elif s.kind != "fourier":
        raise SemanticError(f"unknown step kind {s.kind!r}")
    d["predicted_rank"] = s.predicted_rank
    return d


def step_from_dict(d: dict) -> Step:
    kind = d.get("kind")
    rank = d.get("predicted_rank")
    if not isinstance(rank, int) or rank < 1:
        raise SemanticError("predicted_rank must be a positive integer")
    if kind == "moebius":
        _check_fields(d, {"kind", "coeffs", "predicted_rank"}, "moebius step")
        coeffs = [parse_coeff(c) for c in d["coeffs"]]
        if len(coeffs) != 4:
            raise SemanticError("moebius step needs 4 coefficients")
        return Step("moebius", tuple(coeffs), rank)
    if kind == "add_apparent":
        _check_fields(d, {"kind", "loc", "predicted_rank"}, "add_apparent step")
        return Step("add_apparent", parse_loc(d["loc"]), rank)
    if kind == "twist":
        _check_fields(d, {"kind", "points", "predicted_rank"}, "twist step")
        pts = []
        for pt in d["points"]:
            _check_fields(pt, {"loc", "phi", "shift"}, "twist point")
            pts.append(
                (parse_loc(pt["loc"]), parse_polar(pt["phi"]), _fraction_from_str(pt["shift"]))
            )
        return Step("twist", RankOneData.make(pts), rank)
    if kind == "mc":
        _check_fields(d, {"kind", "chi_exponent", "predicted_rank"}, "mc step")
        return Step("mc", _fraction_from_str(d["chi_exponent"]), rank)
    if kind == "fourier":
        _check_fields(d, {"kind", "predicted_rank"}, "fourier step")
        return Step("fourier", None, rank)
    raise SemanticError(f"unknown step kind {kind!r}")


def certificate_to_dict(C: Certificate) -> dict:
    return {
        "version": _PROBLEM_VERSION,
        "steps": [step_to_dict(s) for s in C.steps],
        "terminal": problem_to_dict(C.terminal),
        "origin": problem_to_dict(C.origin),
    }


def certificate_from_dict(d: dict) -> Certificate:
    if not isinstance(d, dict):
        raise SemanticError("certificate document must be a JSON object")
    _check_fields(d, {"version", "steps", "terminal", "origin"}, "certificate")
    if d.get("version") != _PROBLEM_VERSION:
        raise SemanticError(f"unsupported version {d.get('version')!r}")
    steps = tuple(step_from_dict(s) for s in d.get("steps", []))
    return Certificate(steps, problem_from_dict(d["terminal"]), problem_from_dict(d["origin"]))


def parse_certificate(text: str) -> Certificate:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.lineno, e.colno, e.msg) from e
    return certificate_from_dict(d)


def print_certificate(C: Certificate) -> str:
    return json.dumps(certificate_to_dict(C), indent=2) + "\n"


# -- command dispatch ------------------------------------------------

EXIT_OK = 0
EXIT_NOT_RIGID = 1
EXIT_INPUT = 2
EXIT_UNDECIDED = 3


def _load_problem(path: str) -> Problem:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read())


def _arc_endpoint_json(x):
    if isinstance(x, Fraction):
        return _rational_str(x)
    return {"center": float(x.center), "radius": float(x.radius)}


def _emit(out, args, human: str, machine: dict):
    if args.json:
        out.write(json.dumps(machine) + "\n")
    else:
        out.write(human + "\n")


def _cmd_rig(args, out) -> int:
    P = _load_problem(args.file)
    r = rig_index(P)
    _emit(out, args, f"rig_index = {r}", {"rig_index": r})
    return EXIT_OK


def _cmd_reduce(args, out) -> int:
    P = _load_problem(args.file)
    res = run_adk(P, args.max_steps)
    if isinstance(res, Certificate):
        kinds = [s.kind for s in res.steps]
        if args.cert:
            with open(args.cert, "w", encoding="utf-8") as fh:
                fh.write(print_certificate(res))
        _emit(
            out,
            args,
            f"rigid: reduced to rank 1 in {len(res.steps)} steps ({', '.join(kinds) or 'none'})",
            {"verdict": "rigid", "steps": [step_to_dict(s) for s in res.steps]},
        )
        return EXIT_OK
    if isinstance(res, NotRigid):
        _emit(
            out,
            args,
            f"NotRigid ({res.reason})",
            {"verdict": "not_rigid", "reason": res.reason, "stuck_at_rig2": res.stuck_at_rig2},
        )
        return EXIT_NOT_RIGID
    _emit(out, args, f"Undecided ({res.reason})", {"verdict": "undecided", "reason": res.reason})
    return EXIT_UNDECIDED


def _cmd_fourier(args, out) -> int:
    P = _load_problem(args.file)
    out.write(print_problem(fourier_global(P)))
    return EXIT_OK


def _cmd_mc(args, out) -> int:
    gamma = _fraction_from_str(args.chi)
    if gamma % 1 == 0:
        raise SemanticError("chi must be a nontrivial character: exponent not an integer")
    P = _load_problem(args.file)
    out.write(print_problem(middle_convolution(P, gamma)))
    return EXIT_OK


def _cmd_twist(args, out) -> int:
    P = _load_problem(args.file)
    with open(args.twistfile, encoding="utf-8") as fh:
        try:
            d = json.loads(fh.read())
        except json.JSONDecodeError as e:
            raise ParseError(e.lineno, e.colno, e.msg) from e
    _check_fields(d, {"points"}, "twist file")
    pts = []
    for pt in d.get("points", []):
        _check_fields(pt, {"loc", "phi", "shift"}, "twist point")
        pts.append(
            (parse_loc(pt["loc"]), parse_polar(pt["phi"]), _fraction_from_str(pt["shift"]))
        )
    out.write(print_problem(twist_global(P, RankOneData.make(pts))))
    return EXIT_OK


def _cmd_enumerate(args, out) -> int:
    locations = [parse_loc(s) for s in args.points.split(",") if s.strip()]
    pool = []
    if args.phi:
        with open(args.phi, encoding="utf-8") as fh:
            try:
                entries = json.loads(fh.read())
            except json.JSONDecodeError as e:
                raise ParseError(e.lineno, e.colno, e.msg) from e
        if not isinstance(entries, list):
            raise SemanticError("polar pool file must be a JSON array of polar expressions")
        pool = [parse_polar(s) for s in entries]
    for P in enumerate_candidates(locations, pool, args.order, args.rank):
        rig = rig_index(P)
        verdict = "not_rigid"
        if rig == 2:
            res = run_adk(P, args.max_steps)
            if isinstance(res, Certificate):
                verdict = "certified"
            elif isinstance(res, Undecided) or (isinstance(res, NotRigid) and res.stuck_at_rig2):
                verdict = "unresolved"
        out.write(
            json.dumps({"problem": problem_to_dict(P), "rig_index": rig, "verdict": verdict})
            + "\n"
        )
    return EXIT_OK


def _cmd_stokes_arcs(args, out) -> int:
    P = _load_problem(args.file)
    loc = parse_loc(args.point)
    t = P.at(loc)
    if t is None:
        raise SemanticError(f"no singular point at {args.point!r}")
    phis = [f.phi for f in t.factors]
    p = math.lcm(*(q.ram for q in phis))
    report = []
    for psi in phis:
        for phi in phis:
            le, strict = order_arcs(psi, phi, p)
            entry = {"psi": polar_str(psi), "phi": polar_str(phi)}
            if le is FULL_CIRCLE:
                entry["full_circle"] = True
                entry["strict"] = []
            else:
                entry["full_circle"] = False
                entry["strict"] = [
                    {"start": _arc_endpoint_json(a.start), "end": _arc_endpoint_json(a.end)}
                    for a in strict
                ]
            report.append(entry)
    out.write(json.dumps({"cover": p, "pairs": report}, indent=2) + "\n")
    return EXIT_OK


def _cmd_replay(args, out) -> int:
    with open(args.cert, encoding="utf-8") as fh:
        C = parse_certificate(fh.read())
    P = replay_certificate(C)
    out.write(print_problem(P))
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rigidconn")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rig", help="print the rigidity index")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_rig)

    p = sub.add_parser("reduce", help="run the reduction loop")
    p.add_argument("file")
    p.add_argument("--max-steps", type=int, default=64)
    p.add_argument("--cert", help="write the certificate here")
    p.set_defaults(fn=_cmd_reduce)

    p = sub.add_parser("fourier", help="global Fourier transform")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_fourier)

    p = sub.add_parser("mc", help="middle convolution")
    p.add_argument("file")
    p.add_argument("--chi", required=True, help="character exponent p/q")
    p.set_defaults(fn=_cmd_mc)

    p = sub.add_parser("twist", help="tensor by a rank-one datum")
    p.add_argument("file")
    p.add_argument("twistfile")
    p.set_defaults(fn=_cmd_twist)

    p = sub.add_parser("enumerate", help="enumerate and certify candidates")
    p.add_argument("--points", required=True, help="comma-separated locations")
    p.add_argument("--phi", help="JSON array of polar-part expressions")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--max-steps", type=int, default=64)
    p.set_defaults(fn=_cmd_enumerate)

    p = sub.add_parser("stokes-arcs", help="order arcs at one point")
    p.add_argument("file")
    p.add_argument("--point", required=True)
    p.set_defaults(fn=_cmd_stokes_arcs)

    p = sub.add_parser("replay", help="replay a certificate")
    p.add_argument("cert")
    p.set_defaults(fn=_cmd_replay)
    return ap


def execute_command(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args, out)
    except (ParseError, SemanticError, FormalError, TransformsError, ReplayMismatch, OSError) as e:
        err.write(f"error: {e}\n")
        return EXIT_INPUT
    except UndecidedSign as e:
        err.write(f"precision exhausted: {e}\n")
        return EXIT_UNDECIDED


def main():
    sys.exit(execute_command(sys.argv[1:]))
