"""Command-line front end.

Exit status: 0 when everything gated passed, 1 on a verification failure,
2 on a usage error.  JSON output is sorted and compact-stable, so equal
configurations give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable

from . import dickson as dk
from .delta import FractionalDelta, delta
from .gf import FieldSpec, field_new
from .hmatch import check_hmatch, search_counterexample
from .identities import check_rank4_line6, check_rank4_line7, run_suite
from .invariants import (
    ResourceLimit,
    basis_candidate,
    fixed_space_dim,
    gl_generators,
    load_family,
    lrs_series,
    span_hilbert,
)
from .mpoly import parse_poly
from .steenrod import divisibility_probe

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


@dataclass
class RunConfig:
    """Everything a run depends on; replaying one reproduces its output."""

    command: str
    p: int = 2
    r: int = 1
    m: int = 1
    seed: int = 0
    convention: str = "top_zero"
    json: bool = False
    options: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> RunConfig:
        return cls(**data)


@dataclass
class Outcome:
    status: int
    text: str
    payload: Any


def _dump(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


# field resolution ---------------------------------------------------------------

def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            r, rest = 0, q
            while rest % p == 0:
                rest //= p
                r += 1
            if rest != 1:
                break
            return p, r
    raise UsageError("--q", f"{q} is not a prime power")


def _resolve_field(args: argparse.Namespace) -> tuple[int, int]:
    if args.q is not None:
        if args.p is not None or args.r is not None:
            p, r = _prime_power(args.q)
            if (args.p not in (None, p)) or (args.r not in (None, r)):
                raise UsageError("--q", "conflicts with --p/--r")
        return _prime_power(args.q)
    return (args.p or 2), (args.r or 1)


def _field(cfg: RunConfig) -> FieldSpec:
    try:
        return field_new(cfg.p, cfg.r)
    except (ValueError, KeyError) as exc:
        raise UsageError("--q", str(exc)) from None


def _poly(text: str, F: FieldSpec, nvars: int, flag: str):
    try:
        return parse_poly(text, F, nvars)
    except (ValueError, KeyError) as exc:
        raise UsageError(flag, str(exc)) from None


# commands -----------------------------------------------------------------------

def _cmd_dickson(cfg: RunConfig) -> Outcome:
    F, n = _field(cfg), cfg.options["n"]
    D = dk.dickson_q(n, F, cfg.convention)
    idx = cfg.options.get("i")
    picks = range(n) if idx is None else [idx]
    if idx is not None and not 0 <= idx < n:
        raise UsageError("--i", f"must lie in 0..{n - 1}")
    lines = [f"Q_{{{n},{i}}} = {D.polys[i]}" for i in picks]
    payload = {f"Q_{n},{i}": str(D.polys[i]) for i in picks}
    return Outcome(EXIT_OK, "\n".join(lines), payload)


def _cmd_moore(cfg: RunConfig) -> Outcome:
    F, s = _field(cfg), cfg.options["s"]
    L = dk.moore_L(s, F)
    V = dk.v_poly(s, F)
    return Outcome(EXIT_OK, f"L_{s} = {L}\nV_{s} = {V}", {"L": str(L), "V": str(V)})


def _cmd_delta(cfg: RunConfig) -> Outcome:
    F, s = _field(cfg), cfg.options["s"]
    n = max(cfg.options.get("n") or 0, s)
    f = _poly(cfg.options["f"], F, n, "--f")
    res = delta(s, cfg.m, f, reduce=cfg.options.get("reduce", False))
    if res.exact:
        text, payload = str(res.value), {"exact": True, "value": str(res.value)}
    else:
        text = f"({res.numerator}) / ({res.denominator})"
        payload = {"exact": False, "numerator": str(res.numerator), "denominator": str(res.denominator)}
    return Outcome(EXIT_OK, text, payload)


def _cmd_verify(cfg: RunConfig) -> Outcome:
    F, o = _field(cfg), cfg.options
    conventions = ["top_zero", "top_one"] if o.get("both_conventions") else [cfg.convention]
    reports = [
        run_suite(o["suite"], F, cfg.m, o["trials"], cfg.seed, o["mode"], conv, o.get("s", 0))
        for conv in conventions
    ]
    gated = o["suite"] != "annihilators"
    ok = all(r.passed for r in reports) or not gated
    text = "\n".join(f"[{r.convention}] {r.summary()}" for r in reports)
    for r in reports:
        for fl in r.failures[:5]:
            text += f"\n  j={fl.j} {fl.label}: f = {fl.f}"
    payload = [r.to_json() for r in reports]
    return Outcome(EXIT_OK if ok else EXIT_FAIL, text, payload if len(payload) > 1 else payload[0])


def _cmd_hmatch(cfg: RunConfig) -> Outcome:
    F, o = _field(cfg), cfg.options
    if o["action"] == "check":
        k = o["k"]
        T = dk.TruncationSpec(4, F, cfg.m)
        f = _poly(o["f"], F, 4, "--f")
        G = _poly(o["G"], F, 4, "--G")
        try:
            v = check_hmatch(f, G, k, T)
        except ValueError as exc:
            raise UsageError("--f/--G", str(exc)) from None
        if v.holds:
            text = "holds"
        else:
            text = f"fails: alpha={v.alpha} gamma={v.gamma} sums={v.sums} < {T.bound - 1}"
        return Outcome(EXIT_OK, text, v.to_json())
    T = dk.TruncationSpec(4, F, cfg.m)
    w = search_counterexample(T, o["s"], budget=o["budget"], seed=cfg.seed)
    if w is None:
        return Outcome(EXIT_FAIL, f"no witness within {o['budget']} candidates", {"witness": None})
    text = (
        f"witness: f = {w.f}, G = {w.G_name} (candidate {w.index})\n"
        f"residue monomial: {w.monomial}, residue terms: {len(w.residue)}"
    )
    return Outcome(EXIT_OK, text, {"witness": w.to_json()})


def _cmd_steenrod(cfg: RunConfig) -> Outcome:
    F, o = _field(cfg), cfg.options
    n, s = o["n"], o["s"]
    if not 0 <= s < n:
        raise UsageError("--s", f"must lie in 0..{n - 1}")
    res = divisibility_probe(o["i"], n, s, F, cfg.convention)
    text = (
        f"St_{o['i']}(Q_{{{n},{s}}}) divisible by Q_{{{n},0}}: {res.divisible}\n"
        f"{res.iterations}-fold iterate annihilates: {res.annihilated}"
    )
    return Outcome(EXIT_OK, text, res.to_json())


def _cmd_lrs(cfg: RunConfig) -> Outcome:
    F, n = _field(cfg), cfg.options["n"]
    H = lrs_series(n, cfg.m, F)
    if cfg.options.get("at_1"):
        return Outcome(EXIT_OK, str(H.at_one()), {"at_1": H.at_one()})
    return Outcome(EXIT_OK, str(H), H.to_json())


def _cmd_invariant_dim(cfg: RunConfig) -> Outcome:
    F, n = _field(cfg), cfg.options["n"]
    T = dk.TruncationSpec(n, F, cfg.m)
    try:
        d = fixed_space_dim(gl_generators(n, F), T)
    except ResourceLimit as exc:
        raise UsageError("--n/--m", str(exc)) from None
    expected = lrs_series(n, cfg.m, F).at_one()
    text = f"dim = {d}\nC_{{{n},{cfg.m}}}(1) = {expected}"
    return Outcome(EXIT_OK, text, {"dim": d, "lrs_at_1": expected, "agree": d == expected})


def _cmd_hilbert_span(cfg: RunConfig) -> Outcome:
    F = _field(cfg)
    T = dk.TruncationSpec(4, F, cfg.m)
    path = cfg.options["family"]
    try:
        family = load_family(path, F)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError("--family", str(exc)) from None
    try:
        cands = basis_candidate(family, T)
    except FractionalDelta as exc:
        return Outcome(EXIT_FAIL, f"not exact: {exc}", {"error": str(exc)})
    H = span_hilbert(cands, T)
    C = lrs_series(4, cfg.m, F)
    excess = H.excess_over(C)
    text = f"H_span = {H}\nC_{{4,{cfg.m}}} = {C}"
    if excess:
        text += f"\nexceeds at degrees {sorted(excess)}"
    payload = {
        "span": H.to_json(),
        "lrs": C.to_json(),
        "dominated": not excess,
        "excess": {str(d): e for d, e in excess.items()},
    }
    return Outcome(EXIT_OK, text, payload)


APPENDIX_RUNS = [
    ("(6) fractional", check_rank4_line6, 1, 5, "fractional"),
    ("(6) fractional", check_rank4_line6, 2, 5, "fractional"),
    ("(7) fractional", check_rank4_line7, 1, 5, "fractional"),
    ("(7) fractional", check_rank4_line7, 2, 3, "fractional"),
    ("(7) numerator (theoretical)", check_rank4_line7, 1, 5, "numerator"),
    ("(7) numerator (theoretical)", check_rank4_line7, 2, 3, "numerator"),
]


def reproduce_appendix(seed: int = 0, convention: str = "top_zero") -> tuple[bool, list[str], list]:
    """Run the six q = 2 rank-four checks and build the summary block."""
    F = field_new(2)
    lines, reports = ["Summary:"], []
    for label, fn, m, trials, mode in APPENDIX_RUNS:
        rep = fn(F, m, trials, seed, mode, convention)
        reports.append(rep)
        lines.append(f" {label} q=2,m={m}: {'OK' if rep.passed else 'FAIL'}")
    return all(r.passed for r in reports), lines, reports


def _cmd_reproduce(cfg: RunConfig) -> Outcome:
    ok, lines, reports = reproduce_appendix(cfg.seed, cfg.convention)
    payload = {
        "summary": [ln.strip() for ln in lines[1:]],
        "reports": [r.to_json() for r in reports],
        "passed": ok,
    }
    return Outcome(EXIT_OK if ok else EXIT_FAIL, "\n".join(lines), payload)


COMMANDS: dict[str, Callable[[RunConfig], Outcome]] = {
    "dickson": _cmd_dickson,
    "moore": _cmd_moore,
    "delta": _cmd_delta,
    "verify": _cmd_verify,
    "hmatch": _cmd_hmatch,
    "steenrod": _cmd_steenrod,
    "lrs": _cmd_lrs,
    "invariant-dim": _cmd_invariant_dim,
    "hilbert-span": _cmd_hilbert_span,
    "reproduce-appendix": _cmd_reproduce,
}


def dispatch(cfg: RunConfig) -> Outcome:
    try:
        handler = COMMANDS[cfg.command]
    except KeyError:
        raise UsageError("command", f"unknown command {cfg.command!r}") from None
    if cfg.convention not in ("top_zero", "top_one"):
        raise UsageError("--convention", "must be top_zero or top_one")
    if cfg.m < 1:
        raise UsageError("--m", "must be >= 1")
    return handler(cfg)


# argument parsing ---------------------------------------------------------------

_DEFAULTS = {"q": None, "p": None, "r": None, "m": 1, "seed": 0, "json": False, "convention": "top_zero"}


def _common(top: bool) -> argparse.ArgumentParser:
    # Global flags may appear before or after the subcommand.  Only the top
    # parser carries defaults, so a subparser never overwrites a value given
    # earlier on the line.
    def d(name):
        return _DEFAULTS[name] if top else argparse.SUPPRESS

    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--q", type=int, default=d("q"), help="field size (a prime power up to 16)")
    g.add_argument("--p", type=int, default=d("p"), help="field characteristic")
    g.add_argument("--r", type=int, default=d("r"), help="extension degree")
    g.add_argument("--m", type=int, default=d("m"), help="truncation level: exponents stay below q^m")
    g.add_argument("--seed", type=int, default=d("seed"), help="master seed")
    g.add_argument("--json", action="store_true", default=d("json"), help="emit JSON")
    g.add_argument("--convention", choices=["top_zero", "top_one"], default=d("convention"),
                   help="value of Q_{n,n} in the Dickson recursion")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common(top=False)
    parser = argparse.ArgumentParser(
        prog="dickson-delta", parents=[_common(top=True)],
        description="Dickson invariants, Moore determinants and delta-operator identities over F_q.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text, description=help_text)

    p = add("dickson", "Print the Dickson invariants Q_{n,i} built by the V_n recursion.")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--i", type=int)

    p = add("moore", "Print the Moore determinant L_s and the product V_s of affine linear forms.")
    p.add_argument("--s", type=int, required=True)

    p = add("delta", "Apply delta_s to f: the bordered Moore determinant divided by L_s^(q-1).")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--f", required=True, help='polynomial, e.g. "x1^2*x2 + x3"')
    p.add_argument("--n", type=int, help="number of variables (default s)")
    p.add_argument("--reduce", action="store_true", help="reduce the result into Q_m(n)")

    p = add("verify", "Check the Dickson/delta intertwining identities on seeded random inputs.")
    p.add_argument("--suite", required=True, choices=["rank3", "rank4-6", "rank4-7", "annihilators"])
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--mode", choices=["fractional", "numerator"], default="fractional")
    p.add_argument("--s", type=int, default=0, help="annihilator suite only: delta_{4-s} is tested")
    p.add_argument("--both-conventions", action="store_true", help="run under top_zero and top_one")

    p = add("hmatch", "Exponent-matching predicate and counterexample search for the vanishing product.")
    hs = p.add_subparsers(dest="action", required=True, metavar="ACTION")
    c = hs.add_parser("check", parents=[common], help="decide the predicate for one (f, G)")
    c.add_argument("--f", required=True)
    c.add_argument("--G", required=True, help='write a leading minus as --G=-x1*x2^3')
    c.add_argument("--k", type=int, required=True)
    s = hs.add_parser("search", parents=[common], help="look for (f, G) whose product survives in Q_m(4)")
    s.add_argument("--s", type=int, required=True)
    s.add_argument("--budget", type=int, default=500)

    p = add("steenrod", "Probe divisibility of St_i(Q_{n,s}) by Q_{n,0} and nilpotence of St_i.")
    ss = p.add_subparsers(dest="action", required=True, metavar="ACTION")
    pr = ss.add_parser("probe", parents=[common], help="report-only divisibility probe")
    pr.add_argument("--i", type=int, required=True)
    pr.add_argument("--n", type=int, required=True)
    pr.add_argument("--s", type=int, required=True)

    p = add("lrs", "Evaluate the conjectured Hilbert series C_{n,m}(t) of the invariant ring.")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--at-1", action="store_true", help="print C_{n,m}(1) only")

    p = add("invariant-dim", "Dimension of the GL_n(F_q)-fixed part of Q_m(n), beside C_{n,m}(1).")
    p.add_argument("--n", type=int, required=True)

    p = add("hilbert-span", "Graded rank of delta_{4-s}(f) over a family file, compared with C_{4,m}(t).")
    p.add_argument("--family", required=True, help='JSON: {"entries": [{"s": 1, "polys": [...]}]}')

    add("reproduce-appendix", "Run the six q = 2 rank-four checks and print the OK/FAIL summary.")

    p = add("replay", "Rerun a configuration saved from a previous --json run.")
    p.add_argument("config", help="JSON file holding a RunConfig (or a full --json output)")
    return parser


_GLOBAL = {"q", "p", "r", "m", "seed", "json", "convention", "command"}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    p, r = _resolve_field(args)
    options = {k: v for k, v in vars(args).items() if k not in _GLOBAL}
    return RunConfig(args.command, p, r, args.m, args.seed, args.convention, args.json, options)


def _load_replay(path: str) -> RunConfig:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError("config", str(exc)) from None
    data = data.get("config", data)
    try:
        return RunConfig.from_json(data)
    except TypeError as exc:
        raise UsageError("config", str(exc)) from None


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_replay(args.config) if args.command == "replay" else config_from_args(args)
        out = dispatch(cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # library preconditions (ranges of n, s, k, ...) are argument errors here
        print(f"usage error: {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.json:
        print(_dump({"config": cfg.to_json(), "status": out.status, "result": out.payload}))
    else:
        print(out.text)
    return out.status


if __name__ == "__main__":
    sys.exit(main())
