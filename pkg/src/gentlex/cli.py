"""Command line front end.  Reports are JSON documents unless --plain is given.

Exit codes: 0 success (including false decisions), 1 input error,
2 property violation or undetermined verdict.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from . import combinatorics as comb
from .braid import (
    BraidInvariantError,
    BraidWord,
    ExceptionalSequence,
    MutationError,
    apply_word,
    componentwise_iso,
    left_dual,
    orbit_explore,
    presilting_shift,
    right_dual,
    seed_sequence,
    serre_check,
    summarize,
)
from .complexes import ISOMORPHIC, UNDETERMINED, ComplexError, ProjComplex
from .field import DEFAULT_PRIME
from .quiver import (
    QuiverError,
    has_full_relation_cycle,
    load_quiver,
    parse_quiver,
    serialize_quiver,
    validate_gentle,
)
from .ribbon import SurfaceError, classify_special, surface_invariants

OK, INPUT_ERROR, VIOLATION = 0, 1, 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(INPUT_ERROR, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--field-prime", type=int, default=DEFAULT_PRIME)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--plain", action="store_true", help="human-readable summary instead of JSON")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="gentlex", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, help_, quiver=True):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if quiver:
            sp.add_argument("quiver", help=".gq file")
        return sp

    cmd("validate", "check the gentle conditions")
    cmd("surface", "surface invariants (g, b, o-points, dots, punctures)")
    cmd("exists", "decide existence of a full exceptional sequence")
    for name in ("cut", "complete"):
        sp = cmd(name, "cut along a vertex collection" if name == "cut" else "completion criterion")
        sp.add_argument("--vertices", default="", help="comma separated vertex ids")
    cmd("koszul", "Koszul dual presentation")
    sp = cmd("gen", "emit the surface quiver of T(g,1,2) or T(g,2,2)", quiver=False)
    sp.add_argument("kind", help="T(g,1,2) or T(g,2,2)")
    sp.add_argument("genus", type=int)

    def seq_cmd(name, help_):
        sp = cmd(name, help_)
        sp.add_argument("--extension", default=None, help="comma separated vertex order for the seed")
        sp.add_argument("--sequence", default=None, help="JSON file with a list of complexes")
        return sp

    seq_cmd("seed", "projective seed sequence")
    seq_cmd("mutate", "apply a braid word").add_argument("--word", default="", help='e.g. "1 2 -1"')
    sp = seq_cmd("verify-braid", "check braid relations up to isomorphism")
    sp.add_argument("--words", type=int, default=20, help="number of random words")
    sp.add_argument("--length", type=int, default=6, help="length of random words")
    seq_cmd("dual", "left or right dual").add_argument("--side", choices=("left", "right"), default="right")
    seq_cmd("serre-check", "compare the Serre functor with the double left dual")
    seq_cmd("orbit", "explore the braid orbit up to shifts").add_argument("--max", type=int, default=100)
    seq_cmd("presilting-shift", "shifts making the sequence pre-silting")
    return parser


def _load(args):
    try:
        return load_quiver(args.quiver)
    except OSError as exc:
        raise InputError(str(exc)) from None


def _vertices(args, q) -> list[str]:
    vs = [v.strip() for v in args.vertices.split(",") if v.strip()]
    for v in vs:
        if not q.has_vertex(v):
            raise InputError(f"unknown vertex {v!r}")
    return vs


def _require_valid(q):
    rep = validate_gentle(q)
    if not rep.ok:
        raise InputError("not a finite dimensional gentle quiver: " + "; ".join(rep.violations))


def _sequence(args, q) -> ExceptionalSequence:
    alg = q.with_prime(args.field_prime)
    if args.sequence:
        try:
            with open(args.sequence, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(str(exc)) from None
        objs = [ProjComplex.from_json(alg, d) for d in data]
        return ExceptionalSequence.of(objs)
    ext = [v.strip() for v in args.extension.split(",")] if args.extension else None
    return seed_sequence(q, ext, alg=alg)


def _word(text: str) -> BraidWord:
    try:
        return BraidWord.parse(text)
    except ValueError as exc:
        raise InputError(f"bad word {text!r}: {exc}") from None


def run_command(args) -> tuple[int, dict, str]:
    """Return (exit code, JSON report, plain summary)."""
    c = args.command
    if c == "gen":
        try:
            q = comb.gen_surface_quiver(args.kind, args.genus)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        text = serialize_quiver(q)
        return OK, {"quiver": text, "signature": [len(q.vertices), len(q.arrows)]}, text.rstrip()
    q = _load(args)
    if c == "validate":
        rep = validate_gentle(q)
        finite = rep.ok and not has_full_relation_cycle(q)
        out = {"gentle": rep.ok, "finite_gldim": finite, "violations": rep.violations}
        code = OK if rep.ok else VIOLATION
        return code, out, f"gentle={rep.ok} finite_gldim={finite}"
    if c == "koszul":
        _require_valid(q)
        d = comb.koszul_dual_quiver(q)
        text = serialize_quiver(d)
        return OK, {"quiver": text, **comb.dual_flags(d)}, text.rstrip()
    _require_valid(q)
    if c == "surface":
        inv = surface_invariants(q)
        kind = None if inv.punctures else classify_special(inv, (len(q.vertices), len(q.arrows)))
        out = {**inv.to_dict(), "special": kind}
        g, b, oc, dots, pu = inv.as_tuple()
        return OK, out, f"g={g} b={b} o={oc} dots={dots} punctures={pu}" + (f" {kind}" if kind else "")
    if c == "exists":
        dec = comb.exists_full_exceptional(q)
        return OK, {"exists": dec.value, "reason": dec.reason}, f"exists={dec.value} reason={dec.reason}"
    if c == "cut":
        vs = _vertices(args, q)
        res = comb.cut_collection(q, vs)
        comps = [{"vertices": list(x.vertices), "special": comb.classify_quiver(x)}
                 for x in comb.connected_components(res)]
        text = serialize_quiver(res)
        return OK, {"quiver": text, "components": comps}, text.rstrip()
    if c == "complete":
        vs = _vertices(args, q)
        ok, bad = comb.can_complete(q, vs)
        return OK, {"can_complete": ok, "offending": bad}, f"can_complete={ok}" + (f" {bad}" if bad else "")
    seq = _sequence(args, q)
    if c == "seed":
        return OK, {"valid": True, "full": seq.full, "sequence": seq.to_json()}, f"{len(seq)} stalks"
    if c == "mutate":
        w = _word(args.word)
        res = apply_word(seq, w)
        return OK, {"word": str(w), "sequence": res.to_json()}, "\n".join(repr(x) for x in res)
    if c == "dual":
        fn = right_dual if args.side == "right" else left_dual
        res = fn(seq, trials=args.trials, seed=args.seed)
        return OK, {"side": args.side, "sequence": res.to_json()}, "\n".join(repr(x) for x in res)
    if c == "serre-check":
        rep = serre_check(seq, trials=args.trials, seed=args.seed)
        code = OK if rep.passed else VIOLATION
        out = {**rep.to_dict(), "seed": args.seed}
        return code, out, f"passed={rep.passed} components={rep.components}"
    if c == "orbit":
        rep = orbit_explore(seq, max_nodes=args.max, rng_seed=args.seed, trials=args.trials)
        code = VIOLATION if rep.quarantined else OK
        return code, rep.to_dict(), f"closed={rep.closed} size={rep.size}"
    if c == "presilting-shift":
        shifts = presilting_shift(seq.objects)
        return OK, {"shifts": shifts}, " ".join(map(str, shifts))
    if c == "verify-braid":
        out = verify_braid(seq, args.trials, args.seed, args.words, args.length)
        code = OK if out["passed"] else VIOLATION
        return code, out, f"passed={out['passed']} checks={len(out['checks'])}"
    raise InputError(f"unknown command {c}")


def _relation_pairs(n: int) -> list[tuple[str, list[int], list[int]]]:
    pairs = []
    for i in range(1, n):
        pairs.append((f"inverse {i}", [i, -i], []))
        pairs.append((f"inverse {-i}", [-i, i], []))
    for i in range(1, n - 1):
        pairs.append((f"braid {i}", [i, i + 1, i], [i + 1, i, i + 1]))
    for i in range(1, n):
        for j in range(i + 2, n):
            pairs.append((f"commute {i},{j}", [i, j], [j, i]))
    return pairs


def random_words(n: int, count: int, length: int, seed: int) -> list[list[int]]:
    if n < 2:
        return []
    rng = np.random.default_rng(seed)
    words = []
    for _ in range(count):
        idx = rng.integers(1, n, size=length)
        signs = rng.choice([-1, 1], size=length)
        words.append([int(i * s) for i, s in zip(idx, signs)])
    return words


def verify_braid(seq: ExceptionalSequence, trials: int = 20, seed: int = 0, words: int = 20,
                 length: int = 6) -> dict:
    n = len(seq)
    checks = []
    for name, lhs, rhs in _relation_pairs(n):
        a = apply_word(seq, lhs)
        b = apply_word(seq, rhs)
        checks.append({"check": name, "verdict": summarize(componentwise_iso(a.objects, b.objects, trials, seed))})
    for w in random_words(n, words, length, seed):
        word = BraidWord.parse(" ".join(map(str, w)))
        back = apply_word(apply_word(seq, word), word.inverse())
        checks.append({"check": f"word {word}", "verdict":
                       summarize(componentwise_iso(back.objects, seq.objects, trials, seed))})
    verdicts = [c["verdict"] for c in checks]
    return {
        "passed": all(v == ISOMORPHIC for v in verdicts),
        "undetermined": sum(v == UNDETERMINED for v in verdicts),
        "checks": checks,
        "seed": seed,
    }


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, report, plain = run_command(args)
    except (InputError, QuiverError, ComplexError, MutationError, comb.PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except (BraidInvariantError, SurfaceError) as exc:
        print(json.dumps({"violation": str(exc)}))
        return VIOLATION
    if args.plain:
        print(plain)
    else:
        print(json.dumps(report, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
