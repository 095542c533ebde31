"""Command-line front end with deterministic, machine-readable reports.

Exit codes: 0 all requested checks pass, 1 a check failed, 2 the request
could not be parsed, 3 an internal invariant was violated.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

from . import codes, decoding, freegroup, presets, returns, words
from .iet import parse_iet
from .morphisms import FixedPointSpec, Morphism, factor_set_of_fixed_point
from .words import FactorSet

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE_ERROR = 2
EXIT_INTERNAL = 3


class ParseFailure(Exception):
    pass


def schema_text() -> str:
    return (resources.files("factorlab") / "schemas" / "report.schema.json"
            ).read_text()


def _sorted_words(ws) -> list[str]:
    return sorted(ws, key=lambda w: (len(w), w))


def load_set(args) -> FactorSet:
    depth = args.depth
    if depth is not None and depth < 1:
        raise ParseFailure("depth must be >= 1")
    if getattr(args, "preset", None):
        try:
            return presets.preset_set(args.preset, depth or 16)
        except KeyError as exc:
            raise ParseFailure(str(exc)) from exc
    if getattr(args, "morphism", None):
        try:
            m = Morphism.parse(args.morphism)
            seed = args.seed or m.source[0]
            return factor_set_of_fixed_point(FixedPointSpec(m, seed),
                                             depth or 16)
        except (ValueError, Exception) as exc:
            if isinstance(exc, ParseFailure):
                raise
            raise ParseFailure(f"bad morphism: {exc}") from exc
    if getattr(args, "iet", None):
        try:
            t = parse_iet(args.iet, minimal=getattr(args, "minimal", False))
            return t.factor_set(depth or 16)
        except (KeyError, ValueError, ZeroDivisionError) as exc:
            raise ParseFailure(f"bad interval exchange: {exc}") from exc
    if getattr(args, "file", None):
        try:
            with open(args.file) as fh:
                data = json.load(fh)
            return FactorSet(data["alphabet"], data["depth"],
                             frozenset(data["words"]),
                             complete=data.get("complete", False),
                             source=data.get("source", "file"))
        except (OSError, KeyError, ValueError) as exc:
            raise ParseFailure(f"bad set file: {exc}") from exc
    raise ParseFailure("no source given: use --preset/--morphism/--iet/--file")


def parse_code(text: str) -> set[str]:
    out = {w.strip() for w in text.split(",") if w.strip()}
    if not out:
        raise ParseFailure("empty code")
    return out


def emit(report: dict, args) -> int:
    if getattr(args, "format", "json") == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for k, v in sorted(report["data"].items()):
            print(f"{k}: {v}")
    return EXIT_OK if report["ok"] else EXIT_CHECK_FAILED


def _verdict_dict(v: words.Verdict) -> dict:
    return {"ok": v.ok, "bound": v.bound, "witness": v.witness,
            "reason": v.reason}


# ---------------------------------------------------------------------------
# subcommands


def cmd_generate(args) -> int:
    s = load_set(args)
    report = {"subcommand": "generate", "ok": True, "data": s.to_json_dict()}
    return emit(report, args)


def cmd_analyze(args) -> int:
    s = load_set(args)
    checks = [c.strip() for c in (args.check or "tree").split(",") if c.strip()]
    up_to = args.up_to if args.up_to is not None else max(s.depth - 2, 0)
    data: dict = {"depth": s.depth, "alphabet": s.alphabet,
                  "complete": s.complete}
    ok = True
    for c in checks:
        if c == "tree":
            v = words.is_tree_set(s, up_to)
        elif c == "acyclic":
            v = words.is_acyclic_set(s, up_to)
        elif c == "recurrence":
            v = words.is_recurrent_desk(s, min(up_to, s.depth // 3))
        elif c == "uniform-recurrence":
            v = returns.uniform_recurrence_check(s, min(up_to, s.depth // 4))
        elif c == "complexity":
            data["complexity"] = [s.complexity(n) for n in range(s.depth + 1)]
            continue
        elif c == "factorial":
            good = s.check_factorial()
            data["factorial"] = good
            ok = ok and good
            continue
        else:
            raise ParseFailure(f"unknown check {c!r}")
        data[c] = _verdict_dict(v)
        ok = ok and v.ok
    return emit({"subcommand": "analyze", "ok": ok, "data": data}, args)


def cmd_returns(args) -> int:
    s = load_set(args)
    rd = returns.return_words(s, args.word)
    data = {
        "word": args.word,
        "gamma": _sorted_words(rd.gamma),
        "first_returns": _sorted_words(rd.first_returns),
        "certificate": {"complete": rd.complete,
                        "forcing_length": rd.forcing_length},
    }
    if args.derive and rd.complete:
        ds = returns.derived_set(s, args.word)
        data["coding"] = ds.coding.format_rules()
        data["derived_depth"] = ds.factor_set.depth
        data["derived_words"] = _sorted_words(ds.factor_set.words)
    return emit({"subcommand": "returns", "ok": rd.complete, "data": data},
                args)


def cmd_code(args) -> int:
    data: dict = {"action": args.action}
    ok = True
    if args.action == "check":
        X = parse_code(args.code)
        data.update(code=_sorted_words(X),
                    prefix=codes.is_prefix_code(X),
                    suffix=codes.is_suffix_code(X),
                    bifix=codes.is_bifix_code(X),
                    uniquely_decodable=codes.is_code(X))
        if args.preset or args.morphism or args.iet or args.file:
            s = load_set(args)
            data["s_maximal_bifix"] = codes.is_s_maximal_bifix(X, s)
        ok = data["uniquely_decodable"]
    elif args.action == "degree":
        X = parse_code(args.code)
        s = load_set(args)
        data.update(code=_sorted_words(X), degree=codes.s_degree(X, s),
                    kernel=_sorted_words(codes.kernel(X, s)))
    elif args.action == "compose":
        f = Morphism.parse(args.with_coding)
        Y = parse_code(args.code)
        data.update(y=_sorted_words(Y), coding=f.format_rules(),
                    composed=_sorted_words(codes.compose_codes(Y, f)))
    elif args.action == "decompose":
        X = parse_code(args.code)
        Z = parse_code(args.over)
        Y, f = codes.decompose_over(X, Z)
        if Y is None:
            data.update(decomposes=False, reason=f)
            ok = False
        else:
            data.update(decomposes=True, y=_sorted_words(Y),
                        coding=f.format_rules())
    elif args.action == "groupcode":
        phi = parse_group_morphism(args.phi)
        s = load_set(args)
        if args.regular:
            phi = phi.regular()
        X, certified = codes.group_code_intersection(phi, s)
        aut = phi.group_automaton()
        data.update(code=_sorted_words(X), certified=certified,
                    automaton_states=aut.n_states,
                    automaton_complete=aut.is_group_automaton())
        ok = certified
    else:
        raise ParseFailure(f"unknown code action {args.action!r}")
    return emit({"subcommand": "code", "ok": ok, "data": data}, args)


def parse_group_morphism(text: str) -> codes.GroupMorphism:
    """Parse 'a=1,0,2; b=2,1,0' into letter permutations (0-based images)."""
    letters = []
    images = []
    try:
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            lhs, _, rhs = chunk.partition("=")
            letters.append(lhs.strip())
            images.append(tuple(int(x) for x in rhs.split(",")))
    except ValueError as exc:
        raise ParseFailure(f"bad permutations: {exc}") from exc
    n = {len(p) for p in images}
    if len(n) != 1 or any(sorted(p) != list(range(len(p))) for p in images):
        raise ParseFailure("images must be permutations of 0..n-1 of one size")
    return codes.GroupMorphism("".join(letters), tuple(images))


def cmd_fg(args) -> int:
    ws = parse_code(args.words)
    alphabet = args.alphabet or "".join(sorted({c.lower() for w in ws for c in w}))
    data: dict = {"action": args.action, "words": _sorted_words(ws)}
    ok = True
    g = freegroup.fold(ws, alphabet)
    if args.action == "fold":
        data.update(vertices=g.n_vertices, rank=g.rank, complete=g.complete,
                    rose=g.is_rose())
        if args.format == "dot":
            print(g.to_dot())
            return EXIT_OK
    elif args.action == "index":
        data.update(vertices=g.n_vertices, rank=g.rank, index=g.index,
                    complete=g.complete)
        ok = g.complete
    elif args.action == "basis":
        ok = freegroup.is_basis(ws, alphabet)
        data.update(basis=ok, vertices=g.n_vertices, rank=g.rank)
    elif args.action == "tame":
        td = freegroup.tame_decompose(ws, alphabet)
        data.update(verdict=td.verdict,
                    steps=[{"kind": side, "a": a, "b": b}
                           for side, a, b in td.steps])
        if td.verdict == "tame":
            data["permutation"] = td.permutation.format_rules()
            replay = td.replay()
            data["replay_matches"] = sorted(replay.images) == sorted(ws)
            ok = data["replay_matches"]
        else:
            data["stuck_at"] = list(td.stuck_at)
            ok = False
    else:
        raise ParseFailure(f"unknown fg action {args.action!r}")
    return emit({"subcommand": "fg", "ok": ok, "data": data}, args)


def _code_for_decode(args, s: FactorSet) -> set[str]:
    if args.code:
        return parse_code(args.code)
    if args.code_length:
        return set(s.of_length(args.code_length))
    raise ParseFailure("need --code or --code-length")


def cmd_decode(args) -> int:
    s = load_set(args)
    Z = _code_for_decode(args, s)
    dec = decoding.max_bifix_decode(s, Z)
    data = {"code": _sorted_words(Z), "coding": dec.coding.format_rules(),
            "decoded": dec.factor_set.to_json_dict()}
    return emit({"subcommand": "decode", "ok": True, "data": data}, args)


def cmd_verify(args) -> int:
    s = load_set(args)
    data: dict = {"action": args.action}
    if args.action == "tree-closure":
        Z = _code_for_decode(args, s)
        res = decoding.verify_decoding_closure(s, Z)
        data.update(code=_sorted_words(Z),
                    decoded_depth=res["decoded"].factor_set.depth,
                    tree=_verdict_dict(res["tree"]),
                    uniform_recurrence=_verdict_dict(res["uniform_recurrence"]))
        ok = res["tree"].ok and res["uniform_recurrence"].ok
    elif args.action == "degree-mult":
        X = parse_code(args.code)
        Z = parse_code(args.over)
        res = decoding.degree_multiplicativity(s, X, Z)
        data.update(d_x=res["d_x"], d_z=res["d_z"],
                    decomposes=res["decomposes"])
        if res["decomposes"]:
            data.update(d_y=res["d_y"], y=_sorted_words(res["y"]),
                        multiplicative=res["multiplicative"])
            ok = res["multiplicative"]
        else:
            data["reason"] = res["reason"]
            ok = False
    else:
        raise ParseFailure(f"unknown verify action {args.action!r}")
    return emit({"subcommand": "verify", "ok": ok, "data": data}, args)


def _source_for_sadic(args) -> decoding.SetSource:
    if args.preset:
        name = args.preset
        return decoding.SetSource(lambda d: presets.preset_set(name, d),
                                  presets.preset_set(name, 2).alphabet, name)
    if args.morphism:
        m = Morphism.parse(args.morphism)
        seed = args.seed or m.source[0]
        return decoding.SetSource(
            lambda d: factor_set_of_fixed_point(FixedPointSpec(m, seed), d),
            m.source, "morphism")
    raise ParseFailure("sadic needs a regenerable source "
                       "(--preset or --morphism)")


def cmd_sadic(args) -> int:
    src = _source_for_sadic(args)
    rep = decoding.sadic_extract(src, args.steps)
    data: dict = {
        "action": args.action,
        "steps": [{"letter": st.letter, "rules": st.coding.format_rules(),
                   "basis": st.basis, "tame": st.tame}
                  for st in rep.steps],
    }
    ok = all(st.basis and st.tame for st in rep.steps)
    if args.action == "replay":
        depth = args.replay_depth
        regenerated = decoding.sadic_replay(rep, depth)
        reference = src.at(depth)
        match = regenerated.words == reference.words
        data.update(replay_depth=depth, replay_matches=match)
        ok = ok and match
    prim = decoding.sequence_primitivity(rep)
    data["primitive_prefix"] = _verdict_dict(prim)
    return emit({"subcommand": "sadic", "ok": ok, "data": data}, args)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="factorlab",
        description="Workbench for truncated factor sets: generation, "
                    "structure checks, return words, bifix codes, free-group "
                    "certificates and adic representations.")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def add_source(sp, depth_default=None):
        sp.add_argument("--preset")
        sp.add_argument("--morphism")
        sp.add_argument("--seed")
        sp.add_argument("--iet")
        sp.add_argument("--minimal", action="store_true")
        sp.add_argument("--file")
        sp.add_argument("--depth", type=int, default=depth_default)
        sp.add_argument("--format", choices=["json", "text", "dot"],
                        default="json")

    sp = sub.add_parser("generate", help="emit a truncated factor set")
    add_source(sp)
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("analyze", help="run structure checks")
    add_source(sp)
    sp.add_argument("--check", default="tree",
                    help="comma list: tree,acyclic,recurrence,"
                         "uniform-recurrence,complexity,factorial")
    sp.add_argument("--up-to", type=int)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("returns", help="return words to a word")
    add_source(sp)
    sp.add_argument("--word", required=True)
    sp.add_argument("--derive", action="store_true",
                    help="also emit the derived set")
    sp.set_defaults(func=cmd_returns)

    sp = sub.add_parser("code", help="bifix-code computations")
    sp.add_argument("action",
                    choices=["check", "degree", "compose", "decompose",
                             "groupcode"])
    add_source(sp)
    sp.add_argument("--code", help="comma-separated words")
    sp.add_argument("--over", help="inner code for decompose")
    sp.add_argument("--with-coding", help="coding rules for compose")
    sp.add_argument("--phi", help="letter permutations 'a=1,0;b=0,1'")
    sp.add_argument("--regular", action="store_true",
                    help="use the regular representation of phi")
    sp.set_defaults(func=cmd_code)

    sp = sub.add_parser("fg", help="free-group computations")
    sp.add_argument("action", choices=["fold", "index", "basis", "tame"])
    sp.add_argument("--words", required=True, help="comma-separated words; "
                    "uppercase letters denote inverses")
    sp.add_argument("--alphabet")
    sp.add_argument("--format", choices=["json", "text", "dot"],
                    default="json")
    sp.set_defaults(func=cmd_fg)

    sp = sub.add_parser("decode", help="maximal bifix decoding")
    add_source(sp)
    sp.add_argument("--code")
    sp.add_argument("--code-length", type=int)
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("verify", help="closure and degree harnesses")
    sp.add_argument("action", choices=["tree-closure", "degree-mult"])
    add_source(sp)
    sp.add_argument("--code")
    sp.add_argument("--code-length", type=int)
    sp.add_argument("--over")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sadic", help="adic representation extraction")
    sp.add_argument("action", choices=["extract", "replay"])
    sp.add_argument("--preset")
    sp.add_argument("--morphism")
    sp.add_argument("--seed")
    sp.add_argument("--steps", type=int, default=6)
    sp.add_argument("--replay-depth", type=int, default=8)
    sp.add_argument("--format", choices=["json", "text"], default="json")
    sp.set_defaults(func=cmd_sadic)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors already; normalize everything else
        return EXIT_PARSE_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ParseFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE_ERROR
    except (words.DepthExceededError, words.NotAMemberError,
            words.IncompleteSetError, codes.NotBifixError,
            codes.InsufficientDepthError,
            decoding.NotMaximalBifixError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARSE_ERROR
    except AssertionError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
