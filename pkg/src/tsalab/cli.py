"""Command-line front end.  Every command is a thin adapter over the
library with a stable, line-oriented output format:

    result blocks are `key=value` lines; trace tables are four columns
    (Transition | State | Tree stack | Input read) with the tree stack in
    its canonical text rendering.

Exit codes for run/trace: 0 accept, 1 reject, 2 budget cut.  The env var
TSALAB_MAX_STEPS overrides the default step budget.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import analysis, convert, fixtures, langlab, mcfg
from .treestack import format_address, parse_address, render_tree_stack
from .tsa import (
    BudgetExceeded,
    RunTrace,
    SearchOptions,
    Tsa,
    accepts,
    degree,
    enumerate_words,
    is_standardised,
    normalize_child_indices,
    parse_tsa,
    render_tsa,
    replay,
    standardise,
    step,
    visited_from_below_counts,
)

FIXTURE_TSAS = {
    "abcd": fixtures.abcd_tsa,
    "anbmcndm": fixtures.anbmcndm_tsa,
    "updown": fixtures.updown_demo_tsa,
    "astar": fixtures.astar_tsa,
    "wpz": convert.fixture_wpz_tsa,
    "ks": convert.fixture_ks_tsa,
}


def load_tsa(source: str) -> Tsa:
    """A machine argument is a file path or a built-in fixture name."""
    p = Path(source)
    if p.exists():
        return parse_tsa(p.read_text())
    if source in FIXTURE_TSAS:
        return FIXTURE_TSAS[source]()
    raise SystemExit(f"error: no such file or fixture: {source}")


def search_options(args) -> SearchOptions:
    max_steps = getattr(args, "max_steps", None)
    if max_steps is None and os.environ.get("TSALAB_MAX_STEPS"):
        max_steps = int(os.environ["TSALAB_MAX_STEPS"])
    return SearchOptions(
        k=getattr(args, "k", None),
        accept_mode=getattr(args, "accept_mode", "root"),
        max_steps=max_steps,
        max_vertices=getattr(args, "max_vertices", None),
        proper_only=getattr(args, "proper", False),
    )


def describe_options(opts: SearchOptions, word_len: int, tsa: Tsa) -> list[str]:
    from .tsa import default_max_steps, default_max_vertices

    steps = opts.max_steps if opts.max_steps is not None else default_max_steps(tsa, word_len)
    verts = opts.max_vertices if opts.max_vertices is not None else default_max_vertices(word_len)
    return [
        f"k={opts.k if opts.k is not None else 'none'}",
        f"accept_mode={opts.accept_mode}",
        f"max_steps={steps}",
        f"max_vertices={verts}",
        f"proper_only={str(opts.proper_only).lower()}",
    ]


def trace_table(trace: RunTrace) -> str:
    rows = [("Transition", "State", "Tree stack", "Input read")]
    rows.append(("-", trace.initial.state, render_tree_stack(trace.initial.ts), "-"))
    for tidx, cfg in trace.steps:
        t = trace.tsa.delta[tidx]
        read = t.inp if t.inp is not None else "eps"
        rows.append((trace.tsa.transition_display(tidx), cfg.state,
                     render_tree_stack(cfg.ts), read))
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    lines = []
    for r in rows:
        lines.append(" | ".join(r[i].ljust(widths[i]) for i in range(4)).rstrip())
    return "\n".join(lines)


def emit(args, human: str | None, block: list[str]):
    if not getattr(args, "porcelain", False) and human:
        print(human)
    for line in block:
        print(line)


# ---------------------------------------------------------------------------
# commands

def cmd_run(args) -> int:
    tsa = load_tsa(args.machine)
    opts = search_options(args)
    res = accepts(tsa, args.word, opts)
    block = [f"command=run", f"word={args.word}"] + describe_options(opts, len(args.word), tsa)
    if res:
        block.append("result=accept")
        block.append("steps=" + " ".join(res.names()))
        counts = visited_from_below_counts(res)
        block.append("max_vfb=" + str(max(counts.values(), default=0)))
        emit(args, f"accept ({len(res)} steps)", block)
        if args.trace:
            print(trace_table(res))
        return 0
    block.append(f"result=reject:{res.reason}")
    emit(args, f"reject ({res.reason})", block)
    return 2 if res.reason == "budget" else 1


def cmd_trace(args) -> int:
    tsa = load_tsa(args.machine)
    if args.follow:
        # replay a named transition sequence instead of searching; show
        # where it jams if it does
        names = args.follow.split(",")
        by_name = {t.name: i for i, t in enumerate(tsa.delta) if t.name}
        try:
            idxs = [by_name[n] for n in names]
        except KeyError as e:
            raise SystemExit(f"error: unknown transition name {e}")
        tr = replay(tsa, args.word, idxs)
        print(trace_table(tr))
        final = tr.final()
        applicable = []
        for t in tsa.delta:
            try:
                step(tsa, args.word, final, t)
                applicable.append(t.name or "?")
            except Exception:
                pass
        done = final.pos == len(args.word) and final.state in tsa.finals
        if not applicable and not done:
            print(f"STUCK state={final.state} pointer={format_address(final.ts.pointer)} "
                  f"label={final.ts.pointer_label} pos={final.pos}")
        return 0 if done else 1
    opts = search_options(args)
    res = accepts(tsa, args.word, opts)
    if res:
        print(trace_table(res))
        return 0
    print(f"result=reject:{res.reason}")
    return 2 if res.reason == "budget" else 1


def cmd_enumerate(args) -> int:
    tsa = load_tsa(args.machine)
    opts = search_options(args)
    try:
        words = enumerate_words(tsa, args.max_len, opts)
        budget = []
    except BudgetExceeded as e:
        words, budget = e.words, e.budget_words
    block = (["command=enumerate", f"max_len={args.max_len}"]
             + describe_options(opts, args.max_len, tsa))
    block += [f"word={w if w else 'eps'}" for w in sorted(words, key=lambda w: (len(w), w))]
    if budget:
        block.append("budget_hit=" + " ".join(budget[:20]))
    emit(args, f"{len(words)} word(s)", block)
    return 1 if budget else 0


def cmd_standardise(args) -> int:
    tsa = load_tsa(args.machine)
    out = standardise(tsa)
    if not args.porcelain:
        print(f"# was standardised: {str(is_standardised(tsa)).lower()}; "
              f"added {len(out.delta) - len(tsa.delta)} transition(s)")
    print(render_tsa(out), end="")
    return 0


def cmd_degree(args) -> int:
    tsa = load_tsa(args.machine)
    d = degree(tsa)
    block = ["command=degree",
             "delta_set=" + " ".join(str(i) for i in sorted(d.delta_set)),
             f"degree={d.value}"]
    emit(args, f"degree {d.value}", block)
    if args.normalize:
        print(render_tsa(normalize_child_indices(tsa)), end="")
    return 0


def cmd_mcfg(args) -> int:
    g = mcfg.parse_mcfg(Path(args.grammar).read_text())
    if args.mcfg_cmd == "enumerate":
        words = mcfg.mcfg_enumerate(g, args.max_len)
        block = ["command=mcfg.enumerate", f"max_len={args.max_len}"]
        block += [f"word={w if w else 'eps'}" for w in sorted(words, key=lambda w: (len(w), w))]
        emit(args, f"{len(words)} word(s)", block)
        return 0
    if args.mcfg_cmd == "member":
        ok = mcfg.mcfg_member(g, args.word)
        emit(args, "member" if ok else "not a member",
             ["command=mcfg.member", f"word={args.word}", f"result={'yes' if ok else 'no'}"])
        return 0 if ok else 1
    if args.mcfg_cmd == "empty":
        prod = mcfg.productive_nonterminals(g)
        empty = g.start not in prod
        block = ["command=mcfg.empty",
                 "productive=" + " ".join(sorted(prod)),
                 f"result={'empty' if empty else 'nonempty'}"]
        emit(args, "empty" if empty else "nonempty", block)
        return 0
    raise SystemExit("unknown mcfg command")


def _witness(tsa, word, args):
    opts = search_options(args)
    opts = SearchOptions(k=opts.k, accept_mode="root", max_steps=opts.max_steps,
                         max_vertices=opts.max_vertices, proper_only=True)
    res = accepts(tsa, word, opts)
    if not res:
        raise SystemExit(f"error: no proper witness run for {word!r} ({res.reason})")
    return res


def cmd_analyze(args) -> int:
    tsa = load_tsa(args.machine)
    sub = args.analyze_cmd
    if sub in ("updown", "factorise", "history"):
        trace = _witness(tsa, args.word, args)
        nu = parse_address(args.vertex)
        block = [f"command=analyze.{sub}", f"word={args.word}", f"vertex={args.vertex}"]
        if sub == "updown":
            udv = analysis.up_down_vector(trace, nu)
            block.append("updown=" + " ".join(str(i) for i in udv.flat()))
        elif sub == "factorise":
            f = analysis.nu_factorisation(trace, nu)
            block.append(f"w0={f.w0 or 'eps'}")
            for j, (u, w) in enumerate(f.parts, start=1):
                block.append(f"u{j}={u or 'eps'}")
                block.append(f"w{j}={w or 'eps'}")
        else:
            h = analysis.history_array(trace, nu)
            block.append("labels=" + " ".join(h.labels))
            block.append("states=" + " ".join(h.states))
        emit(args, None, block)
        return 0
    if sub == "level1":
        trace = _witness(tsa, args.word, args)
        l1 = analysis.level1_arrays(trace)
        block = ["command=analyze.level1", f"word={args.word}",
                 "l=" + " ".join(map(str, l1.ls)),
                 "m=" + " ".join(map(str, l1.ms)),
                 "n=" + " ".join(map(str, l1.ns)),
                 f"w0={l1.factorisation.w0 or 'eps'}"]
        for j, (u, w) in enumerate(l1.factorisation.parts, start=1):
            block.append(f"u{j}={u or 'eps'}")
            block.append(f"w{j}={w or 'eps'}")
        block.append("labels=" + " ".join(l1.history_labels))
        block.append("states=" + " ".join(l1.history_states))
        block.append("children=" + " ".join(map(str, l1.history_children)))
        emit(args, None, block)
        return 0
    if sub == "upsets":
        words = Path(args.words_file).read_text().split()
        ups = analysis.collect_upsets(tsa, words, search_options(args))
        block = ["command=analyze.upsets", f"words={len(words)}"]
        for h in sorted(ups.entries, key=lambda h: (h.s, h.labels, h.states)):
            tuples = sorted(ups.entries[h])
            block.append(f"array=({' '.join(h.labels)} | {' '.join(h.states)})")
            block.append(f"  tuples={len(tuples)} max_total_len="
                         f"{max(sum(map(len, t)) for t in tuples)}")
            for t in tuples[: args.show]:
                block.append("  u=(" + ", ".join(x or "eps" for x in t) + ")")
        if ups.budget_failures:
            block.append("budget_failures=" + " ".join(ups.budget_failures))
        emit(args, f"{len(ups.entries)} distinct history array(s)", block)
        return 0
    if sub == "swap":
        t1 = _witness(tsa, args.word1, args)
        t2 = _witness(tsa, args.word2, args)
        rep = analysis.single_swap(t1, parse_address(args.vertex1),
                                   t2, parse_address(args.vertex2))
        block = ["command=analyze.swap",
                 f"word={rep.word}",
                 f"accepted={'yes' if rep.accepted else 'no:' + (rep.search_reason or '')}",
                 f"splice_replay={'ok' if rep.spliced_replay_ok else 'failed'}"]
        emit(args, f"swapped word {rep.word}", block)
        return 0 if rep.accepted else 1
    if sub == "pump":
        trace = _witness(tsa, args.word, args)
        res = analysis.find_pumpable(trace, args.m)
        block = ["command=analyze.pump", f"word={args.word}", f"m={args.m}"]
        if res is None:
            block.append("result=none")
        else:
            block += [f"x={res.x or 'eps'}", f"y={res.y or 'eps'}", f"z={res.z or 'eps'}",
                      f"vertex={format_address(res.vertex)}",
                      "verified=" + " ".join(f"{n}:{'yes' if ok else 'no'}"
                                             for n, ok in sorted(res.verified.items()))]
        emit(args, None, block)
        return 0
    if sub == "bounds":
        trace = _witness(tsa, args.word, args)
        rep = analysis.check_atv_bounds(trace, args.mu)
        block = ["command=analyze.bounds", f"word={args.word}", f"mu={args.mu}", f"k={rep.k}"]
        for row in rep.vertices:
            block.append(f"vertex={format_address(row.vertex)} kind={row.kind} "
                         f"letters={row.letters} bound={row.bound} "
                         f"ok={'yes' if row.ok else 'no'}")
        block.append(f"all_ok={'yes' if rep.all_ok else 'no'}")
        emit(args, None, block)
        return 0 if rep.all_ok else 1
    raise SystemExit("unknown analyze command")


def cmd_convert(args) -> int:
    if args.convert_cmd == "pda2tsa":
        pda = convert.parse_pda(Path(args.file).read_text())
        print(render_tsa(convert.pda_to_tsa1(pda, root_drain=args.root_drain)), end="")
        return 0
    if args.convert_cmd == "tsa2pda":
        tsa = load_tsa(args.file)
        print(convert.render_pda(convert.tsa1_to_pda(tsa)), end="")
        return 0
    raise SystemExit("unknown convert command")


def cmd_fixtures(args) -> int:
    if args.name == "wpz" and args.pda:
        print(convert.render_pda(convert.fixture_wpz_pda()), end="")
        return 0
    if args.name not in FIXTURE_TSAS:
        raise SystemExit(f"error: unknown fixture {args.name!r}")
    print(render_tsa(FIXTURE_TSAS[args.name]()), end="")
    return 0


def cmd_experiment(args) -> int:
    if args.experiment_cmd == "f2f2":
        rep = langlab.f2f2_experiment(args.n_max, args.m_max)
        block = ["command=experiment.f2f2",
                 f"n_max={rep.n_max}", f"m_max={rep.m_max}",
                 f"words={rep.total}", f"members={rep.members}",
                 f"mismatches={len(rep.mismatches)}",
                 f"psi_image_exact={'yes' if rep.psi_image == rep.psi_expected else 'no'}",
                 f"result={'pass' if rep.ok else 'fail'}"]
        emit(args, "pass" if rep.ok else "fail", block)
        return 0 if rep.ok else 1
    if args.experiment_cmd == "gaps":
        family = args.family
        alpha = None
        if family.startswith("alpha:"):
            family, alpha = "alpha", float(args.family.split(":", 1)[1])
        lengths = langlab.unary_lengths(family, args.n, alpha=alpha)
        rep = langlab.gap_check(lengths, args.m_max)
        block = ["command=experiment.gaps", f"family={args.family}",
                 f"samples={len(lengths)}", f"m_max={args.m_max}",
                 f"verdict={rep.verdict}"]
        emit(args, rep.verdict, block)
        return 0
    if args.experiment_cmd in ("sm", "ambm"):
        if args.experiment_cmd == "sm":
            # pump all 2m+1 letters of S_m in lockstep: v takes the odd-index
            # letters, s the even ones, the last v going unpaired
            orc = langlab.oracle("s_m", m=args.m)
            k = args.m + 1
            v = [orc.alphabet[2 * j] for j in range(k)]
            s = [orc.alphabet[2 * j + 1] if 2 * j + 1 < len(orc.alphabet) else "" for j in range(k)]
            u = [""] * (k + 1)
            w = [""] * k
        else:
            # seed at ab, pump both block letters together
            orc = langlab.oracle("ambm_n")
            u, v, w, s = ["a", ""], ["a"], ["b"], ["b"]
        rep = analysis.weak_pump_verify(orc, u, v, w, s, args.i_max)
        block = [f"command=experiment.{args.experiment_cmd}",
                 f"i_max={args.i_max}",
                 f"result={'pass' if rep.all_ok else 'fail'}"]
        for i, word, ok in rep.results:
            block.append(f"i={i} word={word if word else 'eps'} member={'yes' if ok else 'no'}")
        emit(args, "pass" if rep.all_ok else "fail", block)
        return 0 if rep.all_ok else 1
    raise SystemExit("unknown experiment")


def cmd_rational(args) -> int:
    wp = load_tsa(args.wp)
    fsa = langlab.regex_to_fsa(args.regex, wp.alphabet)
    pairing = langlab.WPZ_ALPHABET if set(wp.alphabet) == {"t", "T"} else None
    if pairing is None:
        raise SystemExit("error: only the t/T group alphabet is built in; "
                         "supply a wp machine over t T")
    ans = langlab.rational_membership(wp, fsa, args.word, pairing, max_len=args.budget)
    block = ["command=rational", f"word={args.word}", f"regex={args.regex}",
             f"budget={args.budget}", f"verdict={ans.verdict}"]
    if ans.witness is not None:
        block.append(f"witness={ans.witness}")
    if ans.reason:
        block.append(f"reason={ans.reason}")
    emit(args, ans.verdict, block)
    return 0 if ans.verdict == "yes" else 1


def cmd_suite(args) -> int:
    from . import suites

    ok = suites.run_suite(args.name)
    return 0 if ok else 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tsalab", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--porcelain", action="store_true",
                   help="machine-readable output only")
    sub = p.add_subparsers(dest="cmd", required=True)

    def add_search_flags(sp, word=True):
        if word:
            sp.add_argument("--word", required=True)
        sp.add_argument("--k", type=int, default=None)
        sp.add_argument("--accept-mode", dest="accept_mode",
                        choices=("root", "any"), default="root")
        sp.add_argument("--max-steps", dest="max_steps", type=int, default=None)
        sp.add_argument("--max-vertices", dest="max_vertices", type=int, default=None)
        sp.add_argument("--proper", action="store_true")

    sp = sub.add_parser("run", help="search for an accepting run")
    sp.add_argument("machine")
    add_search_flags(sp)
    sp.add_argument("--trace", action="store_true")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("trace", help="print the witness run as a table")
    sp.add_argument("machine")
    add_search_flags(sp)
    sp.add_argument("--follow", default=None,
                    help="comma-separated transition names to replay instead of searching")
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("enumerate", help="all accepted words up to a length")
    sp.add_argument("machine")
    sp.add_argument("--max-len", type=int, required=True)
    add_search_flags(sp, word=False)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("standardise", help="close delta under stationary composition")
    sp.add_argument("machine")
    sp.set_defaults(func=cmd_standardise)

    sp = sub.add_parser("degree", help="push index set and degree")
    sp.add_argument("machine")
    sp.add_argument("--normalize", action="store_true")
    sp.set_defaults(func=cmd_degree)

    sp = sub.add_parser("mcfg", help="grammar operations")
    msub = sp.add_subparsers(dest="mcfg_cmd", required=True)
    me = msub.add_parser("enumerate")
    me.add_argument("grammar")
    me.add_argument("--max-len", type=int, required=True)
    me.set_defaults(func=cmd_mcfg)
    mm = msub.add_parser("member")
    mm.add_argument("grammar")
    mm.add_argument("--word", required=True)
    mm.set_defaults(func=cmd_mcfg)
    mp = msub.add_parser("empty")
    mp.add_argument("grammar")
    mp.set_defaults(func=cmd_mcfg)

    sp = sub.add_parser("analyze", help="run analysis")
    asub = sp.add_subparsers(dest="analyze_cmd", required=True)
    for name in ("updown", "factorise", "history"):
        ap = asub.add_parser(name)
        ap.add_argument("machine")
        add_search_flags(ap)
        ap.add_argument("--vertex", required=True)
        ap.set_defaults(func=cmd_analyze)
    ap = asub.add_parser("level1")
    ap.add_argument("machine")
    add_search_flags(ap)
    ap.set_defaults(func=cmd_analyze)
    ap = asub.add_parser("upsets")
    ap.add_argument("machine")
    ap.add_argument("--words-file", dest="words_file", required=True)
    ap.add_argument("--show", type=int, default=5)
    add_search_flags(ap, word=False)
    ap.set_defaults(func=cmd_analyze)
    ap = asub.add_parser("swap")
    ap.add_argument("machine")
    ap.add_argument("--word1", required=True)
    ap.add_argument("--vertex1", required=True)
    ap.add_argument("--word2", required=True)
    ap.add_argument("--vertex2", required=True)
    add_search_flags(ap, word=False)
    ap.set_defaults(func=cmd_analyze)
    ap = asub.add_parser("pump")
    ap.add_argument("machine")
    add_search_flags(ap)
    ap.add_argument("--m", type=int, default=1)
    ap.set_defaults(func=cmd_analyze)
    ap = asub.add_parser("bounds")
    ap.add_argument("machine")
    add_search_flags(ap)
    ap.add_argument("--mu", type=int, default=1)
    ap.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("convert", help="PDA <-> 1-TSA translations")
    csub = sp.add_subparsers(dest="convert_cmd", required=True)
    cp = csub.add_parser("pda2tsa")
    cp.add_argument("file")
    cp.add_argument("--root-drain", action="store_true")
    cp.set_defaults(func=cmd_convert)
    ct = csub.add_parser("tsa2pda")
    ct.add_argument("file")
    ct.set_defaults(func=cmd_convert)

    sp = sub.add_parser("fixtures", help="print a built-in machine")
    sp.add_argument("name", choices=sorted(FIXTURE_TSAS) + ["wpz"])
    sp.add_argument("--pda", action="store_true", help="wpz: print the PDA instead")
    sp.set_defaults(func=cmd_fixtures)

    sp = sub.add_parser("experiment", help="reproducible experiment bundles")
    esub = sp.add_subparsers(dest="experiment_cmd", required=True)
    ef = esub.add_parser("f2f2")
    ef.add_argument("--n-max", dest="n_max", type=int, default=3)
    ef.add_argument("--m-max", dest="m_max", type=int, default=3)
    ef.set_defaults(func=cmd_experiment)
    eg = esub.add_parser("gaps")
    eg.add_argument("--family", required=True,
                    help="pow2 | square | nlogn | alpha:<a>")
    eg.add_argument("--n", type=int, default=30)
    eg.add_argument("--m-max", dest="m_max", type=int, default=50)
    eg.set_defaults(func=cmd_experiment)
    for name in ("sm", "ambm"):
        ex = esub.add_parser(name)
        if name == "sm":
            ex.add_argument("--m", type=int, default=2)
        ex.add_argument("--i-max", dest="i_max", type=int, default=5)
        ex.set_defaults(func=cmd_experiment)

    sp = sub.add_parser("rational", help="bounded rational-subset membership")
    sp.add_argument("--wp", required=True, help="word-problem machine (file or fixture)")
    sp.add_argument("--regex", required=True)
    sp.add_argument("--word", required=True)
    sp.add_argument("--budget", type=int, default=12)
    sp.set_defaults(func=cmd_rational)

    sp = sub.add_parser("suite", help="named acceptance bundles")
    sp.add_argument("name")
    sp.set_defaults(func=cmd_suite)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
