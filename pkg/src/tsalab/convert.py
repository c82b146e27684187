"""Pushdown automata and the two translations between PDAs and 1-TSAs
(tree stack automata with no up instruction), plus the integer word
problem fixtures and the stuck-run regression machine.

Box labels: the tree vertex recording that the simulated stack top is
``g`` is labelled ``[g]``; plain stack symbols keep their own names.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .treestack import (
    PRED_TRUE,
    ROOT_LABEL,
    instr_down,
    instr_id,
    instr_push,
    pred_eq,
)
from .tsa import (
    NotFound,
    ParseError,
    Transition,
    Tsa,
)

BOTTOM = "@"


class NotOneTsa(Exception):
    """The source automaton has an up transition, so it is not a 1-TSA."""


@dataclass(frozen=True)
class PdaAction:
    """push(z, s): applicable when the top is z, pushes s (None = nothing).
    pop(t): applicable when the top is t, removes it.  t and s never equal
    the bottom symbol."""

    kind: str  # "push" | "pop"
    top: str
    pushed: str | None = None  # only for push; None means s = eps

    def __post_init__(self):
        if self.kind not in ("push", "pop"):
            raise ValueError(f"bad action kind {self.kind!r}")
        if self.kind == "pop" and self.top == BOTTOM:
            raise ValueError("pop never targets the bottom symbol")
        if self.kind == "push" and self.pushed == BOTTOM:
            raise ValueError("push never adds the bottom symbol")

    def __str__(self):
        if self.kind == "pop":
            return f"pop {self.top}"
        s = self.pushed if self.pushed is not None else "-"
        return f"push {self.top} {s}"


@dataclass(frozen=True)
class PdaTransition:
    src: str
    inp: str | None
    action: PdaAction
    dst: str
    name: str | None = None

    def core(self):
        return (self.src, self.inp, self.action, self.dst)


@dataclass(frozen=True)
class Pda:
    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    stack: tuple[str, ...]  # Gamma without the implicit bottom symbol
    initial: str
    delta: tuple[PdaTransition, ...]
    finals: frozenset[str]

    def __post_init__(self):
        states = set(self.states)
        gamma = set(self.stack) | {BOTTOM}
        if self.initial not in states or not self.finals <= states:
            raise ValueError("undeclared initial or final state")
        for t in self.delta:
            if t.src not in states or t.dst not in states:
                raise ValueError(f"undeclared endpoint in {t}")
            if t.inp is not None and t.inp not in self.alphabet:
                raise ValueError(f"input {t.inp!r} not in alphabet")
            if t.action.top not in gamma:
                raise ValueError(f"stack symbol {t.action.top!r} not declared")
            if t.action.pushed is not None and t.action.pushed not in gamma:
                raise ValueError(f"stack symbol {t.action.pushed!r} not declared")


@dataclass(frozen=True)
class PdaConfig:
    state: str
    stack: tuple[str, ...]  # bottom first; stack[0] == @ always
    pos: int


@dataclass
class PdaTrace:
    pda: Pda
    word: str
    steps: list[tuple[int, PdaConfig]]
    initial: PdaConfig

    def transition_indices(self):
        return [i for i, _ in self.steps]

    def final(self) -> PdaConfig:
        return self.steps[-1][1] if self.steps else self.initial


def pda_initial(pda: Pda) -> PdaConfig:
    return PdaConfig(pda.initial, (BOTTOM,), 0)


def pda_step(pda: Pda, w: str, cfg: PdaConfig, t: PdaTransition) -> PdaConfig | None:
    """Apply one transition, or None if it is not applicable."""
    if cfg.state != t.src:
        return None
    if t.inp is not None and (cfg.pos >= len(w) or w[cfg.pos] != t.inp):
        return None
    top = cfg.stack[-1]
    act = t.action
    if act.top != top:
        return None
    if act.kind == "pop":
        stack = cfg.stack[:-1]
    else:
        stack = cfg.stack if act.pushed is None else cfg.stack + (act.pushed,)
    return PdaConfig(t.dst, stack, cfg.pos + (0 if t.inp is None else 1))


def pda_accepts(pda: Pda, w: str, max_steps: int | None = None,
                max_stack: int | None = None) -> PdaTrace | NotFound:
    """BFS acceptance search mirroring the TSA engine's contract:
    deterministic given delta order, shortest witness, NotFound carries
    "budget" or "exhausted"."""
    if max_steps is None:
        max_steps = 64 * (len(w) + 1) * max(1, len(pda.states))
    if max_stack is None:
        max_stack = 16 * (len(w) + 1)
    init = pda_initial(pda)

    def accepting(cfg):
        return cfg.pos == len(w) and cfg.state in pda.finals

    if accepting(init):
        return PdaTrace(pda, w, [], init)
    nodes = [(init, -1, -1)]
    visited = {init}
    frontier = [0]
    depth = 0
    cut = False
    while frontier:
        if depth >= max_steps:
            cut = True
            break
        depth += 1
        nxt_frontier = []
        for ni in frontier:
            cfg = nodes[ni][0]
            for tidx, t in enumerate(pda.delta):
                nxt = pda_step(pda, w, cfg, t)
                if nxt is None or nxt in visited:
                    continue
                if len(nxt.stack) > max_stack:
                    cut = True
                    continue
                visited.add(nxt)
                nodes.append((nxt, ni, tidx))
                me = len(nodes) - 1
                if accepting(nxt):
                    steps = []
                    idx = me
                    while idx > 0:
                        c, parent, ti = nodes[idx]
                        steps.append((ti, c))
                        idx = parent
                    steps.reverse()
                    return PdaTrace(pda, w, steps, init)
                nxt_frontier.append(me)
        frontier = nxt_frontier
    return NotFound("budget" if cut else "exhausted")


def box(symbol: str) -> str:
    """Tree label recording that the simulated stack top is `symbol`."""
    return f"[{symbol}]"


def tsa1_to_pda(tsa: Tsa) -> Pda:
    """Translate a 1-TSA into a PDA over Gamma = C + bottom.

    eq/true x push/down/set/id each expand per the eight scheme rules; a
    set becomes a pop into a tagged intermediate state followed by
    eps-pushes.  Transitions whose predicate pins the root label but whose
    instruction needs a non-root pointer can never fire and are dropped.
    """
    if any(t.instr.kind == "up" for t in tsa.delta):
        raise NotOneTsa("source automaton contains an up transition")
    gamma = tuple(tsa.labels) + (BOTTOM,)
    nonbottom = tuple(tsa.labels)

    out: list[PdaTransition] = []
    seen = set()
    extra_states: list[str] = []

    def tag(q, z):
        name = f"{q}^({z})"
        if name not in extra_states:
            extra_states.append(name)
        return name

    def emit(t):
        if t.core() not in seen:
            seen.add(t.core())
            out.append(t)

    for t in tsa.delta:
        kind = t.instr.kind
        if t.pred.kind == "eq":
            zs = (t.pred.label,)
        elif kind in ("down", "set"):
            zs = nonbottom
        else:
            zs = gamma
        for z in zs:
            if kind == "push":
                emit(PdaTransition(t.src, t.inp, PdaAction("push", z, t.instr.label), t.dst))
            elif kind == "down":
                if z == BOTTOM:
                    continue  # down with the pointer at the root never fires
                emit(PdaTransition(t.src, t.inp, PdaAction("pop", z), t.dst))
            elif kind == "set":
                if z == BOTTOM:
                    continue  # set at the root never fires
                mid = tag(t.dst, z)
                emit(PdaTransition(t.src, t.inp, PdaAction("pop", z), mid))
                for y in gamma:
                    emit(PdaTransition(mid, None, PdaAction("push", y, t.instr.label), t.dst))
            else:  # id
                emit(PdaTransition(t.src, t.inp, PdaAction("push", z, None), t.dst))

    return Pda(
        states=tuple(tsa.states) + tuple(extra_states),
        alphabet=tuple(tsa.alphabet),
        stack=nonbottom,
        initial=tsa.initial,
        delta=tuple(out),
        finals=tsa.finals,
    )


def pda_to_tsa1(pda: Pda, root_drain: bool = False) -> Tsa:
    """Translate a PDA into a 1-TSA simulating it on a branching tree.

    The output never contains an up instruction.  With root_drain=True a
    down/id drain is appended after the finals so acceptance happens at
    the root (the any-mode language is unchanged).
    """
    gamma = tuple(pda.stack) + (BOTTOM,)
    labels = tuple(pda.stack) + tuple(box(g) for g in gamma)
    collisions = set(pda.stack) & {box(g) for g in gamma}
    if collisions:
        raise ValueError(f"stack symbols collide with box labels: {collisions}")

    extra_states: list[str] = []

    def tag(q, suffix):
        name = f"{q}^({suffix})"
        if name not in extra_states:
            extra_states.append(name)
        return name

    out: list[Transition] = []
    seen = set()

    def emit(t):
        if t.core() not in seen:
            seen.add(t.core())
            out.append(t)

    emit(Transition(pda.initial, None, pred_eq(ROOT_LABEL),
                    instr_push(1, box(BOTTOM)), pda.initial, name="s0"))

    for pidx, t in enumerate(pda.delta, start=1):
        act = t.action
        if act.kind == "push" and act.pushed is not None:
            z, s = act.top, act.pushed
            up_ = tag(t.src, "u")
            st_ = tag(t.src, s)
            emit(Transition(t.src, t.inp, pred_eq(box(z)), instr_push(1, s), up_,
                            name=f"p{pidx}.1"))
            emit(Transition(up_, None, pred_eq(s), instr_push(1, box(s)), t.dst,
                            name=f"p{pidx}.2"))
            emit(Transition(t.src, t.inp, pred_eq(box(z)), instr_push(2, box(z)), st_,
                            name=f"p{pidx}.3"))
            emit(Transition(st_, None, pred_eq(box(z)), instr_push(1, s), up_,
                            name=f"p{pidx}.4"))
        elif act.kind == "pop":
            y = act.top
            dn = tag(t.src, "d")
            emit(Transition(t.src, t.inp, pred_eq(box(y)), instr_down(), dn,
                            name=f"p{pidx}.5"))
            emit(Transition(dn, None, pred_eq(box(y)), instr_down(), dn,
                            name=f"p{pidx}.6"))
            emit(Transition(dn, None, pred_eq(y), instr_down(), t.dst,
                            name=f"p{pidx}.7"))
        else:  # push(z, eps)
            emit(Transition(t.src, t.inp, pred_eq(box(act.top)), instr_id(), t.dst,
                            name=f"p{pidx}.*"))

    tsa = Tsa(
        states=tuple(pda.states) + tuple(extra_states),
        labels=labels,
        alphabet=tuple(pda.alphabet),
        initial=pda.initial,
        delta=tuple(out),
        finals=pda.finals,
    )
    if root_drain:
        from .tsa import make_root_accepting

        tsa = make_root_accepting(tsa)
    return tsa


def simulation_run(pda: Pda, tsa: Tsa, ptrace: PdaTrace) -> tuple[list[int], list[tuple[str, str]]]:
    """Build the step-for-step simulation of a PDA trace on the translated
    machine, per the construction: a push goes via the two-transition
    ladder when the child slot is free and via the sidestep triple when an
    earlier pop left it occupied; a pop descends through box vertices.

    Returns the delta indices and, per simulated PDA step, the pair
    (pointer label afterwards, box of the simulated stack top), which the
    locality invariant requires to be equal."""
    from .tsa import initial_configuration, step as tsa_step

    by_core = {t.core(): i for i, t in enumerate(tsa.delta)}

    def tag(q, suffix):
        return f"{q}^({suffix})"

    def apply(cfg, src, inp, pred, instr, dst):
        idx = by_core[(src, inp, pred, instr, dst)]
        return tsa_step(tsa, ptrace.word, cfg, tsa.delta[idx]), idx

    cfg = initial_configuration(tsa)
    out: list[int] = []
    cfg, idx = apply(cfg, pda.initial, None, pred_eq(ROOT_LABEL),
                     instr_push(1, box(BOTTOM)), pda.initial)
    out.append(idx)
    checkpoints: list[tuple[str, str]] = []
    for (tidx, pcfg) in ptrace.steps:
        t = pda.delta[tidx]
        act = t.action
        if act.kind == "push" and act.pushed is not None:
            z, s = act.top, act.pushed
            up_, st_ = tag(t.src, "u"), tag(t.src, s)
            if cfg.ts.pointer + (1,) not in cfg.ts.dom:
                steps = [(t.src, t.inp, pred_eq(box(z)), instr_push(1, s), up_)]
            else:
                # an earlier pop stranded a vertex in the child-1 slot;
                # sidestep through child 2 before climbing
                steps = [(t.src, t.inp, pred_eq(box(z)), instr_push(2, box(z)), st_),
                         (st_, None, pred_eq(box(z)), instr_push(1, s), up_)]
            steps.append((up_, None, pred_eq(s), instr_push(1, box(s)), t.dst))
            for args in steps:
                cfg, idx = apply(cfg, *args)
                out.append(idx)
        elif act.kind == "pop":
            y = act.top
            dn = tag(t.src, "d")
            cfg, idx = apply(cfg, t.src, t.inp, pred_eq(box(y)), instr_down(), dn)
            out.append(idx)
            while cfg.ts.pointer_label == box(y):
                cfg, idx = apply(cfg, dn, None, pred_eq(box(y)), instr_down(), dn)
                out.append(idx)
            cfg, idx = apply(cfg, dn, None, pred_eq(y), instr_down(), t.dst)
            out.append(idx)
        else:  # push(z, eps)
            cfg, idx = apply(cfg, t.src, t.inp, pred_eq(box(act.top)), instr_id(), t.dst)
            out.append(idx)
        checkpoints.append((cfg.ts.pointer_label, box(pcfg.stack[-1])))
    return out, checkpoints


# ---------------------------------------------------------------------------
# fixtures


def fixture_wpz_pda() -> Pda:
    """PDA for the word problem of the integers over {t, T}."""
    A = PdaAction
    delta = (
        PdaTransition("q", "t", A("push", "@", "t"), "q", name="t@"),
        PdaTransition("q", "t", A("push", "t", "t"), "q", name="tt"),
        PdaTransition("q", "T", A("push", "@", "T"), "q", name="T@"),
        PdaTransition("q", "T", A("push", "T", "T"), "q", name="TT"),
        PdaTransition("q", "t", A("pop", "T"), "q", name="popT"),
        PdaTransition("q", "T", A("pop", "t"), "q", name="popt"),
        PdaTransition("q", None, A("push", "@", None), "qf", name="fin"),
    )
    return Pda(("q", "qf"), ("t", "T"), ("t", "T"), "q", delta, frozenset({"qf"}))


WPZ_NAMES = [
    "s0",
    "s'1@", "s'2", "s'3@", "s'4@",
    "s'1t", "s'3t", "s'4t",
    "s''1@", "s''2", "s''3@", "s''4@",
    "s''1T", "s''3T", "s''4T",
    "s'5", "s'6", "s'7",
    "s''5", "s''6", "s''7",
    "s'f", "s''f",
]


def fixture_wpz_tsa() -> Tsa:
    """The 1-TSA for WP(Z) from the translation, with the final eps-push
    replaced by the root-returning pair so that acceptance happens at the
    root pointing at @."""
    pda = fixture_wpz_pda()
    trimmed = replace(pda, delta=pda.delta[:-1])  # drop the final eps-push
    base = pda_to_tsa1(trimmed)
    delta = list(base.delta)
    delta.append(Transition("q", None, pred_eq(box(BOTTOM)), instr_down(), "q"))
    delta.append(Transition("q", None, pred_eq(ROOT_LABEL), instr_id(), "qf"))
    states = tuple(base.states) + ("qf",)
    tsa = Tsa(states, base.labels, base.alphabet, base.initial,
              tuple(delta), frozenset({"qf"}))
    named = tuple(replace(t, name=WPZ_NAMES[i]) for i, t in enumerate(tsa.delta))
    return replace(tsa, delta=named)


def fixture_ks_tsa() -> Tsa:
    """The earlier literature's 1-TSA for WP(Z), with noteq expanded into
    its three eq variants.  Its natural stack simulation jams on ttTtTT
    (see ks_stuck_prefix)."""
    T = Transition
    BOX = "&"
    delta = (
        T("S", "t", pred_eq("t"), instr_push(1, BOX), "qt", name="s1.t"),
        T("S", "t", pred_eq("@"), instr_push(1, BOX), "qt", name="s1.@"),
        T("S", "t", pred_eq(BOX), instr_push(1, BOX), "qt", name="s1.&"),
        T("qt", None, PRED_TRUE, instr_push(2, "t"), "S", name="s2"),
        T("S", "T", pred_eq("T"), instr_push(1, BOX), "qT", name="s3.T"),
        T("S", "T", pred_eq("@"), instr_push(1, BOX), "qT", name="s3.@"),
        T("S", "T", pred_eq(BOX), instr_push(1, BOX), "qT", name="s3.&"),
        T("qT", None, PRED_TRUE, instr_push(2, "T"), "S", name="s4"),
        T("S", None, pred_eq(BOX), instr_down(), "S", name="s5"),
        T("S", "t", pred_eq("T"), instr_down(), "S", name="s6"),
        T("S", "T", pred_eq("t"), instr_down(), "S", name="s7"),
        T("S", None, pred_eq("@"), instr_id(), "qf", name="s8"),
    )
    return Tsa(
        states=("S", "qt", "qT", "qf"),
        labels=("t", "T", BOX),
        alphabet=("t", "T"),
        initial="S",
        delta=delta,
        finals=frozenset({"qf"}),
    )


KS_STUCK_PREFIX = ["s1.@", "s2", "s1.t", "s2", "s7", "s5"]


def ks_stuck_prefix(tsa: Tsa | None = None) -> list[int]:
    """Delta indices of the six-transition prefix that jams the stack
    simulation on ttTtTT (the published stuck-run table)."""
    tsa = tsa or fixture_ks_tsa()
    by_name = {t.name: i for i, t in enumerate(tsa.delta)}
    return [by_name[n] for n in KS_STUCK_PREFIX]


# ---------------------------------------------------------------------------
# PDA file format


def parse_pda(text: str) -> Pda:
    """Parse the line-based PDA file format; '-' in a push means s = eps."""
    states: list[str] = []
    stack: list[str] = []
    alphabet: list[str] = []
    initial = None
    finals: list[str] = []
    raw_trans = []
    saw_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        comment = None
        if "#" in raw:
            raw, comment = raw.split("#", 1)
            comment = comment.strip() or None
        line = raw.strip()
        if not line:
            continue
        if not saw_header:
            if line != "pda":
                raise ParseError("expected 'pda' header", lineno)
            saw_header = True
            continue
        if ":" not in line:
            raise ParseError(f"expected 'key: ...', got {line!r}", lineno)
        key, rest = line.split(":", 1)
        key = key.strip()
        toks = rest.split()
        if key == "states":
            states.extend(toks)
        elif key == "initial":
            if len(toks) != 1:
                raise ParseError("initial takes one state", lineno)
            initial = toks[0]
        elif key == "final":
            finals.extend(toks)
        elif key == "stack":
            if BOTTOM in toks:
                raise ParseError("@ is implicit in the stack alphabet", lineno)
            stack.extend(toks)
        elif key == "alphabet":
            for tok in toks:
                if len(tok) != 1:
                    raise ParseError(f"alphabet letters must be single characters, got {tok!r}", lineno)
            alphabet.extend(toks)
        elif key == "trans":
            raw_trans.append((lineno, toks, comment))
        else:
            raise ParseError(f"unknown section {key!r}", lineno)
    if not saw_header:
        raise ParseError("missing 'pda' header", 1)
    if initial is None:
        raise ParseError("missing initial state", 1)

    state_set = set(states)
    gamma = set(stack) | {BOTTOM}
    delta = []
    for lineno, toks, name in raw_trans:
        if len(toks) < 4:
            raise ParseError("transition needs: src input action dst", lineno)
        src, inp_tok = toks[0], toks[1]
        dst = toks[-1]
        if src not in state_set or dst not in state_set:
            raise ParseError(f"unknown state in {' '.join(toks)!r}", lineno)
        inp = None if inp_tok == "eps" else inp_tok
        if inp is not None and inp not in alphabet:
            raise ParseError(f"input letter {inp!r} not in alphabet", lineno)
        act_toks = toks[2:-1]
        if act_toks[0] == "push" and len(act_toks) == 3:
            z, s = act_toks[1], act_toks[2]
            if z not in gamma:
                raise ParseError(f"unknown stack symbol {z!r}", lineno)
            pushed = None if s == "-" else s
            if pushed is not None and pushed not in gamma:
                raise ParseError(f"unknown stack symbol {s!r}", lineno)
            action = PdaAction("push", z, pushed)
        elif act_toks[0] == "pop" and len(act_toks) == 2:
            tsym = act_toks[1]
            if tsym not in gamma:
                raise ParseError(f"unknown stack symbol {tsym!r}", lineno)
            action = PdaAction("pop", tsym)
        else:
            raise ParseError(f"bad action {' '.join(act_toks)!r}", lineno)
        delta.append(PdaTransition(src, inp, action, dst, name=name))
    return Pda(tuple(states), tuple(alphabet), tuple(stack), initial,
               tuple(delta), frozenset(finals))


def render_pda(pda: Pda) -> str:
    lines = ["pda"]
    lines.append("states: " + " ".join(pda.states))
    lines.append("initial: " + pda.initial)
    lines.append("final: " + " ".join(sorted(pda.finals)))
    lines.append("stack: " + " ".join(pda.stack))
    lines.append("alphabet: " + " ".join(pda.alphabet))
    for t in pda.delta:
        inp = t.inp if t.inp is not None else "eps"
        line = f"trans: {t.src} {inp} {t.action} {t.dst}"
        if t.name:
            line += f"  # {t.name}"
        lines.append(line)
    return "\n".join(lines) + "\n"
